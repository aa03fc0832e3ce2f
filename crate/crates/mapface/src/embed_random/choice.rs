//! Random choices behind a trait so the same process code can either sample
//! or walk its whole finite choice tree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

pub trait Chooser {
    /// Uniform index in `0..options`; `options ≥ 1`.
    fn choose(&mut self, options: usize) -> usize;
}

pub struct RngChooser<'a, R: Rng + ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> Chooser for RngChooser<'_, R> {
    fn choose(&mut self, options: usize) -> usize {
        if options == 1 {
            0
        } else {
            self.0.random_range(0..options)
        }
    }
}

/// Replays a fixed prefix of choices, then always picks 0, recording every
/// decision.
#[derive(Default)]
pub struct ReplayChooser {
    prefix: Vec<usize>,
    trail: Vec<(usize, usize)>,
}

impl Chooser for ReplayChooser {
    fn choose(&mut self, options: usize) -> usize {
        let pos = self.trail.len();
        let c = self.prefix.get(pos).copied().unwrap_or(0);
        debug_assert!(c < options);
        self.trail.push((c, options));
        c
    }
}

/// Run `process` once per leaf of its choice tree. Each result comes with its
/// exact probability (product of `1/options` along the path).
pub fn enumerate_outcomes<T>(mut process: impl FnMut(&mut dyn Chooser) -> T) -> Vec<(T, BigRational)> {
    let mut out = Vec::new();
    let mut prefix: Vec<usize> = Vec::new();
    loop {
        let mut ch = ReplayChooser {
            prefix: std::mem::take(&mut prefix),
            trail: Vec::new(),
        };
        let value = process(&mut ch);
        let mut p = BigRational::one();
        for &(_, k) in &ch.trail {
            p /= BigRational::from_integer(BigInt::from(k));
        }
        out.push((value, p));
        let Some(i) = ch.trail.iter().rposition(|&(c, k)| c + 1 < k) else {
            break;
        };
        prefix = ch.trail[..i].iter().map(|&(c, _)| c).collect();
        prefix.push(ch.trail[i].0 + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn two_level_tree() {
        // first pick among 2; if 0 pick among 3 more
        let leaves = enumerate_outcomes(|c| {
            let a = c.choose(2);
            if a == 0 {
                (a, c.choose(3))
            } else {
                (a, 9)
            }
        });
        assert_eq!(leaves.len(), 4);
        let total = leaves.iter().fold(BigRational::zero(), |s, (_, p)| s + p);
        assert!(total.is_one());
        assert_eq!(leaves[3].0, (1, 9));
    }
}
