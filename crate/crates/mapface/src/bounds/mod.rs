//! Harmonic numbers, the face-count bounds for random embeddings of `K_n`,
//! and the inductive table `β(n)`.

mod beta;
mod terms;

pub use beta::{beta_table, BetaEntry, BetaTable, Provenance, ALEPH_MULTIPLIER, BETA_N_MAX};
pub use terms::{
    ek2_upper, h_tail, mk_exact, mk_upper, ok_tail, pf_mean_upper, s_terms, BoundParams, SMode, STerms,
};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Multiplicative guard applied to every floating-point upper bound.
pub const UPPER_GUARD: f64 = 1.0 + 1e-12;

/// Exact `H_n`.
pub fn harmonic(n: usize) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 1..=n {
        acc += BigRational::new(BigInt::one(), BigInt::from(j));
    }
    acc
}

/// `H_0 ..= H_{n_max}` in f64, summed with Neumaier compensation so each
/// entry is within about one ulp of the true value.
#[derive(Debug, Clone)]
pub struct Harmonics {
    h: Vec<f64>,
}

impl Harmonics {
    pub fn new(n_max: usize) -> Self {
        let mut h = Vec::with_capacity(n_max + 1);
        h.push(0.0);
        let (mut sum, mut c) = (0.0f64, 0.0f64);
        for j in 1..=n_max {
            let x = 1.0 / j as f64;
            let t = sum + x;
            if sum.abs() >= x.abs() {
                c += (sum - t) + x;
            } else {
                c += (x - t) + sum;
            }
            sum = t;
            h.push(sum + c);
        }
        Harmonics { h }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn h(&self, n: usize) -> f64 {
        self.h[n]
    }

    /// `q(ξ, t)` for `K_n`; the border case `ξ + t = n − 1` adds 1 instead
    /// of subtracting `H_0`.
    pub fn q(&self, xi: usize, t: usize, n: usize) -> Result<f64> {
        check_q(xi, t, n)?;
        if xi + t == n - 1 {
            Ok(self.h(n - xi - 2) + 1.0)
        } else {
            Ok(self.h(n - xi - 2) - self.h(n - xi - t - 2))
        }
    }

    pub fn logsq_upper(&self, n: usize) -> Result<f64> {
        if n < 4 {
            return Err(Error::Domain(format!("logsq bound needs n >= 4, got {n}")));
        }
        let (h2, h3) = (self.h(n - 2), self.h(n - 3));
        let nf = n as f64;
        let v = 1.0 + h2 + nf / (nf - 2.0) * h3 * (h2 - 1.0) - (nf - 3.0) / (nf - 2.0) * h3;
        Ok(v * UPPER_GUARD)
    }
}

pub fn harmonic_f64(n: usize) -> f64 {
    Harmonics::new(n).h(n)
}

/// DeTemple's window `ln(n + 1/2) + γ + [1/(24(n+1)²), 1/(24n²)]`. At
/// `n = 0` only the lower end is meaningful; the upper end is `+∞`.
pub fn harmonic_window(n: usize) -> (f64, f64) {
    let nf = n as f64;
    let base = (nf + 0.5).ln() + EULER_GAMMA;
    let lo = base + 1.0 / (24.0 * (nf + 1.0) * (nf + 1.0));
    let hi = if n == 0 {
        f64::INFINITY
    } else {
        base + 1.0 / (24.0 * nf * nf)
    };
    (lo, hi)
}

/// Reference lines `(n + ln n, n ln n)`.
pub fn stahl_bounds(n: f64) -> Result<(f64, f64)> {
    if !(n >= 1.0) {
        return Err(Error::Domain(format!("n must be >= 1, got {n}")));
    }
    Ok((n + n.ln(), n * n.ln()))
}

fn check_q(xi: usize, t: usize, n: usize) -> Result<()> {
    if t < 1 || t >= n || xi + t > n - 1 {
        return Err(Error::Domain(format!(
            "q(ξ={xi}, t={t}) undefined for n={n}: need 1 <= t < n and ξ + t <= n − 1"
        )));
    }
    Ok(())
}

pub fn q(xi: usize, t: usize, n: usize) -> Result<f64> {
    check_q(xi, t, n)?;
    Harmonics::new(n).q(xi, t, n)
}

pub fn q_exact(xi: usize, t: usize, n: usize) -> Result<BigRational> {
    check_q(xi, t, n)?;
    if xi + t == n - 1 {
        Ok(harmonic(n - xi - 2) + BigRational::one())
    } else {
        Ok(harmonic(n - xi - 2) - harmonic(n - xi - t - 2))
    }
}

pub fn logsq_upper(n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::Domain(format!("logsq bound needs n >= 4, got {n}")));
    }
    Harmonics::new(n).logsq_upper(n)
}

/// `q̂(t)`: `ln((νn − 3/2)/(νn − 3/2 − t))` below `νn − 2`, `ln(2t + 1)` from there on.
pub fn q_hat(t: f64, n: usize, nu: f64) -> f64 {
    let vn = nu * n as f64;
    if t <= vn - 2.0 {
        ((vn - 1.5) / (vn - 1.5 - t)).ln()
    } else {
        (2.0 * t + 1.0).ln()
    }
}

pub fn f_of(t: f64, n: usize, nu: f64) -> f64 {
    q_hat(t, n, nu) / (t * t)
}

/// `½ ln n − 2`.
pub fn lower_bound(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("lower bound needs n >= 3, got {n}")));
    }
    Ok(0.5 * (n as f64).ln() - 2.0)
}

/// Exact expected number of faces of `K_n` with `k` distinct vertices and
/// `k` distinct edges: `(1/k) · n(n−1)⋯(n−k+1) / (n−2)^k`.
pub fn short_face_expectation(n: usize, k: usize) -> Result<BigRational> {
    if k < 3 || k > n {
        return Err(Error::Domain(format!("need 3 <= k <= n, got n={n}, k={k}")));
    }
    let falling = (0..k).fold(BigInt::one(), |a, i| a * BigInt::from(n - i));
    let den = BigInt::from(k) * num_traits::pow(BigInt::from(n - 2), k);
    Ok(BigRational::new(falling, den))
}

/// Piecewise envelope for `n ≥ 4158`, given `ln n` so that the top range is
/// representable: `23 ln n` below `e³⁰`, `5 ln n` below `e^{e¹⁶}`, then `3.65 ln n`.
pub fn asymptotic_upper_ln(ln_n: f64) -> Result<f64> {
    if ln_n < 4158f64.ln() {
        return Err(Error::Domain("asymptotic envelope starts at n = 4158".into()));
    }
    let c = if ln_n < 30.0 {
        23.0
    } else if ln_n < 16f64.exp() {
        5.0
    } else {
        3.65
    };
    Ok(c * ln_n)
}

pub fn asymptotic_upper(n: f64) -> Result<f64> {
    asymptotic_upper_ln(n.ln())
}
