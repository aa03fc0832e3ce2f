//! Random embeddings: the uniform sampler, the stepwise processes A and B,
//! and the Monte Carlo harness.

pub mod choice;
mod process_a;
mod process_b;
mod slots;

pub use choice::{enumerate_outcomes, Chooser, RngChooser};
pub use process_a::{process_a, StepClosures};
pub use process_b::{process_b, ProcessTrace, StepObservables};

use crate::combmap::{dart_vertices, CombMap, RotationSystem};
use crate::graph::Graph;
use crate::rng::{substream, TrialRng};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Uniform cyclic order of `darts` (Sattolo), written into `succ`.
pub fn random_cycle<R: Rng + ?Sized>(darts: &[usize], succ: &mut [usize], rng: &mut R) {
    let mut idx: Vec<usize> = (0..darts.len()).collect();
    for i in (1..idx.len()).rev() {
        let j = rng.random_range(0..i);
        idx.swap(i, j);
    }
    for (i, &d) in darts.iter().enumerate() {
        succ[d] = darts[idx[i]];
    }
}

/// Independent uniform rotation at every vertex.
pub fn sample_uniform<R: Rng + ?Sized>(graph: &Graph, rng: &mut R) -> CombMap {
    let mut succ = vec![0usize; graph.num_darts()];
    for darts in graph.darts_by_vertex() {
        random_cycle(&darts, &mut succ, rng);
    }
    let rot = RotationSystem::from_successors(succ, &dart_vertices(graph), graph.n());
    CombMap::new(graph.clone(), rot).expect("uniform sampler builds valid maps")
}

pub fn sample_process_a<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (CombMap, Vec<StepClosures>) {
    process_a(n, &mut RngChooser(rng))
}

pub fn sample_process_b<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (CombMap, ProcessTrace) {
    process_b(n, &mut RngChooser(rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sampler {
    Uniform,
    ProcessA,
    ProcessB,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub ci95: (f64, f64),
    pub seed: u64,
}

impl Estimate {
    /// From exact integer moments.
    pub fn from_sums(sum: u128, sum_sq: u128, trials: u64, seed: u64) -> Self {
        let t = trials as f64;
        let mean = sum as f64 / t;
        let var = if trials > 1 {
            let num = (sum_sq * trials as u128).saturating_sub(sum * sum);
            num as f64 / (t * (t - 1.0))
        } else {
            0.0
        };
        let stderr = (var / t).sqrt();
        Estimate {
            mean,
            stderr,
            trials,
            ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
            seed,
        }
    }

    /// Two-sided interval at the given z (e.g. 3.2905 for 99.9%).
    pub fn interval(&self, z: f64) -> (f64, f64) {
        (self.mean - z * self.stderr, self.mean + z * self.stderr)
    }
}

const CHUNK: u64 = 4096;

/// Run `trial` for `i in 0..trials` on substream `(seed, i)` and aggregate an
/// integer observable. Integer sums make the result independent of the
/// worker count and scheduling.
pub fn monte_carlo<F>(trials: u64, seed: u64, trial: F) -> Estimate
where
    F: Fn(&mut TrialRng) -> u64 + Sync,
{
    assert!(trials >= 1, "need at least one trial");
    let chunks = trials.div_ceil(CHUNK);
    let (sum, sum_sq) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut s = 0u128;
            let mut s2 = 0u128;
            for i in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let x = trial(&mut substream(seed, i)) as u128;
                s += x;
                s2 += x * x;
            }
            (s, s2)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Estimate::from_sums(sum, sum_sq, trials, seed)
}

/// Per-trial (faces, genus) values, in trial order.
pub fn trial_values<F>(trials: u64, seed: u64, trial: F) -> Vec<u64>
where
    F: Fn(&mut TrialRng) -> u64 + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| trial(&mut substream(seed, i)))
        .collect()
}

pub fn sample_with(sampler: Sampler, graph: &Graph, rng: &mut TrialRng) -> CombMap {
    match sampler {
        Sampler::Uniform => sample_uniform(graph, rng),
        Sampler::ProcessA => sample_process_a(graph.n(), rng).0,
        Sampler::ProcessB => sample_process_b(graph.n(), rng).0,
    }
}

/// Monte Carlo estimate of E[F] for `graph`. Processes A and B require a
/// complete graph.
pub fn estimate_expected_faces(graph: &Graph, sampler: Sampler, trials: u64, seed: u64) -> Estimate {
    if sampler != Sampler::Uniform {
        assert!(graph.is_complete() && graph.n() >= 3, "processes A/B run on K_n, n >= 3");
    }
    monte_carlo(trials, seed, |rng| sample_with(sampler, graph, rng).count_faces() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnpReport {
    pub estimate: Estimate,
    pub reference: f64,
    pub ratio: f64,
    pub rejected: u64,
}

/// Faces of uniform embeddings of G(n, p) samples; disconnected samples are
/// counted with the disconnected convention unless `connected_only`.
pub fn gnp_experiment(n: usize, p: f64, trials: u64, seed: u64, connected_only: bool) -> crate::Result<GnpReport> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(crate::Error::Domain(format!("p must lie in (0, 1], got {p}")));
    }
    let rejected = std::sync::atomic::AtomicU64::new(0);
    let est = monte_carlo(trials, seed, |rng| loop {
        let g = Graph::gnp(n, p, rng).expect("p checked above");
        if connected_only && !g.is_connected() {
            rejected.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            continue;
        }
        break sample_uniform(&g, rng).count_faces() as u64;
    });
    let reference = (p * (n * n) as f64).ln();
    Ok(GnpReport {
        ratio: est.mean / reference,
        estimate: est,
        reference,
        rejected: rejected.into_inner(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;
    use std::collections::BTreeMap;

    #[test]
    fn sattolo_uniform_over_cycles() {
        // d = 4: 3! = 6 cyclic orders, exact frequency check over a seeded run
        let darts = [0usize, 1, 2, 3];
        let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        let mut rng = substream(11, 0);
        let trials = 60_000;
        for _ in 0..trials {
            let mut succ = vec![0; 4];
            random_cycle(&darts, &mut succ, &mut rng);
            let mut d = 0;
            for _ in 0..4 {
                d = succ[d];
            }
            assert_eq!(d, 0);
            let mut seen = 1;
            let mut x = succ[0];
            while x != 0 {
                seen += 1;
                x = succ[x];
            }
            assert_eq!(seen, 4, "not a single cycle");
            *counts.entry(succ).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        for &c in counts.values() {
            let expected = trials as f64 / 6.0;
            assert!((c as f64 - expected).abs() < 5.0 * (expected * 5.0 / 6.0).sqrt());
        }
    }

    #[test]
    fn k3_always_two_faces() {
        let g = Graph::complete(3);
        let mut rng = substream(1, 0);
        for _ in 0..50 {
            assert_eq!(sample_uniform(&g, &mut rng).count_faces(), 2);
            assert_eq!(sample_process_a(3, &mut rng).0.count_faces(), 2);
            assert_eq!(sample_process_b(3, &mut rng).0.count_faces(), 2);
        }
    }

    fn distribution(leaves: Vec<(usize, BigRational)>) -> BTreeMap<usize, BigRational> {
        let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (f, p) in leaves {
            let e = out.entry(f).or_insert_with(BigRational::zero);
            *e += p;
        }
        out
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn process_a_choice_tree_n4() {
        let d = distribution(enumerate_outcomes(|c| process_a(4, c).0.count_faces()));
        assert_eq!(d.len(), 2);
        assert_eq!(d[&2], r(14, 16));
        assert_eq!(d[&4], r(2, 16));
    }

    #[test]
    fn process_b_choice_tree_n4() {
        let d = distribution(enumerate_outcomes(|c| process_b(4, c).0.count_faces()));
        assert_eq!(d[&2], r(14, 16));
        assert_eq!(d[&4], r(2, 16));
    }

    #[test]
    fn process_b_choice_tree_n5() {
        let d = distribution(enumerate_outcomes(|c| process_b(5, c).0.count_faces()));
        assert_eq!(d[&1], r(2340, 7776));
        assert_eq!(d[&3], r(4974, 7776));
        assert_eq!(d[&5], r(462, 7776));
    }

    #[test]
    fn first_step_has_at_most_two_active_walks() {
        for (trace, _) in enumerate_outcomes(|c| process_b(4, c).1) {
            let s = trace.step(2).unwrap();
            assert!(s.o + s.pf <= 2);
        }
    }

    #[test]
    fn trace_invariants() {
        for seed in 0..200 {
            let n = 3 + (seed as usize % 6);
            let (map, trace) = sample_process_b(n, &mut substream(seed, 0));
            assert_eq!(trace.total_closed(), map.count_faces());
            for s in &trace.steps {
                assert!(s.o + s.pf <= n - 1);
                assert_eq!(s.o + s.pf == n - 1, s.k == 1);
                assert!(s.faces_closed <= s.pf + usize::from(s.k == 1));
            }
            assert_eq!(trace.steps.last().unwrap().temporary_faces_after, map.count_faces());
        }
    }

    #[test]
    fn estimate_is_deterministic_and_thread_agnostic() {
        let g = Graph::complete(5);
        let a = estimate_expected_faces(&g, Sampler::Uniform, 10_000, 9);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| estimate_expected_faces(&g, Sampler::Uniform, 10_000, 9));
        assert_eq!(a, b);
    }

    #[test]
    fn tree_estimate_is_exact() {
        let g = Graph::new(5, vec![(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let e = estimate_expected_faces(&g, Sampler::Uniform, 1000, 3);
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn gnp_edge_cases() {
        let r = gnp_experiment(2, 1.0, 100, 1, false).unwrap();
        assert_eq!(r.estimate.mean, 1.0);
        assert!(gnp_experiment(5, 0.0, 10, 1, false).is_err());
    }
}
