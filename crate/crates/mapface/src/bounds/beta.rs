use super::terms::{s_terms, BoundParams, SMode, STerms};
use super::{Harmonics, UPPER_GUARD};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

pub const BETA_N_MAX: usize = 4157;
/// Multiplicative constant in the induction hypothesis `E[F(m)] ≤ 5 ln m + ℵ`.
pub const ALEPH_MULTIPLIER: f64 = 5.0;
const MU: f64 = 1.25;
const NU_SEED: f64 = 6.0 / 11.0;
const NU_STEP: f64 = 0.005;
const NU_RADIUS: i32 = 5;
const LOGSQ_UNTIL: usize = 242;

/// Face distributions of `K_2 … K_6`, as (faces, count) pairs.
const EXACT_COUNTS: &[(usize, &[(u64, u64)])] = &[
    (2, &[(1, 1)]),
    (3, &[(2, 1)]),
    (4, &[(2, 14), (4, 2)]),
    (5, &[(1, 2340), (3, 4974), (5, 462)]),
    (6, &[(1, 41_582_592), (3, 124_250_208), (5, 24_613_800), (7, 654_576), (9, 1800)]),
];
const K7_MEAN: f64 = 3.1265;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Exact { rational: String },
    Published,
    Logsq,
    Decomposition {
        nu: f64,
        mu: f64,
        aleph: f64,
        terms: STerms,
        logsq: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaEntry {
    pub n: usize,
    pub beta: f64,
    /// Running `max(0, β(m) − 5 ln m)` over `3 ≤ m ≤ n`.
    pub aleph: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaTable {
    pub nu_step: f64,
    pub nu_radius: i32,
    pub nu_seed: f64,
    pub mu: f64,
    pub entries: Vec<BetaEntry>,
}

impl BetaTable {
    pub fn n_max(&self) -> usize {
        self.entries.last().map_or(1, |e| e.n)
    }

    pub fn entry(&self, n: usize) -> Option<&BetaEntry> {
        n.checked_sub(2).and_then(|i| self.entries.get(i))
    }

    pub fn beta(&self, n: usize) -> Option<f64> {
        self.entry(n).map(|e| e.beta)
    }

    /// `β` indexed by `n`; entries 0 and 1 are NaN.
    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![f64::NAN; 2];
        v.extend(self.entries.iter().map(|e| e.beta));
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

fn exact_mean(counts: &[(u64, u64)]) -> BigRational {
    let total: u64 = counts.iter().map(|c| c.1).sum();
    let weighted: u64 = counts.iter().map(|c| c.0 * c.1).sum();
    BigRational::new(BigInt::from(weighted), BigInt::from(total))
}

fn nu_candidates(center: f64) -> Vec<f64> {
    (-NU_RADIUS..=NU_RADIUS)
        .map(|i| center + i as f64 * NU_STEP)
        .filter(|&v| v > 0.5 && v < 1.0)
        .collect()
}

/// `β(2..=n_max)`: exact values through `n = 7`, the log-square bound
/// through 242, then the least of the log-square bound and the sharp
/// `S₁ + S₂ + S₃ + S₄` over a small `ν` grid around the previous best.
pub fn beta_table(n_max: usize) -> Result<BetaTable> {
    if !(2..=BETA_N_MAX).contains(&n_max) {
        return Err(Error::Domain(format!("β table covers 2..={BETA_N_MAX}, got {n_max}")));
    }
    let harm = Harmonics::new(n_max + 1);
    let mut beta = vec![f64::NAN; 2];
    let mut entries: Vec<BetaEntry> = Vec::with_capacity(n_max);
    let mut aleph = 0.0f64;
    let mut best_nu = NU_SEED;

    for n in 2..=n_max {
        let (value, provenance) = if let Some((_, counts)) = EXACT_COUNTS.iter().find(|c| c.0 == n) {
            let r = exact_mean(counts);
            (
                r.to_f64().expect("finite") * UPPER_GUARD,
                Provenance::Exact { rational: r.to_string() },
            )
        } else if n == 7 {
            (K7_MEAN, Provenance::Published)
        } else if n <= LOGSQ_UNTIL {
            (harm.logsq_upper(n)?, Provenance::Logsq)
        } else {
            let logsq = harm.logsq_upper(n)?;
            let smaller = &beta[..n];
            let runs: Vec<(f64, f64, STerms)> = nu_candidates(best_nu)
                .into_par_iter()
                .map(|nu| {
                    let p = BoundParams::new(nu, MU, aleph).expect("ν inside (1/2, 1)");
                    let t = s_terms(n, &p, smaller, &harm, SMode::Sharp).expect("inputs validated");
                    (t.total(), nu, t)
                })
                .collect();
            let (total, nu, terms) = runs
                .into_iter()
                .reduce(|a, b| if b.0 < a.0 { b } else { a })
                .expect("ν grid is never empty");
            best_nu = nu;
            (
                total.min(logsq),
                Provenance::Decomposition {
                    nu,
                    mu: MU,
                    aleph,
                    terms,
                    logsq,
                },
            )
        };
        if n >= 3 {
            aleph = aleph.max(value - ALEPH_MULTIPLIER * (n as f64).ln());
        }
        beta.push(value);
        entries.push(BetaEntry {
            n,
            beta: value,
            aleph,
            provenance,
        });
    }
    Ok(BetaTable {
        nu_step: NU_STEP,
        nu_radius: NU_RADIUS,
        nu_seed: NU_SEED,
        mu: MU,
        entries,
    })
}
