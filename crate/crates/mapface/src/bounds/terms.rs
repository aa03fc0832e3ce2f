use super::{f_of, Harmonics, EULER_GAMMA, UPPER_GUARD};
use crate::error::{Error, Result};
use serde::Serialize;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    pub nu: f64,
    pub mu: f64,
    /// Additive constant `ℵ` with `E[F(m)] ≤ 5 ln m + ℵ` for all smaller `m`.
    pub aleph: f64,
}

impl BoundParams {
    pub fn new(nu: f64, mu: f64, aleph: f64) -> Result<Self> {
        if !(nu > 0.5 && nu < 1.0) {
            return Err(Error::Domain(format!("ν must lie in (1/2, 1), got {nu}")));
        }
        if !(1.0..=3.0).contains(&mu) {
            return Err(Error::Domain(format!("μ must lie in [1, 3], got {mu}")));
        }
        Ok(BoundParams { nu, mu, aleph })
    }

    pub fn nu_bar(&self) -> f64 {
        1.0 - self.nu
    }
}

/// `E[PF_k] ≤ (n − k)/k`.
pub fn pf_mean_upper(n: usize, k: usize) -> f64 {
    (n - k) as f64 / k as f64
}

/// `E[PF_k²] ≤ ((n − k)(n + 2 − 3/k) + 2β)/k²` where `β ≥ E[T_{n−k}]`.
pub fn ek2_upper(n: usize, k: usize, beta_smaller: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    ((nf - kf) * (nf + 2.0 - 3.0 / kf) + 2.0 * beta_smaller) / (kf * kf) * UPPER_GUARD
}

/// Closed-form bound on `M_k = max f(i)` over `⌈(n−k)/k⌉ ≤ i ≤ n − k`.
pub fn mk_upper(n: usize, k: usize, nu: f64) -> Result<f64> {
    if k < 2 || k > n.saturating_sub(2) || n < 22 || !(6.0 / 11.0..1.0).contains(&nu) {
        return Err(Error::Domain(format!(
            "M_k bound needs 2 <= k <= n−2, n >= 22, 6/11 <= ν < 1 (n={n}, k={k}, ν={nu})"
        )));
    }
    let (nf, kf) = (n as f64, k as f64);
    let vn = nu * nf;
    if k >= n.div_ceil(2) {
        return Ok(f_of(1.0, n, nu) * UPPER_GUARD);
    }
    let small = (2.0 * vn).ln() / (nu * nu * nf * nf) * (1.0 + 4.0 / (vn - 4.0));
    let large = kf / (nf * (nf - kf)) / (nu - 1.0 / kf - 1.0 / (2.0 * nf));
    let v = if kf <= (2.0 * vn - 3.0).ln() / (88.0 * nu * nu) {
        small
    } else if kf >= (2.0 * vn).ln() / nu * (1.0 + 4.0 / (vn - 4.0)) {
        large
    } else {
        small + large
    };
    Ok(v * UPPER_GUARD)
}

/// `M_k = max f(i)` over integers `⌈(n−k)/k⌉ ≤ i ≤ n − k`. Below `νn − 2`
/// `f` is convex and above it decreasing, so a few candidates suffice.
pub fn mk_exact(n: usize, k: usize, nu: f64) -> f64 {
    let (lo, hi) = ((n - k).div_ceil(k).max(1), n - k);
    let f = |i: usize| f_of(i as f64, n, nu);
    let mut best = f(lo).max(f(hi));
    let brk = nu * n as f64 - 2.0;
    if brk >= 1.0 {
        let last = brk.floor() as usize;
        for i in [last, last + 1] {
            if (lo..=hi).contains(&i) {
                best = best.max(f(i));
            }
        }
    }
    best
}

/// `h(x) = exp(−2(nν̄k − x)²/((n − k)k²)) + β/x`, valid for `0 < x < nν̄k`.
pub fn h_tail(n: usize, k: usize, nu_bar: f64, beta_smaller: f64, x: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let a = nf * nu_bar * kf;
    let d = a - x;
    (-2.0 * d * d / ((nf - kf) * kf * kf)).exp() + beta_smaller / x
}

const GRID: usize = 1000;
const COARSE: usize = 25;

fn s_grid() -> &'static [f64] {
    static G: OnceLock<Vec<f64>> = OnceLock::new();
    G.get_or_init(|| {
        let (lo, hi) = (1e-9f64.ln(), 0.999f64.ln());
        (0..GRID)
            .map(|i| (lo + (hi - lo) * i as f64 / (GRID - 1) as f64).exp())
            .collect()
    })
}

/// Minimum of `h` over `x = a(1 − s)`, `s` on a 1000-point geometric grid in
/// `[1e−9, 0.999]`. Every grid value is a valid bound, so the search scans a
/// coarse subgrid and refines around its best point rather than visiting
/// all 1000 points.
fn h_grid_min(n: usize, k: usize, nu_bar: f64, beta_smaller: f64) -> f64 {
    let a = n as f64 * nu_bar * k as f64;
    let s = s_grid();
    let eval = |j: usize| h_tail(n, k, nu_bar, beta_smaller, a * (1.0 - s[j]));
    let mut best = (f64::INFINITY, 0);
    for j in (0..GRID).step_by(COARSE).chain(std::iter::once(GRID - 1)) {
        let v = eval(j);
        if v < best.0 {
            best = (v, j);
        }
    }
    let (mut lo, mut hi) = (best.1.saturating_sub(COARSE), (best.1 + COARSE).min(GRID - 1));
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if eval(m1) <= eval(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    (lo..=hi).map(eval).fold(best.0, f64::min)
}

/// Bound on `Pr[O_k > ν̄n]` given `β ≥ E[T_{n−k}]`.
///
/// Without optimisation: Markov below `k = (2/ν̄) ln^μ n`, and `h` at
/// `x = n ln^μ n` from there on. With optimisation: the least of the Markov
/// bound, `h` at `x = n ln^μ n` when admissible, and the grid minimum of `h`.
pub fn ok_tail(n: usize, k: usize, params: &BoundParams, beta_smaller: f64, optimize_x: bool) -> f64 {
    let nf = n as f64;
    let nb = params.nu_bar();
    let markov = beta_smaller / (nb * nf);
    let lnmu = nf.ln().powf(params.mu);
    let x_can = nf * lnmu;
    let a = nf * nb * k as f64;
    let v = if !optimize_x {
        if (k as f64) < 2.0 / nb * lnmu {
            markov
        } else {
            h_tail(n, k, nb, beta_smaller, x_can)
        }
    } else {
        let mut best = markov.min(h_grid_min(n, k, nb, beta_smaller));
        if x_can < a {
            best = best.min(h_tail(n, k, nb, beta_smaller, x_can));
        }
        best
    };
    (v * UPPER_GUARD).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SMode {
    /// Per-k sums fed by the table of smaller `β`.
    Sharp,
    /// Closed-form displays driven by `ℵ`.
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct STerms {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
}

impl STerms {
    pub fn total(&self) -> f64 {
        (self.s1 + self.s2 + self.s3 + self.s4) * UPPER_GUARD
    }
}

/// `S₁ … S₄` for `K_n`. In sharp mode `beta[m]` must hold an upper bound on
/// `E[F(m)]` for every `2 ≤ m < n`.
pub fn s_terms(n: usize, params: &BoundParams, beta: &[f64], harm: &Harmonics, mode: SMode) -> Result<STerms> {
    if n < 22 {
        return Err(Error::Domain(format!("S-decomposition needs n >= 22, got {n}")));
    }
    match mode {
        SMode::Sharp => {
            if beta.len() < n || beta[2..n].iter().any(|b| !b.is_finite()) {
                return Err(Error::Domain(format!("β table does not cover 2..{}", n - 1)));
            }
            if harm.len() <= n {
                return Err(Error::Domain("harmonic table too short".into()));
            }
            Ok(sharp(n, params, beta, harm))
        }
        SMode::Closed => Ok(closed(n, params)),
    }
}

fn sharp(n: usize, p: &BoundParams, beta: &[f64], harm: &Harmonics) -> STerms {
    let nf = n as f64;
    let vn = p.nu * nf;
    let fl_nu = vn.floor() as usize;
    // ⌈ν̄n⌉, kept consistent with ⌊νn⌋
    let c = n - fl_nu;
    let q = |xi: usize, t: usize| harm.q(xi, t, n).expect("q arguments in range");

    let s1 = harm.h(n - 2) + 1.0;

    let mut s2 = 0.0;
    for k in 2..=n / 2 {
        let fl = (n - k) / k;
        if fl == 0 {
            continue;
        }
        s2 += q((n - k - fl).min(c - 1), fl);
    }

    let mut s3 = 0.0;
    for k in 2..=n - 2 {
        let mk = mk_exact(n, k, p.nu) * UPPER_GUARD;
        s3 += mk * ek2_upper(n, k, beta[n - k]);
    }

    let mut s4 = 0.0;
    for k in 2..fl_nu {
        s4 += q(c, fl_nu - k) * ok_tail(n, k, p, beta[n - k], true);
    }

    STerms { s1, s2, s3, s4 }
}

fn closed(n: usize, p: &BoundParams) -> STerms {
    let nf = n as f64;
    let (nu, nb, mu) = (p.nu, p.nu_bar(), p.mu);
    let vn = nu * nf;
    let ln = nf.ln();
    let s1 = ln + EULER_GAMMA + 1.0;
    let s2 = ln / nu + ((vn - 1.5) / (vn - 0.5 - nf / 2.0)).ln() + ((nu / 2.0).ln() - (2.5 * nu - 1.0).ln()) / nu;
    let zeta2m1 = std::f64::consts::PI.powi(2) / 6.0 - 1.0;
    let s3 = zeta2m1 / (nu * nu) * (1.0 + 9.0 / nf) * (2.0 * vn).ln()
        + (1.0 + 9.0 / nf) * (ln - 2.0 * ln.ln() + 11.17) / nu
        + 2.0 / nu * (1.0 + 7.0 / nf);
    let lead = 5.0 + p.aleph / ln;
    let s4 = 2.0 * lead * ln.powf(1.0 + mu) * vn.ln() / (nb * nb * nf)
        + vn * ln * (-nf * nb * nb / 2.0).exp()
        + (nu - 2.0 * ln.powf(mu) / (nb * nf)) * lead / ln.powf(mu - 2.0) * vn.ln() / ln;
    STerms {
        s1: s1 * UPPER_GUARD,
        s2: s2 * UPPER_GUARD,
        s3: s3 * UPPER_GUARD,
        s4: s4 * UPPER_GUARD,
    }
}
