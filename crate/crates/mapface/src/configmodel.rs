//! Configuration model with a fixed rotation: darts are grouped by vertex
//! (vertex `i` owns a contiguous block), `R` is fixed, and the matching `L`
//! ranges over all perfect matchings of the `2m` darts.

use crate::combmap::{CombMap, EdgeMatching};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;

pub const DEFAULT_MATCHING_BUDGET: u64 = 10_000_000;
const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    d: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(d: Vec<usize>) -> Result<Self> {
        let s: usize = d.iter().sum();
        if s % 2 != 0 {
            return Err(Error::Domain(format!("degree sum {s} is odd")));
        }
        if s == 0 {
            return Err(Error::Domain("degree sequence has no edges".into()));
        }
        Ok(DegreeSequence { d })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let d = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad degree `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        DegreeSequence::new(d)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn m(&self) -> usize {
        self.d.iter().sum::<usize>() / 2
    }

    pub fn d_max(&self) -> usize {
        self.d.iter().copied().max().unwrap_or(0)
    }

    pub fn dart_vertex(&self) -> Vec<usize> {
        self.d
            .iter()
            .enumerate()
            .flat_map(|(v, &k)| std::iter::repeat_n(v, k))
            .collect()
    }

    fn first_dart(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.d.len());
        let mut acc = 0;
        for &k in &self.d {
            out.push(acc);
            acc += k;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedRotation {
    ds: DegreeSequence,
    dart_vertex: Vec<usize>,
    succ: Vec<usize>,
    pred: Vec<usize>,
}

impl FixedRotation {
    /// Darts of each vertex in increasing order.
    pub fn canonical(ds: &DegreeSequence) -> Self {
        let first = ds.first_dart();
        let cycles: Vec<Vec<usize>> = ds
            .degrees()
            .iter()
            .zip(&first)
            .map(|(&k, &f)| (f..f + k).collect())
            .collect();
        FixedRotation::from_cycles(ds, &cycles).expect("canonical rotation is valid")
    }

    /// One cycle per vertex over exactly that vertex's dart block.
    pub fn from_cycles(ds: &DegreeSequence, cycles: &[Vec<usize>]) -> Result<Self> {
        let dv = ds.dart_vertex();
        let nd = dv.len();
        if cycles.len() != ds.n() {
            return Err(Error::Validation("one cycle per vertex required".into()));
        }
        let mut succ = vec![UNSET; nd];
        for (v, cyc) in cycles.iter().enumerate() {
            if cyc.len() != ds.degrees()[v] {
                return Err(Error::Validation(format!("unicyclicity violation at {}", v + 1)));
            }
            for (i, &d) in cyc.iter().enumerate() {
                if d >= nd || dv[d] != v || succ[d] != UNSET {
                    return Err(Error::Validation(format!("unicyclicity violation at {}", v + 1)));
                }
                succ[d] = cyc[(i + 1) % cyc.len()];
            }
        }
        let mut pred = vec![0; nd];
        for d in 0..nd {
            pred[succ[d]] = d;
        }
        Ok(FixedRotation {
            ds: ds.clone(),
            dart_vertex: dv,
            succ,
            pred,
        })
    }

    pub fn degree_sequence(&self) -> &DegreeSequence {
        &self.ds
    }

    pub fn num_darts(&self) -> usize {
        self.succ.len()
    }

    pub fn succ(&self, d: usize) -> usize {
        self.succ[d]
    }

    pub fn pred(&self, d: usize) -> usize {
        self.pred[d]
    }

    pub fn vertex(&self, d: usize) -> usize {
        self.dart_vertex[d]
    }

    /// Cycles of `R∘L`.
    pub fn cycles_with(&self, l: &[usize]) -> usize {
        crate::combmap::count_orbits(&self.succ, l)
    }

    pub fn to_map(&self, l: &EdgeMatching) -> Result<CombMap> {
        CombMap::from_parts(self.ds.n(), &self.dart_vertex, &self.succ, l)
    }
}

/// `|C_{2^j}| = (2j)! / (j! 2^j) = (2j − 1)!!`.
pub fn conjugacy_class_size(j: usize) -> BigUint {
    (1..=j).fold(BigUint::one(), |a, i| a * BigUint::from(2 * i - 1))
}

/// Uniform perfect matching of the `2m` darts.
pub fn sample_matching<R: Rng + ?Sized>(ds: &DegreeSequence, rng: &mut R) -> EdgeMatching {
    let nd = 2 * ds.m();
    let mut perm: Vec<usize> = (0..nd).collect();
    perm.shuffle(rng);
    let mut partner = vec![0; nd];
    for p in perm.chunks(2) {
        partner[p[0]] = p[1];
        partner[p[1]] = p[0];
    }
    EdgeMatching::new(partner)
}

/// Visit every perfect matching of `0..nd` in canonical order: the least
/// unpaired dart is paired with each larger unpaired dart in turn.
pub fn for_each_matching(nd: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(partner: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        let Some(a) = partner.iter().position(|&p| p == UNSET) else {
            visit(partner);
            return;
        };
        for b in a + 1..partner.len() {
            if partner[b] == UNSET {
                partner[a] = b;
                partner[b] = a;
                rec(partner, visit);
                partner[a] = UNSET;
                partner[b] = UNSET;
            }
        }
    }
    let mut partner = vec![UNSET; nd];
    rec(&mut partner, &mut visit);
}

fn check_budget(m: usize, budget: u64) -> Result<()> {
    let size = conjugacy_class_size(m);
    if size > BigUint::from(budget) {
        return Err(Error::Budget {
            size: size.to_string(),
            budget,
        });
    }
    Ok(())
}

/// `Σ_L c(R∘L)` over all matchings.
pub fn total_faces_cm(r: &FixedRotation, budget: u64) -> Result<BigUint> {
    let m = r.num_darts() / 2;
    check_budget(m, budget)?;
    let mut total = 0u64;
    for_each_matching(r.num_darts(), |l| total += r.cycles_with(l) as u64);
    Ok(BigUint::from(total))
}

/// Exact `E[F_d]` for the fixed rotation.
pub fn expected_faces_exact_cm(r: &FixedRotation, budget: u64) -> Result<BigRational> {
    let total = total_faces_cm(r, budget)?;
    let m = r.num_darts() / 2;
    Ok(BigRational::new(
        BigInt::from(total),
        BigInt::from(conjugacy_class_size(m)),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PossibleFace {
    /// Orbit of `R∘L`, starting at its least dart.
    pub walk: Vec<usize>,
    /// Dart pairs of `L` the face uses, each as `(min, max)`, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub l: usize,
    pub u: usize,
    pub root: Option<usize>,
}

impl PossibleFace {
    /// Build from an orbit sequence, deriving `L(x) = R⁻¹(next)`. Errors if
    /// the implied pairs are not a partial fixed-point-free involution.
    pub fn from_walk(r: &FixedRotation, walk: &[usize]) -> Result<Self> {
        if walk.is_empty() {
            return Err(Error::Validation("empty walk".into()));
        }
        let mut partner = vec![UNSET; r.num_darts()];
        for (i, &x) in walk.iter().enumerate() {
            let y = r.pred(walk[(i + 1) % walk.len()]);
            let clash = |p: usize, q: usize| p != UNSET && p != q;
            if x == y || clash(partner[x], y) || clash(partner[y], x) {
                return Err(Error::Validation(format!("walk is not realizable at dart {x}")));
            }
            partner[x] = y;
            partner[y] = x;
        }
        let min_pos = (0..walk.len()).min_by_key(|&i| walk[i]).unwrap();
        let mut w = walk.to_vec();
        w.rotate_left(min_pos);
        let mut pairs: Vec<(usize, usize)> = w
            .iter()
            .map(|&x| (x.min(partner[x]), x.max(partner[x])))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        Ok(PossibleFace {
            l: w.len(),
            u: pairs.len(),
            walk: w,
            pairs,
            root: None,
        })
    }

    /// Loop-free and no two edges on the same vertex pair.
    pub fn is_simple(&self, r: &FixedRotation) -> bool {
        let mut ends: Vec<(usize, usize)> = Vec::with_capacity(self.pairs.len());
        for &(a, b) in &self.pairs {
            let (u, v) = (r.vertex(a), r.vertex(b));
            if u == v {
                return false;
            }
            ends.push((u.min(v), u.max(v)));
        }
        ends.sort_unstable();
        ends.windows(2).all(|w| w[0] != w[1])
    }

    /// Darts `d` of the face with `R⁻¹(d)` on the face: exactly the orbit.
    pub fn roots(&self) -> &[usize] {
        &self.walk
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FaceOracle {
    pub h: BTreeMap<usize, u64>,
    pub g: BTreeMap<usize, u64>,
    pub h_s: BTreeMap<usize, u64>,
    pub g_s: BTreeMap<usize, u64>,
    pub m: usize,
    #[serde(skip)]
    pub faces: Vec<PossibleFace>,
}

/// Brute-force `Φ_R` restricted to unique length `≤ k_max` by extending
/// rooted walks dart by dart while choosing `L` on the fly. Each face is
/// found once, from its least dart.
pub fn possible_faces(r: &FixedRotation, k_max: usize, budget: u64) -> Result<FaceOracle> {
    let nd = r.num_darts();
    let mut oracle = FaceOracle {
        m: nd / 2,
        ..Default::default()
    };
    let mut partner = vec![UNSET; nd];
    let mut walk = Vec::new();
    let mut nodes = 0u64;

    struct Ctx<'a> {
        r: &'a FixedRotation,
        k_max: usize,
        budget: u64,
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        c: &Ctx,
        start: usize,
        x: usize,
        edges: usize,
        partner: &mut Vec<usize>,
        walk: &mut Vec<usize>,
        nodes: &mut u64,
        out: &mut FaceOracle,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > c.budget {
            return Err(Error::Budget {
                size: format!("more than {}", c.budget),
                budget: c.budget,
            });
        }
        let nd = partner.len();
        let visit = |y: usize, edges: usize, partner: &mut Vec<usize>, walk: &mut Vec<usize>, nodes: &mut u64, out: &mut FaceOracle| -> Result<()> {
            let nxt = c.r.succ(y);
            if nxt == start {
                let f = PossibleFace::from_walk(c.r, walk).expect("closed walk is realizable");
                debug_assert_eq!(f.u, edges);
                let simple = f.is_simple(c.r);
                *out.h.entry(f.u).or_default() += 1;
                *out.g.entry(f.u).or_default() += f.l as u64;
                if simple {
                    *out.h_s.entry(f.u).or_default() += 1;
                    *out.g_s.entry(f.u).or_default() += f.l as u64;
                }
                out.faces.push(f);
                return Ok(());
            }
            if nxt < start || walk.contains(&nxt) {
                return Ok(());
            }
            walk.push(nxt);
            let res = extend(c, start, nxt, edges, partner, walk, nodes, out);
            walk.pop();
            res
        };
        if partner[x] != UNSET {
            let y = partner[x];
            return visit(y, edges, partner, walk, nodes, out);
        }
        if edges == c.k_max {
            return Ok(());
        }
        for y in 0..nd {
            if y == x || partner[y] != UNSET {
                continue;
            }
            partner[x] = y;
            partner[y] = x;
            let res = visit(y, edges + 1, partner, walk, nodes, out);
            partner[x] = UNSET;
            partner[y] = UNSET;
            res?;
        }
        Ok(())
    }

    let ctx = Ctx { r, k_max, budget };
    for s in 0..nd {
        walk.clear();
        walk.push(s);
        extend(&ctx, s, s, 0, &mut partner, &mut walk, &mut nodes, &mut oracle)?;
    }
    Ok(oracle)
}

/// `(h_k, g_k)` by brute force.
pub fn count_possible_faces(r: &FixedRotation, k: usize, budget: u64) -> Result<(u64, u64)> {
    let o = possible_faces(r, k, budget)?;
    Ok((
        o.h.get(&k).copied().unwrap_or(0),
        o.g.get(&k).copied().unwrap_or(0),
    ))
}

/// `Σ_k h_k / ((2m−1)(2m−3)⋯(2m−2k+1))`.
pub fn expected_faces_formula(h: &BTreeMap<usize, u64>, m: usize) -> BigRational {
    let mut total = BigRational::zero();
    for (&k, &hk) in h {
        if hk == 0 {
            continue;
        }
        assert!(k >= 1 && k <= m, "unique length {k} outside [1..{m}]");
        let den = (1..=k).fold(BigInt::one(), |a, j| a * BigInt::from(2 * m - 2 * j + 1));
        total += BigRational::new(BigInt::from(hk), den);
    }
    total
}

/// Number of matchings whose map contains `f` as a face.
pub fn face_completion_count(r: &FixedRotation, f: &PossibleFace, budget: u64) -> Result<u64> {
    let checked = PossibleFace::from_walk(r, &f.walk)?;
    check_budget(r.num_darts() / 2, budget)?;
    let mut count = 0u64;
    for_each_matching(r.num_darts(), |l| {
        if checked.pairs.iter().all(|&(a, b)| l[a] == b) {
            count += 1;
        }
    });
    Ok(count)
}

fn harmonic_exact(m: usize) -> BigRational {
    (1..=m).fold(BigRational::zero(), |a, j| a + BigRational::new(BigInt::one(), BigInt::from(j)))
}

/// `((H_m − 1)/2, 4H_m + 4)`.
pub fn multigraph_bounds(m: usize) -> (BigRational, BigRational) {
    let h = harmonic_exact(m);
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    ((h.clone() - one) / two, four.clone() * h + four)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GkBounds {
    pub lower: BigUint,
    pub upper: BigUint,
    /// Lower bound on `h_k^s`, defined for `2 ≤ k ≤ m − d_max²`.
    pub simple_lower: Option<BigRational>,
}

pub fn gk_bounds(m: usize, k: usize, d_max: usize) -> Result<GkBounds> {
    if k < 1 || k > m {
        return Err(Error::Domain(format!("k={k} outside [1..{m}]")));
    }
    let two_m = 2 * m;
    if k == 1 {
        return Ok(GkBounds {
            lower: BigUint::from(two_m),
            upper: BigUint::from(two_m),
            simple_lower: None,
        });
    }
    let upper = (1..k).fold(BigUint::from(2 * two_m), |a, j| a * BigUint::from(two_m - 2 * j + 1));
    let lower = (2..=k).fold(BigUint::from(two_m), |a, j| a * BigUint::from(two_m - 2 * j));
    let d2 = d_max * d_max;
    let simple_lower = (k + d2 <= m).then(|| {
        let prod = (0..k - 1).fold(BigInt::from(two_m), |a, j| a * BigInt::from(two_m - d2 - 2 * j));
        BigRational::new(prod, BigInt::from(4 * k))
    });
    Ok(GkBounds {
        lower,
        upper,
        simple_lower,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpleStats {
    pub lambda: BigRational,
    pub mu_f: Option<BigRational>,
    /// `e^{−λ−λ²}`, asymptotic reference only.
    pub simple_probability_reference: f64,
}

pub fn simple_statistics(ds: &DegreeSequence, face: Option<(&FixedRotation, &PossibleFace)>) -> SimpleStats {
    let two_m = BigInt::from(2 * ds.m());
    let choose2: usize = ds.degrees().iter().map(|&d| d * d.saturating_sub(1) / 2).sum();
    let lambda = BigRational::new(BigInt::from(choose2), two_m.clone());
    let mu_f = face.map(|(r, f)| {
        let mut ends: Vec<(usize, usize)> = f
            .pairs
            .iter()
            .map(|&(a, b)| {
                let (u, v) = (r.vertex(a), r.vertex(b));
                (u.min(v), u.max(v))
            })
            .collect();
        ends.sort_unstable();
        ends.dedup();
        let s: usize = ends
            .iter()
            .map(|&(u, v)| ds.degrees()[u] * ds.degrees()[v])
            .sum();
        BigRational::new(BigInt::from(s), two_m.clone())
    });
    let l = lambda.to_f64().unwrap_or(f64::NAN);
    SimpleStats {
        lambda,
        mu_f,
        simple_probability_reference: (-l - l * l).exp(),
    }
}

pub fn matching_is_simple(r: &FixedRotation, l: &EdgeMatching) -> bool {
    let mut ends = Vec::with_capacity(l.len() / 2);
    for a in 0..l.len() {
        let b = l.partner(a);
        if a < b {
            let (u, v) = (r.vertex(a), r.vertex(b));
            if u == v {
                return false;
            }
            ends.push((u.min(v), u.max(v)));
        }
    }
    ends.sort_unstable();
    ends.windows(2).all(|w| w[0] != w[1])
}

#[derive(Debug, Clone)]
pub struct SimpleSample {
    pub map: CombMap,
    pub attempts: u64,
}

/// Rejection sampling of a simple map under the canonical rotation.
pub fn sample_simple_map<R: Rng + ?Sized>(ds: &DegreeSequence, rng: &mut R, max_attempts: u64) -> Result<SimpleSample> {
    let r = FixedRotation::canonical(ds);
    for attempt in 1..=max_attempts {
        let l = sample_matching(ds, rng);
        if matching_is_simple(&r, &l) {
            return Ok(SimpleSample {
                map: r.to_map(&l)?,
                attempts: attempt,
            });
        }
    }
    Err(Error::Exhausted(max_attempts))
}
