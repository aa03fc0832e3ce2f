//! Exhaustive census over all rotation systems of a graph.
//!
//! The rotation space is a mixed-radix odometer: digit `v` indexes the cyclic
//! orders at vertex `v` (lexicographic, first dart fixed), vertex 0 is the
//! leading digit. Shards are contiguous index ranges.

use crate::combmap::genus_from_counts;
use crate::error::{Error, Result};
use crate::graph::Graph;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone)]
pub struct CensusJob {
    pub graph: Graph,
    pub fix_first_rotation: bool,
    /// Caller asserts the stabiliser of vertex 1 acts transitively on its
    /// rotations (complete graphs qualify automatically).
    pub assume_symmetric: bool,
    /// `(index, total)` with `index < total`.
    pub shard: (u64, u64),
    pub budget: u64,
    /// Also count faces with `k` distinct vertices and `k` edges.
    pub short_faces: bool,
}

impl CensusJob {
    pub fn new(graph: Graph) -> Self {
        CensusJob {
            graph,
            fix_first_rotation: false,
            assume_symmetric: false,
            shard: (0, 1),
            budget: DEFAULT_BUDGET,
            short_faces: false,
        }
    }

    pub fn fix_first(mut self, on: bool) -> Self {
        self.fix_first_rotation = on;
        self
    }

    pub fn shard(mut self, index: u64, total: u64) -> Self {
        self.shard = (index, total);
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_short_faces(mut self) -> Self {
        self.short_faces = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceCensus {
    pub by_faces: BTreeMap<usize, u64>,
    pub by_genus: BTreeMap<usize, u64>,
    pub total: u64,
    /// Embedding-weighted counts of faces with `k` distinct vertices and `k`
    /// edges, keyed by `k` (only filled on request).
    pub short_faces: BTreeMap<usize, u64>,
}

impl FaceCensus {
    fn empty() -> Self {
        FaceCensus {
            by_faces: BTreeMap::new(),
            by_genus: BTreeMap::new(),
            total: 0,
            short_faces: BTreeMap::new(),
        }
    }

    pub fn merge(&mut self, other: &FaceCensus) {
        for (&k, &v) in &other.by_faces {
            *self.by_faces.entry(k).or_default() += v;
        }
        for (&k, &v) in &other.by_genus {
            *self.by_genus.entry(k).or_default() += v;
        }
        for (&k, &v) in &other.short_faces {
            *self.short_faces.entry(k).or_default() += v;
        }
        self.total += other.total;
    }

    fn scale(&mut self, s: u64) {
        for v in self.by_faces.values_mut() {
            *v *= s;
        }
        for v in self.by_genus.values_mut() {
            *v *= s;
        }
        for v in self.short_faces.values_mut() {
            *v *= s;
        }
        self.total *= s;
    }

    fn mean(map: &BTreeMap<usize, u64>, total: u64) -> BigRational {
        let num = map
            .iter()
            .fold(BigInt::zero(), |acc, (&k, &v)| acc + BigInt::from(k) * BigInt::from(v));
        BigRational::new(num, BigInt::from(total))
    }

    pub fn expected_faces(&self) -> BigRational {
        Self::mean(&self.by_faces, self.total)
    }

    pub fn expected_genus(&self) -> BigRational {
        Self::mean(&self.by_genus, self.total)
    }

    pub fn expected_faces_f64(&self) -> f64 {
        self.expected_faces().to_f64().unwrap_or(f64::NAN)
    }

    pub fn expected_genus_f64(&self) -> f64 {
        self.expected_genus().to_f64().unwrap_or(f64::NAN)
    }

    /// Embedding average of short faces of length `k`.
    pub fn expected_short_faces(&self, k: usize) -> BigRational {
        let c = self.short_faces.get(&k).copied().unwrap_or(0);
        BigRational::new(BigInt::from(c), BigInt::from(self.total))
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |a, i| a * BigUint::from(i))
}

/// Cyclic orders of `darts` with `darts[0]` first, as successor values
/// aligned with `darts`, in lexicographic order of the remaining sequence.
fn cyclic_orders(darts: &[usize]) -> Vec<Vec<usize>> {
    let d = darts.len();
    if d <= 1 {
        return vec![darts.to_vec()];
    }
    let mut rest: Vec<usize> = darts[1..].to_vec();
    let mut out = Vec::new();
    loop {
        let seq: Vec<usize> = std::iter::once(darts[0]).chain(rest.iter().copied()).collect();
        let mut succ = vec![0; d];
        for i in 0..d {
            let pos = darts.iter().position(|&x| x == seq[i]).unwrap();
            succ[pos] = seq[(i + 1) % d];
        }
        out.push(succ);
        if !next_permutation(&mut rest) {
            break;
        }
    }
    out
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

struct Space {
    darts: Vec<Vec<usize>>,
    orders: Vec<Vec<Vec<usize>>>,
    radix: Vec<u64>,
    size: u64,
}

fn build_space(job: &CensusJob) -> Result<(Space, u64)> {
    let g = &job.graph;
    let darts = g.darts_by_vertex();
    let mut orders: Vec<Vec<Vec<usize>>> = darts.iter().map(|d| cyclic_orders(d)).collect();
    let mut scale = 1u64;
    if job.fix_first_rotation {
        if !(g.is_complete() || job.assume_symmetric) {
            return Err(Error::Domain(
                "fix-first reduction is only valid for vertex-transitive inputs (complete graphs or asserted)".into(),
            ));
        }
        if g.n() > 0 {
            scale = orders[0].len() as u64;
            orders[0].truncate(1);
        }
    }
    let full: BigUint = orders.iter().fold(BigUint::from(1u32), |a, o| a * BigUint::from(o.len()));
    let size = match full.to_u64() {
        Some(s) if s <= job.budget => s,
        _ => {
            return Err(Error::Budget {
                size: full.to_string(),
                budget: job.budget,
            })
        }
    };
    let radix = orders.iter().map(|o| o.len() as u64).collect();
    Ok((
        Space {
            darts,
            orders,
            radix,
            size,
        },
        scale,
    ))
}

/// Size of the (optionally reduced) rotation space, `Π_v (deg(v) − 1)!`.
pub fn rotation_space_size(graph: &Graph) -> BigUint {
    graph
        .degrees()
        .iter()
        .fold(BigUint::from(1u32), |a, &d| a * factorial(d.saturating_sub(1)))
}

fn census_range(space: &Space, g: &Graph, lo: u64, hi: u64, short: bool) -> FaceCensus {
    let mut out = FaceCensus::empty();
    if lo >= hi {
        return out;
    }
    let nv = g.n();
    let nd = g.num_darts();
    let dv: Vec<usize> = (0..nd).map(|d| g.dart_vertex(d)).collect();
    let (k, _) = g.components();
    let isolated = g.degrees().iter().filter(|&&d| d == 0).count();
    let mut digits = vec![0u64; nv];
    let mut rem = lo;
    for v in (0..nv).rev() {
        digits[v] = rem % space.radix[v];
        rem /= space.radix[v];
    }
    let mut succ = vec![0usize; nd];
    let write = |succ: &mut [usize], v: usize, digit: u64| {
        let o = &space.orders[v][digit as usize];
        for (i, &d) in space.darts[v].iter().enumerate() {
            succ[d] = o[i];
        }
    };
    for v in 0..nv {
        write(&mut succ, v, digits[v]);
    }
    let mut stamp = vec![0u32; nd];
    let mut vstamp = vec![0u32; nv];
    let mut epoch = 0u32;
    let mut vepoch = 0u32;
    let mut faces_hist = vec![0u64; nd + 2];
    let mut short_hist = vec![0u64; nv + 1];
    for _ in lo..hi {
        epoch += 1;
        let mut orbits = 0usize;
        for s in 0..nd {
            if stamp[s] == epoch {
                continue;
            }
            orbits += 1;
            let mut d = s;
            let mut len = 0usize;
            while stamp[d] != epoch {
                stamp[d] = epoch;
                len += 1;
                d = succ[d ^ 1];
            }
            if short && len >= 3 && len <= nv {
                vepoch += 1;
                let mut distinct = true;
                let mut x = s;
                for _ in 0..len {
                    let v = dv[x];
                    if vstamp[v] == vepoch {
                        distinct = false;
                        break;
                    }
                    vstamp[v] = vepoch;
                    x = succ[x ^ 1];
                }
                if distinct {
                    short_hist[len] += 1;
                }
            }
        }
        faces_hist[orbits + isolated + 1 - k] += 1;
        // odometer step, least significant digit last
        let mut v = nv;
        while v > 0 {
            v -= 1;
            digits[v] += 1;
            if digits[v] < space.radix[v] {
                write(&mut succ, v, digits[v]);
                break;
            }
            digits[v] = 0;
            write(&mut succ, v, 0);
        }
    }
    for (f, &c) in faces_hist.iter().enumerate() {
        if c > 0 {
            out.by_faces.insert(f, c);
            let gen = genus_from_counts(g.m(), nv, f, k).expect("enumerated maps satisfy Euler's formula");
            *out.by_genus.entry(gen).or_default() += c;
        }
    }
    for (l, &c) in short_hist.iter().enumerate() {
        if c > 0 {
            out.short_faces.insert(l, c);
        }
    }
    out.total = hi - lo;
    out
}

/// Run a census job. With `fix_first_rotation` the counts are rescaled to the
/// full space; a shard covers a contiguous slice of the (reduced) space.
pub fn run_census(job: &CensusJob) -> Result<FaceCensus> {
    let (idx, tot) = job.shard;
    if tot == 0 || idx >= tot {
        return Err(Error::Domain(format!("invalid shard {idx}/{tot}")));
    }
    let (space, scale) = build_space(job)?;
    let lo = (space.size as u128 * idx as u128 / tot as u128) as u64;
    let hi = (space.size as u128 * (idx + 1) as u128 / tot as u128) as u64;
    let pieces = 256u64.min((hi - lo).max(1));
    let mut census = (0..pieces)
        .into_par_iter()
        .map(|p| {
            let a = lo + (hi - lo) * p / pieces;
            let b = lo + (hi - lo) * (p + 1) / pieces;
            census_range(&space, &job.graph, a, b, job.short_faces)
        })
        .reduce(FaceCensus::empty, |mut a, b| {
            a.merge(&b);
            a
        });
    census.scale(scale);
    Ok(census)
}

pub fn face_distribution(graph: &Graph, fix_first_rotation: bool) -> Result<FaceCensus> {
    run_census(&CensusJob::new(graph.clone()).fix_first(fix_first_rotation))
}

/// Same census; the genus view lives in `by_genus`.
pub fn genus_distribution(graph: &Graph, fix_first_rotation: bool) -> Result<FaceCensus> {
    face_distribution(graph, fix_first_rotation)
}

pub fn expected_faces_exact(graph: &Graph) -> Result<BigRational> {
    let reduce = graph.is_complete() && graph.n() >= 3;
    Ok(face_distribution(graph, reduce)?.expected_faces())
}

/// Average number of faces of K_n with `k` distinct vertices and `k` edges.
pub fn expected_short_faces_exact(n: usize, k: usize) -> Result<BigRational> {
    if n < 3 || k < 3 || k > n {
        return Err(Error::Domain(format!("need 3 <= k <= n, got n={n}, k={k}")));
    }
    if n > 6 {
        return Err(Error::Domain(format!("full census of K_{n} is out of scale")));
    }
    let job = CensusJob::new(Graph::complete(n)).fix_first(true).with_short_faces();
    Ok(run_census(&job)?.expected_short_faces(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(c: &FaceCensus) -> Vec<(usize, u64)> {
        c.by_faces.iter().map(|(&a, &b)| (a, b)).collect()
    }

    #[test]
    fn cyclic_orders_count() {
        assert_eq!(cyclic_orders(&[3, 5, 7, 9]).len(), 6);
        assert_eq!(cyclic_orders(&[1]).len(), 1);
        assert_eq!(cyclic_orders(&[]).len(), 1);
    }

    #[test]
    fn k4_census() {
        let c = face_distribution(&Graph::complete(4), false).unwrap();
        assert_eq!(counts(&c), vec![(2, 14), (4, 2)]);
        assert_eq!(c.by_genus.get(&0), Some(&2));
        assert_eq!(c.by_genus.get(&1), Some(&14));
        assert_eq!(c.expected_faces(), BigRational::new(9.into(), 4.into()));
    }

    #[test]
    fn k3_expected_two() {
        let e = expected_faces_exact(&Graph::complete(3)).unwrap();
        assert_eq!(e, BigRational::from_integer(2.into()));
    }

    #[test]
    fn shards_partition() {
        let g = Graph::complete(5);
        let full = face_distribution(&g, false).unwrap();
        let mut merged = FaceCensus::empty();
        for i in 0..7 {
            merged.merge(&run_census(&CensusJob::new(g.clone()).shard(i, 7)).unwrap());
        }
        assert_eq!(merged, full);
    }

    #[test]
    fn refusals() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(matches!(face_distribution(&g, true), Err(Error::Domain(_))));
        let big = CensusJob::new(Graph::complete(7)).budget(1000);
        assert!(matches!(run_census(&big), Err(Error::Budget { .. })));
        assert!(expected_short_faces_exact(4, 5).is_err());
        assert!(expected_short_faces_exact(4, 2).is_err());
    }

    #[test]
    fn short_faces_small() {
        assert_eq!(expected_short_faces_exact(4, 3).unwrap(), BigRational::from_integer(1.into()));
        assert_eq!(
            expected_short_faces_exact(5, 3).unwrap(),
            BigRational::new(20.into(), 27.into())
        );
    }

    #[test]
    fn space_size() {
        assert_eq!(rotation_space_size(&Graph::complete(5)), BigUint::from(7776u32));
    }
}
