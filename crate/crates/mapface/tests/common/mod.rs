#![allow(dead_code)]

use mapface::combmap::CombMap;
use mapface::configmodel::{
    conjugacy_class_size, expected_faces_exact_cm, expected_faces_formula, face_completion_count,
    gk_bounds, multigraph_bounds, possible_faces, DegreeSequence, FixedRotation,
};
use mapface::Graph;
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::Rng;

pub const BUDGET: u64 = 10_000_000;

/// Degree sequences with `m ≤ 6` used by the configuration-model checks.
pub const BATTERY: &[&[usize]] = &[
    &[3, 3],
    &[2, 2, 2],
    &[3, 3, 3, 3],
    &[2, 2, 3, 3],
    &[1, 1],
    &[2],
    &[4],
    &[1, 3],
    &[2, 2],
    &[1, 1, 1, 1],
    &[2, 4, 2],
    &[3, 3, 4],
    &[1, 2, 3, 4],
    &[4, 4, 4],
    &[6, 6],
    &[5, 5, 2],
    &[2, 2, 2, 2, 2, 2],
    &[12],
];

/// Random multigraph with loops and isolated vertices allowed.
pub fn random_multigraph<R: Rng + ?Sized>(rng: &mut R, max_n: usize, max_m: usize) -> Graph {
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(0..=max_m);
    let edges = (0..m)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect();
    Graph::new(n, edges).unwrap()
}

pub fn random_mixed_graph<R: Rng + ?Sized>(rng: &mut R) -> Graph {
    match rng.random_range(0..3) {
        0 => Graph::complete(rng.random_range(1..=8)),
        1 => {
            let n = rng.random_range(1..=10);
            let p = rng.random_range(0.05..=1.0);
            Graph::gnp(n, p, rng).unwrap()
        }
        _ => random_multigraph(rng, 7, 12),
    }
}

/// Invariants every map must satisfy; returns a description of the first violation.
pub fn check_map(map: &CombMap) -> Result<(), String> {
    let g = map.graph();
    let (k, _) = g.components();
    let faces = map.count_faces();
    let genus = map.genus().map_err(|e| format!("Euler integrality: {e}"))?;
    if g.m() as i64 - g.n() as i64 - faces as i64 + k as i64 + 1 != 2 * genus as i64 {
        return Err(format!("Euler: m={} n={} F={faces} k={k} g={genus}", g.m(), g.n()));
    }
    if k == 1 && (faces + g.n()) % 2 != g.m() % 2 {
        return Err(format!("parity: m={} n={} F={faces}", g.m(), g.n()));
    }
    let orbits = map.trace_faces();
    let mut seen = vec![false; map.num_darts()];
    for orbit in &orbits {
        for (i, &d) in orbit.iter().enumerate() {
            if std::mem::replace(&mut seen[d], true) {
                return Err(format!("dart {d} in two faces"));
            }
            let next = map.rotation().succ(map.matching().partner(d));
            if next != orbit[(i + 1) % orbit.len()] {
                return Err(format!("face orbit broken after dart {d}"));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err("faces do not cover all darts".into());
    }
    let isolated = g.degrees().iter().filter(|&&d| d == 0).count();
    if faces != orbits.len() + isolated + 1 - k {
        return Err(format!("face count {faces} vs {} orbits", orbits.len()));
    }
    Ok(())
}

/// `F(A ⊔ B) = F(A) + F(B) − 1` and genus is additive.
pub fn check_union(a: &CombMap, b: &CombMap) -> Result<(), String> {
    let u = a.disjoint_union(b);
    check_map(&u)?;
    if u.count_faces() != a.count_faces() + b.count_faces() - 1 {
        return Err(format!(
            "union faces {} vs {} + {} − 1",
            u.count_faces(),
            a.count_faces(),
            b.count_faces()
        ));
    }
    if u.genus().unwrap() != a.genus().unwrap() + b.genus().unwrap() {
        return Err("genus not additive".into());
    }
    Ok(())
}

/// All configuration-model checks for one fixed rotation.
pub fn check_configmodel(r: &FixedRotation) -> Result<BigRational, String> {
    let ds = r.degree_sequence();
    let m = ds.m();
    let exact = expected_faces_exact_cm(r, BUDGET).map_err(|e| e.to_string())?;
    let oracle = possible_faces(r, m, BUDGET).map_err(|e| e.to_string())?;
    let formula = expected_faces_formula(&oracle.h, m);
    if formula != exact {
        return Err(format!("{:?}: formula {formula} != exact {exact}", ds.degrees()));
    }
    for f in &oracle.faces {
        let c = face_completion_count(r, f, BUDGET).map_err(|e| e.to_string())?;
        if BigUint::from(c) != conjugacy_class_size(m - f.u) {
            return Err(format!("{:?}: completions of {:?} = {c}", ds.degrees(), f.walk));
        }
    }
    for k in 1..=m {
        let h = oracle.h.get(&k).copied().unwrap_or(0);
        let g = oracle.g.get(&k).copied().unwrap_or(0);
        if !(k as u64 * h <= g && g <= 2 * k as u64 * h) {
            return Err(format!("{:?}: k={k} h={h} g={g}", ds.degrees()));
        }
        // the closed forms assume minimum degree 2
        if ds.degrees().iter().any(|&d| d < 2) {
            continue;
        }
        let b = gk_bounds(m, k, ds.d_max()).map_err(|e| e.to_string())?;
        if BigUint::from(g) > b.upper || BigUint::from(g) < b.lower {
            return Err(format!("{:?}: g_{k}={g} outside [{}, {}]", ds.degrees(), b.lower, b.upper));
        }
    }
    let (lo, hi) = multigraph_bounds(m);
    if exact < lo || exact > hi {
        return Err(format!("{:?}: E[F]={exact} outside [{lo}, {hi}]", ds.degrees()));
    }
    Ok(exact)
}

pub fn battery_rotation(d: &[usize]) -> FixedRotation {
    FixedRotation::canonical(&DegreeSequence::new(d.to_vec()).unwrap())
}
