mod common;

use common::{battery_rotation, check_configmodel, BATTERY, BUDGET};
use mapface::configmodel::{
    conjugacy_class_size, count_possible_faces, expected_faces_exact_cm, for_each_matching,
    possible_faces, sample_matching, total_faces_cm, DegreeSequence, FixedRotation,
};
use mapface::rng::substream;
use mapface::stats::chi_square;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::collections::HashMap;

#[test]
fn battery_passes_every_check() {
    for d in BATTERY {
        if let Err(e) = check_configmodel(&battery_rotation(d)) {
            panic!("{e}");
        }
    }
}

#[test]
fn face_totals_agree_across_enumerations() {
    for d in [&[3usize, 3][..], &[2, 2, 3, 3], &[4, 4, 4]] {
        let r = battery_rotation(d);
        let m = r.degree_sequence().m();
        let oracle = possible_faces(&r, m, BUDGET).unwrap();
        let via_faces = oracle
            .h
            .iter()
            .fold(BigUint::from(0u32), |a, (&k, &h)| a + conjugacy_class_size(m - k) * BigUint::from(h));
        assert_eq!(via_faces, total_faces_cm(&r, BUDGET).unwrap(), "{d:?}");
    }
}

#[test]
fn g1_is_twice_the_edge_count() {
    for d in BATTERY.iter().filter(|d| d.iter().all(|&x| x >= 2)) {
        let r = battery_rotation(d);
        let (_, g1) = count_possible_faces(&r, 1, BUDGET).unwrap();
        assert_eq!(g1 as usize, 2 * r.degree_sequence().m(), "{d:?}");
    }
}

#[test]
fn leaves_lower_g1() {
    // a degree-1 dart cannot be paired with its own predecessor
    let r = battery_rotation(&[1, 3]);
    assert_eq!(count_possible_faces(&r, 1, BUDGET).unwrap().1, 3);
}

#[test]
fn every_rotation_of_334_gives_the_same_mean() {
    let ds = DegreeSequence::new(vec![3, 3, 4]).unwrap();
    let base = expected_faces_exact_cm(&FixedRotation::canonical(&ds), BUDGET).unwrap();
    let cycles = [
        vec![vec![0, 2, 1], vec![3, 4, 5], vec![6, 7, 8, 9]],
        vec![vec![0, 1, 2], vec![3, 5, 4], vec![6, 9, 8, 7]],
        vec![vec![0, 2, 1], vec![3, 5, 4], vec![6, 8, 7, 9]],
    ];
    for c in &cycles {
        let r = FixedRotation::from_cycles(&ds, c).unwrap();
        assert_eq!(expected_faces_exact_cm(&r, BUDGET).unwrap(), base);
    }
}

#[test]
fn sampled_matchings_are_uniform() {
    let ds = DegreeSequence::new(vec![2, 2, 2]).unwrap();
    let mut index = HashMap::new();
    for_each_matching(6, |l| {
        let n = index.len();
        index.insert(l.to_vec(), n);
    });
    assert_eq!(index.len(), 15);
    let mut counts = vec![0u64; 15];
    let mut rng = substream(77, 0);
    for _ in 0..30_000 {
        let l = sample_matching(&ds, &mut rng);
        counts[index[l.partners()]] += 1;
    }
    let chi = chi_square(&counts, &[1.0 / 15.0; 15]);
    assert!(chi.p_value > 0.001, "p = {}", chi.p_value);
}

#[test]
fn budget_refusal() {
    let r = battery_rotation(&[4, 4, 4, 4, 4]);
    assert!(expected_faces_exact_cm(&r, 1000).is_err());
    assert!(conjugacy_class_size(10).to_u64().unwrap() > 1000);
}
