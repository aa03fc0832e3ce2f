mod common;

use common::{check_configmodel, check_map, check_union, random_mixed_graph, BATTERY};
use mapface::bounds::{beta_table, logsq_upper, lower_bound, short_face_expectation, BETA_N_MAX};
use mapface::configmodel::{expected_faces_exact_cm, DegreeSequence, FixedRotation};
use mapface::embed_random::{estimate_expected_faces, sample_uniform, trial_values, Sampler};
use mapface::enumerate::{expected_short_faces_exact, face_distribution, FaceCensus};
use mapface::rng::substream;
use mapface::stats::chi_square_two_sample;
use mapface::Graph;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn hist(pairs: &[(usize, u64)]) -> BTreeMap<usize, u64> {
    pairs.iter().copied().collect()
}

fn near(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn census(n: usize, fix_first: bool) -> Result<FaceCensus, String> {
    face_distribution(&Graph::complete(n), fix_first).map_err(|e| e.to_string())
}

fn c1_small_census() -> Outcome {
    let k4 = census(4, false)?;
    let k5 = census(5, false)?;
    if k4.by_faces != hist(&[(2, 14), (4, 2)]) || k4.by_genus != hist(&[(0, 2), (1, 14)]) {
        return Err(format!("K4 {:?} {:?}", k4.by_faces, k4.by_genus));
    }
    if k5.by_faces != hist(&[(1, 2340), (3, 4974), (5, 462)])
        || k5.by_genus != hist(&[(1, 462), (2, 4974), (3, 2340)])
    {
        return Err(format!("K5 {:?} {:?}", k5.by_faces, k5.by_genus));
    }
    if k4.expected_faces() != ratio(9, 4) || k4.expected_genus() != ratio(7, 8) {
        return Err("K4 means".into());
    }
    let (f5, g5) = (k5.expected_faces_f64(), k5.expected_genus_f64());
    if !near(f5, 2.517, 5e-4) || !near(g5, 2.24, 5e-3) {
        return Err(format!("K5 means {f5} {g5}"));
    }
    Ok(format!("E(F)=9/4, {f5:.4}; E(g)=7/8, {g5:.4}"))
}

fn c2_k6_census() -> Outcome {
    let c = census(6, true)?;
    let want = hist(&[
        (1, 41_582_592),
        (3, 124_250_208),
        (5, 24_613_800),
        (7, 654_576),
        (9, 1800),
    ]);
    if c.by_faces != want {
        return Err(format!("{:?}", c.by_faces));
    }
    let (f, g) = (c.expected_faces_f64(), c.expected_genus_f64());
    if !near(f, 2.836, 5e-4) || !near(g, 4.082, 5e-4) {
        return Err(format!("means {f} {g}"));
    }
    Ok(format!("E(F)={f:.4} E(g)={g:.4}"))
}

fn c3_reduction() -> Outcome {
    for n in [4, 5] {
        let full = census(n, false)?;
        let reduced = census(n, true)?;
        if full != reduced {
            return Err(format!("K{n}: {:?} vs {:?}", full.by_faces, reduced.by_faces));
        }
    }
    Ok("K4, K5 identical".into())
}

fn c4_monte_carlo() -> Outcome {
    let est = estimate_expected_faces(&Graph::complete(7), Sampler::Uniform, 2_000_000, 20_240_701);
    let dev = (est.mean - 3.1265).abs();
    if dev > 3.0 * est.stderr {
        return Err(format!("K7 mean {} ± {}", est.mean, est.stderr));
    }
    let k5 = Graph::complete(5);
    let draws = |sampler: Sampler, seed: u64| {
        let g = k5.clone();
        let v = trial_values(100_000, seed, move |rng| {
            mapface::embed_random::sample_with(sampler, &g, rng).count_faces() as u64
        });
        let mut h = vec![0u64; 3];
        for f in v {
            h[(f as usize - 1) / 2] += 1;
        }
        h
    };
    let uni = draws(Sampler::Uniform, 11);
    let mut ps = Vec::new();
    for (name, s, seed) in [("A", Sampler::ProcessA, 12), ("B", Sampler::ProcessB, 13)] {
        let chi = chi_square_two_sample(&uni, &draws(s, seed));
        if chi.p_value < 0.001 {
            return Err(format!("process {name} rejected, p={}", chi.p_value));
        }
        ps.push(chi.p_value);
    }
    Ok(format!(
        "K7 mean {:.4} ± {:.4}; p(A)={:.3} p(B)={:.3}",
        est.mean, est.stderr, ps[0], ps[1]
    ))
}

fn c5_envelopes() -> Outcome {
    for n in 10..=242 {
        let v = logsq_upper(n).map_err(|e| e.to_string())?;
        if v > 5.0 * (n as f64).ln() + 5.0 {
            return Err(format!("logsq({n}) = {v}"));
        }
    }
    let start = Instant::now();
    let t = beta_table(BETA_N_MAX).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let mut tightest = (0, f64::INFINITY);
    for n in 243..=BETA_N_MAX {
        let b = t.beta(n).unwrap();
        let cap = 5.0 * (n as f64).ln() + if n <= 558 { 5.0 } else { 0.0 };
        if b > cap {
            return Err(format!("β({n}) = {b} > {cap}"));
        }
        if cap - b < tightest.1 {
            tightest = (n, cap - b);
        }
    }
    if secs > 1800.0 {
        return Err(format!("β table took {secs:.0} s"));
    }
    Ok(format!(
        "β table in {secs:.1} s; least slack {:.4} at n={}",
        tightest.1, tightest.0
    ))
}

fn c6_sandwich() -> Outcome {
    let t = beta_table(50).map_err(|e| e.to_string())?;
    for n in [10usize, 15, 20, 30, 50] {
        let est = estimate_expected_faces(&Graph::complete(n), Sampler::Uniform, 20_000, 600 + n as u64);
        let (lo, hi) = est.interval(3.2905);
        let (floor, cap) = (lower_bound(n).unwrap(), t.beta(n).unwrap());
        if lo < floor || hi > cap {
            return Err(format!("n={n}: CI [{lo}, {hi}] vs [{floor}, {cap}]"));
        }
    }
    for n in 3..=6 {
        let exact = census(n, true)?.expected_faces().to_f64().unwrap();
        let (floor, cap) = (lower_bound(n).unwrap(), t.beta(n).unwrap());
        if exact < floor || exact > cap {
            return Err(format!("n={n}: E[F]={exact} vs [{floor}, {cap}]"));
        }
    }
    let k7 = 3.1265;
    if k7 < lower_bound(7).unwrap() || k7 > t.beta(7).unwrap() {
        return Err("n=7 published mean outside sandwich".into());
    }
    Ok("MC n∈{10,15,20,30,50}, exact n=3..6, published n=7".into())
}

fn c7_short_faces() -> Outcome {
    let k5 = expected_short_faces_exact(5, 3).map_err(|e| e.to_string())?;
    if k5 != ratio(20, 27) {
        return Err(format!("K5 F'_3 = {k5}"));
    }
    for n in 4..=6 {
        for k in 3..=n {
            let e = expected_short_faces_exact(n, k).map_err(|e| e.to_string())?;
            let f = short_face_expectation(n, k).map_err(|e| e.to_string())?;
            if e != f {
                return Err(format!("n={n} k={k}: census {e} vs formula {f}"));
            }
        }
    }
    Ok("K5 F'_3 = 20/27; n=4,5,6 all k".into())
}

fn c8_configmodel() -> Outcome {
    for d in BATTERY {
        check_configmodel(&common::battery_rotation(d))?;
    }
    Ok(format!("{} degree sequences", BATTERY.len()))
}

fn c9_fixed_r() -> Outcome {
    let ds = DegreeSequence::new(vec![3, 3, 4]).unwrap();
    let a = FixedRotation::canonical(&ds);
    let b = FixedRotation::from_cycles(&ds, &[vec![0, 2, 1], vec![3, 5, 4], vec![6, 8, 7, 9]])
        .map_err(|e| e.to_string())?;
    let ea = expected_faces_exact_cm(&a, common::BUDGET).map_err(|e| e.to_string())?;
    let eb = expected_faces_exact_cm(&b, common::BUDGET).map_err(|e| e.to_string())?;
    if ea != eb {
        return Err(format!("{ea} vs {eb}"));
    }
    Ok(format!("E[F_d] = {ea} for both"))
}

fn c10_properties() -> Outcome {
    let mut rng = substream(10, 0);
    let mut last = None;
    for i in 0..100_000u32 {
        let g = random_mixed_graph(&mut rng);
        let map = sample_uniform(&g, &mut rng);
        check_map(&map).map_err(|e| format!("map {i}: {e}"))?;
        if i % 10 == 0 {
            if let Some(prev) = &last {
                check_union(prev, &map).map_err(|e| format!("union {i}: {e}"))?;
            }
            last = Some(map);
        }
    }
    Ok("100000 maps, 0 violations".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact census K4/K5", c1_small_census),
        ("K6 fix-first census", c2_k6_census),
        ("fixed-rotation reduction", c3_reduction),
        ("Monte Carlo K7 and processes A/B", c4_monte_carlo),
        ("bound envelopes", c5_envelopes),
        ("soundness sandwich", c6_sandwich),
        ("short-face oracle", c7_short_faces),
        ("configuration model battery", c8_configmodel),
        ("fixed-rotation independence", c9_fixed_r),
        ("random map properties", c10_properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{secs:.1} s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
