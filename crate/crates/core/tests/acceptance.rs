//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use slice_junta::extremal::{eta, eta_lower_bound, fd_construction, gamma_bounds, pd_polynomial};
use slice_junta::junta::{minimal_junta, zero_influence_partition};
use slice_junta::noise::{noise, noise_monte_carlo};
use slice_junta::rational::{format_rational, int, is_bit, to_f64};
use slice_junta::slice::{decompose, degree, harmonic_representation, SliceDomain, SliceFunction};
use slice_junta::transfer::{cube_to_slice, explicit_cube_polynomial, slice_to_cube};
use slice_junta::verify::{
    census, dichotomy_scan, function_from_table, hyper_scan, influence_constant_probe, random_boolean_function,
    CensusConfig, ProbeDomain,
};
use slice_junta::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const ANCHORS: &str = include_str!("data/anchors.json");

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool")
        .install(f)
}

fn eta_exact() -> Outcome {
    let mut notes = Vec::new();
    for (d, expected) in [(7, 9), (12, 16)] {
        let start = Instant::now();
        let r = single_threaded(|| eta(d)).map_err(e)?;
        let took = start.elapsed();
        check(r.eta == expected, || format!("eta({d}) = {}, expected {expected}", r.eta))?;
        check(took < Duration::from_secs(10), || format!("eta({d}) took {took:?}"))?;
        notes.push(format!("eta({d})={} in {:.3}s", r.eta, took.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn eta_bounds() -> Outcome {
    let start = Instant::now();
    let mut values = Vec::new();
    for d in 1..=12 {
        let r = eta(d).map_err(e)?;
        check(r.lower <= r.eta && r.eta <= r.upper, || {
            format!("eta({d}) = {} outside [{}, {}]", r.eta, r.lower, r.upper)
        })?;
        check(r.lower == 2 * (d + 1).div_ceil(2) && r.upper == 2 * d, || format!("bad bounds at d={d}"))?;
        values.push(r.eta.to_string());
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("eta(1..12) = [{}] in {:.3}s", values.join(", "), took.as_secs_f64()))
}

fn pd_prefix() -> Outcome {
    for d in 1..=14 {
        let p = pd_polynomial(d).map_err(e)?;
        for s in 0..eta_lower_bound(d) {
            let v = p.eval_int(s as i64);
            check(is_bit(&v), || format!("P_{d}({s}) = {}", format_rational(&v)))?;
        }
        check(p.degree() == d, || format!("P_{d} has degree {}", p.degree()))?;
    }
    Ok("P_d 0/1 on 0..2ceil((d+1)/2)-1 for d = 1..14".into())
}

fn degree_one_census() -> Outcome {
    let mut notes = Vec::new();
    for (n, k) in [(4, 2), (5, 2), (5, 3), (6, 2), (6, 3), (6, 4)] {
        let mut cfg = CensusConfig::exhaustive(n, k);
        cfg.workers = 8;
        let start = Instant::now();
        let r = census(&cfg).map_err(e)?;
        let took = start.elapsed();
        let lin = &r.degree_at_most_one;
        check(r.passed(), || format!("C({n},{k}) claims failed: {:?}", r.claims))?;
        check(lin.other == 0 && lin.max_junta_size <= 1, || format!("C({n},{k}): {lin:?}"))?;
        check(lin.count == 2 * n as u64 + 2, || format!("C({n},{k}): {} functions of degree <= 1", lin.count))?;
        check(r.functions == 1 << r.points, || format!("C({n},{k}) enumerated {}", r.functions))?;
        check(took < Duration::from_secs(600), || format!("C({n},{k}) took {took:?}"))?;
        notes.push(format!("C({n},{k}):{}", lin.count));
        if (n, k) == (6, 3) {
            notes.push(format!("(6,3) in {:.2}s", took.as_secs_f64()));
        }
    }
    Ok(notes.join(" "))
}

fn influence_constant() -> Outcome {
    let domains = [
        ProbeDomain { n: 4, k: 2, samples: None },
        ProbeDomain {
            n: 6,
            k: 3,
            samples: Some(100),
        },
    ];
    let r = influence_constant_probe(&domains, 1).map_err(e)?;
    check(r.consistent, || format!("ratios differ: {:?}", r.distinct_ratios))?;
    check(r.dictator_total_influence == "1/8", || r.dictator_total_influence.clone())?;
    check(r.dictator_level_value == "1/4", || r.dictator_level_value.clone())?;
    let c = r.constant.clone().ok_or("no evidence rows")?;
    check(c == "1/2", || format!("c = {c}"))?;
    Ok(format!(
        "c = {c} over {} rows ({} zero levels excluded); dictator 1/8 vs 1/4",
        r.rows.len(),
        r.excluded
    ))
}

fn exactness_one(f: &SliceFunction) -> Result<(), String> {
    let p = harmonic_representation(f).map_err(e)?;
    check(p.is_harmonic(), || "representation is not harmonic".into())?;
    for point in f.domain().points() {
        check(p.eval_bits(point.bits()) == f.value(point).map_err(e)?, || {
            "representation disagrees with f".into()
        })?;
    }
    let dec = decompose(f).map_err(e)?;
    let levels: Vec<SliceFunction> = (0..dec.levels().len()).map(|d| dec.level_function(d)).collect();
    for (d, a) in levels.iter().enumerate() {
        check(dec.level(d).unwrap().is_harmonic(), || format!("level {d} not harmonic"))?;
        for b in &levels[d + 1..] {
            check(a.inner_product(b).map_err(e)?.is_zero(), || format!("level {d} not orthogonal"))?;
        }
    }
    let parseval: slice_junta::Rational = (0..levels.len()).map(|d| dec.level_norm2_squared(d)).sum();
    check(parseval == f.norm2_squared(), || "Parseval fails".into())
}

fn exactness() -> Outcome {
    let d42 = SliceDomain::new(4, 2).unwrap();
    for t in 0..64u64 {
        exactness_one(&function_from_table(&d42, &[t]).map_err(e)?).map_err(|m| format!("C(4,2) #{t}: {m}"))?;
    }
    let d63 = SliceDomain::new(6, 3).unwrap();
    for i in 0..500 {
        let f = random_boolean_function(&d63, 6, i).map_err(e)?;
        exactness_one(&f).map_err(|m| format!("C(6,3) sample {i}: {m}"))?;
    }
    Ok("harmonic, orthogonal, Parseval on 64 + 500 functions".into())
}

fn transfer_suite() -> Outcome {
    let mut notes = Vec::new();
    for (n, k) in [(4, 2), (6, 3)] {
        let mut cfg = CensusConfig::exhaustive(n, k);
        cfg.workers = 8;
        cfg.collect_junta_sizes = Some((k, n - k));
        let r = census(&cfg).map_err(e)?;
        let dom = SliceDomain::new(n, k).unwrap();
        for t in &r.collected {
            let f = function_from_table(&dom, t).map_err(e)?;
            let ctx = |m: String| format!("C({n},{k}) table {t:?}: {m}");
            let cert = minimal_junta(&f).map_err(e)?;
            let d = degree(&f).map_err(e)?;
            let g = slice_to_cube(&f, &cert).map_err(e).map_err(ctx)?;
            check(g.degree() <= d, || ctx(format!("cube degree {} > {d}", g.degree())))?;
            let explicit = explicit_cube_polynomial(&f, &cert).map_err(e).map_err(ctx)?;
            for x in 0..1u64 << g.m() {
                check(&explicit.polynomial.eval_bits(x) == g.value(x), || ctx(format!("disagree at {x}")))?;
            }
            check(explicit.polynomial.degree() <= d && explicit.expanded_degree <= d, || {
                ctx("explicit polynomial degree too high".into())
            })?;
            if cert.size() == k {
                let back = cube_to_slice(&g, n, k).map_err(e).map_err(ctx)?;
                let g2 = slice_to_cube(&back, &minimal_junta(&back).map_err(e)?).map_err(e)?;
                check(g2 == g, || ctx("round trip changed g".into()))?;
            }
        }
        notes.push(format!("C({n},{k}): {} juntas", r.collected.len()));
    }
    Ok(notes.join(", "))
}

fn fd() -> Outcome {
    let f = fd_construction(2, 8, 3).map_err(e)?;
    check(f.is_boolean(), || "not Boolean".into())?;
    let d = degree(&f).map_err(e)?;
    check(d <= 2, || format!("degree {d}"))?;
    let size = minimal_junta(&f).map_err(e)?.size();
    check(size == 4, || format!("junta size {size}"))?;
    let classes = zero_influence_partition(&f).map_err(e)?.classes;
    check(classes == vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]], || format!("classes {classes:?}"))?;
    check(matches!(fd_construction(2, 8, 4), Err(Error::Precondition(_))), || "k = 4 accepted".into())?;
    Ok(format!("degree {d}, junta size 4, classes {{1..4}}, {{5..8}}; k = 4 rejected"))
}

fn dichotomy() -> Outcome {
    let t1 = dichotomy_scan(4, 2, 1, 8).map_err(e)?;
    check(t1.minimum.as_deref() == Some("1/6"), || format!("(4,2,1) minimum {:?}", t1.minimum))?;
    let t2 = dichotomy_scan(4, 2, 2, 8).map_err(e)?;
    for row in t2.rows.iter().skip(1) {
        let v = row.up_to_degree_min.as_deref().ok_or("missing minimum")?;
        check(!v.starts_with('-') && v != "0", || format!("non-positive minimum {v}"))?;
    }
    let anchors: Value = serde_json::from_str(ANCHORS).map_err(|x| x.to_string())?;
    let mut frozen = Vec::new();
    for a in anchors["dichotomy"].as_array().unwrap() {
        let (n, k) = (a["n"].as_u64().unwrap() as usize, a["k"].as_u64().unwrap() as usize);
        let table = dichotomy_scan(n, k, n, 8).map_err(e)?;
        for row in &table.rows {
            let expected = a["exact_degree_min"][row.degree.to_string()].as_str();
            check(row.exact_degree_min.as_deref() == expected, || {
                format!("C({n},{k}) degree {}: {:?} vs anchor {expected:?}", row.degree, row.exact_degree_min)
            })?;
        }
        if (n, k) == (6, 3) {
            frozen = table.rows.iter().filter_map(|r| r.exact_degree_min.clone()).collect();
        }
    }
    Ok(format!("(4,2,1) = 1/6; (6,3) by degree = [{}] matches anchors", frozen.join(", ")))
}

fn gamma() -> Outcome {
    let g1 = gamma_bounds(1).map_err(e)?;
    let b1 = g1.brute_force.ok_or("no brute force for d=1")?;
    check(b1.gamma == 1, || format!("gamma(1) = {}", b1.gamma))?;
    let start = Instant::now();
    let g2 = gamma_bounds(2).map_err(e)?;
    let took = start.elapsed();
    let b2 = g2.brute_force.ok_or("no brute force for d=2")?;
    check(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    check(b2.per_m == vec![(1, 2), (2, 10), (3, 32), (4, 24)], || format!("counts {:?}", b2.per_m))?;
    check(b2.gamma == 4 && b2.cap_attained, || format!("gamma(2) = {}", b2.gamma))?;
    Ok(format!(
        "gamma(1) = 1, gamma(2) = 4 (cap d 2^(d-1) = 4 attained, {} functions) in {:.2}s",
        b2.per_m[3].1,
        took.as_secs_f64()
    ))
}

fn noise_consistency() -> Outcome {
    let dom = SliceDomain::new(6, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let f = random_boolean_function(&dom, 12, i).map_err(e)?;
        let x = dom.unrank(rng.random_range(0..dom.size())).map_err(e)?;
        let rho: f64 = rng.random_range(0.1..0.9);
        let exact = noise(&f, rho).map_err(e)?.values[dom.rank(x).unwrap() as usize];
        let est = noise_monte_carlo(&f, rho, x, 100_000, 1000 + i).map_err(e)?;
        let dev = (est.mean - exact).abs();
        if est.stderr == 0.0 {
            check(dev < 1e-12, || format!("triple {i}: zero stderr but deviation {dev}"))?;
        } else {
            let z = dev / est.stderr;
            worst = worst.max(z);
            check(z <= 4.0, || format!("triple {i}: {z:.2} standard errors"))?;
        }
        let id = noise(&f, 1.0).map_err(e)?;
        for (a, b) in id.values.iter().zip(f.values()) {
            check((a - to_f64(b)).abs() <= 1e-12, || format!("T_1 differs on triple {i}"))?;
        }
    }
    Ok(format!("20 triples, worst deviation {worst:.2} standard errors; T_1 = identity"))
}

fn hyper() -> Outcome {
    let grid = [0.5, 1.0, 2.0, 4.0];
    let a = hyper_scan(6, 3, &grid, 1000, 3).map_err(e)?;
    let b = hyper_scan(6, 3, &grid, 1000, 3).map_err(e)?;
    let json_a = serde_json::to_string(&a).unwrap();
    check(json_a == serde_json::to_string(&b).unwrap(), || "scan not deterministic".into())?;
    check(a.rows.iter().all(|r| r.constant_ratio == 1.0), || "constant ratio differs from 1".into())?;
    let one = SliceFunction::constant(SliceDomain::new(6, 3).unwrap(), int(1)).unwrap();
    for r in &a.rows {
        check(slice_junta::noise::hypercontractivity_ratio(&one, r.rho).unwrap() == 1.0, || "constant".into())?;
    }
    let table: Vec<String> = a.rows.iter().map(|r| format!("e={}:{:.6}", r.exponent, r.max_ratio)).collect();
    let smallest = a.smallest_contractive_exponent.ok_or("no contractive exponent in the grid")?;
    Ok(format!("[{}]; smallest contractive exponent {smallest}", table.join(" ")))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("eta exact values", eta_exact),
        ("eta bounds", eta_bounds),
        ("P_d prefix", pd_prefix),
        ("degree-one census", degree_one_census),
        ("influence constant", influence_constant),
        ("exactness suite", exactness),
        ("transfer suite", transfer_suite),
        ("f_d construction", fd),
        ("dichotomy", dichotomy),
        ("gamma small degree", gamma),
        ("noise consistency", noise_consistency),
        ("hypercontractivity scan", hyper),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
