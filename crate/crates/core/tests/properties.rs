use num_traits::Zero;
use proptest::prelude::*;

use slice_junta::extremal::is_realizable;
use slice_junta::influence::{level_influence_value, total_influence};
use slice_junta::junta::JuntaCertificate;
use slice_junta::noise::hypercontractivity_ratio;
use slice_junta::rational::{int, ratio, Rational};
use slice_junta::slice::harmonic::HarmonicSystem;
use slice_junta::slice::{decompose, degree, harmonic_representation, HarmonicBasis, SliceDomain, SliceFunction};
use slice_junta::transfer::{cube_to_slice, slice_to_cube, CubeFunction, UnivariatePolynomial};

fn domain_strategy() -> impl Strategy<Value = SliceDomain> {
    prop::sample::select(vec![(4, 2), (5, 2), (5, 3), (6, 2), (6, 3), (7, 3)])
        .prop_map(|(n, k)| SliceDomain::new(n, k).unwrap())
}

fn rational_function() -> impl Strategy<Value = SliceFunction> {
    domain_strategy().prop_flat_map(|dom| {
        let size = dom.size() as usize;
        prop::collection::vec((-4i64..=4, 1i64..=3), size).prop_map(move |v| {
            SliceFunction::from_values(dom.clone(), v.into_iter().map(|(p, q)| ratio(p, q)).collect()).unwrap()
        })
    })
}

fn boolean_function(n: usize, k: usize) -> impl Strategy<Value = SliceFunction> {
    let dom = SliceDomain::new(n, k).unwrap();
    prop::collection::vec(any::<bool>(), dom.size() as usize)
        .prop_map(move |bits| SliceFunction::from_bits(dom.clone(), &bits).unwrap())
}

/// Rank of a rational matrix by plain Gaussian elimination.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &rows[r][c];
                for j in c..cols {
                    let t = &factor * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Smallest `d` such that `f` agrees with some polynomial of degree `d`,
/// found by rank tests on restricted monomials.
fn brute_force_degree(f: &SliceFunction) -> usize {
    let dom = f.domain();
    let masks = dom.point_masks();
    let n = dom.n();
    for d in 0..=n {
        let monos: Vec<u64> = (0..1u64 << n).filter(|m| m.count_ones() as usize <= d).collect();
        let columns = |with_f: bool| -> Vec<Vec<Rational>> {
            masks
                .iter()
                .enumerate()
                .map(|(x, &b)| {
                    let mut row: Vec<Rational> =
                        monos.iter().map(|&m| if m & b == m { int(1) } else { int(0) }).collect();
                    if with_f {
                        row.push(f.values()[x].clone());
                    }
                    row
                })
                .collect()
        };
        if rank(columns(false)) == rank(columns(true)) {
            return d;
        }
    }
    unreachable!("the full monomial basis spans every function")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn representation_is_harmonic_and_agrees(f in rational_function()) {
        let p = harmonic_representation(&f).unwrap();
        prop_assert!(p.is_harmonic());
        prop_assert!(p.degree() <= f.domain().max_degree());
        for point in f.domain().points() {
            prop_assert_eq!(p.eval_bits(point.bits()), f.value(point).unwrap());
        }
    }

    #[test]
    fn levels_orthogonal_and_parseval(f in rational_function()) {
        let dec = decompose(&f).unwrap();
        let levels: Vec<SliceFunction> = (0..dec.levels().len()).map(|d| dec.level_function(d)).collect();
        let mut sum = Rational::zero();
        for (d, a) in levels.iter().enumerate() {
            for b in &levels[d + 1..] {
                prop_assert!(a.inner_product(b).unwrap().is_zero());
            }
            prop_assert_eq!(a.norm2_squared(), dec.level_norm2_squared(d));
            sum += a.norm2_squared();
        }
        prop_assert_eq!(sum, f.norm2_squared());
    }

    #[test]
    fn proportionality_on_pure_levels(f in boolean_function(6, 3)) {
        let dec = decompose(&f).unwrap();
        for d in 1..dec.levels().len() {
            let g = dec.level_function(d);
            let v = level_influence_value(&g).unwrap();
            if !v.is_zero() {
                prop_assert_eq!(total_influence(&g).unwrap() / v, ratio(1, 2));
            }
        }
    }

    #[test]
    fn restriction_commutes_with_transpositions(
        f in boolean_function(6, 3),
        i in 0usize..6,
        a in 0usize..6,
        b in 0usize..6,
        bit in any::<bool>(),
    ) {
        prop_assume!(a != b && a != i && b != i);
        // after deleting coordinate i, a and b shift down if they were above it
        let shift = |c: usize| if c > i { c - 1 } else { c };
        let lhs = f.apply_transposition(a, b).unwrap().restrict(i, bit).unwrap();
        let rhs = f.restrict(i, bit).unwrap().apply_transposition(shift(a), shift(b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn restriction_does_not_raise_degree(f in boolean_function(6, 3), i in 0usize..6, bit in any::<bool>()) {
        let r = f.restrict(i, bit).unwrap();
        prop_assert!(degree(&r).unwrap() <= degree(&f).unwrap());
    }

    #[test]
    fn ratio_nondecreasing_in_rho(f in boolean_function(6, 3)) {
        let mut prev = 0.0;
        for step in 1..=10 {
            let r = hypercontractivity_ratio(&f, step as f64 / 10.0).unwrap();
            prop_assert!(r >= prev - 1e-12, "ratio dropped from {prev} to {r}");
            prev = r;
        }
    }

    #[test]
    fn lagrange_matches_finite_differences(bits in prop::collection::vec(0u8..=1, 1..12), d in 1usize..6) {
        let samples: Vec<Rational> = bits.iter().take(d + 1).map(|&b| int(b as i64)).collect();
        let p = UnivariatePolynomial::newton_forward(&samples);
        let interpolated = bits.iter().enumerate().all(|(s, &b)| p.eval_int(s as i64) == int(b as i64));
        prop_assert_eq!(interpolated, is_realizable(&bits, d));
    }

    #[test]
    fn cube_round_trip(table in any::<u8>(), m in 1usize..=3, big in any::<bool>()) {
        let (n, k) = if big { (8, 4) } else { (6, 3) };
        let mask = (1u64 << (1 << m)) - 1;
        let g = CubeFunction::from_truth_table(m, table as u64 & mask).unwrap();
        let f = cube_to_slice(&g, n, k).unwrap();
        prop_assert!(degree(&f).unwrap() <= g.degree());
        let cert = JuntaCertificate::for_witness(&f, (0..m).collect()).unwrap();
        prop_assert_eq!(slice_to_cube(&f, &cert).unwrap(), g);
    }
}

#[test]
fn degree_matches_rank_oracle_on_c52() {
    let dom = SliceDomain::new(5, 2).unwrap();
    for t in (0u64..1 << 10).step_by(7) {
        let bits: Vec<bool> = (0..10).map(|x| (t >> x) & 1 == 1).collect();
        let f = SliceFunction::from_bits(dom.clone(), &bits).unwrap();
        assert_eq!(degree(&f).unwrap(), brute_force_degree(&f), "table {t:#b}");
    }
}

#[test]
fn representation_independent_of_equation_order() {
    let dom = SliceDomain::new(5, 2).unwrap();
    let system = HarmonicSystem::assemble(&dom).unwrap();
    let order: Vec<usize> = (0..system.num_equations()).rev().collect();
    let reordered = HarmonicBasis::from_system(&dom, system.reorder(&order));
    let cached = HarmonicBasis::for_domain(&dom).unwrap();
    for seed in 0..20u64 {
        let f = slice_junta::verify::random_boolean_function(&dom, seed, 0).unwrap();
        assert_eq!(reordered.represent(&f).unwrap(), cached.represent(&f).unwrap());
    }
}
