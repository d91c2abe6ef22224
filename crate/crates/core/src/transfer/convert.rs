//! Conversions between juntas on the slice and functions on the cube.

use std::collections::BTreeMap;

use super::cube::CubeFunction;
use super::expanded::ExpandedPolynomial;
use super::symmetrize::{minsky_papert_collapse, symmetrize_trailing};
use super::univariate::UnivariatePolynomial;
use crate::error::{Error, Result};
use crate::junta::{minimal_junta, JuntaCertificate};
use crate::slice::{degree, harmonic_representation, MultilinearPolynomial, SliceDomain, SliceFunction};

/// Every pattern over `L` coordinates occurs on `C(n,k)` exactly when
/// `L <= k <= n - L`.
fn check_all_patterns_reachable(n: usize, k: usize, l: usize) -> Result<()> {
    if l > k || k + l > n {
        return Err(Error::Precondition(format!(
            "junta size L={l} on C({n},{k}) needs L <= k <= n-L so every cube pattern occurs"
        )));
    }
    Ok(())
}

/// The cube function `g` with `f(x) = g(x|_I)`, `I` the certificate witness in
/// increasing order.
pub fn slice_to_cube(f: &SliceFunction, cert: &JuntaCertificate) -> Result<CubeFunction> {
    let dom = f.domain();
    let l = cert.size();
    check_all_patterns_reachable(dom.n(), dom.k(), l)?;
    if !cert.verify(f) {
        return Err(Error::Precondition("junta certificate does not describe the function".into()));
    }
    let values = cert
        .table
        .iter()
        .map(|v| v.clone().ok_or_else(|| Error::Precondition("certificate table has gaps".into())))
        .collect::<Result<Vec<_>>>()?;
    let g = CubeFunction::from_values(l, values)?;

    let slice_degree = degree(f)?;
    if g.degree() > slice_degree {
        return Err(Error::ClaimViolation(format!(
            "extracted cube degree {} exceeds slice degree {slice_degree}",
            g.degree()
        )));
    }
    if minimal_junta(f)?.size() == l && g.relevant().len() != l {
        return Err(Error::ClaimViolation(format!(
            "cube function from a minimal {l}-junta depends on only {} coordinates",
            g.relevant().len()
        )));
    }
    Ok(g)
}

/// The explicit low-degree cube polynomial built from a slice junta:
/// `sum_H x^H R_H(k - x_1 - ... - x_L)` over head monomials `H`.
#[derive(Clone, Debug)]
pub struct ExplicitCubePolynomial {
    pub slice_degree: usize,
    /// `(head monomial mask, R_H)`, only non-zero pieces.
    pub pieces: Vec<(u64, UnivariatePolynomial)>,
    /// Degree of the sum before reducing `x_i^2 = x_i`.
    pub expanded_degree: usize,
    /// Multilinear reduction over `x_1..x_L`.
    pub polynomial: MultilinearPolynomial,
}

pub fn explicit_cube_polynomial(f: &SliceFunction, cert: &JuntaCertificate) -> Result<ExplicitCubePolynomial> {
    let g = slice_to_cube(f, cert)?;
    let dom = f.domain();
    let n = dom.n();
    let k = dom.k();
    let l = cert.size();

    let p = harmonic_representation(f)?;
    let d = p.degree();

    // witness coordinates become x_1..x_L, the rest follow in order
    let mut map = vec![0usize; n];
    let mut next_tail = l;
    for (i, slot) in map.iter_mut().enumerate() {
        if let Ok(t) = cert.witness.binary_search(&i) {
            *slot = t;
        } else {
            *slot = next_tail;
            next_tail += 1;
        }
    }
    let q = symmetrize_trailing(&p.permute_variables(&map)?, l)?;

    let head_mask = (1u64 << l) - 1;
    let tail_vars = n - l;
    let mut by_head: BTreeMap<u64, MultilinearPolynomial> = BTreeMap::new();
    for (m, c) in q.terms() {
        by_head
            .entry(m & head_mask)
            .or_insert_with(|| MultilinearPolynomial::zero(tail_vars))
            .add_term(m >> l, c.clone());
    }

    let mut pieces = Vec::new();
    let mut expanded = ExpandedPolynomial::zero(l);
    for (h, tail_poly) in by_head {
        let a = h.count_ones() as usize;
        let r = minsky_papert_collapse(&tail_poly)?;
        if r.is_zero() {
            continue;
        }
        if a > d || r.degree() > d - a {
            return Err(Error::ClaimViolation(format!(
                "piece for head monomial {h:#b} has degree {} + {a} > {d}",
                r.degree()
            )));
        }
        let piece = ExpandedPolynomial::monomial(l, h).mul(&ExpandedPolynomial::compose_shifted_sum(&r, l, k as i64));
        expanded = expanded.add(&piece);
        pieces.push((h, r));
    }

    let expanded_degree = expanded.degree();
    if expanded_degree > d {
        return Err(Error::ClaimViolation(format!(
            "explicit cube polynomial has degree {expanded_degree} > slice degree {d}"
        )));
    }
    let polynomial = expanded.multilinearize();
    for y in 0..1u64 << l {
        if &polynomial.eval_bits(y) != g.value(y) {
            return Err(Error::ClaimViolation(format!(
                "explicit cube polynomial disagrees with the junta table at pattern {y:#b}"
            )));
        }
    }
    Ok(ExplicitCubePolynomial {
        slice_degree: d,
        pieces,
        expanded_degree,
        polynomial,
    })
}

/// `f(x) = g(x_1, ..., x_L)` on `C(n,k)`.
pub fn cube_to_slice(g: &CubeFunction, n: usize, k: usize) -> Result<SliceFunction> {
    let l = g.m();
    check_all_patterns_reachable(n, k, l)?;
    let dom = SliceDomain::new(n, k)?;
    let low = (1u64 << l) - 1;
    let f = SliceFunction::from_fn(dom, |p| g.value(p.bits() & low).clone())?;

    let slice_degree = degree(&f)?;
    if slice_degree > g.degree() {
        return Err(Error::ClaimViolation(format!(
            "embedded slice degree {slice_degree} exceeds cube degree {}",
            g.degree()
        )));
    }
    if g.relevant().len() == l {
        let size = minimal_junta(&f)?.size();
        if size != l {
            return Err(Error::ClaimViolation(format!(
                "embedding of a function of all {l} inputs is a {size}-junta"
            )));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn dictator_to_identity() {
        let f = SliceFunction::dictator(SliceDomain::new(4, 2).unwrap(), 0).unwrap();
        let cert = minimal_junta(&f).unwrap();
        let g = slice_to_cube(&f, &cert).unwrap();
        assert_eq!(g, CubeFunction::from_truth_table(1, 0b10).unwrap());
        assert_eq!(g.degree(), 1);
        let e = explicit_cube_polynomial(&f, &cert).unwrap();
        assert_eq!(e.polynomial, MultilinearPolynomial::variable(1, 0));
        assert_eq!(e.expanded_degree, 1);
    }

    #[test]
    fn threshold_to_or() {
        let dom = SliceDomain::new(4, 2).unwrap();
        let f = SliceFunction::from_bool_fn(dom, |p| p.get(0) || p.get(1)).unwrap();
        let cert = minimal_junta(&f).unwrap();
        let g = slice_to_cube(&f, &cert).unwrap();
        assert_eq!(g, CubeFunction::from_truth_table(2, 0b1110).unwrap());
        assert_eq!(g.degree(), 2);
        let e = explicit_cube_polynomial(&f, &cert).unwrap();
        assert!(e.expanded_degree <= 2);
        assert_eq!(&e.polynomial, g.expand());
    }

    #[test]
    fn cube_to_slice_examples() {
        let id = CubeFunction::from_truth_table(1, 0b10).unwrap();
        let f = cube_to_slice(&id, 4, 2).unwrap();
        assert_eq!(f, SliceFunction::dictator(SliceDomain::new(4, 2).unwrap(), 0).unwrap());

        let and = CubeFunction::from_truth_table(2, 0b1000).unwrap();
        let f = cube_to_slice(&and, 6, 3).unwrap();
        assert_eq!(degree(&f).unwrap(), 2);
        assert_eq!(minimal_junta(&f).unwrap().size(), 2);

        let parity = CubeFunction::from_truth_table(2, 0b0110).unwrap();
        let f = cube_to_slice(&parity, 8, 4).unwrap();
        assert_eq!(degree(&f).unwrap(), 2);
        assert_eq!(minimal_junta(&f).unwrap().size(), 2);
        assert_eq!(slice_to_cube(&f, &minimal_junta(&f).unwrap()).unwrap(), parity);
    }

    #[test]
    fn precondition_gate() {
        let and = CubeFunction::from_truth_table(2, 0b1000).unwrap();
        assert!(matches!(cube_to_slice(&and, 4, 1), Err(Error::Precondition(_))));
        assert!(matches!(cube_to_slice(&and, 5, 4), Err(Error::Precondition(_))));
        let f = SliceFunction::constant(SliceDomain::new(4, 1).unwrap(), int(1)).unwrap();
        let cert = JuntaCertificate::for_witness(&f, vec![0, 1]).unwrap();
        assert!(matches!(slice_to_cube(&f, &cert), Err(Error::Precondition(_))));
    }
}
