//! Averaging over permutations of trailing coordinates, and the collapse of
//! symmetric polynomials to univariate polynomials in the Hamming weight.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::univariate::UnivariatePolynomial;
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::slice::MultilinearPolynomial;

/// Averages `p` over all permutations of the coordinates `head..n` (0-based),
/// i.e. of `x_{head+1}, ..., x_n`.
///
/// A monomial's orbit is determined by its head part and the size of its tail
/// part, so the average is the pooled coefficient sum of each (head, tail
/// size) type divided by the number of tail subsets of that size.
pub fn symmetrize_trailing(p: &MultilinearPolynomial, head: usize) -> Result<MultilinearPolynomial> {
    let n = p.n();
    if head > n {
        return Err(Error::InvalidArgument(format!("head {head} exceeds n = {n}")));
    }
    let tail = n - head;
    let head_mask = if head == 64 { u64::MAX } else { (1u64 << head) - 1 };
    let mut pooled: BTreeMap<(u64, usize), Rational> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key = (m & head_mask, (m & !head_mask).count_ones() as usize);
        *pooled.entry(key).or_insert_with(Rational::zero) += c;
    }
    let mut out = MultilinearPolynomial::zero(n);
    for ((h, size), sum) in pooled {
        if sum.is_zero() {
            continue;
        }
        let count = binomial(tail as u64, size as u64).expect("tail binomial fits") as i64;
        let avg = sum / int(count);
        for_each_subset(tail, size, |s| out.add_term(h | s << head, avg.clone()));
    }
    Ok(out)
}

fn for_each_subset(n: usize, size: usize, mut f: impl FnMut(u64)) {
    if size > n {
        return;
    }
    if size == 0 {
        f(0);
        return;
    }
    let mut s: u64 = (1u64 << size) - 1;
    let limit = 1u64 << n;
    while s < limit {
        f(s);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

/// True when every coefficient depends only on the monomial size.
pub fn is_symmetric(p: &MultilinearPolynomial) -> bool {
    let n = p.n() as u64;
    let mut by_size: BTreeMap<usize, (&Rational, u64)> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = by_size.entry(m.count_ones() as usize).or_insert((c, 0));
        if e.0 != c {
            return false;
        }
        e.1 += 1;
    }
    by_size
        .iter()
        .all(|(&s, &(_, count))| Some(count) == binomial(n, s as u64))
}

/// Largest cube on which the collapse is checked point by point; larger
/// inputs are checked on one canonical point per weight.
const FULL_CHECK_VARS: usize = 20;

/// Univariate `R` with `R(|x|) = q(x)` for all `x` in `{0,1}^m`, where `q` is
/// symmetric in its `m` variables and `deg R <= deg q`.
///
/// `R` is interpolated on the weights `0..=deg q` and then checked against
/// `q` on the remaining cube points.
pub fn minsky_papert_collapse(q: &MultilinearPolynomial) -> Result<UnivariatePolynomial> {
    if !is_symmetric(q) {
        return Err(Error::Precondition(
            "collapse needs a polynomial symmetric in all its variables".into(),
        ));
    }
    let m = q.n();
    let e = q.degree();
    let weight_point = |w: usize| if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
    let samples: Vec<Rational> = (0..=e.min(m)).map(|w| q.eval_bits(weight_point(w))).collect();
    let r = UnivariatePolynomial::newton_forward(&samples);
    if r.degree() > e {
        return Err(Error::ClaimViolation(format!(
            "collapsed degree {} exceeds polynomial degree {e}",
            r.degree()
        )));
    }
    let check = |x: u64| -> Result<()> {
        if q.eval_bits(x) != r.eval_int(x.count_ones() as i64) {
            return Err(Error::ClaimViolation(format!(
                "symmetric polynomial disagrees with its weight collapse at {x:#b}"
            )));
        }
        Ok(())
    };
    if m <= FULL_CHECK_VARS {
        for x in 0..1u64 << m {
            check(x)?;
        }
    } else {
        for w in 0..=m {
            check(weight_point(w))?;
        }
    }
    Ok(r)
}
