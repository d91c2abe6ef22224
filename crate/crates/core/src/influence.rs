//! Pairwise and total influences on the slice.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{int, ratio, Rational};
use crate::slice::domain::swap_bits;
use crate::slice::{decompose, SliceDomain, SliceFunction};

/// `Inf_ij[f] = (1/4) E[(f - f^{(i j)})^2]`, valid for any real-valued `f`.
pub fn influence(f: &SliceFunction, i: usize, j: usize) -> Result<Rational> {
    check_pair(f.domain(), i, j)?;
    let dom = f.domain();
    let mut acc = Rational::zero();
    for (r, p) in dom.points().enumerate() {
        let diff = &f.values()[r] - f.value_at_bits(swap_bits(p.bits(), i, j));
        acc += &diff * &diff;
    }
    Ok(acc / int(4 * dom.size() as i64))
}

/// `Inf_ij[f] = (1/4) Pr[f(x) != f(x^{(i j)})]`, the Boolean definition.
pub fn influence_by_probability(f: &SliceFunction, i: usize, j: usize) -> Result<Rational> {
    check_pair(f.domain(), i, j)?;
    if !f.is_boolean() {
        return Err(Error::InvalidArgument(
            "probability form of the influence needs a Boolean function".into(),
        ));
    }
    let dom = f.domain();
    let changed = dom
        .points()
        .enumerate()
        .filter(|(r, p)| &f.values()[*r] != f.value_at_bits(swap_bits(p.bits(), i, j)))
        .count();
    Ok(ratio(changed as i64, 4 * dom.size() as i64))
}

fn check_pair(dom: &SliceDomain, i: usize, j: usize) -> Result<()> {
    dom.check_coord(i)?;
    dom.check_coord(j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "influence needs distinct coordinates, got {} twice",
            i + 1
        )));
    }
    Ok(())
}

/// All pairwise influences and the total influence.
#[derive(Clone, Debug, PartialEq)]
pub struct InfluenceProfile {
    pub domain: SliceDomain,
    /// Symmetric, zero diagonal.
    pub pairwise: Vec<Vec<Rational>>,
    pub total: Rational,
}

impl InfluenceProfile {
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.pairwise[i][j]
    }

    /// Smallest non-zero pairwise influence, if any.
    pub fn min_nonzero(&self) -> Option<Rational> {
        let n = self.domain.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| &self.pairwise[i][j])
            .filter(|v| !v.is_zero())
            .min()
            .cloned()
    }
}

pub fn influence_profile(f: &SliceFunction) -> Result<InfluenceProfile> {
    let n = f.domain().n();
    let mut pairwise = vec![vec![Rational::zero(); n]; n];
    let mut sum = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let v = influence(f, i, j)?;
            sum += &v;
            pairwise[i][j] = v.clone();
            pairwise[j][i] = v;
        }
    }
    Ok(InfluenceProfile {
        domain: f.domain().clone(),
        pairwise,
        total: sum / int(n as i64),
    })
}

/// `Inf[f] = (1/n) sum_{i<j} Inf_ij[f]`.
pub fn total_influence(f: &SliceFunction) -> Result<Rational> {
    Ok(influence_profile(f)?.total)
}

/// `sum_d d(n+1-d)/n * ||f^{=d}||^2`, the spectral expression for the total
/// influence. Computed from the exact decomposition, independently of
/// [`total_influence`].
pub fn level_influence_value(f: &SliceFunction) -> Result<Rational> {
    let dec = decompose(f)?;
    let n = f.domain().n() as i64;
    let mut acc = Rational::zero();
    for d in 1..dec.levels().len() {
        if dec.levels()[d].is_zero() {
            continue;
        }
        let d = d as i64;
        acc += ratio(d * (n + 1 - d), n) * dec.level_norm2_squared(d as usize);
    }
    Ok(acc)
}
