use num_traits::{One, Signed, Zero};

use super::domain::{swap_bits, SliceDomain, SlicePoint};
use crate::error::{Error, Result};
use crate::rational::{int, is_bit, to_f64, Rational};

/// A function on the slice with exact rational values indexed by colex rank.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceFunction {
    domain: SliceDomain,
    values: Vec<Rational>,
    boolean: bool,
}

impl SliceFunction {
    pub fn from_values(domain: SliceDomain, values: Vec<Rational>) -> Result<Self> {
        domain.check_table_capacity()?;
        if values.len() as u64 != domain.size() {
            return Err(Error::InvalidArgument(format!(
                "expected {} values for C({},{}), got {}",
                domain.size(),
                domain.n(),
                domain.k(),
                values.len()
            )));
        }
        Ok(Self::from_values_unchecked(domain, values))
    }

    pub(crate) fn from_values_unchecked(domain: SliceDomain, values: Vec<Rational>) -> Self {
        let boolean = values.iter().all(is_bit);
        SliceFunction {
            domain,
            values,
            boolean,
        }
    }

    pub fn from_fn(domain: SliceDomain, mut f: impl FnMut(SlicePoint) -> Rational) -> Result<Self> {
        domain.check_table_capacity()?;
        let values = domain.points().map(&mut f).collect();
        Ok(Self::from_values_unchecked(domain, values))
    }

    pub fn from_bool_fn(domain: SliceDomain, mut f: impl FnMut(SlicePoint) -> bool) -> Result<Self> {
        Self::from_fn(domain, |p| if f(p) { Rational::one() } else { Rational::zero() })
    }

    /// Boolean function from bit-packed values: bit `r` of `bits` is the value at rank `r`.
    pub fn from_bits(domain: SliceDomain, bits: &[bool]) -> Result<Self> {
        let values = bits.iter().map(|&b| if b { int(1) } else { int(0) }).collect();
        Self::from_values(domain, values)
    }

    pub fn constant(domain: SliceDomain, c: Rational) -> Result<Self> {
        Self::from_fn(domain, |_| c.clone())
    }

    /// `x -> x_i` (0-based `i`).
    pub fn dictator(domain: SliceDomain, i: usize) -> Result<Self> {
        domain.check_coord(i)?;
        Self::from_bool_fn(domain, |p| p.get(i))
    }

    /// `x -> 1 - x_i`.
    pub fn anti_dictator(domain: SliceDomain, i: usize) -> Result<Self> {
        domain.check_coord(i)?;
        Self::from_bool_fn(domain, |p| !p.get(i))
    }

    pub fn domain(&self) -> &SliceDomain {
        &self.domain
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_boolean(&self) -> bool {
        self.boolean
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Packed 0/1 values, `None` unless Boolean.
    pub fn to_bits(&self) -> Option<Vec<bool>> {
        self.boolean
            .then(|| self.values.iter().map(|v| v.is_one()).collect())
    }

    pub fn value(&self, point: SlicePoint) -> Result<Rational> {
        let r = self.domain.rank(point)?;
        Ok(self.values[r as usize].clone())
    }

    pub(crate) fn value_at_bits(&self, bits: u64) -> &Rational {
        &self.values[self.domain.rank_bits(bits) as usize]
    }

    /// `E[f g]` under the uniform measure.
    pub fn inner_product(&self, other: &SliceFunction) -> Result<Rational> {
        self.domain.ensure_same(&other.domain)?;
        let sum: Rational = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        Ok(sum / int(self.domain.size() as i64))
    }

    pub fn norm2_squared(&self) -> Rational {
        let sum: Rational = self.values.iter().map(|v| v * v).sum();
        sum / int(self.domain.size() as i64)
    }

    /// `E[|f|^p]^{1/p}` in floating point.
    pub fn p_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidArgument(format!("p-norm needs p >= 1, got {p}")));
        }
        let mean = self.values.iter().map(|v| to_f64(&v.abs()).powf(p)).sum::<f64>()
            / self.domain.size() as f64;
        Ok(mean.powf(1.0 / p))
    }

    pub fn sub(&self, other: &SliceFunction) -> Result<SliceFunction> {
        self.domain.ensure_same(&other.domain)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self::from_values_unchecked(self.domain.clone(), values))
    }

    pub fn scale(&self, s: &Rational) -> SliceFunction {
        let values = self.values.iter().map(|v| v * s).collect();
        Self::from_values_unchecked(self.domain.clone(), values)
    }

    /// `f^{(i j)}(x) = f(x^{(i j)})`.
    pub fn apply_transposition(&self, i: usize, j: usize) -> Result<SliceFunction> {
        self.domain.check_coord(i)?;
        self.domain.check_coord(j)?;
        if i == j {
            return Err(Error::InvalidArgument(format!(
                "transposition needs distinct coordinates, got {} twice",
                i + 1
            )));
        }
        let values = self
            .domain
            .points()
            .map(|p| self.value_at_bits(swap_bits(p.bits(), i, j)).clone())
            .collect();
        Ok(Self::from_values_unchecked(self.domain.clone(), values))
    }

    /// Restriction to `x_i = b`, as a function on `C(n-1, k-b)` with
    /// coordinate `i` deleted and the rest renumbered in order.
    pub fn restrict(&self, i: usize, b: bool) -> Result<SliceFunction> {
        self.domain.check_coord(i)?;
        let n = self.domain.n();
        let k = self.domain.k();
        let bit = b as usize;
        if n < 2 || k < bit || k - bit > n - 1 {
            return Err(Error::Precondition(format!(
                "restricting x_{} = {} on C({n},{k}) leaves a degenerate slice",
                i + 1,
                bit
            )));
        }
        let target = SliceDomain::new(n - 1, k - bit)?;
        let low_mask = (1u64 << i) - 1;
        let values = target
            .points()
            .map(|p| {
                let y = p.bits();
                let lifted = (y & low_mask) | ((y & !low_mask) << 1) | ((bit as u64) << i);
                self.value_at_bits(lifted).clone()
            })
            .collect();
        Ok(Self::from_values_unchecked(target, values))
    }
}
