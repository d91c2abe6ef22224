use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// A multilinear polynomial in `x_1, ..., x_n` with exact rational coefficients.
///
/// Monomials are keyed by the bitmask of their variables (bit `i` is `x_{i+1}`).
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultilinearPolynomial {
    n: usize,
    terms: BTreeMap<u64, Rational>,
}

impl MultilinearPolynomial {
    pub fn zero(n: usize) -> Self {
        MultilinearPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(0, c);
        p
    }

    pub fn variable(n: usize, i: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(1 << i, Rational::one());
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (mask, c) in terms {
            if n < 64 && mask >> n != 0 {
                return Err(Error::InvalidArgument(format!(
                    "monomial {mask:#b} uses variables beyond x_{n}"
                )));
            }
            p.add_term(mask, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `c * x^mask`, dropping the term if it cancels.
    pub fn add_term(&mut self, mask: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn coeff(&self, mask: u64) -> Rational {
        self.terms.get(&mask).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial size; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Sum of the degree-`d` monomials.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        MultilinearPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() as usize == d)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    /// Value at a 0/1 point given by its support bitmask.
    pub fn eval_bits(&self, x: u64) -> Rational {
        let mut acc = Rational::zero();
        for (&m, c) in &self.terms {
            if m & x == m {
                acc += c;
            }
        }
        acc
    }

    /// Value at an arbitrary rational point.
    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.n,
                x.len()
            )));
        }
        let mut acc = Rational::zero();
        for (&m, c) in &self.terms {
            let mut term = c.clone();
            let mut bits = m;
            while bits != 0 {
                term *= &x[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            acc += term;
        }
        Ok(acc)
    }

    /// `sum_i dP/dx_i`, which vanishes identically exactly when `P` is harmonic.
    pub fn derivative_sum(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (&m, c) in &self.terms {
            let mut bits = m;
            while bits != 0 {
                let low = bits & bits.wrapping_neg();
                out.add_term(m ^ low, c.clone());
                bits ^= low;
            }
        }
        out
    }

    pub fn is_harmonic(&self) -> bool {
        self.derivative_sum().is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        MultilinearPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(&m, c)| (m, c * s)).collect(),
        }
    }

    /// Renames variable `i` to `map[i]`; `map` must be a permutation of `0..n`.
    pub fn permute_variables(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.n {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        let mut seen = vec![false; self.n];
        for &t in map {
            if t >= self.n || std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let mut out = Self::zero(self.n);
        for (&m, c) in &self.terms {
            let mut image = 0u64;
            let mut bits = m;
            while bits != 0 {
                image |= 1 << map[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            out.add_term(image, c.clone());
        }
        Ok(out)
    }

    /// Sorted 0-based indices of the variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        let all = self.terms.keys().fold(0u64, |acc, m| acc | m);
        (0..self.n).filter(|&i| all >> i & 1 == 1).collect()
    }
}

impl fmt::Debug for MultilinearPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultilinearPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded order reads better than raw mask order
        let mut keys: Vec<u64> = self.terms.keys().copied().collect();
        keys.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
        for (idx, m) in keys.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", format_rational(&self.terms[m]))?;
            let mut bits = *m;
            while bits != 0 {
                write!(f, "*x{}", bits.trailing_zeros() + 1)?;
                bits &= bits - 1;
            }
        }
        Ok(())
    }
}
