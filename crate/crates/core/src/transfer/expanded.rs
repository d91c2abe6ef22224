//! Plain (not necessarily multilinear) multivariate polynomials, used to
//! expand `x^H * R(k - x_1 - ... - x_L)` before reducing on the cube.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::univariate::UnivariatePolynomial;
use crate::rational::{int, Rational};
use crate::slice::MultilinearPolynomial;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpandedPolynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl ExpandedPolynomial {
    pub fn zero(vars: usize) -> Self {
        ExpandedPolynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// `x^mask`, a product of distinct variables.
    pub fn monomial(vars: usize, mask: u64) -> Self {
        let exps = (0..vars).map(|i| (mask >> i & 1) as u32).collect();
        let mut p = Self::zero(vars);
        p.add_term(exps, Rational::one());
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `R(c - x_1 - ... - x_vars)` by Horner's rule.
    pub fn compose_shifted_sum(r: &UnivariatePolynomial, vars: usize, c: i64) -> Self {
        let mut lin = Self::constant(vars, int(c));
        for i in 0..vars {
            let mut e = vec![0; vars];
            e[i] = 1;
            lin.add_term(e, int(-1));
        }
        r.coeffs().iter().rev().fold(Self::zero(vars), |acc, coeff| {
            acc.mul(&lin).add(&Self::constant(vars, coeff.clone()))
        })
    }

    /// Reduces with `x_i^2 = x_i`, which preserves values on `{0,1}^vars`.
    pub fn multilinearize(&self) -> MultilinearPolynomial {
        let mut out = MultilinearPolynomial::zero(self.vars);
        for (e, c) in &self.terms {
            let mask = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            out.add_term(mask, c.clone());
        }
        out
    }
}
