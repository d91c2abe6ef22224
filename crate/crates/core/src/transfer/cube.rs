use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, is_bit, Rational};
use crate::slice::MultilinearPolynomial;

pub const MAX_CUBE_VARS: usize = 24;

/// A function on `{0,1}^m`; bit `i` of the table index is `x_{i+1}`.
#[derive(Clone, Debug)]
pub struct CubeFunction {
    m: usize,
    values: Vec<Rational>,
    boolean: bool,
    expansion: OnceLock<MultilinearPolynomial>,
}

impl PartialEq for CubeFunction {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.values == other.values
    }
}

impl CubeFunction {
    pub fn from_values(m: usize, values: Vec<Rational>) -> Result<Self> {
        if m > MAX_CUBE_VARS {
            return Err(Error::Capacity {
                what: "cube variables",
                actual: m as u64,
                limit: MAX_CUBE_VARS as u64,
            });
        }
        if values.len() != 1 << m {
            return Err(Error::InvalidArgument(format!(
                "expected {} values for {m} variables, got {}",
                1u64 << m,
                values.len()
            )));
        }
        let boolean = values.iter().all(is_bit);
        Ok(CubeFunction {
            m,
            values,
            boolean,
            expansion: OnceLock::new(),
        })
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(u64) -> Rational) -> Result<Self> {
        if m > MAX_CUBE_VARS {
            return Err(Error::Capacity {
                what: "cube variables",
                actual: m as u64,
                limit: MAX_CUBE_VARS as u64,
            });
        }
        Self::from_values(m, (0..1u64 << m).map(&mut f).collect())
    }

    /// Boolean function whose truth table is the low `2^m` bits of `table`.
    pub fn from_truth_table(m: usize, table: u64) -> Result<Self> {
        if m > 6 {
            return Err(Error::InvalidArgument("packed truth tables need m <= 6".into()));
        }
        Self::from_fn(m, |x| int((table >> x & 1) as i64))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, x: u64) -> &Rational {
        &self.values[x as usize]
    }

    pub fn is_boolean(&self) -> bool {
        self.boolean
    }

    /// Exact multilinear expansion (Moebius transform of the table).
    pub fn expand(&self) -> &MultilinearPolynomial {
        self.expansion.get_or_init(|| {
            let mut a = self.values.clone();
            for i in 0..self.m {
                let bit = 1usize << i;
                for x in 0..a.len() {
                    if x & bit != 0 {
                        let lower = a[x ^ bit].clone();
                        a[x] -= lower;
                    }
                }
            }
            let terms = a.into_iter().enumerate().map(|(mask, c)| (mask as u64, c));
            MultilinearPolynomial::from_terms(self.m, terms).expect("masks fit in m variables")
        })
    }

    pub fn degree(&self) -> usize {
        self.expand().degree()
    }

    /// Sorted 0-based variables appearing in the expansion.
    pub fn relevant(&self) -> Vec<usize> {
        self.expand().variables()
    }

    /// Variables whose flip changes the value somewhere; equals [`Self::relevant`].
    pub fn sensitive_variables(&self) -> Vec<usize> {
        (0..self.m)
            .filter(|&i| {
                let bit = 1usize << i;
                (0..self.values.len()).any(|x| x & bit == 0 && self.values[x] != self.values[x | bit])
            })
            .collect()
    }
}

/// Degree and relevant-variable mask of a Boolean truth table via an integer
/// Moebius transform; the fast path for exhaustive sweeps.
pub fn truth_table_degree_and_support(m: usize, table: u64) -> (usize, u64) {
    let size = 1usize << m;
    let mut a = [0i32; 64];
    for (x, slot) in a.iter_mut().enumerate().take(size) {
        *slot = (table >> x & 1) as i32;
    }
    for i in 0..m {
        let bit = 1usize << i;
        for x in 0..size {
            if x & bit != 0 {
                a[x] -= a[x ^ bit];
            }
        }
    }
    let mut degree = 0;
    let mut support = 0u64;
    for (x, &c) in a.iter().enumerate().take(size) {
        if c != 0 {
            degree = degree.max(x.count_ones() as usize);
            support |= x as u64;
        }
    }
    (degree, support)
}

impl CubeFunction {
    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn constant_value(&self) -> Option<Rational> {
        self.is_constant().then(|| self.values.first().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn one(m: usize) -> Result<Self> {
        Self::from_fn(m, |_| Rational::one())
    }
}
