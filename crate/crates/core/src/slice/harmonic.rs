//! Unique harmonic multilinear representation of slice functions.
//!
//! For a slice `C(n,k)` with `m = min(k, n-k)`, the unknowns are the
//! coefficients of all multilinear monomials of degree at most `m`. The
//! system stacks one evaluation equation per slice point and one harmonicity
//! equation per monomial of degree at most `m - 1` (the coefficient of that
//! monomial in `sum_i dP/dx_i`). The system is square and non-singular, so it
//! is inverted once per `(n, k)` and every later representation is a single
//! matrix-vector product.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::domain::SliceDomain;
use super::function::SliceFunction;
use super::linalg::solve_fraction_free;
use super::polynomial::MultilinearPolynomial;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest slice accepted by the exact dense solve.
pub const MAX_EXACT_POINTS: u64 = 4096;

/// Cached inverse of the harmonic interpolation system for one slice.
pub struct HarmonicBasis {
    domain: SliceDomain,
    monomials: Vec<u64>,
    /// `coeff[t][x] / denom` is the contribution of `f(point x)` to monomial `t`.
    numer: Vec<Vec<BigInt>>,
    denom: BigInt,
    projectors: OnceLock<Vec<Vec<Vec<Rational>>>>,
}

type BasisCache = Mutex<HashMap<(usize, usize), Arc<HarmonicBasis>>>;

fn cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Monomials of degree at most `max_deg` over `n` variables, graded then by mask.
fn monomials_up_to(n: usize, max_deg: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let mut level: Vec<u64> = Vec::new();
        subsets_of_size(n, d, &mut level);
        out.extend(level);
    }
    out
}

fn subsets_of_size(n: usize, d: usize, out: &mut Vec<u64>) {
    if d > n {
        return;
    }
    if d == 0 {
        out.push(0);
        return;
    }
    // Gosper's hack
    let mut s: u64 = (1u64 << d) - 1;
    let limit = 1u64 << n;
    while s < limit {
        out.push(s);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

/// Assembled (unsolved) harmonic system, exposed so callers can re-solve it
/// with the equations in a different order.
pub struct HarmonicSystem {
    pub monomials: Vec<u64>,
    pub rows: Vec<Vec<BigInt>>,
    pub rhs: Vec<Vec<BigInt>>,
}

impl HarmonicSystem {
    pub fn assemble(domain: &SliceDomain) -> Result<Self> {
        check_exact_capacity(domain)?;
        let n = domain.n();
        let m = domain.max_degree();
        let monomials = monomials_up_to(n, m);
        let index: HashMap<u64, usize> = monomials.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let unknowns = monomials.len();
        let points = domain.size() as usize;

        let mut rows = Vec::with_capacity(unknowns);
        let mut rhs = Vec::with_capacity(unknowns);
        for (x, p) in domain.points().enumerate() {
            let bits = p.bits();
            let mut row = vec![BigInt::zero(); unknowns];
            for (col, &t) in monomials.iter().enumerate() {
                if t & bits == t {
                    row[col] = BigInt::one();
                }
            }
            let mut r = vec![BigInt::zero(); points];
            r[x] = BigInt::one();
            rows.push(row);
            rhs.push(r);
        }
        if m > 0 {
            for &low in monomials.iter().filter(|t| (t.count_ones() as usize) < m) {
                let mut row = vec![BigInt::zero(); unknowns];
                for i in 0..n {
                    if low >> i & 1 == 0 {
                        row[index[&(low | 1 << i)]] = BigInt::one();
                    }
                }
                rows.push(row);
                rhs.push(vec![BigInt::zero(); points]);
            }
        }
        assert_eq!(rows.len(), unknowns, "harmonic system must be square");
        Ok(HarmonicSystem { monomials, rows, rhs })
    }

    /// Reorders the equations: row `i` of the result is row `order[i]` of `self`.
    pub fn reorder(self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.rows.len());
        let rows = order.iter().map(|&i| self.rows[i].clone()).collect();
        let rhs = order.iter().map(|&i| self.rhs[i].clone()).collect();
        HarmonicSystem {
            monomials: self.monomials,
            rows,
            rhs,
        }
    }

    pub fn num_equations(&self) -> usize {
        self.rows.len()
    }

    fn solve(self, domain: &SliceDomain) -> HarmonicBasis {
        let sol = solve_fraction_free(self.rows, self.rhs)
            .expect("harmonic interpolation system is singular: representation must be unique");
        HarmonicBasis {
            domain: domain.clone(),
            monomials: self.monomials,
            numer: sol.numer,
            denom: sol.denom,
            projectors: OnceLock::new(),
        }
    }
}

fn check_exact_capacity(domain: &SliceDomain) -> Result<()> {
    if domain.size() > MAX_EXACT_POINTS {
        return Err(Error::Capacity {
            what: "slice size C(n,k) for the exact harmonic solve",
            actual: domain.size(),
            limit: MAX_EXACT_POINTS,
        });
    }
    Ok(())
}

impl HarmonicBasis {
    /// Shared basis for `domain`, solved on first use.
    pub fn for_domain(domain: &SliceDomain) -> Result<Arc<HarmonicBasis>> {
        check_exact_capacity(domain)?;
        let key = (domain.n(), domain.k());
        if let Some(b) = cache().lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        // solve outside the lock; a racing duplicate solve is harmless
        let basis = Arc::new(HarmonicSystem::assemble(domain)?.solve(domain));
        Ok(cache().lock().unwrap().entry(key).or_insert(basis).clone())
    }

    /// Solves a (possibly reordered) system without touching the cache.
    pub fn from_system(domain: &SliceDomain, system: HarmonicSystem) -> HarmonicBasis {
        system.solve(domain)
    }

    pub fn domain(&self) -> &SliceDomain {
        &self.domain
    }

    pub fn monomials(&self) -> &[u64] {
        &self.monomials
    }

    pub fn represent(&self, f: &SliceFunction) -> Result<MultilinearPolynomial> {
        self.domain.ensure_same(f.domain())?;
        let values = f.values();
        let denom = Rational::from_integer(self.denom.clone());
        let mut terms = Vec::with_capacity(self.monomials.len());
        // integer-valued inputs (the common case) stay in BigInt until the end
        let all_integer = values.iter().all(|v| v.is_integer());
        for (row, &t) in self.numer.iter().zip(&self.monomials) {
            let c = if all_integer {
                let mut acc = BigInt::zero();
                for (a, v) in row.iter().zip(values) {
                    if !a.is_zero() && !v.is_zero() {
                        acc += a * v.numer();
                    }
                }
                Rational::from_integer(acc) / &denom
            } else {
                let mut acc = Rational::zero();
                for (a, v) in row.iter().zip(values) {
                    if !a.is_zero() && !v.is_zero() {
                        acc += v * Rational::from_integer(a.clone());
                    }
                }
                acc / &denom
            };
            terms.push((t, c));
        }
        MultilinearPolynomial::from_terms(self.domain.n(), terms)
    }

    /// Level projectors as point-by-point matrices: `proj[d][x][y]` is the
    /// weight of `f(y)` in `f^{=d}(x)`.
    pub fn level_projectors(&self) -> &Vec<Vec<Vec<Rational>>> {
        self.projectors.get_or_init(|| {
            let points = self.domain.point_masks();
            let m = self.domain.max_degree();
            let denom = Rational::from_integer(self.denom.clone());
            let mut proj = vec![vec![vec![Rational::zero(); points.len()]; points.len()]; m + 1];
            for (x, &bits) in points.iter().enumerate() {
                for (row, &t) in self.numer.iter().zip(&self.monomials) {
                    if t & bits != t {
                        continue;
                    }
                    let d = t.count_ones() as usize;
                    for (y, a) in row.iter().enumerate() {
                        if !a.is_zero() {
                            proj[d][x][y] += Rational::from_integer(a.clone());
                        }
                    }
                }
                for level in proj.iter_mut() {
                    for v in level[x].iter_mut() {
                        *v /= &denom;
                    }
                }
            }
            proj
        })
    }

    /// Level projectors scaled to a common integer denominator, for the census
    /// inner loop. Fails if any 0/1 combination of a row could overflow `i64`.
    pub fn integer_projectors(&self) -> Result<IntegerProjectors> {
        let proj = self.level_projectors();
        let mut lcm = BigInt::one();
        for level in proj {
            for row in level {
                for v in row {
                    lcm = num_integer::lcm(lcm, v.denom().clone());
                }
            }
        }
        let points = self.domain.size() as usize;
        let mut columns = Vec::with_capacity(proj.len());
        for level in proj {
            // column-major: columns[y][x]
            let mut cols = vec![vec![0i64; points]; points];
            for (x, row) in level.iter().enumerate() {
                let mut row_abs: i128 = 0;
                for (y, v) in row.iter().enumerate() {
                    let scaled = (v * Rational::from_integer(lcm.clone())).to_integer();
                    let s = scaled.to_i64().ok_or(Error::Capacity {
                        what: "integer projector entry magnitude",
                        actual: u64::MAX,
                        limit: i64::MAX as u64,
                    })?;
                    row_abs += (s as i128).abs();
                    cols[y][x] = s;
                }
                if row_abs >= (1i128 << 62) {
                    return Err(Error::Capacity {
                        what: "integer projector row sum",
                        actual: row_abs.min(u64::MAX as i128) as u64,
                        limit: 1 << 62,
                    });
                }
            }
            columns.push(cols);
        }
        Ok(IntegerProjectors {
            scale: lcm,
            columns,
        })
    }
}

/// `columns[d][y][x] / scale` is the weight of `f(y)` in `f^{=d}(x)`.
pub struct IntegerProjectors {
    pub scale: BigInt,
    pub columns: Vec<Vec<Vec<i64>>>,
}

/// The levels `f^{=0}, ..., f^{=min(k,n-k)}` of a slice function.
#[derive(Clone, Debug)]
pub struct HarmonicDecomposition {
    domain: SliceDomain,
    levels: Vec<MultilinearPolynomial>,
}

impl HarmonicDecomposition {
    pub fn from_representation(domain: &SliceDomain, p: &MultilinearPolynomial) -> Self {
        let levels = (0..=domain.max_degree()).map(|d| p.homogeneous_part(d)).collect();
        HarmonicDecomposition {
            domain: domain.clone(),
            levels,
        }
    }

    pub fn domain(&self) -> &SliceDomain {
        &self.domain
    }

    pub fn levels(&self) -> &[MultilinearPolynomial] {
        &self.levels
    }

    pub fn level(&self, d: usize) -> Option<&MultilinearPolynomial> {
        self.levels.get(d)
    }

    /// Highest non-zero level; 0 for constants including the zero function.
    pub fn degree(&self) -> usize {
        self.levels.iter().rposition(|l| !l.is_zero()).unwrap_or(0)
    }

    /// `f^{=d}` tabulated on the slice.
    pub fn level_function(&self, d: usize) -> SliceFunction {
        let level = &self.levels[d];
        let values = self.domain.points().map(|p| level.eval_bits(p.bits())).collect();
        SliceFunction::from_values_unchecked(self.domain.clone(), values)
    }

    pub fn level_norm2_squared(&self, d: usize) -> Rational {
        self.level_function(d).norm2_squared()
    }

    /// Sum of all levels, i.e. the harmonic representation.
    pub fn total(&self) -> MultilinearPolynomial {
        self.levels
            .iter()
            .fold(MultilinearPolynomial::zero(self.domain.n()), |acc, l| acc.add(l))
    }
}

pub fn harmonic_representation(f: &SliceFunction) -> Result<MultilinearPolynomial> {
    HarmonicBasis::for_domain(f.domain())?.represent(f)
}

pub fn decompose(f: &SliceFunction) -> Result<HarmonicDecomposition> {
    let p = harmonic_representation(f)?;
    Ok(HarmonicDecomposition::from_representation(f.domain(), &p))
}

pub fn degree(f: &SliceFunction) -> Result<usize> {
    Ok(harmonic_representation(f)?.degree())
}
