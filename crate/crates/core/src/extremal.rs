//! Extremal constructions: the alternating binomial polynomials, the longest
//! 0/1 prefix of a low-degree univariate polynomial, non-junta functions of
//! low degree, and the number of coordinates a low-degree cube function can
//! depend on.

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::junta::minimal_junta;
use crate::rational::{int, is_bit, Rational};
use crate::slice::{degree, SliceDomain, SliceFunction};
use crate::transfer::cube::truth_table_degree_and_support;
use crate::transfer::UnivariatePolynomial;

pub const MAX_ETA_DEGREE: usize = 14;

/// `2 * ceil((d+1)/2)`.
pub fn eta_lower_bound(d: usize) -> usize {
    2 * (d + 1).div_ceil(2)
}

pub fn eta_upper_bound(d: usize) -> usize {
    2 * d
}

/// `P_d(s) = sum_{e=0}^{d} (-1)^e C(s, e)`.
pub fn pd_polynomial(d: usize) -> Result<UnivariatePolynomial> {
    if d == 0 {
        return Err(Error::InvalidArgument("P_d needs d >= 1".into()));
    }
    let mut p = UnivariatePolynomial::zero();
    for e in 0..=d {
        let sign = if e % 2 == 0 { int(1) } else { int(-1) };
        p = p.add(&UnivariatePolynomial::binomial_basis(e).scale(&sign));
    }
    for s in 0..eta_lower_bound(d) {
        if !is_bit(&p.eval_int(s as i64)) {
            return Err(Error::ClaimViolation(format!("P_{d}({s}) is not 0/1")));
        }
    }
    Ok(p)
}

/// `(d+1)`-st finite difference stencil `(-1)^{d+1-j} C(d+1, j)`.
fn difference_stencil(d: usize) -> Vec<i64> {
    (0..=d + 1)
        .map(|j| {
            let c = binomial((d + 1) as u64, j as u64).expect("small binomial") as i64;
            if (d + 1 - j).is_multiple_of(2) {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// A 0/1 sequence of length `m` is the value sequence `P(0..m)` of some
/// polynomial of degree at most `d` iff `m <= d+1` or every `(d+1)`-st
/// finite difference vanishes.
pub fn is_realizable(seq: &[u8], d: usize) -> bool {
    if seq.len() <= d + 1 {
        return true;
    }
    let stencil = difference_stencil(d);
    seq.windows(d + 2)
        .all(|w| w.iter().zip(&stencil).map(|(&a, &c)| a as i64 * c).sum::<i64>() == 0)
}

/// Sequence `a_0..a_{m-1}` packed with `a_0` as the most significant bit, so
/// integer order is lexicographic order.
fn realizable_packed(bits: u32, m: usize, stencil: &[i64]) -> bool {
    let w = stencil.len();
    if m < w {
        return true;
    }
    (0..=m - w).all(|start| {
        let mut acc = 0i64;
        for (j, &c) in stencil.iter().enumerate() {
            acc += c * ((bits >> (m - 1 - start - j)) & 1) as i64;
        }
        acc == 0
    })
}

fn unpack(bits: u32, m: usize) -> Vec<u8> {
    (0..m).map(|i| ((bits >> (m - 1 - i)) & 1) as u8).collect()
}

/// Lexicographically smallest non-constant realizable sequence of length `m`,
/// found by sweeping all `2^m` sequences in prefix blocks.
fn smallest_witness(m: usize, d: usize) -> Option<u32> {
    let stencil = difference_stencil(d);
    let all_ones = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let block_bits = m.min(10);
    let blocks = 1u32 << (m - block_bits);
    let per_block = 1u32 << block_bits;
    (0..blocks).into_par_iter().find_map_first(|b| {
        let base = b << block_bits;
        (0..per_block)
            .map(|t| base | t)
            .find(|&s| s != 0 && s != all_ones && realizable_packed(s, m, &stencil))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaSearchResult {
    pub d: usize,
    pub eta: usize,
    /// Lexicographically smallest non-constant witness of length `eta`.
    pub witness: Vec<u8>,
    pub lower: usize,
    pub upper: usize,
    /// Length `eta + 1` was swept exhaustively without a non-constant witness.
    #[serde(skip)]
    pub certified_length: usize,
}

/// Longest prefix `0..eta` on which some non-constant polynomial of degree at
/// most `d` is 0/1 valued, by exhaustive search over 0/1 sequences.
pub fn eta(d: usize) -> Result<EtaSearchResult> {
    if d == 0 || d > MAX_ETA_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "eta search supports 1 <= d <= {MAX_ETA_DEGREE}, got {d}"
        )));
    }
    let upper = eta_upper_bound(d);
    // every non-constant sequence of length d+1 is realizable; the smallest is 0..01
    let mut witness = {
        let mut w = vec![0u8; d + 1];
        w[d] = 1;
        w
    };
    let mut m = d + 2;
    loop {
        if m > upper + 1 {
            return Err(Error::ClaimViolation(format!(
                "a non-constant degree-{d} witness of length {} exceeds the bound 2d",
                m - 1
            )));
        }
        match smallest_witness(m, d) {
            Some(bits) => {
                witness = unpack(bits, m);
                m += 1;
            }
            None => break,
        }
    }
    Ok(EtaSearchResult {
        d,
        eta: m - 1,
        witness,
        lower: eta_lower_bound(d),
        upper,
        certified_length: m,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaBounds {
    pub lower: usize,
    pub upper: usize,
    pub eta: usize,
}

/// Checks `2 ceil((d+1)/2) <= eta(d) <= 2d` and that the `P_d` prefix is an
/// admissible witness for the lower bound.
pub fn eta_bounds_check(d: usize) -> Result<EtaBounds> {
    let res = eta(d)?;
    let bounds = EtaBounds {
        lower: res.lower,
        upper: res.upper,
        eta: res.eta,
    };
    if !(bounds.lower <= bounds.eta && bounds.eta <= bounds.upper) {
        return Err(Error::ClaimViolation(format!(
            "eta({d}) = {} outside [{}, {}]",
            bounds.eta, bounds.lower, bounds.upper
        )));
    }
    let pd = pd_polynomial(d)?;
    let prefix: Vec<u8> = (0..bounds.lower)
        .map(|s| if pd.eval_int(s as i64).is_one() { 1 } else { 0 })
        .collect();
    let nonconstant = prefix.iter().any(|&b| b != prefix[0]);
    if !nonconstant || !is_realizable(&prefix, d) {
        return Err(Error::ClaimViolation(format!(
            "P_{d} prefix {prefix:?} is not a non-constant realizable sequence"
        )));
    }
    Ok(bounds)
}

/// The univariate polynomial used for `f_d` on weight-`k` slices: `P_d`
/// when its guaranteed 0/1 prefix covers `0..=k`, otherwise the polynomial
/// through the eta witness.
pub fn fd_polynomial(d: usize, k: usize) -> Result<UnivariatePolynomial> {
    let res = eta(d)?;
    if k >= res.eta {
        return Err(Error::Precondition(format!(
            "f_d needs k < eta({d}) = {}, got k = {k}",
            res.eta
        )));
    }
    if k < eta_lower_bound(d) {
        return pd_polynomial(d);
    }
    let samples: Vec<Rational> = res.witness[..=d].iter().map(|&b| int(b as i64)).collect();
    Ok(UnivariatePolynomial::newton_forward(&samples))
}

/// `f_d(x) = P(x_1 + ... + x_{floor(n/2)})` on `C(n,k)`: Boolean, degree at
/// most `d`, and not a junta on fewer than `floor(n/2)` coordinates whenever
/// `P` is non-constant on the achievable sums.
pub fn fd_construction(d: usize, n: usize, k: usize) -> Result<SliceFunction> {
    let p = fd_polynomial(d, k)?;
    let dom = SliceDomain::new(n, k)?;
    let half = n / 2;
    let half_mask = (1u64 << half) - 1;
    let f = SliceFunction::from_fn(dom, |x| p.eval_int((x.bits() & half_mask).count_ones() as i64))?;

    if !f.is_boolean() {
        return Err(Error::ClaimViolation(format!("f_{d} on C({n},{k}) is not Boolean")));
    }
    let deg = degree(&f)?;
    if deg > d {
        return Err(Error::ClaimViolation(format!("f_{d} on C({n},{k}) has degree {deg}")));
    }
    let lo = k.saturating_sub(n - half);
    let hi = k.min(half);
    let sums: Vec<Rational> = (lo..=hi).map(|s| p.eval_int(s as i64)).collect();
    if sums.windows(2).any(|w| w[0] != w[1]) {
        let size = minimal_junta(&f)?.size();
        if size < half {
            return Err(Error::ClaimViolation(format!(
                "f_{d} on C({n},{k}) is a {size}-junta, below floor(n/2) = {half}"
            )));
        }
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaBruteForce {
    /// `(m, number of degree-<=d Boolean functions on m inputs depending on all of them)`.
    pub per_m: Vec<(usize, u64)>,
    /// Largest `m` with a non-zero count.
    pub gamma: usize,
    /// Whether `gamma` reaches the `d 2^{d-1}` cap.
    pub cap_attained: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaBounds {
    pub d: usize,
    pub ns_upper: u64,
    pub brute_force: Option<GammaBruteForce>,
    pub notice: Option<String>,
}

/// Largest number of variables whose full truth-table space is swept.
const GAMMA_SWEEP_MAX_VARS: usize = 4;

/// `d 2^{d-1}` upper bound, plus an exhaustive determination of the exact
/// value when every candidate arity is small enough to sweep.
pub fn gamma_bounds(d: usize) -> Result<GammaBounds> {
    if d == 0 {
        return Err(Error::InvalidArgument("gamma needs d >= 1".into()));
    }
    if d >= 63 {
        return Err(Error::InvalidArgument(format!("degree {d} too large")));
    }
    let ns_upper = (d as u64) << (d - 1);
    if ns_upper > GAMMA_SWEEP_MAX_VARS as u64 {
        return Ok(GammaBounds {
            d,
            ns_upper,
            brute_force: None,
            notice: Some(format!(
                "brute force skipped: sweeping all truth tables on {ns_upper} inputs is infeasible"
            )),
        });
    }
    let per_m: Vec<(usize, u64)> = (1..=ns_upper as usize)
        .map(|m| {
            let full = (1u64 << m) - 1;
            let tables = 1u64 << (1u64 << m);
            let count = (0..tables)
                .into_par_iter()
                .filter(|&t| {
                    let (deg, support) = truth_table_degree_and_support(m, t);
                    deg <= d && support == full
                })
                .count() as u64;
            (m, count)
        })
        .collect();
    let gamma = per_m.iter().filter(|(_, c)| *c > 0).map(|(m, _)| *m).max().unwrap_or(0);
    Ok(GammaBounds {
        d,
        ns_upper,
        brute_force: Some(GammaBruteForce {
            per_m,
            gamma,
            cap_attained: gamma as u64 == ns_upper,
        }),
        notice: None,
    })
}

/// Definitions reported alongside eta; nothing here is computed.
pub const ZETA_XI_NOTE: &str = "zeta(d): least value such that every Boolean degree-d function on C(n,k) is an O(1)-junta when zeta(d) <= k <= n - zeta(d); \
xi(d): least value such that every such function is a gamma(d)-junta when xi(d) <= k <= n - xi(d). \
Known relations: d < zeta(d) <= xi(d) and zeta(d) >= eta(d). Neither is computed.";
