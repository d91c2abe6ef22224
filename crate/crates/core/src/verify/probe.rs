use num_traits::Zero;
use serde::Serialize;

use super::random_boolean_function;
use crate::error::{Error, Result};
use crate::influence::{level_influence_value, total_influence};
use crate::rational::{format_rational, Rational};
use crate::slice::{decompose, SliceDomain, SliceFunction};

/// Exhaustive probing decomposes every function exactly, one at a time.
pub const MAX_PROBE_EXHAUSTIVE_POINTS: u64 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeDomain {
    pub n: usize,
    pub k: usize,
    /// `None` probes every Boolean function on the slice.
    pub samples: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    pub k: usize,
    /// Truth-table index (exhaustive) or sample index.
    pub function: u64,
    pub level: usize,
    pub total_influence: String,
    pub level_value: String,
    pub ratio: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub seed: u64,
    pub domains: Vec<ProbeDomain>,
    /// The common ratio, when every row agrees.
    pub constant: Option<String>,
    pub consistent: bool,
    pub distinct_ratios: Vec<String>,
    /// Pure-level parts that vanish (0/0) and contribute no evidence.
    pub excluded: u64,
    pub dictator_total_influence: String,
    pub dictator_level_value: String,
    pub rows: Vec<ProbeRow>,
}

/// Ratio `total_influence / level_influence_value` on every non-zero
/// pure-level part `f^{=d}` of the probed Boolean functions.
pub fn influence_constant_probe(domains: &[ProbeDomain], seed: u64) -> Result<ProbeReport> {
    let mut rows = Vec::new();
    let mut excluded = 0;
    let mut distinct: Vec<Rational> = Vec::new();
    for pd in domains {
        let domain = SliceDomain::new(pd.n, pd.k)?;
        let functions: Box<dyn Iterator<Item = Result<(u64, SliceFunction)>>> = match pd.samples {
            None => {
                let size = domain.size();
                if size > MAX_PROBE_EXHAUSTIVE_POINTS {
                    return Err(Error::Capacity {
                        what: "exhaustive probe slice size C(n,k)",
                        actual: size,
                        limit: MAX_PROBE_EXHAUSTIVE_POINTS,
                    });
                }
                let d = domain.clone();
                Box::new((0..1u64 << size).map(move |t| Ok((t, super::function_from_table(&d, &[t])?))))
            }
            Some(count) => {
                let d = domain.clone();
                Box::new((0..count).map(move |i| Ok((i, random_boolean_function(&d, seed, i)?))))
            }
        };
        for item in functions {
            let (id, f) = item?;
            let dec = decompose(&f)?;
            for level in 0..dec.levels().len() {
                let g = dec.level_function(level);
                let total = total_influence(&g)?;
                let value = level_influence_value(&g)?;
                if value.is_zero() {
                    if !total.is_zero() {
                        return Err(Error::ClaimViolation(format!(
                            "level {level} of function {id} on C({},{}) has influence {} but zero level value",
                            pd.n,
                            pd.k,
                            format_rational(&total)
                        )));
                    }
                    excluded += 1;
                    continue;
                }
                let r = &total / &value;
                if !distinct.contains(&r) {
                    distinct.push(r.clone());
                }
                rows.push(ProbeRow {
                    n: pd.n,
                    k: pd.k,
                    function: id,
                    level,
                    total_influence: format_rational(&total),
                    level_value: format_rational(&value),
                    ratio: format_rational(&r),
                });
            }
        }
    }

    let dict = SliceFunction::dictator(SliceDomain::new(4, 2)?, 0)?;
    let consistent = distinct.len() <= 1;
    Ok(ProbeReport {
        seed,
        domains: domains.to_vec(),
        constant: if consistent { distinct.first().map(format_rational) } else { None },
        consistent,
        distinct_ratios: distinct.iter().map(format_rational).collect(),
        excluded,
        dictator_total_influence: format_rational(&total_influence(&dict)?),
        dictator_level_value: format_rational(&level_influence_value(&dict)?),
        rows,
    })
}
