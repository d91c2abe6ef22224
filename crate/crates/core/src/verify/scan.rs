use serde::Serialize;

use super::census::{census, CensusConfig};
use super::random_boolean_function;
use crate::error::{Error, Result};
use crate::noise::{ratio_from_tables, LevelTables};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::slice::{decompose, SliceDomain};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyRow {
    pub degree: usize,
    /// Smallest positive influence among functions of exactly this degree.
    pub exact_degree_min: Option<String>,
    /// Smallest positive influence among functions of degree at most this.
    pub up_to_degree_min: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyTable {
    pub n: usize,
    pub k: usize,
    pub max_degree: usize,
    pub rows: Vec<DichotomyRow>,
    pub minimum: Option<String>,
}

/// Smallest non-zero `Inf_ij` over all Boolean functions of degree at most
/// `d` on `C(n,k)`, by exhaustive census.
pub fn dichotomy_scan(n: usize, k: usize, d: usize, workers: usize) -> Result<DichotomyTable> {
    let mut cfg = CensusConfig::exhaustive(n, k);
    cfg.max_degree = Some(d);
    cfg.workers = workers;
    let report = census(&cfg)?;
    let top = d.min(SliceDomain::new(n, k)?.max_degree());
    let mut exact: Vec<Option<Rational>> = vec![None; top + 1];
    for row in &report.min_nonzero_influence {
        exact[row.degree] = Some(parse_rational(&row.min_nonzero_influence)?);
    }
    let mut running: Option<Rational> = None;
    let rows = exact
        .iter()
        .enumerate()
        .map(|(degree, m)| {
            if let Some(v) = m {
                if running.as_ref().is_none_or(|r| v < r) {
                    running = Some(v.clone());
                }
            }
            DichotomyRow {
                degree,
                exact_degree_min: m.as_ref().map(format_rational),
                up_to_degree_min: running.as_ref().map(format_rational),
            }
        })
        .collect();
    Ok(DichotomyTable {
        n,
        k,
        max_degree: d,
        rows,
        minimum: running.as_ref().map(format_rational),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperRow {
    pub exponent: f64,
    pub rho: f64,
    pub max_ratio: f64,
    /// First sample attaining the maximum.
    pub argmax: u64,
    pub constant_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperScan {
    pub n: usize,
    pub k: usize,
    pub samples: u64,
    pub seed: u64,
    /// `2k(n-k) / (n(n-1))`.
    pub base: f64,
    pub rows: Vec<HyperRow>,
    /// Smallest grid exponent whose maximum ratio is at most `1 + 1e-9`.
    pub smallest_contractive_exponent: Option<f64>,
}

pub const CONTRACTION_SLACK: f64 = 1e-9;

/// For each exponent `e`, sets `rho = base^e` and records the largest
/// `||T_rho f||_2 / ||f||_{4/3}` over seeded uniform Boolean functions.
pub fn hyper_scan(n: usize, k: usize, exponents: &[f64], samples: u64, seed: u64) -> Result<HyperScan> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    if let Some(e) = exponents.iter().find(|e| !e.is_finite() || **e < 0.0) {
        return Err(Error::InvalidArgument(format!("exponent {e} must be finite and non-negative")));
    }
    let domain = SliceDomain::new(n, k)?;
    if n < 2 || k == 0 || k == n {
        return Err(Error::InvalidArgument(format!("C({n},{k}) has no transpositions to scan")));
    }
    let base = (2 * k * (n - k)) as f64 / (n * (n - 1)) as f64;
    let rhos: Vec<f64> = exponents.iter().map(|e| base.powf(*e)).collect();
    if let Some(r) = rhos.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
        return Err(Error::InvalidArgument(format!("rho {r} underflows (0,1]")));
    }
    let mut best = vec![(f64::NEG_INFINITY, 0u64); rhos.len()];
    for i in 0..samples {
        let f = random_boolean_function(&domain, seed, i)?;
        let ratios: Vec<f64> = if f.is_constant() {
            let one = f.values()[0] == crate::rational::int(1);
            vec![if one { 1.0 } else { 0.0 }; rhos.len()]
        } else {
            let tables = LevelTables::new(&decompose(&f)?);
            let norm = f.p_norm(4.0 / 3.0)?;
            rhos.iter().map(|&r| ratio_from_tables(&tables, norm, r)).collect()
        };
        for (b, r) in best.iter_mut().zip(ratios) {
            if r > b.0 {
                *b = (r, i);
            }
        }
    }
    let one = crate::slice::SliceFunction::constant(domain.clone(), crate::rational::int(1))?;
    let rows: Vec<HyperRow> = exponents
        .iter()
        .zip(&rhos)
        .zip(&best)
        .map(|((&exponent, &rho), &(max_ratio, argmax))| {
            Ok(HyperRow {
                exponent,
                rho,
                max_ratio,
                argmax,
                constant_ratio: crate::noise::hypercontractivity_ratio(&one, rho)?,
            })
        })
        .collect::<Result<_>>()?;
    let smallest = rows
        .iter()
        .filter(|r| r.max_ratio <= 1.0 + CONTRACTION_SLACK)
        .map(|r| r.exponent)
        .min_by(f64::total_cmp);
    Ok(HyperScan {
        n,
        k,
        samples,
        seed,
        base,
        rows,
        smallest_contractive_exponent: smallest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dichotomy_small() {
        let t = dichotomy_scan(4, 2, 1, 1).unwrap();
        assert_eq!(t.minimum.as_deref(), Some("1/6"));
        assert_eq!(t.rows[0].exact_degree_min, None);
        let t2 = dichotomy_scan(4, 2, 2, 1).unwrap();
        assert!(t2.minimum.is_some());
    }

    #[test]
    fn hyper_small() {
        let s = hyper_scan(4, 2, &[0.5, 8.0], 20, 1).unwrap();
        assert_eq!(s.rows.len(), 2);
        assert!(s.rows.iter().all(|r| r.constant_ratio == 1.0));
        assert!(s.rows[1].max_ratio <= 1.0 + CONTRACTION_SLACK);
        let again = hyper_scan(4, 2, &[0.5, 8.0], 20, 1).unwrap();
        assert_eq!(s.rows[0].max_ratio, again.rows[0].max_ratio);
        assert!(hyper_scan(4, 2, &[-1.0], 1, 0).is_err());
    }
}
