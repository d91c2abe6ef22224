//! The noise operator on the slice and the hypercontractivity ratio.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::slice::domain::swap_bits;
use crate::slice::{decompose, HarmonicDecomposition, SliceDomain, SliceFunction, SlicePoint};

/// A real-valued (floating point) function on the slice.
#[derive(Clone, Debug)]
pub struct RealSliceFunction {
    pub domain: SliceDomain,
    pub values: Vec<f64>,
}

impl RealSliceFunction {
    pub fn p_norm(&self, p: f64) -> f64 {
        let mean = self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / self.values.len() as f64;
        mean.powf(1.0 / p)
    }

    pub fn norm2(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64).sqrt()
    }
}

/// Exponent applied to `rho` on level `d`: `d (1 - (d-1)/n)`.
pub fn level_exponent(d: usize, n: usize) -> f64 {
    d as f64 * (1.0 - (d as f64 - 1.0) / n as f64)
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidArgument(format!("rho must lie in (0, 1], got {rho}")));
    }
    Ok(())
}

/// Level values tabulated in floating point, reused across many `rho`.
pub struct LevelTables {
    pub n: usize,
    /// `levels[d][x]`; exact values rounded once.
    pub levels: Vec<Vec<f64>>,
}

impl LevelTables {
    pub fn new(dec: &HarmonicDecomposition) -> Self {
        let levels = (0..dec.levels().len())
            .map(|d| dec.level_function(d).values().iter().map(to_f64).collect())
            .collect();
        LevelTables {
            n: dec.domain().n(),
            levels,
        }
    }

    pub fn noisy_values(&self, rho: f64) -> Vec<f64> {
        let size = self.levels[0].len();
        let mut out = vec![0.0; size];
        for (d, level) in self.levels.iter().enumerate() {
            let w = rho.powf(level_exponent(d, self.n));
            for (o, v) in out.iter_mut().zip(level) {
                *o += w * v;
            }
        }
        out
    }
}

/// `T_rho f = sum_d rho^{d(1-(d-1)/n)} f^{=d}`.
pub fn noise(f: &SliceFunction, rho: f64) -> Result<RealSliceFunction> {
    check_rho(rho)?;
    let tables = LevelTables::new(&decompose(f)?);
    Ok(RealSliceFunction {
        domain: f.domain().clone(),
        values: tables.noisy_values(rho),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Estimates `(T_rho f)(x)` as `E[f(y)]` where `y` is `x` after
/// `N ~ Poisson((n-1)/2 * ln(1/rho))` uniformly random transpositions.
pub fn noise_monte_carlo(
    f: &SliceFunction,
    rho: f64,
    x: SlicePoint,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidArgument(format!("rho must lie in (0, 1), got {rho}")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let dom = f.domain();
    dom.rank(x)?;
    let n = dom.n();
    let values: Vec<f64> = f.values().iter().map(to_f64).collect();
    if f.is_constant() {
        return Ok(MonteCarloEstimate {
            mean: values.first().copied().unwrap_or(0.0),
            stderr: 0.0,
            samples,
        });
    }
    let mean_steps = (n as f64 - 1.0) / 2.0 * (1.0 / rho).ln();
    let poisson = (mean_steps > 0.0).then(|| Poisson::new(mean_steps).expect("positive Poisson mean"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let steps = poisson.as_ref().map_or(0, |p| p.sample(&mut rng) as u64);
        let mut bits = x.bits();
        for _ in 0..steps {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            bits = swap_bits(bits, i, j);
        }
        let v = values[dom.rank_bits(bits) as usize];
        sum += v;
        sum_sq += v * v;
    }
    let s = samples as f64;
    let mean = sum / s;
    let var = if samples > 1 {
        ((sum_sq - s * mean * mean) / (s - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        mean,
        stderr: (var / s).sqrt(),
        samples,
    })
}

/// `||T_rho f||_2 / ||f||_{4/3}`; 0 for the zero function, exactly 1 for
/// non-zero constants.
pub fn hypercontractivity_ratio(f: &SliceFunction, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if f.is_constant() {
        let zero = f.values().first().is_none_or(|v| *v == crate::rational::int(0));
        return Ok(if zero { 0.0 } else { 1.0 });
    }
    let tables = LevelTables::new(&decompose(f)?);
    Ok(ratio_from_tables(&tables, f.p_norm(4.0 / 3.0)?, rho))
}

pub(crate) fn ratio_from_tables(tables: &LevelTables, four_thirds_norm: f64, rho: f64) -> f64 {
    let noisy = tables.noisy_values(rho);
    let l2 = (noisy.iter().map(|v| v * v).sum::<f64>() / noisy.len() as f64).sqrt();
    l2 / four_thirds_norm
}
