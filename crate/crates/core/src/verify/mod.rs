//! Census and scan harnesses that re-check the structural claims on every
//! function of small slices, or on seeded uniform samples of larger ones.

mod census;
mod probe;
mod scan;

pub use census::{
    census, CensusConfig, CensusMode, CensusReport, Claim, CountRow, LinearSummary,
    MinInfluenceRow, RunMeta, MAX_EXHAUSTIVE_POINTS, MAX_SAMPLE_POINTS,
};
pub use probe::{influence_constant_probe, ProbeDomain, ProbeReport, ProbeRow};
pub use scan::{dichotomy_scan, hyper_scan, DichotomyRow, DichotomyTable, HyperRow, HyperScan};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::slice::{SliceDomain, SliceFunction};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Uniform truth table number `index` of the stream `seed`, packed
/// little-endian into 64-bit words. Each index has its own ChaCha stream, so
/// a sample does not depend on how the run is sharded.
pub fn sample_truth_table(seed: u64, index: u64, points: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let words = points.div_ceil(64).max(1);
    let mut t: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
    let tail = points % 64;
    if tail != 0 {
        t[words - 1] &= (1u64 << tail) - 1;
    } else if points == 0 {
        t[0] = 0;
    }
    t
}

pub(crate) fn table_bit(t: &[u64], x: usize) -> bool {
    (t[x / 64] >> (x % 64)) & 1 == 1
}

/// Boolean function whose value at rank `x` is bit `x` of the table.
pub fn function_from_table(domain: &SliceDomain, t: &[u64]) -> Result<SliceFunction> {
    let bits: Vec<bool> = (0..domain.size() as usize).map(|x| table_bit(t, x)).collect();
    SliceFunction::from_bits(domain.clone(), &bits)
}

/// Seeded uniform Boolean function, sample `index` of stream `seed`.
pub fn random_boolean_function(domain: &SliceDomain, seed: u64, index: u64) -> Result<SliceFunction> {
    domain.check_table_capacity()?;
    let t = sample_truth_table(seed, index, domain.size() as usize);
    function_from_table(domain, &t)
}
