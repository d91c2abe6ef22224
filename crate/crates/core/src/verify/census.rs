use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_truth_table, table_bit, CODE_VERSION};
use crate::error::{Error, Result};
use crate::rational::{format_rational, ratio, Rational};
use crate::slice::{HarmonicBasis, SliceDomain};

/// Exhaustive runs enumerate `2^C(n,k)` tables.
pub const MAX_EXHAUSTIVE_POINTS: u64 = 22;
/// Sampled runs keep `levels * C(n,k)^2` projector entries in memory.
pub const MAX_SAMPLE_POINTS: u64 = 512;

const DEFAULT_SHARDS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CensusMode {
    Exhaustive,
    /// `count` i.i.d. uniform truth tables from the seeded stream.
    Sample { seed: u64, count: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusConfig {
    pub n: usize,
    pub k: usize,
    /// Only functions of degree at most this are tallied.
    pub max_degree: Option<usize>,
    pub mode: CensusMode,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub shard_size: Option<u64>,
    #[serde(skip)]
    pub checkpoint_dir: Option<PathBuf>,
    /// Keep the tables of tallied functions whose minimal junta size lies in
    /// this inclusive range (exhaustive mode).
    #[serde(skip)]
    pub collect_junta_sizes: Option<(usize, usize)>,
}

impl CensusConfig {
    pub fn exhaustive(n: usize, k: usize) -> Self {
        CensusConfig {
            n,
            k,
            max_degree: None,
            mode: CensusMode::Exhaustive,
            workers: 1,
            shard_size: None,
            checkpoint_dir: None,
            collect_junta_sizes: None,
        }
    }

    pub fn sample(n: usize, k: usize, seed: u64, count: u64) -> Self {
        CensusConfig {
            mode: CensusMode::Sample { seed, count },
            ..Self::exhaustive(n, k)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub degree: usize,
    pub junta_size: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinInfluenceRow {
    pub degree: usize,
    /// Smallest positive `Inf_ij` over functions of exactly this degree.
    pub min_nonzero_influence: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LinearSummary {
    pub count: u64,
    pub constants: u64,
    pub dictators: u64,
    pub anti_dictators: u64,
    pub other: u64,
    pub max_junta_size: usize,
    /// `2n + 2`, stated only when `2 <= k <= n - 2`.
    pub expected: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Timing and scheduling fields; excluded from determinism comparisons.
#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub wall_clock_ms: u128,
    pub workers: usize,
    pub shards: u64,
    pub shards_from_checkpoint: u64,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub config: CensusConfig,
    pub points: u64,
    pub functions: u64,
    pub counted: u64,
    pub counts: Vec<CountRow>,
    pub min_nonzero_influence: Vec<MinInfluenceRow>,
    pub degree_at_most_one: LinearSummary,
    /// `total_influence / level_influence_value`, common to every
    /// non-constant tallied function.
    pub influence_constant: Option<String>,
    pub claims: Vec<Claim>,
    pub meta: RunMeta,
    #[serde(skip)]
    pub collected: Vec<Vec<u64>>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }

    pub fn count(&self, degree: usize, junta_size: usize) -> u64 {
        self.counts
            .iter()
            .find(|r| r.degree == degree && r.junta_size == junta_size)
            .map_or(0, |r| r.count)
    }

    /// The report as JSON with the timing block removed.
    pub fn deterministic_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("meta");
        }
        v
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,junta_size,count\n");
        for r in &self.counts {
            let _ = writeln!(out, "{},{},{}", r.degree, r.junta_size, r.count);
        }
        out.push_str("\ndegree,min_nonzero_influence\n");
        for r in &self.min_nonzero_influence {
            let _ = writeln!(out, "{},{}", r.degree, r.min_nonzero_influence);
        }
        out
    }
}

/// Per-shard tallies; `merge` is associative, so any sharding gives the same
/// totals when shards are merged in order.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct Tally {
    functions: u64,
    counted: u64,
    /// `counts[degree * (n + 1) + junta]`.
    counts: Vec<u64>,
    /// Smallest positive flip count per degree.
    min_flips: Vec<Option<u64>>,
    transitivity_violations: u64,
    influence_bound_violations: u64,
    linear: u64,
    constants: u64,
    dictators: u64,
    anti_dictators: u64,
    linear_other: u64,
    linear_max_junta: usize,
    #[serde(with = "crate::rational::serde_opt")]
    constant: Option<Rational>,
    constant_mismatches: u64,
    collected: Vec<Vec<u64>>,
}

impl Tally {
    fn new(n: usize, m: usize) -> Self {
        Tally {
            counts: vec![0; (m + 1) * (n + 1)],
            min_flips: vec![None; m + 1],
            ..Default::default()
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.functions += other.functions;
        self.counted += other.counted;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.min_flips.iter_mut().zip(&other.min_flips) {
            *a = match (*a, *b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
        }
        self.transitivity_violations += other.transitivity_violations;
        self.influence_bound_violations += other.influence_bound_violations;
        self.linear += other.linear;
        self.constants += other.constants;
        self.dictators += other.dictators;
        self.anti_dictators += other.anti_dictators;
        self.linear_other += other.linear_other;
        self.linear_max_junta = self.linear_max_junta.max(other.linear_max_junta);
        self.constant_mismatches += other.constant_mismatches;
        match (&self.constant, other.constant) {
            (Some(a), Some(b)) if *a != b => self.constant_mismatches += 1,
            (None, b) => self.constant = b,
            _ => {}
        }
        self.collected.extend(other.collected);
        self
    }
}

/// A coordinate pair and the rank pairs its transposition swaps.
type PairOrbits = (usize, usize, Vec<(u32, u32)>);

/// Read-only data shared by all workers.
struct Context {
    n: usize,
    points: usize,
    m: usize,
    /// `columns[d - 1][y][x]`: weight of `f(y)` in `scale * f^{=d}(x)`.
    columns: Vec<Vec<Vec<i64>>>,
    scale_sq: BigInt,
    /// Coordinate pairs `i < j` and the orbits `x < y` of their transposition
    /// on ranks.
    pairs: Vec<PairOrbits>,
    dictators: Vec<Vec<u64>>,
    words: usize,
    filter: Option<usize>,
    collect: Option<(usize, usize)>,
}

impl Context {
    fn new(domain: &SliceDomain, cfg: &CensusConfig) -> Result<Self> {
        let basis = HarmonicBasis::for_domain(domain)?;
        let proj = basis.integer_projectors()?;
        let n = domain.n();
        let points = domain.size() as usize;
        let masks = domain.point_masks();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut orbit = Vec::new();
                for (x, &b) in masks.iter().enumerate() {
                    let y = domain.rank_bits(crate::slice::domain::swap_bits(b, i, j)) as usize;
                    if x < y {
                        orbit.push((x as u32, y as u32));
                    }
                }
                pairs.push((i, j, orbit));
            }
        }
        let words = points.div_ceil(64).max(1);
        let dictators = (0..n)
            .map(|i| {
                let mut t = vec![0u64; words];
                for (x, &b) in masks.iter().enumerate() {
                    if (b >> i) & 1 == 1 {
                        t[x / 64] |= 1 << (x % 64);
                    }
                }
                t
            })
            .collect();
        Ok(Context {
            n,
            points,
            m: domain.max_degree(),
            columns: proj.columns.into_iter().skip(1).collect(),
            scale_sq: &proj.scale * &proj.scale,
            pairs,
            dictators,
            words,
            filter: cfg.max_degree,
            collect: cfg.collect_junta_sizes,
        })
    }

    fn projections(&self, t: &[u64]) -> Vec<Vec<i64>> {
        let mut v = vec![vec![0i64; self.points]; self.m];
        for y in (0..self.points).filter(|&y| table_bit(t, y)) {
            for (vd, cols) in v.iter_mut().zip(&self.columns) {
                for (a, c) in vd.iter_mut().zip(&cols[y]) {
                    *a += c;
                }
            }
        }
        v
    }

    fn complement(&self, t: &[u64]) -> Vec<u64> {
        let mut c: Vec<u64> = t.iter().map(|w| !w).collect();
        let tail = self.points % 64;
        if tail != 0 {
            c[self.words - 1] &= (1u64 << tail) - 1;
        }
        c
    }

    fn analyze(&self, t: &[u64], v: &[Vec<i64>], tally: &mut Tally) {
        tally.functions += 1;
        let degree = (1..=self.m)
            .rev()
            .find(|&d| v[d - 1].iter().any(|&a| a != 0))
            .unwrap_or(0);
        if self.filter.is_some_and(|f| degree > f) {
            return;
        }
        tally.counted += 1;

        let n = self.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut flips = Vec::with_capacity(self.pairs.len());
        let mut total_flips = 0u64;
        let mut min_flip: Option<u64> = None;
        for (i, j, orbit) in &self.pairs {
            let c = 2 * orbit
                .iter()
                .filter(|&&(x, y)| table_bit(t, x as usize) != table_bit(t, y as usize))
                .count() as u64;
            if c == 0 {
                let (a, b) = (find(&mut parent, *i), find(&mut parent, *j));
                parent[a] = b;
            } else {
                min_flip = Some(min_flip.map_or(c, |m: u64| m.min(c)));
            }
            total_flips += c;
            flips.push(c);
        }
        for ((i, j, _), &c) in self.pairs.iter().zip(&flips) {
            if c != 0 && find(&mut parent, *i) == find(&mut parent, *j) {
                tally.transitivity_violations += 1;
                break;
            }
        }
        let mut class = vec![0usize; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            class[r] += 1;
        }
        let junta = n - class.iter().max().copied().unwrap_or(0);
        tally.counts[degree * (n + 1) + junta] += 1;
        if let Some(c) = min_flip {
            let slot = &mut tally.min_flips[degree];
            *slot = Some(slot.map_or(c, |m| m.min(c)));
        }

        // Inf[f] = total_flips / (4 N n) <= degree
        if total_flips > 4 * (self.points * n * degree) as u64 {
            tally.influence_bound_violations += 1;
        }

        if degree <= 1 {
            tally.linear += 1;
            tally.linear_max_junta = tally.linear_max_junta.max(junta);
            if t.iter().all(|&w| w == 0) || self.complement(t).iter().all(|&w| w == 0) {
                tally.constants += 1;
            } else if self.dictators.iter().any(|d| d.as_slice() == t) {
                tally.dictators += 1;
            } else if self.dictators.iter().any(|d| self.complement(d) == t) {
                tally.anti_dictators += 1;
            } else {
                tally.linear_other += 1;
            }
        }

        self.record_constant(total_flips, v, tally);

        if let Some((lo, hi)) = self.collect {
            if (lo..=hi).contains(&junta) {
                tally.collected.push(t.to_vec());
            }
        }
    }

    /// `sum flips * scale^2 / (4 sum_d d(n+1-d) |v_d|^2)`.
    fn record_constant(&self, total_flips: u64, v: &[Vec<i64>], tally: &mut Tally) {
        let n = self.n as i128;
        let mut level = Some(0i128);
        for (idx, vd) in v.iter().enumerate() {
            let d = idx as i128 + 1;
            let w = d * (n + 1 - d);
            for &a in vd {
                level = level.and_then(|acc| {
                    (a as i128)
                        .checked_mul(a as i128)
                        .and_then(|sq| sq.checked_mul(w))
                        .and_then(|t| acc.checked_add(t))
                });
            }
        }
        let level: BigInt = match level {
            Some(l) => l.into(),
            None => v
                .iter()
                .enumerate()
                .map(|(idx, vd)| {
                    let d = idx as i64 + 1;
                    let w = BigInt::from(d * (self.n as i64 + 1 - d));
                    vd.iter().map(|&a| BigInt::from(a) * BigInt::from(a)).sum::<BigInt>() * w
                })
                .sum(),
        };
        let zero_flips = total_flips == 0;
        let zero_level = level == BigInt::from(0);
        if zero_flips || zero_level {
            if zero_flips != zero_level {
                tally.constant_mismatches += 1;
            }
            return;
        }
        let r = Rational::new(BigInt::from(total_flips) * &self.scale_sq, level * 4);
        match &tally.constant {
            None => tally.constant = Some(r),
            Some(c) if *c != r => tally.constant_mismatches += 1,
            _ => {}
        }
    }

    fn run_exhaustive(&self, start: u64, end: u64) -> Tally {
        let mut tally = Tally::new(self.n, self.m);
        let mut v = self.projections(&[start]);
        for t in start..end {
            if t > start {
                let mut changed = (t - 1) ^ t;
                while changed != 0 {
                    let y = changed.trailing_zeros() as usize;
                    changed &= changed - 1;
                    let added = (t >> y) & 1 == 1;
                    for (vd, cols) in v.iter_mut().zip(&self.columns) {
                        if added {
                            vd.iter_mut().zip(&cols[y]).for_each(|(a, c)| *a += c);
                        } else {
                            vd.iter_mut().zip(&cols[y]).for_each(|(a, c)| *a -= c);
                        }
                    }
                }
            }
            self.analyze(&[t], &v, &mut tally);
        }
        tally
    }

    fn run_sample(&self, seed: u64, start: u64, end: u64) -> Tally {
        let mut tally = Tally::new(self.n, self.m);
        for i in start..end {
            let t = sample_truth_table(seed, i, self.points);
            let v = self.projections(&t);
            self.analyze(&t, &v, &mut tally);
        }
        tally
    }
}

fn checkpoint_path(dir: &Path, cfg: &CensusConfig, start: u64, end: u64) -> PathBuf {
    let filter = cfg.max_degree.map_or("all".to_string(), |d| d.to_string());
    let mode = match cfg.mode {
        CensusMode::Exhaustive => "exhaustive".to_string(),
        CensusMode::Sample { seed, .. } => format!("seed{seed}"),
    };
    dir.join(format!(
        "census-n{}-k{}-deg{filter}-{mode}-{start}-{end}-v{CODE_VERSION}.json",
        cfg.n, cfg.k
    ))
}

/// Tallies degree, minimal junta size and influence structure of every
/// Boolean function on `C(n,k)` (or of a seeded sample), checking along the
/// way that zero influence is transitive, that `Inf[f] <= deg f`, that
/// functions of degree at most one are constants, dictators or
/// anti-dictators, and that influence and level weight are proportional.
pub fn census(cfg: &CensusConfig) -> Result<CensusReport> {
    let started = Instant::now();
    let domain = SliceDomain::new(cfg.n, cfg.k)?;
    let points = domain.size();
    let total = match cfg.mode {
        CensusMode::Exhaustive => {
            if points > MAX_EXHAUSTIVE_POINTS {
                return Err(Error::Capacity {
                    what: "exhaustive census slice size C(n,k)",
                    actual: points,
                    limit: MAX_EXHAUSTIVE_POINTS,
                });
            }
            1u64 << points
        }
        CensusMode::Sample { count, .. } => {
            if points > MAX_SAMPLE_POINTS {
                return Err(Error::Capacity {
                    what: "sampled census slice size C(n,k)",
                    actual: points,
                    limit: MAX_SAMPLE_POINTS,
                });
            }
            if count == 0 {
                return Err(Error::InvalidArgument("sample count must be positive".into()));
            }
            count
        }
    };
    if cfg.workers == 0 {
        return Err(Error::InvalidArgument("workers must be positive".into()));
    }
    let ctx = Context::new(&domain, cfg)?;
    let shard_size = cfg
        .shard_size
        .unwrap_or_else(|| total.div_ceil(DEFAULT_SHARDS))
        .max(1);
    let shards: Vec<(u64, u64)> = (0..total.div_ceil(shard_size))
        .map(|s| (s * shard_size, ((s + 1) * shard_size).min(total)))
        .collect();
    if let Some(dir) = &cfg.checkpoint_dir {
        fs::create_dir_all(dir)?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<(Tally, bool)>> = pool.install(|| {
        shards
            .par_iter()
            .map(|&(start, end)| {
                let path = cfg.checkpoint_dir.as_ref().map(|d| checkpoint_path(d, cfg, start, end));
                if let Some(p) = path.as_ref().filter(|p| p.exists()) {
                    let tally: Tally = serde_json::from_str(&fs::read_to_string(p)?)?;
                    return Ok((tally, true));
                }
                let tally = match cfg.mode {
                    CensusMode::Exhaustive => ctx.run_exhaustive(start, end),
                    CensusMode::Sample { seed, .. } => ctx.run_sample(seed, start, end),
                };
                if let Some(p) = path {
                    fs::write(p, serde_json::to_string(&tally)?)?;
                }
                Ok((tally, false))
            })
            .collect()
    });
    let mut merged = Tally::new(ctx.n, ctx.m);
    let mut resumed = 0;
    for r in results {
        let (t, from_disk) = r?;
        resumed += from_disk as u64;
        merged = merged.merge(t);
    }

    Ok(build_report(cfg, &ctx, points, merged, RunMeta {
        wall_clock_ms: started.elapsed().as_millis(),
        workers: cfg.workers,
        shards: shards.len() as u64,
        shards_from_checkpoint: resumed,
        version: CODE_VERSION,
    }))
}

fn build_report(cfg: &CensusConfig, ctx: &Context, points: u64, t: Tally, meta: RunMeta) -> CensusReport {
    let n = ctx.n;
    let mut counts = Vec::new();
    for d in 0..=ctx.m {
        for j in 0..=n {
            let c = t.counts[d * (n + 1) + j];
            if c > 0 {
                counts.push(CountRow {
                    degree: d,
                    junta_size: j,
                    count: c,
                });
            }
        }
    }
    let denom = 4 * points as i64;
    let min_nonzero_influence = t
        .min_flips
        .iter()
        .enumerate()
        .filter_map(|(d, m)| {
            m.map(|c| MinInfluenceRow {
                degree: d,
                min_nonzero_influence: format_rational(&ratio(c as i64, denom)),
            })
        })
        .collect();

    let nontrivial = cfg.k >= 2 && cfg.k + 2 <= n;
    let linear = LinearSummary {
        count: t.linear,
        constants: t.constants,
        dictators: t.dictators,
        anti_dictators: t.anti_dictators,
        other: t.linear_other,
        max_junta_size: t.linear_max_junta,
        expected: nontrivial.then_some(2 * n as u64 + 2),
    };

    let mut claims = vec![
        Claim {
            name: "zero_influence_transitive".into(),
            passed: t.transitivity_violations == 0,
            detail: format!("{} violating functions", t.transitivity_violations),
        },
        Claim {
            name: "total_influence_at_most_degree".into(),
            passed: t.influence_bound_violations == 0,
            detail: format!("{} violating functions", t.influence_bound_violations),
        },
        Claim {
            name: "influence_proportional_to_level_weight".into(),
            passed: t.constant_mismatches == 0,
            detail: match &t.constant {
                Some(c) => format!("ratio {} with {} mismatches", format_rational(c), t.constant_mismatches),
                None => "no non-constant function tallied".into(),
            },
        },
    ];
    if cfg.mode == CensusMode::Exhaustive {
        let expected = 1u64 << points;
        claims.push(Claim {
            name: "enumerated_all_functions".into(),
            passed: t.functions == expected,
            detail: format!("{} of {expected}", t.functions),
        });
    }
    if nontrivial {
        claims.push(Claim {
            name: "degree_one_functions_are_dictators".into(),
            passed: linear.other == 0 && linear.max_junta_size <= 1,
            detail: format!(
                "{} constants, {} dictators, {} anti-dictators, {} other",
                linear.constants, linear.dictators, linear.anti_dictators, linear.other
            ),
        });
        if cfg.mode == CensusMode::Exhaustive {
            claims.push(Claim {
                name: "degree_one_count".into(),
                passed: linear.count == 2 * n as u64 + 2,
                detail: format!("{} found, {} expected", linear.count, 2 * n + 2),
            });
        }
    }

    CensusReport {
        config: cfg.clone(),
        points,
        functions: t.functions,
        counted: t.counted,
        counts,
        min_nonzero_influence,
        degree_at_most_one: linear,
        influence_constant: t.constant.as_ref().map(format_rational),
        claims,
        meta,
        collected: t.collected,
    }
}
