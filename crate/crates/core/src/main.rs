use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use slice_junta::extremal::{eta, fd_construction, gamma_bounds, pd_polynomial, ZETA_XI_NOTE};
use slice_junta::influence::{influence, influence_profile, level_influence_value};
use slice_junta::io::{
    cube_function_to_json, polynomial_to_json, read_cube_function, read_slice_function, slice_function_to_json,
    to_pretty,
};
use slice_junta::junta::{minimal_junta_from_partition, ZeroInfluencePartition};
use slice_junta::noise::{hypercontractivity_ratio, noise, noise_monte_carlo};
use slice_junta::rational::{format_rational, int, round15};
use slice_junta::slice::{decompose, SliceDomain, SlicePoint, SliceFunction};
use slice_junta::transfer::{cube_to_slice, explicit_cube_polynomial, slice_to_cube};
use slice_junta::verify::{
    census, hyper_scan, influence_constant_probe, CensusConfig, CensusMode, ProbeDomain, CODE_VERSION,
};
use slice_junta::{Error, Result};

/// Exact analysis of Boolean functions on the slice and the hypercube.
///
/// Coordinates on the command line and in files are 1-based.
#[derive(Parser, Serialize)]
#[command(name = "slice-junta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct Common {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Construction {
    Dictator,
    AntiDictator,
    Pd,
    Fd,
    FromCube,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Direction {
    SliceToCube,
    CubeToSlice,
    ExplicitPolynomial,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Degree, level norms, influences and minimal junta of a slice function.
    Analyze {
        #[arg(long)]
        input: PathBuf,
    },
    /// One pairwise influence, or the whole influence profile.
    Influence {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Zero-influence classes and a minimal junta certificate.
    Junta {
        #[arg(long)]
        input: PathBuf,
    },
    /// Noise operator values; with --support, also a Monte Carlo estimate at
    /// that point.
    Noise {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rho: f64,
        /// 1-based coordinates equal to 1 at the Monte Carlo point.
        #[arg(long, value_delimiter = ',')]
        support: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hypercontractivity ratio of one function (--input, --rho) or a scan
    /// over exponents of random Boolean functions (--n, --k).
    Hyper {
        #[arg(long, conflicts_with_all = ["n", "k"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "input")]
        rho: Option<f64>,
        #[arg(long, requires = "k")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        k: Option<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 4.0])]
        exponents: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Restriction to x_coord = bit, written as a slice function file.
    Restrict {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        coord: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        bit: u8,
    },
    /// Slice junta to cube function, cube function to slice, or the explicit
    /// low-degree cube polynomial of a slice junta.
    Convert {
        #[arg(value_enum)]
        direction: Direction,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Builds an input function.
    Construct {
        #[arg(value_enum)]
        kind: Construction,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        coord: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Longest 0/1 prefix of a non-constant degree-d polynomial.
    Eta {
        #[arg(long)]
        degree: usize,
    },
    /// Bounds on the number of inputs a degree-d cube function can depend on.
    Gamma {
        #[arg(long)]
        degree: usize,
    },
    /// Exhaustive or sampled census of Boolean functions on C(n,k).
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only tally functions of at most this degree.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, env = "SLICEJUNTA_WORKERS")]
        workers: Option<usize>,
        #[arg(long)]
        shard_size: Option<u64>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Ratio of total influence to the level-weighted sum on pure-level
    /// functions: every function of C(4,2) plus random ones on C(6,3).
    #[command(name = "probe-eq1")]
    #[serde(rename = "probe-eq1")]
    ProbeEq1 {
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a subcommand produced.
enum Output {
    /// A report; gets the run configuration embedded.
    Report { body: Value, csv: Option<String>, passed: bool },
    /// A function or polynomial file, written verbatim.
    File(Value),
}

fn report(body: impl Serialize) -> Result<Output> {
    Ok(Output::Report {
        body: serde_json::to_value(body)?,
        csv: None,
        passed: true,
    })
}

fn coord(i: usize, n: usize, what: &str) -> Result<usize> {
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("{what} {i} is not in 1..={n}")));
    }
    Ok(i - 1)
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required here")))
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn junta_json(f: &SliceFunction, partition: &ZeroInfluencePartition) -> Result<Value> {
    let cert = minimal_junta_from_partition(f, partition)?;
    let table: Vec<Value> = cert
        .table
        .iter()
        .map(|v| v.as_ref().map_or(Value::Null, |r| json!(format_rational(r))))
        .collect();
    Ok(json!({
        "size": cert.size(),
        "witness": one_based(&cert.witness),
        "classes": partition.classes.iter().map(|c| one_based(c)).collect::<Vec<_>>(),
        "table": table,
    }))
}

fn analyze(f: &SliceFunction) -> Result<Value> {
    let dec = decompose(f)?;
    let profile = influence_profile(f)?;
    let partition = ZeroInfluencePartition::from_profile(&profile)?;
    let level_value = level_influence_value(f)?;
    let norms: Vec<String> = (0..dec.levels().len())
        .map(|d| format_rational(&dec.level_norm2_squared(d)))
        .collect();
    let ratio = (level_value != int(0)).then(|| format_rational(&(&profile.total / &level_value)));
    Ok(json!({
        "n": f.domain().n(),
        "k": f.domain().k(),
        "boolean": f.is_boolean(),
        "degree": dec.degree(),
        "level_norms_squared": norms,
        "total_influence": format_rational(&profile.total),
        "level_influence_value": format_rational(&level_value),
        "influence_ratio": ratio,
        "min_nonzero_influence": profile.min_nonzero().as_ref().map(format_rational),
        "junta": junta_json(f, &partition)?,
    }))
}

fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Analyze { input } => report(analyze(&read_slice_function(input)?)?),
        Command::Influence { input, pair } => {
            let f = read_slice_function(input)?;
            let n = f.domain().n();
            match pair {
                Some(p) => {
                    let (i, j) = (coord(p[0], n, "pair index")?, coord(p[1], n, "pair index")?);
                    report(json!({ "pair": [p[0], p[1]], "influence": format_rational(&influence(&f, i, j)?) }))
                }
                None => {
                    let profile = influence_profile(&f)?;
                    let matrix: Vec<Vec<String>> = profile
                        .pairwise
                        .iter()
                        .map(|row| row.iter().map(format_rational).collect())
                        .collect();
                    let level_value = level_influence_value(&f)?;
                    report(json!({
                        "pairwise": matrix,
                        "total": format_rational(&profile.total),
                        "level_influence_value": format_rational(&level_value),
                        "influence_ratio": (level_value != int(0))
                            .then(|| format_rational(&(&profile.total / &level_value))),
                        "min_nonzero": profile.min_nonzero().as_ref().map(format_rational),
                    }))
                }
            }
        }
        Command::Junta { input } => {
            let f = read_slice_function(input)?;
            let partition = ZeroInfluencePartition::from_profile(&influence_profile(&f)?)?;
            report(junta_json(&f, &partition)?)
        }
        Command::Noise {
            input,
            rho,
            support,
            samples,
            seed,
        } => {
            let f = read_slice_function(input)?;
            let t = noise(&f, *rho)?;
            let mut body = json!({ "rho": rho, "values": t.values });
            if let Some(s) = support {
                let n = f.domain().n();
                let zero_based = s.iter().map(|&i| coord(i, n, "support index")).collect::<Result<Vec<_>>>()?;
                let x = SlicePoint::from_support(n, &zero_based)?;
                let rank = f.domain().rank(x)?;
                let est = noise_monte_carlo(&f, *rho, x, *samples, *seed)?;
                body["monte_carlo"] = json!({
                    "support": s,
                    "rank": rank,
                    "exact": t.values[rank as usize],
                    "estimate": est.mean,
                    "stderr": est.stderr,
                    "samples": est.samples,
                });
            }
            report(body)
        }
        Command::Hyper {
            input,
            rho,
            n,
            k,
            exponents,
            samples,
            seed,
        } => match input {
            Some(path) => {
                let f = read_slice_function(path)?;
                let rho = need(*rho, "rho")?;
                let r = hypercontractivity_ratio(&f, rho)?;
                report(json!({ "rho": rho, "ratio": r, "contractive": r <= 1.0 }))
            }
            None => {
                let scan = hyper_scan(need(*n, "n")?, need(*k, "k")?, exponents, *samples, *seed)?;
                let mut csv = String::from("exponent,rho,max_ratio,argmax,constant_ratio\n");
                for r in &scan.rows {
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.exponent,
                        round15(r.rho),
                        round15(r.max_ratio),
                        r.argmax,
                        r.constant_ratio
                    ));
                }
                Ok(Output::Report {
                    body: serde_json::to_value(&scan)?,
                    csv: Some(csv),
                    passed: true,
                })
            }
        },
        Command::Restrict { input, coord: c, bit } => {
            let f = read_slice_function(input)?;
            let i = coord(*c, f.domain().n(), "coordinate")?;
            Ok(Output::File(slice_function_to_json(&f.restrict(i, *bit == 1)?)))
        }
        Command::Convert { direction, input, n, k } => match direction {
            Direction::SliceToCube => {
                let f = read_slice_function(input)?;
                let cert = slice_junta::junta::minimal_junta(&f)?;
                Ok(Output::File(cube_function_to_json(&slice_to_cube(&f, &cert)?)))
            }
            Direction::CubeToSlice => {
                let g = read_cube_function(input)?;
                Ok(Output::File(slice_function_to_json(&cube_to_slice(&g, need(*n, "n")?, need(*k, "k")?)?)))
            }
            Direction::ExplicitPolynomial => {
                let f = read_slice_function(input)?;
                let cert = slice_junta::junta::minimal_junta(&f)?;
                Ok(Output::File(polynomial_to_json(&explicit_cube_polynomial(&f, &cert)?.polynomial)))
            }
        },
        Command::Construct {
            kind,
            n,
            k,
            coord: c,
            degree,
            input,
        } => construct(*kind, *n, *k, *c, *degree, input.as_deref()),
        Command::Eta { degree } => {
            let r = eta(*degree)?;
            report(json!({ "d": r.d, "eta": r.eta, "witness": r.witness, "lower": r.lower, "upper": r.upper }))
        }
        Command::Gamma { degree } => {
            let g = gamma_bounds(*degree)?;
            let mut body = serde_json::to_value(&g)?;
            body["zeta_xi"] = json!(ZETA_XI_NOTE);
            report(body)
        }
        Command::Census {
            n,
            k,
            exhaustive,
            samples,
            seed,
            degree,
            workers,
            shard_size,
            checkpoint,
        } => {
            let mode = match (exhaustive, samples) {
                (_, Some(count)) => CensusMode::Sample { seed: *seed, count: *count },
                (true, None) => CensusMode::Exhaustive,
                (false, None) => {
                    return Err(Error::InvalidArgument("census needs --exhaustive or --samples N".into()))
                }
            };
            let cfg = CensusConfig {
                max_degree: *degree,
                mode,
                workers: workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get())),
                shard_size: *shard_size,
                checkpoint_dir: checkpoint.clone(),
                ..CensusConfig::exhaustive(*n, *k)
            };
            let r = census(&cfg)?;
            Ok(Output::Report {
                body: serde_json::to_value(&r)?,
                csv: Some(r.to_csv()),
                passed: r.passed(),
            })
        }
        Command::ProbeEq1 { samples, seed } => {
            let domains = [
                ProbeDomain { n: 4, k: 2, samples: None },
                ProbeDomain {
                    n: 6,
                    k: 3,
                    samples: Some(*samples),
                },
            ];
            let r = influence_constant_probe(&domains, *seed)?;
            let mut csv = String::from("n,k,function,level,total_influence,level_value,ratio\n");
            for row in &r.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    row.n, row.k, row.function, row.level, row.total_influence, row.level_value, row.ratio
                ));
            }
            Ok(Output::Report {
                body: serde_json::to_value(&r)?,
                csv: Some(csv),
                passed: r.consistent,
            })
        }
    }
}

fn construct(
    kind: Construction,
    n: Option<usize>,
    k: Option<usize>,
    c: Option<usize>,
    degree: Option<usize>,
    input: Option<&Path>,
) -> Result<Output> {
    match kind {
        Construction::Dictator | Construction::AntiDictator => {
            let dom = SliceDomain::new(need(n, "n")?, need(k, "k")?)?;
            let i = coord(need(c, "coord")?, dom.n(), "coordinate")?;
            let f = match kind {
                Construction::Dictator => SliceFunction::dictator(dom, i)?,
                _ => SliceFunction::anti_dictator(dom, i)?,
            };
            Ok(Output::File(slice_function_to_json(&f)))
        }
        Construction::Pd => {
            let d = need(degree, "degree")?;
            let p = pd_polynomial(d)?;
            match (n, k) {
                (Some(n), Some(k)) => {
                    let dom = SliceDomain::new(n, k)?;
                    let mask = (1u64 << (n / 2)) - 1;
                    let f = SliceFunction::from_fn(dom, |x| p.eval_int((x.bits() & mask).count_ones() as i64))?;
                    Ok(Output::File(slice_function_to_json(&f)))
                }
                _ => {
                    let prefix = 2 * (d + 1).div_ceil(2);
                    report(json!({
                        "d": d,
                        "coefficients": p.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
                        "values": (0..prefix).map(|s| format_rational(&p.eval_int(s as i64))).collect::<Vec<_>>(),
                    }))
                }
            }
        }
        Construction::Fd => {
            let f = fd_construction(need(degree, "degree")?, need(n, "n")?, need(k, "k")?)?;
            Ok(Output::File(slice_function_to_json(&f)))
        }
        Construction::FromCube => {
            let path = input.ok_or_else(|| Error::InvalidArgument("--input is required here".into()))?;
            let g = read_cube_function(path)?;
            Ok(Output::File(slice_function_to_json(&cube_to_slice(&g, need(n, "n")?, need(k, "k")?)?)))
        }
    }
}

/// Rounds every non-integer number to 15 significant digits.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(x) = num.as_f64() {
                *v = json!(round15(x));
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn write_out(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool> {
    let output = run(&cli.command)?;
    let out = cli.common.out.as_deref();
    match output {
        Output::File(v) => {
            if cli.common.format == Format::Csv {
                return Err(Error::InvalidArgument("function files are JSON only".into()));
            }
            write_out(&to_pretty(&v), out)?;
            Ok(true)
        }
        Output::Report { body, csv, passed } => {
            if cli.common.format == Format::Csv {
                let csv = csv.ok_or_else(|| Error::InvalidArgument("this command has no CSV table".into()))?;
                write_out(&csv, out)?;
                return Ok(passed);
            }
            let mut full = Map::new();
            full.insert("version".into(), json!(CODE_VERSION));
            full.insert("run".into(), serde_json::to_value(cli)?);
            match body {
                Value::Object(o) => full.extend(o),
                other => {
                    full.insert("result".into(), other);
                }
            }
            let mut full = Value::Object(full);
            round_floats(&mut full);
            write_out(&to_pretty(&full), out)?;
            Ok(passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: a checked claim failed; see the report");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
