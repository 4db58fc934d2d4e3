//! Command-line front end. Each subcommand reads its inputs, calls one
//! library operation and prints the result.
//!
//! Exit codes: 0 success, 1 usage, 2 negative validation verdict,
//! 3 unreadable or malformed input, 4 library precondition failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::chart::{
    decode_natural, encode_natural_with, from_canonical, sample_pseudometric, to_canonical,
};
use crate::densify::{densify_with, DensifyRequest};
use crate::extend::{extend_metric_with, perturb_with, ExtensionProblem};
use crate::family::{
    all_selectors, family_member, family_separation, sample_distinct_pairs, FamilySelector,
};
use crate::io::{
    canonical_to_json, format_number, matrix_to_csv, matrix_to_json, natural_to_json,
    parse_coords, parse_matrix, report_to_json, Coords, FormatError, LabeledMatrix,
};
use crate::matrix::{sup_distance, DistanceMatrix, Tolerance};
use crate::validate::validate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "pseudometric", version, about = "Finite pseudometric space toolkit")]
struct Cli {
    /// Human-readable output instead of JSON diagnostics
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MatrixOut {
    /// Write matrices as JSON instead of CSV
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the pseudometric (or, with --metric, metric) axioms
    Validate {
        matrix: PathBuf,
        #[arg(long)]
        metric: bool,
        #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
        tolerance: f64,
    },
    /// Chart coordinates of a pseudometric
    Encode {
        matrix: PathBuf,
        /// Emit per-level coordinates instead of the canonical cube point
        #[arg(long)]
        natural: bool,
        #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
        tolerance: f64,
    },
    /// Pseudometric described by a coordinates file
    Decode {
        coords: PathBuf,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Sup-distance between two matrices
    Distance { a: PathBuf, b: PathBuf },
    /// Nearby metric via the entrywise maximum with a small base metric
    Densify {
        matrix: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
        tolerance: f64,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Extend a metric on a subset to the full point set
    Extend {
        #[arg(long)]
        subset: PathBuf,
        /// 1-based positions of the subset's points, comma separated
        #[arg(long)]
        indices: String,
        #[arg(long = "n")]
        full_n: usize,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        cap: f64,
        /// Defaults to 1e-3 times the smaller of the cap and the smallest
        /// subset distance
        #[arg(long)]
        floor: Option<f64>,
        #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
        tolerance: f64,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Add a bump of height epsilon across one pair
    Perturb {
        matrix: PathBuf,
        /// 1-based pair, e.g. 1,2
        #[arg(long)]
        pair: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
        tolerance: f64,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Members and separation of the binary pseudometric family
    Family {
        /// Selector bits, e.g. 0110
        #[arg(long)]
        bits: Option<String>,
        /// File of selectors, one per line; prints their separation (the
        /// --bits selector, if given, is included first)
        #[arg(long)]
        separation: Option<PathBuf>,
        /// Check the whole family of selectors of this length
        #[arg(long, conflicts_with_all = ["bits", "separation"])]
        enumerate: Option<usize>,
        /// Sampled pairs used by --enumerate beyond 6 bits
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: MatrixOut,
    },
    /// Random pseudometric from uniform chart coordinates
    Sample {
        #[arg(long = "n")]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Redraw until every distinct pair is at positive distance
        #[arg(long)]
        metric: bool,
        #[command(flatten)]
        out: MatrixOut,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Format(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Format(_) => EXIT_FORMAT,
            Failure::Domain(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Format(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Malformed(_) => Failure::Format(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Format(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Format(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs the CLI on `argv` (program name first) against the process's
/// standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.code()
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Format(format!("cannot read {}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<LabeledMatrix, Failure> {
    parse_matrix(&read_text(path)?)
        .map_err(|e| Failure::Format(format!("{}: {e}", path.display())))
}

fn tolerance(eps: f64) -> Result<Tolerance, Failure> {
    Tolerance::new(eps).map_err(|e| Failure::Usage(e.to_string()))
}

/// Parses a comma-separated list of 1-based indices into 0-based ones.
fn parse_indices(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|part| match part.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Failure::Usage(format!(
                "{part:?} is not a 1-based index"
            ))),
        })
        .collect()
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn emit_matrix(
    out: &mut dyn Write,
    m: &DistanceMatrix,
    labels: Option<&[String]>,
    fmt: &MatrixOut,
) -> Result<(), Failure> {
    if fmt.json {
        emit(out, &matrix_to_json(m, labels))
    } else {
        emit(out, &matrix_to_csv(m))
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Validate {
            matrix,
            metric,
            tolerance: eps,
        } => {
            let tol = tolerance(*eps)?;
            let m = read_matrix(matrix)?.matrix;
            let report = validate(&m, tol);
            let positive = if *metric {
                report.is_metric
            } else {
                report.is_pseudometric
            };
            if cli.pretty {
                let verdict = match (report.is_metric, report.is_pseudometric) {
                    (true, _) => "a metric",
                    (false, true) => "a pseudometric but not a metric",
                    _ => "not a pseudometric",
                };
                emit(out, &format!("{} points: {verdict}", m.n()))?;
                for v in &report.violations {
                    let idx: Vec<String> = v.indices.iter().map(|i| (i + 1).to_string()).collect();
                    emit(
                        out,
                        &format!(
                            "  {:?} at ({}) by {}",
                            v.kind,
                            idx.join(", "),
                            format_number(v.magnitude)
                        ),
                    )?;
                }
            } else {
                emit(out, &report_to_json(&report).to_string())?;
            }
            Ok(if positive { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Encode {
            matrix,
            natural,
            tolerance: eps,
        } => {
            let tol = tolerance(*eps)?;
            let m = read_matrix(matrix)?.matrix;
            let coords = encode_natural_with(&m, tol)?;
            if *natural {
                emit(out, &natural_to_json(&coords))?;
            } else {
                emit(out, &canonical_to_json(&to_canonical(&coords)?))?;
            }
            Ok(EXIT_OK)
        }
        Command::Decode { coords, out: fmt } => {
            let parsed = parse_coords(&read_text(coords)?)
                .map_err(|e| Failure::Format(format!("{}: {e}", coords.display())))?;
            let natural = match parsed {
                Coords::Natural(c) => c,
                Coords::Canonical(q) => from_canonical(&q)?,
            };
            emit_matrix(out, &decode_natural(&natural), None, fmt)?;
            Ok(EXIT_OK)
        }
        Command::Distance { a, b } => {
            let a = read_matrix(a)?.matrix;
            let b = read_matrix(b)?.matrix;
            let dist = sup_distance(&a, &b)?;
            if cli.pretty {
                emit(out, &format!("sup-distance {}", format_number(dist)))?;
            } else {
                emit(out, &json!({ "sup_distance": dist }).to_string())?;
            }
            Ok(EXIT_OK)
        }
        Command::Densify {
            matrix,
            epsilon,
            base,
            tolerance: eps,
            out: fmt,
        } => {
            let tol = tolerance(*eps)?;
            let input = read_matrix(matrix)?;
            let mut req = DensifyRequest::new(input.matrix, *epsilon);
            if let Some(path) = base {
                req = req.with_base(read_matrix(path)?.matrix);
            }
            let rho = densify_with(&req, tol)?;
            emit_matrix(out, &rho, input.labels.as_deref(), fmt)?;
            Ok(EXIT_OK)
        }
        Command::Extend {
            subset,
            indices,
            full_n,
            target,
            cap,
            floor,
            tolerance: eps,
            out: fmt,
        } => {
            let tol = tolerance(*eps)?;
            let subset_metric = read_matrix(subset)?.matrix;
            let target = read_matrix(target)?;
            let floor = floor.unwrap_or_else(|| {
                let smallest = subset_metric.min_positive_off_diagonal().unwrap_or(*cap);
                1e-3 * cap.min(smallest)
            });
            let problem = ExtensionProblem {
                subset_metric,
                indices: parse_indices(indices)?,
                full_n: *full_n,
                target: target.matrix,
                cap: *cap,
                floor,
            };
            let extended = extend_metric_with(&problem, tol)?;
            emit_matrix(out, &extended, target.labels.as_deref(), fmt)?;
            Ok(EXIT_OK)
        }
        Command::Perturb {
            matrix,
            pair,
            epsilon,
            tolerance: eps,
            out: fmt,
        } => {
            let tol = tolerance(*eps)?;
            let input = read_matrix(matrix)?;
            let pair = parse_indices(pair)?;
            let [i, j] = pair[..] else {
                return Err(Failure::Usage("--pair takes exactly two indices".into()));
            };
            let rho = perturb_with(&input.matrix, i, j, *epsilon, tol)?;
            emit_matrix(out, &rho, input.labels.as_deref(), fmt)?;
            Ok(EXIT_OK)
        }
        Command::Family {
            bits,
            separation,
            enumerate,
            pairs,
            seed,
            out: fmt,
        } => family_command(
            cli.pretty,
            bits.as_deref(),
            separation.as_deref(),
            *enumerate,
            *pairs,
            *seed,
            fmt,
            out,
        ),
        Command::Sample {
            n,
            seed,
            metric,
            out: fmt,
        } => {
            let d = sample_pseudometric(*n, *seed, *metric)?;
            emit_matrix(out, &d, None, fmt)?;
            Ok(EXIT_OK)
        }
    }
}

fn parse_selector(text: &str) -> Result<FamilySelector, Failure> {
    text.parse()
        .map_err(|e: crate::Error| Failure::Format(e.to_string()))
}

#[allow(clippy::too_many_arguments)]
fn family_command(
    pretty: bool,
    bits: Option<&str>,
    separation: Option<&Path>,
    enumerate: Option<usize>,
    pairs: usize,
    seed: u64,
    fmt: &MatrixOut,
    out: &mut dyn Write,
) -> CmdResult {
    if let Some(k) = enumerate {
        let members = all_selectors(k)?;
        // Exhaustive pairwise check while the pair count stays small.
        let min = if k <= 6 {
            family_separation(&members)?
        } else {
            let mut min: Option<f64> = None;
            for (a, b) in sample_distinct_pairs(k, pairs, seed)? {
                let d = family_separation(&[a, b])?.expect("two selectors");
                min = Some(min.map_or(d, |m: f64| m.min(d)));
            }
            min
        };
        let exhaustive = k <= 6;
        if pretty {
            emit(
                out,
                &format!(
                    "{} members of length {k}; separation {} ({})",
                    members.len(),
                    min.map_or("n/a".into(), format_number),
                    if exhaustive { "all pairs" } else { "sampled pairs" }
                ),
            )?;
        } else {
            emit(
                out,
                &json!({
                    "k": k,
                    "members": members.len(),
                    "exhaustive": exhaustive,
                    "separation": min,
                })
                .to_string(),
            )?;
        }
        return Ok(EXIT_OK);
    }

    let head = bits.map(parse_selector).transpose()?;
    match (head, separation) {
        (head, Some(path)) => {
            let mut selectors: Vec<FamilySelector> = head.into_iter().collect();
            for line in read_text(path)?.lines() {
                if !line.trim().is_empty() {
                    selectors.push(parse_selector(line)?);
                }
            }
            let sep = family_separation(&selectors)?;
            if pretty {
                emit(
                    out,
                    &format!(
                        "{} selectors; separation {}",
                        selectors.len(),
                        sep.map_or("n/a (single selector)".into(), format_number)
                    ),
                )?;
            } else {
                emit(
                    out,
                    &json!({ "selectors": selectors.len(), "separation": sep }).to_string(),
                )?;
            }
            Ok(EXIT_OK)
        }
        (Some(a), None) => {
            emit_matrix(out, &family_member(&a), None, fmt)?;
            Ok(EXIT_OK)
        }
        (None, None) => Err(Failure::Usage(
            "family needs --bits, --separation or --enumerate".into(),
        )),
    }
}
