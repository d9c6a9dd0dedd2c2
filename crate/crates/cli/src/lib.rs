//! Command-line front end for `troplin`.
//!
//! Every command reads a matrix from a file (or standard input for `-`) as
//! JSON or plain text, and writes canonical output: fixed key order, exact
//! rationals as strings, no timestamps. Exit status is 0 on success, 1 when
//! the input is well formed but fails a mathematical precondition, and 2 on
//! usage or parse errors.
//!
//! Random matrices come from ChaCha8 (`rand_chacha` 0.3) seeded through
//! `SeedableRng::seed_from_u64`; off-diagonal entries are drawn row-major
//! from the grid `{low, low + 1, ..., high}` and the result is closed. The
//! same seed yields the same matrix on every platform.

pub mod document;
pub mod error;
pub mod newick;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use troplin::batch::{sweep, sweep_sequential, SweepConfig};
use troplin::ni::{complete_two_columns, NiCheck};
use troplin::{build_tree, closure, random_ni, tconv, validate_ni, verify_tree, Matrix, NiMatrix, NormalMatrix, Scalar};

pub use document::{parse_matrix, MatrixDocument, SegmentDocument, TreeDocument};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "troplin", version, about = "Stable tropical lines through columns of normal idempotent matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LineFormat {
    Json,
    Newick,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a matrix is normal idempotent and list every violation.
    Validate {
        /// Matrix file, or `-` for standard input.
        input: PathBuf,
    },
    /// Generate a random normal idempotent matrix.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-20")]
        low: Scalar,
        #[arg(long, allow_hyphen_values = true, default_value = "-10")]
        high: Scalar,
        #[arg(long, env = "TROPLIN_SEED", default_value_t = 0)]
        seed: u64,
        /// Prescribed columns: a matrix with `n` rows and two columns.
        #[arg(long)]
        fix_cols: Option<PathBuf>,
        /// Positions (1-based) of the prescribed columns.
        #[arg(long, num_args = 2, value_names = ["I", "J"], default_values_t = [1, 2])]
        cols: Vec<usize>,
    },
    /// Build the line through two columns as a metric caterpillar tree.
    Line {
        input: PathBuf,
        /// Columns (1-based) giving `p` and `q`.
        #[arg(long, num_args = 2, value_names = ["I", "J"], default_values_t = [1, 2])]
        cols: Vec<usize>,
        #[arg(long, value_enum, default_value_t = LineFormat::Json)]
        format: LineFormat,
        /// Run the independent checks and fail if any does not hold.
        #[arg(long)]
        verify: bool,
    },
    /// Break the tropical segment between two columns into classical pieces.
    Segment {
        input: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"], default_values_t = [1, 2])]
        cols: Vec<usize>,
    },
    /// Close a normal matrix to a normal idempotent one.
    Closure { input: PathBuf },
    /// Build and verify lines for a batch of random matrices.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, allow_hyphen_values = true, default_value = "-20")]
        low: Scalar,
        #[arg(long, allow_hyphen_values = true, default_value = "-10")]
        high: Scalar,
        #[arg(long, env = "TROPLIN_SEED", default_value_t = 0)]
        seed: u64,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

/// Text for standard output and the exit status to report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Result<String, CliError> {
    let shown = path.display().to_string();
    let mut text = String::new();
    if shown == "-" {
        stdin.read_to_string(&mut text).map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
    } else {
        text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown, source })?;
    }
    Ok(text)
}

fn read_square(path: &PathBuf, stdin: &mut dyn Read) -> Result<Matrix, CliError> {
    let m = parse_matrix(&read_input(path, stdin)?)?;
    if !m.is_square() {
        return Err(CliError::parse("matrix", format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m)
}

fn read_ni(path: &PathBuf, stdin: &mut dyn Read) -> Result<NiMatrix, CliError> {
    match validate_ni(&read_square(path, stdin)?)? {
        NiCheck::Valid(a) => Ok(a),
        NiCheck::Invalid(v) => Err(troplin::Error::NotNi(v[0].clone()).into()),
    }
}

/// Converts 1-based `--cols` to 0-based positions, refusing equal or
/// out-of-range columns.
fn column_pair(cols: &[usize], n: usize) -> Result<(usize, usize), CliError> {
    let (i, j) = (cols[0], cols[1]);
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(CliError::Usage(format!("--cols {i} {j}: need two distinct columns in 1..={n}")));
    }
    Ok((i - 1, j - 1))
}

#[derive(Serialize)]
struct SweepFailure {
    seed: u64,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct SweepDocument {
    n: usize,
    count: u64,
    seed: u64,
    low: String,
    high: String,
    passed: u64,
    non_generic: u64,
    failures: Vec<SweepFailure>,
}

/// Runs one command. Errors carry their own exit status.
pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Result<Output, CliError> {
    match &cli.command {
        Command::Validate { input } => {
            let m = read_square(input, stdin)?;
            Ok(match validate_ni(&m)? {
                NiCheck::Valid(_) => Output::ok(format!("normal idempotent matrix of order {}\n", m.rows())),
                NiCheck::Invalid(v) => {
                    let mut text = format!("not normal idempotent: {} violation(s)\n", v.len());
                    for x in &v {
                        text.push_str(&format!("{x}\n"));
                    }
                    Output { text, code: 1 }
                }
            })
        }
        Command::Gen { n, low, high, seed, fix_cols, cols } => {
            if *n < 2 {
                return Err(CliError::Usage(format!("--n {n}: need at least 2")));
            }
            let a = match fix_cols {
                None => random_ni(*n, *low, *high, *seed)?,
                Some(path) => {
                    let fixed = parse_matrix(&read_input(path, stdin)?)?;
                    if fixed.rows() != *n || fixed.cols() != 2 {
                        return Err(CliError::parse(
                            "--fix-cols",
                            format!("expected {n} rows of 2 entries, got {}x{}", fixed.rows(), fixed.cols()),
                        ));
                    }
                    let (i, j) = column_pair(cols, *n)?;
                    let (first, second) = (fixed.column(0), fixed.column(1));
                    if i < j {
                        complete_two_columns(&first, &second, i, j, *low, *high, *seed)?
                    } else {
                        complete_two_columns(&second, &first, j, i, *low, *high, *seed)?
                    }
                }
            };
            Ok(Output::ok(MatrixDocument::from_matrix(a.matrix()).to_json() + "\n"))
        }
        Command::Line { input, cols, format, verify } => {
            let a = read_ni(input, stdin)?;
            let (i, j) = column_pair(cols, a.order())?;
            let tree = build_tree(&a, i, j)?;
            let report = verify.then(|| verify_tree(&a, i, j, &tree));
            if let Some(r) = report.as_ref().filter(|r| !r.overall) {
                return Err(CliError::Verification(r.to_string()));
            }
            let text = match format {
                LineFormat::Newick => newick::write(&tree),
                LineFormat::Json => {
                    let mut doc = TreeDocument::from_tree(&tree);
                    doc.verification = report.as_ref().map(document::ReportDocument::from_report);
                    doc.to_json()
                }
            };
            Ok(Output::ok(text + "\n"))
        }
        Command::Segment { input, cols } => {
            let m = parse_matrix(&read_input(input, stdin)?)?;
            let (i, j) = column_pair(cols, m.cols())?;
            let seg = tconv(&m.column_point(i)?, &m.column_point(j)?)?;
            Ok(Output::ok(SegmentDocument::from_segment((i, j), &seg).to_json() + "\n"))
        }
        Command::Closure { input } => {
            let normal = NormalMatrix::new(read_square(input, stdin)?)?;
            Ok(Output::ok(MatrixDocument::from_matrix(closure(&normal).matrix()).to_json() + "\n"))
        }
        Command::Sweep { n, count, low, high, seed, sequential } => {
            if *n < 3 {
                return Err(CliError::Usage(format!("--n {n}: need at least 3")));
            }
            let config = SweepConfig { n: *n, low: *low, high: *high, seed: *seed, count: *count };
            let summary = if *sequential { sweep_sequential(config)? } else { sweep(config)? };
            let doc = SweepDocument {
                n: *n,
                count: *count,
                seed: *seed,
                low: low.to_string(),
                high: high.to_string(),
                passed: summary.passed,
                non_generic: summary.non_generic,
                failures: summary
                    .failures
                    .iter()
                    .map(|f| SweepFailure { seed: f.seed, failures: f.failures.clone() })
                    .collect(),
            };
            let text = serde_json::to_string_pretty(&doc).expect("plain data") + "\n";
            Ok(Output { text, code: if summary.all_passed() { 0 } else { 1 } })
        }
    }
}
