//! Command-line front end. `run_cli` is the whole program minus process
//! exit, so it can be driven from tests.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::assembly::{build_css, hgp_reference, ClassicalCode};
use crate::io::{parse_code_spec, read_build, write_build, BuildMetadata, IoError, MatrixFormat};
use crate::lattice::{codes_equivalent, dual_bijection, td_build, TdLabel};
use crate::metrics::{
    code_params, logical_count, parse_family, sweep_table, write_csv, DistanceMethod,
    DEFAULT_EXACT_THRESHOLD,
};
use crate::solver::{solve_fork, Triple};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qbp", version, about = "Build CSS codes from products of classical codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistanceKind {
    Exact,
    Estimate,
    Auto,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Xcube,
    #[value(name = "4dtoric")]
    FourDToric,
    Hgp,
}

#[derive(Debug, clap::Args)]
struct TripleArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    w: usize,
}

impl TripleArgs {
    fn triple(&self) -> Result<Triple, Failure> {
        Triple::new(self.p, self.q, self.w).map_err(|e| Failure::usage(e.to_string()))
    }
}

#[derive(Debug, clap::Args)]
struct EstimateArgs {
    /// Random trials for distance estimates.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest kernel dimension enumerated exactly.
    #[arg(long, default_value_t = DEFAULT_EXACT_THRESHOLD)]
    threshold: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the Z-check boundary components and print them.
    Solve {
        #[command(flatten)]
        triple: TripleArgs,
        /// Print JSON (the default).
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Print one generator per line instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Assemble a code and write its check matrices and metadata.
    Build {
        #[command(flatten)]
        triple: TripleArgs,
        /// Comma-separated input codes, one per factor or a single one for all.
        #[arg(long)]
        codes: String,
        /// Base path; writes <base>.hx.<ext>, <base>.hz.<ext> and <base>.json.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "alist")]
        format: MatrixFormat,
    },
    /// Report n, k and optionally distances of a built code.
    Params {
        base: PathBuf,
        #[arg(long, value_enum)]
        distance: Option<DistanceKind>,
        #[command(flatten)]
        estimate: EstimateArgs,
    },
    /// Check a construction against its independent reference.
    Verify {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long = "L", default_value_t = 3)]
        size: usize,
    },
    /// Tabulate parameters of several families at one lattice size.
    Sweep {
        /// Comma-separated families: [d_n,d_s,d_l,D], qbp:p-q-w or (p,q,w).
        #[arg(long)]
        families: String,
        #[arg(long = "L")]
        size: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        estimate: EstimateArgs,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn failed(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILED,
            message: message.into(),
        }
    }

    fn io(message: impl ToString) -> Self {
        Self {
            code: EXIT_IO,
            message: message.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Css(e) => Failure::failed(e.to_string()),
            other => Failure::io(other),
        }
    }
}

/// Splits on commas that are not inside brackets or parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

fn method(kind: DistanceKind, args: &EstimateArgs) -> DistanceMethod {
    match kind {
        DistanceKind::Exact => DistanceMethod::Exact {
            threshold: args.threshold,
        },
        DistanceKind::Estimate => DistanceMethod::Estimate {
            trials: args.trials,
            seed: args.seed,
        },
        DistanceKind::Auto => DistanceMethod::Auto {
            threshold: args.threshold,
            trials: args.trials,
            seed: args.seed,
        },
    }
}

fn reps(size: usize, p: usize) -> Result<Vec<ClassicalCode>, Failure> {
    let code = ClassicalCode::repetition(size).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(vec![code; p])
}

fn verify(target: Target, size: usize, out: &mut dyn Write) -> Result<bool, Failure> {
    let fail = |e: &dyn ToString| Failure::failed(e.to_string());
    let product = |p, q, w| -> Result<_, Failure> {
        let spec = solve_fork(Triple::new(p, q, w).map_err(|e| fail(&e))?).map_err(|e| fail(&e))?;
        build_css(&spec, &reps(size, p)?).map_err(|e| fail(&e))
    };
    let mut checks = Vec::new();
    match target {
        Target::Xcube => {
            let qbp = product(3, 2, 0)?;
            let label = TdLabel::new(0, 1, 2, 3).expect("valid label");
            let td = td_build(label, size).map_err(|e| fail(&e))?;
            let bij = dual_bijection(&qbp, label, size).map_err(|e| fail(&e))?;
            let ok = codes_equivalent(&qbp, &td, &bij).map_err(|e| fail(&e))?;
            checks.push((format!("(3,2,0) vs dual [0,1,2,3] at L={size}"), ok));
        }
        Target::FourDToric => {
            let qbp = product(4, 2, 1)?;
            let hgp = hgp_reference(&reps(size, 4)?, 2).map_err(|e| fail(&e))?;
            let identity: Vec<usize> = (0..qbp.n_qubits()).collect();
            let ok = codes_equivalent(&qbp, &hgp, &identity).map_err(|e| fail(&e))?;
            checks.push((format!("(4,2,1) vs product segment at L={size}"), ok));
        }
        Target::Hgp => {
            for p in 2..=4 {
                for q in 1..p {
                    let qbp = product(p, q, q - 1)?;
                    let hgp = hgp_reference(&reps(size, p)?, q).map_err(|e| fail(&e))?;
                    let identity: Vec<usize> = (0..qbp.n_qubits()).collect();
                    let ok = codes_equivalent(&qbp, &hgp, &identity).map_err(|e| fail(&e))?
                        && logical_count(&qbp) == logical_count(&hgp);
                    checks.push((format!("({p},{q},{}) vs product segment at L={size}", q - 1), ok));
                }
            }
        }
    }
    for (name, ok) in &checks {
        writeln!(out, "{} {name}", if *ok { "pass" } else { "FAIL" }).map_err(Failure::io)?;
    }
    Ok(checks.iter().all(|(_, ok)| *ok))
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Solve { triple, text, .. } => {
            let spec = solve_fork(triple.triple()?).map_err(|e| Failure::failed(e.to_string()))?;
            if text {
                for level in &spec.levels {
                    for g in &level.generators {
                        writeln!(out, "t={} {g}", level.t).map_err(Failure::io)?;
                    }
                }
            } else {
                writeln!(out, "{}", spec.to_json()).map_err(Failure::io)?;
            }
        }
        Command::Build {
            triple,
            codes,
            out: base,
            format,
        } => {
            let triple = triple.triple()?;
            let mut specs: Vec<String> = split_top_level(&codes).into_iter().map(String::from).collect();
            if specs.len() == 1 {
                specs = vec![specs[0].clone(); triple.p()];
            }
            if specs.len() != triple.p() {
                return Err(Failure::usage(format!(
                    "--codes lists {} codes but p = {}",
                    specs.len(),
                    triple.p()
                )));
            }
            let inputs = specs
                .iter()
                .map(|s| parse_code_spec(s).map_err(|e| Failure::usage(format!("{s}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = solve_fork(triple).map_err(|e| Failure::failed(e.to_string()))?;
            let code = build_css(&spec, &inputs).map_err(|e| Failure::failed(e.to_string()))?;
            let meta = BuildMetadata::new(triple, &code, specs, format);
            let paths = write_build(&base, &code, &meta)?;
            for path in [paths.h_x, paths.h_z, paths.metadata] {
                writeln!(out, "wrote {}", path.display()).map_err(Failure::io)?;
            }
        }
        Command::Params {
            base,
            distance,
            estimate,
        } => {
            let (code, _) = read_build(&base)?;
            match distance {
                None => {
                    writeln!(out, "n={}", code.n_qubits()).map_err(Failure::io)?;
                    writeln!(out, "k={}", logical_count(&code)).map_err(Failure::io)?;
                }
                Some(kind) => {
                    let params = code_params(&code, method(kind, &estimate))
                        .map_err(|e| Failure::failed(e.to_string()))?;
                    writeln!(out, "n={}", params.n).map_err(Failure::io)?;
                    writeln!(out, "k={}", params.k).map_err(Failure::io)?;
                    writeln!(out, "d_x={} {}", params.d_x, params.d_x.exactness).map_err(Failure::io)?;
                    writeln!(out, "d_z={} {}", params.d_z, params.d_z.exactness).map_err(Failure::io)?;
                }
            }
        }
        Command::Verify { target, size } => {
            if !verify(target, size, out)? {
                return Ok(EXIT_FAILED);
            }
        }
        Command::Sweep {
            families,
            size,
            csv,
            estimate,
        } => {
            let families = split_top_level(&families)
                .into_iter()
                .map(parse_family)
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::usage)?;
            let rows = sweep_table(&families, size, method(DistanceKind::Auto, &estimate));
            match csv {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
                    write_csv(&rows, BufWriter::new(file)).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
                    writeln!(out, "wrote {}", path.display()).map_err(Failure::io)?;
                }
                None => write_csv(&rows, &mut *out).map_err(Failure::io)?,
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
