//! Command-line front end. Every subcommand prints deterministic JSON (or a
//! plain table) and maps failures onto exit codes:
//! 0 success, 1 stuck, 2 usage or window, 3 genericity.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::diamond::{DiamondData, DiamondError, GaloisParams};
use crate::engine::json::parse_coeff;
use crate::engine::{certify_irreducible, Caps, CoeffVec, EngineError, LambdaMode, LambdaSpec, Outcome};
use crate::exec::Exec;
use crate::ffield::Field;
use crate::selftest::{self, SelftestOptions};
use crate::weights::{all_weights, torus_character, weight_s, CharExp, SymConvention, Weight, WeightModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_STUCK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GENERICITY: i32 = 3;

pub const SEED_ENV: &str = "DIAMOND_LAB_SEED";

#[derive(Debug, Parser)]
#[command(name = "diamond-lab", version, about = "Weights, Diamond data and irreducibility certificates")]
pub struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List all Serre weights with dimension, torus character and partner.
    Weights {
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also run the matrix checks for every weight.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diamond weights, socle filtrations and D1 characters for (r0, r1).
    Diamond {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_negative_numbers = true)]
        r0: i64,
        #[arg(long, allow_negative_numbers = true)]
        r1: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify that the subrepresentation generated by a start line is everything.
    Certify {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_negative_numbers = true)]
        r0: i64,
        #[arg(long, allow_negative_numbers = true)]
        r1: i64,
        /// Window radius N; λ lives on [-N, N].
        #[arg(long, default_value_t = 16)]
        window: i64,
        /// Degree n of the λ field F_{p^n}.
        #[arg(long, default_value_t = 4)]
        ext_degree: usize,
        /// A λ mode name or the path of a λ-spec JSON file.
        #[arg(long, default_value = "random_distinct")]
        lambda: String,
        /// Start vector as inline JSON or a path, e.g. {"0": 1, "1": [4,0,0,0]}.
        #[arg(long, default_value = r#"{"0": 1}"#)]
        start: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// State cap for the closure search.
        #[arg(long, default_value_t = 100_000)]
        caps: usize,
        /// Build weight matrices with the transposed convention.
        #[arg(long)]
        inject_transposed: bool,
        /// Certify with constant λ.
        #[arg(long)]
        inject_constant_lambda: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// A failure with its exit code and a one-line message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<DiamondError> for Failure {
    fn from(e: DiamondError) -> Failure {
        let code = match e {
            DiamondError::Genericity { .. } => EXIT_GENERICITY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Failure {
        match e {
            EngineError::Diamond(d) => d.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

/// The result of a subcommand: text for stdout plus an exit code.
#[derive(Debug)]
pub struct Report {
    pub code: i32,
    pub body: String,
}

pub fn main_with(cli: Cli) -> i32 {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let (out, result) = match cli.command {
        Command::Weights { p, format, check, out } => (out, weights_cmd(p, format, check, exec)),
        Command::Diamond { p, r0, r1, out } => (out, diamond_cmd(p, r0, r1)),
        Command::Certify {
            p,
            r0,
            r1,
            window,
            ext_degree,
            lambda,
            start,
            seed,
            out,
        } => {
            let seed = match seed_override(seed) {
                Ok(s) => s,
                Err(f) => return fail(f),
            };
            (out, certify_cmd(p, r0, r1, window, ext_degree, &lambda, &start, seed))
        }
        Command::Selftest {
            seed,
            caps,
            inject_transposed,
            inject_constant_lambda,
            out,
        } => {
            let opts = SelftestOptions {
                seed,
                exec,
                caps: Caps::states(caps),
                convention: if inject_transposed {
                    SymConvention::Transposed
                } else {
                    SymConvention::Standard
                },
                constant_lambda: inject_constant_lambda,
            };
            (out, Ok(selftest_cmd(&opts)))
        }
    };
    match result {
        Ok(report) => {
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &report.body) {
                    return fail(Failure::usage(format!("cannot write {}: {e}", path.display())));
                }
            }
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(report.body.as_bytes());
            report.code
        }
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> i32 {
    eprintln!("error: {}", f.message);
    f.code
}

fn seed_override(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct WeightRow {
    weight: Weight,
    dim: usize,
    character: CharExp,
    /// `None` for singular characters.
    partner: Option<Weight>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check_passed: Option<bool>,
}

fn weights_cmd(p: u32, format: Format, check: bool, exec: Exec) -> Result<Report, Failure> {
    Field::new(p, 1).map_err(|e| Failure::usage(e.to_string()))?;
    let weights = all_weights(p);
    let checks = if check {
        let model = WeightModel::new(p).map_err(|e| Failure::usage(e.to_string()))?;
        Some(model.sweep(&weights, exec))
    } else {
        None
    };
    let partners = exec.map(&weights, |w| weight_s(p, w).ok());
    let rows: Vec<WeightRow> = weights
        .iter()
        .zip(partners)
        .enumerate()
        .map(|(k, (w, partner))| WeightRow {
            weight: *w,
            dim: w.dim(),
            character: torus_character(p, w),
            partner,
            check_passed: checks.as_ref().map(|c| c[k].passed()),
        })
        .collect();
    let failed = rows.iter().any(|r| r.check_passed == Some(false));
    let body = match format {
        Format::Json => to_json(&rows),
        Format::Table => {
            let mut s = String::from("a0\ta1\tm\tdim\te_a\te_d\tpartner\n");
            for r in &rows {
                let partner = match r.partner {
                    Some(w) => format!("({},{},{})", w.a0, w.a1, w.m),
                    None => "SINGULAR".to_string(),
                };
                let _ = write!(
                    s,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.weight.a0, r.weight.a1, r.weight.m, r.dim, r.character.e_a, r.character.e_d, partner
                );
                if let Some(ok) = r.check_passed {
                    s.push_str(if ok { "\tok" } else { "\tFAIL" });
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Report {
        code: if failed { EXIT_STUCK } else { EXIT_OK },
        body,
    })
}

fn diamond_cmd(p: u32, r0: i64, r1: i64) -> Result<Report, Failure> {
    let params = GaloisParams::new(p, r0, r1)?;
    let data = DiamondData::build(params)?;
    let failures = data.verify();
    if !failures.is_empty() {
        return Err(Failure {
            code: EXIT_GENERICITY,
            message: failures.join("; "),
        });
    }
    Ok(Report {
        code: EXIT_OK,
        body: to_json(&data),
    })
}

fn read_arg(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

#[allow(clippy::too_many_arguments)]
fn certify_cmd(
    p: u32,
    r0: i64,
    r1: i64,
    window: i64,
    ext_degree: usize,
    lambda_arg: &str,
    start_arg: &str,
    seed: u64,
) -> Result<Report, Failure> {
    let params = GaloisParams::new(p, r0, r1)?;
    let spec = if Path::new(lambda_arg).is_file() {
        let spec: LambdaSpec = serde_json::from_str(&read_arg(lambda_arg)?)
            .map_err(|e| Failure::usage(format!("bad λ spec: {e}")))?;
        if spec.p != p {
            return Err(Failure::usage(format!("λ spec is for p={}, not p={p}", spec.p)));
        }
        spec
    } else {
        let mode: LambdaMode = lambda_arg.parse().map_err(Failure::usage)?;
        if mode == LambdaMode::Explicit {
            return Err(Failure::usage("explicit λ needs a spec file"));
        }
        LambdaSpec {
            p,
            ext_degree,
            window,
            mode,
            seed,
            values: None,
        }
    };
    let field = Arc::new(Field::new(p, spec.ext_degree).map_err(|e| Failure::usage(e.to_string()))?);
    let start: CoeffVec = parse_coeff(&field, &read_arg(start_arg)?)?;
    let lambda = spec.build_in(field.clone())?;
    match certify_irreducible(&start, &lambda, &params)? {
        Outcome::Certified(cert) => Ok(Report {
            code: EXIT_OK,
            body: to_json_line(&cert.to_json(&field)),
        }),
        Outcome::Stuck(report) => Ok(Report {
            code: EXIT_STUCK,
            body: to_json_line(&report.to_json(&field)),
        }),
    }
}

fn selftest_cmd(opts: &SelftestOptions) -> Report {
    let results = selftest::run(opts);
    let all = results.iter().all(|r| r.passed);
    Report {
        code: if all { EXIT_OK } else { EXIT_STUCK },
        body: to_json(&results),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_negative_r() {
        let cli = Cli::try_parse_from(["diamond-lab", "diamond", "--p", "5", "--r0", "-1", "--r1", "0"]).unwrap();
        assert!(matches!(cli.command, Command::Diamond { r0: -1, .. }));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(diamond_cmd(5, 0, 0).unwrap_err().code, EXIT_GENERICITY);
        assert_eq!(diamond_cmd(4, 1, 0).unwrap_err().code, EXIT_USAGE);
        assert_eq!(weights_cmd(4, Format::Json, false, Exec::Sequential).unwrap_err().code, EXIT_USAGE);
        let overflow = certify_cmd(5, 1, 0, 4, 4, "random_distinct", r#"{"-4": 1, "4": 1}"#, 0).unwrap_err();
        assert_eq!(overflow.code, EXIT_USAGE);
        assert!(overflow.message.contains("at least 8"), "{}", overflow.message);
        let stuck = certify_cmd(5, 1, 0, 8, 4, "constant", r#"{"0": 1, "1": 4}"#, 0).unwrap();
        assert_eq!(stuck.code, EXIT_STUCK);
        assert!(stuck.body.contains(r#""collision":[0,1]"#), "{}", stuck.body);
    }

    #[test]
    fn table_marks_singular_partners() {
        let report = weights_cmd(5, Format::Table, false, Exec::Sequential).unwrap();
        assert_eq!(report.body.lines().count(), 601);
        assert!(report.body.contains("SINGULAR"));
    }
}
