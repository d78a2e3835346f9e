//! Command-line front end. `run` parses arguments, dispatches to the library
//! and returns the exit code with the rendered report; `main` only prints.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::io::{self, rational_str, NetRow};
use crate::numerics::{parse_rational, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Approximate supremum, native cut against the Pos-only bisection
    Sup,
    /// Pos(a) versus sup a < eps
    Pos,
    /// Construct a spectrum point from Pos(a) and evaluate it
    Point,
    /// ε-net of spectrum points for the input elements
    Net,
    /// Norm with the Stone–Yosida cross-check
    Norm,
    /// Lattice relations and cover certificates
    CheckLattice,
    /// Square root of a positive semidefinite matrix
    Sqrt,
    /// Absolute value
    Abs,
    /// Join of two elements
    Join,
    /// Sum-of-squares decomposition of 0 <= A <= I
    Sos,
    /// Multiplicativity of net points on a commuting algebra
    Gelfand,
    /// Run the invariant suites
    Selftest {
        #[arg(value_enum, default_value = "quick")]
        level: Level,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sup => "sup",
            Command::Pos => "pos",
            Command::Point => "point",
            Command::Net => "net",
            Command::Norm => "norm",
            Command::CheckLattice => "check-lattice",
            Command::Sqrt => "sqrt",
            Command::Abs => "abs",
            Command::Join => "join",
            Command::Sos => "sos",
            Command::Gelfand => "gelfand",
            Command::Selftest { .. } => "selftest",
        }
    }
}

fn positive_rational(s: &str) -> std::result::Result<Rational, String> {
    let q = parse_rational(s).map_err(|e| e.to_string())?;
    if q <= Rational::from_integer(0.into()) {
        return Err(format!("must be a positive rational, got {s}"));
    }
    Ok(q)
}

#[derive(Debug, Clone, Parser)]
#[command(name = "riesz-spectrum", version, about = "Constructive spectra of Riesz spaces")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Element, matrix, algebra or certificate JSON file
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Second element for binary commands
    #[arg(long, global = true)]
    pub input2: Option<PathBuf>,
    /// Tolerance for operator results, as p/q
    #[arg(long, global = true, default_value = "1/1024", value_parser = positive_rational)]
    pub tol: Rational,
    /// Query precision, as p/q
    #[arg(long, global = true, default_value = "1/64", value_parser = positive_rational)]
    pub eps: Rational,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Iteration cap for sqrt and sos
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
}

impl RunConfig {
    fn config_json(&self) -> Value {
        let path = |p: &Option<PathBuf>| p.as_ref().map_or(Value::Null, |p| Value::String(p.display().to_string()));
        let mut m = Map::new();
        m.insert("command".into(), self.command.name().into());
        if let Command::Selftest { level } = &self.command {
            m.insert("level".into(), format!("{level:?}").to_lowercase().into());
        }
        m.insert("input".into(), path(&self.input));
        m.insert("input2".into(), path(&self.input2));
        m.insert("tol".into(), rational_str(&self.tol).into());
        m.insert("eps".into(), rational_str(&self.eps).into());
        m.insert("seed".into(), self.seed.into());
        m.insert("format".into(), format!("{:?}", self.format).to_lowercase().into());
        m.insert("maxIter".into(), self.max_iter.map_or(Value::Null, Value::from));
        Value::Object(m)
    }
}

/// What a command produced: the report fields, optional CSV records that
/// replace the key/value rendering, and whether a checked property failed.
#[derive(Debug, Default)]
pub struct Report {
    pub fields: Map<String, Value>,
    pub rows: Option<Vec<NetRow>>,
    pub violation: bool,
}

impl Report {
    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.fields.insert(key.into(), v.into());
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[derive(serde::Serialize)]
struct KeyValue {
    key: String,
    value: String,
}

fn render(cfg: &RunConfig, report: Report) -> Result<String> {
    let mut fields = report.fields;
    fields.insert("version".into(), VERSION.into());
    fields.insert("config".into(), cfg.config_json());
    match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Value::Object(fields)).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => match report.rows {
            Some(rows) => io::to_csv(&rows),
            None => {
                let mut rows = Vec::new();
                for (k, v) in &fields {
                    match v {
                        Value::Object(inner) => {
                            for (k2, v2) in inner {
                                rows.push(KeyValue {
                                    key: format!("{k}.{k2}"),
                                    value: scalar_text(v2),
                                });
                            }
                        }
                        _ => rows.push(KeyValue {
                            key: k.clone(),
                            value: scalar_text(v),
                        }),
                    }
                }
                io::to_csv(&rows)
            }
        },
    }
}

/// Exit codes: 0 success, 1 usage/parse/library error, 2 failed check.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    run_config(&cfg)
}

pub fn run_config(cfg: &RunConfig) -> Outcome {
    let fail = |e: Error| Outcome {
        code: 1,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    };
    let report = match commands::dispatch(cfg) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let violation = report.violation;
    match render(cfg, report) {
        Ok(stdout) => Outcome {
            code: if violation { 2 } else { 0 },
            stderr: if violation {
                format!("{}: check failed\n", cfg.command.name())
            } else {
                String::new()
            },
            stdout,
        },
        Err(e) => fail(e),
    }
}
