use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopfdouble_core::hopf::{verify_hopf, Algebra, SweepConfig};
use hopfdouble_core::linalg::Vector;
use hopfdouble_core::rep_theory::{jacobson_radical, Carrier, DecompositionReport, HbarModules};
use hopfdouble_core::CheckReport;
use serde_json::{json, Value};

use crate::expr::{parse_expr, ExprError};
use crate::json::{cyc_to_json, hopf_from_json, hopf_to_json, report_to_json};
use crate::session::{AlgebraKind, Session};
use crate::suites::{self, Checks, DerhamCheck, Suite, SuiteReport};

#[derive(Parser, Debug)]
#[command(name = "hopfdouble", version, about = "Exact computations in Taft doubles and their truncations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    pub p: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample count for sweeps too large to run exhaustively.
    #[arg(long = "sample", default_value_t = 10_000)]
    pub sample: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build B, B*, D(B) and H(B*) and print their dimensions and generators.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Multiply two elements.
    Mul {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = AlgebraKind::Heisenberg)]
        algebra: AlgebraKind,
        x: String,
        y: String,
    },
    /// Evaluate `h |> x`: D(B) on H(B*), or U on H̄ or Ω.
    Act {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = AlgebraKind::Heisenberg)]
        host: AlgebraKind,
        expr: String,
    },
    /// Evaluate an expression and print its normal form.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        algebra: Option<AlgebraKind>,
        expr: String,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// The closed-form suite on its own.
    VerifyClosedForms {
        #[command(flatten)]
        common: Common,
    },
    /// Build U and H̄ and run the truncation and presentation checks.
    Truncate {
        #[command(flatten)]
        common: Common,
    },
    /// Projective decomposition of a U-submodule of H̄.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// czd, hbar, lambda^k or odd-subalgebra
        #[arg(long, value_parser = parse_carrier)]
        carrier: Carrier,
    },
    /// Checks on the differential calculi over C_q[z,∂] and H̄.
    Derham {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = DerhamCheck::All)]
        check: DerhamCheck,
    },
    /// Write structure constants as JSON.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        algebra: ExportKind,
    },
    /// Read structure constants from JSON and check the Hopf axioms.
    CheckHopf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    B,
    Bstar,
    Double,
    /// the restricted quantum group
    U,
}

fn parse_carrier(s: &str) -> Result<Carrier, String> {
    match s {
        "czd" => Ok(Carrier::Czd),
        "hbar" => Ok(Carrier::Hbar),
        "odd-subalgebra" => Ok(Carrier::OddSubalgebra),
        _ => s
            .strip_prefix("lambda^")
            .and_then(|k| k.parse().ok())
            .map(Carrier::LambdaPower)
            .ok_or_else(|| format!("unknown carrier {:?}; expected czd, hbar, lambda^k or odd-subalgebra", s)),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hopfdouble_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

/// What a verb produced: text and JSON renderings and whether every check passed.
struct Outcome {
    json: Value,
    text: String,
    passed: bool,
}

impl Common {
    fn session(&self) -> Result<Session, CliError> {
        let cfg = SweepConfig {
            samples: self.sample,
            seed: self.seed,
            ..SweepConfig::default()
        };
        Ok(Session::new(self.p as usize, cfg)?)
    }

    fn emit(&self, o: &Outcome) -> Result<(), CliError> {
        let s = match self.format {
            Format::Json => serde_json::to_string_pretty(&o.json).expect("JSON values serialize") + "\n",
            Format::Text => o.text.clone(),
        };
        match &self.output {
            Some(path) => fs::write(path, s).map_err(|source| CliError::Io { path: path.clone(), source }),
            None => {
                print!("{}", s);
                Ok(())
            }
        }
    }
}

fn element_outcome(sess: &Session, kind: AlgebraKind, v: &Vector) -> Result<Outcome, CliError> {
    let printed = sess.print(kind, v)?;
    let alg = sess.algebra(kind)?;
    let coeffs: Vec<Value> = v.iter().map(|(i, c)| json!([i, alg.label(i), cyc_to_json(c)])).collect();
    Ok(Outcome {
        json: json!({"algebra": format!("{:?}", kind).to_lowercase(), "p": sess.p, "element": printed, "coefficients": coeffs}),
        text: printed + "\n",
        passed: true,
    })
}

fn suite_outcome(r: &SuiteReport) -> Outcome {
    Outcome {
        json: r.to_json(),
        text: r.to_text(),
        passed: r.passed(),
    }
}

fn decomposition_json(d: &DecompositionReport, p: usize) -> Value {
    let mult: serde_json::Map<String, Value> = d
        .multiplicities
        .iter()
        .map(|((sg, s), n)| (format!("P{}{}", sg.as_char(), s), json!(n)))
        .collect();
    json!({
        "carrier": d.carrier,
        "p": p,
        "module_dim": d.module_dim,
        "top_dim": d.top_dim,
        "multiplicities": mult,
        "projective_total": d.projective_total,
        "audit": d.audit_passes(),
    })
}

fn run(cmd: Command) -> Result<(Common, Outcome), CliError> {
    Ok(match cmd {
        Command::Build { common } => {
            let sess = common.session()?;
            let c = &sess.ctx;
            let mut gens = serde_json::Map::new();
            let mut text = format!(
                "p = {}\ndim B = {}\ndim B* = {}\ndim D(B) = {}\ndim H(B*) = {}\n",
                c.p,
                c.b.dim(),
                c.bstar.dim(),
                c.d.dim(),
                c.h.dim()
            );
            for (name, v) in [("z", c.z()), ("d", c.del()), ("l", c.lambda())] {
                let s = sess.print(AlgebraKind::Heisenberg, &v)?;
                text.push_str(&format!("{} = {}\n", name, s));
                gens.insert(name.into(), json!(s));
            }
            let json = json!({
                "p": c.p,
                "dims": {"b": c.b.dim(), "bstar": c.bstar.dim(), "double": c.d.dim(), "heisenberg": c.h.dim()},
                "generators": gens,
            });
            (common, Outcome { json, text, passed: true })
        }
        Command::Mul { common, algebra, x, y } => {
            let sess = common.session()?;
            let a = sess.eval(algebra, &x)?;
            let b = sess.eval(algebra, &y)?;
            let v = sess.algebra(algebra)?.mul(&a, &b);
            let o = element_outcome(&sess, algebra, &v)?;
            (common, o)
        }
        Command::Act { common, host, expr } => {
            let sess = common.session()?;
            let v = sess.act(host, &expr)?;
            let o = element_outcome(&sess, host, &v)?;
            (common, o)
        }
        Command::Eval { common, algebra, expr } => {
            let sess = common.session()?;
            let e = parse_expr(&expr)?;
            if e.is_action() {
                let host = algebra.unwrap_or(AlgebraKind::Heisenberg);
                let v = sess.act(host, &expr)?;
                let o = element_outcome(&sess, host, &v)?;
                (common, o)
            } else {
                let kind = algebra.unwrap_or_else(|| Session::infer_kind(&e));
                let v = sess.eval_expr(kind, &e)?;
                let o = element_outcome(&sess, kind, &v)?;
                (common, o)
            }
        }
        Command::Verify { common, suite } => {
            let sess = common.session()?;
            let r = suites::run_suite(suite, &sess)?;
            (common, suite_outcome(&r))
        }
        Command::VerifyClosedForms { common } => {
            let sess = common.session()?;
            let r = suites::run_suite(Suite::ClosedForms, &sess)?;
            (common, suite_outcome(&r))
        }
        Command::Truncate { common } => {
            let sess = common.session()?;
            let r = suites::run_suite(Suite::Truncate, &sess)?;
            (common, suite_outcome(&r))
        }
        Command::Decompose { common, carrier } => {
            let sess = common.session()?;
            let t = sess.truncation()?;
            let rad = jacobson_radical(&t.u, t.u_index())?;
            let d = HbarModules::new(t).decompose(carrier, &rad)?;
            let o = Outcome {
                json: decomposition_json(&d, sess.p),
                text: format!("{}\n", d),
                passed: d.audit_passes(),
            };
            (common, o)
        }
        Command::Derham { common, check } => {
            let sess = common.session()?;
            let mut checks = Checks::default();
            suites::derham(&sess, &mut checks, check)?;
            let r = collect("derham", &sess, checks);
            (common, suite_outcome(&r))
        }
        Command::Export { common, algebra } => {
            let sess = common.session()?;
            let c = &sess.ctx;
            let json = match algebra {
                ExportKind::B => hopf_to_json(&*c.b, sess.p),
                ExportKind::Bstar => hopf_to_json(&*c.bstar, sess.p),
                ExportKind::Double => hopf_to_json(&c.d, sess.p),
                ExportKind::U => hopf_to_json(&*sess.truncation()?.u, sess.p),
            };
            let text = serde_json::to_string(&json).expect("JSON values serialize") + "\n";
            (common, Outcome { json, text, passed: true })
        }
        Command::CheckHopf { common, input } => {
            let raw = fs::read_to_string(&input).map_err(|e| CliError::Usage(format!("{}: {}", input.display(), e)))?;
            let v: Value = serde_json::from_str(&raw).map_err(|e| CliError::Usage(format!("{}: {}", input.display(), e)))?;
            let h = hopf_from_json(&v)?;
            let cfg = SweepConfig {
                samples: common.sample,
                seed: common.seed,
                ..SweepConfig::default()
            };
            let r: CheckReport = verify_hopf(&h, &cfg);
            let o = Outcome {
                json: report_to_json(&r),
                text: format!("{}\n", r),
                passed: r.passed(),
            };
            (common, o)
        }
    })
}

fn collect(name: &str, sess: &Session, checks: Checks) -> SuiteReport {
    let wall = checks.0.iter().map(|c| c.wall).sum();
    let mut checks = checks.0;
    checks.sort_by(|a, b| a.report.name.cmp(&b.report.name));
    SuiteReport {
        suite: name.into(),
        p: sess.p,
        seed: sess.cfg.seed,
        samples: sess.cfg.samples,
        checks,
        started: std::time::SystemTime::now(),
        wall,
    }
}

/// Caps rayon's pool from HOPFDOUBLE_THREADS, if set.
pub fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("HOPFDOUBLE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Usage(format!("HOPFDOUBLE_THREADS={:?} is not a number", v)))?;
        // a second initialization (e.g. in tests) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = init_threads().and_then(|_| run(cli.command)).and_then(|(common, o)| {
        common.emit(&o)?;
        Ok(o.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
