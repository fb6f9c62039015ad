//! Command-line front end. Exit status: 0 pass, 1 mathematical failure
//! (a gate or report came back false), 2 input or module error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactfun::{parse_rational, rat, LaurentPolynomial};
use crate::fourier::{pw_gate, solve_zeta, transform, WhittakerFn, DEFAULT_ZETA_MAX_DEGREE};
use crate::inversion::{
    build_phi, calibrate, default_contour, packet_range, roundtrip_check, theorem5_check,
    wave_packet, Contour,
};
use crate::jacquet::{whittaker_value, CFunctions, JacquetContext};
use crate::padic::{PadicConfig, DEFAULT_SHELL_GUARD};
use crate::sqint::{casselman_check, ExponentData};

pub const DEFAULT_CONFIG_FILE: &str = "whittakerpw.json";

/// A calibration constant together with the `q` it was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistedCalibration {
    #[serde(with = "crate::exactfun::rational_string")]
    pub q: BigRational,
    #[serde(with = "crate::exactfun::rational_string")]
    pub constant: BigRational,
}

/// Contents of `whittakerpw.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    #[serde(with = "crate::exactfun::rational_string")]
    pub q: BigRational,
    #[serde(default = "default_guard")]
    pub max_shell_guard: i64,
    #[serde(default = "default_zeta_degree")]
    pub zeta_max_degree: usize,
    #[serde(
        default,
        with = "crate::exactfun::rational_string_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub radius: Option<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<PersistedCalibration>,
}

fn default_guard() -> i64 {
    DEFAULT_SHELL_GUARD
}

fn default_zeta_degree() -> usize {
    DEFAULT_ZETA_MAX_DEGREE
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            q: rat(2, 1),
            max_shell_guard: DEFAULT_SHELL_GUARD,
            zeta_max_degree: DEFAULT_ZETA_MAX_DEGREE,
            radius: None,
            calibration: None,
        }
    }
}

impl SessionConfig {
    pub fn padic(&self) -> Result<PadicConfig> {
        if self.zeta_max_degree == 0 {
            return Err(Error::InvalidConfig(
                "zeta_max_degree must be positive".into(),
            ));
        }
        PadicConfig::new(self.q.clone(), self.max_shell_guard)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "whittakerpw",
    version,
    about = "Exact Fourier–Whittaker analysis on SL(2) over a p-adic field"
)]
struct Cli {
    /// Session config file.
    #[arg(long, global = true, default_value = DEFAULT_CONFIG_FILE)]
    config: PathBuf,
    /// Residue field size (overrides the config).
    #[arg(long, global = true)]
    q: Option<String>,
    /// Maximum number of explicitly enumerated shells.
    #[arg(long, global = true)]
    guard: Option<i64>,
    /// Contour radius for `invert`.
    #[arg(long, global = true)]
    radius: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive a, b, j (and ζ) with their relation constants.
    Cfun,
    /// Solve a(z⁻¹)ζ(z) + a(z)ζ(z⁻¹) = 1 for a polynomial ζ.
    Zeta {
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// CSV of E_z(a_n).
    WhittakerTable {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        to: i64,
    },
    /// Transform a Whittaker function.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Paley–Wiener test of a Laurent polynomial.
    CheckPw {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Invert a transform by wave packets.
    Invert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transform, invert and compare.
    Roundtrip {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Residual of the wave-packet transform identity for a Laurent Φ.
    Theorem5 {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Compute and persist the calibration constant.
    Calibrate,
    /// Casselman criterion on a list of exponents.
    Sqint {
        #[arg(long, allow_hyphen_values = true)]
        exponents: String,
    },
}

/// Result of one subcommand: text for stdout and whether it passed.
struct Outcome {
    stdout: String,
    pass: bool,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Self { stdout, pass: true }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InputParse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InputParse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::InputParse(format!("{}: {e}", path.display())))
}

fn parse_flag(s: &str) -> Result<BigRational> {
    parse_rational(s).map_err(Error::InputParse)
}

struct Session {
    path: PathBuf,
    config: SessionConfig,
    ctx: JacquetContext,
}

impl Session {
    fn load(cli: &Cli) -> Result<Self> {
        let mut config = if cli.config.exists() {
            read_json(&cli.config)?
        } else {
            SessionConfig::default()
        };
        if let Some(q) = &cli.q {
            config.q = parse_flag(q)?;
        }
        if let Some(g) = cli.guard {
            config.max_shell_guard = g;
        }
        if let Some(r) = &cli.radius {
            config.radius = Some(parse_flag(r)?);
        }
        let ctx = JacquetContext::new(config.padic()?)?;
        Ok(Self {
            path: cli.config.clone(),
            config,
            ctx,
        })
    }

    fn cfunctions(&self) -> Result<CFunctions> {
        let mut cf = CFunctions::derive(&self.ctx)?;
        cf.zeta = Some(solve_zeta(&cf, self.config.zeta_max_degree)?.zeta);
        Ok(cf)
    }

    /// The persisted constant, or a fresh calibration when none is stored.
    fn calibration(&self, cf: &CFunctions) -> Result<BigRational> {
        match &self.config.calibration {
            Some(c) if c.q != self.config.q => Err(Error::InvalidConfig(format!(
                "persisted calibration is for q = {}, session has q = {}",
                c.q, self.config.q
            ))),
            Some(c) => Ok(c.constant.clone()),
            None => Ok(calibrate(&self.ctx, cf)?.constant),
        }
    }
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<String> {
    match out {
        Some(p) => {
            write_file(p, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    if let Command::Sqint { exponents } = &cli.command {
        let e = ExponentData::parse(exponents).map_err(Error::InputParse)?;
        let ok = casselman_check(&e);
        let line = match e.first_violation() {
            None => "true\n".to_string(),
            Some(v) => format!("false (exponent {v} is not strictly negative)\n"),
        };
        return Ok(Outcome {
            stdout: line,
            pass: ok,
        });
    }

    let session = Session::load(cli)?;
    let ctx = &session.ctx;
    match &cli.command {
        Command::Cfun => {
            let mut cf = CFunctions::derive(ctx)?;
            cf.zeta = solve_zeta(&cf, session.config.zeta_max_degree)
                .ok()
                .map(|s| s.zeta);
            let mut v = serde_json::to_value(&cf).expect("serializable");
            v["text"] = json!({
                "a": cf.a.to_string(),
                "b": cf.b.to_string(),
                "j": cf.j.to_string(),
                "zeta": cf.zeta.as_ref().map(ToString::to_string),
                "alpha": cf.asymptotics.alpha.to_string(),
                "beta": cf.asymptotics.beta.to_string(),
            });
            Ok(Outcome::pass(to_json(&v)))
        }
        Command::Zeta { max_degree } => {
            let cf = CFunctions::derive(ctx)?;
            let sol = solve_zeta(&cf, max_degree.unwrap_or(session.config.zeta_max_degree))?;
            let v = json!({ "zeta": sol.zeta, "degree": sol.degree, "text": sol.zeta.to_string() });
            Ok(Outcome::pass(to_json(&v)))
        }
        Command::WhittakerTable { from, to } => {
            let mut s = String::from("n,laurent_polynomial\n");
            for n in *from..=*to {
                s.push_str(&format!("{n},{}\n", whittaker_value(ctx, n)?));
            }
            Ok(Outcome::pass(s))
        }
        Command::Transform { input, out } => {
            let f: WhittakerFn = read_json(input)?;
            let cf = session.cfunctions()?;
            let w = session.calibration(&cf)?;
            let big_f = transform(ctx, &f, &w)?;
            Ok(Outcome::pass(emit(out, to_json(&big_f))?))
        }
        Command::CheckPw { input } => {
            let big_f: LaurentPolynomial = read_json(input)?;
            let cf = CFunctions::derive(ctx)?;
            let report = pw_gate(&big_f.into(), &cf);
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["residual_text"] = json!(report.functional_eq_residual.to_string());
            Ok(Outcome {
                stdout: to_json(&v),
                pass: report.passes,
            })
        }
        Command::Invert { input, out } => {
            let big_f: LaurentPolynomial = read_json(input)?;
            let cf = session.cfunctions()?;
            let phi = build_phi(&big_f, &cf)?;
            let contour = match &session.config.radius {
                Some(r) => Contour::new(r.clone())?,
                None => default_contour(&phi)?,
            };
            let f = wave_packet(&phi, ctx, &contour, packet_range(&phi))?;
            Ok(Outcome::pass(emit(out, to_json(&f))?))
        }
        Command::Roundtrip { input } => {
            let f: WhittakerFn = read_json(input)?;
            let cf = session.cfunctions()?;
            let w = session.calibration(&cf)?;
            let report = roundtrip_check(&f, &cf, ctx, &w)?;
            Ok(Outcome {
                stdout: to_json(&report),
                pass: report.equal,
            })
        }
        Command::Theorem5 { input } => {
            let phi: LaurentPolynomial = read_json(input)?;
            let cf = session.cfunctions()?;
            let w = session.calibration(&cf)?;
            let residual = theorem5_check(&phi, &cf, ctx, &w)?;
            let zero = residual.is_zero();
            let v = json!({ "residual": residual, "text": residual.to_string(), "zero": zero });
            Ok(Outcome {
                stdout: to_json(&v),
                pass: zero,
            })
        }
        Command::Calibrate => {
            let cf = session.cfunctions()?;
            let cal = calibrate(ctx, &cf)?;
            let mut config = session.config.clone();
            config.calibration = Some(PersistedCalibration {
                q: cal.q.clone(),
                constant: cal.constant.clone(),
            });
            write_file(&session.path, &to_json(&config))?;
            Ok(Outcome::pass(to_json(&cal)))
        }
        Command::Sqint { .. } => unreachable!("handled above"),
    }
}

/// Run the CLI on `args` (including the program name), returning the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            if outcome.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}: {e}", e.name());
            2
        }
    }
}
