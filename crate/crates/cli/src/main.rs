//! `cuspsum`: coefficient cache, twisted sums, generating-series evaluation
//! and verification suites for level-1 cusp forms.

mod cache;
mod report;
mod verify;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cuspsum_core::genseries::{asym_ratio, f_closed, f_direct, t_value, ComplexPoint, SeriesEval};
use cuspsum_core::modarith::kloosterman;
use cuspsum_core::progressions::{f_progression, kloosterman_aggregate, resonance_analysis, ProgressionSpec};
use cuspsum_core::sums::{
    default_theta, normalized_progression_sum, progression_sum_exact, scan_extrema, twisted_sum, SumRecord,
};
use cuspsum_core::{with_threads, CuspForm, Error, Recipe, ReducedRational};
use serde_json::json;

use report::{complex, Format, Outcome, Report};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(Error::Accuracy { .. }) => 1,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "cuspsum", version, about = "Twisted sums and generating series of level-1 cusp forms")]
struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Coefficient cache directory (overrides CUSPSUM_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FormArgs {
    /// delta, delta-e4, w24-a2-zero, or an expression such as "D*E4^3 - 696*D^2".
    #[arg(long, default_value = "delta")]
    form: String,
}

#[derive(Args, Debug, Clone)]
struct TwistArgs {
    /// Twist α as a/c.
    #[arg(long)]
    alpha: Option<String>,
    /// Progression modulus q.
    #[arg(long = "mod", requires = "res", conflicts_with = "alpha")]
    modulus: Option<i64>,
    /// Progression residue h, 1 ≤ h ≤ q.
    #[arg(long, requires = "modulus")]
    res: Option<i64>,
}

#[derive(Args, Debug, Clone)]
struct PointArgs {
    /// Re s.
    #[arg(long)]
    sigma: f64,
    /// Im s.
    #[arg(long, conflicts_with = "t_index", allow_hyphen_values = true)]
    t: Option<f64>,
    /// Im s = 4π√n/c for this n.
    #[arg(long)]
    t_index: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Materialize coefficients and write n, a_n, â_n as CSV.
    Coeffs {
        #[command(flatten)]
        form: FormArgs,
        #[arg(short = 'N')]
        n: usize,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Twisted or progression partial sum at x.
    Sum {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        twist: TwistArgs,
        #[arg(short = 'x', long)]
        x: f64,
    },
    /// Extremes of Re S(x, α)/x^θ for x ≤ X.
    Scan {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value = "0/1")]
        alpha: String,
        #[arg(short = 'X')]
        x_max: f64,
        #[arg(long)]
        theta: Option<f64>,
        /// Write every partial sum as CSV (x, re, im, normalized).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Evaluate F(s, α) by the defining series, the closed form, or both.
    Fvalue {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value = "0/1")]
        alpha: String,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_parser = ["direct", "closed", "both"], default_value = "both")]
        route: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(short = 'N', default_value_t = 200_000)]
        n: usize,
    },
    /// Fit the boundary blow-up of F(σ + i t_n, α).
    Asymfit {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value = "0/1")]
        alpha: String,
        #[arg(long, default_value_t = 1)]
        t_index: usize,
        #[arg(long, default_value_t = 0.01)]
        sigma_min: f64,
        #[arg(short = 'N', default_value_t = 20_000)]
        n: usize,
    },
    /// Kloosterman sum K(m, n; c), or the divisor aggregate over c | q.
    Kloosterman {
        #[arg(short = 'm', allow_hyphen_values = true)]
        m: i64,
        #[arg(short = 'n', allow_hyphen_values = true)]
        n: i64,
        #[arg(short = 'c')]
        c: Option<i64>,
        /// Σ_{c|q} K(−h, −n; c)/c^k with --res h, --weight k.
        #[arg(long = "mod", conflicts_with = "c")]
        modulus: Option<i64>,
        #[arg(long, requires = "modulus")]
        res: Option<i64>,
        #[arg(long, default_value_t = 12)]
        weight: u32,
    },
    /// F(s; q, h) by both routes, with the resonance table at t = 4π√n.
    Progression {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long = "mod")]
        modulus: i64,
        #[arg(long)]
        res: i64,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(short = 'N', default_value_t = 200_000)]
        n: usize,
    },
    /// Run a verification suite: identity | asymptotic | modular | quadrature | progression | all.
    Verify {
        suite: String,
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        sigma_min: f64,
        #[arg(short = 'N', default_value_t = 300_000)]
        n: usize,
    },
}

fn parse_alpha(text: &str) -> Result<ReducedRational, CliError> {
    Ok(text.parse::<ReducedRational>()?)
}

fn load_form(cli: &Cli, args: &FormArgs, order: usize) -> Result<CuspForm, CliError> {
    let recipe = Recipe::named(&args.form)?;
    let dir = cache::cache_dir(cli.cache_dir.as_deref());
    cache::load_or_compute(&dir, &recipe, order.max(1))
}

fn point(args: &PointArgs, c: i64) -> Result<ComplexPoint, CliError> {
    let t = match (args.t, args.t_index) {
        (Some(t), _) => t,
        (None, Some(n)) => t_value(n, c as u64),
        (None, None) => 0.0,
    };
    Ok(ComplexPoint::new(args.sigma, t)?)
}

fn eval_json(e: &SeriesEval) -> serde_json::Value {
    json!({
        "value": complex(e.value),
        "terms_used": e.terms_used,
        "tail_bound": e.tail_bound,
        "rounding_bound": e.rounding_bound,
        "precision_bits": e.precision_bits,
        "warnings": e.warnings,
    })
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn coeffs_csv(form: &CuspForm) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "a_n", "normalized"]).expect("in-memory write");
    for n in 1..=form.order() {
        w.write_record([n.to_string(), form.a(n).to_string(), format!("{:?}", form.normalized(n))])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

/// Runs one command; commands that write files directly return no report.
fn run(cli: &Cli) -> Result<Option<Report>, CliError> {
    match &cli.command {
        Command::Coeffs { form, n, output } => {
            let f = load_form(cli, form, *n)?;
            let f = if f.order() > *n {
                CuspForm::from_series(f.recipe().clone(), f.series().clone().with_order(*n))?
            } else {
                f
            };
            write_output(output.as_deref(), &coeffs_csv(&f))?;
            Ok(None)
        }
        Command::Sum { form, twist, x } => {
            let f = load_form(cli, form, x.max(0.0).floor() as usize)?;
            let mut rep = Report::new("sum");
            rep.param("form", f.recipe().to_string()).param("x", *x);
            match (&twist.alpha, twist.modulus, twist.res) {
                (_, Some(q), Some(h)) => {
                    rep.param("q", q).param("h", h);
                    rep.value("sum", progression_sum_exact(&f, *x, q, h)?.to_string());
                    rep.value("normalized_sum", normalized_progression_sum(&f, *x, q, h)?);
                }
                (alpha, _, _) => {
                    let r = parse_alpha(alpha.as_deref().unwrap_or("0/1"))?;
                    rep.param("alpha", r.to_string());
                    let v = twisted_sum(&f, *x, &r)?;
                    rep.value("sum", complex(v));
                    if *x >= 1.0 {
                        let record = SumRecord::new(x.floor(), v, default_theta(&f));
                        rep.value("theta", record.theta).value("normalized", record.normalized);
                    }
                }
            }
            Ok(Some(rep))
        }
        Command::Scan {
            form,
            alpha,
            x_max,
            theta,
            trace,
        } => {
            let r = parse_alpha(alpha)?;
            let f = load_form(cli, form, x_max.max(0.0).floor() as usize)?;
            let theta = theta.unwrap_or_else(|| default_theta(&f));
            let report = match trace {
                Some(path) => {
                    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
                    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
                    w.write_record(["x", "re", "im", "normalized"]).map_err(|e| CliError::Io(e.to_string()))?;
                    let mut failure = None;
                    let mut sink = |rec: &SumRecord| {
                        if failure.is_none() {
                            let row = [
                                format!("{}", rec.x),
                                format!("{:?}", rec.value.re),
                                format!("{:?}", rec.value.im),
                                format!("{:?}", rec.normalized),
                            ];
                            if let Err(e) = w.write_record(&row) {
                                failure = Some(e.to_string());
                            }
                        }
                    };
                    let report = scan_extrema(&f, &r, *x_max, theta, Some(&mut sink))?;
                    if let Some(e) = failure {
                        return Err(CliError::Io(format!("{}: {e}", path.display())));
                    }
                    w.flush().map_err(|e| CliError::io(path, e))?;
                    report
                }
                None => scan_extrema(&f, &r, *x_max, theta, None)?,
            };
            let mut rep = Report::new("scan");
            rep.param("form", f.recipe().to_string())
                .param("alpha", report.alpha.clone())
                .param("X", report.x_max)
                .param("theta", theta);
            rep.value("max", report.max)
                .value("argmax", report.argmax)
                .value("min", report.min)
                .value("argmin", report.argmin)
                .value("sign_changes", report.sign_changes)
                .value("final_sum", complex(report.last.value))
                .value("final_normalized", report.last.normalized);
            Ok(Some(rep))
        }
        Command::Fvalue {
            form,
            alpha,
            point: p,
            route,
            tol,
            n,
        } => {
            let r = parse_alpha(alpha)?;
            let s = point(p, r.c())?;
            let f = load_form(cli, form, *n)?;
            let mut rep = Report::new("fvalue");
            rep.param("form", f.recipe().to_string())
                .param("alpha", r.to_string())
                .param("s", complex(s.s()))
                .param("tol", *tol);
            let direct = (route != "closed").then(|| f_direct(&f, s, &r, *tol)).transpose()?;
            let closed = (route != "direct").then(|| f_closed(&f, s, &r, *tol)).transpose()?;
            if let Some(d) = &direct {
                rep.value("direct", eval_json(d));
            }
            if let Some(c) = &closed {
                rep.value("closed", eval_json(c));
            }
            if let (Some(d), Some(c)) = (&direct, &closed) {
                rep.value("relative_difference", (d.value - c.value).norm() / c.value.norm());
            }
            Ok(Some(rep))
        }
        Command::Asymfit {
            form,
            alpha,
            t_index,
            sigma_min,
            n,
        } => {
            let r = parse_alpha(alpha)?;
            let f = load_form(cli, form, *n)?;
            let grid: Vec<f64> = [0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001]
                .into_iter()
                .filter(|&s| s >= sigma_min * (1.0 - 1e-12))
                .collect();
            let a = asym_ratio(&f, *t_index, &r, &grid)?;
            let mut rep = Report::new("asymfit");
            rep.param("form", f.recipe().to_string())
                .param("alpha", r.to_string())
                .param("n", *t_index)
                .param("t", a.t);
            rep.value("sigma", a.sigma_grid.clone())
                .value("abs_f", a.magnitudes.clone())
                .value("ratios", a.ratios.iter().map(|z| complex(*z)).collect::<Vec<_>>())
                .value("fitted_slope", a.fitted_slope)
                .value("expected_slope", -(f.weight() as f64) - 0.5)
                .value("predicted_constant", complex(a.predicted_constant))
                .value("literal_constant", complex(a.literal_constant))
                .value("zero_branch", a.zero_branch);
            Ok(Some(rep))
        }
        Command::Kloosterman {
            m,
            n,
            c,
            modulus,
            res,
            weight,
        } => {
            let mut rep = Report::new("kloosterman");
            match (c, modulus) {
                (Some(c), _) => {
                    rep.param("m", *m).param("n", *n).param("c", *c);
                    rep.value("value", kloosterman(*m, *n, *c)?);
                }
                (None, Some(q)) => {
                    let h = res.ok_or_else(|| CliError::usage("--mod needs --res"))?;
                    rep.param("q", *q).param("h", h).param("n", *n).param("k", *weight);
                    rep.value("aggregate", kloosterman_aggregate(*q, h, *n, *weight)?);
                }
                (None, None) => return Err(CliError::usage("give -c, or --mod and --res")),
            }
            Ok(Some(rep))
        }
        Command::Progression {
            form,
            modulus,
            res,
            point: p,
            tol,
            n,
        } => {
            let spec = ProgressionSpec::new(*modulus, *res)?;
            let s = point(p, 1)?;
            let f = load_form(cli, form, *n)?;
            let eval = f_progression(&f, s, spec, *tol)?;
            let mut rep = Report::new("progression");
            rep.param("form", f.recipe().to_string())
                .param("q", spec.q())
                .param("h", spec.h())
                .param("s", complex(s.s()))
                .param("tol", *tol);
            rep.value("closed", eval_json(&eval.closed));
            rep.value("direct", eval.direct.as_ref().map(eval_json).unwrap_or(serde_json::Value::Null));
            rep.value("relative_difference", eval.agreement);
            if let Some(idx) = p.t_index {
                let table = resonance_analysis(&f, spec, idx as usize)?;
                let measured = eval.closed.value * s.sigma().powf(f.weight() as f64 + 0.5);
                rep.value(
                    "resonant_indices",
                    table
                        .entries
                        .iter()
                        .map(|e| json!({ "c": e.c, "m": e.m, "a_m": e.a_m, "ramanujan": e.ramanujan }))
                        .collect::<Vec<_>>(),
                );
                rep.value("measured_prefactor", complex(measured))
                    .value("oracle_prefactor", complex(table.oracle))
                    .value("kloosterman_prefactor", complex(table.kloosterman_form));
            }
            Ok(Some(rep))
        }
        Command::Verify {
            suite,
            form,
            tol,
            sigma_min,
            n,
        } => {
            if !verify::SUITES.contains(&suite.as_str()) {
                return Err(CliError::usage(format!(
                    "unknown suite {suite:?}; valid suites: {}",
                    verify::SUITES.join(", ")
                )));
            }
            let settings = verify::Settings {
                tol: *tol,
                sigma_min: *sigma_min,
            };
            let mut rep = Report::new("verify");
            rep.param("suite", suite.clone());
            let all = suite == "all";
            if all || suite == "quadrature" {
                verify::quadrature(&mut rep, &settings);
            }
            if all || suite != "quadrature" {
                let f = load_form(cli, form, *n)?;
                rep.param("form", f.recipe().to_string()).param("N", f.order());
                if all || suite == "identity" {
                    verify::identity(&mut rep, &f, &settings);
                }
                if all || suite == "asymptotic" {
                    verify::asymptotic(&mut rep, &f, &settings);
                }
                if all || suite == "modular" {
                    verify::modular(&mut rep, &f, &settings);
                }
                if all || suite == "progression" {
                    verify::progression(&mut rep, &f, &settings);
                }
            }
            Ok(Some(rep))
        }
    }
}

fn exit_status(rep: &Report) -> u8 {
    let checks = rep.checks();
    if checks.iter().any(|c| matches!(c.outcome, Outcome::Fail | Outcome::Error(_))) {
        1
    } else if checks.iter().any(|c| matches!(c.outcome, Outcome::Budget(_))) {
        3
    } else {
        0
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = with_threads(cli.threads, || run(&cli));
    let elapsed = start.elapsed().as_secs_f64();
    match result {
        Ok(Some(mut rep)) => {
            if cli.timing {
                rep.set_wall_time(elapsed);
            }
            print!("{}", rep.render(cli.format));
            ExitCode::from(exit_status(&rep))
        }
        Ok(None) => {
            if cli.timing {
                eprintln!("wall time: {elapsed:.3} s");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
