//! The `fracdrum` command line.
//!
//! Exit codes: 0 success, 2 bad parameter or domain, 3 estimator failure,
//! 4 solver non-convergence, 5 harness failure.

mod config;
pub mod expr;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use crate::analytic::{self, QuadratureConfig};
use crate::error::{Error, Result};
use crate::geometry::{self, parse_domain, Domain};
use crate::harness::{self, svg, Estimator, ExperimentPlan, FitResult, RecordWriter, RunRecord};
use crate::renewal::{self, ForcingFunction, RenewalEquation, SpanResult, ZGrid};
use crate::simulate::{self, config_digest, McConfig, PathScheme, PointMode, SeedPlan, StableParams};

fn number(s: &str) -> std::result::Result<f64, String> {
    expr::eval(s).map_err(|e| e.to_string())
}

fn estimator(s: &str) -> std::result::Result<Estimator, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Jsonl,
}

#[derive(Debug, Parser)]
#[command(name = "fracdrum", version, about = "Heat contents of stable processes on self-similar drums")]
pub struct Cli {
    /// Master seed (default 1).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Record file (JSON lines) for estimates, experiment output override.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// `key = value` file of flag defaults, opened by `schema = 1`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Spatial sample points.
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    /// Grid steps on the coarsest level.
    #[arg(long, default_value_t = 64)]
    pub n_steps: u32,
    #[arg(long, default_value_t = 2)]
    pub richardson_levels: u32,
    /// Membership depth for fractal domains (default: resolved from t and α).
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, value_enum, default_value_t = PointArg::Qmc)]
    pub points: PointArg,
    #[arg(long, default_value_t = 1024)]
    pub unit_size: u64,
    /// Run SKBM on fractal domains despite the missing oracle.
    #[arg(long)]
    pub allow_fractal_skbm: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PointArg {
    Qmc,
    Random,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Domain, e.g. `interval:0,1`, `union:0,0.4;0.6,1`, `cantor`, `gasket:8`.
    #[arg(long)]
    pub domain: String,
    #[arg(long, value_parser = number)]
    pub alpha: f64,
    #[arg(long, value_parser = number)]
    pub t: f64,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Similarity dimension b solving Σ r_j^b = 1.
    Dim {
        /// Ratios, comma separated (`1/3,1/3`).
        #[arg(long)]
        r: String,
        #[arg(long)]
        d: usize,
    },
    /// Describe a domain.
    Inspect {
        #[arg(long)]
        domain: String,
        /// With --t, also print the membership depth resolved for (t, α).
        #[arg(long, value_parser = number)]
        alpha: Option<f64>,
        #[arg(long, value_parser = number)]
        t: Option<f64>,
    },
    /// Spectral heat content.
    Shc(EstimateArgs),
    /// Regional heat content.
    Rhc(EstimateArgs),
    /// Heat content of subordinate killed Brownian motion.
    Skbm(EstimateArgs),
    /// Interaction defect of a domain's pieces.
    Defect(EstimateArgs),
    /// Fractional perimeter.
    Perimeter {
        #[arg(long)]
        domain: String,
        #[arg(long, value_parser = number)]
        alpha: f64,
        /// Construction level for `cantor` (gap union).
        #[arg(long)]
        gap_level: Option<u32>,
    },
    /// One-dimensional stable density p_t(x).
    Density {
        #[arg(long, value_parser = number)]
        alpha: f64,
        #[arg(long, value_parser = number, default_value = "1")]
        t: f64,
        #[arg(long, value_parser = number)]
        x: f64,
    },
    /// Regional heat content of (0,1) by quadrature.
    OracleRhc {
        #[arg(long, value_parser = number)]
        alpha: f64,
        #[arg(long, value_parser = number)]
        t: f64,
    },
    /// SKBM heat content of (0,1) by its eigenfunction series.
    OracleSkbm {
        #[arg(long, value_parser = number)]
        alpha: f64,
        #[arg(long, value_parser = number)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        terms: usize,
    },
    /// Solve f(z) = Σ c_j f(z − γ_j) + φ(z).
    Renewal {
        /// Weights, comma separated, summing to 1.
        #[arg(long)]
        c: String,
        /// Shifts, comma separated (`ln2,ln3`).
        #[arg(long)]
        gamma: String,
        /// `exp-abs`, `sech`, `bump:center,width`, `manufactured:<base>` or `@file`.
        #[arg(long, default_value = "exp-abs")]
        phi: String,
        /// Solution range `lo,hi`.
        #[arg(long, default_value = "-10,30")]
        z: String,
        /// Rows of the printed solution table.
        #[arg(long, default_value_t = 9)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// `exact:<expr>` sets the span; `exact:none` declares non-arithmetic.
        #[arg(long)]
        span: Option<String>,
    },
    /// Run an experiment plan.
    Experiment {
        #[arg(long)]
        plan: PathBuf,
    },
    /// Fit power laws to a record file.
    Fit {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, value_parser = estimator)]
        estimator: Option<Estimator>,
        #[arg(long, value_parser = number)]
        alpha: Option<f64>,
        /// Expected period in ln t of a log-periodic component.
        #[arg(long, value_parser = number)]
        log_periodic: Option<f64>,
        /// Print fitted exponents next to their predictions.
        #[arg(long)]
        compare: bool,
        /// Domain for --compare when the records do not name one.
        #[arg(long)]
        domain: Option<String>,
        /// Directory for SVG plots.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    error: Error,
}

/// Maps an error to an exit code: parameter errors give 2, non-convergence
/// gives 4, everything else `default`.
fn at(default: i32) -> impl Fn(Error) -> Failure {
    move |error| {
        let code = match (&error, default) {
            (_, 5) => 5,
            (Error::Parse(_) | Error::DomainError(_) | Error::ConstraintViolated(_), _) => 2,
            (Error::NoConvergence(_), _) => 4,
            _ => default,
        };
        Failure { code, error }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut args: Vec<String> = args.into_iter().map(Into::into).collect();
    if let Some(path) = config::path_in(&args) {
        match config::read(&path) {
            Ok(kv) => args = config::merge(&args, &kv),
            Err(e) => {
                let _ = writeln!(err, "error[{}]: {e}", e.name());
                return 2;
            }
        }
    }
    let matches = match Cli::command().try_get_matches_from(&args) {
        Ok(m) => m,
        Err(e) => return clap_exit(e, out, err),
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => return clap_exit(e, out, err),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return 2;
        }
    };
    let result = pool.install(|| dispatch(&cli, &matches, out, err));
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error[{}]: {}", f.error.name(), f.error);
            f.code
        }
    }
}

fn clap_exit(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    use clap::error::ErrorKind;
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = write!(out, "{}", e.render());
            0
        }
        _ => {
            let _ = write!(err, "{}", e.render());
            2
        }
    }
}

/// `# fracdrum <cmd> key=value … digest=…` from the resolved arguments.
fn banner(matches: &ArgMatches) -> String {
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let mut parts = Vec::new();
    for (m, skip_global) in [(matches, false), (sub, true)] {
        for id in m.ids() {
            let id = id.as_str();
            // Derived argument groups are named after their struct.
            if id.starts_with(char::is_uppercase) {
                continue;
            }
            if skip_global && ["seed", "threads", "out", "format", "config"].contains(&id) {
                continue;
            }
            if let Ok(Some(raw)) = m.try_get_raw(id) {
                let vals: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
                parts.push(format!("{id}={}", vals.join(",")));
            }
        }
    }
    let text = format!("{name} {}", parts.join(" "));
    format!("# fracdrum {text} digest={}", config_digest(&text))
}

fn line(out: &mut dyn Write, text: impl AsRef<str>) -> Outcome {
    writeln!(out, "{}", text.as_ref()).map_err(|e| at(2)(e.into()))
}

fn dispatch(cli: &Cli, matches: &ArgMatches, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Outcome {
    let seed = cli.seed.unwrap_or(1);
    let banner_to = |out: &mut dyn Write, err: &mut dyn Write| {
        let b = banner(matches);
        if cli.format == Format::Text {
            line(out, b)
        } else {
            line(err, b)
        }
    };
    match &cli.command {
        Command::Dim { r, d } => {
            let ratios = expr::eval_list(r).map_err(at(2))?;
            let b = geometry::solve_dimension(&ratios, *d).map_err(at(2))?;
            line(out, format!("b = {b}"))
        }
        Command::Inspect { domain, alpha, t } => inspect(domain, *alpha, *t, out),
        Command::Shc(a) | Command::Rhc(a) | Command::Skbm(a) | Command::Defect(a) => {
            banner_to(out, err)?;
            let which = match &cli.command {
                Command::Shc(_) => Estimator::Shc,
                Command::Rhc(_) => Estimator::Rhc,
                Command::Skbm(_) => Estimator::Skbm,
                _ => Estimator::Defect,
            };
            estimate(cli, which, a, seed, out)
        }
        Command::Perimeter { domain, alpha, gap_level } => perimeter(domain, *alpha, *gap_level, out),
        Command::Density { alpha, t, x } => {
            let q = analytic::stable_density_1d(*alpha, *t, *x, &QuadratureConfig::default()).map_err(at(3))?;
            line(out, format!("p = {} ± {:.1e}", q.value, q.error))
        }
        Command::OracleRhc { alpha, t } => {
            let q = analytic::rhc_interval_oracle(*alpha, *t, &QuadratureConfig::default()).map_err(at(3))?;
            line(out, format!("Q = {} ± {:.1e}", q.value, q.error))?;
            if *alpha == 1.0 {
                line(out, format!("closed form (α = 1): {}", analytic::rhc_interval_cauchy(*t)))?;
            }
            Ok(())
        }
        Command::OracleSkbm { alpha, t, terms } => {
            let s = analytic::skbm_interval_series(*alpha, *t, *terms).map_err(at(3))?;
            line(out, format!("Q = {} (tail ≤ {:.1e})", s.value, s.tail_bound))
        }
        Command::Renewal {
            c,
            gamma,
            phi,
            z,
            samples,
            tol,
            span,
        } => {
            banner_to(out, err)?;
            renewal_cmd(c, gamma, phi, z, *samples, *tol, span.as_deref(), out)
        }
        Command::Experiment { plan } => {
            banner_to(out, err)?;
            experiment(cli, plan, err, out)
        }
        Command::Fit {
            records,
            estimator,
            alpha,
            log_periodic,
            compare,
            domain,
            svg,
        } => fit_cmd(cli, records, *estimator, *alpha, *log_periodic, *compare, domain.as_deref(), svg.as_deref(), out),
    }
}

fn inspect(domain: &str, alpha: Option<f64>, t: Option<f64>, out: &mut dyn Write) -> Outcome {
    let d = parse_domain(domain).map_err(at(2))?;
    line(out, format!("domain     {d}"))?;
    line(out, format!("id         {}", d.id()))?;
    line(out, format!("dimension  {}", d.dim()))?;
    line(out, format!("volume     {}", d.volume().map_err(at(2))?))?;
    line(out, format!("fractal    {}", d.is_fractal()))?;
    if let Some(b) = d.boundary_dimension() {
        line(out, format!("boundary b {b}"))?;
    }
    if let Some(cap) = d.depth_cap() {
        line(out, format!("depth cap  {cap}"))?;
    }
    if let (Some(a), Some(t)) = (alpha, t) {
        line(out, format!("depth(t={t}, α={a}) = {}", d.resolve_depth(t, a)))?;
    }
    if let Domain::IfsDrum { spec, .. } = &d {
        let report = geometry::validate_drum(spec.dim(), spec.maps(), spec.generator());
        write!(out, "{report}").map_err(|e| at(2)(e.into()))?;
    }
    Ok(())
}

fn mc_config(a: &McArgs, seed: u64) -> McConfig {
    McConfig {
        n: a.n,
        scheme: PathScheme {
            n_steps: a.n_steps,
            membership_depth: a.depth,
            richardson_levels: a.richardson_levels,
        },
        seeds: SeedPlan::new(seed),
        unit_size: a.unit_size,
        points: match a.points {
            PointArg::Qmc => PointMode::Qmc,
            PointArg::Random => PointMode::Random,
        },
        allow_fractal_skbm: a.allow_fractal_skbm,
    }
}

fn estimate(cli: &Cli, which: Estimator, a: &EstimateArgs, seed: u64, out: &mut dyn Write) -> Outcome {
    let domain = parse_domain(&a.domain).map_err(at(2))?;
    let params = StableParams::new(a.alpha, domain.dim()).map_err(at(2))?;
    let cfg = mc_config(&a.mc, seed);
    cfg.validate().map_err(at(2))?;
    let start = Instant::now();
    let e = match which {
        Estimator::Shc => simulate::shc(&domain, params, a.t, &cfg),
        Estimator::Rhc => simulate::rhc(&domain, params, a.t, &cfg),
        Estimator::Skbm => simulate::skbm_shc(&domain, params, a.t, &cfg),
        Estimator::Defect => simulate::interaction_defect(&domain, params, a.t, &cfg),
    }
    .map_err(at(3))?;
    let wall = start.elapsed().as_secs_f64();
    let record = RunRecord {
        cell: e.config_digest.clone(),
        domain: domain.id(),
        alpha: a.alpha,
        t: a.t,
        estimator: which,
        volume: domain.volume().map_err(at(2))?,
        seed,
        estimate: Some(e.clone()),
        error: None,
    };
    match cli.format {
        Format::Text => {
            let mut s = format!(
                "{which} value={} stderr={} n={} seed={} depth={}",
                e.value, e.stderr, e.n_samples, e.master_seed, e.depth
            );
            if !e.levels.is_empty() {
                let lv: Vec<String> = e.levels.iter().map(|v| v.to_string()).collect();
                s += &format!(" levels={}", lv.join(","));
            }
            if let Some(o) = e.order {
                s += &format!(" order={o:.3}");
            }
            if e.noise_dominates {
                s += " noise_dominates=true";
            }
            if e.unresolved > 0 {
                s += &format!(" unresolved={}", e.unresolved);
            }
            line(out, s)?;
        }
        Format::Jsonl => line(out, serde_json::to_string(&record).map_err(|e| at(3)(e.into()))?)?,
        Format::Csv => harness::write_csv(std::slice::from_ref(&record), &mut *out).map_err(at(3))?,
    }
    if let Some(path) = &cli.out {
        let (mut w, _) = RecordWriter::open(path).map_err(at(5))?;
        w.append(&record, wall).map_err(at(5))?;
    }
    Ok(())
}

fn perimeter(domain: &str, alpha: f64, gap_level: Option<u32>, out: &mut dyn Write) -> Outcome {
    let d = parse_domain(domain).map_err(at(2))?;
    match d {
        Domain::Interval { a, b } => {
            let p = analytic::per_alpha_interval(a, b, alpha).map_err(at(2))?;
            line(out, format!("Per = {p}"))
        }
        Domain::IntervalUnion(list) => {
            let p = analytic::per_alpha_gap_union(&list, alpha).map_err(at(2))?;
            line(out, format!("exterior = {}\ninterior = {}\nPer = {}", p.exterior, p.interior, p.total))
        }
        Domain::CantorComplement { .. } => {
            let top = gap_level.unwrap_or(30);
            let reference = analytic::per_alpha_interval(0.0, 1.0, alpha).map_err(at(2))?;
            line(out, format!("{:>5} {:>22} {:>12}", "level", "Per(gap union)", "minus (0,1)"))?;
            let mut last = None;
            for k in 1..=top {
                let p = analytic::cantor_gap_perimeter(k, alpha).map_err(at(2))?;
                if k <= 5 || k % 5 == 0 || k == top {
                    line(out, format!("{k:>5} {:>22.15} {:>12.3e}", p.total, p.total - reference))?;
                }
                last = Some(p.total);
            }
            line(out, format!("Per((0,1)) = {reference}"))?;
            line(out, format!("Per = {}", last.unwrap_or(reference)))
        }
        other => Err(at(2)(Error::UnsupportedDomain(format!(
            "perimeter is available for intervals, interval unions and cantor, not {}",
            other.id()
        )))),
    }
}

/// Tabulated forcing: `schema = 1`, `c1 = …`, `c2 = …`, then `z value` rows;
/// linear in between, zero outside.
fn tabulated_phi(path: &Path) -> Result<ForcingFunction> {
    let text = std::fs::read_to_string(path)?;
    let (mut c1, mut c2, mut rows, mut schema) = (None, None, Vec::new(), false);
    for (i, raw) in text.lines().enumerate() {
        let l = raw.split('#').next().unwrap().trim();
        if l.is_empty() {
            continue;
        }
        if let Some((k, v)) = l.split_once('=') {
            let v = v.trim();
            match k.trim() {
                "schema" if v == "1" => schema = true,
                "c1" => c1 = Some(expr::eval(v)?),
                "c2" => c2 = Some(expr::eval(v)?),
                k => return Err(Error::Parse(format!("{}:{}: unknown key {k:?}", path.display(), i + 1))),
            }
            continue;
        }
        let nums: Vec<f64> = l.split_whitespace().map(expr::eval).collect::<Result<_>>()?;
        match nums.as_slice() {
            [z, v] => rows.push((*z, *v)),
            _ => return Err(Error::Parse(format!("{}:{}: expected `z value`", path.display(), i + 1))),
        }
    }
    if !schema {
        return Err(Error::Parse(format!("{}: missing `schema = 1`", path.display())));
    }
    let (c1, c2) = c1
        .zip(c2)
        .ok_or_else(|| Error::Parse(format!("{}: needs c1 and c2", path.display())))?;
    if rows.len() < 2 || rows.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Parse(format!("{}: need at least 2 rows with increasing z", path.display())));
    }
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    ForcingFunction::new(name, c1, c2, move |z| {
        let i = rows.partition_point(|r| r.0 <= z);
        if i == 0 || i == rows.len() {
            return if i == rows.len() && z == rows[i - 1].0 { rows[i - 1].1 } else { 0.0 };
        }
        let (a, b) = (rows[i - 1], rows[i]);
        a.1 + (b.1 - a.1) * (z - a.0) / (b.0 - a.0)
    })
}

fn builtin_phi(name: &str, eq: &RenewalEquation) -> Result<(ForcingFunction, Option<ForcingFunction>)> {
    if let Some(path) = name.strip_prefix('@') {
        return Ok((tabulated_phi(Path::new(path))?, None));
    }
    if let Some(base) = name.strip_prefix("manufactured:") {
        let (g, _) = builtin_phi(base, eq)?;
        return Ok((ForcingFunction::manufactured(eq, &g)?, Some(g)));
    }
    let phi = match name.split_once(':') {
        None if name == "exp-abs" => ForcingFunction::exp_abs(),
        None if name == "sech" => ForcingFunction::sech(),
        Some(("bump", args)) => match expr::eval_list(args)?.as_slice() {
            [c, w] => ForcingFunction::bump(*c, *w)?,
            _ => return Err(Error::Parse(format!("bump expects center,width: {name:?}"))),
        },
        _ => return Err(Error::Parse(format!("unknown forcing {name:?}"))),
    };
    Ok((phi, None))
}

fn exact_span(spec: &str, shifts: &[f64]) -> Result<SpanResult> {
    let body = spec
        .strip_prefix("exact:")
        .ok_or_else(|| Error::Parse(format!("--span expects exact:<expr>, got {spec:?}")))?;
    if body == "none" {
        return Ok(SpanResult {
            arithmetic: false,
            span: None,
            multipliers: Vec::new(),
            steps: 0,
        });
    }
    let span = expr::eval(body)?;
    if !(span > 0.0) {
        return Err(Error::DomainError(format!("span must be positive, got {span}")));
    }
    let mut multipliers = Vec::new();
    for &g in shifts {
        let m = (g / span).round();
        if m < 1.0 || (g - m * span).abs() > 1e-9 * g {
            return Err(Error::ConstraintViolated(format!("shift {g} is not a multiple of span {span}")));
        }
        multipliers.push(m as u64);
    }
    Ok(SpanResult {
        arithmetic: true,
        span: Some(span),
        multipliers,
        steps: 0,
    })
}

#[allow(clippy::too_many_arguments)]
fn renewal_cmd(
    c: &str,
    gamma: &str,
    phi: &str,
    z: &str,
    samples: usize,
    tol: f64,
    span: Option<&str>,
    out: &mut dyn Write,
) -> Outcome {
    let weights = expr::eval_list(c).map_err(at(2))?;
    let shifts = expr::eval_list(gamma).map_err(at(2))?;
    let eq = RenewalEquation::new(weights, shifts).map_err(at(2))?;
    let (phi, truth) = builtin_phi(phi, &eq).map_err(at(2))?;
    let (lo, hi) = match expr::eval_list(z).map_err(at(2))?.as_slice() {
        [lo, hi] if lo < hi => (*lo, *hi),
        _ => return Err(at(2)(Error::Parse(format!("--z expects lo,hi with lo < hi, got {z:?}")))),
    };
    let span = match span {
        Some(s) => exact_span(s, eq.shifts()).map_err(at(2))?,
        None => renewal::detect_arithmetic(eq.shifts(), 1e-9).map_err(at(2))?,
    };
    line(out, eq.to_string())?;
    line(out, format!("φ = {}", phi.name()))?;
    line(out, span.to_string())?;
    let grid = ZGrid::for_equation(&eq, &span, lo, hi).map_err(at(2))?;
    let sol = renewal::solve_series(&eq, &phi, &grid, tol).map_err(at(4))?;
    line(out, format!("{:>12} {:>22}", "z", "f(z)"))?;
    let rows = samples.max(2);
    for k in 0..rows {
        let zk = lo + (hi - lo) * k as f64 / (rows - 1) as f64;
        line(out, format!("{zk:>12.4} {:>22.15}", sol.eval(zk)))?;
    }
    line(out, format!("terms = {}  lattice atoms = {}", sol.iterations, sol.atoms()))?;
    line(out, format!("residual = {:.3e}", sol.residual))?;
    line(out, format!("tail bound = {:.3e}", sol.tail_bound))?;
    if let Some(g) = truth {
        let worst = grid.points().map(|z| (sol.eval(z) - g.eval(z)).abs()).fold(0.0, f64::max);
        line(out, format!("manufactured error = {worst:.3e}"))?;
    }
    if span.arithmetic {
        let p = span.span.unwrap();
        let f = renewal::asymptote_arithmetic(&eq, &phi, p).map_err(at(4))?;
        line(out, format!("asymptote: periodic, period {p}, mean {}", f.mean().map_err(at(4))?))?;
        for k in 0..4 {
            let zk = p * k as f64 / 4.0;
            line(out, format!("  f~({zk:.6}) = {}", f.eval(zk)))?;
        }
    } else {
        let limit = renewal::asymptote_nonarithmetic(&eq, &phi).map_err(at(4))?;
        line(out, format!("asymptote: f(∞) = {limit}"))?;
    }
    Ok(())
}

fn experiment(cli: &Cli, path: &Path, err: &mut dyn Write, out: &mut dyn Write) -> Outcome {
    let mut plan = ExperimentPlan::load(path).map_err(at(5))?;
    if let Some(o) = &cli.out {
        plan.output = o.clone();
    }
    if let Some(s) = cli.seed {
        plan.mc.seeds = SeedPlan::new(s);
    }
    let total = plan.cells().len();
    let mut k = 0;
    let summary = harness::run_plan(&plan, &mut |cell, rec| {
        k += 1;
        let status = match (&rec.estimate, &rec.error) {
            (Some(e), _) => format!("{} ± {:.2e}", e.value, e.stderr),
            (None, Some(m)) => m.clone(),
            _ => String::new(),
        };
        let _ = writeln!(err, "[{k}/{total}] {} α={} t={:.4e} {status}", cell.estimator, cell.alpha, cell.t);
    })
    .map_err(at(5))?;
    line(
        out,
        format!(
            "records {} ({} computed, {} resumed, {} failed)",
            plan.output.display(),
            summary.computed,
            summary.skipped,
            summary.failed
        ),
    )?;
    let period = |a: f64| if plan.log_periodic { harness::log_period(&plan.domain, a) } else { None };
    report_fits(
        &summary.records,
        &plan.domain,
        &plan.estimators,
        &plan.alphas,
        &period,
        Some(&plan.output.with_extension("")),
        cli.format,
        out,
    )
}

#[allow(clippy::too_many_arguments)]
fn fit_cmd(
    cli: &Cli,
    records: &Path,
    estimator: Option<Estimator>,
    alpha: Option<f64>,
    log_periodic: Option<f64>,
    compare: bool,
    domain: Option<&str>,
    svg_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let recs = harness::read_records(records).map_err(at(5))?;
    let mut series: Vec<(Estimator, f64)> = Vec::new();
    for r in &recs {
        if estimator.is_none_or(|e| e == r.estimator)
            && alpha.is_none_or(|a| a == r.alpha)
            && !series.contains(&(r.estimator, r.alpha))
        {
            series.push((r.estimator, r.alpha));
        }
    }
    if series.is_empty() {
        return Err(at(5)(Error::InsufficientRange("no records match the selection".into())));
    }
    let dom = match domain {
        Some(d) => Some(parse_domain(d).map_err(at(5))?),
        None => recs.first().and_then(|r| parse_domain(&r.domain).ok()),
    };
    if compare && dom.is_none() {
        return Err(at(5)(Error::DomainError("--compare needs a domain (--domain)".into())));
    }
    let estimators: Vec<Estimator> = series.iter().map(|s| s.0).fold(Vec::new(), |mut v, e| {
        if !v.contains(&e) {
            v.push(e);
        }
        v
    });
    let alphas: Vec<f64> = series.iter().map(|s| s.1).fold(Vec::new(), |mut v, a| {
        if !v.contains(&a) {
            v.push(a);
        }
        v
    });
    let stem = svg_dir.map(|d| d.join(records.file_stem().unwrap_or_default()));
    if let Some(d) = svg_dir {
        std::fs::create_dir_all(d).map_err(|e| at(5)(e.into()))?;
    }
    let period = |_: f64| log_periodic;
    let fits = fits_for(&recs, &estimators, &alphas, &period, cli.format, out)?;
    if fits.is_empty() {
        return Err(at(5)(Error::DeficitNotResolved("no series could be fitted".into())));
    }
    if let Some(stem) = &stem {
        write_plots(&recs, &fits, stem)?;
    }
    if compare {
        let rows: Vec<_> = fits.iter().map(|(e, a, f)| (*e, *a, f.clone())).collect();
        let report = harness::compare_rates(dom.as_ref().unwrap(), &rows);
        write!(out, "{report}").map_err(|e| at(5)(e.into()))?;
    }
    Ok(())
}

type Fitted = Vec<(Estimator, f64, FitResult)>;

/// Fits every `(estimator, α)` series and prints each fit; series that cannot
/// be fitted are reported and skipped.
fn fits_for(
    recs: &[RunRecord],
    estimators: &[Estimator],
    alphas: &[f64],
    period: &dyn Fn(f64) -> Option<f64>,
    format: Format,
    out: &mut dyn Write,
) -> std::result::Result<Fitted, Failure> {
    let mut fits = Vec::new();
    for &a in alphas {
        for &e in estimators {
            let s = harness::select(recs, e, a);
            if s.is_empty() {
                continue;
            }
            let fit = match harness::fit_power_exponent(&s) {
                Ok(f) => f,
                Err(x) => {
                    line(out, format!("fit {e} α={a}: {}: {x}", x.name()))?;
                    continue;
                }
            };
            let lp = period(a).map(|p| harness::log_periodic_extract(&harness::deficit_points(&s), p));
            match format {
                Format::Jsonl => {
                    let mut v = serde_json::json!({ "estimator": e, "alpha": a, "fit": fit });
                    if let Some(lp) = &lp {
                        v["log_periodic"] = match lp {
                            Ok(l) => serde_json::to_value(l).unwrap(),
                            Err(x) => serde_json::json!({ "error": x.to_string() }),
                        };
                    }
                    line(out, v.to_string())?;
                }
                _ => {
                    line(
                        out,
                        format!(
                            "fit {e} α={a}: exponent = {:.6} ± {:.6}  amplitude = {:.6} ± {:.6}  points = {}  chi2/dof = {:.3}",
                            fit.exponent, fit.exponent_stderr, fit.amplitude, fit.amplitude_stderr, fit.n_points, fit.chi2_reduced
                        ),
                    )?;
                    match lp {
                        Some(Ok(l)) => line(
                            out,
                            format!(
                                "  log-periodic: period = {:.6}  amplitude = {:.5}  phase = {:.4}  F = {:.3}  p = {:.3e}  significance = {:.4}",
                                l.period,
                                l.amplitude,
                                l.phase,
                                l.f_statistic,
                                l.p_value,
                                l.significance()
                            ),
                        )?,
                        Some(Err(x)) => line(out, format!("  log-periodic: {}: {x}", x.name()))?,
                        None => {}
                    }
                }
            }
            fits.push((e, a, fit));
        }
    }
    Ok(fits)
}

#[allow(clippy::too_many_arguments)]
fn report_fits(
    recs: &[RunRecord],
    domain: &Domain,
    estimators: &[Estimator],
    alphas: &[f64],
    period: &dyn Fn(f64) -> Option<f64>,
    plot_stem: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let fits = fits_for(recs, estimators, alphas, period, format, out)?;
    if fits.is_empty() {
        return Ok(());
    }
    if let Some(stem) = plot_stem {
        write_plots(recs, &fits, stem)?;
    }
    let rows: Vec<_> = fits.iter().map(|(e, a, f)| (*e, *a, f.clone())).collect();
    write!(out, "{}", harness::compare_rates(domain, &rows)).map_err(|e| at(5)(e.into()))
}

fn write_plots(recs: &[RunRecord], fits: &Fitted, stem: &Path) -> Outcome {
    let series: Vec<svg::Series> = fits
        .iter()
        .map(|(e, a, f)| svg::Series {
            label: format!("{e} α={a}: θ = {:.4}", f.exponent),
            points: harness::deficit_points(&harness::select(recs, *e, *a)),
            fit: Some((f.exponent, f.amplitude)),
        })
        .collect();
    let name = stem.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let write = |path: PathBuf, body: String| std::fs::write(path, body).map_err(|e| at(5)(e.into()));
    write(stem.with_file_name(format!("{name}.deficits.svg")), svg::deficit_plot(&name, &series))?;
    for (e, a, f) in fits {
        write(
            stem.with_file_name(format!("{name}.{e}-a{a}.residuals.svg")),
            svg::residual_plot(&format!("{name} {e} α={a}"), &f.residuals),
        )?;
    }
    Ok(())
}
