//! Command-line front end. Every subcommand prints `#`-prefixed human notes
//! followed by stable `key=value` lines.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bounds::{coarse_factor, drilled_volume_bound, min_volume_corollary};
use crate::format::{format_sig, DEFAULT_PRECISION};
use crate::geodesic::{analyze, emit_plot, emit_report_with, parse_records, PlotStyle};
use crate::oracle::validate_lemma_curvature;
use crate::smoothing::{k_limit, smoothed_metric, DEFAULT_K_GRID};
use crate::warped::{
    extended_tube_volume, sectional_curvatures, tube_volume, warped_volume_quadrature, LowerLimit, TubeParams,
    WarpingPair, DEFAULT_TRUNCATION_DEPTH,
};
use crate::{Error, Result};

pub const PRECISION_ENV: &str = "DRILLBOUND_PRECISION";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "drillbound",
    version,
    about = "Volume bounds for drilling geodesics out of hyperbolic 3-manifolds",
    arg_required_else_help = true
)]
pub struct CliConfig {
    /// Significant digits in numeric output (1 to 17).
    #[arg(
        long,
        global = true,
        env = PRECISION_ENV,
        default_value_t = DEFAULT_PRECISION as u8,
        value_parser = clap::value_parser!(u8).range(1..=17)
    )]
    pub precision: u8,

    /// Truncation depth for volume integrals over (-inf, R].
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNCATION_DEPTH, value_parser = parse_number)]
    pub depth: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curvature and volume of the exponential tube extension at radius R.
    Curvature(CurvatureArgs),
    /// Smoothed tube metric at radius R and smoothing parameter eps.
    Smooth(SmoothArgs),
    /// Upper bounds on the drilled volume.
    Bound(BoundArgs),
    /// Lower bound on the volume of a closed orientable hyperbolic 3-manifold.
    Minvol,
    /// Bridgeman and drilling-bound checks on a geodesic dataset.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    /// Tube radius.
    #[arg(long = "R", value_parser = parse_number, allow_negative_numbers = true)]
    pub radius: f64,
    /// Compare closed-form curvatures with the finite-difference oracle.
    #[arg(long)]
    pub validate: bool,
    #[arg(long, default_value_t = 100, requires = "validate")]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-5, value_parser = parse_number, requires = "validate")]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SmoothArgs {
    #[arg(long = "R", value_parser = parse_number, allow_negative_numbers = true)]
    pub radius: f64,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true)]
    pub eps: f64,
    /// Write r, f, f', f'', g, g', g'' across the smoothing collar.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Number of rows in the CSV table.
    #[arg(long, default_value_t = 1024, requires = "csv")]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Parent volume.
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true)]
    pub vol: f64,
    /// Geodesic length.
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true)]
    pub length: f64,
    /// Embedded tube radius.
    #[arg(long = "R", value_parser = parse_number, allow_negative_numbers = true)]
    pub radius: f64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Write an SVG scatter plot.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[arg(long, default_value = "linear", value_parser = ["linear", "log10"], requires = "plot")]
    pub style: String,
    /// Write the per-record report CSV.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Accepts plain decimals and the tokens `ln3` and `ln3/2`.
pub fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v = match body {
        "ln3" => 3f64.ln(),
        "ln3/2" => 3f64.ln() / 2.0,
        _ => s
            .parse::<f64>()
            .map_err(|_| format!("'{s}' is not a number (plain decimal, ln3 or ln3/2)"))?,
    };
    let v = if neg && matches!(body, "ln3" | "ln3/2") { -v } else { v };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// Parses `args` (program name first) and runs the chosen subcommand.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = writeln!(err, "error:usage: a subcommand is required");
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
                _ => {
                    let text = e.render().to_string();
                    let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
                    let _ = writeln!(err, "error:usage: {first}");
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut buf = Vec::new();
    let outcome = dispatch(&config, &mut buf);
    let _ = out.write_all(&buf);
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error:{}: {}", e.category(), e);
            EXIT_FAILURE
        }
    }
}

struct Emitter<'a> {
    out: &'a mut Vec<u8>,
    digits: usize,
}

impl Emitter<'_> {
    fn note(&mut self, text: &str) {
        let _ = writeln!(self.out, "# {text}");
    }

    fn num(&mut self, key: &str, v: f64) {
        let _ = writeln!(self.out, "{key}={}", format_sig(v, self.digits));
    }

    fn text(&mut self, key: &str, v: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key}={v}");
    }

    fn list<T: std::fmt::Display>(&mut self, key: &str, items: &[T]) {
        let joined: Vec<String> = items.iter().map(|x| x.to_string()).collect();
        self.text(key, joined.join(","));
    }
}

fn dispatch(config: &CliConfig, out: &mut Vec<u8>) -> Result<i32> {
    let mut e = Emitter {
        out,
        digits: config.precision as usize,
    };
    match &config.command {
        Command::Curvature(a) => curvature(a, config.depth, &mut e),
        Command::Smooth(a) => smooth(a, &mut e),
        Command::Bound(a) => bound(a, &mut e),
        Command::Minvol => minvol(&mut e),
        Command::Analyze(a) => analyze_cmd(a, &mut e),
    }
}

fn curvature(a: &CurvatureArgs, depth: f64, e: &mut Emitter) -> Result<i32> {
    let radius = a.radius;
    let ext = WarpingPair::kerckhoff_extension(radius)?;
    let k = sectional_curvatures(&ext, radius)?;
    let params = TubeParams::new(radius, 1.0, 0.0)?;
    let vol = warped_volume_quadrature(&ext, LowerLimit::Truncated { depth }, radius, 1.0)?;
    e.note(&format!("exponential tube extension glued at R = {radius}"));
    e.num("radius", radius);
    e.num("k_rtheta", k.r_theta);
    e.num("k_rlambda", k.r_lambda);
    e.num("k_thetalambda", k.theta_lambda);
    e.num("ricci_k", k_limit(radius));
    e.note("volumes per unit geodesic length");
    e.num("tube_volume", tube_volume(&params));
    e.num("extended_volume", extended_tube_volume(&params));
    e.num("extended_volume_quadrature", vol.value);
    e.num("quadrature_error", vol.abs_error);
    e.num("truncation_depth", depth);
    if let Some(t) = vol.truncation_bound {
        e.num("truncation_bound", t);
    }
    if !a.validate {
        return Ok(EXIT_OK);
    }
    if a.samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: 0.0,
            reason: "at least one sample is required",
        });
    }
    let mut all = true;
    for (key, pair) in [("hyperbolic_tube", WarpingPair::hyperbolic_tube()), ("kerckhoff_extension", ext)] {
        let report = validate_lemma_curvature(&pair, a.samples, a.tol);
        for w in &report.warnings {
            e.note(&format!("{key}: {w}"));
        }
        e.text(&format!("validate.{key}.pass"), report.pass);
        e.num(&format!("validate.{key}.max_relative_error"), report.max_relative_error);
        e.num(&format!("validate.{key}.max_near_zero_error"), report.max_near_zero_error);
        all &= report.pass;
    }
    e.text("validate.samples", a.samples);
    e.num("validate.tolerance", a.tol);
    e.text("validate.pass", all);
    if all {
        Ok(EXIT_OK)
    } else {
        Err(Error::Validation {
            line: 0,
            message: "finite-difference curvature disagrees with the closed form".into(),
        })
    }
}

fn smooth(a: &SmoothArgs, e: &mut Emitter) -> Result<i32> {
    let fam = smoothed_metric(a.radius, a.eps)?;
    let ricci = fam.ricci_constant(DEFAULT_K_GRID)?;
    let (f_lo, _) = fam.f_junction().second_derivative_envelope(DEFAULT_K_GRID)?;
    let (g_lo, _) = fam.g_junction().second_derivative_envelope(DEFAULT_K_GRID)?;
    let limit = k_limit(a.radius);
    e.note(&format!("smoothed tube metric at R = {}, eps = {}", a.radius, a.eps));
    e.num("radius", a.radius);
    e.num("eps", a.eps);
    for (key, j) in [("f", fam.f_junction()), ("g", fam.g_junction())] {
        e.num(&format!("{key}.iota"), j.iota());
        e.num(&format!("{key}.omega"), j.omega());
        e.num(&format!("{key}.delta"), j.delta());
    }
    e.num("delta", fam.delta());
    e.num("f.second_derivative_min", f_lo);
    e.num("g.second_derivative_min", g_lo);
    e.text("second_derivatives_positive", f_lo > 0.0 && g_lo > 0.0);
    let sups = fam.curvature_ratio_sups(DEFAULT_K_GRID);
    e.num("f.ratio_sup_collar", sups.f_collar);
    e.num("f.ratio_sup_window", sups.f_window);
    e.num("g.ratio_sup_collar", sups.g_collar);
    e.num("g.ratio_sup_window", sups.g_window);
    e.num("coth2_radius", a.radius.cosh().powi(2) / a.radius.sinh().powi(2));
    e.num("tanh2_radius", a.radius.tanh().powi(2));
    e.num("k_eps", ricci.k);
    e.num("k_eps_argmax", ricci.argmax);
    e.num("k_limit", limit);
    e.num("k_gap", (ricci.k - limit).abs());
    if let Some(path) = &a.csv {
        let n = a.points.max(2);
        let (lo, hi) = fam.pair().sample_window();
        let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
        w.write_record(["r", "f", "df", "d2f", "g", "dg", "d2g"])?;
        for i in 0..n {
            let r = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let (f, g) = fam.pair().jets(r)?;
            let row = [r, f.value, f.d1, f.d2, g.value, g.d1, g.d2].map(|v| format_sig(v, e.digits));
            w.write_record(&row)?;
        }
        w.flush()?;
        e.text("csv", path.display());
        e.text("csv_rows", n);
    }
    Ok(EXIT_OK)
}

fn bound(a: &BoundArgs, e: &mut Emitter) -> Result<i32> {
    let est = drilled_volume_bound(a.vol, a.length, a.radius)?;
    e.note("upper bounds on the volume of the drilled manifold");
    if let Some(w) = &est.warning {
        e.note(&format!("warning: {w}"));
    }
    e.num("vol", a.vol);
    e.num("length", a.length);
    e.num("radius", a.radius);
    e.num("k", est.k);
    e.num("coarse_factor", coarse_factor(a.radius));
    e.text("tube_fits", est.tube_fits);
    e.num("bound_tight", est.bound_tight);
    e.num("bound_coarse", est.bound_coarse);
    Ok(EXIT_OK)
}

fn minvol(e: &mut Emitter) -> Result<i32> {
    let r = min_volume_corollary()?;
    e.note("closed orientable hyperbolic 3-manifolds: volume lower bound via drilling the shortest geodesic");
    e.num("cusped_volume", r.cusped_volume);
    e.num("weeks_volume", r.weeks_volume);
    e.num("weeks_volume_rounded", r.weeks_volume_rounded);
    for c in &r.cases {
        e.note(&format!("case {}: {}", c.id, c.note));
        let p = format!("case{}", c.id);
        if let Some(v) = c.radius_lower {
            e.num(&format!("{p}.radius_lower"), v);
        }
        if let Some(v) = c.radius_upper {
            e.num(&format!("{p}.radius_upper"), v);
        }
        if let Some(v) = c.length_lower {
            e.num(&format!("{p}.length_lower"), v);
        }
        if let Some(v) = c.volume_lower {
            e.num(&format!("{p}.volume_lower"), v);
        }
        e.text(&format!("{p}.excluded"), r.excluded_cases.contains(&c.id));
    }
    e.note("excluded cases have volume above the Weeks volume");
    e.list("excluded_cases", &r.excluded_cases);
    e.list("retained_cases", &r.retained_cases);
    e.num("radius_threshold", r.radius_threshold);
    e.num("coarse_factor", r.coarse_factor);
    e.num("lower_bound", r.lower_bound);
    e.num("lower_bound_claim", r.lower_bound_claim);
    e.text("lower_bound_holds", r.lower_bound_holds());
    e.num("radius_bound", r.radius_bound);
    e.num("radius_bound_residual", r.radius_residual);
    e.num("radius_bound_weeks", r.radius_bound_weeks);
    e.num("radius_bound_claim", r.radius_bound_claim);
    e.text("radius_bound_holds", r.radius_bound_holds());
    Ok(EXIT_OK)
}

fn analyze_cmd(a: &AnalyzeArgs, e: &mut Emitter) -> Result<i32> {
    let records = parse_records(BufReader::new(File::open(&a.input)?))?;
    let report = analyze(&records)?;
    for n in &report.notices {
        e.note(&format!("notice: {n}"));
    }
    let violations: Vec<u64> = report.violations().map(|r| r.record.index).collect();
    let anomalies: Vec<u64> = report.anomalies().map(|r| r.record.index).collect();
    e.text("records", report.rows.len());
    e.text("violations", report.violation_count);
    e.list("violation_indices", &violations);
    match report.max_violation_margin {
        Some(m) => e.num("max_violation_margin", m),
        None => e.text("max_violation_margin", ""),
    }
    match report.max_margin {
        Some(m) => e.num("max_margin", m),
        None => e.text("max_margin", ""),
    }
    e.text("anomalies", report.anomaly_count);
    e.list("anomaly_indices", &anomalies);
    e.text("notices", report.notices.len());
    if let Some(path) = &a.report {
        let mut w = BufWriter::new(File::create(path)?);
        emit_report_with(&report, &mut w, e.digits)?;
        w.flush()?;
        e.text("report", path.display());
    }
    if let Some(path) = &a.plot {
        let style: PlotStyle = a.style.parse()?;
        let mut svg = Vec::new();
        emit_plot(&report, &mut svg, style)?;
        std::fs::write(path, svg)?;
        e.text("plot", path.display());
        e.text("plot_style", &a.style);
    }
    Ok(EXIT_OK)
}
