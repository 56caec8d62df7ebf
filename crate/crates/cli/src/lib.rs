//! Argument resolution, config files, command runners and table output for
//! the `fraclap` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use fraclap_core::fraclap::fourier_route;
use fraclap_core::fraclap::{
    equivalence_report, relative_discrepancy, singular_integral_route, RouteId,
};
use fraclap_core::mellin::FracOrder;
use fraclap_core::onesided::{
    caputo_kernel_form, hilbert_derivative, rl_kernel_form, EKernel, HalfLineFunction,
};
use fraclap_core::quadrature::{ContourSpec, QuadConfig};
use fraclap_core::sfde::sfde_rows;
use fraclap_core::specfun::{test_corpus, test_function, Complex, TestFunction};

/// Failure of a CLI run, split by exit status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    /// Bad flags, config entries or parameter ranges.
    #[error("{0}")]
    Usage(String),
    /// A numerical stage failed or a check exceeded its tolerance.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<fraclap_core::Error> for CliError {
    fn from(e: fraclap_core::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "fraclap",
    version,
    about = "Fractional Laplacian of radial functions by several equivalent routes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    /// Apply one route at each point.
    Apply,
    /// Evaluate several routes and report their pairwise discrepancy.
    Compare,
    /// Residual of the space-fractional diffusion equation for the stable density.
    Sfde,
    /// Kernel-convolution, Mellin kernel, Hilbert and delta-reduction checks.
    Theorems,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Apply => "apply",
            CommandKind::Compare => "compare",
            CommandKind::Sfde => "sfde",
            CommandKind::Theorems => "theorems",
        }
    }
}

/// Raw flag values; every one may also come from `--config`.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// Route or comma list of routes: heat, fourier, singular, mellin, riesz-inverse, all.
    #[arg(long, global = true)]
    pub route: Option<String>,
    /// Order alpha.
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Dimension n.
    #[arg(long, global = true)]
    pub dim: Option<String>,
    /// Corpus function: gaussian, exponential, lorentz, bump, cauchy.
    #[arg(long, global = true)]
    pub func: Option<String>,
    /// Comma list of evaluation points.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Time of the stable density (sfde).
    #[arg(long, global = true)]
    pub t: Option<String>,
    /// Pass threshold for compare, sfde and theorems.
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Mellin contour abscissa.
    #[arg(long = "contour-c", global = true, allow_hyphen_values = true)]
    pub contour_c: Option<String>,
    /// Initial Mellin contour height.
    #[arg(long = "contour-height", global = true)]
    pub contour_height: Option<String>,
    /// Relative tolerance of the quadratures.
    #[arg(long = "rel-tol", global = true)]
    pub rel_tol: Option<String>,
    /// Absolute tolerance of the quadratures.
    #[arg(long = "abs-tol", global = true)]
    pub abs_tol: Option<String>,
    /// Flat `key = value` file with the same names as the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a config file.
pub const CONFIG_KEYS: [&str; 12] = [
    "route",
    "alpha",
    "dim",
    "func",
    "x",
    "t",
    "tol",
    "out",
    "contour-c",
    "contour-height",
    "rel-tol",
    "abs-tol",
];

impl Flags {
    fn slot(&mut self, key: &str) -> &mut Option<String> {
        match key {
            "route" => &mut self.route,
            "alpha" => &mut self.alpha,
            "dim" => &mut self.dim,
            "func" => &mut self.func,
            "x" => &mut self.x,
            "t" => &mut self.t,
            "tol" => &mut self.tol,
            "out" => &mut self.out,
            "contour-c" => &mut self.contour_c,
            "contour-height" => &mut self.contour_height,
            "rel-tol" => &mut self.rel_tol,
            "abs-tol" => &mut self.abs_tol,
            _ => unreachable!("keys are checked by parse_config"),
        }
    }

    /// Fills unset flags from config entries.
    pub fn merge(mut self, file: &BTreeMap<String, String>) -> Self {
        for (k, v) in file {
            let slot = self.slot(k);
            if slot.is_none() {
                *slot = Some(v.clone());
            }
        }
        self
    }
}

/// Parses a flat `key = value` file. Blank lines and lines starting with
/// `#` are skipped; `_` in keys reads as `-`; values may be quoted.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(usage(format!(
                "config line {}: expected key = value",
                i + 1
            )));
        };
        let key = k.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(usage(format!(
                "config line {}: unknown key '{}'",
                i + 1,
                k.trim()
            )));
        }
        let mut value = v.trim();
        for q in ['"', '\''] {
            if value.len() >= 2 && value.starts_with(q) && value.ends_with(q) {
                value = &value[1..value.len() - 1];
            }
        }
        if out.insert(key, value.to_string()).is_some() {
            return Err(usage(format!(
                "config line {}: duplicate key '{}'",
                i + 1,
                k.trim()
            )));
        }
    }
    Ok(out)
}

/// Parses a comma list of finite reals.
pub fn parse_points(s: &str) -> Result<Vec<f64>, CliError> {
    let pts = s
        .split(',')
        .map(|p| parse_real("x", p))
        .collect::<Result<Vec<_>, _>>()?;
    if pts.is_empty() {
        return Err(usage("x: empty point list"));
    }
    Ok(pts)
}

/// Parses a comma list of route names; `all` stands for every route
/// applicable to `ord`.
pub fn parse_routes(s: &str, ord: FracOrder) -> Result<Vec<RouteId>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        if part.trim().eq_ignore_ascii_case("all") {
            out.extend(RouteId::ALL.into_iter().filter(|r| r.applicable(ord)));
            continue;
        }
        let r: RouteId = part.parse().map_err(CliError::Usage)?;
        if !r.applicable(ord) {
            return Err(usage(format!(
                "route {r} does not apply at alpha = {}, n = {}",
                ord.alpha, ord.n
            )));
        }
        out.push(r);
    }
    let mut seen = Vec::new();
    out.retain(|r| {
        let fresh = !seen.contains(r);
        seen.push(*r);
        fresh
    });
    Ok(out)
}

fn parse_real(name: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| usage(format!("{name}: '{}' is not a number", s.trim())))?;
    if !v.is_finite() {
        return Err(usage(format!("{name}: '{}' is not finite", s.trim())));
    }
    Ok(v)
}

fn parse_positive(name: &str, s: &str) -> Result<f64, CliError> {
    let v = parse_real(name, s)?;
    if v <= 0.0 {
        return Err(usage(format!("{name} = {v} must be positive")));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(usage(format!("out: '{other}' (expected csv or json)"))),
        }
    }
}

/// Validated settings of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub alpha: f64,
    pub dim: u32,
    pub func: &'static str,
    pub points: Vec<f64>,
    pub routes: Vec<RouteId>,
    pub t: f64,
    pub tol: f64,
    pub out: OutputFormat,
    pub quad: QuadConfig,
    pub contour: ContourSpec,
}

impl RunConfig {
    /// Applies defaults and checks every precondition of `command`.
    pub fn resolve(command: CommandKind, flags: &Flags) -> Result<Self, CliError> {
        let get = |v: &Option<String>, default: &str| v.clone().unwrap_or_else(|| default.into());
        let alpha = parse_real("alpha", &get(&flags.alpha, "1"))?;
        let alpha_ok = match command {
            CommandKind::Theorems => alpha > 0.0 && alpha <= 2.0,
            _ => alpha > 0.0 && alpha < 2.0,
        };
        if !alpha_ok {
            let range = if command == CommandKind::Theorems {
                "(0, 2]"
            } else {
                "(0, 2)"
            };
            return Err(usage(format!("alpha = {alpha} outside {range}")));
        }
        let dim_s = get(&flags.dim, "1");
        let dim: u32 = dim_s
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| usage(format!("dim: '{}' is not a positive integer", dim_s.trim())))?;
        if matches!(command, CommandKind::Sfde | CommandKind::Theorems) && dim != 1 {
            return Err(usage(format!(
                "{} runs in dimension 1 only",
                command.name()
            )));
        }
        let default_func = if command == CommandKind::Theorems {
            "bump"
        } else {
            "gaussian"
        };
        let func_s = get(&flags.func, default_func);
        let func = test_corpus()
            .into_iter()
            .map(|t| t.name)
            .find(|n| n.eq_ignore_ascii_case(func_s.trim()))
            .ok_or_else(|| {
                usage(format!(
                    "func: unknown '{}' (expected gaussian, exponential, lorentz, bump or cauchy)",
                    func_s.trim()
                ))
            })?;
        if command == CommandKind::Theorems && !corpus_entry(func).smooth_at_origin {
            return Err(usage(format!(
                "func {func}: the kernel identities need an even extension smooth at the origin"
            )));
        }
        let default_x = match command {
            CommandKind::Apply | CommandKind::Compare => "0",
            CommandKind::Sfde => "0,0.5,1,2",
            CommandKind::Theorems => "0.5,1,2",
        };
        let points = parse_points(&get(&flags.x, default_x))?;
        let t = parse_real("t", &get(&flags.t, "1"))?;
        if command == CommandKind::Sfde && t <= 0.0 {
            return Err(usage(format!(
                "t = {t}: the density at t <= 0 is a delta and cannot be evaluated"
            )));
        }
        let default_tol = match command {
            CommandKind::Compare => "1e-5",
            _ => "1e-4",
        };
        let tol = parse_positive("tol", &get(&flags.tol, default_tol))?;
        let out: OutputFormat = get(&flags.out, "csv").parse()?;
        let mut quad = QuadConfig::default();
        if let Some(s) = &flags.rel_tol {
            quad.rel_tol = parse_positive("rel-tol", s)?;
        }
        if let Some(s) = &flags.abs_tol {
            quad.abs_tol = parse_real("abs-tol", s)?;
        }
        quad.validate()?;
        let mut contour = ContourSpec::default();
        if let Some(s) = &flags.contour_c {
            contour.abscissa = Some(parse_real("contour-c", s)?);
        }
        if let Some(s) = &flags.contour_height {
            contour.height = parse_positive("contour-height", s)?;
            contour.max_height = contour.max_height.max(contour.height);
        }
        contour.validate()?;
        let routes = if command == CommandKind::Theorems || alpha >= 2.0 {
            Vec::new()
        } else {
            let ord = FracOrder::new(alpha, dim)?;
            let default_route = match command {
                CommandKind::Apply => "mellin",
                CommandKind::Compare => "all",
                _ => "singular",
            };
            let routes = parse_routes(&get(&flags.route, default_route), ord)?;
            if command != CommandKind::Compare && routes.len() != 1 {
                return Err(usage(format!("{} takes exactly one route", command.name())));
            }
            if command == CommandKind::Compare && routes.len() < 2 {
                return Err(usage("compare needs at least two routes"));
            }
            routes
        };
        Ok(RunConfig {
            command,
            alpha,
            dim,
            func,
            points,
            routes,
            t,
            tol,
            out,
            quad,
            contour,
        })
    }

    fn provenance(&self) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        p.insert("command".into(), self.command.name().into());
        p.insert("alpha".into(), short(self.alpha));
        p.insert("dim".into(), self.dim.to_string());
        p.insert("func".into(), self.func.into());
        if !self.routes.is_empty() {
            let names: Vec<&str> = self.routes.iter().map(|r| r.name()).collect();
            p.insert("route".into(), names.join(" "));
        }
        if self.command == CommandKind::Sfde {
            p.insert("t".into(), short(self.t));
        }
        if self.command != CommandKind::Apply {
            p.insert("tol".into(), short(self.tol));
        }
        p.insert("rel_tol".into(), short(self.quad.rel_tol));
        p.insert("abs_tol".into(), short(self.quad.abs_tol));
        let c = self.contour.abscissa.map_or("auto".into(), short);
        p.insert("contour_c".into(), c);
        p.insert("contour_height".into(), short(self.contour.height));
        p.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        p
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

/// Output of one command: provenance, column names and rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub provenance: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Why the run counts as a numeric failure, if it does.
    pub failure: Option<String>,
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.provenance {
            let _ = writeln!(s, "# {k}={v}");
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => format_g17(*v),
                    Cell::Text(t) => t.clone(),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render(&self, out: OutputFormat) -> String {
        match out {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
        }
    }
}

/// `%.17g`: 17 significant digits, fixed notation for exponents in
/// `[-5, 17)`, trailing zeros dropped.
pub fn format_g17(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{v:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&e) {
        trim_zeros(format!("{:.*}", (16 - e) as usize, v))
    } else {
        format!("{}e{e}", trim_zeros(mant.to_string()))
    }
}

/// Shortest round-trip form, `1` rather than `1.0`.
fn short(v: f64) -> String {
    let s = format!("{v:?}");
    s.strip_suffix(".0").map_or(s.clone(), str::to_string)
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn num_row(values: impl IntoIterator<Item = f64>) -> Vec<Cell> {
    values.into_iter().map(Cell::Num).collect()
}

fn corpus_entry(name: &str) -> TestFunction {
    test_function(name).expect("resolved against the corpus")
}

/// Runs the configured command.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        CommandKind::Apply => cmd_apply(cfg),
        CommandKind::Compare => cmd_compare(cfg),
        CommandKind::Sfde => cmd_sfde(cfg),
        CommandKind::Theorems => cmd_theorems(cfg),
    }
}

fn cmd_apply(cfg: &RunConfig) -> Result<Report, CliError> {
    let f = corpus_entry(cfg.func).to_radial(cfg.dim);
    let ord = FracOrder::new(cfg.alpha, cfg.dim)?;
    let rep = equivalence_report(&f, ord, &cfg.points, &cfg.routes, &cfg.quad, &cfg.contour)?;
    let values = &rep.routes[0].values;
    Ok(Report {
        provenance: cfg.provenance(),
        columns: vec!["x".into(), "value".into()],
        rows: cfg
            .points
            .iter()
            .zip(values)
            .map(|(&x, &v)| num_row([x, v]))
            .collect(),
        failure: None,
    })
}

fn cmd_compare(cfg: &RunConfig) -> Result<Report, CliError> {
    let f = corpus_entry(cfg.func).to_radial(cfg.dim);
    let ord = FracOrder::new(cfg.alpha, cfg.dim)?;
    let rep = equivalence_report(&f, ord, &cfg.points, &cfg.routes, &cfg.quad, &cfg.contour)?;
    let mut columns = vec!["x".to_string()];
    columns.extend(cfg.routes.iter().map(|r| r.name().to_string()));
    columns.push("max_rel_err".into());
    let rows = (0..rep.points.len())
        .map(|i| {
            let mut row = vec![rep.points[i]];
            row.extend(rep.routes.iter().map(|r| r.values[i]));
            row.push(rep.max_rel_err_at(i));
            num_row(row)
        })
        .collect();
    let worst = rep.pairwise_max_rel_err;
    let failure = (worst > cfg.tol).then(|| {
        format!(
            "pairwise relative discrepancy {} exceeds tol {}",
            format_g17(worst),
            format_g17(cfg.tol)
        )
    });
    Ok(Report {
        provenance: cfg.provenance(),
        columns,
        rows,
        failure,
    })
}

fn cmd_sfde(cfg: &RunConfig) -> Result<Report, CliError> {
    let rows = sfde_rows(
        cfg.alpha,
        cfg.t,
        &cfg.points,
        cfg.routes[0],
        &cfg.quad,
        &cfg.contour,
    )?;
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let failure = (worst > cfg.tol).then(|| {
        format!(
            "residual {} exceeds tol {}",
            format_g17(worst),
            format_g17(cfg.tol)
        )
    });
    Ok(Report {
        provenance: cfg.provenance(),
        columns: ["x", "dt", "lp", "residual"].map(String::from).to_vec(),
        rows: rows
            .iter()
            .map(|r| num_row([r.x, r.dt, r.lp, r.residual]))
            .collect(),
        failure,
    })
}

/// Floor of a relative check's denominator, as a fraction of the largest
/// `|rhs|` among the rows of the same check.
const REL_FLOOR: f64 = 1e-6;

struct Entry {
    check: &'static str,
    at: String,
    lhs: f64,
    rhs: f64,
    relative: bool,
}

#[derive(Default)]
struct Checks {
    entries: Vec<Entry>,
}

impl Checks {
    /// Relative discrepancy against another route.
    fn rel(&mut self, check: &'static str, at: String, lhs: f64, rhs: f64) {
        self.push(check, at, lhs, rhs, true);
    }

    /// Absolute error against a closed form, which may vanish.
    fn abs(&mut self, check: &'static str, at: String, lhs: f64, rhs: f64) {
        self.push(check, at, lhs, rhs, false);
    }

    fn push(&mut self, check: &'static str, at: String, lhs: f64, rhs: f64, relative: bool) {
        self.entries.push(Entry {
            check,
            at,
            lhs,
            rhs,
            relative,
        });
    }

    /// Rows and the list of failed checks.
    fn finish(self, tol: f64) -> (Vec<Vec<Cell>>, Vec<String>) {
        let mut rows = Vec::new();
        let mut failed = Vec::new();
        for e in &self.entries {
            let err = if e.relative {
                let scale = self
                    .entries
                    .iter()
                    .filter(|o| o.check == e.check)
                    .map(|o| o.rhs.abs())
                    .fold(0.0, f64::max);
                let den = e.lhs.abs().max(e.rhs.abs()).max(REL_FLOOR * scale);
                relative_discrepancy(e.lhs, e.rhs).min((e.lhs - e.rhs).abs() / den)
            } else {
                (e.lhs - e.rhs).abs()
            };
            let pass = err <= tol;
            if !pass {
                failed.push(format!("{} at {}", e.check, e.at));
            }
            rows.push(vec![
                Cell::Text(e.check.into()),
                Cell::Text(e.at.clone()),
                Cell::Num(e.lhs),
                Cell::Num(e.rhs),
                Cell::Num(err),
                Cell::Text(if e.relative { "rel" } else { "abs" }.into()),
                Cell::Text(if pass { "pass" } else { "fail" }.into()),
            ]);
        }
        (rows, failed)
    }
}

fn cmd_theorems(cfg: &RunConfig) -> Result<Report, CliError> {
    let entry = corpus_entry(cfg.func);
    let h = HalfLineFunction::from_test_function(&entry);
    let f = entry.to_radial(1);
    let a = cfg.alpha;
    let mut checks = Checks::default();
    let mut provenance = cfg.provenance();
    if a < 2.0 {
        let ord = FracOrder::new(a, 1)?;
        let rl_applies = h.initial_values.iter().all(|&v| v == 0.0);
        for &x in &cfg.points {
            let riesz = singular_integral_route(&f, ord, x, &cfg.quad)?;
            let c = caputo_kernel_form(&h, a, x, &cfg.quad)?;
            checks.rel("caputo-kernel", format_g17(x), c, riesz);
            if rl_applies {
                let r = rl_kernel_form(&h, a, x, &cfg.quad)?;
                checks.rel("rl-kernel", format_g17(x), r, riesz);
            }
        }
        if !rl_applies {
            provenance.insert(
                "rl_kernel".into(),
                "skipped: initial values do not vanish".into(),
            );
        }
    } else {
        for &x in &cfg.points {
            let c = caputo_kernel_form(&h, a, x, &cfg.quad)?;
            let d2 = (entry.second_derivative)(x.abs());
            checks.rel("delta-reduction", format_g17(x), c, d2);
        }
    }
    let kernel = EKernel::new(a)?;
    for im in [0.0, 1.0, 3.0] {
        let s = Complex::new(0.5, im);
        let num = kernel.mellin_numeric(s, &cfg.quad)?;
        let exact = kernel.mellin_closed_form(s)?;
        let at = format!("0.5{im:+}i");
        checks.abs("kernel-mellin-re", at.clone(), num.re, exact.re);
        checks.abs("kernel-mellin-im", at, num.im, exact.im);
    }
    if a == 1.0 {
        let ord = FracOrder::new(1.0, 1)?;
        let cauchy = corpus_entry("cauchy").to_radial(1);
        for &x in &cfg.points {
            let v = hilbert_derivative(&cauchy, x, &cfg.quad)?;
            let u = 1.0 + x * x;
            let exact = (x * x - 1.0) / (std::f64::consts::PI * u * u);
            checks.abs("hilbert-cauchy", format_g17(x), v, exact);
            let v = hilbert_derivative(&f, x, &cfg.quad)?;
            let w = fourier_route(&f, ord, x, &cfg.quad)?;
            checks.rel("hilbert-fourier", format_g17(x), v, w);
        }
    }
    provenance.insert(
        "rel_floor".into(),
        format!("{REL_FLOOR:e} x largest |rhs| of the check"),
    );
    let (rows, failed) = checks.finish(cfg.tol);
    let failure = (!failed.is_empty()).then(|| {
        format!(
            "checks above tol {}: {}",
            format_g17(cfg.tol),
            failed.join("; ")
        )
    });
    Ok(Report {
        provenance,
        columns: ["check", "at", "lhs", "rhs", "err", "measure", "status"]
            .map(String::from)
            .to_vec(),
        rows,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn flags() -> Flags {
        Flags::default()
    }

    #[test]
    fn g17_examples() {
        assert_eq!(format_g17(0.0), "0");
        assert_eq!(format_g17(-1.1283791670955126), "-1.1283791670955126");
        assert_eq!(format_g17(0.5), "0.5");
        assert_eq!(format_g17(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_g17(1e20), "1e20");
        assert_eq!(format_g17(123.0), "123");
    }

    #[test]
    fn config_parsing() {
        let m = parse_config("# c\nalpha = 1.5\n\ncontour_c = '0.3'\nx=0, 1\n").unwrap();
        assert_eq!(m["alpha"], "1.5");
        assert_eq!(m["contour-c"], "0.3");
        assert_eq!(m["x"], "0, 1");
        assert!(parse_config("alpha 1").is_err());
        assert!(parse_config("beta = 1").is_err());
        assert!(parse_config("t = 1\nt = 2").is_err());
    }

    #[test]
    fn flags_win_over_config() {
        let file = parse_config("alpha = 1.5\nfunc = bump").unwrap();
        let f = Flags {
            alpha: Some("0.5".into()),
            ..flags()
        }
        .merge(&file);
        assert_eq!(f.alpha.as_deref(), Some("0.5"));
        assert_eq!(f.func.as_deref(), Some("bump"));
    }

    #[test]
    fn points_and_routes() {
        assert_eq!(parse_points("0, -1.5,2e1").unwrap(), vec![0.0, -1.5, 20.0]);
        assert!(parse_points("").is_err());
        assert!(parse_points("1,,2").is_err());
        assert!(parse_points("inf").is_err());
        let ord = FracOrder::new(0.5, 1).unwrap();
        assert_eq!(parse_routes("all", ord).unwrap().len(), 4);
        assert_eq!(
            parse_routes("mellin,heat,mellin", ord).unwrap(),
            vec![RouteId::MellinContour, RouteId::HeatSemigroup]
        );
        assert!(parse_routes("riesz-inverse", ord).is_err());
        assert!(parse_routes("laplace", ord).is_err());
    }

    #[test]
    fn resolve_checks_preconditions() {
        let bad = |f: Flags, cmd| RunConfig::resolve(cmd, &f).unwrap_err().exit_code();
        let alpha = |a: &str| Flags {
            alpha: Some(a.into()),
            ..flags()
        };
        assert_eq!(bad(alpha("2.5"), CommandKind::Apply), 1);
        assert_eq!(bad(alpha("2"), CommandKind::Apply), 1);
        assert!(RunConfig::resolve(CommandKind::Theorems, &alpha("2")).is_ok());
        let t0 = Flags {
            t: Some("0".into()),
            ..flags()
        };
        assert_eq!(bad(t0, CommandKind::Sfde), 1);
        let corner = Flags {
            func: Some("exponential".into()),
            ..flags()
        };
        assert_eq!(bad(corner, CommandKind::Theorems), 1);
        let func = Flags {
            func: Some("sinc".into()),
            ..flags()
        };
        assert_eq!(bad(func, CommandKind::Compare), 1);
        let two = Flags {
            route: Some("heat,fourier".into()),
            ..flags()
        };
        assert_eq!(bad(two, CommandKind::Apply), 1);
        let c = RunConfig::resolve(CommandKind::Compare, &flags()).unwrap();
        assert_eq!(c.routes.len(), 4);
        assert_eq!(c.tol, 1e-5);
    }

    #[test]
    fn csv_layout() {
        let r = Report {
            provenance: BTreeMap::from([("alpha".to_string(), "1".to_string())]),
            columns: vec!["x".into(), "value".into()],
            rows: vec![num_row([0.0, -0.25])],
            failure: None,
        };
        assert_eq!(r.to_csv(), "# alpha=1\nx,value\n0,-0.25\n");
    }

    proptest! {
        #[test]
        fn g17_round_trips(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            let s = format_g17(v);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{}", s);
        }

        #[test]
        fn json_round_trips(vals in proptest::collection::vec(any::<u64>(), 1..8)) {
            let row: Vec<f64> = vals.into_iter().map(f64::from_bits).filter(|v| v.is_finite()).collect();
            let r = Report {
                provenance: BTreeMap::new(),
                columns: vec![],
                rows: vec![num_row(row.clone())],
                failure: None,
            };
            let back: Report = serde_json::from_str(&r.to_json()).unwrap();
            let got: Vec<u64> = back.rows[0].iter().map(|c| match c {
                Cell::Num(v) => v.to_bits(),
                Cell::Text(_) => panic!("text cell"),
            }).collect();
            prop_assert_eq!(got, row.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        }
    }
}
