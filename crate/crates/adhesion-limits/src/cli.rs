//! Command-line front end: configuration, commands, CSV/JSON export.
//!
//! Precedence is flags over the `--config` file over built-in defaults. Exit
//! codes: `0` success, `1` configuration error, `2` verification failure, `3`
//! numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limit_solution::{
    probe_points, verify_limit_convergence, ConvergenceTolerances, Fidelity, LimitSolution,
};
use crate::measure_recovery::{
    burgers_bumps, burgers_weak_residual, check_distributional_derivative, interior_bumps, WeakCheckReport,
};
use crate::oracle_quadrature::{richardson_v, s_quad, v_quad};
use crate::problem::{validate_params, ProblemParams};
use crate::viscous_exact::{s_eps, s_eps_magnitude, v_eps, viscous_state, Scaled};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Version of the CSV schemas and region labels.
pub const SCHEMA_VERSION: &str = "1";

/// `min:max:count` sampling of one axis (inclusive, evenly spaced).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        (0..self.n).map(|i| self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: AxisSpec,
    pub t: AxisSpec,
}

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Tolerances of the verification commands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Closed form vs quadrature, relative.
    pub quadrature_rel: f64,
    /// Closed form vs Richardson-extrapolated finite differences, relative.
    pub fd_rel: f64,
    /// Weak-form checks.
    pub weak: f64,
    /// Final `|u^ε − u|`.
    pub u_abs: f64,
    /// Final `|R^ε − R| / (1 + |R|)`.
    pub r_rel: f64,
    /// Minimal distance of convergence probes from any edge.
    pub margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { quadrature_rel: 1e-8, fd_rel: 1e-6, weak: 1e-6, u_abs: 0.01, r_rel: 0.05, margin: 0.1 }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub params: ProblemParams,
    pub epsilons: Vec<f64>,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub fidelity: Fidelity,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub strict: bool,
    /// Number of randomized bumps per weak check.
    pub bumps: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ProblemParams { a: 0.0, c: 1.0, b: 2.0, d: 3.0, u_a: -1.0, u_b: 1.0, rho_c: 1.0, rho_d: 2.0 },
            epsilons: vec![0.1, 0.01, 0.001, 0.0001],
            grid: GridSpec {
                x: AxisSpec { min: -5.0, max: 8.0, n: 21 },
                t: AxisSpec { min: 0.5, max: 5.0, n: 10 },
            },
            tolerances: Tolerances::default(),
            fidelity: Fidelity::Corrected,
            format: OutputFormat::Csv,
            out: None,
            strict: false,
            bumps: 20,
            seed: 1,
        }
    }
}

impl RunConfig {
    /// Checks grid counts, the ε sequence and the parameters.
    pub fn validate(&self) -> Result<()> {
        validate_params(self.params)?;
        for (name, axis) in [("x", self.grid.x), ("t", self.grid.t)] {
            if axis.n < 2 {
                return Err(Error::Config(format!("grid axis {name} needs at least 2 points")));
            }
            if !(axis.min.is_finite() && axis.max.is_finite() && axis.max > axis.min) {
                return Err(Error::Config(format!("grid axis {name} needs finite min < max")));
            }
        }
        if self.grid.t.min <= 0.0 {
            return Err(Error::Config("grid axis t must be strictly positive".into()));
        }
        if self.epsilons.is_empty() {
            return Err(Error::Config("at least one epsilon is required".into()));
        }
        if self.epsilons.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::Config("epsilons must be positive and finite".into()));
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("epsilons must be strictly decreasing".into()));
        }
        Ok(())
    }
}

/// Command-line interface.
#[derive(Debug, Parser)]
#[command(name = "adhesion-limits", version, about = "Viscous solutions and vanishing-viscosity limits of pressureless gas dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grid of u^ε and R^ε from the closed forms.
    EvalViscous(CommonArgs),
    /// Grid of the limit u and R with region labels.
    EvalLimit(CommonArgs),
    /// Sampled wave curves and intersection times.
    Curves(CommonArgs),
    /// Vanishing-viscosity convergence report.
    Convergence(CommonArgs),
    /// Distributional-derivative and Burgers weak-form checks.
    CheckWeak(CommonArgs),
    /// Closed forms against quadrature and finite differences.
    OracleDiff(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::EvalViscous(_) => "eval-viscous",
            Command::EvalLimit(_) => "eval-limit",
            Command::Curves(_) => "curves",
            Command::Convergence(_) => "convergence",
            Command::CheckWeak(_) => "check-weak",
            Command::OracleDiff(_) => "oracle-diff",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::EvalViscous(a)
            | Command::EvalLimit(a)
            | Command::Curves(a)
            | Command::Convergence(a)
            | Command::CheckWeak(a)
            | Command::OracleDiff(a) => a,
        }
    }
}

#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Parameter overrides, e.g. `a=0,c=1,b=2,d=3,u_a=-1,u_b=1,rho_c=1,rho_d=2`.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Comma-separated, strictly decreasing viscosities.
    #[arg(long)]
    pub eps: Option<String>,
    /// Grid, e.g. `x=-5:5:101,t=0.1:5:50`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Output file (stdout when absent); a `.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `csv` or `json`.
    #[arg(long)]
    pub format: Option<String>,
    /// Treat configurations outside the detailed subcases as errors.
    #[arg(long)]
    pub strict: bool,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    pub show_config: bool,
    /// `corrected`, `as-printed` or `as-printed-dropped-constants`.
    #[arg(long)]
    pub fidelity: Option<String>,
    /// Number of randomized bumps per weak check.
    #[arg(long)]
    pub bumps: Option<usize>,
    /// Seed of the bump generator.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Config(format!("cannot parse {what} value {s:?}")))
}

/// Applies `key=value` overrides to the parameters.
pub fn parse_params_override(spec: &str, base: ProblemParams) -> Result<ProblemParams> {
    let mut p = base;
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Config(format!("expected key=value, got {item:?}")))?;
        let v = parse_f64(v, k)?;
        match k.trim() {
            "a" => p.a = v,
            "c" => p.c = v,
            "b" => p.b = v,
            "d" => p.d = v,
            "u_a" => p.u_a = v,
            "u_b" => p.u_b = v,
            "rho_c" => p.rho_c = v,
            "rho_d" => p.rho_d = v,
            other => return Err(Error::Config(format!("unknown parameter {other:?}"))),
        }
    }
    Ok(p)
}

/// Parses `x=min:max:n,t=min:max:n` (either axis may be omitted).
pub fn parse_grid_override(spec: &str, base: GridSpec) -> Result<GridSpec> {
    let mut g = base;
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Config(format!("expected axis=min:max:n, got {item:?}")))?;
        let parts: Vec<&str> = v.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!("expected min:max:n for axis {k}, got {v:?}")));
        }
        let n = parts[2].trim().parse::<usize>().map_err(|_| Error::Config(format!("bad count {:?}", parts[2])))?;
        let axis = AxisSpec { min: parse_f64(parts[0], k)?, max: parse_f64(parts[1], k)?, n };
        match k.trim() {
            "x" => g.x = axis,
            "t" => g.t = axis,
            other => return Err(Error::Config(format!("unknown grid axis {other:?}"))),
        }
    }
    Ok(g)
}

/// Parses a comma-separated ε list.
pub fn parse_eps(spec: &str) -> Result<Vec<f64>> {
    spec.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_f64(s, "epsilon")).collect()
}

/// Resolves defaults, the config file and the flags into one configuration.
pub fn resolve_config(args: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| Error::Config(format!("invalid config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = &args.params {
        cfg.params = parse_params_override(s, cfg.params)?;
    }
    if let Some(s) = &args.eps {
        cfg.epsilons = parse_eps(s)?;
    }
    if let Some(s) = &args.grid {
        cfg.grid = parse_grid_override(s, cfg.grid)?;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if let Some(f) = &args.format {
        cfg.format = match f.as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => return Err(Error::Config(format!("unknown format {other:?}"))),
        };
    }
    if let Some(f) = &args.fidelity {
        cfg.fidelity = Fidelity::parse(f).ok_or_else(|| Error::Config(format!("unknown fidelity {f:?}")))?;
    }
    if let Some(n) = args.bumps {
        cfg.bumps = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.strict |= args.strict;
    cfg.validate()?;
    Ok(cfg)
}

/// One row of a field export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub x: f64,
    pub t: f64,
    /// `None` for limit fields.
    pub epsilon: Option<f64>,
    pub u: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub region_label: String,
}

/// Formats a float with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes samples as CSV with columns `x,t,epsilon,u,R,region_label`.
pub fn export_profile<W: Write>(samples: &[ProfileSample], w: W) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::Config("nothing to export".into()));
    }
    let mut wr = csv_writer(w);
    wr.write_record(["x", "t", "epsilon", "u", "R", "region_label"]).map_err(csv_err)?;
    for s in samples {
        wr.write_record([
            fmt17(s.x),
            fmt17(s.t),
            fmt_opt(s.epsilon),
            fmt_opt(s.u),
            fmt_opt(s.r),
            s.region_label.clone(),
        ])
        .map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

/// Reads a CSV written by [`export_profile`].
pub fn parse_profile<R: std::io::Read>(r: R) -> Result<Vec<ProfileSample>> {
    let mut rd = csv::ReaderBuilder::new().from_reader(r);
    let opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            parse_f64(s, "field").map(Some)
        }
    };
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != 6 {
            return Err(Error::Config(format!("expected 6 columns, got {}", rec.len())));
        }
        out.push(ProfileSample {
            x: parse_f64(&rec[0], "x")?,
            t: parse_f64(&rec[1], "t")?,
            epsilon: opt(&rec[2])?,
            u: opt(&rec[3])?,
            r: opt(&rec[4])?,
            region_label: rec[5].to_string(),
        });
    }
    Ok(out)
}

/// Artifact produced by a command.
struct Artifact {
    /// Primary output in the requested format.
    body: Vec<u8>,
    /// Whether every check of the command passed.
    pass: bool,
    /// Short summary for stderr and the sidecar.
    summary: serde_json::Value,
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn table_csv(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut wr = csv_writer(Vec::new());
    wr.write_record(header).map_err(csv_err)?;
    for r in rows {
        wr.write_record(r).map_err(csv_err)?;
    }
    wr.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn profile_body(samples: &[ProfileSample], format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            export_profile(samples, &mut buf)?;
            Ok(buf)
        }
        OutputFormat::Json => to_json(&samples),
    }
}

fn cmd_eval_viscous(cfg: &RunConfig) -> Result<Artifact> {
    let mut samples = Vec::new();
    for &eps in &cfg.epsilons {
        for t in cfg.grid.t.values() {
            for x in cfg.grid.x.values() {
                let st = viscous_state(&cfg.params, x, t, eps)?;
                samples.push(ProfileSample {
                    x,
                    t,
                    epsilon: Some(eps),
                    u: Some(st.u),
                    r: Some(st.r),
                    region_label: st.tag.label().to_string(),
                });
            }
        }
    }
    Ok(Artifact {
        body: profile_body(&samples, cfg.format)?,
        pass: true,
        summary: serde_json::json!({ "rows": samples.len() }),
    })
}

fn cmd_eval_limit(cfg: &RunConfig) -> Result<Artifact> {
    let sol = LimitSolution::new(cfg.params, cfg.fidelity);
    let mut samples = Vec::new();
    for t in cfg.grid.t.values() {
        for x in cfg.grid.x.values() {
            let (u, r) = (sol.u(x, t), sol.r(x, t));
            samples.push(ProfileSample { x, t, epsilon: None, u: u.value, r: r.value, region_label: u.label().to_string() });
        }
    }
    Ok(Artifact {
        body: profile_body(&samples, cfg.format)?,
        pass: true,
        summary: serde_json::json!({ "rows": samples.len() }),
    })
}

#[derive(Serialize)]
struct CurveRow {
    label: String,
    t: f64,
    x: f64,
}

fn cmd_curves(cfg: &RunConfig) -> Result<Artifact> {
    let sol = LimitSolution::new(cfg.params, cfg.fidelity);
    let mut rows = Vec::new();
    for c in &sol.curves.curves {
        for t in cfg.grid.t.values() {
            rows.push(CurveRow { label: c.label.as_str().to_string(), t, x: c.eval(t) });
        }
    }
    for i in &sol.curves.intersections {
        rows.push(CurveRow { label: i.name.to_string(), t: i.t, x: i.x() });
    }
    let body = match cfg.format {
        OutputFormat::Csv => table_csv(
            &["label", "t", "x"],
            &rows.iter().map(|r| vec![r.label.clone(), fmt17(r.t), fmt17(r.x)]).collect::<Vec<_>>(),
        )?,
        OutputFormat::Json => to_json(&serde_json::json!({
            "case": sol.case.case_id.as_str(),
            "subcase": sol.case.subcase.as_str(),
            "completeness": sol.curves.completeness.as_str(),
            "samples": rows,
        }))?,
    };
    Ok(Artifact { body, pass: true, summary: serde_json::json!({ "rows": rows.len() }) })
}

fn cmd_convergence(cfg: &RunConfig) -> Result<Artifact> {
    let sol = LimitSolution::new(cfg.params, cfg.fidelity);
    let tol = ConvergenceTolerances { u_abs: cfg.tolerances.u_abs, r_rel: cfg.tolerances.r_rel, margin: cfg.tolerances.margin };
    let points: Vec<(f64, f64)> = probe_points(&sol, &cfg.grid.t.values(), (cfg.grid.x.min, cfg.grid.x.max), tol.margin)
        .into_iter()
        .map(|(x, t, _)| (x, t))
        .collect();
    let report = verify_limit_convergence(&sol, &points, &cfg.epsilons, tol)?;
    let body = match cfg.format {
        OutputFormat::Json => to_json(&report)?,
        OutputFormat::Csv => table_csv(
            &["x", "t", "region_label", "u_limit", "R_limit", "u_error", "R_error", "tail_non_increasing", "pass"],
            &report
                .points
                .iter()
                .map(|p| {
                    vec![
                        fmt17(p.x),
                        fmt17(p.t),
                        p.zone.to_string(),
                        fmt17(p.u_limit),
                        fmt17(p.r_limit),
                        fmt17(*p.u_errors.last().unwrap()),
                        fmt17(*p.r_errors.last().unwrap()),
                        p.tail_non_increasing.to_string(),
                        p.pass.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    let failed = report.points.iter().filter(|p| !p.pass).count();
    Ok(Artifact {
        body,
        pass: report.pass,
        summary: serde_json::json!({ "points": report.points.len(), "failed": failed }),
    })
}

fn weak_rows(reports: &[WeakCheckReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                r.case.to_string(),
                r.subcase.to_string(),
                r.check.clone(),
                r.phi_descriptor.clone(),
                fmt17(r.lhs),
                fmt17(r.rhs),
                fmt17(r.residual),
                fmt17(r.tol),
                r.pass.to_string(),
            ]
        })
        .collect()
}

fn cmd_check_weak(cfg: &RunConfig) -> Result<Artifact> {
    let sol = LimitSolution::new(cfg.params, cfg.fidelity);
    let tol = cfg.tolerances.weak;
    let mut reports = Vec::new();
    for phi in interior_bumps(&sol, cfg.bumps, cfg.seed) {
        reports.push(check_distributional_derivative(&sol, &phi, tol)?);
    }
    for phi in burgers_bumps(&sol, cfg.bumps, cfg.seed) {
        reports.push(burgers_weak_residual(&sol, &phi, tol)?);
    }
    let body = match cfg.format {
        OutputFormat::Json => to_json(&reports)?,
        OutputFormat::Csv => table_csv(
            &["case", "subcase", "check", "phi_descriptor", "lhs", "rhs", "residual", "tol", "pass"],
            &weak_rows(&reports),
        )?,
    };
    let failed = reports.iter().filter(|r| !r.pass).count();
    Ok(Artifact {
        body,
        pass: failed == 0,
        summary: serde_json::json!({ "checks": reports.len(), "failed": failed }),
    })
}

/// Relative discrepancy of the closed form against an oracle, measured against
/// `max(|oracle|, magnitude)`.
fn relative_to(closed: Scaled, oracle: Scaled, magnitude: Scaled) -> f64 {
    let reference = if magnitude.ln_abs() > oracle.ln_abs() { magnitude } else { oracle };
    closed.relative_difference(oracle, reference)
}

fn cmd_oracle_diff(cfg: &RunConfig) -> Result<Artifact> {
    let p = &cfg.params;
    let mut rows = Vec::new();
    let (mut max_v, mut max_s, mut max_fd) = (0.0f64, 0.0f64, 0.0f64);
    let oracle_tol = 1e-12;
    for &eps in &cfg.epsilons {
        for t in cfg.grid.t.values() {
            for x in cfg.grid.x.values() {
                let vc = v_eps(p, x, t, eps)?;
                let vq = v_quad(p, x, t, eps, oracle_tol)?;
                let rv = relative_to(vc, vq.value, Scaled::ZERO);
                let sc = s_eps(p, x, t, eps)?;
                let sq = s_quad(p, x, t, eps, oracle_tol)?;
                let mag = s_eps_magnitude(p, x, t, eps)?;
                let rs = relative_to(sc, sq.value, if mag.ln_abs() > sq.magnitude.ln_abs() { mag } else { sq.magnitude });
                max_v = max_v.max(rv);
                max_s = max_s.max(rs);
                for (field, c, q, r) in [("V", vc, vq.value, rv), ("S", sc, sq.value, rs)] {
                    let scale = c.log_scale;
                    let q_m = if q.mantissa == 0.0 { 0.0 } else { q.mantissa * (q.log_scale - scale).exp() };
                    rows.push(vec![
                        field.to_string(),
                        fmt17(x),
                        fmt17(t),
                        fmt17(eps),
                        fmt17(scale),
                        fmt17(c.mantissa),
                        fmt17(q_m),
                        fmt17(r),
                    ]);
                }
            }
        }
    }
    // Finite differences at ε = 1/2 and t = 1.
    let fd_eps = 0.5;
    let probes = [p.a - 0.5, 0.5 * (p.a + p.c), 0.5 * (p.c + p.b), 0.5 * (p.b + p.d), p.d + 0.5];
    let reports = richardson_v(p, fd_eps, 1.0, &probes, 1.0 / 40.0, 10.0)?;
    for r in &reports {
        let vc = v_eps(p, r.x, r.t, fd_eps)?.to_f64()?;
        let rel = ((r.extrapolated - vc) / vc).abs();
        max_fd = max_fd.max(rel);
        rows.push(vec![
            "V-fd".to_string(),
            fmt17(r.x),
            fmt17(r.t),
            fmt17(fd_eps),
            fmt17(0.0),
            fmt17(vc),
            fmt17(r.extrapolated),
            fmt17(rel),
        ]);
    }
    let tol = cfg.tolerances;
    let pass = max_v <= tol.quadrature_rel && max_s <= tol.quadrature_rel && max_fd <= tol.fd_rel;
    let body = match cfg.format {
        OutputFormat::Csv => table_csv(&["field", "x", "t", "epsilon", "log_scale", "closed", "oracle", "rel_diff"], &rows)?,
        OutputFormat::Json => to_json(&serde_json::json!({
            "max_rel_v": max_v,
            "max_rel_s": max_s,
            "max_rel_fd": max_fd,
            "rows": rows,
        }))?,
    };
    Ok(Artifact {
        body,
        pass,
        summary: serde_json::json!({ "max_rel_v": max_v, "max_rel_s": max_s, "max_rel_fd": max_fd }),
    })
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParams(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

/// Runs the command line given as an argument list (first item is the program
/// name) and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let command = cli.command.name();
    let args = cli.command.args();
    let cfg = match resolve_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if args.show_config {
        match serde_json::to_string_pretty(&cfg) {
            Ok(s) => println!("{s}"),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_CONFIG;
            }
        }
        return EXIT_OK;
    }
    let sol = LimitSolution::new(cfg.params, cfg.fidelity);
    if !sol.curves.completeness.is_detailed() {
        eprintln!("warning: {} curve network ({:?})", sol.curves.completeness.as_str(), sol.curves.completeness);
        if cfg.strict {
            eprintln!("error: --strict rejects configurations outside the detailed subcases");
            return EXIT_CONFIG;
        }
    }
    let result = match &cli.command {
        Command::EvalViscous(_) => cmd_eval_viscous(&cfg),
        Command::EvalLimit(_) => cmd_eval_limit(&cfg),
        Command::Curves(_) => cmd_curves(&cfg),
        Command::Convergence(_) => cmd_convergence(&cfg),
        Command::CheckWeak(_) => cmd_check_weak(&cfg),
        Command::OracleDiff(_) => cmd_oracle_diff(&cfg),
    };
    let artifact = match result {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let write = || -> Result<()> {
        match &cfg.out {
            Some(path) => {
                std::fs::write(path, &artifact.body)?;
                let meta = serde_json::json!({
                    "command": command,
                    "schema_version": SCHEMA_VERSION,
                    "crate_version": env!("CARGO_PKG_VERSION"),
                    "case": sol.case.case_id.as_str(),
                    "subcase": sol.case.subcase.as_str(),
                    "on_subcase_boundary": sol.case.on_subcase_boundary,
                    "completeness": sol.curves.completeness.as_str(),
                    "pass": artifact.pass,
                    "summary": artifact.summary,
                    "config": cfg,
                });
                std::fs::write(sidecar_path(path), to_json(&meta)?)?;
            }
            None => std::io::stdout().write_all(&artifact.body)?,
        }
        Ok(())
    };
    if let Err(e) = write() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    eprintln!("{command}: {}", artifact.summary);
    if artifact.pass {
        EXIT_OK
    } else {
        eprintln!("{command}: verification failed");
        EXIT_VERIFICATION
    }
}
