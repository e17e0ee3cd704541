//! Command-line front end.
//!
//! Configuration is a flat `key = value` file; values may carry `dBm`, `dB`,
//! `W`, `mW`, `Hz`, `MHz`, `GHz` or `m` suffixes. Unset keys keep the
//! built-in scenario defaults (see [`SystemParams::default`]).
//!
//! Exit codes: 0 success, 1 validation found mismatches, 2 configuration or
//! usage error, 3 I/O failure.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::deployment::{
    check_propositions, optimal_index, proposition_grid, scheme_all_pirs, scheme_middle,
};
use crate::metrics::{self, Mode};
use crate::params::{
    db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm, Scenario, Severity, SystemParams,
    SPEED_OF_LIGHT,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Model(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}

#[derive(Debug, Parser)]
#[command(name = "irs-link", version, about = "Active/passive IRS cascade: placement, SNR and power")]
pub struct Cli {
    /// Scenario file with `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Override a scenario key, e.g. `--set "sigma2 = -120 dBm"`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal AIRS placement and objective for one scenario.
    Eval {
        #[arg(long, default_value = "wit")]
        mode: Mode,
        /// Elements per passive IRS.
        #[arg(long)]
        np: Option<usize>,
        /// Also report the objective with the AIRS at this index.
        #[arg(long)]
        l: Option<usize>,
    },
    /// CSV over a range of passive element counts.
    Sweep {
        #[arg(long, default_value = "wit")]
        mode: Mode,
        /// `min:max:log:count`, `min:max:lin:count` or `min:max:step:size`.
        #[arg(long)]
        np: SweepSpec,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare closed-form placements with exhaustive search over a grid.
    Validate,
    /// Write fig2.csv, fig3.csv and fig4.csv.
    Figures {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScale {
    Linear,
    Log,
}

/// Integer sweep over the passive element count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub min: usize,
    pub max: usize,
    pub scale: SweepScale,
    /// Number of points, or `None` when `step` is used.
    pub count: Option<usize>,
    pub step: Option<usize>,
}

impl SweepSpec {
    pub fn log(min: usize, max: usize, count: usize) -> Self {
        Self {
            min,
            max,
            scale: SweepScale::Log,
            count: Some(count),
            step: None,
        }
    }

    /// Distinct integer points in increasing order.
    pub fn points(&self) -> Vec<usize> {
        let (lo, hi) = (self.min as f64, self.max as f64);
        let mut pts: Vec<usize> = match (self.step, self.count) {
            (Some(step), _) => (self.min..=self.max).step_by(step).collect(),
            (None, Some(n)) => (0..n)
                .map(|i| {
                    let t = i as f64 / (n - 1) as f64;
                    let v = match self.scale {
                        SweepScale::Linear => lo + t * (hi - lo),
                        SweepScale::Log => lo * (hi / lo).powf(t),
                    };
                    v.round() as usize
                })
                .collect(),
            (None, None) => vec![self.min, self.max],
        };
        pts.dedup();
        pts
    }
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [min, max, kind, n] = parts[..] else {
            return Err(format!("expected min:max:log|lin|step:n, got `{s}`"));
        };
        let num = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| format!("`{v}` is not a positive integer"))
        };
        let (min, max, n) = (num(min)?, num(max)?, num(n)?);
        if min == 0 || min > max {
            return Err(format!("need 1 <= min <= max, got {min}..{max}"));
        }
        let spec = match kind {
            "log" | "lin" | "linear" => {
                if n < 2 {
                    return Err("a sweep needs at least 2 points".into());
                }
                Self {
                    min,
                    max,
                    scale: if kind == "log" {
                        SweepScale::Log
                    } else {
                        SweepScale::Linear
                    },
                    count: Some(n),
                    step: None,
                }
            }
            "step" => {
                if n == 0 {
                    return Err("step must be positive".into());
                }
                Self {
                    min,
                    max,
                    scale: SweepScale::Linear,
                    count: None,
                    step: Some(n),
                }
            }
            other => return Err(format!("unknown sweep scale `{other}`")),
        };
        Ok(spec)
    }
}

/// Splits `"-10 dBm"` into `(-10, "dbm")`.
fn split_value(raw: &str) -> Result<(f64, String), CliError> {
    let raw = raw.trim();
    let idx = raw
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
        .unwrap_or(raw.len());
    let (num, unit) = raw.split_at(idx);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("`{raw}` is not a number")))?;
    if !value.is_finite() {
        return Err(CliError::Config(format!("`{raw}` is not finite")));
    }
    Ok((value, unit.trim().to_ascii_lowercase()))
}

fn power_value(key: &str, raw: &str) -> Result<f64, CliError> {
    let (v, unit) = split_value(raw)?;
    match unit.as_str() {
        "" | "w" => Ok(v),
        "mw" => Ok(v * 1e-3),
        "dbm" => Ok(dbm_to_watts(v)),
        "dbw" => Ok(dbm_to_watts(v + 30.0)),
        u => Err(CliError::Config(format!("{key}: unsupported power unit `{u}`"))),
    }
}

fn gain_value(key: &str, raw: &str) -> Result<f64, CliError> {
    let (v, unit) = split_value(raw)?;
    match unit.as_str() {
        "" => Ok(v),
        "db" => Ok(db_to_linear(v)),
        u => Err(CliError::Config(format!("{key}: unsupported gain unit `{u}`"))),
    }
}

fn length_value(key: &str, raw: &str) -> Result<f64, CliError> {
    let (v, unit) = split_value(raw)?;
    match unit.as_str() {
        "" | "m" => Ok(v),
        u => Err(CliError::Config(format!("{key}: unsupported length unit `{u}`"))),
    }
}

fn count_value(key: &str, raw: &str) -> Result<usize, CliError> {
    raw.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: `{}` is not a non-negative integer", raw.trim())))
}

/// Keys that change the wavelength are applied before everything else so that
/// explicit spacings are not overwritten.
fn key_priority(key: &str) -> u8 {
    match key {
        "carrier" | "wavelength" => 0,
        "np" | "na" => 1,
        _ => 2,
    }
}

/// Applies `key = value` settings on top of `base`.
pub fn apply_settings<'a>(
    base: SystemParams,
    settings: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<SystemParams, CliError> {
    let mut settings: Vec<(String, &str)> = settings
        .into_iter()
        .map(|(k, v)| (k.trim().to_ascii_lowercase(), v))
        .collect();
    settings.sort_by_key(|(k, _)| key_priority(k));

    let mut p = base;
    for (key, raw) in settings {
        match key.as_str() {
            "j" | "irs_count" => p.irs_count = count_value(&key, raw)?,
            "m" | "bs_antennas" => p.bs_antennas = count_value(&key, raw)?,
            "na" => p = p.with_active_elements(count_value(&key, raw)?),
            "na_x" => p.active_shape.nx = count_value(&key, raw)?,
            "na_z" => p.active_shape.nz = count_value(&key, raw)?,
            "np" => p = p.with_passive_elements(count_value(&key, raw)?),
            "np_x" => p.passive_shape.nx = count_value(&key, raw)?,
            "np_z" => p.passive_shape.nz = count_value(&key, raw)?,
            "d_b" => p.bs_distance = length_value(&key, raw)?,
            "d_u" => p.user_distance = length_value(&key, raw)?,
            "d_i" => p.irs_distance = length_value(&key, raw)?,
            "pt" | "p_t" => p.tx_power = power_value(&key, raw)?,
            "pa" | "p_a" => p.amp_power = power_value(&key, raw)?,
            "sigma2" | "noise" => p.noise_power = power_value(&key, raw)?,
            "alpha" => p.path_loss_exponent = gain_value(&key, raw)?,
            "beta0" => p.ref_path_gain = gain_value(&key, raw)?,
            "carrier" => {
                let (v, unit) = split_value(raw)?;
                let hz = match unit.as_str() {
                    "" | "hz" => v,
                    "khz" => v * 1e3,
                    "mhz" => v * 1e6,
                    "ghz" => v * 1e9,
                    u => return Err(CliError::Config(format!("carrier: unsupported unit `{u}`"))),
                };
                p = p.with_wavelength(SPEED_OF_LIGHT / hz);
            }
            "wavelength" => p = p.with_wavelength(length_value(&key, raw)?),
            "spacing" | "element_spacing" => p.element_spacing = length_value(&key, raw)?,
            "bs_spacing" | "antenna_spacing" => p.antenna_spacing = length_value(&key, raw)?,
            "far_field" | "far_field_threshold" => {
                p.far_field_threshold = Some(length_value(&key, raw)?)
            }
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
    }
    Ok(p)
}

/// Parses a config file body: one `key = value` per line, `#` comments.
pub fn parse_config(text: &str) -> Result<SystemParams, CliError> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
        pairs.push((k, v));
    }
    apply_settings(SystemParams::default(), pairs)
}

fn load_params(cli: &Cli) -> Result<SystemParams, CliError> {
    let base = match &cli.config {
        Some(path) => parse_config(&fs::read_to_string(path).map_err(io_err(path))?)?,
        None => SystemParams::default(),
    };
    let mut pairs = Vec::new();
    for s in &cli.set {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set `{s}`: expected key=value")))?;
        pairs.push((k, v));
    }
    apply_settings(base, pairs)
}

/// Scientific notation with 10 significant digits.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.9e}")
}

fn to_db(mode: Mode, v: f64) -> f64 {
    match mode {
        Mode::Wit => linear_to_db(v),
        Mode::Wpt => watts_to_dbm(v),
    }
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub np: usize,
    pub mode: Mode,
    pub l_star: usize,
    pub case: &'static str,
    pub objective_linear: f64,
    pub objective_db: f64,
    pub mid_objective_db: f64,
    pub all_pirs_objective_db: f64,
    pub brute_force_l: usize,
    pub agrees: bool,
}

pub const SWEEP_HEADER: &str = "np,mode,l_star,case,objective_linear,objective_db,mid_objective_db,all_pirs_objective_db,brute_force_l,agrees";

impl SweepRow {
    pub fn evaluate(base: &SystemParams, mode: Mode, np: usize) -> Result<Self, CliError> {
        let s = Scenario::new(base.clone().with_passive_elements(np))?;
        let sol = optimal_index(&s, mode);
        Ok(Self {
            np,
            mode,
            l_star: sol.l_star,
            case: sol.case.as_str(),
            objective_linear: sol.objective.value,
            objective_db: sol.objective.db(),
            mid_objective_db: scheme_middle(&s, mode).db(),
            all_pirs_objective_db: to_db(mode, scheme_all_pirs(&s, mode)),
            brute_force_l: sol.brute_force_l,
            agrees: sol.brute_force_agrees,
        })
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.np,
            self.mode,
            self.l_star,
            self.case,
            fmt_sig(self.objective_linear),
            fmt_sig(self.objective_db),
            fmt_sig(self.mid_objective_db),
            fmt_sig(self.all_pirs_objective_db),
            self.brute_force_l,
            self.agrees
        )
    }
}

/// Evaluates every point in parallel; rows come back in input order.
pub fn sweep(base: &SystemParams, mode: Mode, nps: &[usize]) -> Result<Vec<SweepRow>, CliError> {
    nps.par_iter()
        .map(|&np| SweepRow::evaluate(base, mode, np))
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// Default `N_p` axis of the figure CSVs.
pub fn figure_axis() -> Vec<usize> {
    SweepSpec::log(10, 1400, 50).points()
}

/// Contents of fig2.csv (optimal indices), fig3.csv (SNR, dB) and fig4.csv
/// (received power, dBm).
pub fn figure_tables(base: &SystemParams, nps: &[usize]) -> Result<[String; 3], CliError> {
    struct Point {
        np: usize,
        l_wit: usize,
        l_wpt: usize,
        snr: [f64; 4],
        power: [f64; 4],
    }
    let points: Vec<Point> = nps
        .par_iter()
        .map(|&np| -> Result<Point, CliError> {
            let s = Scenario::new(base.clone().with_passive_elements(np))?;
            let j = s.irs_count();
            let curves = |mode: Mode| -> Result<(usize, [f64; 4]), CliError> {
                let sol = optimal_index(&s, mode);
                Ok((
                    sol.l_star,
                    [
                        sol.objective.db(),
                        metrics::objective(&s, mode, j)?.db(),
                        scheme_middle(&s, mode).db(),
                        to_db(mode, scheme_all_pirs(&s, mode)),
                    ],
                ))
            };
            let (l_wit, snr) = curves(Mode::Wit)?;
            let (l_wpt, power) = curves(Mode::Wpt)?;
            Ok(Point {
                np,
                l_wit,
                l_wpt,
                snr,
                power,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut fig2 = String::from("np,l_star_wit,l_star_wpt\n");
    let mut fig3 = String::from("np,optimal_snr_db,last_irs_snr_db,middle_snr_db,all_pirs_snr_db\n");
    let mut fig4 =
        String::from("np,optimal_power_dbm,last_irs_power_dbm,middle_power_dbm,all_pirs_power_dbm\n");
    for pt in &points {
        let _ = writeln!(fig2, "{},{},{}", pt.np, pt.l_wit, pt.l_wpt);
        let row = |v: &[f64; 4]| v.iter().map(|x| fmt_sig(*x)).collect::<Vec<_>>().join(",");
        let _ = writeln!(fig3, "{},{}", pt.np, row(&pt.snr));
        let _ = writeln!(fig4, "{},{}", pt.np, row(&pt.power));
    }
    Ok([fig2, fig3, fig4])
}

pub fn write_figures(base: &SystemParams, dir: &Path) -> Result<(), CliError> {
    let tables = figure_tables(base, &figure_axis())?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (name, body) in ["fig2.csv", "fig3.csv", "fig4.csv"].iter().zip(tables) {
        let path = dir.join(name);
        fs::write(&path, body).map_err(io_err(&path))?;
    }
    Ok(())
}

fn eval_report(p: &SystemParams, mode: Mode, l: Option<usize>) -> Result<String, CliError> {
    let s = Scenario::new(p.clone())?;
    let sol = optimal_index(&s, mode);
    let unit = match mode {
        Mode::Wit => "dB",
        Mode::Wpt => "dBm",
    };
    let mut out = String::new();
    let _ = writeln!(out, "mode: {mode}");
    let _ = writeln!(out, "irs_count: {}", p.irs_count);
    let _ = writeln!(out, "np: {}", p.passive_elements);
    let _ = writeln!(out, "l* = {}", sol.l_star);
    let _ = writeln!(out, "case: {}", sol.case);
    if let Some(lt) = sol.l_tilde {
        let _ = writeln!(out, "l_tilde: {lt:.6}");
    }
    let _ = writeln!(
        out,
        "objective: {} ({:.4} {unit})",
        fmt_sig(sol.objective.value),
        sol.objective.db()
    );
    let _ = writeln!(
        out,
        "brute_force_l: {} ({})",
        sol.brute_force_l,
        if sol.brute_force_agrees {
            "agrees"
        } else {
            "DISAGREES"
        }
    );
    let mid = scheme_middle(&s, mode);
    let _ = writeln!(out, "middle (l = {}): {:.4} {unit}", mid.l, mid.db());
    let _ = writeln!(
        out,
        "all-pirs: {:.4} {unit}",
        to_db(mode, scheme_all_pirs(&s, mode))
    );
    if let Some(l) = l {
        let v = metrics::objective(&s, mode, l)?;
        let _ = writeln!(out, "at l = {l}: {} ({:.4} {unit})", fmt_sig(v.value), v.db());
    }
    Ok(out)
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let mut params = load_params(&cli)?;
    if let Command::Eval { np: Some(np), .. } = cli.command {
        params = params.with_passive_elements(np);
    }
    for d in params.validate() {
        if d.severity == Severity::Warning {
            let _ = writeln!(stderr, "{d}");
        }
    }
    let out = |body: &str, stdout: &mut dyn Write| {
        stdout
            .write_all(body.as_bytes())
            .map_err(io_err("<stdout>"))
    };

    match cli.command {
        Command::Eval { mode, l, .. } => {
            out(&eval_report(&params, mode, l)?, stdout)?;
            Ok(0)
        }
        Command::Sweep { mode, np, out: path } => {
            let body = sweep_csv(&sweep(&params, mode, &np.points())?);
            match path {
                Some(path) => fs::write(&path, body).map_err(io_err(&path))?,
                None => out(&body, stdout)?,
            }
            Ok(0)
        }
        Command::Validate => {
            Scenario::new(params.clone())?;
            let grid = proposition_grid(&params);
            let report = check_propositions(&grid);
            let wit = report.mismatches.iter().filter(|m| m.mode == Mode::Wit).count();
            let wpt = report.mismatches.len() - wit;
            let mut body = format!(
                "checked {} configurations (case I: {}, II: {}, III: {})\n\
                 wit mismatches: {wit}\nwpt mismatches: {wpt}\n",
                report.checked, report.case_counts[0], report.case_counts[1], report.case_counts[2]
            );
            for m in &report.mismatches {
                let _ = writeln!(body, "  {m:?}");
            }
            out(&body, stdout)?;
            Ok(if report.mismatches.is_empty() { 0 } else { 1 })
        }
        Command::Figures { out_dir } => {
            write_figures(&params, &out_dir)?;
            let _ = writeln!(stdout, "wrote fig2.csv, fig3.csv, fig4.csv to {}", out_dir.display());
            Ok(0)
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::UpaShape;

    #[test]
    fn sweep_spec_parsing() {
        let s: SweepSpec = "10:1000:log:50".parse().unwrap();
        assert_eq!(s, SweepSpec::log(10, 1000, 50));
        let pts = s.points();
        assert_eq!(pts.first(), Some(&10));
        assert_eq!(pts.last(), Some(&1000));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));

        let lin: SweepSpec = "1:9:lin:5".parse().unwrap();
        assert_eq!(lin.points(), vec![1, 3, 5, 7, 9]);
        let step: SweepSpec = "10:35:step:10".parse().unwrap();
        assert_eq!(step.points(), vec![10, 20, 30]);

        for bad in ["10:5:log:3", "0:5:log:3", "1:5:log:1", "1:5:cubic:3", "1:5", "a:5:log:3", "1:5:step:0"] {
            assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn figure_axis_has_fifty_points() {
        let axis = figure_axis();
        assert_eq!(axis.len(), 50);
        assert_eq!(axis[0], 10);
        assert_eq!(axis[49], 1400);
    }

    #[test]
    fn config_units() {
        let p = parse_config(
            "# scenario\n\
             j = 5\n\
             pt = 20 dBm\n\
             pa = 2 mW\n\
             sigma2 = -90 dBm  # receiver\n\
             beta0 = -40 dB\n\
             d_i = 12 m\n\
             np = 64\n\
             carrier = 28 GHz\n",
        )
        .unwrap();
        assert_eq!(p.irs_count, 5);
        assert!((p.tx_power - 0.1).abs() < 1e-15);
        assert!((p.amp_power - 2e-3).abs() < 1e-18);
        assert!((p.noise_power - 1e-12).abs() < 1e-24);
        assert!((p.ref_path_gain - 1e-4).abs() < 1e-18);
        assert_eq!(p.irs_distance, 12.0);
        assert_eq!(p.passive_elements, 64);
        assert_eq!(p.passive_shape, UpaShape::new(8, 8));
        assert!((p.wavelength - SPEED_OF_LIGHT / 28e9).abs() < 1e-15);
        assert_eq!(p.element_spacing, p.wavelength / 2.0);
    }

    #[test]
    fn explicit_spacing_survives_carrier() {
        let p = parse_config("spacing = 0.01\ncarrier = 3.5 GHz\n").unwrap();
        assert_eq!(p.element_spacing, 0.01);
    }

    #[test]
    fn config_errors() {
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("pt 30").is_err());
        assert!(parse_config("pt = 30 furlongs").is_err());
        assert!(parse_config("j = -1").is_err());
        assert!(parse_config("pt = abc").is_err());
    }

    #[test]
    fn exponent_is_not_a_unit() {
        let p = parse_config("pt = 1e-3 W").unwrap();
        assert_eq!(p.tx_power, 1e-3);
    }

    #[test]
    fn sweep_row_format() {
        let row = SweepRow::evaluate(&SystemParams::default(), Mode::Wit, 100).unwrap();
        let line = row.csv();
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), SWEEP_HEADER.split(',').count());
        assert_eq!(cols[0], "100");
        assert_eq!(cols[1], "wit");
        assert_eq!(cols[2], "5");
        assert_eq!(cols[3], "I");
        assert_eq!(cols[9], "true");
        let v: f64 = cols[4].parse().unwrap();
        assert!((v - row.objective_linear).abs() <= 1e-9 * row.objective_linear);
    }

    #[test]
    fn eval_prints_placement() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(["irs-link", "eval", "--mode", "wit", "--np", "100"], &mut out, &mut err);
        assert_eq!(code, 0);
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("l* = 5"));
        assert!(text.contains("case: I"));
        assert!(text.contains(" dB)"));
    }

    #[test]
    fn bad_invocations_exit_two() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["irs-link", "eval", "--mode", "swipt"], &mut out, &mut err), 2);
        assert_eq!(run(["irs-link", "--set", "j=0", "eval"], &mut out, &mut err), 2);
        assert_eq!(run(["irs-link", "--set", "nope", "eval"], &mut out, &mut err), 2);
        assert_eq!(
            run(["irs-link", "--config", "/nonexistent/irs.conf", "eval"], &mut out, &mut err),
            3
        );
    }
}
