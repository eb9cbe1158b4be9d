//! Parameter sweeps, figure presets, Monte Carlo validation and CSV output.

use std::cmp::Ordering;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{
    averaged_state, evolve_deterministic, mc_averaged_states, werner_state, WernerParams, MIN_TRAJECTORIES,
};
use crate::measures::{concurrence_xstate, MeasureRecord, MeasurementPair};
use crate::noise::{beta_unchecked, dephasing_factor, AveragingMode, NoiseConfig, NoiseParams};

pub const CSV_HEADER: &str = "config,mode,g,p,lambda,tau,L,R,U,C,EW";
pub const DEFAULT_TAU_MAX: f64 = 20.0;
pub const DEFAULT_TAU_POINTS: usize = 400;
/// Largest |z| accepted by [`McValidationReport::passed`].
pub const MC_Z_THRESHOLD: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Noiseless witness oscillations.
    Fig2,
    /// Common noise, g = 0.4, p = 1.
    Fig3,
    /// Common noise, several g, p = 1.
    Fig4,
    /// Common noise, several p, g = 0.1.
    Fig5,
    /// Independent noise, g = 0.4, p = 1.
    Fig6,
    /// Independent noise, several g, p = 1.
    Fig7,
    /// Both configurations over the full purity range, g = 0.1.
    Fig8,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
    ];
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = Preset::ALL.iter().position(|p| p == self).unwrap() + 2;
        write!(f, "fig{n}")
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .iter()
            .copied()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::usage(format!("preset: expected one of fig2..fig8, got {s:?}")))
    }
}

/// What drives the state at each grid point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Dynamics {
    /// Ensemble average over the noise (closed form, or Monte Carlo when `mc` is set).
    Averaged,
    /// Constant field `χ_a = χ_b = chi`, no averaging.
    Noiseless { chi: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    pub n_traj: usize,
    pub dt: f64,
    pub seed: u64,
    /// Times checked by [`run_mc_validation`].
    #[serde(default = "McSettings::default_taus")]
    pub taus: Vec<f64>,
}

impl McSettings {
    fn default_taus() -> Vec<f64> {
        vec![1.0, 2.0, 5.0]
    }
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            n_traj: 100_000,
            dt: 0.01,
            seed: 0,
            taus: Self::default_taus(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub preset: Option<Preset>,
    #[serde(rename = "config")]
    pub configs: Vec<NoiseConfig>,
    pub mode: AveragingMode,
    pub g_values: Vec<f64>,
    pub p_values: Vec<f64>,
    #[serde(rename = "lambda")]
    pub lambdas: Vec<f64>,
    pub kappa: f64,
    pub tau_max: f64,
    pub tau_points: usize,
    pub dynamics: Dynamics,
    pub mc: Option<McSettings>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            preset: None,
            configs: vec![NoiseConfig::Cqn],
            mode: AveragingMode::PaperLiteral,
            g_values: vec![0.4],
            p_values: vec![1.0],
            lambdas: vec![1.0],
            kappa: 0.0,
            tau_max: DEFAULT_TAU_MAX,
            tau_points: DEFAULT_TAU_POINTS,
            dynamics: Dynamics::Averaged,
            mc: None,
        }
    }
}

impl SweepConfig {
    /// Parameters of a figure preset on the default τ grid.
    pub fn preset(preset: Preset) -> Self {
        let g_scan = vec![0.01, 0.1, 0.4, 1.0];
        let base = Self {
            preset: Some(preset),
            ..Self::default()
        };
        match preset {
            Preset::Fig2 => Self {
                g_values: Vec::new(),
                p_values: vec![0.4, 0.6, 0.8, 1.0],
                lambdas: vec![0.25, 0.5, 1.0, 2.0],
                dynamics: Dynamics::Noiseless { chi: 1.0 },
                ..base
            },
            Preset::Fig3 => Self {
                g_values: vec![0.4],
                ..base
            },
            Preset::Fig4 => Self {
                g_values: g_scan,
                ..base
            },
            Preset::Fig5 => Self {
                g_values: vec![0.1],
                p_values: vec![0.1, 0.3, 0.5, 0.7, 0.9, 0.99],
                ..base
            },
            Preset::Fig6 => Self {
                configs: vec![NoiseConfig::Iqn],
                g_values: vec![0.4],
                ..base
            },
            Preset::Fig7 => Self {
                configs: vec![NoiseConfig::Iqn],
                g_values: g_scan,
                ..base
            },
            Preset::Fig8 => Self {
                configs: vec![NoiseConfig::Cqn, NoiseConfig::Iqn],
                g_values: vec![0.1],
                p_values: (0..=20).map(|k| k as f64 / 20.0).collect(),
                ..base
            },
        }
    }

    /// Parses a JSON configuration. Missing fields come from the named
    /// `preset` if there is one, otherwise from [`SweepConfig::default`].
    /// `config` and `lambda` may be given as a single value or a list.
    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |e: serde_json::Error| Error::usage(format!("config file: {e}"));
        let serde_json::Value::Object(mut fields) = serde_json::from_str(text).map_err(bad)? else {
            return Err(Error::usage("config file: expected a JSON object"));
        };
        for key in ["config", "lambda", "g_values", "p_values"] {
            if let Some(v) = fields.get_mut(key) {
                if !v.is_array() {
                    *v = serde_json::Value::Array(vec![v.take()]);
                }
            }
        }
        let base = match fields.get("preset") {
            Some(serde_json::Value::Null) | None => Self::default(),
            Some(v) => Self::preset(serde_json::from_value(v.clone()).map_err(bad)?),
        };
        let serde_json::Value::Object(mut merged) = serde_json::to_value(base).map_err(bad)? else {
            unreachable!("SweepConfig serializes to an object");
        };
        merged.extend(fields);
        let cfg: Self = serde_json::from_value(serde_json::Value::Object(merged)).map_err(bad)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau_points < 2 {
            return Err(Error::usage(format!(
                "tau_points must be at least 2, got {}",
                self.tau_points
            )));
        }
        if !(self.tau_max > 0.0 && self.tau_max.is_finite()) {
            return Err(Error::usage(format!(
                "tau_max must be positive and finite, got {}",
                self.tau_max
            )));
        }
        if let Some(g) = self.g_values.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
            return Err(Error::usage(format!("g_values must all be positive, got {g}")));
        }
        if let Some(p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::usage(format!("p_values must lie in [0, 1], got {p}")));
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::usage(format!("lambda values must be positive, got {l}")));
        }
        if !self.kappa.is_finite() {
            return Err(Error::usage("kappa must be finite"));
        }
        if self.configs.is_empty() {
            return Err(Error::usage("config must name at least one of CQN, IQN"));
        }
        if let Dynamics::Noiseless { chi } = self.dynamics {
            if !chi.is_finite() {
                return Err(Error::usage("chi must be finite"));
            }
        }
        if let Some(mc) = &self.mc {
            if mc.n_traj < MIN_TRAJECTORIES {
                return Err(Error::usage(format!(
                    "n_traj must be at least {MIN_TRAJECTORIES}, got {}",
                    mc.n_traj
                )));
            }
            if !(mc.dt > 0.0 && mc.dt.is_finite()) {
                return Err(Error::usage(format!("dt must be positive, got {}", mc.dt)));
            }
            if let Some(t) = mc.taus.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
                return Err(Error::usage(format!("validation times must be nonnegative, got {t}")));
            }
        }
        Ok(())
    }

    /// Uniform grid `τ_k = tau_max · k / (tau_points - 1)`.
    pub fn tau_grid(&self) -> Vec<f64> {
        let last = (self.tau_points - 1) as f64;
        (0..self.tau_points).map(|k| self.tau_max * k as f64 / last).collect()
    }
}

/// How a row's state was produced, as written in the CSV `mode` column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowMode {
    Averaged(AveragingMode),
    Noiseless,
}

impl fmt::Display for RowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowMode::Averaged(mode) => mode.fmt(f),
            RowMode::Noiseless => f.write_str("Noiseless"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub config: NoiseConfig,
    pub mode: RowMode,
    /// Zero for noiseless rows.
    pub g: f64,
    pub p: f64,
    pub lambda: f64,
    pub record: MeasureRecord,
}

impl SweepRow {
    fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.g
            .total_cmp(&other.g)
            .then(self.p.total_cmp(&other.p))
            .then(self.record.tau.total_cmp(&other.record.tau))
            .then(self.config.cmp(&other.config))
            .then(self.mode.cmp(&other.mode))
            .then(self.lambda.total_cmp(&other.lambda))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepMetadata {
    pub version: &'static str,
    pub seed: Option<u64>,
    pub config: SweepConfig,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    /// Sorted by `(g, p, τ)`, ties broken by config, mode and λ.
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let taus = cfg.tau_grid();
    let mp = MeasurementPair::default();
    let mut rows = match (cfg.dynamics, &cfg.mc) {
        (Dynamics::Noiseless { chi }, _) => noiseless_rows(cfg, chi, &taus, &mp)?,
        (Dynamics::Averaged, None) => analytic_rows(cfg, &taus, &mp)?,
        (Dynamics::Averaged, Some(mc)) => monte_carlo_rows(cfg, mc, &taus, &mp)?,
    };
    rows.sort_by(SweepRow::sort_key_cmp);
    if let Some(bad) = rows.iter().find(|r| !row_is_finite(r)) {
        return Err(Error::domain(format!("non-finite measure in sweep row {bad:?}")));
    }
    Ok(SweepResult {
        rows,
        metadata: SweepMetadata {
            version: env!("CARGO_PKG_VERSION"),
            seed: cfg.mc.as_ref().map(|m| m.seed),
            config: cfg.clone(),
        },
    })
}

fn row_is_finite(r: &SweepRow) -> bool {
    let m = &r.record;
    [m.tau, m.uncertainty, m.bound, m.tightness, m.concurrence, m.witness]
        .iter()
        .all(|v| v.is_finite())
}

#[derive(Clone, Copy)]
struct GridPoint {
    config: NoiseConfig,
    g: f64,
    p: f64,
    lambda: f64,
}

fn noise_grid(cfg: &SweepConfig) -> Vec<GridPoint> {
    let mut points = Vec::new();
    for &config in &cfg.configs {
        for &g in &cfg.g_values {
            for &p in &cfg.p_values {
                for &lambda in &cfg.lambdas {
                    points.push(GridPoint { config, g, p, lambda });
                }
            }
        }
    }
    points
}

fn analytic_rows(cfg: &SweepConfig, taus: &[f64], mp: &MeasurementPair) -> Result<Vec<SweepRow>> {
    let cells: Vec<(GridPoint, f64)> = noise_grid(cfg)
        .into_iter()
        .flat_map(|pt| taus.iter().map(move |&t| (pt, t)))
        .collect();
    cells
        .par_iter()
        .map(|(pt, tau)| {
            let wp = WernerParams::new(pt.p, cfg.kappa)?;
            let np = NoiseParams::new(pt.g, pt.lambda, pt.config, cfg.mode)?;
            let state = averaged_state(&wp, &np, *tau)?;
            let gamma = dephasing_factor(&np, beta_unchecked(pt.g, *tau))?;
            let rho0 = werner_state(pt.p)?;
            let record =
                MeasureRecord::with_concurrence(*tau, &state.rho, &rho0, mp, concurrence_xstate(pt.p, gamma)?)?;
            Ok(SweepRow {
                config: pt.config,
                mode: RowMode::Averaged(cfg.mode),
                g: pt.g,
                p: pt.p,
                lambda: pt.lambda,
                record,
            })
        })
        .collect()
}

fn monte_carlo_rows(cfg: &SweepConfig, mc: &McSettings, taus: &[f64], mp: &MeasurementPair) -> Result<Vec<SweepRow>> {
    let grid = noise_grid(cfg);
    let per_point: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .map(|pt| {
            let wp = WernerParams::new(pt.p, cfg.kappa)?;
            let np = NoiseParams::new(pt.g, pt.lambda, pt.config, cfg.mode)?;
            let rho0 = werner_state(pt.p)?;
            mc_averaged_states(&wp, &np, taus, mc.n_traj, mc.dt, mc.seed)?
                .iter()
                .map(|est| {
                    let record = MeasureRecord::evaluate(est.state.tau, &est.state.rho, &rho0, mp)?;
                    Ok(SweepRow {
                        config: pt.config,
                        mode: RowMode::Averaged(cfg.mode),
                        g: pt.g,
                        p: pt.p,
                        lambda: pt.lambda,
                        record,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

fn noiseless_rows(cfg: &SweepConfig, chi: f64, taus: &[f64], mp: &MeasurementPair) -> Result<Vec<SweepRow>> {
    let mut cells = Vec::new();
    for &p in &cfg.p_values {
        for &lambda in &cfg.lambdas {
            for &t in taus {
                cells.push((p, lambda, t));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(p, lambda, t)| {
            let state = evolve_deterministic(p, t, cfg.kappa, lambda, chi, chi)?;
            let rho0 = werner_state(p)?;
            Ok(SweepRow {
                config: NoiseConfig::Cqn,
                mode: RowMode::Noiseless,
                g: 0.0,
                p,
                lambda,
                record: MeasureRecord::evaluate(t, &state.rho, &rho0, mp)?,
            })
        })
        .collect()
}

/// Decimal rendering with 12 significant digits, no exponent.
pub fn format_sig12(x: f64) -> String {
    const SIG: usize = 12;
    if x == 0.0 {
        return format!("0.{}", "0".repeat(SIG - 1));
    }
    let sci = format!("{:.*e}", SIG - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else if exp as usize >= SIG - 1 {
        format!("{}{}", digits, "0".repeat(exp as usize + 1 - SIG))
    } else {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    };
    format!("{sign}{body}")
}

pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in &result.rows {
        let r = &row.record;
        let floats = [
            row.g,
            row.p,
            row.lambda,
            r.tau,
            r.uncertainty,
            r.bound,
            r.tightness,
            r.concurrence,
            r.witness,
        ];
        let cols: Vec<String> = floats.iter().map(|&v| format_sig12(v)).collect();
        writeln!(out, "{},{},{}", row.config, row.mode, cols.join(","))?;
    }
    out.flush()
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_csv(result, BufWriter::new(file)).map_err(io_err)
}

/// Writes the configuration echo, version and seed as pretty JSON.
pub fn emit_metadata(result: &SweepResult, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = BufWriter::new(File::create(path).map_err(io_err)?);
    serde_json::to_writer_pretty(&mut file, &result.metadata).map_err(|e| io_err(std::io::Error::other(e)))?;
    writeln!(file).and_then(|_| file.flush()).map_err(io_err)
}

/// Comparison of one Monte Carlo coherence estimate with the closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McCheck {
    pub config: NoiseConfig,
    pub g: f64,
    pub lambda: f64,
    pub tau: f64,
    /// `Γ = e^{-kβ(τ)}`.
    pub expected: f64,
    /// Real part of the normalized coherence `ρ₀₃ / (p/2)`.
    pub estimate: f64,
    /// Modulus of the normalized coherence.
    pub magnitude: f64,
    pub std_error: f64,
    pub z: f64,
}

#[derive(Clone, Debug)]
pub struct McValidationReport {
    pub mode: AveragingMode,
    pub n_traj: usize,
    pub dt: f64,
    pub seed: u64,
    pub checks: Vec<McCheck>,
}

impl McValidationReport {
    pub fn max_abs_z(&self) -> f64 {
        self.checks.iter().map(|c| c.z.abs()).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.z.abs() <= MC_Z_THRESHOLD)
    }
}

impl fmt::Display for McValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# mode={} n_traj={} dt={} seed={}",
            self.mode, self.n_traj, self.dt, self.seed
        )?;
        writeln!(f, "config,g,lambda,tau,expected,estimate,magnitude,std_error,z")?;
        for c in &self.checks {
            writeln!(
                f,
                "{},{},{},{},{:.9},{:.9},{:.9},{:.3e},{:+.3}",
                c.config, c.g, c.lambda, c.tau, c.expected, c.estimate, c.magnitude, c.std_error, c.z
            )?;
        }
        write!(
            f,
            "# max |z| = {:.3} ({})",
            self.max_abs_z(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Compares Monte Carlo coherences against the closed-form dephasing factor
/// for every `(config, g, λ, τ)` in the configuration.
pub fn run_mc_validation(cfg: &SweepConfig) -> Result<McValidationReport> {
    cfg.validate()?;
    let mc = cfg
        .mc
        .as_ref()
        .ok_or_else(|| Error::usage("Monte Carlo validation needs n_traj, dt and seed"))?;
    let wp = WernerParams::new(1.0, cfg.kappa)?;
    let mut combos = Vec::new();
    for &config in &cfg.configs {
        for &g in &cfg.g_values {
            for &lambda in &cfg.lambdas {
                combos.push(NoiseParams::new(g, lambda, config, cfg.mode)?);
            }
        }
    }
    let mut checks = Vec::new();
    for np in &combos {
        let estimates = mc_averaged_states(&wp, np, &mc.taus, mc.n_traj, mc.dt, mc.seed)?;
        for est in &estimates {
            let expected = dephasing_factor(np, beta_unchecked(np.g, est.state.tau))?;
            // ρ₀₃ = (p/2)·Γ with p = 1
            let estimate = 2.0 * est.corner().re;
            let std_error = 2.0 * est.corner_std_error().re;
            let diff = estimate - expected;
            let z = if std_error > 0.0 {
                diff / std_error
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(diff)
            };
            checks.push(McCheck {
                config: np.config,
                g: np.g,
                lambda: np.lambda,
                tau: est.state.tau,
                expected,
                estimate,
                magnitude: 2.0 * est.corner().norm(),
                std_error,
                z,
            });
        }
    }
    Ok(McValidationReport {
        mode: cfg.mode,
        n_traj: mc.n_traj,
        dt: mc.dt,
        seed: mc.seed,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.0), "0.00000000000");
        assert_eq!(format_sig12(-0.0), "0.00000000000");
        assert_eq!(format_sig12(1.0), "1.00000000000");
        assert_eq!(format_sig12(0.4), "0.400000000000");
        assert_eq!(format_sig12(20.0), "20.0000000000");
        assert_eq!(format_sig12(-0.25), "-0.250000000000");
        assert_eq!(format_sig12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_sig12(1.234e-5), "0.0000123400000000");
        assert_eq!(format_sig12(123456789012345.0), "123456789012000");
        assert_eq!(format_sig12(999999999999.7), "1000000000000");
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.to_string().parse::<Preset>().unwrap(), p);
        }
        assert_eq!(Preset::Fig2.to_string(), "fig2");
        assert!("fig9".parse::<Preset>().is_err());
    }

    #[test]
    fn presets_follow_figure_parameters() {
        let fig3 = SweepConfig::preset(Preset::Fig3);
        assert_eq!(
            (
                fig3.configs.as_slice(),
                fig3.g_values.as_slice(),
                fig3.p_values.as_slice()
            ),
            (&[NoiseConfig::Cqn][..], &[0.4][..], &[1.0][..])
        );
        let fig6 = SweepConfig::preset(Preset::Fig6);
        assert_eq!(
            (
                fig6.configs.as_slice(),
                fig6.g_values.as_slice(),
                fig6.p_values.as_slice()
            ),
            (&[NoiseConfig::Iqn][..], &[0.4][..], &[1.0][..])
        );
        for preset in [Preset::Fig4, Preset::Fig7] {
            let cfg = SweepConfig::preset(preset);
            assert_eq!(cfg.p_values, vec![1.0]);
            assert!(cfg.g_values.len() > 1);
        }
        for preset in [Preset::Fig5, Preset::Fig8] {
            let cfg = SweepConfig::preset(preset);
            assert_eq!(cfg.g_values, vec![0.1]);
            assert!(cfg.p_values.len() > 1);
        }
        let fig8 = SweepConfig::preset(Preset::Fig8);
        assert_eq!(fig8.p_values.first(), Some(&0.0));
        assert_eq!(fig8.p_values.last(), Some(&1.0));
        assert_eq!(
            SweepConfig::preset(Preset::Fig2).dynamics,
            Dynamics::Noiseless { chi: 1.0 }
        );
        for preset in Preset::ALL {
            let cfg = SweepConfig::preset(preset);
            assert_eq!((cfg.tau_max, cfg.tau_points), (20.0, 400));
            cfg.validate().unwrap();
        }
    }

    #[test]
    fn validation_names_offending_field() {
        let check = |cfg: SweepConfig, field: &str| {
            let msg = cfg.validate().unwrap_err().to_string();
            assert!(msg.contains(field), "{msg} should mention {field}");
        };
        check(
            SweepConfig {
                tau_points: 1,
                ..Default::default()
            },
            "tau_points",
        );
        check(
            SweepConfig {
                g_values: vec![0.1, -1.0],
                ..Default::default()
            },
            "g_values",
        );
        check(
            SweepConfig {
                p_values: vec![1.2],
                ..Default::default()
            },
            "p_values",
        );
        check(
            SweepConfig {
                lambdas: vec![0.0],
                ..Default::default()
            },
            "lambda",
        );
        check(
            SweepConfig {
                tau_max: 0.0,
                ..Default::default()
            },
            "tau_max",
        );
        check(
            SweepConfig {
                mc: Some(McSettings {
                    n_traj: 10,
                    ..Default::default()
                }),
                ..Default::default()
            },
            "n_traj",
        );
    }

    #[test]
    fn json_layers_over_preset() {
        let cfg = SweepConfig::from_json(r#"{"preset": "fig5", "lambda": 0.5, "config": "iqn"}"#).unwrap();
        assert_eq!(cfg.lambdas, vec![0.5]);
        assert_eq!(cfg.configs, vec![NoiseConfig::Iqn]);
        assert_eq!(cfg.p_values, SweepConfig::preset(Preset::Fig5).p_values);
        let full = serde_json::to_string(&SweepConfig::preset(Preset::Fig8)).unwrap();
        assert_eq!(
            SweepConfig::from_json(&full).unwrap(),
            SweepConfig::preset(Preset::Fig8)
        );
        let mc = SweepConfig::from_json(r#"{"mc": {"n_traj": 200, "dt": 0.05, "seed": 3}}"#).unwrap();
        assert_eq!(mc.mc.unwrap().taus, vec![1.0, 2.0, 5.0]);
        assert!(matches!(
            SweepConfig::from_json(r#"{"bogus": 1}"#),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            SweepConfig::from_json(r#"{"g_values": [-1]}"#),
            Err(Error::Usage(_))
        ));
        assert!(matches!(SweepConfig::from_json("[1]"), Err(Error::Usage(_))));
    }

    #[test]
    fn tau_grid_endpoints() {
        let grid = SweepConfig::default().tau_grid();
        assert_eq!(grid.len(), 400);
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[399], 20.0);
    }

    #[test]
    fn empty_grid_gives_header_only() {
        let cfg = SweepConfig {
            g_values: Vec::new(),
            ..Default::default()
        };
        let result = run_sweep(&cfg).unwrap();
        assert!(result.rows.is_empty());
        let mut buf = Vec::new();
        write_csv(&result, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn mc_validation_requires_settings() {
        assert!(matches!(
            run_mc_validation(&SweepConfig::default()),
            Err(Error::Usage(_))
        ));
    }
}
