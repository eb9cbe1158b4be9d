//! Ornstein–Uhlenbeck dephasing noise.
//!
//! The classical field is a stationary zero-mean Gaussian process with
//! autocorrelation `A(Δt) = (g/2) e^{-g|Δt|}`. Its accumulated exposure is the
//! β-function `β(τ) = ∫₀^τ∫₀^τ A = (gτ + e^{-gτ} - 1)/g`, which is also the
//! variance of `∫₀^τ χ(s) ds`.
//!
//! Random streams use ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`; trajectory `i` reads stream number `i`, so any
//! trajectory can be regenerated independently of the others.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the qubits couple to the noise sources.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NoiseConfig {
    /// Common qubit-noise: both qubits see one realization.
    #[serde(rename = "CQN", alias = "cqn")]
    Cqn,
    /// Independent qubit-noise: each qubit has its own source.
    #[serde(rename = "IQN", alias = "iqn")]
    Iqn,
}

impl fmt::Display for NoiseConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseConfig::Cqn => "CQN",
            NoiseConfig::Iqn => "IQN",
        })
    }
}

impl FromStr for NoiseConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cqn" => Ok(NoiseConfig::Cqn),
            "iqn" => Ok(NoiseConfig::Iqn),
            _ => Err(Error::usage(format!("config: expected CQN or IQN, got {s:?}"))),
        }
    }
}

/// Which dephasing exponent the ensemble average uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AveragingMode {
    /// `e^{-2β}` (CQN) and `e^{-4β}` (IQN), independent of the coupling.
    PaperLiteral,
    /// Gaussian phase average: `e^{-8λ²β}` (CQN) and `e^{-4λ²β}` (IQN).
    GaussianExact,
}

impl fmt::Display for AveragingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AveragingMode::PaperLiteral => "PaperLiteral",
            AveragingMode::GaussianExact => "GaussianExact",
        })
    }
}

impl FromStr for AveragingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "paperliteral" | "literal" => Ok(AveragingMode::PaperLiteral),
            "gaussianexact" | "exact" => Ok(AveragingMode::GaussianExact),
            _ => Err(Error::usage(format!(
                "mode: expected PaperLiteral or GaussianExact, got {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Memory parameter (inverse time).
    pub g: f64,
    /// Qubit–field coupling strength.
    pub lambda: f64,
    pub config: NoiseConfig,
    pub mode: AveragingMode,
}

impl NoiseParams {
    pub fn new(g: f64, lambda: f64, config: NoiseConfig, mode: AveragingMode) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::domain(format!("g must be positive and finite, got {g}")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
        Ok(Self {
            g,
            lambda,
            config,
            mode,
        })
    }

    /// The coupling whose Gaussian phase average reproduces this mode's exponent.
    ///
    /// The fixed exponents of [`AveragingMode::PaperLiteral`] equal the Gaussian
    /// ones at λ = 1/2 (CQN) and λ = 1 (IQN), which lets the trajectory sampler
    /// check either mode.
    pub fn effective_coupling(&self) -> f64 {
        match (self.mode, self.config) {
            (AveragingMode::GaussianExact, _) => self.lambda,
            (AveragingMode::PaperLiteral, NoiseConfig::Cqn) => 0.5,
            (AveragingMode::PaperLiteral, NoiseConfig::Iqn) => 1.0,
        }
    }

    /// Coefficient `k` in `Γ = e^{-kβ}`.
    pub fn decay_rate(&self) -> f64 {
        let lambda = self.effective_coupling();
        match self.config {
            NoiseConfig::Cqn => 8.0 * lambda * lambda,
            NoiseConfig::Iqn => 4.0 * lambda * lambda,
        }
    }
}

/// `A(g, Δt) = (g/2) e^{-g|Δt|}`.
pub fn ou_autocorrelation(g: f64, dt_abs: f64) -> Result<f64> {
    check_g(g)?;
    if dt_abs.is_nan() || dt_abs < 0.0 {
        return Err(Error::domain(format!("time lag must be nonnegative, got {dt_abs}")));
    }
    Ok(0.5 * g * (-g * dt_abs).exp())
}

/// `β(τ) = (gτ + e^{-gτ} - 1)/g`.
pub fn ou_beta(g: f64, tau: f64) -> Result<f64> {
    check_g(g)?;
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::domain(format!("tau must be nonnegative, got {tau}")));
    }
    Ok(beta_unchecked(g, tau))
}

pub(crate) fn beta_unchecked(g: f64, tau: f64) -> f64 {
    let x = g * tau;
    if x < 1e-3 {
        // x + e^{-x} - 1 = x²/2 - x³/6 + x⁴/24 - x⁵/120 + x⁶/720 - ...
        let poly = 0.5 + x * (-1.0 / 6.0 + x * (1.0 / 24.0 + x * (-1.0 / 120.0 + x / 720.0)));
        tau * x * poly
    } else {
        (x + (-x).exp_m1()) / g
    }
}

/// Multiplicative decay Γ of the coherences after exposure β.
pub fn dephasing_factor(np: &NoiseParams, beta: f64) -> Result<f64> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::domain(format!("beta must be nonnegative, got {beta}")));
    }
    Ok((-np.decay_rate() * beta).exp())
}

fn check_g(g: f64) -> Result<()> {
    if g > 0.0 && g.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("g must be positive and finite, got {g}")))
    }
}

/// A sampled path of the stochastic field and its running integral.
#[derive(Clone, Debug, PartialEq)]
pub struct OuTrajectory {
    pub dt: f64,
    /// `χ(k·dt)` for `k = 0..=n_steps`.
    pub values: Vec<f64>,
    /// Trapezoidal `∫₀^{k·dt} χ`, with `integral[0] = 0`.
    pub integral: Vec<f64>,
}

impl OuTrajectory {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Random stream for trajectory `index` under `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Stationary OU path from stream 0 of `seed`.
pub fn sample_ou_trajectory(g: f64, dt: f64, n_steps: usize, seed: u64) -> Result<OuTrajectory> {
    sample_ou_path(g, dt, n_steps, &mut trajectory_rng(seed, 0))
}

/// Exact discretization: `χ₀ ~ N(0, g/2)`,
/// `χ_{k+1} = χ_k e^{-g dt} + N(0, (g/2)(1 - e^{-2g dt}))`.
pub fn sample_ou_path<R: Rng + ?Sized>(g: f64, dt: f64, n_steps: usize, rng: &mut R) -> Result<OuTrajectory> {
    check_g(g).map_err(|e| Error::usage(e.to_string()))?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::usage(format!("dt must be positive, got {dt}")));
    }
    if n_steps == 0 {
        return Err(Error::usage("n_steps must be at least 1"));
    }
    let step = ExactStep::new(g, dt);
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut integral = Vec::with_capacity(n_steps + 1);
    let mut chi = stationary_draw(g, rng);
    let mut acc = 0.0;
    values.push(chi);
    integral.push(acc);
    for _ in 0..n_steps {
        let next = step.advance(chi, rng);
        acc += 0.5 * dt * (chi + next);
        chi = next;
        values.push(chi);
        integral.push(acc);
    }
    Ok(OuTrajectory { dt, values, integral })
}

#[inline]
fn stationary_draw<R: Rng + ?Sized>(g: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    (0.5 * g).sqrt() * z
}

/// Transition of the OU chain over a fixed step.
#[derive(Clone, Copy, Debug)]
struct ExactStep {
    decay: f64,
    noise_sd: f64,
}

impl ExactStep {
    fn new(g: f64, h: f64) -> Self {
        let decay = (-g * h).exp();
        // 1 - e^{-2gh} without cancellation for small steps
        let noise_sd = (-0.5 * g * (-2.0 * g * h).exp_m1()).sqrt();
        Self { decay, noise_sd }
    }

    #[inline]
    fn advance<R: Rng + ?Sized>(&self, chi: f64, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        chi * self.decay + self.noise_sd * z
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    n_steps: usize,
    h: f64,
    step: ExactStep,
}

/// Step plan for integrating OU paths up to each time of a sorted grid.
///
/// Each interval between consecutive grid times is split into the fewest
/// equal steps no longer than `dt_max`, so every grid time is hit exactly.
#[derive(Clone, Debug)]
pub struct IntegrationSchedule {
    g: f64,
    segments: Vec<Segment>,
}

impl IntegrationSchedule {
    pub fn new(g: f64, times: &[f64], dt_max: f64) -> Result<Self> {
        check_g(g).map_err(|e| Error::usage(e.to_string()))?;
        if !(dt_max > 0.0 && dt_max.is_finite()) {
            return Err(Error::usage(format!("dt must be positive, got {dt_max}")));
        }
        let mut prev = 0.0;
        let mut segments = Vec::with_capacity(times.len());
        for &t in times {
            if !(t >= prev && t.is_finite()) {
                return Err(Error::usage("integration times must be finite, nonnegative and sorted"));
            }
            let span = t - prev;
            let n_steps = if span == 0.0 {
                0
            } else {
                (span / dt_max * (1.0 - 1e-12)).ceil() as usize
            };
            let h = if n_steps == 0 { 0.0 } else { span / n_steps as f64 };
            segments.push(Segment {
                n_steps,
                h,
                step: ExactStep::new(g, h),
            });
            prev = t;
        }
        Ok(Self { g, segments })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Samples one path and writes `∫₀^{t_k} χ` (trapezoidal) into `out[k]`.
    pub fn integrate<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        assert_eq!(out.len(), self.segments.len(), "output length must match the grid");
        let mut chi = stationary_draw(self.g, rng);
        let mut acc = 0.0;
        for (seg, slot) in self.segments.iter().zip(out.iter_mut()) {
            let half_h = 0.5 * seg.h;
            for _ in 0..seg.n_steps {
                let next = seg.step.advance(chi, rng);
                acc += half_h * (chi + next);
                chi = next;
            }
            *slot = acc;
        }
    }
}
