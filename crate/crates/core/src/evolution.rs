//! Two-qubit dynamics under local dephasing fields.
//!
//! Each qubit evolves under `H_n = κ I + λ χ_n(t) σ_z`. The propagator is
//! diagonal in the computational basis, so `U ρ₀ U†` only rephases entries:
//! populations never change and the Werner coherences pick up a phase
//! proportional to the integrated field.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::noise::{beta_unchecked, dephasing_factor, trajectory_rng, IntegrationSchedule, NoiseConfig, NoiseParams};
use crate::tensor::{ComplexMatrix, DensityMatrix4, Dim};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WernerParams {
    /// Weight of the Bell component, in `[0, 1]`.
    pub p: f64,
    /// Single-qubit energy. Only contributes global phases here.
    pub kappa: f64,
}

impl WernerParams {
    pub fn new(p: f64, kappa: f64) -> Result<Self> {
        check_purity(p)?;
        if !kappa.is_finite() {
            return Err(Error::domain("kappa must be finite"));
        }
        Ok(Self { p, kappa })
    }
}

fn check_purity(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("purity p must lie in [0, 1], got {p}")))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("time must be finite and nonnegative, got {t}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Deterministic,
    AnalyticAveraged,
    MonteCarloAveraged,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolvedState {
    pub rho: DensityMatrix4,
    pub tau: f64,
    pub provenance: Provenance,
}

/// `(1-p)/4 · I + p |Φ⁺⟩⟨Φ⁺|` with `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn werner_state(p: f64) -> Result<DensityMatrix4> {
    dephased_werner(p, 1.0)
}

/// Werner populations with coherences `(p/2)·Γ`.
pub fn dephased_werner(p: f64, gamma: f64) -> Result<DensityMatrix4> {
    check_purity(p)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::domain(format!(
            "dephasing factor must lie in [0, 1], got {gamma}"
        )));
    }
    let outer = Complex64::new(0.25 * (1.0 + p), 0.0);
    let inner = Complex64::new(0.25 * (1.0 - p), 0.0);
    let mut m = ComplexMatrix::from_diagonal(&[outer, inner, inner, outer])?;
    let corner = Complex64::new(0.5 * p * gamma, 0.0);
    m[(0, 3)] = corner;
    m[(3, 0)] = corner;
    Ok(DensityMatrix4::new_unchecked(m))
}

/// Phases `θ_k` of the diagonal propagator `U = diag(e^{iθ_k})`.
///
/// `kappa_t = κ t` and `field_a`, `field_b` are the accumulated field
/// phases `λ ∫χ`. The sign pattern follows the closed-form propagator used
/// throughout this crate; the |00⟩ entry carries `-2κ` inside the bracket.
fn propagator_phases(kappa_t: f64, field_a: f64, field_b: f64) -> [f64; 4] {
    [
        -2.0 * kappa_t + (field_a + field_b),
        -(2.0 * kappa_t + (-field_a + field_b)),
        -(2.0 * kappa_t + (field_a - field_b)),
        -(2.0 * kappa_t + (field_a + field_b)),
    ]
}

/// Propagator for constant field values `chi_a`, `chi_b` over time `t`.
pub fn unitary(t: f64, kappa: f64, lambda: f64, chi_a: f64, chi_b: f64) -> Result<ComplexMatrix> {
    check_time(t)?;
    let theta = propagator_phases(kappa * t, lambda * chi_a * t, lambda * chi_b * t);
    ComplexMatrix::from_diagonal(&theta.map(|x| Complex64::from_polar(1.0, x)))
}

/// `ρ_ij ↦ ρ_ij e^{i(θ_i - θ_j)}`; diagonal entries are untouched.
fn rephase(rho0: &ComplexMatrix, theta: &[f64; 4]) -> ComplexMatrix {
    let mut out = *rho0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = rho0[(i, j)] * Complex64::from_polar(1.0, theta[i] - theta[j]);
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
    }
    out
}

/// `U(t) ρ₀ U†(t)` for constant fields.
pub fn evolve_deterministic(p: f64, t: f64, kappa: f64, lambda: f64, chi_a: f64, chi_b: f64) -> Result<EvolvedState> {
    check_time(t)?;
    let rho0 = werner_state(p)?;
    let theta = propagator_phases(kappa * t, lambda * chi_a * t, lambda * chi_b * t);
    Ok(EvolvedState {
        rho: DensityMatrix4::new_unchecked(rephase(rho0.matrix(), &theta)),
        tau: t,
        provenance: Provenance::Deterministic,
    })
}

/// Ensemble-averaged state in closed form: coherences decay by
/// `Γ = dephasing_factor(np, β(τ))`.
pub fn averaged_state(wp: &WernerParams, np: &NoiseParams, tau: f64) -> Result<EvolvedState> {
    check_time(tau)?;
    let gamma = dephasing_factor(np, beta_unchecked(np.g, tau))?;
    Ok(EvolvedState {
        rho: dephased_werner(wp.p, gamma)?,
        tau,
        provenance: Provenance::AnalyticAveraged,
    })
}

/// Time at which the averaged state first becomes separable, i.e. the
/// smallest τ with `p·Γ(τ) ≤ (1-p)/2`.
///
/// `Some(0.0)` when the initial state is already separable (`p ≤ 1/3`);
/// `None` for `p = 1`, which stays entangled for all finite τ.
pub fn separability_time(wp: &WernerParams, np: &NoiseParams) -> Result<Option<f64>> {
    let p = wp.p;
    if p == 1.0 {
        return Ok(None);
    }
    let threshold = (1.0 - p) / (2.0 * p);
    if threshold >= 1.0 {
        return Ok(Some(0.0));
    }
    let beta_star = -threshold.ln() / np.decay_rate();
    // β(τ) ≥ τ - 1/g, so the root lies below β* + 1/g.
    let (mut lo, mut hi) = (0.0_f64, beta_star + 1.0 / np.g);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if beta_unchecked(np.g, mid) < beta_star {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(Some(hi))
}

/// Monte Carlo estimate of an averaged state.
#[derive(Clone, Copy, Debug)]
pub struct McAveragedState {
    pub state: EvolvedState,
    /// Standard error of each entry: the real part holds the error of the
    /// entry's real part and the imaginary part that of its imaginary part.
    pub std_error: ComplexMatrix,
    pub n_traj: usize,
}

impl McAveragedState {
    /// `ρ₀₃`, the coherence between |00⟩ and |11⟩.
    pub fn corner(&self) -> Complex64 {
        self.state.rho.matrix()[(0, 3)]
    }

    pub fn corner_std_error(&self) -> Complex64 {
        self.std_error[(0, 3)]
    }
}

pub const MIN_TRAJECTORIES: usize = 100;
/// Trajectories per work unit. Fixed so the reduction tree does not depend on the thread count.
const CHUNK: usize = 1024;
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Running sums of `cos`, `sin` and their squares for each upper-triangular phase factor.
#[derive(Clone, Copy, Debug, Default)]
struct PhaseMoments {
    cos: [f64; 6],
    sin: [f64; 6],
    cos_sq: [f64; 6],
    sin_sq: [f64; 6],
}

impl PhaseMoments {
    fn record(&mut self, theta: &[f64; 4], active: &[usize]) {
        for &k in active {
            let (i, j) = PAIRS[k];
            let (s, c) = (theta[i] - theta[j]).sin_cos();
            self.cos[k] += c;
            self.sin[k] += s;
            self.cos_sq[k] += c * c;
            self.sin_sq[k] += s * s;
        }
    }

    fn merge(mut self, other: &Self) -> Self {
        for k in 0..6 {
            self.cos[k] += other.cos[k];
            self.sin[k] += other.sin[k];
            self.cos_sq[k] += other.cos_sq[k];
            self.sin_sq[k] += other.sin_sq[k];
        }
        self
    }
}

fn pairwise_sum(items: &[PhaseMoments]) -> PhaseMoments {
    match items.len() {
        0 => PhaseMoments::default(),
        1 => items[0],
        n => {
            let (left, right) = items.split_at(n / 2);
            pairwise_sum(left).merge(&pairwise_sum(right))
        }
    }
}

fn sample_std_error(sum: f64, sum_sq: f64, n: f64) -> f64 {
    let mean = sum / n;
    let var = ((sum_sq - sum * mean) / (n - 1.0)).max(0.0);
    (var / n).sqrt()
}

/// Monte Carlo average over sampled OU trajectories at a single time.
pub fn mc_averaged_state(
    wp: &WernerParams,
    np: &NoiseParams,
    tau: f64,
    n_traj: usize,
    dt: f64,
    seed: u64,
) -> Result<McAveragedState> {
    Ok(mc_averaged_states(wp, np, &[tau], n_traj, dt, seed)?.remove(0))
}

/// Monte Carlo averages at several times, reusing each sampled path across the grid.
///
/// CQN drives both qubits with one path; IQN draws two independent paths
/// from the trajectory's stream. Trajectory `i` always reads stream `i` of
/// `seed`, and partial sums are combined in a fixed pairwise tree, so the
/// output is bit-identical for any number of worker threads.
pub fn mc_averaged_states(
    wp: &WernerParams,
    np: &NoiseParams,
    taus: &[f64],
    n_traj: usize,
    dt: f64,
    seed: u64,
) -> Result<Vec<McAveragedState>> {
    if n_traj < MIN_TRAJECTORIES {
        return Err(Error::usage(format!(
            "n_traj must be at least {MIN_TRAJECTORIES}, got {n_traj}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::usage(format!("dt must be positive, got {dt}")));
    }
    for &t in taus {
        check_time(t)?;
    }
    let mut order: Vec<usize> = (0..taus.len()).collect();
    order.sort_by(|&a, &b| taus[a].total_cmp(&taus[b]));
    let sorted: Vec<f64> = order.iter().map(|&k| taus[k]).collect();
    let schedule = IntegrationSchedule::new(np.g, &sorted, dt)?;

    let lambda = np.effective_coupling();
    let config = np.config;
    let kappa = wp.kappa;
    let n_times = sorted.len();
    let n_chunks = n_traj.div_ceil(CHUNK);
    let rho0 = werner_state(wp.p)?;
    // Entries that vanish in ρ₀ stay zero under rephasing.
    let active: Vec<usize> = (0..PAIRS.len())
        .filter(|&k| rho0.matrix()[PAIRS[k]] != Complex64::new(0.0, 0.0))
        .collect();

    let per_chunk: Vec<Vec<PhaseMoments>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut moments = vec![PhaseMoments::default(); n_times];
            let mut path_a = vec![0.0; n_times];
            let mut path_b = vec![0.0; n_times];
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(n_traj);
            for traj in start..end {
                let mut rng = trajectory_rng(seed, traj as u64);
                schedule.integrate(&mut rng, &mut path_a);
                let path_b: &[f64] = match config {
                    NoiseConfig::Cqn => &path_a,
                    NoiseConfig::Iqn => {
                        schedule.integrate(&mut rng, &mut path_b);
                        &path_b
                    }
                };
                for (k, slot) in moments.iter_mut().enumerate() {
                    let theta = propagator_phases(kappa * sorted[k], lambda * path_a[k], lambda * path_b[k]);
                    slot.record(&theta, &active);
                }
            }
            moments
        })
        .collect();

    let n = n_traj as f64;
    let mut out: Vec<Option<McAveragedState>> = vec![None; n_times];
    for (k, &orig) in order.iter().enumerate() {
        let column: Vec<PhaseMoments> = per_chunk.iter().map(|c| c[k]).collect();
        let total = pairwise_sum(&column);
        let mut rho = *rho0.matrix();
        let mut se = ComplexMatrix::zeros(Dim::Four);
        for &idx in &active {
            let (i, j) = PAIRS[idx];
            // Werner entries are real.
            let base = rho0.matrix()[(i, j)].re;
            let mean = Complex64::new(total.cos[idx] / n, total.sin[idx] / n);
            rho[(i, j)] = mean * base;
            rho[(j, i)] = (mean * base).conj();
            let err = Complex64::new(
                base.abs() * sample_std_error(total.cos[idx], total.cos_sq[idx], n),
                base.abs() * sample_std_error(total.sin[idx], total.sin_sq[idx], n),
            );
            se[(i, j)] = err;
            se[(j, i)] = err;
        }
        out[orig] = Some(McAveragedState {
            state: EvolvedState {
                rho: DensityMatrix4::new_unchecked(rho),
                tau: sorted[k],
                provenance: Provenance::MonteCarloAveraged,
            },
            std_error: se,
            n_traj,
        });
    }
    Ok(out.into_iter().map(|s| s.expect("every grid time is filled")).collect())
}
