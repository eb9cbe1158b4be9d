//! Entropic uncertainty, concurrence and the entanglement witness.
//!
//! Entropies are in bits. The uncertainty relation is evaluated as
//!
//! ```text
//! L = S(ρ_A2) - S(ρ_2) + S(ρ_B2) - S(ρ_2)
//! R = S(ρ_12) - S(ρ_2) + log₂(1/c)
//! U = L - R
//! ```
//!
//! where `ρ_A2` is the state after measuring `A` on qubit 1, `ρ_2` is the
//! reduced state of qubit 2 and `c` the complementarity of `A` and `B`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{
    hermitian_eigen, hermitian_eigenvalues, identity2, kron, partial_trace, pauli_x, pauli_y, pauli_z,
    singular_values4, ComplexMatrix, DensityMatrix4, Dim, Subsystem, POSITIVITY_TOL,
};

/// Clamp round-off negatives to zero; reject anything below `-POSITIVITY_TOL`.
pub fn clamp_spectrum(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&v| {
            if v < -POSITIVITY_TOL {
                Err(Error::Positivity { eigenvalue: v })
            } else {
                Ok(v.max(0.0))
            }
        })
        .collect()
}

/// `-Σ λ log₂ λ`, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spectrum = clamp_spectrum(&hermitian_eigenvalues(rho)?)?;
    let s: f64 = spectrum.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum();
    Ok(s.max(0.0))
}

/// The two spectral projectors of a nondegenerate 2×2 Hermitian observable,
/// ordered by descending eigenvalue.
pub fn eigenprojectors(obs: &ComplexMatrix) -> Result<[ComplexMatrix; 2]> {
    if obs.dim() != Dim::Two {
        return Err(Error::usage("observable must be 2x2"));
    }
    let ev = hermitian_eigenvalues(obs)?;
    let gap = ev[0] - ev[1];
    if gap <= 1e-10 {
        return Err(Error::domain("observable is degenerate"));
    }
    // Π₊ = (O - e₋ I)/(e₊ - e₋)
    let shifted = obs.hermitian_part() - identity2().scale(Complex64::new(ev[1], 0.0));
    let upper = shifted.scale(Complex64::new(1.0 / gap, 0.0));
    Ok([upper, identity2() - upper])
}

/// `Σ_n (Π_n ⊗ I) ρ (Π_n ⊗ I)` with `Π_n` the eigenprojectors of `obs` on qubit 1.
pub fn post_measurement_state(rho: &DensityMatrix4, obs: &ComplexMatrix) -> Result<DensityMatrix4> {
    let mut out = ComplexMatrix::zeros(Dim::Four);
    for proj in eigenprojectors(obs)? {
        let lifted = kron(&proj, &identity2())?;
        out = out + rho.matrix().conjugate_by(&lifted)?;
    }
    Ok(DensityMatrix4::new_unchecked(out.hermitian_part()))
}

/// Two ±1-valued observables measured on qubit 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementPair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    /// `max |⟨a_i|b_j⟩|²` over eigenvectors.
    pub complementarity: f64,
}

impl MeasurementPair {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        for (name, obs) in [("A", &a), ("B", &b)] {
            if obs.dim() != Dim::Two {
                return Err(Error::usage(format!("observable {name} must be 2x2")));
            }
            let ev = hermitian_eigenvalues(obs)?;
            if (ev[0] - 1.0).abs() > 1e-10 || (ev[1] + 1.0).abs() > 1e-10 {
                return Err(Error::domain(format!(
                    "observable {name} must have eigenvalues ±1, got {ev:?}"
                )));
            }
        }
        let pa = eigenprojectors(&a)?;
        let pb = eigenprojectors(&b)?;
        // For rank-one projectors Tr(P_a P_b) = |⟨a|b⟩|².
        let mut c: f64 = 0.0;
        for x in &pa {
            for y in &pb {
                c = c.max((*x * *y).trace().re);
            }
        }
        Ok(Self {
            a,
            b,
            complementarity: c,
        })
    }

    /// `σ_x` and `σ_z`, with `c = 1/2`.
    pub fn pauli_xz() -> Self {
        Self::new(pauli_x(), pauli_z()).expect("Pauli matrices form a valid pair")
    }
}

impl Default for MeasurementPair {
    fn default() -> Self {
        Self::pauli_xz()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertaintySides {
    /// `L`: the entropic uncertainty.
    pub left: f64,
    /// `R`: the lower bound.
    pub right: f64,
    /// `U = L - R`.
    pub tightness: f64,
}

pub fn uncertainty_sides(rho: &DensityMatrix4, mp: &MeasurementPair) -> Result<UncertaintySides> {
    let s_memory = von_neumann_entropy(&partial_trace(rho, Subsystem::Second))?;
    let s_joint = von_neumann_entropy(rho.matrix())?;
    let s_a = von_neumann_entropy(post_measurement_state(rho, &mp.a)?.matrix())?;
    let s_b = von_neumann_entropy(post_measurement_state(rho, &mp.b)?.matrix())?;
    let left = (s_a - s_memory) + (s_b - s_memory);
    let right = s_joint - s_memory + (1.0 / mp.complementarity).log2();
    Ok(UncertaintySides {
        left,
        right,
        tightness: left - right,
    })
}

/// Wootters concurrence `max{0, √ν₁ - √ν₂ - √ν₃ - √ν₄}`, with `ν` the
/// eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
///
/// The `√ν_k` are obtained directly as the singular values of
/// `√ρ* (σ_y⊗σ_y) √ρ`, which share the spectrum of the spin-flip product
/// without squaring round-off into the small eigenvalues.
pub fn concurrence_wootters(rho: &DensityMatrix4) -> Result<f64> {
    let eig = hermitian_eigen(rho.matrix())?;
    clamp_spectrum(&eig.values)?;
    let sqrt_rho = eig.map_spectrum(|v| v.max(0.0).sqrt());
    let flip = kron(&pauli_y(), &pauli_y())?;
    let t = sqrt_rho.conj().checked_mul(&flip)?.checked_mul(&sqrt_rho)?;
    let s = singular_values4(&t)?;
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// Closed-form concurrence of a dephased Werner state: `max{0, pΓ - (1-p)/2}`.
pub fn concurrence_xstate(p: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("purity p must lie in [0, 1], got {p}")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::domain(format!(
            "dephasing factor must lie in [0, 1], got {gamma}"
        )));
    }
    Ok((p * gamma - 0.5 * (1.0 - p)).max(0.0))
}

/// `-Tr[ρ(t) (I/2 - ρ₀)] = Tr[ρ(t) ρ₀] - 1/2`. Positive values certify entanglement.
pub fn entanglement_witness(rho_t: &DensityMatrix4, rho_0: &DensityMatrix4) -> Result<f64> {
    let overlap = rho_t.matrix().checked_mul(rho_0.matrix())?.trace();
    if overlap.im.abs() >= 1e-12 {
        return Err(Error::domain(format!(
            "witness expectation has imaginary part {:e}",
            overlap.im
        )));
    }
    Ok(overlap.re - 0.5)
}

/// One row of a sweep: `(τ, L, R, U, C, EW)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureRecord {
    pub tau: f64,
    /// `L`
    pub uncertainty: f64,
    /// `R`
    pub bound: f64,
    /// `U = L - R`
    pub tightness: f64,
    /// `C`
    pub concurrence: f64,
    /// `EW`
    pub witness: f64,
}

impl MeasureRecord {
    /// Evaluates every measure, using the Wootters construction for `C`.
    pub fn evaluate(tau: f64, rho: &DensityMatrix4, rho_0: &DensityMatrix4, mp: &MeasurementPair) -> Result<Self> {
        let c = concurrence_wootters(rho)?;
        Self::with_concurrence(tau, rho, rho_0, mp, c)
    }

    /// Evaluates the entropic measures and the witness with a precomputed concurrence.
    pub fn with_concurrence(
        tau: f64,
        rho: &DensityMatrix4,
        rho_0: &DensityMatrix4,
        mp: &MeasurementPair,
        concurrence: f64,
    ) -> Result<Self> {
        let sides = uncertainty_sides(rho, mp)?;
        Ok(Self {
            tau,
            uncertainty: sides.left,
            bound: sides.right,
            tightness: sides.tightness,
            concurrence,
            witness: entanglement_witness(rho, rho_0)?,
        })
    }
}
