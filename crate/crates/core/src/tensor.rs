//! Fixed-size complex linear algebra for one- and two-qubit objects.
//!
//! Matrices are stored row-major in a fixed 16-slot buffer so they are `Copy`
//! and never allocate. Two-qubit operators use the basis order
//! |00⟩, |01⟩, |10⟩, |11⟩ with qubit 1 as the left Kronecker factor.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Hermiticity tolerance accepted by the eigensolver before symmetrizing.
pub const EIGEN_HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are round-off and clamp to zero.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which a Jacobi sweep is considered converged.
pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Side length of a [`ComplexMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Four,
}

impl Dim {
    #[inline]
    pub fn size(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Four => 4,
        }
    }
}

impl TryFrom<usize> for Dim {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            4 => Ok(Dim::Four),
            other => Err(Error::usage(format!("matrix dimension must be 2 or 4, got {other}"))),
        }
    }
}

/// A 2×2 or 4×4 complex matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: Dim,
    data: [Complex64; 16],
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        let mut list = f.debug_list();
        for i in 0..n {
            let row: Vec<Complex64> = (0..n).map(|j| self[(i, j)]).collect();
            list.entry(&row);
        }
        list.finish()
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: Dim) -> Self {
        Self { dim, data: [ZERO; 16] }
    }

    pub fn identity(dim: Dim) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim.size() {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows2(rows: [[Complex64; 2]; 2]) -> Self {
        let mut m = Self::zeros(Dim::Two);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_rows4(rows: [[Complex64; 4]; 4]) -> Self {
        let mut m = Self::zeros(Dim::Four);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Diagonal matrix from 2 or 4 entries.
    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(Dim::try_from(diag.len())?);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        Ok(m)
    }

    /// Rank-one operator |v⟩⟨v|.
    pub fn outer(v: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(Dim::try_from(v.len())?);
        for (i, &a) in v.iter().enumerate() {
            for (j, &b) in v.iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.dim.size()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n();
        let mut out = Self::zeros(self.dim);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entry-wise complex conjugate (not transposed).
    pub fn conj(&self) -> Self {
        let mut out = *self;
        for v in out.data.iter_mut() {
            *v = v.conj();
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n()).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n(),
                self.n(),
                rhs.n(),
                rhs.n()
            )));
        }
        let n = self.n();
        let mut out = Self::zeros(self.dim);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.n();
        let mut out = Self::zeros(self.dim);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Iterator over the `n*n` live entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = &Complex64> {
        self.data[..self.n() * self.n()].iter()
    }

    /// Conjugation `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.checked_mul(self)?.checked_mul(&u.adjoint())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        let n = self.n();
        assert!(i < n && j < n, "index ({i}, {j}) out of range for {n}x{n}");
        &self.data[i * n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        let n = self.n();
        assert!(i < n && j < n, "index ({i}, {j}) out of range for {n}x{n}");
        &mut self.data[i * n + j]
    }
}

/// Panics on dimension mismatch; use [`ComplexMatrix::checked_mul`] for fallible code paths.
impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("matrix dimension mismatch")
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let mut out = self;
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        out
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let mut out = self;
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        out
    }
}

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(Dim::Two)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> ComplexMatrix {
    let i = Complex64::i();
    ComplexMatrix::from_rows2([[ZERO, -i], [i, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ONE, ZERO], [ZERO, -ONE]])
}

/// Kronecker product of two 2×2 matrices: `out[2i+k][2j+l] = a[i][j] * b[k][l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != Dim::Two || b.dim != Dim::Two {
        return Err(Error::usage(format!(
            "kron expects two 2x2 factors, got {}x{} and {}x{}",
            a.n(),
            a.n(),
            b.n(),
            b.n()
        )));
    }
    let mut out = ComplexMatrix::zeros(Dim::Four);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Which qubit of a two-qubit state to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

impl TryFrom<u8> for Subsystem {
    type Error = Error;

    fn try_from(index: u8) -> Result<Self> {
        match index {
            1 => Ok(Subsystem::First),
            2 => Ok(Subsystem::Second),
            other => Err(Error::usage(format!("subsystem index must be 1 or 2, got {other}"))),
        }
    }
}

/// A validated two-qubit density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix4(ComplexMatrix);

impl DensityMatrix4 {
    pub const HERMITIAN_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-12;

    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != Dim::Four {
            return Err(Error::usage("density matrix must be 4x4"));
        }
        if !m.is_finite() {
            return Err(Error::domain("density matrix has non-finite entries"));
        }
        let defect = m.hermiticity_defect();
        if defect > Self::HERMITIAN_TOL {
            return Err(Error::domain(format!(
                "density matrix not Hermitian (defect {defect:e})"
            )));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > Self::TRACE_TOL {
            return Err(Error::domain(format!("density matrix trace {tr} is not 1")));
        }
        let lowest = hermitian_eigenvalues(&m)?[3];
        if lowest < -POSITIVITY_TOL {
            return Err(Error::Positivity { eigenvalue: lowest });
        }
        Ok(Self(m))
    }

    /// Wraps a matrix whose invariants hold by construction.
    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        debug_assert_eq!(m.dim(), Dim::Four);
        Self(m)
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix4 {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Reduced state of one qubit.
pub fn partial_trace(rho: &DensityMatrix4, keep: Subsystem) -> ComplexMatrix {
    partial_trace_matrix(rho.matrix(), keep)
}

pub(crate) fn partial_trace_matrix(m: &ComplexMatrix, keep: Subsystem) -> ComplexMatrix {
    debug_assert_eq!(m.dim(), Dim::Four);
    let mut out = ComplexMatrix::zeros(Dim::Two);
    for a in 0..2 {
        for b in 0..2 {
            out[(a, b)] = match keep {
                // index = 2*q1 + q2
                Subsystem::First => m[(2 * a, 2 * b)] + m[(2 * a + 1, 2 * b + 1)],
                Subsystem::Second => m[(a, b)] + m[(2 + a, 2 + b)],
            };
        }
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Column `k` is the normalized eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `Σ f(λ_k) |v_k⟩⟨v_k|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.n();
        let mut out = ComplexMatrix::zeros(self.vectors.dim());
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += self.vectors[(i, k)] * self.vectors[(j, k)].conj() * w;
                }
            }
        }
        out
    }
}

/// Real eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.values)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix via cyclic complex Jacobi rotations.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let sym = m.hermitian_part();
    match sym.dim() {
        Dim::Two => {
            let (values, vecs) = jacobi::<2>(to_array(&sym))?;
            Ok(pack(Dim::Two, &values, &vecs))
        }
        Dim::Four => {
            let (values, vecs) = jacobi::<4>(to_array(&sym))?;
            Ok(pack(Dim::Four, &values, &vecs))
        }
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let defect = m.hermiticity_defect();
    if defect > EIGEN_HERMITIAN_TOL {
        return Err(Error::domain(format!(
            "matrix is not Hermitian within {EIGEN_HERMITIAN_TOL:e} (defect {defect:e})"
        )));
    }
    Ok(())
}

/// Singular values of a 4×4 complex matrix, descending.
///
/// Computed from the Hermitian dilation `[[0, T], [T†, 0]]`, whose spectrum is
/// `±σ_k`. This keeps small singular values accurate to machine precision
/// instead of taking square roots of eigenvalues of `T†T`.
pub(crate) fn singular_values4(t: &ComplexMatrix) -> Result<[f64; 4]> {
    if t.dim() != Dim::Four {
        return Err(Error::usage("singular_values4 expects a 4x4 matrix"));
    }
    let mut dilation = [[ZERO; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            dilation[i][4 + j] = t[(i, j)];
            dilation[4 + j][i] = t[(i, j)].conj();
        }
    }
    let (values, _) = jacobi::<8>(dilation)?;
    Ok([values[0], values[1], values[2], values[3]])
}

fn to_array<const N: usize>(m: &ComplexMatrix) -> [[Complex64; N]; N] {
    debug_assert_eq!(m.n(), N);
    let mut a = [[ZERO; N]; N];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    a
}

fn pack<const N: usize>(dim: Dim, values: &[f64; N], vecs: &[[Complex64; N]; N]) -> HermitianEigen {
    let mut vectors = ComplexMatrix::zeros(dim);
    for i in 0..N {
        for j in 0..N {
            vectors[(i, j)] = vecs[i][j];
        }
    }
    HermitianEigen {
        values: values.to_vec(),
        vectors,
    }
}

fn off_diagonal_norm<const N: usize>(a: &[[Complex64; N]; N]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                s += v.norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on a Hermitian array. Returns descending eigenvalues and
/// the unitary whose columns are the matching eigenvectors.
fn jacobi<const N: usize>(mut a: [[Complex64; N]; N]) -> Result<([f64; N], [[Complex64; N]; N])> {
    let mut v = [[ZERO; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = ONE;
    }
    let scale = a.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let tol = JACOBI_TOL * scale;

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off >= tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
    let values = std::array::from_fn(|k| a[order[k]][order[k]].re);
    let mut vectors = [[ZERO; N]; N];
    for (k, &src) in order.iter().enumerate() {
        for row in 0..N {
            vectors[row][k] = v[row][src];
        }
    }
    Ok((values, vectors))
}

/// One two-sided rotation zeroing `a[p][q]`.
///
/// With `a[p][q] = |g| e^{iφ}`, the phase `D = diag(1, e^{-iφ})` turns the
/// pivot block real symmetric, after which the classical real rotation applies.
/// The combined 2×2 unitary is `J = D·R`.
// rows p and q of `a` are read and written together, so iterate by column index
#[allow(clippy::needless_range_loop)]
fn rotate<const N: usize>(a: &mut [[Complex64; N]; N], v: &mut [[Complex64; N]; N], p: usize, q: usize) {
    let g = a[p][q];
    let mag = g.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = g / mag;
    let theta = (a[q][q].re - a[p][p].re) / (2.0 * mag);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    // A <- A J
    for row in a.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * j_pp + y * j_qp;
        row[q] = x * j_pq + y * j_qq;
    }
    // A <- J† A
    for k in 0..N {
        let (x, y) = (a[p][k], a[q][k]);
        a[p][k] = j_pp.conj() * x + j_qp.conj() * y;
        a[q][k] = j_pq.conj() * x + j_qq.conj() * y;
    }
    a[p][q] = ZERO;
    a[q][p] = ZERO;
    a[p][p].im = 0.0;
    a[q][q].im = 0.0;
    // V <- V J
    for row in v.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * j_pp + y * j_qp;
        row[q] = x * j_pq + y * j_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(h, 0.0), ZERO, ZERO, c(h, 0.0)]).unwrap()
    }

    #[test]
    fn kron_identity() {
        let out = kron(&identity2(), &identity2()).unwrap();
        assert_eq!(out, ComplexMatrix::identity(Dim::Four));
    }

    #[test]
    fn kron_sigma_z_identity_is_block_diagonal() {
        let out = kron(&pauli_z(), &identity2()).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[ONE, ONE, -ONE, -ONE]).unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn kron_sigma_x_sigma_x_is_antidiagonal() {
        let out = kron(&pauli_x(), &pauli_x()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { ONE } else { ZERO };
                assert_eq!(out[(i, j)], expected, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn kron_rejects_four_by_four() {
        let big = ComplexMatrix::identity(Dim::Four);
        assert!(matches!(kron(&big, &identity2()), Err(Error::Usage(_))));
    }

    #[test]
    fn eigenvalues_of_maximally_mixed() {
        let m = ComplexMatrix::identity(Dim::Four).scale(c(0.25, 0.0));
        let ev = hermitian_eigenvalues(&m).unwrap();
        for v in ev {
            assert_abs_diff_eq!(v, 0.25, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigenvalues_of_bell_projector() {
        let ev = hermitian_eigenvalues(&bell()).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.0];
        for (a, b) in ev.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigenvalues_of_werner_half() {
        let m = ComplexMatrix::identity(Dim::Four).scale(c(0.125, 0.0)) + bell().scale(c(0.5, 0.0));
        let ev = hermitian_eigenvalues(&m).unwrap();
        let expected = [0.625, 0.125, 0.125, 0.125];
        for (a, b) in ev.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigenvalues_of_pauli_y() {
        let ev = hermitian_eigenvalues(&pauli_y()).unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], -1.0, epsilon = 1e-15);
    }

    #[test]
    fn eigenvectors_reconstruct_complex_matrix() {
        let m = ComplexMatrix::from_rows4([
            [c(2.0, 0.0), c(0.3, 0.4), c(0.0, -1.0), c(0.1, 0.0)],
            [c(0.3, -0.4), c(-1.0, 0.0), c(0.5, 0.5), c(0.0, 0.2)],
            [c(0.0, 1.0), c(0.5, -0.5), c(0.7, 0.0), c(-0.3, 0.0)],
            [c(0.1, 0.0), c(0.0, -0.2), c(-0.3, 0.0), c(0.0, 0.0)],
        ]);
        let eig = hermitian_eigen(&m).unwrap();
        let rebuilt = eig.map_spectrum(|x| x);
        assert!(rebuilt.max_abs_diff(&m) < 1e-12);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let sum: f64 = eig.values.iter().sum();
        assert_abs_diff_eq!(sum, m.trace().re, epsilon = 1e-12);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let m = ComplexMatrix::from_rows2([[ONE, ONE], [ZERO, ONE]]);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn near_hermitian_input_is_symmetrized() {
        let m = ComplexMatrix::from_rows2([[ONE, c(0.5, 1e-11)], [c(0.5, 0.0), ONE]]);
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(ev[0], 1.5, epsilon = 1e-10);
    }

    #[test]
    fn singular_values_match_known_diagonal() {
        let m = ComplexMatrix::from_diagonal(&[c(0.0, -3.0), c(1e-9, 0.0), c(2.0, 0.0), ZERO]).unwrap();
        let sv = singular_values4(&m).unwrap();
        let expected = [3.0, 2.0, 1e-9, 0.0];
        for (a, b) in sv.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let rho = DensityMatrix4::new(bell()).unwrap();
        let half = ComplexMatrix::identity(Dim::Two).scale(c(0.5, 0.0));
        for keep in [Subsystem::First, Subsystem::Second] {
            assert!(partial_trace(&rho, keep).max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = DensityMatrix4::new(ComplexMatrix::from_diagonal(&[ONE, ZERO, ZERO, ZERO]).unwrap()).unwrap();
        let zero_proj = ComplexMatrix::from_rows2([[ONE, ZERO], [ZERO, ZERO]]);
        assert_eq!(partial_trace(&rho, Subsystem::First), zero_proj);
    }

    #[test]
    fn partial_trace_distinguishes_subsystems() {
        // |0⟩⟨0| ⊗ |+⟩⟨+|
        let plus = ComplexMatrix::from_rows2([[c(0.5, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(0.5, 0.0)]]);
        let zero_proj = ComplexMatrix::from_rows2([[ONE, ZERO], [ZERO, ZERO]]);
        let rho = DensityMatrix4::new(kron(&zero_proj, &plus).unwrap()).unwrap();
        assert!(partial_trace(&rho, Subsystem::First).max_abs_diff(&zero_proj) < 1e-15);
        assert!(partial_trace(&rho, Subsystem::Second).max_abs_diff(&plus) < 1e-15);
    }

    #[test]
    fn subsystem_index_validation() {
        assert_eq!(Subsystem::try_from(1).unwrap(), Subsystem::First);
        assert_eq!(Subsystem::try_from(2).unwrap(), Subsystem::Second);
        assert!(matches!(Subsystem::try_from(3), Err(Error::Usage(_))));
        assert!(matches!(Subsystem::try_from(0), Err(Error::Usage(_))));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix4::new(bell()).is_ok());
        let not_unit = ComplexMatrix::identity(Dim::Four);
        assert!(matches!(DensityMatrix4::new(not_unit), Err(Error::Domain(_))));
        let negative = ComplexMatrix::from_diagonal(&[c(1.1, 0.0), c(-0.1, 0.0), ZERO, ZERO]).unwrap();
        assert!(matches!(DensityMatrix4::new(negative), Err(Error::Positivity { .. })));
        assert!(matches!(DensityMatrix4::new(identity2()), Err(Error::Usage(_))));
    }
}
