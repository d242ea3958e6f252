//! Finite-dimensional complex linear algebra: state vectors, density
//! matrices, rank-1 projectors, unitaries and the Born rule.
//!
//! Everything here is immutable after construction. Constructors validate
//! their invariants against the tolerances below (Frobenius norm throughout),
//! so holding a value of one of these types means the invariant holds.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const TOL_NORM: f64 = 1e-9;
pub const TOL_HERM: f64 = 1e-9;
pub const TOL_PROJ: f64 = 1e-9;
pub const TOL_UNIT: f64 = 1e-9;
pub const TOL_PSD: f64 = 1e-9;

/// A density matrix whose largest eigenvalue reaches `1 - PURE_THRESHOLD`
/// counts as a pure state.
pub const PURE_THRESHOLD: f64 = 1e-7;

/// Amplitudes below this magnitude are treated as zero when fixing the
/// global phase of a vector.
pub const PHASE_EPS: f64 = 1e-6;

/// Decimal digits kept per entry when building a projector's canonical key.
const KEY_DIGITS: i32 = 8;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn hermiticity_defect(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() == 0 {
        return Err(Error::EmptyInput);
    }
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    Ok(m.nrows())
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Multiplies `v` by a global phase so that its first entry of magnitude
/// above [`PHASE_EPS`] is real and positive.
pub fn fix_phase(v: &mut CVector) {
    if let Some(lead) = v.iter().find(|z| z.norm() > PHASE_EPS).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Hermitian eigen-decomposition, eigenvalues sorted in descending order.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// A unit vector of amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    entries: CVector,
}

impl StateVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        let v = CVector::from_vec(entries);
        let norm = v.norm();
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::NonUnitVector { norm });
        }
        Ok(Self { entries: v })
    }

    /// Scales `entries` to unit norm. Fails on the zero vector.
    pub fn normalized(entries: Vec<C64>) -> Result<Self> {
        let v = CVector::from_vec(entries);
        let norm = v.norm();
        if v.is_empty() || norm < PHASE_EPS {
            return Err(Error::NonUnitVector { norm });
        }
        Ok(Self { entries: v / c(norm, 0.0) })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::normalized(entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = c(1.0, 0.0);
        Self { entries: v }
    }

    pub(crate) fn from_cvector_unchecked(entries: CVector) -> Self {
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &CVector {
        &self.entries
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.entries.dotc(&other.entries))
    }

    pub fn with_phase_convention(mut self) -> Self {
        fix_phase(&mut self.entries);
        self
    }

    /// `|v⟩⟨v|`.
    pub fn outer(&self) -> CMatrix {
        &self.entries * self.entries.adjoint()
    }
}

/// Positive semi-definite, Hermitian, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let herm = hermiticity_defect(&matrix);
        if herm > TOL_HERM {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {herm:e})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TOL_NORM || trace.im.abs() > TOL_NORM {
            return Err(Error::InvalidDensity(format!("trace {trace} is not 1")));
        }
        let (values, _) = hermitian_eigen(&matrix);
        if let Some(&min) = values.last() {
            if min < -TOL_PSD {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(v: &StateVector) -> Self {
        Self { matrix: v.outer() }
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim) * c(1.0 / dim as f64, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues (descending) and matching eigenvectors as columns.
    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        hermitian_eigen(&self.matrix)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigen().0[0]
    }

    pub fn is_pure(&self) -> bool {
        self.max_eigenvalue() >= 1.0 - PURE_THRESHOLD
    }

    /// Dominant eigenvector with the first-nonzero-real-positive phase
    /// convention. Fails with [`Error::NotPure`] for mixed states.
    pub fn dominant_vector(&self) -> Result<StateVector> {
        let (values, vectors) = self.eigen();
        if values[0] < 1.0 - PURE_THRESHOLD {
            return Err(Error::NotPure { max_eigenvalue: values[0] });
        }
        let mut v: CVector = vectors.column(0).into_owned();
        let norm = v.norm();
        v /= c(norm, 0.0);
        fix_phase(&mut v);
        Ok(StateVector { entries: v })
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Unitary) -> Result<Self> {
        check_dims(u.dim(), self.dim())?;
        Ok(Self { matrix: &u.matrix * &self.matrix * u.matrix.adjoint() })
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        let (values, _) = hermitian_eigen(&(&self.matrix - &other.matrix));
        Ok(0.5 * values.iter().map(|x| x.abs()).sum::<f64>())
    }

    pub fn frobenius_distance(&self, other: &DensityMatrix) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(frobenius(&(&self.matrix - &other.matrix)))
    }
}

/// Rank-1 orthogonal projector `|α⟩⟨α|`.
///
/// Equality is decided by the canonical key, which is built from the rounded
/// matrix entries and is therefore blind to the global phase of `α`.
#[derive(Debug, Clone)]
pub struct Projector {
    matrix: CMatrix,
    key: String,
}

impl PartialEq for Projector {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Projector {}

impl Projector {
    pub fn from_vector(v: &StateVector) -> Result<Self> {
        let norm = v.entries.norm();
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::NonUnitVector { norm });
        }
        let matrix = v.outer();
        let key = canonical_key(&matrix);
        Ok(Self { matrix, key })
    }

    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let herm = hermiticity_defect(&matrix);
        if herm > TOL_HERM {
            return Err(Error::InvalidProjector(format!("not Hermitian (defect {herm:e})")));
        }
        let idem = frobenius(&(&matrix * &matrix - &matrix));
        if idem > TOL_PROJ {
            return Err(Error::InvalidProjector(format!("not idempotent (defect {idem:e})")));
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TOL_NORM {
            return Err(Error::RankUnsupported { trace });
        }
        let key = canonical_key(&matrix);
        Ok(Self { matrix, key })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn canonical_key(&self) -> &str {
        &self.key
    }

    /// A unit vector spanning the range, with the phase convention of
    /// [`fix_phase`]. The column of largest norm is used.
    pub fn vector(&self) -> StateVector {
        let col = (0..self.dim())
            .max_by(|&a, &b| {
                self.matrix.column(a).norm().total_cmp(&self.matrix.column(b).norm())
            })
            .unwrap_or(0);
        let mut v: CVector = self.matrix.column(col).into_owned();
        let norm = v.norm();
        v /= c(norm, 0.0);
        fix_phase(&mut v);
        StateVector { entries: v }
    }

    /// `I − P`, as a plain matrix (it is rank `d − 1`).
    pub fn complement(&self) -> CMatrix {
        CMatrix::identity(self.dim(), self.dim()) - &self.matrix
    }
}

fn canonical_key(m: &CMatrix) -> String {
    let scale = 10f64.powi(KEY_DIGITS);
    let mut text = format!("{}:", m.nrows());
    for r in 0..m.nrows() {
        for col in 0..m.ncols() {
            let z = m[(r, col)];
            let re = (z.re * scale).round() as i64;
            let im = (z.im * scale).round() as i64;
            text.push_str(&format!("{re},{im};"));
        }
    }
    hex::encode(&Sha256::digest(text.as_bytes())[..16])
}

/// A unitary matrix, used as a change of basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    matrix: CMatrix,
}

impl Unitary {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let d = check_square(&matrix)?;
        let deviation = frobenius(&(matrix.adjoint() * &matrix - CMatrix::identity(d, d)));
        if deviation > TOL_UNIT {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim) }
    }

    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { matrix: CMatrix::from_row_slice(2, 2, &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]) }
    }

    pub fn pauli_x() -> Self {
        Self { matrix: CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]) }
    }

    /// Phase gate `diag(1, i)`: maps the x eigenbasis onto the y eigenbasis.
    pub fn phase_s() -> Self {
        Self { matrix: CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]) }
    }

    /// Discrete Fourier transform `F_jk = ω^{jk}/√d`, `ω = e^{2πi/d}`.
    pub fn fourier(dim: usize) -> Self {
        let norm = 1.0 / (dim as f64).sqrt();
        let matrix = CMatrix::from_fn(dim, dim, |j, k| {
            let angle = 2.0 * std::f64::consts::PI * ((j * k) % dim) as f64 / dim as f64;
            C64::from_polar(norm, angle)
        });
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_dims(self.dim(), v.dim())?;
        Ok(StateVector { entries: &self.matrix * &v.entries })
    }

    /// Columns of the matrix as an orthonormal basis.
    pub fn columns(&self) -> Vec<StateVector> {
        (0..self.dim())
            .map(|k| StateVector { entries: self.matrix.column(k).into_owned() })
            .collect()
    }
}

/// True iff `‖PQ − QP‖_F ≤ tol`.
pub fn commutes(p: &Projector, q: &Projector, tol: f64) -> Result<bool> {
    check_dims(p.dim(), q.dim())?;
    let pq = &p.matrix * &q.matrix;
    let qp = &q.matrix * &p.matrix;
    Ok(frobenius(&(pq - qp)) <= tol)
}

/// Born value `Tr[ρP]`.
///
/// The raw trace must be real within [`TOL_HERM`] and lie in
/// `[−TOL_NORM, 1 + TOL_NORM]`; it is then clamped to `[0, 1]`.
pub fn born_value(rho: &DensityMatrix, p: &Projector) -> Result<f64> {
    check_dims(rho.dim(), p.dim())?;
    let trace = (&rho.matrix * &p.matrix).trace();
    if trace.im.abs() > TOL_HERM {
        return Err(Error::InvalidDensity(format!("Tr[ρP] has imaginary part {:e}", trace.im)));
    }
    if trace.re < -TOL_NORM || trace.re > 1.0 + TOL_NORM {
        return Err(Error::BornOutOfRange { value: trace.re });
    }
    Ok(trace.re.clamp(0.0, 1.0))
}

/// `U P U†`.
pub fn conjugate_by(u: &Unitary, p: &Projector) -> Result<Projector> {
    check_dims(u.dim(), p.dim())?;
    Projector::from_matrix(&u.matrix * &p.matrix * u.matrix.adjoint())
}

fn gaussian_matrix(dim: usize, rng: &mut Xoshiro256PlusPlus) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

/// Random full-rank density matrix `G†G / Tr[G†G]` with complex Gaussian
/// `G`, deterministic in `seed`.
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let g = gaussian_matrix(dim, &mut rng);
    let m = g.adjoint() * g;
    let trace = m.trace().re;
    let mut m = m / c(trace, 0.0);
    // symmetrize away rounding
    m = (&m + m.adjoint()) * c(0.5, 0.0);
    DensityMatrix { matrix: m }
}

/// Random pure state with complex Gaussian amplitudes, deterministic in `seed`.
pub fn random_state(dim: usize, seed: u64) -> StateVector {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let v = CVector::from_fn(dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        c(re, im)
    });
    let norm = v.norm();
    StateVector { entries: v / c(norm, 0.0) }
}

/// Random unitary from the QR decomposition of a complex Gaussian matrix,
/// with the phases of `R`'s diagonal folded back into `Q`.
pub fn random_unitary(dim: usize, seed: u64) -> Unitary {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let g = gaussian_matrix(dim, &mut rng);
    let (q, r) = g.qr().unpack();
    let mut q = q;
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    Unitary { matrix: q }
}

/// Checks that `basis` is a full orthonormal basis of a common dimension.
pub fn check_orthonormal(basis: &[StateVector]) -> Result<()> {
    let first = basis.first().ok_or(Error::EmptyInput)?;
    let dim = first.dim();
    for (i, a) in basis.iter().enumerate() {
        check_dims(dim, a.dim())?;
        for (j, b) in basis.iter().enumerate().skip(i) {
            let ip = a.entries.dotc(&b.entries);
            let expected = if i == j { 1.0 } else { 0.0 };
            if (ip - c(expected, 0.0)).norm() > TOL_NORM {
                return Err(Error::NonOrthonormalBasis(format!(
                    "⟨{i}|{j}⟩ = {ip}, expected {expected}"
                )));
            }
        }
    }
    Ok(())
}
