//! State representations and canonical constants.
//!
//! Density matrices here may be subnormalized: after a filtering
//! measurement the trace equals the probability that the filter passed,
//! so the invariant is trace ∈ (0, 1] rather than trace = 1.
//! Renormalization is always explicit (`DensityMatrix::renormalized`),
//! never implied by another operation.
//!
//! Basis conventions, fixed throughout the crate: |+⟩ (spin up) is index 0,
//! |−⟩ (spin down) is index 1; two-spin basis order |++⟩, |+−⟩, |−+⟩, |−−⟩
//! with the left (source) factor most significant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix, C_ONE, C_ZERO, HERMITIAN_TOL};

/// Eigenvalues of a density matrix may undershoot zero by this much.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Slack allowed on trace and norm upper bounds.
pub const TRACE_TOL: f64 = 1e-10;

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![
            C_ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            C_ZERO,
        ],
    )
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Projector onto spin up, diag(1, 0).
pub fn projector_up() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0])
}

/// Projector onto spin down, diag(0, 1).
pub fn projector_down() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0])
}

/// Real polarization vector of a spin-1/2 state.
///
/// Extracted vectors follow the raw convention x = ρ12 + ρ21,
/// y = i(ρ12 − ρ21), z = ρ11 − ρ22 with no trace normalization, so for a
/// subnormalized state the output norm can be well below 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Unit vector at polar angle `theta`, azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.x * factor, self.y * factor, self.z * factor)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.x - other.x).abs() <= tol
            && (self.y - other.y).abs() <= tol
            && (self.z - other.z).abs() <= tol
    }
}

/// Hermitian positive-semidefinite matrix with trace in (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a matrix: Hermitian within 1e-10, eigenvalues
    /// ≥ −1e-10, trace in (0, 1 + 1e-10].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() || mat.rows() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square with dimension ≥ 2, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let asym = mat.max_hermitian_asymmetry();
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
                tol: HERMITIAN_TOL,
            });
        }
        let eig = mat.eigvals_hermitian()?;
        if eig.min() < -POSITIVITY_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: eig.min(),
            });
        }
        let trace = mat.trace().re;
        if trace <= 0.0 || trace > 1.0 + TRACE_TOL {
            return Err(Error::TraceOutOfRange { trace });
        }
        Ok(Self { mat })
    }

    /// The state ½(1 + P·σ) for a polarization vector inside the unit ball.
    pub fn from_bloch(p: &BlochVector) -> Result<Self> {
        let norm = p.norm();
        if norm > 1.0 + TRACE_TOL {
            return Err(Error::OutsideBlochBall { norm });
        }
        let mat = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new((1.0 + p.z) / 2.0, 0.0),
                Complex64::new(p.x / 2.0, -p.y / 2.0),
                Complex64::new(p.x / 2.0, p.y / 2.0),
                Complex64::new((1.0 - p.z) / 2.0, 0.0),
            ],
        );
        Ok(Self { mat })
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat.get(row, col)
    }

    /// Trace of the matrix; equals the retained probability for states that
    /// went through a filter.
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Explicit renormalization to unit trace.
    pub fn renormalized(&self) -> Self {
        Self {
            mat: self.mat.scale_re(1.0 / self.trace()),
        }
    }

    /// Tensor product of two states.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.tensor(&other.mat),
        }
    }

    /// Polarization components without trace normalization.
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "Bloch extraction requires a 2x2 state, got dimension {}",
                self.dim()
            )));
        }
        let r12 = self.get(0, 1);
        let r21 = self.get(1, 0);
        Ok(BlochVector {
            x: (r12 + r21).re,
            y: ((r12 - r21) * Complex64::new(0.0, 1.0)).re,
            z: (self.get(0, 0) - self.get(1, 1)).re,
        })
    }

    /// Polarization components of the trace-normalized state.
    pub fn bloch_vector_normalized(&self) -> Result<BlochVector> {
        Ok(self.bloch_vector()?.scale(1.0 / self.trace()))
    }

    /// Overlap with the singlet, ⟨ψ−| ρ/tr(ρ) |ψ−⟩.
    pub fn fidelity_singlet(&self) -> Result<f64> {
        if self.dim() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "singlet fidelity requires a 4x4 state, got dimension {}",
                self.dim()
            )));
        }
        let psi = BellState::PsiMinus.vector();
        let applied = self.mat.apply(psi.amplitudes());
        let value: Complex64 = psi
            .amplitudes()
            .iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(value.re / self.trace())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.mat.approx_eq(&other.mat, tol)
    }
}

/// JSON form of a density matrix: {"dim": d, "re": [[...]], "im": [[...]]},
/// row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&DensityMatrix> for DensityMatrixJson {
    fn from(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        let component = |f: fn(&Complex64) -> f64| {
            (0..d)
                .map(|i| (0..d).map(|j| f(&rho.get(i, j))).collect())
                .collect()
        };
        Self {
            dim: d,
            re: component(|c| c.re),
            im: component(|c| c.im),
        }
    }
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(json: DensityMatrixJson) -> Result<Self> {
        let d = json.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if d < 2 || !shape_ok(&json.re) || !shape_ok(&json.im) {
            return Err(Error::DimensionMismatch(
                "re/im must both be dim x dim".into(),
            ));
        }
        let mat = ComplexMatrix::from_fn(d, d, |i, j| Complex64::new(json.re[i][j], json.im[i][j]));
        DensityMatrix::new(mat)
    }
}

/// Complex state vector; `normalized` marks unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vec: Vec<Complex64>,
    normalized: bool,
}

impl PureState {
    /// A normalized state; fails when the norm is off unity by more than 1e-10.
    pub fn new_normalized(vec: Vec<Complex64>) -> Result<Self> {
        let norm = norm_of(&vec);
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            vec,
            normalized: true,
        })
    }

    /// A state of arbitrary norm, e.g. the surviving branch after a filter.
    pub fn subnormalized(vec: Vec<Complex64>) -> Self {
        Self {
            vec,
            normalized: false,
        }
    }

    /// Computational basis state e_k.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut vec = vec![C_ZERO; dim];
        vec[index] = C_ONE;
        Self {
            vec,
            normalized: true,
        }
    }

    /// Spin-1/2 state at polar angle `theta`, azimuth `phi`:
    /// cos(θ/2)|+⟩ + sin(θ/2) e^{iφ}|−⟩.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            vec: vec![
                Complex64::new((theta / 2.0).cos(), 0.0),
                Complex64::from_polar((theta / 2.0).sin(), phi),
            ],
            normalized: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.vec
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.vec[index]
    }

    pub fn is_normalized_flag(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.vec)
    }

    /// |ψ⟩⟨ψ| as a raw matrix (trace = norm²).
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.vec[i] * self.vec[j].conj()
        })
    }

    /// |ψ⟩⟨ψ| as a density matrix. Requires norm ≤ 1.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::new(self.projector()).expect("projector of a unit-or-smaller vector")
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut vec = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.vec {
            for b in &other.vec {
                vec.push(a * b);
            }
        }
        Self {
            vec,
            normalized: self.normalized && other.normalized,
        }
    }
}

fn norm_of(vec: &[Complex64]) -> f64 {
    vec.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨a|b⟩.
pub fn inner(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "inner product of dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// |⟨a|b⟩| for normalized states; lies in [0, 1].
pub fn overlap(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(inner(a, b)?.norm())
}

/// The four maximally entangled two-spin states.
///
/// ψ± = (|+−⟩ ± |−+⟩)/√2, φ± = (|++⟩ ± |−−⟩)/√2; ψ− is the singlet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiMinus,
        BellState::PsiPlus,
        BellState::PhiMinus,
        BellState::PhiPlus,
    ];

    pub fn vector(&self) -> PureState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let amp = |values: [f64; 4]| {
            values
                .iter()
                .map(|&v| Complex64::new(v * r, 0.0))
                .collect::<Vec<_>>()
        };
        let vec = match self {
            BellState::PsiMinus => amp([0.0, 1.0, -1.0, 0.0]),
            BellState::PsiPlus => amp([0.0, 1.0, 1.0, 0.0]),
            BellState::PhiMinus => amp([1.0, 0.0, 0.0, -1.0]),
            BellState::PhiPlus => amp([1.0, 0.0, 0.0, 1.0]),
        };
        PureState::new_normalized(vec).expect("Bell vectors are normalized")
    }

    pub fn projector(&self) -> DensityMatrix {
        self.vector().density()
    }
}

/// Singlet fraction f mixed with isotropic noise:
/// f·|ψ−⟩⟨ψ−| + (1−f)/3 · (1 − |ψ−⟩⟨ψ−|).
pub fn werner(f: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange(format!(
            "Werner parameter must lie in [0, 1], got {f}"
        )));
    }
    let singlet = BellState::PsiMinus.vector().projector();
    let rest = ComplexMatrix::identity(4).sub(&singlet);
    DensityMatrix::new(singlet.scale_re(f).add(&rest.scale_re((1.0 - f) / 3.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    #[test]
    fn bloch_north_pole_is_spin_up() {
        let rho = DensityMatrix::from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert!(rho.mat().approx_eq(&projector_up(), 0.0));
    }

    #[test]
    fn bloch_center_is_maximally_mixed() {
        let rho = DensityMatrix::from_bloch(&BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert!(rho
            .mat()
            .approx_eq(&ComplexMatrix::identity(2).scale_re(0.5), 0.0));
    }

    #[test]
    fn bloch_matches_angle_parametrization() {
        // ½ [[1 + cos θ, sin θ e^{-iφ}], [sin θ e^{iφ}, 1 − cos θ]]
        let (theta, phi) = (FRAC_PI_3, FRAC_PI_4);
        let rho = DensityMatrix::from_bloch(&BlochVector::from_spherical(theta, phi)).unwrap();
        let expected = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new((1.0 + theta.cos()) / 2.0, 0.0),
                Complex64::from_polar(theta.sin() / 2.0, -phi),
                Complex64::from_polar(theta.sin() / 2.0, phi),
                Complex64::new((1.0 - theta.cos()) / 2.0, 0.0),
            ],
        );
        assert!(rho.mat().approx_eq(&expected, 1e-15));
        // Its eigenvalues are (1 ± |p|)/2 = {0, 1} for a unit vector.
        let eig = rho.mat().eigvals_hermitian().unwrap();
        assert!(eig.values[0].abs() < 1e-12 && (eig.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn from_bloch_rejects_outside_ball() {
        let err = DensityMatrix::from_bloch(&BlochVector::new(0.8, 0.8, 0.8));
        assert!(matches!(err, Err(Error::OutsideBlochBall { .. })));
    }

    #[test]
    fn bloch_extraction_of_spin_up() {
        let rho = DensityMatrix::new(projector_up()).unwrap();
        assert!(rho
            .bloch_vector()
            .unwrap()
            .approx_eq(&BlochVector::new(0.0, 0.0, 1.0), 0.0));
    }

    #[test]
    fn bloch_round_trip_on_random_ball_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let p = loop {
                let candidate = BlochVector::new(
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                );
                if candidate.norm() <= 1.0 {
                    break candidate;
                }
            };
            let rho = DensityMatrix::from_bloch(&p).unwrap();
            assert!(rho.bloch_vector().unwrap().approx_eq(&p, 1e-12));
            assert!(rho.bloch_vector_normalized().unwrap().approx_eq(&p, 1e-12));
        }
    }

    #[test]
    fn pure_states_have_unit_bloch_norm_mixed_less() {
        let pure = PureState::from_angles(1.1, 2.3).density();
        assert!((pure.bloch_vector().unwrap().norm() - 1.0).abs() < 1e-10);
        let mixed = werner_like_qubit();
        assert!(mixed.bloch_vector().unwrap().norm() < 1.0 - 1e-6);
    }

    fn werner_like_qubit() -> DensityMatrix {
        let p = BlochVector::new(0.2, -0.1, 0.4);
        DensityMatrix::from_bloch(&p).unwrap()
    }

    #[test]
    fn overlap_examples() {
        let a = PureState::from_angles(0.7, 0.3);
        assert!((overlap(&a, &a).unwrap() - 1.0).abs() < 1e-14);
        let up = PureState::basis(2, 0);
        let down = PureState::basis(2, 1);
        assert!(overlap(&up, &down).unwrap() < 1e-14);
    }

    #[test]
    fn overlap_is_symmetric_and_phase_invariant() {
        let a = PureState::from_angles(0.9, 1.7);
        let b = PureState::from_angles(2.1, -0.4);
        let ab = overlap(&a, &b).unwrap();
        assert!((ab - overlap(&b, &a).unwrap()).abs() < 1e-14);
        let phase = Complex64::from_polar(1.0, 1.234);
        let b_rot =
            PureState::new_normalized(b.amplitudes().iter().map(|c| c * phase).collect()).unwrap();
        assert!((ab - overlap(&a, &b_rot).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn overlap_dimension_mismatch() {
        let a = PureState::basis(2, 0);
        let b = PureState::basis(3, 0);
        assert!(matches!(overlap(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn constrained_pair_overlap_at_right_angle() {
        // Polar angle θ and (θ+π, φ+π/2) give overlap sin θ/√2.
        let theta = FRAC_PI_2;
        let phi = 0.0;
        let psi1 = PureState::from_angles(theta, phi);
        let psi2 = PureState::from_angles(theta + PI, phi + FRAC_PI_2);
        let got = overlap(&psi1, &psi2).unwrap();
        assert!((got - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bell_states_are_orthonormal() {
        for (i, a) in BellState::ALL.iter().enumerate() {
            for (j, b) in BellState::ALL.iter().enumerate() {
                let value = overlap(&a.vector(), &b.vector()).unwrap();
                if i == j {
                    assert!((value - 1.0).abs() < 1e-14);
                } else {
                    assert!(value < 1e-14);
                }
            }
        }
    }

    #[test]
    fn fidelity_examples() {
        assert!((BellState::PsiMinus.projector().fidelity_singlet().unwrap() - 1.0).abs() < 1e-14);
        let mixed = DensityMatrix::new(ComplexMatrix::identity(4).scale_re(0.25)).unwrap();
        assert!((mixed.fidelity_singlet().unwrap() - 0.25).abs() < 1e-14);
        let w = werner(0.51).unwrap();
        assert!((w.fidelity_singlet().unwrap() - 0.51).abs() < 1e-14);
    }

    #[test]
    fn werner_endpoints() {
        assert!(werner(1.0)
            .unwrap()
            .approx_eq(&BellState::PsiMinus.projector(), 1e-15));
        let iso = werner(0.25).unwrap();
        assert!(iso
            .mat()
            .approx_eq(&ComplexMatrix::identity(4).scale_re(0.25), 1e-15));
        assert!(matches!(werner(1.2), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn werner_bell_diagonal_components() {
        let w = werner(0.51).unwrap();
        let expected = [0.51, 0.49 / 3.0, 0.49 / 3.0, 0.49 / 3.0];
        for (state, want) in [
            BellState::PsiMinus,
            BellState::PsiPlus,
            BellState::PhiPlus,
            BellState::PhiMinus,
        ]
        .iter()
        .zip(expected)
        {
            let v = state.vector();
            let applied = w.mat().apply(v.amplitudes());
            let got: Complex64 = v
                .amplitudes()
                .iter()
                .zip(&applied)
                .map(|(a, b)| a.conj() * b)
                .sum();
            assert!((got.re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        let not_hermitian = ComplexMatrix::from_real(2, 2, &[0.5, 0.3, 0.1, 0.5]);
        assert!(matches!(
            DensityMatrix::new(not_hermitian),
            Err(Error::NotHermitian { .. })
        ));
        let negative = ComplexMatrix::from_real(2, 2, &[0.8, 0.0, 0.0, -0.2]);
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::NotPositive { .. })
        ));
        let too_big = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(too_big),
            Err(Error::TraceOutOfRange { .. })
        ));
    }

    #[test]
    fn density_matrix_json_round_trip() {
        let rho = PureState::from_angles(0.8, -1.2).density();
        let json = DensityMatrixJson::from(&rho);
        let back = DensityMatrix::try_from(json).unwrap();
        assert!(back.approx_eq(&rho, 1e-15));
    }

    #[test]
    fn subnormalized_states_are_first_class() {
        let half = DensityMatrix::new(projector_up().scale_re(0.5)).unwrap();
        assert!((half.trace() - 0.5).abs() < 1e-15);
        let renorm = half.renormalized();
        assert!((renorm.trace() - 1.0).abs() < 1e-15);
    }
}
