//! The nonlinear maps at the heart of the crate.
//!
//! Two identical copies of a spin-1/2 state are coupled by a two-spin
//! unitary, then the second (target) spin is measured and kept only when
//! it comes out spin-down. For the XOR gate the surviving source state is
//! exactly the input density matrix with every entry squared by itself,
//! a nonlinear, trace-decreasing map. `square_elements` is that closed
//! form and the fast path; `pipeline` is the literal
//! project·evolve·project tensor computation and serves as its oracle.
//!
//! The same machinery generalizes to n target copies (entries raised to
//! the power n+1), to component-wise squaring of qudit pure states, and,
//! with a different unitary, to the deformed-sphere map evaluated by
//! `sphere_map`.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C_ONE, C_ZERO, UNITARY_TOL};
use crate::states::{
    pauli_x, pauli_z, projector_down, projector_up, BlochVector, DensityMatrix, PureState,
};

/// Tolerance for verifying that a filtered state factors into
/// source ⊗ target-projector.
pub const FACTOR_TOL: f64 = 1e-10;

/// A unitary acting on a (source, target) pair of spins.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitGate {
    u: ComplexMatrix,
}

impl TwoQubitGate {
    /// Wrap a 4x4 matrix, checking unitarity within 1e-10.
    pub fn new(u: ComplexMatrix) -> Result<Self> {
        if u.rows() != 4 || u.cols() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "two-spin gate must be 4x4, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { u })
    }

    /// The XOR (controlled-not) gate: flips the target spin iff the source
    /// spin is up. Block form [[σx, 0], [0, 1]] in the fixed basis order.
    pub fn xor() -> Self {
        let u = projector_up()
            .tensor(&pauli_x())
            .add(&projector_down().tensor(&ComplexMatrix::identity(2)));
        Self { u }
    }

    /// The alternative coupling exp(i π/8 σz ⊗ σx) used for the
    /// deformed-sphere map.
    pub fn exp_zx() -> Self {
        let h = pauli_z()
            .tensor(&pauli_x())
            .scale_re(std::f64::consts::PI / 8.0);
        Self {
            u: h.expi_hermitian().expect("generator is Hermitian"),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }
}

/// Outcome of one filtering transformation.
///
/// `rho_out` is subnormalized: its trace carries the success probability.
/// `success_probability` is conditional on the input trace, so it equals
/// trace(rho_out) for unit-trace inputs. `factored` records whether the
/// filtered two-spin state factored as rho_out ⊗ (target projector)
/// within 1e-10.
#[derive(Debug, Clone)]
pub struct TransformResult {
    pub rho_out: DensityMatrix,
    pub success_probability: f64,
    pub factored: bool,
}

/// The literal three-step computation: pair the state with itself, apply
/// the gate, project the target onto spin-down, and read off the source
/// factor by partial trace.
pub fn pipeline(rho: &DensityMatrix, gate: &TwoQubitGate) -> TransformResult {
    assert_eq!(rho.dim(), 2, "pipeline acts on a single spin-1/2 state");
    let u = gate.matrix();
    let doubled = rho.mat().tensor(rho.mat());
    let evolved = u.matmul(&doubled).matmul(&u.adjoint());
    let filter = ComplexMatrix::identity(2).tensor(&projector_down());
    let filtered = filter.matmul(&evolved).matmul(&filter);

    let source = filtered
        .partial_trace(&[2, 2], &[0])
        .expect("4 = 2 x 2 subsystems");
    let factored = filtered.approx_eq(&source.tensor(&projector_down()), FACTOR_TOL);

    let input_trace = rho.trace();
    let success_probability = source.trace().re / (input_trace * input_trace);
    TransformResult {
        rho_out: DensityMatrix::new(source).expect("filtered state is a valid density matrix"),
        success_probability,
        factored,
    }
}

/// Closed form of the XOR pipeline: every entry squared by itself,
/// (ρ_ij)². Must agree with `pipeline(rho, TwoQubitGate::xor())`
/// entry-wise within 1e-12; the test suite enforces that equivalence.
pub fn square_elements(rho: &DensityMatrix) -> TransformResult {
    assert_eq!(
        rho.dim(),
        2,
        "element squaring acts on a single spin-1/2 state"
    );
    let squared = ComplexMatrix::from_fn(2, 2, |i, j| {
        let e = rho.get(i, j);
        e * e
    });
    let input_trace = rho.trace();
    let success_probability = squared.trace().re / (input_trace * input_trace);
    TransformResult {
        rho_out: DensityMatrix::new(squared).expect("entry-squared state stays positive"),
        success_probability,
        factored: true,
    }
}

/// XOR against `n_targets` target spins at once: flips every target iff
/// the source spin is up. A permutation on 2^(n_targets+1) dimensions.
pub fn generalized_xor(n_targets: usize) -> ComplexMatrix {
    assert!(n_targets >= 1);
    let n = n_targets + 1;
    let dim = 1usize << n;
    let target_mask = dim / 2 - 1;
    ComplexMatrix::from_fn(dim, dim, |row, col| {
        // Source spin up is bit value 0 in the most significant slot.
        let source_up = col < dim / 2;
        let mapped = if source_up { col ^ target_mask } else { col };
        if row == mapped {
            C_ONE
        } else {
            C_ZERO
        }
    })
}

/// Entries raised to the power n+1: the (n+1)-copy generalization of
/// element squaring. `n` is the number of target copies, n ≥ 1.
pub fn power_transform(rho: &DensityMatrix, n: usize) -> Result<TransformResult> {
    if n < 1 {
        return Err(Error::OutOfRange(
            "power transform needs at least one target copy".into(),
        ));
    }
    assert_eq!(rho.dim(), 2);
    let raised = ComplexMatrix::from_fn(2, 2, |i, j| rho.get(i, j).powu(n as u32 + 1));
    let input_trace = rho.trace();
    let success_probability = raised.trace().re / input_trace.powi(n as i32 + 1);
    Ok(TransformResult {
        rho_out: DensityMatrix::new(raised).expect("entry powers of a state stay positive"),
        success_probability,
        factored: true,
    })
}

/// Tensor-route evaluation of the (n+1)-copy transform: n+1 copies, the
/// generalized XOR, then projection of every target onto spin-down.
/// The verification path is limited to n ≤ 3 (dimension 2^(n+1) ≤ 16);
/// it serves as the oracle for `power_transform`.
pub fn power_transform_pipeline(rho: &DensityMatrix, n: usize) -> Result<TransformResult> {
    if !(1..=3).contains(&n) {
        return Err(Error::OutOfRange(
            "the tensor verification path needs 1 to 3 target copies".into(),
        ));
    }
    assert_eq!(rho.dim(), 2);
    let copies = n + 1;
    let mut doubled = rho.mat().clone();
    for _ in 1..copies {
        doubled = doubled.tensor(rho.mat());
    }
    let u = generalized_xor(n);
    let evolved = u.matmul(&doubled).matmul(&u.adjoint());

    let mut filter = ComplexMatrix::identity(2);
    for _ in 0..n {
        filter = filter.tensor(&projector_down());
    }
    let filtered = filter.matmul(&evolved).matmul(&filter);

    let dims = vec![2usize; copies];
    let source = filtered
        .partial_trace(&dims, &[0])
        .expect("power-of-two subsystems");

    let mut target_projector = projector_down();
    for _ in 1..n {
        target_projector = target_projector.tensor(&projector_down());
    }
    let factored = filtered.approx_eq(&source.tensor(&target_projector), FACTOR_TOL);

    let input_trace = rho.trace();
    let success_probability = source.trace().re / input_trace.powi(copies as i32);
    Ok(TransformResult {
        rho_out: DensityMatrix::new(source).expect("filtered state is a valid density matrix"),
        success_probability,
        factored,
    })
}

/// Permutation on a d² -dimensional two-qudit space that exchanges basis
/// states (i, i) ↔ (i, d−1) for every i and fixes everything else. An
/// involution; it routes every squared component into the
/// target-level-(d−1) slice and nothing else into that slice.
pub fn qudit_square_permutation(d: usize) -> ComplexMatrix {
    assert!(d >= 2);
    let dim = d * d;
    let image = |index: usize| {
        let (i, j) = (index / d, index % d);
        if i == j {
            i * d + (d - 1)
        } else if j == d - 1 {
            i * d + i
        } else {
            index
        }
    };
    ComplexMatrix::from_fn(
        dim,
        dim,
        |row, col| {
            if row == image(col) {
                C_ONE
            } else {
                C_ZERO
            }
        },
    )
}

/// Component-wise squaring of a normalized qudit pure state: pair the
/// state with itself, apply `qudit_square_permutation`, project the
/// target qudit onto level d−1. The surviving source amplitudes are
/// (ψ_i)², with squared norm Σ|ψ_i|⁴.
pub fn qudit_square(psi: &PureState) -> PureState {
    let d = psi.dim();
    assert!(d >= 2, "qudit squaring needs dimension ≥ 2");
    assert!(
        (psi.norm() - 1.0).abs() < 1e-10,
        "qudit squaring expects a normalized state"
    );
    let product = psi.tensor(psi);
    let rotated = qudit_square_permutation(d).apply(product.amplitudes());
    // Keep the target-level-(d−1) slice: amplitude of (i, d−1) becomes
    // source component i.
    let out: Vec<_> = (0..d).map(|i| rotated[i * d + (d - 1)]).collect();
    PureState::subnormalized(out)
}

/// One grid point of the sphere map.
#[derive(Debug, Clone)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
    pub input: BlochVector,
    /// Output polarization without trace normalization.
    pub output: BlochVector,
    /// Output polarization of the renormalized state.
    pub output_normalized: BlochVector,
    pub success_probability: f64,
}

/// Evaluate the filtering transformation over a (θ, φ) grid of pure
/// input states and report both output polarization conventions.
///
/// θ runs over `n_theta` points from 0 to π inclusive, φ over `n_phi`
/// points from 0 to 2π exclusive; rows are θ-major. Grid points are
/// independent, so evaluation is data-parallel when the `parallel`
/// feature is enabled; the output order is by grid index either way.
pub fn sphere_map(gate: &TwoQubitGate, n_theta: usize, n_phi: usize) -> Vec<SpherePoint> {
    #[cfg(feature = "parallel")]
    {
        sphere_grid(n_theta, n_phi)
            .into_par_iter()
            .map(|(theta, phi)| sphere_point(gate, theta, phi))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sphere_map_seq(gate, n_theta, n_phi)
    }
}

/// Single-threaded evaluation of the same grid; the fallback path, and
/// bit-identical to `sphere_map`.
pub fn sphere_map_seq(gate: &TwoQubitGate, n_theta: usize, n_phi: usize) -> Vec<SpherePoint> {
    sphere_grid(n_theta, n_phi)
        .into_iter()
        .map(|(theta, phi)| sphere_point(gate, theta, phi))
        .collect()
}

fn sphere_grid(n_theta: usize, n_phi: usize) -> Vec<(f64, f64)> {
    assert!(
        n_theta >= 2 && n_phi >= 2,
        "grid needs at least 2 points per axis"
    );
    let pi = std::f64::consts::PI;
    let mut grid = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = pi * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi = 2.0 * pi * j as f64 / n_phi as f64;
            grid.push((theta, phi));
        }
    }
    grid
}

fn sphere_point(gate: &TwoQubitGate, theta: f64, phi: f64) -> SpherePoint {
    let rho = PureState::from_angles(theta, phi).density();
    let result = pipeline(&rho, gate);
    SpherePoint {
        theta,
        phi,
        input: BlochVector::from_spherical(theta, phi),
        output: result.rho_out.bloch_vector().expect("output is 2x2"),
        output_normalized: result
            .rho_out
            .bloch_vector_normalized()
            .expect("output is 2x2"),
        success_probability: result.success_probability,
    }
}
