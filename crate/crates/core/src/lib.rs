//! Nonlinear transformations of spin-1/2 states, built from the quantum
//! XOR gate plus post-selection, and their two applications: optimal
//! unambiguous discrimination of non-orthogonal states and iterative
//! purification of mixed entangled pairs.
//!
//! The crate pairs every closed-form map with the literal tensor
//! computation it abbreviates, so each nonlinear shortcut is testable
//! against the project-evolve-project route that realizes it.
//!
//! Grid sweeps and Monte Carlo trials are data-parallel via rayon when
//! the default `parallel` feature is enabled; the `*_seq` variants run
//! the same computations single-threaded and return bit-identical
//! results. Disabling the feature makes the sequential path the only
//! path.
//!
//! # Example
//!
//! ```
//! use rhosq::{square_elements, PureState};
//! use rhosq::purification::{iterate, Variant};
//!
//! // Squaring the entries of a pure equatorial state succeeds half the time.
//! let rho = PureState::from_angles(std::f64::consts::FRAC_PI_2, 0.0).density();
//! let out = square_elements(&rho);
//! assert!((out.success_probability - 0.5).abs() < 1e-12);
//!
//! // Iterated purification drives an isotropic pair towards the singlet.
//! let trajectory = iterate(0.51, 15, Variant::MinusOnly)?;
//! assert!(trajectory.steps[15].fidelity > 0.999);
//! # Ok::<(), rhosq::Error>(())
//! ```

pub mod discrimination;
pub mod error;
pub mod linalg;
pub mod purification;
pub mod states;
pub mod transform;

pub use error::{Error, Result};
pub use linalg::{Complex64, ComplexMatrix, HermitianEigenvalues};
pub use states::{
    overlap, werner, BellState, BlochVector, DensityMatrix, DensityMatrixJson, PureState,
};
pub use transform::{
    pipeline, power_transform, qudit_square, sphere_map, sphere_map_seq, square_elements,
    SpherePoint, TransformResult, TwoQubitGate,
};
