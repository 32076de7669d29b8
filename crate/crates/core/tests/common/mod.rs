use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rhosq::linalg::{Complex64, ComplexMatrix};
use rhosq::{DensityMatrix, PureState};

/// Random unit-trace density matrix: A A† normalized, A complex uniform.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        )
    });
    let gram = a.matmul(&a.adjoint());
    let trace = gram.trace().re;
    DensityMatrix::new(gram.scale_re(1.0 / trace)).expect("normalized Gram matrix is a state")
}

/// Random normalized pure state of the given dimension.
pub fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> PureState {
    let raw: Vec<Complex64> = (0..dim)
        .map(|_| {
            Complex64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        })
        .collect();
    let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    PureState::new_normalized(raw.into_iter().map(|c| c / norm).collect())
        .expect("explicitly normalized")
}
