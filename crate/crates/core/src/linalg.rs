//! Dense complex linear algebra for small dimensions (2 through 16).
//!
//! Everything a four-spin filtering pipeline needs: products, adjoints,
//! Kronecker products, partial traces, Hermitian eigenvalues and unitary
//! exponentials. Matrices are dense and row-major; at these sizes clarity
//! and exactness beat throughput, so there are no sparse formats and no
//! BLAS back end.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Complex number type used for all matrix entries, f64 precision.
pub type Complex64 = num_complex::Complex<f64>;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

/// Default absolute tolerance for entry-wise comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Tolerance when certifying Hermiticity of inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance when certifying unitarity.
pub const UNITARY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
const JACOBI_TOL: f64 = 1e-12;
/// Maximum number of cyclic Jacobi sweeps.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Create a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count must be rows * cols"
        );
        assert!(
            entries.iter().all(|c| c.re.is_finite() && c.im.is_finite()),
            "matrix entries must be finite"
        );
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![C_ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C_ONE);
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    /// Square matrix with the given diagonal, zero elsewhere.
    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { C_ZERO })
    }

    /// Real-valued matrix from row-major f64 entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self::new(
            rows,
            cols,
            entries.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix.
    pub fn dim(&self) -> usize {
        assert!(self.is_square(), "dim() requires a square matrix");
        self.rows
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C_ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|c| c * factor).collect(),
        )
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Kronecker product. The left factor carries the most significant
    /// index: row (i_a, i_b) of `a ⊗ b` is i_a * b.rows + i_b.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.get(ia, ja);
                if a == C_ZERO {
                    continue;
                }
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        out.set(
                            ia * other.rows + ib,
                            ja * other.cols + jb,
                            a * other.get(ib, jb),
                        );
                    }
                }
            }
        }
        out
    }

    /// Trace out every subsystem not listed in `keep`.
    ///
    /// `dims` are the per-subsystem dimensions, most significant first, and
    /// must multiply to the matrix dimension. Kept subsystems preserve their
    /// relative order; keeping all of them returns the matrix unchanged.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "partial trace requires a square matrix".into(),
            ));
        }
        let total: usize = dims.iter().product();
        if total != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dimensions multiply to {total}, matrix dimension is {}",
                self.rows
            )));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.iter().any(|&k| k >= dims.len()) {
            return Err(Error::DimensionMismatch(format!(
                "kept subsystem index out of range (have {} subsystems)",
                dims.len()
            )));
        }

        let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
        let mut out = Self::zeros(kept_dim, kept_dim);

        // Strides for decomposing a full index into per-subsystem digits.
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let digit = |index: usize, sub: usize| (index / strides[sub]) % dims[sub];
        let kept_index = |index: usize| {
            keep.iter()
                .fold(0usize, |acc, &k| acc * dims[k] + digit(index, k))
        };
        let discarded: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();

        for row in 0..total {
            for col in 0..total {
                if discarded.iter().any(|&s| digit(row, s) != digit(col, s)) {
                    continue;
                }
                let (i, j) = (kept_index(row), kept_index(col));
                let v = out.get(i, j) + self.get(row, col);
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn max_hermitian_asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut max = 0.0f64;
        for i in 0..self.rows {
            for j in 0..=i {
                max = max.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        max
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_hermitian_asymmetry() <= tol
    }

    /// Largest entry-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Deviation of U U† from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        assert!(self.is_square());
        self.matmul(&self.adjoint())
            .max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_deviation() <= tol
    }

    /// Apply the matrix to a vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    sum += self.get(i, j).norm_sqr();
                }
            }
        }
        sum.sqrt()
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    ///
    /// Uses cyclic complex Jacobi rotations (off-diagonal norm below 1e-12
    /// or 100 sweeps). Fails if the matrix is not Hermitian within 1e-10.
    pub fn eigvals_hermitian(&self) -> Result<HermitianEigenvalues> {
        let (values, _) = self.eigh_hermitian()?;
        Ok(HermitianEigenvalues { values })
    }

    /// Eigenvalues (ascending) and the matching unitary of eigenvectors
    /// (columns), for a Hermitian matrix.
    pub fn eigh_hermitian(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "eigendecomposition requires a square matrix".into(),
            ));
        }
        let asym = self.max_hermitian_asymmetry();
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
                tol: HERMITIAN_TOL,
            });
        }

        let n = self.rows;
        // Symmetrize away representation dust before iterating.
        let mut a = self.add(&self.adjoint()).scale_re(0.5);
        let mut v = ComplexMatrix::identity(n);

        for _sweep in 0..JACOBI_MAX_SWEEPS {
            if a.off_diagonal_norm() <= JACOBI_TOL {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let abs = apq.norm();
                    if abs < 1e-300 {
                        continue;
                    }
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let phase = apq / abs;
                    let tau = (aqq - app) / (2.0 * abs);
                    // Small-magnitude root of t^2 - 2 tau t - 1 = 0.
                    let t = if tau >= 0.0 {
                        -1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // Plane rotation on (p, q): g_pp = c, g_pq = -s e^{iφ},
                    // g_qp = s e^{-iφ}, g_qq = c; annihilates a_pq.
                    let mut g = ComplexMatrix::identity(n);
                    g.set(p, p, Complex64::new(c, 0.0));
                    g.set(p, q, -phase.scale(s));
                    g.set(q, p, phase.conj().scale(s));
                    g.set(q, q, Complex64::new(c, 0.0));

                    a = g.adjoint().matmul(&a).matmul(&g);
                    v = v.matmul(&g);
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

        let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
        Ok((values, vectors))
    }

    /// Unitary exponential exp(i H) of a Hermitian matrix H.
    pub fn expi_hermitian(&self) -> Result<ComplexMatrix> {
        let (values, vectors) = self.eigh_hermitian()?;
        let phases: Vec<Complex64> = values
            .iter()
            .map(|&l| Complex64::new(l.cos(), l.sin()))
            .collect();
        Ok(vectors
            .matmul(&ComplexMatrix::diagonal(&phases))
            .matmul(&vectors.adjoint()))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(other)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::add(self, other)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, other)
    }
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigenvalues {
    pub values: Vec<f64>,
}

impl HermitianEigenvalues {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Embed a two-qubit gate into an n-qubit space, acting on the given
/// (source, target) qubit slots. Qubit 0 is the most significant index.
pub fn embed_two_qubit(
    gate: &ComplexMatrix,
    n_qubits: usize,
    source: usize,
    target: usize,
) -> ComplexMatrix {
    assert_eq!(gate.rows(), 4, "gate must be 4x4");
    assert_eq!(gate.cols(), 4, "gate must be 4x4");
    assert!(source < n_qubits && target < n_qubits && source != target);
    let dim = 1usize << n_qubits;
    let bit = |index: usize, q: usize| (index >> (n_qubits - 1 - q)) & 1;
    ComplexMatrix::from_fn(dim, dim, |row, col| {
        for q in 0..n_qubits {
            if q != source && q != target && bit(row, q) != bit(col, q) {
                return C_ZERO;
            }
        }
        let r = (bit(row, source) << 1) | bit(row, target);
        let c = (bit(col, source) << 1) | bit(col, target);
        gate.get(r, c)
    })
}

/// Embed a single-qubit operator on one slot of an n-qubit space.
pub fn embed_single_qubit(op: &ComplexMatrix, n_qubits: usize, qubit: usize) -> ComplexMatrix {
    assert_eq!(op.rows(), 2, "operator must be 2x2");
    assert_eq!(op.cols(), 2, "operator must be 2x2");
    assert!(qubit < n_qubits);
    let dim = 1usize << n_qubits;
    let bit = |index: usize, q: usize| (index >> (n_qubits - 1 - q)) & 1;
    ComplexMatrix::from_fn(dim, dim, |row, col| {
        for q in 0..n_qubits {
            if q != qubit && bit(row, q) != bit(col, q) {
                return C_ZERO;
            }
        }
        op.get(bit(row, qubit), bit(col, qubit))
    })
}
