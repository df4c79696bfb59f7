//! Dense complex linear algebra with a single tolerance policy.
//!
//! Matrices and vectors are plain `nalgebra` dynamic types over `Complex64`.
//! Every approximate comparison in the crate goes through [`Tolerance`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Absolute and relative slack for approximate equality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_eps: 1e-9,
            rel_eps: 1e-9,
        }
    }
}

impl Tolerance {
    const SANITY_BOUND: f64 = 1e-3;

    pub fn new(abs_eps: f64, rel_eps: f64) -> Result<Self> {
        for (name, v) in [("abs_eps", abs_eps), ("rel_eps", rel_eps)] {
            if !(0.0..Self::SANITY_BOUND).contains(&v) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {v} must lie in [0, {})",
                    Self::SANITY_BOUND
                )));
            }
        }
        Ok(Self { abs_eps, rel_eps })
    }

    /// Same relative slack, different absolute slack.
    pub fn with_abs(abs_eps: f64) -> Result<Self> {
        Self::new(abs_eps, Self::default().rel_eps)
    }

    /// `value` is negligible against a quantity of magnitude `scale`.
    pub fn is_small(&self, value: f64, scale: f64) -> bool {
        value <= self.abs_eps + self.rel_eps * scale
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨u|v⟩, antilinear in the first argument.
pub fn inner(u: &ComplexVector, v: &ComplexVector) -> Complex64 {
    u.dotc(v)
}

/// |v⟩⟨v|
pub fn outer(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Tr(AB) without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn conj_vector(v: &ComplexVector) -> ComplexVector {
    v.map(|z| z.conj())
}

pub fn conj_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    m.map(|z| z.conj())
}

pub fn all_finite<'a>(entries: impl IntoIterator<Item = &'a Complex64>) -> bool {
    entries.into_iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// ‖M − M†‖_max
pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Orthonormalize `vectors` with two-pass modified Gram-Schmidt.
pub fn gram_schmidt(vectors: &[ComplexVector], tol: &Tolerance) -> Result<Vec<ComplexVector>> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::InvalidArgument("gram_schmidt needs at least one vector".into()))?;
    let n = first.len();
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(vectors.len());
    let mut dependent = false;
    for v in vectors {
        ensure_dim(n, v.len())?;
        if !all_finite(v.iter()) {
            return Err(Error::NonFinite);
        }
        let original = v.norm();
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &basis {
                let c = inner(q, &w);
                w.axpy(-c, q, ONE);
            }
        }
        let norm = w.norm();
        if original == 0.0 || tol.is_small(norm, original) {
            dependent = true;
            continue;
        }
        basis.push(w.unscale(norm));
    }
    if dependent {
        return Err(Error::DependentInput {
            rank: basis.len(),
            count: vectors.len(),
        });
    }
    Ok(basis)
}

/// Spectral decomposition of a self-adjoint matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column k is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V diag(f(λ)) V†
    pub fn reassemble(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let s = f(lambda);
            for i in 0..n {
                scaled[(i, k)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn eig_hermitian(m: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    let n = ensure_square(m)?;
    if !all_finite(m.iter()) {
        return Err(Error::NonFinite);
    }
    let deviation = hermiticity_deviation(m);
    if !tol.is_small(deviation, max_abs(m)) {
        return Err(Error::NotHermitian { deviation });
    }
    let symmetrized = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(symmetrized);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Outcome of a unitarity test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitarityReport {
    pub unitary: bool,
    /// ‖M†M − I‖_max
    pub deviation: f64,
}

/// Non-square input is reported as non-unitary with infinite deviation.
pub fn is_unitary(m: &ComplexMatrix, tol: &Tolerance) -> UnitarityReport {
    if m.nrows() != m.ncols() {
        return UnitarityReport {
            unitary: false,
            deviation: f64::INFINITY,
        };
    }
    let gram = m.adjoint() * m;
    let deviation = max_abs(&(gram - ComplexMatrix::identity(m.nrows(), m.ncols())));
    UnitarityReport {
        unitary: deviation <= tol.abs_eps,
        deviation,
    }
}

/// Builds a column vector from (re, im) pairs.
pub fn cvec(entries: &[(f64, f64)]) -> ComplexVector {
    ComplexVector::from_iterator(entries.len(), entries.iter().map(|&(re, im)| Complex64::new(re, im)))
}

/// Builds a column vector from real entries.
pub fn rvec(entries: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(entries.len(), entries.iter().map(|&re| Complex64::new(re, 0.0)))
}

/// Standard basis vector e_k of length n.
pub fn basis_vector(n: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(n);
    v[k] = ONE;
    v
}

/// Columns of the n×n discrete Fourier matrix divided by √n.
pub fn fourier_basis(n: usize) -> Vec<ComplexVector> {
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            ComplexVector::from_fn(n, |j, _| {
                let phase = 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
                Complex64::from_polar(scale, phase)
            })
        })
        .collect()
}
