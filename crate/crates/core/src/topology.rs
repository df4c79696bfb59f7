//! Paths from the identity to permutation matrices.
//!
//! Inside U(n) every permutation matrix is exp(iH) for a self-adjoint H, so
//! t ↦ exp(itH) joins it to the identity. Inside O(n) the determinant is
//! continuous with image {−1, +1}, so odd permutations cannot be reached.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, ensure_square, is_unitary, max_abs, ComplexMatrix, Tolerance, I, ONE, ZERO};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidPermutation("empty image list".into()));
        }
        let mut hit = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() {
                return Err(Error::InvalidPermutation(format!("image {i} out of range 0..{}", images.len())));
            }
            if std::mem::replace(&mut hit[i], true) {
                return Err(Error::InvalidPermutation(format!("image {i} repeated")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(Error::InvalidPermutation(format!("({a} {b}) outside 0..{n}")));
        }
        images.swap(a, b);
        Ok(Self { images })
    }

    /// i ↦ i + 1 mod n
    pub fn cycle(n: usize) -> Self {
        Self {
            images: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    /// All n! permutations in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Self> {
        fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation { images: prefix.clone() });
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    extend(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// (−1)^(n − number of cycles)
    pub fn sign(&self) -> i8 {
        let n = self.n();
        let mut visited = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.images[i];
            }
        }
        if (n - cycles).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Entry (σ(i), i) is one.
pub fn permutation_matrix(sigma: &Permutation) -> ComplexMatrix {
    let n = sigma.n();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, &j) in sigma.images().iter().enumerate() {
        m[(j, i)] = ONE;
    }
    m
}

/// Spectral data of a unitary: U = V diag(e^{iθ}) V† with θ in (−π, π].
#[derive(Debug, Clone)]
pub struct UnitaryLog {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl UnitaryLog {
    /// V diag(e^{itθ}) V†
    pub fn power(&self, t: f64) -> ComplexMatrix {
        self.assemble(|theta| Complex64::from_polar(1.0, t * theta))
    }

    /// Self-adjoint H = V diag(θ) V† with exp(iH) = U.
    pub fn generator(&self) -> ComplexMatrix {
        let h = self.assemble(|theta| Complex64::new(theta, 0.0));
        (&h + h.adjoint()).scale(0.5)
    }

    fn assemble(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &theta) in self.phases.iter().enumerate() {
            let s = f(theta);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Diagonalizes a unitary with the Hermitian solver.
///
/// The commuting self-adjoint parts A = (U+U†)/2 and B = (U−U†)/2i are
/// combined into A + cB; for c = tan φ with φ not a rational multiple of π,
/// distinct eigenvalues of U stay distinct, so the eigenbasis of A + cB
/// diagonalizes U. A phase within `tol` of π (eigenvalue −1) is taken as +π.
pub fn unitary_log(u: &ComplexMatrix, tol: &Tolerance) -> Result<UnitaryLog> {
    let n = ensure_square(u)?;
    let report = is_unitary(u, tol);
    if !report.unitary {
        return Err(Error::NotUnitary {
            deviation: report.deviation,
        });
    }
    let real_part = (u + u.adjoint()).scale(0.5);
    let imag_part = (u - u.adjoint()) * (-I * 0.5);
    let mut worst = f64::INFINITY;
    for mix in [0.5, 0.3, 0.7, 0.2] {
        let k = &real_part + imag_part.scale(mix);
        let eig = eig_hermitian(&k, tol)?;
        let v = eig.vectors;
        let mut phases = Vec::with_capacity(n);
        for col in v.column_iter() {
            let z = (col.adjoint() * u * col)[(0, 0)];
            let theta = if (z + ONE).norm() <= tol.abs_eps {
                std::f64::consts::PI
            } else {
                z.arg()
            };
            phases.push(theta);
        }
        let log = UnitaryLog { phases, vectors: v };
        let residual = max_abs(&(log.power(1.0) - u));
        if residual <= tol.abs_eps {
            return Ok(log);
        }
        worst = worst.min(residual);
    }
    Err(Error::InvalidArgument(format!(
        "could not diagonalize unitary (residual {worst:e})"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathReport {
    pub steps: usize,
    /// U(t_k) at t_k = k/(steps−1).
    #[serde(skip)]
    pub samples: Vec<ComplexMatrix>,
    pub max_unitarity_deviation: f64,
    /// (‖U(0) − I‖_max, ‖U(1) − P_σ‖_max)
    pub endpoint_errors: (f64, f64),
    /// max over k of ‖U(t_{k+1}) − U(t_k)‖_max
    pub max_step_distance: f64,
    #[serde(skip)]
    pub generator: ComplexMatrix,
}

/// Samples t ↦ exp(itH) from the identity to P_σ.
pub fn unitary_path_to_identity(sigma: &Permutation, steps: usize, tol: &Tolerance) -> Result<PathReport> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("steps = {steps}, need at least 2")));
    }
    let n = sigma.n();
    let target = permutation_matrix(sigma);
    let log = unitary_log(&target, tol)?;

    let samples: Vec<ComplexMatrix> = (0..steps)
        .map(|k| log.power(k as f64 / (steps - 1) as f64))
        .collect();
    let max_unitarity_deviation = samples
        .iter()
        .map(|s| is_unitary(s, tol).deviation)
        .fold(0.0, f64::max);
    let endpoint_errors = (
        max_abs(&(&samples[0] - ComplexMatrix::identity(n, n))),
        max_abs(&(&samples[steps - 1] - &target)),
    );
    let max_step_distance = samples
        .windows(2)
        .map(|w| max_abs(&(&w[1] - &w[0])))
        .fold(0.0, f64::max);

    Ok(PathReport {
        steps,
        samples,
        max_unitarity_deviation,
        endpoint_errors,
        max_step_distance,
        generator: log.generator(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrthogonalObstruction {
    pub det_sign: i8,
    pub connected_in_orthogonal_group: bool,
}

pub fn orthogonal_obstruction(sigma: &Permutation) -> OrthogonalObstruction {
    let det_sign = sigma.sign();
    OrthogonalObstruction {
        det_sign,
        connected_in_orthogonal_group: det_sign == 1,
    }
}

/// Numerical determinant of P_σ.
pub fn permutation_determinant(sigma: &Permutation) -> Complex64 {
    let m = permutation_matrix(sigma);
    if m.is_empty() {
        return ONE;
    }
    let d = m.determinant();
    if d.norm() == 0.0 {
        ZERO
    } else {
        d
    }
}
