//! Random test objects: Gaussian vectors, Haar unitaries, Ginibre density operators.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::model::{Context, DensityOperator, Projector};
use crate::numerics::{gram_schmidt, ComplexMatrix, ComplexVector, Tolerance};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `count` i.i.d. complex Gaussian vectors of length `n`.
pub fn random_vectors<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize) -> Vec<ComplexVector> {
    (0..count)
        .map(|_| ComplexVector::from_fn(n, |_, _| gaussian(rng)))
        .collect()
}

pub fn random_ray<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Projector {
    let v = ComplexVector::from_fn(n, |_, _| gaussian(rng));
    Projector::from_vector(&v).expect("Gaussian vector is nonzero")
}

/// Haar-distributed unitary: Gram-Schmidt on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let vs = random_vectors(rng, n, n);
        if let Ok(q) = gram_schmidt(&vs, &Tolerance::default()) {
            return ComplexMatrix::from_columns(&q);
        }
    }
}

/// A + A† with Gaussian A.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng));
    &a + a.adjoint()
}

/// Ginibre ensemble: G G† / Tr(G G†).
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityOperator {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    DensityOperator::new(m.unscale(tr), &Tolerance::default()).expect("Ginibre matrix is a density")
}

/// Columns of a Haar unitary as a context.
pub fn random_context<R: Rng + ?Sized>(rng: &mut R, n: usize, label: &str) -> Context {
    let u = random_unitary(rng, n);
    let cols: Vec<ComplexVector> = u.column_iter().map(|c| c.into_owned()).collect();
    Context::new(&cols, label, &Tolerance::default()).expect("unitary columns are orthonormal")
}
