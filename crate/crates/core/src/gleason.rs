//! Frame functions and density-operator reconstruction.
//!
//! Self-adjoint N×N matrices are coordinatized by a real orthonormal basis
//! (I/√N followed by the generalized Gell-Mann matrices, normalized so that
//! Tr(B_a B_b) = δ_ab). A frame sample (P, f) becomes one real linear equation
//! Σ_a x_a Tr(B_a P) = f, and the trace-one slice fixes x_0 = 1/√N.

use nalgebra::{DMatrix, DVector, SVD};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Context, DensityOperator, Projector};
use crate::numerics::{
    eig_hermitian, ensure_dim, frobenius, trace_product, ComplexMatrix, ComplexVector, Tolerance,
    I, ONE,
};

/// Singular values below this fraction of the largest are treated as zero.
const RANK_RTOL: f64 = 1e-10;

const SAMPLE_SLACK: f64 = 1e-12;

/// One evaluation f(P) of a candidate frame function.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSample {
    pub projector: Projector,
    pub value: f64,
}

impl FrameSample {
    pub fn new(projector: Projector, value: f64) -> Result<Self> {
        if !(-SAMPLE_SLACK..=1.0 + SAMPLE_SLACK).contains(&value) {
            return Err(Error::ValueOutOfRange { index: 0, value });
        }
        Ok(Self { projector, value })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameValidation {
    /// max over contexts of |Σ_i f(P_i) − 1|
    pub max_deviation: f64,
    pub worst_context: Option<String>,
    pub passes: bool,
}

/// Checks that per-context sums equal one.
pub fn validate_frame_function(
    samples_by_context: &[(Context, Vec<f64>)],
    tol: &Tolerance,
) -> Result<FrameValidation> {
    let mut max_deviation: f64 = 0.0;
    let mut worst_context = None;
    for (context, values) in samples_by_context {
        ensure_dim(context.dim(), values.len())?;
        for (index, &value) in values.iter().enumerate() {
            if !(value >= -tol.abs_eps && value <= 1.0 + tol.abs_eps) {
                return Err(Error::ValueOutOfRange { index, value });
            }
        }
        let deviation = (values.iter().sum::<f64>() - 1.0).abs();
        if worst_context.is_none() || deviation > max_deviation {
            max_deviation = deviation;
            worst_context = Some(context.label().to_owned());
        }
    }
    Ok(FrameValidation {
        max_deviation,
        worst_context,
        passes: max_deviation <= tol.abs_eps,
    })
}

/// Orthonormal real basis of the N×N self-adjoint matrices; element 0 is I/√N.
pub fn hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(n * n);
    basis.push(ComplexMatrix::identity(n, n).unscale((n as f64).sqrt()));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..n {
        for k in j + 1..n {
            let mut sym = ComplexMatrix::zeros(n, n);
            sym[(j, k)] = ONE * h;
            sym[(k, j)] = ONE * h;
            basis.push(sym);

            let mut anti = ComplexMatrix::zeros(n, n);
            anti[(j, k)] = -I * h;
            anti[(k, j)] = I * h;
            basis.push(anti);
        }
    }
    for l in 1..n {
        let scale = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = ComplexMatrix::zeros(n, n);
        for j in 0..l {
            diag[(j, j)] = ONE * scale;
        }
        diag[(l, l)] = ONE * (-(l as f64) * scale);
        basis.push(diag);
    }
    basis
}

fn design_matrix(projectors: &[&Projector], basis: &[ComplexMatrix]) -> DMatrix<f64> {
    DMatrix::from_fn(projectors.len(), basis.len(), |k, a| {
        trace_product(&basis[a], projectors[k].matrix()).re
    })
}

fn rank_and_condition(svd: &SVD<f64, nalgebra::Dyn, nalgebra::Dyn>) -> (usize, f64) {
    let sv = &svd.singular_values;
    let largest = sv.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return (0, f64::INFINITY);
    }
    let kept: Vec<f64> = sv.iter().cloned().filter(|&s| s > largest * RANK_RTOL).collect();
    let smallest = kept.iter().cloned().fold(f64::INFINITY, f64::min);
    (kept.len(), largest / smallest)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Completeness {
    /// Dimension of the real span inside the N²-dimensional self-adjoint space.
    pub rank: usize,
    /// σ_max / σ_min over the nonzero singular values of the design map.
    pub condition_number: f64,
}

pub fn informational_completeness(projectors: &[Projector]) -> Result<Completeness> {
    let Some(first) = projectors.first() else {
        return Ok(Completeness {
            rank: 0,
            condition_number: f64::INFINITY,
        });
    };
    let n = first.dim();
    for p in projectors {
        ensure_dim(n, p.dim())?;
    }
    let refs: Vec<&Projector> = projectors.iter().collect();
    let design = design_matrix(&refs, &hermitian_basis(n));
    let (rank, condition_number) = rank_and_condition(&SVD::new(design, false, false));
    Ok(Completeness {
        rank,
        condition_number,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    pub rho: DensityOperator,
    /// RMS of Tr(ρP_k) − f_k over the samples, for the returned ρ.
    pub residual_rms: f64,
    pub design_rank: usize,
    pub condition_number: f64,
    /// Frobenius distance moved by the PSD projection.
    pub psd_correction: f64,
}

/// Least-squares density operator on the trace-one slice, projected once onto the PSD cone.
pub fn reconstruct_density(samples: &[FrameSample], tol: &Tolerance) -> Result<ReconstructionReport> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidArgument("no frame samples".into()))?;
    let n = first.projector.dim();
    for s in samples {
        ensure_dim(n, s.projector.dim())?;
    }
    if n < 3 {
        return Err(Error::DimensionTooSmall { dim: n });
    }

    let basis = hermitian_basis(n);
    let refs: Vec<&Projector> = samples.iter().map(|s| &s.projector).collect();
    let design = design_matrix(&refs, &basis);
    let (design_rank, condition_number) =
        rank_and_condition(&SVD::new(design.clone(), false, false));
    if design_rank < n * n {
        return Err(Error::NotInformationallyComplete {
            rank: design_rank,
            required: n * n,
        });
    }

    // Column 0 carries the fixed trace coordinate 1/√N, contributing 1/N to every row.
    let reduced = design.columns(1, n * n - 1).into_owned();
    let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.value - 1.0 / n as f64));
    let svd = SVD::new(reduced, true, true);
    let largest = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let coords = svd
        .solve(&rhs, largest * RANK_RTOL)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;

    let mut least_squares = basis[0].unscale((n as f64).sqrt());
    for (a, &x) in coords.iter().enumerate() {
        least_squares += basis[a + 1].scale(x);
    }
    let least_squares = (&least_squares + least_squares.adjoint()).scale(0.5);

    let eig = eig_hermitian(&least_squares, tol)?;
    let (matrix, psd_correction) = if eig.values[0] >= 0.0 {
        (least_squares, 0.0)
    } else {
        let clipped_trace: f64 = eig.values.iter().map(|&l| l.max(0.0)).sum();
        let projected = eig.reassemble(|l| Complex64::new(l.max(0.0) / clipped_trace, 0.0));
        let projected = (&projected + projected.adjoint()).scale(0.5);
        let moved = frobenius(&(&projected - &least_squares));
        (projected, moved)
    };

    let rho = DensityOperator::new(matrix, tol)?;
    let residual_rms = (samples
        .iter()
        .map(|s| (trace_product(rho.matrix(), s.projector.matrix()).re - s.value).powi(2))
        .sum::<f64>()
        / samples.len() as f64)
        .sqrt();

    Ok(ReconstructionReport {
        rho,
        residual_rms,
        design_rank,
        condition_number,
        psd_correction,
    })
}

/// The rank-one projector equal to ρ when its top eigenvalue reaches one.
pub fn born_case_check(rho: &DensityOperator, tol: &Tolerance) -> Option<Projector> {
    let eig = eig_hermitian(rho.matrix(), tol).ok()?;
    let top = *eig.values.last()?;
    if top < 1.0 - tol.abs_eps {
        return None;
    }
    let v: ComplexVector = eig.vectors.column(eig.values.len() - 1).into_owned();
    Projector::from_vector(&v).ok()
}

/// Complete set of p + 1 mutually unbiased bases for an odd prime p:
/// the standard basis plus (1/√p) Σ_j ω^{b j² + m j} |j⟩ for b = 0..p−1.
pub fn mutually_unbiased_bases(p: usize) -> Result<Vec<Context>> {
    let is_odd_prime = p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    if !is_odd_prime {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let scale = 1.0 / (p as f64).sqrt();
    let mut bases = vec![Context::standard(p, "mub-z")];
    for b in 0..p {
        let vectors: Vec<ComplexVector> = (0..p)
            .map(|m| {
                ComplexVector::from_fn(p, |j, _| {
                    let exponent = (b * j * j + m * j) % p;
                    Complex64::from_polar(scale, 2.0 * std::f64::consts::PI * exponent as f64 / p as f64)
                })
            })
            .collect();
        bases.push(Context::new(&vectors, &format!("mub-{b}"), &Tolerance::default())?);
    }
    Ok(bases)
}

/// e_j together with (e_j + e_k)/√2 and (e_j + i e_k)/√2 for j < k:
/// N² rays, informationally complete in every dimension.
pub fn superposition_family(n: usize) -> Vec<Projector> {
    let mut family: Vec<Projector> = Context::standard(n, "z").projectors().to_vec();
    for j in 0..n {
        for k in j + 1..n {
            for phase in [ONE, I] {
                let mut v = ComplexVector::zeros(n);
                v[j] = ONE;
                v[k] = phase;
                family.push(Projector::from_vector(&v).expect("nonzero"));
            }
        }
    }
    family
}
