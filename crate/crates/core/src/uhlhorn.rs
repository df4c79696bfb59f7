//! Certification of orthogonality-preserving ray maps.
//!
//! A [`RayMap`] is a finite witness of a bijection on rank-one projectors. The
//! branch (unitary or antiunitary) is read off the Bargmann invariants
//! Tr(P₁P₂P₃), which unitaries preserve and antiunitaries conjugate. The
//! operator itself is reconstructed from the images of a phase-fixing gadget:
//! a fiduciary basis {f_k} plus the rays (f₁+f_k)/√2 and (f₁+i f_k)/√2.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Context, ContextTransform, Projector};
use crate::numerics::{
    ensure_dim, inner, max_abs, trace, ComplexMatrix, ComplexVector, Tolerance, I, ONE,
};

/// Largest acceptable ‖Γ(P) − U·P·U†‖_max over the listed pairs.
pub const FIT_RESIDUAL_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct RayMap {
    pairs: Vec<(Projector, Projector)>,
    covering_contexts: Vec<Context>,
}

impl RayMap {
    pub fn new(
        pairs: Vec<(Projector, Projector)>,
        covering_contexts: Vec<Context>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = pairs
            .first()
            .ok_or_else(|| Error::InvalidRayMap("no pairs".into()))?
            .0
            .dim();
        if n < 3 {
            return Err(Error::DimensionTooSmall { dim: n });
        }
        for (s, t) in &pairs {
            ensure_dim(n, s.dim())?;
            ensure_dim(n, t.dim())?;
        }
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                if pairs[i].0.same_ray(&pairs[j].0, tol) {
                    return Err(Error::InvalidRayMap(format!("sources {i} and {j} coincide")));
                }
                if pairs[i].1.same_ray(&pairs[j].1, tol) {
                    return Err(Error::InvalidRayMap(format!("targets {i} and {j} coincide")));
                }
            }
        }
        for (ci, c) in covering_contexts.iter().enumerate() {
            ensure_dim(n, c.dim())?;
            for (k, p) in c.projectors().iter().enumerate() {
                if !pairs.iter().any(|(s, _)| s.same_ray(p, tol)) {
                    return Err(Error::InvalidRayMap(format!(
                        "covering context {ci} ('{}') ray {k} is not a source",
                        c.label()
                    )));
                }
            }
        }
        Ok(Self {
            pairs,
            covering_contexts,
        })
    }

    /// The map P ↦ g·P restricted to `sources`.
    pub fn induced(
        sources: Vec<Projector>,
        covering_contexts: Vec<Context>,
        g: &ContextTransform,
        tol: &Tolerance,
    ) -> Result<Self> {
        let pairs = sources
            .into_iter()
            .map(|s| {
                let t = g.act_projector(&s);
                (s, t)
            })
            .collect();
        Self::new(pairs, covering_contexts, tol)
    }

    pub fn dim(&self) -> usize {
        self.pairs[0].0.dim()
    }

    pub fn pairs(&self) -> &[(Projector, Projector)] {
        &self.pairs
    }

    pub fn covering_contexts(&self) -> &[Context] {
        &self.covering_contexts
    }

    fn source_index(&self, p: &Projector, tol: &Tolerance) -> Option<usize> {
        self.pairs.iter().position(|(s, _)| s.same_ray(p, tol))
    }
}

/// The 2(N−1) superposition rays that pin down phases relative to `fiducial`.
pub fn phase_fixing_gadget(fiducial: &Context) -> Vec<Projector> {
    let f = fiducial.vectors();
    let mut rays = Vec::with_capacity(2 * (f.len() - 1));
    for fk in &f[1..] {
        for phase in [ONE, I] {
            let v: ComplexVector = &f[0] + fk * phase;
            rays.push(Projector::from_vector(&v).expect("orthonormal sum is nonzero"));
        }
    }
    rays
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityViolation {
    pub i: usize,
    pub j: usize,
    pub source_norm: f64,
    pub target_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityCheck {
    pub preserving: bool,
    pub counterexample: Option<OrthogonalityViolation>,
}

/// Checks P_iP_j = 0 ⇔ Γ(P_i)Γ(P_j) = 0 over every listed pair.
pub fn check_orthogonality_preserving(m: &RayMap, tol: &Tolerance) -> OrthogonalityCheck {
    let pairs = m.pairs();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let source_norm = max_abs(&(pairs[i].0.matrix() * pairs[j].0.matrix()));
            let target_norm = max_abs(&(pairs[i].1.matrix() * pairs[j].1.matrix()));
            if (source_norm <= tol.abs_eps) != (target_norm <= tol.abs_eps) {
                return OrthogonalityCheck {
                    preserving: false,
                    counterexample: Some(OrthogonalityViolation {
                        i,
                        j,
                        source_norm,
                        target_norm,
                    }),
                };
            }
        }
    }
    OrthogonalityCheck {
        preserving: true,
        counterexample: None,
    }
}

/// Tr(P₁P₂P₃)
pub fn bargmann_invariant(p1: &Projector, p2: &Projector, p3: &Projector) -> Result<Complex64> {
    ensure_dim(p1.dim(), p2.dim())?;
    ensure_dim(p1.dim(), p3.dim())?;
    Ok(trace(&(p1.matrix() * p2.matrix() * p3.matrix())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Unitary,
    Antiunitary,
    Neither,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BargmannWitness {
    /// Indices into the ray map's pairs.
    pub triple: [usize; 3],
    pub source: Complex64,
    pub target: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformClassification {
    pub verdict: Verdict,
    pub witness: Option<BargmannWitness>,
}

fn gram(rays: impl Iterator<Item = ComplexVector>) -> Vec<Vec<Complex64>> {
    let vs: Vec<_> = rays.collect();
    vs.iter()
        .map(|a| vs.iter().map(|b| inner(a, b)).collect())
        .collect()
}

/// Decides the branch from every source triple whose invariant is not real.
pub fn classify_transform(m: &RayMap, tol: &Tolerance) -> Result<TransformClassification> {
    if let Some(v) = check_orthogonality_preserving(m, tol).counterexample {
        return Err(Error::HypothesisViolated { i: v.i, j: v.j });
    }
    let src = gram(m.pairs().iter().map(|(s, _)| s.representative().clone()));
    let tgt = gram(m.pairs().iter().map(|(_, t)| t.representative().clone()));
    // ⟨a|b⟩⟨b|c⟩⟨c|a⟩ = Tr(P_a P_b P_c)
    let invariant = |g: &[Vec<Complex64>], a: usize, b: usize, c: usize| g[a][b] * g[b][c] * g[c][a];

    let count = m.pairs().len();
    let mut first_nonreal = None;
    let mut unitary_violation = None;
    let mut anti_violation = None;
    for a in 0..count {
        for b in a + 1..count {
            for c in b + 1..count {
                let source = invariant(&src, a, b, c);
                if source.im.abs() <= tol.abs_eps {
                    continue;
                }
                let target = invariant(&tgt, a, b, c);
                let witness = BargmannWitness {
                    triple: [a, b, c],
                    source,
                    target,
                };
                first_nonreal.get_or_insert(witness);
                if (target - source).norm() > tol.abs_eps {
                    unitary_violation.get_or_insert(witness);
                }
                if (target - source.conj()).norm() > tol.abs_eps {
                    anti_violation.get_or_insert(witness);
                }
            }
        }
    }

    let (verdict, witness) = match (first_nonreal, unitary_violation, anti_violation) {
        (None, _, _) => (Verdict::Inconclusive, None),
        (Some(w), None, _) => (Verdict::Unitary, Some(w)),
        (Some(w), Some(_), None) => (Verdict::Antiunitary, Some(w)),
        (Some(_), Some(u), Some(_)) => (Verdict::Neither, Some(u)),
    };
    Ok(TransformClassification { verdict, witness })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub transform: ContextTransform,
    pub classification: TransformClassification,
    /// max over listed pairs of ‖Γ(P) − U·act(P)·U†‖_max
    pub residual: f64,
    /// Branch could not be decided; the unitary fit was used.
    pub branch_ambiguous: bool,
    /// Label of the covering context that served as the fiduciary basis.
    pub fiducial: String,
}

/// Reconstructs the inducing (anti)unitary from the gadget images.
///
/// With fiduciary basis F (columns f_k) and images t_k of f_k, the operator is
/// T·C·F† (unitary) or T·C·Fᵀ acting after conjugation (antiunitary), where
/// C = diag(c_k) holds the relative phases read off the (f₁+f_k) images.
pub fn fit_transform(m: &RayMap, tol: &Tolerance) -> Result<FitReport> {
    let classification = classify_transform(m, tol)?;
    let n = m.dim();

    let (fiducial, basis_idx, sum_idx) = m
        .covering_contexts()
        .iter()
        .find_map(|c| {
            let basis: Option<Vec<usize>> =
                c.projectors().iter().map(|p| m.source_index(p, tol)).collect();
            let gadget: Option<Vec<usize>> = phase_fixing_gadget(c)
                .iter()
                .map(|p| m.source_index(p, tol))
                .collect();
            Some((c, basis?, gadget?))
        })
        .ok_or(Error::MissingGadget)?;

    let antiunitary = classification.verdict == Verdict::Antiunitary;
    let branch_ambiguous = classification.verdict == Verdict::Inconclusive;

    let image = |idx: usize| m.pairs()[idx].1.representative().clone();
    let t: Vec<ComplexVector> = basis_idx.iter().map(|&i| image(i)).collect();
    let mut phases = vec![ONE; n];
    for k in 1..n {
        // image of (f₁+f_k)/√2 is ∝ t_1 + c_k t_k
        let s = image(sum_idx[2 * (k - 1)]);
        let anchor = inner(&t[0], &s);
        let c = inner(&t[k], &s) / anchor;
        if !c.norm().is_finite() || anchor.norm() <= tol.abs_eps {
            return Err(Error::FitFailed {
                residual: f64::INFINITY,
                limit: FIT_RESIDUAL_LIMIT,
            });
        }
        phases[k] = c / c.norm();
    }

    let mut scaled_images = ComplexMatrix::from_columns(&t);
    for (k, c) in phases.iter().enumerate() {
        for z in scaled_images.column_mut(k).iter_mut() {
            *z *= c;
        }
    }
    let f = ComplexMatrix::from_columns(&fiducial.vectors());
    let mut u = if antiunitary {
        &scaled_images * f.transpose()
    } else {
        &scaled_images * f.adjoint()
    };

    if let Some(lead) = u.column(0).iter().find(|z| z.norm() > tol.abs_eps).copied() {
        u *= lead.conj() / lead.norm();
    }

    let transform = ContextTransform::new(u, antiunitary, tol).map_err(|e| match e {
        Error::NotUnitary { deviation } => Error::FitFailed {
            residual: deviation,
            limit: FIT_RESIDUAL_LIMIT,
        },
        other => other,
    })?;

    let residual = m
        .pairs()
        .iter()
        .map(|(s, t)| max_abs(&(t.matrix() - transform.act_matrix(s.matrix()))))
        .fold(0.0, f64::max);
    if residual.is_nan() || residual > FIT_RESIDUAL_LIMIT {
        return Err(Error::FitFailed {
            residual,
            limit: FIT_RESIDUAL_LIMIT,
        });
    }

    Ok(FitReport {
        transform,
        classification,
        residual,
        branch_ambiguous,
        fiducial: fiducial.label().to_owned(),
    })
}

/// min over φ of ‖A − e^{iφ}B‖_max, evaluated at the phase that aligns Tr(B†A).
pub fn distance_up_to_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let overlap = trace(&(b.adjoint() * a));
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    max_abs(&(a - b * phase))
}
