//! Projectors, contexts, modalities and density operators.
//!
//! A modality is represented by a rank-one projector; a context by an ordered
//! complete set of mutually orthogonal rank-one projectors. Two modalities are
//! compared through their projectors only, so the global phase of a
//! representative vector never matters.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    all_finite, conj_matrix, conj_vector, eig_hermitian, ensure_dim, ensure_square,
    hermiticity_deviation, inner, is_unitary, max_abs, outer, trace, trace_product, ComplexMatrix,
    ComplexVector, Tolerance,
};

/// Rank-one orthogonal projection |ψ⟩⟨ψ|.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    representative: ComplexVector,
    matrix: ComplexMatrix,
}

impl Projector {
    /// Projector onto the ray spanned by `v`; `v` need not be normalized.
    pub fn from_vector(v: &ComplexVector) -> Result<Self> {
        if !all_finite(v.iter()) {
            return Err(Error::NonFinite);
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let representative = v.unscale(norm);
        let matrix = outer(&representative);
        Ok(Self {
            representative,
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.representative.len()
    }

    /// Unit vector spanning the ray. Its phase is arbitrary.
    pub fn representative(&self) -> &ComplexVector {
        &self.representative
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// ‖P − Q‖_max within tolerance.
    pub fn same_ray(&self, other: &Projector, tol: &Tolerance) -> bool {
        self.dim() == other.dim() && max_abs(&(&self.matrix - &other.matrix)) <= tol.abs_eps
    }

    /// |⟨ψ|φ⟩|², the Born overlap of two rays.
    pub fn overlap(&self, other: &Projector) -> f64 {
        inner(&self.representative, &other.representative).norm_sqr()
    }
}

/// A complete set of mutually orthogonal rank-one projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    label: String,
    projectors: Vec<Projector>,
}

impl Context {
    /// Builds a context from an orthonormal basis; projector `i` comes from vector `i`.
    pub fn new(vectors: &[ComplexVector], label: &str, tol: &Tolerance) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::InvalidArgument("a context needs at least one vector".into()));
        }
        for v in vectors {
            ensure_dim(n, v.len())?;
            if !all_finite(v.iter()) {
                return Err(Error::NonFinite);
            }
        }
        for i in 0..n {
            for j in i..n {
                let ip = inner(&vectors[i], &vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                if (ip - Complex64::new(target, 0.0)).norm() > tol.abs_eps {
                    return Err(Error::NotOrthonormal {
                        i,
                        j,
                        re: ip.re,
                        im: ip.im,
                    });
                }
            }
        }
        let projectors = vectors
            .iter()
            .map(Projector::from_vector)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            label: label.to_owned(),
            projectors,
        })
    }

    /// Standard basis e_1..e_n.
    pub fn standard(n: usize, label: &str) -> Self {
        let vs: Vec<_> = (0..n).map(|k| crate::numerics::basis_vector(n, k)).collect();
        Self::new(&vs, label, &Tolerance::default()).expect("standard basis is orthonormal")
    }

    /// Columns of the discrete Fourier matrix.
    pub fn fourier(n: usize, label: &str) -> Self {
        Self::new(&crate::numerics::fourier_basis(n), label, &Tolerance::default())
            .expect("Fourier basis is orthonormal")
    }

    pub fn dim(&self) -> usize {
        self.projectors.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_owned();
        self
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn vectors(&self) -> Vec<ComplexVector> {
        self.projectors.iter().map(|p| p.representative().clone()).collect()
    }

    pub fn modality(&self, index: usize) -> Option<Modality> {
        self.projectors.get(index).map(|p| Modality {
            context_label: self.label.clone(),
            index,
            projector: p.clone(),
        })
    }

    pub fn modalities(&self) -> Vec<Modality> {
        (0..self.dim()).filter_map(|i| self.modality(i)).collect()
    }

    /// Index of the projector equal to `p`, if any.
    pub fn position(&self, p: &Projector, tol: &Tolerance) -> Option<usize> {
        self.projectors.iter().position(|q| q.same_ray(p, tol))
    }

    /// max_{i≠j} ‖P_i P_j‖_max
    pub fn exclusivity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.projectors.iter().enumerate() {
            for b in &self.projectors[i + 1..] {
                worst = worst.max(max_abs(&(a.matrix() * b.matrix())));
            }
        }
        worst
    }

    /// ‖Σ P_i − I‖_max
    pub fn completeness_deviation(&self) -> f64 {
        let n = self.dim();
        let sum = self
            .projectors
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, p| acc + p.matrix());
        max_abs(&(sum - ComplexMatrix::identity(n, n)))
    }
}

/// Builds a context from an orthonormal basis.
pub fn make_context(vectors: &[ComplexVector], label: &str, tol: &Tolerance) -> Result<Context> {
    Context::new(vectors, label, tol)
}

/// One outcome of one context.
#[derive(Debug, Clone, PartialEq)]
pub struct Modality {
    pub context_label: String,
    pub index: usize,
    pub projector: Projector,
}

/// Positive-semidefinite, self-adjoint, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let n = ensure_square(&matrix)?;
        if n == 0 {
            return Err(Error::NotDensityOperator("empty matrix".into()));
        }
        if !all_finite(matrix.iter()) {
            return Err(Error::NonFinite);
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > tol.abs_eps {
            return Err(Error::NotDensityOperator(format!(
                "not self-adjoint (deviation {dev:e})"
            )));
        }
        let tr = trace(&matrix);
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol.abs_eps {
            return Err(Error::NotDensityOperator(format!(
                "trace {} differs from 1",
                tr.re
            )));
        }
        let eig = eig_hermitian(&matrix, tol)?;
        if eig.values[0] < -tol.abs_eps {
            return Err(Error::NotDensityOperator(format!(
                "negative eigenvalue {:e}",
                eig.values[0]
            )));
        }
        Ok(Self { matrix })
    }

    pub fn from_projector(p: &Projector) -> Self {
        Self {
            matrix: p.matrix().clone(),
        }
    }

    /// I/n
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n, n).unscale(n as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Unitary, or unitary preceded by entrywise complex conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextTransform {
    matrix: ComplexMatrix,
    antiunitary: bool,
}

impl ContextTransform {
    pub fn new(matrix: ComplexMatrix, antiunitary: bool, tol: &Tolerance) -> Result<Self> {
        ensure_square(&matrix)?;
        let report = is_unitary(&matrix, tol);
        if !report.unitary {
            return Err(Error::NotUnitary {
                deviation: report.deviation,
            });
        }
        Ok(Self {
            matrix,
            antiunitary,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n, n),
            antiunitary: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_antiunitary(&self) -> bool {
        self.antiunitary
    }

    pub fn act_vector(&self, v: &ComplexVector) -> ComplexVector {
        if self.antiunitary {
            &self.matrix * conj_vector(v)
        } else {
            &self.matrix * v
        }
    }

    /// U P U†, with P conjugated first for the antiunitary branch.
    pub fn act_matrix(&self, p: &ComplexMatrix) -> ComplexMatrix {
        let p = if self.antiunitary {
            conj_matrix(p)
        } else {
            p.clone()
        };
        &self.matrix * p * self.matrix.adjoint()
    }

    pub fn act_projector(&self, p: &Projector) -> Projector {
        Projector::from_vector(&self.act_vector(p.representative()))
            .expect("unitary image of a unit vector is nonzero")
    }
}

/// Tr(ρP), clamped into [0, 1].
pub fn born_probability(rho: &DensityOperator, p: &Projector) -> Result<f64> {
    ensure_dim(rho.dim(), p.dim())?;
    let raw = trace_product(rho.matrix(), p.matrix()).re;
    Ok(raw.clamp(0.0, 1.0))
}

pub fn context_distribution(rho: &DensityOperator, c: &Context) -> Result<Vec<f64>> {
    ensure_dim(rho.dim(), c.dim())?;
    c.projectors()
        .iter()
        .map(|p| born_probability(rho, p))
        .collect()
}

/// ‖P₁P₂‖_max within tolerance.
pub fn are_exclusive(m1: &Modality, m2: &Modality, tol: &Tolerance) -> Result<bool> {
    ensure_dim(m1.projector.dim(), m2.projector.dim())?;
    Ok(max_abs(&(m1.projector.matrix() * m2.projector.matrix())) <= tol.abs_eps)
}

/// Same projector, regardless of context.
pub fn extravalent(m1: &Modality, m2: &Modality, tol: &Tolerance) -> Result<bool> {
    ensure_dim(m1.projector.dim(), m2.projector.dim())?;
    Ok(m1.projector.same_ray(&m2.projector, tol))
}

/// Groups modality indices into extravalence classes (transitive closure of
/// pairwise projector equality). Classes are ordered by their smallest member.
pub fn extravalence_classes(modalities: &[Modality], tol: &Tolerance) -> Result<Vec<Vec<usize>>> {
    let Some(first) = modalities.first() else {
        return Ok(Vec::new());
    };
    let n = first.projector.dim();
    for m in modalities {
        ensure_dim(n, m.projector.dim())?;
    }

    let mut parent: Vec<usize> = (0..modalities.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..modalities.len() {
        for j in i + 1..modalities.len() {
            if modalities[i].projector.same_ray(&modalities[j].projector, tol) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }

    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; modalities.len()];
    for i in 0..modalities.len() {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[root]].push(i);
    }
    Ok(classes)
}

/// Moves every projector of `c` by `g`; the label is kept.
pub fn apply_transform(c: &Context, g: &ContextTransform) -> Result<Context> {
    ensure_dim(c.dim(), g.dim())?;
    Ok(Context {
        label: c.label.clone(),
        projectors: c.projectors.iter().map(|p| g.act_projector(p)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{basis_vector, fourier_basis, rvec, ONE};
    use crate::random::{random_context, random_density, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn standard_context_projectors_are_diagonal_units() {
        let c = Context::standard(3, "z");
        for (k, p) in c.projectors().iter().enumerate() {
            let mut d = ComplexMatrix::zeros(3, 3);
            d[(k, k)] = ONE;
            assert_eq!(p.matrix(), &d);
        }
        assert_eq!(c.completeness_deviation(), 0.0);
    }

    #[test]
    fn fourier_context_is_complete() {
        let c = make_context(&fourier_basis(3), "f", &tol()).unwrap();
        let sum = c
            .projectors()
            .iter()
            .fold(ComplexMatrix::zeros(3, 3), |acc, p| acc + p.matrix());
        assert!(max_abs(&(sum - ComplexMatrix::identity(3, 3))) <= 1e-9);
        assert!(c.exclusivity_deviation() <= 1e-9);
    }

    #[test]
    fn repeated_vector_is_rejected() {
        let v = [rvec(&[1., 0., 0.]), rvec(&[1., 0., 0.]), rvec(&[0., 0., 1.])];
        match make_context(&v, "bad", &tol()) {
            Err(Error::NotOrthonormal { i: 0, j: 1, re, .. }) => assert_eq!(re, 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn born_probability_examples() {
        let c = Context::standard(3, "z");
        let q = &c.projectors()[0];
        let rho = DensityOperator::from_projector(q);
        assert_eq!(born_probability(&rho, q).unwrap(), 1.0);
        assert_eq!(born_probability(&rho, &c.projectors()[1]).unwrap(), 0.0);

        let mixed = DensityOperator::maximally_mixed(3);
        let f = Context::fourier(3, "f");
        for p in f.projectors() {
            assert!((born_probability(&mixed, p).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(
            born_probability(&DensityOperator::maximally_mixed(4), q),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        );
    }

    #[test]
    fn distribution_sums_to_one_on_random_contexts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density(&mut rng, 4);
        for _ in 0..1000 {
            let c = random_context(&mut rng, 4, "r");
            let d = context_distribution(&rho, &c).unwrap();
            assert!((d.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        }
        let d = context_distribution(
            &DensityOperator::from_projector(&Context::standard(3, "z").projectors()[0]),
            &Context::standard(3, "z"),
        )
        .unwrap();
        assert_eq!(d, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn exclusivity_within_and_across_contexts() {
        let z = Context::standard(3, "z");
        let f = Context::fourier(3, "f");
        let (a, b) = (z.modality(0).unwrap(), z.modality(1).unwrap());
        assert!(are_exclusive(&a, &b, &tol()).unwrap());
        assert!(!are_exclusive(&a, &a, &tol()).unwrap());
        for m in z.modalities() {
            for k in f.modalities() {
                // |<e_i|f_j>|^2 = 1/3 for mutually unbiased bases
                assert!((m.projector.overlap(&k.projector) - 1.0 / 3.0).abs() < 1e-14);
                assert!(!are_exclusive(&m, &k, &tol()).unwrap());
            }
        }
    }

    fn rotated_context() -> Context {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        make_context(
            &[rvec(&[1., 0., 0.]), rvec(&[0., s, s]), rvec(&[0., s, -s])],
            "rotated",
            &tol(),
        )
        .unwrap()
    }

    #[test]
    fn extravalence_ignores_phase_and_context() {
        let phase = Complex64::from_polar(1.0, 1.3);
        let shifted = make_context(
            &[basis_vector(3, 0) * phase, basis_vector(3, 2), basis_vector(3, 1)],
            "phased",
            &tol(),
        )
        .unwrap();
        let z = Context::standard(3, "z");
        assert!(extravalent(&z.modality(0).unwrap(), &shifted.modality(0).unwrap(), &tol()).unwrap());
        assert!(!extravalent(&z.modality(0).unwrap(), &z.modality(1).unwrap(), &tol()).unwrap());

        let r = rotated_context();
        assert!(extravalent(&z.modality(0).unwrap(), &r.modality(0).unwrap(), &tol()).unwrap());
        assert!(!extravalent(&z.modality(1).unwrap(), &r.modality(1).unwrap(), &tol()).unwrap());
    }

    #[test]
    fn extravalence_classes_match_pairwise_closure() {
        let z = Context::standard(3, "z");
        let r = rotated_context();
        let mut all = z.modalities();
        all.extend(r.modalities());
        let classes = extravalence_classes(&all, &tol()).unwrap();
        assert_eq!(classes, vec![vec![0, 3], vec![1], vec![2], vec![4], vec![5]]);

        // oracle: i, j share a class iff they are pairwise extravalent
        let class_of = |i: usize| classes.iter().position(|c| c.contains(&i)).unwrap();
        for i in 0..all.len() {
            for j in 0..all.len() {
                assert_eq!(class_of(i) == class_of(j), extravalent(&all[i], &all[j], &tol()).unwrap());
            }
        }

        let same = vec![z.modality(1).unwrap(); 3];
        assert_eq!(extravalence_classes(&same, &tol()).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(extravalence_classes(&z.modalities(), &tol()).unwrap().len(), 3);
    }

    #[test]
    fn transforms_move_contexts() {
        let z = Context::standard(3, "z");
        assert_eq!(apply_transform(&z, &ContextTransform::identity(3)).unwrap(), z);

        let fourier = ComplexMatrix::from_columns(&fourier_basis(3));
        let g = ContextTransform::new(fourier, false, &tol()).unwrap();
        let moved = apply_transform(&z, &g).unwrap();
        let f = Context::fourier(3, "f");
        for (a, b) in moved.projectors().iter().zip(f.projectors()) {
            assert!(a.same_ray(b, &tol()));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for anti in [false, true] {
            let g = ContextTransform::new(random_unitary(&mut rng, 4), anti, &tol()).unwrap();
            let c = apply_transform(&random_context(&mut rng, 4, "r"), &g).unwrap();
            assert!(c.exclusivity_deviation() <= 1e-9);
            assert!(c.completeness_deviation() <= 1e-9);
        }
    }

    #[test]
    fn density_validation() {
        let t = tol();
        assert!(DensityOperator::new(ComplexMatrix::identity(3, 3), &t).is_err());
        let neg = ComplexMatrix::from_diagonal(&rvec(&[1.5, -0.5]));
        assert!(matches!(
            DensityOperator::new(neg, &t),
            Err(Error::NotDensityOperator(_))
        ));
        assert!(DensityOperator::new(ComplexMatrix::from_diagonal(&rvec(&[0.5, 0.3, 0.2])), &t).is_ok());
    }
}
