//! JSON document formats.
//!
//! Complex scalars are written as `[re, im]`. On input a bare number is
//! accepted as shorthand for `[x, 0]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gleason::FrameSample;
use crate::model::{Context, DensityOperator, Projector};
use crate::numerics::{ComplexMatrix, ComplexVector, Tolerance};
use crate::partition::KsInstance;
use crate::topology::Permutation;
use crate::uhlhorn::RayMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Scalar> for Complex64 {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Real(re) => Complex64::new(re, 0.0),
            Scalar::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Pair([z.re, z.im])
    }
}

pub type VectorEntries = Vec<Scalar>;
pub type MatrixRows = Vec<Vec<Scalar>>;

pub fn vector_from_entries(entries: &[Scalar], dim: usize) -> Result<ComplexVector> {
    if entries.len() != dim {
        return Err(Error::MalformedDocument(format!(
            "vector has {} entries, expected {dim}",
            entries.len()
        )));
    }
    Ok(ComplexVector::from_iterator(dim, entries.iter().map(|&s| s.into())))
}

pub fn entries_from_vector(v: &ComplexVector) -> VectorEntries {
    v.iter().map(|&z| z.into()).collect()
}

pub fn matrix_from_rows(rows: &[Vec<Scalar>], dim: usize) -> Result<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::MalformedDocument(format!("matrix must be {dim}x{dim}")));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| rows[i][j].into()))
}

pub fn rows_from_matrix(m: &ComplexMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

fn vectors_from_entries(list: &[VectorEntries], dim: usize) -> Result<Vec<ComplexVector>> {
    list.iter().map(|e| vector_from_entries(e, dim)).collect()
}

/// `{"dim": N, "label": str, "vectors": [[[re,im]×N]×N]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextDoc {
    pub dim: usize,
    #[serde(default)]
    pub label: String,
    pub vectors: Vec<VectorEntries>,
}

impl ContextDoc {
    pub fn into_context(&self, tol: &Tolerance) -> Result<Context> {
        if self.vectors.len() != self.dim {
            return Err(Error::MalformedDocument(format!(
                "context '{}' lists {} vectors, expected {}",
                self.label,
                self.vectors.len(),
                self.dim
            )));
        }
        Context::new(&vectors_from_entries(&self.vectors, self.dim)?, &self.label, tol)
    }

    pub fn from_context(c: &Context) -> Self {
        Self {
            dim: c.dim(),
            label: c.label().to_owned(),
            vectors: c.vectors().iter().map(entries_from_vector).collect(),
        }
    }
}

/// `{"contexts": [ContextDoc, ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextListDoc {
    pub contexts: Vec<ContextDoc>,
}

impl ContextListDoc {
    pub fn into_contexts(&self, tol: &Tolerance) -> Result<Vec<Context>> {
        self.contexts.iter().map(|c| c.into_context(tol)).collect()
    }
}

/// `{"dim": N, "matrix": [[[re,im]×N]×N]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityDoc {
    pub dim: usize,
    pub matrix: MatrixRows,
}

impl DensityDoc {
    pub fn into_density(&self, tol: &Tolerance) -> Result<DensityOperator> {
        DensityOperator::new(matrix_from_rows(&self.matrix, self.dim)?, tol)
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        Self {
            dim: rho.dim(),
            matrix: rows_from_matrix(rho.matrix()),
        }
    }
}

/// A single ray: `{"dim": N, "vector": [[re,im]×N]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayDoc {
    pub dim: usize,
    pub vector: VectorEntries,
}

impl RayDoc {
    pub fn into_projector(&self) -> Result<Projector> {
        Projector::from_vector(&vector_from_entries(&self.vector, self.dim)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDoc {
    pub vector: VectorEntries,
    pub value: f64,
}

/// `{"dim": N, "samples": [{"vector": [...], "value": x}, ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplesDoc {
    pub dim: usize,
    pub samples: Vec<SampleDoc>,
}

impl SamplesDoc {
    pub fn into_samples(&self) -> Result<Vec<FrameSample>> {
        self.samples
            .iter()
            .enumerate()
            .map(|(index, s)| {
                let p = Projector::from_vector(&vector_from_entries(&s.vector, self.dim)?)?;
                FrameSample::new(p, s.value).map_err(|_| Error::ValueOutOfRange { index, value: s.value })
            })
            .collect()
    }

    pub fn from_samples(samples: &[FrameSample]) -> Self {
        Self {
            dim: samples.first().map_or(0, |s| s.projector.dim()),
            samples: samples
                .iter()
                .map(|s| SampleDoc {
                    vector: entries_from_vector(s.projector.representative()),
                    value: s.value,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextValuesDoc {
    pub label: String,
    pub vectors: Vec<VectorEntries>,
    pub values: Vec<f64>,
}

/// Context-grouped frame values: `{"contexts": [{"label", "vectors", "values"}]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupedSamplesDoc {
    pub contexts: Vec<ContextValuesDoc>,
}

impl GroupedSamplesDoc {
    pub fn into_groups(&self, tol: &Tolerance) -> Result<Vec<(Context, Vec<f64>)>> {
        self.contexts
            .iter()
            .map(|g| {
                let dim = g.vectors.len();
                let c = Context::new(&vectors_from_entries(&g.vectors, dim)?, &g.label, tol)?;
                Ok((c, g.values.clone()))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDoc {
    pub source: VectorEntries,
    pub target: VectorEntries,
}

/// A covering context given by label (resolved against `contexts`) or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoveringRef {
    Label(String),
    Inline(Vec<VectorEntries>),
}

/// `{"dim": N, "pairs": [{"source", "target"}], "covering_contexts": [...], "contexts": [...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayMapDoc {
    pub dim: usize,
    pub pairs: Vec<PairDoc>,
    pub covering_contexts: Vec<CoveringRef>,
    /// Named contexts that `covering_contexts` labels refer to.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contexts: Vec<ContextDoc>,
}

impl RayMapDoc {
    pub fn into_ray_map(&self, tol: &Tolerance) -> Result<RayMap> {
        let pairs = self
            .pairs
            .iter()
            .map(|p| {
                Ok((
                    Projector::from_vector(&vector_from_entries(&p.source, self.dim)?)?,
                    Projector::from_vector(&vector_from_entries(&p.target, self.dim)?)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let covering = self
            .covering_contexts
            .iter()
            .enumerate()
            .map(|(k, r)| match r {
                CoveringRef::Label(label) => self
                    .contexts
                    .iter()
                    .find(|c| &c.label == label)
                    .ok_or_else(|| Error::MalformedDocument(format!("unknown context label '{label}'")))?
                    .into_context(tol),
                CoveringRef::Inline(vectors) => {
                    if vectors.len() != self.dim {
                        return Err(Error::MalformedDocument(format!(
                            "covering context {k} lists {} vectors, expected {}",
                            vectors.len(),
                            self.dim
                        )));
                    }
                    Context::new(&vectors_from_entries(vectors, self.dim)?, &format!("covering-{k}"), tol)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        RayMap::new(pairs, covering, tol)
    }

    /// Covering contexts are written inline under their own labels.
    pub fn from_ray_map(m: &RayMap) -> Self {
        Self {
            dim: m.dim(),
            pairs: m
                .pairs()
                .iter()
                .map(|(s, t)| PairDoc {
                    source: entries_from_vector(s.representative()),
                    target: entries_from_vector(t.representative()),
                })
                .collect(),
            covering_contexts: m
                .covering_contexts()
                .iter()
                .map(|c| CoveringRef::Label(c.label().to_owned()))
                .collect(),
            contexts: m.covering_contexts().iter().map(ContextDoc::from_context).collect(),
        }
    }
}

/// `{"dim": d, "vectors": [[[re,im]×d]×M], "bases": [[i,...]×B]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsDocument {
    pub dim: usize,
    pub vectors: Vec<VectorEntries>,
    pub bases: Vec<Vec<usize>>,
}

impl KsDocument {
    pub fn into_instance(&self, tol: &Tolerance) -> Result<KsInstance> {
        let vectors = vectors_from_entries(&self.vectors, self.dim)?;
        KsInstance::new(self.dim, vectors, self.bases.clone(), tol)
    }

    pub fn from_instance(inst: &KsInstance) -> Self {
        Self {
            dim: inst.dim(),
            vectors: inst.vectors().iter().map(entries_from_vector).collect(),
            bases: inst.bases().to_vec(),
        }
    }
}

/// `{"n": n, "images": [σ(0), ..., σ(n−1)]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationDoc {
    pub n: usize,
    pub images: Vec<usize>,
}

impl PermutationDoc {
    pub fn into_permutation(&self) -> Result<Permutation> {
        if self.images.len() != self.n {
            return Err(Error::InvalidPermutation(format!(
                "n = {} but {} images given",
                self.n,
                self.images.len()
            )));
        }
        Permutation::new(self.images.clone())
    }
}

/// Parses any document type, mapping serde failures to `MalformedDocument`.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))
}
