//! Noncontextual {0,1} valuations on Kochen-Specker vector systems.
//!
//! A valuation gives each vector one value regardless of which basis it is
//! read in, and must put exactly one 1 in every basis. The search is a
//! complete backtracking procedure with unit propagation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::KsDocument;
use crate::numerics::{inner, ComplexVector, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct KsInstance {
    dim: usize,
    vectors: Vec<ComplexVector>,
    bases: Vec<Vec<usize>>,
}

impl KsInstance {
    /// Vectors are normalized; every basis is checked for orthogonality.
    pub fn new(dim: usize, vectors: Vec<ComplexVector>, bases: Vec<Vec<usize>>, tol: &Tolerance) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedDocument("dimension must be positive".into()));
        }
        let mut unit = Vec::with_capacity(vectors.len());
        for (k, v) in vectors.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::MalformedDocument(format!(
                    "vector {k} has length {}, expected {dim}",
                    v.len()
                )));
            }
            let norm = v.norm();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::MalformedDocument(format!("vector {k} is zero or non-finite")));
            }
            unit.push(v.unscale(norm));
        }
        let mut seen = vec![false; unit.len()];
        for (b, basis) in bases.iter().enumerate() {
            if basis.len() != dim {
                return Err(Error::MalformedDocument(format!(
                    "basis {b} has {} members, expected {dim}",
                    basis.len()
                )));
            }
            for (x, &i) in basis.iter().enumerate() {
                if i >= unit.len() {
                    return Err(Error::MalformedDocument(format!("basis {b} refers to missing vector {i}")));
                }
                if basis[..x].contains(&i) {
                    return Err(Error::MalformedDocument(format!("basis {b} repeats vector {i}")));
                }
                seen[i] = true;
            }
            for (x, &i) in basis.iter().enumerate() {
                for &j in &basis[x + 1..] {
                    let overlap = inner(&unit[i], &unit[j]).norm();
                    if overlap > tol.abs_eps {
                        return Err(Error::BasisNotOrthogonal { basis: b, i, j, overlap });
                    }
                }
            }
        }
        if let Some(orphan) = seen.iter().position(|&s| !s) {
            return Err(Error::MalformedDocument(format!("vector {orphan} belongs to no basis")));
        }
        Ok(Self {
            dim,
            vectors: unit,
            bases,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    /// Number of bases each vector belongs to.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.vectors.len()];
        for basis in &self.bases {
            for &i in basis {
                m[i] += 1;
            }
        }
        m
    }

    /// Same vectors with basis `index` removed; vectors left without a basis are kept.
    pub fn without_basis(&self, index: usize) -> Self {
        let mut bases = self.bases.clone();
        bases.remove(index);
        Self {
            dim: self.dim,
            vectors: self.vectors.clone(),
            bases,
        }
    }

    /// True iff `assignment` puts exactly one 1 in every basis.
    pub fn satisfies(&self, assignment: &[u8]) -> bool {
        assignment.len() == self.vectors.len()
            && assignment.iter().all(|&v| v <= 1)
            && self
                .bases
                .iter()
                .all(|b| b.iter().map(|&i| assignment[i] as usize).sum::<usize>() == 1)
    }
}

/// Parses and validates a KS JSON document.
pub fn load_ks_instance(document: &str, tol: &Tolerance) -> Result<KsInstance> {
    let doc: KsDocument =
        serde_json::from_str(document).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    doc.into_instance(tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
}

/// Two-way count of ones: B (odd) by bases, even by vector multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityCertificate {
    pub basis_count: usize,
    pub multiplicities: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssignmentResult {
    pub status: Status,
    pub assignment: Option<Vec<u8>>,
    pub nodes_explored: u64,
    pub certificate: Option<ParityCertificate>,
}

pub fn parity_certificate(inst: &KsInstance) -> Option<ParityCertificate> {
    let multiplicities = inst.multiplicities();
    let odd_bases = inst.bases.len() % 2 == 1;
    let even_vectors = multiplicities.iter().all(|m| m % 2 == 0);
    (odd_bases && even_vectors).then_some(ParityCertificate {
        basis_count: inst.bases.len(),
        multiplicities,
    })
}

struct Search<'a> {
    bases: &'a [Vec<usize>],
    membership: Vec<Vec<usize>>,
    order: Vec<usize>,
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn assign(&mut self, var: usize, val: bool) {
        self.value[var] = Some(val);
        self.trail.push(var);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().expect("trail above mark");
            self.value[var] = None;
        }
    }

    /// Unit propagation from the assignments made since `from`. False on conflict.
    fn propagate(&mut self, mut from: usize) -> bool {
        while from < self.trail.len() {
            let var = self.trail[from];
            from += 1;
            for bi in 0..self.membership[var].len() {
                let basis = &self.bases[self.membership[var][bi]];
                let mut ones = 0;
                let mut open = None;
                let mut open_count = 0;
                for &i in basis {
                    match self.value[i] {
                        Some(true) => ones += 1,
                        Some(false) => {}
                        None => {
                            open_count += 1;
                            open = Some(i);
                        }
                    }
                }
                match (ones, open_count) {
                    (2.., _) => return false,
                    (1, 0) => {}
                    (1, _) => {
                        let rest: Vec<usize> =
                            basis.iter().copied().filter(|&i| self.value[i].is_none()).collect();
                        for i in rest {
                            self.assign(i, false);
                        }
                    }
                    (0, 0) => return false,
                    (0, 1) => self.assign(open.expect("one open slot"), true),
                    _ => {}
                }
            }
        }
        true
    }

    fn solve(&mut self) -> bool {
        let Some(&var) = self.order.iter().find(|&&v| self.value[v].is_none()) else {
            return true;
        };
        for val in [true, false] {
            self.nodes += 1;
            let mark = self.trail.len();
            self.assign(var, val);
            if self.propagate(mark) && self.solve() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Exhaustive search for a noncontextual valuation.
///
/// Variables are branched in order of descending basis membership, ties by
/// index, trying 1 before 0, so `nodes_explored` is reproducible.
pub fn search_assignment(inst: &KsInstance) -> AssignmentResult {
    let m = inst.vectors.len();
    let mut membership = vec![Vec::new(); m];
    for (b, basis) in inst.bases.iter().enumerate() {
        for &i in basis {
            membership[i].push(b);
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| membership[b].len().cmp(&membership[a].len()).then(a.cmp(&b)));

    let mut search = Search {
        bases: &inst.bases,
        membership,
        order,
        value: vec![None; m],
        trail: Vec::new(),
        nodes: 0,
    };
    let found = search.solve();
    let assignment = found.then(|| {
        search
            .value
            .iter()
            .map(|v| u8::from(v.unwrap_or(false)))
            .collect::<Vec<u8>>()
    });
    AssignmentResult {
        status: if found { Status::Sat } else { Status::Unsat },
        assignment,
        nodes_explored: search.nodes,
        certificate: parity_certificate(inst),
    }
}
