//! Regenerates the bundled datasets under `datasets/`.
//!
//!     cargo run -p csm-born --example make_datasets -- datasets

use std::fs;
use std::path::{Path, PathBuf};

use csm_born::gleason::{mutually_unbiased_bases, superposition_family, FrameSample};
use csm_born::io::{
    entries_from_vector, rows_from_matrix, ContextDoc, ContextListDoc, ContextValuesDoc, DensityDoc, GroupedSamplesDoc,
    KsDocument, MatrixRows, RayDoc, RayMapDoc, SamplesDoc, Scalar,
};
use csm_born::model::born_probability;
use csm_born::numerics::{basis_vector, rvec};
use csm_born::random::{random_density, random_ray, random_unitary};
use csm_born::uhlhorn::{phase_fixing_gadget, RayMap};
use csm_born::{ComplexMatrix, Context, ContextTransform, DensityOperator, Tolerance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

fn write<T: Serialize>(root: &Path, rel: &str, value: &T) {
    let path = root.join(rel);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    let mut text = serde_json::to_string_pretty(value).unwrap();
    text.push('\n');
    fs::write(&path, text).unwrap();
    println!("wrote {}", path.display());
}

fn cabello18() -> (Vec<[i32; 4]>, Vec<Vec<usize>>) {
    let bases: [[[i32; 4]; 4]; 9] = [
        [[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, -1, 0, 0]],
        [[0, 0, 0, 1], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, -1, 0]],
        [[1, -1, 1, -1], [1, -1, -1, 1], [1, 1, 0, 0], [0, 0, 1, 1]],
        [[1, -1, 1, -1], [1, 1, 1, 1], [1, 0, -1, 0], [0, 1, 0, -1]],
        [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1], [1, 0, 0, -1]],
        [[1, -1, -1, 1], [1, 1, 1, 1], [1, 0, 0, -1], [0, 1, -1, 0]],
        [[1, 1, -1, 1], [1, 1, 1, -1], [1, -1, 0, 0], [0, 0, 1, 1]],
        [[1, 1, -1, 1], [-1, 1, 1, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
        [[1, 1, 1, -1], [-1, 1, 1, 1], [1, 0, 0, 1], [0, 1, -1, 0]],
    ];
    let mut vectors: Vec<[i32; 4]> = Vec::new();
    let mut index = Vec::new();
    for basis in &bases {
        let mut idx = Vec::new();
        for v in basis {
            let k = vectors.iter().position(|w| w == v).unwrap_or_else(|| {
                vectors.push(*v);
                vectors.len() - 1
            });
            idx.push(k);
        }
        index.push(idx);
    }
    (vectors, index)
}

/// Rays with components from permutations of (0,0,1), (0,1,±1), (0,1,±√2), (1,±1,±√2).
fn rays_33() -> Vec<[f64; 3]> {
    let r2 = std::f64::consts::SQRT_2;
    let seeds = [
        [0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, -1.0],
        [0.0, 1.0, r2],
        [0.0, 1.0, -r2],
        [1.0, 1.0, r2],
        [1.0, 1.0, -r2],
        [1.0, -1.0, r2],
        [1.0, -1.0, -r2],
    ];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut rays: Vec<[f64; 3]> = Vec::new();
    for s in &seeds {
        for p in &perms {
            let mut v = [s[p[0]], s[p[1]], s[p[2]]];
            // first nonzero component positive
            if let Some(&lead) = v.iter().find(|x| **x != 0.0) {
                if lead < 0.0 {
                    v = v.map(|x| -x);
                }
            }
            if !rays.iter().any(|w| w.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-12)) {
                rays.push(v);
            }
        }
    }
    rays
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn parallel(a: &[f64; 3], b: &[f64; 3]) -> bool {
    let c = cross(a, b);
    dot(&c, &c).sqrt() <= 1e-9 * dot(a, a).sqrt() * dot(b, b).sqrt()
}

fn triads(rays: &[[f64; 3]]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..rays.len() {
        for b in a + 1..rays.len() {
            for c in b + 1..rays.len() {
                if [(a, b), (a, c), (b, c)].iter().all(|&(x, y)| dot(&rays[x], &rays[y]).abs() < 1e-9) {
                    out.push(vec![a, b, c]);
                }
            }
        }
    }
    out
}

/// Completes every orthogonal pair of the 33 rays with the cross product.
fn rays_57() -> (Vec<[f64; 3]>, Vec<Vec<usize>>) {
    let mut rays = rays_33();
    let base = rays.len();
    for a in 0..base {
        for b in a + 1..base {
            if dot(&rays[a], &rays[b]).abs() < 1e-9 {
                let c = cross(&rays[a], &rays[b]);
                if !rays.iter().any(|w| parallel(w, &c)) {
                    rays.push(c);
                }
            }
        }
    }
    let t = triads(&rays);
    (rays, t)
}

fn real_doc(dim: usize, vectors: Vec<Vec<f64>>, bases: Vec<Vec<usize>>) -> KsDocument {
    let doc = KsDocument {
        dim,
        vectors: vectors.into_iter().map(|v| v.into_iter().map(Scalar::Real).collect()).collect(),
        bases,
    };
    doc.into_instance(&Tolerance::default()).expect("bundled KS instance is valid");
    doc
}

fn gadget_sources(c: &Context) -> Vec<csm_born::Projector> {
    let mut s = c.projectors().to_vec();
    s.extend(phase_fixing_gadget(c));
    s
}

fn main() {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "datasets".into()));
    let tol = Tolerance::default();

    // Kochen-Specker systems
    let (vecs, bases) = cabello18();
    write(
        &root,
        "ks/cabello18_dim4.json",
        &real_doc(4, vecs.iter().map(|v| v.iter().map(|&x| x as f64).collect()).collect(), bases),
    );
    let r33 = rays_33();
    write(&root, "ks/rays33_dim3.json", &real_doc(3, r33.iter().map(|v| v.to_vec()).collect(), triads(&r33)));
    let (r57, t57) = rays_57();
    write(&root, "ks/rays57_dim3.json", &real_doc(3, r57.iter().map(|v| v.to_vec()).collect(), t57));
    write(
        &root,
        "ks/single_basis_dim3.json",
        &real_doc(3, vec![vec![1., 0., 0.], vec![0., 1., 0.], vec![0., 0., 1.]], vec![vec![0, 1, 2]]),
    );

    // States and contexts
    let z3 = Context::standard(3, "standard");
    let f3 = Context::fourier(3, "fourier");
    write(&root, "states/context_standard_dim3.json", &ContextDoc::from_context(&z3));
    write(&root, "states/context_fourier_dim3.json", &ContextDoc::from_context(&f3));
    write(&root, "states/density_mixed_dim3.json", &DensityDoc::from_density(&DensityOperator::maximally_mixed(3)));
    write(
        &root,
        "states/density_pure_e1_dim3.json",
        &DensityDoc::from_density(&DensityOperator::from_projector(&z3.projectors()[0])),
    );
    write(&root, "states/density_mixed_dim4.json", &DensityDoc::from_density(&DensityOperator::maximally_mixed(4)));
    let e1 = RayDoc {
        dim: 3,
        vector: entries_from_vector(&basis_vector(3, 0)),
    };
    write(&root, "states/ray_e1_dim3.json", &e1);
    write(
        &root,
        "states/contexts_fourier_dim3.json",
        &ContextListDoc {
            contexts: vec![ContextDoc::from_context(&f3)],
        },
    );
    write(
        &root,
        "states/contexts_standard_x3_dim3.json",
        &ContextListDoc {
            contexts: vec![ContextDoc::from_context(&z3); 3],
        },
    );
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rotated = Context::new(&[rvec(&[1., 0., 0.]), rvec(&[0., s, s]), rvec(&[0., s, -s])], "rotated", &tol).unwrap();
    write(
        &root,
        "states/contexts_mixed_dim3.json",
        &ContextListDoc {
            contexts: [&f3, &rotated, &rotated, &z3, &f3, &f3]
                .iter()
                .map(|c| ContextDoc::from_context(c))
                .collect(),
        },
    );

    // Frame samples
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let rho = random_density(&mut rng, 3);
    let mubs: Vec<_> = mutually_unbiased_bases(3).unwrap().iter().flat_map(|c| c.projectors().to_vec()).collect();
    let exact: Vec<FrameSample> = mubs
        .iter()
        .map(|p| FrameSample::new(p.clone(), born_probability(&rho, p).unwrap()).unwrap())
        .collect();
    write(&root, "gleason/demo_samples_dim3.json", &SamplesDoc::from_samples(&exact));
    write(&root, "gleason/demo_density_dim3.json", &DensityDoc::from_density(&rho));
    write(&root, "gleason/single_context_dim3.json", &SamplesDoc::from_samples(&exact[..3]));
    let qubit: Vec<_> = superposition_family(2)
        .into_iter()
        .map(|p| FrameSample::new(p, 0.5).unwrap())
        .collect();
    write(&root, "gleason/qubit_dim2.json", &SamplesDoc::from_samples(&qubit));
    let grouped = GroupedSamplesDoc {
        contexts: mutually_unbiased_bases(3)
            .unwrap()
            .iter()
            .map(|c| ContextValuesDoc {
                label: c.label().to_owned(),
                vectors: c.vectors().iter().map(entries_from_vector).collect(),
                values: c.projectors().iter().map(|p| born_probability(&rho, p).unwrap()).collect(),
            })
            .collect(),
    };
    write(&root, "gleason/demo_grouped_dim3.json", &grouped);

    // Ray maps
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u0 = random_unitary(&mut rng, 3);
    let mut sources = gadget_sources(&z3);
    sources.extend((0..10).map(|_| random_ray(&mut rng, 3)));
    let unitary = ContextTransform::new(u0.clone(), false, &tol).unwrap();
    let anti = ContextTransform::new(u0.clone(), true, &tol).unwrap();
    let m = RayMap::induced(sources.clone(), vec![z3.clone()], &unitary, &tol).unwrap();
    write(&root, "raymaps/unitary_dim3.json", &RayMapDoc::from_ray_map(&m));
    let m = RayMap::induced(sources, vec![z3.clone()], &anti, &tol).unwrap();
    write(&root, "raymaps/antiunitary_dim3.json", &RayMapDoc::from_ray_map(&m));
    write(&root, "raymaps/generator_dim3.json", &DensityDocLike::new(&u0));
}

/// Plain matrix dump in the density-file layout, for the hidden generator.
#[derive(Serialize)]
struct DensityDocLike {
    dim: usize,
    matrix: MatrixRows,
}

impl DensityDocLike {
    fn new(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.nrows(),
            matrix: rows_from_matrix(m),
        }
    }
}
