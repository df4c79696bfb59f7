use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use csm_born::gleason::{reconstruct_density, validate_frame_function, FrameSample, FrameValidation};
use csm_born::io::{
    entries_from_vector, parse, rows_from_matrix, ContextDoc, ContextListDoc, DensityDoc, GroupedSamplesDoc,
    KsDocument, MatrixRows, PermutationDoc, RayDoc, RayMapDoc, SamplesDoc, VectorEntries,
};
use csm_born::measurement::simulate_stream;
use csm_born::model::context_distribution;
use csm_born::partition::{search_assignment, Status};
use csm_born::topology::{orthogonal_obstruction, unitary_path_to_identity, OrthogonalObstruction, PathReport};
use csm_born::uhlhorn::{
    check_orthogonality_preserving, classify_transform, fit_transform, OrthogonalityCheck, TransformClassification,
    Verdict,
};
use csm_born::{Error, Tolerance};

/// Input or usage error; always exit 2.
#[derive(Debug)]
pub struct Failure(pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

pub struct Report {
    pub body: Value,
    pub exit_code: u8,
}

impl Report {
    fn new<T: Serialize>(body: &T, exit_code: u8) -> Result<Self, Failure> {
        let body = serde_json::to_value(body).map_err(|e| Failure(e.to_string()))?;
        Ok(Self { body, exit_code })
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct BornReport {
    dim: usize,
    context: String,
    probabilities: Vec<f64>,
    sum: f64,
}

pub fn born(density: &Path, context: &Path, tol: &Tolerance) -> Result<Report, Failure> {
    let rho = parse::<DensityDoc>(&read(density)?)?.into_density(tol)?;
    let ctx = parse::<ContextDoc>(&read(context)?)?.into_context(tol)?;
    let probabilities = context_distribution(&rho, &ctx)?;
    let sum = probabilities.iter().sum();
    Report::new(
        &BornReport {
            dim: ctx.dim(),
            context: ctx.label().to_owned(),
            probabilities,
            sum,
        },
        0,
    )
}

#[derive(Serialize)]
struct GleasonReport {
    dim: usize,
    sample_count: usize,
    rho: MatrixRows,
    residual_rms: f64,
    condition_number: f64,
    psd_correction: f64,
    design_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    frame_validation: Option<FrameValidation>,
}

/// Accepts the flat sample format or the context-grouped one; the grouped
/// form is also checked for per-context normalization (exit 1 on failure).
pub fn gleason_fit(samples: &Path, tol: &Tolerance) -> Result<Report, Failure> {
    let text = read(samples)?;
    let value: Value = parse(&text)?;
    let (samples, validation) = if value.get("samples").is_some() {
        (parse::<SamplesDoc>(&text)?.into_samples()?, None)
    } else {
        let groups = parse::<GroupedSamplesDoc>(&text)?.into_groups(tol)?;
        let validation = validate_frame_function(&groups, tol)?;
        let mut flat = Vec::new();
        for (context, values) in &groups {
            for (p, &v) in context.projectors().iter().zip(values) {
                flat.push(FrameSample::new(p.clone(), v)?);
            }
        }
        (flat, Some(validation))
    };
    let report = reconstruct_density(&samples, tol)?;
    let exit_code = match &validation {
        Some(v) if !v.passes => 1,
        _ => 0,
    };
    Report::new(
        &GleasonReport {
            dim: report.rho.dim(),
            sample_count: samples.len(),
            rho: rows_from_matrix(report.rho.matrix()),
            residual_rms: report.residual_rms,
            condition_number: report.condition_number,
            psd_correction: report.psd_correction,
            design_rank: report.design_rank,
            frame_validation: validation,
        },
        exit_code,
    )
}

#[derive(Serialize)]
struct FittedOperator {
    matrix: MatrixRows,
    antiunitary: bool,
    residual: f64,
    branch_ambiguous: bool,
    fiducial: String,
}

#[derive(Serialize)]
struct UhlhornReport {
    dim: usize,
    pair_count: usize,
    orthogonality: OrthogonalityCheck,
    classification: Option<TransformClassification>,
    fit: Option<FittedOperator>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit_error: Option<String>,
}

pub fn uhlhorn(raymap: &Path, tol: &Tolerance) -> Result<Report, Failure> {
    let map = parse::<RayMapDoc>(&read(raymap)?)?.into_ray_map(tol)?;
    let orthogonality = check_orthogonality_preserving(&map, tol);
    let mut report = UhlhornReport {
        dim: map.dim(),
        pair_count: map.pairs().len(),
        orthogonality,
        classification: None,
        fit: None,
        fit_error: None,
    };
    if !orthogonality.preserving {
        return Report::new(&report, 1);
    }
    let classification = classify_transform(&map, tol)?;
    report.classification = Some(classification);
    if classification.verdict == Verdict::Neither {
        return Report::new(&report, 1);
    }
    match fit_transform(&map, tol) {
        Ok(fit) => {
            report.fit = Some(FittedOperator {
                matrix: rows_from_matrix(fit.transform.matrix()),
                antiunitary: fit.transform.is_antiunitary(),
                residual: fit.residual,
                branch_ambiguous: fit.branch_ambiguous,
                fiducial: fit.fiducial,
            });
            Report::new(&report, 0)
        }
        Err(e @ Error::FitFailed { .. }) => {
            report.fit_error = Some(e.to_string());
            Report::new(&report, 1)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn ks(instance: &Path, tol: &Tolerance) -> Result<Report, Failure> {
    let inst = parse::<KsDocument>(&read(instance)?)?.into_instance(tol)?;
    let result = search_assignment(&inst);
    let exit_code = match result.status {
        Status::Unsat => 0,
        Status::Sat => 1,
    };
    Report::new(&result, exit_code)
}

#[derive(Serialize)]
struct PermPathReport {
    images: Vec<usize>,
    sign: i8,
    path: PathReport,
    obstruction: OrthogonalObstruction,
    generator: MatrixRows,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<MatrixRows>>,
}

pub fn perm_path(permutation: &Path, steps: usize, emit_samples: bool, tol: &Tolerance) -> Result<Report, Failure> {
    let sigma = parse::<PermutationDoc>(&read(permutation)?)?.into_permutation()?;
    let path = unitary_path_to_identity(&sigma, steps, tol)?;
    let samples = emit_samples.then(|| path.samples.iter().map(rows_from_matrix).collect());
    Report::new(
        &PermPathReport {
            images: sigma.images().to_vec(),
            sign: sigma.sign(),
            generator: rows_from_matrix(&path.generator),
            obstruction: orthogonal_obstruction(&sigma),
            path,
            samples,
        },
        0,
    )
}

#[derive(Serialize)]
struct LoggedOutcome {
    context: String,
    index: usize,
    vector: VectorEntries,
}

#[derive(Serialize)]
struct StepFrequencies {
    context: String,
    frequencies: Vec<f64>,
}

#[derive(Serialize)]
struct SimulationReport {
    seed: u64,
    repeats: usize,
    /// Outcomes of repeat 0.
    log: Vec<LoggedOutcome>,
    /// Per step, the fraction of repeats landing on each outcome index.
    frequencies: Vec<StepFrequencies>,
}

/// Repeat `r` runs on substream `r` of the seed.
pub fn simulate(
    initial: &Path,
    contexts: &Path,
    seed: u64,
    repeats: usize,
    tol: &Tolerance,
) -> Result<Report, Failure> {
    if repeats == 0 {
        return Err(Failure("--repeats must be at least 1".into()));
    }
    let start = parse::<RayDoc>(&read(initial)?)?.into_projector()?;
    let contexts = parse::<ContextListDoc>(&read(contexts)?)?.into_contexts(tol)?;
    let mut counts: Vec<Vec<u64>> = contexts.iter().map(|c| vec![0; c.dim()]).collect();
    let mut log = Vec::new();
    for r in 0..repeats {
        let outcomes = simulate_stream(&start, &contexts, seed, r as u64, tol)?;
        for (step, o) in outcomes.iter().enumerate() {
            counts[step][o.index] += 1;
        }
        if r == 0 {
            log = outcomes
                .into_iter()
                .map(|o| LoggedOutcome {
                    context: o.context_label,
                    index: o.index,
                    vector: entries_from_vector(o.projector.representative()),
                })
                .collect();
        }
    }
    let frequencies = contexts
        .iter()
        .zip(&counts)
        .map(|(c, row)| StepFrequencies {
            context: c.label().to_owned(),
            frequencies: row.iter().map(|&k| k as f64 / repeats as f64).collect(),
        })
        .collect();
    Report::new(
        &SimulationReport {
            seed,
            repeats,
            log,
            frequencies,
        },
        0,
    )
}
