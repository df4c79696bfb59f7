//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use serde::Deserialize;

use csm_born::gleason::{mutually_unbiased_bases, reconstruct_density, superposition_family, FrameSample};
use csm_born::measurement::{sequence_rng, simulate_stream};
use csm_born::model::{born_probability, context_distribution, extravalent};
use csm_born::numerics::{basis_vector, frobenius};
use csm_born::partition::{load_ks_instance, search_assignment, Status};
use csm_born::random::{random_context, random_density, random_ray, random_unitary, random_vectors};
use csm_born::topology::{orthogonal_obstruction, unitary_path_to_identity, Permutation};
use csm_born::uhlhorn::{
    check_orthogonality_preserving, classify_transform, distance_up_to_phase, fit_transform, phase_fixing_gadget,
    RayMap, Verdict,
};
use csm_born::{ComplexVector, Context, ContextTransform, Projector, Tolerance};

struct Outcome {
    passed: bool,
    detail: String,
}

fn datasets() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../datasets")
}

fn informationally_complete(n: usize) -> Vec<Projector> {
    match n {
        3 | 5 => mutually_unbiased_bases(n)
            .unwrap()
            .iter()
            .flat_map(|c| c.projectors().to_vec())
            .collect(),
        _ => superposition_family(n),
    }
}

fn normalization() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [3, 4, 5] {
        let mut rng = sequence_rng(1, n as u64);
        let states: Vec<_> = (0..100).map(|_| random_density(&mut rng, n)).collect();
        let contexts: Vec<_> = (0..1000).map(|_| random_context(&mut rng, n, "c")).collect();
        for rho in &states {
            for c in &contexts {
                let sum: f64 = context_distribution(rho, c).unwrap().iter().sum();
                worst = worst.max((sum - 1.0).abs());
            }
        }
    }
    Outcome {
        passed: worst <= 1e-10,
        detail: format!("max |sum - 1| = {worst:.2e} over 3 x 100 x 1000 distributions"),
    }
}

fn gleason_round_trip() -> Outcome {
    let tol = Tolerance::default();
    let sigma = 1e-4;
    let mut exact_worst: f64 = 0.0;
    let mut noisy_ratio: f64 = 0.0;
    for n in [3, 4, 5] {
        let family = informationally_complete(n);
        let mut rng = sequence_rng(2, n as u64);
        for _ in 0..100 {
            let rho = random_density(&mut rng, n);
            let values: Vec<f64> = family.iter().map(|p| born_probability(&rho, p).unwrap()).collect();
            let exact: Vec<FrameSample> = family
                .iter()
                .zip(&values)
                .map(|(p, &v)| FrameSample::new(p.clone(), v).unwrap())
                .collect();
            let report = reconstruct_density(&exact, &tol).unwrap();
            exact_worst = exact_worst.max(frobenius(&(report.rho.matrix() - rho.matrix())));

            let noise = random_vectors(&mut rng, values.len(), 1).remove(0);
            let noisy: Vec<FrameSample> = family
                .iter()
                .zip(&values)
                .zip(noise.iter())
                .map(|((p, &v), z)| FrameSample::new(p.clone(), (v + sigma * z.re).clamp(0.0, 1.0)).unwrap())
                .collect();
            let report = reconstruct_density(&noisy, &tol).unwrap();
            let error = frobenius(&(report.rho.matrix() - rho.matrix()));
            noisy_ratio = noisy_ratio.max(error / (10.0 * sigma * report.condition_number));
        }
    }
    Outcome {
        passed: exact_worst <= 1e-8 && noisy_ratio <= 1.0,
        detail: format!(
            "exact max error {exact_worst:.2e} (limit 1e-8); noisy max error / (10 sigma cond) = {noisy_ratio:.3}"
        ),
    }
}

fn uhlhorn_certification() -> Outcome {
    let tol = Tolerance::default();
    let mut failures = Vec::new();
    let mut decided = 0;
    let mut worst_residual: f64 = 0.0;
    let mut worst_recovery: f64 = 0.0;
    for n in [3, 4] {
        for anti in [false, true] {
            let mut rng = sequence_rng(3, (n as u64) * 2 + u64::from(anti));
            for trial in 0..50 {
                let g = ContextTransform::new(random_unitary(&mut rng, n), anti, &tol).unwrap();
                let fiducial = random_context(&mut rng, n, "fiducial");
                let mut sources = fiducial.projectors().to_vec();
                sources.extend(phase_fixing_gadget(&fiducial));
                sources.extend((0..5).map(|_| random_ray(&mut rng, n)));
                let map = RayMap::induced(sources, vec![fiducial], &g, &tol).unwrap();
                let tag = format!("n={n} anti={anti} trial={trial}");
                if !check_orthogonality_preserving(&map, &tol).preserving {
                    failures.push(format!("{tag}: orthogonality"));
                    continue;
                }
                let expected = if anti { Verdict::Antiunitary } else { Verdict::Unitary };
                let verdict = classify_transform(&map, &tol).unwrap().verdict;
                if verdict != Verdict::Inconclusive {
                    decided += 1;
                    if verdict != expected {
                        failures.push(format!("{tag}: verdict {verdict:?}"));
                    }
                }
                match fit_transform(&map, &tol) {
                    Ok(fit) => {
                        worst_residual = worst_residual.max(fit.residual);
                        worst_recovery = worst_recovery.max(distance_up_to_phase(fit.transform.matrix(), g.matrix()));
                    }
                    Err(e) => failures.push(format!("{tag}: {e}")),
                }
            }
        }
    }
    let passed = failures.is_empty() && worst_residual <= 1e-8 && worst_recovery <= 1e-8;
    Outcome {
        passed,
        detail: format!(
            "200 maps, {decided} with a nonreal triple; residual {worst_residual:.2e}, recovery {worst_recovery:.2e}{}",
            if failures.is_empty() { String::new() } else { format!("; failures: {failures:?}") }
        ),
    }
}

fn partition_impossibility() -> Outcome {
    let text = fs::read_to_string(datasets().join("ks/cabello18_dim4.json")).unwrap();
    let inst = load_ks_instance(&text, &Tolerance::default()).unwrap();
    let full = search_assignment(&inst);
    let unsat = full.status == Status::Unsat && full.certificate.is_some();
    let sat_after_deletion = (0..inst.bases().len()).all(|b| {
        let reduced = inst.without_basis(b);
        let r = search_assignment(&reduced);
        r.status == Status::Sat && reduced.satisfies(r.assignment.as_ref().unwrap())
    });
    Outcome {
        passed: unsat && sat_after_deletion,
        detail: format!(
            "{} vectors / {} bases: {:?} in {} nodes, certificate {}; every single-basis deletion SAT: {sat_after_deletion}",
            inst.vectors().len(),
            inst.bases().len(),
            full.status,
            full.nodes_explored,
            full.certificate.is_some()
        ),
    }
}

fn connectivity_dichotomy() -> Outcome {
    let tol = Tolerance::default();
    let mut worst: f64 = 0.0;
    let mut mismatches = 0;
    let mut count = 0;
    for n in [3, 4] {
        for sigma in Permutation::all(n) {
            count += 1;
            let report = unitary_path_to_identity(&sigma, 101, &tol).unwrap();
            worst = worst
                .max(report.endpoint_errors.0)
                .max(report.endpoint_errors.1)
                .max(report.max_unitarity_deviation);
            let odd = sigma.sign() == -1;
            if orthogonal_obstruction(&sigma).connected_in_orthogonal_group == odd {
                mismatches += 1;
            }
        }
    }
    Outcome {
        passed: worst <= 1e-9 && mismatches == 0 && count == 30,
        detail: format!("{count} permutations, max deviation {worst:.2e}, parity mismatches {mismatches}"),
    }
}

/// Context sharing `a`'s first ray; the rest of `a` rotated by a random unitary on the complement.
fn sharing_first_ray(a: &Context, w: &csm_born::ComplexMatrix, label: &str) -> Context {
    let n = a.dim();
    let va = a.vectors();
    let mut vs = vec![va[0].clone()];
    for k in 1..n {
        let mut v = ComplexVector::zeros(n);
        for j in 1..n {
            v += &va[j] * w[(j - 1, k - 1)];
        }
        vs.push(v);
    }
    Context::new(&vs, label, &Tolerance::default()).unwrap()
}

fn repeatability() -> Outcome {
    let tol = Tolerance::default();
    let mut repeats = 0u64;
    let mut repeated = 0u64;
    let mut transfers = 0u64;
    let mut certain = 0u64;
    let mut extravalence_ok = true;
    for seed in 0..100u64 {
        let mut rng = sequence_rng(seed, 1_000);
        let n = 3 + (seed % 3) as usize;
        let a = random_context(&mut rng, n, "a");
        let b = sharing_first_ray(&a, &random_unitary(&mut rng, n - 1), "b");
        let c = random_context(&mut rng, n, "c");
        extravalence_ok &= extravalent(&a.modality(0).unwrap(), &b.modality(0).unwrap(), &tol).unwrap();
        let pool = [a, b, c];
        let picks: Vec<usize> = (0..40).map(|k| ((seed as usize * 7 + k * k) % 5) % 3).collect();
        let contexts: Vec<Context> = picks.iter().map(|&k| pool[k].clone()).collect();
        let start = random_ray(&mut rng, n);
        for stream in 0..10 {
            let log = simulate_stream(&start, &contexts, seed, stream, &tol).unwrap();
            for (k, w) in log.windows(2).enumerate() {
                if picks[k] == picks[k + 1] {
                    repeats += 1;
                    repeated += u64::from(w[0].index == w[1].index);
                }
                let across = (picks[k], picks[k + 1]);
                if (across == (0, 1) || across == (1, 0)) && w[0].index == 0 {
                    transfers += 1;
                    certain += u64::from(w[1].index == 0);
                }
            }
        }
    }
    let passed = repeats > 0 && repeated == repeats && transfers > 0 && certain == transfers && extravalence_ok;
    Outcome {
        passed,
        detail: format!(
            "repeat frequency {repeated}/{repeats}; extravalent transfer frequency {certain}/{transfers}"
        ),
    }
}

fn born_frequencies() -> Outcome {
    let tol = Tolerance::default();
    let start = Projector::from_vector(&basis_vector(3, 0)).unwrap();
    let contexts = [Context::fourier(3, "fourier")];
    let runs = 30_000;
    let mut counts = [0u32; 3];
    for r in 0..runs {
        counts[simulate_stream(&start, &contexts, 0, r, &tol).unwrap()[0].index] += 1;
    }
    let freqs: Vec<f64> = counts.iter().map(|&k| f64::from(k) / runs as f64).collect();
    let worst = freqs.iter().map(|f| (f - 1.0 / 3.0).abs()).fold(0.0, f64::max);
    Outcome {
        passed: worst <= 0.01,
        detail: format!("frequencies {freqs:.4?}, max deviation from 1/3 {worst:.4}"),
    }
}

#[derive(Deserialize)]
struct Case {
    name: String,
    exit_code: i32,
    args: Vec<String>,
}

#[derive(Deserialize)]
struct Manifest {
    cases: Vec<Case>,
}

fn determinism() -> Outcome {
    let manifest: Manifest =
        serde_json::from_str(&fs::read_to_string(datasets().join("golden/manifest.json")).unwrap()).unwrap();
    let mut problems = Vec::new();
    for case in &manifest.cases {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_csm-born"))
                .current_dir(datasets())
                .args(&case.args)
                .output()
                .unwrap()
        };
        let (first, second) = (run(), run());
        let golden = fs::read(datasets().join(format!("golden/{}.json", case.name))).unwrap_or_default();
        if first.stdout != second.stdout {
            problems.push(format!("{}: reruns differ", case.name));
        }
        if first.stdout != golden {
            problems.push(format!("{}: differs from golden", case.name));
        }
        if first.status.code() != Some(case.exit_code) {
            problems.push(format!("{}: exit {:?}", case.name, first.status.code()));
        }
    }
    Outcome {
        passed: problems.is_empty(),
        detail: format!(
            "{} commands run twice against golden files{}",
            manifest.cases.len(),
            if problems.is_empty() { String::new() } else { format!("; {problems:?}") }
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("frame-function normalization", normalization, Duration::from_secs(10)),
        ("density reconstruction round trip", gleason_round_trip, Duration::from_secs(30)),
        ("ray-map certification", uhlhorn_certification, Duration::from_secs(30)),
        ("partition impossibility", partition_impossibility, Duration::from_secs(5)),
        ("connectivity dichotomy", connectivity_dichotomy, Duration::from_secs(10)),
        ("repeatability and extravalence", repeatability, Duration::MAX),
        ("Born frequencies", born_frequencies, Duration::from_secs(5)),
        ("CLI determinism", determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let in_budget = elapsed <= *budget;
        let passed = outcome.passed && in_budget;
        failed += usize::from(!passed);
        let budget_note = if *budget == Duration::MAX {
            String::new()
        } else {
            format!(" / budget {}s", budget.as_secs())
        };
        println!(
            "criterion {} {}: {} ({}; {:.2}s{budget_note})",
            k + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
