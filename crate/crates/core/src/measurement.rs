//! Sequential projective measurements with a seeded, portable generator.
//!
//! The state after an outcome is the outcome's projector, so measuring the
//! same context again (or any context sharing that projector) repeats the
//! result with certainty.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{context_distribution, Context, DensityOperator, Projector};
use crate::numerics::{ensure_dim, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub context_label: String,
    pub index: usize,
    pub projector: Projector,
}

/// Counter-based generator keyed by `seed`; `stream` selects an independent
/// substream, so run `r` of a batch never depends on how many draws run
/// `r - 1` consumed.
pub fn sequence_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Inverse-CDF draw. Probabilities at or below `floor` are treated as exact
/// zeros and are never selected.
pub fn sample_index<R: Rng + ?Sized>(rng: &mut R, probs: &[f64], floor: f64) -> usize {
    let weights: Vec<f64> = probs.iter().map(|&p| if p <= floor { 0.0 } else { p }).collect();
    let total: f64 = weights.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        cumulative += w;
        last_positive = i;
        if u < cumulative {
            return i;
        }
    }
    last_positive
}

pub fn simulate_sequence(
    initial: &Projector,
    contexts: &[Context],
    seed: u64,
    tol: &Tolerance,
) -> Result<Vec<Outcome>> {
    simulate_stream(initial, contexts, seed, 0, tol)
}

/// Same as [`simulate_sequence`] on substream `stream` of `seed`.
pub fn simulate_stream(
    initial: &Projector,
    contexts: &[Context],
    seed: u64,
    stream: u64,
    tol: &Tolerance,
) -> Result<Vec<Outcome>> {
    for c in contexts {
        ensure_dim(initial.dim(), c.dim())?;
    }
    let mut rng = sequence_rng(seed, stream);
    let mut state = DensityOperator::from_projector(initial);
    let mut log = Vec::with_capacity(contexts.len());
    for c in contexts {
        let probs = context_distribution(&state, c)?;
        let index = sample_index(&mut rng, &probs, tol.abs_eps);
        let projector = c.projectors()[index].clone();
        state = DensityOperator::from_projector(&projector);
        log.push(Outcome {
            context_label: c.label().to_owned(),
            index,
            projector,
        });
    }
    Ok(log)
}
