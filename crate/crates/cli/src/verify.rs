//! Seeded randomized comparison of the in-place rotation against the oracle.

use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotnd_core::{oracle_rotate, ShiftVector, TensorBuffer, TensorError, TensorShape};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub trials: u64,
    pub max_dims: usize,
    pub max_elems: usize,
    pub seed: u64,
    pub workers: usize,
}

/// A rotation under test: `(buffer, shift, workers)`.
pub type Rotator<'a> =
    &'a dyn Fn(&mut TensorBuffer<i64>, &ShiftVector, usize) -> Result<(), TensorError>;

pub fn sequential(
    b: &mut TensorBuffer<i64>,
    k: &ShiftVector,
    _workers: usize,
) -> Result<(), TensorError> {
    rotnd_core::rotate_in_place(b, k)
}

pub fn parallel(
    b: &mut TensorBuffer<i64>,
    k: &ShiftVector,
    workers: usize,
) -> Result<(), TensorError> {
    rotnd_core::rotate_in_place_parallel(b, k, workers)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub shape: TensorShape,
    pub shift: ShiftVector,
    pub data: Vec<i64>,
}

/// Draws a shape of at most `max_elems` elements and `1..=max_dims`
/// dimensions, random contents and a shift in `[-2d, 2d]` per component.
pub fn draw_trial(rng: &mut ChaCha8Rng, max_dims: usize, max_elems: usize) -> Trial {
    let ndim = rng.gen_range(1..=max_dims);
    let mut remaining = rng.gen_range(1..=max_elems);
    let mut dims = Vec::with_capacity(ndim);
    for l in 0..ndim {
        let left = (ndim - l) as f64;
        let typical = (remaining as f64).powf(1.0 / left).ceil() as usize;
        let d = rng
            .gen_range(1..=(2 * typical).max(1))
            .min(remaining.max(1));
        dims.push(d);
        remaining /= d;
    }
    let shape = TensorShape::new(dims).expect("bounded by max_elems");
    let data = (0..shape.element_count()).map(|_| rng.gen()).collect();
    let shift = shape
        .dims()
        .iter()
        .map(|&d| {
            let d = d as i64;
            rng.gen_range(-2 * d..=2 * d)
        })
        .collect();
    Trial {
        shape,
        shift: ShiftVector(shift),
        data,
    }
}

pub fn validate(cfg: &VerifyConfig) -> Result<(), CliError> {
    if cfg.trials == 0 {
        return Err(CliError::Invalid("--trials must be at least 1".into()));
    }
    if !(1..=8).contains(&cfg.max_dims) {
        return Err(CliError::Invalid("--max-dims must lie in 1..=8".into()));
    }
    if cfg.max_elems == 0 {
        return Err(CliError::Invalid("--max-elems must be at least 1".into()));
    }
    if cfg.workers == 0 {
        return Err(CliError::Invalid("--workers must be at least 1".into()));
    }
    Ok(())
}

/// Runs every trial, writing one line per trial and a summary to `out`.
/// With more than one worker each trial also checks `parallel_impl`.
/// Returns `Mismatch` describing the first failing trial.
pub fn run(
    cfg: &VerifyConfig,
    sequential_impl: Rotator<'_>,
    parallel_impl: Rotator<'_>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    validate(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failed = 0u64;
    let mut first_failure = None;

    let mut variants: Vec<(&str, Rotator<'_>)> = vec![("sequential", sequential_impl)];
    if cfg.workers > 1 {
        variants.push(("parallel", parallel_impl));
    }

    for n in 0..cfg.trials {
        let trial = draw_trial(&mut rng, cfg.max_dims, cfg.max_elems);
        let original = TensorBuffer::new(trial.shape.clone(), trial.data).expect("length matches");
        let expected = oracle_rotate(&original, &trial.shift)?;

        let mut problems = Vec::new();
        for (name, rotate) in &variants {
            let mut actual = original.clone();
            rotate(&mut actual, &trial.shift, cfg.workers)?;
            if let Some(diff) = first_difference(&expected, &actual) {
                problems.push(format!("{name}: {diff}"));
            }
        }

        let status = if problems.is_empty() { "pass" } else { "FAIL" };
        writeln!(
            out,
            "trial {n:>5} shape={} shift={} workers={} {status}",
            trial.shape, trial.shift, cfg.workers
        )?;
        for p in &problems {
            writeln!(out, "    {p}")?;
        }
        if !problems.is_empty() {
            failed += 1;
            first_failure.get_or_insert_with(|| format!("trial {n}: {}", problems[0]));
        }
    }

    writeln!(
        out,
        "summary: {} of {} trials passed (seed {}, max-dims {}, max-elems {}, workers {})",
        cfg.trials - failed,
        cfg.trials,
        cfg.seed,
        cfg.max_dims,
        cfg.max_elems,
        cfg.workers
    )?;
    match first_failure {
        Some(msg) => Err(CliError::Mismatch(msg)),
        None => Ok(()),
    }
}

fn first_difference(expected: &TensorBuffer<i64>, actual: &TensorBuffer<i64>) -> Option<String> {
    let full = expected.shape().full_region()?;
    full.indices()
        .zip(expected.data().iter().zip(actual.data()))
        .find(|(_, (e, a))| e != a)
        .map(|(idx, (e, a))| format!("first difference at {idx}: expected {e}, actual {a}"))
}
