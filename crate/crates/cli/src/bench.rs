//! Timing harness: median wall time of repeated in-place rotations.

use std::path::Path;
use std::time::Instant;

use rotnd_core::format::Element;
use rotnd_core::{
    rotate_in_place_parallel_with, rotate_in_place_with, Counters, ShiftVector, TensorBuffer,
    TensorShape,
};

use crate::CliError;

pub const CSV_HEADER: [&str; 7] = [
    "shape",
    "shift",
    "workers",
    "elapsed_ns",
    "swaps",
    "reversals",
    "repetitions",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub shape: Vec<usize>,
    pub shift: Vec<i64>,
    pub workers: usize,
    /// Median over `repetitions` runs.
    pub elapsed_ns: u64,
    pub swaps: u64,
    pub reversals: u64,
    pub repetitions: usize,
}

impl BenchRecord {
    pub fn element_count(&self) -> usize {
        self.shape.iter().product()
    }

    fn fields(&self) -> [String; 7] {
        [
            join(&self.shape),
            join(&self.shift),
            self.workers.to_string(),
            self.elapsed_ns.to_string(),
            self.swaps.to_string(),
            self.reversals.to_string(),
            self.repetitions.to_string(),
        ]
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

/// Near-cubic extents whose product is close to `elements`: every dimension
/// gets the integer n-th root except the last, which absorbs the remainder.
pub fn near_cubic_dims(elements: usize, ndim: usize) -> Vec<usize> {
    let mut root = (elements as f64).powf(1.0 / ndim as f64).round().max(1.0) as usize;
    while root > 1 && root.pow(ndim as u32) > elements {
        root -= 1;
    }
    let mut dims = vec![root; ndim];
    let others = root.pow(ndim as u32 - 1);
    dims[ndim - 1] = ((elements as f64 / others as f64).round() as usize).max(1);
    dims
}

/// `k_l = floor(d_l / 2)`, which keeps every block nonempty for `d_l >= 2`.
pub fn mid_shift(dims: &[usize]) -> Vec<i64> {
    dims.iter().map(|&d| (d / 2) as i64).collect()
}

pub fn median(samples: &mut [u64]) -> u64 {
    samples.sort_unstable();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2
    }
}

/// Bytes streamed through before each timed repetition. Larger than the
/// last-level cache share of typical hosts, so every repetition starts cold.
pub const EVICT_BYTES: usize = 256 << 20;

/// Writes and reads a scratch area so the tensor is no longer cache
/// resident. Without this, tensors that fit in cache are timed warm and
/// larger ones cold, which shows up as a superlinear step at the boundary.
fn evict_caches(scratch: &mut [u64]) {
    for (i, x) in scratch.iter_mut().enumerate() {
        *x = x.wrapping_add(i as u64);
    }
    std::hint::black_box(scratch.iter().fold(0u64, |a, &x| a ^ x));
}

/// Times `reps` rotations of `buffer` and returns the record. The buffer is
/// rotated repeatedly in place; every repetition performs the same work and
/// starts with caches evicted.
pub fn measure<T: Element>(
    buffer: &mut TensorBuffer<T>,
    shift: &ShiftVector,
    workers: usize,
    reps: usize,
) -> Result<BenchRecord, CliError> {
    let mut samples = Vec::with_capacity(reps);
    let mut counters = Counters::default();
    let mut scratch = vec![0u64; EVICT_BYTES / 8];
    for rep in 0..reps {
        let mut local = Counters::default();
        evict_caches(&mut scratch);
        let start = Instant::now();
        if workers == 1 {
            rotate_in_place_with(buffer, shift, &mut local)?;
        } else {
            rotate_in_place_parallel_with(buffer, shift, workers, &mut local)?;
        }
        samples.push(start.elapsed().as_nanos() as u64);
        if rep == 0 {
            counters = local;
        }
    }
    Ok(BenchRecord {
        shape: buffer.shape().dims().to_vec(),
        shift: shift.0.clone(),
        workers,
        elapsed_ns: median(&mut samples),
        swaps: counters.swaps,
        reversals: counters.reversals,
        repetitions: reps,
    })
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub dims: usize,
    pub workers: Vec<usize>,
    pub reps: usize,
}

pub fn validate(cfg: &BenchConfig) -> Result<(), CliError> {
    if cfg.sizes.is_empty() || cfg.sizes.contains(&0) {
        return Err(CliError::Invalid("--elems needs positive sizes".into()));
    }
    if cfg.dims == 0 || cfg.dims > rotnd_core::MAX_DIMS {
        return Err(CliError::Invalid("--dims must lie in 1..=63".into()));
    }
    if cfg.workers.is_empty() || cfg.workers.contains(&0) {
        return Err(CliError::Invalid("--workers needs positive counts".into()));
    }
    if cfg.reps < 3 {
        return Err(CliError::Invalid("--reps must be at least 3".into()));
    }
    Ok(())
}

/// Runs every (size, workers) cell on f64 iota tensors.
pub fn run(
    cfg: &BenchConfig,
    mut on_record: impl FnMut(&BenchRecord),
) -> Result<Vec<BenchRecord>, CliError> {
    validate(cfg)?;
    let mut records = Vec::new();
    for &size in &cfg.sizes {
        let dims = near_cubic_dims(size, cfg.dims);
        let shift = ShiftVector(mid_shift(&dims));
        let shape = TensorShape::new(dims)?;
        let mut buffer = TensorBuffer::from_fn(shape, |i| i as f64);
        for &workers in &cfg.workers {
            let record = measure(&mut buffer, &shift, workers, cfg.reps)?;
            on_record(&record);
            records.push(record);
        }
    }
    Ok(records)
}

pub fn write_csv(path: &Path, records: &[BenchRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a file produced by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>, CliError> {
    let mut r = csv::Reader::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(CliError::Invalid(format!(
            "unexpected CSV header {header:?}"
        )));
    }
    let bad = |what: &str| CliError::Invalid(format!("bad {what} field"));
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        let list = |s: &str| -> Result<Vec<i64>, CliError> {
            s.split(';')
                .map(|x| x.parse().map_err(|_| bad("list")))
                .collect()
        };
        let num =
            |i: usize| -> Result<u64, CliError> { row[i].parse().map_err(|_| bad(CSV_HEADER[i])) };
        out.push(BenchRecord {
            shape: list(&row[0])?.into_iter().map(|x| x as usize).collect(),
            shift: list(&row[1])?,
            workers: num(2)? as usize,
            elapsed_ns: num(3)?,
            swaps: num(4)?,
            reversals: num(5)?,
            repetitions: num(6)? as usize,
        });
    }
    Ok(out)
}
