//! Command-line definitions and dispatch.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rotnd_core::format::{read_tensor, write_any, AnyTensor, Dtype, Element};
use rotnd_core::{
    reverse_region, reverse_region_parallel, rotate_in_place, rotate_in_place_parallel,
    IndexVector, Region, ShiftVector, TensorBuffer, TensorShape,
};

use crate::bench::{self, BenchConfig};
use crate::gen::{self, Fill};
use crate::verify::{self, VerifyConfig};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "rotnd",
    version,
    about = "In-place cyclic shifts of N-dimensional tensor files"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cyclically shift a tensor file.
    Rotate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// One shift per dimension, comma separated; negatives allowed.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        shift: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Reverse a region (default: the whole tensor) of a tensor file.
    Reverse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Inclusive start corner, comma separated.
        #[arg(long, value_delimiter = ',', requires = "end")]
        start: Option<Vec<usize>>,
        /// Inclusive end corner, comma separated.
        #[arg(long, value_delimiter = ',', requires = "start")]
        end: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Compare in-place rotation against the copying oracle on random trials.
    Verify {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        max_dims: usize,
        #[arg(long)]
        max_elems: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Time rotations and write one CSV row per (size, workers) cell.
    Bench {
        /// Approximate element counts, comma separated.
        #[arg(long, value_delimiter = ',')]
        elems: Vec<usize>,
        #[arg(long)]
        dims: usize,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        workers: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Write a tensor file filled with 1, 2, 3, ... or seeded random values.
    Gen {
        #[arg(long, value_delimiter = ',')]
        shape: Vec<usize>,
        #[arg(long, value_enum, default_value_t = DtypeArg::I64)]
        dtype: DtypeArg,
        #[arg(long, value_enum, default_value_t = FillArg::Iota)]
        fill: FillArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DtypeArg {
    F64,
    I64,
    U8,
}

impl From<DtypeArg> for Dtype {
    fn from(d: DtypeArg) -> Self {
        match d {
            DtypeArg::F64 => Dtype::F64,
            DtypeArg::I64 => Dtype::I64,
            DtypeArg::U8 => Dtype::U8,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FillArg {
    Iota,
    Random,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code. Normal output goes to `out`, errors to
/// stderr.
pub fn main_with_args<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("rotnd: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Rotate {
            input,
            output,
            shift,
            workers,
        } => {
            let mut tensor = read_tensor(&input)?;
            let shift = ShiftVector(shift);
            if shift.len() != tensor.shape().ndim() {
                return Err(CliError::Invalid(format!(
                    "--shift has {} components but {} has {} dimensions",
                    shift.len(),
                    input.display(),
                    tensor.shape().ndim()
                )));
            }
            check_workers(workers)?;
            with_buffer(&mut tensor, |b| b.rotate(&shift, workers))?;
            write_any(&output, &tensor)?;
        }
        Command::Reverse {
            input,
            output,
            start,
            end,
            workers,
        } => {
            let mut tensor = read_tensor(&input)?;
            check_workers(workers)?;
            let region = match (start, end) {
                (Some(s), Some(e)) => Region::new(IndexVector(s), IndexVector(e)),
                _ => match tensor.shape().full_region() {
                    Some(r) => r,
                    None => {
                        write_any(&output, &tensor)?;
                        return Ok(());
                    }
                },
            };
            with_buffer(&mut tensor, |b| b.reverse(&region, workers))?;
            write_any(&output, &tensor)?;
        }
        Command::Verify {
            trials,
            max_dims,
            max_elems,
            seed,
            workers,
        } => {
            let cfg = VerifyConfig {
                trials,
                max_dims,
                max_elems,
                seed,
                workers,
            };
            verify::run(&cfg, &verify::sequential, &verify::parallel, out)?;
        }
        Command::Bench {
            elems,
            dims,
            workers,
            reps,
            csv,
        } => {
            let cfg = BenchConfig {
                sizes: elems,
                dims,
                workers,
                reps,
            };
            let mut io_err = None;
            let records = bench::run(&cfg, |r| {
                let line = writeln!(
                    out,
                    "elements={} workers={} median_ns={} swaps={} reversals={}",
                    r.element_count(),
                    r.workers,
                    r.elapsed_ns,
                    r.swaps,
                    r.reversals
                );
                if let Err(e) = line {
                    io_err.get_or_insert(e);
                }
            })?;
            if let Some(e) = io_err {
                return Err(e.into());
            }
            bench::write_csv(&csv, &records)?;
        }
        Command::Gen {
            shape,
            dtype,
            fill,
            seed,
            output,
        } => {
            let shape = TensorShape::new(shape)?;
            if shape.ndim() > rotnd_core::MAX_DIMS {
                return Err(CliError::Invalid(
                    "tensor files hold at most 63 dimensions".into(),
                ));
            }
            let fill = match fill {
                FillArg::Iota => Fill::Iota,
                FillArg::Random => Fill::Random,
            };
            write_any(&output, &gen::generate(shape, dtype.into(), fill, seed))?;
        }
    }
    Ok(())
}

fn check_workers(workers: usize) -> Result<(), CliError> {
    if workers == 0 {
        return Err(CliError::Invalid("--workers must be at least 1".into()));
    }
    Ok(())
}

fn rotate_buffer<T: Element>(
    b: &mut TensorBuffer<T>,
    shift: &ShiftVector,
    workers: usize,
) -> Result<(), CliError> {
    if workers == 1 {
        rotate_in_place(b, shift)?;
    } else {
        rotate_in_place_parallel(b, shift, workers)?;
    }
    Ok(())
}

fn reverse_buffer<T: Element>(
    b: &mut TensorBuffer<T>,
    region: &Region,
    workers: usize,
) -> Result<(), CliError> {
    if workers == 1 {
        reverse_region(b, region)?;
    } else {
        reverse_region_parallel(b, region, workers)?;
    }
    Ok(())
}

/// Applies `op` to whichever element type the file holds.
fn with_buffer(
    tensor: &mut AnyTensor,
    op: impl FnOnce(&mut dyn ErasedBuffer) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match tensor {
        AnyTensor::F64(b) => op(b),
        AnyTensor::I64(b) => op(b),
        AnyTensor::U8(b) => op(b),
    }
}

/// Object-safe view of a typed buffer so closures can stay non-generic.
trait ErasedBuffer {
    fn rotate(&mut self, shift: &ShiftVector, workers: usize) -> Result<(), CliError>;
    fn reverse(&mut self, region: &Region, workers: usize) -> Result<(), CliError>;
}

impl<T: Element> ErasedBuffer for TensorBuffer<T> {
    fn rotate(&mut self, shift: &ShiftVector, workers: usize) -> Result<(), CliError> {
        rotate_buffer(self, shift, workers)
    }

    fn reverse(&mut self, region: &Region, workers: usize) -> Result<(), CliError> {
        reverse_buffer(self, region, workers)
    }
}

pub fn run_process() -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    main_with_args(std::env::args_os(), &mut lock)
}
