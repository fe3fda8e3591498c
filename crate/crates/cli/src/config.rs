use std::path::PathBuf;

use blockcur::MatrixFormat;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};

/// Environment variable that overrides the worker thread count.
pub const THREADS_ENV: &str = "BLOCKCUR_THREADS";

pub const DESK_BENCH_SIZE: usize = 4096;
pub const LARGE_BENCH_SIZE: usize = 16384;
pub const BENCH_RANK: usize = 32;

#[derive(Debug, Parser)]
#[command(
    name = "blockcur",
    version,
    about = "Blockwise CUR decomposition, error studies and scaling benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Decompose a stored matrix and write C, core and R.
    Decompose(DecomposeArgs),
    /// Relative error of Hilbert matrices against the selected count.
    ExperimentHilbert(ExperimentArgs),
    /// Relative error of synthetic low-rank matrices against the selected count.
    ExperimentLowrank(ExperimentArgs),
    /// Wall time of the blockwise decomposition against thread count.
    BenchScaling(BenchArgs),
    /// Check the max-volume error bounds on a seeded battery.
    Verify(VerifyArgs),
    /// Write a generated matrix to disk.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Worker threads (defaults to the available hardware parallelism).
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Blocks per selection axis (defaults to the thread count).
    #[arg(long)]
    pub blocks: Option<usize>,
    /// Early-termination tolerance, relative to the first maximum norm.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub rank: usize,
    /// Number of columns (defaults to --rank).
    #[arg(long)]
    pub col_rank: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Restrict to these sizes (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Matrix size (defaults to 4096, or 16384 with --paper-scale).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub paper_scale: bool,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    /// Explicit thread counts to sweep (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub sweep: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub random: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    /// Column count for the random family (defaults to n).
    #[arg(long)]
    pub cols: Option<usize>,
    /// Generator rank for the low-rank family.
    #[arg(long, default_value_t = 5)]
    pub rank: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Mm,
    Bin,
}

impl From<FormatArg> for MatrixFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Mm => MatrixFormat::MatrixMarket,
            FormatArg::Bin => MatrixFormat::RawBinary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hilbert,
    Lowrank,
    Random,
}

/// Validated settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub threads: usize,
    /// `None` means one block per worker thread.
    pub blocks: Option<usize>,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Decompose {
        input: PathBuf,
        format: MatrixFormat,
        rank: usize,
        col_rank: usize,
        out: PathBuf,
    },
    ExperimentHilbert {
        sizes: Vec<usize>,
        out: Option<PathBuf>,
    },
    ExperimentLowrank {
        sizes: Vec<usize>,
        out: Option<PathBuf>,
    },
    BenchScaling {
        n: usize,
        rank: usize,
        reps: usize,
        thread_counts: Vec<usize>,
        out: Option<PathBuf>,
    },
    Verify {
        random: usize,
    },
    Generate {
        family: Family,
        rows: usize,
        cols: usize,
        rank: usize,
        seed: u64,
        format: MatrixFormat,
        out: PathBuf,
    },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn format_for(path: &std::path::Path, explicit: Option<FormatArg>) -> MatrixFormat {
    match explicit {
        Some(f) => f.into(),
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") | Some("mm") => MatrixFormat::MatrixMarket,
            _ => MatrixFormat::RawBinary,
        },
    }
}

fn hardware_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    fn from_common(c: &Common, default_tol: f64) -> CliResult<Self> {
        let threads = c.threads.unwrap_or_else(hardware_threads);
        if threads == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        let blocks = c.blocks;
        if blocks == Some(0) {
            return Err(usage("--blocks must be at least 1"));
        }
        let tol = c.tol.unwrap_or(default_tol);
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(usage(format!(
                "--tol must be a finite non-negative number, got {tol}"
            )));
        }
        Ok(RunConfig {
            threads,
            blocks,
            tol,
            seed: c.seed,
        })
    }
}

impl RunConfig {
    /// Block count for a run on `threads` workers over an axis of
    /// `dim` entries. The default (one block per thread) is capped at
    /// `dim`; an explicit count is passed through and validated downstream.
    pub fn blocks_for(&self, threads: usize, dim: usize) -> usize {
        self.blocks.unwrap_or_else(|| threads.min(dim).max(1))
    }
}

fn check_sizes(sizes: Vec<usize>) -> CliResult<Vec<usize>> {
    for &n in &sizes {
        if !crate::commands::EXPERIMENT_SIZES.contains(&n) {
            return Err(usage(format!(
                "--sizes accepts {:?}, got {n}",
                crate::commands::EXPERIMENT_SIZES
            )));
        }
    }
    Ok(sizes)
}

/// Thread counts 1, 2, 4, … up to `max`, with `max` itself included.
pub fn doubling_sweep(max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut t = 1;
    while t < max {
        out.push(t);
        t *= 2;
    }
    out.push(max);
    out
}

impl Cli {
    /// Validates every argument before any computation starts.
    pub fn into_config(self) -> CliResult<(RunConfig, Command)> {
        let blockwise_tol = blockcur::selection::DEFAULT_SELECTION_TOL;
        match self.command {
            CliCommand::Decompose(a) => {
                let cfg = RunConfig::from_common(&a.common, blockwise_tol)?;
                let col_rank = a.col_rank.unwrap_or(a.rank);
                if a.rank == 0 || col_rank == 0 {
                    return Err(usage("--rank and --col-rank must be at least 1"));
                }
                let format = format_for(&a.input, a.format);
                Ok((
                    cfg,
                    Command::Decompose {
                        input: a.input,
                        format,
                        rank: a.rank,
                        col_rank,
                        out: a.out,
                    },
                ))
            }
            CliCommand::ExperimentHilbert(a) => Ok((
                RunConfig::from_common(&a.common, blockwise_tol)?,
                Command::ExperimentHilbert {
                    sizes: check_sizes(a.sizes)?,
                    out: a.out,
                },
            )),
            CliCommand::ExperimentLowrank(a) => Ok((
                RunConfig::from_common(&a.common, blockwise_tol)?,
                Command::ExperimentLowrank {
                    sizes: check_sizes(a.sizes)?,
                    out: a.out,
                },
            )),
            CliCommand::BenchScaling(a) => {
                // Full rank is always taken in the benchmark so every thread
                // count does the same amount of work.
                let cfg = RunConfig::from_common(&a.common, 0.0)?;
                let n = a.n.unwrap_or(if a.paper_scale {
                    LARGE_BENCH_SIZE
                } else {
                    DESK_BENCH_SIZE
                });
                let rank = a.rank.unwrap_or(BENCH_RANK);
                if rank == 0 || rank > n {
                    return Err(usage(format!("--rank must lie in 1..={n}, got {rank}")));
                }
                if a.reps < 3 {
                    return Err(usage(format!("--reps must be at least 3, got {}", a.reps)));
                }
                let thread_counts = if a.sweep.is_empty() {
                    doubling_sweep(cfg.threads)
                } else {
                    a.sweep
                };
                if thread_counts.contains(&0) {
                    return Err(usage("--sweep entries must be at least 1"));
                }
                Ok((
                    cfg,
                    Command::BenchScaling {
                        n,
                        rank,
                        reps: a.reps,
                        thread_counts,
                        out: a.out,
                    },
                ))
            }
            CliCommand::Verify(a) => Ok((
                RunConfig::from_common(&a.common, blockwise_tol)?,
                Command::Verify { random: a.random },
            )),
            CliCommand::Generate(a) => {
                let cols = a.cols.unwrap_or(a.n);
                if a.n == 0 || cols == 0 {
                    return Err(usage("generated matrices need at least one row and column"));
                }
                if a.family != Family::Random && cols != a.n {
                    return Err(usage("--cols only applies to the random family"));
                }
                let format = format_for(&a.out, a.format);
                Ok((
                    RunConfig {
                        threads: 1,
                        blocks: None,
                        tol: 0.0,
                        seed: a.seed,
                    },
                    Command::Generate {
                        family: a.family,
                        rows: a.n,
                        cols,
                        rank: a.rank,
                        seed: a.seed,
                        format,
                        out: a.out,
                    },
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> CliResult<(RunConfig, Command)> {
        let mut full = vec!["blockcur"];
        full.extend_from_slice(args);
        Cli::try_parse_from(full)
            .map_err(|e| usage(e.to_string()))?
            .into_config()
    }

    #[test]
    fn blocks_default_to_threads() {
        let (cfg, _) = parse(&["verify", "--threads", "3"]).unwrap();
        assert_eq!(cfg.blocks_for(3, 100), 3);
        assert_eq!(cfg.blocks_for(3, 2), 2);
        let (cfg, _) = parse(&["verify", "--threads", "3", "--blocks", "5"]).unwrap();
        assert_eq!(cfg.blocks_for(3, 2), 5);
    }

    #[test]
    fn zero_rank_is_a_usage_error() {
        let err =
            parse(&["decompose", "--input", "a.bin", "--rank", "0", "--out", "o"]).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn bench_defaults() {
        let (cfg, cmd) = parse(&["bench-scaling", "--threads", "8"]).unwrap();
        assert_eq!(cfg.tol, 0.0);
        assert_eq!(
            cmd,
            Command::BenchScaling {
                n: DESK_BENCH_SIZE,
                rank: BENCH_RANK,
                reps: 3,
                thread_counts: vec![1, 2, 4, 8],
                out: None,
            }
        );
        let (_, cmd) = parse(&["bench-scaling", "--paper-scale"]).unwrap();
        assert!(matches!(
            cmd,
            Command::BenchScaling {
                n: LARGE_BENCH_SIZE,
                ..
            }
        ));
        assert!(parse(&["bench-scaling", "--reps", "2"]).is_err());
    }

    #[test]
    fn sweep_includes_the_maximum() {
        assert_eq!(doubling_sweep(1), vec![1]);
        assert_eq!(doubling_sweep(6), vec![1, 2, 4, 6]);
        assert_eq!(doubling_sweep(64), vec![1, 2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn format_inference() {
        assert_eq!(
            format_for("x.mtx".as_ref(), None),
            MatrixFormat::MatrixMarket
        );
        assert_eq!(format_for("x.bin".as_ref(), None), MatrixFormat::RawBinary);
        assert_eq!(
            format_for("x.bin".as_ref(), Some(FormatArg::Mm)),
            MatrixFormat::MatrixMarket
        );
    }

    #[test]
    fn unknown_sizes_are_rejected() {
        assert!(parse(&["experiment-hilbert", "--sizes", "100"]).is_err());
        let (_, cmd) = parse(&["experiment-hilbert", "--sizes", "256"]).unwrap();
        assert_eq!(
            cmd,
            Command::ExperimentHilbert {
                sizes: vec![256],
                out: None
            }
        );
    }

    #[test]
    fn negative_tol_is_rejected() {
        assert!(parse(&["verify", "--tol=-1"]).is_err());
    }
}
