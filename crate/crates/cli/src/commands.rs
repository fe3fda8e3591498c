use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use blockcur::oracle::{verify_theorem1, verify_theorem2, CheckOutcome};
use blockcur::{
    aca_sequential, assemble, decompose, hilbert, load_matrix, random_uniform, relative_error,
    store_matrix, synthetic_lowrank, DenseMatrix, Factors, MatrixFormat,
};
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::config::{Command, Family, RunConfig};
use crate::error::{CliError, CliResult};
use crate::record::{write_records, ExperimentRecord};

pub const EXPERIMENT_SIZES: [usize; 3] = [256, 512, 1024];
pub const HILBERT_MAX_SELECTED: usize = 20;
pub const LOWRANK_RANKS: [usize; 4] = [5, 10, 15, 20];
/// Extra selected counts past the generator rank in the low-rank study.
pub const LOWRANK_OVERSHOOT: usize = 5;

pub fn pool(threads: usize) -> CliResult<ThreadPool> {
    ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))
}

pub fn run(cfg: &RunConfig, cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Decompose {
            input,
            format,
            rank,
            col_rank,
            out,
        } => {
            let summary = cmd_decompose(cfg, &input, format, rank, col_rank, &out)?;
            println!(
                "selected {}x{} core, relative error {:.16e}, wrote {}",
                summary.factors.core().shape().0,
                summary.factors.core().shape().1,
                summary.rel_error,
                out.display()
            );
            Ok(())
        }
        Command::ExperimentHilbert { sizes, out } => {
            let sink = open_sink(out.as_deref())?;
            emit(sink, &cmd_experiment_hilbert(cfg, &sizes)?)
        }
        Command::ExperimentLowrank { sizes, out } => {
            let sink = open_sink(out.as_deref())?;
            emit(sink, &cmd_experiment_lowrank(cfg, &sizes)?)
        }
        Command::BenchScaling {
            n,
            rank,
            reps,
            thread_counts,
            out,
        } => {
            let sink = open_sink(out.as_deref())?;
            let records = cmd_bench_scaling(cfg, n, rank, reps, &thread_counts)?;
            print_speedups(&records);
            emit(sink, &records)
        }
        Command::Verify { random } => {
            let report = cmd_verify(cfg, random)?;
            print!("{report}");
            if report.failures > 0 {
                return Err(CliError::Verification(format!(
                    "{} bound checks failed",
                    report.failures
                )));
            }
            Ok(())
        }
        Command::Generate {
            family,
            rows,
            cols,
            rank,
            seed,
            format,
            out,
        } => {
            let a = generate(family, rows, cols, rank, seed)?;
            store_matrix(&a, &out, format)?;
            Ok(())
        }
    }
}

/// Opened before any computation so an unwritable destination fails fast.
fn open_sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::Io(format!("cannot create {}: {e}", p.display()))
            })?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(sink: Box<dyn Write>, records: &[ExperimentRecord]) -> CliResult<()> {
    write_records(sink, records)
}

pub fn generate(
    family: Family,
    rows: usize,
    cols: usize,
    rank: usize,
    seed: u64,
) -> CliResult<DenseMatrix> {
    Ok(match family {
        Family::Hilbert => hilbert(rows)?,
        Family::Lowrank => synthetic_lowrank(rows, rank)?,
        Family::Random => random_uniform(rows, cols, seed)?,
    })
}

pub struct DecomposeSummary {
    pub factors: Factors,
    pub rel_error: f64,
    pub blocks: usize,
    pub decompose_time: Duration,
    pub error_time: Duration,
}

/// Loads, decomposes and evaluates first; the output directory is only
/// touched once everything has succeeded.
pub fn cmd_decompose(
    cfg: &RunConfig,
    input: &Path,
    format: MatrixFormat,
    rank: usize,
    col_rank: usize,
    out: &Path,
) -> CliResult<DecomposeSummary> {
    let a: DenseMatrix = load_matrix(input, format)?;
    let blocks = cfg.blocks_for(cfg.threads, a.rows().min(a.cols()));
    let summary = pool(cfg.threads)?.install(|| -> CliResult<DecomposeSummary> {
        let start = Instant::now();
        let factors = decompose(&a, rank, col_rank, blocks, cfg.tol)?;
        let decompose_time = start.elapsed();
        let start = Instant::now();
        let rel_error = relative_error(&a, &factors)?;
        Ok(DecomposeSummary {
            factors,
            rel_error,
            blocks,
            decompose_time,
            error_time: start.elapsed(),
        })
    })?;
    write_decomposition(cfg, &a, &summary, out)?;
    Ok(summary)
}

fn write_decomposition(
    cfg: &RunConfig,
    a: &DenseMatrix,
    s: &DecomposeSummary,
    out: &Path,
) -> CliResult<()> {
    fs::create_dir_all(out)?;
    let f = &s.factors;
    store_matrix(f.c(), out.join("C.bin"), MatrixFormat::RawBinary)?;
    store_matrix(f.core(), out.join("core.bin"), MatrixFormat::RawBinary)?;
    store_matrix(f.r(), out.join("R.bin"), MatrixFormat::RawBinary)?;
    let join = |ix: &[usize]| {
        ix.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let meta = format!(
        "rows {}\ncols {}\nrow_indices {}\ncol_indices {}\nrel_error {:.16e}\nblocks {}\nthreads {}\ntol {:e}\ndecompose_seconds {:.9}\nerror_seconds {:.9}\n",
        a.rows(),
        a.cols(),
        join(f.row_indices().as_slice()),
        join(f.col_indices().as_slice()),
        s.rel_error,
        s.blocks,
        cfg.threads,
        cfg.tol,
        s.decompose_time.as_secs_f64(),
        s.error_time.as_secs_f64(),
    );
    fs::write(out.join("meta.txt"), meta)?;
    Ok(())
}

fn sizes_or_default(sizes: &[usize]) -> Vec<usize> {
    if sizes.is_empty() {
        EXPERIMENT_SIZES.to_vec()
    } else {
        sizes.to_vec()
    }
}

/// Decomposes with `k` rows and columns; returns the error and the wall
/// time of selection plus assembly.
fn timed_error(a: &DenseMatrix, k: usize, blocks: usize, tol: f64) -> CliResult<(f64, f64)> {
    let start = Instant::now();
    let f = decompose(a, k, k, blocks, tol)?;
    let wall = start.elapsed().as_secs_f64();
    Ok((relative_error(a, &f)?, wall))
}

pub fn cmd_experiment_hilbert(
    cfg: &RunConfig,
    sizes: &[usize],
) -> CliResult<Vec<ExperimentRecord>> {
    let mut records = Vec::new();
    pool(cfg.threads)?.install(|| -> CliResult<()> {
        for n in sizes_or_default(sizes) {
            let a = hilbert(n)?;
            let blocks = cfg.blocks_for(cfg.threads, n);
            for k in 1..=HILBERT_MAX_SELECTED {
                let (rel_error, wall_seconds) = timed_error(&a, k, blocks, cfg.tol)?;
                records.push(ExperimentRecord {
                    experiment: "experiment-hilbert".into(),
                    matrix_family: "hilbert".into(),
                    n,
                    rank: 0,
                    selected: k,
                    blocks,
                    threads: cfg.threads,
                    rel_error,
                    wall_seconds,
                    seed: cfg.seed,
                });
            }
        }
        Ok(())
    })?;
    Ok(records)
}

/// `selected` is the requested count; past the generator rank the
/// selection stops early and the core stays at the numerical rank.
pub fn cmd_experiment_lowrank(
    cfg: &RunConfig,
    sizes: &[usize],
) -> CliResult<Vec<ExperimentRecord>> {
    let mut records = Vec::new();
    pool(cfg.threads)?.install(|| -> CliResult<()> {
        for n in sizes_or_default(sizes) {
            let blocks = cfg.blocks_for(cfg.threads, n);
            for rank in LOWRANK_RANKS {
                let a = synthetic_lowrank(n, rank)?;
                for k in 1..=rank + LOWRANK_OVERSHOOT {
                    let (rel_error, wall_seconds) = timed_error(&a, k, blocks, cfg.tol)?;
                    records.push(ExperimentRecord {
                        experiment: "experiment-lowrank".into(),
                        matrix_family: "lowrank".into(),
                        n,
                        rank,
                        selected: k,
                        blocks,
                        threads: cfg.threads,
                        rel_error,
                        wall_seconds,
                        seed: cfg.seed,
                    });
                }
            }
        }
        Ok(())
    })?;
    Ok(records)
}

fn min_of<F: FnMut() -> CliResult<Duration>>(reps: usize, mut f: F) -> CliResult<Duration> {
    let mut best = Duration::MAX;
    for _ in 0..reps {
        best = best.min(f()?);
    }
    Ok(best)
}

/// One record per thread count plus exactly one sequential cross
/// approximation baseline. Each `wall_seconds` is the minimum over `reps`
/// repetitions of selection plus assembly.
pub fn cmd_bench_scaling(
    cfg: &RunConfig,
    n: usize,
    rank: usize,
    reps: usize,
    thread_counts: &[usize],
) -> CliResult<Vec<ExperimentRecord>> {
    let a: DenseMatrix = synthetic_lowrank(n, rank)?;
    let mut records = Vec::with_capacity(thread_counts.len() + 1);
    for &threads in thread_counts {
        let blocks = cfg.blocks_for(threads, n);
        let (wall, factors) = pool(threads)?.install(|| -> CliResult<(Duration, Factors)> {
            let mut last = None;
            let wall = min_of(reps, || {
                let start = Instant::now();
                let f = decompose(&a, rank, rank, blocks, cfg.tol)?;
                let dt = start.elapsed();
                last = Some(f);
                Ok(dt)
            })?;
            Ok((wall, last.expect("at least one repetition")))
        })?;
        eprintln!(
            "threads {threads:>3}  blocks {blocks:>3}  {:.4} s",
            wall.as_secs_f64()
        );
        records.push(ExperimentRecord {
            experiment: "bench-scaling".into(),
            matrix_family: "lowrank".into(),
            n,
            rank,
            selected: factors.core().shape().0,
            blocks,
            threads,
            rel_error: relative_error(&a, &factors)?,
            wall_seconds: wall.as_secs_f64(),
            seed: cfg.seed,
        });
    }

    let mut last = None;
    let wall = min_of(reps, || {
        let start = Instant::now();
        let sel = aca_sequential(&a, rank, cfg.tol)?;
        let f = assemble(&a, &sel.rows, &sel.cols)?;
        let dt = start.elapsed();
        last = Some(f);
        Ok(dt)
    })?;
    let factors = last.expect("at least one repetition");
    eprintln!(
        "sequential cross approximation  {:.4} s",
        wall.as_secs_f64()
    );
    records.push(ExperimentRecord {
        experiment: "bench-baseline-aca".into(),
        matrix_family: "lowrank".into(),
        n,
        rank,
        selected: factors.core().shape().0,
        blocks: 1,
        threads: 1,
        rel_error: relative_error(&a, &factors)?,
        wall_seconds: wall.as_secs_f64(),
        seed: cfg.seed,
    });
    Ok(records)
}

fn print_speedups(records: &[ExperimentRecord]) {
    let Some(base) = records.iter().find(|r| r.experiment == "bench-scaling") else {
        return;
    };
    for r in records.iter().filter(|r| r.experiment == "bench-scaling") {
        eprintln!(
            "speedup at {:>3} threads: {:.3}",
            r.threads,
            base.wall_seconds / r.wall_seconds
        );
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub label: String,
    pub r: usize,
    pub first: CheckOutcome,
    pub second: CheckOutcome,
    pub lhs: f64,
    pub first_rhs: f64,
    pub second_rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub passes: usize,
    pub failures: usize,
    pub skipped: usize,
}

fn outcome_name(o: CheckOutcome) -> &'static str {
    match o {
        CheckOutcome::Holds => "pass",
        CheckOutcome::Fails => "FAIL",
        CheckOutcome::Skipped => "skip",
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{:<16} {:>2}  {:<6} {:<6} {:>12} {:>12} {:>12}",
            "matrix", "r", "basic", "sharp", "residual", "basic rhs", "sharp rhs"
        )?;
        for row in &self.rows {
            writeln!(
                f,
                "{:<16} {:>2}  {:<6} {:<6} {:>12.5e} {:>12.5e} {:>12.5e}",
                row.label,
                row.r,
                outcome_name(row.first),
                outcome_name(row.second),
                row.lhs,
                row.first_rhs,
                row.second_rhs
            )?;
        }
        writeln!(
            f,
            "checks: {} pass, {} fail, {} skipped",
            self.passes, self.failures, self.skipped
        )
    }
}

/// `random` seeded 6×6 uniform matrices (seeds `seed`, `seed + 1`, …)
/// and Hilbert orders 5 to 8, each at ranks 1 to 3.
pub fn cmd_verify(cfg: &RunConfig, random: usize) -> CliResult<VerifyReport> {
    let mut battery: Vec<(String, DenseMatrix)> = Vec::with_capacity(random + 4);
    for i in 0..random as u64 {
        let seed = cfg.seed.wrapping_add(i);
        battery.push((format!("random#{seed}"), random_uniform(6, 6, seed)?));
    }
    for n in 5..=8 {
        battery.push((format!("hilbert{n}"), hilbert(n)?));
    }
    let mut report = VerifyReport {
        rows: Vec::new(),
        passes: 0,
        failures: 0,
        skipped: 0,
    };
    for (label, a) in battery {
        for r in 1..=3 {
            let t1 = verify_theorem1(&a, r)?;
            let t2 = verify_theorem2(&a, r)?;
            for o in [t1.outcome, t2.outcome] {
                match o {
                    CheckOutcome::Holds => report.passes += 1,
                    CheckOutcome::Fails => report.failures += 1,
                    CheckOutcome::Skipped => report.skipped += 1,
                }
            }
            report.rows.push(VerifyRow {
                label: label.clone(),
                r,
                first: t1.outcome,
                second: t2.outcome,
                lhs: t1.lhs,
                first_rhs: t1.rhs,
                second_rhs: t2.rhs,
            });
        }
    }
    Ok(report)
}
