use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gridreach::check::{run_checks, Faults, Suite};
use gridreach::pipeline::{bench, loglog_slope, write_bench_csv};
use gridreach::{
    bfs_reachable, gen_random, parse_grid, solve, write_grid, GridGraph, InnerSolver, Mode,
    SolveConfig, Strategy,
};

const REACHABLE: u8 = 0;
const UNREACHABLE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const INTERNAL_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gridreach",
    version,
    about = "Reachability in directed grid graphs with sublinear working space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether t is reachable from s. Exit 0 if so, 1 if not.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "materialized")]
        mode: Mode,
        /// Rim reachability inside a block: `bfs` or `separator`.
        #[arg(long, default_value = "bfs")]
        inner: InnerSolver,
        /// `bfs-layer` or `fundamental-cycle`.
        #[arg(long, default_value = "bfs-layer")]
        separator: Strategy,
        /// Vertex count at or below which the search runs directly.
        #[arg(long, default_value_t = 64)]
        cutoff: usize,
        #[arg(long)]
        block_side: Option<u32>,
        /// Count working words and print the peaks.
        #[arg(long)]
        ledger: bool,
        /// Check every block gadget for planarity with exact arithmetic.
        #[arg(long)]
        check_planarity: bool,
    },
    /// Plain breadth-first search from s. Exit 0 if t is reached, 1 if not.
    Oracle { file: PathBuf },
    /// Write a random grid with independent edges.
    Gen {
        #[arg(long)]
        width: u32,
        #[arg(long)]
        height: u32,
        /// Probability of each candidate directed edge.
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Measure peak working words on random square grids.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "8,27,64")]
        sides: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, value_delimiter = ',', default_value = "materialized,streamed")]
        modes: Vec<Mode>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the invariant checks of every module.
    Check {
        /// Include exhaustive small-instance checks.
        #[arg(long)]
        full: bool,
        #[arg(long, hide = true)]
        mutate: Option<Mutation>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutation {
    SkipDelta,
    IgnoreK,
}

fn read_grid(path: &Path) -> Result<GridGraph, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(INPUT_ERROR)
    })?;
    parse_grid(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(INPUT_ERROR)
    })
}

fn answer_code(reachable: bool) -> ExitCode {
    println!(
        "{}",
        if reachable {
            "reachable"
        } else {
            "unreachable"
        }
    );
    ExitCode::from(if reachable { REACHABLE } else { UNREACHABLE })
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::Solve {
            file,
            mode,
            inner,
            separator,
            cutoff,
            block_side,
            ledger,
            check_planarity,
        } => {
            let g = read_grid(&file)?;
            let mut cfg = SolveConfig {
                mode,
                inner,
                block_side,
                ledger,
                check_planarity,
                ..SolveConfig::default()
            };
            cfg.reach.strategy = separator;
            cfg.reach.cutoff = cutoff;
            let report = solve(&g, &cfg).map_err(|e| {
                eprintln!("internal error: {e}");
                ExitCode::from(INTERNAL_ERROR)
            })?;
            if ledger {
                println!("blocks {}", report.blocks);
                println!(
                    "gadget vertices {} edges {} labels {}",
                    report.gadget_vertices, report.gadget_edges, report.labels
                );
                println!("gadget builds {}", report.gadget_builds);
                println!("peak words {}", report.ledger.peak_words);
                for (phase, peak) in &report.ledger.phase_peaks {
                    println!("  {phase} {peak}");
                }
                println!("separator sizes by depth {:?}", report.reach.sizes_by_depth);
                println!("wall time {:.3}s", report.wall_time.as_secs_f64());
            }
            if let Some(err) = &report.ledger_error {
                eprintln!("internal error: ledger: {err}");
                return Err(ExitCode::from(INTERNAL_ERROR));
            }
            if report.nondeterministic > 0 {
                eprintln!(
                    "internal error: {} recomputed gadgets differ from their first build",
                    report.nondeterministic
                );
                return Err(ExitCode::from(INTERNAL_ERROR));
            }
            Ok(answer_code(report.answer))
        }
        Command::Oracle { file } => {
            let g = read_grid(&file)?;
            Ok(answer_code(bfs_reachable(&g, g.s(), g.t())))
        }
        Command::Gen {
            width,
            height,
            density,
            seed,
            output,
        } => {
            if !(0.0..=1.0).contains(&density) {
                eprintln!("error: density must lie in [0, 1]");
                return Err(ExitCode::from(INPUT_ERROR));
            }
            let g = gen_random(width, height, density, seed).map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(INPUT_ERROR)
            })?;
            let text = write_grid(&g);
            match output {
                Some(path) => fs::write(&path, text).map_err(|e| {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(INPUT_ERROR)
                })?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            sides,
            trials,
            density,
            modes,
            csv,
        } => {
            if sides.iter().any(|&s| s < 2) || !(0.0..=1.0).contains(&density) {
                eprintln!("error: sides must be at least 2 and density in [0, 1]");
                return Err(ExitCode::from(INPUT_ERROR));
            }
            let rows =
                bench(&sides, trials, density, &modes, &SolveConfig::default()).map_err(|e| {
                    eprintln!("internal error: {e}");
                    ExitCode::from(INTERNAL_ERROR)
                })?;
            match csv {
                Some(path) => {
                    let file = fs::File::create(&path).map_err(|e| {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        ExitCode::from(INPUT_ERROR)
                    })?;
                    write_bench_csv(&rows, file)
                }
                None => write_bench_csv(&rows, std::io::stdout()),
            }
            .map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(INPUT_ERROR)
            })?;
            for mode in modes {
                if let Some(slope) = loglog_slope(&rows, mode) {
                    eprintln!("{mode}: log-log slope of peak words against N = {slope:.3}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { full, mutate } => {
            let mut faults = Faults::default();
            match mutate {
                Some(Mutation::SkipDelta) => faults.transform.skip_delta = true,
                Some(Mutation::IgnoreK) => faults.token.ignore_k = true,
                None => {}
            }
            let outcomes = run_checks(if full { Suite::Full } else { Suite::Fast }, faults);
            for o in &outcomes {
                println!("{o}");
            }
            let failed: Vec<&str> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.name)
                .collect();
            if failed.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("failed: {}", failed.join(", "));
                Err(ExitCode::from(INTERNAL_ERROR))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli).unwrap_or_else(|code| code)
}
