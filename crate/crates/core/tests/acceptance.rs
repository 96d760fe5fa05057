//! End-to-end acceptance run. Prints one PASS or FAIL line per criterion
//! and exits nonzero if any fails. Runs without the test harness so that the
//! process-wide invariant counters see only the work done here, in order.

use std::process::ExitCode;
use std::time::Instant;

use gridreach::check::{exhaustive_small_grids, random_block, run_checks, Faults, Suite};
use gridreach::gadget::{check_planar, embed_exact, transform_with, TransformOptions};
use gridreach::oracle::token_tours;
use gridreach::pipeline::{bench, loglog_slope};
use gridreach::separator::ReachStats;
use gridreach::stats;
use gridreach::token::{token_reachable, TokenOptions};
use gridreach::{
    bfs_reachable, gen_random, solve, InnerSolver, Level, Mode, SolveConfig, Strategy,
};

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, start: Instant, result: Result<String, String>) {
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {id:>2} {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL {id:>2} {name} ({secs:.1}s): {detail}");
            }
        }
    }
}

fn config(mode: Mode, inner: InnerSolver, strategy: Strategy) -> SolveConfig {
    let mut cfg = SolveConfig {
        mode,
        inner,
        ..SolveConfig::default()
    };
    cfg.reach.strategy = strategy;
    cfg
}

/// Every combination of mode, inner solver and separator strategy.
fn all_configs() -> Vec<SolveConfig> {
    let mut out = Vec::new();
    for mode in [Mode::Materialized, Mode::Streamed] {
        for inner in [InnerSolver::Bfs, InnerSolver::Separator] {
            for strategy in [Strategy::BfsLayer, Strategy::FundamentalCycle] {
                out.push(config(mode, inner, strategy));
            }
        }
    }
    out
}

/// Separator statistics merged over many solves.
#[derive(Default)]
struct SepTotals {
    solves: usize,
    nodes: usize,
    size_over: usize,
    unbalanced: usize,
    invalid: usize,
    worst_ratio: f64,
}

impl SepTotals {
    fn add(&mut self, r: &ReachStats) {
        self.solves += 1;
        self.nodes += r.nodes;
        self.size_over += r.size_over;
        self.unbalanced += r.unbalanced;
        self.invalid += r.invalid;
        self.worst_ratio = self.worst_ratio.max(r.worst_ratio);
    }
}

fn oracle_equivalence(cycle: &mut SepTotals) -> Result<String, String> {
    let queries = exhaustive_small_grids(&SolveConfig::default())?;
    let configs = all_configs();
    let fixed = [
        config(Mode::Materialized, InnerSolver::Bfs, Strategy::BfsLayer),
        config(
            Mode::Materialized,
            InnerSolver::Bfs,
            Strategy::FundamentalCycle,
        ),
    ];
    let densities = [0.2, 0.4, 0.6, 0.8];
    let mut solves = 0;
    let mut reachable = 0;
    for i in 0..2000u64 {
        let w = 6 + (i % 11) as u32;
        let h = 6 + (i / 11 % 11) as u32;
        let density = densities[(i % 4) as usize];
        let g = gen_random(w, h, density, 0x5eed_0000 + i).unwrap();
        let want = bfs_reachable(&g, g.s(), g.t());
        reachable += usize::from(want);
        let rotating = configs[(i / 4 % configs.len() as u64) as usize];
        for cfg in fixed.iter().chain(std::iter::once(&rotating)) {
            let r = solve(&g, cfg).map_err(|e| format!("instance {i} {w}x{h}: {e}"))?;
            if r.answer != want {
                return Err(format!(
                    "instance {i} {w}x{h} density {density} {cfg:?}: got {}, bfs says {want}",
                    r.answer
                ));
            }
            if r.nondeterministic > 0 {
                return Err(format!(
                    "instance {i}: {} recomputed gadgets changed",
                    r.nondeterministic
                ));
            }
            if cfg.reach.strategy == Strategy::FundamentalCycle {
                cycle.add(&r.reach);
            }
            solves += 1;
        }
    }
    Ok(format!(
        "{queries} exhaustive queries, 2000 random instances ({reachable} reachable), {solves} solves over {} configs, all agree",
        configs.len()
    ))
}

fn gadget_size() -> Result<String, String> {
    let mut max_rim = 0;
    let mut worst = 0.0f64;
    for seed in 0..1000u64 {
        let (_, _, c) = random_block(seed, 8);
        let (g, _) = transform_with(&c, TransformOptions::default())
            .map_err(|e| format!("block {seed}: {e}"))?;
        if g.vertex_count() > 6 * c.n() {
            return Err(format!(
                "block {seed}: {} vertices for rim {}",
                g.vertex_count(),
                c.n()
            ));
        }
        max_rim = max_rim.max(c.n());
        worst = worst.max(g.vertex_count() as f64 / c.n() as f64);
    }
    Ok(format!(
        "1000 blocks, rim up to {max_rim}, largest vertices/rim {worst:.2}"
    ))
}

fn planarity() -> Result<String, String> {
    for seed in 0..1000u64 {
        let (_, _, c) = random_block(seed, 8);
        let (g, _) = transform_with(&c, TransformOptions::default())
            .map_err(|e| format!("block {seed}: {e}"))?;
        check_planar(&g, &embed_exact(&g)).map_err(|v| format!("block {seed}: {v:?}"))?;
    }
    Ok("1000 blocks, no proper crossing".into())
}

fn reachability_preserved() -> Result<String, String> {
    let mut pairs = 0;
    for seed in 0..300u64 {
        let (_, _, c) = random_block(10_000 + seed, 8);
        let (g, _) = transform_with(&c, TransformOptions::default())
            .map_err(|e| format!("block {seed}: {e}"))?;
        for x in 0..c.n() {
            for y in 0..c.n() {
                if x != y {
                    if token_reachable(&g, x as u32, y as u32) != c.has_edge(x, y) {
                        return Err(format!("block {seed}: pair ({x}, {y})"));
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("300 blocks, {pairs} ordered rim pairs agree"))
}

fn tour_length() -> Result<String, String> {
    let (mut blocks, mut edges, mut seed) = (0, 0, 20_000u64);
    let mut slack = usize::MAX;
    while blocks < 100 {
        seed += 1;
        let (_, _, c) = random_block(seed, 6);
        if c.n() > 16 || c.edge_count() == 0 {
            continue;
        }
        let (g, st) = transform_with(&c, TransformOptions::default())
            .map_err(|e| format!("block {seed}: {e}"))?;
        let bound = 2 * st.t_final() as usize + 1;
        for x in 0..c.n() {
            let tours = token_tours(&g, x as u32, Level::Infinite);
            for y in (0..c.n()).filter(|&y| y != x && c.has_edge(x, y)) {
                match tours.hops[y] {
                    Some(h) if h <= bound => slack = slack.min(bound - h),
                    Some(h) => {
                        return Err(format!(
                            "block {seed}: tour {x}->{y} takes {h} edges, bound {bound}"
                        ))
                    }
                    None => return Err(format!("block {seed}: no tour {x}->{y}")),
                }
                edges += 1;
            }
        }
        blocks += 1;
    }
    Ok(format!(
        "{blocks} blocks, {edges} circle edges, smallest slack {slack}"
    ))
}

fn separator_quality(t: &SepTotals) -> Result<String, String> {
    let detail = format!(
        "{} solves, {} recursion nodes, worst |S|/sqrt|V| {:.2}",
        t.solves, t.nodes, t.worst_ratio
    );
    if t.nodes == 0 {
        Err("no recursion nodes recorded".into())
    } else if t.size_over + t.unbalanced + t.invalid > 0 {
        Err(format!(
            "{detail}; {} too large, {} unbalanced, {} invalid",
            t.size_over, t.unbalanced, t.invalid
        ))
    } else {
        Ok(detail)
    }
}

fn space_scaling() -> Result<String, String> {
    let rows = bench(
        &[8, 27, 64, 125],
        3,
        0.5,
        &[Mode::Materialized, Mode::Streamed],
        &SolveConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let streamed = loglog_slope(&rows, Mode::Streamed).ok_or("no streamed rows")?;
    let materialized = loglog_slope(&rows, Mode::Materialized).ok_or("no materialized rows")?;
    let detail = format!("streamed slope {streamed:.3} (limit 0.45), materialized slope {materialized:.3} (floor 0.6)");
    if streamed <= 0.45 && materialized >= 0.6 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mutation_sensitivity() -> Result<String, String> {
    let clean = run_checks(Suite::Fast, Faults::default());
    if let Some(o) = clean.iter().find(|o| !o.passed) {
        return Err(format!("clean build fails `{}`: {}", o.name, o.detail));
    }
    let mutations = [
        (
            "skip-delta",
            Faults {
                transform: TransformOptions { skip_delta: true },
                ..Faults::default()
            },
        ),
        (
            "ignore-k",
            Faults {
                token: TokenOptions { ignore_k: true },
                ..Faults::default()
            },
        ),
    ];
    let mut caught = Vec::new();
    for (name, faults) in mutations {
        let failed: Vec<&str> = run_checks(Suite::Fast, faults)
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.name)
            .collect();
        if failed.is_empty() {
            return Err(format!("mutation {name} passes every check"));
        }
        caught.push(format!("{name} fails [{}]", failed.join(", ")));
    }
    Ok(caught.join("; "))
}

fn main() -> ExitCode {
    let mut report = Report { failures: 0 };
    let base = stats::snapshot();
    let mut cycle = SepTotals::default();

    let t = Instant::now();
    let r = oracle_equivalence(&mut cycle);
    report.line(1, "oracle equivalence", t, r);
    let t = Instant::now();
    report.line(2, "gadget size bound", t, gadget_size());
    let t = Instant::now();
    report.line(3, "gadget planarity", t, planarity());
    let t = Instant::now();
    report.line(4, "per-block reachability", t, reachability_preserved());

    let t = Instant::now();
    let d = stats::snapshot().since(base);
    let r = if d.level_checks == 0 {
        Err("no level computation was checked".into())
    } else if d.level_failures > 0 {
        Err(format!(
            "{} of {} level computations broke a property",
            d.level_failures, d.level_checks
        ))
    } else {
        Ok(format!(
            "{} level computations checked, no failures",
            d.level_checks
        ))
    };
    report.line(5, "level properties", t, r);

    let t = Instant::now();
    report.line(6, "token tour length", t, tour_length());

    let t = Instant::now();
    let d = stats::snapshot().since(base);
    let r = if d.sweep_runs == 0 {
        Err("no sweep evaluation ran".into())
    } else if d.sweep_overruns > 0 {
        Err(format!(
            "{} of {} evaluations exceeded labels + 1 sweeps",
            d.sweep_overruns, d.sweep_runs
        ))
    } else {
        Ok(format!(
            "{} evaluations within labels + 1 sweeps",
            d.sweep_runs
        ))
    };
    report.line(7, "sweep termination", t, r);

    let t = Instant::now();
    report.line(
        8,
        "fundamental-cycle separators",
        t,
        separator_quality(&cycle),
    );
    let t = Instant::now();
    report.line(9, "space scaling", t, space_scaling());
    let t = Instant::now();
    report.line(10, "mutation sensitivity", t, mutation_sensitivity());

    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", report.failures);
        ExitCode::FAILURE
    }
}
