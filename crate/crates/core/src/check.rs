//! Invariant suites runnable from the command line.
//!
//! Each check exercises one module against an oracle or a stated property
//! and reports pass or fail under a fixed name. Faults can be injected on
//! purpose to confirm that the checks notice them.

use std::time::{Duration, Instant};

use crate::block::{block_subgraph, decompose, inter_block_edges, Block};
use crate::circle::{build_circle, CircleGraph, InnerSolver};
use crate::gadget::{
    check_planar, embed_exact, transform_with, GadgetGraph, TransformError, TransformOptions,
};
use crate::grid::{bfs_reachable, gen_random, parse_grid, write_grid, GridGraph, VertexId};
use crate::ledger::Ledger;
use crate::level::Level;
use crate::oracle::{closure_has, token_tours, transitive_closure};
use crate::pipeline::{solve, Mode, SolveConfig};
use crate::plane::PlaneGraph;
use crate::separator::{find_separator, validate_separator, ReachConfig, Strategy};
use crate::stats;
use crate::token::{token_levels_with, token_reachable_with, Slot, TokenOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

/// Faults injected into the code under test.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    pub transform: TransformOptions,
    pub token: TokenOptions,
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{mark} {} ({:.2}s) {}",
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// A random block grid with its whole boundary as rim, and its circle graph.
pub fn random_block(seed: u64, max_side: u32) -> (GridGraph, Vec<VertexId>, CircleGraph) {
    let span = u64::from(max_side - 1);
    let w = 2 + (seed % span) as u32;
    let h = 2 + (seed / span % span) as u32;
    let density = [0.3, 0.5, 0.7, 0.9][(seed % 4) as usize];
    let g = gen_random(w, h, density, seed).expect("blocks are at least 2x2");
    let rim = Block::new(0, 0, w - 1, h - 1).rim().to_vec();
    let c = build_circle(&g, &rim, InnerSolver::Bfs, &Ledger::disabled());
    (g, rim, c)
}

fn outcome(name: &'static str, start: Instant, result: Result<String, String>) -> CheckOutcome {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckOutcome {
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn run(
    name: &'static str,
    out: &mut Vec<CheckOutcome>,
    f: impl FnOnce() -> Result<String, String>,
) {
    let start = Instant::now();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
        .unwrap_or_else(|p| Err(format!("panicked: {}", panic_text(&p))));
    out.push(outcome(name, start, result));
}

fn panic_text(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn transformed(c: &CircleGraph, faults: Faults) -> Result<GadgetGraph, TransformError> {
    transform_with(c, faults.transform).map(|(g, _)| g)
}

/// Runs every check of `suite` with `faults` injected.
pub fn run_checks(suite: Suite, faults: Faults) -> Vec<CheckOutcome> {
    let scale: u64 = if suite == Suite::Full { 5 } else { 1 };
    let mut out = Vec::new();
    let before = stats::snapshot();

    run("grid round-trip", &mut out, || {
        for seed in 0..50 * scale {
            let g = gen_random(2 + (seed % 9) as u32, 2 + (seed % 5) as u32, 0.5, seed).unwrap();
            let text = write_grid(&g);
            let back = parse_grid(&text).map_err(|e| format!("seed {seed}: {e}"))?;
            if write_grid(&back) != text {
                return Err(format!("seed {seed}: text changed on round-trip"));
            }
        }
        Ok(format!("{} instances", 50 * scale))
    });

    run("bfs matches transitive closure", &mut out, || {
        for seed in 0..40 * scale {
            let g = gen_random(2 + (seed % 6) as u32, 2 + (seed % 4) as u32, 0.45, seed).unwrap();
            let c = transitive_closure(&g);
            for i in 0..g.vertex_count() {
                for j in 0..g.vertex_count() {
                    if closure_has(&c, i, j) != bfs_reachable(&g, g.vertex(i), g.vertex(j)) {
                        return Err(format!("seed {seed}: pair {i} {j}"));
                    }
                }
            }
        }
        Ok(String::new())
    });

    run("block decomposition", &mut out, || {
        for seed in 0..60 * scale {
            let side = 4 + (seed % 13) as u32;
            let g = gen_random(side, side + (seed % 3) as u32, 0.6, seed).unwrap();
            let target = 2 + (seed % 4) as u32;
            let bs = decompose(&g, target);
            for v in [g.s(), g.t()] {
                if bs.locate_rim(v).is_none() {
                    return Err(format!("seed {seed}: {v:?} is not on a rim"));
                }
            }
            let inside: usize = bs
                .blocks()
                .iter()
                .map(|b| block_subgraph(&g, b).edge_count())
                .sum();
            if inside + inter_block_edges(&g, &bs).len() != g.edge_count() {
                return Err(format!("seed {seed}: edges are not partitioned"));
            }
            if bs.max_side() > 2 * target {
                return Err(format!(
                    "seed {seed}: block side {} over {}",
                    bs.max_side(),
                    2 * target
                ));
            }
        }
        Ok(String::new())
    });

    run("circle graph matches bfs", &mut out, || {
        for seed in 0..40 * scale {
            let (g, rim, c) = random_block(seed, 7);
            let via_sep = build_circle(&g, &rim, InnerSolver::Separator, &Ledger::disabled());
            for (u, &a) in rim.iter().enumerate() {
                for (v, &b) in rim.iter().enumerate() {
                    let want = u != v && bfs_reachable(&g, a, b);
                    if c.has_edge(u, v) != want || via_sep.has_edge(u, v) != want {
                        return Err(format!("seed {seed}: pair {u} {v}"));
                    }
                }
            }
        }
        Ok(String::new())
    });

    run("level properties", &mut out, || {
        let checks = stats::snapshot();
        for seed in 0..150 * scale {
            let (_, _, c) = random_block(seed, 8);
            match transform_with(&c, faults.transform) {
                Err(TransformError::Levels(v)) => return Err(format!("seed {seed}: {v}")),
                Err(e) => return Err(format!("seed {seed}: {e}")),
                Ok(_) => {}
            }
        }
        let d = stats::snapshot().since(checks);
        Ok(format!("{} level computations checked", d.level_checks))
    });

    run("gadget size", &mut out, || {
        for seed in 0..150 * scale {
            let (_, _, c) = random_block(seed, 8);
            match transformed(&c, faults) {
                Ok(g) if g.vertex_count() > 6 * c.n() => {
                    return Err(format!(
                        "seed {seed}: {} vertices for rim {}",
                        g.vertex_count(),
                        c.n()
                    ))
                }
                Ok(_) => {}
                Err(e) => return Err(format!("seed {seed}: {e}")),
            }
        }
        Ok(String::new())
    });

    run("gadget planarity", &mut out, || {
        for seed in 0..20 * scale {
            let (_, _, c) = random_block(seed, 8);
            let g = transformed(&c, faults).map_err(|e| format!("seed {seed}: {e}"))?;
            check_planar(&g, &embed_exact(&g)).map_err(|v| format!("seed {seed}: {v:?}"))?;
        }
        Ok(String::new())
    });

    run("token levels match tour search", &mut out, || {
        let mut compared = 0;
        for seed in 0..60 * scale {
            let (_, _, c) = random_block(seed, 6);
            let g = transformed(&c, faults).map_err(|e| format!("seed {seed}: {e}"))?;
            if g.vertex_count() > 60 {
                continue;
            }
            for x in 0..g.n_outer() as u32 {
                let table = token_levels_with(&g, Slot::Free(x), Level::Infinite, faults.token);
                let tours = token_tours(&g, x, Level::Infinite);
                for y in 0..g.vertex_count() as u32 {
                    if table.best(&g, y) != tours.best[y as usize] {
                        return Err(format!(
                            "seed {seed}: from {x} to {y} sweep gives {:?}, tours give {:?}",
                            table.best(&g, y),
                            tours.best[y as usize]
                        ));
                    }
                }
                compared += 1;
            }
        }
        Ok(format!("{compared} sources"))
    });

    run("token reachability matches circle graph", &mut out, || {
        for seed in 0..40 * scale {
            let (_, _, c) = random_block(seed, 8);
            let g = transformed(&c, faults).map_err(|e| format!("seed {seed}: {e}"))?;
            for u in 0..c.n() {
                for v in 0..c.n() {
                    if u != v
                        && token_reachable_with(&g, u as u32, v as u32, faults.token)
                            != c.has_edge(u, v)
                    {
                        return Err(format!("seed {seed}: pair {u} {v}"));
                    }
                }
            }
        }
        Ok(String::new())
    });

    run("separator validity", &mut out, || {
        for seed in 0..40 * scale {
            let gg = gen_random(4 + (seed % 9) as u32, 4 + (seed % 7) as u32, 0.6, seed).unwrap();
            let g = PlaneGraph::from_grid(&gg);
            let w: Vec<u32> = (0..gg.vertex_count() as u32).collect();
            for strategy in [Strategy::BfsLayer, Strategy::FundamentalCycle] {
                let sep = find_separator(&g, &w, strategy);
                validate_separator(&g, &w, &sep)
                    .map_err(|e| format!("seed {seed} {strategy:?}: {e}"))?;
                if sep.max_part() > 2 * w.len() / 3 {
                    return Err(format!("seed {seed} {strategy:?}: unbalanced"));
                }
            }
        }
        Ok(String::new())
    });

    run("solve matches bfs", &mut out, || {
        let modes = [Mode::Materialized, Mode::Streamed];
        let mut runs = 0;
        for seed in 0..30 * scale {
            let side = 6 + (seed % 7) as u32;
            let g = gen_random(side, side, [0.3, 0.5, 0.7][(seed % 3) as usize], seed).unwrap();
            let want = bfs_reachable(&g, g.s(), g.t());
            for (i, mode) in modes.into_iter().enumerate() {
                let strategy = if (seed as usize + i).is_multiple_of(2) {
                    Strategy::BfsLayer
                } else {
                    Strategy::FundamentalCycle
                };
                let cfg = SolveConfig {
                    mode,
                    inner: if seed % 2 == 0 {
                        InnerSolver::Bfs
                    } else {
                        InnerSolver::Separator
                    },
                    reach: ReachConfig {
                        strategy,
                        cutoff: 16 + (seed as usize % 3) * 24,
                        validate: true,
                    },
                    ledger: true,
                    transform: faults.transform,
                    ..Default::default()
                };
                let r = solve(&g, &cfg).map_err(|e| format!("seed {seed} {mode}: {e}"))?;
                if r.answer != want {
                    return Err(format!(
                        "seed {seed} {mode}: answered {} expected {want}",
                        r.answer
                    ));
                }
                if let Some(e) = r.ledger_error {
                    return Err(format!("seed {seed} {mode}: ledger: {e}"));
                }
                if r.reach.invalid > 0 || r.nondeterministic > 0 {
                    return Err(format!(
                        "seed {seed} {mode}: invalid separator or unstable recomputation"
                    ));
                }
                runs += 1;
            }
        }
        Ok(format!("{runs} solves"))
    });

    if suite == Suite::Full {
        run("exhaustive small grids", &mut out, || {
            let n = exhaustive_small_grids(&SolveConfig::default())?;
            Ok(format!("{n} queries"))
        });
    }

    run("sweep bound", &mut out, || {
        let d = stats::snapshot().since(before);
        if d.sweep_overruns > 0 {
            return Err(format!(
                "{} of {} evaluations needed more sweeps than labels",
                d.sweep_overruns, d.sweep_runs
            ));
        }
        if d.level_failures > 0 {
            return Err(format!(
                "{} level computations broke a level property",
                d.level_failures
            ));
        }
        Ok(format!("{} evaluations", d.sweep_runs))
    });

    out
}

/// Every directed graph on the 2x2 and 2x3 grids (both orientations) with
/// every ordered query pair, solved and compared to breadth-first search.
/// Returns the number of queries.
pub fn exhaustive_small_grids(cfg: &SolveConfig) -> Result<usize, String> {
    let mut queries = 0;
    for (w, h) in [(2u32, 2u32), (3, 2), (2, 3)] {
        let empty = GridGraph::new(w, h, VertexId::new(0, 0), VertexId::new(0, 0)).unwrap();
        let e = &empty;
        let candidates: Vec<(VertexId, VertexId)> = (0..e.vertex_count())
            .flat_map(|i| {
                let v = e.vertex(i);
                crate::grid::Dir::ALL
                    .iter()
                    .filter_map(move |&d| e.step(v, d).map(|u| (v, u)))
            })
            .collect();
        for mask in 0u32..(1 << candidates.len()) {
            let mut g = empty.clone();
            for (k, &(a, b)) in candidates.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    g.add_edge(a, b).unwrap();
                }
            }
            for s in 0..g.vertex_count() {
                for t in 0..g.vertex_count() {
                    let q = g.clone().with_query(g.vertex(s), g.vertex(t)).unwrap();
                    let got = solve(&q, cfg)
                        .map_err(|e| format!("{w}x{h} mask {mask:#x}: {e}"))?
                        .answer;
                    if got != bfs_reachable(&q, q.s(), q.t()) {
                        return Err(format!("{w}x{h} mask {mask:#x} query {s}->{t}"));
                    }
                    queries += 1;
                }
            }
        }
    }
    Ok(queries)
}
