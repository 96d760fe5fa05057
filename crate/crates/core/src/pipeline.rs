//! End-to-end solver: blocks, circle graphs, gadgets, stitching and the
//! leveled separator search from `s`.
//!
//! In materialized mode the stitched gadget graph of the whole grid is built
//! once and kept. In streamed mode nothing larger than one block is kept:
//! a block's gadget is recomputed whenever the search touches it, with a
//! cache of a single block, and edges between blocks are read off the input
//! grid on demand.

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::rc::Rc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::block::{
    block_subgraph, decompose, default_block_side, inter_block_edges, Block, BlockSet,
    InterBlockEdge,
};
use crate::circle::{build_circle, InnerSolver};
use crate::gadget::{
    check_planar, embed_exact, embed_f64, rotation_system, transform_with, GEdge, GadgetGraph,
    TransformError, TransformOptions, Vid,
};
use crate::grid::{Dir, GridGraph, VertexId};
use crate::ledger::{phase, Charge, Ledger, LedgerSnapshot};
use crate::level::{Label, Level};
use crate::plane::PlanarView;
use crate::separator::{reach_leveled, EdgeInfo, LeveledView, ReachConfig, ReachStats, SlotKey};
use crate::stats;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Build and keep the whole stitched gadget graph.
    #[default]
    Materialized,
    /// Recompute block gadgets on demand with a one-block cache.
    Streamed,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "materialized" => Ok(Mode::Materialized),
            "streamed" => Ok(Mode::Streamed),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Materialized => "materialized",
            Mode::Streamed => "streamed",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveConfig {
    pub mode: Mode,
    pub inner: InnerSolver,
    pub reach: ReachConfig,
    /// Overrides the default block side of `ceil(N^{1/3})`.
    pub block_side: Option<u32>,
    /// Count words in a ledger.
    pub ledger: bool,
    /// Also check every block gadget for planarity with exact arithmetic.
    pub check_planarity: bool,
    /// Deliberate faults, used to show the checks catch them.
    pub transform: TransformOptions,
}

#[derive(Debug, Clone, Default)]
pub struct SolveReport {
    pub answer: bool,
    pub blocks: usize,
    pub gadget_vertices: usize,
    pub gadget_edges: usize,
    pub labels: usize,
    pub reach: ReachStats,
    /// Block gadgets computed, including recomputations.
    pub gadget_builds: usize,
    /// Recomputed gadgets whose fingerprint differed from the first build.
    pub nondeterministic: usize,
    pub ledger: LedgerSnapshot,
    /// First ledger accounting error, if any.
    pub ledger_error: Option<String>,
    /// Sweep evaluations and overruns seen while this solve ran. The
    /// counters are process-wide, so concurrent work is included.
    pub counters: stats::Counters,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("block {block}: {source}")]
    Transform {
        block: usize,
        source: TransformError,
    },
    #[error("block {block}: gadget is not plane: edges {first:?} and {second:?} cross")]
    NotPlanar {
        block: usize,
        first: (Vid, Vid),
        second: (Vid, Vid),
    },
    #[error("query endpoint {0:?} is not on a block rim")]
    OffRim(VertexId),
}

/// A block's gadget together with its rotation system. At an outer vertex
/// the neighbours start at the next rim vertex and run clockwise through
/// the block's interior.
#[derive(Debug, Clone)]
pub struct BlockGadget {
    pub gadget: GadgetGraph,
    pub rot: Vec<Vec<Vid>>,
}

impl BlockGadget {
    pub fn words(&self) -> i64 {
        self.gadget.words() + self.rot.iter().map(|r| r.len() as i64 + 1).sum::<i64>()
    }
}

/// Circle graph and gadget of one block. The circle graph and the gadget
/// are charged to the ledger while they are being produced.
pub fn block_gadget(
    g: &GridGraph,
    block: &Block,
    inner: InnerSolver,
    opts: TransformOptions,
    ledger: &Ledger,
) -> Result<BlockGadget, TransformError> {
    let sub = block_subgraph(g, block);
    let rim: Vec<VertexId> = block.rim().iter().map(|&v| block.to_local(v)).collect();
    let circle = build_circle(&sub, &rim, inner, ledger);
    let _circle_words = Charge::new(ledger, phase::CIRCLE, circle.words());
    let (gadget, _) = transform_with(&circle, opts)?;
    // The transformation's working state is of the order of its output.
    let _work = Charge::new(ledger, phase::TRANSFORM, gadget.words());
    let rot = block_rotation(&gadget);
    Ok(BlockGadget { gadget, rot })
}

fn block_rotation(g: &GadgetGraph) -> Vec<Vec<Vid>> {
    let emb = embed_f64(g);
    let mut rot = rotation_system(g, &emb);
    let n = g.n_outer();
    if n < 3 {
        return rot;
    }
    for (i, list) in rot.iter_mut().enumerate().take(n) {
        let next = ((i + 1) % n) as Vid;
        let o = emb.point(i as Vid);
        let angle = |u: Vid| {
            let p = emb.point(u);
            (p.y - o.y).atan2(p.x - o.x)
        };
        let a0 = angle(next);
        let key = |u: Vid| {
            if u == next {
                -1.0
            } else {
                (angle(u) - a0).rem_euclid(TAU)
            }
        };
        list.sort_by(|&a, &b| key(a).total_cmp(&key(b)));
    }
    rot
}

/// Grid neighbours of rim vertex `v` outside its block, joined to it by a
/// grid edge in either direction, clockwise starting after the direction of
/// the previous rim vertex.
fn external_neighbors<'a>(
    g: &'a GridGraph,
    block: &'a Block,
    pos: usize,
) -> impl Iterator<Item = (Dir, VertexId)> + 'a {
    let rim = block.rim();
    let v = rim[pos];
    let prev = rim[(pos + rim.len() - 1) % rim.len()];
    let start =
        Dir::between(v, prev).map_or(0, |d| Dir::ALL.iter().position(|&x| x == d).unwrap() + 1);
    (0..4).filter_map(move |k| {
        let d = Dir::ALL[(start + k) % 4];
        let w = g.step(v, d)?;
        (!block.contains(w) && (g.has_edge(v, d) || g.has_edge(w, d.opposite()))).then_some((d, w))
    })
}

/// Disjoint union of the block gadgets, numbered block by block, plus one
/// open edge per grid edge between blocks.
pub fn stitch(gadgets: &[GadgetGraph], bs: &BlockSet, xedges: &[InterBlockEdge]) -> GadgetGraph {
    let offsets = prefix(gadgets.iter().map(GadgetGraph::vertex_count));
    let mut edges = Vec::new();
    for (b, gadget) in gadgets.iter().enumerate() {
        let base = edges.len() as u32;
        let off = offsets[b] as Vid;
        edges.extend(gadget.edges().iter().map(|e| GEdge {
            from: e.from + off,
            to: e.to + off,
            k: e.k.map(|k| k + base),
            kinv: None,
            labels: e.labels.clone(),
        }));
    }
    debug_assert_eq!(gadgets.len(), bs.len());
    for x in xedges {
        edges.push(GEdge {
            from: (offsets[x.from.0] + x.from.1) as Vid,
            to: (offsets[x.to.0] + x.to.1) as Vid,
            k: None,
            kinv: None,
            labels: vec![Label::OPEN],
        });
    }
    GadgetGraph::from_parts(offsets[gadgets.len()], Vec::new(), edges)
}

fn prefix(counts: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for c in counts {
        out.push(out.last().unwrap() + c);
    }
    out
}

/// The stitched graph held in memory.
pub struct MaterializedView {
    pub graph: GadgetGraph,
    pub rot: Vec<Vec<u32>>,
}

impl MaterializedView {
    pub fn build(g: &GridGraph, bs: &BlockSet, blocks: &[BlockGadget]) -> Self {
        let gadgets: Vec<GadgetGraph> = blocks.iter().map(|b| b.gadget.clone()).collect();
        let graph = stitch(&gadgets, bs, &inter_block_edges(g, bs));
        let offsets = prefix(blocks.iter().map(|b| b.gadget.vertex_count()));
        let mut rot = Vec::with_capacity(graph.vertex_count());
        for (b, (block, bg)) in bs.blocks().iter().zip(blocks).enumerate() {
            for (v, list) in bg.rot.iter().enumerate() {
                let mut r: Vec<u32> = list
                    .iter()
                    .map(|&u| (offsets[b] + u as usize) as u32)
                    .collect();
                if v < bg.gadget.n_outer() {
                    r.extend(
                        external_neighbors(g, block, v).map(|(_, w)| global_rim(bs, &offsets, w)),
                    );
                }
                rot.push(r);
            }
        }
        MaterializedView { graph, rot }
    }

    pub fn words(&self) -> i64 {
        self.graph.words() + self.rot.iter().map(|r| r.len() as i64 + 1).sum::<i64>()
    }
}

fn global_rim(bs: &BlockSet, offsets: &[usize], w: VertexId) -> u32 {
    let (b, p) = bs
        .locate_rim(w)
        .expect("a vertex next to another block is on a rim");
    (offsets[b] + p) as u32
}

impl PlanarView for MaterializedView {
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn neighbors(&self, v: u32, out: &mut Vec<u32>) {
        out.extend_from_slice(&self.rot[v as usize]);
    }
}

impl LeveledView for MaterializedView {
    fn for_each_out(&self, v: u32, f: &mut dyn FnMut(EdgeInfo<'_>)) {
        for id in self.graph.out_edges(v) {
            let e = self.graph.edge(id);
            f(EdgeInfo {
                id: id.into(),
                from: e.from,
                to: e.to,
                k: e.k.map(Into::into),
                kinv: e.kinv.map(Into::into),
                labels: &e.labels,
            });
        }
    }
}

/// The stitched graph recomputed block by block.
pub struct StreamedView<'a> {
    grid: &'a GridGraph,
    bs: &'a BlockSet,
    inner: InnerSolver,
    opts: TransformOptions,
    ledger: &'a Ledger,
    offsets: Vec<usize>,
    edge_offsets: Vec<u64>,
    fingerprints: Vec<u64>,
    cache: RefCell<Option<(usize, Rc<BlockGadget>, Charge<'a>)>>,
    builds: Cell<usize>,
    mismatches: Cell<usize>,
    _index: Charge<'a>,
}

impl<'a> StreamedView<'a> {
    /// One pass over the blocks records their sizes and fingerprints; only
    /// these per-block numbers are kept.
    pub fn new(
        grid: &'a GridGraph,
        bs: &'a BlockSet,
        inner: InnerSolver,
        opts: TransformOptions,
        ledger: &'a Ledger,
        check_planarity: bool,
    ) -> Result<Self, SolveError> {
        let mut index = Charge::new(ledger, phase::INDEX, 0);
        let (mut counts, mut edge_counts, mut fingerprints) = (Vec::new(), Vec::new(), Vec::new());
        for (b, block) in bs.blocks().iter().enumerate() {
            let bg = block_gadget(grid, block, inner, opts, ledger)
                .map_err(|source| SolveError::Transform { block: b, source })?;
            let _held = Charge::new(ledger, phase::CACHE, bg.words());
            if check_planarity {
                planar_or_err(b, &bg.gadget)?;
            }
            counts.push(bg.gadget.vertex_count());
            edge_counts.push(bg.gadget.edges().len());
            fingerprints.push(bg.gadget.fingerprint());
            index.resize(3 * counts.len() as i64 + 2);
        }
        let offsets = prefix(counts.into_iter());
        let edge_offsets: Vec<u64> = prefix(edge_counts.into_iter())
            .into_iter()
            .map(|x| x as u64)
            .collect();
        Ok(StreamedView {
            grid,
            bs,
            inner,
            opts,
            ledger,
            offsets,
            edge_offsets,
            fingerprints,
            cache: RefCell::new(None),
            builds: Cell::new(bs.len()),
            mismatches: Cell::new(0),
            _index: index,
        })
    }

    fn block_of_vertex(&self, v: u32) -> (usize, Vid) {
        let b = self.offsets.partition_point(|&o| o <= v as usize) - 1;
        (b, (v as usize - self.offsets[b]) as Vid)
    }

    fn block(&self, b: usize) -> Rc<BlockGadget> {
        let mut cache = self.cache.borrow_mut();
        if let Some((cb, bg, _)) = cache.as_ref() {
            if *cb == b {
                return Rc::clone(bg);
            }
        }
        // release the old block before building the next one
        *cache = None;
        let bg = block_gadget(
            self.grid,
            &self.bs.blocks()[b],
            self.inner,
            self.opts,
            self.ledger,
        )
        .expect("block transformed once already");
        self.builds.set(self.builds.get() + 1);
        if bg.gadget.fingerprint() != self.fingerprints[b] {
            self.mismatches.set(self.mismatches.get() + 1);
        }
        let charge = Charge::new(self.ledger, phase::CACHE, bg.words());
        let bg = Rc::new(bg);
        *cache = Some((b, Rc::clone(&bg), charge));
        bg
    }

    pub fn global(&self, v: VertexId) -> Option<u32> {
        let (b, p) = self.bs.locate_rim(v)?;
        Some((self.offsets[b] + p) as u32)
    }

    pub fn builds(&self) -> usize {
        self.builds.get()
    }

    pub fn mismatches(&self) -> usize {
        self.mismatches.get()
    }

    /// Drops the cached block.
    pub fn release(&self) {
        *self.cache.borrow_mut() = None;
    }
}

impl PlanarView for StreamedView<'_> {
    fn vertex_count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn neighbors(&self, v: u32, out: &mut Vec<u32>) {
        let (b, local) = self.block_of_vertex(v);
        let bg = self.block(b);
        let off = self.offsets[b] as u32;
        out.extend(bg.rot[local as usize].iter().map(|&u| u + off));
        if (local as usize) < bg.gadget.n_outer() {
            let block = &self.bs.blocks()[b];
            for (_, w) in external_neighbors(self.grid, block, local as usize) {
                out.push(global_rim(self.bs, &self.offsets, w));
            }
        }
    }
}

impl LeveledView for StreamedView<'_> {
    fn for_each_out(&self, v: u32, f: &mut dyn FnMut(EdgeInfo<'_>)) {
        let (b, local) = self.block_of_vertex(v);
        let bg = self.block(b);
        let (off, eoff) = (self.offsets[b] as u32, self.edge_offsets[b]);
        for id in bg.gadget.out_edges(local) {
            let e = bg.gadget.edge(id);
            f(EdgeInfo {
                id: eoff + u64::from(id),
                from: v,
                to: e.to + off,
                k: e.k.map(|k| eoff + u64::from(k)),
                kinv: e.kinv.map(|k| eoff + u64::from(k)),
                labels: &e.labels,
            });
        }
        if (local as usize) < bg.gadget.n_outer() {
            let block = &self.bs.blocks()[b];
            let gv = block.rim()[local as usize];
            let base = *self.edge_offsets.last().unwrap();
            for (d, w) in external_neighbors(self.grid, block, local as usize) {
                if self.grid.has_edge(gv, d) {
                    f(EdgeInfo {
                        id: base
                            + 4 * self.grid.index(gv) as u64
                            + u64::from(d.bit().trailing_zeros()),
                        from: v,
                        to: global_rim(self.bs, &self.offsets, w),
                        k: None,
                        kinv: None,
                        labels: &[Label::OPEN],
                    });
                }
            }
        }
    }
}

fn planar_or_err(block: usize, g: &GadgetGraph) -> Result<(), SolveError> {
    check_planar(g, &embed_exact(g)).map_err(|v| SolveError::NotPlanar {
        block,
        first: v.first,
        second: v.second,
    })
}

/// Decides whether `t` is reachable from `s` in `g`.
pub fn solve(g: &GridGraph, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    let ledger = if cfg.ledger {
        Ledger::new()
    } else {
        Ledger::disabled()
    };
    solve_with_ledger(g, cfg, &ledger)
}

pub fn solve_with_ledger(
    g: &GridGraph,
    cfg: &SolveConfig,
    ledger: &Ledger,
) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    let counters = stats::snapshot();
    if g.s() == g.t() {
        return Ok(SolveReport {
            answer: true,
            wall_time: start.elapsed(),
            ..Default::default()
        });
    }
    let side = cfg.block_side.unwrap_or_else(|| default_block_side(g));
    let bs = decompose(g, side);
    let mut report = SolveReport {
        blocks: bs.len(),
        ..Default::default()
    };
    for v in [g.s(), g.t()] {
        if bs.locate_rim(v).is_none() {
            return Err(SolveError::OffRim(v));
        }
    }
    let reached = match cfg.mode {
        Mode::Materialized => {
            let mut stitched_words = Charge::new(ledger, phase::STITCHED, 0);
            let mut blocks = Vec::with_capacity(bs.len());
            for (b, block) in bs.blocks().iter().enumerate() {
                let bg = block_gadget(g, block, cfg.inner, cfg.transform, ledger)
                    .map_err(|source| SolveError::Transform { block: b, source })?;
                if cfg.check_planarity {
                    planar_or_err(b, &bg.gadget)?;
                }
                stitched_words.resize(stitched_words.words() + bg.words());
                blocks.push(bg);
            }
            report.gadget_builds = blocks.len();
            let offsets = prefix(blocks.iter().map(|b| b.gadget.vertex_count()));
            let view = MaterializedView::build(g, &bs, &blocks);
            let held: i64 = blocks.iter().map(BlockGadget::words).sum();
            stitched_words.resize(held + view.words());
            drop(blocks);
            stitched_words.resize(view.words());
            report.gadget_vertices = view.graph.vertex_count();
            report.gadget_edges = view.graph.edges().len();
            report.labels = view.graph.label_count();
            let s = global_rim(&bs, &offsets, g.s());
            let t = global_rim(&bs, &offsets, g.t());
            let (out, st) = reach_leveled(
                &view,
                &[(SlotKey::free(s), Level::Infinite)],
                &[t],
                &cfg.reach,
                ledger,
            );
            report.reach = st;
            !out.is_empty()
        }
        Mode::Streamed => {
            let view = StreamedView::new(
                g,
                &bs,
                cfg.inner,
                cfg.transform,
                ledger,
                cfg.check_planarity,
            )?;
            let s = view.global(g.s()).unwrap();
            let t = view.global(g.t()).unwrap();
            report.gadget_vertices = view.vertex_count();
            let (out, st) = reach_leveled(
                &view,
                &[(SlotKey::free(s), Level::Infinite)],
                &[t],
                &cfg.reach,
                ledger,
            );
            view.release();
            report.reach = st;
            report.gadget_builds = view.builds();
            report.nondeterministic = view.mismatches();
            !out.is_empty()
        }
    };
    report.answer = reached;
    ledger.check_released();
    report.ledger = ledger.snapshot();
    report.ledger_error = ledger.violation();
    report.counters = stats::snapshot().since(counters);
    report.wall_time = start.elapsed();
    Ok(report)
}

/// One measured solve.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub side: u32,
    pub trial: u32,
    pub mode: Mode,
    pub answer: bool,
    pub peak_words: i64,
    pub phase_peaks: BTreeMap<String, i64>,
    pub wall_time_ms: f64,
}

/// Phases reported as CSV columns, in order.
pub const BENCH_PHASES: [&str; 8] = [
    phase::CIRCLE,
    phase::TRANSFORM,
    phase::CACHE,
    phase::STITCHED,
    phase::FRONTIER,
    phase::BASE_CASE,
    phase::SEPARATOR,
    phase::INDEX,
];

/// Solves one random `side x side` instance per trial and mode with the
/// ledger on. Instances depend only on `side`, `trial` and `density`.
pub fn bench(
    sides: &[u32],
    trials: u32,
    density: f64,
    modes: &[Mode],
    base: &SolveConfig,
) -> Result<Vec<BenchRow>, SolveError> {
    let mut rows = Vec::new();
    for &side in sides {
        for trial in 0..trials {
            let seed = u64::from(side) * 1_000_003 + u64::from(trial);
            let g = crate::grid::gen_random(side, side, density, seed)
                .expect("bench sides are at least 2");
            for &mode in modes {
                let cfg = SolveConfig {
                    mode,
                    ledger: true,
                    ..*base
                };
                let r = solve(&g, &cfg)?;
                rows.push(BenchRow {
                    n: g.vertex_count(),
                    side,
                    trial,
                    mode,
                    answer: r.answer,
                    peak_words: r.ledger.peak_words,
                    phase_peaks: r.ledger.phase_peaks,
                    wall_time_ms: r.wall_time.as_secs_f64() * 1e3,
                });
            }
        }
    }
    Ok(rows)
}

/// Writes bench rows as CSV: `N, side, mode, peak_words`, one column per
/// phase peak, then `wall_time_ms`.
pub fn write_bench_csv<W: std::io::Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![
        "N".to_string(),
        "side".into(),
        "trial".into(),
        "mode".into(),
        "answer".into(),
        "peak_words".into(),
    ];
    header.extend(BENCH_PHASES.iter().map(|p| format!("peak_{p}")));
    header.push("wall_time_ms".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.n.to_string(),
            r.side.to_string(),
            r.trial.to_string(),
            r.mode.to_string(),
            r.answer.to_string(),
            r.peak_words.to_string(),
        ];
        rec.extend(
            BENCH_PHASES
                .iter()
                .map(|p| r.phase_peaks.get(*p).copied().unwrap_or(0).to_string()),
        );
        rec.push(format!("{:.3}", r.wall_time_ms));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln(peak)` against `ln(N)` for one mode, averaging
/// trials per size first.
pub fn loglog_slope(rows: &[BenchRow], mode: Mode) -> Option<f64> {
    let mut by_n: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.mode == mode) {
        let e = by_n.entry(r.n).or_default();
        e.0 += r.peak_words as f64;
        e.1 += 1;
    }
    let pts: Vec<(f64, f64)> = by_n
        .iter()
        .map(|(&n, &(s, c))| ((n as f64).ln(), (s / c as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
