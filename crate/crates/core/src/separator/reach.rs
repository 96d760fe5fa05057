//! Recursive reachability over balanced separators.
//!
//! A node of the recursion owns a vertex set `W`, a list of source slots with
//! values and a set of target vertices. Small sets are solved directly. A
//! larger set is cut by a separator `S` into sides `V0` and `V1`; the node
//! keeps a frontier table over the slots of `S` and alternately solves the
//! sub-instances `V0 ∪ S` and `V1 ∪ S`, feeding each the frontier, until the
//! frontier stops changing. Every walk alternates between the two sides
//! through `S`, so the fixed point equals the answer on all of `W`.
//!
//! The boolean variant tracks one bit per vertex. The leveled variant tracks
//! the best token level per slot, a slot being a vertex together with the
//! mandatory-successor edge the token arrived by, if any.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use super::{balance_limit, find_separator_checked, size_limit, Strategy};
use crate::ledger::{bitset_words, phase, Charge, Ledger};
use crate::level::{Label, Level};
use crate::plane::{PlanarView, PlaneGraph};
use crate::stats;
use crate::token::best_output;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReachConfig {
    pub strategy: Strategy,
    /// Vertex sets of at most this size are solved directly.
    pub cutoff: usize,
    /// Check every separator found during the recursion.
    pub validate: bool,
}

impl Default for ReachConfig {
    fn default() -> Self {
        ReachConfig {
            strategy: Strategy::BfsLayer,
            cutoff: 64,
            validate: true,
        }
    }
}

/// What happened during one recursive solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReachStats {
    /// Recursion nodes that found a separator.
    pub nodes: usize,
    pub base_cases: usize,
    pub max_depth: usize,
    /// Separators larger than `4 sqrt(|W|)`.
    pub size_over: usize,
    /// Separators leaving a side above two thirds of `|W|`.
    pub unbalanced: usize,
    /// Separators that failed validation.
    pub invalid: usize,
    /// Nodes where the requested method was unavailable for lack of a planar
    /// rotation.
    pub rotation_fallbacks: usize,
    /// Nodes solved directly because the separator left a side empty.
    pub degenerate: usize,
    /// Nodes needing more frontier passes than the round bound allows.
    pub rounds_over: usize,
    pub max_rounds: usize,
    /// Largest `|S| / sqrt(|W|)` seen.
    pub worst_ratio: f64,
    /// Separator sizes per recursion depth.
    pub sizes_by_depth: Vec<Vec<usize>>,
}

/// A token position: vertex `v`, bound to leave along the successor of edge
/// `via` when that edge has one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotKey {
    pub v: u32,
    pub via: Option<u64>,
}

impl SlotKey {
    pub fn free(v: u32) -> Self {
        SlotKey { v, via: None }
    }
}

/// One directed, labelled edge as seen by the leveled solver.
#[derive(Debug, Clone, Copy)]
pub struct EdgeInfo<'a> {
    pub id: u64,
    pub from: u32,
    pub to: u32,
    /// The edge's mandatory successor.
    pub k: Option<u64>,
    /// The edge whose mandatory successor this edge is.
    pub kinv: Option<u64>,
    pub labels: &'a [Label],
}

impl EdgeInfo<'_> {
    pub fn read_slot(&self) -> SlotKey {
        SlotKey {
            v: self.from,
            via: self.kinv,
        }
    }

    pub fn write_slot(&self) -> SlotKey {
        SlotKey {
            v: self.to,
            via: self.k.map(|_| self.id),
        }
    }
}

/// A gadget-like graph: a plane view plus labelled out-edges.
pub trait LeveledView: PlanarView {
    fn for_each_out(&self, v: u32, f: &mut dyn FnMut(EdgeInfo<'_>));
}

/// The per-variant parts of the recursion.
trait Problem {
    type Key: Copy + Ord + Hash;
    type Val: Copy + Ord;

    fn vertex(k: Self::Key) -> u32;
    /// Words per frontier entry.
    fn entry_words() -> i64;
    /// Solves `w` directly and returns the reached slots at `targets`.
    fn base(
        &self,
        w: &[u32],
        sources: &[(Self::Key, Self::Val)],
        targets: &[u32],
        ledger: &Ledger,
    ) -> Vec<(Self::Key, Self::Val)>;
    /// Whether `passes` exceeds what a node may need before its frontier
    /// settles.
    fn too_many_rounds(&self, passes: usize, w: &[u32], s: &[u32]) -> bool;
}

struct Engine<'a, V: PlanarView + ?Sized, P> {
    view: &'a V,
    problem: P,
    cfg: &'a ReachConfig,
    ledger: &'a Ledger,
    stats: RefCell<ReachStats>,
}

fn merge<K: Ord, T: Ord + Copy>(table: &mut BTreeMap<K, T>, k: K, v: T) -> bool {
    match table.get_mut(&k) {
        Some(old) if *old >= v => false,
        Some(old) => {
            *old = v;
            true
        }
        None => {
            table.insert(k, v);
            true
        }
    }
}

fn sorted_union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else {
            if i < a.len() && a[i] == b[j] {
                i += 1;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out
}

impl<V: PlanarView + ?Sized, P: Problem> Engine<'_, V, P> {
    fn base(
        &self,
        w: &[u32],
        sources: &[(P::Key, P::Val)],
        targets: &[u32],
    ) -> Vec<(P::Key, P::Val)> {
        self.stats.borrow_mut().base_cases += 1;
        self.problem.base(w, sources, targets, self.ledger)
    }

    /// `w` and `targets` sorted, `targets ⊆ w`, every source vertex in `w`.
    fn solve(
        &self,
        w: &[u32],
        sources: &[(P::Key, P::Val)],
        targets: &[u32],
        depth: usize,
    ) -> Vec<(P::Key, P::Val)> {
        {
            let mut st = self.stats.borrow_mut();
            st.max_depth = st.max_depth.max(depth);
        }
        if sources.is_empty() {
            return Vec::new();
        }
        if w.len() <= self.cfg.cutoff.max(1) {
            return self.base(w, sources, targets);
        }
        let (sep, check) =
            find_separator_checked(self.view, w, self.cfg.strategy, self.cfg.validate);
        let _sep_words = Charge::new(self.ledger, phase::SEPARATOR, sep.s.len() as i64);
        {
            let mut st = self.stats.borrow_mut();
            st.nodes += 1;
            let n = w.len();
            if sep.s.len() as f64 > size_limit(n) {
                st.size_over += 1;
            }
            if sep.max_part() > balance_limit(n) {
                st.unbalanced += 1;
            }
            if check.is_err() {
                st.invalid += 1;
            }
            st.rotation_fallbacks += usize::from(sep.fell_back);
            st.worst_ratio = st.worst_ratio.max(sep.s.len() as f64 / (n as f64).sqrt());
            if st.sizes_by_depth.len() <= depth {
                st.sizes_by_depth.resize(depth + 1, Vec::new());
            }
            st.sizes_by_depth[depth].push(sep.s.len());
        }
        if sep.parts.iter().any(Vec::is_empty) {
            self.stats.borrow_mut().degenerate += 1;
            return self.base(w, sources, targets);
        }

        let in_s = |v: u32| sep.s.binary_search(&v).is_ok();
        let mut frontier: BTreeMap<P::Key, P::Val> = BTreeMap::new();
        let mut frontier_words = Charge::new(self.ledger, phase::FRONTIER, 0);
        for &(k, val) in sources.iter().filter(|(k, _)| in_s(P::vertex(*k))) {
            merge(&mut frontier, k, val);
        }
        let mut found: BTreeMap<P::Key, P::Val> = BTreeMap::new();
        let mut found_words = Charge::new(self.ledger, phase::FRONTIER, 0);
        let mut version = 0u64;
        let mut last_run = [None::<u64>; 2];
        let mut passes = 0;
        loop {
            let mut ran = false;
            for (side, part) in sep.parts.iter().enumerate() {
                if last_run[side] == Some(version) {
                    continue;
                }
                let in_part = |v: u32| part.binary_search(&v).is_ok();
                let mut side_sources: Vec<(P::Key, P::Val)> = sources
                    .iter()
                    .copied()
                    .filter(|(k, _)| in_part(P::vertex(*k)))
                    .collect();
                if last_run[side].is_none() && side_sources.is_empty() && frontier.is_empty() {
                    last_run[side] = Some(version);
                    continue;
                }
                side_sources.extend(frontier.iter().map(|(&k, &v)| (k, v)));
                let side_targets: Vec<u32> = sorted_union(
                    &sep.s,
                    &targets
                        .iter()
                        .copied()
                        .filter(|&v| in_part(v))
                        .collect::<Vec<_>>(),
                );
                let sub = sorted_union(part, &sep.s);
                last_run[side] = Some(version);
                ran = true;
                let out = self.solve(&sub, &side_sources, &side_targets, depth + 1);
                let mut changed = false;
                for (k, val) in out {
                    let v = P::vertex(k);
                    if in_s(v) {
                        changed |= merge(&mut frontier, k, val);
                    }
                    if targets.binary_search(&v).is_ok() && !in_s(v) {
                        merge(&mut found, k, val);
                    }
                }
                frontier_words.resize(P::entry_words() * frontier.len() as i64);
                found_words.resize(P::entry_words() * found.len() as i64);
                if changed {
                    version += 1;
                    last_run[side] = Some(version);
                }
            }
            if !ran {
                break;
            }
            passes += 1;
        }
        {
            let mut st = self.stats.borrow_mut();
            st.max_rounds = st.max_rounds.max(passes);
            if self.problem.too_many_rounds(passes, w, &sep.s) {
                st.rounds_over += 1;
            }
        }
        for (&k, &val) in &frontier {
            if targets.binary_search(&P::vertex(k)).is_ok() {
                merge(&mut found, k, val);
            }
        }
        found.into_iter().collect()
    }
}

struct Boolean<'a> {
    g: &'a PlaneGraph,
}

impl Problem for Boolean<'_> {
    type Key = u32;
    type Val = ();

    fn vertex(k: u32) -> u32 {
        k
    }

    fn entry_words() -> i64 {
        1
    }

    fn base(
        &self,
        w: &[u32],
        sources: &[(u32, ())],
        targets: &[u32],
        ledger: &Ledger,
    ) -> Vec<(u32, ())> {
        let words = 2 * bitset_words(w.len()) + w.len() as i64;
        let _charge = Charge::new(ledger, phase::BASE_CASE, words);
        let local = |v: u32| w.binary_search(&v).ok();
        let mut seen = vec![false; w.len()];
        let mut stack: Vec<u32> = Vec::new();
        for &(v, ()) in sources {
            if let Some(i) = local(v) {
                if !seen[i] {
                    seen[i] = true;
                    stack.push(v);
                }
            }
        }
        while let Some(v) = stack.pop() {
            for &u in self.g.successors(v) {
                if let Some(i) = local(u) {
                    if !seen[i] {
                        seen[i] = true;
                        stack.push(u);
                    }
                }
            }
        }
        targets
            .iter()
            .filter(|&&t| local(t).is_some_and(|i| seen[i]))
            .map(|&t| (t, ()))
            .collect()
    }

    fn too_many_rounds(&self, passes: usize, _w: &[u32], s: &[u32]) -> bool {
        passes > s.len() + 1
    }
}

struct Leveled<'a, G: LeveledView + ?Sized> {
    g: &'a G,
}

impl<G: LeveledView + ?Sized> Leveled<'_, G> {
    fn label_count(&self, w: &[u32]) -> usize {
        let mut count = 0;
        for &v in w {
            self.g.for_each_out(v, &mut |e| {
                if w.binary_search(&e.to).is_ok() {
                    count += e.labels.len();
                }
            });
        }
        count
    }
}

impl<G: LeveledView + ?Sized> Problem for Leveled<'_, G> {
    type Key = SlotKey;
    type Val = Level;

    fn vertex(k: SlotKey) -> u32 {
        k.v
    }

    fn entry_words() -> i64 {
        // vertex, edge id and a two-word level
        4
    }

    fn base(
        &self,
        w: &[u32],
        sources: &[(SlotKey, Level)],
        targets: &[u32],
        ledger: &Ledger,
    ) -> Vec<(SlotKey, Level)> {
        let mut edges: Vec<(SlotKey, SlotKey, Vec<Label>)> = Vec::new();
        for &v in w {
            self.g.for_each_out(v, &mut |e| {
                if w.binary_search(&e.to).is_ok() {
                    edges.push((e.read_slot(), e.write_slot(), e.labels.to_vec()));
                }
            });
        }
        let labels: usize = edges.iter().map(|e| e.2.len()).sum();
        let edge_words = edges.len() as i64 * 8 + 4 * labels as i64;
        let mut charge = Charge::new(ledger, phase::BASE_CASE, edge_words);
        let mut table: HashMap<SlotKey, Level> = HashMap::new();
        for &(k, l) in sources {
            let slot = table.entry(k).or_insert(Level::Unreached);
            *slot = (*slot).max(l);
        }
        let mut sweeps = 0;
        loop {
            sweeps += 1;
            let mut changed = false;
            for (r, wr, labels) in &edges {
                let Some(&at) = table.get(r) else { continue };
                if let Some(out) = best_output(labels, at) {
                    let slot = table.entry(*wr).or_insert(Level::Unreached);
                    if out > *slot {
                        *slot = out;
                        changed = true;
                    }
                }
            }
            charge.resize(edge_words + Self::entry_words() * table.len() as i64);
            if !changed {
                break;
            }
        }
        stats::record_sweeps(sweeps, labels);
        let mut out: Vec<(SlotKey, Level)> = table
            .into_iter()
            .filter(|(k, l)| l.is_reached() && targets.binary_search(&k.v).is_ok())
            .collect();
        out.sort_unstable();
        out
    }

    fn too_many_rounds(&self, passes: usize, w: &[u32], _s: &[u32]) -> bool {
        // a second pass needs a label to have fired, so only count labels
        // when there were more
        passes > 2 && passes > self.label_count(w) + 1
    }
}

/// For each target, whether some source reaches it in `g`.
pub fn reach_boolean(
    g: &PlaneGraph,
    sources: &[usize],
    targets: &[usize],
    cfg: &ReachConfig,
    ledger: &Ledger,
) -> Vec<bool> {
    reach_boolean_with_stats(g, sources, targets, cfg, ledger).0
}

pub fn reach_boolean_with_stats(
    g: &PlaneGraph,
    sources: &[usize],
    targets: &[usize],
    cfg: &ReachConfig,
    ledger: &Ledger,
) -> (Vec<bool>, ReachStats) {
    let engine = Engine {
        view: g,
        problem: Boolean { g },
        cfg,
        ledger,
        stats: RefCell::default(),
    };
    let w: Vec<u32> = (0..g.vertex_count() as u32).collect();
    let src: Vec<(u32, ())> = sources.iter().map(|&v| (v as u32, ())).collect();
    let mut tset: Vec<u32> = targets.iter().map(|&v| v as u32).collect();
    tset.sort_unstable();
    tset.dedup();
    let reached = engine.solve(&w, &src, &tset, 0);
    let answer = targets
        .iter()
        .map(|&t| reached.binary_search(&(t as u32, ())).is_ok())
        .collect();
    (answer, engine.stats.into_inner())
}

/// Best token level per reached slot at the `targets` vertices, starting from
/// the given slots and levels.
pub fn reach_leveled<G: LeveledView + ?Sized>(
    g: &G,
    sources: &[(SlotKey, Level)],
    targets: &[u32],
    cfg: &ReachConfig,
    ledger: &Ledger,
) -> (Vec<(SlotKey, Level)>, ReachStats) {
    let engine = Engine {
        view: g,
        problem: Leveled { g },
        cfg,
        ledger,
        stats: RefCell::default(),
    };
    let w: Vec<u32> = (0..g.vertex_count() as u32).collect();
    let mut tset = targets.to_vec();
    tset.sort_unstable();
    tset.dedup();
    let out = engine.solve(&w, sources, &tset, 0);
    (out, engine.stats.into_inner())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{bfs_reachable, gen_random};

    #[test]
    fn agrees_with_bfs_on_random_grids() {
        for seed in 0..40 {
            let g = gen_random(9, 8, 0.55, seed).unwrap();
            let p = PlaneGraph::from_grid(&g);
            let n = g.vertex_count();
            let targets: Vec<usize> = (0..n).collect();
            for strategy in [Strategy::BfsLayer, Strategy::FundamentalCycle] {
                let cfg = ReachConfig {
                    strategy,
                    cutoff: 6,
                    validate: true,
                };
                let src = (seed as usize * 7) % n;
                let (got, st) =
                    reach_boolean_with_stats(&p, &[src], &targets, &cfg, &Ledger::disabled());
                for (t, &r) in got.iter().enumerate() {
                    assert_eq!(
                        r,
                        bfs_reachable(&g, g.vertex(src), g.vertex(t)),
                        "seed {seed} {strategy:?} t {t}"
                    );
                }
                assert_eq!(st.invalid, 0);
                assert!(st.nodes > 0);
            }
        }
    }

    #[test]
    fn no_sources_reach_nothing() {
        let g = gen_random(6, 6, 1.0, 1).unwrap();
        let p = PlaneGraph::from_grid(&g);
        let cfg = ReachConfig {
            cutoff: 4,
            ..Default::default()
        };
        let got = reach_boolean(&p, &[], &[0, 5, 35], &cfg, &Ledger::disabled());
        assert_eq!(got, vec![false; 3]);
    }

    #[test]
    fn frontier_is_released() {
        let g = gen_random(10, 10, 0.7, 3).unwrap();
        let p = PlaneGraph::from_grid(&g);
        let ledger = Ledger::new();
        let cfg = ReachConfig {
            cutoff: 8,
            ..Default::default()
        };
        reach_boolean(&p, &[0], &[99], &cfg, &ledger);
        ledger.check_released();
        assert!(ledger.violation().is_none());
        assert!(ledger.phase_peak(phase::FRONTIER) > 0);
        assert!(ledger.phase_peak(phase::SEPARATOR) > 0);
    }
}
