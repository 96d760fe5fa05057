//! Token-tour evaluation on gadget graphs.
//!
//! A token carries a level. Crossing an edge needs a label whose input level
//! is at most the token's level and replaces the level by the label's
//! output. After an edge with a mandatory successor the token must take that
//! successor next. The table keeps, per vertex, the best level of a free
//! token (the `⊥` slot) and of a token bound to leave along a particular
//! edge, and relaxes all edges until nothing changes.

use crate::gadget::{Eid, GadgetGraph, Vid};
use crate::level::{Label, Level};
use crate::stats;

/// Where a token sits: at a vertex, free or bound by the edge it used last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Free(Vid),
    /// At the head of the edge, which has a mandatory successor.
    After(Eid),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TokenOptions {
    /// Treat every edge as free of successor constraints. Wrong on purpose;
    /// exists to show the oracle tests notice.
    pub ignore_k: bool,
}

/// Best level per slot after a fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTable {
    n: usize,
    values: Vec<Level>,
    sweeps: usize,
}

impl LevelTable {
    fn index(&self, s: Slot) -> usize {
        match s {
            Slot::Free(v) => v as usize,
            Slot::After(e) => self.n + e as usize,
        }
    }

    pub fn get(&self, s: Slot) -> Level {
        self.values[self.index(s)]
    }

    /// Best level of a token at `v` in any slot.
    pub fn best(&self, g: &GadgetGraph, v: Vid) -> Level {
        let mut best = self.get(Slot::Free(v));
        for (i, e) in g.edges().iter().enumerate() {
            if e.to == v && e.k.is_some() {
                best = best.max(self.values[self.n + i]);
            }
        }
        best
    }

    /// Passes over the edge list, the last one changing nothing.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn words(&self) -> i64 {
        2 * self.values.len() as i64
    }
}

/// Slot an edge reads its token from.
pub fn read_slot(g: &GadgetGraph, e: Eid, opts: TokenOptions) -> Slot {
    match g.edge(e).kinv {
        Some(p) if !opts.ignore_k => Slot::After(p),
        _ => Slot::Free(g.edge(e).from),
    }
}

/// Slot an edge writes its token to.
pub fn write_slot(g: &GadgetGraph, e: Eid, opts: TokenOptions) -> Slot {
    match g.edge(e).k {
        Some(_) if !opts.ignore_k => Slot::After(e),
        _ => Slot::Free(g.edge(e).to),
    }
}

/// Highest level obtainable from `labels` with a token at `level`.
pub fn best_output(labels: &[Label], level: Level) -> Option<Level> {
    labels.iter().filter_map(|l| l.apply(level)).max()
}

/// Fixed point of the relaxation from a token at `start` with level `level`.
pub fn token_levels(g: &GadgetGraph, start: Slot, level: Level) -> LevelTable {
    token_levels_with(g, start, level, TokenOptions::default())
}

pub fn token_levels_with(
    g: &GadgetGraph,
    start: Slot,
    level: Level,
    opts: TokenOptions,
) -> LevelTable {
    let n = g.vertex_count();
    let mut t = LevelTable {
        n,
        values: vec![Level::Unreached; n + g.edges().len()],
        sweeps: 0,
    };
    let si = t.index(start);
    t.values[si] = level;
    let io: Vec<(usize, usize)> = (0..g.edges().len() as Eid)
        .map(|e| {
            (
                t.index(read_slot(g, e, opts)),
                t.index(write_slot(g, e, opts)),
            )
        })
        .collect();
    loop {
        t.sweeps += 1;
        let mut changed = false;
        for (e, &(r, w)) in g.edges().iter().zip(&io) {
            if let Some(out) = best_output(&e.labels, t.values[r]) {
                if out > t.values[w] {
                    t.values[w] = out;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    stats::record_sweeps(t.sweeps, g.label_count());
    t
}

/// A token starting free at `x` with infinite level can reach `y`.
pub fn token_reachable(g: &GadgetGraph, x: Vid, y: Vid) -> bool {
    token_reachable_with(g, x, y, TokenOptions::default())
}

pub fn token_reachable_with(g: &GadgetGraph, x: Vid, y: Vid, opts: TokenOptions) -> bool {
    x == y
        || token_levels_with(g, Slot::Free(x), Level::Infinite, opts)
            .best(g, y)
            .is_reached()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{GEdge, Provenance};

    fn edge(from: Vid, to: Vid, k: Option<Eid>, labels: Vec<Label>) -> GEdge {
        GEdge {
            from,
            to,
            k,
            kinv: None,
            labels,
        }
    }

    fn hub() -> Provenance {
        Provenance::Hub {
            step: 0,
            cap: vec![],
        }
    }

    #[test]
    fn open_and_prohibited_edges() {
        let g = GadgetGraph::from_parts(2, vec![], vec![edge(0, 1, None, vec![Label::OPEN])]);
        assert_eq!(
            token_levels(&g, Slot::Free(0), Level::Infinite).get(Slot::Free(1)),
            Level::Infinite
        );
        let g = GadgetGraph::from_parts(2, vec![], vec![edge(0, 1, None, vec![Label::PROHIBITED])]);
        for l in [Level::ZERO, Level::int(7), Level::Infinite] {
            assert_eq!(
                token_levels(&g, Slot::Free(0), l).get(Slot::Free(1)),
                Level::Unreached
            );
        }
    }

    #[test]
    fn bound_token_must_follow_its_successor() {
        // x=0, y=1, z=2, u=3
        let lab = |a, b| vec![Label::new(Level::int(a), Level::int(b))];
        let edges = vec![
            edge(0, 3, Some(1), lab(2, 5)),
            edge(3, 1, None, lab(5, 7)),
            edge(3, 2, None, lab(6, 9)),
        ];
        let g = GadgetGraph::from_parts(3, vec![hub()], edges);
        let t = token_levels(&g, Slot::Free(0), Level::int(3));
        assert_eq!(t.get(Slot::Free(1)), Level::int(7));
        assert_eq!(t.get(Slot::Free(2)), Level::Unreached);
        assert!(t.sweeps() <= g.label_count() + 1);
        // with the constraint dropped the decoy label 6 -> 9 is still too high
        let t = token_levels_with(
            &g,
            Slot::Free(0),
            Level::int(3),
            TokenOptions { ignore_k: true },
        );
        assert_eq!(t.get(Slot::Free(2)), Level::Unreached);
    }

    #[test]
    fn ignoring_successors_opens_a_detour() {
        let lab = |a, b| vec![Label::new(Level::int(a), Level::int(b))];
        let edges = vec![
            edge(0, 3, Some(1), lab(2, 5)),
            edge(3, 1, None, lab(5, 7)),
            edge(3, 2, None, lab(4, 9)),
        ];
        let g = GadgetGraph::from_parts(3, vec![hub()], edges);
        assert!(!token_reachable(&g, 0, 2));
        assert!(token_reachable_with(
            &g,
            0,
            2,
            TokenOptions { ignore_k: true }
        ));
    }

    #[test]
    fn self_query() {
        let g = GadgetGraph::from_parts(2, vec![], vec![]);
        assert!(token_reachable(&g, 1, 1));
        assert!(!token_reachable(&g, 0, 1));
    }
}
