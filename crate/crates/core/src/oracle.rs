//! Brute-force references used to check the pipeline.
//!
//! These are deliberately naive and share no code with the solvers they
//! check.

use std::collections::{HashMap, VecDeque};

use crate::gadget::{Eid, GadgetGraph, Vid};
use crate::grid::GridGraph;
use crate::level::{Label, Level};

/// Reflexive transitive closure of a grid by repeated squaring of its
/// boolean adjacency matrix. Row `i` is a bitset over row-major indices.
pub fn transitive_closure(g: &GridGraph) -> Vec<Vec<u64>> {
    let n = g.vertex_count();
    let words = n.div_ceil(64);
    let mut m = vec![vec![0u64; words]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i / 64] |= 1 << (i % 64);
        for w in g.successors(g.vertex(i)) {
            let j = g.index(w);
            row[j / 64] |= 1 << (j % 64);
        }
    }
    loop {
        let mut next = m.clone();
        for (i, row) in next.iter_mut().enumerate() {
            for k in 0..n {
                if m[i][k / 64] >> (k % 64) & 1 == 1 {
                    for (r, x) in row.iter_mut().zip(&m[k]) {
                        *r |= x;
                    }
                }
            }
        }
        if next == m {
            return m;
        }
        m = next;
    }
}

/// Whether `closure` (from [`transitive_closure`]) relates `i` to `j`.
pub fn closure_has(closure: &[Vec<u64>], i: usize, j: usize) -> bool {
    closure[i][j / 64] >> (j % 64) & 1 == 1
}

/// Every token state reachable from a start vertex, found by breadth-first
/// search over `(vertex, pending successor, level)` directly from the
/// definition of a token tour.
#[derive(Debug, Clone)]
pub struct TourSearch {
    /// Highest level a token can hold at each vertex.
    pub best: Vec<Level>,
    /// Fewest edges of a tour ending at each vertex; `None` if unreachable.
    pub hops: Vec<Option<usize>>,
    pub states: usize,
}

/// Tours of a token that starts at `x` with level `start`.
pub fn token_tours(g: &GadgetGraph, x: Vid, start: Level) -> TourSearch {
    let n = g.vertex_count();
    type State = (Vid, Option<Eid>, Level);
    let mut dist: HashMap<State, usize> = HashMap::new();
    let mut queue: VecDeque<State> = VecDeque::new();
    let s0 = (x, None, start);
    dist.insert(s0, 0);
    queue.push_back(s0);
    let mut best = vec![Level::Unreached; n];
    let mut hops = vec![None; n];
    while let Some(st @ (v, pending, level)) = queue.pop_front() {
        let d = dist[&st];
        best[v as usize] = best[v as usize].max(level);
        if hops[v as usize].is_none() {
            hops[v as usize] = Some(d);
        }
        let choices: Vec<Eid> = match pending {
            Some(e) => vec![e],
            None => g.out_edges(v).collect(),
        };
        for e in choices {
            let edge = g.edge(e);
            debug_assert_eq!(edge.from, v);
            for label in &edge.labels {
                // the prohibited label is usable by no token, even at infinity
                if label.input > level || !level.is_reached() || *label == Label::PROHIBITED {
                    continue;
                }
                let next = (edge.to, edge.k, label.output);
                if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(next) {
                    slot.insert(d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    TourSearch {
        best,
        hops,
        states: dist.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::GEdge;
    use crate::grid::{bfs_reachable, gen_random};

    #[test]
    fn closure_matches_bfs() {
        let g = gen_random(16, 16, 0.5, 7).unwrap();
        let c = transitive_closure(&g);
        assert_eq!(
            closure_has(&c, g.index(g.s()), g.index(g.t())),
            bfs_reachable(&g, g.s(), g.t())
        );
        for seed in 0..20 {
            let g = gen_random(5, 4, 0.4, seed).unwrap();
            let c = transitive_closure(&g);
            for i in 0..20 {
                for j in 0..20 {
                    assert_eq!(
                        closure_has(&c, i, j),
                        bfs_reachable(&g, g.vertex(i), g.vertex(j))
                    );
                }
            }
        }
    }

    #[test]
    fn bound_token_cannot_take_a_decoy() {
        let e = |from, to, k, labels| GEdge {
            from,
            to,
            k,
            kinv: None,
            labels,
        };
        let g = GadgetGraph::from_parts(
            4,
            vec![],
            vec![
                e(
                    0,
                    1,
                    Some(1),
                    vec![Label::new(Level::int(2), Level::int(5))],
                ),
                e(1, 2, None, vec![Label::new(Level::int(5), Level::int(7))]),
                e(1, 3, None, vec![Label::new(Level::int(6), Level::int(9))]),
            ],
        );
        let t = token_tours(&g, 0, Level::int(3));
        assert_eq!(t.best[2], Level::int(7));
        assert_eq!(t.best[3], Level::Unreached);
        assert_eq!(t.hops[2], Some(2));
    }
}
