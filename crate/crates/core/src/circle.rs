//! Circle graphs: rim vertices on a cycle, edges given by reachability inside
//! the block, plus the chord predicates used to reason about them.

use std::fmt::Write as _;

use crate::grid::{GridGraph, VertexId};
use crate::ledger::{bitset_words, phase, Charge, Ledger};

/// How rim-to-rim reachability inside a block is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InnerSolver {
    /// Bitset breadth-first search; working set is three block-sized bitsets.
    #[default]
    Bfs,
    /// The separator-based recursive solver.
    Separator,
}

impl std::str::FromStr for InnerSolver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bfs" => Ok(InnerSolver::Bfs),
            "separator" => Ok(InnerSolver::Separator),
            _ => Err(format!("unknown inner solver `{s}`")),
        }
    }
}

/// Rim positions `0..n` in clockwise order with the directed reachability
/// relation between them, stored as an `n x n` bit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircleGraph {
    n: usize,
    bits: Vec<u64>,
}

impl CircleGraph {
    pub fn empty(n: usize) -> Self {
        CircleGraph {
            n,
            bits: vec![0; (n * n).div_ceil(64)],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut c = CircleGraph::empty(n);
        for (u, v) in edges {
            c.insert(u, v);
        }
        c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, u: usize, v: usize) {
        assert!(
            u < self.n && v < self.n && u != v,
            "bad circle edge ({u}, {v})"
        );
        let i = u * self.n + v;
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let i = u * self.n + v;
        u != v && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Edges in `(u, v)` lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| {
            (0..n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Words occupied by the bit matrix.
    pub fn words(&self) -> i64 {
        bitset_words(self.n * self.n) + 1
    }

    /// `(u, v)` is not an edge of the cycle itself.
    pub fn is_chord(&self, u: usize, v: usize) -> bool {
        u != v && (u + 1) % self.n != v && (v + 1) % self.n != u
    }

    /// Debug dump: `circle <n>` then one `c <u> <v>` line per edge.
    pub fn dump(&self) -> String {
        let mut out = format!("circle {}\n", self.n);
        for (u, v) in self.edges() {
            writeln!(out, "c {u} {v}").unwrap();
        }
        out
    }

    pub fn crosses(&self, e1: (usize, usize), e2: (usize, usize)) -> bool {
        crosses(self.n, e1, e2)
    }

    pub fn semi_crosses(&self, e1: (usize, usize), e2: (usize, usize)) -> bool {
        semi_crosses(self.n, e1, e2)
    }

    pub fn separates(&self, e1: (usize, usize), e2: (usize, usize), e3: (usize, usize)) -> bool {
        separates(self.n, e1, e2, e3)
    }
}

/// `x` lies strictly inside the clockwise tour from `u` to `v`.
fn cl_open(n: usize, u: usize, v: usize, x: usize) -> bool {
    let d = |a: usize| (a + n - u) % n;
    x != u && x != v && d(x) < d(v)
}

fn cl_closed(n: usize, u: usize, v: usize, x: usize) -> bool {
    x == u || x == v || cl_open(n, u, v, x)
}

/// The two chords cross in the usual way (open tours).
pub fn crosses(n: usize, (u1, v1): (usize, usize), (u2, v2): (usize, usize)) -> bool {
    (cl_open(n, u1, v1, u2) && cl_open(n, v1, u1, v2))
        || (cl_open(n, u1, v1, v2) && cl_open(n, v1, u1, u2))
}

/// Like [`crosses`] but over closed tours, so shared endpoints count.
pub fn semi_crosses(n: usize, (u1, v1): (usize, usize), (u2, v2): (usize, usize)) -> bool {
    (cl_closed(n, u1, v1, u2) && cl_closed(n, v1, u1, v2))
        || (cl_closed(n, u1, v1, v2) && cl_closed(n, v1, u1, u2))
}

/// The chord `e1` puts the heads of `e2` and `e3` on opposite closed tours.
pub fn separates(
    n: usize,
    (u1, v1): (usize, usize),
    (_, v2): (usize, usize),
    (_, v3): (usize, usize),
) -> bool {
    (cl_closed(n, u1, v1, v2) && cl_closed(n, v1, u1, v3))
        || (cl_closed(n, u1, v1, v3) && cl_closed(n, v1, u1, v2))
}

/// The first two edges semi-cross and every later edge separates two earlier
/// ones.
pub fn traversable(n: usize, seq: &[(usize, usize)]) -> bool {
    if seq.len() < 2 || !semi_crosses(n, seq[0], seq[1]) {
        return false;
    }
    (2..seq.len()).all(|i| (0..i).any(|p| (p..i).any(|q| separates(n, seq[i], seq[p], seq[q]))))
}

/// Builds the circle graph of a block given in local coordinates, with `rim`
/// listing its rim vertices clockwise.
pub fn build_circle(
    block: &GridGraph,
    rim: &[VertexId],
    inner: InnerSolver,
    ledger: &Ledger,
) -> CircleGraph {
    let n = rim.len();
    let mut c = CircleGraph::empty(n);
    let _matrix = Charge::new(ledger, phase::CIRCLE, c.words());
    match inner {
        InnerSolver::Bfs => {
            let mut bfs = BitsetBfs::new(block, ledger);
            for (u, &src) in rim.iter().enumerate() {
                bfs.run(block, src);
                for (v, &dst) in rim.iter().enumerate() {
                    if u != v && bfs.visited(block, dst) {
                        c.insert(u, v);
                    }
                }
            }
        }
        InnerSolver::Separator => {
            let plane = crate::plane::PlaneGraph::from_grid(block);
            let targets: Vec<usize> = rim.iter().map(|&v| block.index(v)).collect();
            let cfg = crate::separator::ReachConfig::default();
            for (u, &src) in rim.iter().enumerate() {
                let reached = crate::separator::reach_boolean(
                    &plane,
                    &[block.index(src)],
                    &targets,
                    &cfg,
                    ledger,
                );
                for (v, &r) in reached.iter().enumerate() {
                    if r && u != v {
                        c.insert(u, v);
                    }
                }
            }
        }
    }
    c
}

/// Layered BFS over a block using three bitsets.
struct BitsetBfs<'a> {
    visited: Vec<u64>,
    frontier: Vec<u64>,
    next: Vec<u64>,
    _charge: Charge<'a>,
}

impl<'a> BitsetBfs<'a> {
    fn new(g: &GridGraph, ledger: &'a Ledger) -> Self {
        let words = g.vertex_count().div_ceil(64);
        BitsetBfs {
            visited: vec![0; words],
            frontier: vec![0; words],
            next: vec![0; words],
            _charge: Charge::new(ledger, phase::CIRCLE, 3 * words as i64),
        }
    }

    fn run(&mut self, g: &GridGraph, src: VertexId) {
        self.visited.fill(0);
        self.frontier.fill(0);
        let s = g.index(src);
        set(&mut self.visited, s);
        set(&mut self.frontier, s);
        loop {
            self.next.fill(0);
            let mut any = false;
            for (wi, &word) in self.frontier.iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let i = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for nb in g.successors(g.vertex(i)) {
                        let j = g.index(nb);
                        if !get(&self.visited, j) {
                            set(&mut self.visited, j);
                            set(&mut self.next, j);
                            any = true;
                        }
                    }
                }
            }
            if !any {
                break;
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
    }

    fn visited(&self, g: &GridGraph, v: VertexId) -> bool {
        get(&self.visited, g.index(v))
    }
}

fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn get(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::Block;
    use crate::grid::bfs_reachable;

    #[test]
    fn textbook_crossing() {
        assert!(crosses(8, (0, 4), (2, 6)));
        assert!(crosses(8, (2, 6), (0, 4)));
        assert!(!crosses(8, (0, 4), (4, 6)));
        assert!(semi_crosses(8, (0, 4), (4, 6)));
        assert!(!semi_crosses(8, (0, 2), (4, 6)));
    }

    #[test]
    fn separation_uses_heads() {
        // heads 2 and 7 fall on opposite closed tours of (1, 5)
        assert!(separates(8, (1, 5), (0, 2), (6, 7)));
        assert!(separates(8, (1, 5), (6, 7), (0, 2)));
        // heads 2 and 4 are on the same side
        assert!(!separates(8, (1, 5), (0, 2), (6, 4)));
    }

    #[test]
    fn traversable_basics() {
        assert!(traversable(8, &[(0, 4), (2, 6)]));
        assert!(!traversable(8, &[(0, 2), (4, 6)]));
        assert!(!traversable(8, &[(0, 4)]));
    }

    #[test]
    fn directed_top_row() {
        let mut g = GridGraph::new(3, 3, VertexId::new(0, 0), VertexId::new(0, 0)).unwrap();
        g.add_edge(VertexId::new(0, 0), VertexId::new(1, 0))
            .unwrap();
        g.add_edge(VertexId::new(1, 0), VertexId::new(2, 0))
            .unwrap();
        let b = Block::new(0, 0, 2, 2);
        let c = build_circle(&g, b.rim(), InnerSolver::Bfs, &Ledger::disabled());
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(c.dump(), "circle 8\nc 0 1\nc 0 2\nc 1 2\n");
    }

    #[test]
    fn edgeless_block_has_no_edges() {
        let g = GridGraph::new(4, 4, VertexId::new(0, 0), VertexId::new(0, 0)).unwrap();
        let b = Block::new(0, 0, 3, 3);
        assert_eq!(
            build_circle(&g, b.rim(), InnerSolver::Bfs, &Ledger::disabled()).edge_count(),
            0
        );
    }

    #[test]
    fn bfs_circle_matches_plain_bfs() {
        for seed in 0..20 {
            let g = crate::grid::gen_random(5, 4, 0.5, seed).unwrap();
            let b = Block::new(0, 0, 4, 3);
            let c = build_circle(&g, b.rim(), InnerSolver::Bfs, &Ledger::disabled());
            for (u, &a) in b.rim().iter().enumerate() {
                for (v, &z) in b.rim().iter().enumerate() {
                    assert_eq!(c.has_edge(u, v), u != v && bfs_reachable(&g, a, z));
                }
            }
        }
    }
}
