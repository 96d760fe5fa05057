//! Block decomposition of a grid into rectangles of side about `N^{1/3}`.

use crate::grid::{GridGraph, VertexId};

/// A rectangular block with inclusive bounds and its rim in clockwise order
/// starting at the top-left corner `(x0, y0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
    rim: Vec<VertexId>,
}

impl Block {
    pub fn new(x0: u32, y0: u32, x1: u32, y1: u32) -> Self {
        assert!(x0 <= x1 && y0 <= y1);
        let mut b = Block {
            x0,
            y0,
            x1,
            y1,
            rim: Vec::new(),
        };
        b.rim = b.walk_rim();
        b
    }

    pub fn width(&self) -> u32 {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> u32 {
        self.y1 - self.y0 + 1
    }

    pub fn vertex_count(&self) -> usize {
        self.width() as usize * self.height() as usize
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (self.x0..=self.x1).contains(&v.x) && (self.y0..=self.y1).contains(&v.y)
    }

    pub fn rim(&self) -> &[VertexId] {
        &self.rim
    }

    /// Global coordinate to block-local coordinate.
    pub fn to_local(&self, v: VertexId) -> VertexId {
        VertexId::new(v.x - self.x0, v.y - self.y0)
    }

    pub fn to_global(&self, v: VertexId) -> VertexId {
        VertexId::new(v.x + self.x0, v.y + self.y0)
    }

    /// Position of `v` on the rim cycle, if it is a rim vertex.
    pub fn rim_position(&self, v: VertexId) -> Option<usize> {
        if !self.contains(v) {
            return None;
        }
        let (w, h) = (self.width() as usize, self.height() as usize);
        let (lx, ly) = ((v.x - self.x0) as usize, (v.y - self.y0) as usize);
        if h == 1 {
            return Some(lx);
        }
        if w == 1 {
            return Some(ly);
        }
        if ly == 0 {
            Some(lx)
        } else if lx == w - 1 {
            Some(w - 1 + ly)
        } else if ly == h - 1 {
            Some(w - 1 + h - 1 + (w - 1 - lx))
        } else if lx == 0 {
            Some(2 * (w - 1) + h - 1 + (h - 1 - ly))
        } else {
            None
        }
    }

    fn walk_rim(&self) -> Vec<VertexId> {
        let (x0, y0, x1, y1) = (self.x0, self.y0, self.x1, self.y1);
        if y0 == y1 {
            return (x0..=x1).map(|x| VertexId::new(x, y0)).collect();
        }
        if x0 == x1 {
            return (y0..=y1).map(|y| VertexId::new(x0, y)).collect();
        }
        let mut rim = Vec::with_capacity(2 * (self.width() + self.height()) as usize - 4);
        rim.extend((x0..x1).map(|x| VertexId::new(x, y0)));
        rim.extend((y0..y1).map(|y| VertexId::new(x1, y)));
        rim.extend((x0 + 1..=x1).rev().map(|x| VertexId::new(x, y1)));
        rim.extend((y0 + 1..=y1).rev().map(|y| VertexId::new(x0, y)));
        rim
    }
}

/// A tiling of the grid by rectangular blocks, described by its cut lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSet {
    pub x_cuts: Vec<u32>,
    pub y_cuts: Vec<u32>,
    blocks: Vec<Block>,
}

/// A grid edge joining rim vertices of two different blocks, as
/// `(block index, rim position)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InterBlockEdge {
    pub from: (usize, usize),
    pub to: (usize, usize),
}

impl BlockSet {
    /// Builds the blocks from cut lists (each strictly increasing, from 0 to
    /// the grid side).
    pub fn from_cuts(x_cuts: Vec<u32>, y_cuts: Vec<u32>) -> Self {
        debug_assert!(x_cuts.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(y_cuts.windows(2).all(|w| w[0] < w[1]));
        let mut blocks = Vec::new();
        for ys in y_cuts.windows(2) {
            for xs in x_cuts.windows(2) {
                blocks.push(Block::new(xs[0], ys[0], xs[1] - 1, ys[1] - 1));
            }
        }
        BlockSet {
            x_cuts,
            y_cuts,
            blocks,
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `v`.
    pub fn block_of(&self, v: VertexId) -> usize {
        let band = |cuts: &[u32], c: u32| cuts.partition_point(|&k| k <= c) - 1;
        let bx = band(&self.x_cuts, v.x);
        let by = band(&self.y_cuts, v.y);
        by * (self.x_cuts.len() - 1) + bx
    }

    /// `(block index, rim position)` of `v`, if `v` is on its block's rim.
    pub fn locate_rim(&self, v: VertexId) -> Option<(usize, usize)> {
        let b = self.block_of(v);
        self.blocks[b].rim_position(v).map(|p| (b, p))
    }

    pub fn max_side(&self) -> u32 {
        self.blocks
            .iter()
            .map(|b| b.width().max(b.height()))
            .max()
            .unwrap_or(0)
    }
}

/// Integer cube root, rounded up.
fn ceil_cbrt(n: u64) -> u64 {
    let mut c = (n as f64).cbrt().round() as u64;
    while c * c * c < n {
        c += 1;
    }
    while c > 0 && (c - 1) * (c - 1) * (c - 1) >= n {
        c -= 1;
    }
    c
}

/// Default block side: `ceil(N^{1/3})` for an `N`-vertex grid, at least 2.
pub fn default_block_side(g: &GridGraph) -> u32 {
    (ceil_cbrt(g.vertex_count() as u64) as u32).max(2)
}

fn base_cuts(len: u32, side: u32) -> Vec<u32> {
    let mut cuts: Vec<u32> = (0..)
        .map(|k| k * side)
        .take_while(|&c| c == 0 || c + side <= len)
        .collect();
    cuts.push(len);
    cuts.dedup();
    cuts
}

fn on_rim_axis(cuts: &[u32], c: u32) -> bool {
    cuts.binary_search(&c).is_ok() || cuts.binary_search(&(c + 1)).is_ok()
}

/// Smallest side created by inserting `cut` into `cuts`.
fn split_quality(cuts: &[u32], cut: u32) -> Option<u32> {
    if cuts.binary_search(&cut).is_ok() {
        return None;
    }
    let i = cuts.partition_point(|&k| k < cut);
    if i == 0 || i == cuts.len() {
        return None;
    }
    Some((cut - cuts[i - 1]).min(cuts[i] - cut))
}

/// Cuts the grid into blocks of side `target_side` (the last block of each
/// band absorbs the remainder), then inserts extra global cut lines so that
/// `s` and `t` both lie on block rims.
pub fn decompose(g: &GridGraph, target_side: u32) -> BlockSet {
    assert!(target_side >= 2, "block side must be at least 2");
    let mut xs = base_cuts(g.width(), target_side);
    let mut ys = base_cuts(g.height(), target_side);
    for v in [g.s(), g.t()] {
        if on_rim_axis(&xs, v.x) || on_rim_axis(&ys, v.y) {
            continue;
        }
        let options = [(true, v.x), (true, v.x + 1), (false, v.y), (false, v.y + 1)];
        let best = options
            .iter()
            .filter_map(|&(vertical, c)| {
                let cuts = if vertical { &xs } else { &ys };
                split_quality(cuts, c).map(|q| (q, vertical, c))
            })
            // first option wins ties
            .fold(None, |acc: Option<(u32, bool, u32)>, cand| match acc {
                Some(a) if a.0 >= cand.0 => Some(a),
                _ => Some(cand),
            });
        let (_, vertical, c) = best.expect("a vertex off every rim has an interior cut position");
        let cuts = if vertical { &mut xs } else { &mut ys };
        let i = cuts.partition_point(|&k| k < c);
        cuts.insert(i, c);
    }
    let bs = BlockSet::from_cuts(xs, ys);
    debug_assert!(bs.max_side() <= 2 * target_side);
    bs
}

/// The subgraph induced by `b`, in block-local coordinates, with both query
/// endpoints set to the local origin. Edges leaving the block are dropped.
pub fn block_subgraph(g: &GridGraph, b: &Block) -> GridGraph {
    let origin = VertexId::new(0, 0);
    let mut sub = GridGraph::new(b.width(), b.height(), origin, origin).expect("non-empty block");
    for y in b.y0..=b.y1 {
        for x in b.x0..=b.x1 {
            let v = VertexId::new(x, y);
            for w in g.successors(v).filter(|w| b.contains(*w)) {
                sub.add_edge(b.to_local(v), b.to_local(w))
                    .expect("edge inside block");
            }
        }
    }
    sub
}

/// Every directed grid edge whose endpoints lie in different blocks, in
/// canonical grid-edge order.
pub fn inter_block_edges(g: &GridGraph, bs: &BlockSet) -> Vec<InterBlockEdge> {
    let mut out = Vec::new();
    for (a, b) in g.edges() {
        let (ba, bb) = (bs.block_of(a), bs.block_of(b));
        if ba == bb {
            continue;
        }
        let pa = bs.blocks[ba]
            .rim_position(a)
            .expect("crossing edge starts on a rim");
        let pb = bs.blocks[bb]
            .rim_position(b)
            .expect("crossing edge ends on a rim");
        out.push(InterBlockEdge {
            from: (ba, pa),
            to: (bb, pb),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::gen_random;

    fn grid(w: u32, h: u32, s: (u32, u32), t: (u32, u32)) -> GridGraph {
        GridGraph::new(w, h, VertexId::new(s.0, s.1), VertexId::new(t.0, t.1)).unwrap()
    }

    #[test]
    fn rim_walks_are_clockwise_cycles() {
        let b = Block::new(2, 3, 5, 5);
        assert_eq!(b.rim().len(), 2 * (4 + 3) - 4);
        assert_eq!(b.rim()[0], VertexId::new(2, 3));
        for (i, &v) in b.rim().iter().enumerate() {
            assert_eq!(b.rim_position(v), Some(i));
            let next = b.rim()[(i + 1) % b.rim().len()];
            assert!(
                crate::grid::Dir::between(v, next).is_some(),
                "{v} -> {next}"
            );
        }
        assert_eq!(b.rim_position(VertexId::new(3, 4)), None);
        let line = Block::new(0, 0, 0, 4);
        assert_eq!(line.rim().len(), 5);
        let two = Block::new(0, 0, 1, 3);
        assert_eq!(two.rim().len(), 8);
    }

    #[test]
    fn corners_need_no_extra_cuts() {
        let bs = decompose(&grid(8, 8, (0, 0), (7, 7)), 4);
        assert_eq!(bs.x_cuts, vec![0, 4, 8]);
        assert_eq!(bs.y_cuts, vec![0, 4, 8]);
        assert_eq!(bs.len(), 4);
    }

    #[test]
    fn interior_endpoint_gets_a_cut() {
        let g = grid(8, 8, (2, 2), (7, 7));
        let bs = decompose(&g, 4);
        assert!(bs.locate_rim(g.s()).is_some());
        assert!(bs.locate_rim(g.t()).is_some());
    }

    #[test]
    fn cube_blocks_hold_n_two_thirds_vertices() {
        let g = grid(27, 27, (0, 0), (26, 26));
        assert_eq!(default_block_side(&g), 9);
        let bs = decompose(&g, 9);
        assert_eq!(bs.len(), 9);
        assert!(bs.blocks().iter().all(|b| b.vertex_count() == 81));
    }

    #[test]
    fn remainder_is_absorbed() {
        let bs = decompose(&grid(10, 3, (0, 0), (9, 2)), 4);
        assert_eq!(bs.x_cuts, vec![0, 4, 10]);
        assert_eq!(bs.y_cuts, vec![0, 3]);
    }

    #[test]
    fn whole_grid_block_is_identity() {
        let g = gen_random(5, 4, 0.6, 3).unwrap();
        let b = Block::new(0, 0, 4, 3);
        let sub = block_subgraph(&g, &b);
        assert_eq!(
            sub.edges().collect::<Vec<_>>(),
            g.edges().collect::<Vec<_>>()
        );
        let bs = BlockSet::from_cuts(vec![0, 5], vec![0, 4]);
        assert!(inter_block_edges(&g, &bs).is_empty());
    }

    #[test]
    fn dense_grid_crossing_count() {
        let g = gen_random(8, 8, 1.0, 0).unwrap();
        let bs = BlockSet::from_cuts(vec![0, 4, 8], vec![0, 4, 8]);
        assert_eq!(inter_block_edges(&g, &bs).len(), 32);
        // a 4x4 block of a full grid keeps 2 * (3*4 + 4*3) directed edges
        let sub = block_subgraph(&g, &bs.blocks()[0]);
        let direct = g
            .edges()
            .filter(|(a, b)| bs.blocks()[0].contains(*a) && bs.blocks()[0].contains(*b))
            .count();
        assert_eq!(sub.edge_count(), direct);
        assert_eq!(direct, 48);
    }

    #[test]
    fn ceil_cbrt_is_exact() {
        for n in 1..5000u64 {
            let c = ceil_cbrt(n);
            assert!(c * c * c >= n && (c - 1) * (c - 1) * (c - 1) < n, "{n}");
        }
    }
}
