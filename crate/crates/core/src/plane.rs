//! Plane graphs seen by the separator code: undirected neighbourhoods in
//! clockwise order (a rotation system) plus directed arcs for reachability.

use crate::gadget::{embed_f64, rotation_system, GadgetGraph};
use crate::grid::{Dir, GridGraph};

/// Undirected view of an embedded graph.
pub trait PlanarView {
    fn vertex_count(&self) -> usize;
    /// Appends the distinct neighbours of `v`, clockwise when
    /// [`PlanarView::has_rotation`] holds.
    fn neighbors(&self, v: u32, out: &mut Vec<u32>);
    /// Whether neighbour lists follow a planar rotation system. Without one
    /// only layer separators are available.
    fn has_rotation(&self) -> bool {
        true
    }
}

/// A directed plane graph held in memory.
#[derive(Debug, Clone)]
pub struct PlaneGraph {
    out: Vec<Vec<u32>>,
    rot: Vec<Vec<u32>>,
}

impl PlaneGraph {
    /// Grid vertices keep their row-major index; a pair of neighbours is
    /// adjacent when an edge runs either way.
    pub fn from_grid(g: &GridGraph) -> Self {
        let n = g.vertex_count();
        let mut out = vec![Vec::new(); n];
        let mut rot = vec![Vec::new(); n];
        for i in 0..n {
            let v = g.vertex(i);
            for d in Dir::ALL {
                let Some(w) = g.step(v, d) else { continue };
                let j = g.index(w) as u32;
                if g.has_edge(v, d) {
                    out[i].push(j);
                }
                if g.has_edge(v, d) || g.has_edge(w, d.opposite()) {
                    rot[i].push(j);
                }
            }
        }
        PlaneGraph { out, rot }
    }

    /// The graph drawn by the gadget's own embedding.
    pub fn from_gadget(g: &GadgetGraph) -> Self {
        let rot = rotation_system(g, &embed_f64(g));
        let mut out = vec![Vec::new(); g.vertex_count()];
        for e in g.edges() {
            out[e.from as usize].push(e.to);
        }
        for list in &mut out {
            list.dedup();
        }
        PlaneGraph { out, rot }
    }

    /// Builds a graph from arcs and an explicit rotation system.
    pub fn from_parts(out: Vec<Vec<u32>>, rot: Vec<Vec<u32>>) -> Self {
        assert_eq!(out.len(), rot.len());
        PlaneGraph { out, rot }
    }

    pub fn successors(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }
}

impl PlanarView for PlaneGraph {
    fn vertex_count(&self) -> usize {
        self.out.len()
    }

    fn neighbors(&self, v: u32, out: &mut Vec<u32>) {
        out.extend_from_slice(&self.rot[v as usize]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::VertexId;

    #[test]
    fn grid_rotation_is_clockwise() {
        let mut g = GridGraph::new(3, 3, VertexId::new(0, 0), VertexId::new(2, 2)).unwrap();
        let c = VertexId::new(1, 1);
        for d in Dir::ALL {
            g.add_edge(c, g.step(c, d).unwrap()).unwrap();
        }
        let p = PlaneGraph::from_grid(&g);
        let mut nb = Vec::new();
        p.neighbors(4, &mut nb);
        assert_eq!(nb, vec![1, 5, 7, 3]);
        assert_eq!(p.successors(4).len(), 4);
        nb.clear();
        p.neighbors(1, &mut nb);
        assert_eq!(nb, vec![4]);
        assert!(p.successors(1).is_empty());
    }
}
