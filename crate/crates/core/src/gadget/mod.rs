//! Gadget graphs: plane graphs whose edges carry level labels and an optional
//! mandatory successor edge.

mod embed;
mod transform;

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use crate::level::{Label, Level};

pub use embed::{
    check_planar, embed_exact, embed_f64, orient, rotation_system, Embedding, PlanarityViolation,
    Point, Scalar,
};
pub use transform::{
    calc_levels, check_level_properties, lowest_gap2_chord, transform, transform_with, Chord,
    LevelProperty, LevelViolation, LevelPair, TransformError, TransformOptions, TransformStats,
};

/// Gadget vertex handle. Outer vertices are `0..n_outer` (rim positions);
/// inner vertices follow in creation order.
pub type Vid = u32;
/// Gadget edge handle: index into the canonical edge list.
pub type Eid = u32;

/// Why an inner vertex exists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Created for the chord processed at `step`. `cap` lists the circle
    /// vertices of the chord's lower arc in clockwise order, endpoints
    /// included.
    Hub { step: u32, cap: Vec<Vid> },
    /// Crossing point of two straight lines, each given by its endpoints.
    Crossing {
        step: u32,
        index: u32,
        first: (Vid, Vid),
        second: (Vid, Vid),
    },
}

/// A directed gadget edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GEdge {
    pub from: Vid,
    pub to: Vid,
    /// Mandatory next edge.
    pub k: Option<Eid>,
    /// The edge whose mandatory successor is this one.
    pub kinv: Option<Eid>,
    /// Sorted, deduplicated.
    pub labels: Vec<Label>,
}

/// A gadget graph with edges in canonical `(from, to)` order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GadgetGraph {
    n_outer: usize,
    inner: Vec<Provenance>,
    edges: Vec<GEdge>,
    out_start: Vec<u32>,
}

impl GadgetGraph {
    /// Assembles a gadget graph; `edges` may be in any order and `k` refers
    /// to positions in the given list.
    pub fn from_parts(n_outer: usize, inner: Vec<Provenance>, mut edges: Vec<GEdge>) -> Self {
        let n = n_outer + inner.len();
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&i| (edges[i].from, edges[i].to, i));
        let mut new_id = vec![0u32; edges.len()];
        for (pos, &old) in order.iter().enumerate() {
            new_id[old] = pos as u32;
        }
        for e in &mut edges {
            e.k = e.k.map(|k| new_id[k as usize]);
            e.labels.sort();
            e.labels.dedup();
        }
        let mut sorted: Vec<GEdge> = order.iter().map(|&i| edges[i].clone()).collect();
        for e in &mut sorted {
            e.kinv = None;
        }
        for i in 0..sorted.len() {
            if let Some(k) = sorted[i].k {
                let prev = sorted[k as usize].kinv.replace(i as Eid);
                assert!(prev.is_none(), "path function is not injective");
                assert_eq!(
                    sorted[i].to, sorted[k as usize].from,
                    "successor edge does not continue the path"
                );
            }
        }
        let mut out_start = vec![0u32; n + 1];
        for e in &sorted {
            assert!(
                (e.from as usize) < n && (e.to as usize) < n,
                "edge endpoint out of range"
            );
            out_start[e.from as usize + 1] += 1;
        }
        for v in 0..n {
            out_start[v + 1] += out_start[v];
        }
        GadgetGraph {
            n_outer,
            inner,
            edges: sorted,
            out_start,
        }
    }

    pub fn n_outer(&self) -> usize {
        self.n_outer
    }

    pub fn n_inner(&self) -> usize {
        self.inner.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.n_outer + self.inner.len()
    }

    pub fn inner(&self) -> &[Provenance] {
        &self.inner
    }

    pub fn provenance(&self, v: Vid) -> Option<&Provenance> {
        (v as usize)
            .checked_sub(self.n_outer)
            .map(|i| &self.inner[i])
    }

    pub fn edges(&self) -> &[GEdge] {
        &self.edges
    }

    pub fn edge(&self, e: Eid) -> &GEdge {
        &self.edges[e as usize]
    }

    /// Ids of the edges leaving `v`.
    pub fn out_edges(&self, v: Vid) -> std::ops::Range<Eid> {
        self.out_start[v as usize]..self.out_start[v as usize + 1]
    }

    pub fn label_count(&self) -> usize {
        self.edges.iter().map(|e| e.labels.len()).sum()
    }

    /// Words needed to hold this graph: per vertex one offset, per edge
    /// endpoints, successor links and a length, per label two levels.
    pub fn words(&self) -> i64 {
        (self.vertex_count() + 1 + 5 * self.edges.len() + 4 * self.label_count()) as i64
    }

    /// Structural fingerprint used to compare recomputations.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    /// Debug dump: header, one line per inner vertex with its provenance and
    /// coordinates, then one `ge` line per edge.
    pub fn dump(&self) -> String {
        let emb = embed_exact(self);
        let mut out = format!("gadget {} {}\n", self.n_outer, self.n_inner());
        for v in 0..self.vertex_count() as Vid {
            let tag = match self.provenance(v) {
                None => "outer".to_string(),
                Some(Provenance::Hub { step, .. }) => format!("hub step={step}"),
                Some(Provenance::Crossing { step, index, .. }) => {
                    format!("cross step={step} index={index}")
                }
            };
            let p = emb.point(v);
            writeln!(out, "gv {v} {tag} x={} y={}", p.x, p.y).unwrap();
        }
        for e in &self.edges {
            let k = e.k.map_or("-".to_string(), |k| k.to_string());
            let labels: Vec<String> = e
                .labels
                .iter()
                .map(|l| fmt_label(*l, self.n_outer))
                .collect();
            writeln!(out, "ge {} {} K={k} L={}", e.from, e.to, labels.join(",")).unwrap();
        }
        out
    }
}

fn fmt_level(l: Level, n: usize) -> String {
    match l {
        Level::Unreached => "unreached".into(),
        Level::Infinite => "inf".into(),
        Level::Finite { int, tie } => format!("{}/{n}", int * n as i64 + i64::from(tie)),
    }
}

fn fmt_label(l: Label, n: usize) -> String {
    format!("{}->{}", fmt_level(l.input, n), fmt_level(l.output, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_remaps_successors() {
        let edges = vec![
            GEdge {
                from: 2,
                to: 1,
                k: None,
                kinv: None,
                labels: vec![Label::OPEN],
            },
            GEdge {
                from: 0,
                to: 2,
                k: Some(0),
                kinv: None,
                labels: vec![Label::OPEN, Label::OPEN],
            },
        ];
        let g = GadgetGraph::from_parts(
            2,
            vec![Provenance::Hub {
                step: 0,
                cap: vec![],
            }],
            edges,
        );
        assert_eq!(g.edge(0).from, 0);
        assert_eq!(g.edge(0).k, Some(1));
        assert_eq!(g.edge(1).kinv, Some(0));
        assert_eq!(g.edge(0).labels.len(), 1);
        assert_eq!(g.out_edges(2), 1..2);
        assert_eq!(g.out_edges(1), 1..1);
    }
}
