//! Balanced vertex separators of plane graphs and the recursive
//! reachability solvers built on them.

mod cycle;
mod reach;

use std::collections::VecDeque;

use crate::plane::PlanarView;

pub use reach::{
    reach_boolean, reach_boolean_with_stats, reach_leveled, EdgeInfo, LeveledView, ReachConfig,
    ReachStats, SlotKey,
};

/// How separators are found.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// The best breadth-first layer; falls back to the cycle method when
    /// that layer is larger than `4 sqrt(n)`.
    #[default]
    BfsLayer,
    /// Breadth-first layers plus a fundamental cycle of a triangulation.
    FundamentalCycle,
    /// Exhaustive search for a smallest separator; at most 14 vertices.
    Brute,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bfs-layer" => Ok(Strategy::BfsLayer),
            "fundamental-cycle" => Ok(Strategy::FundamentalCycle),
            "brute" => Ok(Strategy::Brute),
            _ => Err(format!("unknown separator strategy `{s}`")),
        }
    }
}

/// Largest part allowed, as a fraction `2/3` of the vertex count.
pub fn balance_limit(n: usize) -> usize {
    2 * n / 3
}

/// Separator size the cycle method guarantees.
pub fn size_limit(n: usize) -> f64 {
    4.0 * (n as f64).sqrt()
}

/// A vertex separator of an induced subgraph: no edge joins the two parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub s: Vec<u32>,
    pub parts: [Vec<u32>; 2],
    /// The rotation system turned out not to be planar and a layer
    /// separator was used instead of the requested method.
    pub fell_back: bool,
}

impl Separator {
    pub fn max_part(&self) -> usize {
        self.parts[0].len().max(self.parts[1].len())
    }
}

/// The subgraph induced by a sorted vertex list, relabelled `0..len`.
pub(crate) struct Local {
    pub ids: Vec<u32>,
    pub adj: Vec<Vec<u32>>,
}

impl Local {
    pub fn new<V: PlanarView + ?Sized>(view: &V, w: &[u32]) -> Self {
        debug_assert!(
            w.windows(2).all(|p| p[0] < p[1]),
            "vertex list must be sorted"
        );
        let mut buf = Vec::new();
        let adj = w
            .iter()
            .map(|&v| {
                buf.clear();
                view.neighbors(v, &mut buf);
                buf.iter()
                    .filter_map(|u| w.binary_search(u).ok().map(|i| i as u32))
                    .collect()
            })
            .collect();
        Local {
            ids: w.to_vec(),
            adj,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// Breadth-first levels from `root` among vertices not `blocked`;
    /// unreached vertices get `u32::MAX`.
    pub fn bfs(&self, root: u32, blocked: &[bool]) -> (Vec<u32>, Vec<u32>) {
        let mut level = vec![u32::MAX; self.len()];
        let mut order = Vec::new();
        let mut q = VecDeque::from([root]);
        level[root as usize] = 0;
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &u in &self.adj[v as usize] {
                if level[u as usize] == u32::MAX && !blocked[u as usize] {
                    level[u as usize] = level[v as usize] + 1;
                    q.push_back(u);
                }
            }
        }
        (level, order)
    }

    /// Connected components after removing `blocked`, each sorted.
    pub fn components(&self, blocked: &[bool]) -> Vec<Vec<u32>> {
        let mut seen = blocked.to_vec();
        let mut comps = Vec::new();
        for r in 0..self.len() as u32 {
            if seen[r as usize] {
                continue;
            }
            let (_, mut order) = self.bfs(r, &seen);
            for &v in &order {
                seen[v as usize] = true;
            }
            order.sort_unstable();
            comps.push(order);
        }
        comps
    }
}

/// Splits pieces that share no edge into two sides, largest first onto the
/// lighter side. If no piece exceeds two thirds of the total, neither side
/// does.
fn group(mut pieces: Vec<Vec<u32>>) -> [Vec<u32>; 2] {
    pieces.sort_by_key(|p| std::cmp::Reverse(p.len()));
    let mut sides: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
    for p in pieces {
        let light = usize::from(sides[1].len() < sides[0].len());
        sides[light].extend(p);
    }
    sides
}

/// Separator of a connected local component: a vertex set and the pieces
/// left after removing it.
pub(crate) struct Split {
    pub s: Vec<u32>,
    pub pieces: Vec<Vec<u32>>,
}

/// The thinnest breadth-first layer leaving both sides within balance,
/// searched from a far-away root.
fn bfs_layer(local: &Local, comp: &[u32]) -> Split {
    let none = vec![false; local.len()];
    let (_, order) = local.bfs(comp[0], &none);
    let root = *order.last().unwrap_or(&comp[0]);
    let (level, order) = local.bfs(root, &none);
    let depth = level[*order.last().unwrap() as usize] as usize;
    let mut count = vec![0usize; depth + 1];
    for &v in &order {
        count[level[v as usize] as usize] += 1;
    }
    let c = comp.len();
    // thinnest layer first, then the most even split
    let mut best: Option<((usize, usize), usize)> = None;
    let mut below = 0;
    for (l, &size) in count.iter().enumerate() {
        let above = c - below - size;
        let key = (size, below.max(above));
        if below.max(above) <= balance_limit(c) && best.is_none_or(|(k, _)| key < k) {
            best = Some((key, l));
        }
        below += size;
    }
    let cut = best.map_or(depth / 2, |(_, l)| l);
    let mut s = Vec::new();
    let mut pieces = vec![Vec::new(), Vec::new()];
    for &v in &order {
        let l = level[v as usize] as usize;
        match l.cmp(&cut) {
            std::cmp::Ordering::Less => pieces[0].push(v),
            std::cmp::Ordering::Equal => s.push(v),
            std::cmp::Ordering::Greater => pieces[1].push(v),
        }
    }
    Split { s, pieces }
}

/// Smallest separator by exhaustive search.
fn brute(local: &Local, comp: &[u32]) -> Split {
    assert!(
        comp.len() <= 14,
        "exhaustive separator search is limited to 14 vertices"
    );
    let c = comp.len();
    let mut best: Option<(u32, Vec<Vec<u32>>)> = None;
    for mask in 0u32..(1 << c) {
        if best
            .as_ref()
            .is_some_and(|(m, _)| mask.count_ones() >= m.count_ones())
        {
            continue;
        }
        let mut blocked = vec![true; local.len()];
        for (i, &v) in comp.iter().enumerate() {
            blocked[v as usize] = mask >> i & 1 == 1;
        }
        let pieces = local.components(&blocked);
        if pieces.iter().all(|p| p.len() <= balance_limit(c)) {
            let sides = group(pieces.clone());
            if sides[0].len().max(sides[1].len()) <= balance_limit(c) {
                best = Some((mask, pieces));
            }
        }
    }
    let (mask, pieces) = best.expect("removing every vertex always separates");
    let s = comp
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect();
    Split { s, pieces }
}

fn split_component(
    local: &Local,
    comp: &[u32],
    strategy: Strategy,
    rotation: bool,
) -> (Split, bool) {
    let c = comp.len();
    match strategy {
        Strategy::Brute => (brute(local, comp), false),
        Strategy::BfsLayer => {
            let layer = bfs_layer(local, comp);
            if (layer.s.len() as f64) <= size_limit(c) || !rotation {
                return (layer, false);
            }
            match cycle::fundamental_cycle(local, comp) {
                Some(cyc) if cyc.s.len() < layer.s.len() => (cyc, false),
                Some(_) => (layer, false),
                None => (layer, true),
            }
        }
        Strategy::FundamentalCycle => {
            let layer = bfs_layer(local, comp);
            if !rotation {
                return (layer, true);
            }
            match cycle::fundamental_cycle(local, comp) {
                Some(cyc) if cyc.s.len() <= layer.s.len() => (cyc, false),
                Some(_) => (layer, false),
                None => (layer, true),
            }
        }
    }
}

/// Separator of the subgraph induced by the sorted vertex list `w`.
/// Disconnected inputs are handled by splitting only the largest component
/// when it is too big and distributing the others.
pub fn find_separator<V: PlanarView + ?Sized>(
    view: &V,
    w: &[u32],
    strategy: Strategy,
) -> Separator {
    find_separator_checked(view, w, strategy, false).0
}

/// [`find_separator`], optionally validated against the adjacency read
/// while searching, which saves a second pass over the view.
pub fn find_separator_checked<V: PlanarView + ?Sized>(
    view: &V,
    w: &[u32],
    strategy: Strategy,
    validate: bool,
) -> (Separator, Result<(), String>) {
    let local = Local::new(view, w);
    let sep = separate_local(&local, w, strategy, view.has_rotation());
    let check = if validate {
        validate_local(&local, &sep)
    } else {
        Ok(())
    };
    (sep, check)
}

fn validate_local(local: &Local, sep: &Separator) -> Result<(), String> {
    let mut side = vec![u8::MAX; local.len()];
    for (k, part) in [&sep.s, &sep.parts[0], &sep.parts[1]]
        .into_iter()
        .enumerate()
    {
        for v in part {
            let i = local
                .ids
                .binary_search(v)
                .map_err(|_| format!("vertex {v} is not in the set"))?;
            if side[i] != u8::MAX {
                return Err(format!("vertex {v} is listed twice"));
            }
            side[i] = k as u8;
        }
    }
    if side.contains(&u8::MAX) {
        return Err("separator and parts do not cover the vertex set".into());
    }
    for (i, nb) in local.adj.iter().enumerate() {
        if side[i] == 1 {
            if let Some(&j) = nb.iter().find(|&&j| side[j as usize] == 2) {
                return Err(format!(
                    "edge {} - {} joins the two parts",
                    local.ids[i], local.ids[j as usize]
                ));
            }
        }
    }
    Ok(())
}

fn separate_local(local: &Local, w: &[u32], strategy: Strategy, rotation: bool) -> Separator {
    let mut comps = local.components(&vec![false; local.len()]);
    comps.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut s = Vec::new();
    let mut fell_back = false;
    if comps
        .first()
        .is_some_and(|c| c.len() > balance_limit(w.len()))
    {
        let big = comps.remove(0);
        let (split, fb) = split_component(local, &big, strategy, rotation);
        fell_back = fb;
        s = split.s;
        comps.extend(split.pieces);
    }
    let sides = group(comps);
    let global = |v: Vec<u32>| {
        let mut g: Vec<u32> = v.into_iter().map(|i| local.ids[i as usize]).collect();
        g.sort_unstable();
        g
    };
    let [a, b] = sides;
    Separator {
        s: global(s),
        parts: [global(a), global(b)],
        fell_back,
    }
}

/// Checks that a separator partitions `w` and that no edge joins its two
/// parts.
pub fn validate_separator<V: PlanarView + ?Sized>(
    view: &V,
    w: &[u32],
    sep: &Separator,
) -> Result<(), String> {
    let mut all: Vec<u32> = sep
        .s
        .iter()
        .chain(&sep.parts[0])
        .chain(&sep.parts[1])
        .copied()
        .collect();
    all.sort_unstable();
    if all != w {
        return Err("separator and parts do not partition the vertex set".into());
    }
    let mut buf = Vec::new();
    for &v in &sep.parts[0] {
        buf.clear();
        view.neighbors(v, &mut buf);
        if let Some(u) = buf.iter().find(|u| sep.parts[1].binary_search(u).is_ok()) {
            return Err(format!("edge {v} - {u} joins the two parts"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::PlaneGraph;

    fn path(n: u32) -> PlaneGraph {
        let adj: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                [v.checked_sub(1), (v + 1 < n).then_some(v + 1)]
                    .into_iter()
                    .flatten()
                    .collect()
            })
            .collect();
        PlaneGraph::from_parts(adj.clone(), adj)
    }

    #[test]
    fn path_splits_in_the_middle() {
        let g = path(9);
        let w: Vec<u32> = (0..9).collect();
        for strategy in [
            Strategy::BfsLayer,
            Strategy::FundamentalCycle,
            Strategy::Brute,
        ] {
            let sep = find_separator(&g, &w, strategy);
            assert_eq!(sep.s.len(), 1, "{strategy:?}");
            if strategy != Strategy::Brute {
                assert_eq!(sep.s, vec![4]);
                assert_eq!(sep.max_part(), 4);
            }
            validate_separator(&g, &w, &sep).unwrap();
        }
    }

    #[test]
    fn small_components_need_no_separator() {
        let adj = vec![vec![1], vec![0], vec![3], vec![2], vec![]];
        let g = PlaneGraph::from_parts(adj.clone(), adj);
        let w: Vec<u32> = (0..5).collect();
        let sep = find_separator(&g, &w, Strategy::BfsLayer);
        assert!(sep.s.is_empty());
        assert!(sep.max_part() <= balance_limit(5));
        validate_separator(&g, &w, &sep).unwrap();
    }

    fn dense(k: u32) -> PlaneGraph {
        PlaneGraph::from_grid(&crate::grid::gen_random(k, k, 1.0, 0).unwrap())
    }

    #[test]
    fn cycle_separators_of_dense_grids_are_small() {
        for k in 5..=12 {
            let g = dense(k);
            let w: Vec<u32> = (0..k * k).collect();
            let sep = find_separator(&g, &w, Strategy::FundamentalCycle);
            assert!(!sep.fell_back);
            assert!(sep.s.len() <= 4 * k as usize, "k={k} size {}", sep.s.len());
            assert!(sep.max_part() <= balance_limit(w.len()));
            validate_separator(&g, &w, &sep).unwrap();
        }
    }

    #[test]
    fn cycle_method_splits_a_heavy_middle() {
        // An apex above a path of 100 vertices: two layers, the second too
        // heavy, so only a cycle through the triangulated outer face helps.
        let m = 100u32;
        let mut rot: Vec<Vec<u32>> = vec![(1..=m).rev().collect()];
        for i in 1..=m {
            let mut r = vec![0];
            if i < m {
                r.push(i + 1);
            }
            if i > 1 {
                r.push(i - 1);
            }
            rot.push(r);
        }
        let g = PlaneGraph::from_parts(rot.clone(), rot);
        let w: Vec<u32> = (0..=m).collect();
        let local = Local::new(&g, &w);
        let split = cycle::fundamental_cycle(&local, &w).expect("fan rotation is planar");
        let n = w.len();
        assert!(split.pieces.iter().all(|p| p.len() <= balance_limit(n)));
        assert!(split.s.len() <= 4, "{:?}", split.s);
        let total: usize = split.s.len() + split.pieces.iter().map(Vec::len).sum::<usize>();
        assert_eq!(total, n);
        let sep = find_separator(&g, &w, Strategy::FundamentalCycle);
        validate_separator(&g, &w, &sep).unwrap();
        assert!(sep.max_part() <= balance_limit(n));
    }

    #[test]
    fn separators_of_random_grids_are_valid() {
        for seed in 0..60 {
            let gg = crate::grid::gen_random(7, 6, 0.5, seed).unwrap();
            let g = PlaneGraph::from_grid(&gg);
            let w: Vec<u32> = (0..42).collect();
            for strategy in [Strategy::BfsLayer, Strategy::FundamentalCycle] {
                let sep = find_separator(&g, &w, strategy);
                validate_separator(&g, &w, &sep).unwrap();
                assert!(
                    sep.max_part() <= balance_limit(42),
                    "seed {seed} {strategy:?}"
                );
            }
            let small: Vec<u32> = (0..12).collect();
            let sep = find_separator(&g, &small, Strategy::Brute);
            validate_separator(&g, &small, &sep).unwrap();
            assert!(sep.max_part() <= balance_limit(12));
        }
    }

    #[test]
    fn strategy_names_parse() {
        assert_eq!(
            "fundamental-cycle".parse::<Strategy>().unwrap(),
            Strategy::FundamentalCycle
        );
        assert!("magic".parse::<Strategy>().is_err());
    }
}
