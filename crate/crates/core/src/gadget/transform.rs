//! Circle graph to plane gadget graph.
//!
//! The circle part `U` starts as the whole rim. Each step picks a chord whose
//! shorter arc has at least two interior vertices and no such chord below it,
//! routes every edge crossing the chord through a fresh hub vertex, assigns
//! level labels to the hub edges so rim reachability is unchanged, subdivides
//! the remaining crossings under the chord, and replaces the arc by the hub.
//! When only short chords remain the rest of `U` is subdivided the same way.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{GEdge, GadgetGraph, Provenance, Vid};
use crate::circle::CircleGraph;
use crate::level::{Label, Level};
use crate::stats;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransformOptions {
    /// Leave out the shift that separates in-levels from earlier out-levels.
    /// Only useful to show that the level checks catch the omission.
    pub skip_delta: bool,
}

/// The level properties checked after every level computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelProperty {
    /// A later vertex's in-level exceeds every earlier vertex's out-level.
    InOverOut,
    /// Temporary and final levels increase with the index, and the shift
    /// keeps every strict in/out comparison between a later and an earlier
    /// vertex.
    Increasing,
    /// A temporary in-level at least a temporary out-level stays so.
    Magnitude,
}

impl LevelProperty {
    pub fn name(self) -> &'static str {
        match self {
            LevelProperty::InOverOut => "in-over-out",
            LevelProperty::Increasing => "increasing-levels",
            LevelProperty::Magnitude => "magnitude",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("level property {} failed at step {step}: {detail}", kind.name())]
pub struct LevelViolation {
    pub kind: LevelProperty,
    pub step: u32,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Levels(#[from] LevelViolation),
    #[error("gadget has {vertices} vertices, more than 6 * {n}")]
    TooLarge { vertices: usize, n: usize },
    #[error("transform invariant broken: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransformStats {
    /// Number of processed chords.
    pub steps: u32,
    /// Gap of the chord processed at each step.
    pub gaps: Vec<u32>,
    /// Hub labels that had no edge to sit on.
    pub orphan_labels: u32,
    /// Crossing vertices created after the last chord was processed.
    pub final_crossings: u32,
}

impl TransformStats {
    /// Steps of the transformation, counting the closing planarization of
    /// the leftover short chords as one more step when it adds vertices.
    pub fn t_final(&self) -> u32 {
        self.steps + u32::from(self.final_crossings > 0)
    }
}

/// A chord of the circle part together with its lower arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chord {
    pub tail: Vid,
    pub head: Vid,
    /// Interior vertex count of the lower arc.
    pub gap: usize,
    /// Lower arc in clockwise order, both chord endpoints included.
    pub cap: Vec<Vid>,
}

/// Picks the chord with the fewest interior vertices on its shorter arc among
/// those with at least two, breaking ties by tail then head position in
/// `cycle`. A minimum-gap chord has no other such chord under it. The lower
/// arc is the shorter one; on a tie it runs clockwise from the tail.
pub fn lowest_gap2_chord(cycle: &[Vid], edges: &[(Vid, Vid)]) -> Option<Chord> {
    let m = cycle.len();
    let pos = position_map(cycle);
    let mut best: Option<(usize, usize, usize)> = None;
    for &(a, b) in edges {
        let (i, j) = (pos[a as usize], pos[b as usize]);
        let cw = (j + m - i) % m;
        let d = cw.min(m - cw);
        if d >= 3 {
            let key = (d - 1, i, j);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    let (gap, i, j) = best?;
    let cw = (j + m - i) % m;
    let (start, len) = if cw <= m - cw { (i, cw) } else { (j, m - cw) };
    Some(Chord {
        tail: cycle[i],
        head: cycle[j],
        gap,
        cap: (0..=len).map(|s| cycle[(start + s) % m]).collect(),
    })
}

fn position_map(cycle: &[Vid]) -> Vec<usize> {
    let top = cycle.iter().copied().max().map_or(0, |v| v as usize + 1);
    let mut pos = vec![usize::MAX; top];
    for (i, &v) in cycle.iter().enumerate() {
        pos[v as usize] = i;
    }
    pos
}

/// In- and out-level of one vertex; `None` where the defining set is empty.
pub type LevelPair = (Option<Level>, Option<Level>);

/// Levels for the lower-side vertices `tl` against the upper-side vertices
/// `tu`, both ordered so that the index grows towards the chord's tail.
/// Returns the temporary levels and the shifted final ones.
pub fn calc_levels(
    tl: &[usize],
    tu: &[usize],
    reach: impl Fn(usize, usize) -> bool,
    skip_delta: bool,
) -> (Vec<LevelPair>, Vec<LevelPair>) {
    let temp: Vec<LevelPair> = tl
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let tie = i as u32 + 1;
            let up = tu
                .iter()
                .enumerate()
                .filter(|&(_, &u)| reach(v, u))
                .map(|(j, _)| j as i64 + 1)
                .max();
            let down = tu
                .iter()
                .enumerate()
                .filter(|&(_, &u)| reach(u, v))
                .map(|(j, _)| j as i64 + 1)
                .min();
            (
                up.map(|j| Level::finite(j, tie)),
                down.map(|j| Level::finite(j, tie)),
            )
        })
        .collect();
    let mut fin = temp.clone();
    if !skip_delta {
        for i in 0..fin.len() {
            let earlier = fin[..i]
                .iter()
                .filter_map(|p| p.1.and_then(Level::int_part))
                .max();
            let delta = match (earlier, fin[i].0.and_then(Level::int_part)) {
                (Some(e), Some(own)) => (e - own).max(0),
                _ => 0,
            };
            if delta > 0 {
                for p in &mut fin[i..] {
                    p.0 = p.0.map(|l| l.shifted(delta));
                    p.1 = p.1.map(|l| l.shifted(delta));
                }
            }
        }
    }
    (temp, fin)
}

/// Checks the level properties on one level computation.
pub fn check_level_properties(
    temp: &[LevelPair],
    fin: &[LevelPair],
    step: u32,
) -> Result<(), LevelViolation> {
    let fail = |kind, detail: String| Err(LevelViolation { kind, step, detail });
    let get = |v: &[LevelPair], i: usize, io: usize| if io == 0 { v[i].0 } else { v[i].1 };
    let len = temp.len();
    for i in 0..len {
        for j in 0..i {
            if let (Some(a), Some(b)) = (fin[i].0, fin[j].1) {
                if a <= b {
                    return fail(
                        LevelProperty::InOverOut,
                        format!("in({}) = {a} <= out({}) = {b}", i + 1, j + 1),
                    );
                }
            }
        }
    }
    for i in 0..len {
        for j in 0..i {
            for io in 0..2 {
                for v in [temp, fin] {
                    if let (Some(a), Some(b)) = (get(v, i, io), get(v, j, io)) {
                        if a <= b {
                            return fail(
                                LevelProperty::Increasing,
                                format!("index {} not above index {}", i + 1, j + 1),
                            );
                        }
                    }
                }
                for io2 in 0..2 {
                    let (ta, tb) = (get(temp, i, io), get(temp, j, io2));
                    let (fa, fb) = (get(fin, i, io), get(fin, j, io2));
                    if let (Some(ta), Some(tb), Some(fa), Some(fb)) = (ta, tb, fa, fb) {
                        if ta > tb && fa <= fb {
                            return fail(
                                LevelProperty::Increasing,
                                format!(
                                    "shift reversed a comparison between {} and {}",
                                    i + 1,
                                    j + 1
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    for p in 0..len {
        for q in 0..len {
            if let (Some(ti), Some(to), Some(fi), Some(fo)) =
                (temp[p].0, temp[q].1, fin[p].0, fin[q].1)
            {
                if ti >= to && fi < fo {
                    return fail(
                        LevelProperty::Magnitude,
                        format!("in({}) fell below out({})", p + 1, q + 1),
                    );
                }
            }
        }
    }
    Ok(())
}

struct WEdge {
    from: Vid,
    to: Vid,
    k: Option<usize>,
    labels: Vec<Label>,
}

struct State<'c> {
    c: &'c CircleGraph,
    n: usize,
    opts: TransformOptions,
    inner: Vec<Provenance>,
    edges: Vec<WEdge>,
    circle: Vec<usize>,
    output: Vec<usize>,
    parent: Vec<Vid>,
    lin: Vec<Option<Level>>,
    lout: Vec<Option<Level>>,
    u: Vec<Vid>,
    step: u32,
    stats: TransformStats,
    crossings: u32,
}

/// Transforms a circle graph; panics if an internal check fails.
pub fn transform(c: &CircleGraph) -> GadgetGraph {
    match transform_with(c, TransformOptions::default()) {
        Ok((g, _)) => g,
        Err(e) => panic!("{e}"),
    }
}

/// Transforms a circle graph, reporting check failures as errors.
pub fn transform_with(
    c: &CircleGraph,
    opts: TransformOptions,
) -> Result<(GadgetGraph, TransformStats), TransformError> {
    let n = c.n();
    let mut st = State {
        c,
        n,
        opts,
        inner: Vec::new(),
        edges: Vec::new(),
        circle: Vec::new(),
        output: Vec::new(),
        parent: (0..n as Vid).collect(),
        lin: vec![Some(Level::ZERO); n],
        lout: vec![Some(Level::Infinite); n],
        u: (0..n as Vid).collect(),
        step: 0,
        stats: TransformStats::default(),
        crossings: 0,
    };
    for (a, b) in c.edges() {
        let e = st.push_edge(a as Vid, b as Vid, None, vec![Label::OPEN]);
        st.circle.push(e);
    }
    loop {
        let pairs: Vec<(Vid, Vid)> = st
            .circle
            .iter()
            .map(|&e| (st.edges[e].from, st.edges[e].to))
            .collect();
        let Some(chord) = lowest_gap2_chord(&st.u, &pairs) else {
            break;
        };
        let before = st.u.len();
        st.process(chord)?;
        if st.u.len() >= before {
            return Err(TransformError::Internal(
                "circle part did not shrink".into(),
            ));
        }
        st.step += 1;
    }
    st.finish()?;
    st.stats.steps = st.step;
    let vertices = n + st.inner.len();
    if vertices > 6 * n.max(1) {
        return Err(TransformError::TooLarge { vertices, n });
    }
    Ok((st.assemble(), st.stats))
}

impl State<'_> {
    fn push_edge(&mut self, from: Vid, to: Vid, k: Option<usize>, labels: Vec<Label>) -> usize {
        self.edges.push(WEdge {
            from,
            to,
            k,
            labels,
        });
        self.edges.len() - 1
    }

    fn vertex_total(&self) -> usize {
        self.n + self.inner.len()
    }

    fn new_vertex(&mut self, p: Provenance) -> Vid {
        self.inner.push(p);
        (self.vertex_total() - 1) as Vid
    }

    fn new_crossing(&mut self, first: (Vid, Vid), second: (Vid, Vid)) -> Vid {
        let index = self.crossings;
        self.crossings += 1;
        self.new_vertex(Provenance::Crossing {
            step: self.step,
            index,
            first,
            second,
        })
    }

    /// Rim positions reached by walking from `from` in direction `dir` until
    /// a rim vertex whose parent is `stop`, keeping those accepted by `keep`.
    fn walk(&self, from: usize, dir: isize, stop: Vid, keep: impl Fn(Vid) -> bool) -> Vec<usize> {
        let n = self.n as isize;
        let mut out = Vec::new();
        let mut r = from as isize;
        for _ in 0..n {
            r = (r + dir).rem_euclid(n);
            let p = self.parent[r as usize];
            if p == stop {
                break;
            }
            if keep(p) {
                out.push(r as usize);
            }
        }
        out
    }

    fn process(&mut self, chord: Chord) -> Result<(), TransformError> {
        let cap = chord.cap.clone();
        let k = cap.len() - 2;
        let hub = self.new_vertex(Provenance::Hub {
            step: self.step,
            cap: cap.clone(),
        });
        let nv = self.vertex_total();
        let mut in_lower = vec![false; nv];
        let mut cap_pos = vec![usize::MAX; nv];
        for (i, &a) in cap.iter().enumerate() {
            cap_pos[a as usize] = i;
            if (1..=k).contains(&i) {
                in_lower[a as usize] = true;
            }
        }

        let mut crossing = Vec::new();
        let mut cap_edges = Vec::new();
        let mut rest = Vec::new();
        for &ei in &self.circle {
            let e = &self.edges[ei];
            if in_lower[e.from as usize] || in_lower[e.to as usize] {
                if cap_pos[e.from as usize] != usize::MAX && cap_pos[e.to as usize] != usize::MAX {
                    cap_edges.push(ei);
                } else {
                    crossing.push(ei);
                }
            } else {
                rest.push(ei);
            }
        }
        let mut s_low = vec![false; nv];
        let mut s_up = vec![false; nv];
        for &ei in &crossing {
            for v in [self.edges[ei].from, self.edges[ei].to] {
                if in_lower[v as usize] {
                    s_low[v as usize] = true;
                } else {
                    s_up[v as usize] = true;
                }
            }
        }

        // Order both sides from the head's rim vertices towards the tail's.
        let y0 = (0..self.n)
            .find(|&r| self.parent[r] == chord.head)
            .ok_or_else(|| TransformError::Internal("chord head has no rim vertex".into()))?;
        let down: isize = if chord.head == cap[0] { 1 } else { -1 };
        let tl = self.walk(y0, down, chord.tail, |p| s_low[p as usize]);
        let tu = self.walk(y0, -down, chord.tail, |p| s_up[p as usize]);
        let expected = (0..self.n)
            .filter(|&r| s_low[self.parent[r] as usize])
            .count();
        if tl.len() != expected {
            return Err(TransformError::Internal(
                "lower rim vertices are not contiguous".into(),
            ));
        }

        let c = self.c;
        let (temp, fin) = calc_levels(&tl, &tu, |a, b| c.has_edge(a, b), self.opts.skip_delta);
        let checked = check_level_properties(&temp, &fin, self.step);
        stats::record_level_check(checked.is_ok());
        checked?;
        let mut new_in = vec![None; self.n];
        let mut new_out = vec![None; self.n];
        for (i, &r) in tl.iter().enumerate() {
            new_in[r] = fin[i].0;
            new_out[r] = fin[i].1;
        }

        // Hub edges, one per endpoint side of each crossing edge.
        let mut hub_labels: BTreeMap<(Vid, Vid), Vec<Label>> = BTreeMap::new();
        for &ei in &crossing {
            let e = &self.edges[ei];
            hub_labels.entry((e.from, hub)).or_default();
            hub_labels.entry((hub, e.to)).or_default();
        }
        let mut children: BTreeMap<Vid, Vec<usize>> = BTreeMap::new();
        for r in 0..self.n {
            let p = self.parent[r];
            if s_low[p as usize] || s_up[p as usize] {
                children.entry(p).or_default().push(r);
            }
        }
        let mut orphans = 0;
        let mut give = |key: (Vid, Vid), label: Label| match hub_labels.get_mut(&key) {
            Some(ls) => ls.push(label),
            None => orphans += 1,
        };
        for (&u, kids) in &children {
            for &v in kids {
                if s_low[u as usize] {
                    if let (Some(a), Some(b)) = (self.lin[v], new_in[v]) {
                        give((u, hub), Label::new(a, b));
                    }
                    if let (Some(a), Some(b)) = (new_out[v], self.lout[v]) {
                        give((hub, u), Label::new(a, b));
                    }
                } else {
                    let best_out = tl
                        .iter()
                        .filter(|&&w| c.has_edge(v, w))
                        .filter_map(|&w| new_out[w])
                        .max();
                    if let (Some(a), Some(b)) = (self.lin[v], best_out) {
                        give((u, hub), Label::new(a, b));
                    }
                    let best_in = tl
                        .iter()
                        .filter(|&&w| c.has_edge(w, v))
                        .filter_map(|&w| new_in[w])
                        .min();
                    if let (Some(a), Some(b)) = (best_in, self.lout[v]) {
                        give((hub, u), Label::new(a, b));
                    }
                }
            }
        }
        self.stats.orphan_labels += orphans;

        let mut new_circle = rest;
        let mut lower_hub_edges = Vec::new();
        for ((a, b), labels) in hub_labels {
            if labels.is_empty() {
                continue;
            }
            let other = if a == hub { b } else { a };
            let e = self.push_edge(a, b, None, labels);
            if in_lower[other as usize] {
                lower_hub_edges.push(e);
            } else {
                new_circle.push(e);
            }
        }
        new_circle.push(self.push_edge(chord.tail, hub, None, vec![Label::PROHIBITED]));
        new_circle.push(self.push_edge(hub, chord.head, None, vec![Label::PROHIBITED]));

        self.planarize_cap(&cap, hub, cap_edges, lower_hub_edges, &cap_pos)?;

        for r in 0..self.n {
            if in_lower[self.parent[r] as usize] {
                self.parent[r] = hub;
            }
        }
        for &r in &tl {
            self.lin[r] = new_in[r];
            self.lout[r] = new_out[r];
        }
        let mut u = Vec::with_capacity(self.u.len());
        for &v in &self.u {
            if !in_lower[v as usize] {
                u.push(v);
                if v == cap[0] {
                    u.push(hub);
                }
            }
        }
        self.u = u;
        self.circle = new_circle;
        self.stats.gaps.push(chord.gap as u32);
        Ok(())
    }

    /// Subdivides the crossings under a processed chord. Short chords
    /// `{a_i, a_{i+2}}` cross their neighbours and the hub line from
    /// `a_{i+1}`; along a short chord from `a_i` these crossings appear in
    /// the order previous chord, hub line, next chord.
    fn planarize_cap(
        &mut self,
        cap: &[Vid],
        hub: Vid,
        cap_edges: Vec<usize>,
        hub_edges: Vec<usize>,
        cap_pos: &[usize],
    ) -> Result<(), TransformError> {
        let k = cap.len() - 2;
        let mut chord_line = vec![false; k + 2];
        let mut hub_line = vec![false; k + 2];
        for &ei in &cap_edges {
            let (i, j) = (
                cap_pos[self.edges[ei].from as usize],
                cap_pos[self.edges[ei].to as usize],
            );
            match i.abs_diff(j) {
                1 => {}
                2 => chord_line[i.min(j)] = true,
                _ => {
                    return Err(TransformError::Internal(
                        "long chord below a lowest chord".into(),
                    ))
                }
            }
        }
        for &ei in &hub_edges {
            let e = &self.edges[ei];
            let other = if e.from == hub { e.to } else { e.from };
            hub_line[cap_pos[other as usize]] = true;
        }
        let mut on_hub_line = vec![None; k + 2];
        let mut next_cross = vec![None; k + 2];
        for i in 0..k {
            if chord_line[i] && hub_line[i + 1] {
                on_hub_line[i] = Some(self.new_crossing((cap[i], cap[i + 2]), (cap[i + 1], hub)));
            }
            if i + 1 < k && chord_line[i] && chord_line[i + 1] {
                next_cross[i] =
                    Some(self.new_crossing((cap[i], cap[i + 2]), (cap[i + 1], cap[i + 3])));
            }
        }
        for ei in cap_edges {
            let (i, j) = (
                cap_pos[self.edges[ei].from as usize],
                cap_pos[self.edges[ei].to as usize],
            );
            if i.abs_diff(j) == 1 {
                self.output.push(ei);
                continue;
            }
            let lo = i.min(j);
            let before = if lo > 0 { next_cross[lo - 1] } else { None };
            let pts: Vec<Vid> = [before, on_hub_line[lo], next_cross[lo]]
                .into_iter()
                .flatten()
                .collect();
            self.subdivide(ei, pts, i < j);
        }
        for ei in hub_edges {
            let e = &self.edges[ei];
            let from_rim = e.to == hub;
            let j = cap_pos[if from_rim { e.from } else { e.to } as usize];
            let pts: Vec<Vid> = on_hub_line[j - 1].into_iter().collect();
            self.subdivide(ei, pts, from_rim);
        }
        Ok(())
    }

    /// Replaces edge `ei` by a chain through `pts` (listed from the line's
    /// first endpoint; `forward` says whether the edge runs that way) and
    /// sends the pieces to the output.
    fn subdivide(&mut self, ei: usize, mut pts: Vec<Vid>, forward: bool) {
        if pts.is_empty() {
            self.output.push(ei);
            return;
        }
        if !forward {
            pts.reverse();
        }
        let (from, to) = (self.edges[ei].from, self.edges[ei].to);
        let first_labels = self.edges[ei].labels.clone();
        let carried: Vec<Label> = first_labels
            .iter()
            .map(|&l| {
                if l == Label::PROHIBITED {
                    l
                } else {
                    Label::new(l.output, l.output)
                }
            })
            .collect();
        let mut stops = vec![from];
        stops.extend(pts);
        stops.push(to);
        let first = self.edges.len();
        let count = stops.len() - 1;
        for s in 0..count {
            let labels = if s == 0 {
                first_labels.clone()
            } else {
                carried.clone()
            };
            let k = (s + 1 < count).then_some(first + s + 1);
            let e = self.push_edge(stops[s], stops[s + 1], k, labels);
            self.output.push(e);
        }
    }

    /// Subdivides what is left of the circle part, which holds only chords
    /// spanning a single vertex.
    fn finish(&mut self) -> Result<(), TransformError> {
        let m = self.u.len();
        let pos = position_map(&self.u);
        let edges = std::mem::take(&mut self.circle);
        let mut line_of = Vec::with_capacity(edges.len());
        let mut exists = vec![false; m];
        for &ei in &edges {
            let (i, j) = (
                pos[self.edges[ei].from as usize],
                pos[self.edges[ei].to as usize],
            );
            let cw = (j + m - i) % m;
            let line = match cw.min(m - cw) {
                1 => None,
                2 if m == 4 => Some(i.min(j)),
                2 if cw == 2 => Some(i),
                2 => Some(j),
                _ => {
                    return Err(TransformError::Internal(
                        "long chord left after the main loop".into(),
                    ))
                }
            };
            if let Some(l) = line {
                exists[l] = true;
            }
            line_of.push(line);
        }
        let mut cross = vec![None; m];
        let created_before = self.inner.len();
        if m == 4 {
            if exists[0] && exists[1] {
                let x = self.new_crossing((self.u[0], self.u[2]), (self.u[1], self.u[3]));
                cross[0] = Some(x);
                cross[1] = Some(x);
            }
        } else if m >= 5 {
            for i in 0..m {
                let nx = (i + 1) % m;
                if exists[i] && exists[nx] {
                    cross[i] = Some(self.new_crossing(
                        (self.u[i], self.u[(i + 2) % m]),
                        (self.u[nx], self.u[(i + 3) % m]),
                    ));
                }
            }
        }
        self.stats.final_crossings = (self.inner.len() - created_before) as u32;
        for (ei, line) in edges.into_iter().zip(line_of) {
            let Some(l) = line else {
                self.output.push(ei);
                continue;
            };
            let pts: Vec<Vid> = if m == 4 {
                cross[l].into_iter().collect()
            } else {
                [cross[(l + m - 1) % m], cross[l]]
                    .into_iter()
                    .flatten()
                    .collect()
            };
            let forward = pos[self.edges[ei].from as usize] == l;
            self.subdivide(ei, pts, forward);
        }
        Ok(())
    }

    fn assemble(&self) -> GadgetGraph {
        let mut slot = vec![usize::MAX; self.edges.len()];
        for (i, &ei) in self.output.iter().enumerate() {
            slot[ei] = i;
        }
        let edges = self
            .output
            .iter()
            .map(|&ei| {
                let e = &self.edges[ei];
                GEdge {
                    from: e.from,
                    to: e.to,
                    k: e.k.map(|k| {
                        assert_ne!(slot[k], usize::MAX, "successor edge was not emitted");
                        slot[k] as u32
                    }),
                    kinv: None,
                    labels: e.labels.clone(),
                }
            })
            .collect();
        GadgetGraph::from_parts(self.n, self.inner.clone(), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_reach(a: usize, b: usize) -> bool {
        // lower vertices 1..=3, upper vertices 11..=13
        matches!(
            (a, b),
            (1, 11)
                | (2, 11)
                | (2, 12)
                | (3, 11)
                | (3, 12)
                | (3, 13)
                | (13, 1)
                | (13, 2)
                | (12, 2)
                | (13, 3)
        )
    }

    #[test]
    fn worked_level_example() {
        let (temp, fin) = calc_levels(&[1, 2, 3], &[11, 12, 13], figure_reach, false);
        assert_eq!(temp[2].0, Some(Level::finite(3, 3)));
        assert_eq!(temp[1].1, Some(Level::finite(2, 2)));
        assert_eq!(
            fin[0],
            (Some(Level::finite(1, 1)), Some(Level::finite(3, 1)))
        );
        assert_eq!(
            fin[1],
            (Some(Level::finite(3, 2)), Some(Level::finite(3, 2)))
        );
        assert_eq!(
            fin[2],
            (Some(Level::finite(4, 3)), Some(Level::finite(4, 3)))
        );
        // the configuration is drawn by hand and is not realizable by a
        // planar block, which the monotonicity check notices
        assert_eq!(
            check_level_properties(&temp, &fin, 0).unwrap_err().kind,
            LevelProperty::Increasing
        );
    }

    #[test]
    fn skipping_the_shift_breaks_in_over_out() {
        let reach = |a: usize, b: usize| matches!((a, b), (1, 11) | (12, 1) | (2, 11) | (12, 2));
        let (temp, fin) = calc_levels(&[1, 2], &[11, 12], reach, true);
        let err = check_level_properties(&temp, &fin, 0).unwrap_err();
        assert_eq!(err.kind, LevelProperty::InOverOut);
        let (temp, fin) = calc_levels(&[1, 2], &[11, 12], reach, false);
        check_level_properties(&temp, &fin, 0).unwrap();
    }

    #[test]
    fn no_long_chord_means_no_pick() {
        let cycle: Vec<Vid> = (0..6).collect();
        assert_eq!(lowest_gap2_chord(&cycle, &[(0, 1), (1, 3), (5, 1)]), None);
        let c = lowest_gap2_chord(&cycle, &[(0, 3)]).unwrap();
        assert_eq!((c.tail, c.head, c.gap), (0, 3, 2));
        assert_eq!(c.cap, vec![0, 1, 2, 3]);
    }

    #[test]
    fn lower_arc_is_the_shorter_side() {
        let cycle: Vec<Vid> = (0..8).collect();
        let c = lowest_gap2_chord(&cycle, &[(5, 1)]).unwrap();
        assert_eq!(c.cap, vec![5, 6, 7, 0, 1]);
        let c = lowest_gap2_chord(&cycle, &[(6, 1), (0, 3)]).unwrap();
        assert_eq!((c.tail, c.head), (0, 3));
    }

    #[test]
    fn no_chords_means_open_labels_only() {
        let c = CircleGraph::from_edges(5, [(0, 1), (1, 2), (2, 0)]);
        let g = transform(&c);
        assert_eq!(g.n_inner(), 0);
        assert!(g
            .edges()
            .iter()
            .all(|e| e.labels == vec![Label::OPEN] && e.k.is_none()));
    }
}
