//! Directed grid graphs: representation, the text format, a seeded
//! generator and the plain BFS reachability oracle.
//!
//! Vertices sit on integer points `(x, y)` with `0 <= x < width` and
//! `0 <= y < height`; `y` grows downwards, so `North` is `y - 1`. Every vertex
//! stores a 4-bit mask of the directed edges leaving it.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

/// A grid coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub x: u32,
    pub y: u32,
}

impl VertexId {
    pub const fn new(x: u32, y: u32) -> Self {
        VertexId { x, y }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The four grid directions, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    North,
    East,
    South,
    West,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::North, Dir::East, Dir::South, Dir::West];

    pub const fn bit(self) -> u8 {
        match self {
            Dir::North => 1,
            Dir::East => 2,
            Dir::South => 4,
            Dir::West => 8,
        }
    }

    pub const fn opposite(self) -> Dir {
        match self {
            Dir::North => Dir::South,
            Dir::East => Dir::West,
            Dir::South => Dir::North,
            Dir::West => Dir::East,
        }
    }

    pub const fn delta(self) -> (i64, i64) {
        match self {
            Dir::North => (0, -1),
            Dir::East => (1, 0),
            Dir::South => (0, 1),
            Dir::West => (-1, 0),
        }
    }

    /// Direction from `a` to the 4-neighbour `b`, if they are neighbours.
    pub fn between(a: VertexId, b: VertexId) -> Option<Dir> {
        let dx = i64::from(b.x) - i64::from(a.x);
        let dy = i64::from(b.y) - i64::from(a.y);
        Dir::ALL.into_iter().find(|d| d.delta() == (dx, dy))
    }
}

/// A directed grid graph together with the query endpoints `s` and `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridGraph {
    width: u32,
    height: u32,
    out_mask: Vec<u8>,
    s: VertexId,
    t: VertexId,
}

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("grid dimensions must be positive, got {width}x{height}")]
    EmptyGrid { width: u32, height: u32 },
    #[error("vertex {0} is outside the grid")]
    OutOfBounds(VertexId),
    #[error("{0} and {1} are not grid neighbours")]
    NotNeighbors(VertexId, VertexId),
    #[error("density {0} is not a probability")]
    BadDensity(f64),
    #[error("a {width}x{height} grid has fewer than two vertices, cannot pick distinct s and t")]
    TooSmallForQuery { width: u32, height: u32 },
}

impl GridGraph {
    /// An edgeless grid.
    pub fn new(width: u32, height: u32, s: VertexId, t: VertexId) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::EmptyGrid { width, height });
        }
        let g = GridGraph {
            width,
            height,
            out_mask: vec![0; width as usize * height as usize],
            s,
            t,
        };
        for v in [s, t] {
            if !g.contains(v) {
                return Err(GridError::OutOfBounds(v));
            }
        }
        Ok(g)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn vertex_count(&self) -> usize {
        self.out_mask.len()
    }

    pub fn s(&self) -> VertexId {
        self.s
    }

    pub fn t(&self) -> VertexId {
        self.t
    }

    pub fn with_query(mut self, s: VertexId, t: VertexId) -> Result<Self, GridError> {
        for v in [s, t] {
            if !self.contains(v) {
                return Err(GridError::OutOfBounds(v));
            }
        }
        self.s = s;
        self.t = t;
        Ok(self)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.x < self.width && v.y < self.height
    }

    pub fn index(&self, v: VertexId) -> usize {
        v.y as usize * self.width as usize + v.x as usize
    }

    pub fn vertex(&self, index: usize) -> VertexId {
        let w = self.width as usize;
        VertexId::new((index % w) as u32, (index / w) as u32)
    }

    pub fn out_mask(&self, v: VertexId) -> u8 {
        self.out_mask[self.index(v)]
    }

    /// The neighbour of `v` in direction `d`, if it is inside the grid.
    pub fn step(&self, v: VertexId, d: Dir) -> Option<VertexId> {
        let (dx, dy) = d.delta();
        let x = i64::from(v.x) + dx;
        let y = i64::from(v.y) + dy;
        if x < 0 || y < 0 || x >= i64::from(self.width) || y >= i64::from(self.height) {
            None
        } else {
            Some(VertexId::new(x as u32, y as u32))
        }
    }

    pub fn has_edge(&self, v: VertexId, d: Dir) -> bool {
        self.out_mask(v) & d.bit() != 0
    }

    /// Inserts the edge `from -> to`; returns `false` if it was already present.
    pub fn add_edge(&mut self, from: VertexId, to: VertexId) -> Result<bool, GridError> {
        for v in [from, to] {
            if !self.contains(v) {
                return Err(GridError::OutOfBounds(v));
            }
        }
        let d = Dir::between(from, to).ok_or(GridError::NotNeighbors(from, to))?;
        let i = self.index(from);
        let fresh = self.out_mask[i] & d.bit() == 0;
        self.out_mask[i] |= d.bit();
        Ok(fresh)
    }

    /// Successors of `v`, in direction order.
    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let mask = self.out_mask(v);
        Dir::ALL
            .into_iter()
            .filter(move |d| mask & d.bit() != 0)
            .filter_map(move |d| self.step(v, d))
    }

    /// Every directed edge in canonical order: by `(y, x, direction)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count()).flat_map(move |i| {
            let v = self.vertex(i);
            self.successors(v).map(move |w| (v, w))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.out_mask.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Number of candidate directed edges, i.e. ordered neighbour pairs.
    pub fn candidate_edge_count(&self) -> usize {
        let (w, h) = (self.width as usize, self.height as usize);
        2 * ((w - 1) * h + (h - 1) * w)
    }

    fn check_masks(&self) -> bool {
        (0..self.vertex_count()).all(|i| {
            let v = self.vertex(i);
            Dir::ALL
                .into_iter()
                .all(|d| !self.has_edge(v, d) || self.step(v, d).is_some())
        })
    }
}

/// Parse failure, tagged with the 1-based line number.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected `grid <width> <height>` header")]
    MalformedHeader,
    #[error("expected `{0}`")]
    MalformedLine(&'static str),
    #[error("grid dimensions must be positive")]
    EmptyGrid,
    #[error("vertex {0} is outside the grid")]
    OutOfBounds(VertexId),
    #[error("edge {0} -> {1} does not join grid neighbours")]
    NonNeighborEdge(VertexId, VertexId),
    #[error("edge {0} -> {1} listed twice")]
    DuplicateEdge(VertexId, VertexId),
    #[error("unexpected end of input, missing `{0}` line")]
    Truncated(&'static str),
}

fn numbers<const K: usize>(rest: &[&str]) -> Option<[u32; K]> {
    if rest.len() != K {
        return None;
    }
    let mut out = [0u32; K];
    for (slot, tok) in out.iter_mut().zip(rest) {
        *slot = tok.parse().ok()?;
    }
    Some(out)
}

/// Parses the grid text format.
///
/// ```text
/// grid <width> <height>
/// s <x> <y>
/// t <x> <y>
/// e <x1> <y1> <x2> <y2>      (zero or more, 4-neighbours only)
/// ```
///
/// Lines starting with `#` are comments.
pub fn parse_grid(text: &str) -> Result<GridGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.starts_with('#'));
    let err = |line, kind| ParseError { line, kind };
    let last_line = text.lines().count().max(1);

    let (ln, header) = lines
        .next()
        .ok_or(err(last_line, ParseErrorKind::MalformedHeader))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let [width, height] = match toks.split_first() {
        Some((&"grid", rest)) => {
            numbers::<2>(rest).ok_or(err(ln, ParseErrorKind::MalformedHeader))?
        }
        _ => return Err(err(ln, ParseErrorKind::MalformedHeader)),
    };
    if width == 0 || height == 0 {
        return Err(err(ln, ParseErrorKind::EmptyGrid));
    }

    let mut endpoint = |tag: &'static str, usage: &'static str| -> Result<VertexId, ParseError> {
        let (ln, line) = lines
            .next()
            .ok_or(err(last_line, ParseErrorKind::Truncated(usage)))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.split_first() {
            Some((head, rest)) if *head == tag => {
                let [x, y] =
                    numbers::<2>(rest).ok_or(err(ln, ParseErrorKind::MalformedLine(usage)))?;
                let v = VertexId::new(x, y);
                if x >= width || y >= height {
                    return Err(err(ln, ParseErrorKind::OutOfBounds(v)));
                }
                Ok(v)
            }
            _ => Err(err(ln, ParseErrorKind::MalformedLine(usage))),
        }
    };
    let s = endpoint("s", "s <x> <y>")?;
    let t = endpoint("t", "t <x> <y>")?;

    let mut g = GridGraph::new(width, height, s, t).expect("dimensions and endpoints validated");
    for (ln, line) in lines {
        const USAGE: &str = "e <x1> <y1> <x2> <y2>";
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [x1, y1, x2, y2] = match toks.split_first() {
            Some((&"e", rest)) => {
                numbers::<4>(rest).ok_or(err(ln, ParseErrorKind::MalformedLine(USAGE)))?
            }
            _ => return Err(err(ln, ParseErrorKind::MalformedLine(USAGE))),
        };
        let (a, b) = (VertexId::new(x1, y1), VertexId::new(x2, y2));
        for v in [a, b] {
            if !g.contains(v) {
                return Err(err(ln, ParseErrorKind::OutOfBounds(v)));
            }
        }
        match g.add_edge(a, b) {
            Ok(true) => {}
            Ok(false) => return Err(err(ln, ParseErrorKind::DuplicateEdge(a, b))),
            Err(_) => return Err(err(ln, ParseErrorKind::NonNeighborEdge(a, b))),
        }
    }
    Ok(g)
}

/// Canonical text form: header, endpoints, then edges by `(y, x, direction)`.
pub fn write_grid(g: &GridGraph) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "grid {} {}", g.width, g.height);
    let _ = writeln!(out, "s {} {}", g.s.x, g.s.y);
    let _ = writeln!(out, "t {} {}", g.t.x, g.t.y);
    for (a, b) in g.edges() {
        let _ = writeln!(out, "e {} {} {} {}", a.x, a.y, b.x, b.y);
    }
    out
}

impl FromStr for GridGraph {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_grid(s)
    }
}

impl fmt::Display for GridGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_grid(self))
    }
}

/// `density` mapped onto the 53-bit integer range used by [`gen_random`].
fn density_threshold(density: f64) -> u64 {
    (density * (1u64 << 53) as f64) as u64
}

/// Random grid under the SplitMix64 generator.
///
/// The draw sequence is fixed so other implementations can reproduce it:
/// for every vertex in row-major order and every direction in
/// `N, E, S, W` order whose neighbour is inside the grid, one 64-bit word
/// `r` is drawn and the edge is kept iff `r >> 11 < floor(density * 2^53)`.
/// Then `s = r % N` and `t = r % N` (redrawn until `t != s`), with vertex
/// index `y * width + x`.
///
/// SplitMix64: `state += 0x9E3779B97F4A7C15; z = state;
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
/// return z ^ (z >> 31)`.
pub fn gen_random(
    width: u32,
    height: u32,
    density: f64,
    seed: u64,
) -> Result<GridGraph, GridError> {
    if !(0.0..=1.0).contains(&density) {
        return Err(GridError::BadDensity(density));
    }
    if width == 0 || height == 0 {
        return Err(GridError::EmptyGrid { width, height });
    }
    if u64::from(width) * u64::from(height) < 2 {
        return Err(GridError::TooSmallForQuery { width, height });
    }
    let origin = VertexId::new(0, 0);
    let mut g = GridGraph::new(width, height, origin, origin)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let threshold = density_threshold(density);
    for i in 0..g.vertex_count() {
        let v = g.vertex(i);
        for d in Dir::ALL {
            if g.step(v, d).is_some() && (rng.next_u64() >> 11) < threshold {
                g.out_mask[i] |= d.bit();
            }
        }
    }
    let n = g.vertex_count() as u64;
    let s = (rng.next_u64() % n) as usize;
    let t = loop {
        let t = (rng.next_u64() % n) as usize;
        if t != s {
            break t;
        }
    };
    g.s = g.vertex(s);
    g.t = g.vertex(t);
    debug_assert!(g.check_masks());
    Ok(g)
}

/// Plain breadth-first search: is there a directed path `from -> to`?
pub fn bfs_reachable(g: &GridGraph, from: VertexId, to: VertexId) -> bool {
    if from == to {
        return true;
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([from]);
    seen[g.index(from)] = true;
    while let Some(v) = queue.pop_front() {
        for w in g.successors(v) {
            if w == to {
                return true;
            }
            let i = g.index(w);
            if !seen[i] {
                seen[i] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    const SINGLE: &str = "grid 2 1\ns 0 0\nt 1 0\ne 0 0 1 0";

    #[test]
    fn parses_smallest_instance() {
        let g = parse_grid(SINGLE).unwrap();
        assert_eq!((g.width(), g.height()), (2, 1));
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![(VertexId::new(0, 0), VertexId::new(1, 0))]
        );
    }

    #[test]
    fn writes_canonical_text() {
        let g = parse_grid(SINGLE).unwrap();
        assert_eq!(write_grid(&g), format!("{SINGLE}\n"));
        let lone = GridGraph::new(1, 1, VertexId::new(0, 0), VertexId::new(0, 0)).unwrap();
        assert_eq!(write_grid(&lone), "grid 1 1\ns 0 0\nt 0 0\n");
    }

    #[test]
    fn rejects_diagonal_edge() {
        let e = parse_grid("grid 2 2\ns 0 0\nt 1 0\ne 0 0 1 1").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(matches!(e.kind, ParseErrorKind::NonNeighborEdge(..)));
    }

    #[test]
    fn parse_errors_are_distinct() {
        let cases = [
            ("grid 2\ns 0 0\nt 1 0", 1, "header"),
            ("grid 2 1\ns 0 0\nt 2 0", 3, "bounds"),
            ("grid 2 1\ns 0 0\nt 1 0\ne 0 0 1 0\ne 0 0 1 0", 5, "dup"),
            ("grid 2 1\ns 0 0\nt 1 0\ne 0 0 5 0", 4, "bounds"),
            ("grid 2 1\ns 0 0\nt 1 0\nq 1", 4, "line"),
            ("grid 2 1\ns 0 0", 2, "trunc"),
            ("grid 0 3\ns 0 0\nt 0 0", 1, "empty"),
        ];
        for (text, line, what) in cases {
            let e = parse_grid(text).unwrap_err();
            assert_eq!(e.line, line, "{what}: {e}");
            let ok = match what {
                "header" => matches!(e.kind, ParseErrorKind::MalformedHeader),
                "bounds" => matches!(e.kind, ParseErrorKind::OutOfBounds(_)),
                "dup" => matches!(e.kind, ParseErrorKind::DuplicateEdge(..)),
                "line" => matches!(e.kind, ParseErrorKind::MalformedLine(_)),
                "trunc" => matches!(e.kind, ParseErrorKind::Truncated(_)),
                "empty" => matches!(e.kind, ParseErrorKind::EmptyGrid),
                _ => unreachable!(),
            };
            assert!(ok, "{what}: {e}");
        }
    }

    #[test]
    fn comments_are_skipped() {
        let g = parse_grid("# hello\ngrid 2 1\n# mid\ns 0 0\nt 1 0\ne 1 0 0 0\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(bfs_reachable(&g, VertexId::new(1, 0), VertexId::new(0, 0)));
    }

    #[test]
    fn density_extremes() {
        let g = gen_random(5, 4, 0.0, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = gen_random(5, 4, 1.0, 1).unwrap();
        assert_eq!(g.edge_count(), g.candidate_edge_count());
        assert_ne!(g.s(), g.t());
    }

    #[test]
    fn generator_is_deterministic() {
        let a = write_grid(&gen_random(8, 8, 0.5, 42).unwrap());
        let b = write_grid(&gen_random(8, 8, 0.5, 42).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, write_grid(&gen_random(8, 8, 0.5, 43).unwrap()));
    }

    #[test]
    fn generator_rejects_bad_input() {
        assert_eq!(
            gen_random(1, 1, 0.5, 0),
            Err(GridError::TooSmallForQuery {
                width: 1,
                height: 1
            })
        );
        assert!(matches!(
            gen_random(3, 3, 1.5, 0),
            Err(GridError::BadDensity(_))
        ));
    }

    #[test]
    fn bfs_respects_direction() {
        let g = parse_grid(SINGLE).unwrap();
        let (a, b) = (VertexId::new(0, 0), VertexId::new(1, 0));
        assert!(bfs_reachable(&g, a, b));
        assert!(!bfs_reachable(&g, b, a));
        assert!(bfs_reachable(&g, b, b));
    }
}
