//! Straight-line drawings of gadget graphs.
//!
//! Outer vertices sit on a circle, clockwise in screen coordinates (y grows
//! downwards) starting at the upper left. A hub sits just inside the chord it
//! replaces, pushed towards the arc it cuts off by the largest power-of-two
//! fraction that puts it beyond every short chord under that arc. Crossing
//! vertices sit at the exact intersection of their two lines. The exact
//! drawing uses rationals; a floating-point twin serves rotation systems.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{GadgetGraph, Provenance, Vid};

/// Arithmetic needed to build a drawing.
pub trait Scalar:
    Clone
    + PartialOrd
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    /// `num / 2^shift`.
    fn dyadic(num: i64, shift: u32) -> Self;
    fn signum_i(&self) -> i32;
    fn to_f64(&self) -> f64;
    /// Nearest multiple of `2^-bits`.
    fn round_dyadic(&self, bits: u32) -> Self;
}

impl Scalar for f64 {
    fn dyadic(num: i64, shift: u32) -> Self {
        num as f64 / (shift as f64).exp2()
    }
    fn signum_i(&self) -> i32 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn round_dyadic(&self, _bits: u32) -> Self {
        *self
    }
}

impl Scalar for BigRational {
    fn dyadic(num: i64, shift: u32) -> Self {
        BigRational::new(BigInt::from(num), BigInt::one() << shift)
    }
    fn signum_i(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn round_dyadic(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let scaled = self * BigRational::from_integer(scale.clone());
        BigRational::new(scaled.round().to_integer(), scale)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point<T = BigRational> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    fn lerp(&self, other: &Self, t: &T) -> Self {
        Point {
            x: self.x.clone() + (other.x.clone() - self.x.clone()) * t.clone(),
            y: self.y.clone() + (other.y.clone() - self.y.clone()) * t.clone(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of the turn `a -> b -> c`; positive is clockwise on screen.
pub fn orient<T: Scalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> i32 {
    let l = (b.x.clone() - a.x.clone()) * (c.y.clone() - a.y.clone());
    let r = (b.y.clone() - a.y.clone()) * (c.x.clone() - a.x.clone());
    (l - r).signum_i()
}

/// Intersection of the lines through `a, b` and `c, d`; they must not be
/// parallel.
fn intersect<T: Scalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>, d: &Point<T>) -> Point<T> {
    let cross = |ux: T, uy: T, vx: T, vy: T| ux * vy - uy * vx;
    let (rx, ry) = (b.x.clone() - a.x.clone(), b.y.clone() - a.y.clone());
    let (sx, sy) = (d.x.clone() - c.x.clone(), d.y.clone() - c.y.clone());
    let den = cross(rx.clone(), ry.clone(), sx.clone(), sy.clone());
    assert_ne!(den.signum_i(), 0, "parallel lines have no crossing vertex");
    let t = cross(c.x.clone() - a.x.clone(), c.y.clone() - a.y.clone(), sx, sy) / den;
    a.lerp(b, &t)
}

/// Positions of all vertices of one gadget graph.
#[derive(Debug, Clone)]
pub struct Embedding<T = BigRational> {
    points: Vec<Point<T>>,
}

impl<T> Embedding<T> {
    pub fn point(&self, v: Vid) -> &Point<T> {
        &self.points[v as usize]
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }
}

const ANGLE_BITS: u32 = 30;

/// Point of rim position `k` of `n` on the unit circle, exactly on it: the
/// half-angle tangent is rounded to a dyadic rational first, which keeps
/// the cyclic order.
fn circle_point<T: Scalar>(k: usize, n: usize) -> Point<T> {
    let mut phi = -0.75 * std::f64::consts::PI + std::f64::consts::TAU * k as f64 / n as f64;
    phi = (phi + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
    let flip = phi.abs() > std::f64::consts::FRAC_PI_2;
    if flip {
        phi -= std::f64::consts::PI.copysign(phi);
    }
    let t = T::dyadic(
        ((phi / 2.0).tan() * (1u64 << ANGLE_BITS) as f64).round() as i64,
        ANGLE_BITS,
    );
    let one = T::dyadic(1, 0);
    let den = one.clone() + t.clone() * t.clone();
    let x = (one - t.clone() * t.clone()) / den.clone();
    let y = (T::dyadic(2, 0) * t) / den;
    if flip {
        let zero = T::dyadic(0, 0);
        Point {
            x: zero.clone() - x,
            y: zero - y,
        }
    } else {
        Point { x, y }
    }
}

fn hub_point<T: Scalar>(points: &[Point<T>], cap: &[Vid]) -> Point<T> {
    let p = |i: usize| &points[cap[i] as usize];
    let k = cap.len() - 2;
    let inward = orient(p(0), p(1), p(2));
    let mid = p(0).lerp(p(k + 1), &T::dyadic(1, 1));
    let aim = p(k.div_ceil(2));
    // Rounding keeps coordinates short; every constraint is rechecked on the
    // rounded point.
    let fits = |hub: &Point<T>| {
        orient(p(k + 1), p(0), hub) == inward
            && (0..=k).all(|i| orient(p(i), p(i + 1), hub) == inward)
            && (0..k).all(|i| orient(p(i), p(i + 2), hub) == inward)
    };
    for shift in 1..400 {
        let exact = mid.lerp(aim, &T::dyadic(1, shift));
        for bits in [shift + 24, shift + 48, shift + 96] {
            let hub = Point {
                x: exact.x.round_dyadic(bits),
                y: exact.y.round_dyadic(bits),
            };
            if fits(&hub) {
                return hub;
            }
        }
        if fits(&exact) {
            return exact;
        }
    }
    mid
}

fn build<T: Scalar>(g: &GadgetGraph) -> Embedding<T> {
    let n = g.n_outer();
    let mut points: Vec<Point<T>> = (0..n).map(|k| circle_point(k, n)).collect();
    for p in g.inner() {
        let q = match p {
            Provenance::Hub { cap, .. } => hub_point(&points, cap),
            Provenance::Crossing { first, second, .. } => {
                let at = |v: Vid| &points[v as usize];
                intersect(at(first.0), at(first.1), at(second.0), at(second.1))
            }
        };
        points.push(q);
    }
    Embedding { points }
}

pub fn embed_exact(g: &GadgetGraph) -> Embedding<BigRational> {
    build(g)
}

pub fn embed_f64(g: &GadgetGraph) -> Embedding<f64> {
    build(g)
}

/// Two drawn edges meeting somewhere other than a shared endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarityViolation {
    pub first: (Vid, Vid),
    pub second: (Vid, Vid),
}

impl fmt::Display for PlanarityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edges {:?} and {:?} cross", self.first, self.second)
    }
}

/// Orientation and incidence tests on embedded vertices: a floating-point
/// determinant decides when it is clearly away from zero, exact arithmetic
/// decides the rest.
struct Geometry<'e> {
    exact: &'e Embedding<BigRational>,
    approx: Vec<(f64, f64)>,
    /// `(x, y, w)` with positive `w`, so that exact orientation needs no
    /// gcd reductions.
    homogeneous: Vec<[BigInt; 3]>,
}

impl Geometry<'_> {
    const FILTER: f64 = 1e-10;

    fn orient(&self, a: Vid, b: Vid, c: Vid) -> i32 {
        let (p, q, r) = (
            self.approx[a as usize],
            self.approx[b as usize],
            self.approx[c as usize],
        );
        let det = (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
        if det > Self::FILTER {
            1
        } else if det < -Self::FILTER {
            -1
        } else {
            let [p, q, r] = [a, b, c].map(|v| &self.homogeneous[v as usize]);
            let det = &p[0] * (&q[1] * &r[2] - &q[2] * &r[1])
                - &p[1] * (&q[0] * &r[2] - &q[2] * &r[0])
                + &p[2] * (&q[0] * &r[1] - &q[1] * &r[0]);
            match det.sign() {
                num_bigint::Sign::Plus => 1,
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
            }
        }
    }

    /// `c` lies on the closed segment `a b`.
    fn on_segment(&self, a: Vid, b: Vid, c: Vid) -> bool {
        if self.orient(a, b, c) != 0 {
            return false;
        }
        let (pa, pb, pc) = (
            self.exact.point(a),
            self.exact.point(b),
            self.exact.point(c),
        );
        let within = |u: &BigRational, v: &BigRational, w: &BigRational| {
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            lo <= w && w <= hi
        };
        within(&pa.x, &pb.x, &pc.x) && within(&pa.y, &pb.y, &pc.y)
    }

    fn segments_meet(&self, a: Vid, b: Vid, c: Vid, d: Vid) -> bool {
        let (o1, o2) = (self.orient(a, b, c), self.orient(a, b, d));
        let (o3, o4) = (self.orient(c, d, a), self.orient(c, d, b));
        if o1 * o2 < 0 && o3 * o4 < 0 {
            return true;
        }
        self.on_segment(a, b, c)
            || self.on_segment(a, b, d)
            || self.on_segment(c, d, a)
            || self.on_segment(c, d, b)
    }

    fn bbox(&self, (u, v): (Vid, Vid)) -> (f64, f64, f64, f64) {
        let (a, b) = (self.approx[u as usize], self.approx[v as usize]);
        (a.0.min(b.0), a.0.max(b.0), a.1.min(b.1), a.1.max(b.1))
    }
}

/// Exact test that no two edges of the drawing meet except at a shared
/// endpoint, and that no edge passes through a vertex.
pub fn check_planar(
    g: &GadgetGraph,
    emb: &Embedding<BigRational>,
) -> Result<(), PlanarityViolation> {
    let mut segs: Vec<(Vid, Vid)> = g
        .edges()
        .iter()
        .map(|e| (e.from.min(e.to), e.from.max(e.to)))
        .collect();
    segs.sort_unstable();
    segs.dedup();
    let geo = Geometry {
        exact: emb,
        approx: emb
            .points()
            .iter()
            .map(|p| (p.x.to_f64(), p.y.to_f64()))
            .collect(),
        homogeneous: emb
            .points()
            .iter()
            .map(|p| {
                [
                    p.x.numer() * p.y.denom(),
                    p.y.numer() * p.x.denom(),
                    p.x.denom() * p.y.denom(),
                ]
            })
            .collect(),
    };
    const SLACK: f64 = 1e-9;
    let apart = |a: (f64, f64, f64, f64), b: (f64, f64, f64, f64)| {
        a.1 + SLACK < b.0 || b.1 + SLACK < a.0 || a.3 + SLACK < b.2 || b.3 + SLACK < a.2
    };
    for (i, &s) in segs.iter().enumerate() {
        let bs = geo.bbox(s);
        for &r in &segs[i + 1..] {
            if apart(bs, geo.bbox(r)) {
                continue;
            }
            let shared = [s.0, s.1].into_iter().find(|&v| v == r.0 || v == r.1);
            let bad = match shared {
                Some(c) => {
                    let a = if s.0 == c { s.1 } else { s.0 };
                    let b = if r.0 == c { r.1 } else { r.0 };
                    geo.on_segment(c, a, b) || geo.on_segment(c, b, a)
                }
                None => geo.segments_meet(s.0, s.1, r.0, r.1),
            };
            if bad {
                return Err(PlanarityViolation {
                    first: s,
                    second: r,
                });
            }
        }
    }
    for v in 0..g.vertex_count() as Vid {
        let (x, y) = geo.approx[v as usize];
        for &s in &segs {
            if s.0 != v
                && s.1 != v
                && !apart(geo.bbox(s), (x, x, y, y))
                && geo.on_segment(s.0, s.1, v)
            {
                return Err(PlanarityViolation {
                    first: s,
                    second: (v, v),
                });
            }
        }
    }
    Ok(())
}

/// Neighbours of every vertex in clockwise screen order, starting from the
/// direction of smallest angle; edge direction is ignored.
pub fn rotation_system(g: &GadgetGraph, emb: &Embedding<f64>) -> Vec<Vec<Vid>> {
    let mut adj: Vec<Vec<Vid>> = vec![Vec::new(); g.vertex_count()];
    for e in g.edges() {
        adj[e.from as usize].push(e.to);
        adj[e.to as usize].push(e.from);
    }
    for (v, list) in adj.iter_mut().enumerate() {
        list.sort_unstable();
        list.dedup();
        let o = emb.point(v as Vid);
        let angle = |u: &Vid| {
            let p = emb.point(*u);
            (p.y - o.y).atan2(p.x - o.x)
        };
        list.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap_or(Ordering::Equal));
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_points_are_exact_and_ordered() {
        let n = 12;
        let pts: Vec<Point<BigRational>> = (0..n).map(|k| circle_point(k, n)).collect();
        for p in &pts {
            assert!((p.x.clone() * p.x.clone() + p.y.clone() * p.y.clone()).is_one());
        }
        for k in 0..n {
            assert_eq!(orient(&pts[k], &pts[(k + 1) % n], &pts[(k + 2) % n]), 1);
        }
        assert!(pts[0].x.is_negative() && pts[0].y.is_negative());
    }

    #[test]
    fn crossing_of_diagonals() {
        let q = |x: i64, y: i64| Point::<BigRational> {
            x: BigRational::dyadic(x, 0),
            y: BigRational::dyadic(y, 0),
        };
        let x = intersect(&q(0, 0), &q(2, 2), &q(0, 2), &q(2, 0));
        assert_eq!(x, q(1, 1));
    }
}
