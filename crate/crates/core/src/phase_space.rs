//! The N x N phase space over GF(N): points, lines, striations, translations.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};

/// A point (q, p) of phase space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub q: FieldElement,
    pub p: FieldElement,
}

impl Point {
    pub fn new(q: FieldElement, p: FieldElement) -> Result<Self> {
        if q.field() != p.field() {
            return Err(Error::ContextMismatch);
        }
        Ok(Point { q, p })
    }

    pub fn is_origin(&self) -> bool {
        self.q.is_zero() && self.p.is_zero()
    }

    /// Translation by `v`: componentwise field addition.
    pub fn translate(self, v: Point) -> Result<Point> {
        Ok(Point {
            q: self.q.checked_add(v.q)?,
            p: self.p.checked_add(v.p)?,
        })
    }

    /// Row-major index `q * N + p` in canonical element order.
    pub fn index(&self, order: usize) -> usize {
        self.q.index() * order + self.p.index()
    }
}

/// Translate a point by a vector.
pub fn translate(pt: Point, v: Point) -> Result<Point> {
    pt.translate(v)
}

/// The solution set of `a q + b p = c`, stored in canonical form (the first
/// nonzero of `(a, b)` scaled to 1) with its points in ascending `(q, p)` order.
#[derive(Clone, Debug)]
pub struct Line {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    points: Vec<Point>,
}

impl PartialEq for Line {
    fn eq(&self, other: &Self) -> bool {
        (self.a, self.b, self.c) == (other.a, other.b, other.c)
    }
}

impl Eq for Line {}

impl Line {
    pub fn from_equation(
        ctx: &FieldContext,
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
    ) -> Result<Line> {
        for x in [a, b, c] {
            if x.field() != ctx.id() {
                return Err(Error::ContextMismatch);
            }
        }
        if a.is_zero() && b.is_zero() {
            return Err(Error::DegenerateEquation);
        }
        let lead = if a.is_zero() { b } else { a };
        let scale = ctx.inv(lead)?;
        let (a, b, c) = (a * scale, b * scale, c * scale);
        let mut points = Vec::with_capacity(ctx.order());
        for q in ctx.elements() {
            for p in ctx.elements() {
                if a * q + b * p == c {
                    points.push(Point { q, p });
                }
            }
        }
        Ok(Line { a, b, c, points })
    }

    /// Canonical coefficients `(a, b, c)`.
    pub fn equation(&self) -> (FieldElement, FieldElement, FieldElement) {
        (self.a, self.b, self.c)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains(&self, pt: &Point) -> bool {
        self.a * pt.q + self.b * pt.p == self.c
    }

    pub fn is_parallel_to(&self, other: &Line) -> bool {
        (self.a, self.b) == (other.a, other.b)
    }

    pub fn translate(&self, ctx: &FieldContext, v: Point) -> Result<Line> {
        // a(q + q0) + b(p + p0) = c  <=>  aq + bp = c + a q0 + b p0
        let shift = self.a.checked_mul(v.q)? + self.b.checked_mul(v.p)?;
        Line::from_equation(ctx, self.a, self.b, self.c + shift)
    }
}

/// Convenience wrapper for [`Line::from_equation`].
pub fn line_from_equation(
    ctx: &FieldContext,
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
) -> Result<Line> {
    Line::from_equation(ctx, a, b, c)
}

/// Points shared by two lines: empty when parallel and distinct, the whole line
/// when equal, otherwise exactly one point.
pub fn intersect(l1: &Line, l2: &Line) -> Vec<Point> {
    l1.points()
        .iter()
        .filter(|p| l2.contains(p))
        .copied()
        .collect()
}

/// Which family of parallel lines a striation is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Lines q = c.
    Vertical,
    /// Lines p = c.
    Horizontal,
    /// Lines p = s q + c.
    Slope(FieldElement),
}

/// One class of N parallel lines. `lines[0]` is the ray (the line through the
/// origin); `lines[k]` is the ray translated by intercept element `k`.
#[derive(Clone, Debug)]
pub struct Striation {
    id: usize,
    direction: Direction,
    lines: Vec<Line>,
}

impl Striation {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn ray(&self) -> &Line {
        &self.lines[0]
    }

    /// The N - 1 nonzero points of the ray, ascending.
    pub fn stabilizer_vectors(&self) -> Vec<Point> {
        self.ray()
            .points()
            .iter()
            .filter(|p| !p.is_origin())
            .copied()
            .collect()
    }

    /// The translation taking the ray onto `lines[k]`.
    pub fn offset(&self, ctx: &FieldContext, k: usize) -> Point {
        let c = ctx.at(k);
        match self.direction {
            Direction::Vertical => Point {
                q: c,
                p: ctx.zero(),
            },
            _ => Point {
                q: ctx.zero(),
                p: c,
            },
        }
    }

    /// Index of the member line containing `pt`.
    pub fn line_index_of(&self, pt: &Point) -> usize {
        match self.direction {
            Direction::Vertical => pt.q.index(),
            Direction::Horizontal => pt.p.index(),
            Direction::Slope(s) => (pt.p + s * pt.q).index(),
        }
    }
}

/// All N + 1 striations in canonical order: vertical, horizontal, then slopes
/// 1, w, w^2, ..., w^(N-2).
pub fn enumerate_striations(ctx: &FieldContext) -> Vec<Striation> {
    let n = ctx.order();
    let mut directions = vec![Direction::Vertical, Direction::Horizontal];
    directions.extend((0..n - 1).map(|k| Direction::Slope(ctx.power(k))));
    directions
        .into_iter()
        .enumerate()
        .map(|(id, direction)| {
            let lines = ctx
                .elements()
                .map(|c| {
                    let (a, b) = match direction {
                        Direction::Vertical => (ctx.one(), ctx.zero()),
                        Direction::Horizontal => (ctx.zero(), ctx.one()),
                        Direction::Slope(s) => (s, ctx.one()),
                    };
                    Line::from_equation(ctx, a, b, c).expect("(a, b) is nonzero")
                })
                .collect();
            Striation {
                id,
                direction,
                lines,
            }
        })
        .collect()
}

/// The phase space of one field together with its striations.
#[derive(Clone, Debug)]
pub struct PhaseSpace {
    ctx: FieldContext,
    striations: Vec<Striation>,
}

impl PhaseSpace {
    pub fn new(ctx: FieldContext) -> Self {
        let striations = enumerate_striations(&ctx);
        PhaseSpace { ctx, striations }
    }

    pub fn field(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.ctx.order()
    }

    pub fn striations(&self) -> &[Striation] {
        &self.striations
    }

    pub fn point(&self, qi: usize, pi: usize) -> Point {
        Point {
            q: self.ctx.at(qi),
            p: self.ctx.at(pi),
        }
    }

    /// All N^2 points, ascending by (q, p).
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        let n = self.order();
        (0..n * n).map(move |i| self.point(i / n, i % n))
    }

    pub fn parse_point(&self, q: &str, p: &str) -> Result<Point> {
        Ok(Point {
            q: self.ctx.parse(q)?,
            p: self.ctx.parse(p)?,
        })
    }

    /// Locate a line among the striations: `(striation id, line index)`.
    pub fn locate(&self, line: &Line) -> Option<(usize, usize)> {
        self.striations.iter().find_map(|s| {
            s.lines()
                .iter()
                .position(|l| l == line)
                .map(|k| (s.id(), k))
        })
    }

    pub fn to_json(&self, striation: &Striation) -> StriationJson {
        StriationJson {
            direction: striation.id(),
            lines: striation
                .lines()
                .iter()
                .map(|l| {
                    l.points()
                        .iter()
                        .map(|pt| {
                            [
                                self.ctx.label(pt.q).to_string(),
                                self.ctx.label(pt.p).to_string(),
                            ]
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// ASCII rendering of every line of a striation as a grid of `•` (on the
    /// line) and `∘` (off), origin bottom-left, p increasing upward.
    pub fn render_striation(&self, striation: &Striation) -> String {
        let n = self.order();
        let mut out = String::new();
        for row in (0..n).rev() {
            let cells: Vec<String> = striation
                .lines()
                .iter()
                .map(|line| {
                    (0..n)
                        .map(|qi| {
                            if line.contains(&self.point(qi, row)) {
                                "•"
                            } else {
                                "∘"
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join("   "));
        }
        out
    }
}

/// JSON form of a striation: `{"direction": k, "lines": [[["q","p"], ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StriationJson {
    pub direction: usize,
    pub lines: Vec<Vec<[String; 2]>>,
}

/// Point set of a solution set over Z_N.
pub type RingLine = BTreeSet<(u32, u32)>;

/// Solutions of `a q + b p = c (mod N)` over the ring Z_N. Exists to show that
/// wrap-around lines are not a geometry: two distinct ones can share two points.
pub fn ring_line_points(a: u32, b: u32, c: u32, modulus: u32) -> Result<RingLine> {
    if modulus < 2 {
        return Err(Error::RingTooSmall(modulus));
    }
    let (a, b, c) = (a % modulus, b % modulus, c % modulus);
    if a == 0 && b == 0 {
        return Err(Error::DegenerateEquation);
    }
    let mut pts = BTreeSet::new();
    for q in 0..modulus {
        for p in 0..modulus {
            if (a * q + b * p) % modulus == c {
                pts.insert((q, p));
            }
        }
    }
    Ok(pts)
}

/// First pair of distinct Z_N solution sets of exactly N points each (in
/// lexicographic equation order) sharing at least two points.
pub fn ring_witness(modulus: u32) -> Option<(RingLine, RingLine)> {
    let mut sets: Vec<RingLine> = Vec::new();
    for a in 0..modulus {
        for b in 0..modulus {
            for c in 0..modulus {
                if let Ok(s) = ring_line_points(a, b, c, modulus) {
                    if s.len() == modulus as usize && !sets.contains(&s) {
                        sets.push(s);
                    }
                }
            }
        }
    }
    for (i, s) in sets.iter().enumerate() {
        for t in &sets[i + 1..] {
            if s.intersection(t).count() >= 2 {
                return Some((s.clone(), t.clone()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: u32) -> PhaseSpace {
        PhaseSpace::new(FieldContext::new(n).unwrap())
    }

    #[test]
    fn one_qubit_diagonals() {
        let sp = space(1);
        let f = sp.field();
        let (zero, one) = (f.zero(), f.one());
        let ray = line_from_equation(f, one, one, zero).unwrap();
        let pts: Vec<_> = ray
            .points()
            .iter()
            .map(|p| (p.q.value(), p.p.value()))
            .collect();
        assert_eq!(pts, [(0, 0), (1, 1)]);
        let other = line_from_equation(f, one, one, one).unwrap();
        let pts: Vec<_> = other
            .points()
            .iter()
            .map(|p| (p.q.value(), p.p.value()))
            .collect();
        assert_eq!(pts, [(0, 1), (1, 0)]);
        assert!(intersect(&ray, &other).is_empty());
        assert!(ray.is_parallel_to(&other));
    }

    #[test]
    fn degenerate_equation() {
        let f = FieldContext::new(2).unwrap();
        assert_eq!(
            line_from_equation(&f, f.zero(), f.zero(), f.one()),
            Err(Error::DegenerateEquation)
        );
    }

    #[test]
    fn canonical_form_identifies_scaled_equations() {
        let f = FieldContext::new(2).unwrap();
        let w = f.generator();
        let l1 = line_from_equation(&f, f.one(), w, f.one()).unwrap();
        let l2 = line_from_equation(&f, w, w * w, w).unwrap();
        assert_eq!(l1, l2);
        assert_eq!(l1.points(), l2.points());
    }

    #[test]
    fn vertical_axis() {
        let f = FieldContext::new(2).unwrap();
        let l = line_from_equation(&f, f.one(), f.zero(), f.zero()).unwrap();
        assert_eq!(l.points().len(), 4);
        assert!(l.points().iter().all(|p| p.q.is_zero()));
    }

    #[test]
    fn striation_counts_and_order() {
        assert_eq!(space(1).striations().len(), 3);
        assert_eq!(space(2).striations().len(), 5);
        assert_eq!(space(3).striations().len(), 9);
        let sp = space(2);
        let f = sp.field();
        let s = &sp.striations()[3];
        assert_eq!(s.direction(), Direction::Slope(f.generator()));
        let labels: Vec<_> = s
            .ray()
            .points()
            .iter()
            .map(|p| (f.label(p.q), f.label(p.p)))
            .collect();
        assert_eq!(labels, [("0", "0"), ("1", "w"), ("w", "w2"), ("w2", "1")]);
    }

    #[test]
    fn stabilizers_preserve_every_line() {
        for n in 1..=3 {
            let sp = space(n);
            let f = sp.field();
            for s in sp.striations() {
                assert_eq!(s.stabilizer_vectors().len(), sp.order() - 1);
                for v in s.stabilizer_vectors() {
                    for line in s.lines() {
                        assert_eq!(&line.translate(f, v).unwrap(), line);
                    }
                }
                for (k, line) in s.lines().iter().enumerate() {
                    assert_eq!(&s.ray().translate(f, s.offset(f, k)).unwrap(), line);
                    for pt in line.points() {
                        assert_eq!(s.line_index_of(pt), k);
                    }
                }
            }
        }
    }

    #[test]
    fn translation_identity_and_origin() {
        let sp = space(2);
        let f = sp.field();
        let v = Point::new(f.one(), f.generator()).unwrap();
        let o = sp.point(0, 0);
        assert_eq!(translate(o, v).unwrap(), v);
        for pt in sp.points() {
            assert_eq!(translate(pt, o).unwrap(), pt);
        }
    }

    #[test]
    fn ring_lines() {
        // Z2 is a field: same as GF(2).
        assert_eq!(
            ring_line_points(1, 1, 0, 2).unwrap(),
            BTreeSet::from([(0, 0), (1, 1)])
        );
        assert_eq!(ring_line_points(1, 0, 0, 4).unwrap().len(), 4);
        assert!(ring_witness(2).is_none());
        assert!(ring_witness(4).is_some());
        assert!(ring_line_points(0, 4, 1, 4).is_err());
    }

    #[test]
    fn striation_json_and_ascii() {
        let sp = space(1);
        let js = sp.to_json(&sp.striations()[2]);
        assert_eq!(
            serde_json::to_string(&js).unwrap(),
            r#"{"direction":2,"lines":[[["0","0"],["1","1"]],[["0","1"],["1","0"]]]}"#
        );
        let art = sp.render_striation(&sp.striations()[2]);
        assert_eq!(art, "∘ •   • ∘\n• ∘   ∘ •\n");
    }
}
