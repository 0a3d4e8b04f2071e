//! Exact planar primitives: points, the rational circle parameterization,
//! the orientation predicate, convex hulls and general-position checks.

use std::fmt;

use num_traits::{One, Zero};

use crate::rat::{self, Rat};

/// Exact planar point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(rat::rat_int(x), rat::rat_int(y))
    }

    pub fn from_fracs(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point::new(rat::rat(xn, xd), rat::rat(yn, yd))
    }

    /// Squared distance from the origin.
    pub fn norm_sq(&self) -> Rat {
        &self.x * &self.x + &self.y * &self.y
    }

    /// `x^2 + y^2 < 1`, i.e. strictly inside the unit circle.
    pub fn in_unit_disk(&self) -> bool {
        self.norm_sq() < Rat::one()
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn scale(&self, k: &Rat) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    /// Lexicographic (x, then y) comparison.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", rat::format_rat(&self.x), rat::format_rat(&self.y))
    }
}

/// Sign of the orientation determinant of the ordered triple `(p, q, r)`:
/// `+1` counterclockwise, `0` collinear, `-1` clockwise.
pub fn orient(p: &Point, q: &Point, r: &Point) -> i8 {
    let d = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    rat::sign(&d)
}

/// Point on the unit circle given by its tangent half-angle parameter.
///
/// The parameter increases counterclockwise: `t = 0` is `(1, 0)`, `t = 1` is
/// `(0, 1)`, `t = Infinity` is `(-1, 0)` and `t = -1` is `(0, -1)`.
/// Comparisons across the point at infinity always go through three-point arc
/// predicates, never through raw `<` on parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CirclePoint {
    Finite(Rat),
    Infinity,
}

impl CirclePoint {
    pub fn finite(t: Rat) -> Self {
        CirclePoint::Finite(t)
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        CirclePoint::Finite(rat::rat(n, d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CirclePoint::Infinity)
    }

    /// Embedding into the plane: `((1 - t^2)/(1 + t^2), 2t/(1 + t^2))`,
    /// with the point at infinity mapping to `(-1, 0)`.
    pub fn embed(&self) -> Point {
        match self {
            CirclePoint::Infinity => Point::from_ints(-1, 0),
            CirclePoint::Finite(t) => {
                let t2 = t * t;
                let den = &t2 + Rat::one();
                let x = (Rat::one() - &t2) / den.clone();
                let y = (Rat::from_integer(2.into()) * t) / den;
                Point::new(x, y)
            }
        }
    }

    /// Homogeneous `(p, q)` representative with `t = p/q`; infinity is `(1, 0)`.
    /// The representative is normalized so that `q > 0`, or `p = 1, q = 0`.
    fn homogeneous(&self) -> (Rat, Rat) {
        match self {
            CirclePoint::Infinity => (Rat::one(), Rat::zero()),
            CirclePoint::Finite(t) => (t.clone(), Rat::one()),
        }
    }

    /// Approximate angle in `(-pi, pi]`, for floating-point consumers.
    pub fn angle_f64(&self) -> f64 {
        match self {
            CirclePoint::Infinity => std::f64::consts::PI,
            CirclePoint::Finite(t) => 2.0 * rat::to_f64(t).atan(),
        }
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CirclePoint::Infinity => write!(f, "1/0"),
            CirclePoint::Finite(t) => write!(f, "{}", rat::format_rat(t)),
        }
    }
}

/// Orientation of three distinct circle points, computed on the parameter
/// line: the sign of the homogeneous Vandermonde product. Agrees with
/// [`orient`] on the embedded points.
pub fn circle_orient(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint) -> i8 {
    let (pa, qa) = a.homogeneous();
    let (pb, qb) = b.homogeneous();
    let (pc, qc) = c.homogeneous();
    let f1 = &pb * &qa - &pa * &qb;
    let f2 = &pc * &qb - &pb * &qc;
    let f3 = &pc * &qa - &pa * &qc;
    rat::sign(&(f1 * f2 * f3))
}

/// True iff `b` lies strictly on the counterclockwise arc from `a` to `c`.
/// Requires the three points to be pairwise distinct.
pub fn arc_ccw_between(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint) -> bool {
    orient(&a.embed(), &b.embed(), &c.embed()) == 1
}

/// One labeled point of a configuration, optionally carrying an exact
/// on-circle witness and/or the `B` (must-be-on-circle) flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPoint {
    pub label: String,
    pub point: Point,
    /// Exact circle parameter; when present the coordinates equal
    /// `circle.embed()` exactly.
    pub circle: Option<CirclePoint>,
    /// Marks membership in the set `B` of points required on the circle.
    pub b_flag: bool,
}

impl LabeledPoint {
    pub fn new(label: impl Into<String>, point: Point) -> Self {
        LabeledPoint { label: label.into(), point, circle: None, b_flag: false }
    }

    pub fn on_circle(label: impl Into<String>, t: CirclePoint) -> Self {
        let point = t.embed();
        LabeledPoint { label: label.into(), point, circle: Some(t), b_flag: true }
    }

    pub fn with_b_flag(mut self, flag: bool) -> Self {
        self.b_flag = flag;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    DuplicateLabel(String),
    CircleMismatch(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::DuplicateLabel(l) => write!(f, "duplicate label {l:?}"),
            ConfigError::CircleMismatch(l) => {
                write!(f, "point {l:?} does not match its circle parameter")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

/// An ordered list of labeled points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    points: Vec<LabeledPoint>,
}

impl Configuration {
    pub fn new(points: Vec<LabeledPoint>) -> Result<Self, ConfigError> {
        let mut seen = std::collections::HashSet::new();
        for p in &points {
            if !seen.insert(p.label.clone()) {
                return Err(ConfigError::DuplicateLabel(p.label.clone()));
            }
            if let Some(c) = &p.circle {
                if c.embed() != p.point {
                    return Err(ConfigError::CircleMismatch(p.label.clone()));
                }
            }
        }
        Ok(Configuration { points })
    }

    /// Builds a configuration from bare points, labeling them `p0, p1, ...`.
    pub fn from_points(points: Vec<Point>) -> Self {
        let points = points
            .into_iter()
            .enumerate()
            .map(|(i, p)| LabeledPoint::new(format!("p{i}"), p))
            .collect();
        Configuration { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LabeledPoint> {
        self.points.iter()
    }

    pub fn point(&self, idx: usize) -> &Point {
        &self.points[idx].point
    }

    pub fn labeled(&self, idx: usize) -> &LabeledPoint {
        &self.points[idx]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(|p| p.label.as_str())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }

    pub fn get(&self, label: &str) -> Option<&LabeledPoint> {
        self.points.iter().find(|p| p.label == label)
    }

    /// The configuration with one labeled point removed.
    pub fn without(&self, label: &str) -> Configuration {
        Configuration {
            points: self.points.iter().filter(|p| p.label != label).cloned().collect(),
        }
    }

    /// Applies `f` to every coordinate pair (used by tests for rigid motions).
    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Configuration {
        Configuration {
            points: self
                .points
                .iter()
                .map(|p| LabeledPoint {
                    label: p.label.clone(),
                    point: f(&p.point),
                    circle: None,
                    b_flag: p.b_flag,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullError {
    TooFewPoints,
    AllCollinear,
}

impl fmt::Display for HullError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HullError::TooFewPoints => write!(f, "need at least 3 points"),
            HullError::AllCollinear => write!(f, "every triple is collinear"),
        }
    }
}

impl std::error::Error for HullError {}

/// Indices of the extreme points in counterclockwise order, starting from the
/// lexicographically smallest extreme point. Points in the relative interior
/// of a hull edge are not reported.
pub fn convex_hull_indices(points: &[&Point]) -> Result<Vec<usize>, HullError> {
    let n = points.len();
    if n < 3 {
        return Err(HullError::TooFewPoints);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| points[i].lex_cmp(points[j]));

    // Monotone chain with strict turns, so edge-interior points drop out.
    fn chain(points: &[&Point], order: impl Iterator<Item = usize>) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for i in order {
            while out.len() >= 2
                && orient(points[out[out.len() - 2]], points[out[out.len() - 1]], points[i]) <= 0
            {
                out.pop();
            }
            out.push(i);
        }
        out
    }
    let lower = chain(points, order.iter().copied());
    let upper = chain(points, order.iter().rev().copied());

    let mut hull = lower;
    hull.pop();
    hull.extend(upper);
    hull.pop();
    if hull.len() < 3 {
        return Err(HullError::AllCollinear);
    }
    Ok(hull)
}

/// Labels of the extreme points of `config`, counterclockwise, starting from
/// the lexicographically smallest extreme point.
pub fn convex_hull(config: &Configuration) -> Result<Vec<String>, HullError> {
    let pts: Vec<&Point> = config.iter().map(|p| &p.point).collect();
    let hull = convex_hull_indices(&pts)?;
    Ok(hull.into_iter().map(|i| config.labeled(i).label.clone()).collect())
}

/// True iff no triple of points is collinear.
pub fn in_general_position(config: &Configuration) -> bool {
    let pts: Vec<&Point> = config.iter().map(|p| &p.point).collect();
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(pts[i], pts[j], pts[k]) == 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Homogeneous representation of a line as coefficients `(a, b, c)` of
/// `a x + b y + c = 0`.
pub fn line_through(p: &Point, q: &Point) -> (Rat, Rat, Rat) {
    let a = &p.y - &q.y;
    let b = &q.x - &p.x;
    let c = &p.x * &q.y - &q.x * &p.y;
    (a, b, c)
}

/// Homogeneous point `(x, y, w)`; finite when `w != 0`.
pub type HomPoint = (Rat, Rat, Rat);

/// Intersection of two lines in homogeneous coordinates (cross product).
/// The zero triple means the lines coincide.
pub fn line_intersection_hom(l1: &(Rat, Rat, Rat), l2: &(Rat, Rat, Rat)) -> HomPoint {
    let (a1, b1, c1) = l1;
    let (a2, b2, c2) = l2;
    (b1 * c2 - c1 * b2, c1 * a2 - a1 * c2, a1 * b2 - b1 * a2)
}

/// Intersection point of lines `p1 p2` and `q1 q2`, or `None` when parallel
/// (or coincident).
pub fn line_intersection(p1: &Point, p2: &Point, q1: &Point, q2: &Point) -> Option<Point> {
    let l1 = line_through(p1, p2);
    let l2 = line_through(q1, q2);
    let (x, y, w) = line_intersection_hom(&l1, &l2);
    if w.is_zero() {
        None
    } else {
        Some(Point::new(x / w.clone(), y / w))
    }
}

/// Collinearity of three homogeneous points (any of them may be ideal).
pub fn hom_collinear(p: &HomPoint, q: &HomPoint, r: &HomPoint) -> bool {
    let det = &p.0 * (&q.1 * &r.2 - &q.2 * &r.1) - &p.1 * (&q.0 * &r.2 - &q.2 * &r.0)
        + &p.2 * (&q.0 * &r.1 - &q.1 * &r.0);
    det.is_zero()
}

/// Arithmetic centroid of a nonempty point set.
pub fn centroid(points: &[Point]) -> Point {
    let n = Rat::from_integer((points.len() as i64).into());
    let mut x = Rat::zero();
    let mut y = Rat::zero();
    for p in points {
        x += &p.x;
        y += &p.y;
    }
    Point::new(x / n.clone(), y / n)
}

/// Clips a convex polygon (ccw) by the closed halfplane left of the directed
/// line `a -> b`; returns the clipped polygon (possibly empty).
pub fn clip_polygon_left(poly: &[Point], a: &Point, b: &Point) -> Vec<Point> {
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let cur = &poly[i];
        let nxt = &poly[(i + 1) % n];
        let side_cur = orient(a, b, cur);
        let side_nxt = orient(a, b, nxt);
        if side_cur >= 0 {
            out.push(cur.clone());
        }
        if (side_cur > 0 && side_nxt < 0) || (side_cur < 0 && side_nxt > 0) {
            if let Some(x) = line_intersection(a, b, cur, nxt) {
                out.push(x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(0, 1)), 1);
        assert_eq!(orient(&pt(0, 0), &pt(1, 1), &pt(2, 2)), 0);
        assert_eq!(orient(&pt(0, 0), &pt(0, 1), &pt(1, 0)), -1);
    }

    #[test]
    fn orient_cyclic_antisymmetric() {
        let (p, q, r) = (pt(3, -1), pt(-2, 5), pt(7, 2));
        assert_eq!(orient(&p, &q, &r), orient(&q, &r, &p));
        assert_eq!(orient(&p, &q, &r), -orient(&q, &p, &r));
    }

    #[test]
    fn circle_embed_examples() {
        assert_eq!(CirclePoint::from_frac(0, 1).embed(), pt(1, 0));
        assert_eq!(CirclePoint::from_frac(1, 1).embed(), pt(0, 1));
        assert_eq!(CirclePoint::Infinity.embed(), pt(-1, 0));
        assert_eq!(CirclePoint::from_frac(-1, 1).embed(), pt(0, -1));
    }

    #[test]
    fn circle_embed_on_unit_circle() {
        for (n, d) in [(2, 3), (-7, 2), (100, 1), (-1, 999), (13, 13)] {
            let p = CirclePoint::from_frac(n, d).embed();
            assert_eq!(p.norm_sq(), Rat::one());
        }
    }

    #[test]
    fn arc_examples() {
        let t0 = CirclePoint::from_frac(0, 1);
        let t1 = CirclePoint::from_frac(1, 1);
        let tm1 = CirclePoint::from_frac(-1, 1);
        let ti = CirclePoint::Infinity;
        assert!(arc_ccw_between(&t0, &t1, &ti));
        assert!(!arc_ccw_between(&t0, &tm1, &ti));
        let th = CirclePoint::from_frac(1, 2);
        assert!(arc_ccw_between(&t0, &th, &t1));
    }

    #[test]
    fn circle_orient_matches_embedded_orient() {
        let params = [
            CirclePoint::from_frac(0, 1),
            CirclePoint::from_frac(5, 3),
            CirclePoint::from_frac(-2, 7),
            CirclePoint::Infinity,
            CirclePoint::from_frac(9, 2),
            CirclePoint::from_frac(-11, 4),
        ];
        for a in &params {
            for b in &params {
                for c in &params {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    assert_eq!(
                        circle_orient(a, b, c),
                        orient(&a.embed(), &b.embed(), &c.embed()),
                        "{a} {b} {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn hull_square_with_center() {
        let cfg = Configuration::new(vec![
            LabeledPoint::new("a", pt(0, 0)),
            LabeledPoint::new("b", pt(2, 0)),
            LabeledPoint::new("c", pt(2, 2)),
            LabeledPoint::new("d", pt(0, 2)),
            LabeledPoint::new("m", pt(1, 1)),
        ])
        .unwrap();
        assert_eq!(convex_hull(&cfg).unwrap(), vec!["a", "b", "c", "d"]);
    }

    #[test]
    fn hull_triangle() {
        let cfg = Configuration::from_points(vec![pt(0, 0), pt(3, 1), pt(1, 4)]);
        assert_eq!(convex_hull(&cfg).unwrap().len(), 3);
    }

    #[test]
    fn hull_edge_interior_point_excluded() {
        let cfg = Configuration::new(vec![
            LabeledPoint::new("a", pt(0, 0)),
            LabeledPoint::new("m", pt(1, 0)),
            LabeledPoint::new("b", pt(2, 0)),
            LabeledPoint::new("c", pt(1, 2)),
        ])
        .unwrap();
        assert_eq!(convex_hull(&cfg).unwrap(), vec!["a", "b", "c"]);
    }

    #[test]
    fn hull_all_collinear() {
        let cfg = Configuration::from_points(vec![pt(0, 0), pt(1, 1), pt(2, 2), pt(3, 3)]);
        assert_eq!(convex_hull(&cfg), Err(HullError::AllCollinear));
    }

    #[test]
    fn hull_invariant_under_translation_and_scaling() {
        let cfg = Configuration::from_points(vec![
            pt(0, 0),
            pt(4, 1),
            pt(3, 5),
            pt(-1, 3),
            pt(2, 2),
        ]);
        let h0 = convex_hull(&cfg).unwrap();
        let moved = cfg.map_points(|p| {
            Point::new(&p.x * rat(7, 3) + rat(11, 2), &p.y * rat(7, 3) - rat(4, 5))
        });
        let h1 = convex_hull(&moved).unwrap();
        assert_eq!(h0, h1);
    }

    #[test]
    fn general_position_examples() {
        let tri = Configuration::from_points(vec![pt(0, 0), pt(1, 0), pt(0, 1)]);
        assert!(in_general_position(&tri));
        let line = Configuration::from_points(vec![pt(0, 0), pt(1, 0), pt(2, 0)]);
        assert!(!in_general_position(&line));
    }

    #[test]
    fn line_intersection_basic() {
        let x = line_intersection(&pt(0, 0), &pt(2, 2), &pt(0, 2), &pt(2, 0)).unwrap();
        assert_eq!(x, pt(1, 1));
        assert!(line_intersection(&pt(0, 0), &pt(1, 0), &pt(0, 1), &pt(1, 1)).is_none());
    }

    #[test]
    fn clip_square() {
        let square = vec![pt(0, 0), pt(2, 0), pt(2, 2), pt(0, 2)];
        let clipped = clip_polygon_left(&square, &pt(1, -1), &pt(1, 3));
        // Left of the upward line x = 1 is x <= 1.
        assert!(clipped.iter().all(|p| p.x <= rat(1, 1)));
        assert_eq!(clipped.len(), 4);
    }
}
