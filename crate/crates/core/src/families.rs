//! Exact generators for the named point families: the minimally
//! uninscribable configurations `P_n`, star configurations, the non-Pascal
//! configuration, the one-point-deleted inscribed realizations of `P_n`, and
//! the interior-on-circle gadget.
//!
//! Every "sufficiently small" quantity of the source constructions is
//! replaced here by an exact rational choice followed by exact
//! post-verification; constructors retry over a deterministic knob schedule
//! until the verification passes.

use std::fmt;

use num_traits::{One, Zero};

use crate::geometry::{
    arc_ccw_between, centroid, clip_polygon_left, convex_hull, hom_collinear, in_general_position,
    line_intersection, line_intersection_hom, line_through, orient, CirclePoint, Configuration,
    HomPoint, LabeledPoint, Point,
};
use crate::mobius::projection_map;
use crate::order_type::same_order_type;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamiliesError {
    EpsilonTooLarge,
    SignConditionViolated,
    EmptyTriangle,
    ParallelLines,
    ConstructionFailed(&'static str),
}

impl fmt::Display for FamiliesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamiliesError::EpsilonTooLarge => write!(f, "offset fails post-verification"),
            FamiliesError::SignConditionViolated => {
                write!(f, "permutation violates the positive-sign condition")
            }
            FamiliesError::EmptyTriangle => write!(f, "placement triangle is empty or degenerate"),
            FamiliesError::ParallelLines => write!(f, "coincident lines in an intersection"),
            FamiliesError::ConstructionFailed(what) => write!(f, "construction failed: {what}"),
        }
    }
}

impl std::error::Error for FamiliesError {}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// via continued-fraction convergents.
fn rational_approx(x: f64, max_den: i64) -> Rat {
    let negative = x < 0.0;
    let mut x = x.abs();
    let (mut h0, mut k0, mut h1, mut k1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..40 {
        let a = x.floor();
        if a > 1e17 {
            break;
        }
        let ai = a as i64;
        let (h2, k2) = (ai.saturating_mul(h1).saturating_add(h0), ai.saturating_mul(k1).saturating_add(k0));
        if k2 > max_den || k2 < 0 {
            break;
        }
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
        let frac = x - a;
        if frac < 1e-12 {
            break;
        }
        x = 1.0 / frac;
    }
    let r = rat::rat(h1.max(0), k1.max(1));
    if negative {
        -r
    } else {
        r
    }
}

/// A rational circle parameter close to the given angle (radians).
fn circle_point_near_angle(theta: f64, max_den: i64) -> CirclePoint {
    let two_pi = std::f64::consts::TAU;
    let mut th = theta % two_pi;
    if th > std::f64::consts::PI {
        th -= two_pi;
    }
    if th <= -std::f64::consts::PI {
        th += two_pi;
    }
    CirclePoint::Finite(rational_approx((th / 2.0).tan(), max_den))
}

/// A rational circle point strictly inside the counterclockwise arc from
/// `from` to `to`, at chord fraction `frac` (0 < frac < 1, from-end to
/// to-end). `outside` must be a point strictly outside the closed arc; the
/// chord point at `frac` is projected through it back onto the circle,
/// which always lands inside the open arc.
fn point_on_arc(
    from: &CirclePoint,
    to: &CirclePoint,
    outside: &CirclePoint,
    frac: &Rat,
) -> CirclePoint {
    debug_assert!(frac > &Rat::zero() && frac < &Rat::one());
    debug_assert!(outside != from && outside != to && !arc_ccw_between(from, outside, to));
    let zf = from.embed();
    let zt = to.embed();
    let w = zf.add(&zt.sub(&zf).scale(frac));
    let proj = projection_map(&w).expect("chord interior point is inside the disk");
    let x = proj.apply(outside);
    debug_assert!(arc_ccw_between(from, &x, to));
    x
}

/// Parameters of the `P_n` construction.
#[derive(Debug, Clone)]
pub struct PnParams {
    pub n: usize,
    /// Rightward offset of the bisector lines from the chord crossings.
    pub epsilon: Rat,
    /// Barycentric weights for placing `d_i` in its triangle
    /// (crossing, intersection with the a-chord, intersection with the
    /// c-chord); `(1, 1, 1)` is the centroid.
    pub d_weights: (u32, u32, u32),
}

impl PnParams {
    pub fn new(n: usize) -> Self {
        PnParams { n, epsilon: rat::rat(1, 8), d_weights: (1, 1, 1) }
    }
}

/// The `2n` circle points `a_1, c_1, ..., a_n, c_n` of the `P_n` frame, in
/// counterclockwise order with strictly alternating labels.
pub fn pn_base_points(n: usize) -> (Vec<CirclePoint>, Vec<CirclePoint>) {
    assert!(n >= 3);
    let step = std::f64::consts::TAU / (n as f64);
    let mut a = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let base = -step / 4.0 + (i as f64) * step;
        a.push(circle_point_near_angle(base, 64));
        c.push(circle_point_near_angle(base + step / 2.0, 64));
    }
    // The approximation must preserve the strict cyclic pattern.
    let all: Vec<&CirclePoint> = a.iter().zip(c.iter()).flat_map(|(x, y)| [x, y]).collect();
    for i in 1..all.len() - 1 {
        assert!(
            arc_ccw_between(all[0], all[i], all[i + 1]),
            "base points lost their cyclic order"
        );
    }
    (a, c)
}

struct PnFrame {
    a: Vec<CirclePoint>,
    c: Vec<CirclePoint>,
    a_pts: Vec<Point>,
    c_pts: Vec<Point>,
    /// Chord crossings `p_i = (a_i a_{i+1}) x (c_i c_{i+1})`.
    crossings: Vec<Point>,
}

impl PnFrame {
    fn new(n: usize) -> Result<Self, FamiliesError> {
        let (a, c) = pn_base_points(n);
        let a_pts: Vec<Point> = a.iter().map(|t| t.embed()).collect();
        let c_pts: Vec<Point> = c.iter().map(|t| t.embed()).collect();
        let mut crossings = Vec::with_capacity(n);
        for i in 0..n {
            let j = (i + 1) % n;
            let x = line_intersection(&a_pts[i], &a_pts[j], &c_pts[i], &c_pts[j])
                .ok_or(FamiliesError::ParallelLines)?;
            crossings.push(x);
        }
        Ok(PnFrame { a, c, a_pts, c_pts, crossings })
    }
}

/// Directed line as a base point plus a direction vector.
#[derive(Debug, Clone)]
struct DirectedLine {
    base: Point,
    dir: Point,
}

impl DirectedLine {
    fn second(&self) -> Point {
        self.base.add(&self.dir)
    }

    /// Orientation of a point against the directed line: `+1` left.
    fn side(&self, p: &Point) -> i8 {
        orient(&self.base, &self.second(), p)
    }
}

fn intersect_lines(l1: &DirectedLine, l2: &DirectedLine) -> Option<Point> {
    line_intersection(&l1.base, &l1.second(), &l2.base, &l2.second())
}

/// Builds the hull scaffold of `P_n`: circle points `a_i, c_i`, bisector
/// lines `L_i` offset right of the crossings, and `b_i = L_i x L_{i-1}`.
fn pn_hull(params: &PnParams) -> Result<(PnFrame, Vec<DirectedLine>, Vec<Point>), FamiliesError> {
    let n = params.n;
    let frame = PnFrame::new(n)?;
    let mut lines = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        // Rationalized bisector of the two directed chord directions.
        let da = frame.a_pts[j].sub(&frame.a_pts[i]);
        let dc = frame.c_pts[j].sub(&frame.c_pts[i]);
        let norm = |p: &Point| {
            let (x, y) = (rat::to_f64(&p.x), rat::to_f64(&p.y));
            let len = (x * x + y * y).sqrt();
            (x / len, y / len)
        };
        let (ax, ay) = norm(&da);
        let (cx, cy) = norm(&dc);
        let dir = Point::new(rational_approx(ax + cx, 64), rational_approx(ay + cy, 64));
        if dir.x.is_zero() && dir.y.is_zero() {
            return Err(FamiliesError::ConstructionFailed("degenerate bisector"));
        }
        // Offset along the right normal of the direction.
        let right = Point::new(dir.y.clone(), -dir.x.clone());
        let base = frame.crossings[i].add(&right.scale(&params.epsilon));
        lines.push(DirectedLine { base, dir });
    }
    let mut b_pts = Vec::with_capacity(n);
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let b = intersect_lines(&lines[i], &lines[prev]).ok_or(FamiliesError::ParallelLines)?;
        b_pts.push(b);
    }
    // The offset must keep c_i and a_{i+1} strictly right of L_i.
    for i in 0..n {
        let j = (i + 1) % n;
        if lines[i].side(&frame.c_pts[i]) != -1 || lines[i].side(&frame.a_pts[j]) != -1 {
            return Err(FamiliesError::EpsilonTooLarge);
        }
    }
    Ok((frame, lines, b_pts))
}

fn weighted_point(weights: (u32, u32, u32), v: [&Point; 3]) -> Point {
    let (w0, w1, w2) = weights;
    let total = rat::rat_int((w0 + w1 + w2) as i64);
    v[0]
        .scale(&rat::rat_int(w0 as i64))
        .add(&v[1].scale(&rat::rat_int(w1 as i64)))
        .add(&v[2].scale(&rat::rat_int(w2 as i64)))
        .scale(&(Rat::one() / total))
}

fn assemble(
    names: &[(&str, usize)],
    groups: [&[Point]; 4],
    on_circle: [&[Option<CirclePoint>]; 4],
) -> Configuration {
    let mut pts = Vec::new();
    for (gi, (prefix, count)) in names.iter().enumerate() {
        for k in 0..*count {
            let label = format!("{prefix}{}", k + 1);
            let lp = match &on_circle[gi][k] {
                Some(t) => LabeledPoint::on_circle(label, t.clone()),
                None => LabeledPoint::new(label, groups[gi][k].clone()),
            };
            pts.push(lp);
        }
    }
    Configuration::new(pts).expect("fresh labels")
}

/// Verifies the hull of `config` is exactly the cyclic sequence `expected`.
fn hull_matches_cyclically(config: &Configuration, expected: &[String]) -> bool {
    let Ok(hull) = convex_hull(config) else { return false };
    if hull.len() != expected.len() {
        return false;
    }
    let Some(start) = hull.iter().position(|l| l == &expected[0]) else { return false };
    (0..hull.len()).all(|i| hull[(start + i) % hull.len()] == expected[i])
}

fn pn_expected_hull(n: usize) -> Vec<String> {
    let mut expected = Vec::with_capacity(3 * n);
    for i in 1..=n {
        expected.push(format!("a{i}"));
        expected.push(format!("b{i}"));
        expected.push(format!("c{i}"));
    }
    expected
}

/// Constructs `P_n` for the given parameters: `3n` extreme points
/// `a_i, b_i, c_i` (the `a`/`c` points exactly on the unit circle) and `n`
/// interior points `d_i`. Post-verified: hull order, the positivity
/// conditions on consecutive hull triples and on `(b_k, b_{k+1}, d_k)`, and
/// general position.
pub fn make_pn(params: &PnParams) -> Result<Configuration, FamiliesError> {
    let n = params.n;
    let (frame, lines, b_pts) = pn_hull(params)?;

    let mut d_pts = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let xa = intersect_lines(&lines[i], &DirectedLine {
            base: frame.a_pts[i].clone(),
            dir: frame.a_pts[j].sub(&frame.a_pts[i]),
        })
        .ok_or(FamiliesError::ParallelLines)?;
        let xc = intersect_lines(&lines[i], &DirectedLine {
            base: frame.c_pts[i].clone(),
            dir: frame.c_pts[j].sub(&frame.c_pts[i]),
        })
        .ok_or(FamiliesError::ParallelLines)?;
        d_pts.push(weighted_point(params.d_weights, [&frame.crossings[i], &xa, &xc]));
    }

    let a_circle: Vec<Option<CirclePoint>> = frame.a.iter().cloned().map(Some).collect();
    let c_circle: Vec<Option<CirclePoint>> = frame.c.iter().cloned().map(Some).collect();
    let none_b: Vec<Option<CirclePoint>> = vec![None; n];
    let none_d: Vec<Option<CirclePoint>> = vec![None; n];
    let mut config = assemble(
        &[("a", n), ("b", n), ("c", n), ("d", n)],
        [&frame.a_pts, &b_pts, &frame.c_pts, &d_pts],
        [&a_circle, &none_b, &c_circle, &none_d],
    );
    // b points are extreme: carry the B requirement without a circle witness.
    config = Configuration::new(
        config
            .iter()
            .map(|p| {
                let mut p = p.clone();
                p.b_flag = !p.label.starts_with('d');
                p
            })
            .collect(),
    )
    .unwrap();

    if !verify_pn(&config, n) {
        return Err(FamiliesError::EpsilonTooLarge);
    }
    Ok(config)
}

fn verify_pn(config: &Configuration, n: usize) -> bool {
    if !hull_matches_cyclically(config, &pn_expected_hull(n)) {
        return false;
    }
    if !in_general_position(config) {
        return false;
    }
    let get = |pfx: &str, i: usize| {
        let idx = ((i - 1) % n) + 1;
        config.get(&format!("{pfx}{idx}")).unwrap().point.clone()
    };
    for k in 1..=n {
        // (S): consecutive hull triples of each family are counterclockwise.
        for pfx in ["a", "b", "c"] {
            if orient(&get(pfx, k), &get(pfx, k + 1), &get(pfx, k + 2)) != 1 {
                return false;
            }
        }
        // (L): d_k lies strictly left of the directed line b_k -> b_{k+1}.
        if orient(&get("b", k), &get("b", k + 1), &get("d", k)) != 1 {
            return false;
        }
    }
    true
}

/// `P_n` with a default knob schedule: shrinks the offset (and varies the
/// interior placement weights) until the exact post-verification passes.
pub fn make_pn_default(n: usize) -> Configuration {
    let weights = [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (3, 1, 1)];
    for shrink in 0..8 {
        for w in weights {
            let params = PnParams {
                n,
                epsilon: rat::rat(1, 8 << shrink),
                d_weights: w,
            };
            if let Ok(cfg) = make_pn(&params) {
                return cfg;
            }
        }
    }
    panic!("no valid P_{n} within the knob schedule");
}

/// Sign of the permutation pattern `(sigma(k), sigma(k+1), sigma(k+2))`
/// (indices mod n): `(-1)^inversions`.
pub fn sign_triple(sigma: &[usize], k: usize) -> i8 {
    let n = sigma.len();
    let v = [sigma[k % n], sigma[(k + 1) % n], sigma[(k + 2) % n]];
    let mut inversions = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Parameters for a star configuration: a permutation satisfying the
/// positive-sign condition plus the `P_n` geometric knobs.
#[derive(Debug, Clone)]
pub struct StarParams {
    /// Permutation of `0..n`.
    pub sigma: Vec<usize>,
    pub epsilon: Rat,
    pub d_weights: (u32, u32, u32),
}

impl StarParams {
    pub fn new(sigma: Vec<usize>) -> Self {
        StarParams { sigma, epsilon: rat::rat(1, 8), d_weights: (1, 1, 1) }
    }
}

/// Constructs the star configuration for `sigma`: hull points as in `P_n`,
/// with `d_{sigma(k)}` in the triangle bounded by the three chords
/// `a_{sigma(k)} a_{sigma(k+1)}`, `b_{sigma(k)} b_{sigma(k+1)}`,
/// `c_{sigma(k)} c_{sigma(k+1)}`, on the positive side of the directed `b`
/// chord.
pub fn make_star(params: &StarParams) -> Result<Configuration, FamiliesError> {
    let n = params.sigma.len();
    if n < 3 {
        return Err(FamiliesError::ConstructionFailed("need n >= 3"));
    }
    let mut seen = vec![false; n];
    for &v in &params.sigma {
        if v >= n || seen[v] {
            return Err(FamiliesError::ConstructionFailed("not a permutation"));
        }
        seen[v] = true;
    }
    for k in 0..n {
        if sign_triple(&params.sigma, k) != 1 {
            return Err(FamiliesError::SignConditionViolated);
        }
    }
    let pn_params = PnParams { n, epsilon: params.epsilon.clone(), d_weights: params.d_weights };
    let (frame, _lines, b_pts) = pn_hull(&pn_params)?;

    let mut d_pts: Vec<Option<Point>> = vec![None; n];
    for k in 0..n {
        let cur = params.sigma[k];
        let nxt = params.sigma[(k + 1) % n];
        let la = (frame.a_pts[cur].clone(), frame.a_pts[nxt].clone());
        let lb = (b_pts[cur].clone(), b_pts[nxt].clone());
        let lc = (frame.c_pts[cur].clone(), frame.c_pts[nxt].clone());
        let vab = line_intersection(&la.0, &la.1, &lb.0, &lb.1)
            .ok_or(FamiliesError::EmptyTriangle)?;
        let vac = line_intersection(&la.0, &la.1, &lc.0, &lc.1)
            .ok_or(FamiliesError::EmptyTriangle)?;
        let vbc = line_intersection(&lb.0, &lb.1, &lc.0, &lc.1)
            .ok_or(FamiliesError::EmptyTriangle)?;
        let d = weighted_point(params.d_weights, [&vac, &vab, &vbc]);
        // Condition (L'): positive side of the directed b chord.
        if orient(&lb.0, &lb.1, &d) != 1 {
            return Err(FamiliesError::EmptyTriangle);
        }
        d_pts[cur] = Some(d);
    }
    let d_pts: Vec<Point> = d_pts.into_iter().map(Option::unwrap).collect();

    let a_circle: Vec<Option<CirclePoint>> = frame.a.iter().cloned().map(Some).collect();
    let c_circle: Vec<Option<CirclePoint>> = frame.c.iter().cloned().map(Some).collect();
    let none_b: Vec<Option<CirclePoint>> = vec![None; n];
    let none_d: Vec<Option<CirclePoint>> = vec![None; n];
    let config = assemble(
        &[("a", n), ("b", n), ("c", n), ("d", n)],
        [&frame.a_pts, &b_pts, &frame.c_pts, &d_pts],
        [&a_circle, &none_b, &c_circle, &none_d],
    );
    if !hull_matches_cyclically(&config, &pn_expected_hull(n)) || !in_general_position(&config) {
        return Err(FamiliesError::EpsilonTooLarge);
    }
    Ok(config)
}

/// `make_star` with the default knob schedule.
pub fn make_star_default(sigma: Vec<usize>) -> Result<Configuration, FamiliesError> {
    let weights = [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (3, 1, 1)];
    let mut last = FamiliesError::ConstructionFailed("empty schedule");
    for shrink in 0..8 {
        for w in weights {
            let params = StarParams {
                sigma: sigma.clone(),
                epsilon: rat::rat(1, 8 << shrink),
                d_weights: w,
            };
            match make_star(&params) {
                Ok(cfg) => return Ok(cfg),
                Err(e @ FamiliesError::SignConditionViolated) => return Err(e),
                Err(e @ FamiliesError::ConstructionFailed(_)) => return Err(e),
                Err(e) => last = e,
            }
        }
    }
    Err(last)
}

/// The Pascal intersection points of six circle points under the fixed
/// pairing `(p1 p5, p2 p4)`, `(p1 p6, p3 p4)`, `(p2 p6, p3 p5)`, in
/// homogeneous coordinates.
fn pascal_crossings_hom(pts: &[Point; 6]) -> Result<[HomPoint; 3], FamiliesError> {
    let line = |i: usize, j: usize| line_through(&pts[i], &pts[j]);
    let pairs = [((0, 4), (1, 3)), ((0, 5), (2, 3)), ((1, 5), (2, 4))];
    let mut out = Vec::with_capacity(3);
    for ((a, b), (c, d)) in pairs {
        let x = line_intersection_hom(&line(a, b), &line(c, d));
        if x.0.is_zero() && x.1.is_zero() && x.2.is_zero() {
            return Err(FamiliesError::ParallelLines);
        }
        out.push(x);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Checks the Pascal collinearity of six distinct concyclic points: the
/// three crossings `l(p1 p5) x l(p2 p4)`, `l(p1 p6) x l(p3 p4)`,
/// `l(p2 p6) x l(p3 p5)` are collinear (projectively, so crossings at
/// infinity are handled).
pub fn pascal_collinear(six: &[CirclePoint; 6]) -> Result<bool, FamiliesError> {
    let pts: Vec<Point> = six.iter().map(|t| t.embed()).collect();
    let pts: [Point; 6] = pts.try_into().unwrap();
    let c = pascal_crossings_hom(&pts)?;
    Ok(hom_collinear(&c[0], &c[1], &c[2]))
}

fn hom_to_point(h: &HomPoint) -> Option<Point> {
    if h.2.is_zero() {
        None
    } else {
        Some(Point::new(&h.0 / &h.2, &h.1 / &h.2))
    }
}

/// The non-Pascal configuration: six extreme points in convex position (not
/// concyclic) and three interior points pinned to the cells at the pairwise
/// crossings `q1 ~ l(p1 p5) x l(p2 p4)`, `q2 ~ l(p1 p6) x l(p3 p4)`,
/// `q3 ~ l(p2 p6) x l(p3 p5)`, with `(q1, q2, q3)` positively oriented.
///
/// Reading of the source figure frozen here: the convex order of the
/// extreme points is `p1, p2, p5, p4, p6, p3`, so all three crossings fall
/// inside the hull. In the concyclic limit the crossings are collinear and
/// the interior points, displaced perpendicular to the crossing line with
/// the alternating side pattern `(-, +, -)` along it, are forced into
/// negative orientation; one radially perturbed vertex makes the crossings
/// positively oriented and flips the triple to `+1`. The displacements are
/// kept far smaller than the perturbation so every `(q_i, q_j, p_k)`
/// orientation still matches the crossing-line separation of the hexagon.
pub fn make_non_pascal() -> Configuration {
    // Circle parameters in convex position p1, p2, p5, p4, p6, p3.
    let params: [CirclePoint; 6] = [
        CirclePoint::from_frac(7, 80),    // p1
        CirclePoint::from_frac(7, 10),    // p2
        CirclePoint::from_frac(-7, 15),   // p3
        CirclePoint::from_frac(-80, 7),   // p4
        CirclePoint::from_frac(15, 7),    // p5
        CirclePoint::from_frac(-10, 7),   // p6
    ];
    let base: Vec<Point> = params.iter().map(|t| t.embed()).collect();
    let base_arr: [Point; 6] = base.clone().try_into().unwrap();
    let base_hom = pascal_crossings_hom(&base_arr).expect("generic hexagon");
    let base_c: Vec<Point> = base_hom
        .iter()
        .map(|h| hom_to_point(h).expect("finite crossings"))
        .collect();
    assert_eq!(orient(&base_c[0], &base_c[1], &base_c[2]), 0, "concyclic crossings align");

    // Rank the crossings along their common line; the middle one is nudged
    // to the opposite side of the two outer ones.
    let dir = base_c[1].sub(&base_c[0]);
    let perp = Point::new(-dir.y.clone(), dir.x.clone());
    let score = |p: &Point| &p.x * &dir.x + &p.y * &dir.y;
    let mut order: Vec<usize> = vec![0, 1, 2];
    order.sort_by(|&i, &j| score(&base_c[i]).cmp(&score(&base_c[j])));

    let nudges = |flip: i64| -> Vec<Point> {
        let mut out = vec![Point::from_ints(0, 0); 3];
        for (rank, &i) in order.iter().enumerate() {
            let side = if rank == 1 { 1 } else { -1 } * flip;
            out[i] = perp.scale(&rat::rat(side, 1 << 20));
        }
        out
    };
    // In the concyclic limit the nudged triple must take the orientation the
    // crossing line forces; the fixture then contradicts it.
    let mut flip = 1i64;
    let forced = {
        let nv = nudges(flip);
        let q: Vec<Point> = (0..3).map(|i| base_c[i].add(&nv[i])).collect();
        orient(&q[0], &q[1], &q[2])
    };
    assert!(forced != 0);
    if forced != -1 {
        flip = -flip;
    }
    let nudge_v = nudges(flip);

    for delta_den in [50i64, 80, 120, 200] {
        for delta_sign in [1i64, -1] {
            let delta = rat::rat(delta_sign, delta_den);
            if let Some(cfg) = try_non_pascal(&base, &base_c, &nudge_v, delta) {
                return cfg;
            }
        }
    }
    panic!("non-Pascal construction failed for every knob choice");
}

fn try_non_pascal(
    base: &[Point],
    base_c: &[Point],
    nudge_v: &[Point],
    delta: Rat,
) -> Option<Configuration> {
    // Push p1 radially off the circle; the others stay concyclic.
    let mut pts: Vec<Point> = base.to_vec();
    pts[0] = pts[0].scale(&(Rat::one() + delta));
    let arr: [Point; 6] = pts.clone().try_into().unwrap();
    let hom = pascal_crossings_hom(&arr).ok()?;
    let c: Vec<Point> = hom.iter().map(hom_to_point).collect::<Option<_>>()?;
    let q: Vec<Point> = (0..3).map(|i| c[i].add(&nudge_v[i])).collect();
    // The perturbation dominates the displacements and flips the triple.
    if orient(&q[0], &q[1], &q[2]) != 1 {
        return None;
    }
    // Every line through two interior points must separate the six extreme
    // points exactly as the crossing line of the concyclic limit does.
    for i in 0..3 {
        for j in i + 1..3 {
            for pk in pts.iter() {
                if orient(&q[i], &q[j], pk) != orient(&base_c[i], &base_c[j], pk) {
                    return None;
                }
            }
        }
    }

    let mut labeled = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        labeled.push(LabeledPoint::new(format!("p{}", i + 1), p.clone()).with_b_flag(true));
    }
    for (i, p) in q.iter().enumerate() {
        labeled.push(LabeledPoint::new(format!("q{}", i + 1), p.clone()));
    }
    let config = Configuration::new(labeled).unwrap();
    if !in_general_position(&config) {
        return None;
    }
    let hull = convex_hull(&config).ok()?;
    if hull.len() != 6 || hull.iter().any(|l| l.starts_with('q')) {
        return None;
    }
    Some(config)
}

/// Which point of `P_n` to delete in [`make_pn_minus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnDeletion {
    A1,
    B1,
    Dn,
}

impl PnDeletion {
    pub fn label(&self, n: usize) -> String {
        match self {
            PnDeletion::A1 => "a1".into(),
            PnDeletion::B1 => "b1".into(),
            PnDeletion::Dn => format!("d{n}"),
        }
    }
}

/// An exactly inscribed realization of `P_n` minus one point (`a_1`, `b_1`
/// or `d_n`): every extreme point carries an exact circle parameter, and the
/// order type matches the plain deletion from [`make_pn_default`].
pub fn make_pn_minus(n: usize, removed: PnDeletion) -> Result<Configuration, FamiliesError> {
    let reference = make_pn_default(n).without(&removed.label(n));
    for attempt in 0..10 {
        let candidate = match removed {
            PnDeletion::B1 => build_minus_b1(n, attempt),
            PnDeletion::A1 | PnDeletion::Dn => build_minus_a1_dn(n, removed, attempt),
        };
        let Some(candidate) = candidate else { continue };
        if !in_general_position(&candidate) {
            continue;
        }
        // Every hull point must carry its exact circle witness.
        let Ok(hull) = convex_hull(&candidate) else { continue };
        if !hull.iter().all(|l| candidate.get(l).unwrap().circle.is_some()) {
            continue;
        }
        if same_order_type(&candidate, &reference).unwrap_or(false) {
            return Ok(candidate);
        }
    }
    Err(FamiliesError::ConstructionFailed("inscribed deletion schedule exhausted"))
}

/// The `b_k` chain of the deletion constructions: each next point is the
/// projection of the previous one through the crossing `p_{k-1}`, retreated
/// clockwise within its arc by the given fraction.
fn chain_b_(frame: &PnFrame, b1: CirclePoint, count: usize, retreat: &Rat) -> Option<Vec<CirclePoint>> {
    let n = frame.a.len();
    let mut b = vec![b1];
    for k in 1..count {
        let prev = &b[k - 1];
        let proj = projection_map(&frame.crossings[(k - 1) % n]).ok()?;
        let raw = proj.apply(prev);
        let ak = &frame.a[k % n];
        let ck = &frame.c[k % n];
        // raw lands in the open arc (a_k, c_k); retreat clockwise within it.
        if !arc_ccw_between(ak, &raw, ck) {
            return None;
        }
        let frac = Rat::one() - retreat.clone();
        let next = point_on_arc(ak, &raw, ck, &frac);
        b.push(next);
    }
    Some(b)
}

fn d_triangle(
    frame: &PnFrame,
    b_from: &Point,
    b_to: &Point,
    k: usize,
) -> Option<Point> {
    let n = frame.a.len();
    let j = (k + 1) % n;
    let va = line_intersection(b_from, b_to, &frame.a_pts[k], &frame.a_pts[j])?;
    let vc = line_intersection(b_from, b_to, &frame.c_pts[k], &frame.c_pts[j])?;
    let d = centroid(&[frame.crossings[k].clone(), va, vc]);
    // Left of b_k -> b_{k+1}, right of both chord directions.
    (orient(b_from, b_to, &d) == 1
        && orient(&frame.a_pts[j], &frame.a_pts[k], &d) == 1
        && orient(&frame.c_pts[j], &frame.c_pts[k], &d) == 1)
        .then_some(d)
}

fn build_minus_b1(n: usize, attempt: u32) -> Option<Configuration> {
    let frame = PnFrame::new(n).ok()?;
    let retreat = rat::rat(1, 16 << attempt);
    let b1 = point_on_arc(&frame.a[0], &frame.c[0], &frame.a[1], &rat::rat(1, 2 + attempt as i64));
    // One extra link: b_{n+1} lands back in the first arc and scaffolds d_n.
    let b = chain_b_(&frame, b1, n + 1, &retreat)?;

    let b_pts: Vec<Point> = b.iter().map(|t| t.embed()).collect();
    let mut d_pts = Vec::with_capacity(n);
    for k in 0..n {
        d_pts.push(d_triangle(&frame, &b_pts[k], &b_pts[k + 1], k)?);
    }

    let mut pts = Vec::new();
    for i in 0..n {
        pts.push(LabeledPoint::on_circle(format!("a{}", i + 1), frame.a[i].clone()));
    }
    // b_1 and b_{n+1} are scaffolding only.
    for k in 1..n {
        pts.push(LabeledPoint::on_circle(format!("b{}", k + 1), b[k].clone()));
    }
    for i in 0..n {
        pts.push(LabeledPoint::on_circle(format!("c{}", i + 1), frame.c[i].clone()));
    }
    for (i, d) in d_pts.iter().enumerate() {
        pts.push(LabeledPoint::new(format!("d{}", i + 1), d.clone()));
    }
    Configuration::new(pts).ok()
}

fn build_minus_a1_dn(n: usize, removed: PnDeletion, attempt: u32) -> Option<Configuration> {
    let frame = PnFrame::new(n).ok()?;
    let retreat = rat::rat(1, 16 << attempt);

    // b_1 close enough to a_1 that line(a_n, b_1) crosses line(a_1, a_2)
    // strictly right of line(c_n, c_1).
    let mut chosen = None;
    for close in 0..12 {
        let frac = rat::rat(1, 4 << (close + attempt));
        let b1 = point_on_arc(&frame.a[0], &frame.c[0], &frame.a[1], &frac);
        let x = line_intersection(
            &frame.a_pts[n - 1],
            &b1.embed(),
            &frame.a_pts[0],
            &frame.a_pts[1],
        )?;
        if orient(&frame.c_pts[n - 1], &frame.c_pts[0], &x) == -1 {
            chosen = Some(b1);
            break;
        }
    }
    let b1 = chosen?;
    let b = chain_b_(&frame, b1, n, &retreat)?;
    let b_pts: Vec<Point> = b.iter().map(|t| t.embed()).collect();

    let mut d_pts = Vec::with_capacity(n);
    for k in 0..n - 1 {
        d_pts.push(d_triangle(&frame, &b_pts[k], &b_pts[k + 1], k)?);
    }
    // d_n: the triangle left of (b_n -> b_1), (b_1 -> a_n), (c_1 -> c_n),
    // clipped by the halfplane left of (a_1 -> a_2).
    let w1 = line_intersection(&b_pts[n - 1], &b_pts[0], &frame.c_pts[0], &frame.c_pts[n - 1])?;
    let w2 = line_intersection(&b_pts[0], &frame.a_pts[n - 1], &frame.c_pts[0], &frame.c_pts[n - 1])?;
    let tri = [b_pts[0].clone(), w1, w2];
    // Consistency: the region really is left of all three lines.
    let c0 = centroid(&tri);
    if orient(&b_pts[n - 1], &b_pts[0], &c0) != 1 {
        return None;
    }
    let clipped = clip_polygon_left(&tri, &frame.a_pts[0], &frame.a_pts[1]);
    if clipped.len() < 3 {
        return None;
    }
    let dn = centroid(&clipped);
    for (from, to) in [
        (&b_pts[n - 1], &b_pts[0]),
        (&frame.a_pts[0], &frame.a_pts[1]),
        (&b_pts[0], &frame.a_pts[n - 1]),
        (&frame.c_pts[0], &frame.c_pts[n - 1]),
    ] {
        if orient(from, to, &dn) != 1 {
            return None;
        }
    }
    d_pts.push(dn);

    let mut pts = Vec::new();
    let skip_a1 = removed == PnDeletion::A1;
    for i in 0..n {
        if skip_a1 && i == 0 {
            continue;
        }
        pts.push(LabeledPoint::on_circle(format!("a{}", i + 1), frame.a[i].clone()));
    }
    for (k, t) in b.iter().enumerate() {
        pts.push(LabeledPoint::on_circle(format!("b{}", k + 1), t.clone()));
    }
    for i in 0..n {
        pts.push(LabeledPoint::on_circle(format!("c{}", i + 1), frame.c[i].clone()));
    }
    let d_count = if removed == PnDeletion::Dn { n - 1 } else { n };
    for (i, d) in d_pts.iter().take(d_count).enumerate() {
        pts.push(LabeledPoint::new(format!("d{}", i + 1), d.clone()));
    }
    Configuration::new(pts).ok()
}

/// Convergence signs of the three opposite-side line pairs of a hexagon
/// given in counterclockwise convex position: for pair `k` (sides
/// `(P_k, P_{k+1})` and `(P_{k+3}, P_{k+4})`), the sign is `+1` when the
/// crossing of the two lines lies ahead of the directed side `P_k ->
/// P_{k+1}`, `-1` when behind, and `None` when the lines are parallel or a
/// side is degenerate.
///
/// For six concyclic points each sign compares two opposite arc sums, and
/// the three comparisons cancel; the alternating patterns `(+, -, +)` and
/// `(-, +, -)` would force a cyclic chain of strict inequalities summing to
/// a full turn on both sides, so they cannot occur on a circle.
pub fn opposite_side_convergence(hexagon: &[Point; 6]) -> Option<[i8; 3]> {
    let mut signs = [0i8; 3];
    for k in 0..3 {
        let (p1, p2) = (&hexagon[k], &hexagon[(k + 1) % 6]);
        let (q1, q2) = (&hexagon[k + 3], &hexagon[(k + 4) % 6]);
        let z = line_intersection(p1, p2, q1, q2)?;
        // Position of the crossing along the directed side p1 -> p2.
        let d = p2.sub(p1);
        let num = &(z.sub(p1)).x * &d.x + &(z.sub(p1)).y * &d.y;
        let den = &d.x * &d.x + &d.y * &d.y;
        let tau = num / den;
        signs[k] = if tau > Rat::one() {
            1
        } else if tau < Rat::zero() {
            -1
        } else {
            return None;
        };
    }
    Some(signs)
}

/// The 9-point interior-on-circle gadget: a convex hexagon of interior
/// points whose three opposite-side line pairs converge in the alternating
/// pattern `(+, -, +)` (impossible for concyclic points), surrounded by
/// three extreme points, each placed beyond the corresponding crossing on
/// the far side of both of its lines. Those cell memberships transfer the
/// convergence pattern to every realization of the order type, so no
/// realization can have the six interior points on a circle.
pub fn make_interior_circle_gadget() -> Configuration {
    let hexagon: [Point; 6] = [
        Point::from_fracs(12397, 10000, -2561, 10000),
        Point::from_fracs(1619, 10000, 11046, 10000),
        Point::from_fracs(-2821, 10000, 14314, 10000),
        Point::from_fracs(-13778, 10000, 974, 10000),
        Point::from_fracs(-9864, 10000, -6154, 10000),
        Point::from_fracs(7323, 10000, -5385, 10000),
    ];
    let outer = [
        Point::from_fracs(-2647, 200, 1923, 100),
        Point::from_fracs(2363, 250, -497, 200),
        Point::from_fracs(-10567, 1000, -8743, 1000),
    ];
    // Interior labels: uppercase and lowercase alternate around the hexagon.
    let interior_labels = ["A", "b", "C", "a", "B", "c"];

    let signs = opposite_side_convergence(&hexagon).expect("generic hexagon");
    assert_eq!(signs, [1, -1, 1], "gadget must carry the alternating pattern");
    let centroid_hex = centroid(&hexagon.clone().map(|p| p));
    for (k, pk) in outer.iter().enumerate() {
        let (p1, p2) = (&hexagon[k], &hexagon[(k + 1) % 6]);
        let (q1, q2) = (&hexagon[k + 3], &hexagon[(k + 4) % 6]);
        // Far side of both lines from the hexagon: the cell beyond the
        // crossing, which pins the convergence sign in any realization.
        assert_eq!(orient(p1, p2, pk), -orient(p1, p2, &centroid_hex));
        assert_eq!(orient(q1, q2, pk), -orient(q1, q2, &centroid_hex));
    }

    let mut pts = Vec::new();
    for (k, p) in outer.iter().enumerate() {
        pts.push(LabeledPoint::new(format!("p{}", k + 1), p.clone()));
    }
    for (label, p) in interior_labels.iter().zip(hexagon.iter()) {
        pts.push(LabeledPoint::new(*label, p.clone()));
    }
    let config = Configuration::new(pts).expect("fresh labels");

    assert!(in_general_position(&config), "gadget must be simple");
    let mut hull = convex_hull(&config).expect("triangle hull");
    hull.sort();
    assert_eq!(hull, vec!["p1", "p2", "p3"], "only the p points are extreme");
    let interior = Configuration::new(
        config.iter().filter(|p| !p.label.starts_with('p')).cloned().collect(),
    )
    .unwrap();
    assert_eq!(convex_hull(&interior).unwrap().len(), 6, "interior points in convex position");
    config
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order_type::{canonical_code_of, chirotope, contains_suborder};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pn_structure() {
        let p3 = make_pn_default(3);
        assert_eq!(p3.len(), 12);
        let hull = convex_hull(&p3).unwrap();
        assert_eq!(hull.len(), 9);
        for d in ["d1", "d2", "d3"] {
            assert!(!hull.contains(&d.to_string()));
        }
    }

    #[test]
    fn pn_hull_order_b_between_a_and_c() {
        let p3 = make_pn_default(3);
        assert!(hull_matches_cyclically(&p3, &pn_expected_hull(3)));
    }

    #[test]
    fn pn_stable_under_epsilon() {
        let p1 = make_pn(&PnParams { n: 3, epsilon: rat::rat(1, 16), d_weights: (1, 1, 1) })
            .unwrap();
        let p2 = make_pn(&PnParams { n: 3, epsilon: rat::rat(1, 32), d_weights: (1, 1, 1) })
            .unwrap();
        assert_eq!(canonical_code_of(&p1).unwrap(), canonical_code_of(&p2).unwrap());
    }

    #[test]
    fn pn_conditions_up_to_6() {
        for n in 3..=6 {
            let pn = make_pn_default(n);
            assert!(verify_pn(&pn, n), "P_{n} conditions");
        }
    }

    #[test]
    fn sign_triple_values() {
        assert_eq!(sign_triple(&[0, 1, 2], 0), 1);
        assert_eq!(sign_triple(&[1, 0, 2], 0), -1);
        assert_eq!(sign_triple(&[2, 0, 1], 0), 1);
    }

    #[test]
    fn star_identity_matches_pn() {
        let sigma: Vec<usize> = (0..4).collect();
        let star = make_star_default(sigma).unwrap();
        let pn = make_pn_default(4);
        assert!(same_order_type(&star, &pn).unwrap());
    }

    #[test]
    fn star_rotation_accepted_transposition_rejected() {
        assert!(make_star_default(vec![1, 2, 0]).is_ok());
        assert_eq!(
            make_star_default(vec![1, 0, 2]),
            Err(FamiliesError::SignConditionViolated)
        );
    }

    #[test]
    fn pascal_on_random_concyclic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let mut ts: Vec<Rat> = Vec::new();
            while ts.len() < 6 {
                let t = rat::rat(rng.gen_range(-400..=400), rng.gen_range(1..=40));
                if !ts.contains(&t) {
                    ts.push(t);
                }
            }
            let six: [CirclePoint; 6] =
                ts.into_iter().map(CirclePoint::Finite).collect::<Vec<_>>().try_into().unwrap();
            assert_eq!(pascal_collinear(&six), Ok(true));
        }
    }

    #[test]
    fn pascal_negative_control() {
        // Perturbing one point off the circle breaks collinearity in general.
        let six: [CirclePoint; 6] = [
            CirclePoint::from_frac(7, 80),
            CirclePoint::from_frac(7, 10),
            CirclePoint::from_frac(-7, 15),
            CirclePoint::from_frac(-80, 7),
            CirclePoint::from_frac(15, 7),
            CirclePoint::from_frac(-10, 7),
        ];
        let mut pts: Vec<Point> = six.iter().map(|t| t.embed()).collect();
        pts[0] = pts[0].scale(&rat::rat(51, 50));
        let arr: [Point; 6] = pts.try_into().unwrap();
        let c = pascal_crossings_hom(&arr).unwrap();
        assert!(!hom_collinear(&c[0], &c[1], &c[2]));
    }

    #[test]
    fn non_pascal_fixture() {
        let cfg = make_non_pascal();
        assert_eq!(cfg.len(), 9);
        let hull = convex_hull(&cfg).unwrap();
        assert_eq!(hull.len(), 6);
        let q = ["q1", "q2", "q3"].map(|l| cfg.get(l).unwrap().point.clone());
        assert_eq!(orient(&q[0], &q[1], &q[2]), 1);
    }

    #[test]
    fn pn_minus_b1() {
        let cfg = make_pn_minus(3, PnDeletion::B1).unwrap();
        assert_eq!(cfg.len(), 11);
    }

    #[test]
    fn pn_minus_a1_and_dn() {
        for removed in [PnDeletion::A1, PnDeletion::Dn] {
            let cfg = make_pn_minus(3, removed).unwrap();
            assert_eq!(cfg.len(), 11, "{removed:?}");
        }
    }

    #[test]
    fn pn_containment_small() {
        let p3 = chirotope(&make_pn_default(3)).unwrap();
        let inj = contains_suborder(&p3, &p3);
        assert!(inj.is_some(), "P_3 contains itself");
    }

    #[test]
    fn gadget_fixture() {
        let cfg = make_interior_circle_gadget();
        assert_eq!(cfg.len(), 9);
    }

    #[test]
    fn alternating_convergence_never_concyclic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let mut ts: Vec<Rat> = Vec::new();
            while ts.len() < 6 {
                let t = rat::rat(rng.gen_range(-300..=300), rng.gen_range(1..=30));
                if !ts.contains(&t) {
                    ts.push(t);
                }
            }
            ts.sort();
            let z: Vec<Point> = ts.iter().map(|t| CirclePoint::Finite(t.clone()).embed()).collect();
            let hex: [Point; 6] = z.try_into().unwrap();
            if let Some(signs) = opposite_side_convergence(&hex) {
                assert_ne!(signs, [1, -1, 1], "alternating pattern on a circle");
                assert_ne!(signs, [-1, 1, -1], "alternating pattern on a circle");
            }
        }
    }

}
