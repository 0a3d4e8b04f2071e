//! Exact fractional-linear maps of the circle in the tangent half-angle
//! coordinate.
//!
//! A [`CircleMap`] is a 2x2 rational matrix up to positive scale acting on the
//! circle parameter by `t -> (a t + b) / (c t + d)`. Projections through an
//! interior point, their compositions, fixed-point classification and the
//! at-most-two inscribed polygons finder all live here. Fixed points of
//! hyperbolic maps are quadratic irrationals, represented exactly in
//! `Q(sqrt(D))` by [`QuadraticNumber`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::geometry::{convex_hull_indices, CirclePoint, Point};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MobiusError {
    NotInterior,
    Degenerate,
    NotConvexPosition,
    TooFewCrossings,
}

impl fmt::Display for MobiusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MobiusError::NotInterior => write!(f, "point is not strictly inside the unit circle"),
            MobiusError::Degenerate => write!(f, "matrix has zero determinant"),
            MobiusError::NotConvexPosition => write!(f, "points are not in convex position"),
            MobiusError::TooFewCrossings => write!(f, "need at least 3 crossing points"),
        }
    }
}

impl std::error::Error for MobiusError {}

/// Fractional-linear map of the circle parameter, stored as an integer matrix
/// normalized to content 1 with positive leading entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleMap {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl CircleMap {
    /// Builds a map from rational entries; fails when the determinant is zero.
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self, MobiusError> {
        let lcm = [&a, &b, &c, &d]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let scale = Rat::from_integer(lcm);
        let to_int = |r: &Rat| -> BigInt {
            let v = r * &scale;
            debug_assert!(v.denom().is_one());
            v.numer().clone()
        };
        let m = CircleMap { a: to_int(&a), b: to_int(&b), c: to_int(&c), d: to_int(&d) };
        if (&m.a * &m.d - &m.b * &m.c).is_zero() {
            return Err(MobiusError::Degenerate);
        }
        Ok(m.normalized())
    }

    pub fn identity() -> Self {
        CircleMap { a: BigInt::one(), b: BigInt::zero(), c: BigInt::zero(), d: BigInt::one() }
    }

    fn normalized(self) -> Self {
        let mut g = self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d);
        if g.is_zero() {
            g = BigInt::one();
        }
        let lead_negative = [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .find(|v| !v.is_zero())
            .map(|v| v.is_negative())
            .unwrap_or(false);
        if lead_negative {
            g = -g;
        }
        CircleMap { a: self.a / &g, b: self.b / &g, c: self.c / &g, d: self.d / &g }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Entries `(a, b, c, d)` of the normalized matrix.
    pub fn entries(&self) -> (Rat, Rat, Rat, Rat) {
        (
            Rat::from_integer(self.a.clone()),
            Rat::from_integer(self.b.clone()),
            Rat::from_integer(self.c.clone()),
            Rat::from_integer(self.d.clone()),
        )
    }

    /// Matrix product `self * rhs`, i.e. the map applying `rhs` first.
    pub fn mul(&self, rhs: &CircleMap) -> CircleMap {
        CircleMap {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
        .normalized()
    }

    /// Applies the map to a rational circle parameter.
    pub fn apply(&self, t: &CirclePoint) -> CirclePoint {
        match t {
            CirclePoint::Infinity => {
                if self.c.is_zero() {
                    CirclePoint::Infinity
                } else {
                    CirclePoint::Finite(Rat::new(self.a.clone(), self.c.clone()))
                }
            }
            CirclePoint::Finite(t) => {
                let den = Rat::from_integer(self.c.clone()) * t + Rat::from_integer(self.d.clone());
                if den.is_zero() {
                    CirclePoint::Infinity
                } else {
                    let num =
                        Rat::from_integer(self.a.clone()) * t + Rat::from_integer(self.b.clone());
                    CirclePoint::Finite(num / den)
                }
            }
        }
    }

    /// Applies the map to a parameter in `Q(sqrt(D))`.
    pub fn apply_quad(&self, t: &QuadParam) -> QuadParam {
        match t {
            QuadParam::Infinity => {
                if self.c.is_zero() {
                    QuadParam::Infinity
                } else {
                    QuadParam::Finite(QuadraticNumber::from_rat(Rat::new(
                        self.a.clone(),
                        self.c.clone(),
                    )))
                }
            }
            QuadParam::Finite(x) => {
                let c = QuadraticNumber::from_rat(Rat::from_integer(self.c.clone()));
                let d = QuadraticNumber::from_rat(Rat::from_integer(self.d.clone()));
                let a = QuadraticNumber::from_rat(Rat::from_integer(self.a.clone()));
                let b = QuadraticNumber::from_rat(Rat::from_integer(self.b.clone()));
                let den = c.mul(x).add(&d);
                if den.is_zero() {
                    QuadParam::Infinity
                } else {
                    QuadParam::Finite(a.mul(x).add(&b).div(&den))
                }
            }
        }
    }
}

/// The involution of the circle projecting each point through `p` to the
/// second intersection of the chord with the circle.
///
/// A chord with parameters `t, t'` passes through `p = (px, py)` exactly when
/// `A t t' + B (t + t') + C = 0` with `A = -(px + 1)`, `B = py`,
/// `C = px - 1`; solving for `t'` gives the matrix `[[-B, -C], [A, B]]`.
pub fn projection_map(p: &Point) -> Result<CircleMap, MobiusError> {
    if !p.in_unit_disk() {
        return Err(MobiusError::NotInterior);
    }
    let a = -(&p.x + Rat::one());
    let b = p.y.clone();
    let c = &p.x - Rat::one();
    CircleMap::new(-b.clone(), -c, a, b)
}

/// Composition in application order: `compose([f1, f2, f3]) = f3 . f2 . f1`.
pub fn compose(maps: &[CircleMap]) -> CircleMap {
    assert!(!maps.is_empty(), "compose of empty list");
    let mut acc = maps[0].clone();
    for m in &maps[1..] {
        acc = m.mul(&acc);
    }
    acc
}

/// Element of `Q(sqrt(D))`: `a + b * sqrt(d)` with `d` a positive
/// non-square integer, or a plain rational when `d` is absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticNumber {
    a: Rat,
    b: Rat,
    d: Option<BigInt>,
}

impl QuadraticNumber {
    pub fn from_rat(a: Rat) -> Self {
        QuadraticNumber { a, b: Rat::zero(), d: None }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat::rat_int(n))
    }

    /// Exact square root of a nonnegative rational. Detects perfect squares
    /// (then the result is rational); otherwise extracts the smooth square
    /// part of the radicand and keeps the rest under the root.
    pub fn sqrt(x: &Rat) -> Self {
        assert!(!x.is_negative(), "sqrt of negative rational");
        if x.is_zero() {
            return Self::from_rat(Rat::zero());
        }
        // sqrt(p/q) = sqrt(p*q) / q
        let m = x.numer() * x.denom();
        let (s, d) = extract_square(m);
        let coeff = Rat::new(s, x.denom().clone());
        if d.is_one() {
            Self::from_rat(coeff)
        } else {
            QuadraticNumber { a: Rat::zero(), b: coeff, d: Some(d) }
        }
    }

    pub fn parts(&self) -> (&Rat, &Rat) {
        (&self.a, &self.b)
    }

    /// The field radicand, `None` for rationals.
    pub fn radicand(&self) -> Option<&BigInt> {
        self.d.as_ref()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn normalize(mut self) -> Self {
        if self.b.is_zero() {
            self.d = None;
        }
        self
    }

    fn join_field(&self, other: &Self) -> Option<BigInt> {
        match (&self.d, &other.d) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixed quadratic fields");
                Some(x.clone())
            }
            (Some(x), None) => Some(x.clone()),
            (None, Some(y)) => Some(y.clone()),
            (None, None) => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.join_field(other);
        QuadraticNumber { a: &self.a + &other.a, b: &self.b + &other.b, d }.normalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let d = self.join_field(other);
        QuadraticNumber { a: &self.a - &other.a, b: &self.b - &other.b, d }.normalize()
    }

    pub fn neg(&self) -> Self {
        QuadraticNumber { a: -self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.join_field(other);
        let dd = d.clone().map(Rat::from_integer).unwrap_or_else(Rat::zero);
        let a = &self.a * &other.a + (&self.b * &other.b) * &dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        QuadraticNumber { a, b, d }.normalize()
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let d = self.join_field(other);
        let dd = d.clone().map(Rat::from_integer).unwrap_or_else(Rat::zero);
        // 1/(a + b sqrt(D)) = (a - b sqrt(D)) / (a^2 - b^2 D)
        let denom = &other.a * &other.a - (&other.b * &other.b) * &dd;
        let conj = QuadraticNumber { a: other.a.clone(), b: -other.b.clone(), d: d.clone() };
        let num = self.mul(&conj);
        QuadraticNumber { a: num.a / denom.clone(), b: num.b / denom, d }.normalize()
    }

    /// Exact sign: `-1`, `0` or `1`.
    pub fn sign(&self) -> i8 {
        let sa = rat::sign(&self.a);
        let sb = rat::sign(&self.b);
        if sb == 0 {
            return sa;
        }
        let d = self.d.as_ref().expect("irrational part without radicand");
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: compare a^2 with b^2 D.
        let lhs = &self.a * &self.a;
        let rhs = (&self.b * &self.b) * Rat::from_integer(d.clone());
        sa * rat::sign(&(lhs - rhs))
    }

    pub fn cmp_value(&self, other: &Self) -> std::cmp::Ordering {
        match self.sub(other).sign() {
            -1 => std::cmp::Ordering::Less,
            0 => std::cmp::Ordering::Equal,
            _ => std::cmp::Ordering::Greater,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = rat::to_f64(&self.a);
        if !self.b.is_zero() {
            let d = self.d.as_ref().unwrap();
            let df: f64 = d.to_string().parse().unwrap_or(f64::NAN);
            v += rat::to_f64(&self.b) * df.sqrt();
        }
        v
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", rat::format_rat(&self.a))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                rat::format_rat(&self.a),
                rat::format_rat(&self.b),
                self.d.as_ref().unwrap()
            )
        }
    }
}

/// Removes the smooth square part: returns `(s, d)` with `m = s^2 * d` and
/// `d` free of square factors below the trial-division bound.
fn extract_square(mut m: BigInt) -> (BigInt, BigInt) {
    assert!(m.is_positive());
    let mut s = BigInt::one();
    for f in 2u64..=1000 {
        let f2 = BigInt::from(f) * BigInt::from(f);
        if &f2 > &m {
            break;
        }
        while (&m % &f2).is_zero() {
            m /= &f2;
            s *= f;
        }
    }
    let r = m.sqrt();
    if &r * &r == m {
        s *= r;
        m = BigInt::one();
    }
    (s, m)
}

/// Circle parameter with values in `Q(sqrt(D))` or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadParam {
    Finite(QuadraticNumber),
    Infinity,
}

impl QuadParam {
    pub fn from_circle_point(t: &CirclePoint) -> Self {
        match t {
            CirclePoint::Infinity => QuadParam::Infinity,
            CirclePoint::Finite(t) => QuadParam::Finite(QuadraticNumber::from_rat(t.clone())),
        }
    }

    pub fn as_circle_point(&self) -> Option<CirclePoint> {
        match self {
            QuadParam::Infinity => Some(CirclePoint::Infinity),
            QuadParam::Finite(x) => x.as_rational().map(|r| CirclePoint::Finite(r.clone())),
        }
    }

    pub fn angle_f64(&self) -> f64 {
        match self {
            QuadParam::Infinity => std::f64::consts::PI,
            QuadParam::Finite(x) => 2.0 * x.to_f64().atan(),
        }
    }
}

/// Orientation of three distinct circle parameters in `Q(sqrt(D))`, via the
/// sign of the homogeneous Vandermonde product.
pub fn circle_orient_quad(a: &QuadParam, b: &QuadParam, c: &QuadParam) -> i8 {
    fn hom(p: &QuadParam) -> (QuadraticNumber, QuadraticNumber) {
        match p {
            QuadParam::Infinity => (QuadraticNumber::from_int(1), QuadraticNumber::from_int(0)),
            QuadParam::Finite(x) => (x.clone(), QuadraticNumber::from_int(1)),
        }
    }
    let (pa, qa) = hom(a);
    let (pb, qb) = hom(b);
    let (pc, qc) = hom(c);
    let f1 = pb.mul(&qa).sub(&pa.mul(&qb)).sign();
    let f2 = pc.mul(&qb).sub(&pb.mul(&qc)).sign();
    let f3 = pc.mul(&qa).sub(&pa.mul(&qc)).sign();
    f1 * f2 * f3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Conjugacy data of a circle map: kind, fixed points on the circle and the
/// multiplier (the derivative at the attracting fixed point; `r < 1` there).
#[derive(Debug, Clone)]
pub struct MapClass {
    pub kind: MapKind,
    /// For hyperbolic maps `[attracting, repelling]`; one entry for
    /// parabolic; empty for elliptic and identity.
    pub fixed_points: Vec<QuadParam>,
    pub multiplier: Option<QuadraticNumber>,
}

/// Classifies a circle map by the sign of `trace^2 - 4 det`.
pub fn classify(map: &CircleMap) -> Result<MapClass, MobiusError> {
    if map.is_identity() {
        return Ok(MapClass { kind: MapKind::Identity, fixed_points: vec![], multiplier: None });
    }
    let det = map.det();
    if det.is_zero() {
        return Err(MobiusError::Degenerate);
    }
    let tr = map.trace();
    let disc = &tr * &tr - BigInt::from(4) * &det;
    let (a, b, c, d) = map.entries();
    let det_q = QuadraticNumber::from_rat(Rat::from_integer(det.clone()));

    if disc.is_negative() {
        return Ok(MapClass { kind: MapKind::Elliptic, fixed_points: vec![], multiplier: None });
    }

    // Fixed parameters solve c t^2 + (d - a) t - b = 0; infinity is fixed
    // exactly when c = 0.
    let mut fixed: Vec<QuadParam> = Vec::new();
    if c.is_zero() {
        fixed.push(QuadParam::Infinity);
        if a != d {
            fixed.push(QuadParam::Finite(QuadraticNumber::from_rat(
                b.clone() / (d.clone() - a.clone()),
            )));
        }
    } else {
        let root = QuadraticNumber::sqrt(&Rat::from_integer(disc.clone()));
        let two_c = QuadraticNumber::from_rat(Rat::from_integer(BigInt::from(2)) * c.clone());
        let amd = QuadraticNumber::from_rat(a.clone() - d.clone());
        if disc.is_zero() {
            fixed.push(QuadParam::Finite(amd.div(&two_c)));
        } else {
            fixed.push(QuadParam::Finite(amd.add(&root).div(&two_c)));
            fixed.push(QuadParam::Finite(amd.sub(&root).div(&two_c)));
        }
    }

    if disc.is_zero() {
        debug_assert_eq!(fixed.len(), 1);
        return Ok(MapClass {
            kind: MapKind::Parabolic,
            fixed_points: fixed,
            multiplier: Some(QuadraticNumber::from_int(1)),
        });
    }

    // Hyperbolic: order the two fixed points as [attracting, repelling] by
    // comparing the squared eigenvalues lambda = c t + d (lambda = a at
    // infinity); the attracting one has the larger |lambda|.
    let eigen = |t: &QuadParam| -> QuadraticNumber {
        match t {
            QuadParam::Infinity => QuadraticNumber::from_rat(a.clone()),
            QuadParam::Finite(x) => QuadraticNumber::from_rat(c.clone())
                .mul(x)
                .add(&QuadraticNumber::from_rat(d.clone())),
        }
    };
    let l0 = eigen(&fixed[0]);
    let l1 = eigen(&fixed[1]);
    let sq0 = l0.mul(&l0);
    let sq1 = l1.mul(&l1);
    let att_sq = if sq0.cmp_value(&sq1) == std::cmp::Ordering::Greater {
        sq0
    } else {
        fixed.swap(0, 1);
        sq1
    };
    // Derivative at a fixed point: det / lambda^2.
    let multiplier = det_q.div(&att_sq);
    Ok(MapClass { kind: MapKind::Hyperbolic, fixed_points: fixed, multiplier: Some(multiplier) })
}

/// Result of the inscribed-polygon search: the accepted polygons (at most
/// two) and the conjugacy class of the composed projection map.
#[derive(Debug, Clone)]
pub struct TwoPolygonOutcome {
    /// Each polygon lists its vertex parameters counterclockwise, starting at
    /// a fixed point of the composed map; edge `k` passes through crossing
    /// `k` (in the counterclockwise relabeling of the input).
    pub polygons: Vec<Vec<QuadParam>>,
    pub class: MapClass,
    /// The crossing points in the counterclockwise order actually used.
    pub order: Vec<usize>,
}

/// Finds all inscribed `n`-gons having one of the given interior crossing
/// points on each edge. By the two-polygon lemma there are at most two.
pub fn inscribed_polygons(crossings: &[Point]) -> Result<TwoPolygonOutcome, MobiusError> {
    let n = crossings.len();
    if n < 3 {
        return Err(MobiusError::TooFewCrossings);
    }
    for p in crossings {
        if !p.in_unit_disk() {
            return Err(MobiusError::NotInterior);
        }
    }
    let refs: Vec<&Point> = crossings.iter().collect();
    let hull = convex_hull_indices(&refs).map_err(|_| MobiusError::NotConvexPosition)?;
    if hull.len() != n {
        return Err(MobiusError::NotConvexPosition);
    }

    let maps: Vec<CircleMap> = hull
        .iter()
        .map(|&i| projection_map(&crossings[i]))
        .collect::<Result<_, _>>()?;
    let f = compose(&maps);
    let class = classify(&f)?;

    let mut polygons = Vec::new();
    if class.kind != MapKind::Identity {
        for fp in &class.fixed_points {
            if let Some(poly) = orbit_polygon(fp, &maps) {
                polygons.push(poly);
            }
        }
    }
    debug_assert!(polygons.len() <= 2);
    Ok(TwoPolygonOutcome { polygons, class, order: hull })
}

/// Follows the orbit of a fixed point through the projections and accepts it
/// only when the `n` vertices are pairwise distinct and in strictly
/// counterclockwise cyclic order on the circle.
fn orbit_polygon(start: &QuadParam, maps: &[CircleMap]) -> Option<Vec<QuadParam>> {
    let n = maps.len();
    let mut verts = Vec::with_capacity(n);
    verts.push(start.clone());
    for k in 0..n - 1 {
        let next = maps[k].apply_quad(&verts[k]);
        verts.push(next);
    }
    debug_assert_eq!(&maps[n - 1].apply_quad(&verts[n - 1]), start);

    for i in 0..n {
        for j in i + 1..n {
            if verts[i] == verts[j] {
                return None;
            }
        }
    }
    // Counterclockwise cyclic order: sweep from the first vertex.
    for i in 1..n - 1 {
        if circle_orient_quad(&verts[0], &verts[i], &verts[i + 1]) != 1 {
            return None;
        }
    }
    Some(verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::arc_ccw_between;
    use crate::rat::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cp(n: i64, d: i64) -> CirclePoint {
        CirclePoint::from_frac(n, d)
    }

    #[test]
    fn projection_through_center_is_antipode() {
        let m = projection_map(&Point::from_ints(0, 0)).unwrap();
        assert_eq!(m.apply(&cp(1, 1)), cp(-1, 1));
        assert_eq!(m.apply(&cp(2, 1)), cp(-1, 2));
        assert_eq!(m.apply(&CirclePoint::Finite(Rat::zero())), CirclePoint::Infinity);
    }

    #[test]
    fn projection_through_half_sends_zero_to_infinity() {
        // Chord through (1,0) and (1/2,0) meets the circle again at (-1,0).
        let m = projection_map(&Point::from_fracs(1, 2, 0, 1)).unwrap();
        assert_eq!(m.apply(&CirclePoint::Finite(Rat::zero())), CirclePoint::Infinity);
        assert_eq!(m.apply(&CirclePoint::Infinity), CirclePoint::Finite(Rat::zero()));
    }

    #[test]
    fn projection_rejects_outside() {
        assert_eq!(projection_map(&Point::from_ints(1, 0)), Err(MobiusError::NotInterior));
        assert_eq!(projection_map(&Point::from_ints(2, 3)), Err(MobiusError::NotInterior));
    }

    fn random_interior(rng: &mut ChaCha8Rng) -> Point {
        loop {
            let p = Point::new(
                rat(rng.gen_range(-90..=90), 128),
                rat(rng.gen_range(-90..=90), 128),
            );
            if p.in_unit_disk() {
                return p;
            }
        }
    }

    fn random_param(rng: &mut ChaCha8Rng) -> CirclePoint {
        CirclePoint::Finite(rat(rng.gen_range(-500..=500), rng.gen_range(1..=40)))
    }

    #[test]
    fn projection_is_involution_and_chord_passes_through_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let p = random_interior(&mut rng);
            let m = projection_map(&p).unwrap();
            // Matrix square proportional to the identity.
            assert!(m.mul(&m).is_identity());
            let t = random_param(&mut rng);
            let t2 = m.apply(&t);
            assert_ne!(t, t2);
            // p lies strictly inside the chord [z(t), z(t')].
            let z1 = t.embed();
            let z2 = t2.embed();
            use crate::geometry::orient;
            assert_eq!(orient(&z1, &z2, &p), 0);
            let dot = (&p.x - &z1.x) * (&z2.x - &p.x) + (&p.y - &z1.y) * (&z2.y - &p.y);
            assert!(rat::sign(&dot) == 1, "p not interior to chord");
        }
    }

    #[test]
    fn compose_application_order() {
        let p = projection_map(&Point::from_fracs(1, 3, 0, 1)).unwrap();
        let q = projection_map(&Point::from_fracs(0, 1, 1, 3)).unwrap();
        let f = compose(&[p.clone(), q.clone()]);
        let t = cp(5, 7);
        assert_eq!(f.apply(&t), q.apply(&p.apply(&t)));
        assert_eq!(compose(&[p.clone()]), p);
        assert!(compose(&[p.clone(), p]).is_identity());
    }

    #[test]
    fn classify_antipodal_elliptic() {
        let m = projection_map(&Point::from_ints(0, 0)).unwrap();
        let cls = classify(&m).unwrap();
        assert_eq!(cls.kind, MapKind::Elliptic);
        assert!(cls.fixed_points.is_empty());
    }

    #[test]
    fn classify_identity() {
        let m = projection_map(&Point::from_fracs(1, 5, 1, 5)).unwrap();
        let id = m.mul(&m);
        assert_eq!(classify(&id).unwrap().kind, MapKind::Identity);
    }

    #[test]
    fn quadratic_number_arithmetic_and_sign() {
        let r2 = QuadraticNumber::sqrt(&rat(2, 1));
        assert_eq!(r2.radicand().unwrap(), &BigInt::from(2));
        // (1 + sqrt 2)(1 - sqrt 2) = -1
        let one = QuadraticNumber::from_int(1);
        let x = one.add(&r2);
        let y = one.sub(&r2);
        assert_eq!(x.mul(&y), QuadraticNumber::from_int(-1));
        assert_eq!(x.sign(), 1);
        assert_eq!(y.sign(), -1);
        // sqrt(18) = 3 sqrt(2)
        let r18 = QuadraticNumber::sqrt(&rat(18, 1));
        assert_eq!(r18, r2.mul(&QuadraticNumber::from_int(3)));
        // sqrt(49/4) = 7/2 exactly rational
        let r = QuadraticNumber::sqrt(&rat(49, 4));
        assert_eq!(r.as_rational(), Some(&rat(7, 2)));
        // 3 - 2 sqrt(2) > 0, 3 - 3 sqrt(2) < 0
        let t = QuadraticNumber::from_int(3).sub(&r2.mul(&QuadraticNumber::from_int(2)));
        assert_eq!(t.sign(), 1);
        let u = QuadraticNumber::from_int(3).sub(&r2.mul(&QuadraticNumber::from_int(3)));
        assert_eq!(u.sign(), -1);
    }

    #[test]
    fn quad_orientation_matches_rational_orientation() {
        let params =
            [cp(0, 1), cp(5, 3), cp(-2, 7), CirclePoint::Infinity, cp(9, 2), cp(-11, 4)];
        for a in &params {
            for b in &params {
                for c in &params {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let qa = QuadParam::from_circle_point(a);
                    let qb = QuadParam::from_circle_point(b);
                    let qc = QuadParam::from_circle_point(c);
                    let expected = if arc_ccw_between(a, b, c) { 1 } else { -1 };
                    assert_eq!(circle_orient_quad(&qa, &qb, &qc), expected);
                }
            }
        }
    }

    /// Two alternating inscribed triangles; the crossings of corresponding
    /// edges must give back exactly those triangles.
    #[test]
    fn two_triangles_recovered() {
        let ga = [cp(0, 1), cp(2, 1), cp(-3, 1)];
        let gc = [cp(1, 1), cp(7, 1), cp(-1, 1)];
        // Alternation around the circle: 0 < 1 < 2 < 7 < -3 < -1 (cyclically).
        let mut crossings = Vec::new();
        for k in 0..3 {
            let a1 = ga[k].embed();
            let a2 = ga[(k + 1) % 3].embed();
            let c1 = gc[k].embed();
            let c2 = gc[(k + 1) % 3].embed();
            let x = crate::geometry::line_intersection(&a1, &a2, &c1, &c2).unwrap();
            crossings.push(x);
        }
        let out = inscribed_polygons(&crossings).unwrap();
        assert_eq!(out.polygons.len(), 2);
        assert_eq!(out.class.kind, MapKind::Hyperbolic);
        let r = out.class.multiplier.clone().unwrap();
        assert_eq!(r.sub(&QuadraticNumber::from_int(1)).sign(), -1, "multiplier not < 1");
        assert_eq!(r.sign(), 1);

        // Every vertex parameter is rational and matches a generator vertex.
        let mut seen: Vec<CirclePoint> = Vec::new();
        for poly in &out.polygons {
            for v in poly {
                let c = v.as_circle_point().expect("vertex should be rational here");
                seen.push(c);
            }
        }
        for t in ga.iter().chain(gc.iter()) {
            assert!(seen.contains(t), "generator vertex {t} not recovered");
        }
    }
}
