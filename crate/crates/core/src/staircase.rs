//! Function representations of configurations with at most two interior
//! points, and the constructive inscription of staircase pairs.
//!
//! A staircase pair of degree `(n1, n2)` is a pair of monotone functions
//! `psi_l, psi_r : [n1] -> {0, ..., n2}` with `psi_l >= psi_r` pointwise.
//! Every simple configuration whose interior points are covered by two
//! distinguished points `L`, `R` has such a representation, and conversely
//! every staircase pair is realized by an inscribed configuration in general
//! position. The inscription here replaces the proof-style "sufficiently
//! small interval" choices by exact feasible-interval computations on the
//! circle parameter line, so the whole construction stays in `Q`.

use std::fmt;

use num_traits::Zero;

use crate::geometry::{
    centroid, convex_hull, in_general_position, orient, CirclePoint, Configuration, LabeledPoint,
    Point,
};
use crate::mobius::{projection_map, CircleMap};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StaircaseError {
    InvalidPair,
    CoverageError,
    DegenerateLine,
    TooManyInterior,
    UnknownLabel(String),
    NotSimple,
    /// Two points tie in the sweep around the ordering center; cannot happen
    /// for inputs satisfying the preconditions.
    AmbiguousOrder,
}

impl fmt::Display for StaircaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StaircaseError::InvalidPair => write!(f, "not a valid staircase pair"),
            StaircaseError::CoverageError => {
                write!(f, "an interior point is not among the distinguished points")
            }
            StaircaseError::DegenerateLine => {
                write!(f, "a third point lies on the distinguished line")
            }
            StaircaseError::TooManyInterior => write!(f, "more than 2 interior points"),
            StaircaseError::UnknownLabel(l) => write!(f, "unknown label {l:?}"),
            StaircaseError::NotSimple => write!(f, "configuration has a collinear triple"),
            StaircaseError::AmbiguousOrder => write!(f, "ambiguous sweep order around center"),
        }
    }
}

impl std::error::Error for StaircaseError {}

/// Pair of monotone functions `(psi_l, psi_r)`; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StaircasePair {
    pub n1: usize,
    pub n2: usize,
    pub psi_l: Vec<usize>,
    pub psi_r: Vec<usize>,
}

impl StaircasePair {
    pub fn new(n2: usize, psi_l: Vec<usize>, psi_r: Vec<usize>) -> Self {
        let n1 = psi_l.len();
        StaircasePair { n1, n2, psi_l, psi_r }
    }

    /// Conditions (i) and (ii): both functions are monotonically increasing
    /// (weakly), values stay within `0..=n2`, and `psi_l >= psi_r` pointwise.
    pub fn is_valid(&self) -> bool {
        if self.psi_l.len() != self.n1 || self.psi_r.len() != self.n1 {
            return false;
        }
        let monotone = |v: &[usize]| v.windows(2).all(|w| w[0] <= w[1]);
        monotone(&self.psi_l)
            && monotone(&self.psi_r)
            && self.psi_l.iter().all(|&x| x <= self.n2)
            && self.psi_r.iter().all(|&x| x <= self.n2)
            && self.psi_l.iter().zip(&self.psi_r).all(|(l, r)| l >= r)
    }

    /// Textual form: `n1 n2`, then the `psi_l` values, then the `psi_r`
    /// values, one line each.
    pub fn to_text(&self) -> String {
        let line = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        format!("{} {}\n{}\n{}\n", self.n1, self.n2, line(&self.psi_l), line(&self.psi_r))
    }

    pub fn from_text(text: &str) -> Result<Self, StaircaseError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or(StaircaseError::InvalidPair)?;
        let mut it = header.split_whitespace();
        let n1: usize =
            it.next().and_then(|s| s.parse().ok()).ok_or(StaircaseError::InvalidPair)?;
        let n2: usize =
            it.next().and_then(|s| s.parse().ok()).ok_or(StaircaseError::InvalidPair)?;
        let parse_vals = |line: Option<&str>| -> Result<Vec<usize>, StaircaseError> {
            line.unwrap_or("")
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| StaircaseError::InvalidPair))
                .collect()
        };
        let psi_l = if n1 == 0 { Vec::new() } else { parse_vals(lines.next())? };
        let psi_r = if n1 == 0 { Vec::new() } else { parse_vals(lines.next())? };
        if psi_l.len() != n1 || psi_r.len() != n1 {
            return Err(StaircaseError::InvalidPair);
        }
        let pair = StaircasePair { n1, n2, psi_l, psi_r };
        if !pair.is_valid() {
            return Err(StaircaseError::InvalidPair);
        }
        Ok(pair)
    }
}

/// Validates conditions (i) and (ii) for a candidate pair.
pub fn validate_staircase(pair: &StaircasePair) -> bool {
    pair.is_valid()
}

/// All ordered pairs of distinct labels `(L, R)` whose set covers the
/// interior points. A configuration with `k` interior points yields
/// `n(n-1)`, `2(n-1)` or `2` pairs for `k = 0, 1, 2`.
pub fn distinguished_pairs(
    config: &Configuration,
) -> Result<Vec<(String, String)>, StaircaseError> {
    let labels: Vec<String> = config.labels().map(str::to_owned).collect();
    let interior: Vec<String> = if config.len() < 3 {
        Vec::new()
    } else {
        if !in_general_position(config) {
            return Err(StaircaseError::NotSimple);
        }
        let hull = convex_hull(config).map_err(|_| StaircaseError::NotSimple)?;
        labels.iter().filter(|l| !hull.contains(l)).cloned().collect()
    };
    if interior.len() > 2 {
        return Err(StaircaseError::TooManyInterior);
    }
    let mut out = Vec::new();
    for a in &labels {
        for b in &labels {
            if a == b {
                continue;
            }
            if interior.iter().all(|i| i == a || i == b) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// The function representation of `config` with respect to the distinguished
/// labels `l` and `r`.
///
/// Points are ordered clockwise around the midpoint of segment `LR`,
/// starting from `L`; `psi_a(i)` counts the points strictly below line `LR`
/// and strictly right of the directed line from `A` through the `i`-th upper
/// point. No rigid motion is performed: "above" means left of the directed
/// line `L -> R`.
pub fn function_representation(
    config: &Configuration,
    l: &str,
    r: &str,
) -> Result<StaircasePair, StaircaseError> {
    let il = config.index_of(l).ok_or_else(|| StaircaseError::UnknownLabel(l.to_owned()))?;
    let ir = config.index_of(r).ok_or_else(|| StaircaseError::UnknownLabel(r.to_owned()))?;
    if il == ir {
        return Err(StaircaseError::UnknownLabel(r.to_owned()));
    }
    if config.len() >= 3 {
        if !in_general_position(config) {
            return Err(StaircaseError::NotSimple);
        }
        let hull = convex_hull(config).map_err(|_| StaircaseError::NotSimple)?;
        for lab in config.labels() {
            if lab != l && lab != r && !hull.iter().any(|h| h == lab) {
                return Err(StaircaseError::CoverageError);
            }
        }
    }
    let pl = config.point(il).clone();
    let pr = config.point(ir).clone();

    let mut upper: Vec<usize> = Vec::new();
    let mut lower: Vec<usize> = Vec::new();
    for i in 0..config.len() {
        if i == il || i == ir {
            continue;
        }
        match orient(&pl, &pr, config.point(i)) {
            1 => upper.push(i),
            -1 => lower.push(i),
            _ => return Err(StaircaseError::DegenerateLine),
        }
    }

    // Clockwise around the midpoint of LR, starting from L: the upper points
    // come first in clockwise order, then the lower points.
    let c = centroid(&[pl.clone(), pr.clone()]);
    let sweep = |ids: &mut Vec<usize>| -> Result<(), StaircaseError> {
        let mut tie = false;
        ids.sort_by(|&x, &y| match orient(&c, config.point(x), config.point(y)) {
            -1 => std::cmp::Ordering::Less,
            1 => std::cmp::Ordering::Greater,
            _ => {
                tie = true;
                std::cmp::Ordering::Equal
            }
        });
        if tie {
            Err(StaircaseError::AmbiguousOrder)
        } else {
            Ok(())
        }
    };
    sweep(&mut upper)?;
    sweep(&mut lower)?;

    let count_right = |a: &Point, i: usize| -> usize {
        lower.iter().filter(|&&q| orient(a, config.point(i), config.point(q)) == -1).count()
    };
    let psi_l: Vec<usize> = upper.iter().map(|&i| count_right(&pl, i)).collect();
    let psi_r: Vec<usize> = upper.iter().map(|&i| count_right(&pr, i)).collect();

    let pair = StaircasePair { n1: upper.len(), n2: lower.len(), psi_l, psi_r };
    debug_assert!(pair.is_valid(), "representation violates staircase conditions");
    Ok(pair)
}

/// An inscribed realization together with its distinguished labels.
#[derive(Debug, Clone)]
pub struct InscribedStaircase {
    pub config: Configuration,
    pub l_label: String,
    pub r_label: String,
}

/// Upper-semicircle events of the construction: the points `p_i` and the
/// reflections of the lower points through `L` and `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Event {
    P(usize),
    Ql(usize),
    Qr(usize),
}

/// The precedence forced by the target pair on the upper-semicircle events:
/// the chains of each family plus, for every `i`, exactly `psi_a(i)`
/// reflections of kind `a` clockwise-before `p_i`. Transitively closed.
struct EventOrder {
    n1: usize,
    n2: usize,
    before: Vec<Vec<bool>>,
}

impl EventOrder {
    fn id(&self, e: Event) -> usize {
        match e {
            Event::P(i) => i - 1,
            Event::Ql(j) => self.n1 + j - 1,
            Event::Qr(j) => self.n1 + self.n2 + j - 1,
        }
    }

    fn new(pair: &StaircasePair) -> Self {
        let (n1, n2) = (pair.n1, pair.n2);
        let m = n1 + 2 * n2;
        let mut order = EventOrder { n1, n2, before: vec![vec![false; m]; m] };
        let mut edges: Vec<(Event, Event)> = Vec::new();
        for i in 1..n1 {
            edges.push((Event::P(i), Event::P(i + 1)));
        }
        for j in 1..n2 {
            edges.push((Event::Ql(j), Event::Ql(j + 1)));
            edges.push((Event::Qr(j), Event::Qr(j + 1)));
        }
        for i in 1..=n1 {
            let (vl, vr) = (pair.psi_l[i - 1], pair.psi_r[i - 1]);
            if vl >= 1 {
                edges.push((Event::Ql(vl), Event::P(i)));
            }
            if vl < n2 {
                edges.push((Event::P(i), Event::Ql(vl + 1)));
            }
            if vr >= 1 {
                edges.push((Event::Qr(vr), Event::P(i)));
            }
            if vr < n2 {
                edges.push((Event::P(i), Event::Qr(vr + 1)));
            }
        }
        for (a, b) in edges {
            let (x, y) = (order.id(a), order.id(b));
            order.before[x][y] = true;
        }
        for k in 0..m {
            for a in 0..m {
                if order.before[a][k] {
                    for b in 0..m {
                        if order.before[k][b] {
                            order.before[a][b] = true;
                        }
                    }
                }
            }
        }
        order
    }
}

/// Open interval on the upper-semicircle parameter line `(0, infinity)`;
/// `hi = None` means unbounded above.
#[derive(Debug, Clone)]
struct UpperInterval {
    lo: Rat,
    hi: Option<Rat>,
}

struct Builder {
    order: EventOrder,
    /// Parameter of each placed upper event.
    placed: Vec<Option<Rat>>,
    /// Lower-semicircle parameter of each placed `q_j`.
    q_params: Vec<Option<Rat>>,
    f_l: CircleMap,
    f_r: CircleMap,
    attempt: u32,
}

impl Builder {
    fn bounds(&self, e: Event) -> UpperInterval {
        let id = self.order.id(e);
        let mut lo = Rat::zero();
        let mut hi: Option<Rat> = None;
        for (other, t) in self.placed.iter().enumerate() {
            let Some(t) = t else { continue };
            if self.order.before[other][id] {
                if hi.as_ref().map_or(true, |h| t < h) {
                    hi = Some(t.clone());
                }
            } else if self.order.before[id][other] && *t > lo {
                lo = t.clone();
            }
        }
        UpperInterval { lo, hi }
    }

    /// Deterministic choice inside an open interval; the schedule moves the
    /// pick on retries so any finite bad set is eventually avoided.
    fn pick(&self, iv: &UpperInterval) -> Rat {
        let k = self.attempt as i64;
        match &iv.hi {
            Some(hi) => {
                assert!(iv.lo < *hi, "empty placement interval");
                &iv.lo + (hi - &iv.lo) * rat::rat(1, k + 2)
            }
            None => &iv.lo + rat::rat(1, k + 1),
        }
    }

    /// Chooses the lower-semicircle parameter of `q_j` so that both of its
    /// reflections land inside their required gaps.
    fn place_q(&mut self, j: usize) {
        let bl = self.bounds(Event::Ql(j));
        let br = self.bounds(Event::Qr(j));
        // Pull each upper constraint back through the monotone involutive
        // reflection maps. A zero lower endpoint is the semicircle boundary
        // and pulls back to "no constraint"; a missing upper endpoint pulls
        // back to the boundary u < 0.
        let mut lo: Option<Rat> = None;
        let mut hi = Rat::zero();
        for (map, iv) in [(&self.f_l, &bl), (&self.f_r, &br)] {
            if !iv.lo.is_zero() {
                let u = apply_finite(map, &iv.lo);
                if lo.as_ref().map_or(true, |cur| u > *cur) {
                    lo = Some(u);
                }
            }
            if let Some(h) = &iv.hi {
                let u = apply_finite(map, h);
                if u < hi {
                    hi = u;
                }
            }
        }
        let k = self.attempt as i64;
        let u = match lo {
            Some(lo) => {
                assert!(lo < hi, "empty q placement interval");
                &lo + (&hi - &lo) * rat::rat(1, k + 2)
            }
            None => &hi - rat::rat(k + 1, 1),
        };
        let tl = apply_finite(&self.f_l, &u);
        let tr = apply_finite(&self.f_r, &u);
        self.place(Event::Ql(j), tl);
        self.place(Event::Qr(j), tr);
        self.q_params[j - 1] = Some(u);
    }

    fn place_p(&mut self, i: usize) {
        let iv = self.bounds(Event::P(i));
        let t = self.pick(&iv);
        self.place(Event::P(i), t);
    }

    fn place(&mut self, e: Event, t: Rat) {
        let id = self.order.id(e);
        debug_assert!(self.placed[id].is_none());
        self.placed[id] = Some(t);
    }
}

fn apply_finite(map: &CircleMap, t: &Rat) -> Rat {
    match map.apply(&CirclePoint::Finite(t.clone())) {
        CirclePoint::Finite(u) => u,
        CirclePoint::Infinity => unreachable!("reflection hit the parameter pole"),
    }
}

/// Like [`inscribe_staircase`] but leaves the distinguished points at their
/// interior anchors `(-1/2, 0)` and `(1/2, 0)` even when they are extreme
/// (no push-out). Exposed for the verification suites.
pub fn inscribe_staircase_raw(pair: &StaircasePair) -> Result<InscribedStaircase, StaircaseError> {
    build(pair, false)
}

/// Constructs an inscribed realization of a staircase pair: general
/// position, the given pair as its function representation with respect to
/// the returned labels, and every extreme point exactly on the unit circle.
pub fn inscribe_staircase(pair: &StaircasePair) -> Result<InscribedStaircase, StaircaseError> {
    build(pair, true)
}

fn build(pair: &StaircasePair, push_out: bool) -> Result<InscribedStaircase, StaircaseError> {
    if !pair.is_valid() {
        return Err(StaircaseError::InvalidPair);
    }
    let (n1, n2) = (pair.n1, pair.n2);

    // Degenerate degrees: all points on one open semicircle, anchors at
    // (-1, 0) and (1, 0) on the circle. No collinear triple can involve
    // three circle points, so general position is automatic.
    if n1 == 0 || n2 == 0 {
        let mut pts = vec![
            LabeledPoint::on_circle("L", CirclePoint::Infinity),
            LabeledPoint::on_circle("R", CirclePoint::Finite(Rat::zero())),
        ];
        let count = n1.max(n2);
        for i in 1..=count {
            let t = if n2 == 0 {
                rat::rat_int((count - i + 1) as i64)
            } else {
                rat::rat_int(-(i as i64))
            };
            pts.push(LabeledPoint::on_circle(format!("p{i}"), CirclePoint::Finite(t)));
        }
        let config = Configuration::new(pts).expect("fresh labels");
        return Ok(InscribedStaircase { config, l_label: "L".into(), r_label: "R".into() });
    }

    let l_pt = Point::from_fracs(-1, 2, 0, 1);
    let r_pt = Point::from_fracs(1, 2, 0, 1);
    let f_l = projection_map(&l_pt).expect("anchor inside disk");
    let f_r = projection_map(&r_pt).expect("anchor inside disk");

    for attempt in 0..24 {
        let order = EventOrder::new(pair);
        let m = n1 + 2 * n2;
        let mut builder = Builder {
            order,
            placed: vec![None; m],
            q_params: vec![None; n2],
            f_l: f_l.clone(),
            f_r: f_r.clone(),
            attempt,
        };
        let mut placed_q = 0usize;
        for i in 1..=n1 {
            while placed_q < pair.psi_l[i - 1] {
                placed_q += 1;
                builder.place_q(placed_q);
            }
            builder.place_p(i);
        }
        while placed_q < n2 {
            placed_q += 1;
            builder.place_q(placed_q);
        }

        let l_extreme = pair.psi_l.iter().all(|&v| v == n2);
        let r_extreme = pair.psi_r.iter().all(|&v| v == 0);
        let mut pts = Vec::with_capacity(n1 + n2 + 2);
        if push_out && l_extreme {
            pts.push(LabeledPoint::on_circle("L", CirclePoint::Infinity));
        } else {
            pts.push(LabeledPoint::new("L", l_pt.clone()));
        }
        if push_out && r_extreme {
            pts.push(LabeledPoint::on_circle("R", CirclePoint::Finite(Rat::zero())));
        } else {
            pts.push(LabeledPoint::new("R", r_pt.clone()));
        }
        for i in 1..=n1 {
            let t = builder.placed[builder.order.id(Event::P(i))].clone().unwrap();
            pts.push(LabeledPoint::on_circle(format!("p{i}"), CirclePoint::Finite(t)));
        }
        for j in 1..=n2 {
            let u = builder.q_params[j - 1].clone().unwrap();
            pts.push(LabeledPoint::on_circle(format!("p{}", n1 + j), CirclePoint::Finite(u)));
        }
        let config = Configuration::new(pts).expect("fresh labels");
        if in_general_position(&config) {
            return Ok(InscribedStaircase { config, l_label: "L".into(), r_label: "R".into() });
        }
        // Accidental collinearity through an anchor: retry with the next
        // interval fractions. Only finitely many parameters are bad.
    }
    unreachable!("no general-position realization within the retry schedule");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::enumerate_staircase_pairs;

    fn pair(n2: usize, l: &[usize], r: &[usize]) -> StaircasePair {
        StaircasePair::new(n2, l.to_vec(), r.to_vec())
    }

    #[test]
    fn validation() {
        assert!(pair(2, &[0, 0], &[0, 0]).is_valid());
        assert!(!pair(2, &[2, 1], &[0, 0]).is_valid(), "psi_l not increasing");
        assert!(!pair(2, &[0, 1], &[1, 1]).is_valid(), "psi_l < psi_r");
        assert!(!pair(1, &[2], &[0]).is_valid(), "value above n2");
        assert!(pair(0, &[0, 0, 0], &[0, 0, 0]).is_valid());
    }

    #[test]
    fn text_roundtrip() {
        let p = pair(3, &[1, 2, 2], &[0, 1, 2]);
        let t = p.to_text();
        assert_eq!(StaircasePair::from_text(&t).unwrap(), p);
        let empty = pair(2, &[], &[]);
        assert_eq!(StaircasePair::from_text(&empty.to_text()).unwrap(), empty);
    }

    #[test]
    fn degenerate_degrees() {
        let up = inscribe_staircase(&pair(0, &[0, 0, 0], &[0, 0, 0])).unwrap();
        assert_eq!(up.config.len(), 5);
        assert!(in_general_position(&up.config));
        let rep = function_representation(&up.config, "L", "R").unwrap();
        assert_eq!(rep, pair(0, &[0, 0, 0], &[0, 0, 0]));

        let down = inscribe_staircase(&pair(2, &[], &[])).unwrap();
        let rep = function_representation(&down.config, "L", "R").unwrap();
        assert_eq!(rep, pair(2, &[], &[]));
    }

    #[test]
    fn smallest_nontrivial_case() {
        let p = pair(1, &[0], &[0]);
        let ins = inscribe_staircase(&p).unwrap();
        assert_eq!(ins.config.len(), 4);
        assert!(in_general_position(&ins.config));
        let rep = function_representation(&ins.config, &ins.l_label, &ins.r_label).unwrap();
        assert_eq!(rep, p);
    }

    #[test]
    fn square_case_pushes_both_anchors_out() {
        let p = pair(1, &[1], &[0]);
        let ins = inscribe_staircase(&p).unwrap();
        let l = ins.config.get("L").unwrap();
        let r = ins.config.get("R").unwrap();
        assert!(l.circle.is_some() && r.circle.is_some());
        let rep = function_representation(&ins.config, "L", "R").unwrap();
        assert_eq!(rep, p);
    }

    #[test]
    fn roundtrip_all_pairs_up_to_degree_5() {
        for n in 0..=5 {
            for m in 0..=n {
                for p in enumerate_staircase_pairs(m, n - m) {
                    let ins = inscribe_staircase(&p).unwrap();
                    assert!(in_general_position(&ins.config), "{p:?}");
                    let rep =
                        function_representation(&ins.config, &ins.l_label, &ins.r_label).unwrap();
                    assert_eq!(rep, p, "roundtrip failed");
                }
            }
        }
    }

    #[test]
    fn distinguished_pair_counts() {
        // Convex quadrilateral: all ordered pairs.
        let quad = inscribe_staircase(&pair(1, &[1], &[0])).unwrap().config;
        assert_eq!(distinguished_pairs(&quad).unwrap().len(), 12);
        // One interior point: pairs containing it.
        let tri = inscribe_staircase(&pair(1, &[1], &[1])).unwrap().config;
        assert_eq!(distinguished_pairs(&tri).unwrap().len(), 6);
        // Two interior points: exactly the two orders of the interior pair.
        let two = inscribe_staircase(&pair(2, &[1], &[1])).unwrap().config;
        let pairs = distinguished_pairs(&two).unwrap();
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn representation_errors() {
        let quad = inscribe_staircase(&pair(1, &[1], &[0])).unwrap().config;
        assert!(matches!(
            function_representation(&quad, "L", "nope"),
            Err(StaircaseError::UnknownLabel(_))
        ));
    }
}
