//! Chirotopes, canonical order-type codes and sub-order containment.
//!
//! The chirotope of a labeled configuration records the orientation of every
//! index triple. Two simple configurations have the same order type exactly
//! when some bijection of their labels preserves all triple orientations;
//! [`canonical_form`] computes a complete invariant for that relation by
//! minimizing the sign string over a polynomial family of rotation-based
//! relabelings.

use std::fmt;

use crate::geometry::{orient, Configuration};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderTypeError {
    TooFewPoints,
    NotSimple,
}

impl fmt::Display for OrderTypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderTypeError::TooFewPoints => write!(f, "need at least 3 points"),
            OrderTypeError::NotSimple => write!(f, "configuration has a collinear triple"),
        }
    }
}

impl std::error::Error for OrderTypeError {}

/// Orientation signs of all label triples `i < j < k` of an `n`-point
/// configuration, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chirotope {
    n: usize,
    signs: Vec<i8>,
}

impl Chirotope {
    pub fn from_config(config: &Configuration) -> Result<Self, OrderTypeError> {
        let n = config.len();
        if n < 3 {
            return Err(OrderTypeError::TooFewPoints);
        }
        let mut signs = Vec::with_capacity(n * (n - 1) * (n - 2) / 6);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    signs.push(orient(config.point(i), config.point(j), config.point(k)));
                }
            }
        }
        Ok(Chirotope { n, signs })
    }

    /// Builds a chirotope from raw sorted-triple signs; `signs.len()` must be
    /// `C(n, 3)`.
    pub fn from_signs(n: usize, signs: Vec<i8>) -> Result<Self, OrderTypeError> {
        if n < 3 {
            return Err(OrderTypeError::TooFewPoints);
        }
        assert_eq!(signs.len(), n * (n - 1) * (n - 2) / 6, "wrong sign count");
        Ok(Chirotope { n, signs })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_simple(&self) -> bool {
        self.signs.iter().all(|&s| s != 0)
    }

    /// Signs over sorted triples, lexicographic.
    pub fn raw_signs(&self) -> &[i8] {
        &self.signs
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        // Rank of (i, j, k), i < j < k, in lexicographic order.
        let n = self.n;
        let c3 = |m: usize| m * (m.saturating_sub(1)) * (m.saturating_sub(2)) / 6;
        let c2 = |m: usize| m * (m.saturating_sub(1)) / 2;
        c3(n) - c3(n - i) + c2(n - i - 1) - c2(n - j) + (k - j - 1)
    }

    /// Orientation of an arbitrary ordered triple of distinct labels.
    pub fn sign(&self, a: usize, b: usize, c: usize) -> i8 {
        let mut v = [a, b, c];
        let mut parity = 1i8;
        // Sort the three indices, tracking swap parity.
        if v[0] > v[1] {
            v.swap(0, 1);
            parity = -parity;
        }
        if v[1] > v[2] {
            v.swap(1, 2);
            parity = -parity;
        }
        if v[0] > v[1] {
            v.swap(0, 1);
            parity = -parity;
        }
        parity * self.signs[self.index(v[0], v[1], v[2])]
    }

    /// The chirotope of the mirror image: every sign negated.
    pub fn mirror(&self) -> Chirotope {
        Chirotope { n: self.n, signs: self.signs.iter().map(|&s| -s).collect() }
    }

    /// The chirotope obtained by relabeling: new label `i` is old label
    /// `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Chirotope {
        assert_eq!(perm.len(), self.n);
        let mut signs = Vec::with_capacity(self.signs.len());
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in j + 1..self.n {
                    signs.push(self.sign(perm[i], perm[j], perm[k]));
                }
            }
        }
        Chirotope { n: self.n, signs }
    }

    /// The chirotope of the sub-configuration on the given labels (in order).
    pub fn restrict(&self, labels: &[usize]) -> Chirotope {
        let m = labels.len();
        assert!(m >= 3);
        let mut signs = Vec::with_capacity(m * (m - 1) * (m - 2) / 6);
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    signs.push(self.sign(labels[i], labels[j], labels[k]));
                }
            }
        }
        Chirotope { n: m, signs }
    }

    /// True iff label `idx` is an extreme point: not strictly inside any
    /// triangle of other points.
    pub fn is_extreme(&self, idx: usize) -> bool {
        let n = self.n;
        for a in 0..n {
            if a == idx {
                continue;
            }
            for b in a + 1..n {
                if b == idx {
                    continue;
                }
                for c in b + 1..n {
                    if c == idx {
                        continue;
                    }
                    // Orient (a, b, c) counterclockwise, then test containment.
                    let (x, y, z) = if self.sign(a, b, c) == 1 { (a, b, c) } else { (a, c, b) };
                    if self.sign(x, y, idx) == 1
                        && self.sign(y, z, idx) == 1
                        && self.sign(z, x, idx) == 1
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Indices of extreme points, ascending.
    pub fn extreme_points(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.is_extreme(i)).collect()
    }

    /// Indices of interior points, ascending.
    pub fn interior_points(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.is_extreme(i)).collect()
    }
}

/// Convenience wrapper for [`Chirotope::from_config`].
pub fn chirotope(config: &Configuration) -> Result<Chirotope, OrderTypeError> {
    Chirotope::from_config(config)
}

/// Canonical order-type code: equal codes if and only if the two (simple)
/// chirotopes are related by an orientation-preserving relabeling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    bytes: Vec<u8>,
}

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Lowercase hex of the packed code.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.bytes.len() * 2);
        for b in &self.bytes {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

/// The candidate labeling for base pair `(p, q)`: `p`, then `q`, then the
/// remaining labels sorted counterclockwise around `p` starting from the
/// direction `p -> q`. With `cw` the remainder is reversed (a clockwise
/// sweep), which reorders labels but never flips signs.
fn candidate_labeling(chi: &Chirotope, p: usize, q: usize, cw: bool) -> Vec<usize> {
    let n = chi.len();
    let mut left: Vec<usize> = Vec::new();
    let mut right: Vec<usize> = Vec::new();
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        match chi.sign(p, q, r) {
            1 => left.push(r),
            -1 => right.push(r),
            _ => unreachable!("simple chirotope has no zero signs"),
        }
    }
    // Within an open halfplane the angular order around p is total:
    // r precedes s iff (p, r, s) is counterclockwise.
    let angular = |xs: &mut Vec<usize>| {
        xs.sort_by(|&r, &s| {
            if chi.sign(p, r, s) == 1 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
    };
    angular(&mut left);
    angular(&mut right);

    let mut rest = left;
    rest.extend(right);
    if cw {
        rest.reverse();
    }
    let mut out = Vec::with_capacity(n);
    out.push(p);
    out.push(q);
    out.extend(rest);
    out
}

/// Computes the canonical code of a simple chirotope by minimizing the sign
/// string over all `2 n (n - 1)` rotation-based candidate labelings.
pub fn canonical_form(chi: &Chirotope) -> Result<CanonicalCode, OrderTypeError> {
    if !chi.is_simple() {
        return Err(OrderTypeError::NotSimple);
    }
    let n = chi.len();
    let mut best: Option<Vec<i8>> = None;
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            for cw in [false, true] {
                let perm = candidate_labeling(chi, p, q, cw);
                let signs = chi.relabel(&perm).signs;
                if best.as_ref().map_or(true, |b| signs < *b) {
                    best = Some(signs);
                }
            }
        }
    }
    let best = best.expect("at least one candidate");
    // Pack: one byte for n, then sign bits (+ = 1) most significant first.
    let mut bytes = vec![n as u8];
    let mut acc = 0u8;
    let mut used = 0;
    for &s in &best {
        acc = (acc << 1) | u8::from(s == 1);
        used += 1;
        if used == 8 {
            bytes.push(acc);
            acc = 0;
            used = 0;
        }
    }
    if used > 0 {
        bytes.push(acc << (8 - used));
    }
    Ok(CanonicalCode { bytes })
}

/// Canonical code of a configuration's order type.
pub fn canonical_code_of(config: &Configuration) -> Result<CanonicalCode, OrderTypeError> {
    canonical_form(&chirotope(config)?)
}

/// Canonical code of the order type up to reflection: the smaller of the
/// codes of the chirotope and its mirror.
pub fn canonical_code_reflective(chi: &Chirotope) -> Result<CanonicalCode, OrderTypeError> {
    let a = canonical_form(chi)?;
    let b = canonical_form(&chi.mirror())?;
    Ok(a.min(b))
}

/// True iff the two simple configurations have the same order type
/// (orientation-preserving). Differing sizes compare unequal.
pub fn same_order_type(a: &Configuration, b: &Configuration) -> Result<bool, OrderTypeError> {
    if a.len() != b.len() {
        return Ok(false);
    }
    Ok(canonical_code_of(a)? == canonical_code_of(b)?)
}

/// Backtracking search for a sign-preserving injection of `pattern` labels
/// into `host` labels. Returns the first injection found in the assignment
/// order, or `None`.
///
/// Pattern-interior points can only map to host-interior points: a point
/// inside a triangle of image points is inside the host hull too.
pub fn contains_suborder(host: &Chirotope, pattern: &Chirotope) -> Option<Vec<usize>> {
    if pattern.len() > host.len() || !host.is_simple() || !pattern.is_simple() {
        return None;
    }
    let hn = host.len();
    let pn = pattern.len();

    let host_extreme: Vec<bool> = (0..hn).map(|i| host.is_extreme(i)).collect();
    let pat_interior: Vec<bool> = (0..pn).map(|i| !pattern.is_extreme(i)).collect();

    // Assign interior pattern labels first: their candidate sets are smallest.
    let mut order: Vec<usize> = (0..pn).collect();
    order.sort_by_key(|&i| (!pat_interior[i], i));

    let mut assignment = vec![usize::MAX; pn];
    let mut used = vec![false; hn];
    if backtrack(host, pattern, &host_extreme, &pat_interior, &order, 0, &mut assignment, &mut used)
    {
        Some(assignment)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    host: &Chirotope,
    pattern: &Chirotope,
    host_extreme: &[bool],
    pat_interior: &[bool],
    order: &[usize],
    depth: usize,
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let p = order[depth];
    'cand: for h in 0..host.len() {
        if used[h] {
            continue;
        }
        if pat_interior[p] && host_extreme[h] {
            continue;
        }
        // Check every triple completed by this assignment.
        for a in 0..depth {
            for b in a + 1..depth {
                let (pa, pb) = (order[a], order[b]);
                if pattern.sign(pa, pb, p) != host.sign(assignment[pa], assignment[pb], h) {
                    continue 'cand;
                }
            }
        }
        assignment[p] = h;
        used[h] = true;
        if backtrack(host, pattern, host_extreme, pat_interior, order, depth + 1, assignment, used)
        {
            return true;
        }
        assignment[p] = usize::MAX;
        used[h] = false;
    }
    false
}

/// Orientation-preserving isomorphism between two equal-size simple
/// chirotopes, as a relabeling of `a` onto `b`, if one exists. This is the
/// independent oracle backing the canonical form.
pub fn isomorphism(a: &Chirotope, b: &Chirotope) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    contains_suborder(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{LabeledPoint, Point};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(points: &[(i64, i64)]) -> Configuration {
        Configuration::from_points(points.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    fn random_simple(n: usize, rng: &mut ChaCha8Rng) -> Configuration {
        let mut pts: Vec<(i64, i64)> = Vec::new();
        while pts.len() < n {
            let cand = (rng.gen_range(-40..40), rng.gen_range(-40..40));
            if pts.contains(&cand) {
                continue;
            }
            pts.push(cand);
            if pts.len() >= 3 && !crate::geometry::in_general_position(&cfg(&pts)) {
                pts.pop();
            }
        }
        cfg(&pts)
    }

    #[test]
    fn chirotope_triangles() {
        let ccw = cfg(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(chirotope(&ccw).unwrap().raw_signs(), &[1]);
        let cw = cfg(&[(0, 0), (0, 1), (1, 0)]);
        assert_eq!(chirotope(&cw).unwrap().raw_signs(), &[-1]);
    }

    #[test]
    fn sign_parity() {
        let c = chirotope(&cfg(&[(0, 0), (4, 1), (2, 5), (1, 2)])).unwrap();
        assert_eq!(c.sign(0, 1, 2), -c.sign(1, 0, 2));
        assert_eq!(c.sign(0, 1, 2), c.sign(1, 2, 0));
        assert_eq!(c.sign(2, 1, 0), -c.sign(0, 1, 2));
    }

    #[test]
    fn index_is_lexicographic() {
        let c = chirotope(&random_simple(7, &mut ChaCha8Rng::seed_from_u64(1))).unwrap();
        let mut rank = 0;
        for i in 0..7 {
            for j in i + 1..7 {
                for k in j + 1..7 {
                    assert_eq!(c.index(i, j, k), rank);
                    rank += 1;
                }
            }
        }
    }

    #[test]
    fn extreme_detection() {
        let c = chirotope(&cfg(&[(0, 0), (4, 0), (2, 5), (2, 2)])).unwrap();
        assert!(c.is_extreme(0));
        assert!(c.is_extreme(1));
        assert!(c.is_extreme(2));
        assert!(!c.is_extreme(3));
        assert_eq!(c.interior_points(), vec![3]);
    }

    #[test]
    fn quadrilaterals_share_code() {
        let a = cfg(&[(0, 0), (5, 1), (6, 7), (-1, 5)]);
        let b = cfg(&[(10, 10), (30, 12), (28, 40), (8, 29)]);
        assert!(same_order_type(&a, &b).unwrap());
    }

    #[test]
    fn quad_differs_from_triangle_with_interior() {
        let a = cfg(&[(0, 0), (5, 1), (6, 7), (-1, 5)]);
        let b = cfg(&[(0, 0), (5, 1), (2, 7), (2, 2)]);
        assert!(!same_order_type(&a, &b).unwrap());
    }

    #[test]
    fn translate_preserves_order_type() {
        let a = cfg(&[(0, 0), (7, 2), (5, 9), (1, 6), (3, 4)]);
        let b = a.map_points(|p| {
            Point::new(&p.x + crate::rat::rat(13, 3), &p.y - crate::rat::rat(5, 7))
        });
        assert!(same_order_type(&a, &b).unwrap());
    }

    #[test]
    fn code_invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let base = random_simple(7, &mut rng);
            let chi = chirotope(&base).unwrap();
            let code = canonical_form(&chi).unwrap();
            let mut perm: Vec<usize> = (0..7).collect();
            perm.shuffle(&mut rng);
            assert_eq!(canonical_form(&chi.relabel(&perm)).unwrap(), code);
        }
    }

    #[test]
    fn code_agrees_with_isomorphism_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let a = random_simple(6, &mut rng);
            let b = random_simple(6, &mut rng);
            let ca = chirotope(&a).unwrap();
            let cb = chirotope(&b).unwrap();
            let same_code = canonical_form(&ca).unwrap() == canonical_form(&cb).unwrap();
            let iso = isomorphism(&ca, &cb).is_some();
            assert_eq!(same_code, iso);
        }
    }

    #[test]
    fn mirror_detected_by_oracle_and_code_consistently() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..15 {
            let a = random_simple(6, &mut rng);
            let chi = chirotope(&a).unwrap();
            let mir = chi.mirror();
            let same_code = canonical_form(&chi).unwrap() == canonical_form(&mir).unwrap();
            assert_eq!(same_code, isomorphism(&chi, &mir).is_some());
        }
    }

    #[test]
    fn containment_triangle_in_pentagon() {
        let pent = cfg(&[(0, 0), (4, 0), (6, 4), (2, 7), (-2, 4)]);
        let tri = chirotope(&cfg(&[(0, 0), (2, 0), (1, 2)])).unwrap();
        let host = chirotope(&pent).unwrap();
        let inj = contains_suborder(&host, &tri).unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                for k in j + 1..3 {
                    assert_eq!(tri.sign(i, j, k), host.sign(inj[i], inj[j], inj[k]));
                }
            }
        }
    }

    #[test]
    fn containment_needs_interior_point() {
        let pent = cfg(&[(0, 0), (4, 0), (6, 4), (2, 7), (-2, 4)]);
        let pat = chirotope(&cfg(&[(0, 0), (4, 0), (2, 5), (2, 2)])).unwrap();
        let host = chirotope(&pent).unwrap();
        assert!(contains_suborder(&host, &pat).is_none());
    }

    #[test]
    fn containment_roundtrip_on_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let host_cfg = cfg(&[(0, 0), (9, 2), (12, 9), (5, 14), (-3, 8), (4, 6), (6, 8)]);
        let host = chirotope(&host_cfg).unwrap();
        for _ in 0..10 {
            let mut labels: Vec<usize> = (0..7).collect();
            labels.shuffle(&mut rng);
            let mut sub: Vec<usize> = labels[..4].to_vec();
            sub.sort_unstable();
            let pattern = host.restrict(&sub);
            assert!(contains_suborder(&host, &pattern).is_some());
        }
    }

    #[test]
    fn labeled_config_code_matches_unlabeled() {
        let a = Configuration::new(vec![
            LabeledPoint::new("x", Point::from_ints(0, 0)),
            LabeledPoint::new("y", Point::from_ints(3, 1)),
            LabeledPoint::new("z", Point::from_ints(1, 4)),
        ])
        .unwrap();
        let b = cfg(&[(0, 0), (3, 1), (1, 4)]);
        assert!(same_order_type(&a, &b).unwrap());
    }
}
