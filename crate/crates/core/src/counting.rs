//! Exact counting: hyperfactorials, lozenge tilings, conowheel order types,
//! staircase-pair enumeration and the small-scale order-type census.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::exec::{self, Mode};
use crate::geometry::convex_hull;
use crate::order_type::{canonical_form, chirotope, CanonicalCode};
use crate::staircase::{inscribe_staircase, StaircasePair};

/// `H(n) = 1! 2! ... (n-1)!`, with `H(0) = H(1) = 1`.
pub fn hyperfactorial(n: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut factorial = BigInt::one();
    for k in 1..n {
        factorial *= k;
        result *= &factorial;
    }
    result
}

/// Number of lozenge tilings of the hexagon with side lengths `(a, b, c)`:
/// `H(a+b+c) H(a) H(b) H(c) / (H(a+b) H(a+c) H(b+c))`.
pub fn lozenge_count(a: u64, b: u64, c: u64) -> BigInt {
    let num = hyperfactorial(a + b + c) * hyperfactorial(a) * hyperfactorial(b) * hyperfactorial(c);
    let den = hyperfactorial(a + b) * hyperfactorial(a + c) * hyperfactorial(b + c);
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(r.is_zero(), "hyperfactorial quotient is not integral");
    q
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Every staircase pair of degree `(n1, n2)`, exactly once, in lexicographic
/// order of `(psi_l, psi_r)`.
pub fn enumerate_staircase_pairs(n1: usize, n2: usize) -> Vec<StaircasePair> {
    fn monotone(prefix: &mut Vec<usize>, len: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let lo = prefix.last().copied().unwrap_or(0);
        for v in lo..=max {
            prefix.push(v);
            monotone(prefix, len, max, out);
            prefix.pop();
        }
    }
    fn bounded_monotone(
        prefix: &mut Vec<usize>,
        upper: &[usize],
        out: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == upper.len() {
            out.push(prefix.clone());
            return;
        }
        let i = prefix.len();
        let lo = prefix.last().copied().unwrap_or(0);
        for v in lo..=upper[i] {
            prefix.push(v);
            bounded_monotone(prefix, upper, out);
            prefix.pop();
        }
    }

    let mut psis_l = Vec::new();
    monotone(&mut Vec::new(), n1, n2, &mut psis_l);
    let mut pairs = Vec::new();
    for psi_l in psis_l {
        let mut psis_r = Vec::new();
        bounded_monotone(&mut Vec::new(), &psi_l, &mut psis_r);
        for psi_r in psis_r {
            pairs.push(StaircasePair::new(n2, psi_l.clone(), psi_r));
        }
    }
    pairs
}

/// `Sum_m |L(2, m, n-m)|`, which equals `C(2n+2, n) / (n+1)` exactly.
pub fn two_interior_pair_total(n: u64) -> BigInt {
    let mut total = BigInt::zero();
    for m in 0..=n {
        total += lozenge_count(2, m, n - m);
    }
    let closed = binomial(2 * n + 2, n) / BigInt::from(n + 1);
    debug_assert_eq!(total, closed, "pair total disagrees with approved closed form");
    total
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Number of order types of conowheel sets (at most one interior point) of
/// size `n + 1`:
/// `(1/4n) Sum_{odd k | n} phi(k) 2^{n/k} + 2^{floor((n-3)/2)}`.
pub fn conowheel_count(n: u64) -> BigInt {
    assert!(n >= 3, "conowheel formula requires n >= 3");
    let mut sum = BigInt::zero();
    for k in 1..=n {
        if n % k == 0 && k % 2 == 1 {
            sum += BigInt::from(euler_phi(k)) * (BigInt::one() << (n / k));
        }
    }
    let (q, r) = num_integer::Integer::div_rem(&sum, &BigInt::from(4 * n));
    assert!(r.is_zero(), "conowheel sum not divisible by 4n");
    q + (BigInt::one() << ((n - 3) / 2))
}

/// Equivalence convention for order-type deduplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Bijections preserving every triple orientation.
    OrientationPreserving,
    /// Orientation-preserving or full mirror images.
    ReflectionInclusive,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::OrientationPreserving => "orientation-preserving",
            Convention::ReflectionInclusive => "reflection-inclusive",
        }
    }
}

/// One enumerated staircase pair with the codes of its realization.
#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub pair: StaircasePair,
    /// Interior points of the realization (0, 1 or 2).
    pub interior: usize,
    pub code_orient: CanonicalCode,
    pub code_reflective: CanonicalCode,
}

/// Inscribes every staircase pair of total degree `n` and records canonical
/// codes under both conventions.
pub fn census_entries(n: usize, mode: Mode) -> Vec<CensusEntry> {
    let mut pairs = Vec::new();
    for m in 0..=n {
        pairs.extend(enumerate_staircase_pairs(m, n - m));
    }
    exec::map(mode, &pairs, |pair| {
        let ins = inscribe_staircase(pair).expect("valid enumerated pair");
        let chi = chirotope(&ins.config).expect("realization is simple");
        let code_orient = canonical_form(&chi).expect("simple");
        let code_mirror = canonical_form(&chi.mirror()).expect("simple");
        let code_reflective = code_orient.clone().min(code_mirror);
        let hull = convex_hull(&ins.config).expect("at least a triangle").len();
        let interior = ins.config.len() - hull;
        debug_assert!(interior <= 2);
        CensusEntry { pair: pair.clone(), interior, code_orient, code_reflective }
    })
}

/// Census of the order types with at most 2 interior points of size `n + 2`.
#[derive(Debug, Clone)]
pub struct CountReport {
    /// Size parameter: configurations have `n + 2` points.
    pub n: usize,
    pub convention: Convention,
    /// `N_0, N_1, N_2`: deduplicated order-type counts by interior points.
    pub by_interior: [u64; 3],
    /// `L_0, L_1, L_2`: staircase pairs by the interior count of their
    /// realization.
    pub pair_counts: [u64; 3],
    pub staircase_pair_total: BigInt,
}

impl CountReport {
    pub fn total(&self) -> u64 {
        self.by_interior.iter().sum()
    }

    /// Flat `key=value` text block.
    pub fn to_text(&self) -> String {
        format!(
            "n={}\nconvention={}\nN={}\nN0={}\nN1={}\nN2={}\nL0={}\nL1={}\nL2={}\npairs_total={}\n",
            self.n,
            self.convention.as_str(),
            self.total(),
            self.by_interior[0],
            self.by_interior[1],
            self.by_interior[2],
            self.pair_counts[0],
            self.pair_counts[1],
            self.pair_counts[2],
            self.staircase_pair_total,
        )
    }
}

/// Builds the census report from precomputed entries.
pub fn report_from_entries(n: usize, convention: Convention, entries: &[CensusEntry]) -> CountReport {
    let mut classes: BTreeMap<&CanonicalCode, usize> = BTreeMap::new();
    let mut pair_counts = [0u64; 3];
    for e in entries {
        pair_counts[e.interior] += 1;
        let key = match convention {
            Convention::OrientationPreserving => &e.code_orient,
            Convention::ReflectionInclusive => &e.code_reflective,
        };
        classes.entry(key).or_insert(e.interior);
    }
    let mut by_interior = [0u64; 3];
    for (_, interior) in classes {
        by_interior[interior] += 1;
    }
    CountReport {
        n,
        convention,
        by_interior,
        pair_counts,
        staircase_pair_total: two_interior_pair_total(n as u64),
    }
}

/// Enumerates, realizes and deduplicates all order types with at most two
/// interior points of size `n + 2`.
pub fn enumerate_order_types_two_interior(
    n: usize,
    convention: Convention,
    mode: Mode,
) -> CountReport {
    let entries = census_entries(n, mode);
    report_from_entries(n, convention, &entries)
}

/// Float value of a big integer (diagnostics only).
pub fn bigint_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperfactorial_values() {
        assert_eq!(hyperfactorial(0), BigInt::one());
        assert_eq!(hyperfactorial(1), BigInt::one());
        assert_eq!(hyperfactorial(4), BigInt::from(12));
        assert_eq!(hyperfactorial(6), BigInt::from(34560));
    }

    #[test]
    fn lozenge_values() {
        assert_eq!(lozenge_count(2, 1, 1), BigInt::from(3));
        assert_eq!(lozenge_count(2, 2, 2), BigInt::from(20));
        for (a, b) in [(0, 0), (1, 4), (7, 2), (3, 3)] {
            assert_eq!(lozenge_count(a, b, 0), BigInt::one());
        }
        // Symmetric in all three arguments.
        assert_eq!(lozenge_count(2, 3, 5), lozenge_count(5, 2, 3));
        assert_eq!(lozenge_count(2, 3, 5), lozenge_count(3, 5, 2));
    }

    #[test]
    fn pair_enumeration_counts_match_lozenge() {
        for n1 in 0..=4usize {
            for n2 in 0..=4usize {
                let pairs = enumerate_staircase_pairs(n1, n2);
                assert!(pairs.iter().all(|p| p.is_valid()));
                assert_eq!(
                    BigInt::from(pairs.len()),
                    lozenge_count(2, n1 as u64, n2 as u64),
                    "degree ({n1}, {n2})"
                );
                // Exactly once each.
                let mut sorted = pairs.clone();
                sorted.dedup();
                assert_eq!(sorted.len(), pairs.len());
            }
        }
    }

    #[test]
    fn pair_totals() {
        assert_eq!(two_interior_pair_total(0), BigInt::one());
        assert_eq!(two_interior_pair_total(2), BigInt::from(5));
        assert_eq!(two_interior_pair_total(10), BigInt::from(58786));
    }

    #[test]
    fn conowheel_values() {
        assert_eq!(conowheel_count(3), BigInt::from(2));
        assert_eq!(conowheel_count(4), BigInt::from(2));
        assert_eq!(conowheel_count(5), BigInt::from(4));
    }

    #[test]
    fn census_smallest() {
        let report = enumerate_order_types_two_interior(2, Convention::OrientationPreserving, Mode::Auto);
        // Size-4 types: the convex quadrilateral and triangle-plus-point.
        assert_eq!(report.by_interior[0], 1);
        assert_eq!(report.by_interior[1], 1);
        assert_eq!(report.by_interior[2], 0);
        assert_eq!(report.total(), 2);
        assert_eq!(report.pair_counts, [3, 2, 0]);
        let refl = enumerate_order_types_two_interior(2, Convention::ReflectionInclusive, Mode::Auto);
        assert_eq!(refl.total(), 2);
    }

    #[test]
    fn census_n0_always_one() {
        for n in 2..=5 {
            let report =
                enumerate_order_types_two_interior(n, Convention::OrientationPreserving, Mode::Auto);
            assert_eq!(report.by_interior[0], 1, "n={n}");
        }
    }
}
