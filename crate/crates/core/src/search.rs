//! Derivative-free search for inscribed realizations of a chirotope, with
//! exact rational snap-and-verify.
//!
//! The search itself runs in floating point: seeded random restarts followed
//! by coordinate-wise perturbation descent on a hinge-loss orientation
//! energy, with occasional angle swaps to escape ordering traps. A restart
//! that reaches zero energy is snapped to rational coordinates (circle
//! angles via continued-fraction convergents of the tangent half-angle,
//! free points on a dyadic grid) and verified exactly; only an exact
//! verification produces a witness. `NotFound` is evidence, never proof,
//! and the verdict type keeps the two outcomes apart.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use num_traits::One;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::{self, Mode};
use crate::geometry::{CirclePoint, Configuration, LabeledPoint, Point};
use crate::order_type::{chirotope, Chirotope};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    InvalidB,
    NotConvexInterior,
    NotSimple,
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::InvalidB => write!(f, "B contains a non-extreme label"),
            SearchError::NotConvexInterior => {
                write!(f, "interior set mismatch or not in convex position")
            }
            SearchError::NotSimple => write!(f, "target chirotope is not simple"),
        }
    }
}

impl std::error::Error for SearchError {}

/// Knobs of the randomized search. All runs are deterministic given the
/// seed; restart `r` derives its generator from `seed ^ r`.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub restarts: u32,
    pub iterations: u32,
    pub seed: u64,
    /// Strictness margin on every signed area.
    pub margin: f64,
    /// Maximum continued-fraction convergent depth for snapping.
    pub snap_depth: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { restarts: 200, iterations: 5000, seed: 0, margin: 1e-7, snap_depth: 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStats {
    pub best_energy: f64,
    pub restarts_used: u32,
}

/// Search outcome: an exactly verified inscribed witness, or a failure
/// report. `NotFound` only says the budget was exhausted.
#[derive(Debug, Clone)]
pub enum Verdict {
    InscribedExact(Box<Configuration>),
    NotFound(SearchStats),
}

impl Verdict {
    pub fn witness(&self) -> Option<&Configuration> {
        match self {
            Verdict::InscribedExact(c) => Some(c),
            Verdict::NotFound(_) => None,
        }
    }
}

/// One movable point: an angle on the unit circle or a free planar point.
#[derive(Debug, Clone, Copy)]
pub enum SearchPoint {
    OnCircle(f64),
    Free(f64, f64),
}

impl SearchPoint {
    fn coords(&self) -> (f64, f64) {
        match *self {
            SearchPoint::OnCircle(theta) => (theta.cos(), theta.sin()),
            SearchPoint::Free(x, y) => (x, y),
        }
    }
}

/// Hinge-loss orientation energy: for every triple, the shortfall of the
/// target-signed doubled area below `margin`. Zero exactly when every
/// orientation is strictly correct with margin.
pub fn violation_energy(positions: &[SearchPoint], target: &Chirotope, margin: f64) -> f64 {
    let n = positions.len();
    assert_eq!(n, target.len());
    let pts: Vec<(f64, f64)> = positions.iter().map(SearchPoint::coords).collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                total += triple_loss(&pts, target, margin, i, j, k);
            }
        }
    }
    total
}

fn triple_loss(pts: &[(f64, f64)], target: &Chirotope, margin: f64, i: usize, j: usize, k: usize) -> f64 {
    let (xi, yi) = pts[i];
    let (xj, yj) = pts[j];
    let (xk, yk) = pts[k];
    let area2 = (xj - xi) * (yk - yi) - (yj - yi) * (xk - xi);
    let s = f64::from(target.sign(i, j, k));
    (margin - s * area2).max(0.0)
}

/// What the free (non-circle) points are and how to verify the result.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Task {
    /// `B` on the circle, everything inside the closed unit disk.
    Inscribe,
    /// Interior points on the circle, extreme points unconstrained.
    InteriorOnCircle,
}

struct Problem<'a> {
    target: &'a Chirotope,
    on_circle: Vec<bool>,
    task: Task,
    triples: Vec<(u32, u32, u32, f64)>,
    by_point: Vec<Vec<u32>>,
}

impl<'a> Problem<'a> {
    fn new(target: &'a Chirotope, on_circle: Vec<bool>, task: Task) -> Self {
        let n = target.len();
        let mut triples = Vec::new();
        let mut by_point = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let id = triples.len() as u32;
                    triples.push((i as u32, j as u32, k as u32, f64::from(target.sign(i, j, k))));
                    by_point[i].push(id);
                    by_point[j].push(id);
                    by_point[k].push(id);
                }
            }
        }
        Problem { target, on_circle, task, triples, by_point }
    }
}

struct State {
    positions: Vec<SearchPoint>,
    pts: Vec<(f64, f64)>,
    losses: Vec<f64>,
    containment: Vec<f64>,
    energy: f64,
}

impl State {
    fn init(problem: &Problem, rng: &mut ChaCha8Rng, margin: f64) -> State {
        let n = problem.on_circle.len();
        let mut positions = Vec::with_capacity(n);
        for i in 0..n {
            if problem.on_circle[i] {
                positions.push(SearchPoint::OnCircle(rng.gen_range(0.0..std::f64::consts::TAU)));
            } else {
                let (lo, hi) = match problem.task {
                    Task::Inscribe => (0.0, 0.93),
                    Task::InteriorOnCircle => (1.05, 3.0),
                };
                let r = (rng.gen_range(lo * lo..hi * hi) as f64).sqrt();
                let a = rng.gen_range(0.0..std::f64::consts::TAU);
                positions.push(SearchPoint::Free(r * a.cos(), r * a.sin()));
            }
        }
        let pts: Vec<(f64, f64)> = positions.iter().map(SearchPoint::coords).collect();
        let losses: Vec<f64> = problem
            .triples
            .iter()
            .map(|&(i, j, k, s)| hinge(&pts, i, j, k, s, margin))
            .collect();
        let containment: Vec<f64> =
            (0..n).map(|i| containment_loss(problem, &positions[i])).collect();
        let energy = losses.iter().sum::<f64>() + containment.iter().sum::<f64>();
        State { positions, pts, losses, containment, energy }
    }

    /// Re-evaluates the loss of every triple touching `m` after a position
    /// change; returns the energy delta.
    fn update_point(&mut self, problem: &Problem, margin: f64, m: usize) -> f64 {
        self.pts[m] = self.positions[m].coords();
        let mut delta = 0.0;
        for &t in &problem.by_point[m] {
            let (i, j, k, s) = problem.triples[t as usize];
            let new = hinge(&self.pts, i, j, k, s, margin);
            delta += new - self.losses[t as usize];
            self.losses[t as usize] = new;
        }
        let new_cont = containment_loss(problem, &self.positions[m]);
        delta += new_cont - self.containment[m];
        self.containment[m] = new_cont;
        self.energy += delta;
        delta
    }

    fn refresh(&mut self, problem: &Problem, margin: f64) {
        self.pts = self.positions.iter().map(SearchPoint::coords).collect();
        for (t, &(i, j, k, s)) in problem.triples.iter().enumerate() {
            self.losses[t] = hinge(&self.pts, i, j, k, s, margin);
        }
        for (i, c) in self.containment.iter_mut().enumerate() {
            *c = containment_loss(problem, &self.positions[i]);
        }
        self.energy = self.losses.iter().sum::<f64>() + self.containment.iter().sum::<f64>();
    }
}

fn hinge(pts: &[(f64, f64)], i: u32, j: u32, k: u32, s: f64, margin: f64) -> f64 {
    let (xi, yi) = pts[i as usize];
    let (xj, yj) = pts[j as usize];
    let (xk, yk) = pts[k as usize];
    let area2 = (xj - xi) * (yk - yi) - (yj - yi) * (xk - xi);
    (margin - s * area2).max(0.0)
}

/// Free points of an inscription must stay inside the closed unit disk.
fn containment_loss(problem: &Problem, p: &SearchPoint) -> f64 {
    match (problem.task, p) {
        (Task::Inscribe, SearchPoint::Free(x, y)) => (x * x + y * y - 0.998).max(0.0),
        _ => 0.0,
    }
}

fn run_restart(problem: &Problem, budget: &SearchBudget, restart: u32) -> (Option<Configuration>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ u64::from(restart));
    let mut state = State::init(problem, &mut rng, budget.margin);
    let nvars = state.positions.len();
    let mut step = 0.9_f64;
    let decay = (2e-4_f64 / step).powf(1.0 / f64::from(budget.iterations.max(1)));
    let mut snap_attempts = 0;

    for iter in 0..budget.iterations {
        if state.energy <= 0.0 {
            state.refresh(problem, budget.margin);
            if state.energy <= 0.0 {
                if let Some(cfg) = snap(problem, &state.positions, budget) {
                    return (Some(cfg), 0.0);
                }
                snap_attempts += 1;
                if snap_attempts >= 3 {
                    return (None, 0.0);
                }
                // Snap failed: nudge everything slightly and keep going.
                for p in state.positions.iter_mut() {
                    match p {
                        SearchPoint::OnCircle(t) => *t += rng.gen_range(-0.01..0.01),
                        SearchPoint::Free(x, y) => {
                            *x += rng.gen_range(-0.01..0.01);
                            *y += rng.gen_range(-0.01..0.01);
                        }
                    }
                }
                state.refresh(problem, budget.margin);
            }
        }

        if iter % 31 == 30 {
            // Swap two circle angles; helps when the cyclic order is wrong.
            let circ: Vec<usize> =
                (0..nvars).filter(|&i| matches!(state.positions[i], SearchPoint::OnCircle(_))).collect();
            if circ.len() >= 2 {
                let a = circ[rng.gen_range(0..circ.len())];
                let b = circ[rng.gen_range(0..circ.len())];
                if a != b {
                    let old = state.energy;
                    let (SearchPoint::OnCircle(ta), SearchPoint::OnCircle(tb)) =
                        (state.positions[a], state.positions[b])
                    else {
                        unreachable!()
                    };
                    state.positions[a] = SearchPoint::OnCircle(tb);
                    state.positions[b] = SearchPoint::OnCircle(ta);
                    state.update_point(problem, budget.margin, a);
                    state.update_point(problem, budget.margin, b);
                    if state.energy >= old {
                        state.positions[a] = SearchPoint::OnCircle(ta);
                        state.positions[b] = SearchPoint::OnCircle(tb);
                        state.update_point(problem, budget.margin, a);
                        state.update_point(problem, budget.margin, b);
                    }
                }
            }
            continue;
        }

        let m = rng.gen_range(0..nvars);
        let amount = step * rng.gen_range(0.2..1.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let old_energy = state.energy;
        let old_pos = state.positions[m];
        state.positions[m] = match old_pos {
            SearchPoint::OnCircle(t) => SearchPoint::OnCircle(t + amount),
            SearchPoint::Free(x, y) => {
                if rng.gen::<bool>() {
                    SearchPoint::Free(x + amount, y)
                } else {
                    SearchPoint::Free(x, y + amount)
                }
            }
        };
        state.update_point(problem, budget.margin, m);
        if state.energy >= old_energy {
            state.positions[m] = old_pos;
            state.update_point(problem, budget.margin, m);
        }
        step *= decay;
    }

    if state.energy <= 0.0 {
        state.refresh(problem, budget.margin);
        if state.energy <= 0.0 {
            if let Some(cfg) = snap(problem, &state.positions, budget) {
                return (Some(cfg), 0.0);
            }
        }
    }
    (None, state.energy.max(0.0))
}

/// Continued-fraction convergent of `x` with the given number of terms.
fn convergent(x: f64, depth: u32) -> Option<Rat> {
    let mut x = x;
    let (mut h0, mut k0, mut h1, mut k1) = (1i128, 0i128, x.floor() as i128, 1i128);
    if x.floor().abs() > 1e15 {
        return None;
    }
    let mut frac = x - x.floor();
    for _ in 1..depth {
        if frac < 1e-14 {
            break;
        }
        x = 1.0 / frac;
        if x > 1e15 {
            break;
        }
        let a = x.floor() as i128;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
        frac = x - x.floor();
    }
    Some(Rat::new(h1.into(), k1.into()))
}

fn snap_at_depth(positions: &[SearchPoint], depth: u32) -> Option<Configuration> {
    let mut labeled = Vec::with_capacity(positions.len());
    for (idx, p) in positions.iter().enumerate() {
        let lp = match *p {
            SearchPoint::OnCircle(theta) => {
                // Normalize to (-pi, pi]; near the far pole snap to t = inf.
                let mut th = theta.rem_euclid(std::f64::consts::TAU);
                if th > std::f64::consts::PI {
                    th -= std::f64::consts::TAU;
                }
                let t = (th / 2.0).tan();
                let param = if t.abs() > 1e13 {
                    CirclePoint::Infinity
                } else {
                    CirclePoint::Finite(convergent(t, depth)?)
                };
                LabeledPoint::on_circle(format!("x{idx}"), param)
            }
            SearchPoint::Free(x, y) => {
                let den = 1i64 << (depth.min(40) + 2);
                let snap1 = |v: f64| rat::rat((v * den as f64).round() as i64, den);
                LabeledPoint::new(format!("x{idx}"), Point::new(snap1(x), snap1(y)))
            }
        };
        labeled.push(lp);
    }
    Configuration::new(labeled).ok()
}

fn verify(problem: &Problem, config: &Configuration) -> bool {
    let Ok(chi) = chirotope(config) else { return false };
    if chi != *problem.target {
        return false;
    }
    if problem.task == Task::Inscribe {
        // Everything must lie in the closed unit disk (circle points do).
        let one = Rat::one();
        if config.iter().any(|p| p.point.norm_sq() > one) {
            return false;
        }
    }
    true
}

fn snap(problem: &Problem, positions: &[SearchPoint], budget: &SearchBudget) -> Option<Configuration> {
    for depth in 2..=budget.snap_depth.max(2) {
        if let Some(cfg) = snap_at_depth(positions, depth) {
            if verify(problem, &cfg) {
                return Some(cfg);
            }
        }
    }
    None
}

fn run_search(problem: &Problem, budget: &SearchBudget, mode: Mode) -> Verdict {
    let winner = AtomicU32::new(u32::MAX);
    let results = exec::map_range(mode, budget.restarts as usize, |r| {
        let r = r as u32;
        if winner.load(Ordering::Relaxed) < r {
            return (None, f64::INFINITY);
        }
        let out = run_restart(problem, budget, r);
        if out.0.is_some() {
            winner.fetch_min(r, Ordering::Relaxed);
        }
        out
    });
    let mut best_energy = f64::INFINITY;
    for (cfg, energy) in results {
        if let Some(cfg) = cfg {
            return Verdict::InscribedExact(Box::new(flag_b(problem, cfg)));
        }
        best_energy = best_energy.min(energy);
    }
    Verdict::NotFound(SearchStats {
        best_energy: if best_energy.is_finite() { best_energy } else { 0.0 },
        restarts_used: budget.restarts,
    })
}

fn flag_b(problem: &Problem, config: Configuration) -> Configuration {
    // Circle-bound points already carry witnesses; mark them as B.
    Configuration::new(
        config
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut p = p.clone();
                p.b_flag = problem.on_circle[i];
                p
            })
            .collect(),
    )
    .unwrap()
}

/// Searches for a realization of `target` with the labels of `b_set` on the
/// unit circle and every point in the closed unit disk.
pub fn search_inscription(
    target: &Chirotope,
    b_set: &[usize],
    budget: &SearchBudget,
) -> Result<Verdict, SearchError> {
    search_inscription_with_mode(target, b_set, budget, Mode::Auto)
}

pub fn search_inscription_with_mode(
    target: &Chirotope,
    b_set: &[usize],
    budget: &SearchBudget,
    mode: Mode,
) -> Result<Verdict, SearchError> {
    if !target.is_simple() {
        return Err(SearchError::NotSimple);
    }
    let n = target.len();
    let mut on_circle = vec![false; n];
    for &b in b_set {
        if b >= n || !target.is_extreme(b) {
            return Err(SearchError::InvalidB);
        }
        on_circle[b] = true;
    }
    let problem = Problem::new(target, on_circle, Task::Inscribe);
    Ok(run_search(&problem, budget, mode))
}

/// Searches for a realization of `target` with its interior points exactly
/// on the unit circle (the extreme points roam free).
pub fn search_interior_on_circle(
    target: &Chirotope,
    interior_set: &[usize],
    budget: &SearchBudget,
) -> Result<Verdict, SearchError> {
    search_interior_on_circle_with_mode(target, interior_set, budget, Mode::Auto)
}

pub fn search_interior_on_circle_with_mode(
    target: &Chirotope,
    interior_set: &[usize],
    budget: &SearchBudget,
    mode: Mode,
) -> Result<Verdict, SearchError> {
    if !target.is_simple() {
        return Err(SearchError::NotSimple);
    }
    let mut sorted: Vec<usize> = interior_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted != target.interior_points() {
        return Err(SearchError::NotConvexInterior);
    }
    // The interior points must be in convex position within the target.
    if sorted.len() >= 3 {
        let sub = target.restrict(&sorted);
        if (0..sub.len()).any(|i| !sub.is_extreme(i)) {
            return Err(SearchError::NotConvexInterior);
        }
    }
    let n = target.len();
    let mut on_circle = vec![false; n];
    for &i in &sorted {
        on_circle[i] = true;
    }
    let problem = Problem::new(target, on_circle, Task::InteriorOnCircle);
    Ok(run_search(&problem, budget, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::in_general_position;
    use crate::staircase::{inscribe_staircase, StaircasePair};

    fn convex_ngon_chirotope(n: usize) -> Chirotope {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = rat::rat(i as i64 + 1, 7);
                CirclePoint::Finite(t).embed()
            })
            .collect();
        chirotope(&Configuration::from_points(pts)).unwrap()
    }

    #[test]
    fn energy_zero_on_correct_realization() {
        let target = convex_ngon_chirotope(4);
        let positions: Vec<SearchPoint> = (0..4)
            .map(|i| SearchPoint::OnCircle(0.3 + i as f64 * 0.5))
            .collect();
        assert_eq!(violation_energy(&positions, &target, 1e-9), 0.0);
        // Reflecting one point breaks it.
        let mut bad = positions;
        bad[2] = SearchPoint::OnCircle(0.3);
        assert!(violation_energy(&bad, &target, 1e-9) > 0.0);
    }

    #[test]
    fn finds_convex_polygon() {
        let target = convex_ngon_chirotope(5);
        let b: Vec<usize> = (0..5).collect();
        let budget = SearchBudget { restarts: 20, iterations: 2000, seed: 1, ..Default::default() };
        let verdict = search_inscription(&target, &b, &budget).unwrap();
        let w = verdict.witness().expect("convex polygon should inscribe");
        assert_eq!(chirotope(w).unwrap(), target);
        assert!(in_general_position(w));
        assert!(w.iter().all(|p| p.circle.is_some()));
    }

    #[test]
    fn finds_triangle_plus_interior() {
        let ins = inscribe_staircase(&StaircasePair::new(1, vec![1], vec![1])).unwrap();
        let target = chirotope(&ins.config).unwrap();
        let b = target.extreme_points();
        let budget = SearchBudget { restarts: 40, iterations: 3000, seed: 2, ..Default::default() };
        let verdict = search_inscription(&target, &b, &budget).unwrap();
        let w = verdict.witness().expect("triangle plus point should inscribe");
        assert_eq!(chirotope(w).unwrap(), target);
    }

    #[test]
    fn rejects_non_extreme_b() {
        let ins = inscribe_staircase(&StaircasePair::new(1, vec![1], vec![1])).unwrap();
        let target = chirotope(&ins.config).unwrap();
        let interior = target.interior_points();
        assert!(matches!(
            search_inscription(&target, &interior, &Default::default()),
            Err(SearchError::InvalidB)
        ));
    }

    #[test]
    fn deterministic_given_seed() {
        let target = convex_ngon_chirotope(4);
        let b: Vec<usize> = (0..4).collect();
        let budget = SearchBudget { restarts: 8, iterations: 500, seed: 7, ..Default::default() };
        let v1 = search_inscription(&target, &b, &budget).unwrap();
        let v2 = search_inscription_with_mode(&target, &b, &budget, Mode::Sequential).unwrap();
        match (v1, v2) {
            (Verdict::InscribedExact(a), Verdict::InscribedExact(b)) => assert_eq!(*a, *b),
            (Verdict::NotFound(a), Verdict::NotFound(b)) => assert_eq!(a, b),
            _ => panic!("verdicts disagree across modes"),
        }
    }

    #[test]
    fn interior_on_circle_trivial() {
        // Triangle with one interior point: the interior singleton is
        // trivially "in convex position".
        let ins = inscribe_staircase(&StaircasePair::new(1, vec![1], vec![1])).unwrap();
        let target = chirotope(&ins.config).unwrap();
        let interior = target.interior_points();
        let budget = SearchBudget { restarts: 30, iterations: 2000, seed: 3, ..Default::default() };
        let verdict = search_interior_on_circle(&target, &interior, &budget).unwrap();
        assert!(verdict.witness().is_some());
    }

    #[test]
    fn interior_set_must_match() {
        let ins = inscribe_staircase(&StaircasePair::new(1, vec![1], vec![1])).unwrap();
        let target = chirotope(&ins.config).unwrap();
        let wrong = target.extreme_points();
        assert!(matches!(
            search_interior_on_circle(&target, &wrong, &Default::default()),
            Err(SearchError::NotConvexInterior)
        ));
    }
}
