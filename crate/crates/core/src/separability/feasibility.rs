//! Existence of `(y, z)` with, for `x = sqrt(1 + y^2 + z^2)`,
//!
//! ```text
//! min(tr K, tr K~)            >= 2x
//! det K  + 1 + L  . (y, z)    >= x tr K
//! det K~ + 1 + L~ . (y, z)    >= x tr K~
//! ```
//!
//! i.e. a pure one-mode covariance matrix below both Schur complements.
//! When `Re v = Re v~ = 0` the constraints depend on `z` only through `x`,
//! which every constraint penalizes, so the `z = 0` section decides
//! feasibility. On that line each constraint is a concave function of `y`
//! and holds on an interval whose ends are where the boundary curves cross
//! `z = 0`.

use super::schur::SchurPair;
use crate::oracles::{grid_feasibility, GridConfig};
use crate::scalar::{lit, Real};

const GOLDEN_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityProblem<T: Real> {
    pub tr_k: T,
    pub tr_k_tilde: T,
    pub det_k: T,
    pub det_k_tilde: T,
    pub l: [T; 2],
    pub l_tilde: [T; 2],
}

impl<T: Real> FeasibilityProblem<T> {
    pub fn new(pair: &SchurPair<T>) -> Self {
        let k = pair.k_entries();
        let kt = pair.k_tilde_entries();
        Self {
            tr_k: k.trace(),
            tr_k_tilde: kt.trace(),
            det_k: k.det(),
            det_k_tilde: kt.det(),
            l: k.linear_term(),
            l_tilde: kt.linear_term(),
        }
    }

    pub fn min_trace(&self) -> T {
        self.tr_k.min(self.tr_k_tilde)
    }

    /// The three constraint values at `(y, z)`; all `>= 0` means feasible.
    pub fn constraints(&self, y: T, z: T) -> [T; 3] {
        let x = (T::one() + y * y + z * z).sqrt();
        let two = lit::<T>(2.0);
        [
            self.min_trace() - two * x,
            self.det_k + T::one() + self.l[0] * y + self.l[1] * z - x * self.tr_k,
            self.det_k_tilde + T::one() + self.l_tilde[0] * y + self.l_tilde[1] * z - x * self.tr_k_tilde,
        ]
    }

    pub fn slack(&self, y: T, z: T) -> T {
        let c = self.constraints(y, z);
        c[0].min(c[1]).min(c[2])
    }

    /// Radius of the disk allowed by the trace constraint (`None` if empty).
    pub fn disk_radius(&self) -> Option<T> {
        let half = self.min_trace() * lit(0.5);
        (half >= T::one()).then(|| (half * half - T::one()).sqrt())
    }

    fn has_real_offdiagonals(&self, tol: T) -> bool {
        self.l[1].abs() > tol || self.l_tilde[1].abs() > tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityMethod {
    /// `z = 0` section with closed-form intervals.
    Section,
    /// Grid search with refinement.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityOutcome<T> {
    pub feasible: bool,
    pub marginal: bool,
    pub witness: Option<(T, T)>,
    /// Largest achievable minimum constraint value (approximate on the grid path).
    pub slack: T,
    pub method: FeasibilityMethod,
}

/// Superlevel set `{y : D + delta y >= tr sqrt(1 + y^2)}` for `tr > |delta|`.
fn curve_interval<T: Real>(det: T, delta: T, tr: T) -> Option<(T, T)> {
    let d = det + T::one();
    let spread = tr * tr - delta * delta;
    let disc = delta * delta + d * d - tr * tr;
    if d < T::zero() || disc < T::zero() {
        return None;
    }
    let r = tr * disc.sqrt();
    Some(((d * delta - r) / spread, (d * delta + r) / spread))
}

/// Maximizes a concave function on `[lo, hi]` by golden-section search.
fn golden_max<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> (T, T) {
    let ratio = lit::<T>(0.5 * (5f64.sqrt() - 1.0));
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo <= T::default_epsilon() * (T::one() + lo.abs().max(hi.abs())) {
            break;
        }
    }
    let mid = (lo + hi) * lit(0.5);
    let candidates = [(x1, f1), (x2, f2), (mid, f(mid))];
    candidates.into_iter().fold(candidates[0], |best, c| if c.1 > best.1 { c } else { best })
}

/// Section analysis; `None` when the reduction does not apply.
pub fn section_feasibility<T: Real>(problem: &FeasibilityProblem<T>, tol: T) -> Option<FeasibilityOutcome<T>> {
    let scale = problem.tr_k.abs().max(problem.tr_k_tilde.abs()).max(T::one());
    if problem.has_real_offdiagonals(lit::<T>(1e-12) * scale) {
        return None;
    }
    let slack = |y: T| problem.slack(y, T::zero());
    let s0 = slack(T::zero());
    let reach = (problem.min_trace() - s0) * lit(0.5);
    let span = (reach * reach - T::one()).max(T::zero()).sqrt() + T::one();

    let disk = problem.disk_radius();
    let intersection = match disk {
        Some(radius) if problem.tr_k > problem.l[0].abs() && problem.tr_k_tilde > problem.l_tilde[0].abs() => {
            let i1 = curve_interval(problem.det_k, problem.l[0], problem.tr_k);
            let i2 = curve_interval(problem.det_k_tilde, problem.l_tilde[0], problem.tr_k_tilde);
            match (i1, i2) {
                (Some(a), Some(b)) => {
                    let lo = (-radius).max(a.0).max(b.0);
                    let hi = radius.min(a.1).min(b.1);
                    (lo <= hi).then_some((lo, hi))
                }
                _ => None,
            }
        }
        Some(_) => return None,
        None => None,
    };

    let (mut y_best, mut best) = golden_max(slack, -span, span);
    if let Some((lo, hi)) = intersection {
        let mid = (lo + hi) * lit(0.5);
        if slack(mid) > best {
            y_best = mid;
            best = slack(mid);
        }
    }
    let feasible = intersection.is_some() || best >= -tol;
    Some(FeasibilityOutcome {
        feasible,
        marginal: best.abs() < tol,
        witness: feasible.then_some((y_best, T::zero())),
        slack: best,
        method: FeasibilityMethod::Section,
    })
}

/// Full-separability test for a PPT state given its Schur complements.
///
/// Uses the `z = 0` section when the off-diagonals of `K` and `K~` are
/// imaginary and otherwise falls back to the grid oracle.
pub fn fully_separable_test<T: Real>(pair: &SchurPair<T>, tol: T) -> FeasibilityOutcome<T> {
    let problem = FeasibilityProblem::new(pair);
    if let Some(out) = section_feasibility(&problem, tol) {
        return out;
    }
    let grid = grid_feasibility(pair, &GridConfig::default());
    FeasibilityOutcome {
        feasible: grid.feasible || grid.best_slack >= -tol,
        marginal: grid.best_slack.abs() < tol,
        witness: grid.witness,
        slack: grid.best_slack,
        method: FeasibilityMethod::Grid,
    }
}
