//! Independent brute-force computations used to cross-check the closed
//! forms: RK4 integration of the propagator, a refining grid search for the
//! full-separability constraints and a generic boundary bisection.

use nalgebra::{Complex, DMatrix};

use crate::error::{invalid, Error, Result};
use crate::evolution::{AmplifierMatrix, BathParams, PropagatorPair};
use crate::scalar::{is_finite, lit, to_f64, Real};
use crate::separability::{FeasibilityProblem, SchurPair};

/// Slack above which a grid point counts as feasible.
pub const GRID_FEASIBLE_SLACK: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig<T> {
    /// Maximum step size; the step count is at least 10.
    pub dt: T,
}

impl<T: Real> Default for OdeConfig<T> {
    fn default() -> Self {
        Self { dt: lit(1e-3) }
    }
}

type CMat<T> = DMatrix<Complex<T>>;

/// Integrates `dM/dt = -eta* N - Gamma M/2`, `dN/dt = -eta M - Gamma N/2`
/// from `(I, 0)` with classical fixed-step RK4.
pub fn rk4_propagator<T: Real>(
    eta: &AmplifierMatrix<T>,
    bath: &BathParams<T>,
    t: T,
    cfg: &OdeConfig<T>,
) -> Result<PropagatorPair<T>> {
    if !(cfg.dt > T::zero()) || !is_finite(cfg.dt) {
        return invalid("ODE step must be positive and finite");
    }
    if !(t >= T::zero()) || !is_finite(t) {
        return invalid("time must be finite and non-negative");
    }
    if bath.modes() != eta.modes() {
        return invalid("bath and amplifier mode counts differ");
    }
    let s = eta.modes();
    let steps = (to_f64(t / cfg.dt).ceil() as usize).max(10);
    let h = t / lit(steps as f64);
    let e = eta.matrix().clone();
    let half_gamma: CMat<T> =
        DMatrix::from_fn(s, s, |r, c| if r == c { Complex::new(bath.damping()[r] * lit(0.5), T::zero()) } else { Complex::new(T::zero(), T::zero()) });
    let e_conj = e.conjugate();
    let rhs = |m: &CMat<T>, n: &CMat<T>| -> (CMat<T>, CMat<T>) {
        (-(&e_conj * n) - &half_gamma * m, -(&e * m) - &half_gamma * n)
    };
    let mut m = CMat::<T>::identity(s, s);
    let mut n = CMat::<T>::zeros(s, s);
    let (half, sixth, two) = (lit::<T>(0.5), lit::<T>(1.0 / 6.0), lit::<T>(2.0));
    let scaled = |m: &CMat<T>, k: T| m.map(|z| z * k);
    for _ in 0..steps {
        let (k1m, k1n) = rhs(&m, &n);
        let (k2m, k2n) = rhs(&(&m + scaled(&k1m, h * half)), &(&n + scaled(&k1n, h * half)));
        let (k3m, k3n) = rhs(&(&m + scaled(&k2m, h * half)), &(&n + scaled(&k2n, h * half)));
        let (k4m, k4n) = rhs(&(&m + scaled(&k3m, h)), &(&n + scaled(&k3n, h)));
        m += scaled(&(k1m + scaled(&k2m, two) + scaled(&k3m, two) + k4m), h * sixth);
        n += scaled(&(k1n + scaled(&k2n, two) + scaled(&k3n, two) + k4n), h * sixth);
    }
    if m.iter().chain(n.iter()).any(|z| !is_finite(z.re) || !is_finite(z.im)) {
        return Err(Error::NumericalFailure("RK4 propagator overflowed".into()));
    }
    Ok(PropagatorPair { m, n })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridConfig {
    /// Points per axis and level (at least 64).
    pub resolution: usize,
    /// Refinement levels (at least 3).
    pub levels: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { resolution: 64, levels: 40 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOutcome<T> {
    pub feasible: bool,
    pub witness: Option<(T, T)>,
    /// Best minimum constraint value found.
    pub best_slack: T,
}

/// Searches the disk allowed by the trace constraint on a square grid,
/// repeatedly zooming onto the best point.
pub fn grid_feasibility<T: Real>(pair: &SchurPair<T>, cfg: &GridConfig) -> GridOutcome<T> {
    let problem = FeasibilityProblem::new(pair);
    let resolution = cfg.resolution.max(64);
    let levels = cfg.levels.max(3);
    let Some(radius) = problem.disk_radius() else {
        return GridOutcome { feasible: false, witness: None, best_slack: problem.slack(T::zero(), T::zero()) };
    };
    let mut center = (T::zero(), T::zero());
    let mut half_width = radius.max(lit(1e-12));
    let mut best = (T::zero(), T::zero(), problem.slack(T::zero(), T::zero()));
    let n = resolution - 1;
    let cell_of = |w: T| w * lit(2.0 / n as f64);
    for _ in 0..levels {
        let step = cell_of(half_width);
        let mut level_best = best;
        let mut on_edge = false;
        for i in 0..=n {
            let y = center.0 - half_width + step * lit(i as f64);
            for j in 0..=n {
                let z = center.1 - half_width + step * lit(j as f64);
                let v = problem.slack(y, z);
                if v > level_best.2 {
                    level_best = (y, z, v);
                    on_edge = i == 0 || j == 0 || i == n || j == n;
                }
            }
        }
        best = level_best;
        center = (best.0, best.1);
        if !on_edge {
            half_width = step * lit(2.0);
        }
        if best.2 >= lit(GRID_FEASIBLE_SLACK) && best.2 > T::zero() {
            break;
        }
    }
    let feasible = best.2 >= lit(GRID_FEASIBLE_SLACK);
    GridOutcome { feasible, witness: feasible.then_some((best.0, best.1)), best_slack: best.2 }
}

/// Locates the point in `[lo, hi]` where `pred` changes value to within
/// `abs_tol`. Returns [`Error::Bracket`] if `pred(lo) == pred(hi)`.
pub fn boundary_bisection<T: Real>(pred: impl Fn(T) -> Result<bool>, mut lo: T, mut hi: T, abs_tol: T) -> Result<T> {
    if !(lo < hi) || !(abs_tol > T::zero()) {
        return invalid("bisection needs lo < hi and a positive tolerance");
    }
    let at_lo = pred(lo)?;
    if at_lo == pred(hi)? {
        return Err(Error::Bracket { lo: to_f64(lo), hi: to_f64(hi) });
    }
    while hi - lo > abs_tol {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{propagator_equal_damping, propagator_real_eta};

    #[test]
    fn rk4_matches_equal_damping_closed_form() {
        let eta = AmplifierMatrix::symmetric(0.3, 0.2);
        let bath = BathParams::uniform(3, 1.0, 0.0).unwrap();
        let rk = rk4_propagator(&eta, &bath, 1.5, &OdeConfig { dt: 1e-3 }).unwrap();
        let cf = propagator_equal_damping(&eta, 1.0, 1.5).unwrap();
        assert!(rk.max_abs_diff(&cf) < 1e-10);
    }

    #[test]
    fn rk4_matches_complex_eta() {
        let c = |re, im| Complex::new(re, im);
        let eta = AmplifierMatrix::new(DMatrix::from_row_slice(
            3,
            3,
            &[c(0.2, 0.1), c(0.1, -0.3), c(0.0, 0.2), c(0.1, -0.3), c(-0.1, 0.0), c(0.05, 0.05), c(0.0, 0.2), c(0.05, 0.05), c(0.3, -0.1)],
        ))
        .unwrap();
        let bath = BathParams::uniform(3, 0.7, 0.0).unwrap();
        let rk = rk4_propagator(&eta, &bath, 2.0, &OdeConfig { dt: 1e-3 }).unwrap();
        let cf = propagator_equal_damping(&eta, 0.7, 2.0).unwrap();
        assert!(rk.max_abs_diff(&cf) < 1e-10, "{}", rk.max_abs_diff(&cf));
    }

    #[test]
    fn rk4_matches_unequal_damping() {
        let eta = AmplifierMatrix::symmetric(0.25, -0.15);
        let bath = BathParams::new(vec![0.5, 1.0, 2.0], vec![0.0; 3]).unwrap();
        let rk = rk4_propagator(&eta, &bath, 1.0, &OdeConfig::default()).unwrap();
        let cf = propagator_real_eta(&eta, &bath, 1.0).unwrap();
        assert!(rk.max_abs_diff(&cf) < 1e-10);
    }

    #[test]
    fn rk4_rejects_bad_step() {
        let eta = AmplifierMatrix::symmetric(0.1, 0.1);
        let bath = BathParams::uniform(3, 1.0, 0.0).unwrap();
        assert!(rk4_propagator(&eta, &bath, 1.0, &OdeConfig { dt: 0.0 }).is_err());
        assert!(rk4_propagator(&eta, &bath, 1.0, &OdeConfig { dt: -1.0 }).is_err());
    }

    #[test]
    fn grid_identity_and_half_identity() {
        let id = [[1.0f64, 0.0], [0.0, 1.0]];
        let half = [[0.5, 0.0], [0.0, 0.5]];
        let out = grid_feasibility(&SchurPair::from_real(id, id), &GridConfig::default());
        assert!(out.feasible);
        assert!(out.best_slack.abs() < 1e-12);
        assert!(!grid_feasibility(&SchurPair::from_real(half, half), &GridConfig::default()).feasible);
    }

    #[test]
    fn bisection_finds_threshold() {
        let x = boundary_bisection(|x: f64| Ok(x * x >= 2.0), 0.0, 3.0, 1e-10).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-9);
        assert!(matches!(boundary_bisection(|x: f64| Ok(x > 5.0), 0.0, 3.0, 1e-6), Err(Error::Bracket { .. })));
    }
}
