//! Gaussian moment dynamics under parametric amplification, amplitude
//! damping and thermal noise.
//!
//! The characteristic function keeps a Gaussian form; its time dependence is
//! carried by the propagator pair `(M, N)` solving
//!
//! ```text
//! dM/dt = -eta* N - Gamma M / 2
//! dN/dt = -eta  M - Gamma N / 2
//! ```
//!
//! from `(I, 0)`, and by the stationary complex moments `(alpha, beta)`.

mod symmetric;

pub use symmetric::{
    build_symmetric_gamma, symmetric_entries, symmetric_steady_coefficients, Horizon,
    SymmetricEntries, SymmetricFamily, SteadyCoefficients,
};

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{CovarianceMatrix, SYMMETRY_TOLERANCE};
use crate::linalg::{expm, is_real_matrix, max_abs_complex, real_part, to_complex};
use crate::scalar::{cplx, is_finite, lit, Real};

/// Squeezing of the bath. The reservoir is thermal, so this source term of
/// the stationary equations is identically zero.
pub const BATH_SQUEEZING: f64 = 0.0;

const SERIES_MAX_TERMS: usize = 200;

type CMatrix<T> = DMatrix<Complex<T>>;
const RESONANCE_WINDOW: f64 = 1e-9;
const RANK_TOLERANCE: f64 = 1e-12;
const REFINEMENT_STEPS: usize = 3;

/// Complex symmetric pair-creation matrix `eta` (inverse time units).
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifierMatrix<T: Real> {
    eta: DMatrix<Complex<T>>,
    is_real: bool,
}

impl<T: Real> AmplifierMatrix<T> {
    pub fn new(eta: DMatrix<Complex<T>>) -> Result<Self> {
        let (r, c) = eta.shape();
        if r != c || r == 0 {
            return invalid(format!("amplifier matrix must be square, got {r}x{c}"));
        }
        if eta.iter().any(|z| !is_finite(z.re) || !is_finite(z.im)) {
            return invalid("amplifier matrix has non-finite entries");
        }
        let scale = max_abs_complex(&eta).max(T::one());
        if max_abs_complex(&(&eta - eta.transpose())) > lit::<T>(SYMMETRY_TOLERANCE) * scale {
            return invalid("amplifier matrix must be symmetric");
        }
        let eta = (&eta + eta.transpose()).map(|z| z * lit::<T>(0.5));
        let is_real = is_real_matrix(&eta, T::zero());
        Ok(Self { eta, is_real })
    }

    pub fn from_real(eta: DMatrix<T>) -> Result<Self> {
        Self::new(to_complex(&eta))
    }

    /// `eta0 I + eta1 S` on three modes, with `S` the all-ones matrix minus `I`.
    pub fn symmetric(eta0: T, eta1: T) -> Self {
        let eta = DMatrix::from_fn(3, 3, |r, c| if r == c { eta0 } else { eta1 });
        Self { eta: to_complex(&eta), is_real: true }
    }

    pub fn modes(&self) -> usize {
        self.eta.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.eta
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn real_matrix(&self) -> Option<DMatrix<T>> {
        self.is_real.then(|| real_part(&self.eta))
    }
}

/// Per-mode damping rates `Gamma_j >= 0` and thermal occupations `nbar_j >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BathParams<T: Real> {
    damping: Vec<T>,
    occupation: Vec<T>,
}

impl<T: Real> BathParams<T> {
    pub fn new(damping: Vec<T>, occupation: Vec<T>) -> Result<Self> {
        if damping.is_empty() || damping.len() != occupation.len() {
            return invalid("damping and occupation must be non-empty and of equal length");
        }
        if damping.iter().chain(&occupation).any(|&v| !is_finite(v) || v < T::zero()) {
            return invalid("damping rates and occupations must be finite and non-negative");
        }
        Ok(Self { damping, occupation })
    }

    pub fn uniform(modes: usize, damping: T, occupation: T) -> Result<Self> {
        Self::new(vec![damping; modes], vec![occupation; modes])
    }

    pub fn modes(&self) -> usize {
        self.damping.len()
    }

    pub fn damping(&self) -> &[T] {
        &self.damping
    }

    pub fn occupation(&self) -> &[T] {
        &self.occupation
    }

    /// The common damping rate, if every mode shares it.
    pub fn equal_damping(&self) -> Option<T> {
        let g = self.damping[0];
        self.damping.iter().all(|&d| d == g).then_some(g)
    }

    fn damping_matrix(&self) -> DMatrix<Complex<T>> {
        DMatrix::from_fn(self.modes(), self.modes(), |r, c| {
            if r == c { cplx(self.damping[r], T::zero()) } else { Complex::default() }
        })
    }

    /// `diag(2 nbar_j + 1)`.
    fn noise_matrix(&self) -> DMatrix<Complex<T>> {
        let two = lit::<T>(2.0);
        DMatrix::from_fn(self.modes(), self.modes(), |r, c| {
            if r == c { cplx(two * self.occupation[r] + T::one(), T::zero()) } else { Complex::default() }
        })
    }
}

/// Time-dependent matrices `(M, N)` with `nu = mu M + mu* N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorPair<T: Real> {
    pub m: DMatrix<Complex<T>>,
    pub n: DMatrix<Complex<T>>,
}

impl<T: Real> PropagatorPair<T> {
    pub fn identity(modes: usize) -> Self {
        Self { m: DMatrix::identity(modes, modes), n: DMatrix::zeros(modes, modes) }
    }

    /// The fully decayed pair `(0, 0)`, reached as `t -> inf` when damping dominates.
    pub fn decayed(modes: usize) -> Self {
        Self { m: DMatrix::zeros(modes, modes), n: DMatrix::zeros(modes, modes) }
    }

    pub fn modes(&self) -> usize {
        self.m.nrows()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        max_abs_complex(&(&self.m - &other.m)).max(max_abs_complex(&(&self.n - &other.n)))
    }
}

/// Complex-parameter covariance blocks: `alpha` Hermitian, `beta` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMoments<T: Real> {
    pub alpha: DMatrix<Complex<T>>,
    pub beta: DMatrix<Complex<T>>,
}

impl<T: Real> ComplexMoments<T> {
    pub fn new(alpha: DMatrix<Complex<T>>, beta: DMatrix<Complex<T>>) -> Result<Self> {
        let s = alpha.nrows();
        if alpha.shape() != (s, s) || beta.shape() != (s, s) || s == 0 {
            return invalid("alpha and beta must be square and of equal size");
        }
        let scale = max_abs_complex(&alpha).max(max_abs_complex(&beta)).max(T::one());
        let tol = lit::<T>(SYMMETRY_TOLERANCE) * scale;
        if max_abs_complex(&(&alpha - alpha.adjoint())) > tol {
            return invalid("alpha must be Hermitian");
        }
        if max_abs_complex(&(&beta - beta.transpose())) > tol {
            return invalid("beta must be symmetric");
        }
        Ok(Self { alpha, beta })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::thermal(modes, T::zero())
    }

    pub fn thermal(modes: usize, occupation: T) -> Self {
        let n = lit::<T>(2.0) * occupation + T::one();
        Self {
            alpha: DMatrix::from_diagonal_element(modes, modes, cplx(n, T::zero())),
            beta: DMatrix::zeros(modes, modes),
        }
    }

    pub fn modes(&self) -> usize {
        self.alpha.nrows()
    }

    /// The `2s x 2s` block `[[alpha, beta*], [beta, alpha*]]`.
    pub fn block(&self) -> DMatrix<Complex<T>> {
        let s = self.modes();
        let mut g = DMatrix::zeros(2 * s, 2 * s);
        g.view_mut((0, 0), (s, s)).copy_from(&self.alpha);
        g.view_mut((0, s), (s, s)).copy_from(&self.beta.conjugate());
        g.view_mut((s, 0), (s, s)).copy_from(&self.beta);
        g.view_mut((s, s), (s, s)).copy_from(&self.alpha.conjugate());
        g
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        max_abs_complex(&(&self.alpha - &other.alpha)).max(max_abs_complex(&(&self.beta - &other.beta)))
    }
}

/// Sums `cosh|xi| = sum (xi xi*)^k / (2k)!` and
/// `sinh|xi| xi / |xi| = sum (xi xi*)^k xi / (2k+1)!`.
fn cosh_sinh_series<T: Real>(xi: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    let s = xi.nrows();
    let p = xi * xi.conjugate();
    let mut cosh = DMatrix::<Complex<T>>::identity(s, s);
    let mut sinh = xi.clone();
    let mut term_c = cosh.clone();
    let mut term_s = sinh.clone();
    let tol = lit::<T>(1e-16).max(T::default_epsilon() * lit(0.25));
    for k in 0..SERIES_MAX_TERMS {
        let kk = lit::<T>(k as f64);
        let two = lit::<T>(2.0);
        let dc = (two * kk + T::one()) * (two * kk + two);
        let ds = (two * kk + two) * (two * kk + lit(3.0));
        term_c = (&term_c * &p).map(|z| z / dc);
        term_s = (&p * &term_s).map(|z| z / ds);
        cosh += &term_c;
        sinh += &term_s;
        let small_c = term_c.norm() <= tol * cosh.norm();
        let small_s = term_s.norm() <= tol * sinh.norm();
        if small_c && small_s {
            return Ok((cosh, sinh));
        }
    }
    Err(Error::NumericalFailure(format!(
        "matrix cosh/sinh series did not converge within {SERIES_MAX_TERMS} terms"
    )))
}

/// Closed-form `(M, N)` when every mode has the same damping `gamma0`:
/// `M = e^{-gamma0 t/2} cosh*(|eta| t)`, `N = -e^{-gamma0 t/2} sinh(|eta| t)/|eta| eta`.
pub fn propagator_equal_damping<T: Real>(eta: &AmplifierMatrix<T>, gamma0: T, t: T) -> Result<PropagatorPair<T>> {
    if !(t >= T::zero()) || !is_finite(t) {
        return invalid("time must be finite and non-negative");
    }
    if !(gamma0 >= T::zero()) || !is_finite(gamma0) {
        return invalid("damping rate must be finite and non-negative");
    }
    let xi = eta.matrix().map(|z| z * t);
    let (cosh, sinh) = cosh_sinh_series(&xi)?;
    let decay = (-gamma0 * t * lit(0.5)).exp();
    let m = if eta.is_real() { cosh } else { cosh.conjugate() };
    Ok(PropagatorPair {
        m: m.map(|z| z * decay),
        n: sinh.map(|z| -z * decay),
    })
}

/// Closed-form `(M, N)` for real `eta` and arbitrary per-mode damping:
/// `M, N = (exp(-eta t - Gamma t/2) +- exp(eta t - Gamma t/2)) / 2`.
pub fn propagator_real_eta<T: Real>(eta: &AmplifierMatrix<T>, bath: &BathParams<T>, t: T) -> Result<PropagatorPair<T>> {
    let real = eta.real_matrix().ok_or_else(|| Error::InvalidArgument("amplifier matrix must be real".into()))?;
    if bath.modes() != eta.modes() {
        return invalid("bath and amplifier mode counts differ");
    }
    if !(t >= T::zero()) || !is_finite(t) {
        return invalid("time must be finite and non-negative");
    }
    let s = eta.modes();
    let half_gamma = DMatrix::from_fn(s, s, |r, c| if r == c { bath.damping()[r] * lit(0.5) } else { T::zero() });
    let minus = expm(&((-&real - &half_gamma) * t))?;
    let plus = expm(&((&real - &half_gamma) * t))?;
    let half = lit::<T>(0.5);
    Ok(PropagatorPair {
        m: to_complex(&((&minus + &plus) * half)),
        n: to_complex(&((&minus - &plus) * half)),
    })
}

/// Left-hand sides of the two stationary equations, in that order:
///
/// ```text
/// 2 eta alpha + 2 alpha* eta - Gamma beta - beta Gamma (+ Gamma w + w Gamma)
/// Gamma alpha + alpha Gamma - 2 eta* beta - 2 beta* eta - Gamma n' - n' Gamma
/// ```
///
/// with `n' = 2 nbar + 1` and `w =` [`BATH_SQUEEZING`].
pub fn steady_equations<T: Real>(
    eta: &AmplifierMatrix<T>,
    bath: &BathParams<T>,
    moments: &ComplexMoments<T>,
) -> (DMatrix<Complex<T>>, DMatrix<Complex<T>>) {
    let (e3, e4) = homogeneous_part(eta.matrix(), &bath.damping_matrix(), &moments.alpha, &moments.beta);
    let g = bath.damping_matrix();
    let n = bath.noise_matrix();
    (e3, e4 - (&g * &n + &n * &g))
}

fn homogeneous_part<T: Real>(
    eta: &DMatrix<Complex<T>>,
    g: &DMatrix<Complex<T>>,
    alpha: &DMatrix<Complex<T>>,
    beta: &DMatrix<Complex<T>>,
) -> (DMatrix<Complex<T>>, DMatrix<Complex<T>>) {
    let two = cplx(lit::<T>(2.0), T::zero());
    let e3 = (eta * alpha + alpha.conjugate() * eta).map(|z| z * two) - (g * beta + beta * g);
    let e4 = (g * alpha + alpha * g) - (eta.conjugate() * beta + beta.conjugate() * eta).map(|z| z * two);
    (e3, e4)
}

/// Largest absolute entry of the stationary-equation residuals.
pub fn steady_residual<T: Real>(eta: &AmplifierMatrix<T>, bath: &BathParams<T>, moments: &ComplexMoments<T>) -> T {
    let (e3, e4) = steady_equations(eta, bath, moments);
    max_abs_complex(&e3).max(max_abs_complex(&e4))
}

/// Solves the stationary equations for `(alpha, beta)`.
///
/// The equations are real-linear (they involve `alpha*` and `beta*`), so they
/// are solved as a `4s^2` real system. With equal damping a singular value
/// of `2 eta / Gamma` equal to one leaves the noise source unbalanced; such
/// inputs are rejected as resonant. Other rank deficiencies are harmless and
/// only an inconsistent system is reported as [`Error::Singular`].
pub fn steady_alpha_beta<T: Real>(eta: &AmplifierMatrix<T>, bath: &BathParams<T>) -> Result<ComplexMoments<T>> {
    let s = eta.modes();
    if bath.modes() != s {
        return invalid("bath and amplifier mode counts differ");
    }
    if let Some(g0) = bath.equal_damping() {
        if g0 > T::zero() {
            for zeta in amplification_ratios(eta, g0) {
                if (zeta.abs() - T::one()).abs() < lit(RESONANCE_WINDOW) {
                    return Err(Error::Resonance { eigenvalue: crate::scalar::to_f64(zeta) });
                }
            }
        }
    }

    let g = bath.damping_matrix();
    let dim = 4 * s * s;
    // Unknown layout: [Re alpha, Im alpha, Re beta, Im beta], each s*s column-major.
    let unpack = |x: &[T]| -> (DMatrix<Complex<T>>, DMatrix<Complex<T>>) {
        let ss = s * s;
        let alpha = DMatrix::from_fn(s, s, |r, c| cplx(x[c * s + r], x[ss + c * s + r]));
        let beta = DMatrix::from_fn(s, s, |r, c| cplx(x[2 * ss + c * s + r], x[3 * ss + c * s + r]));
        (alpha, beta)
    };
    let pack = |e3: &DMatrix<Complex<T>>, e4: &DMatrix<Complex<T>>| -> Vec<T> {
        let mut out = Vec::with_capacity(dim);
        out.extend(e3.iter().map(|z| z.re));
        out.extend(e3.iter().map(|z| z.im));
        out.extend(e4.iter().map(|z| z.re));
        out.extend(e4.iter().map(|z| z.im));
        out
    };

    let mut system = DMatrix::<T>::zeros(dim, dim);
    let mut unit = vec![T::zero(); dim];
    for col in 0..dim {
        unit[col] = T::one();
        let (alpha, beta) = unpack(&unit);
        let (e3, e4) = homogeneous_part(eta.matrix(), &g, &alpha, &beta);
        for (row, v) in pack(&e3, &e4).into_iter().enumerate() {
            system[(row, col)] = v;
        }
        unit[col] = T::zero();
    }
    let n = bath.noise_matrix();
    let source = &g * &n + &n * &g;
    let rhs = nalgebra::DVector::from_vec(pack(&DMatrix::zeros(s, s), &source));

    // Sectors whose rates cancel (e.g. `x_i p_j` with `zeta_i - zeta_j = 2`)
    // make the system rank deficient without a source; any particular
    // solution then serves, and the minimum-norm one is taken.
    let svd = system.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > T::zero() { crate::scalar::to_f64(smax / smin) } else { f64::INFINITY };
    let eps = smax * lit(RANK_TOLERANCE);
    let solve = |b: &nalgebra::DVector<T>| svd.solve(b, eps).map_err(|_| Error::Singular { condition: cond });
    let mut x = solve(&rhs)?;
    for _ in 0..REFINEMENT_STEPS {
        let r = &rhs - &system * &x;
        x += solve(&r)?;
    }
    let miss = (&system * &x - &rhs).amax();
    if !(miss <= lit::<T>(1e-9) * (rhs.amax() + T::one())) {
        return Err(Error::Singular { condition: cond });
    }
    let (alpha, beta) = unpack(x.as_slice());
    let half = lit::<T>(0.5);
    ComplexMoments::new(
        (&alpha + alpha.adjoint()).map(|z| z * half),
        (&beta + beta.transpose()).map(|z| z * half),
    )
}

/// Ratios `2 eta / Gamma0` that control resonance: eigenvalues for real
/// `eta`, singular values otherwise.
pub fn amplification_ratios<T: Real>(eta: &AmplifierMatrix<T>, gamma0: T) -> Vec<T> {
    let scale = lit::<T>(2.0) / gamma0;
    match eta.real_matrix() {
        Some(real) => SymmetricEigen::new(real * scale).eigenvalues.iter().copied().collect(),
        None => eta.matrix().map(|z| z * scale).singular_values().iter().copied().collect(),
    }
}

/// `gamma_c(t) = P (gamma_c(0) - gamma_ss) P + gamma_ss` with
/// `P = [[M, -N], [-N, M]]`, acting on the `[[alpha, beta*], [beta, alpha*]]`
/// blocks. Only real propagators (real `eta`) are supported.
pub fn evolve_complex_cm<T: Real>(
    initial: &ComplexMoments<T>,
    propagator: &PropagatorPair<T>,
    steady: &ComplexMoments<T>,
) -> Result<ComplexMoments<T>> {
    let s = initial.modes();
    if propagator.modes() != s || steady.modes() != s || propagator.n.nrows() != s {
        return invalid("moment and propagator dimensions differ");
    }
    let scale = max_abs_complex(&propagator.m).max(max_abs_complex(&propagator.n)).max(T::one());
    let tol = lit::<T>(SYMMETRY_TOLERANCE) * scale;
    if !is_real_matrix(&propagator.m, tol) || !is_real_matrix(&propagator.n, tol) {
        return invalid("complex-moment propagation requires a real propagator (real eta)");
    }
    let mut p = DMatrix::zeros(2 * s, 2 * s);
    p.view_mut((0, 0), (s, s)).copy_from(&propagator.m);
    p.view_mut((0, s), (s, s)).copy_from(&-&propagator.n);
    p.view_mut((s, 0), (s, s)).copy_from(&-&propagator.n);
    p.view_mut((s, s), (s, s)).copy_from(&propagator.m);
    let ss = steady.block();
    let g = &p * (initial.block() - &ss) * &p + &ss;
    let alpha = g.view((0, 0), (s, s)).into_owned();
    let beta = g.view((s, 0), (s, s)).into_owned();
    let half = lit::<T>(0.5);
    ComplexMoments::new(
        (&alpha + alpha.adjoint()).map(|z| z * half),
        (&beta + beta.transpose()).map(|z| z * half),
    )
}

/// Real interleaved covariance matrix of the complex moments:
///
/// ```text
/// <x_j x_k> = Re(alpha + beta)_jk     <p_j p_k> = Re(alpha - beta)_jk
/// <x_j p_k> = Im(beta + alpha)_jk     <p_j x_k> = Im(beta - alpha)_jk
/// ```
pub fn complex_to_real_cm<T: Real>(moments: &ComplexMoments<T>) -> Result<CovarianceMatrix<T>> {
    let s = moments.modes();
    let (a, b) = (&moments.alpha, &moments.beta);
    let g = DMatrix::from_fn(2 * s, 2 * s, |r, c| {
        let (j, k) = (r / 2, c / 2);
        match (r % 2, c % 2) {
            (0, 0) => a[(j, k)].re + b[(j, k)].re,
            (1, 1) => a[(j, k)].re - b[(j, k)].re,
            (0, 1) => b[(j, k)].im + a[(j, k)].im,
            _ => b[(j, k)].im - a[(j, k)].im,
        }
    });
    CovarianceMatrix::new(g)
}

/// Vacuum (or any initial moments) evolved to time `t` with equal damping.
pub fn evolve_equal_damping<T: Real>(
    initial: &ComplexMoments<T>,
    eta: &AmplifierMatrix<T>,
    bath: &BathParams<T>,
    t: T,
) -> Result<ComplexMoments<T>> {
    let g0 = bath
        .equal_damping()
        .ok_or_else(|| Error::InvalidArgument("damping rates differ between modes".into()))?;
    let steady = steady_alpha_beta(eta, bath)?;
    let prop = propagator_equal_damping(eta, g0, t)?;
    evolve_complex_cm(initial, &prop, &steady)
}
