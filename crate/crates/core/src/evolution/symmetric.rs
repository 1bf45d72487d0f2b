//! The fully symmetric three-mode family: `eta = eta0 I + eta1 S`, equal
//! damping `Gamma` and equal thermal occupation on every mode, vacuum
//! initial state.
//!
//! Everything is expressed in the dimensionless ratios `eta0' = 2 eta0 / Gamma`,
//! `eta1' = 2 eta1 / Gamma`, the rescaled time `t' = Gamma t / 2` and the
//! noise factor `n' = 2 nbar + 1`. The eigenvalues of `2 eta / Gamma` are
//! `zeta0 = eta0' + 2 eta1'` (symmetric collective mode) and
//! `zeta1 = eta0' - eta1'` (twice degenerate).

use nalgebra::DMatrix;

use super::{AmplifierMatrix, BathParams};
use crate::error::{invalid, Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::scalar::{infinity, is_finite, lit, Real};

/// Rescaled time `t'`, possibly the asymptotic limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Horizon<T> {
    pub fn finite(&self) -> Option<T> {
        match *self {
            Horizon::Finite(t) => Some(t),
            Horizon::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Horizon::Infinite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricFamily<T: Real> {
    zeta0: T,
    zeta1: T,
    n_prime: T,
    horizon: Horizon<T>,
}

impl<T: Real> SymmetricFamily<T> {
    pub fn new(eta0p: T, eta1p: T, n_prime: T, horizon: Horizon<T>) -> Result<Self> {
        let two = lit::<T>(2.0);
        Self::from_zeta(eta0p + two * eta1p, eta0p - eta1p, n_prime, horizon)
    }

    pub fn from_zeta(zeta0: T, zeta1: T, n_prime: T, horizon: Horizon<T>) -> Result<Self> {
        if !is_finite(zeta0) || !is_finite(zeta1) {
            return invalid("amplification ratios must be finite");
        }
        if !is_finite(n_prime) || n_prime < T::one() {
            return invalid(format!("noise factor n' must be >= 1, got {n_prime:e}"));
        }
        if let Horizon::Finite(t) = horizon {
            if !is_finite(t) || t < T::zero() {
                return invalid("rescaled time must be finite and non-negative");
            }
        }
        Ok(Self { zeta0, zeta1, n_prime, horizon })
    }

    /// Same family with thermal occupation `nbar` instead of `n'`.
    pub fn with_occupation(eta0p: T, eta1p: T, nbar: T, horizon: Horizon<T>) -> Result<Self> {
        if !is_finite(nbar) || nbar < T::zero() {
            return invalid("thermal occupation must be finite and non-negative");
        }
        Self::new(eta0p, eta1p, lit::<T>(2.0) * nbar + T::one(), horizon)
    }

    pub fn zeta0(&self) -> T {
        self.zeta0
    }

    pub fn zeta1(&self) -> T {
        self.zeta1
    }

    pub fn eta0p(&self) -> T {
        (self.zeta0 + lit::<T>(2.0) * self.zeta1) / lit(3.0)
    }

    pub fn eta1p(&self) -> T {
        (self.zeta0 - self.zeta1) / lit(3.0)
    }

    pub fn n_prime(&self) -> T {
        self.n_prime
    }

    pub fn nbar(&self) -> T {
        (self.n_prime - T::one()) * lit(0.5)
    }

    pub fn horizon(&self) -> Horizon<T> {
        self.horizon
    }

    pub fn with_n_prime(&self, n_prime: T) -> Result<Self> {
        Self::from_zeta(self.zeta0, self.zeta1, n_prime, self.horizon)
    }

    pub fn with_horizon(&self, horizon: Horizon<T>) -> Result<Self> {
        Self::from_zeta(self.zeta0, self.zeta1, self.n_prime, horizon)
    }

    /// Both ratios strictly inside `(-1, 1)`: damping dominates and a
    /// residue state exists.
    pub fn is_weak(&self) -> bool {
        self.zeta0.abs() < T::one() && self.zeta1.abs() < T::one()
    }

    /// Physical amplifier matrix for a damping rate `gamma`.
    pub fn amplifier(&self, gamma: T) -> AmplifierMatrix<T> {
        let half = gamma * lit(0.5);
        AmplifierMatrix::symmetric(half * self.eta0p(), half * self.eta1p())
    }

    pub fn bath(&self, gamma: T) -> Result<BathParams<T>> {
        BathParams::uniform(3, gamma, self.nbar())
    }

    /// Physical time `t = 2 t' / gamma`, if finite.
    pub fn time(&self, gamma: T) -> Option<T> {
        self.horizon.finite().map(|t| lit::<T>(2.0) * t / gamma)
    }
}

/// Covariance coefficients of the symmetric family (already including `n'`):
/// `a`, `b` are the `x` and `p` variances of each mode, `c`, `d` the `x-x`
/// and `p-p` cross-correlations. The primed values are the collective-mode
/// variances `a' = a + 2c`, `c' = a - c`, `b' = b + 2d`, `d' = b - d`.
///
/// At the asymptotic horizon a growing mode gives `+inf` in the matching
/// primed entry; unprimed entries are then infinite or NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricEntries<T: Real> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub a_p: T,
    pub b_p: T,
    pub c_p: T,
    pub d_p: T,
}

impl<T: Real> SymmetricEntries<T> {
    pub fn from_primed(a_p: T, b_p: T, c_p: T, d_p: T) -> Self {
        let three = lit::<T>(3.0);
        let two = lit::<T>(2.0);
        Self {
            a: (a_p + two * c_p) / three,
            c: (a_p - c_p) / three,
            b: (b_p + two * d_p) / three,
            d: (b_p - d_p) / three,
            a_p,
            b_p,
            c_p,
            d_p,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d, self.a_p, self.b_p, self.c_p, self.d_p]
            .iter()
            .all(|&v| is_finite(v))
    }

    pub fn primed(&self) -> [T; 4] {
        [self.a_p, self.b_p, self.c_p, self.d_p]
    }
}

/// Variance of a collective quadrature with ratio `zeta`, starting from the
/// vacuum: `e^{2(zeta-1)t'} (1 - n'/(1-zeta)) + n'/(1-zeta)`.
fn collective_variance<T: Real>(zeta: T, n_prime: T, horizon: Horizon<T>) -> Result<T> {
    let gap = T::one() - zeta;
    if gap == T::zero() {
        return Err(Error::Resonance { eigenvalue: crate::scalar::to_f64(zeta) });
    }
    match horizon {
        Horizon::Infinite if gap > T::zero() => Ok(n_prime / gap),
        Horizon::Infinite => Ok(infinity()),
        Horizon::Finite(t) => {
            let arg = -lit::<T>(2.0) * gap * t;
            // e^arg + n' (1 - e^arg) / (1 - zeta), written to stay accurate near zeta = 1.
            Ok(arg.exp() - n_prime * arg.exp_m1() / gap)
        }
    }
}

/// Closed-form `a, b, c, d` and their collective combinations.
///
/// Errors with [`Error::Resonance`] when `zeta0` or `zeta1` is exactly `+-1`.
pub fn symmetric_entries<T: Real>(family: &SymmetricFamily<T>) -> Result<SymmetricEntries<T>> {
    let n = family.n_prime();
    let h = family.horizon();
    let a_p = collective_variance(family.zeta0(), n, h)?;
    let c_p = collective_variance(family.zeta1(), n, h)?;
    let b_p = collective_variance(-family.zeta0(), n, h)?;
    let d_p = collective_variance(-family.zeta1(), n, h)?;
    Ok(SymmetricEntries::from_primed(a_p, b_p, c_p, d_p))
}

/// Six-mode-symmetric covariance matrix `scale * [a, b, c, d pattern]`.
pub fn build_symmetric_gamma<T: Real>(entries: &SymmetricEntries<T>, scale: T) -> Result<CovarianceMatrix<T>> {
    let SymmetricEntries { a, b, c, d, .. } = *entries;
    if ![a, b, c, d, scale].iter().all(|&v| is_finite(v)) {
        return invalid("covariance coefficients must be finite");
    }
    let g = DMatrix::from_fn(6, 6, |r, col| {
        let same_mode = r / 2 == col / 2;
        let v = match (r % 2, col % 2, same_mode) {
            (0, 0, true) => a,
            (1, 1, true) => b,
            (0, 0, false) => c,
            (1, 1, false) => d,
            _ => T::zero(),
        };
        v * scale
    });
    CovarianceMatrix::new(g)
}

/// Coefficients of the stationary moments
/// `alpha = n' (alpha1 I + alpha2 S)`, `beta = n' (beta1 I + beta2 S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyCoefficients<T> {
    pub alpha1: T,
    pub alpha2: T,
    pub beta1: T,
    pub beta2: T,
}

pub fn symmetric_steady_coefficients<T: Real>(zeta0: T, zeta1: T) -> Result<SteadyCoefficients<T>> {
    for z in [zeta0, zeta1] {
        if z.abs() == T::one() {
            return Err(Error::Resonance { eigenvalue: crate::scalar::to_f64(z) });
        }
    }
    let third = T::one() / lit(3.0);
    let two = lit::<T>(2.0);
    let r0 = T::one() / (T::one() - zeta0 * zeta0);
    let r1 = T::one() / (T::one() - zeta1 * zeta1);
    Ok(SteadyCoefficients {
        alpha1: third * (r0 + two * r1),
        alpha2: third * (r0 - r1),
        beta1: third * (zeta0 * r0 + two * zeta1 * r1),
        beta2: third * (zeta0 * r0 - zeta1 * r1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(z0: f64, z1: f64, n: f64, h: Horizon<f64>) -> SymmetricFamily<f64> {
        SymmetricFamily::from_zeta(z0, z1, n, h).unwrap()
    }

    #[test]
    fn no_amplification_thermalizes() {
        let e = symmetric_entries(&fam(0.0, 0.0, 3.0, Horizon::Finite(1.0))).unwrap();
        let expect = 3.0 - 2.0 * (-2.0f64).exp();
        assert!((e.a - expect).abs() < 1e-14 && (e.b - expect).abs() < 1e-14);
        assert!((expect - 2.729329).abs() < 1e-6);
        assert_eq!((e.c, e.d), (0.0, 0.0));
    }

    #[test]
    fn residue_values() {
        let e = symmetric_entries(&fam(0.8, -0.4, 1.0, Horizon::Infinite)).unwrap();
        let want = [5.0, 5.0 / 9.0, 5.0 / 7.0, 5.0 / 3.0];
        for (got, w) in e.primed().iter().zip(want) {
            assert!((got - w).abs() < 1e-13, "{got} vs {w}");
        }
    }

    #[test]
    fn vacuum_at_time_zero() {
        for (z0, z1, n) in [(0.3, -0.7, 1.0), (2.5, 0.1, 4.0), (-1.7, 1.3, 2.0)] {
            let e = symmetric_entries(&fam(z0, z1, n, Horizon::Finite(0.0))).unwrap();
            assert!((e.a - 1.0).abs() < 1e-15 && (e.b - 1.0).abs() < 1e-15);
            assert!(e.c.abs() < 1e-15 && e.d.abs() < 1e-15);
        }
    }

    #[test]
    fn primed_identities() {
        let e = symmetric_entries(&fam(0.45, -0.6, 1.8, Horizon::Finite(0.7))).unwrap();
        assert!((e.a_p - (e.a + 2.0 * e.c)).abs() < 1e-12);
        assert!((e.c_p - (e.a - e.c)).abs() < 1e-12);
        assert!((e.b_p - (e.b + 2.0 * e.d)).abs() < 1e-12);
        assert!((e.d_p - (e.b - e.d)).abs() < 1e-12);
    }

    #[test]
    fn growing_modes_are_infinite_at_infinity() {
        let e = symmetric_entries(&fam(2.0, -2.0, 1.0, Horizon::Infinite)).unwrap();
        assert_eq!(e.a_p, f64::INFINITY);
        assert_eq!(e.d_p, f64::INFINITY);
        assert!((e.b_p - 1.0 / 3.0).abs() < 1e-15);
        assert!((e.c_p - 1.0 / 3.0).abs() < 1e-15);
        assert!(!e.is_finite());
    }

    #[test]
    fn resonance_rejected() {
        for (z0, z1) in [(1.0, 0.2), (0.2, -1.0)] {
            let r = symmetric_entries(&fam(z0, z1, 1.0, Horizon::Finite(1.0)));
            assert!(matches!(r, Err(Error::Resonance { .. })));
        }
    }

    #[test]
    fn large_horizon_matches_limit() {
        let f = fam(0.6, -0.3, 2.0, Horizon::Finite(40.0));
        let lim = symmetric_entries(&f.with_horizon(Horizon::Infinite).unwrap()).unwrap();
        let e = symmetric_entries(&f).unwrap();
        for (x, y) in e.primed().iter().zip(lim.primed()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_placement() {
        let e = SymmetricEntries { a: 2.0, b: 1.0, c: 0.5, d: -0.2, a_p: 0.0, b_p: 0.0, c_p: 0.0, d_p: 0.0 };
        let g = build_symmetric_gamma(&e, 1.0).unwrap();
        let m = g.entries();
        for (r, c) in [(0, 2), (0, 4), (2, 4)] {
            assert_eq!(m[(r, c)], 0.5);
        }
        for (r, c) in [(1, 3), (1, 5), (3, 5)] {
            assert_eq!(m[(r, c)], -0.2);
        }
        assert_eq!(m[(0, 1)], 0.0);
        assert_eq!(m[(4, 4)], 2.0);
        assert_eq!(m[(5, 5)], 1.0);
        for perm in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
            assert_eq!(&g.permute_modes(&perm).unwrap(), &g);
        }
    }

    #[test]
    fn unit_entries_give_identity() {
        let e = SymmetricEntries::from_primed(1.0, 1.0, 1.0, 1.0);
        assert_eq!(build_symmetric_gamma(&e, 1.0).unwrap(), CovarianceMatrix::identity(3));
        let bad = SymmetricEntries::from_primed(f64::INFINITY, 1.0, 1.0, 1.0);
        assert!(build_symmetric_gamma(&bad, 1.0).is_err());
    }

    #[test]
    fn eta_and_zeta_parameterizations_agree() {
        let f = SymmetricFamily::new(0.0, 0.5, 1.0, Horizon::Infinite).unwrap();
        assert_eq!((f.zeta0(), f.zeta1()), (1.0, -0.5));
        let g = fam(0.8, -0.4, 1.0, Horizon::Infinite);
        assert!((g.eta0p() - 0.0).abs() < 1e-15);
        assert!((g.eta1p() - 0.4).abs() < 1e-15);
    }
}
