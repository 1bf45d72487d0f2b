use nalgebra::{Complex, DMatrix, Matrix2};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{eigenvalues_hermitian, CovarianceMatrix, SymplecticForm};
use crate::linalg::max_abs_complex;
use crate::scalar::{cplx, lit, to_f64, Real};

/// Largest condition number accepted for `B - iJ` before it is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Schur complements `K = A - C (B - iJ)^{-1} C^T` and
/// `K~ = A - C (B - iJ~)^{-1} C^T` of a three-mode covariance matrix, with
/// `A` the first mode, `B` the remaining two and `J~ = J (+) (-J)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurPair<T: Real> {
    pub k: Matrix2<Complex<T>>,
    pub k_tilde: Matrix2<Complex<T>>,
}

/// Entries of a 2x2 Hermitian matrix `[[u, v], [v*, w]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianEntries<T> {
    pub u: T,
    pub v: Complex<T>,
    pub w: T,
}

impl<T: Real> HermitianEntries<T> {
    fn of(m: &Matrix2<Complex<T>>) -> Self {
        Self { u: m[(0, 0)].re, v: m[(0, 1)], w: m[(1, 1)].re }
    }

    pub fn trace(&self) -> T {
        self.u + self.w
    }

    pub fn det(&self) -> T {
        self.u * self.w - self.v.norm_sqr()
    }

    /// `(u - w, 2 Re v)`.
    pub fn linear_term(&self) -> [T; 2] {
        [self.u - self.w, lit::<T>(2.0) * self.v.re]
    }
}

impl<T: Real> SchurPair<T> {
    /// Both complements equal to `k` (no coupling to the other modes).
    pub fn uncoupled(k: Matrix2<Complex<T>>) -> Self {
        Self { k, k_tilde: k }
    }

    pub fn from_real(k: [[T; 2]; 2], k_tilde: [[T; 2]; 2]) -> Self {
        let m = |a: [[T; 2]; 2]| Matrix2::new(
            cplx(a[0][0], T::zero()), cplx(a[0][1], T::zero()),
            cplx(a[1][0], T::zero()), cplx(a[1][1], T::zero()),
        );
        Self { k: m(k), k_tilde: m(k_tilde) }
    }

    pub fn k_entries(&self) -> HermitianEntries<T> {
        HermitianEntries::of(&self.k)
    }

    pub fn k_tilde_entries(&self) -> HermitianEntries<T> {
        HermitianEntries::of(&self.k_tilde)
    }

    pub fn is_finite(&self) -> bool {
        self.k.iter().chain(self.k_tilde.iter()).all(|z| crate::scalar::is_finite(z.re) && crate::scalar::is_finite(z.im))
    }
}

pub fn schur_complements<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<SchurPair<T>> {
    if gamma.modes() != 3 {
        return invalid("Schur complements need a three-mode covariance matrix");
    }
    let g = gamma.entries();
    let a = g.view((0, 0), (2, 2)).map(|v| cplx(v, T::zero()));
    let c = g.view((0, 2), (2, 4)).map(|v| cplx(v, T::zero()));
    let b = CovarianceMatrix::new(g.view((2, 2), (4, 4)).into_owned())?;
    let a2 = Matrix2::new(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);

    let scale = g.amax().max(T::one());
    if max_abs_complex(&c) <= lit::<T>(1e-15) * scale {
        return Ok(SchurPair::uncoupled(a2));
    }

    let complement = |form: &SymplecticForm<T>| -> Result<Matrix2<Complex<T>>> {
        // B - iJ is the complex conjugate of B + iJ.
        let shifted = b.with_form(form).conjugate();
        let eig = eigenvalues_hermitian(&shifted)?;
        let big = eig.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let small = eig.iter().fold(big, |m, v| m.min(v.abs()));
        if !(small * lit(MAX_CONDITION) > big) {
            let condition = if small > T::zero() { to_f64(big / small) } else { f64::INFINITY };
            return Err(Error::Singular { condition });
        }
        let inv = shifted
            .try_inverse()
            .ok_or(Error::Singular { condition: f64::INFINITY })?;
        let k: DMatrix<Complex<T>> = &a - &c * inv * c.transpose();
        let half = lit::<T>(0.5);
        let herm = (&k + k.adjoint()).map(|z| z * half);
        Ok(Matrix2::new(herm[(0, 0)], herm[(0, 1)], herm[(1, 0)], herm[(1, 1)]))
    };

    Ok(SchurPair {
        k: complement(&SymplecticForm::new(2)?)?,
        k_tilde: complement(&SymplecticForm::with_flipped_modes(2, &[2])?)?,
    })
}
