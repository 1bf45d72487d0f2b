//! Covariance-matrix conventions for multimode Gaussian states.
//!
//! Quadratures are interleaved, `(x1, p1, x2, p2, ..., xs, ps)`, and the
//! covariance matrix is normalized so that the vacuum is the identity.
//! A state is physical when `gamma + iJ` is positive semidefinite.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::scalar::{cplx, is_finite, lit, Real};

/// Largest asymmetry tolerated (relative to the entry scale) before a
/// matrix is rejected as a covariance matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Default absolute tolerance for positive-semidefiniteness checks.
pub const DEFAULT_PSD_TOLERANCE: f64 = 1e-9;

/// Real symmetric `2s x 2s` second-moment matrix of an `s`-mode state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix<T: Real> {
    entries: DMatrix<T>,
}

impl<T: Real> CovarianceMatrix<T> {
    /// Symmetrizes `entries` as `(g + g^T)/2` after checking it is square,
    /// of even dimension, finite and symmetric to [`SYMMETRY_TOLERANCE`].
    pub fn new(entries: DMatrix<T>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return invalid(format!("covariance matrix must be square of even size, got {r}x{c}"));
        }
        if entries.iter().any(|&v| !is_finite(v)) {
            return invalid("covariance matrix has non-finite entries");
        }
        let scale = entries.amax().max(T::one());
        let asym = (&entries - entries.transpose()).amax();
        if asym > lit::<T>(SYMMETRY_TOLERANCE) * scale {
            return invalid(format!("covariance matrix is not symmetric (asymmetry {asym:e})"));
        }
        let sym = (&entries + entries.transpose()) * lit::<T>(0.5);
        Ok(Self { entries: sym })
    }

    pub fn identity(modes: usize) -> Self {
        Self { entries: DMatrix::identity(2 * modes, 2 * modes) }
    }

    pub fn modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn entries(&self) -> &DMatrix<T> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<T> {
        self.entries
    }

    /// `gamma + i * form` as a Hermitian complex matrix.
    pub fn with_form(&self, form: &SymplecticForm<T>) -> DMatrix<Complex<T>> {
        let j = form.matrix();
        DMatrix::from_fn(self.entries.nrows(), self.entries.ncols(), |r, c| {
            cplx(self.entries[(r, c)], j[(r, c)])
        })
    }

    /// Reorders the modes: mode `k` of the result is mode `perm[k]` of `self`.
    pub fn permute_modes(&self, perm: &[usize]) -> Result<Self> {
        let s = self.modes();
        let mut seen = vec![false; s];
        if perm.len() != s || perm.iter().any(|&p| p >= s || std::mem::replace(&mut seen[p], true)) {
            return invalid("mode permutation is not a permutation of 0..s");
        }
        let idx = |q: usize| 2 * perm[q / 2] + q % 2;
        let entries = DMatrix::from_fn(2 * s, 2 * s, |r, c| self.entries[(idx(r), idx(c))]);
        Ok(Self { entries })
    }
}

/// Block-diagonal symplectic form; each mode carries `[[0, -1], [1, 0]]`,
/// or its negative when the mode is partially transposed.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm<T: Real> {
    entries: DMatrix<T>,
}

impl<T: Real> SymplecticForm<T> {
    pub fn new(modes: usize) -> Result<Self> {
        Self::with_flipped_modes(modes, &[])
    }

    /// Form with the blocks of the listed (1-based) modes negated.
    /// `with_flipped_modes(2, &[2])` is the two-mode `J (+) (-J)`.
    pub fn with_flipped_modes(modes: usize, flipped: &[usize]) -> Result<Self> {
        if modes == 0 {
            return invalid("symplectic form needs at least one mode");
        }
        if let Some(&m) = flipped.iter().find(|&&m| m == 0 || m > modes) {
            return invalid(format!("mode {m} out of range 1..={modes}"));
        }
        let mut entries = DMatrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            let sign = if flipped.contains(&(k + 1)) { -T::one() } else { T::one() };
            entries[(2 * k, 2 * k + 1)] = -sign;
            entries[(2 * k + 1, 2 * k)] = sign;
        }
        Ok(Self { entries })
    }

    pub fn modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.entries
    }
}

/// Partial transposition of one mode: the sign flip of its momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialTransposition {
    mode: usize,
}

impl PartialTransposition {
    /// `mode` is 1-based.
    pub fn new(mode: usize, modes: usize) -> Result<Self> {
        if mode == 0 || mode > modes {
            return invalid(format!("mode {mode} out of range 1..={modes}"));
        }
        Ok(Self { mode })
    }

    pub fn mode(&self) -> usize {
        self.mode
    }

    /// Diagonal of the sign matrix; only the `p` entry of the mode is -1.
    pub fn signs<T: Real>(&self, modes: usize) -> Vec<T> {
        (0..2 * modes)
            .map(|q| if q == 2 * self.mode - 1 { -T::one() } else { T::one() })
            .collect()
    }

    pub fn apply<T: Real>(&self, gamma: &CovarianceMatrix<T>) -> CovarianceMatrix<T> {
        let signs = self.signs::<T>(gamma.modes());
        let g = &gamma.entries;
        let entries = DMatrix::from_fn(g.nrows(), g.ncols(), |r, c| signs[r] * g[(r, c)] * signs[c]);
        CovarianceMatrix { entries }
    }
}

/// Returns `Lambda_j gamma Lambda_j` for the 1-based mode `j`.
pub fn partial_transpose<T: Real>(gamma: &CovarianceMatrix<T>, j: usize) -> Result<CovarianceMatrix<T>> {
    Ok(PartialTransposition::new(j, gamma.modes())?.apply(gamma))
}

pub fn symplectic_form<T: Real>(modes: usize) -> Result<SymplecticForm<T>> {
    SymplecticForm::new(modes)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue_hermitian<T: Real>(h: &DMatrix<Complex<T>>) -> Result<T> {
    Ok(eigenvalues_hermitian(h)?.into_iter().reduce(|m, v| m.min(v)).unwrap_or_else(T::zero))
}

pub fn eigenvalues_hermitian<T: Real>(h: &DMatrix<Complex<T>>) -> Result<Vec<T>> {
    let (r, c) = h.shape();
    if r != c || r == 0 {
        return invalid(format!("expected a non-empty square matrix, got {r}x{c}"));
    }
    if h.iter().any(|z| !is_finite(z.re) || !is_finite(z.im)) {
        return invalid("matrix has non-finite entries");
    }
    let scale = h.iter().fold(T::one(), |m, z| m.max(z.re.abs() + z.im.abs()));
    let asym = (h - h.adjoint()).iter().fold(T::zero(), |m, z| m.max(z.re.abs() + z.im.abs()));
    if asym > lit::<T>(SYMMETRY_TOLERANCE) * scale {
        return invalid(format!("matrix is not Hermitian (deviation {asym:e})"));
    }
    let herm = (h + h.adjoint()).map(|z| z * lit::<T>(0.5));
    let eig = SymmetricEigen::try_new(herm, T::default_epsilon(), 0)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;
    Ok(eig.eigenvalues.iter().copied().collect())
}

/// Bona fide test: `min eig(gamma + iJ) >= -tol`.
pub fn is_valid_cm<T: Real>(gamma: &CovarianceMatrix<T>, tol: T) -> Result<bool> {
    Ok(uncertainty_margin(gamma)? >= -tol)
}

/// `min eig(gamma + iJ)`; negative for unphysical matrices.
pub fn uncertainty_margin<T: Real>(gamma: &CovarianceMatrix<T>) -> Result<T> {
    let form = SymplecticForm::new(gamma.modes())?;
    min_eigenvalue_hermitian(&gamma.with_form(&form))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn single_mode_form() {
        let j = symplectic_form::<f64>(1).unwrap();
        assert_eq!(j.matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let sq = j.matrix() * j.matrix();
        assert_eq!(sq, -DMatrix::<f64>::identity(2, 2));
    }

    #[test]
    fn three_mode_form_is_antisymmetric_full_rank() {
        let j = symplectic_form::<f64>(3).unwrap();
        let m = j.matrix();
        assert_eq!(m.shape(), (6, 6));
        assert_eq!(m.transpose(), -m.clone());
        assert_eq!(m * m, -DMatrix::<f64>::identity(6, 6));
        assert_eq!(m.rank(1e-12), 6);
    }

    #[test]
    fn zero_modes_rejected() {
        assert!(matches!(symplectic_form::<f64>(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn flipped_form() {
        let jt = SymplecticForm::<f64>::with_flipped_modes(2, &[2]).unwrap();
        let m = jt.matrix();
        assert_eq!(m[(0, 1)], -1.0);
        assert_eq!(m[(2, 3)], 1.0);
        assert_eq!(m[(3, 2)], -1.0);
        assert!(SymplecticForm::<f64>::with_flipped_modes(2, &[3]).is_err());
    }

    #[test]
    fn validity_examples() {
        let vac = CovarianceMatrix::<f64>::identity(3);
        assert!(is_valid_cm(&vac, 1e-9).unwrap());
        let squashed = CovarianceMatrix::new(DMatrix::<f64>::identity(6, 6) * 0.5).unwrap();
        assert!(!is_valid_cm(&squashed, 1e-9).unwrap());
        assert!((uncertainty_margin(&squashed).unwrap() + 0.5).abs() < 1e-12);
        let thermal = CovarianceMatrix::new(DMatrix::<f64>::identity(6, 6) * 3.0).unwrap();
        assert!(is_valid_cm(&thermal, 1e-9).unwrap());
    }

    #[test]
    fn construction_rejects_bad_input() {
        let mut m = DMatrix::<f64>::identity(6, 6);
        m[(0, 1)] = 1e-6;
        assert!(CovarianceMatrix::new(m.clone()).is_err());
        m[(0, 1)] = f64::NAN;
        assert!(CovarianceMatrix::new(m).is_err());
        assert!(CovarianceMatrix::new(DMatrix::<f64>::identity(3, 3)).is_err());
        let mut tiny = DMatrix::<f64>::identity(2, 2);
        tiny[(0, 1)] = 0.3;
        tiny[(1, 0)] = 0.3 + 1e-14;
        let g = CovarianceMatrix::new(tiny).unwrap();
        assert_eq!(g.entries()[(0, 1)], g.entries()[(1, 0)]);
    }

    #[test]
    fn transpose_examples() {
        let vac = CovarianceMatrix::<f64>::identity(3);
        for j in 1..=3 {
            assert_eq!(partial_transpose(&vac, j).unwrap(), vac);
        }
        let diag = CovarianceMatrix::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0, 2.0, 3.0, 4.0, 5.0, 6.0,
        ])))
        .unwrap();
        assert_eq!(partial_transpose(&diag, 2).unwrap(), diag);
        assert!(partial_transpose(&vac, 0).is_err());
        assert!(partial_transpose(&vac, 4).is_err());
    }

    #[test]
    fn sign_matrices_flip_one_momentum() {
        let l1 = PartialTransposition::new(1, 3).unwrap().signs::<f64>(3);
        assert_eq!(l1, vec![1.0, -1.0, 1.0, 1.0, 1.0, 1.0]);
        let l2 = PartialTransposition::new(2, 3).unwrap().signs::<f64>(3);
        assert_eq!(l2, vec![1.0, 1.0, 1.0, -1.0, 1.0, 1.0]);
        let l3 = PartialTransposition::new(3, 3).unwrap().signs::<f64>(3);
        assert_eq!(l3, vec![1.0, 1.0, 1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn eigenvalue_examples() {
        let vac_form = CovarianceMatrix::<f64>::identity(1).with_form(&SymplecticForm::new(1).unwrap());
        assert!(min_eigenvalue_hermitian(&vac_form).unwrap().abs() < 1e-14);
        let d = DMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)]);
        assert!((min_eigenvalue_hermitian(&d).unwrap() - 3.0).abs() < 1e-14);
        let h = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        assert!((min_eigenvalue_hermitian(&h).unwrap() - 1.0).abs() < 1e-14);
        let bad = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(2.0, 0.0)]);
        assert!(matches!(min_eigenvalue_hermitian(&bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn works_in_single_precision() {
        let vac = CovarianceMatrix::<f32>::identity(3);
        assert!(is_valid_cm(&vac, 1e-5).unwrap());
        let pt = partial_transpose(&vac, 1).unwrap();
        assert_eq!(pt, vac);
    }
}
