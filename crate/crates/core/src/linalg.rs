//! Small dense helpers not provided directly by nalgebra.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm<T: Real>(a: &DMatrix<T>) -> Result<DMatrix<T>> {
    let n = a.nrows();
    let norm = a.iter().fold(T::zero(), |m, v| m.max(v.abs())) * lit::<T>(n as f64);
    let mut squarings = 0u32;
    let mut scaled = a.clone();
    let half = lit::<T>(0.5);
    let mut bound = norm;
    while bound > half {
        scaled *= half;
        bound *= half;
        squarings += 1;
        if squarings > 1100 {
            return Err(Error::NumericalFailure("matrix exponential argument too large".into()));
        }
    }
    let tol = lit::<T>(1e-17).max(T::default_epsilon() * lit(0.25));
    let mut sum = DMatrix::<T>::identity(n, n);
    let mut term = DMatrix::<T>::identity(n, n);
    for k in 1..=40 {
        term = &term * &scaled / lit::<T>(k as f64);
        sum += &term;
        if term.amax() <= tol * sum.amax() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

pub fn to_complex<T: Real>(a: &DMatrix<T>) -> DMatrix<Complex<T>> {
    a.map(|v| Complex::new(v, T::zero()))
}

pub fn max_abs_complex<T: Real>(a: &DMatrix<Complex<T>>) -> T {
    a.iter().fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()))
}

pub fn max_abs_diff<T: Real>(a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> T {
    max_abs_complex(&(a - b))
}

pub fn is_real_matrix<T: Real>(a: &DMatrix<Complex<T>>, tol: T) -> bool {
    a.iter().all(|z| z.im.abs() <= tol)
}

pub fn real_part<T: Real>(a: &DMatrix<Complex<T>>) -> DMatrix<T> {
    a.map(|z| z.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_diagonal() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -2.0, 0.0, 7.5]));
        let e = expm(&a).unwrap();
        for (k, v) in [1.0f64, -2.0, 0.0, 7.5].iter().enumerate() {
            assert!((e[(k, k)] - v.exp()).abs() <= 1e-13 * v.exp());
        }
    }

    #[test]
    fn exp_of_rotation_generator() {
        let th = 2.3f64;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -th, th, 0.0]);
        let e = expm(&a).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        assert!((e - expect).amax() < 1e-14);
    }

    #[test]
    fn exp_of_nilpotent() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 0.0, 0.0]);
        let e = expm(&a).unwrap();
        assert_eq!(e, DMatrix::from_row_slice(2, 2, &[1.0, 3.0, 0.0, 1.0]));
    }
}
