//! Closed-form conditions for the symmetric family, written in terms of the
//! collective variances `a' = a + 2c`, `b' = b + 2d`, `c' = a - c`, `d' = b - d`
//! and the amplification ratios `zeta0`, `zeta1`.

use crate::error::{Error, Result};
use crate::evolution::SymmetricEntries;
use crate::scalar::{lit, to_f64, Real};

/// Agreement required between adjacent pieces of the biseparable boundary.
pub const SEAM_TOLERANCE: f64 = 1e-9;

/// `1 - (a'b' + 8b'c' + 8a'd' + c'd')/9 + a'b'c'd'`; the state is PPT with
/// respect to each single mode iff this is non-negative.
pub fn ppt_symmetric_expression<T: Real>(e: &SymmetricEntries<T>) -> T {
    let [a, b, c, d] = e.primed();
    let eight = lit::<T>(8.0);
    T::one() - (a * b + eight * b * c + eight * a * d + c * d) / lit(9.0) + a * b * c * d
}

pub fn ppt_symmetric_condition<T: Real>(e: &SymmetricEntries<T>) -> bool {
    ppt_symmetric_expression(e) >= T::zero()
}

/// Finite-time form `-cd [(a-c)(b+2d) - 1] [(b-d)(a+2c) - 1]`.
pub fn intersection_expression<T: Real>(e: &SymmetricEntries<T>) -> T {
    -e.c * e.d * ((e.a - e.c) * (e.b + lit::<T>(2.0) * e.d) - T::one()) * ((e.b - e.d) * (e.a + lit::<T>(2.0) * e.c) - T::one())
}

/// Asymptotic form `(a'd' - 1)(c'b' - 1)`, valid once `cd <= 0`.
pub fn asymptotic_intersection_expression<T: Real>(e: &SymmetricEntries<T>) -> T {
    (e.a_p * e.d_p - T::one()) * (e.c_p * e.b_p - T::one())
}

/// Whether the two boundary ellipses meet; `asymptotic` selects the
/// `t' -> inf` form.
pub fn intersection_condition<T: Real>(e: &SymmetricEntries<T>, asymptotic: bool) -> bool {
    let v = if asymptotic { asymptotic_intersection_expression(e) } else { intersection_expression(e) };
    v >= T::zero()
}

/// Critical `n'^2` above which the asymptotic state is fully separable.
pub fn fully_sep_boundary<T: Real>(zeta0: T, zeta1: T) -> T {
    if zeta0 >= zeta1 {
        (T::one() + zeta0) * (T::one() - zeta1)
    } else {
        (T::one() - zeta0) * (T::one() + zeta1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Band {
    Below,
    Inside,
    Above,
}

fn bands<T: Real>(zeta: T) -> Vec<Band> {
    let one = T::one();
    if zeta == one {
        vec![Band::Inside, Band::Above]
    } else if zeta == -one {
        vec![Band::Below, Band::Inside]
    } else if zeta > one {
        vec![Band::Above]
    } else if zeta < -one {
        vec![Band::Below]
    } else {
        vec![Band::Inside]
    }
}

/// Damping-dominated boundary:
/// `1 - (z0^2 + 16 z0 z1 + z1^2)/18 + |z0 - z1| sqrt(288 + z0^2 + 34 z0 z1 + z1^2)/18`.
pub fn weak_bisep_boundary<T: Real>(z0: T, z1: T) -> T {
    let c18 = lit::<T>(18.0);
    let quad = z0 * z0 + lit::<T>(16.0) * z0 * z1 + z1 * z1;
    let root = (lit::<T>(288.0) + z0 * z0 + lit::<T>(34.0) * z0 * z1 + z1 * z1).sqrt();
    T::one() - quad / c18 + (z0 - z1).abs() * root / c18
}

/// The same weak-amplification boundary in the ratios `eta0'`, `eta1'`:
/// `1 - e0^2 - e0 e1 + 3/2 e1^2 + |e1|/2 sqrt(32 + 4 e0^2 + 4 e0 e1 - 7 e1^2)`.
pub fn weak_bisep_boundary_eta<T: Real>(e0: T, e1: T) -> T {
    let half = lit::<T>(0.5);
    let four = lit::<T>(4.0);
    T::one() - e0 * e0 - e0 * e1 + lit::<T>(1.5) * e1 * e1
        + half * e1.abs() * (lit::<T>(32.0) + four * e0 * e0 + four * e0 * e1 - lit::<T>(7.0) * e1 * e1).sqrt()
}

fn piece<T: Real>(z0: T, z1: T, b0: Band, b1: Band) -> Option<T> {
    let one = T::one();
    let ninth = one / lit(9.0);
    let eight_ninths = lit::<T>(8.0) * ninth;
    use Band::*;
    match (b0, b1) {
        (Inside, Inside) => Some(weak_bisep_boundary(z0, z1)),
        (Above, Inside) => Some((one - z1) * (one + z0) - ninth * (one - z1) * (z0 - z1)),
        (Above, Below) => Some(eight_ninths * (one - z1) * (one + z0)),
        (Inside, Below) => Some((one - z1) * (one + z0) - ninth * (one + z0) * (z0 - z1)),
        (Inside, Above) => Some((one + z1) * (one - z0) - ninth * (one - z0) * (z1 - z0)),
        (Below, Inside) => Some((one + z1) * (one - z0) - ninth * (one + z1) * (z1 - z0)),
        (Below, Above) => Some(eight_ninths * (one + z1) * (one - z0)),
        (Above, Above) | (Below, Below) => None,
    }
}

/// Critical `n'^2` above which the asymptotic state is PPT with respect to
/// every single mode; `None` where no noise is needed at all (both ratios
/// above 1 or both below -1).
///
/// On a seam `|zeta| = 1` every adjacent piece is evaluated; pieces that
/// disagree by more than [`SEAM_TOLERANCE`] raise [`Error::Inconsistency`].
pub fn bisep_boundary<T: Real>(zeta0: T, zeta1: T) -> Result<Option<T>> {
    let mut values = Vec::new();
    let mut unrestricted = false;
    for &b0 in &bands(zeta0) {
        for &b1 in &bands(zeta1) {
            match piece(zeta0, zeta1, b0, b1) {
                Some(v) => values.push(v),
                None => unrestricted = true,
            }
        }
    }
    let Some(&first) = values.first() else {
        return Ok(None);
    };
    let tol = lit::<T>(SEAM_TOLERANCE);
    for &v in &values[1..] {
        if (v - first).abs() > tol * first.abs().max(T::one()) {
            return Err(Error::Inconsistency(format!(
                "pieces give {:.12e} and {:.12e} at zeta = ({:e}, {:e})",
                to_f64(first),
                to_f64(v),
                to_f64(zeta0),
                to_f64(zeta1)
            )));
        }
    }
    if unrestricted && first > T::one() + tol {
        return Err(Error::Inconsistency(format!(
            "unrestricted piece meets boundary {:.12e} at zeta = ({:e}, {:e})",
            to_f64(first),
            to_f64(zeta0),
            to_f64(zeta1)
        )));
    }
    Ok(Some(first))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppt_expression_examples() {
        let unit = SymmetricEntries::from_primed(1.0, 1.0, 1.0, 1.0);
        assert_eq!(ppt_symmetric_expression(&unit), 0.0);
        assert!(ppt_symmetric_condition(&unit));
        let e = SymmetricEntries::from_primed(5.0, 5.0 / 9.0, 5.0 / 7.0, 5.0 / 3.0);
        let v: f64 = ppt_symmetric_expression(&e);
        // 1 - 1550/189 + 625/189
        assert!((v - (1.0 - 925.0 / 189.0)).abs() < 1e-12);
        assert!((v + 3.894).abs() < 1e-3);
        assert!(!ppt_symmetric_condition(&e));
    }

    #[test]
    fn intersection_examples() {
        let product = SymmetricEntries { a: 2.0, b: 0.7, c: 0.0, d: 0.3, a_p: 0.0, b_p: 0.0, c_p: 0.0, d_p: 0.0 };
        assert_eq!(intersection_expression(&product), 0.0);
        assert!(intersection_condition(&product, false));
        let e = SymmetricEntries::from_primed(5.0, 5.0 / 9.0, 5.0 / 7.0, 5.0 / 3.0);
        assert!(!intersection_condition(&e, true));
        let n2 = 2.6f64;
        let e = SymmetricEntries::from_primed(n2.sqrt() / 0.2, n2.sqrt() / 1.8, n2.sqrt() / 1.4, n2.sqrt() / 0.6);
        assert!(intersection_condition(&e, true));
    }

    #[test]
    fn fully_separable_boundary_examples() {
        assert!((fully_sep_boundary(0.8, -0.4) - 2.52f64).abs() < 1e-15);
        assert!((fully_sep_boundary(2.0, -2.0) - 9.0f64).abs() < 1e-15);
        for z in [-0.7f64, 0.0, 0.4] {
            assert!((fully_sep_boundary(z, z) - (1.0 - z * z)).abs() < 1e-15);
            assert!((fully_sep_boundary(z + 1e-12, z) - fully_sep_boundary(z, z + 1e-12)).abs() < 1e-10);
        }
    }

    #[test]
    fn biseparable_boundary_examples() {
        assert!((bisep_boundary(1.0, -0.5).unwrap().unwrap() - 2.75f64).abs() < 1e-12);
        assert!((weak_bisep_boundary_eta(0.0, 0.5f64) - 2.75).abs() < 1e-12);
        assert!((bisep_boundary(2.0, 0.0).unwrap().unwrap() - 25.0f64 / 9.0).abs() < 1e-12);
        assert!((bisep_boundary(2.0, -2.0).unwrap().unwrap() - 8.0f64).abs() < 1e-12);
        assert!((bisep_boundary(0.8, -0.4).unwrap().unwrap() - 2.3514f64).abs() < 1e-4);
        assert_eq!(bisep_boundary(1.5, 3.0).unwrap(), None);
        assert_eq!(bisep_boundary(-1.5, -3.0).unwrap(), None);
    }

    #[test]
    fn zeta_and_eta_forms_agree() {
        for (e0, e1) in [(0.1f64, 0.2f64), (-0.3, 0.25), (0.2, -0.3), (0.0, 0.0)] {
            let (z0, z1) = (e0 + 2.0 * e1, e0 - e1);
            assert!((weak_bisep_boundary(z0, z1) - weak_bisep_boundary_eta(e0, e1)).abs() < 1e-13f64);
        }
    }

    #[test]
    fn seams_are_continuous() {
        for z in [-3.0, -1.5, -0.9, -0.2, 0.0, 0.5, 0.99, 1.7, 4.0] {
            assert!(bisep_boundary(1.0, z).is_ok(), "zeta1 = {z}");
            assert!(bisep_boundary(-1.0, z).is_ok(), "zeta1 = {z}");
            assert!(bisep_boundary(z, 1.0).is_ok(), "zeta0 = {z}");
            assert!(bisep_boundary(z, -1.0).is_ok(), "zeta0 = {z}");
        }
        for (z0, z1) in [(1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
            assert!(bisep_boundary(z0, z1).is_ok());
        }
    }
}
