//! Weierstrass primary factors.
//!
//! The elementary building blocks of canonical products:
//!
//! ```text
//! E(z;0) = 1 - z,      E(z;p) = (1 - z) exp(z + z^2/2 + ... + z^p/p)
//! ```
//!
//! All product evaluation downstream reduces to sums of `log E(z/a; p)`
//! over root systems, so this module also provides the log-magnitude of a
//! single factor and a rigorous bound on `|log E(w;p)|` for small `|w|`
//! used to control truncation tails.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible genus. Order-two entire functions (the Fock-space
/// range) never need more than `p = 2`; the cap rejects pathological
/// configurations early.
pub const GENUS_MAX: u32 = 8;

/// Exponents above this overflow `exp` in double precision.
const EXP_OVERFLOW: f64 = 709.0;

#[derive(Debug, Error, PartialEq)]
pub enum PrimaryError {
    #[error("genus {0} exceeds the cap {GENUS_MAX}")]
    GenusTooLarge(u32),
    #[error("exp overflow: exponent magnitude {exponent:.3e}")]
    ExpOverflow { exponent: f64 },
    #[error("log-magnitude has a pole at z = 1 (input z = {z})")]
    SingularInput { z: Complex64 },
    #[error("tail bound requires 0 <= |w| <= 1/2, got {w_abs}")]
    TailRadiusOutOfRange { w_abs: f64 },
}

/// Genus of a canonical product: the integer `p` in `E(z;p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Genus(u32);

impl Genus {
    pub fn new(p: u32) -> Result<Self, PrimaryError> {
        if p > GENUS_MAX {
            return Err(PrimaryError::GenusTooLarge(p));
        }
        Ok(Genus(p))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Genus {
    type Error = PrimaryError;
    fn try_from(p: u32) -> Result<Self, PrimaryError> {
        Genus::new(p)
    }
}

impl From<Genus> for u32 {
    fn from(p: Genus) -> u32 {
        p.0
    }
}

/// Exponential correction `z + z^2/2 + ... + z^p/p`, evaluated by Horner
/// from the high end down to limit rounding.
fn exp_polynomial(z: Complex64, p: u32) -> Complex64 {
    if p == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = Complex64::new(1.0 / f64::from(p), 0.0);
    for ell in (1..p).rev() {
        acc = acc * z + 1.0 / f64::from(ell);
    }
    acc * z
}

/// Evaluate the primary factor `E(z;p)`.
///
/// Fails with a range error when the exponential correction alone would
/// overflow double precision.
pub fn primary_factor(z: Complex64, p: Genus) -> Result<Complex64, PrimaryError> {
    let s = exp_polynomial(z, p.get());
    let lead = Complex64::new(1.0, 0.0) - z;
    let exponent = s.re + lead.norm().ln().max(0.0);
    if exponent > EXP_OVERFLOW {
        return Err(PrimaryError::ExpOverflow { exponent });
    }
    Ok(lead * s.exp())
}

/// Principal-branch logarithm of a primary factor,
/// `log E(z;p) = log(1 - z) + z + ... + z^p/p`.
///
/// Each factor's log is a branch of the true log, so `exp` of a sum of
/// these reproduces the product exactly; no unwinding is needed.
/// Returns `-inf` real part at `z = 1`; callers detect root hits first.
pub(crate) fn log_primary_factor(z: Complex64, p: u32) -> Complex64 {
    (Complex64::new(1.0, 0.0) - z).ln() + exp_polynomial(z, p)
}

/// `log |E(z;p)| = log|1 - z| + Re(z + ... + z^p/p)`.
///
/// The pole at `z = 1` is genuine (a root of the factor) and is reported
/// as a singular-input error; root-aware callers never sample there.
pub fn log_abs_primary_factor(z: Complex64, p: Genus) -> Result<f64, PrimaryError> {
    let lead = Complex64::new(1.0, 0.0) - z;
    if lead.norm() == 0.0 {
        return Err(PrimaryError::SingularInput { z });
    }
    Ok(lead.norm().ln() + exp_polynomial(z, p.get()).re)
}

/// Upper bound on `|log E(w;p)|` valid for all `|w| = w_abs <= 1/2`:
///
/// ```text
/// |log E(w;p)| = |sum_{j>p} w^j/j| <= w_abs^{p+1} / ((p+1)(1 - w_abs))
/// ```
///
/// Callers must keep omitted roots inside this regime.
pub fn tail_log_bound(w_abs: f64, p: Genus) -> Result<f64, PrimaryError> {
    if !(0.0..=0.5).contains(&w_abs) {
        return Err(PrimaryError::TailRadiusOutOfRange { w_abs });
    }
    if w_abs == 0.0 {
        return Ok(0.0);
    }
    let p1 = f64::from(p.get() + 1);
    Ok(w_abs.powi(p.get() as i32 + 1) / (p1 * (1.0 - w_abs)))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen oracle values keep all 17 digits
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factor_is_one_at_origin() {
        let v = primary_factor(c(0.0, 0.0), Genus::new(3).unwrap()).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn factor_vanishes_at_one() {
        let v = primary_factor(c(1.0, 0.0), Genus::new(2).unwrap()).unwrap();
        assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn factor_half_genus_one() {
        // E(1/2;1) = (1/2) e^{1/2}
        let v = primary_factor(c(0.5, 0.0), Genus::new(1).unwrap()).unwrap();
        assert_relative_eq!(v.re, 0.82436063535006407, max_relative = 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn factor_overflow_reports_exponent() {
        let err = primary_factor(c(100.0, 0.0), Genus::new(8).unwrap()).unwrap_err();
        match err {
            PrimaryError::ExpOverflow { exponent } => assert!(exponent > EXP_OVERFLOW),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn log_abs_at_origin_is_zero() {
        let v = log_abs_primary_factor(c(0.0, 0.0), Genus::new(2).unwrap()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn log_abs_at_i_genus_zero() {
        // log|1 - i| = log sqrt(2)
        let v = log_abs_primary_factor(c(0.0, 1.0), Genus::new(0).unwrap()).unwrap();
        assert_relative_eq!(v, 0.34657359027997265, max_relative = 1e-15);
    }

    #[test]
    fn log_abs_half_genus_one() {
        let v = log_abs_primary_factor(c(0.5, 0.0), Genus::new(1).unwrap()).unwrap();
        assert_relative_eq!(v, -0.19314718055994531, max_relative = 1e-15);
    }

    #[test]
    fn log_abs_pole_is_rejected() {
        let err = log_abs_primary_factor(c(1.0, 0.0), Genus::new(1).unwrap()).unwrap_err();
        assert!(matches!(err, PrimaryError::SingularInput { .. }));
    }

    #[test]
    fn tail_bound_values() {
        let p1 = Genus::new(1).unwrap();
        let p2 = Genus::new(2).unwrap();
        assert_eq!(tail_log_bound(0.0, p1).unwrap(), 0.0);
        assert_relative_eq!(tail_log_bound(0.5, p1).unwrap(), 0.25, max_relative = 1e-15);
        assert_relative_eq!(
            tail_log_bound(0.25, p2).unwrap(),
            0.0069444444444444444,
            max_relative = 1e-15
        );
    }

    #[test]
    fn tail_bound_rejects_large_radius() {
        assert!(tail_log_bound(0.6, Genus::new(1).unwrap()).is_err());
    }

    #[test]
    fn genus_cap() {
        assert!(Genus::new(GENUS_MAX).is_ok());
        assert!(Genus::new(GENUS_MAX + 1).is_err());
    }

    #[test]
    fn tail_bound_dominates_on_circles() {
        // |log E(w;p)| <= tail_log_bound(|w|, p) sampled densely on circles.
        for p in 0..=2u32 {
            let genus = Genus::new(p).unwrap();
            for &radius in &[0.1, 0.25, 0.5] {
                let bound = tail_log_bound(radius, genus).unwrap();
                for j in 0..720 {
                    let th = 2.0 * std::f64::consts::PI * f64::from(j) / 720.0;
                    let w = Complex64::from_polar(radius, th);
                    let lg = log_primary_factor(w, p);
                    assert!(
                        lg.norm() <= bound * (1.0 + 1e-12),
                        "p={p} r={radius} theta={th}: |log E| = {} > {bound}",
                        lg.norm()
                    );
                }
            }
        }
    }
}
