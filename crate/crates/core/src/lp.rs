//! The Landau-Pollak constraint `arccos sqrt(P_A) + arccos sqrt(P_B) >= arccos c`
//! and its saturation curve.
//!
//! On the saturation curve it is convenient to write `P_A = cos^2(alpha)`,
//! `P_B = cos^2(theta - alpha)` and `c = cos(theta)` with `alpha` in
//! `[0, theta]`.

use crate::error::{EurError, Result};

/// Slack allowed when checking the inequality.
pub const LP_TOLERANCE: f64 = 1e-12;

/// The overlap `c = max |<a_i|b_j>|` of two observables together with its
/// angle `theta = arccos c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap {
    c: f64,
    theta: f64,
}

impl Overlap {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(EurError::Domain(format!("overlap must lie in (0, 1], got {c}")));
        }
        Ok(Self { c, theta: c.acos() })
    }

    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `arccos c`, in `[0, pi/2)`.
    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn c_squared(&self) -> f64 {
        self.c * self.c
    }
}

/// `sqrt(1 - p)` clamped at zero for `p` a rounding error above one.
#[inline]
pub(crate) fn sqrt_complement(p: f64) -> f64 {
    (1.0 - p).max(0.0).sqrt()
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(EurError::Domain(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// `arccos sqrt(P_A) + arccos sqrt(P_B)`, in radians.
pub fn lp_lhs(p_a: f64, p_b: f64) -> Result<f64> {
    check_prob("P_A", p_a)?;
    check_prob("P_B", p_b)?;
    Ok(p_a.sqrt().acos() + p_b.sqrt().acos())
}

/// Whether the pair of maximum probabilities is allowed by the Landau-Pollak
/// relation at overlap `ov`, up to [`LP_TOLERANCE`].
pub fn lp_satisfied(p_a: f64, p_b: f64, ov: Overlap) -> Result<bool> {
    Ok(lp_lhs(p_a, p_b)? >= ov.theta() - LP_TOLERANCE)
}

/// The `P_B` in `[c^2, 1]` that saturates the relation together with `p_a`.
pub fn saturating_partner(p_a: f64, ov: Overlap) -> Result<f64> {
    check_prob("P_A", p_a)?;
    let c2 = ov.c_squared();
    if p_a < c2 - 1e-15 {
        return Err(EurError::NoSaturatingPartner { p_a, c_squared: c2 });
    }
    let alpha = p_a.sqrt().acos().min(ov.theta());
    Ok((ov.theta() - alpha).cos().powi(2))
}

/// `sqrt(P_A P_B) - sqrt((1 - P_A)(1 - P_B))`, which equals `c` on the
/// saturation curve.
pub fn saturation_overlap(p_a: f64, p_b: f64) -> f64 {
    (p_a * p_b).sqrt() - sqrt_complement(p_a) * sqrt_complement(p_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn overlap_domain() {
        assert!(Overlap::new(0.0).is_err());
        assert!(Overlap::new(1.5).is_err());
        assert!(Overlap::new(f64::NAN).is_err());
        let ov = Overlap::new(1.0).unwrap();
        assert_eq!(ov.theta(), 0.0);
    }

    #[test]
    fn lhs_examples() {
        assert_eq!(lp_lhs(1.0, 1.0).unwrap(), 0.0);
        assert!((lp_lhs(1.0, 0.5).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((lp_lhs(0.5, 0.5).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(lp_lhs(-0.1, 0.5).is_err());
    }

    #[test]
    fn satisfied_examples() {
        let ov = Overlap::new(0.9).unwrap();
        let p = 0.95;
        assert!(lp_satisfied(p, p, ov).unwrap());
        assert!((lp_lhs(p, p).unwrap() - ov.theta()).abs() < 1e-12);

        assert!(!lp_satisfied(1.0, 1.0, Overlap::new(0.5).unwrap()).unwrap());

        for &c in &[0.3, 0.5, 0.8, 0.99] {
            let ov = Overlap::new(c).unwrap();
            assert!(lp_satisfied(1.0, c * c, ov).unwrap());
            assert!((lp_lhs(1.0, c * c).unwrap() - ov.theta()).abs() < 1e-12);
        }
    }

    #[test]
    fn partner_examples() {
        for &c in &[0.4, 0.75, 0.9] {
            let ov = Overlap::new(c).unwrap();
            assert!((saturating_partner(1.0, ov).unwrap() - c * c).abs() < 1e-15);
            let sym = (1.0 + c) / 2.0;
            assert!((saturating_partner(sym, ov).unwrap() - sym).abs() < 1e-12);
        }
        let ov = Overlap::new(0.8).unwrap();
        assert!(matches!(
            saturating_partner(0.5, ov),
            Err(EurError::NoSaturatingPartner { .. })
        ));
    }

    #[test]
    fn partner_by_independent_bisection() {
        // solve arccos sqrt(P_B) = theta - arccos sqrt(P_A) for P_B by bisection
        let ov = Overlap::new(0.8).unwrap();
        for &p_a in &[0.9f64, 0.7, 0.97] {
            let target = ov.theta() - p_a.sqrt().acos();
            let (mut lo, mut hi) = (ov.c_squared(), 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                // arccos sqrt is decreasing in P_B
                if mid.sqrt().acos() > target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let p_b = saturating_partner(p_a, ov).unwrap();
            assert!((p_b - 0.5 * (lo + hi)).abs() < 1e-10);
            assert!((saturation_overlap(p_a, p_b) - 0.8).abs() < 1e-10);
        }
    }
}
