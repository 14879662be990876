//! Shannon entropy and minimal-entropy distributions at fixed maximum
//! probability.
//!
//! Among all distributions of length `N` whose largest entry equals `P`, the
//! entropy is minimized by the shape
//!
//! ```text
//! { P, ..., P (M times), 1 - M P, 0, ..., 0 }     with  M <= 1/P < M + 1
//! ```
//!
//! so the minimal entropy is `-M P ln P - (1 - M P) ln(1 - M P)`. The sum of two
//! such terms is the reduced functional minimized under the Landau-Pollak
//! constraint.

use crate::error::{EurError, Result};

/// Largest negative entry that is silently clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;
/// Allowed deviation of the entry sum from one.
pub const SUM_TOLERANCE: f64 = 1e-10;
/// Relative guard used when snapping `1/P` to an integer.
const SNAP_TOLERANCE: f64 = 1e-12;

/// `x ln x` with the convention `0 ln 0 = 0`.
#[inline]
pub(crate) fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// A finite discrete probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates `entries`: no entry below `-1e-12` (tiny negatives are clamped
    /// to zero), sum within `1e-10` of one, length at least one.
    pub fn new(mut entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(EurError::InvalidDistribution("empty distribution".into()));
        }
        for (i, p) in entries.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(EurError::InvalidDistribution(format!(
                    "entry {i} is not finite"
                )));
            }
            if *p < 0.0 {
                if *p < -NEGATIVE_CLAMP {
                    return Err(EurError::InvalidDistribution(format!(
                        "entry {i} is negative ({p})"
                    )));
                }
                *p = 0.0;
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(EurError::InvalidDistribution(format!(
                "entries sum to {sum}"
            )));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest entry.
    pub fn max_prob(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Shannon entropy `-sum p_i ln p_i` in nats.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    -p.entries().iter().map(|&x| xlogx(x)).sum::<f64>()
}

/// The multiplicity `M` with `M <= 1/P < M + 1`.
///
/// `1/P` within a relative `1e-12` of an integer snaps to that integer, so
/// `P = 1/M` always maps to `M` rather than `M - 1`.
pub fn multiplicity_for(p: f64) -> Result<usize> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(EurError::Domain(format!(
            "maximum probability must lie in (0, 1], got {p}"
        )));
    }
    let inv = 1.0 / p;
    let nearest = inv.round();
    let m = if (inv - nearest).abs() <= SNAP_TOLERANCE * inv.max(1.0) {
        nearest
    } else {
        inv.floor()
    };
    Ok(m.max(1.0) as usize)
}

/// `-M P ln P - (1 - M P) ln(1 - M P)`, with the residual clamped at zero.
pub(crate) fn shape_entropy(p: f64, m: usize) -> f64 {
    let mp = m as f64 * p;
    let residual = (1.0 - mp).max(0.0);
    -(m as f64) * xlogx(p) - xlogx(residual)
}

/// A minimal-entropy shape with fixed maximum probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinEntropyProfile {
    pub max_prob: f64,
    pub multiplicity: usize,
    pub dim: usize,
    /// Entropy in nats.
    pub entropy: f64,
}

impl MinEntropyProfile {
    /// The minimizing distribution: `M` copies of `P`, then `1 - M P`, then
    /// zeros up to length `N`. When `M = N` there is no residual slot.
    pub fn distribution(&self) -> ProbabilityVector {
        let mut entries = vec![self.max_prob; self.multiplicity];
        if self.multiplicity < self.dim {
            let residual = (1.0 - self.multiplicity as f64 * self.max_prob).max(0.0);
            entries.push(residual);
            entries.resize(self.dim, 0.0);
        }
        ProbabilityVector::new(entries).expect("minimal-entropy shape is a distribution")
    }
}

/// Minimal entropy over length-`dim` distributions whose largest entry is `p`.
pub fn min_entropy_given_max(p: f64, dim: usize) -> Result<MinEntropyProfile> {
    if dim == 0 {
        return Err(EurError::Domain("dimension must be positive".into()));
    }
    let m = multiplicity_for(p)?;
    if p < 1.0 / dim as f64 - NEGATIVE_CLAMP {
        return Err(EurError::InfeasibleMaximum { max_prob: p, dim });
    }
    // p may sit a hair below 1/dim, where floor(1/p) would overshoot.
    let m = m.min(dim);
    Ok(MinEntropyProfile {
        max_prob: p,
        multiplicity: m,
        dim,
        entropy: shape_entropy(p, m),
    })
}

/// Minimal entropy of a single distribution at maximum `p`, with no
/// dimension restriction.
pub(crate) fn min_entropy_unbounded(p: f64) -> Result<f64> {
    Ok(shape_entropy(p, multiplicity_for(p)?))
}

/// The reduced two-variable functional: the sum of the minimal entropies at
/// maximum probabilities `p_a` and `p_b`, assuming the ambient dimension is
/// large enough to hold both shapes.
pub fn entropy_sum_functional(p_a: f64, p_b: f64) -> Result<f64> {
    Ok(min_entropy_unbounded(p_a)? + min_entropy_unbounded(p_b)?)
}
