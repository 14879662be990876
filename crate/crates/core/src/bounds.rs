//! Lower bounds on `H(A) + H(B)` as functions of the overlap `c`.
//!
//! Three families of stationary points of the reduced functional on the
//! Landau-Pollak saturation curve are candidates for its minimum:
//!
//! - `F(c)`: the symmetric point `P_A = P_B = (1 + c)/2`;
//! - `G(c)`: the boundary point `P_A = 1`, `P_B = c^2`;
//! - `H_M(c)`: asymmetric points with `M_A = 1`, `M_B = M`, found numerically
//!   as roots of a transcendental equation in `alpha`.
//!
//! The final bound is `-2 ln c` for `c <= 1/sqrt(2)`, `H_1(c)` up to the
//! crossover `c*` and `F(c)` above it.
//!
//! `H_1` only exists below `c*`: its two mirror-image roots approach the
//! symmetric point as `c` grows and merge into it at `c*`, where
//! `c ln((1 + c)/(1 - c)) = 2`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::sync::OnceLock;

use crate::entropy::{entropy_sum_functional, shape_entropy, multiplicity_for, xlogx};
use crate::error::{EurError, Result};
use crate::lp::Overlap;

/// Uniform samples used to bracket roots of the transcendental equation.
pub const SCAN_SAMPLES: usize = 10_000;
/// Bisection stops once the bracket in `alpha` is narrower than this.
pub const ROOT_TOLERANCE: f64 = 1e-13;
/// Roots with `|P_A - P_B|` below this reproduce the symmetric candidate.
pub const SYMMETRIC_EXCLUSION: f64 = 1e-8;
/// Distance kept from each end of the admissible `alpha` band.
pub const BAND_MARGIN: f64 = 1e-12;
/// Bisection tolerance of the cached crossover.
pub const CSTAR_CACHE_TOLERANCE: f64 = 1e-9;
/// Largest `M` whose `H_M` is tabulated in a [`BoundBreakdown`].
pub const MAX_DIAGNOSTIC_M: usize = 64;

/// Within this distance below `c*` the asymmetric roots are closer to the
/// symmetric point than the scan resolves, so `H_1` has already merged into
/// `F`.
const CSTAR_MERGE_WINDOW: f64 = 1e-6;

/// Deutsch: `-2 ln((1 + c)/2)`.
pub fn deutsch_bound(ov: Overlap) -> f64 {
    -2.0 * ((1.0 + ov.c()) / 2.0).ln()
}

/// Maassen-Uffink: `-2 ln c`.
pub fn mu_bound(ov: Overlap) -> f64 {
    -2.0 * ov.c().ln()
}

/// `F(c) = -(1 + c) ln((1 + c)/2) - (1 - c) ln((1 - c)/2)`.
pub fn f_bound(ov: Overlap) -> f64 {
    let c = ov.c();
    -2.0 * (xlogx((1.0 + c) / 2.0) + xlogx((1.0 - c) / 2.0))
}

/// `G(c) = -c^2 n ln c^2 - (1 - c^2 n) ln(1 - c^2 n)` with `n = floor(1/c^2)`.
pub fn g_bound(ov: Overlap) -> f64 {
    let c2 = ov.c_squared();
    let n = multiplicity_for(c2).expect("c^2 lies in (0, 1]");
    shape_entropy(c2, n)
}

/// Which family a stationary point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateBranch {
    /// `P_A = P_B = (1 + c)/2`, giving `F(c)`.
    EqualP,
    /// A root of the transcendental equation with `M_B = m`.
    Transcendental { m: usize },
    /// `P_A = 1`, `P_B = c^2`, giving `G(c)`.
    Boundary,
}

/// A stationary point of the reduced functional on the saturation curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktCandidate {
    pub p_a: f64,
    pub p_b: f64,
    pub m_a: usize,
    pub m_b: usize,
    /// `P_A = cos^2(alpha)`.
    pub alpha: f64,
    /// Multiplier of the saturated constraint, from the `A` side.
    pub lambda: f64,
    pub entropy_sum: f64,
    pub branch: CandidateBranch,
}

/// `2 M sqrt(P (1 - P)) ln(P / (1 - M P))`, the constraint multiplier implied
/// by the stationarity condition of one side.
pub fn multiplier(p: f64, m: usize) -> f64 {
    let mf = m as f64;
    2.0 * mf * (p * (1.0 - p)).max(0.0).sqrt() * (p / (1.0 - mf * p)).ln()
}

/// The `F(c)` stationary point.
pub fn equal_p_candidate(ov: Overlap) -> KktCandidate {
    let p = (1.0 + ov.c()) / 2.0;
    KktCandidate {
        p_a: p,
        p_b: p,
        m_a: 1,
        m_b: 1,
        alpha: ov.theta() / 2.0,
        lambda: if p < 1.0 { multiplier(p, 1) } else { 0.0 },
        entropy_sum: f_bound(ov),
        branch: CandidateBranch::EqualP,
    }
}

/// The `G(c)` stationary point.
pub fn boundary_candidate(ov: Overlap) -> KktCandidate {
    let p_b = ov.c_squared();
    KktCandidate {
        p_a: 1.0,
        p_b,
        m_a: 1,
        m_b: multiplicity_for(p_b).expect("c^2 lies in (0, 1]"),
        alpha: 0.0,
        lambda: 0.0,
        entropy_sum: g_bound(ov),
        branch: CandidateBranch::Boundary,
    }
}

/// Left-hand side of the stationarity equation for `M_A = 1`, `M_B = m` on the
/// saturation curve:
///
/// ```text
/// sin 2a ln(cot^2 a) - m sin 2b ln(cos^2 b / (1 - m cos^2 b)),   b = theta - a
/// ```
///
/// The `1 - m cos^2 b` factor is evaluated as `sin^2 b - (m - 1) cos^2 b` to
/// keep it accurate near `b = 0`.
pub fn transcendental_residual(alpha: f64, theta: f64, m: usize) -> f64 {
    let (sa, ca) = alpha.sin_cos();
    let beta = theta - alpha;
    let (sb, cb) = beta.sin_cos();
    let mf = m as f64;
    let a_term = 2.0 * sa * ca * 2.0 * (ca / sa).ln();
    let denom = sb * sb - (mf - 1.0) * cb * cb;
    let b_term = mf * 2.0 * sb * cb * (cb * cb / denom).ln();
    a_term - b_term
}

/// The open `alpha` interval on which `P_A = cos^2 a` lies in `[1/2, 1)` and
/// `P_B = cos^2(theta - a)` lies in `(1/(m+1), 1/m)`, shrunk by
/// [`BAND_MARGIN`]. `None` if empty.
fn admissible_band(theta: f64, m: usize) -> Option<(f64, f64)> {
    let mf = m as f64;
    let beta_min = (1.0 / mf).sqrt().acos();
    let beta_max = (1.0 / (mf + 1.0)).sqrt().acos();
    let lo = (theta - beta_max).max(0.0) + BAND_MARGIN;
    let hi = FRAC_PI_4.min(theta - beta_min) - BAND_MARGIN;
    (hi > lo).then_some((lo, hi))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo < ROOT_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots of [`transcendental_residual`] in the admissible band, found by a
/// uniform sign scan followed by bisection.
fn scan_roots(theta: f64, m: usize) -> Vec<f64> {
    let Some((lo, hi)) = admissible_band(theta, m) else {
        return Vec::new();
    };
    let f = |a: f64| transcendental_residual(a, theta, m);
    let step = (hi - lo) / (SCAN_SAMPLES - 1) as f64;
    let at = |i: usize| if i + 1 == SCAN_SAMPLES { hi } else { lo + i as f64 * step };

    let mut roots = Vec::new();
    let mut prev = (at(0), f(at(0)));
    if prev.1 == 0.0 {
        roots.push(prev.0);
    }
    for i in 1..SCAN_SAMPLES {
        let x = at(i);
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if prev.1.is_finite() && fx.is_finite() && prev.1 != 0.0 && (prev.1 < 0.0) != (fx < 0.0) {
            roots.push(bisect(f, prev.0, x, prev.1));
        }
        prev = (x, fx);
    }
    roots
}

/// Asymmetric stationary points with `M_A = 1` and `M_B = m`.
///
/// Fails when `c > 1/sqrt(m)`, where no such point can saturate the
/// constraint. An empty list means the equation has no root in the band.
pub fn h_m_candidates(ov: Overlap, m: usize) -> Result<Vec<KktCandidate>> {
    if m == 0 {
        return Err(EurError::Domain("multiplicity M must be positive".into()));
    }
    if ov.c_squared() * m as f64 > 1.0 + 1e-12 {
        return Err(EurError::ValidityRange { c: ov.c(), m });
    }
    let theta = ov.theta();
    let mut out = Vec::new();
    for alpha in scan_roots(theta, m) {
        let p_a = alpha.cos().powi(2);
        let p_b = (theta - alpha).cos().powi(2);
        if (p_a - p_b).abs() < SYMMETRIC_EXCLUSION {
            continue;
        }
        // numerically on a band edge; belongs to another family
        if multiplicity_for(p_a)? != 1 || multiplicity_for(p_b)? != m {
            continue;
        }
        out.push(KktCandidate {
            p_a,
            p_b,
            m_a: 1,
            m_b: m,
            alpha,
            lambda: multiplier(p_a, 1),
            entropy_sum: entropy_sum_functional(p_a, p_b)?,
            branch: CandidateBranch::Transcendental { m },
        });
    }
    Ok(out)
}

/// `H_M(c)`: the smallest entropy sum among [`h_m_candidates`], if any.
pub fn h_m_value(ov: Overlap, m: usize) -> Result<Option<f64>> {
    Ok(h_m_candidates(ov, m)?
        .iter()
        .map(|k| k.entropy_sum)
        .min_by(f64::total_cmp))
}

/// True where an asymmetric `H_1` point exists strictly below `F`.
fn h1_below_f(ov: Overlap) -> Result<bool> {
    Ok(match h_m_value(ov, 1)? {
        Some(h1) => h1 < f_bound(ov),
        None => false,
    })
}

/// The overlap `c*` in `(1/sqrt(2), 1)` where `F` takes over from `H_1` as the
/// minimum, by bisection on the sign of `F - H_1` (an absent `H_1` counts as
/// `F` being minimal).
pub fn crossover_cstar(tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(EurError::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let at = |c: f64| Overlap::new(c).and_then(h1_below_f);
    let mut lo = FRAC_1_SQRT_2 + 1e-6;
    let mut hi = 1.0 - 1e-9;
    if !at(lo)? || at(hi)? {
        return Err(EurError::SolverFailure(
            "F - H_1 does not change sign on (1/sqrt(2), 1)".into(),
        ));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

static CSTAR: OnceLock<Result<f64>> = OnceLock::new();

/// [`crossover_cstar`] at [`CSTAR_CACHE_TOLERANCE`], computed once per process.
pub fn cached_cstar() -> Result<f64> {
    CSTAR
        .get_or_init(|| crossover_cstar(CSTAR_CACHE_TOLERANCE))
        .clone()
}

/// The piece of the final bound that is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Mu,
    H1,
    F,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Mu => "MU",
            Branch::H1 => "H1",
            Branch::F => "F",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Every candidate bound at one overlap, plus the selected final value.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundBreakdown {
    pub c: f64,
    pub deutsch: f64,
    pub maassen_uffink: f64,
    pub f_val: f64,
    pub g_val: f64,
    /// `(M, H_M(c))` for `M = 1 ..= min(floor(1/c^2), MAX_DIAGNOSTIC_M)`.
    pub h_m: Vec<(usize, Option<f64>)>,
    pub final_bound: f64,
    pub active_branch: Branch,
}

impl BoundBreakdown {
    pub fn h1(&self) -> Option<f64> {
        self.h_m.iter().find(|(m, _)| *m == 1).and_then(|(_, v)| *v)
    }

    /// Smallest of `F`, `G` and the tabulated `H_M`.
    pub fn min_candidate(&self) -> f64 {
        self.h_m
            .iter()
            .filter_map(|(_, v)| *v)
            .fold(self.f_val.min(self.g_val), f64::min)
    }
}

/// The improved lower bound on `H(A) + H(B)` at overlap `ov`.
pub fn new_bound(ov: Overlap) -> Result<BoundBreakdown> {
    let c = ov.c();
    let m_max = multiplicity_for(ov.c_squared())?.min(MAX_DIAGNOSTIC_M);
    let h_m = (1..=m_max)
        .map(|m| Ok((m, h_m_value(ov, m)?)))
        .collect::<Result<Vec<_>>>()?;
    let h1 = h_m.first().and_then(|(_, v)| *v);

    let mu = mu_bound(ov);
    let f_val = f_bound(ov);
    let (final_bound, active_branch) = if c <= FRAC_1_SQRT_2 {
        (mu, Branch::Mu)
    } else {
        let cstar = cached_cstar()?;
        match h1 {
            _ if c >= cstar => (f_val, Branch::F),
            Some(v) => (v, Branch::H1),
            None if c >= cstar - CSTAR_MERGE_WINDOW => (f_val, Branch::F),
            None => {
                return Err(EurError::SolverFailure(format!(
                    "no H_1 root found at c = {c} inside (1/sqrt(2), c*)"
                )))
            }
        }
    };

    Ok(BoundBreakdown {
        c,
        deutsch: deutsch_bound(ov),
        maassen_uffink: mu,
        f_val,
        g_val: g_bound(ov),
        h_m,
        final_bound,
        active_branch,
    })
}
