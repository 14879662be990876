//! Brute-force checks of the constrained minimization.
//!
//! [`grid_min`] walks the Landau-Pollak saturation curve on a uniform grid.
//! [`sampled_min`] draws unreduced distribution pairs from the whole feasible
//! region, so it depends neither on saturation nor on the minimal-entropy
//! reduction. [`incomparability_witness`] exhibits distributions that
//! separate the Maassen-Uffink and Landau-Pollak relations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::bounds::mu_bound;
use crate::entropy::{
    entropy_sum_functional, min_entropy_given_max, shannon_entropy, xlogx, ProbabilityVector,
};
use crate::error::{EurError, Result};
use crate::lp::{lp_lhs, lp_satisfied, saturating_partner, Overlap, LP_TOLERANCE};

/// Samples per deterministic RNG stream in [`sampled_min`].
pub const SAMPLE_SHARD: usize = 4096;
/// Rejection attempts allowed per requested sample.
const MAX_ATTEMPTS_PER_SAMPLE: usize = 1000;
/// Default per-axis resolution of the witness search.
pub const DEFAULT_WITNESS_RESOLUTION: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOracleResult {
    pub c: f64,
    pub min_value: f64,
    pub argmin_p_a: f64,
    pub argmin_p_b: f64,
    pub resolution: usize,
}

/// Minimum of the reduced functional along the saturation curve, sampled at
/// `resolution` uniform values of `P_A` in `[c^2, 1]` plus the symmetric point
/// `(1 + c)/2`.
pub fn grid_min(ov: Overlap, resolution: usize) -> Result<GridOracleResult> {
    if resolution < 10 {
        return Err(EurError::Domain(format!(
            "grid resolution must be at least 10, got {resolution}"
        )));
    }
    let lo = ov.c_squared();
    let span = 1.0 - lo;
    let last = (resolution - 1) as f64;
    let grid = (0..resolution).map(|i| {
        if i + 1 == resolution {
            1.0
        } else {
            lo + span * i as f64 / last
        }
    });

    let mut best = GridOracleResult {
        c: ov.c(),
        min_value: f64::INFINITY,
        argmin_p_a: 1.0,
        argmin_p_b: lo,
        resolution,
    };
    for p_a in grid.chain(std::iter::once((1.0 + ov.c()) / 2.0)) {
        let p_b = saturating_partner(p_a, ov)?;
        let v = entropy_sum_functional(p_a, p_b)?;
        if v < best.min_value {
            best.min_value = v;
            best.argmin_p_a = p_a;
            best.argmin_p_b = p_b;
        }
    }
    Ok(best)
}

/// Flat-Dirichlet draw on the `dim`-simplex.
fn dirichlet(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

fn entropy_raw(p: &[f64]) -> f64 {
    -p.iter().map(|&x| xlogx(x)).sum::<f64>()
}

fn max_of(p: &[f64]) -> f64 {
    p.iter().copied().fold(0.0, f64::max)
}

fn sample_shard(ov: Overlap, dim: usize, count: usize, seed: u64, shard: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    let mut best = f64::INFINITY;
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < count && attempts < count * MAX_ATTEMPTS_PER_SAMPLE {
        attempts += 1;
        let p = dirichlet(&mut rng, dim);
        let q = dirichlet(&mut rng, dim);
        if !lp_satisfied(max_of(&p).min(1.0), max_of(&q).min(1.0), ov)? {
            continue;
        }
        accepted += 1;
        best = best.min(entropy_raw(&p) + entropy_raw(&q));
    }
    Ok(best)
}

/// Smallest `H(p) + H(q)` over `samples` random pairs of length-`dim`
/// distributions whose maxima satisfy the Landau-Pollak relation.
///
/// `None` when no sample was accepted. The result is independent of
/// `workers`: shard `k` always draws from stream `k` of a generator seeded
/// with `seed`.
pub fn sampled_min(
    ov: Overlap,
    dim: usize,
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<Option<f64>> {
    if dim < 2 {
        return Err(EurError::Domain(format!("dimension must be at least 2, got {dim}")));
    }
    let shards: Vec<(u64, usize)> = (0..samples.div_ceil(SAMPLE_SHARD))
        .map(|k| (k as u64, SAMPLE_SHARD.min(samples - k * SAMPLE_SHARD)))
        .collect();
    let mins = crate::parallel::map_shards(&shards, workers, |&(k, n)| {
        sample_shard(ov, dim, n, seed, k)
    })?;
    let best = mins.into_iter().fold(f64::INFINITY, f64::min);
    Ok(best.is_finite().then_some(best))
}

/// A pair of distributions together with the quantities that certify which
/// relation it satisfies.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub p: ProbabilityVector,
    pub q: ProbabilityVector,
    pub lp_lhs: f64,
    pub theta: f64,
    pub entropy_sum: f64,
    pub mu: f64,
}

impl Witness {
    fn new(p: ProbabilityVector, q: ProbabilityVector, ov: Overlap) -> Result<Self> {
        Ok(Self {
            lp_lhs: lp_lhs(p.max_prob().min(1.0), q.max_prob().min(1.0))?,
            theta: ov.theta(),
            entropy_sum: shannon_entropy(&p) + shannon_entropy(&q),
            mu: mu_bound(ov),
            p,
            q,
        })
    }

    pub fn satisfies_lp(&self) -> bool {
        self.lp_lhs >= self.theta - LP_TOLERANCE
    }

    pub fn satisfies_mu(&self) -> bool {
        self.entropy_sum >= self.mu
    }
}

/// Both directions of the incomparability of the two relations.
#[derive(Debug, Clone, PartialEq)]
pub struct IncomparabilityWitness {
    /// Entropy sum at or above `-2 ln c` while the maxima violate the
    /// Landau-Pollak relation.
    pub mu_allowed_lp_forbidden: Witness,
    /// Maxima satisfying the Landau-Pollak relation while the entropy sum is
    /// below `-2 ln c`.
    pub lp_allowed_mu_forbidden: Witness,
}

/// Smallest dimension compatible with overlap `c`, i.e. `ceil(1/c^2)`, and at
/// least 2.
pub fn default_witness_dim(ov: Overlap) -> usize {
    let inv = 1.0 / ov.c_squared();
    let n = if (inv - inv.round()).abs() < 1e-9 { inv.round() } else { inv.ceil() };
    (n as usize).max(2)
}

/// Largest entropy at maximum probability `p` in dimension `dim`: `p` followed
/// by the remainder spread evenly.
fn max_entropy_shape(p: f64, dim: usize) -> Result<ProbabilityVector> {
    let rest = (1.0 - p) / (dim - 1) as f64;
    let mut v = vec![rest; dim];
    v[0] = p;
    ProbabilityVector::new(v)
}

/// Grid search over pairs of maxima `(P_A, P_B)` in `[1/dim, 1]^2`.
///
/// For each pair the most favourable distributions are used: the
/// evenly-spread shape when looking for a large entropy sum, the
/// minimal-entropy shape when looking for a small one. Among the hits the one
/// with the largest margin on both certified quantities is kept. `None`
/// unless both directions are found.
pub fn incomparability_witness(
    ov: Overlap,
    dim: usize,
    resolution: usize,
) -> Result<Option<IncomparabilityWitness>> {
    if dim < 2 || resolution < 2 {
        return Err(EurError::Domain(format!(
            "witness search needs dim >= 2 and resolution >= 2, got {dim} and {resolution}"
        )));
    }
    let lo = 1.0 / dim as f64;
    let grid: Vec<f64> = (0..resolution)
        .map(|i| lo + (1.0 - lo) * i as f64 / (resolution - 1) as f64)
        .collect();
    let angle: Vec<f64> = grid.iter().map(|p| p.sqrt().acos()).collect();
    let h_max: Vec<f64> = grid
        .iter()
        .map(|&p| {
            let rest = (1.0 - p) / (dim - 1) as f64;
            -xlogx(p) - (dim - 1) as f64 * xlogx(rest)
        })
        .collect();
    let h_min = grid
        .iter()
        .map(|&p| min_entropy_given_max(p, dim).map(|m| m.entropy))
        .collect::<Result<Vec<_>>>()?;

    let theta = ov.theta();
    let mu = mu_bound(ov);
    let mut forbid_lp: Option<(f64, usize, usize)> = None;
    let mut forbid_mu: Option<(f64, usize, usize)> = None;
    for i in 0..resolution {
        for j in 0..resolution {
            let lhs = angle[i] + angle[j];
            // a certified margin strictly beyond every tolerance in play
            let lp_violation = theta - LP_TOLERANCE - lhs;
            let hi_sum = h_max[i] + h_max[j];
            if lp_violation > 0.0 && hi_sum >= mu {
                let margin = lp_violation.min(hi_sum - mu);
                if forbid_lp.is_none_or(|(m, _, _)| margin > m) {
                    forbid_lp = Some((margin, i, j));
                }
            }
            let lo_sum = h_min[i] + h_min[j];
            if lhs >= theta && lo_sum < mu {
                let margin = (lhs - theta).min(mu - lo_sum);
                if forbid_mu.is_none_or(|(m, _, _)| margin > m) {
                    forbid_mu = Some((margin, i, j));
                }
            }
        }
    }

    let (Some((_, ai, aj)), Some((_, bi, bj))) = (forbid_lp, forbid_mu) else {
        return Ok(None);
    };
    let first = Witness::new(
        max_entropy_shape(grid[ai], dim)?,
        max_entropy_shape(grid[aj], dim)?,
        ov,
    )?;
    let second = Witness::new(
        min_entropy_given_max(grid[bi], dim)?.distribution(),
        min_entropy_given_max(grid[bj], dim)?.distribution(),
        ov,
    )?;
    // recheck on the explicit vectors
    if first.satisfies_lp() || !first.satisfies_mu() || !second.satisfies_lp() || second.satisfies_mu() {
        return Err(EurError::SolverFailure(
            "witness failed recertification on explicit distributions".into(),
        ));
    }
    Ok(Some(IncomparabilityWitness {
        mu_allowed_lp_forbidden: first,
        lp_allowed_mu_forbidden: second,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{f_bound, g_bound, h_m_value};

    fn ov(c: f64) -> Overlap {
        Overlap::new(c).unwrap()
    }

    #[test]
    fn grid_examples() {
        let g = grid_min(ov(0.9), 10_000).unwrap();
        assert!((g.min_value - f_bound(ov(0.9))).abs() < 1e-4);
        assert!(lp_satisfied(g.argmin_p_a, g.argmin_p_b, ov(0.9)).unwrap());
        let v = entropy_sum_functional(g.argmin_p_a, g.argmin_p_b).unwrap();
        assert!((g.min_value - v).abs() < 1e-12);

        let g = grid_min(ov(0.75), 10_000).unwrap();
        let h1 = h_m_value(ov(0.75), 1).unwrap().unwrap();
        assert!((g.min_value - h1).abs() < 1e-4);
        assert!(g.min_value >= h1 - 1e-12);

        let g = grid_min(ov(1.0), 10).unwrap();
        assert_eq!(g.min_value, 0.0);
        assert_eq!((g.argmin_p_a, g.argmin_p_b), (1.0, 1.0));

        assert!(grid_min(ov(0.9), 9).is_err());
    }

    #[test]
    fn grid_never_exceeds_candidates() {
        for &c in &[0.4, 0.55, 0.65, 0.72, 0.8, 0.95] {
            let o = ov(c);
            let g = grid_min(o, 4000).unwrap().min_value;
            assert!(g <= f_bound(o) + 1e-6);
            assert!(g <= g_bound(o) + 1e-6);
        }
    }

    #[test]
    fn sampled_examples() {
        assert_eq!(sampled_min(ov(0.7), 3, 0, 1, 1).unwrap(), None);
        assert!(sampled_min(ov(0.7), 1, 10, 1, 1).is_err());
        let s = sampled_min(ov(0.8), 4, 20_000, 3, 1).unwrap().unwrap();
        let g = grid_min(ov(0.8), 10_000).unwrap().min_value;
        assert!(s >= g - 1e-9);
    }

    #[test]
    fn sampled_is_deterministic_and_worker_independent() {
        let a = sampled_min(ov(0.85), 3, 10_000, 42, 1).unwrap();
        let b = sampled_min(ov(0.85), 3, 10_000, 42, 3).unwrap();
        let c = sampled_min(ov(0.85), 3, 10_000, 43, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_approaches_zero_at_c_one() {
        let coarse = sampled_min(ov(1.0), 2, 100, 5, 1).unwrap().unwrap();
        let fine = sampled_min(ov(1.0), 2, 100_000, 5, 2).unwrap().unwrap();
        assert!(fine <= coarse);
        // both draws must be peaked at once, so the minimum shrinks like 1/sqrt(samples)
        assert!(fine < 0.05);
    }

    #[test]
    fn witness_examples() {
        let o = ov(0.5);
        let w = incomparability_witness(o, default_witness_dim(o), 200)
            .unwrap()
            .unwrap();
        assert!(!w.mu_allowed_lp_forbidden.satisfies_lp());
        assert!(w.mu_allowed_lp_forbidden.satisfies_mu());
        assert!(w.lp_allowed_mu_forbidden.satisfies_lp());
        assert!(!w.lp_allowed_mu_forbidden.satisfies_mu());

        assert!(incomparability_witness(ov(1.0), 2, 100).unwrap().is_none());
        assert!(incomparability_witness(o, 1, 100).is_err());
    }

    #[test]
    fn default_dims() {
        assert_eq!(default_witness_dim(ov(0.5)), 4);
        assert_eq!(default_witness_dim(ov(0.9)), 2);
        assert_eq!(default_witness_dim(ov(0.45)), 5);
    }
}
