//! Quantum verification harness.
//!
//! States are written in the eigenbasis `{|a_i>}` of `A`. A [`BasisPair`] holds
//! the transition matrix `U[i][j] = <a_i|b_j>`, so probabilities for `B` come
//! from `U^dagger psi`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bounds::new_bound;
use crate::entropy::{shannon_entropy, xlogx, ProbabilityVector};
use crate::error::{EurError, Result};
use crate::lp::{lp_lhs, Overlap};

pub const NORM_TOLERANCE: f64 = 1e-10;
pub const UNITARITY_TOLERANCE: f64 = 1e-10;
/// Allowed shortfall of an entropy sum below the bound.
pub const BOUND_TOLERANCE: f64 = 1e-9;
/// Allowed shortfall in the Landau-Pollak relation.
pub const LP_SLACK_TOLERANCE: f64 = 1e-12;
/// States per deterministic RNG stream in [`verify_bound_mc`].
pub const STATE_SHARD: usize = 1024;

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(Vec<Complex64>);

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if amplitudes.is_empty() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(EurError::Domain(format!(
                "state must be non-empty with unit norm, got squared norm {norm}"
            )));
        }
        Ok(Self(amplitudes))
    }

    /// `|a_k>`, the `k`-th eigenvector of `A`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Which observable's eigenbasis to measure in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Two orthonormal eigenbases related by a unitary transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPair {
    u: DMatrix<Complex64>,
}

impl BasisPair {
    /// Checks that `u` is square and unitary to within
    /// [`UNITARITY_TOLERANCE`] entrywise.
    pub fn new(u: DMatrix<Complex64>) -> Result<Self> {
        if !u.is_square() || u.nrows() == 0 {
            return Err(EurError::Domain("transition matrix must be square".into()));
        }
        let pair = Self { u };
        let r = pair.unitarity_residual();
        if r > UNITARITY_TOLERANCE {
            return Err(EurError::Domain(format!(
                "transition matrix is not unitary (residual {r})"
            )));
        }
        Ok(pair)
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn transition(&self) -> &DMatrix<Complex64> {
        &self.u
    }

    /// Largest entrywise deviation of `U U^dagger` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        let prod = &self.u * self.u.adjoint();
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn identity(dim: usize) -> Self {
        Self { u: DMatrix::identity(dim, dim) }
    }

    /// The discrete Fourier pair, `U[j][k] = exp(2 pi i j k / N) / sqrt(N)`.
    pub fn fourier(dim: usize) -> Self {
        let scale = 1.0 / (dim as f64).sqrt();
        let u = DMatrix::from_fn(dim, dim, |j, k| {
            Complex64::from_polar(scale, TAU * (j * k % dim) as f64 / dim as f64)
        });
        Self { u }
    }
}

/// Born probabilities `|<x_i|psi>|^2` of `state` in the eigenbasis of `side`.
pub fn born_probabilities(state: &PureState, pair: &BasisPair, side: Side) -> Result<ProbabilityVector> {
    if state.dim() != pair.dim() {
        return Err(EurError::DimensionMismatch { expected: pair.dim(), got: state.dim() });
    }
    ProbabilityVector::new(born_raw(state.amplitudes(), pair, side))
}

fn born_raw(psi: &[Complex64], pair: &BasisPair, side: Side) -> Vec<f64> {
    match side {
        Side::A => psi.iter().map(|a| a.norm_sqr()).collect(),
        Side::B => (0..pair.dim())
            .map(|j| {
                pair.u
                    .column(j)
                    .iter()
                    .zip(psi)
                    .map(|(u, a)| u.conj() * a)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .collect(),
    }
}

/// `c = max |U[i][j]|`.
pub fn overlap_of(pair: &BasisPair) -> Overlap {
    let c = pair.u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Overlap::new(c.min(1.0)).expect("a unitary matrix has a nonzero entry")
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

fn haar_unitary(rng: &mut impl Rng, dim: usize) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    // Q diag(r_ii / |r_ii|) is Haar distributed
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q.column_mut(k).iter_mut().for_each(|x| *x *= phase);
    }
    q
}

/// A Haar-random basis pair of dimension `dim`, reproducible from `seed`.
pub fn haar_random_pair(dim: usize, seed: u64) -> Result<BasisPair> {
    if dim < 2 {
        return Err(EurError::Domain(format!("dimension must be at least 2, got {dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BasisPair::new(haar_unitary(&mut rng, dim))
}

/// A seed for sub-task `stream`, derived deterministically from `seed`.
pub fn derived_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

/// A Haar-random pure state.
pub fn haar_random_state(rng: &mut impl Rng, dim: usize) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            return PureState(v.into_iter().map(|a| a / norm).collect());
        }
    }
}

/// The real qubit rotation `[[c, s], [-s, c]]`, `s = sqrt(1 - c^2)`, whose
/// overlap is exactly `c`.
pub fn qubit_pair_with_overlap(c: f64) -> Result<BasisPair> {
    if c.is_nan() || c > 1.0 {
        return Err(EurError::Domain(format!("overlap must not exceed 1, got {c}")));
    }
    if c < FRAC_1_SQRT_2 {
        return Err(EurError::UnreachableOverlap(c));
    }
    let s = (1.0 - c * c).max(0.0).sqrt();
    let r = |x: f64| Complex64::new(x, 0.0);
    BasisPair::new(DMatrix::from_row_slice(2, 2, &[r(c), r(s), r(-s), r(c)]))
}

/// A state that broke one of the checked inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub state: PureState,
    pub entropy_sum: f64,
    pub lp_slack: f64,
}

/// Summary of a Monte Carlo validation run over one basis pair.
#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub c: f64,
    pub bound: f64,
    pub states: usize,
    pub min_entropy_sum: f64,
    /// Smallest `arccos sqrt(P_A) + arccos sqrt(P_B) - arccos c`.
    pub min_lp_slack: f64,
    pub violation: Option<Violation>,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }

    /// Smallest `H(A) + H(B) - bound`.
    pub fn min_bound_slack(&self) -> f64 {
        self.min_entropy_sum - self.bound
    }
}

struct ShardStats {
    min_entropy_sum: f64,
    min_lp_slack: f64,
    violation: Option<Violation>,
}

fn mc_shard(pair: &BasisPair, ov: Overlap, bound: f64, count: usize, seed: u64, shard: u64) -> Result<ShardStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    let mut stats = ShardStats {
        min_entropy_sum: f64::INFINITY,
        min_lp_slack: f64::INFINITY,
        violation: None,
    };
    for _ in 0..count {
        let state = haar_random_state(&mut rng, pair.dim());
        let pa = born_probabilities(&state, pair, Side::A)?;
        let pb = born_probabilities(&state, pair, Side::B)?;
        let h = shannon_entropy(&pa) + shannon_entropy(&pb);
        let slack = lp_lhs(pa.max_prob().min(1.0), pb.max_prob().min(1.0))? - ov.theta();
        stats.min_entropy_sum = stats.min_entropy_sum.min(h);
        stats.min_lp_slack = stats.min_lp_slack.min(slack);
        let bad = h < bound - BOUND_TOLERANCE || slack < -LP_SLACK_TOLERANCE;
        if bad && stats.violation.is_none() {
            stats.violation = Some(Violation { state, entropy_sum: h, lp_slack: slack });
        }
    }
    Ok(stats)
}

/// Draws `states` Haar-random states and checks `H(A) + H(B) >= bound - 1e-9`
/// and the Landau-Pollak relation for each. The outcome depends only on
/// `seed`, not on `workers`.
pub fn verify_bound_mc(pair: &BasisPair, states: usize, seed: u64, workers: usize) -> Result<McReport> {
    if states == 0 {
        return Err(EurError::Domain("need at least one state".into()));
    }
    let ov = overlap_of(pair);
    let bound = new_bound(ov)?.final_bound;
    let shards: Vec<(u64, usize)> = (0..states.div_ceil(STATE_SHARD))
        .map(|k| (k as u64, STATE_SHARD.min(states - k * STATE_SHARD)))
        .collect();
    let results = crate::parallel::map_shards(&shards, workers, |&(k, n)| {
        mc_shard(pair, ov, bound, n, seed, k)
    })?;

    let mut report = McReport {
        c: ov.c(),
        bound,
        states,
        min_entropy_sum: f64::INFINITY,
        min_lp_slack: f64::INFINITY,
        violation: None,
    };
    for s in results {
        report.min_entropy_sum = report.min_entropy_sum.min(s.min_entropy_sum);
        report.min_lp_slack = report.min_lp_slack.min(s.min_lp_slack);
        if report.violation.is_none() {
            report.violation = s.violation;
        }
    }
    Ok(report)
}

fn binary_entropy(p: f64) -> f64 {
    -xlogx(p) - xlogx(1.0 - p)
}

/// `H(A) + H(B)` for `(cos(x/2), e^{i phi} sin(x/2))` and the rotation pair
/// with cosine `c`.
fn qubit_entropy_sum(c: f64, s: f64, x: f64, phi: f64) -> f64 {
    let (sx, cx) = (x / 2.0).sin_cos();
    let p_a = cx * cx;
    let a1 = Complex64::from_polar(sx, phi);
    // first component of U^dagger psi
    let b0 = Complex64::new(c * cx, 0.0) - a1 * s;
    let p_b = b0.norm_sqr().clamp(0.0, 1.0);
    binary_entropy(p_a.clamp(0.0, 1.0)) + binary_entropy(p_b)
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Local tolerance of the coordinate searches.
const LOCAL_TOLERANCE: f64 = 1e-8;

/// Minimum of `H(A) + H(B)` over pure qubit states for the rotation pair with
/// overlap `c`, by coordinate descent with golden-section line searches from
/// `restarts` random starting points.
pub fn qubit_min_entropy_sum(c: f64, restarts: usize, seed: u64) -> Result<f64> {
    qubit_pair_with_overlap(c)?;
    let s = (1.0 - c * c).max(0.0).sqrt();
    let f = |x: f64, phi: f64| qubit_entropy_sum(c, s, x, phi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..restarts.max(1) {
        let mut x = rng.random_range(0.0..PI);
        let mut phi = rng.random_range(0.0..TAU);
        let mut val = f(x, phi);
        let mut window = [PI / 2.0, PI];
        while window[0].max(window[1]) > LOCAL_TOLERANCE {
            let mut improved = false;
            let (lo, hi) = ((x - window[0]).max(0.0), (x + window[0]).min(PI));
            let (nx, fx) = golden_section(|t| f(t, phi), lo, hi, LOCAL_TOLERANCE);
            if fx < val {
                improved |= val - fx > 1e-15;
                x = nx;
                val = fx;
            }
            let (np, fp) = golden_section(|t| f(x, t), phi - window[1], phi + window[1], LOCAL_TOLERANCE);
            if fp < val {
                improved |= val - fp > 1e-15;
                phi = np;
                val = fp;
            }
            if !improved {
                window[0] *= 0.5;
                window[1] *= 0.5;
            }
        }
        // the endpoints of the polar angle are not reached by interior probes
        for edge in [0.0, PI] {
            val = val.min(f(edge, phi));
        }
        best = best.min(val);
    }
    Ok(best)
}
