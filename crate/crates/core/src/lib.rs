//! Entropic uncertainty lower bounds derived from the Landau-Pollak inequality.
//!
//! For two observables with overlap `c = max |<a_i|b_j>|` the crate computes
//! the lower bound on `H(A) + H(B)`:
//!
//! | range                 | bound                 |
//! |-----------------------|-----------------------|
//! | `0 < c <= 1/sqrt(2)`  | `-2 ln c` (Maassen-Uffink) |
//! | `1/sqrt(2) <= c <= c*`| `H1(c)`, numeric stationary point |
//! | `c* <= c <= 1`        | `F(c)`, symmetric closed form |
//!
//! with `c* ~ 0.8336`. All entropies are in nats.
//!
//! Modules:
//!
//! - [`entropy`]: Shannon entropy and minimal-entropy distributions at fixed
//!   maximum probability.
//! - [`lp`]: the Landau-Pollak constraint and its saturation curve.
//! - [`bounds`]: closed-form bounds, the transcendental candidates `H_M(c)`,
//!   the crossover `c*` and the final piecewise bound.
//! - [`oracle`]: brute-force grid and random-sampling checks.
//! - [`quantum`]: Haar-random bases and states, Born probabilities and Monte
//!   Carlo validation.
//! - [`cli`]: the `eurbound` command-line front end.

pub mod bounds;
pub mod cli;
pub mod entropy;
mod error;
pub mod lp;
pub mod oracle;
mod parallel;
pub mod quantum;

pub use bounds::{
    crossover_cstar, deutsch_bound, f_bound, g_bound, h_m_candidates, h_m_value, mu_bound,
    new_bound, Branch, BoundBreakdown, CandidateBranch, KktCandidate,
};
pub use entropy::{
    entropy_sum_functional, min_entropy_given_max, multiplicity_for, shannon_entropy,
    MinEntropyProfile, ProbabilityVector,
};
pub use error::{EurError, Result};
pub use lp::{lp_lhs, lp_satisfied, saturating_partner, Overlap};
