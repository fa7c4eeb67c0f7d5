//! The rewinding loop: measure G, and on failure rewind and try again.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use super::circuit::CircuitQ;
use super::state::{StateError, StateVector};

/// Shots used for the sampled estimate of `p` in a report.
pub const ESTIMATE_SHOTS: usize = 256;

/// Trajectories whose remaining probability falls below this stop contributing.
const REACH_CUTOFF: f64 = 1e-20;

#[derive(Debug, Error, PartialEq)]
pub enum BoundError {
    #[error("epsilon {0} outside (0, 1/2)")]
    Epsilon(f64),
    #[error("p0 {0} outside (0, 1)")]
    P0(f64),
    #[error("logarithm base {0} must be positive and not 1")]
    Base(f64),
}

/// `16 eps log^2(1/eps) / (p0^2 (1 - p0)^2)` with the logarithm in base 2.
pub fn lemma_bound(epsilon: f64, p0: f64) -> Result<f64, BoundError> {
    lemma_bound_with_base(epsilon, p0, 2.0)
}

pub fn lemma_bound_with_base(epsilon: f64, p0: f64, base: f64) -> Result<f64, BoundError> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(BoundError::Epsilon(epsilon));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(BoundError::P0(p0));
    }
    if !(base > 0.0 && base != 1.0) {
        return Err(BoundError::Base(base));
    }
    let log = (1.0 / epsilon).ln() / base.ln();
    let d = p0 * (1.0 - p0);
    Ok(16.0 * epsilon * log * log / (d * d))
}

/// The bound extended to the closed range: 0 at `eps = 0`, infinite from 1/2 on.
pub fn epsilon_prime(epsilon: f64, p0: f64, base: f64) -> Result<f64, BoundError> {
    if epsilon == 0.0 {
        return Ok(0.0);
    }
    if epsilon >= 0.5 {
        return Ok(f64::INFINITY);
    }
    lemma_bound_with_base(epsilon, p0, base)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RcoinConfig {
    pub max_iters: usize,
    pub p0: f64,
    pub log_base: f64,
}

impl Default for RcoinConfig {
    fn default() -> Self {
        Self { max_iters: 16, p0: 0.45, log_base: 2.0 }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RcoinError {
    #[error("at least one iteration is required")]
    NoIterations,
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewindReport {
    /// Probability that the first measurement of G gives 0.
    pub p_true: f64,
    /// Frequency of G = 0 over [`ESTIMATE_SHOTS`] simulated measurements of `Q |psi, 0>`.
    pub p_estimate: f64,
    /// Measurements of G in the sampled run.
    pub measurements: usize,
    pub rewinds: usize,
    pub success: bool,
    /// `|<good|out>|^2` for the sampled run's output.
    pub fidelity: f64,
    /// `<good| rho |good>` for the output mixed over all measurement branches.
    pub expected_fidelity: f64,
    pub epsilon: f64,
    pub p0: f64,
    pub epsilon_prime: f64,
}

/// Runs the rewinding procedure on `Q |psi>_W |0>_X`.
///
/// Returns the report and the output state: the post-selected `G = 0` state
/// on success, or the last `G = 1` state when the iterations run out.
pub fn run_rcoin<R: Rng + ?Sized>(
    q: &CircuitQ,
    psi: &[Complex64],
    rng: &mut R,
    config: RcoinConfig,
) -> Result<(RewindReport, StateVector), RcoinError> {
    if config.max_iters == 0 {
        return Err(RcoinError::NoIterations);
    }
    let mut s = q.run(psi)?;
    let p_true = s.prob_g_zero();
    let mut good = s.project_g(0);
    good.normalize();

    let mut reach = 1.0;
    let mut expected_fidelity = 0.0;
    let mut sampled: Option<(usize, StateVector, f64)> = None;
    let mut last_bad = None;
    for t in 1..=config.max_iters {
        let q_t = s.prob_g_zero();
        let mut y = s.project_g(0);
        y.normalize();
        let f_t = if q_t > 0.0 { good.fidelity(&y) } else { 0.0 };
        expected_fidelity += reach * q_t * f_t;
        if sampled.is_none() && rng.gen::<f64>() < q_t {
            sampled = Some((t, y, f_t));
        }
        reach *= 1.0 - q_t;
        let mut bad = s.project_g(1);
        if bad.normalize() < REACH_CUTOFF || (sampled.is_some() && reach < REACH_CUTOFF) || t == config.max_iters {
            last_bad = Some(bad);
            break;
        }
        s = q.rewind_once(&bad);
    }

    let mut p_hits = 0usize;
    for _ in 0..ESTIMATE_SHOTS {
        p_hits += (rng.gen::<f64>() < p_true) as usize;
    }
    let epsilon = (p_true - 0.5).abs();
    let epsilon_prime = epsilon_prime(epsilon, config.p0, config.log_base)?;
    let (measurements, success, fidelity, out) = match sampled {
        Some((t, y, f)) => (t, true, f, y),
        None => {
            let out = last_bad.expect("a failed run ends on a G = 1 state");
            (config.max_iters, false, good.fidelity(&out), out)
        }
    };
    let report = RewindReport {
        p_true,
        p_estimate: p_hits as f64 / ESTIMATE_SHOTS as f64,
        measurements,
        rewinds: measurements - 1,
        success,
        fidelity,
        expected_fidelity,
        epsilon,
        p0: config.p0,
        epsilon_prime,
    };
    Ok((report, out))
}

/// A classical conversation read off the output state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conversation {
    pub commitment: usize,
    pub b: bool,
    pub a: bool,
    pub r: usize,
}

/// Measures (A1, B, A2) in the standard basis; other registers are left alone.
pub fn measure_conversation<R: Rng + ?Sized>(state: &StateVector, rng: &mut R) -> Conversation {
    let layout = state.layout();
    let total = state.norm_sqr();
    let mut u = rng.gen::<f64>() * total;
    let amps = state.amplitudes();
    let mut index = amps.len() - 1;
    for (i, a) in amps.iter().enumerate() {
        u -= a.norm_sqr();
        if u < 0.0 {
            index = i;
            break;
        }
    }
    let opening = layout.a2().get(index);
    Conversation {
        commitment: layout.a1().get(index),
        b: layout.b().get(index) == 1,
        a: opening >> layout.l() == 1,
        r: opening & ((1 << layout.l()) - 1),
    }
}
