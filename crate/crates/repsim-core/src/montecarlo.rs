//! Stochastic simulation of the nested repeater protocol.
//!
//! Elementary links attempt entanglement once per round of `t_p + t_com`
//! and succeed with probability `P0`; a level-`i` pair forms when both
//! level-`(i-1)` pairs exist and the swap succeeds with `P_swap`. A failed
//! swap discards both constituent pairs down to elementary links, which is
//! the failure policy under which the `(3 / 2 P_swap)^n` recursion holds.
//! Swaps are instantaneous and inter-level heralding is free, matching the
//! accounting of the closed-form rates.
//!
//! Each trial draws from its own counter-derived RNG stream
//! `(master seed, trial index)`, so runs are bit-reproducible under any
//! degree of parallelism.

use crate::params::LinkParams;
use crate::rates;
use crate::stats::mean_and_stderr;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("link success probability must be in (0, 1], got {0}")]
    InvalidSuccessProbability(f64),
    #[error("swap success probability must be in (0, 1] when nesting, got {0}")]
    InvalidSwapProbability(f64),
    #[error("at least one trial is required")]
    NoTrials,
}

/// Caps on simulation work.
///
/// The total round budget is divided evenly over trials (with a floor of
/// 100k rounds per trial) so that exhaustion is decided per trial,
/// independent of scheduling. Trials that exhaust their budget are dropped
/// from the statistics and counted in `truncated_trials`.
#[derive(Debug, Clone, Copy)]
pub struct SimLimits {
    /// Elementary-round budget for the whole run.
    pub max_total_rounds: u64,
}

impl Default for SimLimits {
    fn default() -> Self {
        SimLimits { max_total_rounds: 1_000_000_000 }
    }
}

impl SimLimits {
    fn per_trial_budget(&self, trials: u64) -> u64 {
        (self.max_total_rounds / trials.max(1)).max(100_000)
    }
}

/// Monte Carlo sample set of delivery times.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    /// Requested number of trials.
    pub trials: u64,
    /// Delivery time of each completed trial (s), in trial order.
    pub samples: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
    /// Elementary entanglement attempts consumed across all trials.
    pub link_attempts: u64,
    /// Swap attempts across all trials.
    pub swap_attempts: u64,
    /// Trials that hit the round budget before delivering.
    pub truncated_trials: u64,
    pub seed: u64,
}

impl SimOutcome {
    /// True when the round cap cut any trial short.
    pub fn is_partial(&self) -> bool {
        self.truncated_trials > 0
    }
}

/// Independent RNG stream for one trial of one run.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Number of Bernoulli(p) attempts up to and including the first success.
fn geometric_attempts(rng: &mut ChaCha8Rng, p: f64) -> u64 {
    if p >= 1.0 {
        return 1;
    }
    let u = 1.0 - rng.gen::<f64>(); // in (0, 1]
    let g = (u.ln() / (1.0 - p).ln()).floor();
    g as u64 + 1
}

struct TrialOut {
    time: Option<f64>,
    links: u64,
    swaps: u64,
}

fn run_trials<T>(seed: u64, trials: u64, trial_fn: T) -> Result<SimOutcome, SimError>
where
    T: Fn(&mut ChaCha8Rng) -> TrialOut + Sync,
{
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let outs: Vec<TrialOut> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            trial_fn(&mut rng)
        })
        .collect();

    let samples: Vec<f64> = outs.iter().filter_map(|o| o.time).collect();
    let truncated_trials = trials - samples.len() as u64;
    let (mean, stderr) = mean_and_stderr(&samples);
    let link_attempts = outs.iter().map(|o| o.links).sum();
    let swap_attempts = outs.iter().map(|o| o.swaps).sum();
    Ok(SimOutcome {
        trials,
        samples,
        mean,
        stderr,
        link_attempts,
        swap_attempts,
        truncated_trials,
        seed,
    })
}

fn check_p0(p0: f64) -> Result<(), SimError> {
    if p0 > 0.0 && p0 <= 1.0 && p0.is_finite() {
        Ok(())
    } else {
        Err(SimError::InvalidSuccessProbability(p0))
    }
}

/// One elementary link: repeated rounds of `t_p + t_com` until the herald
/// reports success.
pub fn simulate_link(
    p0: f64,
    t_p: f64,
    t_com: f64,
    seed: u64,
    trials: u64,
    limits: &SimLimits,
) -> Result<SimOutcome, SimError> {
    check_p0(p0)?;
    let budget = limits.per_trial_budget(trials);
    let dt = t_p + t_com;
    run_trials(seed, trials, |rng| {
        let g = geometric_attempts(rng, p0);
        if g > budget {
            TrialOut { time: None, links: budget, swaps: 0 }
        } else {
            TrialOut { time: Some(g as f64 * dt), links: g, swaps: 0 }
        }
    })
}

/// Two independent links generated in parallel; the pair is ready when the
/// slower one heralds.
pub fn simulate_two_links_waiting(
    p0: f64,
    t_p: f64,
    t_com: f64,
    seed: u64,
    trials: u64,
    limits: &SimLimits,
) -> Result<SimOutcome, SimError> {
    check_p0(p0)?;
    let budget = limits.per_trial_budget(trials);
    let dt = t_p + t_com;
    run_trials(seed, trials, |rng| {
        let g1 = geometric_attempts(rng, p0);
        let g2 = geometric_attempts(rng, p0);
        let used = g1.saturating_add(g2);
        if used > budget {
            TrialOut { time: None, links: budget, swaps: 0 }
        } else {
            TrialOut { time: Some(g1.max(g2) as f64 * dt), links: used, swaps: 0 }
        }
    })
}

struct RepeaterTrial<'a> {
    rng: &'a mut ChaCha8Rng,
    p0: f64,
    p_swap: f64,
    links: u64,
    swaps: u64,
    budget: u64,
}

impl RepeaterTrial<'_> {
    /// Rounds until a level-`level` pair is delivered, or `None` when the
    /// budget runs out. Both halves regenerate from scratch after a failed
    /// swap.
    fn pair_rounds(&mut self, level: u32) -> Option<u64> {
        if level == 0 {
            let g = geometric_attempts(self.rng, self.p0);
            if g > self.budget {
                self.budget = 0;
                return None;
            }
            self.budget -= g;
            self.links += g;
            return Some(g);
        }
        let mut total: u64 = 0;
        loop {
            let left = self.pair_rounds(level - 1)?;
            let right = self.pair_rounds(level - 1)?;
            total = total.saturating_add(left.max(right));
            self.swaps += 1;
            if self.rng.gen::<f64>() < self.p_swap {
                return Some(total);
            }
        }
    }
}

/// Event-driven simulation of the full nested repeater from raw
/// probabilities. `n_levels = 0` reduces to [`simulate_link`].
#[allow(clippy::too_many_arguments)]
pub fn simulate_repeater_raw(
    p0: f64,
    p_swap: f64,
    n_levels: u32,
    t_p: f64,
    t_com: f64,
    seed: u64,
    trials: u64,
    limits: &SimLimits,
) -> Result<SimOutcome, SimError> {
    check_p0(p0)?;
    if n_levels >= 1 && !(p_swap > 0.0 && p_swap <= 1.0) {
        return Err(SimError::InvalidSwapProbability(p_swap));
    }
    let budget = limits.per_trial_budget(trials);
    let dt = t_p + t_com;
    run_trials(seed, trials, |rng| {
        let mut trial = RepeaterTrial { rng, p0, p_swap, links: 0, swaps: 0, budget };
        let time = trial.pair_rounds(n_levels).map(|rounds| rounds as f64 * dt);
        TrialOut { time, links: trial.links, swaps: trial.swaps }
    })
}

/// Nested repeater simulation for validated link parameters.
pub fn simulate_repeater(
    link: &LinkParams,
    seed: u64,
    trials: u64,
    limits: &SimLimits,
) -> Result<SimOutcome, SimError> {
    let eta_t = rates::transmission_efficiency(link.l0, link.l_att);
    let p0 = rates::link_success_probability(link.p, link.eta_d, eta_t);
    let p_swap = rates::swap_success_probability(link.eta_ion);
    simulate_repeater_raw(p0, p_swap, link.n_levels, link.t_p, link.t_com(), seed, trials, limits)
}

/// Scheduling of multiplexed entanglement attempts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplexMode {
    /// Attempts launch every `t_p`, limited to `m` in flight; each herald
    /// returns `t_com` after its preparation finishes.
    Staggered,
    /// All `m` qubit pairs fire together once per `t_p + t_com` interval.
    Batch,
}

/// Temporally multiplexed link generation with `m` stationary-qubit pairs.
#[allow(clippy::too_many_arguments)]
pub fn simulate_multiplexed_link(
    p0: f64,
    t_p: f64,
    t_com: f64,
    m: u32,
    mode: MultiplexMode,
    seed: u64,
    trials: u64,
    limits: &SimLimits,
) -> Result<SimOutcome, SimError> {
    check_p0(p0)?;
    assert!(m >= 1, "multiplexing degree must be >= 1");
    let budget = limits.per_trial_budget(trials);
    match mode {
        MultiplexMode::Staggered => run_trials(seed, trials, |rng| {
            let j = geometric_attempts(rng, p0);
            if j > budget {
                return TrialOut { time: None, links: budget, swaps: 0 };
            }
            // m = 1 serializes into plain rounds of t_p + t_com; computing it
            // the same way as simulate_link keeps the reduction bit-exact
            let time = if m == 1 {
                j as f64 * (t_p + t_com)
            } else {
                launch_time(j - 1, t_p, t_com, m) + t_p + t_com
            };
            TrialOut { time: Some(time), links: j, swaps: 0 }
        }),
        MultiplexMode::Batch => {
            let p_batch = batch_success_probability(p0, m);
            run_trials(seed, trials, |rng| {
                let b = geometric_attempts(rng, p_batch);
                let used = b.saturating_mul(m as u64);
                if used > budget {
                    return TrialOut { time: None, links: budget, swaps: 0 };
                }
                TrialOut { time: Some(b as f64 * (t_p + t_com)), links: used, swaps: 0 }
            })
        }
    }
}

/// Success probability of one batch of `m` simultaneous attempts. `m = 1`
/// passes `p0` through unchanged so the reduction to the single-link model
/// is bit-exact.
fn batch_success_probability(p0: f64, m: u32) -> f64 {
    if m == 1 {
        p0
    } else {
        1.0 - (1.0 - p0).powi(m as i32)
    }
}

/// Launch time of attempt `k` (0-based) in the staggered pipeline.
///
/// The recursion `s_k = max(k t_p, s_{k-m} + t_p + t_com)` unrolls to the
/// larger of the preparation-rate schedule and the qubit-recycling schedule:
/// when `m` qubit pairs cover a full cycle, launches go every `t_p`;
/// otherwise each qubit cycles every `t_p + t_com` and launches interleave.
fn launch_time(k: u64, t_p: f64, t_com: f64, m: u32) -> f64 {
    let m = m as u64;
    let cycle = t_p + t_com;
    if m as f64 * t_p >= cycle {
        k as f64 * t_p
    } else {
        (k % m) as f64 * t_p + (k / m) as f64 * cycle
    }
}

/// `(t_p + t_com) / P0`, the expected single-link time.
pub fn expected_link_time(p0: f64, t_p: f64, t_com: f64) -> f64 {
    (t_p + t_com) / p0
}

/// Exact expectation of the slower of two independent links:
/// `E[max] = (3 - 2 P0) / (P0 (2 - P0))` rounds.
pub fn expected_two_link_time(p0: f64, t_p: f64, t_com: f64) -> f64 {
    (3.0 - 2.0 * p0) / (p0 * (2.0 - p0)) * (t_p + t_com)
}

/// Exact expectation of the multiplexed delivery time, by direct summation
/// of the geometric series over the deterministic launch schedule.
pub fn expected_multiplexed_time(
    p0: f64,
    t_p: f64,
    t_com: f64,
    m: u32,
    mode: MultiplexMode,
) -> f64 {
    match mode {
        MultiplexMode::Batch => (t_p + t_com) / batch_success_probability(p0, m),
        MultiplexMode::Staggered => {
            let cycle = t_p + t_com;
            let q = 1.0 - p0;
            let mut weight = p0; // P(J = k + 1)
            let mut expectation = 0.0;
            let mut k: u64 = 0;
            loop {
                let term = weight * (launch_time(k, t_p, t_com, m) + cycle);
                expectation += term;
                weight *= q;
                k += 1;
                if (term <= expectation * 1e-16 && k as f64 * p0 > 10.0) || k > 200_000_000 {
                    break;
                }
            }
            expectation
        }
    }
}

/// Upper bound on the multiplexing speedup at finite `P0`:
/// `(t_p + t_com) / (t_p + P0 t_com)`.
pub fn pipeline_limit(p0: f64, t_p: f64, t_com: f64) -> f64 {
    (t_p + t_com) / (t_p + p0 * t_com)
}

/// The `P0 -> 0` pipelining ceiling, `(t_p + t_com) / t_p`.
pub fn pipeline_speedup_cap(t_p: f64, t_com: f64) -> f64 {
    (t_p + t_com) / t_p
}
