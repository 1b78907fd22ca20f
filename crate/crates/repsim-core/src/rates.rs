//! Closed-form entanglement-distribution rates and the direct-transmission
//! baseline.
//!
//! One elementary link succeeds with `P0 = p^2 eta_d^2 eta_t^2 / 2` per
//! attempt, attempts repeat every `t_p + L0/c`, and every nesting level
//! multiplies the expected time by `3 / (2 P_swap)`.

use crate::params::LinkParams;
use crate::scalar::{real, Real};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RateError {
    #[error("degenerate parameters: {0} vanishes, expected time is infinite")]
    Degenerate(&'static str),
}

/// `eta_t = exp(-L0 / (2 L_att))`, the transmission efficiency of one
/// photon over half the link.
pub fn transmission_efficiency<F: Real>(l0: F, l_att: F) -> F {
    (-(l0 / (real::<F>(2.0) * l_att))).exp()
}

/// `P0 = p^2 eta_d^2 eta_t^2 / 2`, the twofold-coincidence probability per
/// attempt.
pub fn link_success_probability<F: Real>(p: F, eta_d: F, eta_t: F) -> F {
    real::<F>(0.5) * p * p * eta_d * eta_d * eta_t * eta_t
}

/// `P_swap = eta_ion^2`: a swap succeeds when both ionization read-outs do.
pub fn swap_success_probability<F: Real>(eta_ion: F) -> F {
    eta_ion * eta_ion
}

/// Expected time to entangle one elementary link, `(t_p + t_com) / P0`.
pub fn link_time_from<F: Real>(t_p: F, t_com: F, p0: F) -> F {
    (t_p + t_com) / p0
}

/// `(3 / (2 P_swap))^n`, the nested-swap multiplier on the link time.
pub fn nesting_factor<F: Real>(p_swap: F, n_levels: u32) -> F {
    (real::<F>(1.5) / p_swap).powi(n_levels as i32)
}

/// Rate quantities for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult<F> {
    pub eta_t: F,
    pub p0: F,
    pub p_swap: F,
    pub t_link: F,
    pub t_total: F,
    pub n_levels: u32,
}

/// Expected single-link entanglement time for validated link parameters.
pub fn link_time(link: &LinkParams) -> Result<f64, RateError> {
    let eta_t = transmission_efficiency(link.l0, link.l_att);
    let p0 = link_success_probability(link.p, link.eta_d, eta_t);
    if p0 == 0.0 {
        return Err(RateError::Degenerate("P0"));
    }
    Ok(link_time_from(link.t_p, link.t_com(), p0))
}

/// Expected total distribution time over `2^n` links.
///
/// For `n_levels = 0` this reduces bit-exactly to [`link_time`].
pub fn total_time(link: &LinkParams) -> Result<RateResult<f64>, RateError> {
    let eta_t = transmission_efficiency(link.l0, link.l_att);
    let p0 = link_success_probability(link.p, link.eta_d, eta_t);
    if p0 == 0.0 {
        return Err(RateError::Degenerate("P0"));
    }
    let p_swap = swap_success_probability(link.eta_ion);
    if p_swap == 0.0 && link.n_levels >= 1 {
        return Err(RateError::Degenerate("P_swap"));
    }
    let t_link = link_time_from(link.t_p, link.t_com(), p0);
    let t_total = nesting_factor(p_swap, link.n_levels) * t_link;
    Ok(RateResult {
        eta_t,
        p0,
        p_swap,
        t_link,
        t_total,
        n_levels: link.n_levels,
    })
}

/// Direct transmission time with a saturation guard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectTime<F> {
    pub seconds: F,
    /// True when the unguarded value exceeds the 1e30 s cap.
    pub saturated: bool,
}

/// Time for one photon to survive direct fiber transmission over `distance`
/// meters: `10^(loss_db_per_km * L_km / 10) / source_rate`.
pub fn direct_transmission_time<F: Real>(
    distance: F,
    source_rate: F,
    loss_db_per_km: F,
) -> DirectTime<F> {
    let cap = real::<F>(1e30);
    let distance_km = distance / real::<F>(1e3);
    let exponent = loss_db_per_km * distance_km / real::<F>(10.0);
    let seconds = real::<F>(10.0).powf(exponent) / source_rate;
    if seconds > cap || !seconds.is_finite() {
        DirectTime { seconds: cap, saturated: true }
    } else {
        DirectTime { seconds, saturated: false }
    }
}

/// Fig.-4-style reference source: 10 GHz single-photon generation.
pub const DIRECT_SOURCE_RATE_HZ: f64 = 1e10;
/// Telecom fiber loss used throughout, 0.2 dB/km.
pub const FIBER_LOSS_DB_PER_KM: f64 = 0.2;

/// Nesting-level selection for a distance sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NestingPolicy {
    Fixed(u32),
    /// Choose the `n` in `[0, max_n]` minimizing the total time.
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    /// End-to-end distance (m).
    pub distance: f64,
    pub result: RateResult<f64>,
}

/// Evaluates the repeater over each distance, splitting it into `2^n`
/// links per the policy. Distances are expected positive and sorted.
pub fn curve_sweep(
    distances: &[f64],
    template: &LinkParams,
    policy: NestingPolicy,
    max_n: u32,
) -> Result<Vec<SweepPoint>, RateError> {
    let mut out = Vec::with_capacity(distances.len());
    for &distance in distances {
        let candidates: Vec<u32> = match policy {
            NestingPolicy::Fixed(n) => vec![n],
            NestingPolicy::Best => (0..=max_n).collect(),
        };
        let mut best: Option<RateResult<f64>> = None;
        for n in candidates {
            let link = LinkParams {
                l0: crate::params::derive_link_geometry(distance, n),
                n_levels: n,
                ..template.clone()
            };
            let result = total_time(&link)?;
            if best.is_none_or(|b| result.t_total < b.t_total) {
                best = Some(result);
            }
        }
        out.push(SweepPoint {
            distance,
            result: best.expect("at least one candidate nesting level"),
        });
    }
    Ok(out)
}

/// Formats a float at full precision (shortest lossless decimal form).
pub fn fmt_float(x: f64) -> String {
    format!("{x}")
}

/// The sweep CSV: `distance_km,n_levels,L0_km,eta_t,P0,T_link_s,T_total_s`.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut s = String::from("distance_km,n_levels,L0_km,eta_t,P0,T_link_s,T_total_s\n");
    for p in points {
        let r = &p.result;
        let l0 = crate::params::derive_link_geometry(p.distance, r.n_levels);
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_float(p.distance / 1e3),
            r.n_levels,
            fmt_float(l0 / 1e3),
            fmt_float(r.eta_t),
            fmt_float(r.p0),
            fmt_float(r.t_link),
            fmt_float(r.t_total),
        ));
    }
    s
}
