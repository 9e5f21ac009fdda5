use rand::Rng;

use super::BanditState;
use crate::error::{Error, Result};

/// `S/N + sqrt(2 ln t / N)`.
pub fn ucb_quality(s: f64, n: u64, t: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::arg("n", "beam has not been pulled"));
    }
    if t == 0 {
        return Err(Error::arg("t", "slot index is 1-based"));
    }
    let n = n as f64;
    Ok(s / n + (2.0 * (t as f64).ln() / n).sqrt())
}

/// Active-set position of the highest quality, lowest position on ties.
fn argmax_quality(state: &BanditState) -> usize {
    let mut best = 0;
    let mut best_q = f64::NEG_INFINITY;
    for i in 0..state.len() {
        let q = ucb_quality(state.cumulative_reward[i], state.pulls[i], state.t)
            .expect("every beam pulled during round robin");
        if q > best_q {
            best_q = q;
            best = i;
        }
    }
    best
}

/// Round robin over the active set for the first `K` slots, then UCB.
pub fn ucb_snr_select(state: &BanditState) -> usize {
    let k = state.len() as u64;
    if state.t <= k {
        return state.active_set[(state.t - 1) as usize];
    }
    if let Some(i) = state.pulls.iter().position(|&n| n == 0) {
        return state.active_set[i];
    }
    state.active_set[argmax_quality(state)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsacAction {
    /// Radar search slot, no data.
    Radar,
    Beam(usize),
}

/// Radar search for `t <= t_isac`, round robin over the active set, then UCB.
/// The active set is the radar subset, or the full codebook when the subset
/// came back empty.
pub fn ucb_isac_select(state: &BanditState, t_isac: u64) -> IsacAction {
    if state.t <= t_isac {
        return IsacAction::Radar;
    }
    let rr = state.t - t_isac;
    if rr <= state.len() as u64 {
        return IsacAction::Beam(state.active_set[(rr - 1) as usize]);
    }
    if let Some(i) = state.pulls.iter().position(|&n| n == 0) {
        return IsacAction::Beam(state.active_set[i]);
    }
    IsacAction::Beam(state.active_set[argmax_quality(state)])
}

/// Uniform beam index in `0..k`.
pub fn random_select<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<usize> {
    if k == 0 {
        return Err(Error::arg("k", "need at least one beam"));
    }
    Ok(rng.random_range(0..k))
}

/// Beam with the highest true SNR, lowest index on ties.
pub fn dbf_oracle_select(snr_db: &[f64]) -> Result<usize> {
    if snr_db.is_empty() {
        return Err(Error::arg("snr_db", "need at least one beam"));
    }
    let mut best = 0;
    for (k, &s) in snr_db.iter().enumerate() {
        if s > snr_db[best] {
            best = k;
        }
    }
    Ok(best)
}
