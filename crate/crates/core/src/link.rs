//! Link-level downlink model: SNR to BER, throughput and reward mapping.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

pub const BER_FLOOR: f64 = 1e-12;
pub const BER_CEIL: f64 = 0.5;

/// Communication settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CommConfig {
    pub modulation_order: u32,
    /// Data bits per packet `D`.
    pub data_bits: f64,
    /// Slot period `T` in seconds.
    pub slot_period: f64,
    pub snr_sweep_db: Vec<f64>,
    /// Standard deviation (dB) of the per-slot SNR fluctuation.
    pub jitter_db: f64,
    /// Receive array elements at the user.
    pub ue_elements: usize,
    pub reward_snr_min_db: f64,
    pub reward_snr_max_db: f64,
}

impl Default for CommConfig {
    fn default() -> Self {
        CommConfig {
            modulation_order: 16,
            data_bits: 40_000.0,
            slot_period: 4e-3,
            snr_sweep_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0],
            jitter_db: 1.0,
            ue_elements: 32,
            reward_snr_min_db: -20.0,
            reward_snr_max_db: 20.0,
        }
    }
}

impl CommConfig {
    pub fn validate(&self) -> Result<()> {
        if self.modulation_order != 16 {
            return Err(Error::config("comm.modulation_order", "only 16-QAM is modelled"));
        }
        if !(self.data_bits > 0.0) {
            return Err(Error::config("comm.data_bits", "must be positive"));
        }
        if !(self.slot_period > 0.0) {
            return Err(Error::config("comm.slot_period", "must be positive"));
        }
        if self.snr_sweep_db.is_empty() || self.snr_sweep_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::config("comm.snr_sweep_db", "need at least one finite SNR"));
        }
        if !(self.jitter_db >= 0.0) {
            return Err(Error::config("comm.jitter_db", "must be non-negative"));
        }
        if self.ue_elements == 0 {
            return Err(Error::config("comm.ue_elements", "must be positive"));
        }
        if !(self.reward_snr_max_db > self.reward_snr_min_db) {
            return Err(Error::config("comm.reward_snr_max_db", "must exceed reward_snr_min_db"));
        }
        Ok(())
    }

    /// Ceiling `D / T` in bits per second.
    pub fn peak_rate(&self) -> f64 {
        self.data_bits / self.slot_period
    }

    /// Normalised reward `clamp((snr - min) / (max - min), 0, 1)`.
    pub fn reward(&self, snr_db: f64) -> f64 {
        if snr_db == f64::NEG_INFINITY {
            return 0.0;
        }
        ((snr_db - self.reward_snr_min_db) / (self.reward_snr_max_db - self.reward_snr_min_db)).clamp(0.0, 1.0)
    }
}

/// Gray-coded 16-QAM bit error rate over AWGN,
/// `(3/4) Q(sqrt(gamma/5)) = (3/8) erfc(sqrt(gamma/10))`, clamped to `[1e-12, 0.5]`.
pub fn ber_from_snr(snr_db: f64) -> f64 {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return BER_CEIL;
    }
    let gamma = 10f64.powf(snr_db / 10.0);
    (0.375 * erfc((gamma / 10.0).sqrt())).clamp(BER_FLOOR, BER_CEIL)
}

/// `(1 - mean_ber) D / T`.
pub fn throughput(mean_ber: f64, cfg: &CommConfig) -> f64 {
    (1.0 - mean_ber) * cfg.peak_rate()
}

/// Running mean of a BER trace.
pub fn cumulative_ber(trace: &[f64]) -> Result<Vec<f64>> {
    if trace.is_empty() {
        return Err(Error::arg("trace", "empty BER trace"));
    }
    let mut sum = 0.0;
    Ok(trace
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            sum += b;
            sum / (i + 1) as f64
        })
        .collect())
}
