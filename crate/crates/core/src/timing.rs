//! Slot-timing and exploration-time accounting.
//!
//! All quantities are plain arithmetic on configured constants. Slots sit on a
//! fixed grid of `slot_data + ucb_compute(K)` seconds (5.5 ms by default);
//! exploration time is reported in data-slot units by default, or in full slot
//! periods when `include_compute` is set.

use serde::{Deserialize, Serialize};

use crate::bandit::PolicyKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimingModel {
    pub slot_data: f64,
    /// `(beam count, UCB compute seconds)`, interpolated piecewise-linearly.
    pub ucb_compute_table: Vec<(usize, f64)>,
    pub mf_time: f64,
    pub music_time: f64,
    pub pri: f64,
    pub packets_per_cpi: usize,
    pub pipeline_interval: f64,
    pub include_compute: bool,
}

impl Default for TimingModel {
    fn default() -> Self {
        TimingModel {
            slot_data: 4e-3,
            ucb_compute_table: vec![(8, 0.55e-3), (16, 0.6e-3), (32, 1.5e-3)],
            mf_time: 2e-3,
            music_time: 1.5e-3,
            pri: 0.58e-6,
            packets_per_cpi: 20,
            pipeline_interval: 2e-3,
            include_compute: false,
        }
    }
}

/// Which part of an episode a slot belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotPhase {
    Radar,
    RoundRobin,
    Exploit,
}

impl TimingModel {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("timing.slot_data", self.slot_data),
            ("timing.mf_time", self.mf_time),
            ("timing.music_time", self.music_time),
            ("timing.pri", self.pri),
            ("timing.pipeline_interval", self.pipeline_interval),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(name, "must be positive"));
            }
        }
        if self.packets_per_cpi == 0 {
            return Err(Error::config("timing.packets_per_cpi", "must be positive"));
        }
        if self.ucb_compute_table.is_empty() {
            return Err(Error::config("timing.ucb_compute_table", "need at least one entry"));
        }
        if self.ucb_compute_table.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::config("timing.ucb_compute_table", "beam counts must increase"));
        }
        if self.ucb_compute_table.iter().any(|&(_, t)| !(t > 0.0)) {
            return Err(Error::config("timing.ucb_compute_table", "durations must be positive"));
        }
        Ok(())
    }

    pub fn cpi(&self) -> f64 {
        self.packets_per_cpi as f64 * self.pri
    }

    /// UCB decision time for `k` beams.
    pub fn ucb_compute(&self, k: usize) -> f64 {
        let t = &self.ucb_compute_table;
        if t.len() == 1 {
            return t[0].1;
        }
        let x = k as f64;
        let seg = if x <= t[0].0 as f64 {
            0
        } else {
            (0..t.len() - 1)
                .find(|&i| x <= t[i + 1].0 as f64)
                .unwrap_or(t.len() - 2)
        };
        let (x0, y0) = (t[seg].0 as f64, t[seg].1);
        let (x1, y1) = (t[seg + 1].0 as f64, t[seg + 1].1);
        let y = y0 + (x - x0) * (y1 - y0) / (x1 - x0);
        y.max(f64::MIN_POSITIVE)
    }

    /// Slot grid period for a `k`-beam codebook.
    pub fn slot_period(&self, k: usize) -> f64 {
        self.slot_data + self.ucb_compute(k)
    }

    /// Radar acquisition over `k` beams, one CPI each.
    pub fn acquisition(&self, k: usize) -> f64 {
        k as f64 * self.cpi()
    }

    /// Pipelined matched filter / MUSIC processing of `k` beams.
    pub fn rsp_time(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.mf_time + (k - 1) as f64 * self.pipeline_interval + self.music_time
    }

    /// Slots consumed by the radar search phase: acquisition and processing
    /// each rounded up to the slot grid.
    pub fn radar_slots(&self, k: usize) -> u64 {
        let p = self.slot_period(k);
        let grid = |t: f64| (t / p - 1e-9).ceil().max(0.0) as u64;
        grid(self.acquisition(k)) + grid(self.rsp_time(k))
    }

    /// Seconds charged per exploration slot.
    pub fn exploration_unit(&self, k: usize) -> f64 {
        if self.include_compute {
            self.slot_period(k)
        } else {
            self.slot_data
        }
    }

    /// `K` round-robin slots.
    pub fn exploration_time_ucb_snr(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::arg("k", "need at least one beam"));
        }
        Ok(k as f64 * self.exploration_unit(k))
    }

    /// Radar search slots plus `k_sub` round-robin slots.
    pub fn exploration_time_ucb_isac(&self, k: usize, k_sub: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::arg("k", "need at least one beam"));
        }
        if k_sub > k {
            return Err(Error::arg("k_sub", format!("subset {k_sub} larger than codebook {k}")));
        }
        Ok(self.radar_slots(k) as f64 * self.exploration_unit(k) + k_sub as f64 * self.exploration_unit(k))
    }

    /// `(data seconds, overhead seconds)` of one slot on the `k`-beam grid.
    pub fn slot_budget(&self, policy: PolicyKind, phase: SlotPhase, k: usize, k_sub: usize) -> (f64, f64) {
        let period = self.slot_period(k);
        match phase {
            SlotPhase::Radar => (0.0, period),
            SlotPhase::RoundRobin => (period, 0.0),
            SlotPhase::Exploit => {
                let compute = match policy {
                    PolicyKind::UcbIsac => self.ucb_compute(k_sub.max(1)),
                    PolicyKind::Dbf | PolicyKind::Random => 0.0,
                    PolicyKind::UcbSnr | PolicyKind::Lucb => self.ucb_compute(k),
                };
                (period - compute, compute)
            }
        }
    }

    /// Share of an `slots`-slot episode spent carrying data, for a policy
    /// that spends `radar` radar slots and `round_robin` round-robin slots.
    pub fn data_fraction(
        &self,
        policy: PolicyKind,
        k: usize,
        k_sub: usize,
        slots: u64,
        radar: u64,
        round_robin: u64,
    ) -> Result<f64> {
        if radar + round_robin > slots || slots == 0 {
            return Err(Error::arg("slots", "episode shorter than its exploration phases"));
        }
        let exploit = slots - radar - round_robin;
        let b = |ph| self.slot_budget(policy, ph, k, k_sub).0;
        let data = radar as f64 * b(SlotPhase::Radar)
            + round_robin as f64 * b(SlotPhase::RoundRobin)
            + exploit as f64 * b(SlotPhase::Exploit);
        Ok(data / (slots as f64 * self.slot_period(k)))
    }
}
