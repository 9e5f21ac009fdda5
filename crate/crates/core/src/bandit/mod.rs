//! Beam-selection bandits: UCB over the full codebook, radar-assisted UCB over
//! a pruned subset, LUCB best-arm identification, random and genie baselines.

mod lucb;
mod regret;
mod restart;
mod ucb;

pub use lucb::Lucb;
pub use regret::RegretTracker;
pub use restart::{RestartKind, RestartPolicy};
pub use ucb::{dbf_oracle_select, random_select, ucb_isac_select, ucb_quality, ucb_snr_select, IsacAction};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Dbf,
    UcbIsac,
    Lucb,
    UcbSnr,
    Random,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::Dbf,
        PolicyKind::UcbIsac,
        PolicyKind::Lucb,
        PolicyKind::UcbSnr,
        PolicyKind::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Dbf => "dbf",
            PolicyKind::UcbIsac => "ucb_isac",
            PolicyKind::Lucb => "lucb",
            PolicyKind::UcbSnr => "ucb_snr",
            PolicyKind::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown policy `{s}`")))
    }

    /// Stable numeric tag for random-stream derivation.
    pub fn tag(self) -> u64 {
        match self {
            PolicyKind::Dbf => 1,
            PolicyKind::UcbIsac => 2,
            PolicyKind::Lucb => 3,
            PolicyKind::UcbSnr => 4,
            PolicyKind::Random => 5,
        }
    }
}

impl std::fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Pull counts and reward sums over an ordered set of beams.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditState {
    pub pulls: Vec<u64>,
    pub cumulative_reward: Vec<f64>,
    /// Current slot since (re)initialisation, 1-based.
    pub t: u64,
    pub active_set: Vec<usize>,
    /// Rewards that arrived outside `[0, 1]` and were clamped.
    pub clamped: u64,
}

impl BanditState {
    pub fn new(active_set: Vec<usize>) -> Result<Self> {
        if active_set.is_empty() {
            return Err(Error::arg("active_set", "need at least one beam"));
        }
        let mut seen = active_set.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != active_set.len() {
            return Err(Error::arg("active_set", "duplicate beams"));
        }
        let n = active_set.len();
        Ok(BanditState {
            pulls: vec![0; n],
            cumulative_reward: vec![0.0; n],
            t: 1,
            active_set,
            clamped: 0,
        })
    }

    /// State over beams `0..k`.
    pub fn full(k: usize) -> Result<Self> {
        BanditState::new((0..k).collect())
    }

    pub fn len(&self) -> usize {
        self.active_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active_set.is_empty()
    }

    pub fn position(&self, beam: usize) -> Option<usize> {
        self.active_set.iter().position(|&b| b == beam)
    }

    pub fn mean(&self, i: usize) -> f64 {
        if self.pulls[i] == 0 {
            0.0
        } else {
            self.cumulative_reward[i] / self.pulls[i] as f64
        }
    }

    pub fn total_pulls(&self) -> u64 {
        self.pulls.iter().sum()
    }

    /// Record reward `w` for `beam` and advance `t`.
    pub fn update(&mut self, beam: usize, w: f64) -> Result<()> {
        let i = self
            .position(beam)
            .ok_or_else(|| Error::arg("beam", format!("beam {beam} not in active set")))?;
        let w = if w.is_nan() {
            self.clamped += 1;
            0.0
        } else if !(0.0..=1.0).contains(&w) {
            self.clamped += 1;
            w.clamp(0.0, 1.0)
        } else {
            w
        };
        self.pulls[i] += 1;
        self.cumulative_reward[i] += w;
        self.t += 1;
        Ok(())
    }

    /// Advance `t` without a pull (radar slot).
    pub fn skip(&mut self) {
        self.t += 1;
    }

    /// Active-set position with the most pulls, lowest position on ties.
    pub fn most_pulled(&self) -> usize {
        let mut best = 0;
        for i in 1..self.pulls.len() {
            if self.pulls[i] > self.pulls[best] {
                best = i;
            }
        }
        best
    }

    pub fn reset(&mut self) {
        self.pulls.iter_mut().for_each(|n| *n = 0);
        self.cumulative_reward.iter_mut().for_each(|s| *s = 0.0);
        self.t = 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn update_examples() {
        let mut s = BanditState::full(3).unwrap();
        s.update(1, 0.0).unwrap();
        assert_eq!(s.pulls, vec![0, 1, 0]);
        assert_eq!(s.cumulative_reward, vec![0.0; 3]);
        assert_eq!(s.t, 2);
        s.update(2, 0.5).unwrap();
        s.update(2, 0.5).unwrap();
        assert_eq!(s.mean(2), 0.5);
        s.update(0, 1.7).unwrap();
        s.update(0, -0.1).unwrap();
        assert_eq!(s.clamped, 2);
        assert_eq!(s.cumulative_reward[0], 1.0);
        assert!(s.update(5, 0.1).is_err());
        assert_eq!(s.total_pulls(), 5);
    }

    #[test]
    fn construction_errors() {
        assert!(BanditState::new(vec![]).is_err());
        assert!(BanditState::new(vec![1, 1]).is_err());
    }

    #[test]
    fn policy_names_round_trip() {
        for p in PolicyKind::ALL {
            assert_eq!(PolicyKind::parse(p.name()).unwrap(), p);
        }
        assert!(PolicyKind::parse("ucb").is_err());
    }
}
