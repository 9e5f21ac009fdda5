use std::collections::VecDeque;

use super::BanditState;

/// LUCB1 best-arm identification followed by commitment to the identified arm.
///
/// After one pull of every arm, each round pulls the empirical best `h` and
/// the challenger `l` (highest upper bound among the others). Identification
/// stops once `U_l - L_h < epsilon` with confidence radius
/// `beta(u, r) = sqrt(ln(1.25 K r^4 / delta) / (2u))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lucb {
    pub delta: f64,
    pub epsilon: f64,
    committed: Option<usize>,
    pending: VecDeque<usize>,
    round: u64,
}

impl Default for Lucb {
    fn default() -> Self {
        Lucb::new(0.1, 0.1)
    }
}

impl Lucb {
    pub fn new(delta: f64, epsilon: f64) -> Self {
        Lucb {
            delta,
            epsilon,
            committed: None,
            pending: VecDeque::new(),
            round: 0,
        }
    }

    pub fn committed(&self) -> Option<usize> {
        self.committed
    }

    pub fn reset(&mut self) {
        self.committed = None;
        self.pending.clear();
        self.round = 0;
    }

    fn beta(&self, pulls: u64, k: usize) -> f64 {
        let r = self.round as f64;
        ((1.25 * k as f64 * r.powi(4) / self.delta).ln() / (2.0 * pulls as f64)).sqrt()
    }

    /// Next beam to pull.
    pub fn select(&mut self, state: &BanditState) -> usize {
        let k = state.len();
        if k == 1 {
            self.committed = Some(state.active_set[0]);
        }
        if let Some(c) = self.committed {
            return c;
        }
        if let Some(i) = state.pulls.iter().position(|&n| n == 0) {
            return state.active_set[i];
        }
        if let Some(b) = self.pending.pop_front() {
            return b;
        }
        self.round += 1;
        let mut h = 0;
        for i in 1..k {
            if state.mean(i) > state.mean(h) {
                h = i;
            }
        }
        let mut l = None;
        let mut l_ucb = f64::NEG_INFINITY;
        for i in (0..k).filter(|&i| i != h) {
            let u = state.mean(i) + self.beta(state.pulls[i], k);
            if u > l_ucb {
                l_ucb = u;
                l = Some(i);
            }
        }
        let l = l.expect("k >= 2");
        let h_lcb = state.mean(h) - self.beta(state.pulls[h], k);
        if l_ucb - h_lcb < self.epsilon {
            self.committed = Some(state.active_set[h]);
            return state.active_set[h];
        }
        self.pending.push_back(state.active_set[l]);
        state.active_set[h]
    }
}
