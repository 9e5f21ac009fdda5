/// Cumulative regret against the per-slot best mean reward.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegretTracker {
    cumulative: f64,
    trace: Vec<f64>,
}

impl RegretTracker {
    pub fn new() -> Self {
        RegretTracker::default()
    }

    /// Add the gap between the best mean reward and the chosen one.
    pub fn regret_step(&mut self, best_mean: f64, chosen_mean: f64) {
        self.cumulative += (best_mean - chosen_mean).max(0.0);
        self.trace.push(self.cumulative);
    }

    pub fn cumulative(&self) -> f64 {
        self.cumulative
    }

    pub fn trace(&self) -> &[f64] {
        &self.trace
    }
}
