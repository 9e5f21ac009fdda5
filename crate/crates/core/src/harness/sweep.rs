use rayon::prelude::*;
use std::path::Path;

use super::config::ScenarioConfig;
use super::episode::{EpisodeResult, Simulator, SlotRecord, Trial};
use super::report::{write_summary, SlotWriter, SummaryRow};
use crate::bandit::PolicyKind;
use crate::error::Result;

/// Everything a sweep produced.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsTrace {
    /// Empty unless records were requested.
    pub records: Vec<SlotRecord>,
    /// Ordered by policy (config order), then SNR point.
    pub summaries: Vec<SummaryRow>,
    /// Per-episode results without their records, ordered by policy, SNR
    /// point, trial.
    pub episodes: Vec<EpisodeResult>,
}

impl MetricsTrace {
    pub fn episodes_of(&self, policy: PolicyKind) -> impl Iterator<Item = &EpisodeResult> {
        self.episodes.iter().filter(move |e| e.policy == policy)
    }

    pub fn summary(&self, policy: PolicyKind, snr_db: f64) -> Option<&SummaryRow> {
        self.summaries
            .iter()
            .find(|r| r.policy == policy && r.snr_db == super::report::quantize(snr_db))
    }

    /// Equal-weight mean throughput of a policy across the SNR sweep.
    pub fn mean_throughput(&self, policy: PolicyKind) -> Option<f64> {
        let rows: Vec<f64> = self
            .summaries
            .iter()
            .filter(|r| r.policy == policy)
            .map(|r| r.throughput_bps)
            .collect();
        if rows.is_empty() {
            None
        } else {
            Some(rows.iter().sum::<f64>() / rows.len() as f64)
        }
    }
}

/// Run every `(policy, snr point, trial)` episode. Episodes execute on the
/// current rayon pool; `sink` sees them one at a time in output order
/// (policy, SNR point, trial), with records attached when `keep_records`.
pub fn run_sweep_with<F>(cfg: &ScenarioConfig, keep_records: bool, mut sink: F) -> Result<MetricsTrace>
where
    F: FnMut(&EpisodeResult) -> Result<()>,
{
    let sim = Simulator::new(cfg)?;
    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| sim.trial(t))
        .collect::<Result<_>>()?;
    let snr_points = cfg.comm.snr_sweep_db.len();
    let mut tasks = Vec::with_capacity(cfg.policies.len() * snr_points * cfg.trials);
    for &p in &cfg.policies {
        for s in 0..snr_points {
            for t in 0..cfg.trials {
                tasks.push((p, s, t));
            }
        }
    }
    let mut trace = MetricsTrace::default();
    let chunk = (rayon::current_num_threads() * 4).max(cfg.trials);
    for group in tasks.chunks(chunk) {
        let done: Vec<Result<EpisodeResult>> = group
            .par_iter()
            .map(|&(p, s, t)| sim.run_episode(&trials[t], p, s, keep_records))
            .collect();
        for ep in done {
            let mut ep = ep?;
            sink(&ep)?;
            ep.records.clear();
            ep.records.shrink_to_fit();
            trace.episodes.push(ep);
        }
    }
    for &p in &cfg.policies {
        for s in 0..snr_points {
            let eps: Vec<&EpisodeResult> = trace
                .episodes
                .iter()
                .filter(|e| e.policy == p && e.snr_index == s)
                .collect();
            trace.summaries.push(SummaryRow::from_episodes(&eps, &cfg.comm)?);
        }
    }
    Ok(trace)
}

/// Run the sweep in memory.
pub fn run_sweep(cfg: &ScenarioConfig, keep_records: bool) -> Result<MetricsTrace> {
    let mut records = Vec::new();
    let mut trace = run_sweep_with(cfg, keep_records, |ep| {
        records.extend_from_slice(&ep.records);
        Ok(())
    })?;
    trace.records = records;
    Ok(trace)
}

/// Run the sweep, streaming `slots.csv` and writing `summary.csv` into `dir`.
pub fn run_to_dir(cfg: &ScenarioConfig, dir: &Path) -> Result<MetricsTrace> {
    cfg.validate()?;
    std::fs::create_dir_all(dir).map_err(|e| crate::Error::io(dir, e))?;
    let mut slots = SlotWriter::create(&dir.join("slots.csv"))?;
    let trace = run_sweep_with(cfg, true, |ep| slots.write(&ep.records))?;
    slots.finish()?;
    write_summary(&dir.join("summary.csv"), &trace.summaries)?;
    Ok(trace)
}
