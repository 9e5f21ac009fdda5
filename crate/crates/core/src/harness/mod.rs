//! Experiment driver: scenario configs, Monte Carlo episodes over the SNR
//! sweep, and CSV output.

pub mod config;
mod episode;
pub mod report;
mod sweep;

pub use config::{ScenarioConfig, ScenarioKind, UserSpec};
pub use episode::{run_episode, EpisodeResult, Phase, RestartEvent, Simulator, SlotRecord, Trial};
pub use report::{emit_csv, read_slots, read_summary, write_slots, write_summary, SummaryRow};
pub use sweep::{run_sweep, run_sweep_with, run_to_dir, MetricsTrace};

use std::path::Path;

use crate::error::Result;
use crate::rsp::dump::{write_pseudo_spectra, write_range_profiles, SpectrumDump};
use crate::rsp::{detect_with, music_doppler};

/// Write `range_profiles.csv` and `pseudo_spectra.csv` for every beam of a
/// radar scan of `trial` at `slot`. Spectra are evaluated at each detection.
pub fn dump_profiles(cfg: &ScenarioConfig, trial: usize, slot: u64, dir: &Path) -> Result<()> {
    let sim = Simulator::new(cfg)?;
    let t = sim.trial(trial)?;
    let proc = sim.processor();
    let now = sim.scene_at(&t.scene, slot)?;
    let mut profiles = Vec::with_capacity(sim.codebook().len());
    let mut spectra = Vec::new();
    for k in 0..sim.codebook().len() {
        let mut rng = crate::rng::stream(
            cfg.seed,
            &[crate::rng::purpose::RADAR_NOISE, trial as u64, slot, k as u64],
        );
        let cube = crate::scene::synthesize_beam(&now, &proc.waveform, sim.array(), sim.codebook(), k, &mut rng)?;
        let rp = proc.filter().apply(&cube)?;
        for pk in detect_with(&rp, &proc.detect)? {
            let (_, values) = music_doppler(&rp, pk.range_bin, &proc.music, proc.waveform.pri)?;
            spectra.push(SpectrumDump {
                beam_index: k,
                range_bin: pk.range_bin,
                frequencies: proc.music.grid(),
                values,
            });
        }
        profiles.push(rp);
    }
    std::fs::create_dir_all(dir).map_err(|e| crate::Error::io(dir, e))?;
    write_range_profiles(&dir.join("range_profiles.csv"), &profiles)?;
    write_pseudo_spectra(&dir.join("pseudo_spectra.csv"), &spectra)
}
