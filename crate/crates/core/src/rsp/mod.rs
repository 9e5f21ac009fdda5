//! Radar signal processing: matched filtering, PSLR detection, MUSIC Doppler
//! estimation, beam pruning and beam-exit forecasting.

mod detect;
pub mod dump;
mod filter;
pub mod jacobi;
mod music;
mod select;
mod tinf;

pub use detect::{
    detect, detect_with, peak_to_max_sidelobe_db, peak_to_median_sidelobe_db, DetectConfig, Peak,
    SidelobeBlanking,
};
pub use filter::{matched_filter, MatchedFilter, RangeProfileSet};
pub use music::{doppler_steering, music_doppler, noise_projector, MusicConfig};
pub use select::{select_beams, BeamSubset, SelectConfig};
pub use tinf::{estimate_t_infinity, geometric_t_infinity, SnrDropTracker};

use crate::array::{ArrayConfig, SPEED_OF_LIGHT};
use crate::error::Result;
use crate::waveform::RadarWaveform;

/// A detection with its Doppler estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub beam_index: usize,
    pub range_bin: usize,
    /// Metres.
    pub range: f64,
    pub amplitude: f64,
    /// dB.
    pub pslr: f64,
    /// Hz.
    pub doppler: f64,
    /// Range rate in m/s, `doppler * lambda / 2`.
    pub velocity: f64,
}

/// Run MUSIC on every detected peak of one beam.
pub fn characterize(
    profiles: &RangeProfileSet,
    peaks: &[Peak],
    music: &MusicConfig,
    waveform: &RadarWaveform,
    array: &ArrayConfig,
) -> Result<Vec<Detection>> {
    let lambda = array.wavelength();
    peaks
        .iter()
        .map(|pk| {
            let (fd, _) = music_doppler(profiles, pk.range_bin, music, waveform.pri)?;
            Ok(Detection {
                beam_index: profiles.beam_index,
                range_bin: pk.range_bin,
                range: pk.range_bin as f64 * waveform.sample_period * SPEED_OF_LIGHT / 2.0,
                amplitude: pk.amplitude,
                pslr: pk.pslr_db,
                doppler: fd,
                velocity: fd * lambda / 2.0,
            })
        })
        .collect()
}

/// Everything one radar search phase produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarScan {
    /// Detections per codebook beam, strongest first.
    pub per_beam: Vec<Vec<Detection>>,
    pub subset: BeamSubset,
    /// Contributors outside the unambiguous range, summed over beams.
    pub excluded: usize,
}

/// Matched filter + detection + MUSIC + pruning over the whole codebook.
pub struct RadarProcessor {
    pub waveform: RadarWaveform,
    pub array: ArrayConfig,
    pub detect: DetectConfig,
    pub music: MusicConfig,
    pub select: SelectConfig,
    filter: MatchedFilter,
}

impl RadarProcessor {
    pub fn new(
        waveform: RadarWaveform,
        array: ArrayConfig,
        detect: DetectConfig,
        music: MusicConfig,
        select: SelectConfig,
    ) -> Result<Self> {
        music.validate(waveform.packets, waveform.pri)?;
        let filter = MatchedFilter::new(&waveform);
        Ok(RadarProcessor {
            waveform,
            array,
            detect,
            music,
            select,
            filter,
        })
    }

    /// Default processing chain for a waveform: 13 dB threshold with code
    /// sidelobe blanking (3 dB margin), 400 Hz MUSIC grid up to 4 kHz.
    pub fn standard(waveform: RadarWaveform, array: ArrayConfig) -> Result<Self> {
        let detect = DetectConfig::new(13.0).with_blanking(SidelobeBlanking::for_waveform(&waveform, 3.0));
        let select = SelectConfig::new(13.0, waveform.pri);
        RadarProcessor::new(waveform, array, detect, MusicConfig::default(), select)
    }

    pub fn filter(&self) -> &MatchedFilter {
        &self.filter
    }

    /// Detections on one synthesized beam.
    pub fn process_beam(&self, cube: &crate::scene::RadarDataCube) -> Result<Vec<Detection>> {
        let profiles = self.filter.apply(cube)?;
        let peaks = detect_with(&profiles, &self.detect)?;
        characterize(&profiles, &peaks, &self.music, &self.waveform, &self.array)
    }

    /// Scan every beam. `noise_rng(k)` supplies the noise stream of beam `k`.
    pub fn scan<R, F>(
        &self,
        scene: &crate::scene::Scene,
        codebook: &crate::array::BeamCodebook,
        mut noise_rng: F,
    ) -> Result<RadarScan>
    where
        R: rand::Rng,
        F: FnMut(usize) -> R,
    {
        let mut per_beam = Vec::with_capacity(codebook.len());
        let mut excluded = 0;
        for k in 0..codebook.len() {
            let mut rng = noise_rng(k);
            let cube = crate::scene::synthesize_beam(scene, &self.waveform, &self.array, codebook, k, &mut rng)?;
            excluded += cube.excluded;
            per_beam.push(self.process_beam(&cube)?);
        }
        let subset = select_beams(&per_beam, &self.select);
        Ok(RadarScan {
            per_beam,
            subset,
            excluded,
        })
    }
}
