use crate::error::{Error, Result};

use super::Detection;

/// Smoothed SNR of the exploited beam; fires once the EWMA falls `drop_db`
/// below its running peak.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrDropTracker {
    pub alpha: f64,
    pub drop_db: f64,
    pub min_samples: usize,
    ewma: Option<f64>,
    peak: f64,
    samples: usize,
}

impl Default for SnrDropTracker {
    fn default() -> Self {
        SnrDropTracker::new(0.2, 3.0, 5)
    }
}

/// Floor used in place of `-inf` (no acknowledgment) readings.
const SNR_FLOOR_DB: f64 = -200.0;

impl SnrDropTracker {
    pub fn new(alpha: f64, drop_db: f64, min_samples: usize) -> Self {
        SnrDropTracker {
            alpha,
            drop_db,
            min_samples,
            ewma: None,
            peak: f64::NEG_INFINITY,
            samples: 0,
        }
    }

    pub fn reset(&mut self) {
        self.ewma = None;
        self.peak = f64::NEG_INFINITY;
        self.samples = 0;
    }

    pub fn update(&mut self, snr_db: f64) {
        let x = snr_db.max(SNR_FLOOR_DB);
        let e = match self.ewma {
            None => x,
            Some(prev) => prev + self.alpha * (x - prev),
        };
        self.ewma = Some(e);
        self.samples += 1;
        if self.samples >= self.min_samples {
            self.peak = self.peak.max(e);
        }
    }

    pub fn smoothed(&self) -> Option<f64> {
        self.ewma
    }

    pub fn dropped(&self) -> bool {
        match self.ewma {
            Some(e) => self.samples > self.min_samples && e < self.peak - self.drop_db,
            None => false,
        }
    }
}

/// `r * dphi / (|v| cos phi)` in seconds.
pub fn geometric_t_infinity(range: f64, velocity: f64, beam_angle: f64, beamwidth: f64) -> Result<f64> {
    if velocity == 0.0 || !velocity.is_finite() {
        return Err(Error::arg("velocity", "static detection has no exit time"));
    }
    Ok(range * beamwidth / (velocity.abs() * beam_angle.cos()))
}

/// Lower of the geometric forecast and the SNR-drop forecast, at least one slot.
pub fn estimate_t_infinity(
    det: &Detection,
    beam_angle: f64,
    beamwidth: f64,
    snr_track: &SnrDropTracker,
    slot_period: f64,
) -> Result<f64> {
    let t_geom = geometric_t_infinity(det.range, det.velocity, beam_angle, beamwidth)?;
    let t_snr = if snr_track.dropped() { 0.0 } else { f64::INFINITY };
    Ok(t_geom.min(t_snr).max(slot_period))
}
