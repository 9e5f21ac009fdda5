use crate::error::{Error, Result};
use crate::waveform::{aperiodic_autocorrelation, to_complex, RadarWaveform};

use super::filter::RangeProfileSet;

/// A range-profile peak that passed the PSLR test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub range_bin: usize,
    /// Square root of the per-packet mean power at the peak.
    pub amplitude: f64,
    pub pslr_db: f64,
    /// Noncoherent peak power (sum over packets).
    pub power: f64,
}

/// Suppression of a strong return's own code sidelobes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidelobeBlanking {
    /// Half-width in bins of the correlation support (`N - 1`).
    pub window: usize,
    /// Peaks weaker than `stronger * 10^(ratio_db/10)` inside the window are dropped.
    pub ratio_db: f64,
}

impl SidelobeBlanking {
    /// Rule derived from the code's worst autocorrelation sidelobe plus `margin_db`.
    pub fn for_waveform(waveform: &RadarWaveform, margin_db: f64) -> Self {
        let n = waveform.code_len();
        let mut worst = 0.0f64;
        let seqs: &[&[f64]] = if waveform.alternate_pair {
            &[waveform.pair.a(), waveform.pair.b()]
        } else {
            &[waveform.pair.a()]
        };
        for s in seqs {
            let r = aperiodic_autocorrelation(&to_complex(s)).expect("nonempty code");
            for (i, v) in r.iter().enumerate() {
                if i != n - 1 {
                    worst = worst.max(v.norm() / n as f64);
                }
            }
        }
        let ratio_db = if worst > 0.0 {
            20.0 * worst.log10() + margin_db
        } else {
            f64::NEG_INFINITY
        };
        SidelobeBlanking {
            window: n - 1,
            ratio_db,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectConfig {
    pub threshold_db: f64,
    pub guard_bins: usize,
    pub blanking: Option<SidelobeBlanking>,
}

impl DetectConfig {
    pub fn new(threshold_db: f64) -> Self {
        DetectConfig {
            threshold_db,
            guard_bins: 3,
            blanking: None,
        }
    }

    pub fn with_blanking(mut self, blanking: SidelobeBlanking) -> Self {
        self.blanking = Some(blanking);
        self
    }
}

/// PSLR test on the noncoherently integrated profile, strongest first.
pub fn detect(profiles: &RangeProfileSet, threshold_db: f64) -> Result<Vec<Peak>> {
    detect_with(profiles, &DetectConfig::new(threshold_db))
}

pub fn detect_with(profiles: &RangeProfileSet, cfg: &DetectConfig) -> Result<Vec<Peak>> {
    if !(cfg.threshold_db > 0.0) {
        return Err(Error::arg("threshold_db", "must be positive"));
    }
    let power = profiles.power();
    let stats = MedianExcluding::new(&power);
    let n = power.len();
    let mut peaks = Vec::new();
    for i in 0..n {
        let v = power[i];
        let left_ok = i == 0 || v > power[i - 1];
        let right_ok = i + 1 == n || v >= power[i + 1];
        if !(left_ok && right_ok) || v <= 0.0 {
            continue;
        }
        let lo = i.saturating_sub(cfg.guard_bins);
        let hi = (i + cfg.guard_bins).min(n - 1);
        let pslr_db = match stats.median_excluding(lo, hi) {
            Some(m) if m > 0.0 => 10.0 * (v / m).log10(),
            Some(_) => f64::INFINITY,
            None => continue,
        };
        if pslr_db >= cfg.threshold_db {
            peaks.push(Peak {
                range_bin: i,
                amplitude: (v / profiles.packets as f64).sqrt(),
                pslr_db,
                power: v,
            });
        }
    }
    peaks.sort_by(|a, b| b.power.total_cmp(&a.power).then(a.range_bin.cmp(&b.range_bin)));
    if let Some(rule) = cfg.blanking {
        let ratio = 10f64.powf(rule.ratio_db / 10.0);
        let mut kept: Vec<Peak> = Vec::with_capacity(peaks.len());
        for p in peaks {
            let masked = kept
                .iter()
                .any(|k| k.range_bin.abs_diff(p.range_bin) <= rule.window && p.power < k.power * ratio);
            if !masked {
                kept.push(p);
            }
        }
        peaks = kept;
    }
    Ok(peaks)
}

/// Classical peak-to-maximum-sidelobe ratio (dB) of a power profile around its
/// global maximum, excluding `guard` bins on each side.
pub fn peak_to_max_sidelobe_db(power: &[f64], guard: usize) -> Option<f64> {
    let (imax, &peak) = power
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))?;
    let side = power
        .iter()
        .enumerate()
        .filter(|(i, _)| i.abs_diff(imax) > guard)
        .map(|(_, &v)| v)
        .fold(0.0, f64::max);
    if peak <= 0.0 {
        return None;
    }
    Some(if side > 0.0 {
        10.0 * (peak / side).log10()
    } else {
        f64::INFINITY
    })
}

/// Median-based PSLR (dB) of the global maximum, the statistic used by [`detect`].
pub fn peak_to_median_sidelobe_db(power: &[f64], guard: usize) -> Option<f64> {
    let (imax, &peak) = power
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))?;
    if peak <= 0.0 {
        return None;
    }
    let stats = MedianExcluding::new(power);
    let lo = imax.saturating_sub(guard);
    let hi = (imax + guard).min(power.len() - 1);
    let m = stats.median_excluding(lo, hi)?;
    Some(if m > 0.0 {
        10.0 * (peak / m).log10()
    } else {
        f64::INFINITY
    })
}

/// Median of a sequence with one contiguous index range removed, answered in
/// time proportional to the range width after a single sort.
struct MedianExcluding {
    sorted: Vec<f64>,
    rank: Vec<usize>,
}

impl MedianExcluding {
    fn new(values: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let mut rank = vec![0; values.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        MedianExcluding {
            sorted: order.iter().map(|&i| values[i]).collect(),
            rank,
        }
    }

    fn median_excluding(&self, lo: usize, hi: usize) -> Option<f64> {
        let mut skipped: Vec<usize> = (lo..=hi).map(|i| self.rank[i]).collect();
        skipped.sort_unstable();
        let remaining = self.sorted.len() - skipped.len();
        if remaining == 0 {
            return None;
        }
        let nth = |j: usize| {
            let mut pos = j;
            for &s in &skipped {
                if s <= pos {
                    pos += 1;
                }
            }
            self.sorted[pos]
        };
        Some(if remaining % 2 == 1 {
            nth(remaining / 2)
        } else {
            0.5 * (nth(remaining / 2 - 1) + nth(remaining / 2))
        })
    }
}
