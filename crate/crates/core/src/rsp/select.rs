use crate::array::SPEED_OF_LIGHT;

use super::Detection;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectConfig {
    /// Detections slower than this are treated as static (m/s).
    pub v_static: f64,
    pub threshold_db: f64,
    pub range_cull_fraction: f64,
    pub amp_cull_margin_db: f64,
    /// Range culling only applies when more beams than this survive.
    pub cap: usize,
    /// Maximum unambiguous range in metres.
    pub max_range: f64,
}

impl SelectConfig {
    pub fn new(threshold_db: f64, pri: f64) -> Self {
        SelectConfig {
            v_static: 0.5,
            threshold_db,
            range_cull_fraction: 0.9,
            amp_cull_margin_db: 3.0,
            cap: 8,
            max_range: SPEED_OF_LIGHT * pri / 2.0,
        }
    }
}

/// Beams carrying at least one mobile detection, in ascending order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BeamSubset {
    pub indices: Vec<usize>,
    /// Detections of each member beam, strongest first, aligned with `indices`.
    pub detections: Vec<Vec<Detection>>,
}

impl BeamSubset {
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// Strongest mobile detection on a member beam.
    pub fn lead_detection(&self, beam: usize, v_static: f64) -> Option<&Detection> {
        let pos = self.indices.iter().position(|&b| b == beam)?;
        self.detections[pos].iter().find(|d| d.velocity.abs() >= v_static)
    }
}

/// Prune the codebook to beams with moving returns. `per_beam[k]` holds the
/// detections of beam `k`, strongest first.
pub fn select_beams(per_beam: &[Vec<Detection>], cfg: &SelectConfig) -> BeamSubset {
    let mut subset = BeamSubset::default();
    for (k, dets) in per_beam.iter().enumerate() {
        if dets.iter().any(|d| d.velocity.abs() >= cfg.v_static) {
            subset.indices.push(k);
            subset.detections.push(dets.clone());
        }
    }
    if subset.len() > cfg.cap {
        let far = cfg.range_cull_fraction * cfg.max_range;
        let weak = cfg.threshold_db + cfg.amp_cull_margin_db;
        let keep: Vec<bool> = subset
            .detections
            .iter()
            .map(|d| {
                let lead = &d[0];
                !(lead.range > far && lead.pslr < weak)
            })
            .collect();
        let mut it = keep.iter();
        subset.indices.retain(|_| *it.next().expect("aligned"));
        let mut it = keep.iter();
        subset.detections.retain(|_| *it.next().expect("aligned"));
    }
    subset
}
