//! Uniform linear array: steering vectors, beam weights and the beam codebook.
//!
//! Azimuth is measured from broadside (the +y axis), positive toward +x.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    pub elements: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
    pub carrier_hz: f64,
}

impl ArrayConfig {
    pub fn new(elements: usize, spacing: f64, carrier_hz: f64) -> Result<Self> {
        if elements == 0 {
            return Err(Error::arg("elements", "need at least one element"));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::arg("spacing", "must be positive"));
        }
        if !(carrier_hz > 0.0) || !carrier_hz.is_finite() {
            return Err(Error::arg("carrier_hz", "must be positive"));
        }
        Ok(ArrayConfig {
            elements,
            spacing,
            carrier_hz,
        })
    }

    /// 32 half-wavelength elements at 60 GHz.
    pub fn standard() -> Self {
        ArrayConfig {
            elements: 32,
            spacing: 0.5,
            carrier_hz: 60e9,
        }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    fn phase_step(&self, phi: f64) -> f64 {
        2.0 * PI * self.spacing * phi.sin()
    }
}

/// `u[q] = exp(j 2 pi spacing q sin(phi))`.
pub fn steering_vector(cfg: &ArrayConfig, phi: f64) -> Vec<Complex64> {
    let step = cfg.phase_step(phi);
    (0..cfg.elements)
        .map(|q| Complex64::from_polar(1.0, step * q as f64))
        .collect()
}

/// `w = conj(u) / sqrt(Q)`, unit norm.
pub fn beam_weights(cfg: &ArrayConfig, phi_k: f64) -> Vec<Complex64> {
    let scale = 1.0 / (cfg.elements as f64).sqrt();
    steering_vector(cfg, phi_k)
        .into_iter()
        .map(|u| u.conj() * scale)
        .collect()
}

/// One-way array factor `w_k^T u_phi`.
pub fn one_way_gain(cfg: &ArrayConfig, phi_k: f64, phi: f64) -> Complex64 {
    let step = cfg.phase_step(phi) - cfg.phase_step(phi_k);
    let mut acc = Complex64::new(0.0, 0.0);
    for q in 0..cfg.elements {
        acc += Complex64::from_polar(1.0, step * q as f64);
    }
    acc / (cfg.elements as f64).sqrt()
}

/// `|w_k^T u_phi|^2` via the Dirichlet kernel `sin^2(Q psi/2) / (Q sin^2(psi/2))`.
pub fn one_way_power_gain(cfg: &ArrayConfig, phi_k: f64, phi: f64) -> f64 {
    let psi = cfg.phase_step(phi) - cfg.phase_step(phi_k);
    let q = cfg.elements as f64;
    let den = (psi / 2.0).sin();
    if den.abs() < 1e-9 {
        return q;
    }
    let num = (q * psi / 2.0).sin();
    num * num / (q * den * den)
}

/// Monostatic TX+RX factor `(w_k^T u_phi)(u_phi^T w_k)`.
pub fn two_way_gain(cfg: &ArrayConfig, phi_k: f64, phi_target: f64) -> Complex64 {
    let g = one_way_gain(cfg, phi_k, phi_target);
    g * g
}

/// Equally spaced beam centres over `[-fov, +fov]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamCodebook {
    angles: Vec<f64>,
    beamwidth: f64,
}

impl BeamCodebook {
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn angle(&self, k: usize) -> f64 {
        self.angles[k]
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Beam spacing `delta phi` in radians.
    pub fn beamwidth(&self) -> f64 {
        self.beamwidth
    }

    /// Half-width of the field of view.
    pub fn fov(&self) -> f64 {
        if self.angles.len() == 1 {
            self.beamwidth / 2.0
        } else {
            *self.angles.last().expect("nonempty")
        }
    }

    /// Index of the beam centre closest to `phi` (lowest index on ties).
    pub fn nearest(&self, phi: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, &a) in self.angles.iter().enumerate() {
            let d = (a - phi).abs();
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        best
    }
}

pub fn make_codebook(fov_max: f64, count: usize) -> Result<BeamCodebook> {
    if count == 0 {
        return Err(Error::arg("count", "codebook needs at least one beam"));
    }
    if !(fov_max > 0.0 && fov_max < PI / 2.0) {
        return Err(Error::arg("fov_max", "must lie in (0, pi/2)"));
    }
    if count == 1 {
        return Ok(BeamCodebook {
            angles: vec![0.0],
            beamwidth: 2.0 * fov_max,
        });
    }
    let step = 2.0 * fov_max / (count - 1) as f64;
    let half = (count - 1) as f64 / 2.0;
    let angles = (0..count).map(|i| (i as f64 - half) * step).collect();
    Ok(BeamCodebook {
        angles,
        beamwidth: step,
    })
}
