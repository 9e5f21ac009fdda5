use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::filter::RangeProfileSet;
use super::jacobi::{hermitian_eigen, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MusicConfig {
    pub fd_max: f64,
    pub fd_step: f64,
    /// Signal-subspace rank `M`.
    pub rank: usize,
}

impl Default for MusicConfig {
    fn default() -> Self {
        MusicConfig {
            fd_max: 4000.0,
            fd_step: 400.0,
            rank: 1,
        }
    }
}

impl MusicConfig {
    pub fn validate(&self, packets: usize, pri: f64) -> Result<()> {
        if !(self.fd_step > 0.0) {
            return Err(Error::arg("fd_step", "must be positive"));
        }
        if !(self.fd_max >= 0.0) || self.fd_max > 1.0 / (2.0 * pri) {
            return Err(Error::arg("fd_max", "must lie in [0, 1/(2 Tp)]"));
        }
        if self.rank == 0 || self.rank >= packets {
            return Err(Error::arg("rank", format!("must lie in 1..{packets}")));
        }
        Ok(())
    }

    /// Frequency grid `-fd_max..=fd_max` in steps of `fd_step`, symmetric about 0.
    pub fn grid(&self) -> Vec<f64> {
        let n = (self.fd_max / self.fd_step + 1e-9).floor() as i64;
        (-n..=n).map(|i| i as f64 * self.fd_step).collect()
    }
}

/// `I - sum of the top-M eigenprojectors of y y^H`.
pub fn noise_projector(y: &[Complex64], rank: usize) -> Result<CMatrix> {
    let p = y.len();
    if rank == 0 || rank >= p {
        return Err(Error::arg("rank", format!("must lie in 1..{p}")));
    }
    let energy: f64 = y.iter().map(|v| v.norm_sqr()).sum();
    if !(energy > 0.0) {
        return Err(Error::arg("y", "zero snapshot"));
    }
    let mut pi = CMatrix::identity(p);
    if rank == 1 {
        for i in 0..p {
            for j in 0..p {
                pi[(i, j)] -= y[i] * y[j].conj() / energy;
            }
        }
        return Ok(pi);
    }
    let eig = hermitian_eigen(&CMatrix::outer(y))?;
    for k in 0..rank {
        let q = eig.vectors.column(k);
        for i in 0..p {
            for j in 0..p {
                pi[(i, j)] -= q[i] * q[j].conj();
            }
        }
    }
    Ok(pi)
}

/// Slow-time steering vector `exp(+j 2 pi fD p Tp)`, matching the scene's
/// Doppler phase convention.
pub fn doppler_steering(fd: f64, packets: usize, pri: f64) -> Vec<Complex64> {
    (0..packets)
        .map(|p| Complex64::from_polar(1.0, 2.0 * PI * fd * p as f64 * pri))
        .collect()
}

const DENOM_FLOOR: f64 = 1e-12;

/// Pseudo-spectrum over the configured grid and its peak frequency.
pub fn music_doppler(
    profiles: &RangeProfileSet,
    range_bin: usize,
    cfg: &MusicConfig,
    pri: f64,
) -> Result<(f64, Vec<f64>)> {
    if range_bin >= profiles.n_bins {
        return Err(Error::arg("range_bin", format!("{range_bin} >= {}", profiles.n_bins)));
    }
    cfg.validate(profiles.packets, pri)?;
    let y = profiles.slow_time(range_bin);
    let grid = cfg.grid();
    let p = profiles.packets;
    let spectrum: Vec<f64> = if cfg.rank == 1 {
        let energy: f64 = y.iter().map(|v| v.norm_sqr()).sum();
        if !(energy > 0.0) {
            return Err(Error::arg("y", "zero snapshot"));
        }
        grid.iter()
            .map(|&f| {
                let e = doppler_steering(f, p, pri);
                let proj: Complex64 = e.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
                let d = p as f64 - proj.norm_sqr() / energy;
                1.0 / d.max(DENOM_FLOOR)
            })
            .collect()
    } else {
        let pi = noise_projector(&y, cfg.rank)?;
        grid.iter()
            .map(|&f| {
                let e = doppler_steering(f, p, pri);
                1.0 / pi.quadratic_form(&e).re.max(DENOM_FLOOR)
            })
            .collect()
    };
    let mut best = grid.len() / 2;
    for (i, &s) in spectrum.iter().enumerate() {
        let better = s > spectrum[best]
            || (s == spectrum[best] && grid[i].abs() < grid[best].abs());
        if better {
            best = i;
        }
    }
    Ok((grid[best], spectrum))
}
