use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scene::RadarDataCube;
use crate::waveform::RadarWaveform;

/// Range profiles `Y^k` of one beam: range bins x packets, stored packet-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeProfileSet {
    pub beam_index: usize,
    pub n_bins: usize,
    pub packets: usize,
    data: Vec<Complex64>,
}

impl RangeProfileSet {
    pub fn from_packets(beam_index: usize, n_bins: usize, packets: Vec<Vec<Complex64>>) -> Result<Self> {
        if packets.iter().any(|p| p.len() != n_bins) {
            return Err(Error::arg("packets", "every packet must have n_bins samples"));
        }
        let count = packets.len();
        Ok(RangeProfileSet {
            beam_index,
            n_bins,
            packets: count,
            data: packets.into_iter().flatten().collect(),
        })
    }

    pub fn get(&self, n: usize, p: usize) -> Complex64 {
        self.data[p * self.n_bins + n]
    }

    pub fn packet(&self, p: usize) -> &[Complex64] {
        &self.data[p * self.n_bins..(p + 1) * self.n_bins]
    }

    /// Slow-time snapshot `Y[n, .]`.
    pub fn slow_time(&self, n: usize) -> Vec<Complex64> {
        (0..self.packets).map(|p| self.get(n, p)).collect()
    }

    /// Noncoherent sum of `|Y[n, p]|^2` over packets.
    pub fn power(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_bins];
        for p in 0..self.packets {
            for (o, y) in out.iter_mut().zip(self.packet(p)) {
                *o += y.norm_sqr();
            }
        }
        out
    }
}

/// FFT correlator against the transmitted code(s), reusable across beams.
pub struct MatchedFilter {
    n_fast: usize,
    code_len: usize,
    nfft: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Conjugated code spectra for even and odd packets.
    spectra: [Vec<Complex64>; 2],
}

impl MatchedFilter {
    pub fn new(waveform: &RadarWaveform) -> Self {
        let n_fast = waveform.fast_time_len();
        let nfft = (2 * n_fast).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(nfft);
        let inverse = planner.plan_fft_inverse(nfft);
        let spectrum = |seq: &[f64]| {
            let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
            for (b, &s) in buf.iter_mut().zip(seq) {
                *b = Complex64::new(s, 0.0);
            }
            forward.process(&mut buf);
            buf.iter().map(|x| x.conj()).collect::<Vec<_>>()
        };
        let spectra = [spectrum(waveform.sequence(0)), spectrum(waveform.sequence(1))];
        MatchedFilter {
            n_fast,
            code_len: waveform.code_len(),
            nfft,
            forward,
            inverse,
            spectra,
        }
    }

    pub fn fft_len(&self) -> usize {
        self.nfft
    }

    pub fn apply(&self, cube: &RadarDataCube) -> Result<RangeProfileSet> {
        if cube.n_fast != self.n_fast {
            return Err(Error::arg(
                "cube",
                format!("fast-time length {} != waveform {}", cube.n_fast, self.n_fast),
            ));
        }
        if cube.n_fast < self.code_len {
            return Err(Error::arg("cube", "fast-time length shorter than the code"));
        }
        let scale = 1.0 / (self.nfft as f64 * self.code_len as f64);
        let mut data = Vec::with_capacity(self.n_fast * cube.packets);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.nfft];
        for p in 0..cube.packets {
            buf[..self.n_fast].copy_from_slice(cube.packet(p));
            buf[self.n_fast..].fill(Complex64::new(0.0, 0.0));
            self.forward.process(&mut buf);
            for (b, s) in buf.iter_mut().zip(&self.spectra[p % 2]) {
                *b *= s;
            }
            self.inverse.process(&mut buf);
            data.extend(buf[..self.n_fast].iter().map(|x| x * scale));
        }
        Ok(RangeProfileSet {
            beam_index: cube.beam_index,
            n_bins: self.n_fast,
            packets: cube.packets,
            data,
        })
    }
}

/// Correlate every packet of `cube` with the code it carried, scaled by `1/N`.
pub fn matched_filter(cube: &RadarDataCube, waveform: &RadarWaveform) -> Result<RangeProfileSet> {
    if cube.packets != waveform.packets {
        return Err(Error::arg("cube", "packet count does not match waveform"));
    }
    MatchedFilter::new(waveform).apply(cube)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{generate_golay_pair, RadarWaveform};

    #[test]
    fn pure_code_peaks_at_one() {
        let w = RadarWaveform::standard();
        let mut cube = RadarDataCube::zeros(0, w.fast_time_len(), w.packets);
        for p in 0..w.packets {
            for (x, &a) in cube.packet_mut(p).iter_mut().zip(w.pair.a()) {
                *x = Complex64::new(a, 0.0);
            }
        }
        let y = matched_filter(&cube, &w).unwrap();
        assert_eq!(y.n_bins, 1021);
        assert!((y.get(0, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let pw = y.power();
        let (imax, _) = pw
            .iter()
            .enumerate()
            .fold((0, 0.0), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        assert_eq!(imax, 0);
    }

    #[test]
    fn delayed_code_lands_on_its_bin() {
        let pair = generate_golay_pair(4).unwrap();
        let w = RadarWaveform::new(pair.clone(), 1.0, 64.0, 2, 0.5, false).unwrap();
        let mut cube = RadarDataCube::zeros(0, 64, 2);
        for p in 0..2 {
            for (i, &a) in pair.a().iter().enumerate() {
                cube.packet_mut(p)[20 + i] = Complex64::new(2.0 * a, 0.0);
            }
        }
        let y = matched_filter(&cube, &w).unwrap();
        assert!((y.get(20, 1) - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let w = RadarWaveform::standard();
        let cube = RadarDataCube::zeros(0, 100, w.packets);
        assert!(matched_filter(&cube, &w).is_err());
    }
}
