//! CSV dumps of range profiles and MUSIC pseudo-spectra for offline plotting.

use std::io::Write;
use std::path::Path;

use super::filter::RangeProfileSet;
use crate::error::{Error, Result};

/// One pseudo-spectrum evaluated at a range bin of a beam.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDump {
    pub beam_index: usize,
    pub range_bin: usize,
    pub frequencies: Vec<f64>,
    pub values: Vec<f64>,
}

/// Columns `beam,bin,magnitude`: root-mean-square over packets.
pub fn write_range_profiles(path: &Path, profiles: &[RangeProfileSet]) -> Result<()> {
    let mut out = String::from("beam,bin,magnitude\n");
    for p in profiles {
        for (n, v) in p.power().iter().enumerate() {
            out.push_str(&format!("{},{},{:.9e}\n", p.beam_index, n, (v / p.packets as f64).sqrt()));
        }
    }
    write(path, &out)
}

/// Columns `beam,range_bin,doppler_hz,pseudo_spectrum`.
pub fn write_pseudo_spectra(path: &Path, spectra: &[SpectrumDump]) -> Result<()> {
    let mut out = String::from("beam,range_bin,doppler_hz,pseudo_spectrum\n");
    for s in spectra {
        for (f, v) in s.frequencies.iter().zip(&s.values) {
            out.push_str(&format!("{},{},{},{:.9e}\n", s.beam_index, s.range_bin, f, v));
        }
    }
    write(path, &out)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))
}
