//! Golay complementary pairs and the sampled radar pulse train.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Published PRI and bandwidth constants are rounded to two or three digits,
/// so a 512-chip pulse at 1.76 GHz overruns `0.5 * 0.58 us` by about 0.3 %.
/// The pulse-fits-in-duty-window check allows this much slack.
pub const DUTY_TOLERANCE: f64 = 0.01;

/// A pair of bipolar sequences whose aperiodic autocorrelations sum to a delta.
#[derive(Debug, Clone, PartialEq)]
pub struct GolayPair {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl GolayPair {
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// log2 of the sequence length.
    pub fn order(&self) -> u32 {
        self.a.len().trailing_zeros()
    }
}

/// Golay-Rudin-Shapiro pair of length `2^order`: `a' = a || b`, `b' = a || -b`
/// starting from `a = b = [+1]`.
pub fn generate_golay_pair(order: u32) -> Result<GolayPair> {
    if !(1..=16).contains(&order) {
        return Err(Error::arg("order", format!("{order} not in 1..=16")));
    }
    let mut a = vec![1.0];
    let mut b = vec![1.0];
    for _ in 0..order {
        let mut na = Vec::with_capacity(2 * a.len());
        na.extend_from_slice(&a);
        na.extend_from_slice(&b);
        let mut nb = Vec::with_capacity(2 * a.len());
        nb.extend_from_slice(&a);
        nb.extend(b.iter().map(|x| -x));
        a = na;
        b = nb;
    }
    Ok(GolayPair { a, b })
}

/// Generalised Golay construction from a delay vector and a sign vector.
///
/// Step `i` maps `(a, b)` to `(a + w_i z^{d_i} b, a - w_i z^{d_i} b)`. When
/// `delays` is a permutation of `1, 2, 4, ..., 2^(m-1)` the result is a
/// complementary pair of length `2^m`; `delays = [1, 2, 4, ...]` with all
/// weights `+1` reproduces [`generate_golay_pair`].
pub fn golay_pair_from_delays(delays: &[usize], weights: &[i8]) -> Result<GolayPair> {
    let m = delays.len();
    if m == 0 || m > 16 {
        return Err(Error::arg("delays", format!("length {m} not in 1..=16")));
    }
    if weights.len() != m {
        return Err(Error::arg("weights", "length must match delays"));
    }
    let mut sorted = delays.to_vec();
    sorted.sort_unstable();
    if sorted.iter().enumerate().any(|(i, &d)| d != 1 << i) {
        return Err(Error::arg("delays", "must be a permutation of powers of two"));
    }
    if weights.iter().any(|&w| w != 1 && w != -1) {
        return Err(Error::arg("weights", "entries must be +1 or -1"));
    }
    let n = 1usize << m;
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    a[0] = 1.0;
    b[0] = 1.0;
    for (&d, &w) in delays.iter().zip(weights) {
        let w = f64::from(w);
        let mut na = a.clone();
        let mut nb = a.clone();
        for i in 0..n - d {
            na[i + d] += w * b[i];
            nb[i + d] -= w * b[i];
        }
        a = na;
        b = nb;
    }
    Ok(GolayPair { a, b })
}

/// `R[l] = sum_n x[n] conj(x[n-l])` for `l = -(N-1)..=(N-1)`; index `N-1` is lag 0.
pub fn aperiodic_autocorrelation(x: &[Complex64]) -> Result<Vec<Complex64>> {
    aperiodic_crosscorrelation(x, x)
}

/// `R[l] = sum_n x[n] conj(y[n-l])` over the full overlap range of two
/// equal-length sequences; index `N-1` is lag 0.
pub fn aperiodic_crosscorrelation(x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::arg("x", "empty sequence"));
    }
    if y.len() != n {
        return Err(Error::arg("y", "length must match x"));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
    for (idx, r) in out.iter_mut().enumerate() {
        let lag = idx as isize - (n as isize - 1);
        let (lo, hi) = if lag >= 0 {
            (lag as usize, n)
        } else {
            (0, (n as isize + lag) as usize)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += x[i] * y[(i as isize - lag) as usize].conj();
        }
        *r = acc;
    }
    Ok(out)
}

/// Convert a bipolar real sequence to complex samples.
pub fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// Golay pair plus the fast-time / slow-time sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarWaveform {
    pub pair: GolayPair,
    /// Fast-time sample period `Ts` in seconds.
    pub sample_period: f64,
    /// Pulse repetition interval `Tp` in seconds.
    pub pri: f64,
    pub packets: usize,
    pub duty_cycle: f64,
    /// Transmit `a` on even packets and `b` on odd packets.
    pub alternate_pair: bool,
}

impl RadarWaveform {
    pub fn new(
        pair: GolayPair,
        sample_period: f64,
        pri: f64,
        packets: usize,
        duty_cycle: f64,
        alternate_pair: bool,
    ) -> Result<Self> {
        if !(sample_period > 0.0) || !sample_period.is_finite() {
            return Err(Error::arg("sample_period", "must be positive"));
        }
        if !(pri > 0.0) || !pri.is_finite() {
            return Err(Error::arg("pri", "must be positive"));
        }
        if !(duty_cycle > 0.0 && duty_cycle <= 1.0) {
            return Err(Error::arg("duty_cycle", "must lie in (0, 1]"));
        }
        if packets < 2 {
            return Err(Error::arg("packets", "need at least 2 packets"));
        }
        let active = pair.len() as f64 * sample_period;
        if active > pri * duty_cycle * (1.0 + DUTY_TOLERANCE) {
            return Err(Error::arg(
                "duty_cycle",
                format!(
                    "pulse of {:.4e} s does not fit in {:.4e} s active window",
                    active,
                    pri * duty_cycle
                ),
            ));
        }
        let w = RadarWaveform {
            pair,
            sample_period,
            pri,
            packets,
            duty_cycle,
            alternate_pair,
        };
        if w.fast_time_len() < w.pair.len() {
            return Err(Error::arg("pri", "shorter than one pulse"));
        }
        Ok(w)
    }

    /// Golay-512, 1.76 GHz sampling, 0.58 us PRI, 20 packets, 50 % duty.
    pub fn standard() -> Self {
        let pair = generate_golay_pair(9).expect("order 9 is valid");
        RadarWaveform::new(pair, 1.0 / 1.76e9, 0.58e-6, 20, 0.5, false)
            .expect("standard waveform is valid")
    }

    /// Samples per PRI, `round(Tp / Ts)`.
    pub fn fast_time_len(&self) -> usize {
        (self.pri / self.sample_period).round() as usize
    }

    /// Length of the transmitted code.
    pub fn code_len(&self) -> usize {
        self.pair.len()
    }

    /// Coherent processing interval `P * Tp`.
    pub fn cpi(&self) -> f64 {
        self.packets as f64 * self.pri
    }

    /// Sequence transmitted in a given packet.
    pub fn sequence(&self, packet: usize) -> &[f64] {
        if self.alternate_pair && packet % 2 == 1 {
            self.pair.b()
        } else {
            self.pair.a()
        }
    }
}

/// Fast-time samples of one PRI: the code in slots `0..N`, zeros afterwards.
pub fn sample_pulse_train(w: &RadarWaveform, packet_index: usize) -> Result<Vec<Complex64>> {
    if packet_index >= w.packets {
        return Err(Error::arg(
            "packet_index",
            format!("{packet_index} >= {} packets", w.packets),
        ));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); w.fast_time_len()];
    for (o, &s) in out.iter_mut().zip(w.sequence(packet_index)) {
        *o = Complex64::new(s, 0.0);
    }
    Ok(out)
}
