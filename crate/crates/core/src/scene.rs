//! Scene model: mobile users, multipath, static clutter, radar data cube
//! synthesis and link-level downlink SNR.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::array::{one_way_power_gain, two_way_gain, ArrayConfig, BeamCodebook, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::waveform::RadarWaveform;

/// A point reflector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer {
    pub position: [f64; 2],
    pub velocity: [f64; 2],
    pub amplitude: Complex64,
}

impl Scatterer {
    pub fn range(&self) -> f64 {
        self.position[0].hypot(self.position[1])
    }

    /// Azimuth from broadside, `atan2(x, y)`.
    pub fn azimuth(&self) -> f64 {
        self.position[0].atan2(self.position[1])
    }

    /// Range rate `dr/dt`; positive when receding.
    pub fn radial_velocity(&self) -> f64 {
        let r = self.range();
        (self.position[0] * self.velocity[0] + self.position[1] * self.velocity[1]) / r
    }

    /// Round-trip delay `2r/c`.
    pub fn delay(&self) -> f64 {
        2.0 * self.range() / SPEED_OF_LIGHT
    }

    /// Two-way Doppler `2 (dr/dt) fc / c`.
    pub fn doppler(&self, carrier_hz: f64) -> f64 {
        2.0 * self.radial_velocity() * carrier_hz / SPEED_OF_LIGHT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TargetModel {
    #[default]
    Point,
    Pedestrian,
    Car,
}

impl TargetModel {
    /// Scatterer count, box extent (x, y) in metres and total power.
    pub fn cluster_shape(self) -> (usize, [f64; 2], f64) {
        match self {
            TargetModel::Point => (1, [0.0, 0.0], 1.0),
            TargetModel::Pedestrian => (27, [0.5, 1.8], 1.0),
            TargetModel::Car => (40, [4.5, 1.8], 10.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MobileUser {
    pub id: usize,
    pub scatterers: Vec<Scatterer>,
    /// Complex amplitude of the downlink path toward the cluster centroid.
    pub link_amplitude: Complex64,
}

impl MobileUser {
    pub fn point(id: usize, position: [f64; 2], velocity: [f64; 2]) -> Self {
        MobileUser {
            id,
            scatterers: vec![Scatterer {
                position,
                velocity,
                amplitude: Complex64::new(1.0, 0.0),
            }],
            link_amplitude: Complex64::new(1.0, 0.0),
        }
    }

    /// Cluster of scatterers drawn uniformly in the model's box around
    /// `centre`, all sharing `velocity`, equal magnitudes and random phases.
    pub fn extended<R: Rng + ?Sized>(
        id: usize,
        model: TargetModel,
        centre: [f64; 2],
        velocity: [f64; 2],
        rng: &mut R,
    ) -> Self {
        if model == TargetModel::Point {
            return MobileUser::point(id, centre, velocity);
        }
        let (count, extent, power) = model.cluster_shape();
        let mag = (power / count as f64).sqrt();
        let scatterers = (0..count)
            .map(|_| {
                let dx = (rng.random::<f64>() - 0.5) * extent[0];
                let dy = (rng.random::<f64>() - 0.5) * extent[1];
                let ph = rng.random::<f64>() * 2.0 * PI;
                Scatterer {
                    position: [centre[0] + dx, centre[1] + dy],
                    velocity,
                    amplitude: Complex64::from_polar(mag, ph),
                }
            })
            .collect();
        MobileUser {
            id,
            scatterers,
            link_amplitude: Complex64::new(1.0, 0.0),
        }
    }

    pub fn centroid(&self) -> [f64; 2] {
        let n = self.scatterers.len() as f64;
        let (sx, sy) = self
            .scatterers
            .iter()
            .fold((0.0, 0.0), |(x, y), s| (x + s.position[0], y + s.position[1]));
        [sx / n, sy / n]
    }

    pub fn azimuth(&self) -> f64 {
        let c = self.centroid();
        c[0].atan2(c[1])
    }

    pub fn range(&self) -> f64 {
        let c = self.centroid();
        c[0].hypot(c[1])
    }

    /// Velocity of the first scatterer (all scatterers share it).
    pub fn velocity(&self) -> [f64; 2] {
        self.scatterers[0].velocity
    }

    /// Cluster radius around its centroid.
    pub fn extent(&self) -> f64 {
        let c = self.centroid();
        self.scatterers
            .iter()
            .map(|s| (s.position[0] - c[0]).hypot(s.position[1] - c[1]))
            .fold(0.0, f64::max)
    }
}

/// Indirect return coupled to one user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipathComponent {
    pub delay: f64,
    pub azimuth: f64,
    pub doppler: f64,
    pub gain: Complex64,
    /// Index into `Scene::users` of the user this path belongs to.
    pub source: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClutterScatterer {
    pub delay: f64,
    pub azimuth: f64,
    pub amplitude: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub users: Vec<MobileUser>,
    pub multipaths: Vec<MultipathComponent>,
    pub clutter: Vec<ClutterScatterer>,
    /// Per-sample SNR of a unit on-beam return; `+inf` disables noise.
    pub radar_snr_db: f64,
    pub rng_seed: u64,
}

/// Parameters for drawing the random parts of a scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneLayout {
    pub target: TargetModel,
    /// `(position, velocity)` per user.
    pub users: Vec<([f64; 2], [f64; 2])>,
    pub multipaths: usize,
    pub clutter: usize,
    pub radar_snr_db: f64,
    pub fd_max: f64,
    pub clutter_range: (f64, f64),
}

impl Scene {
    /// Draw users' clusters, multipath and clutter for one episode.
    pub fn build<R: Rng + ?Sized>(
        layout: &SceneLayout,
        waveform: &RadarWaveform,
        codebook: &BeamCodebook,
        seed: u64,
        rng: &mut R,
    ) -> Result<Scene> {
        if layout.users.is_empty() && layout.multipaths > 0 {
            return Err(Error::config("scene.multipaths", "multipath needs at least one user"));
        }
        let users: Vec<MobileUser> = layout
            .users
            .iter()
            .enumerate()
            .map(|(i, &(p, v))| MobileUser::extended(i, layout.target, p, v, rng))
            .collect();
        for u in &users {
            if u.scatterers.iter().any(|s| s.range() <= 0.0) {
                return Err(Error::config("scene.users", "scatterer at the array origin"));
            }
        }
        let fov = codebook.fov();
        let window = 0.9 * waveform.pri * waveform.duty_cycle;
        let ts = waveform.sample_period;
        let mut multipaths = Vec::with_capacity(layout.multipaths);
        for m in 0..layout.multipaths {
            let source = m % users.len();
            let direct = 2.0 * users[source].range() / SPEED_OF_LIGHT;
            let lo = (direct + ts).min(window);
            let delay = lo + rng.random::<f64>() * (window - lo);
            let azimuth = (2.0 * rng.random::<f64>() - 1.0) * fov;
            let doppler = (2.0 * rng.random::<f64>() - 1.0) * layout.fd_max;
            let sigma = users[source].link_amplitude.norm();
            let mag = (0.1 + 0.4 * rng.random::<f64>()) * sigma;
            let gain = Complex64::from_polar(mag, rng.random::<f64>() * 2.0 * PI);
            multipaths.push(MultipathComponent {
                delay,
                azimuth,
                doppler,
                gain,
                source,
            });
        }
        let (rmin, rmax) = layout.clutter_range;
        let clutter = (0..layout.clutter)
            .map(|_| {
                let r = rmin + rng.random::<f64>() * (rmax - rmin);
                ClutterScatterer {
                    delay: 2.0 * r / SPEED_OF_LIGHT,
                    azimuth: (2.0 * rng.random::<f64>() - 1.0) * fov,
                    amplitude: Complex64::from_polar(1.0, rng.random::<f64>() * 2.0 * PI),
                }
            })
            .collect();
        Ok(Scene {
            users,
            multipaths,
            clutter,
            radar_snr_db: layout.radar_snr_db,
            rng_seed: seed,
        })
    }

    /// Complex noise variance per fast-time sample.
    pub fn noise_variance(&self, array: &ArrayConfig) -> f64 {
        if self.radar_snr_db == f64::INFINITY {
            return 0.0;
        }
        let q = array.elements as f64;
        q * q * 10f64.powf(-self.radar_snr_db / 10.0)
    }
}

/// Move every scatterer by `velocity * dt`; multipath and clutter are fixed.
pub fn advance(scene: &Scene, dt: f64) -> Result<Scene> {
    if !(dt >= 0.0) {
        return Err(Error::arg("dt", "must be non-negative"));
    }
    let mut next = scene.clone();
    for u in &mut next.users {
        for s in &mut u.scatterers {
            s.position[0] += s.velocity[0] * dt;
            s.position[1] += s.velocity[1] * dt;
        }
    }
    Ok(next)
}

/// Per-beam fast-time x slow-time samples, stored packet-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarDataCube {
    pub beam_index: usize,
    pub n_fast: usize,
    pub packets: usize,
    samples: Vec<Complex64>,
    /// Contributors dropped because their delay exceeds one PRI.
    pub excluded: usize,
}

impl RadarDataCube {
    pub fn zeros(beam_index: usize, n_fast: usize, packets: usize) -> Self {
        RadarDataCube {
            beam_index,
            n_fast,
            packets,
            samples: vec![Complex64::new(0.0, 0.0); n_fast * packets],
            excluded: 0,
        }
    }

    pub fn get(&self, n: usize, p: usize) -> Complex64 {
        self.samples[p * self.n_fast + n]
    }

    /// Fast-time samples of one packet.
    pub fn packet(&self, p: usize) -> &[Complex64] {
        &self.samples[p * self.n_fast..(p + 1) * self.n_fast]
    }

    pub fn packet_mut(&mut self, p: usize) -> &mut [Complex64] {
        &mut self.samples[p * self.n_fast..(p + 1) * self.n_fast]
    }
}

struct Contribution {
    coef: Complex64,
    bin: usize,
    doppler: f64,
}

fn contributions(
    scene: &Scene,
    waveform: &RadarWaveform,
    array: &ArrayConfig,
    phi_k: f64,
    n_fast: usize,
) -> (Vec<Contribution>, usize) {
    let ts = waveform.sample_period;
    let mut out = Vec::new();
    let mut excluded = 0;
    let mut push = |coef: Complex64, delay: f64, doppler: f64| {
        let bin = (delay / ts).round();
        if bin >= n_fast as f64 {
            excluded += 1;
        } else {
            out.push(Contribution {
                coef,
                bin: bin as usize,
                doppler,
            });
        }
    };
    for u in &scene.users {
        for s in &u.scatterers {
            let g = two_way_gain(array, phi_k, s.azimuth());
            push(s.amplitude * g, s.delay(), s.doppler(array.carrier_hz));
        }
    }
    for m in &scene.multipaths {
        let g = two_way_gain(array, phi_k, m.azimuth);
        push(m.gain * g, m.delay, m.doppler);
    }
    for c in &scene.clutter {
        let g = two_way_gain(array, phi_k, c.azimuth);
        push(c.amplitude * g, c.delay, 0.0);
    }
    (out, excluded)
}

/// Received samples on beam `k` for one CPI.
pub fn synthesize_beam<R: Rng + ?Sized>(
    scene: &Scene,
    waveform: &RadarWaveform,
    array: &ArrayConfig,
    codebook: &BeamCodebook,
    k: usize,
    rng: &mut R,
) -> Result<RadarDataCube> {
    if k >= codebook.len() {
        return Err(Error::arg("k", format!("beam {k} out of {}", codebook.len())));
    }
    let n_fast = waveform.fast_time_len();
    let packets = waveform.packets;
    let (contribs, excluded) = contributions(scene, waveform, array, codebook.angle(k), n_fast);
    let mut cube = RadarDataCube::zeros(k, n_fast, packets);
    cube.excluded = excluded;
    for p in 0..packets {
        let seq = waveform.sequence(p);
        let row = cube.packet_mut(p);
        for c in &contribs {
            let rot = Complex64::from_polar(1.0, 2.0 * PI * c.doppler * p as f64 * waveform.pri);
            let amp = c.coef * rot;
            let end = (c.bin + seq.len()).min(n_fast);
            for (x, &s) in row[c.bin..end].iter_mut().zip(seq) {
                *x += amp * s;
            }
        }
    }
    let var = scene.noise_variance(array);
    if var > 0.0 {
        let sd = (var / 2.0).sqrt();
        for x in cube.samples.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *x += Complex64::new(re * sd, im * sd);
        }
    }
    Ok(cube)
}

/// Downlink power gain in dB on a beam at `phi_k`, relative to the element-level
/// SNR: UE array gain `ue_elements`, plus the power sum of the direct path to
/// each user's centroid and its multipath departures; the strongest user wins.
pub fn downlink_gain_db(scene: &Scene, array: &ArrayConfig, phi_k: f64, ue_elements: usize) -> f64 {
    let mut best = 0.0f64;
    for (i, u) in scene.users.iter().enumerate() {
        let mut p = u.link_amplitude.norm_sqr() * one_way_power_gain(array, phi_k, u.azimuth());
        for m in scene.multipaths.iter().filter(|m| m.source == i) {
            p += m.gain.norm_sqr() * one_way_power_gain(array, phi_k, m.azimuth);
        }
        best = best.max(p);
    }
    if best > 0.0 {
        10.0 * (best * ue_elements as f64).log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Effective downlink SNR (dB) when serving on beam `k`; `-inf` when no user
/// or user-coupled path is present.
pub fn downlink_snr(
    scene: &Scene,
    array: &ArrayConfig,
    codebook: &BeamCodebook,
    k: usize,
    comm_snr_db: f64,
    ue_elements: usize,
) -> Result<f64> {
    if k >= codebook.len() {
        return Err(Error::arg("k", format!("beam {k} out of {}", codebook.len())));
    }
    Ok(comm_snr_db + downlink_gain_db(scene, array, codebook.angle(k), ue_elements))
}
