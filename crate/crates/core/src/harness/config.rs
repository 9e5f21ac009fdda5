use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::array::{make_codebook, ArrayConfig, BeamCodebook};
use crate::bandit::{PolicyKind, RestartKind};
use crate::error::{Error, Result};
use crate::link::CommConfig;
use crate::rsp::{DetectConfig, MusicConfig, RadarProcessor, SelectConfig, SidelobeBlanking};
use crate::scene::{SceneLayout, TargetModel};
use crate::timing::TimingModel;
use crate::waveform::{generate_golay_pair, RadarWaveform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// User at (0, 10) m moving radially at 3 m/s; 2000 slots.
    #[default]
    StationaryRadial,
    /// User from (20, 15) m moving along -x at 3 m/s; 8000 slots.
    QuasiLateral,
    /// Users taken from the `users` list.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserSpec {
    pub position: [f64; 2],
    pub velocity: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CodebookSection {
    pub beams: usize,
    pub fov_deg: f64,
}

impl Default for CodebookSection {
    fn default() -> Self {
        CodebookSection {
            beams: 41,
            fov_deg: 80.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArraySection {
    pub elements: usize,
    pub spacing: f64,
    pub carrier_hz: f64,
}

impl Default for ArraySection {
    fn default() -> Self {
        ArraySection {
            elements: 32,
            spacing: 0.5,
            carrier_hz: 60e9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaveformSection {
    pub golay_order: u32,
    pub sample_rate_hz: f64,
    pub pri_s: f64,
    pub packets: usize,
    pub duty_cycle: f64,
    pub alternate_pair: bool,
}

impl Default for WaveformSection {
    fn default() -> Self {
        WaveformSection {
            golay_order: 9,
            sample_rate_hz: 1.76e9,
            pri_s: 0.58e-6,
            packets: 20,
            duty_cycle: 0.5,
            alternate_pair: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadarSection {
    pub snr_db: f64,
    pub threshold_db: f64,
    pub guard_bins: usize,
    /// Margin above the code's worst sidelobe for blanking; negative disables.
    pub blanking_margin_db: f64,
    pub v_static: f64,
    pub range_cull_fraction: f64,
    pub amp_cull_margin_db: f64,
    pub subset_cap: usize,
    pub fd_max_hz: f64,
    pub fd_step_hz: f64,
    pub music_rank: usize,
    pub clutter_range_m: [f64; 2],
    pub snr_drop_db: f64,
    pub snr_ewma_alpha: f64,
}

impl Default for RadarSection {
    fn default() -> Self {
        RadarSection {
            snr_db: 10.0,
            threshold_db: 13.0,
            guard_bins: 3,
            blanking_margin_db: 3.0,
            v_static: 0.5,
            range_cull_fraction: 0.9,
            amp_cull_margin_db: 3.0,
            subset_cap: 8,
            fd_max_hz: 4000.0,
            fd_step_hz: 400.0,
            music_rank: 1,
            clutter_range_m: [3.0, 35.0],
            snr_drop_db: 3.0,
            snr_ewma_alpha: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LucbSection {
    pub delta: f64,
    pub epsilon: f64,
}

impl Default for LucbSection {
    fn default() -> Self {
        LucbSection {
            delta: 0.1,
            epsilon: 0.1,
        }
    }
}

/// Per-policy restart overrides; unset entries take the scenario default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RestartSection {
    pub dbf: Option<RestartKind>,
    pub ucb_isac: Option<RestartKind>,
    pub lucb: Option<RestartKind>,
    pub ucb_snr: Option<RestartKind>,
    pub random: Option<RestartKind>,
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub target: TargetModel,
    /// Overrides the scenario's default user when nonempty.
    pub users: Vec<UserSpec>,
    pub multipaths: usize,
    pub clutter: usize,
    /// Episode length; defaults to 2000 (stationary/custom) or 8000 (quasi).
    pub slots: Option<u64>,
    pub trials: usize,
    pub seed: u64,
    pub policies: Vec<PolicyKind>,
    pub restart: RestartSection,
    pub codebook: CodebookSection,
    pub array: ArraySection,
    pub waveform: WaveformSection,
    pub radar: RadarSection,
    pub comm: CommConfig,
    pub timing: TimingModel,
    pub lucb: LucbSection,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            scenario: ScenarioKind::StationaryRadial,
            target: TargetModel::Point,
            users: Vec::new(),
            multipaths: 1,
            clutter: 0,
            slots: None,
            trials: 15,
            seed: 1,
            policies: PolicyKind::ALL.to_vec(),
            restart: RestartSection::default(),
            codebook: CodebookSection::default(),
            array: ArraySection::default(),
            waveform: WaveformSection::default(),
            radar: RadarSection::default(),
            comm: CommConfig::default(),
            timing: TimingModel::default(),
            lucb: LucbSection::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ScenarioConfig::from_toml_str(&s)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// The lateral scenario with its restart defaults.
    pub fn quasi_lateral() -> Self {
        ScenarioConfig {
            scenario: ScenarioKind::QuasiLateral,
            ..ScenarioConfig::default()
        }
    }

    pub fn slots(&self) -> u64 {
        self.slots.unwrap_or(match self.scenario {
            ScenarioKind::QuasiLateral => 8000,
            _ => 2000,
        })
    }

    pub fn user_specs(&self) -> Vec<UserSpec> {
        if !self.users.is_empty() {
            return self.users.clone();
        }
        match self.scenario {
            ScenarioKind::StationaryRadial => vec![UserSpec {
                position: [0.0, 10.0],
                velocity: [0.0, 3.0],
            }],
            ScenarioKind::QuasiLateral => vec![UserSpec {
                position: [20.0, 15.0],
                velocity: [-3.0, 0.0],
            }],
            ScenarioKind::Custom => Vec::new(),
        }
    }

    pub fn restart_for(&self, policy: PolicyKind) -> RestartKind {
        let set = match policy {
            PolicyKind::Dbf => self.restart.dbf,
            PolicyKind::UcbIsac => self.restart.ucb_isac,
            PolicyKind::Lucb => self.restart.lucb,
            PolicyKind::UcbSnr => self.restart.ucb_snr,
            PolicyKind::Random => self.restart.random,
        };
        set.unwrap_or(match (self.scenario, policy) {
            (ScenarioKind::QuasiLateral, PolicyKind::UcbIsac) => RestartKind::RspForecast,
            (ScenarioKind::QuasiLateral, PolicyKind::UcbSnr | PolicyKind::Lucb) => {
                RestartKind::Periodic { interval: 2000 }
            }
            _ => RestartKind::None,
        })
    }

    pub fn array_config(&self) -> Result<ArrayConfig> {
        ArrayConfig::new(self.array.elements, self.array.spacing, self.array.carrier_hz)
            .map_err(|e| Error::config("array", e.to_string()))
    }

    pub fn codebook(&self) -> Result<BeamCodebook> {
        make_codebook(self.codebook.fov_deg.to_radians(), self.codebook.beams)
            .map_err(|e| Error::config("codebook", e.to_string()))
    }

    pub fn waveform(&self) -> Result<RadarWaveform> {
        let w = &self.waveform;
        let pair = generate_golay_pair(w.golay_order).map_err(|e| Error::config("waveform.golay_order", e.to_string()))?;
        if !(w.sample_rate_hz > 0.0) {
            return Err(Error::config("waveform.sample_rate_hz", "must be positive"));
        }
        RadarWaveform::new(pair, 1.0 / w.sample_rate_hz, w.pri_s, w.packets, w.duty_cycle, w.alternate_pair)
            .map_err(|e| Error::config("waveform", e.to_string()))
    }

    /// Timing model with CPI parameters taken from the waveform section.
    pub fn timing_model(&self) -> TimingModel {
        TimingModel {
            pri: self.waveform.pri_s,
            packets_per_cpi: self.waveform.packets,
            ..self.timing.clone()
        }
    }

    pub fn radar_processor(&self) -> Result<RadarProcessor> {
        let waveform = self.waveform()?;
        let array = self.array_config()?;
        let r = &self.radar;
        let mut detect = DetectConfig::new(r.threshold_db);
        detect.guard_bins = r.guard_bins;
        if r.blanking_margin_db >= 0.0 {
            detect.blanking = Some(SidelobeBlanking::for_waveform(&waveform, r.blanking_margin_db));
        }
        let music = MusicConfig {
            fd_max: r.fd_max_hz,
            fd_step: r.fd_step_hz,
            rank: r.music_rank,
        };
        let mut select = SelectConfig::new(r.threshold_db, waveform.pri);
        select.v_static = r.v_static;
        select.range_cull_fraction = r.range_cull_fraction;
        select.amp_cull_margin_db = r.amp_cull_margin_db;
        select.cap = r.subset_cap;
        RadarProcessor::new(waveform, array, detect, music, select).map_err(|e| Error::config("radar", e.to_string()))
    }

    pub fn scene_layout(&self) -> SceneLayout {
        SceneLayout {
            target: self.target,
            users: self.user_specs().iter().map(|u| (u.position, u.velocity)).collect(),
            multipaths: self.multipaths,
            clutter: self.clutter,
            radar_snr_db: self.radar.snr_db,
            fd_max: self.radar.fd_max_hz,
            clutter_range: (self.radar.clutter_range_m[0], self.radar.clutter_range_m[1]),
        }
    }

    /// Check every field against the preconditions of the module that uses it.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials", "need at least one trial"));
        }
        if self.policies.is_empty() {
            return Err(Error::config("policies", "need at least one policy"));
        }
        let mut seen = self.policies.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.policies.len() {
            return Err(Error::config("policies", "duplicate policy"));
        }
        self.array_config()?;
        let cb = self.codebook()?;
        let w = self.waveform()?;
        if self.slots() < cb.len() as u64 {
            return Err(Error::config("slots", "episode shorter than one round robin"));
        }
        let users = self.user_specs();
        if users.is_empty() {
            return Err(Error::config("users", "scenario needs at least one user"));
        }
        for (i, u) in users.iter().enumerate() {
            let r = u.position[0].hypot(u.position[1]);
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::config(format!("users[{i}].position"), "must be a finite nonzero point"));
            }
            if u.velocity.iter().any(|v| !v.is_finite()) {
                return Err(Error::config(format!("users[{i}].velocity"), "must be finite"));
            }
        }
        let r = &self.radar;
        if !(r.threshold_db > 0.0) {
            return Err(Error::config("radar.threshold_db", "must be positive"));
        }
        if r.snr_db.is_nan() {
            return Err(Error::config("radar.snr_db", "must be a number"));
        }
        if !(r.v_static >= 0.0) {
            return Err(Error::config("radar.v_static", "must be non-negative"));
        }
        if !(r.clutter_range_m[0] > 0.0 && r.clutter_range_m[1] >= r.clutter_range_m[0]) {
            return Err(Error::config("radar.clutter_range_m", "need 0 < min <= max"));
        }
        if !(r.snr_ewma_alpha > 0.0 && r.snr_ewma_alpha <= 1.0) {
            return Err(Error::config("radar.snr_ewma_alpha", "must lie in (0, 1]"));
        }
        if !(r.snr_drop_db > 0.0) {
            return Err(Error::config("radar.snr_drop_db", "must be positive"));
        }
        MusicConfig {
            fd_max: r.fd_max_hz,
            fd_step: r.fd_step_hz,
            rank: r.music_rank,
        }
        .validate(w.packets, w.pri)
        .map_err(|e| Error::config("radar", e.to_string()))?;
        self.comm.validate()?;
        self.timing_model().validate()?;
        if !(self.lucb.delta > 0.0 && self.lucb.delta < 1.0) {
            return Err(Error::config("lucb.delta", "must lie in (0, 1)"));
        }
        if !(self.lucb.epsilon >= 0.0) {
            return Err(Error::config("lucb.epsilon", "must be non-negative"));
        }
        for &p in &self.policies {
            match self.restart_for(p) {
                RestartKind::Periodic { interval: 0 } => {
                    return Err(Error::config(format!("restart.{}", p.name()), "interval must be positive"));
                }
                RestartKind::RspForecast if p != PolicyKind::UcbIsac => {
                    return Err(Error::config(
                        format!("restart.{}", p.name()),
                        "rsp_forecast needs radar outputs (ucb_isac only)",
                    ));
                }
                _ => {}
            }
        }
        Ok(())
    }
}
