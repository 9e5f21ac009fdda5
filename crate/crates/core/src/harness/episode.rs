use rand_distr::{Distribution, StandardNormal};

use super::config::ScenarioConfig;
use crate::array::{ArrayConfig, BeamCodebook};
use crate::bandit::{
    dbf_oracle_select, random_select, ucb_isac_select, ucb_quality, ucb_snr_select, BanditState, IsacAction,
    Lucb, PolicyKind, RegretTracker, RestartKind, RestartPolicy,
};
use crate::error::{Error, Result};
use crate::link::ber_from_snr;
use crate::rng::{self, purpose};
use crate::rsp::{estimate_t_infinity, RadarProcessor, RadarScan, SnrDropTracker};
use crate::scene::{advance, downlink_gain_db, Scene};
use crate::timing::TimingModel;

/// Slot label written to the per-slot log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Radar,
    RoundRobin,
    Exploit,
    /// LUCB identification rounds.
    Explore,
    Oracle,
    Random,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Radar => "radar",
            Phase::RoundRobin => "round_robin",
            Phase::Exploit => "exploit",
            Phase::Explore => "explore",
            Phase::Oracle => "oracle",
            Phase::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        [
            Phase::Radar,
            Phase::RoundRobin,
            Phase::Exploit,
            Phase::Explore,
            Phase::Oracle,
            Phase::Random,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown phase `{s}`")))
    }

    fn is_exploration(self) -> bool {
        matches!(self, Phase::Radar | Phase::RoundRobin | Phase::Explore)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotRecord {
    pub trial: usize,
    pub snr_db: f64,
    pub policy: PolicyKind,
    /// 0-based slot within the episode.
    pub slot: u64,
    pub phase: Phase,
    /// `None` on radar slots.
    pub beam: Option<usize>,
    pub reward: f64,
    pub ber: f64,
    pub cumulative_ber: f64,
    /// Cumulative regret after this slot.
    pub regret: f64,
    /// UCB index of the chosen beam when the policy computed one.
    pub quality: Option<f64>,
}

/// A restart together with the beam that was being exploited when it fired.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartEvent {
    pub slot: u64,
    /// Slot of the radar scan (or episode start) the forecast was made from.
    pub origin: u64,
    pub leader: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub policy: PolicyKind,
    pub trial: usize,
    pub snr_index: usize,
    pub snr_db: f64,
    pub final_cumulative_ber: f64,
    pub total_regret: f64,
    /// Radar, round-robin and LUCB identification slots.
    pub exploration_slots: u64,
    pub exploration_time: f64,
    pub restarts: Vec<RestartEvent>,
    /// Subset size of every radar scan, in order.
    pub subset_sizes: Vec<usize>,
    /// Rewards clamped into `[0, 1]` by the bandit state.
    pub clamped: u64,
    /// Per-slot log; empty unless requested.
    pub records: Vec<SlotRecord>,
}

/// Per-trial ground truth shared by every policy and SNR point.
#[derive(Debug, Clone)]
pub struct Trial {
    pub index: usize,
    pub scene: Scene,
    beams: usize,
    /// Noise-free downlink gain (dB), slot-major.
    gains: Vec<f64>,
}

impl Trial {
    /// Downlink gain of every beam at `slot`.
    pub fn gains(&self, slot: u64) -> &[f64] {
        let s = slot as usize * self.beams;
        &self.gains[s..s + self.beams]
    }

    pub fn slots(&self) -> u64 {
        (self.gains.len() / self.beams) as u64
    }
}

/// Resolved configuration: everything an episode needs, built once per run.
pub struct Simulator {
    cfg: ScenarioConfig,
    array: ArrayConfig,
    codebook: BeamCodebook,
    processor: RadarProcessor,
    timing: TimingModel,
    t_isac: u64,
    /// On-beam array gain `10 log10(Q Q')`; rewards are normalised on the SNR
    /// relative to it.
    reward_ref_db: f64,
}

impl Simulator {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let codebook = cfg.codebook()?;
        let timing = cfg.timing_model();
        let array = cfg.array_config()?;
        Ok(Simulator {
            reward_ref_db: 10.0 * ((array.elements * cfg.comm.ue_elements) as f64).log10(),
            array,
            processor: cfg.radar_processor()?,
            t_isac: timing.radar_slots(codebook.len()),
            codebook,
            timing,
            cfg: cfg.clone(),
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn array(&self) -> &ArrayConfig {
        &self.array
    }

    pub fn codebook(&self) -> &BeamCodebook {
        &self.codebook
    }

    pub fn processor(&self) -> &RadarProcessor {
        &self.processor
    }

    pub fn timing(&self) -> &TimingModel {
        &self.timing
    }

    /// Radar search slots at the start of every UCB_ISAC (re)initialisation.
    pub fn t_isac(&self) -> u64 {
        self.t_isac
    }

    /// Scene time step and forecast divisor `T`.
    pub fn slot_period(&self) -> f64 {
        self.cfg.comm.slot_period
    }

    pub fn slots(&self) -> u64 {
        self.cfg.slots()
    }

    /// Draw the trial's scene and tabulate the downlink gain of every beam
    /// over the episode.
    pub fn trial(&self, index: usize) -> Result<Trial> {
        let tags = [purpose::SCENE, index as u64];
        let mut rng = rng::stream(self.cfg.seed, &tags);
        let scene = Scene::build(
            &self.cfg.scene_layout(),
            &self.processor.waveform,
            &self.codebook,
            rng::derive_key(self.cfg.seed, &tags),
            &mut rng,
        )?;
        let k = self.codebook.len();
        let slots = self.slots();
        let mut gains = Vec::with_capacity(slots as usize * k);
        for s in 0..slots {
            let now = self.scene_at(&scene, s)?;
            for &phi in self.codebook.angles() {
                gains.push(downlink_gain_db(&now, &self.array, phi, self.cfg.comm.ue_elements));
            }
        }
        Ok(Trial {
            index,
            scene,
            beams: k,
            gains,
        })
    }

    pub fn scene_at(&self, scene: &Scene, slot: u64) -> Result<Scene> {
        advance(scene, slot as f64 * self.slot_period())
    }

    /// Radar search over the whole codebook at `slot`.
    pub fn scan(&self, trial: &Trial, slot: u64) -> Result<RadarScan> {
        let now = self.scene_at(&trial.scene, slot)?;
        let seed = self.cfg.seed;
        let t = trial.index as u64;
        self.processor
            .scan(&now, &self.codebook, |k| rng::stream(seed, &[purpose::RADAR_NOISE, t, slot, k as u64]))
    }

    /// First slot at or after `from` where `beam`'s gain has fallen
    /// `drop_db` below its running peak since `from`.
    pub fn beam_exit_oracle(&self, trial: &Trial, beam: usize, from: u64, drop_db: f64) -> Option<u64> {
        let mut peak = f64::NEG_INFINITY;
        for s in from..trial.slots() {
            let g = trial.gains(s)[beam];
            peak = peak.max(g);
            if g < peak - drop_db {
                return Some(s);
            }
        }
        None
    }

    fn jitter(&self, trial: usize, snr_index: usize) -> Vec<f64> {
        let mut rng = rng::stream(self.cfg.seed, &[purpose::LINK_JITTER, trial as u64, snr_index as u64]);
        let sd = self.cfg.comm.jitter_db;
        (0..self.slots())
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                sd * z
            })
            .collect()
    }

    fn isac_state(&self, scan: &RadarScan) -> Result<BanditState> {
        if scan.subset.is_empty() {
            BanditState::full(self.codebook.len())
        } else {
            BanditState::new(scan.subset.indices.clone())
        }
    }

    /// One policy over one trial at one SNR point.
    pub fn run_episode(
        &self,
        trial: &Trial,
        policy: PolicyKind,
        snr_index: usize,
        keep_records: bool,
    ) -> Result<EpisodeResult> {
        let comm = &self.cfg.comm;
        let snr_db = *comm
            .snr_sweep_db
            .get(snr_index)
            .ok_or_else(|| Error::arg("snr_index", format!("{snr_index} outside the SNR sweep")))?;
        let k_all = self.codebook.len();
        let period = self.slot_period();
        let slots = self.slots();
        let jitter = self.jitter(trial.index, snr_index);
        let mut policy_rng = rng::stream(
            self.cfg.seed,
            &[purpose::POLICY, trial.index as u64, snr_index as u64, policy.tag()],
        );
        let radar = &self.cfg.radar;
        let mut restart = RestartPolicy::new(self.cfg.restart_for(policy))?;
        let mut lucb = Lucb::new(self.cfg.lucb.delta, self.cfg.lucb.epsilon);
        let mut tracker = SnrDropTracker::new(radar.snr_ewma_alpha, radar.snr_drop_db, 5);
        let mut regret = RegretTracker::new();

        let mut subset_sizes = Vec::new();
        let mut scan = None;
        let mut state = if policy == PolicyKind::UcbIsac {
            let sc = self.scan(trial, 0)?;
            subset_sizes.push(sc.subset.len());
            let st = self.isac_state(&sc)?;
            scan = Some(sc);
            st
        } else {
            BanditState::full(k_all)?
        };
        let mut scan_origin = 0u64;
        let mut leader: Option<usize> = None;
        let mut restarts = Vec::new();
        let mut exploration_slots = 0u64;
        let mut ber_sum = 0.0;
        let mut clamped = 0u64;
        let mut records = Vec::with_capacity(if keep_records { slots as usize } else { 0 });

        for s in 0..slots {
            if restart.maybe_restart(&mut state, s) {
                restarts.push(RestartEvent {
                    slot: s,
                    origin: scan_origin,
                    leader,
                });
                match policy {
                    PolicyKind::UcbIsac => {
                        let sc = self.scan(trial, s)?;
                        subset_sizes.push(sc.subset.len());
                        clamped += state.clamped;
                        state = self.isac_state(&sc)?;
                        scan = Some(sc);
                    }
                    PolicyKind::Lucb => lucb.reset(),
                    _ => {}
                }
                scan_origin = s;
                tracker.reset();
                leader = None;
            }

            let g = trial.gains(s);
            let best = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let reward = |snr: f64| comm.reward(snr - self.reward_ref_db);
            let best_w = reward(snr_db + best);
            let quality_of = |st: &BanditState, beam: usize| {
                st.position(beam)
                    .and_then(|i| ucb_quality(st.cumulative_reward[i], st.pulls[i], st.t).ok())
            };

            let (beam, phase, quality) = match policy {
                PolicyKind::Dbf => (Some(dbf_oracle_select(g)?), Phase::Oracle, None),
                PolicyKind::Random => (Some(random_select(k_all, &mut policy_rng)?), Phase::Random, None),
                PolicyKind::UcbSnr => {
                    let phase = if state.t <= state.len() as u64 {
                        Phase::RoundRobin
                    } else {
                        Phase::Exploit
                    };
                    let b = ucb_snr_select(&state);
                    (Some(b), phase, quality_of(&state, b))
                }
                PolicyKind::Lucb => {
                    let b = lucb.select(&state);
                    let phase = if lucb.committed().is_some() {
                        Phase::Exploit
                    } else {
                        Phase::Explore
                    };
                    (Some(b), phase, None)
                }
                PolicyKind::UcbIsac => match ucb_isac_select(&state, self.t_isac) {
                    IsacAction::Radar => (None, Phase::Radar, None),
                    IsacAction::Beam(b) => {
                        let phase = if state.t <= self.t_isac + state.len() as u64 {
                            Phase::RoundRobin
                        } else {
                            Phase::Exploit
                        };
                        (Some(b), phase, quality_of(&state, b))
                    }
                },
            };

            let (reward, ber) = match beam {
                None => {
                    state.skip();
                    regret.regret_step(best_w, 0.0);
                    (0.0, 0.5)
                }
                Some(b) => {
                    let snr = snr_db + g[b] + jitter[s as usize];
                    let w = reward(snr);
                    if matches!(policy, PolicyKind::UcbSnr | PolicyKind::UcbIsac | PolicyKind::Lucb) {
                        state.update(b, w)?;
                    }
                    regret.regret_step(best_w, reward(snr_db + g[b]));
                    if policy == PolicyKind::UcbIsac && phase == Phase::Exploit {
                        let lead = state.active_set[state.most_pulled()];
                        if leader != Some(lead) {
                            tracker.reset();
                            leader = Some(lead);
                        }
                        if b == lead {
                            tracker.update(snr);
                        }
                        if restart.kind == RestartKind::RspForecast {
                            let det = scan.as_ref().and_then(|sc| sc.subset.lead_detection(lead, radar.v_static));
                            let forecast = det.and_then(|d| {
                                estimate_t_infinity(
                                    d,
                                    self.codebook.angle(lead),
                                    self.codebook.beamwidth(),
                                    &tracker,
                                    period,
                                )
                                .ok()
                            });
                            let t_inf = match forecast {
                                Some(t) => Some(t),
                                None if tracker.dropped() => Some(period),
                                None => None,
                            };
                            if let Some(t) = t_inf {
                                restart.schedule(scan_origin, t, period);
                            }
                        }
                    }
                    (w, ber_from_snr(snr))
                }
            };
            if phase.is_exploration() {
                exploration_slots += 1;
            }
            ber_sum += ber;
            if keep_records {
                records.push(SlotRecord {
                    trial: trial.index,
                    snr_db,
                    policy,
                    slot: s,
                    phase,
                    beam,
                    reward,
                    ber,
                    cumulative_ber: ber_sum / (s + 1) as f64,
                    regret: regret.cumulative(),
                    quality,
                });
            }
        }

        Ok(EpisodeResult {
            policy,
            trial: trial.index,
            snr_index,
            snr_db,
            final_cumulative_ber: ber_sum / slots as f64,
            total_regret: regret.cumulative(),
            exploration_slots,
            exploration_time: exploration_slots as f64 * self.timing.exploration_unit(k_all),
            restarts,
            subset_sizes,
            clamped: clamped + state.clamped,
            records,
        })
    }
}

/// Build the simulator and trial, then run a single episode.
pub fn run_episode(
    cfg: &ScenarioConfig,
    policy: PolicyKind,
    trial: usize,
    snr_index: usize,
    keep_records: bool,
) -> Result<EpisodeResult> {
    let sim = Simulator::new(cfg)?;
    let t = sim.trial(trial)?;
    sim.run_episode(&t, policy, snr_index, keep_records)
}
