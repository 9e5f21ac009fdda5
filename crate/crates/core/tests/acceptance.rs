//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process exits 0 regardless of the outcome so that the rest of the test
//! suite keeps running; set `ACCEPTANCE_STRICT=1` to exit 1 on any FAIL.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use isac_mab::array::ArrayConfig;
use isac_mab::bandit::{ucb_snr_select, BanditState, PolicyKind, RegretTracker, RestartKind};
use isac_mab::harness::{run_sweep, run_to_dir, MetricsTrace, ScenarioConfig, ScenarioKind, Simulator};
use isac_mab::rng::stream;
use isac_mab::rsp::{
    detect_with, music_doppler, peak_to_max_sidelobe_db, peak_to_median_sidelobe_db, MusicConfig, RadarProcessor,
};
use isac_mab::scene::{synthesize_beam, MobileUser, RadarDataCube, Scene, TargetModel};
use isac_mab::timing::TimingModel;
use isac_mab::waveform::{
    aperiodic_autocorrelation, generate_golay_pair, golay_pair_from_delays, to_complex, RadarWaveform,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rate(hits: usize, n: usize) -> f64 {
    hits as f64 / n as f64
}

fn standard_processor() -> RadarProcessor {
    ScenarioConfig::default().radar_processor().expect("default radar config")
}

fn point_scene(users: &[([f64; 2], [f64; 2])], snr_db: f64) -> Scene {
    Scene {
        users: users
            .iter()
            .enumerate()
            .map(|(i, &(p, v))| MobileUser::point(i, p, v))
            .collect(),
        multipaths: Vec::new(),
        clutter: Vec::new(),
        radar_snr_db: snr_db,
        rng_seed: 0,
    }
}

fn delay_bin(range: f64, w: &RadarWaveform) -> usize {
    (2.0 * range / isac_mab::array::SPEED_OF_LIGHT / w.sample_period).round() as usize
}

fn c1_golay() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for order in 1..=10 {
        let p = generate_golay_pair(order).unwrap();
        let ra = aperiodic_autocorrelation(&to_complex(p.a())).unwrap();
        let rb = aperiodic_autocorrelation(&to_complex(p.b())).unwrap();
        let n = p.len();
        for l in 0..ra.len() {
            if l != n - 1 {
                worst = worst.max((ra[l] + rb[l]).norm());
            }
        }
    }
    let t = start.elapsed();
    outcome(
        worst < 1e-9 && t < Duration::from_secs(1),
        format!("max off-peak |Raa+Rbb| = {worst:.1e} over orders 1-10, {t:.2?}"),
    )
}

fn c2_pslr() -> Outcome {
    let start = Instant::now();
    let proc = standard_processor();
    let w = &proc.waveform;
    let arr = ArrayConfig::standard();
    let cb = ScenarioConfig::default().codebook().unwrap();
    let guard = proc.detect.guard_bins;

    let noiseless = point_scene(&[([0.0, 10.0], [0.0, 0.0])], f64::INFINITY);
    let cube = synthesize_beam(&noiseless, w, &arr, &cb, 20, &mut stream(0, &[])).unwrap();
    let power = proc.filter().apply(&cube).unwrap().power();
    let clean = peak_to_max_sidelobe_db(&power, guard).unwrap();

    let noisy = point_scene(&[([0.0, 10.0], [0.0, 0.0])], 10.0);
    let cube = synthesize_beam(&noisy, w, &arr, &cb, 20, &mut stream(2, &[0])).unwrap();
    let power = proc.filter().apply(&cube).unwrap().power();
    let at10 = peak_to_max_sidelobe_db(&power, guard).unwrap();
    let median10 = peak_to_median_sidelobe_db(&power, guard).unwrap();

    let seeds = 1000;
    let empty = point_scene(&[], 10.0);
    let mut noise_ok = 0;
    for s in 0..seeds {
        let cube = synthesize_beam(&empty, w, &arr, &cb, 20, &mut stream(2, &[1, s])).unwrap();
        let power = proc.filter().apply(&cube).unwrap().power();
        if peak_to_max_sidelobe_db(&power, guard).unwrap() < 13.0 {
            noise_ok += 1;
        }
    }

    let other = golay_pair_from_delays(&[4, 64, 1, 128, 16, 256, 2, 32, 8], &[1, -1, 1, 1, -1, 1, -1, 1, 1]).unwrap();
    let q = arr.elements as f64;
    let sd = (q * q * 0.1 / 2.0).sqrt();
    let bin = delay_bin(10.0, w);
    let mut mismatch_ok = 0;
    for s in 0..seeds {
        let mut rng = stream(2, &[2, s]);
        let mut cube = RadarDataCube::zeros(20, w.fast_time_len(), w.packets);
        for p in 0..w.packets {
            let row = cube.packet_mut(p);
            for (i, &c) in other.a().iter().enumerate() {
                row[bin + i] += Complex64::new(q * c, 0.0);
            }
            for x in row.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *x += Complex64::new(re * sd, im * sd);
            }
        }
        let power = proc.filter().apply(&cube).unwrap().power();
        if peak_to_max_sidelobe_db(&power, guard).unwrap() < 13.0 {
            mismatch_ok += 1;
        }
    }
    let t = start.elapsed();
    let in_band = |x: f64| (x - 27.0).abs() <= 3.0;
    let pass = in_band(clean)
        && in_band(at10)
        && rate(noise_ok, seeds as usize) >= 0.99
        && rate(mismatch_ok, seeds as usize) >= 0.99
        && t < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "peak/max-sidelobe {clean:.2} dB noiseless, {at10:.2} dB at 10 dB (target 27 +/- 3; median statistic {median10:.1} dB); \
             <13 dB: noise-only {:.1}%, mismatched preamble {:.1}%; {t:.2?}",
            100.0 * rate(noise_ok, seeds as usize),
            100.0 * rate(mismatch_ok, seeds as usize)
        ),
    )
}

fn c3_detector() -> Outcome {
    let start = Instant::now();
    let proc = standard_processor();
    let w = &proc.waveform;
    let arr = ArrayConfig::standard();
    let cb = ScenarioConfig::default().codebook().unwrap();
    let trials = 2000;
    let target = point_scene(&[([0.0, 10.0], [0.0, 3.0])], 10.0);
    let bin = delay_bin(10.0, w);
    let mut hits = 0;
    for s in 0..trials {
        let cube = synthesize_beam(&target, w, &arr, &cb, 20, &mut stream(3, &[0, s])).unwrap();
        let rp = proc.filter().apply(&cube).unwrap();
        let peaks = detect_with(&rp, &proc.detect).unwrap();
        if peaks.iter().any(|p| p.range_bin.abs_diff(bin) <= 1) {
            hits += 1;
        }
    }
    let empty = point_scene(&[], 10.0);
    let mut alarms = 0;
    for s in 0..trials {
        let cube = synthesize_beam(&empty, w, &arr, &cb, 20, &mut stream(3, &[1, s])).unwrap();
        let rp = proc.filter().apply(&cube).unwrap();
        if !detect_with(&rp, &proc.detect).unwrap().is_empty() {
            alarms += 1;
        }
    }
    let t = start.elapsed();
    let pd = rate(hits, trials as usize);
    let pfa = rate(alarms, trials as usize);
    outcome(
        pd >= 0.995 && pfa <= 0.01 && t < Duration::from_secs(60),
        format!("Pd {:.2}% Pfa {:.2}% over {trials} trials each, {t:.2?}", 100.0 * pd, 100.0 * pfa),
    )
}

fn c4_music() -> Outcome {
    let proc = standard_processor();
    let w = &proc.waveform;
    let arr = ArrayConfig::standard();
    let cb = ScenarioConfig::default().codebook().unwrap();
    let cfg = MusicConfig::default();
    let seeds = 200u64;
    let single = point_scene(&[([0.0, 10.0], [0.0, 3.0])], 10.0);
    let bin = delay_bin(10.0, w);
    let mut exact = 0;
    for s in 0..seeds {
        let cube = synthesize_beam(&single, w, &arr, &cb, 20, &mut stream(4, &[0, s])).unwrap();
        let rp = proc.filter().apply(&cube).unwrap();
        let (f, _) = music_doppler(&rp, bin, &cfg, w.pri).unwrap();
        if f == 1200.0 {
            exact += 1;
        }
    }
    let pair = point_scene(&[([0.0, 10.0], [0.0, 3.0]), ([0.0, 14.0], [0.0, 2.0])], 10.0);
    let bins = [delay_bin(10.0, w), delay_bin(14.0, w)];
    let mut resolved = 0;
    for s in 0..seeds {
        let cube = synthesize_beam(&pair, w, &arr, &cb, 20, &mut stream(4, &[1, s])).unwrap();
        let rp = proc.filter().apply(&cube).unwrap();
        let (f1, _) = music_doppler(&rp, bins[0], &cfg, w.pri).unwrap();
        let (f2, _) = music_doppler(&rp, bins[1], &cfg, w.pri).unwrap();
        if f1 == 1200.0 && f2 == 800.0 {
            resolved += 1;
        }
    }
    let p1 = rate(exact, seeds as usize);
    let p2 = rate(resolved, seeds as usize);
    outcome(
        p1 >= 0.99 && p2 >= 0.99,
        format!(
            "3 m/s -> 1200 Hz exactly in {:.1}% of {seeds} seeds; 3 and 2 m/s targets both on their grid cells in {:.1}%",
            100.0 * p1,
            100.0 * p2
        ),
    )
}

fn c5_throughput(trace: &MetricsTrace, elapsed: Duration) -> Outcome {
    let tp: Vec<f64> = PolicyKind::ALL
        .iter()
        .map(|&p| trace.mean_throughput(p).unwrap() / 1e6)
        .collect();
    let ordered = tp.windows(2).all(|w| w[0] > w[1]);
    let within = |x: f64, target: f64| (x - target).abs() <= 0.15 * target;
    let pass = ordered
        && (tp[0] - 10.0).abs() <= 0.05
        && within(tp[1], 9.42)
        && within(tp[3], 8.22)
        && elapsed < Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "Mbps DBF {:.3} > UCB_ISAC {:.3} > LUCB {:.3} > UCB_SNR {:.3} > Random {:.3} (ordered: {ordered}); {elapsed:.1?}",
            tp[0], tp[1], tp[2], tp[3], tp[4]
        ),
    )
}

/// Per-trial final cumulative BER averaged over the SNR sweep.
fn per_trial_ber(trace: &MetricsTrace, policy: PolicyKind, trials: usize) -> Vec<f64> {
    let mut acc = vec![(0.0, 0usize); trials];
    for e in trace.episodes_of(policy) {
        acc[e.trial].0 += e.final_cumulative_ber;
        acc[e.trial].1 += 1;
    }
    acc.into_iter().map(|(s, n)| s / n as f64).collect()
}

fn isac_wins(trace: &MetricsTrace, trials: usize) -> usize {
    let isac = per_trial_ber(trace, PolicyKind::UcbIsac, trials);
    let snr = per_trial_ber(trace, PolicyKind::UcbSnr, trials);
    isac.iter().zip(&snr).filter(|(a, b)| a < b).count()
}

fn quasi_config() -> ScenarioConfig {
    ScenarioConfig {
        policies: vec![PolicyKind::UcbIsac, PolicyKind::UcbSnr],
        ..ScenarioConfig::quasi_lateral()
    }
}

fn c6_realignment(cfg: &ScenarioConfig, trace: &MetricsTrace) -> Outcome {
    let sim = Simulator::new(cfg).unwrap();
    let drop = cfg.radar.snr_drop_db;
    let mut checked = 0;
    let mut close = 0;
    let mut worst = 0i64;
    let mut first_slots = Vec::new();
    for t in 0..cfg.trials {
        let trial = sim.trial(t).unwrap();
        for e in trace.episodes_of(PolicyKind::UcbIsac).filter(|e| e.trial == t) {
            let Some(ev) = e.restarts.first() else {
                checked += 1;
                continue;
            };
            first_slots.push(ev.slot as f64);
            checked += 1;
            let Some(beam) = ev.leader else { continue };
            let Some(oracle) = sim.beam_exit_oracle(&trial, beam, ev.origin, drop) else {
                continue;
            };
            let d = ev.slot as i64 - oracle as i64;
            if d.abs() > worst.abs() {
                worst = d;
            }
            if d.abs() <= 10 {
                close += 1;
            }
        }
    }
    let mean_first = first_slots.iter().sum::<f64>() / first_slots.len().max(1) as f64;
    let slot_ok = (mean_first - 425.0).abs() <= 0.2 * 425.0;
    let wins = isac_wins(trace, cfg.trials);
    let pass = checked > 0 && close == checked && slot_ok && wins >= 14;
    outcome(
        pass,
        format!(
            "first restart within +/-10 slots of beam-exit oracle in {close}/{checked} episodes (worst offset {worst}); \
             mean first restart slot {mean_first:.0} vs 425 +/- 20%: {slot_ok}; UCB_ISAC < UCB_SNR in {wins}/{} trials",
            cfg.trials
        ),
    )
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn c7_clutter(noisy: &MetricsTrace, cfg: &ScenarioConfig) -> Outcome {
    let clean_cfg = ScenarioConfig {
        radar: isac_mab::harness::config::RadarSection {
            snr_db: f64::INFINITY,
            ..cfg.radar.clone()
        },
        ..cfg.clone()
    };
    let sim = Simulator::new(&clean_cfg).unwrap();
    let mut checked = 0;
    let mut violations = 0;
    for t in 0..cfg.trials {
        let trial = sim.trial(t).unwrap();
        let mut without = trial.clone();
        without.scene.clutter.clear();
        for slot in (0..clean_cfg.slots()).step_by(1000) {
            let with = sim.scan(&trial, slot).unwrap();
            let base = sim.scan(&without, slot).unwrap();
            checked += 1;
            if !is_subset(&with.subset.indices, &base.subset.indices) {
                violations += 1;
            }
        }
    }
    let wins = isac_wins(noisy, cfg.trials);
    outcome(
        violations == 0 && wins >= 14,
        format!(
            "noiseless scans with 2 clutter scatterers: {violations} clutter-driven beams in {checked} scans; \
             UCB_ISAC < UCB_SNR in {wins}/{} noisy trials",
            cfg.trials
        ),
    )
}

fn c8_timing() -> Outcome {
    let m = TimingModel::default();
    let snr = m.exploration_time_ucb_snr(32).unwrap();
    let k_sub = 8;
    let isac = m.exploration_time_ucb_isac(32, k_sub).unwrap();
    let reduction = 1.0 - isac / snr;

    let cfg = ScenarioConfig {
        policies: vec![PolicyKind::UcbIsac, PolicyKind::UcbSnr],
        codebook: isac_mab::harness::config::CodebookSection {
            beams: 32,
            fov_deg: 64.0,
        },
        ..ScenarioConfig::default()
    };
    let trace = run_sweep(&cfg, false).unwrap();
    let sim = Simulator::new(&cfg).unwrap();
    let slots = cfg.slots();
    let mean_sub = {
        let v: Vec<usize> = trace.episodes_of(PolicyKind::UcbIsac).map(|e| e.subset_sizes[0]).collect();
        (v.iter().sum::<usize>() as f64 / v.len() as f64).round() as usize
    };
    let f_isac = m
        .data_fraction(PolicyKind::UcbIsac, 32, mean_sub, slots, sim.t_isac(), mean_sub as u64)
        .unwrap();
    let f_snr = m.data_fraction(PolicyKind::UcbSnr, 32, 32, slots, 0, 32).unwrap();
    let adj_isac = trace.mean_throughput(PolicyKind::UcbIsac).unwrap() * f_isac;
    let adj_snr = trace.mean_throughput(PolicyKind::UcbSnr).unwrap() * f_snr;
    let ratio = adj_isac / adj_snr;
    let pass = (snr - 0.128).abs() < 1e-12
        && (isac - 0.084).abs() <= m.exploration_unit(32) + 1e-12
        && reduction >= 0.30
        && ratio >= 1.3;
    outcome(
        pass,
        format!(
            "UCB_SNR {:.1} ms, UCB_ISAC {:.1} ms ({} radar slots + {k_sub}), reduction {:.1}%; \
             timing-adjusted throughput {:.2} / {:.2} Mbps = {ratio:.3}",
            snr * 1e3,
            isac * 1e3,
            m.radar_slots(32),
            100.0 * reduction,
            adj_isac / 1e6,
            adj_snr / 1e6
        ),
    )
}

fn ucb_regret_ratio(seeds: u64, horizon: usize) -> f64 {
    let means = [0.7, 0.4];
    let mut sum = 0.0;
    for s in 0..seeds {
        let mut rng = stream(9, &[s]);
        let mut st = BanditState::full(2).unwrap();
        let mut reg = RegretTracker::new();
        for _ in 0..2 * horizon {
            let b = ucb_snr_select(&st);
            let w = if rng.random::<f64>() < means[b] { 1.0 } else { 0.0 };
            st.update(b, w).unwrap();
            reg.regret_step(means[0], means[b]);
        }
        let tr = reg.trace();
        sum += tr[2 * horizon - 1] / tr[horizon - 1];
    }
    sum / seeds as f64
}

fn mean_regret(trace: &MetricsTrace, p: PolicyKind) -> f64 {
    let v: Vec<f64> = trace.episodes_of(p).map(|e| e.total_regret).collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn c9_regret(scenarios: &[(&str, &MetricsTrace)]) -> Outcome {
    let ratio = ucb_regret_ratio(50, 1000);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, tr) in scenarios {
        let a = mean_regret(tr, PolicyKind::UcbIsac);
        let b = mean_regret(tr, PolicyKind::UcbSnr);
        ok &= a <= b;
        parts.push(format!("{name} {a:.0}/{b:.0}"));
    }
    outcome(
        ratio < 1.8 && ok,
        format!(
            "UCB regret(2000)/regret(1000) = {ratio:.3}; mean regret UCB_ISAC/UCB_SNR: {}",
            parts.join(", ")
        ),
    )
}

fn c10_determinism() -> Outcome {
    let cfg = ScenarioConfig::default();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_to_dir(&cfg, a.path()).unwrap();
    run_to_dir(&cfg, b.path()).unwrap();
    let mut same = true;
    let mut bytes = 0;
    for f in ["slots.csv", "summary.csv"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        bytes += x.len();
        same &= x == y;
    }
    outcome(same, format!("two full stationary sweeps, {bytes} bytes of CSV, identical: {same}"))
}

fn report(n: usize, o: &Outcome, fails: &mut usize) {
    if !o.pass {
        *fails += 1;
    }
    println!("criterion {n:>2}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
}

fn with_target(cfg: &ScenarioConfig, target: TargetModel) -> ScenarioConfig {
    ScenarioConfig {
        target,
        ..cfg.clone()
    }
}

fn main() {
    let mut fails = 0;
    report(1, &c1_golay(), &mut fails);
    report(2, &c2_pslr(), &mut fails);
    report(3, &c3_detector(), &mut fails);
    report(4, &c4_music(), &mut fails);

    let stationary = ScenarioConfig::default();
    let start = Instant::now();
    let st_trace = run_sweep(&stationary, false).unwrap();
    report(5, &c5_throughput(&st_trace, start.elapsed()), &mut fails);

    let quasi = quasi_config();
    assert_eq!(quasi.restart_for(PolicyKind::UcbSnr), RestartKind::Periodic { interval: 2000 });
    let q_trace = run_sweep(&quasi, false).unwrap();
    report(6, &c6_realignment(&quasi, &q_trace), &mut fails);

    let clutter = ScenarioConfig { clutter: 2, ..quasi.clone() };
    let c_trace = run_sweep(&clutter, false).unwrap();
    report(7, &c7_clutter(&c_trace, &clutter), &mut fails);

    report(8, &c8_timing(), &mut fails);

    let pair = |c: ScenarioConfig| ScenarioConfig {
        policies: vec![PolicyKind::UcbIsac, PolicyKind::UcbSnr],
        ..c
    };
    let extra: Vec<(&str, ScenarioConfig)> = vec![
        ("stationary pedestrian", pair(with_target(&stationary, TargetModel::Pedestrian))),
        ("stationary car", pair(with_target(&stationary, TargetModel::Car))),
        ("quasi pedestrian", with_target(&quasi, TargetModel::Pedestrian)),
        ("quasi car", with_target(&quasi, TargetModel::Car)),
        (
            "quasi 81 beams",
            ScenarioConfig {
                codebook: isac_mab::harness::config::CodebookSection {
                    beams: 81,
                    ..quasi.codebook.clone()
                },
                ..quasi.clone()
            },
        ),
        ("quasi 3 multipaths", ScenarioConfig { multipaths: 3, ..quasi.clone() }),
    ];
    let extra_traces: Vec<(&str, MetricsTrace)> = extra
        .iter()
        .map(|(n, c)| (*n, run_sweep(c, false).unwrap()))
        .collect();
    let mut scenarios: Vec<(&str, &MetricsTrace)> = vec![
        ("stationary point", &st_trace),
        ("quasi point", &q_trace),
        ("quasi 2 clutter", &c_trace),
    ];
    scenarios.extend(extra_traces.iter().map(|(n, t)| (*n, t)));
    report(9, &c9_regret(&scenarios), &mut fails);

    report(10, &c10_determinism(), &mut fails);

    assert_eq!(ScenarioKind::default(), ScenarioKind::StationaryRadial);
    println!("{} of 10 criteria passed", 10 - fails);
    if fails > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
