use num_complex::Complex64;
use proptest::prelude::*;

use isac_mab::array::{make_codebook, steering_vector, two_way_gain, ArrayConfig};
use isac_mab::bandit::{ucb_snr_select, BanditState, RegretTracker};
use isac_mab::link::{ber_from_snr, cumulative_ber, throughput, CommConfig};
use isac_mab::rng::stream;
use isac_mab::rsp::{geometric_t_infinity, noise_projector};
use isac_mab::scene::{synthesize_beam, MobileUser, Scene};
use isac_mab::timing::TimingModel;
use isac_mab::waveform::{aperiodic_autocorrelation, generate_golay_pair, to_complex, RadarWaveform};

fn static_scene(users: &[[f64; 2]]) -> Scene {
    Scene {
        users: users
            .iter()
            .enumerate()
            .map(|(i, &p)| MobileUser::point(i, p, [0.0, 0.0]))
            .collect(),
        multipaths: Vec::new(),
        clutter: Vec::new(),
        radar_snr_db: f64::INFINITY,
        rng_seed: 0,
    }
}

proptest! {
    #[test]
    fn golay_pairs_are_complementary(order in 1u32..=11) {
        let p = generate_golay_pair(order).unwrap();
        let ra = aperiodic_autocorrelation(&to_complex(p.a())).unwrap();
        let rb = aperiodic_autocorrelation(&to_complex(p.b())).unwrap();
        let n = p.len();
        for l in 0..ra.len() {
            let s = ra[l] + rb[l];
            if l == n - 1 {
                prop_assert!((s.re - 2.0 * n as f64).abs() < 1e-9);
            } else {
                prop_assert!(s.norm() < 1e-9);
            }
        }
    }

    #[test]
    fn autocorrelation_is_conjugate_symmetric(
        x in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..40)
    ) {
        let x: Vec<Complex64> = x.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let r = aperiodic_autocorrelation(&x).unwrap();
        let m = r.len();
        for l in 0..m {
            prop_assert!((r[l] - r[m - 1 - l].conj()).norm() < 1e-9);
        }
    }

    #[test]
    fn steering_entries_have_unit_modulus(phi in -1.5f64..1.5) {
        let arr = ArrayConfig::standard();
        for e in steering_vector(&arr, phi) {
            prop_assert!((e.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_way_gain_is_bounded_by_array_size(a in -1.5f64..1.5, b in -1.5f64..1.5) {
        let arr = ArrayConfig::standard();
        prop_assert!(two_way_gain(&arr, a, b).norm() <= arr.elements as f64 + 1e-9);
    }

    #[test]
    fn codebooks_are_symmetric(count in 1usize..100, fov_deg in 10.0f64..85.0) {
        let cb = make_codebook(fov_deg.to_radians(), count).unwrap();
        let k = cb.len();
        for i in 0..k {
            prop_assert!((cb.angle(i) + cb.angle(k - 1 - i)).abs() < 1e-12);
        }
    }

    #[test]
    fn noiseless_synthesis_is_linear(
        x1 in -4.0f64..4.0, y1 in 3.0f64..20.0,
        x2 in -4.0f64..4.0, y2 in 3.0f64..20.0,
    ) {
        let w = RadarWaveform::standard();
        let arr = ArrayConfig::standard();
        let cb = make_codebook(80f64.to_radians(), 41).unwrap();
        let mut rng = stream(0, &[]);
        let k = cb.nearest(x1.atan2(y1));
        let both = synthesize_beam(&static_scene(&[[x1, y1], [x2, y2]]), &w, &arr, &cb, k, &mut rng).unwrap();
        let one = synthesize_beam(&static_scene(&[[x1, y1]]), &w, &arr, &cb, k, &mut rng).unwrap();
        let two = synthesize_beam(&static_scene(&[[x2, y2]]), &w, &arr, &cb, k, &mut rng).unwrap();
        for p in 0..w.packets {
            for n in 0..w.fast_time_len() {
                prop_assert!((both.get(n, p) - one.get(n, p) - two.get(n, p)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn noise_projector_is_idempotent(
        y in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
        rank in 1usize..4,
    ) {
        let y: Vec<Complex64> = y.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        prop_assume!(y.iter().map(|v| v.norm_sqr()).sum::<f64>() > 1e-3);
        let pi = noise_projector(&y, rank).unwrap();
        let pp = pi.mul(&pi);
        let n = pi.dim();
        let mut err = 0.0;
        for i in 0..n {
            for j in 0..n {
                err += (pp[(i, j)] - pi[(i, j)]).norm_sqr();
            }
        }
        prop_assert!(err.sqrt() < 1e-8);
    }

    #[test]
    fn t_infinity_is_monotone(r in 1.0f64..50.0, v in 0.1f64..20.0, dr in 0.1f64..10.0, dv in 0.1f64..10.0) {
        let bw = 4f64.to_radians();
        let base = geometric_t_infinity(r, v, 0.1, bw).unwrap();
        prop_assert!(geometric_t_infinity(r + dr, v, 0.1, bw).unwrap() > base);
        prop_assert!(geometric_t_infinity(r, v + dv, 0.1, bw).unwrap() < base);
    }

    #[test]
    fn bandit_counts_match_pulls(
        rewards in prop::collection::vec(0.0f64..1.0, 1..300),
        k in 1usize..12,
    ) {
        let mut st = BanditState::full(k).unwrap();
        for (i, &w) in rewards.iter().enumerate() {
            let b = ucb_snr_select(&st);
            if i < k {
                prop_assert_eq!(b, i);
            }
            st.update(b, w).unwrap();
            prop_assert!(st.cumulative_reward.iter().all(|&s| s >= 0.0));
        }
        prop_assert_eq!(st.pulls.iter().sum::<u64>(), rewards.len() as u64);
        prop_assert_eq!(st.total_pulls(), rewards.len() as u64);
    }

    #[test]
    fn regret_is_nondecreasing(steps in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..200)) {
        let mut reg = RegretTracker::new();
        for &(a, b) in &steps {
            reg.regret_step(a.max(b), a.min(b));
        }
        let tr = reg.trace();
        prop_assert!(tr.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(tr[0] >= 0.0);
    }

    #[test]
    fn ber_is_strictly_decreasing(a in -30.0f64..15.0, d in 0.01f64..5.0) {
        prop_assert!(ber_from_snr(a + d) < ber_from_snr(a));
    }

    #[test]
    fn throughput_stays_within_peak(ber in prop::collection::vec(1e-12f64..0.5, 1..50)) {
        let comm = CommConfig::default();
        let cum = cumulative_ber(&ber).unwrap();
        let tp = throughput(*cum.last().unwrap(), &comm);
        prop_assert!(tp > 0.0 && tp < comm.peak_rate());
        prop_assert_eq!(throughput(0.0, &comm), comm.peak_rate());
    }

    #[test]
    fn exploration_time_counts_slots(k in 2usize..128, frac in 0.0f64..1.0) {
        let m = TimingModel::default();
        let k_sub = ((k as f64 * frac) as usize).max(1);
        let full = m.exploration_time_ucb_snr(k).unwrap();
        let isac = m.exploration_time_ucb_isac(k, k_sub).unwrap();
        let unit = m.exploration_unit(k);
        prop_assert!((isac - (m.radar_slots(k) as f64 + k_sub as f64) * unit).abs() < 1e-12);
        prop_assert!((full - k as f64 * unit).abs() < 1e-12);
    }
}
