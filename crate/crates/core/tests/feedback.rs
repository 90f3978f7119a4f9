use harqsim_core::pucch::{decode_format1a, encode_format1a, AckNackDecision, FeedbackStandard, LtePucchConfig, NrPucchConfig};
use harqsim_core::rng::{Domain, SeedTree};
use harqsim_core::sim::{received_grid, unit_noise, FeedbackLink};
use harqsim_core::wifi::{build_ack_frame, wifi_decode, wifi_encode};
use harqsim_core::Complex64;

fn noise_only_dtx_rate(standard: FeedbackStandard, trials: u64) -> f64 {
    let tree = SeedTree::new(77);
    let link = FeedbackLink::new(standard, &LtePucchConfig::default(), &NrPucchConfig::default(), &tree, 0);
    let tx = link.encode(1).unwrap();
    let zero = Complex64::new(0.0, 0.0);
    let dtx = (0..trials)
        .filter(|&t| {
            let noise = unit_noise(tx.cells().len(), &mut tree.stream(Domain::Test, &[t]));
            let rx = received_grid(&tx, zero, &noise, 1.0);
            link.receive(&rx).unwrap() == AckNackDecision::Dtx
        })
        .count();
    dtx as f64 / trials as f64
}

// Abramowitz & Stegun 7.1.26, |error| < 1.5e-7.
fn erf(x: f64) -> f64 {
    let t = 1.0 / (1.0 + 0.327_591_1 * x.abs());
    let poly = t * (0.254_829_592
        + t * (-0.284_496_736 + t * (1.421_413_741 + t * (-1.453_152_027 + t * 1.061_405_429))));
    (1.0 - poly * (-x * x).exp()).copysign(x)
}

/// P(|r - 1|^2 < tau) for r ~ CN(0, v), by quadrature over the real axis.
fn disk_mass(tau: f64, v: f64) -> f64 {
    let s = (v / 2.0).sqrt();
    let rad = tau.sqrt();
    let n = 20_000;
    let dx = 2.0 * rad / n as f64;
    (0..n)
        .map(|i| {
            let x = 1.0 - rad + (i as f64 + 0.5) * dx;
            let h = (tau - (x - 1.0).powi(2)).max(0.0).sqrt();
            let pdf = (-(x * x) / (2.0 * s * s)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt());
            pdf * erf(h / (s * std::f64::consts::SQRT_2)) * dx
        })
        .sum()
}

#[test]
fn lte_threshold_on_pure_noise_matches_analytic_rate() {
    // Unit channel supplied to the detector, so r = sum(y s*) / sum|s|^2 is
    // CN(0, 1/96) and a bit is declared when r falls in either disk around +-1.
    let cfg = LtePucchConfig::default();
    let tree = SeedTree::new(78);
    let tx = encode_format1a(1, &cfg).unwrap();
    let unit = vec![Complex64::new(1.0, 0.0); 14];
    let trials = 20_000u64;
    let dtx = (0..trials)
        .filter(|&t| {
            let noise = unit_noise(tx.cells().len(), &mut tree.stream(Domain::Test, &[t]));
            let rx = received_grid(&tx, Complex64::new(0.0, 0.0), &noise, 1.0);
            decode_format1a(&rx, &cfg, &unit).unwrap() == AckNackDecision::Dtx
        })
        .count();
    let rate = dtx as f64 / trials as f64;
    let want = 1.0 - 2.0 * disk_mass(cfg.threshold, 1.0 / 96.0);
    let sd = (want * (1.0 - want) / trials as f64).sqrt();
    println!("LTE PUCCH DTX on noise, unit channel: {rate:.4} (analytic {want:.4})");
    assert!((rate - want).abs() < 4.0 * sd, "{rate} vs {want}");
}

#[test]
fn lte_pure_noise_with_estimated_channel() {
    // Dividing by a channel estimated from noise removes the scale, so the
    // end-to-end DTX rate is much lower; it must still be well away from zero.
    let rate = noise_only_dtx_rate(FeedbackStandard::Lte, 5_000);
    println!("LTE PUCCH end-to-end DTX on noise: {rate:.4}");
    assert!(rate > 0.2, "DTX rate {rate}");
}

#[test]
fn nr_pure_noise_false_detect_baseline() {
    // Unequalised white noise gives P(c >= t) = exp(-N t^2) with N = 84 cells;
    // the equalised statistic must stay in the same small-probability regime.
    let false_detect = 1.0 - noise_only_dtx_rate(FeedbackStandard::Nr, 20_000);
    let white = (-84.0f64 * 0.22 * 0.22).exp();
    println!("NR PUCCH false-detect on noise: {false_detect:.4} (white-noise reference {white:.4})");
    assert!(false_detect < 0.1, "false detect {false_detect}");
}

#[test]
fn wifi_all_zero_llrs_fail_fcs() {
    let frame = build_ack_frame([0x02, 0, 0, 0, 0, 1]);
    let n = wifi_encode(&frame).len() * 2;
    let (_, ok) = wifi_decode(&vec![0.0; n]).unwrap();
    assert!(!ok);
}
