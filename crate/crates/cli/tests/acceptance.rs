//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured runtime (visible with `cargo test --test acceptance --
//! --nocapture`). Budgets are asserted.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superlab_core::energy_analysis::{energy_bound_hw0, spectral_energy, windowed_energy};
use superlab_core::numerics::{
    hermite_function, legendre_with_derivatives, LogComplex, QuadratureRule,
};
use superlab_core::oscillator::{
    build_sequence_state, hermite_identity_sides, local_energy, super_region, FrequencyScaling,
    OscillatorConfig,
};
use superlab_core::rotor::{local_l2, local_l2_generic, RotorState};
use superlab_core::time_evolution::{
    fig5_trace, first_order_approx, hn_time, local_time_energy, resummed_prefactor_ln,
    resummed_series,
};
use superlab_core::weak_value::{
    detect_super_regions, hamiltonian_op, sum_rule_check, weak_value_field, BandLimitedState,
    Basis, ObservableProfile,
};

fn report(criterion: u32, name: &str, detail: String, started: Instant, budget_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("[acceptance] criterion {criterion} ({name}): PASS ({detail}; {elapsed:.2}s)");
    assert!(
        elapsed < budget_s,
        "criterion {criterion} exceeded its {budget_s}s budget: {elapsed:.2}s"
    );
}

#[test]
fn criterion_01_identity_suite() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0001);
    let mut worst: f64 = 0.0;
    for n in 1..=12u32 {
        for _ in 0..20 {
            let a = rng.gen_range(-2.0..2.0);
            let b = rng.gen_range(-2.0..2.0);
            let (lhs, rhs) = hermite_identity_sides(n, a, b);
            let scale = rhs.norm();
            let err = (lhs - rhs).norm();
            let measured = if scale < 1e-12 { err } else { err / scale };
            assert!(
                measured < 1e-9,
                "N={n} a={a} b={b}: error {measured:e}"
            );
            worst = worst.max(measured);
        }
    }
    report(1, "identity suite", format!("240 draws, worst error {worst:.2e}"), t0, 1.0);
}

#[test]
fn criterion_02_eigenstate_fixed_point() {
    let t0 = Instant::now();
    // Oscillator n = 0..10: the Hamiltonian weak value built from the
    // derivative-recurrence evaluator equals ω(n + 1/2) off the nodes.
    let mut worst: f64 = 0.0;
    for n in 0..=10usize {
        let mut coeffs = vec![LogComplex::ZERO; n + 1];
        coeffs[n] = LogComplex::ONE;
        let eig: Vec<f64> = (0..=n).map(|j| j as f64 + 0.5).collect();
        let st =
            BandLimitedState::new(Basis::Oscillator, coeffs, eig, (0.5, n as f64 + 0.5)).unwrap();
        let ev = st.evaluator();
        let op = hamiltonian_op(1.0, |x| 0.5 * x * x);
        let want = n as f64 + 0.5;
        let mut checked = 0;
        let mut i = 0;
        while checked < 100 {
            let x = -4.0 + 8.0 * (i as f64) / 499.0;
            i += 1;
            assert!(i <= 500, "grid exhausted");
            if hermite_function(n as u64, x).abs() < 1e-3 {
                continue;
            }
            let w = (op(&ev, x) / ev.value(x)).re;
            let rel = (w - want).abs() / want;
            assert!(rel <= 1e-8, "oscillator n={n} x={x}: rel {rel:e}");
            worst = worst.max(rel);
            checked += 1;
        }
    }
    // Rotor l = 0, 1: the L² differential operator applied to a pure
    // Legendre mode returns l(l+1).
    for l in 0..=1u64 {
        let want = (l * (l + 1)) as f64;
        let mut checked = 0;
        let mut i = 0;
        while checked < 100 {
            let theta = 0.05 + (PI - 0.1) * (i as f64) / 399.0;
            i += 1;
            assert!(i <= 400, "grid exhausted");
            let u = theta.cos();
            let (p, dp, ddp) = legendre_with_derivatives(l, u).unwrap();
            let psi = p[l as usize];
            if psi.abs() < 1e-3 {
                continue;
            }
            let dpsi = -theta.sin() * dp[l as usize];
            let ddpsi = -u * dp[l as usize] + theta.sin().powi(2) * ddp[l as usize];
            let w = (-ddpsi - (u / theta.sin()) * dpsi) / psi;
            let err = (w - want).abs() / want.max(1.0);
            assert!(err <= 1e-8, "rotor l={l} θ={theta}: err {err:e}");
            worst = worst.max(err);
            checked += 1;
        }
    }
    report(2, "eigenstate fixed point", format!("worst relative error {worst:.2e}"), t0, 1.0);
}

#[test]
fn criterion_03_rotor_superbehavior() {
    let t0 = Instant::now();
    let st = RotorState::new(0.5, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let theta = 0.02 + (PI - 0.04) * i as f64 / 99.0;
        let closed = local_l2(&st, theta);
        let generic = local_l2_generic(&st, theta);
        let err = (closed - generic).abs() / closed.abs().max(1.0);
        assert!(err < 1e-9, "θ={theta}: {closed} vs {generic}");
        worst = worst.max(err);
    }
    for i in 1..100 {
        let theta = PI / 2.0 + (PI / 2.0 - 1e-6) * i as f64 / 100.0;
        assert!(local_l2(&st, theta) < 0.0, "θ={theta} not negative");
    }
    let diverging = RotorState::new(1.0, 1.0).unwrap();
    assert!(local_l2(&diverging, PI).is_nan());
    assert!(local_l2_generic(&diverging, PI).is_nan());
    report(3, "rotor superbehavior", format!("closed vs generic worst {worst:.2e}"), t0, 1.0);
}

#[test]
fn criterion_04_fig3_bound() {
    let t0 = Instant::now();
    for &g in &[0.3, 0.5, 1.0] {
        for n in 1..=200u64 {
            let config = OscillatorConfig::new(n, g, FrequencyScaling::InverseN2, 1.0).unwrap();
            let e = spectral_energy(&build_sequence_state(&config)) / config.hbar_omega0();
            let bound = energy_bound_hw0(n);
            assert!(e <= bound * (1.0 + 1e-9), "g={g} N={n}: {e} > {bound}");
            if n >= 100 {
                assert!(e < 0.02, "g={g} N={n}: {e} not below 0.02");
            }
        }
    }
    report(4, "Fig. 3 spectral-energy bound", "600 (g, N) points".into(), t0, 30.0);
}

#[test]
fn criterion_05_fig4_convergence() {
    let t0 = Instant::now();
    let target = 2.0; // ħω₀/(2g²) at g = 0.5
    let mut worst: f64 = 0.0;
    for n in 300..=500u64 {
        let config = OscillatorConfig::new(n, 0.5, FrequencyScaling::InverseN2, 1.0).unwrap();
        let rep = windowed_energy(&config, 2.0, 200).unwrap();
        let rel = (rep.windowed_energy_hw0 - target).abs() / target;
        assert!(rel <= 0.10, "N={n}: rel deviation {rel}");
        assert!(
            rep.quad_self_check < 1e-6,
            "N={n}: order doubling moved the result by {:e}",
            rep.quad_self_check
        );
        if n == 500 {
            assert!(rel <= 0.05, "N=500: rel deviation {rel}");
        }
        worst = worst.max(rel);
    }
    report(5, "Fig. 4 windowed-energy convergence", format!("worst deviation {worst:.3e}"), t0, 120.0);
}

#[test]
fn criterion_06_fig5_convergence() {
    let t0 = Instant::now();
    let grid: Vec<f64> = (0..401).map(|i| i as f64 / 200.0 - 1.0).collect();
    let devs = |n: u64| -> Vec<f64> {
        let config = OscillatorConfig::new(n, 0.5, FrequencyScaling::InverseN2, 1.0).unwrap();
        fig5_trace(&config, &grid)
            .unwrap()
            .iter()
            .zip(&grid)
            .map(|(v, &t)| (v - Complex64::new(0.0, -2.0 * t).exp()).norm())
            .collect()
    };
    let d1000 = devs(1000);
    let d100 = devs(100);
    let sup = d1000.iter().cloned().fold(0.0f64, f64::max);
    assert!(sup < 0.05, "sup deviation {sup}");
    for (i, (&a, &b)) in d1000.iter().zip(&d100).enumerate() {
        assert!(
            a <= b + 1e-12,
            "t={}: N=1000 deviation {a} exceeds N=100 deviation {b}",
            grid[i]
        );
    }
    report(6, "Fig. 5 time-superoscillation convergence", format!("sup dev {sup:.4}"), t0, 120.0);
}

#[test]
fn criterion_07_superenergy_scaling() {
    let t0 = Instant::now();
    for &n in &[20u64, 50, 100] {
        let config = OscillatorConfig::new(n, 0.5, FrequencyScaling::InverseN, 1.0).unwrap();
        let predicted = super_region(&config).unwrap();
        let e0 = local_energy(&config, 0.0).re;
        let rel = (e0 - predicted.e_super).abs() / predicted.e_super;
        assert!(rel <= 0.10, "N={n}: Re Ẽ(0) off by {rel}");

        let points = 2001usize;
        let half_span = 2.0 * predicted.x_hi;
        let grid: Vec<f64> = (0..points)
            .map(|i| -half_span + 2.0 * half_span * i as f64 / (points - 1) as f64)
            .collect();
        let values: Vec<Complex64> = grid.iter().map(|&x| local_energy(&config, x)).collect();
        let bounds = (config.e_level(0), config.e_max());
        let profile = ObservableProfile {
            super_flags: values
                .iter()
                .map(|v| v.re < bounds.0 || v.re > bounds.1)
                .collect(),
            singular_flags: vec![false; points],
            grid,
            values,
            bounds,
        };
        let regions = detect_super_regions(&profile);
        let central = regions
            .iter()
            .find(|(lo, hi)| *lo <= 0.0 && *hi >= 0.0)
            .expect("central region");
        let width = 0.5 * (central.1 - central.0);
        let dev = (width - predicted.x_hi).abs() / predicted.x_hi;
        assert!(dev <= 0.15, "N={n}: half-width {width} vs {}", predicted.x_hi);
    }
    report(7, "superenergy scaling", "N in {20, 50, 100}".into(), t0, 10.0);
}

fn random_state(rng: &mut ChaCha8Rng, basis: Basis) -> BandLimitedState {
    let coeffs = |rng: &mut ChaCha8Rng, len: usize| -> Vec<LogComplex> {
        (0..len)
            .map(|_| LogComplex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-PI..PI)))
            .collect()
    };
    match basis {
        Basis::Oscillator => {
            let modes = rng.gen_range(2..=30usize);
            let eig: Vec<f64> = (0..modes).map(|n| n as f64 + 0.5).collect();
            BandLimitedState::new(basis, coeffs(rng, modes), eig, (0.5, modes as f64 - 0.5))
                .unwrap()
        }
        Basis::PlaneWave => {
            let modes = rng.gen_range(2..=9usize);
            let mut ks: Vec<f64> = Vec::new();
            while ks.len() < modes {
                let k = rng.gen_range(-8i32..=8) as f64;
                if !ks.contains(&k) {
                    ks.push(k);
                }
            }
            BandLimitedState::new(basis, coeffs(rng, modes), ks, (-8.0, 8.0)).unwrap()
        }
        Basis::LegendreM0 => {
            let modes = rng.gen_range(2..=12usize);
            let eig: Vec<f64> = (0..modes).map(|l| (l * (l + 1)) as f64).collect();
            let top = eig[modes - 1];
            BandLimitedState::new(basis, coeffs(rng, modes), eig, (0.0, top)).unwrap()
        }
    }
}

#[test]
fn criterion_08_conservation() {
    let t0 = Instant::now();
    // (a) sum rule for 50 random band-limited states (bases cycled).
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0008);
    let bases = [Basis::Oscillator, Basis::PlaneWave, Basis::LegendreM0];
    for trial in 0..50 {
        let basis = bases[trial % 3];
        let st = random_state(&mut rng, basis);
        let rule = match basis {
            Basis::Oscillator => {
                QuadratureRule::composite_gauss_legendre(40, 50, -25.0, 25.0).unwrap()
            }
            Basis::PlaneWave => {
                QuadratureRule::composite_gauss_legendre(40, 20, -PI, PI).unwrap()
            }
            Basis::LegendreM0 => QuadratureRule::gauss_legendre(64, -1.0, 1.0).unwrap(),
        };
        let ev = st.evaluator();
        let st_op = st.clone();
        let profile =
            weak_value_field(move |_, x| st_op.op_psi(x), &ev, &rule.nodes, st.bounds);
        let (lhs, rhs) = sum_rule_check(&st, &profile, &rule).unwrap();
        assert!(
            (lhs - rhs).abs() < 1e-6 * rhs.abs().max(1.0),
            "trial {trial} ({basis:?}): {lhs} vs {rhs}"
        );
    }
    // (b) norm conservation over a full period for N <= 200.
    for &n in &[50u64, 200] {
        let config = OscillatorConfig::new(n, 0.5, FrequencyScaling::InverseN2, 1.0).unwrap();
        let st = build_sequence_state(&config);
        let s = config.s();
        let y_max = (2.0 * n as f64 + 1.0).sqrt() + 12.0;
        let rule = QuadratureRule::composite_gauss_legendre(
            200,
            (2.0 * y_max).ceil() as usize,
            -y_max / s,
            y_max / s,
        )
        .unwrap();
        let ln_norm = |t: f64| {
            let lns: Vec<f64> = rule
                .nodes
                .iter()
                .map(|&x| 2.0 * hn_time(&st, x, t).log_mag)
                .collect();
            let m = lns.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = lns
                .iter()
                .zip(&rule.weights)
                .map(|(&l, &w)| w * (l - m).exp())
                .sum();
            m + sum.ln()
        };
        let period = 2.0 * PI * (n as f64) * (n as f64);
        let base = ln_norm(0.0);
        for frac in [0.2, 0.5, 0.8, 1.0] {
            let drift = (ln_norm(frac * period) - base).abs();
            assert!(drift < 1e-6, "N={n} frac={frac}: drift {drift:e}");
        }
    }
    // (c) spatially averaged local time-energy equals the spectral energy.
    {
        let config = OscillatorConfig::new(50, 0.5, FrequencyScaling::InverseN2, 1.0).unwrap();
        let st = build_sequence_state(&config);
        let want = spectral_energy(&st);
        let s = config.s();
        let y_max = (2.0 * 50.0f64 + 1.0).sqrt() + 12.0;
        let rule = QuadratureRule::composite_gauss_legendre(
            200,
            (2.0 * y_max).ceil() as usize,
            -y_max / s,
            y_max / s,
        )
        .unwrap();
        for &t in &[0.0, 0.3, 1.0, 25.0] {
            let lns: Vec<f64> = rule
                .nodes
                .iter()
                .map(|&x| 2.0 * hn_time(&st, x, t).log_mag)
                .collect();
            let m = lns.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut num = 0.0;
            let mut den = 0.0;
            for ((&x, &w), &l) in rule.nodes.iter().zip(&rule.weights).zip(&lns) {
                let d = w * (l - m).exp();
                num += d * local_time_energy(&st, x, t).re;
                den += d;
            }
            let got = num / den;
            assert!(
                (got - want).abs() < 1e-6 * want.abs(),
                "t={t}: {got} vs {want}"
            );
        }
    }
    report(8, "conservation properties", "sum rule, norm, averaged time-energy".into(), t0, 60.0);
}

#[test]
fn criterion_09_approximant_orders() {
    let t0 = Instant::now();
    // First-order approximant: error falls as t².
    let config = OscillatorConfig::new(100, 0.5, FrequencyScaling::InverseN2, 1.0).unwrap();
    let st = build_sequence_state(&config);
    let s = config.s();
    let zs: [f64; 7] = [-0.45, -0.3, -0.15, 0.0, 0.15, 0.3, 0.45];
    let err = |t: f64| {
        zs.iter()
            .map(|&z| {
                (hn_time(&st, z / s, t).to_complex()
                    - first_order_approx(&config, z / s, t).unwrap().to_complex())
                .norm()
            })
            .fold(0.0f64, f64::max)
    };
    let ratio = err(0.1) / err(0.05);
    assert!((ratio - 4.0).abs() <= 0.5, "Richardson ratio {ratio}");

    // Resummed series, 40 terms, against the exact evolution at N = 1000.
    let big = OscillatorConfig::new(1000, 0.5, FrequencyScaling::InverseN2, 1.0).unwrap();
    let big_state = build_sequence_state(&big);
    let exact = hn_time(&big_state, 0.0, 0.25).to_complex();
    let series = resummed_series(&big, 0.0, 0.25, 40).unwrap().to_complex();
    let rel = (series - exact).norm() / exact.norm();
    assert!(rel < 0.02, "resummed vs exact: {rel}");

    // Stirling-prefactor bound for n <= √N at N = 1000.
    let mut worst: f64 = 0.0;
    for n in 0..=31u64 {
        let dev = (resummed_prefactor_ln(1000, n) + 2.0 * (n * n) as f64 / 1000.0).abs();
        assert!(dev < 0.1, "n={n}: {dev}");
        worst = worst.max(dev);
    }
    report(
        9,
        "approximant order checks",
        format!("Richardson {ratio:.3}, resummed rel {rel:.2e}, Stirling worst {worst:.3}"),
        t0,
        60.0,
    );
}

fn run_fig(dir: &Path, extra: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_superlab"))
        .arg("fig")
        .args(extra)
        .arg("--out")
        .arg(dir)
        .status()
        .expect("spawn superlab");
    assert!(status.success(), "fig {extra:?} failed");
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    entries
}

#[test]
fn criterion_10_cli_determinism() {
    let t0 = Instant::now();
    let cases: Vec<Vec<&str>> = vec![
        vec!["--id", "1", "--format", "both"],
        vec!["--id", "2"],
        vec!["--id", "3"],
        vec!["--id", "4", "--n-max", "120"],
        vec!["--id", "5", "--format", "both"],
    ];
    for extra in &cases {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        run_fig(d1.path(), extra);
        run_fig(d2.path(), extra);
        let a = dir_bytes(d1.path());
        let b = dir_bytes(d2.path());
        assert_eq!(
            a.len(),
            b.len(),
            "fig {extra:?}: differing file sets"
        );
        for ((name_a, bytes_a), (name_b, bytes_b)) in a.iter().zip(&b) {
            assert_eq!(name_a, name_b);
            assert_eq!(
                bytes_a, bytes_b,
                "fig {extra:?}: {name_a} differs between runs"
            );
        }
    }
    report(10, "CLI determinism", "figs 1-5, two runs each, byte-identical".into(), t0, 300.0);
}
