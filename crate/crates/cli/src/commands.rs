//! Single-computation subcommands: profiles to CSV, scalar reports to
//! stdout.

use clap::Args;
use num_complex::Complex64;

use superlab_core::energy_analysis::{energy_bound_hw0, spectral_energy, windowed_energy};
use superlab_core::oscillator::{
    build_sequence_state, local_energy, OscillatorConfig,
};
use superlab_core::rotor::{local_l2, rotor_time_phase, RotorState};
use superlab_core::time_evolution::{hn_time, local_time_energy};

use crate::config::Ctx;
use crate::output::{fmt_float, write_csv, write_sidecar, Cell};
use crate::{AppError, CommonArgs, ScalingArg};

#[derive(Debug, Args)]
pub struct LocalEnergyArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long, value_enum)]
    scaling: Option<ScalingArg>,
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn local_energy_cmd(args: LocalEnergyArgs) -> Result<u8, AppError> {
    let mut ctx = Ctx::load(&args.common)?;
    let n = ctx.value("n", args.n, 50u64)?;
    let g = ctx.value("g", args.g, 0.5)?;
    let scale = ctx.value("scale", args.scale, 1.0)?;
    let scaling = resolve_scaling(&mut ctx, args.scaling, ScalingArg::InverseN)?;
    let grid = ctx.grid("grid", &args.grid, (-8.0, 8.0, 801))?;
    let config = OscillatorConfig::new(n, g, scaling.to_core(), scale)?;
    let e_max = config.e_max();
    let header: Vec<String> = ["x", "re_local_energy", "im_local_energy", "scaled_re"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<Cell>> = grid
        .iter()
        .map(|&x| {
            let e = local_energy(&config, x);
            vec![
                Cell::from(x),
                Cell::from(e.re),
                Cell::from(e.im),
                Cell::from(e.re / e_max),
            ]
        })
        .collect();
    std::fs::create_dir_all(&ctx.out_dir)?;
    write_csv(
        &ctx.out_dir.join("local_energy.csv"),
        &header,
        &rows,
        ctx.precision,
    )?;
    write_sidecar(
        &ctx.out_dir.join("local_energy.meta.txt"),
        "local-energy",
        &ctx.resolved,
    )?;
    Ok(0)
}

#[derive(Debug, Args)]
pub struct SpectralEnergyArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long, value_enum)]
    scaling: Option<ScalingArg>,
    #[arg(long)]
    scale: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn spectral_energy_cmd(args: SpectralEnergyArgs) -> Result<u8, AppError> {
    let mut ctx = Ctx::load(&args.common)?;
    let n = ctx.value("n", args.n, 50u64)?;
    let g = ctx.value("g", args.g, 0.5)?;
    let scale = ctx.value("scale", args.scale, 1.0)?;
    let scaling = resolve_scaling(&mut ctx, args.scaling, ScalingArg::InverseN2)?;
    let config = OscillatorConfig::new(n, g, scaling.to_core(), scale)?;
    let e = spectral_energy(&build_sequence_state(&config));
    let p = ctx.precision;
    println!("spectral_energy = {}", fmt_float(e, p));
    println!(
        "spectral_energy_over_hw0 = {}",
        fmt_float(e / config.hbar_omega0(), p)
    );
    println!("bound_over_hw0 = {}", fmt_float(energy_bound_hw0(n), p));
    Ok(0)
}

#[derive(Debug, Args)]
pub struct WindowedEnergyArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    g: Option<f64>,
    /// Window half-length L; the window is (-L, L).
    #[arg(long)]
    window: Option<f64>,
    #[arg(long, value_enum)]
    scaling: Option<ScalingArg>,
    #[arg(long)]
    scale: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn windowed_energy_cmd(args: WindowedEnergyArgs) -> Result<u8, AppError> {
    let mut ctx = Ctx::load(&args.common)?;
    let n = ctx.value("n", args.n, 100u64)?;
    let g = ctx.value("g", args.g, 0.5)?;
    let l_window = ctx.value("window", args.window, 2.0)?;
    let scale = ctx.value("scale", args.scale, 1.0)?;
    let scaling = resolve_scaling(&mut ctx, args.scaling, ScalingArg::InverseN2)?;
    let config = OscillatorConfig::new(n, g, scaling.to_core(), scale)?;
    let report = windowed_energy(&config, l_window, ctx.quad_density)?;
    if !report.mimicry_condition_met {
        eprintln!(
            "superlab: warning: L = {l_window} exceeds the mimicry window g sqrt(N hbar/m omega0) = {}",
            g * (n as f64 / scale).sqrt()
        );
    }
    let p = ctx.precision;
    println!("quad_density = {}", ctx.quad_density);
    println!("windowed_energy_over_hw0 = {}", fmt_float(report.windowed_energy_hw0, p));
    println!("spectral_energy_over_hw0 = {}", fmt_float(report.spectral_energy_hw0, p));
    println!("bound_over_hw0 = {}", fmt_float(report.bound_hw0, p));
    println!("postselection_prob = {}", fmt_float(report.postselection_prob, p));
    println!("ln_postselection_prob = {}", fmt_float(report.ln_postselection_prob, p));
    println!("imag_residue = {}", fmt_float(report.imag_residue, p));
    println!("quad_self_check = {}", fmt_float(report.quad_self_check, p));
    println!("ln_tail_bound = {}", fmt_float(report.ln_tail_bound, p));
    Ok(0)
}

#[derive(Debug, Args)]
pub struct TimeEvolveArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    g: Option<f64>,
    /// Evaluation position.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_grid: Option<String>,
    #[arg(long, value_enum)]
    scaling: Option<ScalingArg>,
    #[arg(long)]
    scale: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn time_evolve_cmd(args: TimeEvolveArgs) -> Result<u8, AppError> {
    let mut ctx = Ctx::load(&args.common)?;
    let n = ctx.value("n", args.n, 100u64)?;
    let g = ctx.value("g", args.g, 0.5)?;
    let x = ctx.value("x", args.x, 0.0)?;
    let scale = ctx.value("scale", args.scale, 1.0)?;
    let scaling = resolve_scaling(&mut ctx, args.scaling, ScalingArg::InverseN2)?;
    let t_grid = ctx.grid("t-grid", &args.t_grid, (0.0, 1.0, 201))?;
    let config = OscillatorConfig::new(n, g, scaling.to_core(), scale)?;
    let state = build_sequence_state(&config);
    let h0 = hn_time(&state, x, 0.0);
    let header: Vec<String> = [
        "t",
        "log_mag",
        "phase",
        "re_ratio_to_t0",
        "im_ratio_to_t0",
        "re_local_time_energy",
        "im_local_time_energy",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let rows: Vec<Vec<Cell>> = t_grid
        .iter()
        .map(|&t| {
            let h = hn_time(&state, x, t);
            let ratio = (h / h0).to_complex();
            let e = local_time_energy(&state, x, t);
            vec![
                Cell::from(t),
                Cell::from(h.log_mag),
                Cell::from(h.phase),
                Cell::from(ratio.re),
                Cell::from(ratio.im),
                Cell::from(e.re),
                Cell::from(e.im),
            ]
        })
        .collect();
    std::fs::create_dir_all(&ctx.out_dir)?;
    write_csv(
        &ctx.out_dir.join("time_evolve.csv"),
        &header,
        &rows,
        ctx.precision,
    )?;
    write_sidecar(
        &ctx.out_dir.join("time_evolve.meta.txt"),
        "time-evolve",
        &ctx.resolved,
    )?;
    Ok(0)
}

#[derive(Debug, Args)]
pub struct RotorArgs {
    /// Mixing amplitude of |1,0⟩ against |0,0⟩ (Legendre normalization).
    #[arg(long)]
    c: Option<f64>,
    /// Rotor moment m·a² in ħ = 1 units.
    #[arg(long)]
    ma2: Option<f64>,
    /// θ grid as lo:hi:count (radians; poles excluded by default).
    #[arg(long, allow_hyphen_values = true)]
    theta_grid: Option<String>,
    /// Time for the postselected phase column (ħ = 1 units).
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn rotor_cmd(args: RotorArgs) -> Result<u8, AppError> {
    let mut ctx = Ctx::load(&args.common)?;
    let c = ctx.value("c", args.c, 0.5)?;
    let ma2 = ctx.value("ma2", args.ma2, 1.0)?;
    let t = ctx.value("t", args.t, 1.0)?;
    let theta = ctx.grid(
        "theta-grid",
        &args.theta_grid,
        (0.005, std::f64::consts::PI - 0.005, 630),
    )?;
    let state = RotorState::new(c, ma2)?;
    let header: Vec<String> = ["theta", "local_l2", "singular", "re_time_phase", "im_time_phase"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<Cell>> = theta
        .iter()
        .map(|&th| {
            let l2 = local_l2(&state, th);
            let phase: Complex64 = rotor_time_phase(&state, th, t);
            vec![
                Cell::from(th),
                Cell::from(l2),
                Cell::Int(if l2.is_nan() { 1 } else { 0 }),
                Cell::from(phase.re),
                Cell::from(phase.im),
            ]
        })
        .collect();
    std::fs::create_dir_all(&ctx.out_dir)?;
    write_csv(&ctx.out_dir.join("rotor.csv"), &header, &rows, ctx.precision)?;
    write_sidecar(&ctx.out_dir.join("rotor.meta.txt"), "rotor", &ctx.resolved)?;
    Ok(0)
}

pub fn resolve_scaling(
    ctx: &mut Ctx,
    flag: Option<ScalingArg>,
    default: ScalingArg,
) -> Result<ScalingArg, AppError> {
    let as_str = |s: ScalingArg| match s {
        ScalingArg::InverseN => "inverse-n".to_string(),
        ScalingArg::InverseN2 => "inverse-n2".to_string(),
    };
    let chosen = match flag {
        Some(s) => s,
        None => match ctx.raw("scaling") {
            Some(raw) => match raw.as_str() {
                "inverse-n" => ScalingArg::InverseN,
                "inverse-n2" => ScalingArg::InverseN2,
                other => {
                    return Err(AppError::Usage(format!(
                        "scaling `{other}` must be inverse-n or inverse-n2"
                    )))
                }
            },
            None => default,
        },
    };
    ctx.record("scaling", &as_str(chosen));
    Ok(chosen)
}

