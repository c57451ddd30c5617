//! Pass/fail verification commands: exit 0 on pass, 1 on fail.

use clap::{Args, ValueEnum};

use superlab_core::numerics::QuadratureRule;
use superlab_core::oscillator::{
    build_sequence_state, hermite_identity_sides, OscillatorConfig,
};
use superlab_core::rotor::RotorState;
use superlab_core::weak_value::{
    canonical_fourier_state, sum_rule_check, weak_value_field, BandLimitedState,
};

use crate::commands::resolve_scaling;
use crate::config::Ctx;
use crate::output::fmt_float;
use crate::{AppError, CommonArgs, ScalingArg};

#[derive(Debug, Args)]
pub struct CheckIdentityArgs {
    /// Identity order N.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Relative tolerance (absolute when both sides are ~0).
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

pub fn check_identity(args: CheckIdentityArgs) -> Result<u8, AppError> {
    let mut ctx = Ctx::load(&args.common)?;
    let n = ctx.value("n", args.n, 8u32)?;
    let a = ctx.value("a", args.a, 1.3)?;
    let b = ctx.value("b", args.b, -0.7)?;
    let tol = ctx.value("tol", args.tol, 1e-9)?;
    if n == 0 || n > 256 {
        return Err(AppError::Usage(format!("identity order N = {n} not in 1..=256")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(AppError::Usage("a and b must be finite".into()));
    }
    let (lhs, rhs) = hermite_identity_sides(n, a, b);
    let scale = rhs.norm();
    let err = (lhs - rhs).norm();
    let (err_kind, measured) = if scale < 1e-12 {
        ("abs_err", err)
    } else {
        ("rel_err", err / scale)
    };
    let p = ctx.precision;
    let pass = measured <= tol;
    println!(
        "check-identity N={n} a={a} b={b}: lhs=({}, {}) rhs=({}, {}) {err_kind}={} tol={}: {}",
        fmt_float(lhs.re, p),
        fmt_float(lhs.im, p),
        fmt_float(rhs.re, p),
        fmt_float(rhs.im, p),
        fmt_float(measured, p),
        fmt_float(tol, p),
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { 1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SumRuleBasis {
    /// The Eq.-10/11 oscillator sequence state.
    Oscillator,
    /// The canonical superoscillating function over plane waves.
    Canonical,
    /// The two-level rotor over Legendre polynomials.
    Rotor,
}

#[derive(Debug, Args)]
pub struct SumRuleArgs {
    #[arg(long, value_enum)]
    basis: Option<SumRuleBasis>,
    /// Sequence index (oscillator/canonical).
    #[arg(long)]
    n: Option<u64>,
    /// Superoscillation parameter g (oscillator).
    #[arg(long)]
    g: Option<f64>,
    /// Target wavenumber a (canonical).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Mixing amplitude c (rotor).
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, value_enum)]
    scaling: Option<ScalingArg>,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

fn quadrature_for(state: &BandLimitedState, basis: SumRuleBasis, n: u64) -> Result<QuadratureRule, AppError> {
    Ok(match basis {
        SumRuleBasis::Oscillator => {
            let s = state.basis_scale;
            let y_max = (2.0 * n as f64 + 1.0).sqrt() + 12.0;
            QuadratureRule::composite_gauss_legendre(
                40,
                (2.0 * y_max).ceil() as usize,
                -y_max / s,
                y_max / s,
            )?
        }
        SumRuleBasis::Canonical => {
            let period = 2.0 * std::f64::consts::PI * n as f64;
            QuadratureRule::composite_gauss_legendre(
                40,
                (20 * n as usize).max(40),
                -period / 2.0,
                period / 2.0,
            )?
        }
        SumRuleBasis::Rotor => QuadratureRule::gauss_legendre(64, -1.0, 1.0)?,
    })
}

pub fn sum_rule(args: SumRuleArgs) -> Result<u8, AppError> {
    let mut ctx = Ctx::load(&args.common)?;
    let basis = match args.basis {
        Some(b) => b,
        None => match ctx.raw("basis").map(String::as_str) {
            Some("oscillator") => SumRuleBasis::Oscillator,
            Some("canonical") => SumRuleBasis::Canonical,
            Some("rotor") => SumRuleBasis::Rotor,
            Some(other) => {
                return Err(AppError::Usage(format!("unknown sum-rule basis `{other}`")))
            }
            None => SumRuleBasis::Oscillator,
        },
    };
    let tol = ctx.value("tol", args.tol, 1e-6)?;
    let (state, n, label) = match basis {
        SumRuleBasis::Oscillator => {
            let n = ctx.value("n", args.n, 5u64)?;
            let g = ctx.value("g", args.g, 0.5)?;
            let scaling = resolve_scaling(&mut ctx, args.scaling, ScalingArg::InverseN)?;
            if n > 1000 {
                return Err(AppError::Usage(format!("sum-rule oscillator: N = {n} > 1000")));
            }
            let config = OscillatorConfig::new(n, g, scaling.to_core(), 1.0)?;
            (
                build_sequence_state(&config).band_limited(),
                n,
                format!("oscillator N={n} g={g}"),
            )
        }
        SumRuleBasis::Canonical => {
            let n = ctx.value("n", args.n, 20u64)?;
            let a = ctx.value("a", args.a, 4.0)?;
            if n == 0 || n > 300 {
                return Err(AppError::Usage(format!("sum-rule canonical: N = {n} not in 1..=300")));
            }
            (
                canonical_fourier_state(a, n as u32)?,
                n,
                format!("canonical N={n} a={a}"),
            )
        }
        SumRuleBasis::Rotor => {
            let c = ctx.value("c", args.c, 0.5)?;
            let state = RotorState::new(c, 1.0)?;
            (state.band_limited(), 1, format!("rotor c={c}"))
        }
    };
    let rule = quadrature_for(&state, basis, n)?;
    let ev = state.evaluator();
    let st_op = state.clone();
    let profile = weak_value_field(move |_, x| st_op.op_psi(x), &ev, &rule.nodes, state.bounds);
    let (lhs, rhs) = sum_rule_check(&state, &profile, &rule)?;
    let err = (lhs - rhs).abs() / rhs.abs().max(1.0);
    let pass = err <= tol;
    let p = ctx.precision;
    println!(
        "sum-rule {label}: lhs={} rhs={} rel_err={} tol={}: {}",
        fmt_float(lhs, p),
        fmt_float(rhs, p),
        fmt_float(err, p),
        fmt_float(tol, p),
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { 1 })
}
