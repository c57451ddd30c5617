//! Generic local super-observable machinery.
//!
//! The local observable field of an operator `Ô` for a preselected state
//! `|ψ⟩` and postselection on position is the weak value
//! `Õ(x) = ⟨x|Ô|ψ⟩ / ⟨x|ψ⟩`. When `|ψ⟩` is built from eigenstates whose
//! eigenvalues all lie in `[λ_min, λ_max]`, positions where `Re Õ(x)` leaves
//! that band exhibit superbehavior. Zeros of `ψ` produce genuine divergences;
//! they are reported as NaN markers and profile flags, never as panics.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    hermite_function_sequence, legendre_with_derivatives, log_binomial, LogComplex,
    QuadratureRule,
};

/// Relative zero tolerance: grid points where |ψ| falls below this fraction
/// of the grid maximum are flagged singular instead of producing unbounded
/// weak values.
pub const EPS_ZERO: f64 = 1e-12;

/// Eigenbases supported for band-limited superpositions.
///
/// For `Oscillator` and `LegendreM0` the j-th coefficient multiplies quantum
/// number j (counting from 0); for `PlaneWave` the wavenumber of the j-th
/// component is its eigenvalue in `ħ = 1` units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    PlaneWave,
    Oscillator,
    LegendreM0,
}

/// A superposition of eigenstates with eigenvalues confined to a band.
#[derive(Debug, Clone)]
pub struct BandLimitedState {
    pub basis: Basis,
    pub coefficients: Vec<LogComplex>,
    pub eigenvalues: Vec<f64>,
    /// (λ_min, λ_max): the band that every eigenvalue lies in.
    pub bounds: (f64, f64),
    /// sqrt(mω/ħ) for the oscillator basis; unused otherwise.
    pub basis_scale: f64,
}

impl BandLimitedState {
    pub fn new(
        basis: Basis,
        coefficients: Vec<LogComplex>,
        eigenvalues: Vec<f64>,
        bounds: (f64, f64),
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Precondition("empty coefficient list".into()));
        }
        if coefficients.len() != eigenvalues.len() {
            return Err(Error::Precondition(format!(
                "{} coefficients vs {} eigenvalues",
                coefficients.len(),
                eigenvalues.len()
            )));
        }
        if coefficients.iter().all(|c| c.is_zero()) {
            return Err(Error::Precondition("all coefficients vanish".into()));
        }
        if let Some(bad) = eigenvalues
            .iter()
            .find(|l| **l < bounds.0 - 1e-12 || **l > bounds.1 + 1e-12)
        {
            return Err(Error::Precondition(format!(
                "eigenvalue {bad} outside band [{}, {}]",
                bounds.0, bounds.1
            )));
        }
        Ok(Self {
            basis,
            coefficients,
            eigenvalues,
            bounds,
            basis_scale: 1.0,
        })
    }

    pub fn with_basis_scale(mut self, s: f64) -> Self {
        self.basis_scale = s;
        self
    }

    /// Coefficients rescaled by the common maximum magnitude so they fit in
    /// native complex. Weak values are projective, so every quantity built
    /// from these is unchanged by the rescaling.
    fn rescaled_coefficients(&self) -> Vec<Complex64> {
        let max_lm = self
            .coefficients
            .iter()
            .map(|c| c.log_mag)
            .fold(f64::NEG_INFINITY, f64::max);
        self.coefficients
            .iter()
            .map(|c| c.scale_ln(-max_lm).to_complex())
            .collect()
    }

    /// Basis-function values with first and second position derivatives at x.
    fn basis_all(&self, x: f64) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
        let n = self.coefficients.len();
        match self.basis {
            Basis::PlaneWave => {
                let mut v = Vec::with_capacity(n);
                let mut d1 = Vec::with_capacity(n);
                let mut d2 = Vec::with_capacity(n);
                for &k in &self.eigenvalues {
                    let e = Complex64::new(0.0, k * x).exp();
                    v.push(e);
                    d1.push(Complex64::new(0.0, k) * e);
                    d2.push(-k * k * e);
                }
                (v, d1, d2)
            }
            Basis::Oscillator => {
                let s = self.basis_scale;
                let y = s * x;
                let phi = hermite_function_sequence(n as u64 - 1, y);
                let root_s = s.sqrt();
                let mut v = Vec::with_capacity(n);
                let mut d1 = Vec::with_capacity(n);
                let mut d2 = Vec::with_capacity(n);
                for j in 0..n {
                    let jf = j as f64;
                    let pj = phi[j];
                    let pjm1 = if j >= 1 { phi[j - 1] } else { 0.0 };
                    let pjm2 = if j >= 2 { phi[j - 2] } else { 0.0 };
                    // dφ/dy and d²φ/dy² from the lowering recurrences, an
                    // independent route from the oscillator ODE.
                    let dp = (2.0 * jf).sqrt() * pjm1 - y * pj;
                    let ddp = 2.0 * (jf * (jf - 1.0)).sqrt() * pjm2
                        - 2.0 * y * (2.0 * jf).sqrt() * pjm1
                        + (y * y - 1.0) * pj;
                    v.push(Complex64::new(root_s * pj, 0.0));
                    d1.push(Complex64::new(s * root_s * dp, 0.0));
                    d2.push(Complex64::new(s * s * root_s * ddp, 0.0));
                }
                (v, d1, d2)
            }
            Basis::LegendreM0 => {
                let (p, dp, ddp) =
                    legendre_with_derivatives(n as u64 - 1, x).expect("legendre argument");
                let mut v = Vec::with_capacity(n);
                let mut d1 = Vec::with_capacity(n);
                let mut d2 = Vec::with_capacity(n);
                for l in 0..n {
                    let norm = ((2.0 * l as f64 + 1.0) / 2.0).sqrt();
                    v.push(Complex64::new(norm * p[l], 0.0));
                    d1.push(Complex64::new(norm * dp[l], 0.0));
                    d2.push(Complex64::new(norm * ddp[l], 0.0));
                }
                (v, d1, d2)
            }
        }
    }

    /// ψ(x), up to the common coefficient rescaling.
    pub fn psi(&self, x: f64) -> Complex64 {
        let c = self.rescaled_coefficients();
        let (v, _, _) = self.basis_all(x);
        c.iter().zip(&v).map(|(c, v)| c * v).sum()
    }

    /// ⟨x|Ô|ψ⟩ for the state's own operator, up to the same rescaling:
    /// each component is an eigenstate, so Ô acts as its eigenvalue.
    pub fn op_psi(&self, x: f64) -> Complex64 {
        let c = self.rescaled_coefficients();
        let (v, _, _) = self.basis_all(x);
        c.iter()
            .zip(&v)
            .zip(&self.eigenvalues)
            .map(|((c, v), l)| c * v * l)
            .sum()
    }

    /// Spectral-basis expectation Σ|c_j|²λ_j / Σ|c_j|², max-factored so
    /// coefficient magnitudes far outside f64 range still work.
    pub fn spectral_expectation(&self) -> f64 {
        let max_lm = self
            .coefficients
            .iter()
            .map(|c| c.log_mag)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut num = 0.0;
        let mut den = 0.0;
        for (c, l) in self.coefficients.iter().zip(&self.eigenvalues) {
            if c.is_zero() {
                continue;
            }
            let w = (2.0 * (c.log_mag - max_lm)).exp();
            num += w * l;
            den += w;
        }
        num / den
    }

    /// A [`StateEvaluator`] with spectral derivatives (each basis function
    /// differentiated analytically and resummed).
    pub fn evaluator(&self) -> StateEvaluator {
        let coeffs = Arc::new(self.rescaled_coefficients());
        let state = Arc::new(self.clone());
        let mk = |which: usize| {
            let coeffs = Arc::clone(&coeffs);
            let state = Arc::clone(&state);
            move |x: f64| -> Complex64 {
                let tables = state.basis_all(x);
                let t = match which {
                    0 => &tables.0,
                    1 => &tables.1,
                    _ => &tables.2,
                };
                coeffs.iter().zip(t).map(|(c, v)| c * v).sum()
            }
        };
        StateEvaluator {
            value: Arc::new(mk(0)),
            d1: Arc::new(mk(1)),
            d2: Arc::new(mk(2)),
            derivative_kind: DerivativeKind::Spectral,
        }
    }
}

/// How a [`StateEvaluator`]'s derivatives are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeKind {
    Analytic,
    Spectral,
    FiniteDifference,
}

type StateFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A position-space wavefunction with its first two derivatives.
#[derive(Clone)]
pub struct StateEvaluator {
    value: StateFn,
    d1: StateFn,
    d2: StateFn,
    pub derivative_kind: DerivativeKind,
}

impl StateEvaluator {
    /// Wavefunction with hand-supplied analytic derivatives.
    pub fn analytic(
        value: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
            derivative_kind: DerivativeKind::Analytic,
        }
    }

    /// Wavefunction with central-difference derivatives of step h. Least
    /// trustworthy exactly where superoscillations live; prefer spectral or
    /// analytic derivatives there.
    pub fn finite_difference(
        value: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        h: f64,
    ) -> Self {
        let value: StateFn = Arc::new(value);
        let v1 = Arc::clone(&value);
        let v2 = Arc::clone(&value);
        Self {
            value: Arc::clone(&value),
            d1: Arc::new(move |x| (v1(x + h) - v1(x - h)) / (2.0 * h)),
            d2: Arc::new(move |x| (v2(x + h) - 2.0 * v2(x) + v2(x - h)) / (h * h)),
            derivative_kind: DerivativeKind::FiniteDifference,
        }
    }

    pub fn value(&self, x: f64) -> Complex64 {
        (self.value)(x)
    }

    pub fn d1(&self, x: f64) -> Complex64 {
        (self.d1)(x)
    }

    pub fn d2(&self, x: f64) -> Complex64 {
        (self.d2)(x)
    }
}

/// Im[ψ'(x)/ψ(x)]: the local wavenumber, i.e. the momentum weak value over ħ.
///
/// Returns NaN (the singularity marker) where ψ vanishes.
pub fn local_wavenumber(state: &StateEvaluator, x: f64) -> f64 {
    let v = state.value(x);
    if v.norm_sqr() == 0.0 {
        return f64::NAN;
    }
    let r = state.d1(x) / v;
    if r.is_finite() {
        r.im
    } else {
        f64::NAN
    }
}

/// Re[ψ'(x)/ψ(x)]: the local log-magnitude growth rate (supergrowth when it
/// leaves the band). NaN at zeros of ψ.
pub fn supergrowth_rate(state: &StateEvaluator, x: f64) -> f64 {
    let v = state.value(x);
    if v.norm_sqr() == 0.0 {
        return f64::NAN;
    }
    let r = state.d1(x) / v;
    if r.is_finite() {
        r.re
    } else {
        f64::NAN
    }
}

/// ⟨x|p̂|ψ⟩ = -i ψ'(x) in ħ = 1 units.
pub fn momentum_op() -> impl Fn(&StateEvaluator, f64) -> Complex64 {
    |state, x| -Complex64::i() * state.d1(x)
}

/// ⟨x|Ĥ|ψ⟩ = -ψ''(x)/(2m) + V(x) ψ(x) in ħ = 1 units.
pub fn hamiltonian_op(
    mass: f64,
    potential: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> impl Fn(&StateEvaluator, f64) -> Complex64 {
    move |state, x| -state.d2(x) / (2.0 * mass) + potential(x) * state.value(x)
}

/// A sampled local-observable field with superbehavior and singularity flags.
#[derive(Debug, Clone)]
pub struct ObservableProfile {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub bounds: (f64, f64),
    pub super_flags: Vec<bool>,
    pub singular_flags: Vec<bool>,
}

/// Sample the weak value of an operator over a grid.
///
/// `op_apply(state, x)` must return `⟨x|Ô|ψ⟩`. Grid points where |ψ| falls
/// below [`EPS_ZERO`] times the grid maximum are flagged singular and carry
/// NaN values; a point is flagged super when it is not singular and the real
/// part of the weak value leaves `bounds`.
pub fn weak_value_field<F>(
    op_apply: F,
    state: &StateEvaluator,
    grid: &[f64],
    bounds: (f64, f64),
) -> ObservableProfile
where
    F: Fn(&StateEvaluator, f64) -> Complex64,
{
    let psi: Vec<Complex64> = grid.iter().map(|&x| state.value(x)).collect();
    let max_abs = psi.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let mut values = Vec::with_capacity(grid.len());
    let mut super_flags = Vec::with_capacity(grid.len());
    let mut singular_flags = Vec::with_capacity(grid.len());
    for (&x, v) in grid.iter().zip(&psi) {
        let singular = v.norm() < EPS_ZERO * max_abs;
        if singular {
            values.push(Complex64::new(f64::NAN, f64::NAN));
            singular_flags.push(true);
            super_flags.push(false);
            continue;
        }
        let w = op_apply(state, x) / v;
        let is_super = w.re < bounds.0 || w.re > bounds.1;
        values.push(w);
        singular_flags.push(false);
        super_flags.push(is_super);
    }
    ObservableProfile {
        grid: grid.to_vec(),
        values,
        bounds,
        super_flags,
        singular_flags,
    }
}

/// Maximal contiguous grid intervals where the profile is super. Singular
/// points break intervals. Boundaries are reported at grid resolution.
pub fn detect_super_regions(profile: &ObservableProfile) -> Vec<(f64, f64)> {
    assert!(
        profile.grid.windows(2).all(|w| w[0] < w[1]),
        "detect_super_regions: grid must be strictly increasing"
    );
    let mut regions = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..profile.grid.len() {
        let on = profile.super_flags[i] && !profile.singular_flags[i];
        match (on, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                regions.push((profile.grid[s], profile.grid[i - 1]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        regions.push((profile.grid[s], profile.grid[profile.grid.len() - 1]));
    }
    regions
}

/// Sum-rule check (weak values are conditioned averages): the
/// postselection-weighted average of the local observable over position
/// equals the spectral expectation.
///
/// Returns (lhs, rhs) with
/// lhs = ∫|ψ|² Re Õ dx / ∫|ψ|² dx over the rule's interval and
/// rhs = Σ|c_j|²λ_j / Σ|c_j|².
///
/// The profile must be sampled exactly on the rule's nodes. The interval
/// must support the basis orthogonality: all of [-1, 1] for `LegendreM0`, a
/// full period for `PlaneWave`, and wide enough to hold the state's mass for
/// `Oscillator` (checked via the endpoint density).
pub fn sum_rule_check(
    state: &BandLimitedState,
    profile: &ObservableProfile,
    rule: &QuadratureRule,
) -> Result<(f64, f64)> {
    if profile.grid != rule.nodes {
        return Err(Error::Precondition(
            "profile must be sampled on the quadrature nodes".into(),
        ));
    }
    let density: Vec<f64> = rule.nodes.iter().map(|&x| state.psi(x).norm_sqr()).collect();
    if state.basis == Basis::Oscillator {
        let max_d = density.iter().cloned().fold(0.0f64, f64::max);
        let edge = density[0].max(*density.last().unwrap());
        if edge > 1e-12 * max_d {
            return Err(Error::Precondition(format!(
                "quadrature interval too narrow: endpoint density {:.3e} of max",
                edge / max_d
            )));
        }
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (((&w, &d), v), &singular) in rule
        .weights
        .iter()
        .zip(&density)
        .zip(&profile.values)
        .zip(&profile.singular_flags)
    {
        if singular {
            continue; // measure-zero divergences carry no weight
        }
        num += w * d * v.re;
        den += w * d;
    }
    Ok((num / den, state.spectral_expectation()))
}

/// Z(χ) = Σ_j c_j e^{iχλ_j} ⟨φ|φ_j⟩ / Σ_j c_j ⟨φ|φ_j⟩ on a χ grid, with the
/// local χ-frequency Im[Z'/Z] computed from the analytic derivative.
#[derive(Debug, Clone)]
pub struct GeneratingFunction {
    pub chi: Vec<f64>,
    pub z: Vec<Complex64>,
    /// Im[Z'(χ)/Z(χ)]; equals Re of the weak value at χ = 0. NaN where the
    /// numerator state's overlap sum vanishes.
    pub local_frequency: Vec<f64>,
}

/// Evaluate the weak generating function of the state's observable for
/// postselection overlaps `⟨φ|φ_j⟩`.
pub fn generating_function(
    state: &BandLimitedState,
    post_state_overlaps: &[Complex64],
    chi_grid: &[f64],
) -> Result<GeneratingFunction> {
    if post_state_overlaps.len() != state.coefficients.len() {
        return Err(Error::Precondition(format!(
            "{} overlaps vs {} coefficients",
            post_state_overlaps.len(),
            state.coefficients.len()
        )));
    }
    let terms: Vec<LogComplex> = state
        .coefficients
        .iter()
        .zip(post_state_overlaps)
        .map(|(c, o)| *c * LogComplex::from_complex(*o))
        .collect();
    let (denom, scale) = LogComplex::sum_with_scale(&terms);
    // Below ~1e-13 of the dominant term the sum is cancellation noise:
    // numerically indistinguishable from a vanishing overlap.
    if denom.is_zero() || denom.log_mag < scale + (1e-13f64).ln() {
        return Err(Error::Singular(
            "vanishing postselection overlap ⟨φ|ψ⟩".into(),
        ));
    }
    let mut z = Vec::with_capacity(chi_grid.len());
    let mut freq = Vec::with_capacity(chi_grid.len());
    for &chi in chi_grid {
        let rotated: Vec<LogComplex> = terms
            .iter()
            .zip(&state.eigenvalues)
            .map(|(t, l)| LogComplex::new(t.log_mag, t.phase + chi * l))
            .collect();
        let weighted: Vec<LogComplex> = rotated
            .iter()
            .zip(&state.eigenvalues)
            .map(|(t, l)| *t * LogComplex::from_real(*l))
            .collect();
        let num = LogComplex::sum(&rotated);
        let num_l = LogComplex::sum(&weighted);
        z.push((num / denom).to_complex());
        if num.is_zero() || num.log_mag < scale + (1e-13f64).ln() {
            freq.push(f64::NAN);
        } else {
            freq.push((num_l / num).to_complex().re);
        }
    }
    Ok(GeneratingFunction {
        chi: chi_grid.to_vec(),
        z,
        local_frequency: freq,
    })
}

/// The canonical superoscillating function [cos(x/N) + i a sin(x/N)]^N as an
/// analytically differentiable state. Its local wavenumber at the origin is
/// a, while every Fourier component has |k| <= 1.
pub fn canonical_superoscillation(a: f64, n: u32) -> StateEvaluator {
    let nf = n as f64;
    let base = move |x: f64| {
        Complex64::new((x / nf).cos(), a * (x / nf).sin())
    };
    let value = move |x: f64| base(x).powu(n);
    let d1 = move |x: f64| {
        // d/dx base = (-sin(x/N) + i a cos(x/N))/N
        let db = Complex64::new(-(x / nf).sin(), a * (x / nf).cos()) / nf;
        nf * base(x).powu(n - 1) * db
    };
    let d2 = move |x: f64| {
        let b = base(x);
        let db = Complex64::new(-(x / nf).sin(), a * (x / nf).cos()) / nf;
        let ddb = -b / (nf * nf);
        nf * (nf - 1.0) * b.powu(n.saturating_sub(2)) * db * db + nf * b.powu(n - 1) * ddb
    };
    StateEvaluator::analytic(value, d1, d2)
}

/// The plane-wave expansion of the canonical function: coefficients
/// C(N,n) (1+a)^n (1-a)^(N-n) / 2^N on wavenumbers k_n = (2n-N)/N, band
/// [-1, 1].
pub fn canonical_fourier_state(a: f64, n: u32) -> Result<BandLimitedState> {
    let nf = n as f64;
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut ks = Vec::with_capacity(n as usize + 1);
    for j in 0..=n as u64 {
        let jf = j as f64;
        let lb = log_binomial(n as u64, j)?;
        let lp = (1.0 + a).abs().ln() * jf + (1.0 - a).abs().ln() * (nf - jf) - nf * 2.0f64.ln();
        let mut sign = 1.0;
        if 1.0 + a < 0.0 && j % 2 == 1 {
            sign = -sign;
        }
        if 1.0 - a < 0.0 && (n as u64 - j) % 2 == 1 {
            sign = -sign;
        }
        let lm = lb + lp;
        coeffs.push(if (1.0 + a == 0.0 && j > 0) || (1.0 - a == 0.0 && j < n as u64) {
            LogComplex::ZERO
        } else {
            LogComplex::new(lm, if sign < 0.0 { PI } else { 0.0 })
        });
        ks.push((2.0 * jf - nf) / nf);
    }
    BandLimitedState::new(Basis::PlaneWave, coeffs, ks, (-1.0, 1.0))
}
