//! Super total angular momentum on the two-level rigid rotor.
//!
//! The state is ψ(θ) ∝ P₀ + c P₁(cosθ) = 1 + c cosθ (the m = 0 spherical
//! harmonics reduce to Legendre polynomials). The component eigenvalues of
//! L̂²/ħ² are {0, 2}, yet the local value 2c cosθ/(1 + c cosθ) is negative on
//! (π/2, π] whenever 0 < c < 1, and diverges at θ = π when c = 1 because the
//! wavefunction has a zero there. All angles are in radians; ħ = 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{legendre_with_derivatives, LogComplex};
use crate::weak_value::{BandLimitedState, Basis};

/// The two-level rotor state |ψ⟩ ∝ |0,0⟩ + c|1,0⟩ with mixing amplitude
/// measured against the Legendre polynomials (ψ(θ) = 1 + c cosθ) and the
/// rotor moment m·a² (ħ = 1 units).
#[derive(Debug, Clone, Copy)]
pub struct RotorState {
    pub c: f64,
    pub mass_length_sq: f64,
}

impl RotorState {
    pub fn new(c: f64, mass_length_sq: f64) -> Result<Self> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::Domain(format!("rotor: c = {c} must be >= 0")));
        }
        if !mass_length_sq.is_finite() || mass_length_sq <= 0.0 {
            return Err(Error::Domain(format!(
                "rotor: m a² = {mass_length_sq} must be > 0"
            )));
        }
        Ok(Self {
            c,
            mass_length_sq,
        })
    }

    /// The two component energies l(l+1)/(2 m a²) for l = 0, 1.
    pub fn energies(&self) -> (f64, f64) {
        (0.0, 2.0 / (2.0 * self.mass_length_sq))
    }

    /// The state as a band-limited superposition over normalized Legendre
    /// functions of u = cosθ, eigenvalues {0, 2} of L̂²/ħ².
    pub fn band_limited(&self) -> BandLimitedState {
        // 1·P₀ + c·P₁ expressed over the orthonormalized functions
        // P̃_l = sqrt((2l+1)/2) P_l.
        let c0 = LogComplex::from_real(2.0f64.sqrt());
        let c1 = LogComplex::from_real(self.c * (2.0 / 3.0f64).sqrt());
        BandLimitedState::new(Basis::LegendreM0, vec![c0, c1], vec![0.0, 2.0], (0.0, 2.0))
            .expect("two-level rotor state is always valid")
    }
}

fn singular_threshold(state: &RotorState) -> f64 {
    1e-12 * (1.0 + state.c)
}

/// Closed-form local total angular momentum L̃²/ħ² = 2c cosθ/(1 + c cosθ).
///
/// Returns NaN where the wavefunction zero makes the weak value diverge
/// (θ = π at c = 1).
pub fn local_l2(state: &RotorState, theta: f64) -> f64 {
    let u = theta.cos();
    let denom = 1.0 + state.c * u;
    if denom.abs() < singular_threshold(state) {
        return f64::NAN;
    }
    2.0 * state.c * u / denom
}

/// The same local observable from the full differential operator
/// L̂²/ħ² = -∂²_θ - cotθ ∂_θ - csc²θ ∂²_φ applied to ψ(θ) = Σ_l c_l P_l(cosθ),
/// with the derivatives built from Legendre recurrences. The azimuthal term
/// is carried explicitly and vanishes for m = 0.
pub fn local_l2_generic(state: &RotorState, theta: f64) -> f64 {
    let coeffs = [1.0, state.c];
    let u = theta.cos();
    let sin = theta.sin();
    let (p, dp, ddp) = legendre_with_derivatives(1, u).expect("cosθ is in [-1, 1]");

    let mut psi = 0.0;
    let mut dpsi_dtheta = 0.0;
    let mut d2psi_dtheta2 = 0.0;
    for (l, &cl) in coeffs.iter().enumerate() {
        psi += cl * p[l];
        // d/dθ P_l(cosθ) = -sinθ P'_l, d²/dθ² = -cosθ P'_l + sin²θ P''_l.
        dpsi_dtheta += cl * (-sin * dp[l]);
        d2psi_dtheta2 += cl * (-u * dp[l] + sin * sin * ddp[l]);
    }
    let d2psi_dphi2 = 0.0; // m = 0 throughout
    if psi.abs() < singular_threshold(state) {
        return f64::NAN;
    }
    let csc2 = 1.0 / (sin * sin);
    let cot = u / sin;
    (-d2psi_dtheta2 - cot * dpsi_dtheta - csc2 * d2psi_dphi2) / psi
}

/// The m = 0 azimuthal contribution to the Eq.-7 numerator; identically zero,
/// kept as an explicit term so m ≠ 0 states slot in later.
pub fn azimuthal_term(_state: &RotorState, _theta: f64) -> f64 {
    0.0
}

/// Approximate postselected time dependence: the phase factor
/// exp(-i t/(2ma²) · L̃²(θ)) attached to ψ(θ, 0). NaN (as complex) at
/// singular θ.
pub fn rotor_time_phase(state: &RotorState, theta: f64, t: f64) -> Complex64 {
    let l2 = local_l2(state, theta);
    if l2.is_nan() {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    Complex64::new(0.0, -t / (2.0 * state.mass_length_sq) * l2).exp()
}

/// Exact evolution of the unnormalized state:
/// ψ(θ, t) = P₀ e^{-iE₀t} + c P₁(cosθ) e^{-iE₁t}, E_l = l(l+1)/(2ma²).
pub fn rotor_exact_evolution(state: &RotorState, theta: f64, t: f64) -> Complex64 {
    let (e0, e1) = state.energies();
    let u = theta.cos();
    Complex64::new(0.0, -e0 * t).exp() + state.c * u * Complex64::new(0.0, -e1 * t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_anchors() {
        let st = RotorState::new(0.5, 1.0).unwrap();
        assert!(local_l2(&st, PI / 2.0).abs() < 1e-12);
        assert!((local_l2(&st, PI) - (-2.0)).abs() < 1e-12);
        // Frozen from the closed form at θ = 3π/4.
        assert!((local_l2(&st, 3.0 * PI / 4.0) - (-1.093836321356054)).abs() < 1e-12);

        let st = RotorState::new(0.3, 1.0).unwrap();
        assert!((local_l2(&st, 2.0) - (-0.2853069812338727)).abs() < 1e-12);
    }

    #[test]
    fn divergence_at_pi_for_c_one() {
        let st = RotorState::new(1.0, 1.0).unwrap();
        assert!(local_l2(&st, PI).is_nan());
        assert!(local_l2_generic(&st, PI).is_nan());
        assert!(rotor_time_phase(&st, PI, 0.3).re.is_nan());
    }

    #[test]
    fn generic_matches_closed_form() {
        for &c in &[0.2, 0.5, 0.9, 1.3] {
            let st = RotorState::new(c, 1.0).unwrap();
            for i in 1..100 {
                let theta = PI * i as f64 / 100.0;
                let a = local_l2(&st, theta);
                let b = local_l2_generic(&st, theta);
                if a.is_nan() || b.is_nan() {
                    assert!(a.is_nan() && b.is_nan());
                    continue;
                }
                assert!(
                    (a - b).abs() <= 1e-9 * a.abs().max(1.0),
                    "c={c} θ={theta}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn sign_pattern_for_small_c() {
        let st = RotorState::new(0.5, 1.0).unwrap();
        for i in 1..50 {
            let theta = (PI / 2.0) * i as f64 / 50.0;
            assert!(local_l2(&st, theta) >= 0.0, "θ={theta} should be non-super");
        }
        for i in 1..=50 {
            let theta = PI / 2.0 + (PI / 2.0) * i as f64 / 50.0;
            assert!(local_l2(&st, theta) < 0.0, "θ={theta} should be negative");
        }
    }

    #[test]
    fn azimuthal_term_is_zero_for_m0() {
        let st = RotorState::new(0.7, 1.0).unwrap();
        for i in 1..20 {
            assert_eq!(azimuthal_term(&st, PI * i as f64 / 20.0), 0.0);
        }
    }

    #[test]
    fn time_phase_anchors() {
        let st = RotorState::new(0.5, 1.0).unwrap();
        for theta in [0.3, 1.2, 2.8] {
            assert!((rotor_time_phase(&st, theta, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
        for t in [0.0, 0.7, 5.0] {
            let z = rotor_time_phase(&st, PI / 2.0, t);
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        // θ = 3π/4: frequency L̃²/(2ma²) sits outside [0, ħ/ma²].
        let freq = local_l2(&st, 3.0 * PI / 4.0) / 2.0;
        assert!(freq < 0.0);
    }

    #[test]
    fn exact_evolution_anchors() {
        let st = RotorState::new(0.5, 1.0).unwrap();
        let z = rotor_exact_evolution(&st, 0.9, 0.0);
        assert!((z.re - (1.0 + 0.5 * 0.9f64.cos())).abs() < 1e-14);
        assert!(z.im.abs() < 1e-14);
        // θ = 0: 1 + c e^{-i 2t/(2ma²)}.
        let t = 1.37;
        let want = Complex64::new(1.0, 0.0) + 0.5 * Complex64::new(0.0, -t).exp();
        assert!((rotor_exact_evolution(&st, 0.0, t) - want).norm() < 1e-14);
    }

    #[test]
    fn phase_approximation_is_second_order_in_time() {
        // |exact - phase·ψ(θ,0)| should scale as t² as t halves.
        let st = RotorState::new(0.5, 1.0).unwrap();
        let theta: f64 = 2.0;
        let psi0 = 1.0 + 0.5 * theta.cos();
        let err = |t: f64| {
            (rotor_exact_evolution(&st, theta, t) - rotor_time_phase(&st, theta, t) * psi0).norm()
        };
        let ratio = err(1e-2) / err(5e-3);
        assert!((ratio - 4.0).abs() < 0.5, "Richardson ratio {ratio}");
    }

    #[test]
    fn local_time_frequency_matches_l2_at_t0() {
        // Im[i ∂_t ln ψ(θ,t)]|_{t=0}... i.e. the weak value of i∂_t equals
        // L̃²/(2ma²) at t = 0; use a central difference in t on the exact
        // evolution.
        let st = RotorState::new(0.5, 2.0).unwrap();
        for &theta in &[0.4, 1.1, 2.0, 2.9] {
            let h = 1e-6;
            let fp = rotor_exact_evolution(&st, theta, h);
            let fm = rotor_exact_evolution(&st, theta, -h);
            let f0 = rotor_exact_evolution(&st, theta, 0.0);
            let dlog = (fp - fm) / (2.0 * h) / f0;
            let freq = (Complex64::i() * dlog).re;
            let want = local_l2(&st, theta) / (2.0 * st.mass_length_sq);
            assert!(
                (freq - want).abs() < 1e-8 * want.abs().max(1.0),
                "θ={theta}: {freq} vs {want}"
            );
        }
    }
}
