use std::f64::consts::{PI, TAU};
use std::ops::{Add, Div, Mul};

use num_complex::Complex64;

/// Two operands whose log-magnitudes differ by more than this are added by
/// returning the larger one unchanged (the smaller is below 1 ulp anyway:
/// exp(-800) ~ 1e-348 < f64 epsilon relative to anything).
const ADD_CUTOFF: f64 = 800.0;

/// A complex value stored as (natural log of magnitude, phase).
///
/// `log_mag = -inf` encodes exact zero. The phase is kept canonical in
/// `(-π, π]` after every operation so that N-fold products cannot drift.
/// Use this wherever magnitudes leave the native f64 range; the sequence
/// coefficients of the N = 1000 oscillator construction reach exp(±3000).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log_mag,
            phase: canonical_phase(phase),
        }
    }

    /// A positive real magnitude given as its natural log.
    pub fn from_log_mag(log_mag: f64) -> Self {
        Self::new(log_mag, 0.0)
    }

    /// A signed real value (phase 0 or π).
    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(x.abs().ln(), if x < 0.0 { PI } else { 0.0 })
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            Self::ZERO
        } else {
            Self::new(z.norm().ln(), z.arg())
        }
    }

    /// Back to native complex. Overflows to infinity past `log_mag ~ 709`.
    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.log_mag.exp();
        Complex64::new(m * self.phase.cos(), m * self.phase.sin())
    }

    /// Native complex value of `self * exp(delta)`: the usual way to bring a
    /// max-factored quantity back into f64 range.
    pub fn to_complex_shifted(self, delta: f64) -> Complex64 {
        self.scale_ln(delta).to_complex()
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn conj(self) -> Self {
        Self::new(self.log_mag, -self.phase)
    }

    /// Multiply by exp(delta) without touching the phase.
    pub fn scale_ln(self, delta: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            Self::new(self.log_mag + delta, self.phase)
        }
    }

    /// Max-factored sum of many terms: the largest log-magnitude is pulled
    /// out, residuals are summed in native complex, and the factor is
    /// restored. Relative error is bounded by machine epsilon times the
    /// term count *on the scale of the largest term*.
    pub fn sum(terms: &[LogComplex]) -> LogComplex {
        Self::sum_with_scale(terms).0
    }

    /// As [`LogComplex::sum`], but also returns the log of the dominant-term
    /// scale (the natural error scale of the summation), `-inf` if all terms
    /// vanish.
    pub fn sum_with_scale(terms: &[LogComplex]) -> (LogComplex, f64) {
        let mut max_lm = f64::NEG_INFINITY;
        for t in terms {
            if t.log_mag > max_lm {
                max_lm = t.log_mag;
            }
        }
        if max_lm == f64::NEG_INFINITY {
            return (Self::ZERO, max_lm);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in terms {
            if t.is_zero() {
                continue;
            }
            let r = (t.log_mag - max_lm).exp();
            acc += Complex64::new(r * t.phase.cos(), r * t.phase.sin());
        }
        if acc.re == 0.0 && acc.im == 0.0 {
            return (Self::ZERO, max_lm);
        }
        (Self::new(max_lm + acc.norm().ln(), acc.arg()), max_lm)
    }
}

/// Wrap a phase into the canonical interval `(-π, π]`.
pub(crate) fn canonical_phase(p: f64) -> f64 {
    if p > -PI && p <= PI {
        return p;
    }
    let q = p.rem_euclid(TAU);
    if q > PI {
        q - TAU
    } else {
        q
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;

    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        // Dividing by zero gives +inf magnitude; callers that care check first.
        Self::new(self.log_mag - rhs.log_mag, self.phase - rhs.phase)
    }
}

impl Add for LogComplex {
    type Output = LogComplex;

    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if big.log_mag - small.log_mag > ADD_CUTOFF {
            return big;
        }
        let r = (small.log_mag - big.log_mag).exp();
        let z = Complex64::new(big.phase.cos(), big.phase.sin())
            + r * Complex64::new(small.phase.cos(), small.phase.sin());
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        Self::new(big.log_mag + z.norm().ln(), z.arg())
    }
}
