use std::f64::consts::PI;

use num_complex::Complex64;

use super::log_complex::LogComplex;
use crate::error::{Error, Result};

/// Stirling correction s(x) in ln x! = x ln x - x + ln(2πx)/2 + s(x).
/// Machine-accurate for x >= 35 with terms through x^-9.
fn stirling_correction(x: f64) -> f64 {
    let x2 = x * x;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * x2)) / x2) / x2) / x2)
        / x
}

/// ln n! — exact u128 product for small n, Stirling series above.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 33 {
        let mut p: u128 = 1;
        for k in 2..=n as u128 {
            p *= k;
        }
        return (p as f64).ln();
    }
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + stirling_correction(x)
}

/// ln C(n, k) with relative error well under 1e-12 up to n = 10^6.
///
/// Small min(k, n-k) is summed directly; otherwise the Stirling series is
/// combined so the leading entropy terms never cancel (the naive
/// ln-gamma difference loses ~7 digits at n = 10^6).
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("log_binomial: k = {k} > n = {n}")));
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(0.0);
    }
    if k <= 64 {
        let mut acc = 0.0;
        for i in 1..=k {
            acc += ((n - k + i) as f64).ln() - (i as f64).ln();
        }
        return Ok(acc);
    }
    let (nf, kf, mf) = (n as f64, k as f64, (n - k) as f64);
    let entropy = kf * (nf / kf).ln() + mf * (nf / mf).ln();
    let sqrt_term = 0.5 * (nf / (2.0 * PI * kf * mf)).ln();
    Ok(entropy + sqrt_term + stirling_correction(nf) - stirling_correction(kf)
        - stirling_correction(mf))
}

fn signed_log(log_abs: f64, sign: f64) -> LogComplex {
    if sign == 0.0 || log_abs == f64::NEG_INFINITY {
        LogComplex::ZERO
    } else {
        LogComplex::new(log_abs, if sign < 0.0 { PI } else { 0.0 })
    }
}

/// All physicists' Hermite polynomials H_0(z) ... H_n(z) as signed log
/// values, from the three-term recurrence H_{k+1} = 2z H_k - 2k H_{k-1}
/// carried in log-magnitude/sign form so nothing overflows.
pub fn hermite_log_sequence(n: u64, z: f64) -> Vec<LogComplex> {
    let mut out = Vec::with_capacity(n as usize + 1);
    // (log|H|, sign)
    let mut prev = (f64::NEG_INFINITY, 0.0); // H_{-1} = 0
    let mut cur = (0.0f64, 1.0f64); // H_0 = 1
    out.push(signed_log(cur.0, cur.1));
    let ln_2z = (2.0 * z.abs()).ln();
    let sign_2z = if z < 0.0 { -1.0 } else { 1.0 };
    for k in 0..n {
        let t1 = (ln_2z + cur.0, sign_2z * cur.1);
        let t2 = ((2.0 * k as f64).ln() + prev.0, -prev.1);
        let m = t1.0.max(t2.0);
        let next = if m == f64::NEG_INFINITY {
            (f64::NEG_INFINITY, 0.0)
        } else {
            let r = t1.1 * (t1.0 - m).exp() + t2.1 * (t2.0 - m).exp();
            if r == 0.0 {
                (f64::NEG_INFINITY, 0.0)
            } else {
                (m + r.abs().ln(), r.signum())
            }
        };
        prev = cur;
        cur = next;
        out.push(signed_log(cur.0, cur.1));
    }
    out
}

/// H_n(z) as a signed log value (phase 0 or π).
pub fn hermite_log(n: u64, z: f64) -> LogComplex {
    hermite_log_sequence(n, z)[n as usize]
}

/// H_n(x) at complex argument, in log-polar form.
///
/// Forward recurrence on LogComplex values; stable both in the oscillatory
/// disc |x| < sqrt(2n) and in the growth region outside it. This is the
/// kernel of the exact time-evolution resummation, where the argument sits
/// near (g + zw)/sqrt(1 + w²) with |1 + w²| as small as machine epsilon.
pub fn hermite_complex_log(n: u64, x: Complex64) -> LogComplex {
    let two_x = LogComplex::from_complex(2.0 * x);
    let mut prev = LogComplex::ZERO; // H_{-1}
    let mut cur = LogComplex::ONE; // H_0
    for k in 0..n {
        let t1 = two_x * cur;
        let t2 = prev.scale_ln((2.0 * k as f64).ln()); // 2k H_{k-1}
        // H_{k+1} = t1 - t2
        let next = t1 + LogComplex::new(t2.log_mag, t2.phase + PI);
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal oscillator eigenfunctions φ_0(y) ... φ_n(y) at dimensionless
/// argument y, from the normalized recurrence
/// φ_{k+1} = sqrt(2/(k+1)) y φ_k - sqrt(k/(k+1)) φ_{k-1},
/// φ_0 = π^{-1/4} exp(-y²/2). Never overflows for any n.
pub fn hermite_function_sequence(n: u64, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut prev = 0.0f64;
    let mut cur = PI.powf(-0.25) * (-0.5 * y * y).exp();
    out.push(cur);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// φ_n(y), the unit-norm oscillator eigenfunction at dimensionless argument.
pub fn hermite_function(n: u64, y: f64) -> f64 {
    // One running pair instead of the full table.
    let mut prev = 0.0f64;
    let mut cur = PI.powf(-0.25) * (-0.5 * y * y).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Legendre polynomials P_0(u) ... P_l(u) with first and second derivatives,
/// via the Bonnet recurrence plus P'_{l+1} = (l+1) P_l + u P'_l and its
/// derivative. Valid on [-1, 1] including the endpoints.
pub fn legendre_with_derivatives(l: u64, u: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("legendre: |u| > 1 (u = {u})")));
    }
    let n = l as usize + 1;
    let mut p = vec![0.0; n];
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    p[0] = 1.0;
    if l == 0 {
        return Ok((p, d1, d2));
    }
    p[1] = u;
    d1[1] = 1.0;
    for k in 1..l as usize {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * u * p[k] - kf * p[k - 1]) / (kf + 1.0);
        d1[k + 1] = (kf + 1.0) * p[k] + u * d1[k];
        d2[k + 1] = (kf + 2.0) * d1[k] + u * d2[k];
    }
    Ok((p, d1, d2))
}

/// Legendre polynomial P_l(u), |u| <= 1.
pub fn legendre_p(l: u64, u: f64) -> Result<f64> {
    let (p, _, _) = legendre_with_derivatives(l, u)?;
    Ok(p[l as usize])
}
