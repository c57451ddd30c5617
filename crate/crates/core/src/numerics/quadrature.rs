use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre quadrature nodes and weights on an interval.
///
/// A single rule of order n integrates polynomials up to degree 2n-1
/// exactly. [`QuadratureRule::composite_gauss_legendre`] chains panels of a
/// fixed order for long intervals; exactness then holds per panel.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

/// Nodes and weights of the order-n rule on the reference interval [-1, 1],
/// by Newton iteration on P_n from good initial guesses.
fn reference_rule(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_{n-1}(x) by Bonnet recurrence.
            let mut p_prev = 1.0;
            let mut p = x;
            for k in 1..n {
                let kf = k as f64;
                let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
                p_prev = p;
                p = p_next;
            }
            dp = nf * (p_prev - x * p) / (1.0 - x * x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // Symmetric pair; the weight formula uses the converged derivative.
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

impl QuadratureRule {
    /// The order-point Gauss–Legendre rule mapped to (a, b).
    pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Result<Self> {
        if order < 2 {
            return Err(Error::Domain(format!("quadrature order {order} < 2")));
        }
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::Domain(format!("quadrature interval: a = {a} >= b = {b}")));
        }
        let (xr, wr) = reference_rule(order);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Ok(Self {
            nodes: xr.iter().map(|x| mid + half * x).collect(),
            weights: wr.iter().map(|w| half * w).collect(),
            interval: (a, b),
        })
    }

    /// `panels` equal subintervals of (a, b), each carrying the order-point
    /// rule. The reference rule is built once and affinely mapped.
    pub fn composite_gauss_legendre(order: usize, panels: usize, a: f64, b: f64) -> Result<Self> {
        if order < 2 {
            return Err(Error::Domain(format!("quadrature order {order} < 2")));
        }
        if panels == 0 {
            return Err(Error::Domain("quadrature: zero panels".into()));
        }
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::Domain(format!("quadrature interval: a = {a} >= b = {b}")));
        }
        let (xr, wr) = reference_rule(order);
        let len = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(order * panels);
        let mut weights = Vec::with_capacity(order * panels);
        for p in 0..panels {
            let lo = a + p as f64 * len;
            let half = 0.5 * len;
            let mid = lo + half;
            for (x, w) in xr.iter().zip(&wr) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Ok(Self {
            nodes,
            weights,
            interval: (a, b),
        })
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Complex64::new(0.0, 0.0), |acc, (&x, &w)| acc + w * f(x))
    }
}
