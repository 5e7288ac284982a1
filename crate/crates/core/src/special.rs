//! Gamma function, Legendre polynomials and Gauss–Legendre rules.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
// the published coefficients, digits kept as printed
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest rule order accepted by [`gauss_legendre`].
pub const MAX_QUADRATURE_ORDER: usize = 64;

/// Gamma function for positive finite arguments.
///
/// Integer arguments up to 30 are computed as exact products; everything else
/// goes through the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula below 1/2.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma requires a positive finite argument, got {x}"
        )));
    }
    if x.fract() == 0.0 && x <= 30.0 {
        let n = x as u32;
        return Ok((1..n).fold(1.0, |acc, k| acc * f64::from(k)));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // split the power so large arguments do not overflow before the exp factor
    let half = t.powf((z + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * ((-t).exp() * half) * series
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
pub fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    let (mut dp_prev, mut dp) = (0.0, 1.0);
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k holds on the closed interval, endpoints included
        let dp_next = dp_prev + (2.0 * kf + 1.0) * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp)
}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Ascending nodes in (-1, 1).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over [-1, 1].
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affine copy of the rule on `[a, b]`, weights scaled by `(b - a) / 2`.
    pub fn map_to(&self, a: f64, b: f64) -> Result<MappedRule> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::Domain(format!(
                "quadrature interval [{a}, {b}] must satisfy a < b"
            )));
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Ok(MappedRule {
            nodes: self.nodes.iter().map(|&x| half * x + mid).collect(),
            weights: self.weights.iter().map(|&w| half * w).collect(),
        })
    }
}

/// A quadrature rule carried over to a general interval.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl MappedRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Acceptable `|P_q(x)|` at a computed root: 1e-14, or a few ulps of the
/// slope where `P'_q` is steep enough that one ulp in `x` already exceeds it.
fn root_tolerance(slope: f64) -> f64 {
    1e-14_f64.max(4.0 * f64::EPSILON * slope.abs())
}

/// Gauss–Legendre rule of order `q` (1 ≤ q ≤ 64).
///
/// Roots of `P_q` by Newton iteration started from `cos(π(j + 0.75)/(q + 0.5))`;
/// weights `2 / ((1 - x²) P'_q(x)²)`.
pub fn gauss_legendre(q: usize) -> Result<QuadratureRule> {
    if q == 0 || q > MAX_QUADRATURE_ORDER {
        return Err(Error::Domain(format!(
            "quadrature order must lie in 1..={MAX_QUADRATURE_ORDER}, got {q}"
        )));
    }
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let half = q.div_ceil(2);
    for j in 0..half {
        let mut x = (PI * (j as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_eval(q, x);
            let step = p / dp;
            x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            // the iteration can stall one ulp away; accept a residual at round-off level
            let (p, dp) = legendre_eval(q, x);
            if p.abs() > root_tolerance(dp) {
                return Err(Error::NoConvergence {
                    what: "Legendre root Newton iteration",
                    iterations: 100,
                });
            }
        }
        let (_, dp) = legendre_eval(q, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // j-th guess is the j-th largest root
        nodes[q - 1 - j] = x;
        weights[q - 1 - j] = w;
        nodes[j] = -x;
        weights[j] = w;
    }
    if q % 2 == 1 {
        let mid = q / 2;
        nodes[mid] = 0.0;
        let (_, dp) = legendre_eval(q, 0.0);
        weights[mid] = 2.0 / (dp * dp);
    }
    Ok(QuadratureRule { nodes, weights })
}
