//! Shifted Gegenbauer (ultraspherical) polynomial families.
//!
//! `G_i(t) = C_i^{(λ)}(μ(t))` with `μ(t) = (2t - a - b)/(b - a)` maps the
//! classical family from [-1, 1] onto the domain `[a, b]`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::fractional::caputo_monomial_coefficient;

/// Largest basis size supported by the monomial route.
pub const MAX_BASIS_SIZE: usize = 32;

/// Parameters with `|λ|` below this are rejected: the explicit formula carries
/// `Γ(λ)` in its denominator and the family collapses as `λ → 0`.
pub const LAMBDA_ZERO_EXCLUSION: f64 = 1e-3;

const COEFF_LIMIT: f64 = 1e300;

/// Validates a Gegenbauer parameter.
pub fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= -0.5 {
        return Err(Error::Domain(format!(
            "Gegenbauer parameter must exceed -1/2, got {lambda}"
        )));
    }
    if lambda.abs() < LAMBDA_ZERO_EXCLUSION {
        return Err(Error::Domain(format!(
            "Gegenbauer parameter {lambda} is too close to 0 where the family degenerates; \
             use lambda = 0.5 for Legendre polynomials"
        )));
    }
    Ok(())
}

/// Values `C_0^{(λ)}(y), …, C_{n-1}^{(λ)}(y)` written into `out`.
fn recurrence_into(lambda: f64, y: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = 1.0;
    if n == 1 {
        return;
    }
    out[1] = 2.0 * lambda * y;
    for k in 1..n - 1 {
        let kf = k as f64;
        out[k + 1] = (2.0 * y * (kf + lambda) * out[k] - (kf + 2.0 * lambda - 1.0) * out[k - 1])
            / (kf + 1.0);
    }
}

/// Single value `C_n^{(λ)}(y)`.
fn gegenbauer_value(lambda: f64, n: usize, y: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    recurrence_into(lambda, y, &mut buf);
    buf[n]
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// A shifted Gegenbauer family `G_0, …, G_{d-1}` on `[a, b]`.
#[derive(Debug, Clone)]
pub struct GegenbauerBasis {
    lambda: f64,
    size: usize,
    domain: (f64, f64),
    monomials: OnceLock<Result<Monomials>>,
}

/// Monomial coefficients in double-double precision, with rounded copies.
#[derive(Debug, Clone)]
struct Monomials {
    exact: Vec<Vec<Dd>>,
    rounded: Vec<Vec<f64>>,
}

/// `Σ_j coeffs[j] t^j` by Horner's rule in double-double arithmetic.
fn horner(coeffs: &[Dd], t: f64) -> Dd {
    coeffs.iter().rev().fold(Dd::ZERO, |acc, &c| acc * t + c)
}

impl GegenbauerBasis {
    pub fn new(lambda: f64, size: usize, domain: (f64, f64)) -> Result<Self> {
        check_lambda(lambda)?;
        if size == 0 || size > MAX_BASIS_SIZE {
            return Err(Error::Domain(format!(
                "basis size must lie in 1..={MAX_BASIS_SIZE}, got {size}"
            )));
        }
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::Domain(format!(
                "basis domain [{a}, {b}] must satisfy a < b"
            )));
        }
        Ok(Self {
            lambda,
            size,
            domain,
            monomials: OnceLock::new(),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Slope of the affine map `μ`.
    pub fn scale(&self) -> f64 {
        2.0 / (self.domain.1 - self.domain.0)
    }

    /// The affine map from the domain onto [-1, 1].
    pub fn mu(&self, t: f64) -> f64 {
        let (a, b) = self.domain;
        (2.0 * t - a - b) / (b - a)
    }

    /// Inverse of [`Self::mu`].
    pub fn mu_inverse(&self, y: f64) -> f64 {
        let (a, b) = self.domain;
        0.5 * ((b - a) * y + a + b)
    }

    /// `[G_0(t), …, G_{d-1}(t)]` by the three-term recurrence at `μ(t)`.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.size];
        recurrence_into(self.lambda, self.mu(t), &mut out);
        out
    }

    /// Lower-triangular matrix `M` with `G_i(t) = Σ_m M[i][m] t^m`.
    ///
    /// Computed once from the explicit sum over `(2μ)^{i-2k}` and re-expanded in
    /// powers of `t` through the binomial theorem. On domains away from the
    /// origin the coefficients grow like `(|a| + |b|)^i / (b - a)^i` with
    /// alternating signs, so they are built and used in double-double
    /// precision; the values returned here are those coefficients rounded to
    /// `f64`.
    pub fn monomial_coefficients(&self) -> Result<&[Vec<f64>]> {
        Ok(&self.monomials()?.rounded)
    }

    fn monomials(&self) -> Result<&Monomials> {
        self.monomials
            .get_or_init(|| self.compute_monomials())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_monomials(&self) -> Result<Monomials> {
        let d = self.size;
        let lambda = self.lambda;
        let (a, b) = self.domain;
        let width = Dd::from(b) - Dd::from(a);
        let s = Dd::from(2.0) / width;
        let c = -(Dd::from(a) + Dd::from(b)) / width;
        let overflow = |what: &str, v: Dd| -> Result<()> {
            if !v.is_finite() || v.hi.abs() > COEFF_LIMIT {
                Err(Error::Overflow(format!(
                    "{what} coefficient magnitude {:e} exceeds 1e300",
                    v.hi
                )))
            } else {
                Ok(())
            }
        };
        let s_pow: Vec<Dd> = (0..d).map(|m| s.powi(m as u32)).collect();
        let c_pow: Vec<Dd> = (0..d).map(|m| c.powi(m as u32)).collect();
        let factorial = |n: usize| (1..=n).fold(Dd::ONE, |acc, j| acc * j as f64);

        let mut exact = vec![vec![Dd::ZERO; d]; d];
        for (n, row) in exact.iter_mut().enumerate() {
            // coefficients of C_n in powers of μ
            let mut in_mu = vec![Dd::ZERO; n + 1];
            for k in 0..=n / 2 {
                // Γ(n-k+λ)/Γ(λ) as a rising factorial keeps negative λ usable
                let rising = (0..n - k).fold(Dd::ONE, |acc, j| acc * (Dd::from(lambda) + j as f64));
                let value =
                    rising / (factorial(k) * factorial(n - 2 * k)) * 2f64.powi((n - 2 * k) as i32);
                let value = if k % 2 == 0 { value } else { -value };
                overflow("explicit-formula", value)?;
                in_mu[n - 2 * k] = value;
            }
            // substitute μ = s t + c
            for m in 0..=n {
                let mut acc = Dd::ZERO;
                for (k, &coef) in in_mu.iter().enumerate().skip(m) {
                    if coef != Dd::ZERO {
                        acc = acc + coef * binomial(k, m) * s_pow[m] * c_pow[k - m];
                    }
                }
                overflow("monomial", acc)?;
                row[m] = acc;
            }
        }
        let rounded = exact
            .iter()
            .map(|row| row.iter().map(|v| v.to_f64()).collect())
            .collect();
        Ok(Monomials { exact, rounded })
    }

    /// Evaluates the family through the monomial coefficients.
    pub fn eval_monomial(&self, t: f64) -> Result<Vec<f64>> {
        let m = self.monomials()?;
        Ok(m.exact
            .iter()
            .enumerate()
            .map(|(i, row)| horner(&row[..=i], t).to_f64())
            .collect())
    }

    /// `k`-th derivative of every basis function at `t`.
    ///
    /// Uses `d/dy C_n^{(λ)} = 2λ C_{n-1}^{(λ+1)}` repeatedly, so the `k`-th
    /// derivative is `s^k 2^k (λ)_k C_{n-k}^{(λ+k)}(μ(t))`.
    pub fn derivative(&self, t: f64, k: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.size];
        if k == 0 {
            recurrence_into(self.lambda, self.mu(t), &mut out);
            return out;
        }
        if k >= self.size {
            return out;
        }
        let factor = (0..k).fold(1.0, |acc, j| {
            acc * 2.0 * (self.lambda + j as f64) * self.scale()
        });
        recurrence_into(self.lambda + k as f64, self.mu(t), &mut out[k..]);
        for v in &mut out[k..] {
            *v *= factor;
        }
        out
    }

    /// Caputo derivative of order `alpha` (lower terminal 0) of every basis function.
    ///
    /// Term-wise on the monomial expansion: `D^α t^m = Γ(m+1)/Γ(m+1-α) t^{m-α}`
    /// for `m ≥ ⌈α⌉`, and 0 below. The surviving factors are written as
    /// `Γ(m₀+1)/Γ(m₀+1-α) · r_m` with `m₀ = ⌈α⌉` and the ratio
    /// `r_m = Π_{j=m₀+1}^{m} j/(j-α)` carried in double-double, so the only
    /// rounded Gamma value is a common factor that cancellation cannot amplify.
    pub fn caputo(&self, t: f64, alpha: f64) -> Result<Vec<f64>> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Domain(format!(
                "Caputo order must be non-negative, got {alpha}"
            )));
        }
        if !t.is_finite() {
            return Err(Error::Domain(format!(
                "Caputo derivative requested at non-finite t = {t}"
            )));
        }
        let integer_order = alpha.fract() == 0.0;
        if !integer_order && t < 0.0 {
            return Err(Error::Domain(format!(
                "fractional Caputo derivative is undefined for t = {t} < 0"
            )));
        }
        let monomials = self.monomials()?;
        let lowest = alpha.ceil() as usize;
        let mut out = vec![0.0; self.size];
        if lowest >= self.size {
            return Ok(out);
        }
        let exponent = lowest as f64 - alpha;
        let lead = caputo_monomial_coefficient(lowest, alpha);
        let scale = if exponent == 0.0 {
            lead
        } else if t == 0.0 {
            if exponent > 0.0 {
                return Ok(out);
            }
            return Err(Error::Singularity { t, exponent });
        } else {
            lead * t.powf(exponent)
        };
        let mut ratios = vec![Dd::ONE; self.size - lowest];
        for j in 1..ratios.len() {
            let m = (lowest + j) as f64;
            ratios[j] = ratios[j - 1] * (Dd::from(m) / (Dd::from(m) - Dd::from(alpha)));
        }
        for (i, row) in monomials.exact.iter().enumerate().skip(lowest) {
            let shifted: Vec<Dd> = row[lowest..=i]
                .iter()
                .zip(&ratios)
                .map(|(&c, &r)| c * r)
                .collect();
            out[i] = scale * horner(&shifted, t).to_f64();
        }
        Ok(out)
    }

    /// The `n` roots of `G_n`, ascending, inside the domain.
    ///
    /// Golub–Welsch: eigenvalues of the symmetric Jacobi matrix of the
    /// orthonormalised recurrence, polished with a few Newton steps.
    pub fn roots(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 || n >= MAX_BASIS_SIZE {
            return Err(Error::Domain(format!(
                "root count must lie in 1..{MAX_BASIS_SIZE}, got {n}"
            )));
        }
        let lambda = self.lambda;
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for j in 1..n {
            let jf = j as f64;
            let off = (jf * (jf + 2.0 * lambda - 1.0)
                / (4.0 * (jf + lambda) * (jf + lambda - 1.0)))
                .sqrt();
            jacobi[(j, j - 1)] = off;
            jacobi[(j - 1, j)] = off;
        }
        let eig =
            SymmetricEigen::try_new(jacobi, f64::EPSILON, 1000).ok_or(Error::NoConvergence {
                what: "Jacobi-matrix eigen-solve",
                iterations: 1000,
            })?;
        let mut ys: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ys.sort_by(f64::total_cmp);
        for y in &mut ys {
            for _ in 0..3 {
                let value = gegenbauer_value(lambda, n, *y);
                let slope = 2.0 * lambda * gegenbauer_value(lambda + 1.0, n - 1, *y);
                if slope == 0.0 {
                    break;
                }
                let step = value / slope;
                if !step.is_finite() || step.abs() > 1e-6 {
                    break;
                }
                *y -= step;
            }
        }
        Ok(ys.into_iter().map(|y| self.mu_inverse(y)).collect())
    }

    /// `C_n^{(λ)}` at the mapped point, for checking roots.
    pub fn degree_value(&self, n: usize, t: f64) -> f64 {
        gegenbauer_value(self.lambda, n, self.mu(t))
    }
}

/// Gegenbauer kernel `K(t, s) = Σ_j G_j(t) G_j(s)`.
pub fn kernel_value(basis: &GegenbauerBasis, t: f64, s: f64) -> f64 {
    basis
        .eval(t)
        .iter()
        .zip(basis.eval(s))
        .map(|(a, b)| a * b)
        .sum()
}
