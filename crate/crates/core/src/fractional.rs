//! Caputo coefficients for monomials and the quadrature-discretised
//! distributed-order operator.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gegenbauer::GegenbauerBasis;
use crate::problem::Coef;
use crate::special::{gamma, gauss_legendre, MappedRule};

/// Factor `c` in `D^α t^m = c t^{m-α}` (Caputo, lower terminal 0).
///
/// Zero whenever `m < ⌈α⌉`: the `⌈α⌉`-th classical derivative inside the
/// Caputo integral already annihilates `t^m`.
pub fn caputo_monomial_coefficient(m: usize, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return 1.0;
    }
    let ceil = alpha.ceil();
    if (m as f64) < ceil {
        return 0.0;
    }
    if alpha.fract() == 0.0 {
        // m!/(m-α)! exactly
        let k = alpha as usize;
        return ((m - k + 1)..=m).fold(1.0, |acc, j| acc * j as f64);
    }
    let mf = m as f64;
    // both arguments are >= 1 after the degree-kill check
    gamma(mf + 1.0).expect("positive argument")
        / gamma(mf - alpha + 1.0).expect("positive argument")
}

/// Density `φ(θ)` of a distributed-order term.
pub type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `coef(point) · ∫_a^b φ(θ) D^θ u dθ`, discretised by a Gauss–Legendre rule in θ.
#[derive(Clone)]
pub struct DistributedTerm {
    phi: Density,
    lower: f64,
    upper: f64,
    quadrature_order: usize,
    pub coef: Coef,
    rule: OnceLock<Result<MappedRule>>,
}

impl fmt::Debug for DistributedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistributedTerm")
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("quadrature_order", &self.quadrature_order)
            .field("coef", &self.coef)
            .finish_non_exhaustive()
    }
}

impl DistributedTerm {
    pub fn new(
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lower: f64,
        upper: f64,
        quadrature_order: usize,
    ) -> Result<Self> {
        Self::from_density(Arc::new(phi), lower, upper, quadrature_order)
    }

    pub fn from_density(
        phi: Density,
        lower: f64,
        upper: f64,
        quadrature_order: usize,
    ) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower >= upper {
            return Err(Error::Domain(format!(
                "order interval [{lower}, {upper}] must satisfy lower < upper"
            )));
        }
        if lower < 0.0 {
            return Err(Error::Domain(format!(
                "Caputo orders must be non-negative, got lower bound {lower}"
            )));
        }
        if quadrature_order == 0 {
            return Err(Error::Domain("quadrature order must be positive".into()));
        }
        Ok(Self {
            phi,
            lower,
            upper,
            quadrature_order,
            coef: Coef::ONE,
            rule: OnceLock::new(),
        })
    }

    pub fn with_coef(mut self, coef: Coef) -> Self {
        self.coef = coef;
        self
    }

    /// Same term discretised with a different rule order.
    pub fn with_quadrature_order(&self, order: usize) -> Result<Self> {
        Ok(
            Self::from_density(self.phi.clone(), self.lower, self.upper, order)?
                .with_coef(self.coef.clone()),
        )
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature_order
    }

    pub fn density(&self, theta: f64) -> f64 {
        (self.phi)(theta)
    }

    /// Mapped nodes θ̂_j and weights `(b - a)/2 · ω_j`, built on first use.
    pub fn rule(&self) -> Result<&MappedRule> {
        self.rule
            .get_or_init(|| gauss_legendre(self.quadrature_order)?.map_to(self.lower, self.upper))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `∫ φ(θ) D^θ G_i(t) dθ` for every basis function, by the θ-quadrature.
    ///
    /// The term coefficient is not applied here.
    pub fn basis_row(&self, basis: &GegenbauerBasis, t: f64) -> Result<Vec<f64>> {
        let rule = self.rule()?;
        let mut row = vec![0.0; basis.size()];
        for (&theta, &w) in rule.nodes.iter().zip(&rule.weights) {
            let phi = self.density(theta);
            if !phi.is_finite() {
                return Err(Error::NonFinite {
                    what: "distributed-order density".into(),
                    location: format!("theta = {theta}"),
                });
            }
            if phi == 0.0 {
                continue;
            }
            let caputo = basis.caputo(t, theta)?;
            for (r, c) in row.iter_mut().zip(caputo) {
                *r += w * phi * c;
            }
        }
        Ok(row)
    }
}

/// Free-function form of [`DistributedTerm::basis_row`].
pub fn distributed_basis_row(
    term: &DistributedTerm,
    basis: &GegenbauerBasis,
    t: f64,
) -> Result<Vec<f64>> {
    term.basis_row(basis, t)
}
