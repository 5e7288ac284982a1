//! Regularised normal-equation solves.
//!
//! Both routes factor their Gram matrix with a dense Cholesky decomposition
//! and then apply iterative refinement. With `γ = 1e12` the shift `I/γ` is far
//! below the rounding level of the Gram matrix, so a single back-substitution
//! is not enough:
//!
//! * in the dual route an over-determined `Z` leaves `ZZᵀ` rank deficient, and
//!   `β` picks up a component of size `γ · ‖ρ - Zw‖` in the null space of
//!   `Zᵀ`. Recovering `w = Zᵀβ` then cancels that component, which in plain
//!   double precision costs about `ε γ ‖Z‖ ‖ρ - Zw‖` of absolute accuracy.
//!
//! The refined iterate is therefore kept as an unevaluated double-double
//! pair, and the refinement residuals and the recovery of `w` use compensated
//! dot products, so the result is limited by the conditioning of `Z` rather
//! than by that of the Gram matrix.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::dd::{two_prod, two_sum};
use crate::error::{Error, Result};

const MAX_REFINEMENT_STEPS: usize = 24;

/// A running sum carried in twice the working precision.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    hi: f64,
    lo: f64,
}

impl Accumulator {
    fn add(&mut self, v: f64) {
        let (s, e) = two_sum(self.hi, v);
        self.hi = s;
        self.lo += e;
    }

    fn add_product(&mut self, a: f64, b: f64) {
        let (p, pe) = two_prod(a, b);
        self.add(p);
        self.lo += pe;
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }

    /// The sum split as an unevaluated pair `hi + lo`.
    fn split(self) -> (f64, f64) {
        two_sum(self.hi, self.lo)
    }
}

/// A vector stored as unevaluated pairs `hi + lo`.
#[derive(Debug, Clone)]
struct Extended {
    hi: DVector<f64>,
    lo: DVector<f64>,
}

impl Extended {
    fn new(hi: DVector<f64>) -> Self {
        let lo = DVector::zeros(hi.len());
        Extended { hi, lo }
    }

    fn add(&mut self, correction: &DVector<f64>) {
        for i in 0..self.hi.len() {
            let (s, e) = two_sum(self.hi[i], correction[i]);
            let (s, e) = two_sum(s, self.lo[i] + e);
            self.hi[i] = s;
            self.lo[i] = e;
        }
    }

    fn rounded(&self) -> DVector<f64> {
        &self.hi + &self.lo
    }
}

/// `Zᵀ v` with `v` in extended precision, as unevaluated pairs.
fn transpose_product(z: &DMatrix<f64>, v: &Extended) -> Vec<(f64, f64)> {
    z.column_iter()
        .map(|col| {
            let mut acc = Accumulator::default();
            for i in 0..col.len() {
                acc.add_product(col[i], v.hi[i]);
                acc.add_product(col[i], v.lo[i]);
            }
            acc.split()
        })
        .collect()
}

/// `ρ - Z (Zᵀ β) - β/γ`, evaluated in double-double and rounded once.
fn dual_residual(
    z: &DMatrix<f64>,
    rho: &DVector<f64>,
    beta: &Extended,
    gamma: f64,
) -> DVector<f64> {
    let zt_beta = transpose_product(z, beta);
    DVector::from_fn(z.nrows(), |i, _| {
        let mut acc = Accumulator::default();
        acc.add(rho[i]);
        for (j, &(hi, lo)) in zt_beta.iter().enumerate() {
            acc.add_product(-z[(i, j)], hi);
            acc.add_product(-z[(i, j)], lo);
        }
        acc.add_product(-beta.hi[i], 1.0 / gamma);
        acc.add_product(-beta.lo[i], 1.0 / gamma);
        acc.value()
    })
}

/// `Zᵀρ - Zᵀ(Z w) - w/γ`, evaluated in double-double and rounded once.
fn primal_residual(z: &DMatrix<f64>, rho: &DVector<f64>, w: &Extended, gamma: f64) -> DVector<f64> {
    // e = ρ - Z w, kept as unevaluated pairs.
    let e: Vec<(f64, f64)> = (0..z.nrows())
        .map(|i| {
            let mut acc = Accumulator::default();
            acc.add(rho[i]);
            for j in 0..z.ncols() {
                acc.add_product(-z[(i, j)], w.hi[j]);
                acc.add_product(-z[(i, j)], w.lo[j]);
            }
            acc.split()
        })
        .collect();
    DVector::from_fn(z.ncols(), |j, _| {
        let mut acc = Accumulator::default();
        for (i, &(hi, lo)) in e.iter().enumerate() {
            acc.add_product(z[(i, j)], hi);
            acc.add_product(z[(i, j)], lo);
        }
        acc.add_product(-w.hi[j], 1.0 / gamma);
        acc.add_product(-w.lo[j], 1.0 / gamma);
        acc.value()
    })
}

fn regularised_cholesky(mut gram: DMatrix<f64>, gamma: f64) -> Result<Cholesky<f64, Dyn>> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Domain(format!(
            "gamma must be positive and finite, got {gamma}"
        )));
    }
    if gram.iter().any(|v| !v.is_finite()) {
        return Err(Error::LinearSolve(
            "non-finite entries in the system matrix".into(),
        ));
    }
    for i in 0..gram.nrows() {
        gram[(i, i)] += 1.0 / gamma;
    }
    gram.cholesky().ok_or_else(|| {
        Error::LinearSolve(
            "Cholesky factorisation failed; the system is not positive definite".into(),
        )
    })
}

/// Refines `x` with corrections from `chol` until they stop shrinking.
fn refine(
    chol: &Cholesky<f64, Dyn>,
    residual: impl Fn(&Extended) -> DVector<f64>,
    x: DVector<f64>,
) -> Extended {
    let mut x = Extended::new(x);
    let mut previous = f64::INFINITY;
    for _ in 0..MAX_REFINEMENT_STEPS {
        let correction = chol.solve(&residual(&x));
        let size = correction.amax();
        if !size.is_finite() || size >= previous {
            break;
        }
        x.add(&correction);
        if size <= f64::EPSILON * f64::EPSILON * x.hi.amax() {
            break;
        }
        previous = size;
    }
    x
}

fn check_rows(z: &DMatrix<f64>, rho: &DVector<f64>) -> Result<()> {
    if z.nrows() != rho.len() {
        return Err(Error::DimensionMismatch(format!(
            "Z has {} rows but ρ has {}",
            z.nrows(),
            rho.len()
        )));
    }
    Ok(())
}

/// Primal weights from `(ZᵀZ + I/γ) w = Zᵀρ`.
pub fn solve_primal(z: &DMatrix<f64>, rho: &DVector<f64>, gamma: f64) -> Result<DVector<f64>> {
    check_rows(z, rho)?;
    let zt = z.transpose();
    let chol = regularised_cholesky(&zt * z, gamma)?;
    let w = chol.solve(&(&zt * rho));
    Ok(refine(&chol, |w| primal_residual(z, rho, w, gamma), w).rounded())
}

/// Dual multipliers `β` from `(ZZᵀ + I/γ) β = ρ`, and weights `w = Zᵀβ`.
pub fn solve_dual(
    z: &DMatrix<f64>,
    rho: &DVector<f64>,
    gamma: f64,
) -> Result<(DVector<f64>, DVector<f64>)> {
    check_rows(z, rho)?;
    let chol = regularised_cholesky(z * z.transpose(), gamma)?;
    let beta = chol.solve(rho);
    let beta = refine(&chol, |b| dual_residual(z, rho, b, gamma), beta);
    let w = DVector::from_iterator(
        z.ncols(),
        transpose_product(z, &beta)
            .into_iter()
            .map(|(hi, lo)| hi + lo),
    );
    Ok((beta.rounded(), w))
}
