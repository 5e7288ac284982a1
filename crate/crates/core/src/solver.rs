//! Collocation assembly and the regularised least-squares (LSSVR) solve.
//!
//! For weights `w` and residuals `e = Z w - ρ` the solver minimises
//! `½ wᵀw + (γ/2) eᵀe`. The primal route solves the `D × D` system
//! `(ZᵀZ + I/γ) w = Zᵀρ`; the dual route solves the `R × R` system
//! `(ZZᵀ + I/γ) β = ρ` and recovers `w = Zᵀβ`; see [`crate::linalg`].
//!
//! Two-dimensional weights are vectorised row-major over (space, time): the
//! column of `G_i(x) G_j(t)` is `i * d_t + j`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gegenbauer::{check_lambda, GegenbauerBasis, LAMBDA_ZERO_EXCLUSION};
pub use crate::linalg::{solve_dual, solve_primal};
use crate::problem::{ConstraintKind, Edge, ExampleId, OperatorTerm, Point, Problem};

/// A size that is either a single count or a (space, time) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Dims {
    One(usize),
    Two(usize, usize),
}

impl Dims {
    pub fn total(self) -> usize {
        match self {
            Dims::One(n) => n,
            Dims::Two(a, b) => a * b,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            Dims::One(_) => 1,
            Dims::Two(..) => 2,
        }
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dims::One(n) => write!(f, "{n}"),
            Dims::Two(a, b) => write!(f, "{a},{b}"),
        }
    }
}

impl FromStr for Dims {
    type Err = Error;

    /// `"20"` or `"3,15"` (also `"3x15"`).
    fn from_str(s: &str) -> Result<Self> {
        let parse = |p: &str| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("invalid size `{s}`")))
        };
        match s.split([',', 'x']).collect::<Vec<_>>().as_slice() {
            [one] => Ok(Dims::One(parse(one)?)),
            [a, b] => Ok(Dims::Two(parse(a)?, parse(b)?)),
            _ => Err(Error::Config(format!(
                "invalid size `{s}`; expected N or NX,NT"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    #[default]
    Primal,
    Dual,
}

impl FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primal" => Ok(Formulation::Primal),
            "dual" => Ok(Formulation::Dual),
            _ => Err(Error::Config(format!(
                "unknown formulation `{s}` (expected primal or dual)"
            ))),
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::Primal => "primal",
            Formulation::Dual => "dual",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Basis size `d`, or `(d_x, d_t)`.
    pub basis_size: Dims,
    /// Collocation count `N`, or `(n_x, n_t)`.
    pub points: Dims,
    pub gamma: f64,
    pub lambda: f64,
    pub quadrature_order: usize,
    pub formulation: Formulation,
    /// Replaces the time domain as the domain of the time basis.
    pub basis_domain: Option<(f64, f64)>,
    pub picard_max_iters: usize,
    pub picard_tol: f64,
    pub constraint_weight: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            basis_size: Dims::One(10),
            points: Dims::One(10),
            gamma: 1e12,
            lambda: 0.5,
            quadrature_order: 10,
            formulation: Formulation::Primal,
            basis_domain: None,
            picard_max_iters: 50,
            picard_tol: 1e-10,
            constraint_weight: 1.0,
        }
    }
}

impl SolverConfig {
    /// The configuration each benchmark was reported with.
    pub fn for_example(id: ExampleId) -> Self {
        let base = Self::default();
        match id {
            ExampleId::Ex1 => Self {
                basis_size: Dims::One(4),
                points: Dims::One(4),
                ..base
            },
            ExampleId::Ex2 => Self {
                basis_size: Dims::One(20),
                points: Dims::One(20),
                ..base
            },
            ExampleId::Ex3 => Self {
                basis_size: Dims::Two(3, 3),
                points: Dims::Two(3, 3),
                quadrature_order: 7,
                ..base
            },
            ExampleId::Ex4 => Self {
                basis_size: Dims::Two(3, 15),
                points: Dims::Two(3, 15),
                quadrature_order: 7,
                ..base
            },
        }
    }

    pub fn validate(&self, problem: &Problem) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::Config(format!(
                "gamma must be positive and finite, got {}",
                self.gamma
            )));
        }
        if !(self.picard_tol.is_finite() && self.picard_tol > 0.0) {
            return Err(Error::Config(format!(
                "picard_tol must be positive, got {}",
                self.picard_tol
            )));
        }
        if self.picard_max_iters == 0 {
            return Err(Error::Config("picard_max_iters must be positive".into()));
        }
        if !(self.constraint_weight.is_finite() && self.constraint_weight > 0.0) {
            return Err(Error::Config(format!(
                "constraint_weight must be positive, got {}",
                self.constraint_weight
            )));
        }
        if self.points.total() == 0 {
            return Err(Error::Config(
                "at least one collocation point is required".into(),
            ));
        }
        let dim = problem.dimension();
        if self.basis_size.dimension() != dim || self.points.dimension() != dim {
            return Err(Error::DimensionMismatch(format!(
                "problem `{}` is {dim}-dimensional but the configuration has basis size {} and points {}",
                problem.name, self.basis_size, self.points
            )));
        }
        check_lambda(self.lambda)
    }

    /// Domain of the time (or only) basis.
    pub fn time_basis_domain(&self, problem: &Problem) -> (f64, f64) {
        self.basis_domain.unwrap_or(problem.time_domain)
    }
}

/// The basis (or tensor pair of bases) a model is expanded in.
#[derive(Debug, Clone)]
pub enum Bases {
    One(GegenbauerBasis),
    Two {
        space: GegenbauerBasis,
        time: GegenbauerBasis,
    },
}

fn kron(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

impl Bases {
    pub fn for_problem(problem: &Problem, config: &SolverConfig) -> Result<Self> {
        let time_domain = config.time_basis_domain(problem);
        match (config.basis_size, problem.space_domain) {
            (Dims::One(d), None) => Ok(Bases::One(GegenbauerBasis::new(
                config.lambda,
                d,
                time_domain,
            )?)),
            (Dims::Two(dx, dt), Some(space_domain)) => Ok(Bases::Two {
                space: GegenbauerBasis::new(config.lambda, dx, space_domain)?,
                time: GegenbauerBasis::new(config.lambda, dt, time_domain)?,
            }),
            _ => Err(Error::DimensionMismatch(format!(
                "basis size {} does not match problem `{}`",
                config.basis_size, problem.name
            ))),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Bases::One(b) => b.size(),
            Bases::Two { space, time } => space.size() * time.size(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Bases::One(_) => 1,
            Bases::Two { .. } => 2,
        }
    }

    /// Basis values at `p`.
    pub fn eval(&self, p: Point) -> Vec<f64> {
        match self {
            Bases::One(b) => b.eval(p.t),
            Bases::Two { space, time } => kron(&space.eval(p.x), &time.eval(p.t)),
        }
    }

    fn time_basis(&self) -> &GegenbauerBasis {
        match self {
            Bases::One(b) => b,
            Bases::Two { time, .. } => time,
        }
    }

    /// Applies a time-only operator row and tensors it with the space values.
    fn with_space_values(&self, p: Point, time_row: Vec<f64>) -> Vec<f64> {
        match self {
            Bases::One(_) => time_row,
            Bases::Two { space, .. } => kron(&space.eval(p.x), &time_row),
        }
    }

    fn term_row(&self, term: &OperatorTerm, p: Point) -> Result<Vec<f64>> {
        let time = self.time_basis();
        let (coef, mut row) = match term {
            OperatorTerm::Identity { coef } => (coef.at(p), self.eval(p)),
            OperatorTerm::CaputoTime { order, coef } => (
                coef.at(p),
                self.with_space_values(p, time.caputo(p.t, *order)?),
            ),
            OperatorTerm::SpatialDerivative { order, coef } => match self {
                Bases::One(_) => {
                    return Err(Error::DimensionMismatch(
                        "spatial derivative in a one-dimensional model".into(),
                    ))
                }
                Bases::Two { space, time } => (
                    coef.at(p),
                    kron(&space.derivative(p.x, *order), &time.eval(p.t)),
                ),
            },
            OperatorTerm::Distributed(term) => (
                term.coef.at(p),
                self.with_space_values(p, term.basis_row(time, p.t)?),
            ),
        };
        for v in &mut row {
            *v *= coef;
        }
        Ok(row)
    }

    /// Sum of the linear operator terms applied to every basis function at `p`.
    pub fn operator_row(&self, terms: &[OperatorTerm], p: Point) -> Result<Vec<f64>> {
        let mut row = vec![0.0; self.size()];
        for term in terms {
            let contribution = self.term_row(term, p)?;
            if let Some(bad) = contribution.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    what: format!("{} (entry {bad})", term.label()),
                    location: p.to_string(),
                });
            }
            for (r, c) in row.iter_mut().zip(contribution) {
                *r += c;
            }
        }
        Ok(row)
    }

    fn constraint_row(&self, kind: ConstraintKind, p: Point) -> Result<Vec<f64>> {
        match (kind, self) {
            (ConstraintKind::Value, _) => Ok(self.eval(p)),
            (ConstraintKind::TimeDerivative, Bases::One(b)) => Ok(b.derivative(p.t, 1)),
            (ConstraintKind::TimeDerivative, Bases::Two { space, time }) => {
                Ok(kron(&space.eval(p.x), &time.derivative(p.t, 1)))
            }
            (ConstraintKind::SpaceDerivative, Bases::Two { space, time }) => {
                Ok(kron(&space.derivative(p.x, 1), &time.eval(p.t)))
            }
            (ConstraintKind::SpaceDerivative, Bases::One(_)) => Err(Error::DimensionMismatch(
                "space-derivative constraint in a one-dimensional model".into(),
            )),
        }
    }

    /// Expansion `Σ w_i G_i(p)`.
    pub fn combine(&self, weights: &[f64], p: Point) -> f64 {
        self.eval(p).iter().zip(weights).map(|(g, w)| g * w).sum()
    }
}

/// Collocation points: roots of the degree-`N` basis polynomial on each axis.
///
/// Two-dimensional grids are ordered lexicographically, `x` outermost.
pub fn collocation_grid(problem: &Problem, config: &SolverConfig) -> Result<Vec<Point>> {
    let time_roots =
        |n| GegenbauerBasis::new(config.lambda, 1, config.time_basis_domain(problem))?.roots(n);
    match (config.points, problem.space_domain) {
        (Dims::One(n), None) => Ok(time_roots(n)?.into_iter().map(Point::time).collect()),
        (Dims::Two(nx, nt), Some(space_domain)) => {
            let xs = GegenbauerBasis::new(config.lambda, 1, space_domain)?.roots(nx)?;
            let ts = time_roots(nt)?;
            Ok(xs
                .iter()
                .flat_map(|&x| ts.iter().map(move |&t| Point::new(x, t)))
                .collect())
        }
        _ => Err(Error::DimensionMismatch(format!(
            "collocation size {} does not match problem `{}`",
            config.points, problem.name
        ))),
    }
}

/// Point rows derived from the problem's point and edge constraints.
fn constraint_points(
    problem: &Problem,
    bases: &Bases,
) -> Result<Vec<(Point, ConstraintKind, f64)>> {
    let mut out: Vec<_> = problem
        .constraints
        .iter()
        .map(|c| (c.location, c.kind, c.target))
        .collect();
    for edge in &problem.edges {
        let Bases::Two { space, time } = bases else {
            return Err(Error::DimensionMismatch(
                "edge constraints need a two-dimensional model".into(),
            ));
        };
        match edge.edge {
            Edge::Time(t) => {
                for x in space.roots(space.size())? {
                    out.push((Point::new(x, t), edge.kind, edge.target));
                }
            }
            Edge::Space(x) => {
                for t in time.roots(time.size())? {
                    out.push((Point::new(x, t), edge.kind, edge.target));
                }
            }
        }
    }
    Ok(out)
}

/// Builds the collocation matrix `Z` and right-hand side `ρ`.
///
/// Rows `0..points.len()` hold the operator at each collocation point with
/// `ρ_i = source(p_i) - f(u_prev(p_i))`; constraint rows follow, scaled by
/// `constraint_weight`.
pub fn assemble(
    problem: &Problem,
    bases: &Bases,
    points: &[Point],
    previous: Option<&TrainedModel>,
    constraint_weight: f64,
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    if bases.dimension() != problem.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional basis for {}-dimensional problem `{}`",
            bases.dimension(),
            problem.dimension(),
            problem.name
        )));
    }
    let constraints = constraint_points(problem, bases)?;
    let cols = bases.size();
    let rows = points.len() + constraints.len();
    let mut z = DMatrix::<f64>::zeros(rows, cols);
    let mut rho = DVector::<f64>::zeros(rows);

    for (i, &p) in points.iter().enumerate() {
        let row = bases.operator_row(&problem.lhs_terms, p)?;
        z.row_mut(i).copy_from_slice(&row);
        let mut rhs = (problem.source)(p);
        if let Some(nl) = &problem.nonlinear {
            let u = previous.map_or(0.0, |m| m.value(p));
            rhs -= (nl.f)(u);
        }
        if !rhs.is_finite() {
            return Err(Error::NonFinite {
                what: "source term".into(),
                location: p.to_string(),
            });
        }
        rho[i] = rhs;
    }
    for (k, (p, kind, target)) in constraints.into_iter().enumerate() {
        let i = points.len() + k;
        let row = bases.constraint_row(kind, p)?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: format!("{kind:?} constraint row"),
                location: p.to_string(),
            });
        }
        for (j, v) in row.into_iter().enumerate() {
            z[(i, j)] = constraint_weight * v;
        }
        rho[i] = constraint_weight * target;
    }
    Ok((z, rho))
}

/// A solved model, evaluable anywhere in (and outside) the domain.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub bases: Bases,
    pub weights: Vec<f64>,
    /// Dual multipliers, one per system row, when solved in dual form.
    pub multipliers: Option<Vec<f64>>,
    pub collocation: Vec<Point>,
    /// Residual `|LHS(û) - source|` over the collocation points.
    pub residual_max: f64,
    pub residual_rms: f64,
    /// Number of linear solves performed.
    pub picard_iterations: usize,
    pub converged: bool,
    pub config: SolverConfig,
}

impl TrainedModel {
    pub fn value(&self, p: Point) -> f64 {
        self.bases.combine(&self.weights, p)
    }

    /// `û` at `[t]` (one-dimensional) or `[x, t]` (two-dimensional).
    pub fn evaluate(&self, coords: &[f64]) -> Result<f64> {
        match (self.bases.dimension(), coords) {
            (1, &[t]) => Ok(self.value(Point::time(t))),
            (2, &[x, t]) => Ok(self.value(Point::new(x, t))),
            (dim, _) => Err(Error::DimensionMismatch(format!(
                "{dim}-dimensional model evaluated at {} coordinates",
                coords.len()
            ))),
        }
    }

    pub fn dimension(&self) -> usize {
        self.bases.dimension()
    }
}

/// Problem copy whose distributed terms use the configured rule order.
fn with_quadrature(problem: &Problem, order: usize) -> Result<Problem> {
    let mut prepared = problem.clone();
    for term in &mut prepared.lhs_terms {
        if let OperatorTerm::Distributed(d) = term {
            if d.quadrature_order() != order {
                *d = d.with_quadrature_order(order)?;
            }
        }
    }
    Ok(prepared)
}

/// Pointwise residual `|LHS(û)(p) - source(p)|`, nonlinear term included.
fn pointwise_residual(problem: &Problem, bases: &Bases, weights: &[f64], p: Point) -> Result<f64> {
    let row = bases.operator_row(&problem.lhs_terms, p)?;
    let mut lhs: f64 = row.iter().zip(weights).map(|(a, w)| a * w).sum();
    if let Some(nl) = &problem.nonlinear {
        lhs += (nl.f)(bases.combine(weights, p));
    }
    let r = (lhs - (problem.source)(p)).abs();
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::NonFinite {
            what: "residual".into(),
            location: p.to_string(),
        })
    }
}

fn max_and_rms(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let max = values.iter().copied().fold(0.0, f64::max);
    let rms = (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt();
    (max, rms)
}

fn linear_solve(
    z: &DMatrix<f64>,
    rho: &DVector<f64>,
    config: &SolverConfig,
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    match config.formulation {
        Formulation::Primal => Ok((
            solve_primal(z, rho, config.gamma)?
                .iter()
                .copied()
                .collect(),
            None,
        )),
        Formulation::Dual => {
            let (beta, w) = solve_dual(z, rho, config.gamma)?;
            Ok((
                w.iter().copied().collect(),
                Some(beta.iter().copied().collect()),
            ))
        }
    }
}

/// Solves `problem` under `config`.
///
/// Linear problems take one pass. With a nonlinear term the lagged value
/// `f(u^{k-1})` moves to the right-hand side (Picard iteration from `u⁰ = 0`)
/// until successive iterates differ by less than `picard_tol` at every
/// collocation point. A run that hits `picard_max_iters` returns the last
/// iterate with `converged == false`.
pub fn solve(problem: &Problem, config: &SolverConfig) -> Result<TrainedModel> {
    problem.validate()?;
    config.validate(problem)?;
    let prepared = with_quadrature(problem, config.quadrature_order)?;
    let bases = Bases::for_problem(&prepared, config)?;
    let points = collocation_grid(&prepared, config)?;

    let mut model = TrainedModel {
        bases,
        weights: Vec::new(),
        multipliers: None,
        collocation: points,
        residual_max: 0.0,
        residual_rms: 0.0,
        picard_iterations: 0,
        converged: true,
        config: config.clone(),
    };
    let mut previous_values = vec![0.0; model.collocation.len()];
    loop {
        let previous = (model.picard_iterations > 0).then_some(&model);
        let (z, rho) = assemble(
            &prepared,
            &model.bases,
            &model.collocation,
            previous,
            config.constraint_weight,
        )?;
        let (weights, multipliers) = linear_solve(&z, &rho, config)?;
        model.weights = weights;
        model.multipliers = multipliers;
        model.picard_iterations += 1;
        if prepared.nonlinear.is_none() {
            break;
        }
        let values: Vec<f64> = model.collocation.iter().map(|&p| model.value(p)).collect();
        let change = values
            .iter()
            .zip(&previous_values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        previous_values = values;
        if change < config.picard_tol {
            break;
        }
        if model.picard_iterations >= config.picard_max_iters {
            model.converged = false;
            break;
        }
    }
    let residuals = model
        .collocation
        .iter()
        .map(|&p| pointwise_residual(&prepared, &model.bases, &model.weights, p))
        .collect::<Result<Vec<_>>>()?;
    (model.residual_max, model.residual_rms) = max_and_rms(&residuals);
    Ok(model)
}

/// Uniform cell-centred evaluation grid over the problem domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpec {
    Uniform(usize),
    Uniform2(usize, usize),
}

impl GridSpec {
    /// 100 points in one dimension, 41 × 41 in two.
    pub fn default_for(problem: &Problem) -> Self {
        if problem.dimension() == 1 {
            GridSpec::Uniform(100)
        } else {
            GridSpec::Uniform2(41, 41)
        }
    }

    pub fn points(&self, problem: &Problem) -> Result<Vec<Point>> {
        let centres = |(a, b): (f64, f64), n: usize| -> Vec<f64> {
            let h = (b - a) / n as f64;
            (0..n).map(|i| a + (i as f64 + 0.5) * h).collect()
        };
        match (*self, problem.space_domain) {
            (GridSpec::Uniform(n), None) => Ok(centres(problem.time_domain, n)
                .into_iter()
                .map(Point::time)
                .collect()),
            (GridSpec::Uniform2(nx, nt), Some(space)) => {
                let ts = centres(problem.time_domain, nt);
                Ok(centres(space, nx)
                    .into_iter()
                    .flat_map(|x| ts.iter().map(move |&t| Point::new(x, t)))
                    .collect())
            }
            _ => Err(Error::DimensionMismatch(format!(
                "grid {self:?} does not match problem `{}`",
                problem.name
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    pub max: f64,
    pub rms: f64,
}

/// Residual of the model on an evaluation grid distinct from the training points.
pub fn residual_report(
    model: &TrainedModel,
    problem: &Problem,
    grid: GridSpec,
) -> Result<ResidualReport> {
    let prepared = with_quadrature(problem, model.config.quadrature_order)?;
    let points = grid.points(problem)?;
    let values = if model.weights.is_empty() {
        // an unsolved model is the zero function
        let zero = vec![0.0; model.bases.size()];
        points
            .iter()
            .map(|&p| pointwise_residual(&prepared, &model.bases, &zero, p))
            .collect::<Result<Vec<_>>>()?
    } else {
        points
            .iter()
            .map(|&p| pointwise_residual(&prepared, &model.bases, &model.weights, p))
            .collect::<Result<Vec<_>>>()?
    };
    let (max, rms) = max_and_rms(&values);
    Ok(ResidualReport {
        points,
        values,
        max,
        rms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Ok,
    /// λ fell inside the excluded neighbourhood of 0.
    Skipped,
    Failed,
}

impl fmt::Display for TrialStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrialStatus::Ok => "ok",
            TrialStatus::Skipped => "skipped",
            TrialStatus::Failed => "failed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaTrial {
    pub lambda: f64,
    pub residual_max: Option<f64>,
    pub status: TrialStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaScan {
    pub best_lambda: Option<f64>,
    pub trace: Vec<LambdaTrial>,
}

/// Random search over λ, drawn uniformly from `range` with a seeded ChaCha8
/// generator; the best trial minimises the collocation `residual_max`.
pub fn lambda_random_search(
    problem: &Problem,
    config: &SolverConfig,
    range: (f64, f64),
    trials: usize,
    seed: u64,
) -> Result<LambdaScan> {
    let (low, high) = range;
    if !(low.is_finite() && high.is_finite()) || low <= -0.5 || low >= high {
        return Err(Error::Config(format!(
            "lambda range ({low}, {high}) must satisfy -0.5 < low < high"
        )));
    }
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambdas: Vec<f64> = (0..trials).map(|_| rng.gen_range(low..high)).collect();
    let trace: Vec<LambdaTrial> = lambdas
        .into_iter()
        .map(|lambda| {
            if lambda.abs() < LAMBDA_ZERO_EXCLUSION {
                return LambdaTrial {
                    lambda,
                    residual_max: None,
                    status: TrialStatus::Skipped,
                };
            }
            let trial_config = SolverConfig {
                lambda,
                ..config.clone()
            };
            match solve(problem, &trial_config) {
                Ok(model) if model.converged && model.residual_max.is_finite() => LambdaTrial {
                    lambda,
                    residual_max: Some(model.residual_max),
                    status: TrialStatus::Ok,
                },
                _ => LambdaTrial {
                    lambda,
                    residual_max: None,
                    status: TrialStatus::Failed,
                },
            }
        })
        .collect();
    let best_lambda = trace
        .iter()
        .filter_map(|t| t.residual_max.map(|r| (t.lambda, r)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(l, _)| l);
    Ok(LambdaScan { best_lambda, trace })
}
