//! The computations behind the page, in plain Rust so they can be tested
//! natively.

use dofde::report::linspace;
use dofde::{
    builtin, lambda_random_search, solve, Dims, ExampleId, Formulation, GegenbauerBasis, Point,
    Result, SolverConfig,
};

/// Shifted Gegenbauer members `G_0 … G_{degree}` sampled on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisCurves {
    pub ts: Vec<f64>,
    /// One row per member, each the length of `ts`.
    pub members: Vec<Vec<f64>>,
}

pub fn basis_curves(lambda: f64, degree: usize, samples: usize) -> Result<BasisCurves> {
    let basis = GegenbauerBasis::new(lambda, degree + 1, (0.0, 1.0))?;
    let ts = linspace((0.0, 1.0), samples.max(2));
    let rows: Vec<Vec<f64>> = ts.iter().map(|&t| basis.eval(t)).collect();
    let members = (0..=degree)
        .map(|n| rows.iter().map(|r| r[n]).collect())
        .collect();
    Ok(BasisCurves { ts, members })
}

/// A solved example sampled for plotting: a curve in one dimension, a
/// row-major `xs × ts` grid in two.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub dimension: usize,
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
    /// Same layout as `values`; empty when no exact solution is known.
    pub exact: Vec<f64>,
    pub residual_max: f64,
    pub picard_iterations: usize,
    pub converged: bool,
}

impl Solution {
    pub fn max_error(&self) -> Option<f64> {
        (!self.exact.is_empty()).then(|| {
            self.values
                .iter()
                .zip(&self.exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }
}

/// Solves a built-in example. `size` replaces the time basis size and
/// collocation count (both in one dimension); zero keeps the reported setting.
pub fn solve_example(
    id: &str,
    size: usize,
    lambda: f64,
    gamma: f64,
    formulation: &str,
) -> Result<Solution> {
    let id: ExampleId = id.parse()?;
    let problem = builtin(id);
    let mut config = SolverConfig {
        lambda,
        gamma,
        formulation: formulation.parse::<Formulation>()?,
        ..SolverConfig::for_example(id)
    };
    if size > 0 {
        let resize = |dims: Dims| match dims {
            Dims::One(_) => Dims::One(size),
            Dims::Two(x, _) => Dims::Two(x, size),
        };
        config.basis_size = resize(config.basis_size);
        config.points = resize(config.points);
    }
    let model = solve(&problem, &config)?;
    let ts = linspace(problem.time_domain, 101);
    let (xs, points): (Vec<f64>, Vec<Point>) = match problem.space_domain {
        None => (Vec::new(), ts.iter().map(|&t| Point::time(t)).collect()),
        Some(space) => {
            let xs = linspace(space, 41);
            let points = xs
                .iter()
                .flat_map(|&x| ts.iter().map(move |&t| Point::new(x, t)))
                .collect();
            (xs, points)
        }
    };
    let values = points.iter().map(|&p| model.value(p)).collect();
    let exact = problem
        .exact
        .as_ref()
        .map(|f| points.iter().map(|&p| f(p)).collect())
        .unwrap_or_default();
    Ok(Solution {
        dimension: problem.dimension(),
        xs,
        ts,
        values,
        exact,
        residual_max: model.residual_max,
        picard_iterations: model.picard_iterations,
        converged: model.converged,
    })
}

/// `(λ, residual_max)` per trial in draw order; `NaN` marks skipped or
/// failed trials.
pub fn scan_lambda(
    id: &str,
    low: f64,
    high: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    let id: ExampleId = id.parse()?;
    let scan = lambda_random_search(
        &builtin(id),
        &SolverConfig::for_example(id),
        (low, high),
        trials,
        seed,
    )?;
    Ok(scan
        .trace
        .iter()
        .map(|t| (t.lambda, t.residual_max.unwrap_or(f64::NAN)))
        .collect())
}
