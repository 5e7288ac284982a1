//! Least-squares collocation with shifted Gegenbauer bases for
//! distributed-order fractional differential equations.
//!
//! The solution is sought as `û = Σ w_i G_i` (a tensor product in two
//! dimensions). Each collocation point contributes one row of the operator
//! applied to the basis, Caputo derivatives are taken term-wise on the monomial
//! expansion, the integral over the derivative order is replaced by a
//! Gauss–Legendre rule, and the weights come from the regularised
//! least-squares system in primal or dual form.

pub mod config;
mod dd;
pub mod error;
pub mod expr;
pub mod fractional;
pub mod gegenbauer;
pub mod linalg;
pub mod problem;
pub mod report;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use fractional::{caputo_monomial_coefficient, distributed_basis_row, DistributedTerm};
pub use gegenbauer::{kernel_value, GegenbauerBasis};
pub use problem::{
    builtin, exact_solution, Coef, ConstraintKind, Edge, EdgeConstraint, ExampleId, NonlinearTerm,
    OperatorTerm, Point, PointConstraint, Problem,
};
pub use solver::{
    assemble, collocation_grid, lambda_random_search, residual_report, solve, solve_dual,
    solve_primal, Bases, Dims, Formulation, GridSpec, LambdaScan, SolverConfig, TrainedModel,
};
pub use special::{gamma, gauss_legendre, legendre_eval, QuadratureRule};
