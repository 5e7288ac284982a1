//! Declarative description of a distributed-order problem and the four
//! built-in benchmark problems.
//!
//! Every problem is stored in the canonical form `LHS(u) = source`, with all
//! operator terms (and an optional pointwise nonlinearity) on the left.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractional::DistributedTerm;
use crate::special::gamma;

/// A point of the problem domain. One-dimensional problems ignore `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub t: f64,
}

impl Point {
    pub fn time(t: f64) -> Self {
        Self { x: 0.0, t }
    }

    pub fn new(x: f64, t: f64) -> Self {
        Self { x, t }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x = {}, t = {})", self.x, self.t)
    }
}

pub type PointFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// Coefficient multiplying an operator term.
#[derive(Clone)]
pub enum Coef {
    Const(f64),
    Func(PointFn),
}

impl Coef {
    pub const ONE: Coef = Coef::Const(1.0);

    pub fn func(f: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        Coef::Func(Arc::new(f))
    }

    pub fn at(&self, p: Point) -> f64 {
        match self {
            Coef::Const(c) => *c,
            Coef::Func(f) => f(p),
        }
    }
}

impl fmt::Debug for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Const(c) => write!(f, "Const({c})"),
            Coef::Func(_) => f.write_str("Func(..)"),
        }
    }
}

impl From<f64> for Coef {
    fn from(c: f64) -> Self {
        Coef::Const(c)
    }
}

/// Linear operator terms on the left-hand side.
#[derive(Debug, Clone)]
pub enum OperatorTerm {
    Identity {
        coef: Coef,
    },
    /// Caputo derivative in `t` of order `order`.
    CaputoTime {
        order: f64,
        coef: Coef,
    },
    /// Classical derivative in `x` of order 1 or 2 (two-dimensional problems only).
    SpatialDerivative {
        order: usize,
        coef: Coef,
    },
    /// Distributed-order Caputo term acting in `t`.
    Distributed(DistributedTerm),
}

impl OperatorTerm {
    pub fn label(&self) -> String {
        match self {
            OperatorTerm::Identity { .. } => "identity term".into(),
            OperatorTerm::CaputoTime { order, .. } => format!("Caputo term of order {order}"),
            OperatorTerm::SpatialDerivative { order, .. } => {
                format!("spatial derivative of order {order}")
            }
            OperatorTerm::Distributed(_) => "distributed-order term".into(),
        }
    }
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Pointwise nonlinearity `f(u)` added to the left-hand side.
#[derive(Clone)]
pub struct NonlinearTerm {
    pub f: ScalarFn,
    /// `f'(u)`, kept for diagnostics and Newton-type solvers.
    pub derivative: ScalarFn,
}

impl NonlinearTerm {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Arc::new(f),
            derivative: Arc::new(derivative),
        }
    }
}

impl fmt::Debug for NonlinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NonlinearTerm {{ f(0) = {} }}", (self.f)(0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    Value,
    TimeDerivative,
    SpaceDerivative,
}

/// `u(location) = target` (or its first derivative).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointConstraint {
    pub location: Point,
    pub kind: ConstraintKind,
    pub target: f64,
}

impl PointConstraint {
    pub fn value(location: Point, target: f64) -> Self {
        Self {
            location,
            kind: ConstraintKind::Value,
            target,
        }
    }
}

/// Which coordinate an edge constraint pins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    /// `t = value`, for all `x` in the space domain.
    Time(f64),
    /// `x = value`, for all `t` in the time domain.
    Space(f64),
}

/// A constant condition along a whole edge of a rectangular domain.
///
/// At assembly the edge is sampled at the roots of the basis polynomial whose
/// degree equals the basis size along the free axis, which pins the trace of
/// the polynomial ansatz on that edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeConstraint {
    pub edge: Edge,
    pub kind: ConstraintKind,
    pub target: f64,
}

impl EdgeConstraint {
    pub fn value(edge: Edge, target: f64) -> Self {
        Self {
            edge,
            kind: ConstraintKind::Value,
            target,
        }
    }
}

/// A distributed-order problem `Σ terms(u) + f(u) = source`.
#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub time_domain: (f64, f64),
    pub space_domain: Option<(f64, f64)>,
    pub lhs_terms: Vec<OperatorTerm>,
    pub nonlinear: Option<NonlinearTerm>,
    pub source: PointFn,
    pub constraints: Vec<PointConstraint>,
    pub edges: Vec<EdgeConstraint>,
    pub exact: Option<PointFn>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("time_domain", &self.time_domain)
            .field("space_domain", &self.space_domain)
            .field("lhs_terms", &self.lhs_terms)
            .field("nonlinear", &self.nonlinear)
            .field("constraints", &self.constraints)
            .field("edges", &self.edges)
            .finish_non_exhaustive()
    }
}

impl Problem {
    /// An ordinary problem on `time_domain` with no terms and zero source.
    pub fn ordinary(name: impl Into<String>, time_domain: (f64, f64)) -> Self {
        Self {
            name: name.into(),
            time_domain,
            space_domain: None,
            lhs_terms: Vec::new(),
            nonlinear: None,
            source: Arc::new(|_| 0.0),
            constraints: Vec::new(),
            edges: Vec::new(),
            exact: None,
        }
    }

    /// A problem in `(x, t)` on a rectangle.
    pub fn partial(
        name: impl Into<String>,
        space_domain: (f64, f64),
        time_domain: (f64, f64),
    ) -> Self {
        Self {
            space_domain: Some(space_domain),
            ..Self::ordinary(name, time_domain)
        }
    }

    pub fn with_term(mut self, term: OperatorTerm) -> Self {
        self.lhs_terms.push(term);
        self
    }

    pub fn with_source(mut self, source: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Arc::new(source);
        self
    }

    pub fn with_constraint(mut self, c: PointConstraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn with_edge(mut self, e: EdgeConstraint) -> Self {
        self.edges.push(e);
        self
    }

    pub fn with_nonlinear(mut self, n: NonlinearTerm) -> Self {
        self.nonlinear = Some(n);
        self
    }

    pub fn with_exact(mut self, exact: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(exact));
        self
    }

    pub fn dimension(&self) -> usize {
        if self.space_domain.is_some() {
            2
        } else {
            1
        }
    }

    /// Hard structural checks.
    pub fn validate(&self) -> Result<()> {
        let (ta, tb) = self.time_domain;
        if !(ta.is_finite() && tb.is_finite()) || ta >= tb {
            return Err(Error::Domain(format!(
                "time domain [{ta}, {tb}] must satisfy a < b"
            )));
        }
        if let Some((xa, xb)) = self.space_domain {
            if !(xa.is_finite() && xb.is_finite()) || xa >= xb {
                return Err(Error::Domain(format!(
                    "space domain [{xa}, {xb}] must satisfy a < b"
                )));
            }
        }
        for term in &self.lhs_terms {
            match term {
                OperatorTerm::CaputoTime { order, .. } if !(order.is_finite() && *order >= 0.0) => {
                    return Err(Error::Domain(format!(
                        "Caputo order must be non-negative, got {order}"
                    )));
                }
                OperatorTerm::SpatialDerivative { order, .. } => {
                    if self.dimension() == 1 {
                        return Err(Error::DimensionMismatch(
                            "spatial derivative term in a one-dimensional problem".into(),
                        ));
                    }
                    if !(1..=2).contains(order) {
                        return Err(Error::Domain(format!(
                            "spatial derivative order must be 1 or 2, got {order}"
                        )));
                    }
                }
                _ => {}
            }
        }
        if self.dimension() == 1 {
            if !self.edges.is_empty() {
                return Err(Error::DimensionMismatch(
                    "edge constraints need a two-dimensional problem".into(),
                ));
            }
            if self
                .constraints
                .iter()
                .any(|c| c.kind == ConstraintKind::SpaceDerivative)
            {
                return Err(Error::DimensionMismatch(
                    "space-derivative constraint in a one-dimensional problem".into(),
                ));
            }
        }
        if let Some(n) = &self.nonlinear {
            if !(n.f)(0.0).is_finite() {
                return Err(Error::Domain(
                    "nonlinear term must be finite at u = 0".into(),
                ));
            }
        }
        Ok(())
    }

    /// Soft well-posedness warnings.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.lhs_terms.is_empty() {
            out.push(format!("problem `{}` has no operator terms", self.name));
        }
        if self.constraints.is_empty() && self.edges.is_empty() {
            out.push(format!(
                "problem `{}` has no initial or boundary conditions",
                self.name
            ));
        }
        out
    }
}

/// Identifiers of the built-in benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleId {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
}

impl ExampleId {
    pub const ALL: [ExampleId; 4] = [
        ExampleId::Ex1,
        ExampleId::Ex2,
        ExampleId::Ex3,
        ExampleId::Ex4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Ex1 => "ex1",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex3 => "ex3",
            ExampleId::Ex4 => "ex4",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// `(t^a - 1) / ln t`, continuous through the removable singularity at `t = 1`.
pub fn power_log_ratio(t: f64, a: f64) -> f64 {
    let l = t.ln();
    if l == 0.0 {
        return a;
    }
    (a * l).exp_m1() / l
}

fn gamma_of(x: f64) -> f64 {
    gamma(x).unwrap_or(f64::NAN)
}

/// The built-in benchmark problem `id`.
pub fn builtin(id: ExampleId) -> Problem {
    match id {
        ExampleId::Ex1 => {
            let term =
                DistributedTerm::new(|th| gamma_of(3.0 - th), 0.2, 1.5, 10).expect("valid term");
            Problem::ordinary("ex1", (0.2, 1.5))
                .with_term(OperatorTerm::Distributed(term))
                // 2 (t^1.8 - t^0.5) / ln t
                .with_source(|p| 2.0 * p.t.sqrt() * power_log_ratio(p.t, 1.3))
                .with_constraint(PointConstraint::value(Point::time(0.0), 0.0))
                .with_constraint(PointConstraint {
                    location: Point::time(0.0),
                    kind: ConstraintKind::TimeDerivative,
                    target: 0.0,
                })
                .with_exact(|p| p.t * p.t)
        }
        ExampleId::Ex2 => {
            let term =
                DistributedTerm::new(|th| 6.0 * th * (1.0 - th), 0.0, 1.0, 10).expect("valid term");
            Problem::ordinary("ex2", (0.0, 1.0))
                .with_term(OperatorTerm::Distributed(term))
                .with_term(OperatorTerm::Identity {
                    coef: Coef::Const(0.1),
                })
                .with_constraint(PointConstraint::value(Point::time(0.0), 1.0))
        }
        ExampleId::Ex3 => {
            let term =
                DistributedTerm::new(|th| gamma_of(3.0 - th), 0.0, 1.0, 7).expect("valid term");
            Problem::partial("ex3", (0.0, 2.0), (0.0, 1.0))
                .with_term(OperatorTerm::Distributed(term))
                .with_term(OperatorTerm::SpatialDerivative {
                    order: 2,
                    coef: Coef::Const(-1.0),
                })
                // 2t^2 + 2tx(t-1)(2-x)/ln t
                .with_source(|p| {
                    2.0 * p.t * p.t + 2.0 * p.x * (2.0 - p.x) * p.t * power_log_ratio(p.t, 1.0)
                })
                .with_edge(EdgeConstraint::value(Edge::Time(0.0), 0.0))
                .with_edge(EdgeConstraint::value(Edge::Space(0.0), 0.0))
                .with_edge(EdgeConstraint::value(Edge::Space(2.0), 0.0))
                .with_exact(|p| p.t * p.t * p.x * (2.0 - p.x))
        }
        ExampleId::Ex4 => {
            let term =
                DistributedTerm::new(|th| gamma_of(3.5 - th), 0.0, 1.0, 7).expect("valid term");
            let lead = 15.0 * std::f64::consts::PI.sqrt() / 8.0;
            Problem::partial("ex4", (0.0, 1.0), (0.0, 1.0))
                .with_term(OperatorTerm::Distributed(term))
                .with_term(OperatorTerm::SpatialDerivative {
                    order: 2,
                    coef: Coef::Const(-1.0),
                })
                .with_nonlinear(NonlinearTerm::new(|u| -u * u, |u| -2.0 * u))
                // 15√π (t-1) t^{3/2} x(x-1) / (8 ln t) - 2t^{5/2} - t^5 x^2 (x-1)^2
                .with_source(move |p| {
                    let xx = p.x * (p.x - 1.0);
                    lead * p.t.powf(1.5) * power_log_ratio(p.t, 1.0) * xx
                        - 2.0 * p.t.powf(2.5)
                        - p.t.powi(5) * xx * xx
                })
                .with_edge(EdgeConstraint::value(Edge::Time(0.0), 0.0))
                .with_edge(EdgeConstraint::value(Edge::Space(0.0), 0.0))
                .with_edge(EdgeConstraint::value(Edge::Space(1.0), 0.0))
                .with_exact(|p| p.t * p.t * p.t.sqrt() * p.x * (p.x - 1.0))
        }
    }
}

/// Exact solution of a built-in problem, where one is known.
pub fn exact_solution(id: ExampleId) -> Option<PointFn> {
    builtin(id).exact
}
