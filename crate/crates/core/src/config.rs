//! TOML problem descriptions.
//!
//! ```toml
//! name = "relaxation"
//! time_domain = [0.0, 1.0]
//! source = "0"
//!
//! [[terms]]
//! kind = "distributed"
//! density = "6*theta*(1-theta)"
//! theta = [0.0, 1.0]
//!
//! [[terms]]
//! kind = "identity"
//! coef = "0.1"
//!
//! [[constraints]]
//! at = [0.0]
//! target = 1.0
//!
//! [solver]
//! basis_size = 20
//! points = 20
//! ```
//!
//! Two-dimensional problems add `space_domain`, may use `space_derivative`
//! terms, and state boundary data as `[[edges]]` with either `time = ...` or
//! `space = ...`.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Var, Vars};
use crate::fractional::DistributedTerm;
use crate::problem::{
    Coef, ConstraintKind, Edge, EdgeConstraint, NonlinearTerm, OperatorTerm, Point,
    PointConstraint, Problem,
};
use crate::solver::SolverConfig;

const POINT_VARS: &[Var] = &[Var::T, Var::X];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    name: Option<String>,
    time_domain: (f64, f64),
    space_domain: Option<(f64, f64)>,
    source: Option<String>,
    exact: Option<String>,
    nonlinear: Option<String>,
    nonlinear_derivative: Option<String>,
    #[serde(default)]
    terms: Vec<TermSpec>,
    #[serde(default)]
    constraints: Vec<ConstraintSpec>,
    #[serde(default)]
    edges: Vec<EdgeSpec>,
    solver: Option<SolverConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum TermSpec {
    Identity {
        coef: Option<String>,
    },
    Caputo {
        order: f64,
        coef: Option<String>,
    },
    SpaceDerivative {
        order: usize,
        coef: Option<String>,
    },
    Distributed {
        density: String,
        theta: (f64, f64),
        coef: Option<String>,
        quadrature_order: Option<usize>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintSpec {
    at: Vec<f64>,
    #[serde(default = "value_kind")]
    kind: ConstraintKind,
    target: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeSpec {
    time: Option<f64>,
    space: Option<f64>,
    #[serde(default = "value_kind")]
    kind: ConstraintKind,
    target: f64,
}

fn value_kind() -> ConstraintKind {
    ConstraintKind::Value
}

/// A problem read from a file plus any solver settings it carries.
#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub problem: Problem,
    pub solver: Option<SolverConfig>,
}

fn point_fn(text: &str) -> Result<Arc<dyn Fn(Point) -> f64 + Send + Sync>> {
    let e = Expr::parse(text, POINT_VARS)?;
    Ok(Arc::new(move |p: Point| {
        e.eval(&Vars {
            t: p.t,
            x: p.x,
            ..Default::default()
        })
    }))
}

fn coef(text: Option<&str>) -> Result<Coef> {
    let Some(text) = text else {
        return Ok(Coef::ONE);
    };
    let e = Expr::parse(text, POINT_VARS)?;
    if let Some(c) = e.constant() {
        return Ok(Coef::Const(c));
    }
    Ok(Coef::func(move |p| {
        e.eval(&Vars {
            t: p.t,
            x: p.x,
            ..Default::default()
        })
    }))
}

/// Parses a TOML problem description.
pub fn parse_problem(text: &str) -> Result<ProblemConfig> {
    let file: ProblemFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let name = file.name.unwrap_or_else(|| "custom".to_string());
    let mut problem = match file.space_domain {
        Some(space) => Problem::partial(name, space, file.time_domain),
        None => Problem::ordinary(name, file.time_domain),
    };
    if let Some(src) = &file.source {
        problem.source = point_fn(src)?;
    }
    if let Some(exact) = &file.exact {
        problem.exact = Some(point_fn(exact)?);
    }
    for term in file.terms {
        let term = match term {
            TermSpec::Identity { coef: c } => OperatorTerm::Identity {
                coef: coef(c.as_deref())?,
            },
            TermSpec::Caputo { order, coef: c } => OperatorTerm::CaputoTime {
                order,
                coef: coef(c.as_deref())?,
            },
            TermSpec::SpaceDerivative { order, coef: c } => OperatorTerm::SpatialDerivative {
                order,
                coef: coef(c.as_deref())?,
            },
            TermSpec::Distributed {
                density,
                theta,
                coef: c,
                quadrature_order,
            } => {
                let e = Expr::parse(&density, &[Var::Theta])?;
                let term = DistributedTerm::new(
                    move |th| {
                        e.eval(&Vars {
                            theta: th,
                            ..Default::default()
                        })
                    },
                    theta.0,
                    theta.1,
                    quadrature_order.unwrap_or(10),
                )?;
                OperatorTerm::Distributed(term.with_coef(coef(c.as_deref())?))
            }
        };
        problem.lhs_terms.push(term);
    }
    if let Some(f) = &file.nonlinear {
        let f = Expr::parse(f, &[Var::U])?;
        let derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync> = match &file.nonlinear_derivative {
            Some(df) => {
                let df = Expr::parse(df, &[Var::U])?;
                Arc::new(move |u| {
                    df.eval(&Vars {
                        u,
                        ..Default::default()
                    })
                })
            }
            None => {
                let f = f.clone();
                Arc::new(move |u| {
                    let h = 1e-6 * u.abs().max(1.0);
                    let at = |v: f64| {
                        f.eval(&Vars {
                            u: v,
                            ..Default::default()
                        })
                    };
                    (at(u + h) - at(u - h)) / (2.0 * h)
                })
            }
        };
        problem.nonlinear = Some(NonlinearTerm {
            f: Arc::new(move |u| {
                f.eval(&Vars {
                    u,
                    ..Default::default()
                })
            }),
            derivative,
        });
    } else if file.nonlinear_derivative.is_some() {
        return Err(Error::Config(
            "`nonlinear_derivative` given without `nonlinear`".into(),
        ));
    }
    for c in file.constraints {
        let location = match c.at.as_slice() {
            [t] => Point::time(*t),
            [x, t] => Point::new(*x, *t),
            other => {
                return Err(Error::Config(format!(
                    "constraint location needs 1 or 2 coordinates, got {}",
                    other.len()
                )))
            }
        };
        if problem.dimension() == 2 && c.at.len() != 2 {
            return Err(Error::Config(
                "constraints of a two-dimensional problem need [x, t]".into(),
            ));
        }
        problem.constraints.push(PointConstraint {
            location,
            kind: c.kind,
            target: c.target,
        });
    }
    for e in file.edges {
        let edge = match (e.time, e.space) {
            (Some(t), None) => Edge::Time(t),
            (None, Some(x)) => Edge::Space(x),
            _ => {
                return Err(Error::Config(
                    "an edge needs exactly one of `time` or `space`".into(),
                ))
            }
        };
        problem.edges.push(EdgeConstraint {
            edge,
            kind: e.kind,
            target: e.target,
        });
    }
    problem.validate()?;
    Ok(ProblemConfig {
        problem,
        solver: file.solver,
    })
}

/// Reads and parses a problem file.
pub fn load_problem(path: &Path) -> Result<ProblemConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text)
}
