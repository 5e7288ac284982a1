//! Serializable run records and CSV emitters.
//!
//! Floats are written in Rust's shortest round-trip form, so every value read
//! back from a report or CSV is bit-identical to the value written.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{builtin, ExampleId, Point, Problem};
use crate::solver::{solve, Dims, Formulation, LambdaScan, SolverConfig, TrainedModel};

pub const SOLUTION_HEADER_1D: &str = "t,value";
pub const SOLUTION_HEADER_2D: &str = "x,t,value";
pub const SCAN_HEADER: &str = "lambda,residual_max,status";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub d: Dims,
    pub n: Dims,
    pub gamma: f64,
    pub lambda: f64,
    pub q: usize,
    pub formulation: Formulation,
}

impl From<&SolverConfig> for ConfigEcho {
    fn from(c: &SolverConfig) -> Self {
        Self {
            d: c.basis_size,
            n: c.points,
            gamma: c.gamma,
            lambda: c.lambda,
            q: c.quadrature_order,
            formulation: c.formulation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// `[t]` or `[x, t]`.
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub problem: String,
    pub config: ConfigEcho,
    pub residual_max: f64,
    pub residual_rms: f64,
    pub max_error_vs_exact: Option<f64>,
    pub picard_iterations: usize,
    pub converged: bool,
    /// Left empty unless timing was requested, so reports stay reproducible.
    pub wall_time_ms: Option<f64>,
    pub solution_samples: Vec<Sample>,
}

impl SolveReport {
    /// Samples `model` at `points` (sorted lexicographically) and compares
    /// against the problem's exact solution when one is known.
    pub fn build(problem: &Problem, model: &TrainedModel, points: &[Point]) -> Self {
        let mut points = points.to_vec();
        points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.t.total_cmp(&b.t)));
        let coords = |p: &Point| {
            if model.dimension() == 1 {
                vec![p.t]
            } else {
                vec![p.x, p.t]
            }
        };
        let solution_samples: Vec<Sample> = points
            .iter()
            .map(|p| Sample {
                point: coords(p),
                value: model.value(*p),
            })
            .collect();
        let max_error_vs_exact = problem.exact.as_ref().map(|exact| {
            points
                .iter()
                .map(|&p| (model.value(p) - exact(p)).abs())
                .fold(0.0, f64::max)
        });
        Self {
            problem: problem.name.clone(),
            config: ConfigEcho::from(&model.config),
            residual_max: model.residual_max,
            residual_rms: model.residual_rms,
            max_error_vs_exact,
            picard_iterations: model.picard_iterations,
            converged: model.converged,
            wall_time_ms: None,
            solution_samples,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid report: {e}")))
    }

    /// `t,value` or `x,t,value`.
    pub fn solution_csv(&self) -> String {
        let two_d = self
            .solution_samples
            .first()
            .is_some_and(|s| s.point.len() == 2);
        let mut out = String::new();
        out.push_str(if two_d {
            SOLUTION_HEADER_2D
        } else {
            SOLUTION_HEADER_1D
        });
        out.push('\n');
        for s in &self.solution_samples {
            for c in &s.point {
                let _ = write!(out, "{c:?},");
            }
            let _ = writeln!(out, "{:?}", s.value);
        }
        out
    }
}

/// Inclusive `start:stop:step` axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AxisSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Config(format!("invalid grid `{s}`; expected start:stop:step")))?;
        let &[start, stop, step] = parts.as_slice() else {
            return Err(Error::Config(format!(
                "invalid grid `{s}`; expected start:stop:step"
            )));
        };
        if !(start.is_finite() && stop.is_finite() && step.is_finite())
            || step <= 0.0
            || stop < start
        {
            return Err(Error::Config(format!(
                "invalid grid `{s}`; need start <= stop and step > 0"
            )));
        }
        Ok(Self { start, stop, step })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        // snap to 12 decimals so 0.1-type steps print as written
        (0..=n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

/// `n` equally spaced points including both ends.
pub fn linspace((a, b): (f64, f64), n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => {
            let last = (n - 1) as f64;
            (0..n)
                .map(|i| (a * (last - i as f64) + b * i as f64) / last)
                .collect()
        }
    }
}

/// Sampling points for reports: a `start:stop:step` spec (one per axis,
/// comma separated, or one shared by both axes), or by default 100 points
/// in one dimension and 41 × 41 in two, endpoints included.
pub fn sample_points(problem: &Problem, spec: Option<&str>) -> Result<Vec<Point>> {
    let axes: Option<Vec<AxisSpec>> = spec
        .map(|s| s.split(',').map(AxisSpec::parse).collect::<Result<_>>())
        .transpose()?;
    match problem.space_domain {
        None => {
            let ts = match axes.as_deref() {
                None => linspace(problem.time_domain, 100),
                Some([t]) => t.values(),
                Some(_) => {
                    return Err(Error::Config(
                        "one-dimensional problems take a single grid spec".into(),
                    ))
                }
            };
            Ok(ts.into_iter().map(Point::time).collect())
        }
        Some(space) => {
            let (xs, ts) = match axes.as_deref() {
                None => (linspace(space, 41), linspace(problem.time_domain, 41)),
                Some([both]) => (both.values(), both.values()),
                Some([x, t]) => (x.values(), t.values()),
                Some(_) => return Err(Error::Config("expected at most two grid specs".into())),
            };
            Ok(xs
                .iter()
                .flat_map(|&x| ts.iter().map(move |&t| Point::new(x, t)))
                .collect())
        }
    }
}

/// `lambda,residual_max,status`; failed or skipped trials leave the residual empty.
pub fn scan_csv(scan: &LambdaScan) -> String {
    let mut out = format!("{SCAN_HEADER}\n");
    for t in &scan.trace {
        let residual = t.residual_max.map(|r| format!("{r:?}")).unwrap_or_default();
        let _ = writeln!(out, "{:?},{residual},{}", t.lambda, t.status);
    }
    out
}

/// A grid of predicted values with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Basis sizes of the Example 2 table.
pub const EX2_TABLE_SIZES: [usize; 3] = [10, 15, 20];

/// The reported table grid of a benchmark: Example 2 at `t = 0.1, …, 1.0` for
/// `d = N ∈ {10, 15, 20}`, or Example 4 on `x ∈ {0, 0.1, …, 1}` by
/// `t ∈ {0, 0.2, …, 1}`. `base` supplies everything except the sizes.
pub fn benchmark_table(id: ExampleId, base: &SolverConfig) -> Result<Table> {
    let problem = builtin(id);
    let ticks = |n: usize, step: f64| {
        (0..=n)
            .map(|i| ((i as f64 * step) * 1e12).round() / 1e12)
            .collect::<Vec<_>>()
    };
    match id {
        ExampleId::Ex2 => {
            let ts: Vec<f64> = ticks(10, 0.1).into_iter().skip(1).collect();
            let mut columns = Vec::new();
            for d in EX2_TABLE_SIZES {
                let config = SolverConfig {
                    basis_size: Dims::One(d),
                    points: Dims::One(d),
                    ..base.clone()
                };
                let model = solve(&problem, &config)?;
                columns.push(
                    ts.iter()
                        .map(|&t| model.value(Point::time(t)))
                        .collect::<Vec<_>>(),
                );
            }
            let mut header = vec!["t".to_string()];
            header.extend(EX2_TABLE_SIZES.iter().map(|d| format!("d{d}")));
            let rows = ts
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    std::iter::once(t)
                        .chain(columns.iter().map(|c| c[i]))
                        .collect()
                })
                .collect();
            Ok(Table { header, rows })
        }
        ExampleId::Ex4 => {
            let config = SolverConfig {
                basis_size: Dims::Two(3, 15),
                points: Dims::Two(3, 15),
                ..base.clone()
            };
            let model = solve(&problem, &config)?;
            if !model.converged {
                return Err(Error::NoConvergence {
                    what: "Picard iteration",
                    iterations: model.picard_iterations,
                });
            }
            let mut rows = Vec::new();
            for x in ticks(10, 0.1) {
                for t in ticks(5, 0.2) {
                    rows.push(vec![x, t, model.value(Point::new(x, t))]);
                }
            }
            Ok(Table {
                header: vec!["x".into(), "t".into(), "value".into()],
                rows,
            })
        }
        _ => Err(Error::Config(format!(
            "example {id} has no table grid (tables exist for ex2 and ex4)"
        ))),
    }
}
