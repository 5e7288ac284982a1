//! Browser bindings for the solver: basis curves, solving a built-in example,
//! and a λ random search. Arrays cross the boundary as flat `Float64Array`s.

pub mod demo;

use wasm_bindgen::prelude::*;

fn js_error(e: dofde::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Basis members `G_0 … G_degree` on `[0, 1]`, flattened as `samples` t-values
/// followed by each member's samples in turn.
#[wasm_bindgen(js_name = basisCurves)]
pub fn basis_curves(lambda: f64, degree: usize, samples: usize) -> Result<Vec<f64>, JsError> {
    let curves = demo::basis_curves(lambda, degree, samples).map_err(js_error)?;
    Ok(curves
        .ts
        .into_iter()
        .chain(curves.members.into_iter().flatten())
        .collect())
}

#[wasm_bindgen]
pub struct Solution(demo::Solution);

#[wasm_bindgen]
impl Solution {
    #[wasm_bindgen(getter)]
    pub fn dimension(&self) -> usize {
        self.0.dimension
    }

    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.0.xs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ts(&self) -> Vec<f64> {
        self.0.ts.clone()
    }

    /// Row-major over `xs × ts` in two dimensions.
    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.0.values.clone()
    }

    /// Empty when the example has no closed-form solution.
    #[wasm_bindgen(getter)]
    pub fn exact(&self) -> Vec<f64> {
        self.0.exact.clone()
    }

    #[wasm_bindgen(getter, js_name = residualMax)]
    pub fn residual_max(&self) -> f64 {
        self.0.residual_max
    }

    /// `NaN` when there is no exact solution to compare with.
    #[wasm_bindgen(getter, js_name = maxError)]
    pub fn max_error(&self) -> f64 {
        self.0.max_error().unwrap_or(f64::NAN)
    }

    #[wasm_bindgen(getter, js_name = picardIterations)]
    pub fn picard_iterations(&self) -> usize {
        self.0.picard_iterations
    }

    #[wasm_bindgen(getter)]
    pub fn converged(&self) -> bool {
        self.0.converged
    }
}

#[wasm_bindgen(js_name = solveExample)]
pub fn solve_example(
    id: &str,
    size: usize,
    lambda: f64,
    gamma: f64,
    formulation: &str,
) -> Result<Solution, JsError> {
    demo::solve_example(id, size, lambda, gamma, formulation)
        .map(Solution)
        .map_err(js_error)
}

/// Interleaved `[λ₀, r₀, λ₁, r₁, …]`; `r` is `NaN` for skipped trials.
#[wasm_bindgen(js_name = scanLambda)]
pub fn scan_lambda(
    id: &str,
    low: f64,
    high: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    let trace = demo::scan_lambda(id, low, high, trials, seed).map_err(js_error)?;
    Ok(trace.into_iter().flat_map(|(l, r)| [l, r]).collect())
}
