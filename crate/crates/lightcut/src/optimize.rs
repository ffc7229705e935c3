//! Variational optimization, CVaR objective, multi-start time-to-solution
//! harness, and exponential scaling fits.

use crate::ansatz::{AnsatzCircuit, GateKind};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Parallelism};
use crate::graph::UndirectedGraph;
use crate::sim::statevector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Derivative-free Nelder–Mead simplex.
    NelderMead,
    /// BFGS with exact reverse-mode gradients and Armijo backtracking.
    Bfgs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    /// Objective-evaluation budget per run; `None` means 500 × #parameters.
    pub max_iterations: Option<usize>,
    pub tolerance: f64,
    /// Restart budget for the multi-start harness.
    pub restart_cap: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::NelderMead,
            max_iterations: None,
            tolerance: 1e-10,
            restart_cap: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub params: Vec<f64>,
    pub value: f64,
    /// Objective evaluations consumed.
    pub iterations: usize,
    /// Objective value at each evaluation.
    pub trace: Vec<f64>,
    /// Whether the evaluation budget ran out before convergence/early stop.
    pub budget_exhausted: bool,
}

/// Expected-cut objective with evaluation accounting. Pure-R_Y circuits are
/// product states and use the closed form ⟨Z_iZ_j⟩ = sinθ_i sinθ_j instead
/// of a statevector run.
struct CutObjective<'a> {
    g: &'a UndirectedGraph,
    circuit: &'a AnsatzCircuit,
    /// qubit → parameter index when the circuit is a pure R_Y rotation layer.
    ry_param: Option<Vec<usize>>,
    evals: usize,
    trace: Vec<f64>,
}

impl<'a> CutObjective<'a> {
    fn new(g: &'a UndirectedGraph, circuit: &'a AnsatzCircuit) -> Self {
        let ry_param = if circuit
            .gates
            .iter()
            .all(|gt| matches!(gt.kind, GateKind::Ry { .. }))
        {
            let mut map = vec![usize::MAX; circuit.n_qubits];
            for gt in &circuit.gates {
                if let GateKind::Ry { qubit } = gt.kind {
                    map[qubit] = gt.param_index;
                }
            }
            if map.iter().all(|&x| x != usize::MAX) {
                Some(map)
            } else {
                None
            }
        } else {
            None
        };
        Self {
            g,
            circuit,
            ry_param,
            evals: 0,
            trace: Vec::new(),
        }
    }

    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        let v = match &self.ry_param {
            Some(map) => {
                let s: Vec<f64> = map.iter().map(|&pi| x[pi].sin()).collect();
                self.g
                    .edges()
                    .iter()
                    .map(|&(i, j)| (1.0 - s[i] * s[j]) / 2.0)
                    .sum()
            }
            None => statevector::expected_cut_value(self.g, self.circuit, x)?,
        };
        self.evals += 1;
        self.trace.push(v);
        Ok(v)
    }

    fn eval_grad(&mut self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let out = match &self.ry_param {
            Some(map) => {
                let s: Vec<f64> = map.iter().map(|&pi| x[pi].sin()).collect();
                let c: Vec<f64> = map.iter().map(|&pi| x[pi].cos()).collect();
                let value: f64 = self
                    .g
                    .edges()
                    .iter()
                    .map(|&(i, j)| (1.0 - s[i] * s[j]) / 2.0)
                    .sum();
                let mut grad = vec![0.0; self.circuit.parameter_count];
                for &(i, j) in self.g.edges() {
                    grad[map[i]] -= 0.5 * c[i] * s[j];
                    grad[map[j]] -= 0.5 * s[i] * c[j];
                }
                (value, grad)
            }
            None => statevector::expected_cut_and_grad(self.g, self.circuit, x)?,
        };
        // Gradient sweeps piggyback on the evaluation; only the evaluation
        // is counted.
        self.evals += 1;
        self.trace.push(out.0);
        Ok(out)
    }
}

fn clamp_box(x: &mut [f64]) {
    for v in x {
        *v = v.clamp(-PI, PI);
    }
}

/// Maximize the expected cut over the angle box [−π, π]^dim, starting from
/// `x0`. Stops early once `c_max − 1e-9` is reached.
pub fn maximize_cut(
    g: &UndirectedGraph,
    circuit: &AnsatzCircuit,
    x0: &[f64],
    config: &OptimizerConfig,
    c_max: Option<f64>,
) -> Result<OptimizeResult> {
    let dim = circuit.parameter_count;
    if x0.len() != dim {
        return Err(Error::LengthMismatch {
            expected: dim,
            got: x0.len(),
        });
    }
    let budget = config.max_iterations.unwrap_or(500 * dim.max(1));
    let target = c_max.map(|c| c - 1e-9);
    let mut obj = CutObjective::new(g, circuit);
    let result = match config.method {
        Method::NelderMead => nelder_mead(&mut obj, x0, budget, config.tolerance, target),
        Method::Bfgs => bfgs(&mut obj, x0, budget, config.tolerance, target),
    }?;
    Ok(result)
}

fn nelder_mead(
    obj: &mut CutObjective,
    x0: &[f64],
    budget: usize,
    tol: f64,
    target: Option<f64>,
) -> Result<OptimizeResult> {
    let dim = x0.len();
    // Simplex of dim+1 points; we minimize −cut.
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut values: Vec<f64> = Vec::with_capacity(dim + 1);
    let mut best = (x0.to_vec(), f64::NEG_INFINITY);
    let push = |obj: &mut CutObjective, x: Vec<f64>, best: &mut (Vec<f64>, f64)| -> Result<(Vec<f64>, f64)> {
        let v = obj.eval(&x)?;
        if v > best.1 {
            *best = (x.clone(), v);
        }
        Ok((x, v))
    };
    let (x, v) = push(obj, x0.to_vec(), &mut best)?;
    simplex.push(x);
    values.push(v);
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += if x[i] + 0.25 <= PI { 0.25 } else { -0.25 };
        let (x, v) = push(obj, x, &mut best)?;
        simplex.push(x);
        values.push(v);
    }
    let done = |best: &(Vec<f64>, f64), evals: usize| {
        target.map(|t| best.1 >= t).unwrap_or(false) || evals >= budget
    };
    while !done(&best, obj.evals) {
        // Sort worst-first for maximization: ascending values.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let worst = order[0];
        let second_worst = order[1.min(dim)];
        let best_idx = order[dim];
        if values[best_idx] - values[worst] < tol {
            break;
        }
        // Centroid of all but the worst point.
        let mut centroid = vec![0.0; dim];
        for (i, x) in simplex.iter().enumerate() {
            if i == worst {
                continue;
            }
            for (cs, xs) in centroid.iter_mut().zip(x) {
                *cs += xs / dim as f64;
            }
        }
        let blend = |alpha: f64| -> Vec<f64> {
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + alpha * (c - w))
                .collect();
            clamp_box(&mut x);
            x
        };
        let (xr, vr) = push(obj, blend(1.0), &mut best)?;
        if vr > values[best_idx] {
            // Try expansion.
            if done(&best, obj.evals) {
                break;
            }
            let (xe, ve) = push(obj, blend(2.0), &mut best)?;
            if ve > vr {
                simplex[worst] = xe;
                values[worst] = ve;
            } else {
                simplex[worst] = xr;
                values[worst] = vr;
            }
        } else if vr > values[second_worst] {
            simplex[worst] = xr;
            values[worst] = vr;
        } else {
            if done(&best, obj.evals) {
                break;
            }
            let (xc, vc) = push(obj, blend(-0.5), &mut best)?;
            if vc > values[worst] {
                simplex[worst] = xc;
                values[worst] = vc;
            } else {
                // Shrink toward the best vertex.
                let anchor = simplex[best_idx].clone();
                for i in 0..=dim {
                    if i == best_idx {
                        continue;
                    }
                    if done(&best, obj.evals) {
                        break;
                    }
                    let x: Vec<f64> = anchor
                        .iter()
                        .zip(&simplex[i])
                        .map(|(a, s)| a + 0.5 * (s - a))
                        .collect();
                    let (x, v) = push(obj, x, &mut best)?;
                    simplex[i] = x;
                    values[i] = v;
                }
            }
        }
    }
    let reached = target.map(|t| best.1 >= t).unwrap_or(false);
    Ok(OptimizeResult {
        params: best.0,
        value: best.1,
        iterations: obj.evals,
        trace: std::mem::take(&mut obj.trace),
        budget_exhausted: obj.evals >= budget && !reached,
    })
}

fn bfgs(
    obj: &mut CutObjective,
    x0: &[f64],
    budget: usize,
    tol: f64,
    target: Option<f64>,
) -> Result<OptimizeResult> {
    let dim = x0.len();
    let mut x = x0.to_vec();
    clamp_box(&mut x);
    // Inverse Hessian approximation, minimizing f = −cut.
    let mut h = nalgebra::DMatrix::<f64>::identity(dim, dim);
    let (mut value, grad) = obj.eval_grad(&x)?;
    let mut g = nalgebra::DVector::from_iterator(dim, grad.iter().map(|v| -v));
    let mut best = (x.clone(), value);
    loop {
        if target.map(|t| best.1 >= t).unwrap_or(false) || obj.evals >= budget {
            break;
        }
        if g.norm() < tol.max(1e-10) {
            break;
        }
        let dir = -(&h * &g);
        let slope = g.dot(&dir);
        if slope >= 0.0 {
            h = nalgebra::DMatrix::identity(dim, dim);
            continue;
        }
        // Backtracking Armijo line search on f = −cut.
        let f0 = -value;
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..25 {
            if obj.evals >= budget {
                break;
            }
            let mut xt: Vec<f64> = x
                .iter()
                .zip(dir.iter())
                .map(|(xi, di)| xi + alpha * di)
                .collect();
            clamp_box(&mut xt);
            let (vt, gt) = obj.eval_grad(&xt)?;
            if vt > best.1 {
                best = (xt.clone(), vt);
            }
            if -vt <= f0 + 1e-4 * alpha * slope {
                accepted = Some((xt, vt, gt));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xt, vt, gt)) = accepted else { break };
        let gt = nalgebra::DVector::from_iterator(dim, gt.iter().map(|v| -v));
        let s = nalgebra::DVector::from_iterator(dim, xt.iter().zip(&x).map(|(a, b)| a - b));
        let y = &gt - &g;
        let sy = s.dot(&y);
        if sy > 1e-12 {
            let rho = 1.0 / sy;
            let identity = nalgebra::DMatrix::<f64>::identity(dim, dim);
            let left = &identity - rho * (&s * y.transpose());
            let right = &identity - rho * (&y * s.transpose());
            h = &left * h * &right + rho * (&s * s.transpose());
        } else {
            h = nalgebra::DMatrix::identity(dim, dim);
        }
        if (vt - value).abs() < tol {
            break;
        }
        x = xt;
        value = vt;
        g = gt;
    }
    let reached = target.map(|t| best.1 >= t).unwrap_or(false);
    Ok(OptimizeResult {
        params: best.0,
        value: best.1,
        iterations: obj.evals,
        trace: std::mem::take(&mut obj.trace),
        budget_exhausted: obj.evals >= budget && !reached,
    })
}

/// Conditional Value at Risk of cut samples under the maximization
/// convention: the mean of the top ⌈confidence·n⌉ values.
pub fn cvar_objective(cut_samples: &[f64], confidence: f64) -> Result<f64> {
    if cut_samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample set".into()));
    }
    if !(confidence > 0.0 && confidence <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence {confidence} outside (0, 1]"
        )));
    }
    let mut sorted = cut_samples.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let k = ((confidence * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Ok(sorted[..k].iter().sum::<f64>() / k as f64)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestartRecord {
    pub restart: usize,
    pub iterations: usize,
    pub best_value: f64,
}

/// Outcome of a multi-start time-to-solution run on one graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TTSRecord {
    pub graph_id: String,
    pub scheme: String,
    pub restarts_used: usize,
    /// Total objective evaluations summed over restarts.
    pub total_iterations: usize,
    pub per_restart: Vec<RestartRecord>,
    pub success: bool,
    pub best_value: f64,
    pub c_max: u64,
}

/// Restart with fresh uniform initial angles until a run's optimized
/// expected cut reaches c_max − 1e-6 or the restart cap is hit. Restart r
/// draws its initial point from stream r of the seeded generator, so the
/// record is deterministic per (graph, seed).
pub fn multistart_tts(
    g: &UndirectedGraph,
    circuit: &AnsatzCircuit,
    config: &OptimizerConfig,
    c_max: u64,
    graph_id: &str,
    scheme: &str,
) -> Result<TTSRecord> {
    let dim = circuit.parameter_count;
    let mut per_restart = Vec::new();
    let mut total_iterations = 0usize;
    let mut best_value = f64::NEG_INFINITY;
    let mut success = false;
    for restart in 0..config.restart_cap {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64);
        let x0: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() * 2.0 * PI - PI).collect();
        let run = maximize_cut(g, circuit, &x0, config, Some(c_max as f64))?;
        total_iterations += run.iterations;
        best_value = best_value.max(run.value);
        per_restart.push(RestartRecord {
            restart,
            iterations: run.iterations,
            best_value: run.value,
        });
        if run.value >= c_max as f64 - 1e-6 {
            success = true;
            break;
        }
    }
    Ok(TTSRecord {
        graph_id: graph_id.to_string(),
        scheme: scheme.to_string(),
        restarts_used: per_restart.len(),
        total_iterations,
        per_restart,
        success,
        best_value,
        c_max,
    })
}

/// Run `multistart_tts` over an ensemble of (graph, circuit) instances in
/// parallel, preserving input order.
pub fn multistart_tts_ensemble(
    instances: &[(UndirectedGraph, AnsatzCircuit, u64, String, String)],
    config: &OptimizerConfig,
    par: Parallelism,
) -> Result<Vec<TTSRecord>> {
    map_indexed(par, instances.len(), |i| {
        let (g, circuit, c_max, id, scheme) = &instances[i];
        multistart_tts(g, circuit, config, *c_max, id, scheme)
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingFit {
    pub a: f64,
    pub b: f64,
    /// Sum of squared residuals in log space.
    pub residual: f64,
}

/// Least-squares fit of a·b^N to (N, value) points in log space.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "scaling fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(_, v)| v <= 0.0) {
        return Err(Error::InvalidArgument(
            "scaling fit requires positive values".into(),
        ));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1.ln()).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1.ln()).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let residual = points
        .iter()
        .map(|&(x, y)| (y.ln() - (intercept + slope * x)).powi(2))
        .sum();
    Ok(ScalingFit {
        a: intercept.exp(),
        b: slope.exp(),
        residual,
    })
}
