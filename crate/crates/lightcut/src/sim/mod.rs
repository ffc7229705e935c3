//! Circuit simulation backends and derived observables.
//!
//! Two backends compute per-edge ⟨Z_iZ_j⟩ expectations:
//! * [`Backend::Statevector`] — dense, exact, up to 24 qubits;
//! * [`Backend::Pauli`] — Heisenberg backpropagation with optional
//!   truncation, scaling with term count rather than qubit count.
//!
//! On top of those this module provides cut sampling, half-chain
//! entanglement entropy, and Monte-Carlo cost-landscape variance estimates.

pub mod pauli;
pub mod statevector;

pub use pauli::{backpropagate_edge, TruncationMode, DEFAULT_TERM_CAP};
pub use statevector::{
    edge_expectations, expected_cut_and_grad, expected_cut_value, run_circuit, Statevector,
    DEFAULT_QUBIT_CAP,
};

use crate::ansatz::AnsatzCircuit;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Parallelism};
use crate::graph::UndirectedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Statevector,
    Pauli,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Statevector => write!(f, "statevector"),
            Backend::Pauli => write!(f, "pauli"),
        }
    }
}

/// One edge's backpropagated/measured expectation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeExpectation {
    pub i: usize,
    pub j: usize,
    /// ⟨Z_iZ_j⟩.
    pub zz: f64,
    /// Contribution (1 − ⟨Z_iZ_j⟩)/2 to the expected cut.
    pub cut: f64,
}

/// Expected-cut report for one circuit evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub backend: String,
    pub truncation: String,
    pub per_edge: Vec<EdgeExpectation>,
    pub expected_cut: f64,
    /// Ratio against a known maximum cut, when one was supplied.
    pub ratio: Option<f64>,
}

impl ExpectationReport {
    pub fn with_max_cut(mut self, max_cut: u64) -> Self {
        if max_cut > 0 {
            self.ratio = Some(self.expected_cut / max_cut as f64);
        }
        self
    }
}

/// Compute the per-edge expectations and expected cut with the chosen
/// backend. Truncation other than `None` is only meaningful for the Pauli
/// backend; requesting it with the statevector backend is an error.
pub fn expected_cut(
    g: &UndirectedGraph,
    circuit: &AnsatzCircuit,
    params: &[f64],
    backend: Backend,
    mode: TruncationMode,
    par: Parallelism,
) -> Result<ExpectationReport> {
    let zz: Vec<f64> = match backend {
        Backend::Statevector => {
            if !matches!(mode, TruncationMode::None) {
                return Err(Error::InvalidArgument(
                    "truncation modes require the pauli backend".into(),
                ));
            }
            edge_expectations(g, circuit, params)?
        }
        Backend::Pauli => {
            let results = map_indexed(par, g.m(), |idx| {
                backpropagate_edge(g, circuit, params, g.edges()[idx], mode, DEFAULT_TERM_CAP)
            });
            results.into_iter().collect::<Result<Vec<f64>>>()?
        }
    };
    let per_edge: Vec<EdgeExpectation> = g
        .edges()
        .iter()
        .zip(&zz)
        .map(|(&(i, j), &v)| EdgeExpectation {
            i,
            j,
            zz: v,
            cut: (1.0 - v) / 2.0,
        })
        .collect();
    let expected_cut = per_edge.iter().map(|e| e.cut).sum();
    Ok(ExpectationReport {
        backend: backend.to_string(),
        truncation: mode.to_string(),
        per_edge,
        expected_cut,
        ratio: None,
    })
}

/// One sampled measurement outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sample {
    /// Bit b_v per node (qubit v measured in the Z basis, |1⟩ → 1).
    pub bits: Vec<u8>,
    pub cut: u64,
}

/// Draw computational-basis samples from the circuit's output distribution.
/// Deterministic in `seed` (inverse-CDF sampling against a fixed cumulative
/// table).
pub fn sample_bitstrings(
    g: &UndirectedGraph,
    circuit: &AnsatzCircuit,
    params: &[f64],
    shots: usize,
    seed: u64,
) -> Result<Vec<Sample>> {
    let state = run_circuit(circuit, params)?;
    let n = state.n_qubits();
    let mut cdf = Vec::with_capacity(state.amplitudes().len());
    let mut acc = 0.0;
    for amp in state.amplitudes() {
        acc += amp.norm_sqr();
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(shots);
    for _ in 0..shots {
        let r: f64 = rng.gen::<f64>() * total;
        let idx = cdf.partition_point(|&c| c < r).min(cdf.len() - 1);
        let bits: Vec<u8> = (0..n).map(|q| ((idx >> q) & 1) as u8).collect();
        let cut = crate::oracle::cut_value(g, &bits);
        out.push(Sample { bits, cut });
    }
    Ok(out)
}

/// Von Neumann entropy (in bits) of the reduced state on qubits `0..cut`.
/// Computed from the Gram matrix of the reshaped amplitude tensor on the
/// smaller side of the bipartition.
pub fn half_chain_entropy(circuit: &AnsatzCircuit, params: &[f64], cut: usize) -> Result<f64> {
    let n = circuit.n_qubits;
    if cut == 0 || cut >= n {
        return Err(Error::InvalidArgument(format!(
            "bipartition cut {cut} must satisfy 0 < cut < {n}"
        )));
    }
    let state = run_circuit(circuit, params)?;
    let amps = state.amplitudes();
    let (rows, cols) = (1usize << cut, 1usize << (n - cut));
    // ψ[a + (b << cut)] viewed as A[a][b]; eigenvalues of the smaller of
    // A·A† and A†·A are the squared Schmidt coefficients.
    let dim = rows.min(cols);
    let mut gram = nalgebra::DMatrix::<num_complex::Complex64>::zeros(dim, dim);
    if rows <= cols {
        for b in 0..cols {
            for r1 in 0..rows {
                let x = amps[r1 + (b << cut)];
                for r2 in 0..rows {
                    gram[(r1, r2)] += x * amps[r2 + (b << cut)].conj();
                }
            }
        }
    } else {
        for a in 0..rows {
            for b1 in 0..cols {
                let x = amps[a + (b1 << cut)].conj();
                for b2 in 0..cols {
                    gram[(b1, b2)] += x * amps[a + (b2 << cut)];
                }
            }
        }
    }
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut entropy = 0.0;
    for &lambda in eig.eigenvalues.iter() {
        if lambda > 1e-12 {
            entropy -= lambda * lambda.log2();
        }
    }
    Ok(entropy.max(0.0))
}

/// Monte-Carlo estimate of the cost-landscape statistics of a circuit: the
/// expected cut is evaluated at parameter vectors drawn uniformly from
/// [−π, π)^dim and the sample mean/variance of ⟨Ĥ_MC⟩ = −½ Σ ⟨Z_iZ_j⟩ − M/2
/// shifted to the cut convention are reported.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarianceEstimate {
    pub samples: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

pub fn variance_estimate(
    g: &UndirectedGraph,
    circuit: &AnsatzCircuit,
    n_samples: usize,
    seed: u64,
    par: Parallelism,
) -> Result<VarianceEstimate> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(
            "variance estimate needs at least 2 samples".into(),
        ));
    }
    let dim = circuit.parameter_count;
    let values = map_indexed(par, n_samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let params: Vec<f64> = (0..dim)
            .map(|_| rng.gen::<f64>() * 2.0 * std::f64::consts::PI - std::f64::consts::PI)
            .collect();
        expected_cut_value(g, circuit, &params)
    });
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let mean = values.iter().sum::<f64>() / n_samples as f64;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n_samples - 1) as f64;
    Ok(VarianceEstimate {
        samples: n_samples,
        mean,
        variance,
        std_error: (variance / n_samples as f64).sqrt(),
    })
}
