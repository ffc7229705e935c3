//! Parameterized circuits: bipolar/light-cone ZY_p, QAOA_p, the naive R_Y
//! baseline, parameter schemes, and depth/coloring utilities.

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::orient::OrientedDag;
use serde::{Deserialize, Serialize};

/// Gate kinds. Angles are bound externally through `param_index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GateKind {
    /// e^{-iθ Z_control Y_target / 2} — the directed edge control → target.
    Zy { control: usize, target: usize },
    /// e^{-iγ Z_a Z_b / 2}.
    QaoaCost { a: usize, b: usize },
    /// e^{-iβ X_qubit}.
    QaoaMixer { qubit: usize },
    /// e^{-iθ Y_qubit / 2}.
    Ry { qubit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    #[serde(flatten)]
    pub kind: GateKind,
    pub param_index: usize,
}

/// Parameter binding scheme for ZY rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParameterScheme {
    /// One angle per round.
    Uniform,
    /// One angle per distinct (deg⁺(tail), deg⁻(head)) pair per round.
    DegreePair,
    /// One angle per distinct head in-degree per round (the merged variant
    /// used by the angle-relaxed analyses: the roles of the full degree-pair
    /// classes with equal head in-degree coincide).
    HeadDegree,
    /// One angle per gate.
    PerGate,
}

/// An immutable gate list over `|+⟩^⊗N` with a total parameter binding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzCircuit {
    pub n_qubits: usize,
    pub rounds: usize,
    pub scheme: ParameterScheme,
    pub parameter_count: usize,
    pub gates: Vec<Gate>,
}

impl AnsatzCircuit {
    /// Per-gate angles resolved from a parameter vector.
    pub fn resolve_angles(&self, params: &[f64]) -> Result<Vec<f64>> {
        if params.len() != self.parameter_count {
            return Err(Error::LengthMismatch {
                expected: self.parameter_count,
                got: params.len(),
            });
        }
        Ok(self.gates.iter().map(|g| params[g.param_index]).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }
}

/// Construct the bipolar-ZY_p (or light-cone ZY_p) ansatz over a DAG.
///
/// Even rounds walk the scheduling order backwards emitting each node's
/// entering gates (tails ascending), which realizes the Z-right-Y-left
/// structure; odd rounds reverse both the orientation and the order.
pub fn build_bipolar_zy(dag: &OrientedDag, p: usize, scheme: ParameterScheme) -> Result<AnsatzCircuit> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be ≥ 1".into()));
    }
    let n = dag.n();
    let mut gates = Vec::with_capacity(p * dag.m());
    let mut parameter_count = 0usize;
    for round in 0..p {
        // Directed edges of this round in application order.
        let mut round_edges: Vec<(usize, usize)> = Vec::with_capacity(dag.m());
        if round % 2 == 0 {
            for &v in dag.topo_order().iter().rev() {
                for &(tail, _) in dag.in_edges(v) {
                    round_edges.push((tail, v));
                }
            }
        } else {
            // Reversed orientation: the entering edges of v are the original
            // leaving edges, with Z on the original head.
            for &v in dag.topo_order().iter() {
                for &(head, _) in dag.out_edges(v) {
                    round_edges.push((head, v));
                }
            }
        }
        // Round-local class key per gate, in application order.
        let class_of = |&(tail, head): &(usize, usize)| -> (usize, usize) {
            if round % 2 == 0 {
                (dag.out_degree(tail), dag.in_degree(head))
            } else {
                // Degrees in the reversed DAG.
                (dag.in_degree(tail), dag.out_degree(head))
            }
        };
        let binding: Vec<usize> = match scheme {
            ParameterScheme::Uniform => {
                let idx = parameter_count;
                parameter_count += 1;
                vec![idx; round_edges.len()]
            }
            ParameterScheme::PerGate => {
                let start = parameter_count;
                parameter_count += round_edges.len();
                (start..parameter_count).collect()
            }
            ParameterScheme::DegreePair | ParameterScheme::HeadDegree => {
                let mut classes: Vec<(usize, usize)> = round_edges
                    .iter()
                    .map(|e| {
                        let (dp, dm) = class_of(e);
                        if scheme == ParameterScheme::HeadDegree {
                            (dm, 0)
                        } else {
                            (dp, dm)
                        }
                    })
                    .collect();
                let keys = classes.clone();
                classes.sort_unstable();
                classes.dedup();
                let start = parameter_count;
                parameter_count += classes.len();
                keys.iter()
                    .map(|k| start + classes.binary_search(k).unwrap())
                    .collect()
            }
        };
        for (&(control, target), &param_index) in round_edges.iter().zip(&binding) {
            gates.push(Gate {
                kind: GateKind::Zy { control, target },
                param_index,
            });
        }
    }
    Ok(AnsatzCircuit {
        n_qubits: n,
        rounds: p,
        scheme,
        parameter_count,
        gates,
    })
}

/// QAOA_p: per round, cost gates e^{-iγZZ/2} scheduled by greedy edge
/// coloring (color classes are conflict-free layers), then an X-mixer on
/// every qubit; 2p parameters (γ_l, β_l).
pub fn build_qaoa(g: &UndirectedGraph, p: usize) -> Result<AnsatzCircuit> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be ≥ 1".into()));
    }
    let coloring = greedy_edge_coloring(g);
    let colors = coloring.iter().copied().max().map_or(0, |c| c + 1);
    let mut gates = Vec::new();
    for round in 0..p {
        for color in 0..colors {
            for (e, &(a, b)) in g.edges().iter().enumerate() {
                if coloring[e] == color {
                    gates.push(Gate {
                        kind: GateKind::QaoaCost { a, b },
                        param_index: 2 * round,
                    });
                }
            }
        }
        for qubit in 0..g.n() {
            gates.push(Gate {
                kind: GateKind::QaoaMixer { qubit },
                param_index: 2 * round + 1,
            });
        }
    }
    Ok(AnsatzCircuit {
        n_qubits: g.n(),
        rounds: p,
        scheme: ParameterScheme::PerGate,
        parameter_count: 2 * p,
        gates,
    })
}

/// Naive R_Y baseline: one R_Y per qubit on |+⟩^⊗N, N parameters.
pub fn build_ry(g: &UndirectedGraph) -> AnsatzCircuit {
    let gates = (0..g.n())
        .map(|qubit| Gate {
            kind: GateKind::Ry { qubit },
            param_index: qubit,
        })
        .collect();
    AnsatzCircuit {
        n_qubits: g.n(),
        rounds: 1,
        scheme: ParameterScheme::PerGate,
        parameter_count: g.n(),
        gates,
    }
}

/// Angles that make the PerGate bipolar-ZY_1 circuit output the basis-state
/// pair of `assignment` exactly: along a maximal tree (one entering edge per
/// non-source node) the angle is +π/2 when the endpoints disagree and −π/2
/// when they agree; all other gates are idle.
pub fn set_solution_angles(dag: &OrientedDag, assignment: &[u8]) -> Result<Vec<f64>> {
    if assignment.len() != dag.n() {
        return Err(Error::LengthMismatch {
            expected: dag.n(),
            got: assignment.len(),
        });
    }
    if dag.sources().len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "solution angles need a unique source; this DAG has {}",
            dag.sources().len()
        )));
    }
    let circuit = build_bipolar_zy(dag, 1, ParameterScheme::PerGate)?;
    let mut tree_edge = vec![usize::MAX; dag.n()]; // chosen entering edge index per node
    for v in 0..dag.n() {
        if let Some(&(_, e)) = dag.in_edges(v).first() {
            tree_edge[v] = e;
        }
    }
    let mut angles = vec![0.0; circuit.parameter_count];
    for gate in &circuit.gates {
        if let GateKind::Zy { control, target } = gate.kind {
            let e = dag
                .directions()
                .iter()
                .position(|&(t, h)| (t, h) == (control, target))
                .expect("gate matches a directed edge");
            if tree_edge[target] == e {
                angles[gate.param_index] = if assignment[control] != assignment[target] {
                    std::f64::consts::FRAC_PI_2
                } else {
                    -std::f64::consts::FRAC_PI_2
                };
            }
        }
    }
    Ok(angles)
}

/// Greedy proper edge coloring in stored edge order; at most 2Δ−1 colors.
pub fn greedy_edge_coloring(g: &UndirectedGraph) -> Vec<usize> {
    let mut node_colors: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    let mut coloring = Vec::with_capacity(g.m());
    for &(a, b) in g.edges() {
        let mut color = 0;
        while node_colors[a].contains(&color) || node_colors[b].contains(&color) {
            color += 1;
        }
        node_colors[a].push(color);
        node_colors[b].push(color);
        coloring.push(color);
    }
    coloring
}

/// CZ-equivalent two-qubit depth: each two-qubit block charges 2 layers on
/// its pair, single-qubit gates are free; computed greedily in gate order.
pub fn two_qubit_depth(circuit: &AnsatzCircuit) -> usize {
    let mut depth = vec![0usize; circuit.n_qubits];
    let mut max_depth = 0;
    for gate in &circuit.gates {
        let pair = match gate.kind {
            GateKind::Zy { control, target } => Some((control, target)),
            GateKind::QaoaCost { a, b } => Some((a, b)),
            _ => None,
        };
        if let Some((a, b)) = pair {
            let layer = depth[a].max(depth[b]) + 2;
            depth[a] = layer;
            depth[b] = layer;
            max_depth = max_depth.max(layer);
        }
    }
    max_depth
}

/// Ansatz family selector used by the optimization harness and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnsatzKind {
    BipolarZy,
    LightconeZy,
    Qaoa,
    Ry,
}
