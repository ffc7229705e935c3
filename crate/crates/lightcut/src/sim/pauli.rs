//! Heisenberg-picture Pauli backpropagation.
//!
//! An edge observable Z_iZ_j is pulled back through the circuit gate by gate
//! (in reverse application order). Each rotation e^{-iθP/2} maps a Pauli term
//! s to itself when [P, s] = 0 and to cosθ·s + sinθ·(iP·s) otherwise, so the
//! observable stays a real combination of Pauli strings throughout. The final
//! expectation in |+⟩^⊗N is the sum of coefficients of the strings made of
//! X and I only.
//!
//! Truncation modes trade exactness for a bounded term count; `None` is exact
//! and must agree with the statevector backend to float precision.

use crate::ansatz::{AnsatzCircuit, GateKind};
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use std::collections::HashMap;

/// Maximum number of live Pauli terms before the run is aborted.
pub const DEFAULT_TERM_CAP: usize = 4_000_000;

/// Coefficients below this are dropped in every mode.
const PRUNE_EPS: f64 = 1e-15;

/// Truncation policy for the backpropagated observable.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum TruncationMode {
    /// Exact backpropagation.
    None,
    /// Restrict transformations to the k-local subgraph of the observable's
    /// edge: gates outside it keep only their commuting (cosθ) branch.
    /// k = 0 keeps just the edge itself and reproduces the closed-form
    /// 0-local expectations; on trees every k is exact.
    KLocal { k: usize },
    /// Drop terms with Pauli weight (number of non-identity letters) above w.
    Weight { w: usize },
    /// Drop terms with |coefficient| below c after each gate.
    Coefficient { c: f64 },
}

impl std::fmt::Display for TruncationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TruncationMode::None => write!(f, "none"),
            TruncationMode::KLocal { k } => write!(f, "k-local({k})"),
            TruncationMode::Weight { w } => write!(f, "weight({w})"),
            TruncationMode::Coefficient { c } => write!(f, "coefficient({c})"),
        }
    }
}

/// Pauli letter on one qubit. Identity is implicit (absent qubits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Letter {
    X,
    Y,
    Z,
}

/// A Pauli string: sorted (qubit, letter) pairs for the non-identity sites.
type PauliKey = Vec<(usize, Letter)>;

fn letter_at(key: &PauliKey, qubit: usize) -> Option<Letter> {
    key.binary_search_by_key(&qubit, |&(q, _)| q)
        .ok()
        .map(|pos| key[pos].1)
}

/// Single-qubit product a·b → (result, phase exponent of i mod 4).
/// `None` result means identity.
fn letter_product(a: Letter, b: Letter) -> (Option<Letter>, u8) {
    use Letter::*;
    match (a, b) {
        (X, X) | (Y, Y) | (Z, Z) => (None, 0),
        (X, Y) => (Some(Z), 1),
        (Y, X) => (Some(Z), 3),
        (Y, Z) => (Some(X), 1),
        (Z, Y) => (Some(X), 3),
        (Z, X) => (Some(Y), 1),
        (X, Z) => (Some(Y), 3),
    }
}

/// Compute i·P·s for an anticommuting pair, returning the product string and
/// its real sign (the product of an odd-overlap pair times i is Hermitian).
fn i_times_product(p: &PauliKey, s: &PauliKey) -> (PauliKey, f64) {
    let mut out: PauliKey = Vec::with_capacity(p.len() + s.len());
    let mut phase: u8 = 1; // the leading i
    let (mut ip, mut is) = (0, 0);
    while ip < p.len() || is < s.len() {
        if is == s.len() || (ip < p.len() && p[ip].0 < s[is].0) {
            out.push(p[ip]);
            ip += 1;
        } else if ip == p.len() || s[is].0 < p[ip].0 {
            out.push(s[is]);
            is += 1;
        } else {
            let q = p[ip].0;
            let (letter, ph) = letter_product(p[ip].1, s[is].1);
            phase = (phase + ph) % 4;
            if let Some(l) = letter {
                out.push((q, l));
            }
            ip += 1;
            is += 1;
        }
    }
    debug_assert!(phase == 0 || phase == 2, "anticommuting product must be real");
    (out, if phase == 0 { 1.0 } else { -1.0 })
}

/// Number of qubits where both strings act with different non-identity
/// letters; the strings anticommute iff this is odd.
fn anticommutes(p: &PauliKey, s: &PauliKey) -> bool {
    let mut differing = 0usize;
    for &(q, lp) in p {
        if let Some(ls) = letter_at(s, q) {
            if ls != lp {
                differing += 1;
            }
        }
    }
    differing % 2 == 1
}

/// Generator Pauli string and effective rotation angle for a gate.
/// The mixer e^{-iβX} is e^{-i(2β)X/2}, hence the doubled angle.
fn generator(kind: GateKind, angle: f64) -> (PauliKey, f64) {
    match kind {
        GateKind::Zy { control, target } => {
            let mut key = vec![(control, Letter::Z), (target, Letter::Y)];
            key.sort_unstable_by_key(|&(q, _)| q);
            (key, angle)
        }
        GateKind::Ry { qubit } => (vec![(qubit, Letter::Y)], angle),
        GateKind::QaoaCost { a, b } => {
            let mut key = vec![(a, Letter::Z), (b, Letter::Z)];
            key.sort_unstable_by_key(|&(q, _)| q);
            (key, angle)
        }
        GateKind::QaoaMixer { qubit } => (vec![(qubit, Letter::X)], 2.0 * angle),
    }
}

/// Qubits within graph distance k of {i, j}, and the induced edge set a gate
/// may act on under `KLocal { k }`: the centre edge plus every edge with an
/// endpoint at distance ≤ k−1 from the centre pair.
struct KLocalRegion {
    allowed_qubits: Vec<bool>,
    allowed_edges: std::collections::HashSet<(usize, usize)>,
}

fn k_local_region(g: &UndirectedGraph, i: usize, j: usize, k: usize) -> KLocalRegion {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = std::collections::VecDeque::new();
    dist[i] = 0;
    dist[j] = 0;
    queue.push_back(i);
    queue.push_back(j);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let allowed_qubits: Vec<bool> = dist.iter().map(|&d| d <= k).collect();
    let mut allowed_edges = std::collections::HashSet::new();
    allowed_edges.insert((i.min(j), i.max(j)));
    if k >= 1 {
        for &(u, v) in g.edges() {
            if dist[u].min(dist[v]) <= k - 1 {
                allowed_edges.insert((u, v));
            }
        }
    }
    KLocalRegion {
        allowed_qubits,
        allowed_edges,
    }
}

/// Whether a gate is allowed to transform the observable under a k-local
/// restriction centred on edge (i, j).
fn gate_in_region(kind: GateKind, region: &KLocalRegion) -> bool {
    match kind {
        GateKind::Zy { control, target } => region
            .allowed_edges
            .contains(&(control.min(target), control.max(target))),
        GateKind::QaoaCost { a, b } => region.allowed_edges.contains(&(a.min(b), a.max(b))),
        GateKind::QaoaMixer { qubit } | GateKind::Ry { qubit } => region.allowed_qubits[qubit],
    }
}

/// Backpropagate Z_iZ_j through the circuit and evaluate it in |+⟩^⊗N.
pub fn backpropagate_edge(
    g: &UndirectedGraph,
    circuit: &AnsatzCircuit,
    params: &[f64],
    edge: (usize, usize),
    mode: TruncationMode,
    term_cap: usize,
) -> Result<f64> {
    let angles = circuit.resolve_angles(params)?;
    let (i, j) = edge;
    let region = match mode {
        TruncationMode::KLocal { k } => Some(k_local_region(g, i, j, k)),
        _ => None,
    };

    let mut terms: HashMap<PauliKey, f64> = HashMap::new();
    let mut start = vec![(i, Letter::Z), (j, Letter::Z)];
    start.sort_unstable_by_key(|&(q, _)| q);
    terms.insert(start, 1.0);

    for (gate, &angle) in circuit.gates.iter().zip(&angles).rev() {
        let (p, theta) = generator(gate.kind, angle);
        if theta == 0.0 {
            continue;
        }
        let transform_allowed = region
            .as_ref()
            .map(|r| gate_in_region(gate.kind, r))
            .unwrap_or(true);
        let (cos_t, sin_t) = (theta.cos(), theta.sin());

        let mut next: HashMap<PauliKey, f64> = HashMap::with_capacity(terms.len() * 2);
        for (key, coeff) in terms {
            if !anticommutes(&p, &key) {
                *next.entry(key).or_insert(0.0) += coeff;
                continue;
            }
            if transform_allowed {
                let (prod, sign) = i_times_product(&p, &key);
                *next.entry(prod).or_insert(0.0) += coeff * sin_t * sign;
            }
            *next.entry(key).or_insert(0.0) += coeff * cos_t;
        }

        next.retain(|key, coeff| {
            if coeff.abs() < PRUNE_EPS {
                return false;
            }
            match mode {
                TruncationMode::Weight { w } => key.len() <= w,
                TruncationMode::Coefficient { c } => coeff.abs() >= c,
                _ => true,
            }
        });
        if next.len() > term_cap {
            return Err(Error::TermCapExceeded { cap: term_cap });
        }
        terms = next;
    }

    // ⟨+|^⊗N s |+⟩^⊗N is 1 for strings of X and I, 0 otherwise.
    Ok(terms
        .iter()
        .filter(|(key, _)| key.iter().all(|&(_, l)| l == Letter::X))
        .map(|(_, coeff)| coeff)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_bipolar_zy, build_qaoa, ParameterScheme};
    use crate::orient::{bfs_lightcone_orientation, OrientedDag};
    use crate::sim::statevector;
    use approx::assert_abs_diff_eq;

    #[test]
    fn k2_matches_minus_sin() {
        let g = UndirectedGraph::new(2, &[(0, 1)]).unwrap();
        let dag = OrientedDag::from_directions(g.clone(), vec![(0, 1)]).unwrap();
        let circuit = build_bipolar_zy(&dag, 1, ParameterScheme::Uniform).unwrap();
        let v = backpropagate_edge(
            &g,
            &circuit,
            &[0.7],
            (0, 1),
            TruncationMode::None,
            DEFAULT_TERM_CAP,
        )
        .unwrap();
        assert_abs_diff_eq!(v, -(0.7f64).sin(), epsilon = 1e-12);
    }

    #[test]
    fn exact_mode_matches_statevector() {
        for seed in 0..4u64 {
            let g = UndirectedGraph::random_regular(8, 3, seed).unwrap();
            let dag = bfs_lightcone_orientation(&g, 0).unwrap();
            let circuits = [
                build_bipolar_zy(&dag, 2, ParameterScheme::HeadDegree).unwrap(),
                build_qaoa(&g, 2).unwrap(),
            ];
            for circuit in circuits {
                let params: Vec<f64> =
                    (0..circuit.parameter_count).map(|k| 0.4 + 0.13 * k as f64).collect();
                let sv = statevector::edge_expectations(&g, &circuit, &params).unwrap();
                for (idx, &(a, b)) in g.edges().iter().enumerate() {
                    let v = backpropagate_edge(
                        &g,
                        &circuit,
                        &params,
                        (a, b),
                        TruncationMode::None,
                        DEFAULT_TERM_CAP,
                    )
                    .unwrap();
                    assert_abs_diff_eq!(v, sv[idx], epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn k_local_zero_gives_closed_form_on_dag() {
        // 0-local ⟨Z_iZ_j⟩ for edge i→j at p=1 is −cos^{k}θ sinθ with
        // k = indeg(j) − 1.
        let g = UndirectedGraph::random_regular(10, 3, 11).unwrap();
        let dag = bfs_lightcone_orientation(&g, 0).unwrap();
        let circuit = build_bipolar_zy(&dag, 1, ParameterScheme::Uniform).unwrap();
        let theta: f64 = 0.9359294689;
        for (idx, &(a, b)) in g.edges().iter().enumerate() {
            let (_, head) = dag.directions()[idx];
            let k = dag.in_degree(head) - 1;
            let expect = -theta.cos().powi(k as i32) * theta.sin();
            let v = backpropagate_edge(
                &g,
                &circuit,
                &[theta],
                (a, b),
                TruncationMode::KLocal { k: 0 },
                DEFAULT_TERM_CAP,
            )
            .unwrap();
            assert_abs_diff_eq!(v, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn k_local_exact_on_trees() {
        // On a tree every k-local restriction is exact, including k = 0.
        let g = UndirectedGraph::path(7);
        let dag = bfs_lightcone_orientation(&g, 3).unwrap();
        let circuit = build_bipolar_zy(&dag, 2, ParameterScheme::PerGate).unwrap();
        let params: Vec<f64> = (0..circuit.parameter_count).map(|k| 0.2 + 0.11 * k as f64).collect();
        let sv = statevector::edge_expectations(&g, &circuit, &params).unwrap();
        for k in 0..3usize {
            for (idx, &(a, b)) in g.edges().iter().enumerate() {
                let v = backpropagate_edge(
                    &g,
                    &circuit,
                    &params,
                    (a, b),
                    TruncationMode::KLocal { k },
                    DEFAULT_TERM_CAP,
                )
                .unwrap();
                assert_abs_diff_eq!(v, sv[idx], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn weight_and_coefficient_modes_interpolate() {
        let g = UndirectedGraph::random_regular(10, 3, 5).unwrap();
        let dag = bfs_lightcone_orientation(&g, 0).unwrap();
        let circuit = build_bipolar_zy(&dag, 2, ParameterScheme::HeadDegree).unwrap();
        let params: Vec<f64> = (0..circuit.parameter_count)
            .map(|k| 0.8 - 0.12 * k as f64)
            .collect();
        let params = &params[..];
        let edge = g.edges()[0];
        let exact = backpropagate_edge(
            &g,
            &circuit,
            params,
            edge,
            TruncationMode::None,
            DEFAULT_TERM_CAP,
        )
        .unwrap();
        // A generous weight bound and a tiny coefficient threshold must be
        // near-exact; very aggressive truncation generally is not.
        for mode in [
            TruncationMode::Weight { w: 10 },
            TruncationMode::Coefficient { c: 1e-12 },
        ] {
            let v =
                backpropagate_edge(&g, &circuit, params, edge, mode, DEFAULT_TERM_CAP).unwrap();
            assert_abs_diff_eq!(v, exact, epsilon = 1e-8);
        }
    }

    #[test]
    fn term_cap_is_enforced() {
        let g = UndirectedGraph::random_regular(12, 3, 2).unwrap();
        let dag = bfs_lightcone_orientation(&g, 0).unwrap();
        let circuit = build_bipolar_zy(&dag, 3, ParameterScheme::Uniform).unwrap();
        let params = vec![0.8; circuit.parameter_count];
        let err = backpropagate_edge(&g, &circuit, &params, g.edges()[0], TruncationMode::None, 4)
            .unwrap_err();
        assert!(matches!(err, Error::TermCapExceeded { cap: 4 }));
    }
}
