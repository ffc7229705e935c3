//! Dense statevector backend. Qubit 0 is the least significant bit of the
//! amplitude index.

use crate::ansatz::{AnsatzCircuit, GateKind};
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use num_complex::Complex64;

/// Hard cap on dense simulation size (16M amplitudes).
pub const DEFAULT_QUBIT_CAP: usize = 24;

#[derive(Debug, Clone)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// |+⟩^⊗n.
    pub fn plus_state(n: usize) -> Result<Self> {
        if n > DEFAULT_QUBIT_CAP {
            return Err(Error::QubitCapExceeded {
                n,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        let dim = 1usize << n;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n,
            amps: vec![amp; dim],
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Apply one gate with its resolved angle.
    pub fn apply(&mut self, kind: GateKind, angle: f64) {
        match kind {
            GateKind::Zy { control, target } => self.apply_zy(control, target, angle),
            GateKind::Ry { qubit } => self.apply_ry(qubit, angle),
            GateKind::QaoaCost { a, b } => self.apply_zz_phase(a, b, angle),
            GateKind::QaoaMixer { qubit } => self.apply_x_rot(qubit, angle),
        }
    }

    /// Apply the inverse of one gate.
    pub fn apply_inverse(&mut self, kind: GateKind, angle: f64) {
        self.apply(kind, -angle);
    }

    /// e^{-iθ Z_c Y_t / 2}: a Y-rotation on the target whose sign is
    /// conditioned on the control's Z eigenvalue.
    fn apply_zy(&mut self, control: usize, target: usize, theta: f64) {
        debug_assert_ne!(control, target);
        let mask_t = 1usize << target;
        let mask_c = 1usize << control;
        let (c_pos, s_pos) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        for idx in 0..self.amps.len() {
            if idx & mask_t != 0 {
                continue;
            }
            let j = idx | mask_t;
            let s = if idx & mask_c == 0 { s_pos } else { -s_pos };
            let a0 = self.amps[idx];
            let a1 = self.amps[j];
            self.amps[idx] = c_pos * a0 - s * a1;
            self.amps[j] = s * a0 + c_pos * a1;
        }
    }

    /// e^{-iθ Y_q / 2}.
    fn apply_ry(&mut self, qubit: usize, theta: f64) {
        let mask = 1usize << qubit;
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        for idx in 0..self.amps.len() {
            if idx & mask != 0 {
                continue;
            }
            let j = idx | mask;
            let a0 = self.amps[idx];
            let a1 = self.amps[j];
            self.amps[idx] = c * a0 - s * a1;
            self.amps[j] = s * a0 + c * a1;
        }
    }

    /// e^{-iγ Z_a Z_b / 2}: diagonal phase.
    fn apply_zz_phase(&mut self, a: usize, b: usize, gamma: f64) {
        let mask_a = 1usize << a;
        let mask_b = 1usize << b;
        let phase_plus = Complex64::from_polar(1.0, -gamma / 2.0);
        let phase_minus = Complex64::from_polar(1.0, gamma / 2.0);
        for (idx, amp) in self.amps.iter_mut().enumerate() {
            let equal = (idx & mask_a == 0) == (idx & mask_b == 0);
            *amp *= if equal { phase_plus } else { phase_minus };
        }
    }

    /// e^{-iβ X_q}.
    fn apply_x_rot(&mut self, qubit: usize, beta: f64) {
        let mask = 1usize << qubit;
        let c = beta.cos();
        let ms = Complex64::new(0.0, -beta.sin());
        for idx in 0..self.amps.len() {
            if idx & mask != 0 {
                continue;
            }
            let j = idx | mask;
            let a0 = self.amps[idx];
            let a1 = self.amps[j];
            self.amps[idx] = c * a0 + ms * a1;
            self.amps[j] = ms * a0 + c * a1;
        }
    }

    /// ⟨Z_i Z_j⟩ of the current state.
    pub fn zz_expectation(&self, i: usize, j: usize) -> f64 {
        let mask_i = 1usize << i;
        let mask_j = 1usize << j;
        let mut value = 0.0;
        for (idx, amp) in self.amps.iter().enumerate() {
            let equal = (idx & mask_i == 0) == (idx & mask_j == 0);
            let p = amp.norm_sqr();
            value += if equal { p } else { -p };
        }
        value
    }

    /// Apply the Pauli string of a gate generator to a copy of `self`
    /// (used by the adjoint gradient sweep).
    pub(crate) fn apply_generator(&self, kind: GateKind) -> Statevector {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        match kind {
            GateKind::Zy { control, target } => {
                let mask_c = 1usize << control;
                let mask_t = 1usize << target;
                for (idx, amp) in self.amps.iter().enumerate() {
                    // Z_c Y_t |z⟩: Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩.
                    let zc = if idx & mask_c == 0 { 1.0 } else { -1.0 };
                    let phase = if idx & mask_t == 0 {
                        Complex64::new(0.0, zc)
                    } else {
                        Complex64::new(0.0, -zc)
                    };
                    out[idx ^ mask_t] += phase * amp;
                }
            }
            GateKind::Ry { qubit } => {
                let mask = 1usize << qubit;
                for (idx, amp) in self.amps.iter().enumerate() {
                    let phase = if idx & mask == 0 {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    };
                    out[idx ^ mask] += phase * amp;
                }
            }
            GateKind::QaoaCost { a, b } => {
                let mask_a = 1usize << a;
                let mask_b = 1usize << b;
                for (idx, amp) in self.amps.iter().enumerate() {
                    let equal = (idx & mask_a == 0) == (idx & mask_b == 0);
                    out[idx] = if equal { *amp } else { -*amp };
                }
            }
            GateKind::QaoaMixer { qubit } => {
                let mask = 1usize << qubit;
                for (idx, amp) in self.amps.iter().enumerate() {
                    out[idx ^ mask] = *amp;
                }
            }
        }
        Statevector { n: self.n, amps: out }
    }
}

/// Run a circuit on |+⟩^⊗N with a resolved parameter vector.
pub fn run_circuit(circuit: &AnsatzCircuit, params: &[f64]) -> Result<Statevector> {
    let angles = circuit.resolve_angles(params)?;
    let mut state = Statevector::plus_state(circuit.n_qubits)?;
    for (gate, &angle) in circuit.gates.iter().zip(&angles) {
        state.apply(gate.kind, angle);
    }
    Ok(state)
}

/// Per-edge ⟨Z_iZ_j⟩ values in `g.edges()` order.
pub fn edge_expectations(
    g: &UndirectedGraph,
    circuit: &AnsatzCircuit,
    params: &[f64],
) -> Result<Vec<f64>> {
    let state = run_circuit(circuit, params)?;
    Ok(g.edges()
        .iter()
        .map(|&(i, j)| state.zz_expectation(i, j))
        .collect())
}

/// Expected cut ℒ = M/2 − ½ Σ ⟨Z_iZ_j⟩.
pub fn expected_cut_value(
    g: &UndirectedGraph,
    circuit: &AnsatzCircuit,
    params: &[f64],
) -> Result<f64> {
    let zz = edge_expectations(g, circuit, params)?;
    Ok(g.m() as f64 / 2.0 - 0.5 * zz.iter().sum::<f64>())
}

/// Expected cut and its exact gradient with respect to the parameter vector
/// by reverse-mode (adjoint) differentiation: one forward sweep, one
/// backward sweep, ~3x the cost of a single evaluation.
pub fn expected_cut_and_grad(
    g: &UndirectedGraph,
    circuit: &AnsatzCircuit,
    params: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let angles = circuit.resolve_angles(params)?;
    let mut a = Statevector::plus_state(circuit.n_qubits)?;
    for (gate, &angle) in circuit.gates.iter().zip(&angles) {
        a.apply(gate.kind, angle);
    }
    // b = H_cut |ψ⟩ where H_cut is diagonal with entries cut(z).
    let mut b = a.clone();
    {
        let masks: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(i, j)| (1usize << i, 1usize << j))
            .collect();
        for (idx, amp) in b.amps.iter_mut().enumerate() {
            let mut cut = 0u32;
            for &(mi, mj) in &masks {
                if (idx & mi == 0) != (idx & mj == 0) {
                    cut += 1;
                }
            }
            *amp *= cut as f64;
        }
    }
    let value = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| (x.conj() * y).re)
        .sum::<f64>();

    // Backward sweep: at gate k, dE/dθ_k = Im⟨b|P_k|a⟩ for U_k=e^{-iθP_k/2}
    // (the mixer carries an extra factor 2 from e^{-iβX} = e^{-i(2β)X/2}).
    let mut grad = vec![0.0; circuit.parameter_count];
    for (gate, &angle) in circuit.gates.iter().zip(&angles).rev() {
        let pa = a.apply_generator(gate.kind);
        let mut d: f64 = b
            .amps
            .iter()
            .zip(&pa.amps)
            .map(|(x, y)| (x.conj() * y).im)
            .sum();
        if matches!(gate.kind, GateKind::QaoaMixer { .. }) {
            d *= 2.0;
        }
        grad[gate.param_index] += d;
        a.apply_inverse(gate.kind, angle);
        b.apply_inverse(gate.kind, angle);
    }
    Ok((value, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_bipolar_zy, build_qaoa, build_ry, ParameterScheme};
    use crate::orient::OrientedDag;
    use approx::assert_abs_diff_eq;

    fn k2_dag() -> OrientedDag {
        let g = UndirectedGraph::new(2, &[(0, 1)]).unwrap();
        OrientedDag::from_directions(g, vec![(0, 1)]).unwrap()
    }

    #[test]
    fn k2_zy_expectation_is_minus_sin() {
        let dag = k2_dag();
        let circuit = build_bipolar_zy(&dag, 1, ParameterScheme::Uniform).unwrap();
        for theta in [0.0, 0.3, 0.93, std::f64::consts::FRAC_PI_2] {
            let state = run_circuit(&circuit, &[theta]).unwrap();
            assert_abs_diff_eq!(state.zz_expectation(0, 1), -theta.sin(), epsilon = 1e-12);
            assert_abs_diff_eq!(state.norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn triangle_uniform_matches_closed_form() {
        // Upper-triangle orientation: 0→1, 1→2, 0→2.
        let g = UndirectedGraph::cycle(3);
        let dag = OrientedDag::from_directions(g.clone(), vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let circuit = build_bipolar_zy(&dag, 1, ParameterScheme::Uniform).unwrap();
        for theta in [0.2, 0.5, 0.93, 1.3] {
            let cut = expected_cut_value(&g, &circuit, &[theta]).unwrap();
            let (s, c) = (theta.sin(), theta.cos());
            let expect = 0.5 * (3.0 + s + 2.0 * c * s - 2.0 * c * s * s);
            assert_abs_diff_eq!(cut, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn theta_zero_gives_half_m() {
        let g = UndirectedGraph::complete(4);
        let c = build_qaoa(&g, 2).unwrap();
        let cut = expected_cut_value(&g, &c, &[0.0; 4]).unwrap();
        assert_abs_diff_eq!(cut, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn ry_product_state_expectations() {
        let g = UndirectedGraph::cycle(4);
        let c = build_ry(&g);
        let params = [0.3, -0.7, 1.1, 0.2];
        let zz = edge_expectations(&g, &c, &params).unwrap();
        for (k, &(i, j)) in g.edges().iter().enumerate() {
            assert_abs_diff_eq!(zz[k], params[i].sin() * params[j].sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn adjoint_gradient_matches_finite_differences() {
        let g = UndirectedGraph::random_regular(6, 3, 1).unwrap();
        let dag = crate::orient::bfs_lightcone_orientation(&g, 0).unwrap();
        for (circuit, dim) in [
            (build_bipolar_zy(&dag, 2, ParameterScheme::PerGate).unwrap(), 18),
            (build_bipolar_zy(&dag, 1, ParameterScheme::Uniform).unwrap(), 1),
            (build_qaoa(&g, 2).unwrap(), 4),
            (build_ry(&g), 6),
        ] {
            let params: Vec<f64> = (0..dim).map(|k| 0.3 + 0.17 * k as f64).collect();
            let (value, grad) = expected_cut_and_grad(&g, &circuit, &params).unwrap();
            assert_abs_diff_eq!(
                value,
                expected_cut_value(&g, &circuit, &params).unwrap(),
                epsilon = 1e-10
            );
            let h = 1e-6;
            for k in 0..dim {
                let mut plus = params.clone();
                plus[k] += h;
                let mut minus = params.clone();
                minus[k] -= h;
                let fd = (expected_cut_value(&g, &circuit, &plus).unwrap()
                    - expected_cut_value(&g, &circuit, &minus).unwrap())
                    / (2.0 * h);
                assert_abs_diff_eq!(grad[k], fd, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn qubit_cap_enforced() {
        assert!(Statevector::plus_state(25).is_err());
    }
}
