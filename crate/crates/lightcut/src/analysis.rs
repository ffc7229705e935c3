//! Closed-form k-local expectations and numeric performance-guarantee
//! bounds for the bipolar-ZY ansatz family.
//!
//! Every bound is computed, not hard-coded: a coarse grid over the angle
//! domain (0, π/2) followed by golden-section refinement to 1e-9, and exact
//! vertex enumeration plus an interior grid for the ratio polytopes of the
//! min-max bounds. Reference values appear only in the tests.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Worst-case witness attached to a min-max bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Edge-type or subgraph ratios r.
    Ratios { r: Vec<f64> },
    /// Cycle indices (k1, k2); cycle lengths are 2k+3.
    CycleIndices { k1: usize, k2: usize },
    /// Source-count ratio N_+/N.
    NPlusRatio { ratio: f64 },
}

/// A performance guarantee α together with the optimizer that attains it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GuaranteeBound {
    pub method: String,
    pub alpha: f64,
    pub optimal_angles: Vec<f64>,
    pub witness: Option<Witness>,
}

const GRID_POINTS: usize = 721;
const THETA_TOL: f64 = 1e-9;

/// Maximize a unimodal-after-gridding function on [lo, hi]: coarse grid,
/// then golden-section refinement on the bracketing interval.
pub(crate) fn maximize_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    let mut best_idx = 0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..GRID_POINTS {
        let x = lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64;
        let v = f(x);
        if v > best_val {
            best_val = v;
            best_idx = i;
        }
    }
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let mut a = (lo + (best_idx as f64 - 1.0) * step).max(lo);
    let mut b = (lo + (best_idx as f64 + 1.0) * step).min(hi);
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > THETA_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    (f(x), x)
}

/// 0-local single-round expectation ⟨Z_iZ_j⟩ = −cos^{k_ij}θ · sinθ for an
/// edge i→j with k_ij = deg⁻(j) − 1 cosine factors.
pub fn zero_local_edge(k_ij: usize, theta: f64) -> f64 {
    -theta.cos().powi(k_ij as i32) * theta.sin()
}

/// 0-local two-round expectation for an edge i→j on a D-regular graph.
pub fn zero_local_edge_p2(
    deg_plus_i: usize,
    deg_minus_j: usize,
    d: usize,
    theta1: f64,
    theta2: f64,
) -> Result<f64> {
    if deg_minus_j == 0 || deg_minus_j > d || deg_plus_i == 0 || deg_plus_i > d {
        return Err(Error::InvalidArgument(format!(
            "degrees (deg+ i = {deg_plus_i}, deg- j = {deg_minus_j}) out of range for D = {d}"
        )));
    }
    let deg_plus_j = d - deg_minus_j;
    let k_j = deg_plus_i + deg_plus_j;
    let k_j_prime = deg_minus_j - 1;
    let k_i = deg_plus_i - 1;
    let k_i_prime = d;
    let (s1, c1) = (theta1.sin(), theta1.cos());
    let (s2, c2) = (theta2.sin(), theta2.cos());
    Ok(-s1 * c1.powi(k_j_prime as i32) * c2.powi(k_j as i32)
        - s2 * c2.powi(k_i as i32) * c1.powi(k_i_prime as i32))
}

/// The single-angle 0-local objective ½[1 + (1−k)sinθ + k·cosθ sinθ]
/// parameterized by the averaged head-in-degree k.
pub fn theorem1_objective(k: f64, theta: f64) -> f64 {
    0.5 * (1.0 + (1.0 - k) * theta.sin() + k * theta.cos() * theta.sin())
}

/// 0-local guarantee for 3-regular graphs as a function of the source
/// fraction N_+/N, via k = 2/3 + 4(N_+/N)/3.
pub fn theorem1_bound(n_plus_over_n: f64) -> Result<GuaranteeBound> {
    if !(0.0..=1.0).contains(&n_plus_over_n) {
        return Err(Error::InvalidArgument(format!(
            "source ratio {n_plus_over_n} outside [0, 1]"
        )));
    }
    let k = 2.0 / 3.0 + 4.0 * n_plus_over_n / 3.0;
    let (alpha, theta) = maximize_1d(|t| theorem1_objective(k, t), 1e-9, FRAC_PI_2);
    Ok(GuaranteeBound {
        method: "zy1-0local".into(),
        alpha,
        optimal_angles: vec![theta],
        witness: Some(Witness::NPlusRatio {
            ratio: n_plus_over_n,
        }),
    })
}

/// Worst-edge (non-averaged) single-angle term max_θ ½(1 + cos²θ sinθ),
/// which coincides with the depth-1 QAOA guarantee on 3-regular graphs.
pub fn qaoa1_style_bound() -> GuaranteeBound {
    let (alpha, theta) = maximize_1d(
        |t| 0.5 * (1.0 + t.cos() * t.cos() * t.sin()),
        1e-9,
        FRAC_PI_2,
    );
    GuaranteeBound {
        method: "qaoa1-style".into(),
        alpha,
        optimal_angles: vec![theta],
        witness: None,
    }
}

/// 0-local single-round guarantee for D-regular graphs:
/// max_θ ½[1 + (1−2/D)cos^{D−3}θ sinθ + (2/D)cos^{D−2}θ sinθ].
pub fn d_regular_zy1_bound(d: usize) -> Result<GuaranteeBound> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("degree {d} below 2")));
    }
    let df = d as f64;
    let f = |t: f64| {
        let (s, c) = (t.sin(), t.cos());
        // For D = 2 the first coefficient vanishes, sidestepping cos^{-1}.
        let first = if d == 2 {
            0.0
        } else {
            (1.0 - 2.0 / df) * c.powi(d as i32 - 3) * s
        };
        0.5 * (1.0 + first + (2.0 / df) * c.powi(d as i32 - 2) * s)
    };
    let (alpha, theta) = maximize_1d(f, 1e-9, FRAC_PI_2);
    Ok(GuaranteeBound {
        method: format!("zy1-0local-{d}-regular"),
        alpha,
        optimal_angles: vec![theta],
        witness: None,
    })
}

/// Inner objective of the two-round 0-local min-max on 3-regular graphs:
/// ½ Σ_I r_I t_I(θ1, θ2) for the four directed-degree edge types.
pub fn p2_inner_objective(r: [f64; 4], theta1: f64, theta2: f64) -> f64 {
    let d = 3i32;
    let (s1, c1) = (theta1.sin(), theta1.cos());
    let (s2, c2) = (theta2.sin(), theta2.cos());
    let t00 = s1 * c2.powi(d) * c1.powi(d - 3) + s2 * c1.powi(d) * c2.powi(d - 3);
    let t01 = s1 * c2.powi(d - 1) * c1.powi(d - 2) + s2 * c1.powi(d) * c2.powi(d - 3);
    let t10 = s1 * c2.powi(d + 1) * c1.powi(d - 3) + s2 * c1.powi(d) * c2.powi(d - 2);
    let t11 = s1 * c2.powi(d) * c1.powi(d - 2) + s2 * c1.powi(d) * c2.powi(d - 2);
    0.5 * (r[0] * t00 + r[1] * t01 + r[2] * t10 + r[3] * t11)
}

/// Maximize the inner p=2 objective over (θ1, θ2) by a coarse 2-D grid plus
/// alternating golden-section sweeps.
fn p2_inner_max(r: [f64; 4]) -> (f64, [f64; 2]) {
    let grid = 121usize;
    let (mut best, mut t1, mut t2) = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..grid {
        let a = 1e-4 + (FRAC_PI_2 - 2e-4) * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let b = 1e-4 + (FRAC_PI_2 - 2e-4) * j as f64 / (grid - 1) as f64;
            let v = p2_inner_objective(r, a, b);
            if v > best {
                best = v;
                t1 = a;
                t2 = b;
            }
        }
    }
    for _ in 0..60 {
        let (_, x1) = maximize_1d(|t| p2_inner_objective(r, t, t2), 1e-9, FRAC_PI_2);
        t1 = x1;
        let (v, x2) = maximize_1d(|t| p2_inner_objective(r, t1, t), 1e-9, FRAC_PI_2);
        t2 = x2;
        if (v - best).abs() < 1e-12 {
            best = v;
            break;
        }
        best = v;
    }
    (best, [t1, t2])
}

/// Vertices of {r ≥ 0, Σr = 1, r1+r3 ≤ 2/3, r2+r3 ≤ 2/3} by exhaustive
/// active-set enumeration of the six inequality constraints.
fn p2_polytope_vertices() -> Vec<[f64; 4]> {
    // Constraint rows a·r = b when active (plus the always-active Σr = 1).
    let rows: [([f64; 4], f64); 6] = [
        ([1.0, 0.0, 0.0, 0.0], 0.0),
        ([0.0, 1.0, 0.0, 0.0], 0.0),
        ([0.0, 0.0, 1.0, 0.0], 0.0),
        ([0.0, 0.0, 0.0, 1.0], 0.0),
        ([0.0, 1.0, 0.0, 1.0], 2.0 / 3.0),
        ([0.0, 0.0, 1.0, 1.0], 2.0 / 3.0),
    ];
    let mut vertices: Vec<[f64; 4]> = Vec::new();
    for a in 0..6 {
        for b in (a + 1)..6 {
            for c in (b + 1)..6 {
                let mut m = nalgebra::Matrix4::from_rows(&[
                    nalgebra::RowVector4::from_row_slice(&[1.0, 1.0, 1.0, 1.0]),
                    nalgebra::RowVector4::from_row_slice(&rows[a].0),
                    nalgebra::RowVector4::from_row_slice(&rows[b].0),
                    nalgebra::RowVector4::from_row_slice(&rows[c].0),
                ]);
                let rhs = nalgebra::Vector4::new(1.0, rows[a].1, rows[b].1, rows[c].1);
                let Some(inv) = m.try_inverse() else { continue };
                m = inv;
                let r = m * rhs;
                let r = [r[0], r[1], r[2], r[3]];
                let feasible = r.iter().all(|&x| x >= -1e-9)
                    && r[1] + r[3] <= 2.0 / 3.0 + 1e-9
                    && r[2] + r[3] <= 2.0 / 3.0 + 1e-9;
                if feasible && !vertices.iter().any(|v| {
                    v.iter().zip(&r).all(|(x, y)| (x - y).abs() < 1e-9)
                }) {
                    vertices.push(r.map(|x| x.max(0.0)));
                }
            }
        }
    }
    vertices
}

/// Two-round 0-local min-max guarantee on 3-regular graphs: minimize the
/// inner max over the feasible edge-type ratio polytope.
pub fn zy2_bound_3regular() -> GuaranteeBound {
    let mut candidates = p2_polytope_vertices();
    // Interior grid fallback (step 1/12) in case the minimum were not at a
    // vertex of the ratio polytope.
    let steps = 12usize;
    for i in 0..=steps {
        for j in 0..=(steps - i) {
            for k in 0..=(steps - i - j) {
                let r = [
                    i as f64 / steps as f64,
                    j as f64 / steps as f64,
                    k as f64 / steps as f64,
                    (steps - i - j - k) as f64 / steps as f64,
                ];
                if r[1] + r[3] <= 2.0 / 3.0 + 1e-9 && r[2] + r[3] <= 2.0 / 3.0 + 1e-9 {
                    candidates.push(r);
                }
            }
        }
    }
    let (mut best, mut best_r, mut best_angles) = (f64::INFINITY, [0.0; 4], [0.0; 2]);
    for r in candidates {
        let (v, angles) = p2_inner_max(r);
        if v < best {
            best = v;
            best_r = r;
            best_angles = angles;
        }
    }
    GuaranteeBound {
        method: "zy2-0local-minmax".into(),
        alpha: 0.5 + best,
        optimal_angles: best_angles.to_vec(),
        witness: Some(Witness::Ratios {
            r: best_r.to_vec(),
        }),
    }
}

/// Numerator F of the 1-local p=1 objective on 3-regular graphs for the
/// subgraph ratios (r_triangle, r_down, r_diamond).
pub fn one_local_objective(r: [f64; 3], theta: f64) -> f64 {
    let (s, c) = (theta.sin(), theta.cos());
    let l_tri = 0.5 * (3.0 + s + 2.0 * c * s - 2.0 * c * s * s);
    let l_down = 0.5 * (3.0 + 3.0 * c * s - 2.0 * c * c * s * s);
    let l_dia = 0.5 * (5.0 + s + 4.0 * c * s - 2.0 * c * s * s - 2.0 * c * c * s * s);
    let l0 = 0.5 * (1.0 + s);
    let l1 = 0.5 * (1.0 + s * c);
    let (rt, rd, rdi) = (r[0], r[1], r[2]);
    let num = rt * l_tri
        + rd * l_down
        + rdi * l_dia
        + (0.5 - rt - rdi) * l0
        + (1.0 - 2.0 * rt - 3.0 * rd - 4.0 * rdi) * l1;
    num / (1.5 - rt - rd - rdi)
}

/// 1-local p=1 min-max guarantee on 3-regular graphs: minimize over the
/// feasible subgraph-density ratios the maximum over θ.
pub fn one_local_minmax_3regular() -> GuaranteeBound {
    let feasible = |r: [f64; 3]| {
        r.iter().all(|&x| x >= -1e-12)
            && 0.5 - r[0] - r[2] >= -1e-9
            && 1.0 - 2.0 * r[0] - 3.0 * r[1] - 4.0 * r[2] >= -1e-9
    };
    let mut candidates: Vec<[f64; 3]> = Vec::new();
    for i in 0..=20 {
        for j in 0..=13 {
            for k in 0..=10 {
                let r = [i as f64 * 0.025, j as f64 / 39.0, k as f64 * 0.025];
                if feasible(r) {
                    candidates.push(r);
                }
            }
        }
    }
    let (mut best, mut best_r, mut best_theta) = (f64::INFINITY, [0.0; 3], 0.0);
    for r in candidates {
        let (v, theta) = maximize_1d(|t| one_local_objective(r, t), 1e-9, FRAC_PI_2);
        if v < best {
            best = v;
            best_r = r;
            best_theta = theta;
        }
    }
    GuaranteeBound {
        method: "zy1-1local-minmax".into(),
        alpha: best,
        optimal_angles: vec![best_theta],
        witness: Some(Witness::Ratios {
            r: best_r.to_vec(),
        }),
    }
}

/// Correction term contributed by a simple cycle of length `length` whose
/// orientation has a single cycle source (and hence a single cycle sink):
/// −(−sinθ)^{|C|−1} cos^{I_C}θ; orientations with more than one cycle
/// source contribute 0 (`single_source` = false).
pub fn cycle_contribution(
    length: usize,
    in_degree: usize,
    theta: f64,
    single_source: bool,
) -> Result<f64> {
    if length < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle length {length} below 3"
        )));
    }
    if !single_source {
        return Ok(0.0);
    }
    Ok(-(-theta.sin()).powi(length as i32 - 1) * theta.cos().powi(in_degree as i32))
}

/// g(θ) = ½(1 + sinθ/3 + 2 sinθ cosθ/3), the averaged 0-local objective.
fn g_avg(theta: f64) -> f64 {
    theorem1_objective(2.0 / 3.0, theta)
}

/// The two-cycle worst-case objective F(k1,k2,θ)/G(k1,k2); cycle lengths
/// are |C_i| = 2k_i + 3.
pub fn theorem2_objective(k1: usize, k2: usize, theta: f64) -> f64 {
    let (s, c) = (theta.sin(), theta.cos());
    let p = |e: usize| 2f64.powi(e as i32);
    let f = g_avg(theta) * (p(k1 + 2) + p(k2 + 2) - 3.0)
        - s.powi(2 * k1 as i32 + 2) * c.powi(2 * k1 as i32 + 1) * p(k1)
        - s.powi(2 * k2 as i32 + 2) * c * c * p(k2)
        + p(k1 + k2) * s.powi(2 * (k1 + k2) as i32 + 3) * c.powi(2 * k1 as i32 + 2);
    let g = p(k1 + 2) + p(k2 + 2) - 4.0;
    f / g
}

/// Worst-case two-cycle guarantee for 3-regular graphs: minimize over cycle
/// index pairs (k1, k2) ≤ k_max the θ-maximized objective, capped by the
/// cycle-free 0-local value.
pub fn theorem2_bound(k_max: usize) -> Result<GuaranteeBound> {
    if k_max < 8 {
        return Err(Error::InvalidArgument(format!(
            "cycle search cap {k_max} below 8"
        )));
    }
    let cap = theorem1_bound(0.0)?;
    let (mut best, mut best_pair, mut best_theta) = (cap.alpha, None, cap.optimal_angles[0]);
    for k1 in 0..=k_max {
        for k2 in 0..=k_max {
            let (v, theta) = maximize_1d(|t| theorem2_objective(k1, k2, t), 1e-9, FRAC_PI_2);
            if v < best {
                best = v;
                best_pair = Some((k1, k2));
                best_theta = theta;
            }
        }
    }
    Ok(GuaranteeBound {
        method: "zy1-two-cycle-worst-case".into(),
        alpha: best,
        optimal_angles: vec![best_theta],
        witness: best_pair.map(|(k1, k2)| Witness::CycleIndices { k1, k2 }),
    })
}

/// Two-angle relaxed 0-local guarantee on 3-regular graphs:
/// max over (θ, θ′) of ½[1 + sinθ/3 + (2/3)sinθ′cosθ′] = 5/6.
pub fn angle_relaxed_bound_3regular() -> GuaranteeBound {
    // The objective is separable in the two angles.
    let (v1, t1) = maximize_1d(|t| t.sin() / 3.0, 1e-9, FRAC_PI_2);
    let (v2, t2) = maximize_1d(|t| (2.0 / 3.0) * t.sin() * t.cos(), 1e-9, FRAC_PI_2);
    GuaranteeBound {
        method: "zy1-0local-angle-relaxed".into(),
        alpha: 0.5 * (1.0 + v1 + v2),
        optimal_angles: vec![t1, t2],
        witness: None,
    }
}

/// Exact expected cut of the two-angle bipolar-ZY_1 ansatz on the cycle C_L:
/// ½[L + (L−2)sinθ1 + 2sinθ2cosθ2 + 2(−sinθ1)^{L−2}sinθ2cosθ2].
pub fn two_regular_expected_cut(l: usize, theta1: f64, theta2: f64) -> Result<f64> {
    if l < 3 {
        return Err(Error::InvalidArgument(format!("cycle length {l} below 3")));
    }
    let (s1, s2, c2) = (theta1.sin(), theta2.sin(), theta2.cos());
    Ok(0.5
        * (l as f64
            + (l as f64 - 2.0) * s1
            + 2.0 * s2 * c2
            + 2.0 * (-s1).powi(l as i32 - 2) * s2 * c2))
}

/// All π-based angles used by the closed-form optima.
pub const QUARTER_PI: f64 = PI / 4.0;
