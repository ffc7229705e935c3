//! End-to-end acceptance checks. Each test prints one pass line; a failed
//! assertion is the corresponding fail line.

use lightcut::analysis;
use lightcut::ansatz::{
    build_bipolar_zy, build_ry, set_solution_angles, GateKind, ParameterScheme,
};
use lightcut::exec::Parallelism;
use lightcut::graph::{biconnected_components, UndirectedGraph};
use lightcut::optimize::{
    maximize_cut, multistart_tts_ensemble, scaling_fit, Method, OptimizerConfig,
};
use lightcut::oracle::brute_force_maxcut;
use lightcut::orient::{bfs_lightcone_orientation, bipolar_orientation_dfs};
use lightcut::sim::{
    expected_cut, variance_estimate, Backend, TruncationMode,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

fn random_connected(n: usize, m: usize, seed: u64) -> UndirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x517cc1b727220a95);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        edges.push((order[k].min(parent), order[k].max(parent)));
    }
    let mut attempts = 0;
    while edges.len() < m && attempts < 10 * m + 100 {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let e = (a.min(b), a.max(b));
        if a != b && !edges.contains(&e) {
            edges.push(e);
        }
    }
    UndirectedGraph::new(n, &edges).unwrap()
}

fn biconnected_cubic(n: usize, seed: u64) -> UndirectedGraph {
    for attempt in 0..1000 {
        if let Ok(g) = UndirectedGraph::random_regular(n, 3, seed * 1000 + attempt) {
            if !g.is_connected() {
                continue;
            }
            let dec = biconnected_components(&g).unwrap();
            if dec.bridges.is_empty() && dec.blocks.len() == 1 {
                return g;
            }
        }
    }
    panic!("no biconnected cubic graph for n={n} seed={seed}");
}

fn relaxed_cycle_params(
    l: usize,
) -> (UndirectedGraph, lightcut::ansatz::AnsatzCircuit, Vec<f64>) {
    let g = UndirectedGraph::cycle(l);
    let dag = bipolar_orientation_dfs(&g, 0, l - 1).unwrap();
    let circuit = build_bipolar_zy(&dag, 1, ParameterScheme::PerGate).unwrap();
    let sink = dag.sinks()[0];
    let mut params = vec![FRAC_PI_2; circuit.parameter_count];
    for gate in &circuit.gates {
        if let GateKind::Zy { target, .. } = gate.kind {
            if target == sink {
                params[gate.param_index] = FRAC_PI_4;
            }
        }
    }
    (g, circuit, params)
}

#[test]
fn criterion_01_single_angle_0local_bound() {
    let t = Instant::now();
    let bound = analysis::theorem1_bound(0.0).unwrap();
    assert!((bound.alpha - 0.7934).abs() < 5e-4, "alpha={}", bound.alpha);
    assert!(
        (bound.optimal_angles[0] - 0.93).abs() < 0.02,
        "theta*={}",
        bound.optimal_angles[0]
    );
    assert!(t.elapsed().as_secs_f64() < 1.0);
    println!(
        "criterion 01 (single-angle 0-local bound 0.7934): pass (alpha={:.6}, theta*={:.4})",
        bound.alpha, bound.optimal_angles[0]
    );
}

#[test]
fn criterion_02_qaoa1_style_bound() {
    let t = Instant::now();
    let bound = analysis::qaoa1_style_bound();
    assert!((bound.alpha - 0.6925).abs() < 5e-4, "alpha={}", bound.alpha);
    assert!(t.elapsed().as_secs_f64() < 1.0);
    println!(
        "criterion 02 (QAOA1-style bound 0.6925): pass (alpha={:.6})",
        bound.alpha
    );
}

#[test]
fn criterion_03_worst_case_cycle_search() {
    let t = Instant::now();
    let bound = analysis::theorem2_bound(15).unwrap();
    assert!((bound.alpha - 0.7926).abs() < 5e-4, "alpha={}", bound.alpha);
    match bound.witness {
        Some(analysis::Witness::CycleIndices { k1, k2 }) => {
            assert_eq!((2 * k1 + 3, 2 * k2 + 3), (11, 17));
        }
        ref w => panic!("unexpected witness {w:?}"),
    }
    assert!(t.elapsed().as_secs_f64() < 30.0);
    println!(
        "criterion 03 (worst-case cycle search 0.7926, cycles 11/17): pass (alpha={:.6})",
        bound.alpha
    );
}

#[test]
fn criterion_04_angle_relaxed_bound() {
    let t = Instant::now();
    let bound = analysis::angle_relaxed_bound_3regular();
    assert!((bound.alpha - 5.0 / 6.0).abs() < 1e-6, "alpha={}", bound.alpha);
    assert!((bound.optimal_angles[0] - FRAC_PI_2).abs() < 1e-6);
    assert!((bound.optimal_angles[1] - FRAC_PI_4).abs() < 1e-6);
    assert!(t.elapsed().as_secs_f64() < 1.0);
    println!(
        "criterion 04 (angle-relaxed bound 5/6 at (pi/2, pi/4)): pass (alpha={:.7})",
        bound.alpha
    );
}

#[test]
fn criterion_05_two_round_0local_minmax() {
    let t = Instant::now();
    let bound = analysis::zy2_bound_3regular();
    assert!((bound.alpha - 0.8025).abs() < 1e-3, "alpha={}", bound.alpha);
    assert!(t.elapsed().as_secs_f64() < 60.0);
    println!(
        "criterion 05 (two-round 0-local min-max 0.8025): pass (alpha={:.6})",
        bound.alpha
    );
}

#[test]
fn criterion_06_1local_minmax() {
    let t = Instant::now();
    let bound = analysis::one_local_minmax_3regular();
    assert!((bound.alpha - 0.7934).abs() < 5e-4, "alpha={}", bound.alpha);
    match bound.witness {
        Some(analysis::Witness::Ratios { ref r }) => {
            assert!(r.iter().all(|&x| x.abs() < 1e-9), "ratios={r:?}");
        }
        ref w => panic!("unexpected witness {w:?}"),
    }
    assert!(t.elapsed().as_secs_f64() < 60.0);
    println!(
        "criterion 06 (1-local min-max 0.7934 at zero ratios): pass (alpha={:.6})",
        bound.alpha
    );
}

#[test]
fn criterion_07_two_regular_exactness() {
    let t = Instant::now();
    for l in 3..=12usize {
        let target = if l % 2 == 0 { l as f64 } else { (l - 1) as f64 };
        let formula = analysis::two_regular_expected_cut(l, FRAC_PI_2, FRAC_PI_4).unwrap();
        assert!((formula - target).abs() < 1e-9, "formula L={l}: {formula}");
        let (g, circuit, params) = relaxed_cycle_params(l);
        let sv = expected_cut(
            &g,
            &circuit,
            &params,
            Backend::Statevector,
            TruncationMode::None,
            Parallelism::Sequential,
        )
        .unwrap()
        .expected_cut;
        assert!((sv - target).abs() < 1e-9, "statevector L={l}: {sv}");
    }
    assert!(t.elapsed().as_secs_f64() < 10.0);
    println!("criterion 07 (2-regular exactness L=3..12, formula and statevector): pass");
}

#[test]
fn criterion_08_multi_angle_exactness() {
    let t = Instant::now();
    for case in 0..50u64 {
        let n = 6 + (case as usize * 5) % 9; // 6..=14
        let m = n - 1 + (case as usize) % 4;
        let g = random_connected(n, m, 7000 + case);
        let best = brute_force_maxcut(&g, Parallelism::default()).unwrap();
        // Reversed light-cone orientation has the root as unique source.
        let dag = bfs_lightcone_orientation(&g, 0).unwrap().reversed();
        let params = set_solution_angles(&dag, &best.bits).unwrap();
        let circuit = build_bipolar_zy(&dag, 1, ParameterScheme::PerGate).unwrap();
        let value = expected_cut(
            &g,
            &circuit,
            &params,
            Backend::Statevector,
            TruncationMode::None,
            Parallelism::Sequential,
        )
        .unwrap()
        .expected_cut;
        assert!(
            (value - best.value as f64).abs() < 1e-9,
            "case {case}: {value} vs C_max {}",
            best.value
        );
    }
    assert!(t.elapsed().as_secs_f64() < 60.0);
    println!("criterion 08 (multi-angle solution exactness on 50 random graphs): pass");
}

#[test]
fn criterion_09_backend_equivalence() {
    let t = Instant::now();
    let schemes = [
        ParameterScheme::Uniform,
        ParameterScheme::DegreePair,
        ParameterScheme::HeadDegree,
        ParameterScheme::PerGate,
    ];
    for case in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + case);
        let n = rng.gen_range(4..=12usize);
        let m = n - 1 + rng.gen_range(0..=3usize);
        let g = random_connected(n, m, 9500 + case);
        let p = if n <= 8 {
            rng.gen_range(1..=3usize)
        } else {
            rng.gen_range(1..=2usize)
        };
        let scheme = schemes[rng.gen_range(0..schemes.len())];
        let dag = bfs_lightcone_orientation(&g, rng.gen_range(0..n)).unwrap();
        let circuit = build_bipolar_zy(&dag, p, scheme).unwrap();
        let params: Vec<f64> = (0..circuit.parameter_count)
            .map(|_| rng.gen_range(-PI..PI))
            .collect();
        let sv = expected_cut(
            &g,
            &circuit,
            &params,
            Backend::Statevector,
            TruncationMode::None,
            Parallelism::Sequential,
        )
        .unwrap();
        let pauli = expected_cut(
            &g,
            &circuit,
            &params,
            Backend::Pauli,
            TruncationMode::None,
            Parallelism::default(),
        )
        .unwrap();
        for (a, b) in sv.per_edge.iter().zip(pauli.per_edge.iter()) {
            assert!(
                (a.zz - b.zz).abs() < 1e-10,
                "case {case} (n={n} m={m} p={p} {scheme:?}) edge ({},{}): {} vs {}",
                a.i,
                a.j,
                a.zz,
                b.zz
            );
        }
    }
    assert!(t.elapsed().as_secs_f64() < 300.0);
    println!("criterion 09 (statevector vs Pauli back-propagation, 200 cases): pass");
}

#[test]
fn criterion_10_truncation_error_law() {
    let t = Instant::now();
    let petersen = UndirectedGraph::new(
        10,
        &[
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ],
    )
    .unwrap();
    let dag = bipolar_orientation_dfs(&petersen, 0, 1).unwrap();
    let circuit = build_bipolar_zy(&dag, 1, ParameterScheme::Uniform).unwrap();
    let error = |k: usize, theta: f64| -> f64 {
        let exact = expected_cut(
            &petersen,
            &circuit,
            &[theta],
            Backend::Statevector,
            TruncationMode::None,
            Parallelism::Sequential,
        )
        .unwrap()
        .expected_cut;
        let trunc = expected_cut(
            &petersen,
            &circuit,
            &[theta],
            Backend::Pauli,
            TruncationMode::KLocal { k },
            Parallelism::Sequential,
        )
        .unwrap()
        .expected_cut;
        (exact - trunc).abs()
    };
    for k in 0..=2usize {
        let e1 = error(k, 0.1);
        let e2 = error(k, 0.05);
        let exponent = (e1 / e2).ln() / (0.1f64.sin() / 0.05f64.sin()).ln();
        // The truncation-error law guarantees decay at least as fast as
        // sin^{2k+1}; the measured exponent must not fall below it.
        assert!(
            exponent >= (2 * k + 1) as f64 - 0.1,
            "k={k}: exponent {exponent}"
        );
    }
    // Trees: the truncation is exact at any k for a single round.
    for seed in 0..3u64 {
        let g = random_connected(8, 7, 4200 + seed);
        let tdag = bfs_lightcone_orientation(&g, 0).unwrap();
        let tc = build_bipolar_zy(&tdag, 1, ParameterScheme::Uniform).unwrap();
        for k in 0..=2usize {
            let exact = expected_cut(&g, &tc, &[0.9], Backend::Statevector, TruncationMode::None, Parallelism::Sequential).unwrap().expected_cut;
            let trunc = expected_cut(&g, &tc, &[0.9], Backend::Pauli, TruncationMode::KLocal { k }, Parallelism::Sequential).unwrap().expected_cut;
            assert!((exact - trunc).abs() < 1e-12, "tree seed={seed} k={k}");
        }
    }
    assert!(t.elapsed().as_secs_f64() < 60.0);
    println!("criterion 10 (k-local truncation error law on girth-5 graph, exact on trees): pass");
}

#[test]
fn criterion_11_variance_lower_bound() {
    let t = Instant::now();
    let g = biconnected_cubic(8, 11);
    let dag = bipolar_orientation_dfs(&g, 0, g.neighbors(0)[0]).unwrap();
    let circuit = build_bipolar_zy(&dag, 1, ParameterScheme::PerGate).unwrap();
    let est = variance_estimate(&g, &circuit, 4000, 7, Parallelism::default()).unwrap();
    let bound = 24.0 / 256.0;
    assert!(
        est.variance >= bound - 3.0 * est.std_error,
        "variance {} below {bound} - 3*{}",
        est.variance,
        est.std_error
    );
    assert!(t.elapsed().as_secs_f64() < 300.0);
    println!(
        "criterion 11 (Monte-Carlo variance >= 24/256 - 3 SE): pass (var={:.4}, se={:.4})",
        est.variance, est.std_error
    );
}

#[test]
fn criterion_12_optimized_ratio_meets_guarantee() {
    let t = Instant::now();
    let mut worst: f64 = 1.0;
    let mut idx = 0u64;
    for &n in &[8usize, 10, 12, 14, 16] {
        for i in 0..10u64 {
            let g = biconnected_cubic(n, 1200 + 10 * n as u64 + i);
            let dag = bipolar_orientation_dfs(&g, 0, g.neighbors(0)[0]).unwrap();
            let circuit = build_bipolar_zy(&dag, 1, ParameterScheme::Uniform).unwrap();
            let c_max = brute_force_maxcut(&g, Parallelism::default()).unwrap().value;
            // Coarse 1-D scan plus a local polish from the best grid point.
            let eval = |theta: f64| {
                expected_cut(
                    &g,
                    &circuit,
                    &[theta],
                    Backend::Statevector,
                    TruncationMode::None,
                    Parallelism::Sequential,
                )
                .unwrap()
                .expected_cut
            };
            let mut best = (f64::NEG_INFINITY, 0.0);
            for s in 1..64 {
                let theta = PI * s as f64 / 64.0;
                let v = eval(theta);
                if v > best.0 {
                    best = (v, theta);
                }
            }
            let config = OptimizerConfig {
                method: Method::NelderMead,
                ..Default::default()
            };
            let polished = maximize_cut(&g, &circuit, &[best.1], &config, None).unwrap();
            let ratio = polished.value.max(best.0) / c_max as f64;
            assert!(
                ratio >= 0.7926,
                "instance {idx} (n={n}): ratio {ratio}"
            );
            worst = worst.min(ratio);
            idx += 1;
        }
    }
    assert!(t.elapsed().as_secs_f64() < 900.0);
    println!(
        "criterion 12 (optimized uniform ZY1 ratio >= 0.7926 on 50 cubic graphs): pass (worst={worst:.4})"
    );
}

#[test]
fn criterion_13_weight_truncation_artifact() {
    let t = Instant::now();
    for l in 6..=12usize {
        let (g, circuit, params) = relaxed_cycle_params(l);
        let value = expected_cut(
            &g,
            &circuit,
            &params,
            Backend::Pauli,
            TruncationMode::Weight { w: 2 },
            Parallelism::Sequential,
        )
        .unwrap()
        .expected_cut;
        assert!(
            (value - (l as f64 - 0.5)).abs() < 1e-9,
            "L={l}: {value}"
        );
    }
    assert!(t.elapsed().as_secs_f64() < 10.0);
    println!("criterion 13 (weight-2 truncation constant offset L - 0.5): pass");
}

#[test]
fn criterion_14_tts_scaling_ordering() {
    let t = Instant::now();
    let config = OptimizerConfig {
        method: Method::Bfgs,
        restart_cap: 200,
        seed: 5,
        ..Default::default()
    };
    let mut bases = Vec::new();
    for ansatz in ["bipolar-zy-pergate", "ry"] {
        let mut points = Vec::new();
        for &n in &[8usize, 10, 12, 14, 16] {
            let mut instances = Vec::new();
            for i in 0..50u64 {
                let g = biconnected_cubic(n, 37 * n as u64 + i);
                let circuit = if ansatz == "ry" {
                    build_ry(&g)
                } else {
                    let dag = bipolar_orientation_dfs(&g, 0, g.neighbors(0)[0]).unwrap();
                    build_bipolar_zy(&dag, 1, ParameterScheme::PerGate).unwrap()
                };
                let c_max = brute_force_maxcut(&g, Parallelism::default()).unwrap().value;
                instances.push((g, circuit, c_max, format!("n{n}-g{i}"), ansatz.to_string()));
            }
            let records =
                multistart_tts_ensemble(&instances, &config, Parallelism::default()).unwrap();
            let mut iters: Vec<usize> =
                records.iter().map(|r| r.total_iterations).collect();
            iters.sort_unstable();
            let median = (iters[24] + iters[25]) as f64 / 2.0;
            points.push((n as f64, median));
        }
        let fit = scaling_fit(&points).unwrap();
        println!("  tts {ansatz}: medians {points:?} fitted base {:.4}", fit.b);
        bases.push(fit.b);
    }
    assert!(
        bases[0] < bases[1],
        "ZY base {} not below RY base {}",
        bases[0],
        bases[1]
    );
    assert!(t.elapsed().as_secs_f64() < 7200.0);
    println!(
        "criterion 14 (TTS fitted base: ZY {:.4} < RY {:.4}): pass",
        bases[0], bases[1]
    );
}

#[test]
fn criterion_15_byte_identical_reruns() {
    let bin = env!("CARGO_BIN_EXE_lightcut");
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c6.txt");
    std::fs::write(&graph, "0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n").unwrap();
    let mut payloads: Vec<Vec<Vec<u8>>> = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}"));
        let sim = std::process::Command::new(bin)
            .args([
                "simulate", "--graph", graph.to_str().unwrap(), "--theta", "0.9",
                "--shots", "16", "--seed", "42", "--out", out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(sim.status.success(), "{}", String::from_utf8_lossy(&sim.stderr));
        let tts = std::process::Command::new(bin)
            .args([
                "tts", "--n", "6", "--graphs", "2", "--optimizer", "bfgs",
                "--seed", "42", "--out", out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(tts.status.success(), "{}", String::from_utf8_lossy(&tts.stderr));
        payloads.push(vec![
            std::fs::read(out.join("simulate.json")).unwrap(),
            std::fs::read(out.join("tts.jsonl")).unwrap(),
            std::fs::read(out.join("tts.csv")).unwrap(),
            std::fs::read(out.join("tts.json")).unwrap(),
        ]);
    }
    // Manifests differ only in the --out path; strip it before comparing the
    // envelopes, and require the data files to match byte for byte.
    assert_eq!(payloads[0][1], payloads[1][1]);
    assert_eq!(payloads[0][2], payloads[1][2]);
    let normalize = |bytes: &[u8], run: usize| {
        String::from_utf8(bytes.to_vec())
            .unwrap()
            .replace(&format!("run{run}"), "runX")
    };
    for file in [0usize, 3] {
        assert_eq!(
            normalize(&payloads[0][file], 0),
            normalize(&payloads[1][file], 1)
        );
    }
    println!("criterion 15 (byte-identical reruns for equal manifests): pass");
}
