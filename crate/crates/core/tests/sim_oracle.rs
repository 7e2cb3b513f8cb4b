use num_complex::Complex64;
use oscar::landscape::{GridDim, GridSpec};
use oscar::sim::{
    circuit_expectation, expectation, generate_landscape, random_regular_graph, random_sk, Ansatz, Circuit, Gate,
    NoiseModel, ProblemInstance, ProblemKind, Statevector,
};
use proptest::prelude::*;

/// Depth-1 QAOA expectation by dense matrices: `e^{-i b X}^{(x)n} e^{-i g C} |+>^n`.
fn dense_qaoa_p1(problem: &ProblemInstance, beta: f64, gamma: f64) -> f64 {
    let n = problem.n_qubits;
    let dim = 1usize << n;
    let cost = |z: usize| -> f64 {
        problem
            .edges
            .iter()
            .filter(|&&(i, j, _)| (z >> i) & 1 != (z >> j) & 1)
            .map(|e| e.2)
            .sum()
    };
    let amp0 = 1.0 / (dim as f64).sqrt();
    let phased: Vec<Complex64> = (0..dim).map(|z| Complex64::from_polar(amp0, -gamma * cost(z))).collect();
    let m = [
        [Complex64::new(beta.cos(), 0.0), Complex64::new(0.0, -beta.sin())],
        [Complex64::new(0.0, -beta.sin()), Complex64::new(beta.cos(), 0.0)],
    ];
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (r, o) in out.iter_mut().enumerate() {
        for (c, a) in phased.iter().enumerate() {
            let mut k = Complex64::new(1.0, 0.0);
            for q in 0..n {
                k *= m[(r >> q) & 1][(c >> q) & 1];
            }
            *o += k * a;
        }
    }
    out.iter().enumerate().map(|(z, a)| a.norm_sqr() * cost(z)).sum()
}

fn edge() -> ProblemInstance {
    ProblemInstance::new(2, ProblemKind::MaxCut, vec![(0, 1, 1.0)]).unwrap()
}

#[test]
fn single_edge_matches_dense_oracle() {
    let (b, g) = (std::f64::consts::PI / 8.0, std::f64::consts::PI / 2.0);
    let v = expectation(&edge(), &Ansatz::Qaoa { p: 1 }, &[b, g], &NoiseModel::ideal(), 0).unwrap();
    let oracle = dense_qaoa_p1(&edge(), b, g);
    assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
    // Closed form for an isolated edge: 1/2 + sin(4b) sin(g) / 2.
    assert!((v - (0.5 + 0.5 * (4.0 * b).sin() * g.sin())).abs() < 1e-12, "{v}");
}

#[test]
fn small_graphs_match_dense_oracle() {
    let graphs = [
        random_regular_graph(4, 3, 2).unwrap(),
        random_sk(4, 8).unwrap(),
        ProblemInstance::new(3, ProblemKind::MaxCut, vec![(0, 1, 0.7), (1, 2, -1.3), (0, 2, 2.0)]).unwrap(),
    ];
    for g in &graphs {
        for &(b, gm) in &[(0.1, 0.2), (-0.6, 1.1), (0.33, -2.4)] {
            let v = expectation(g, &Ansatz::Qaoa { p: 1 }, &[b, gm], &NoiseModel::ideal(), 0).unwrap();
            assert!((v - dense_qaoa_p1(g, b, gm)).abs() < 1e-10);
        }
    }
}

#[test]
fn two_qubit_landscape_maximum_matches_oracle_scan() {
    let spec = GridSpec::qaoa_p1();
    let l = generate_landscape(&edge(), &Ansatz::Qaoa { p: 1 }, &spec, &NoiseModel::ideal(), 0).unwrap();
    let oracle_max = (0..spec.len())
        .map(|i| {
            let p = spec.point(i);
            dense_qaoa_p1(&edge(), p[0], p[1])
        })
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((l.argmax().1 - oracle_max).abs() < 1e-12);
}

#[test]
fn zero_weight_graph_gives_zero_landscape() {
    let g = ProblemInstance::new(3, ProblemKind::MaxCut, vec![(0, 1, 0.0), (1, 2, 0.0)]).unwrap();
    let spec = GridSpec::new(vec![GridDim::new("b", -0.5, 0.5, 5), GridDim::new("g", -1.0, 1.0, 6)]).unwrap();
    let l = generate_landscape(&g, &Ansatz::Qaoa { p: 1 }, &spec, &NoiseModel::depolarizing(0.01, 0.02), 3).unwrap();
    assert!(l.values().iter().all(|&v| v == 0.0));
}

#[test]
fn generation_is_deterministic() {
    let g = random_regular_graph(6, 3, 1).unwrap();
    let spec = GridSpec::new(vec![GridDim::new("b", -0.7, 0.7, 6), GridDim::new("g", -1.5, 1.5, 7)]).unwrap();
    let noise = NoiseModel::depolarizing(0.003, 0.007).with_trajectories(40);
    let a = generate_landscape(&g, &Ansatz::Qaoa { p: 1 }, &spec, &noise, 17).unwrap();
    let b = generate_landscape(&g, &Ansatz::Qaoa { p: 1 }, &spec, &noise, 17).unwrap();
    assert_eq!(a.values(), b.values());
    let c = generate_landscape(&g, &Ansatz::Qaoa { p: 1 }, &spec, &noise, 18).unwrap();
    assert_ne!(a.values(), c.values());
}

#[test]
fn zero_probability_noise_is_ideal() {
    let g = random_regular_graph(6, 3, 4).unwrap();
    let a = Ansatz::Qaoa { p: 2 };
    let x = [0.2, -0.1, 0.5, 0.9];
    let ideal = expectation(&g, &a, &x, &NoiseModel::ideal(), 0).unwrap();
    let zero = expectation(&g, &a, &x, &NoiseModel::depolarizing(0.0, 0.0).with_trajectories(7), 99).unwrap();
    assert_eq!(ideal, zero);
}

#[test]
fn quadrupling_trajectories_halves_standard_error() {
    let g = random_regular_graph(6, 3, 0).unwrap();
    let c = Ansatz::Qaoa { p: 1 }.build(&g, &[0.3, 0.6]).unwrap();
    let cost = g.cost_diagonal();
    let mut ratios = Vec::new();
    for seed in 0..4 {
        let base = NoiseModel::depolarizing(0.01, 0.03);
        let se1 = circuit_expectation(&c, &cost, &base.with_trajectories(4000), seed).unwrap().std_error;
        let se4 = circuit_expectation(&c, &cost, &base.with_trajectories(16000), seed + 100).unwrap().std_error;
        ratios.push(se4 / se1);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((mean - 0.5).abs() < 0.05, "{ratios:?}");
}

#[test]
fn noise_pulls_towards_half_weight() {
    // The maximally mixed state cuts half the weight on average.
    let g = random_regular_graph(6, 3, 5).unwrap();
    let x = [-0.35, 0.6];
    let ideal = expectation(&g, &Ansatz::Qaoa { p: 1 }, &x, &NoiseModel::ideal(), 0).unwrap();
    let noisy = expectation(&g, &Ansatz::Qaoa { p: 1 }, &x, &NoiseModel::depolarizing(0.02, 0.05).with_trajectories(2000), 1)
        .unwrap();
    let half = g.total_weight() / 2.0;
    assert!((noisy - half).abs() < (ideal - half).abs());
}

#[test]
fn graph_generators() {
    let k4 = random_regular_graph(4, 3, 0).unwrap();
    assert_eq!(k4.edges.len(), 6);
    let g = random_regular_graph(6, 3, 9).unwrap();
    assert_eq!(g.edges.len(), 9);
    assert!(g.degrees().iter().all(|&d| d == 3));
    assert!(g.edges.iter().all(|&(i, j, w)| i < j && w == 1.0));
    let sk = random_sk(5, 3).unwrap();
    assert_eq!(sk.edges.len(), 10);
    assert!(sk.edges.iter().all(|e| e.2.abs() == 1.0));
    assert!(random_regular_graph(5, 3, 0).is_err());
    assert_eq!(random_regular_graph(8, 3, 4).unwrap(), random_regular_graph(8, 3, 4).unwrap());
}

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    prop_oneof![
        q.clone().prop_map(Gate::H),
        (q.clone(), -4.0..4.0f64).prop_map(|(q, t)| Gate::Rx(q, t)),
        (q.clone(), -4.0..4.0f64).prop_map(|(q, t)| Gate::Ry(q, t)),
        (q.clone(), -4.0..4.0f64).prop_map(|(q, t)| Gate::Rz(q, t)),
        (q.clone(), 1..n).prop_map(move |(c, d)| Gate::Cx(c, (c + d) % n)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(gates in prop::collection::vec(gate_strategy(4), 1..40)) {
        let mut s = Statevector::zero(4);
        for g in &gates {
            s.apply(g);
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_then_inverse_is_identity(gates in prop::collection::vec(gate_strategy(3), 1..20)) {
        let mut c = Circuit::new(3);
        for g in &gates {
            c.push(*g);
        }
        for g in gates.iter().rev() {
            c.push(g.inverse());
        }
        let mut s = Statevector::zero(3);
        for g in &c.gates {
            s.apply(g);
        }
        prop_assert!((s.amplitudes()[0].norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ideal_landscape_symmetric_under_negation(b in -0.8..0.8f64, g in -1.6..1.6f64, seed in 0u64..20) {
        let p = random_regular_graph(6, 3, seed).unwrap();
        let a = Ansatz::Qaoa { p: 1 };
        let v = expectation(&p, &a, &[b, g], &NoiseModel::ideal(), 0).unwrap();
        let w = expectation(&p, &a, &[-b, -g], &NoiseModel::ideal(), 0).unwrap();
        prop_assert!((v - w).abs() < 1e-10);
    }

    #[test]
    fn expectation_within_cut_bounds(b in -0.8..0.8f64, g in -1.6..1.6f64, seed in 0u64..20) {
        let p = random_regular_graph(6, 3, seed).unwrap();
        let cost = p.cost_diagonal();
        let max = cost.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = cost.iter().copied().fold(f64::INFINITY, f64::min);
        let v = expectation(&p, &Ansatz::Qaoa { p: 1 }, &[b, g], &NoiseModel::ideal(), 0).unwrap();
        prop_assert!(v >= min - 1e-10 && v <= max + 1e-10);
    }
}
