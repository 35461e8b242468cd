use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitting::harness::lie::{basis_matrix, product_exp};
use splitting::harness::linalg::unitary_log;
use splitting::harness::{
    build_ising_nnn, build_pauli_set, exact_evolution, exact_evolution_series, loglog_slope, scaling_experiment,
    to_csv, trajectory, CMatrix, Horizon, OperatorSet,
};
use splitting::{lookup, sigma_vector, Label, Scalar};

fn slope(id: &str, ops: &OperatorSet, dts: &[f64]) -> f64 {
    let m = lookup(id).unwrap().float();
    let rows = scaling_experiment(id, &m, ops, dts, Horizon::Steps(1)).unwrap();
    loglog_slope(&rows.iter().map(|r| (r.dt, r.error())).collect::<Vec<_>>()).unwrap().0
}

#[test]
fn irrational_methods_reach_their_order_on_one_qubit() {
    let ops = build_pauli_set();
    let dts = [0.04, 0.02, 0.01];
    for (id, order) in [("R3_1", 3.0), ("R3_1D", 4.0), ("R4_1", 4.0), ("R4_3", 4.0)] {
        let s = slope(id, &ops, &dts);
        assert!((s - (order + 1.0)).abs() < 0.15, "{id}: slope {s}");
    }
}

#[test]
fn ising_spectral_and_series_propagators_agree() {
    for n in [4, 5, 8] {
        let ops = build_ising_nnn(n).unwrap();
        let a = exact_evolution(&ops, 0.7).unwrap();
        let b = exact_evolution_series(&ops, 0.7);
        assert!((a - b).norm() < 1e-9, "n = {n}");
    }
}

#[test]
fn ising_second_order_slope() {
    let ops = build_ising_nnn(6).unwrap();
    let s = slope("Z2_1", &ops, &[0.02, 0.01, 0.005]);
    assert!((s - 3.0).abs() < 0.1, "slope {s}");
}

#[test]
fn trajectory_csv_layout() {
    let ops = build_pauli_set();
    let rows = trajectory("Z2_1", &lookup("Z2_1").unwrap().float(), &ops, 0.01, 50, 10).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows.last().unwrap().n, 50);
    let csv = to_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("method,dt,n,t,E_pauli,E_frob"));
    assert_eq!(lines.count(), 5);
}

fn random_anti_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let x = CMatrix::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let a = (&x - x.adjoint()) * Complex::new(0.5, 0.0);
    let norm = a.norm();
    a / Complex::new(norm, 0.0)
}

// The commutator methods approximate exp(D h^2 [A_1, A_2] / 2) with an error one
// power of h above their order.
#[test]
fn commutator_methods_realize_the_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = [random_anti_hermitian(&mut rng, 3), random_anti_hermitian(&mut rng, 3)];
    for (id, order) in [("COMM4", 4.0), ("COMM5", 5.0)] {
        let m = lookup(id).unwrap().float();
        let d = sigma_vector(&m).get(Label::S2).to_f64();
        assert!(d > 0.0);
        let pts: Vec<(f64, f64)> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&h| {
                let ah = [&a[0] * Complex::new(h, 0.0), &a[1] * Complex::new(h, 0.0)];
                let log = unitary_log(&product_exp(&m, &ah)).unwrap();
                let gate = basis_matrix(Label::S2, &a) * Complex::new(d * h * h, 0.0);
                (h, (log - gate).norm())
            })
            .collect();
        let (s, _) = loglog_slope(&pts).unwrap();
        assert!(s > order + 0.7, "{id}: slope {s}");
    }
}
