use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::classical::{run, BitWord, ClassicalGate, NetworkProgram};
use crate::linalg::{self, distance, max_entry_distance, Matrix, C64};
use crate::oracle::schrodinger_oracle;
use crate::random::{haar_unitary, random_descriptors, random_permutation, random_state};

fn fresh(v: u64, n: usize) -> HeisenbergNetwork {
    HeisenbergNetwork::new(BitWord::new(v, n).unwrap()).unwrap()
}

fn hadamard() -> Matrix {
    Matrix::from_row_slice(2, 2, &[linalg::ONE, linalg::ONE, linalg::ONE, -linalg::ONE])
        * C64::new(0.5f64.sqrt(), 0.0)
}

#[test]
fn fresh_single_qubit() {
    let net = fresh(1, 1);
    let z = net.component(1, Axis::Z);
    assert_eq!(z, Matrix::from_diagonal(&nalgebra::dvector![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]));
    assert!((net.expectation(&z).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(net.descriptor(1).pauli_residual(), 0.0);
}

#[test]
fn fresh_descriptors_commute_across_qubits() {
    let net = fresh(0, 2);
    let r = relation_residuals(&net.descriptors());
    assert_eq!(r.max(), 0.0);
}

#[test]
fn width_cap() {
    let word = BitWord::new(0, 11).unwrap();
    assert!(matches!(HeisenbergNetwork::new(word), Err(crate::Error::ResourceLimit { .. })));
    assert!(HeisenbergNetwork::with_cap(BitWord::new(0, 3).unwrap(), 2).is_err());
}

#[test]
fn empty_step_changes_nothing_but_time() {
    let net = fresh(2, 2);
    let next = net.step(&[]).unwrap();
    assert_eq!(next.unitary(), net.unitary());
    assert_eq!(next.time(), 1);
}

#[test]
fn toffoli_step_matches_closed_form_on_fresh_network() {
    let net = fresh(3, 3);
    let next = net.step(&[QuantumGate::Toffoli(1, 2, 3)]).unwrap();
    let d = net.descriptors();
    let (k, l, m) = toffoli_closed_form(&d[0], &d[1], &d[2]);
    for (got, want) in next.descriptors().iter().zip([k, l, m].iter()) {
        for a in Axis::ALL {
            assert!(max_entry_distance(got.component(a), want.component(a)) < 1e-12);
        }
    }
}

#[test]
fn closed_forms_are_involutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (_, d) = random_descriptors(3, &mut rng);
    let (k, l, m) = toffoli_closed_form(&d[0], &d[1], &d[2]);
    let (k2, l2, m2) = toffoli_closed_form(&k, &l, &m);
    for (a, b) in [(&k2, &d[0]), (&l2, &d[1]), (&m2, &d[2])] {
        for axis in Axis::ALL {
            assert!(max_entry_distance(a.component(axis), b.component(axis)) < 1e-12);
        }
    }
    let (c, t) = cnot_closed_form(&d[0], &d[2]);
    let (c2, t2) = cnot_closed_form(&c, &t);
    assert!(max_entry_distance(&c2.x, &d[0].x) < 1e-12);
    assert!(max_entry_distance(&t2.y, &d[2].y) < 1e-12);
}

#[test]
fn cnot_matches_conjugation_on_fresh_pair() {
    let net = fresh(0, 2);
    let d = net.descriptors();
    let (m, n) = cnot_closed_form(&d[0], &d[1]);
    let next = net.step(&[QuantumGate::CNot(1, 2)]).unwrap();
    assert_eq!(&m.z, &d[0].z);
    assert!(max_entry_distance(&next.component(1, Axis::X), &m.x) < 1e-12);
    assert!(max_entry_distance(&next.component(2, Axis::Z), &n.z) < 1e-12);
    // XOR on z-eigenvalues: the target z is diagonal with entry b1 xor b2
    for b in 0..4usize {
        let expect = ((b & 1) ^ ((b >> 1) & 1)) as f64;
        assert!((n.z[(b, b)].re - expect).abs() < 1e-15);
    }
}

#[test]
fn b_hat_of_fresh_pair_is_diagonal_ramp() {
    let b = fresh(0, 2).b_hat();
    let expect = Matrix::from_diagonal(&nalgebra::DVector::from_fn(4, |i, _| C64::new(i as f64, 0.0)));
    assert_eq!(b, expect);
}

#[test]
fn b_hat_follows_classical_step() {
    let net = fresh(0, 3);
    let gates = [ClassicalGate::Toffoli(1, 2, 3), ClassicalGate::Delay(3)];
    let f = crate::classical::compose_step(&gates[..1], 3).unwrap();
    let next = net.step(&[QuantumGate::Toffoli(1, 2, 3)]).unwrap();
    let lifted = (0..8u64).fold(Matrix::zeros(8, 8), |acc, c| {
        acc + net.projector_b(c) * C64::new(f.apply(c) as f64, 0.0)
    });
    assert!(distance(&next.b_hat(), &lifted) < 1e-12);
}

#[test]
fn projectors_partition_unity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let net = HeisenbergNetwork::from_state(3, random_state(8, &mut rng), 10).unwrap();
    let net = net
        .step(&[QuantumGate::Unitary { qubits: vec![2], matrix: hadamard() }, QuantumGate::CNot(1, 3)])
        .unwrap();
    let ps: Vec<Matrix> = (0..8).map(|b| net.projector_b(b)).collect();
    let sum = ps.iter().fold(Matrix::zeros(8, 8), |a, p| a + p);
    assert!(distance(&sum, &linalg::identity(8)) < 1e-12);
    for a in 0..8 {
        assert!(distance(&(&ps[a] * &ps[a]), &ps[a]) < 1e-12);
        for b in 0..8 {
            if a != b {
                assert!(linalg::norm(&(&ps[a] * &ps[b])) < 1e-12);
            }
        }
    }
    let probs = net.probabilities();
    let mut mean = 0.0;
    for (b, p) in probs.iter().enumerate() {
        assert!((net.expectation(&ps[b]).unwrap() - p).abs() < 1e-12);
        mean += b as f64 * p;
    }
    assert!((net.expectation(&net.b_hat()).unwrap() - mean).abs() < 1e-12);
    assert!((net.expectation(&linalg::identity(8)).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn fresh_projector_on_initial_word() {
    let net = fresh(5, 3);
    assert!((net.expectation(&net.projector_b(5)).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn expectation_rejects_non_hermitian() {
    let net = fresh(0, 1);
    let m = Matrix::from_row_slice(2, 2, &[linalg::ZERO, linalg::ONE, linalg::ZERO, linalg::ZERO]);
    assert!(matches!(net.expectation(&m), Err(crate::Error::NotHermitian { .. })));
}

#[test]
fn toffoli_on_basis_state_agrees_with_classical_run() {
    let p = NetworkProgram::new(3, vec![vec![ClassicalGate::Toffoli(1, 2, 3)]]).unwrap();
    let q = QuantumProgram::from_classical(&p);
    let oracle = schrodinger_oracle(&q, &basis_state(3, 3)).unwrap();
    let end = run(&p, BitWord::new(3, 3).unwrap()).unwrap()[1].value();
    assert_eq!(end, 7);
    assert!((oracle.distributions[1][7] - 1.0).abs() < 1e-15);
    let empty = QuantumProgram::new(3, vec![]).unwrap();
    let psi = basis_state(3, 6);
    assert_eq!(schrodinger_oracle(&empty, &psi).unwrap().states, vec![psi]);
}

#[test]
fn heisenberg_matches_oracle_on_random_circuit() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let prog = crate::random::random_quantum_program(3, 30, 2, crate::random::GateMix::Mixed, &mut rng);
    let psi = random_state(8, &mut rng);
    let oracle = schrodinger_oracle(&prog, &psi).unwrap();
    let hist = run_quantum(&prog, HeisenbergNetwork::from_state(3, psi, 10).unwrap()).unwrap();
    for (t, net) in hist.snapshots.iter().enumerate() {
        for b in 0..8 {
            let p = net.expectation(&net.projector_b(b)).unwrap();
            assert!((p - oracle.distributions[t][b as usize]).abs() < 1e-10);
        }
    }
}

#[test]
fn conditional_gate_is_unitary_for_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=4 {
        let f = random_permutation(1 << (n - 1), &mut rng);
        let u = haar_unitary(1 << (n - 1), &mut rng);
        let v = conditional_gate_unitary(&f, &u, 1e-12).unwrap();
        assert!(linalg::unitarity_residual(&v) < 1e-12);
    }
}

#[test]
fn delay_keeps_z() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let w = haar_unitary(4, &mut rng);
    let psi = random_state(4, &mut rng);
    let mut net = HeisenbergNetwork::from_state(2, psi, 10).unwrap();
    net.step_mut(&[QuantumGate::Unitary { qubits: vec![1, 2], matrix: w }]).unwrap();
    let next = net.step(&[QuantumGate::Delay { qubit: 2, phase: 1.1 }]).unwrap();
    assert!(max_entry_distance(&net.component(2, Axis::Z), &next.component(2, Axis::Z)) < 1e-12);
    assert!(max_entry_distance(&net.component(2, Axis::X), &next.component(2, Axis::X)) > 1e-3);
}
