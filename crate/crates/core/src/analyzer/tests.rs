use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::classical::{compose_step, BitWord, ClassicalGate, NetworkProgram, StepPermutation};
use crate::ensemble::{evolve_program, Ensemble};
use crate::heisenberg::{basis_state, run_quantum, Axis, HeisenbergNetwork, QuantumGate, QuantumProgram};
use crate::linalg::{self, Matrix, StateVector, C64};
use crate::oracle::schrodinger_oracle;
use crate::random::{
    haar_unitary, random_classical_program, random_conditional_program, random_quantum_program, random_state,
    GateMix,
};

const TOL: f64 = 1e-10;

fn hadamard() -> Matrix {
    let h = 1.0 / 2f64.sqrt();
    Matrix::from_row_slice(2, 2, &[C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)])
}

fn h(q: usize) -> QuantumGate {
    QuantumGate::Unitary {
        qubits: vec![q],
        matrix: hadamard(),
    }
}

fn history(program: &QuantumProgram, state: StateVector) -> crate::heisenberg::QuantumHistory {
    let net = HeisenbergNetwork::from_state(program.width(), state, 10).unwrap();
    run_quantum(program, net).unwrap()
}

fn is_affine(table: &[u64]) -> bool {
    let n = table.len();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| table[a ^ b ^ c] == table[a] ^ table[b] ^ table[c])))
}

#[test]
fn toffoli_step_is_classical_with_its_permutation() {
    let p = QuantumProgram::new(3, vec![vec![QuantumGate::Toffoli(1, 2, 3)]]).unwrap();
    let hist = history(&p, basis_state(3, 0));
    let v = classify_step(&hist, 0, TOL);
    let expect = compose_step(&[ClassicalGate::Toffoli(1, 2, 3)], 3).unwrap();
    assert_eq!(v.permutation(), Some(&expect));
    let general = verify_classical_step(0, &hist.at(0).z_components(), &hist.at(1).z_components(), &expect, TOL);
    assert!(general.is_classical());
}

#[test]
fn hadamard_on_used_qubit_is_not_classical() {
    let p = QuantumProgram::new(2, vec![vec![QuantumGate::CNot(1, 2)], vec![h(1)]]).unwrap();
    let hist = history(&p, basis_state(2, 1));
    assert!(classify_step(&hist, 0, TOL).is_classical());
    let v = classify_step(&hist, 1, TOL);
    assert!(matches!(v.verdict, Verdict::NonClassical(Witness::Mismatch { .. })));
    // z of qubit 1 after the Hadamard is its x before it
    assert!(linalg::distance(&hist.at(2).component(1, Axis::Z), &hist.at(1).component(1, Axis::X)) < 1e-12);
    // no permutation of two bits reproduces the step
    let (before, after) = (hist.at(1).z_components(), hist.at(2).z_components());
    let mut table: Vec<usize> = (0..4).collect();
    loop {
        let f = StepPermutation::from_table(2, table.iter().map(|&v| v as u64).collect()).unwrap();
        assert!(!verify_classical_step(1, &before, &after, &f, TOL).is_classical());
        if !crate::classical::next_permutation(&mut table) {
            break;
        }
    }
}

#[test]
fn delay_only_step_is_identity() {
    let p = QuantumProgram::new(
        2,
        vec![vec![QuantumGate::Delay { qubit: 1, phase: 0.7 }, QuantumGate::delay(2)]],
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let hist = history(&p, random_state(4, &mut rng));
    assert!(classify_step(&hist, 0, TOL).permutation().unwrap().is_identity());
}

#[test]
fn conjugated_non_commuting_family_is_reported() {
    let z1 = linalg::embed_operator(&(linalg::identity(2) - linalg::pauli(2)).scale(0.5), &[1], 2);
    let x1 = linalg::embed_operator(&(linalg::identity(2) - linalg::pauli(0)).scale(0.5), &[1], 2);
    let id = StepPermutation::identity(2).unwrap();
    let v = verify_classical_step(0, &[z1.clone(), x1], &[z1.clone(), z1], &id, TOL);
    assert!(matches!(v.verdict, Verdict::NonClassical(Witness::NonCommuting { qubits: (1, 2), .. })));
}

#[test]
fn classical_verdicts_push_the_oracle_distribution_forward() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut classical_seen = 0;
    for _ in 0..20 {
        let p = random_quantum_program(3, 12, 2, GateMix::Mixed, &mut rng);
        let psi = random_state(8, &mut rng);
        let hist = history(&p, psi.clone());
        let oracle = schrodinger_oracle(&p, &psi).unwrap();
        for v in classify_run(&hist, TOL) {
            if let Some(f) = v.permutation() {
                classical_seen += 1;
                let (before, after) = (&oracle.distributions[v.step], &oracle.distributions[v.step + 1]);
                for b in 0..8u64 {
                    assert!((after[f.apply(b) as usize] - before[b as usize]).abs() < 1e-10);
                }
            }
        }
    }
    assert!(classical_seen > 0);
}

#[test]
fn sector_search_recovers_conditional_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (p, laws) = random_conditional_program(3, 1, &mut rng);
    let hist = history(&p, random_state(8, &mut rng));
    let family = |t: usize| {
        let s = hist.at(t).component(3, Axis::Z);
        let zs: Vec<Matrix> = (1..3).map(|k| &s * hist.at(t).component(k, Axis::Z)).collect();
        (s, zs)
    };
    let (s, before) = family(0);
    let (_, after) = family(1);
    assert_eq!(search_sector_law(&s, &before, &after, TOL).unwrap(), laws[0]);
}

#[test]
fn correspondence_on_basis_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = random_classical_program(4, 6, 2, &mut rng);
    let e = Ensemble::homogeneous(BitWord::new(9, 4).unwrap());
    let ens = evolve_program(&e, &p).unwrap();
    let hist = history(&QuantumProgram::from_classical(&p), ensemble_matched_state(&e));
    let r = check_correspondence(&hist, &ens, TOL).unwrap();
    assert!(r.passed && r.max_deviation < 1e-10);
}

#[test]
fn correspondence_tracks_four_branch_ensemble() {
    let e = Ensemble::from_counts(3, [(1, 4), (2, 2), (4, 1), (6, 5)]).unwrap();
    let p = NetworkProgram::new(
        3,
        vec![
            vec![ClassicalGate::Toffoli(1, 2, 3)],
            vec![ClassicalGate::CNot(3, 1), ClassicalGate::Not(2)],
            vec![ClassicalGate::Swap(1, 3)],
        ],
    )
    .unwrap();
    let ens = evolve_program(&e, &p).unwrap();
    let psi = ensemble_matched_state(&e);
    assert!((psi[6].norm_sqr() - 5.0 / 12.0).abs() < 1e-15);
    let hist = history(&QuantumProgram::from_classical(&p), psi);
    assert!(check_correspondence(&hist, &ens, TOL).unwrap().passed);
}

#[test]
fn correspondence_flags_first_non_classical_step() {
    let skeleton = NetworkProgram::new(2, vec![vec![ClassicalGate::CNot(1, 2)], vec![ClassicalGate::Delay(1)]]).unwrap();
    let quantum = QuantumProgram::new(2, vec![vec![QuantumGate::CNot(1, 2)], vec![h(1)]]).unwrap();
    let e = Ensemble::homogeneous(BitWord::new(1, 2).unwrap());
    let ens = evolve_program(&e, &skeleton).unwrap();
    let r = check_correspondence(&history(&quantum, basis_state(2, 1)), &ens, TOL).unwrap();
    assert!(!r.passed);
    assert_eq!(r.first_failure, Some(2));
}

#[test]
fn correspondence_rejects_width_mismatch() {
    let p = QuantumProgram::new(2, vec![]).unwrap();
    let e = Ensemble::homogeneous(BitWord::new(0, 3).unwrap());
    assert!(check_correspondence(&history(&p, basis_state(2, 0)), &[e], TOL).is_err());
}

#[test]
fn classical_circuit_all_z_autonomous() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = QuantumProgram::from_classical(&random_classical_program(3, 5, 2, &mut rng));
    let hist = history(&p, random_state(8, &mut rng));
    let laws = p
        .steps()
        .iter()
        .map(|g| gate_list_law(&Selector::AllZ, g, 3, TOL))
        .collect();
    let law = classical_law(Selector::AllZ, laws).unwrap();
    let r = check_autonomy(&hist, &Selector::AllZ, &law, 0, p.len(), TOL).unwrap();
    assert!(r.autonomous, "{r:?}");
    let r = check_autonomy(&hist, &Selector::AllZ, &UpdateLaw::GeneratedAlgebra, 0, p.len(), TOL).unwrap();
    assert!(r.autonomous);
}

#[test]
fn hadamard_breaks_z_autonomy() {
    let p = QuantumProgram::new(2, vec![vec![h(1)]]).unwrap();
    let hist = history(&p, basis_state(2, 0));
    let r = check_autonomy(&hist, &Selector::AllZ, &UpdateLaw::GeneratedAlgebra, 0, 1, TOL).unwrap();
    assert!(!r.autonomous);
    assert_eq!(r.counterexample.map(|c| c.0), Some(0));
}

#[test]
fn conditional_network_sectors_at_four_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (p, laws) = loop {
        let (p, laws) = random_conditional_program(4, 2, &mut rng);
        if laws.iter().all(|f| !is_affine(f.table())) {
            break (p, laws);
        }
    };
    let hist = history(&p, random_state(16, &mut rng));
    let gate_laws: Vec<_> = p
        .steps()
        .iter()
        .map(|g| gate_list_law(&Selector::ControlledZ { control: 4 }, g, 4, TOL))
        .collect();
    assert_eq!(gate_laws, laws.iter().cloned().map(Some).collect::<Vec<_>>());
    let s = conditional_sectors(&hist, 4, gate_laws, TOL).unwrap();
    assert!(s.quarter.autonomous, "{:?}", s.quarter);
    assert!(s.off_sector.autonomous, "{:?}", s.off_sector);
    assert!(s.off_sector_classical_steps.is_empty());
    assert!(!s.remaining_quarter.autonomous);
    assert!(classify_run(&hist, TOL).iter().all(|v| !v.is_classical()));
}

#[test]
fn affine_permutations_keep_the_x_quarter_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (p, laws) = random_conditional_program(3, 2, &mut rng);
    assert!(laws.iter().all(|f| is_affine(f.table())));
    let hist = history(&p, random_state(8, &mut rng));
    let r = check_autonomy(&hist, &Selector::ControlledX { control: 3 }, &UpdateLaw::GeneratedAlgebra, 0, 2, TOL)
        .unwrap();
    assert!(r.autonomous);
}

#[test]
fn algebra_dimensions() {
    let net = HeisenbergNetwork::new(BitWord::new(0, 3).unwrap()).unwrap();
    assert_eq!(algebra_basis(&net.z_components()).len(), 8);
    let off = Selector::OffSector { control: 3 }.family(&net).unwrap();
    assert_eq!(algebra_basis(&off).len(), 17);
    let all: Vec<Matrix> = net.descriptors().into_iter().flat_map(|d| [d.x, d.y, d.z]).collect();
    assert_eq!(algebra_basis(&all).len(), 64);
}

#[test]
fn selector_round_trip() {
    for s in ["z", "z3", "x2", "off4", "1z*2x+3y"] {
        let sel: Selector = s.parse().unwrap();
        assert_eq!(sel.to_string(), s);
    }
    assert_eq!("zN".parse::<Selector>().unwrap().resolve(5), Selector::ControlledZ { control: 5 });
    assert!("q1".parse::<Selector>().is_err());
    assert!("z0".parse::<Selector>().is_err());
}

#[test]
fn gate_list_law_restricts_full_step_to_control_sector() {
    // cnot 3 -> 1 with control 3 set flips bit 1 of the others
    let law = gate_list_law(&Selector::ControlledZ { control: 3 }, &[QuantumGate::CNot(3, 1)], 3, TOL).unwrap();
    assert_eq!(law.table(), &[1, 0, 3, 2]);
    assert!(gate_list_law(&Selector::ControlledZ { control: 3 }, &[QuantumGate::Not(3)], 3, TOL).is_none());
}

fn presence_runs(prefixes: &[Vec<QuantumGate>], rest: &[Vec<QuantumGate>], width: usize, psi: &StateVector) -> Vec<crate::heisenberg::QuantumHistory> {
    prefixes
        .iter()
        .map(|pre| {
            let mut steps = vec![pre.clone()];
            steps.extend(rest.iter().cloned());
            history(&QuantumProgram::new(width, steps).unwrap(), psi.clone())
        })
        .collect()
}

#[test]
fn disconnected_subnetwork_holds_no_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let prefixes: Vec<Vec<QuantumGate>> = (0..3)
        .map(|_| {
            vec![QuantumGate::Unitary {
                qubits: vec![1],
                matrix: haar_unitary(2, &mut rng),
            }]
        })
        .collect();
    let rest = vec![vec![QuantumGate::CNot(1, 2), QuantumGate::CNot(3, 4)], vec![h(3)]];
    let runs = presence_runs(&prefixes, &rest, 4, &random_state(16, &mut rng));
    let r = information_presence_test(&runs, &Subsystem::qubits(&[3, 4]), &[vec![(3, Axis::Z)], vec![(4, Axis::X)]], 1e-10)
        .unwrap();
    assert_eq!(r, Presence::ContainsNone);
    let r = information_presence_test(&runs, &Subsystem::qubits(&[2]), &[vec![(2, Axis::Z)]], 1e-10).unwrap();
    assert!(matches!(r, Presence::ContainsInfo { .. }));
}

#[test]
fn stored_bit_reaches_x_sector() {
    // |+>|b>|->: a Toffoli kicks the phase of b onto qubit 1
    let plus_minus = linalg::kron(
        &Matrix::from_column_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]),
        &Matrix::from_column_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
    );
    let plus_minus = linalg::kron(&plus_minus, &Matrix::from_column_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]));
    let psi = StateVector::from_column_slice(plus_minus.as_slice()) / C64::new(2.0, 0.0);
    let prefixes = vec![vec![], vec![QuantumGate::Not(2)]];
    let rest = vec![vec![QuantumGate::Toffoli(1, 2, 3)]];
    let runs = presence_runs(&prefixes, &rest, 3, &psi);
    let r = information_presence_test(&runs, &Subsystem::sector(&[1], Axis::X), &[vec![(1, Axis::X)]], 1e-10).unwrap();
    assert!(matches!(r, Presence::ContainsInfo { spread, .. } if spread > 0.9));
}

#[test]
fn phase_never_reaches_z_sector() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let prefixes: Vec<Vec<QuantumGate>> = [0.0, 0.4, 2.5]
        .iter()
        .map(|&phase| vec![QuantumGate::Delay { qubit: 1, phase }])
        .collect();
    let c = QuantumProgram::from_classical(&random_classical_program(3, 4, 2, &mut rng));
    let runs = presence_runs(&prefixes, c.steps(), 3, &random_state(8, &mut rng));
    let ms: Vec<Measurement> = (1..=3).map(|k| vec![(k, Axis::Z)]).collect();
    let r = information_presence_test(&runs, &Subsystem::sector(&[1, 2, 3], Axis::Z), &ms, 1e-10).unwrap();
    assert_eq!(r, Presence::ContainsNone);
}

#[test]
fn presence_needs_two_runs() {
    let p = QuantumProgram::new(1, vec![]).unwrap();
    assert!(information_presence_test(&[history(&p, basis_state(1, 0))], &Subsystem::qubits(&[1]), &[], 1e-10).is_err());
}

#[test]
fn monitoring_a_classical_circuit() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = QuantumProgram::new(
        2,
        vec![vec![QuantumGate::CNot(1, 2)], vec![QuantumGate::Not(1)], vec![QuantumGate::Swap(1, 2)]],
    )
    .unwrap();
    let psi = random_state(4, &mut rng);
    let r = measurement_robustness_check(&p, &psi, &[1, 2], 10, 1e-10).unwrap();
    assert_eq!(r.ancillas, 4);
    assert!(r.correspondence.passed, "{:?}", r.correspondence);
    assert!(r.x_descriptor_divergence > 0.1);
    let none = measurement_robustness_check(&p, &psi, &[], 10, 1e-10).unwrap();
    assert!(none.correspondence.passed);
    assert_eq!(none.x_descriptor_divergence, 0.0);
    assert!(matches!(
        measurement_robustness_check(&p, &psi, &[1, 2], 5, 1e-10),
        Err(crate::Error::ResourceLimit { .. })
    ));
}

#[test]
fn monitoring_a_superposing_step_changes_weights() {
    let p = QuantumProgram::new(1, vec![vec![h(1)], vec![h(1)]]).unwrap();
    let r = measurement_robustness_check(&p, &basis_state(1, 0), &[1], 10, 1e-10).unwrap();
    assert!(!r.correspondence.passed);
    assert_eq!(r.correspondence.first_failure, Some(2));
}

#[test]
fn single_computer_trace() {
    let p = NetworkProgram::new(3, vec![vec![ClassicalGate::Toffoli(1, 2, 3)], vec![ClassicalGate::Not(1)]]).unwrap();
    let tr = classical_trace(&p, BitWord::new(3, 3).unwrap()).unwrap();
    assert_eq!(tr.rows.len(), 3);
    assert!((0..2).all(|t| tr.branch_count(t) == 1 && tr.step_linked(t)));
    assert_eq!(tr.rows[2].b, 6);
}

#[test]
fn ensemble_and_quantum_traces_agree_on_classical_circuit() {
    let e = Ensemble::from_counts(3, [(1, 4), (2, 2), (4, 1), (6, 5)]).unwrap();
    let p = NetworkProgram::new(3, vec![vec![ClassicalGate::Toffoli(1, 2, 3)], vec![ClassicalGate::CNot(3, 2)]]).unwrap();
    let et = ensemble_trace(&evolve_program(&e, &p).unwrap(), &p.permutations().unwrap());
    let q = QuantumProgram::from_classical(&p);
    let hist = history(&q, ensemble_matched_state(&e));
    let qt = quantum_trace(&hist, &classify_run(&hist, TOL));
    assert_eq!(et.rows.len(), qt.rows.len());
    for (a, b) in et.rows.iter().zip(&qt.rows) {
        assert_eq!((a.t, a.b, a.link), (b.t, b.b, b.link));
        assert!((a.weight - b.weight).abs() < 1e-12);
    }
    assert!((0..=2).all(|t| et.branch_count(t) == 4));
}

#[test]
fn interference_trace_shape() {
    let hh = vec![h(1), h(2)];
    let q = QuantumProgram::new(
        2,
        vec![hh.clone(), vec![QuantumGate::CNot(1, 2)], vec![QuantumGate::CNot(2, 1)], hh],
    )
    .unwrap();
    let hist = history(&q, basis_state(2, 1));
    let tr = quantum_trace(&hist, &classify_run(&hist, TOL));
    let counts: Vec<usize> = (0..=4).map(|t| tr.branch_count(t)).collect();
    assert_eq!(counts, vec![1, 4, 4, 4, 1]);
    let linked: Vec<bool> = (0..4).map(|t| tr.step_linked(t)).collect();
    assert_eq!(linked, vec![false, true, true, false]);
}
