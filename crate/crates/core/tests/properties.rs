use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use branchflow::analyzer::{
    check_correspondence, classify_run, ensemble_matched_state, ensemble_trace, quantum_trace,
};
use branchflow::classical::{compose_step, info_cone, run, BitWord, ClassicalGate, NetworkProgram, StepPermutation};
use branchflow::ensemble::{evolve_program, Ensemble};
use branchflow::enumber::{retime_backward, retime_forward, ENumber};
use branchflow::heisenberg::{basis_state, relation_residuals, run_quantum, HeisenbergNetwork, QuantumProgram};
use branchflow::oracle::schrodinger_oracle;
use branchflow::random::{random_classical_program, random_permutation, random_quantum_program, random_state, GateMix};

fn ensemble_from(width: usize, entries: &[(u64, u32, u32)]) -> Ensemble {
    let size = 1u64 << width;
    Ensemble::new(
        width,
        entries
            .iter()
            .map(|&(b, n, d)| (b % size, BigRational::new(n.into(), d.into()))),
    )
    .unwrap()
}

fn arb_entries() -> impl Strategy<Value = Vec<(u64, u32, u32)>> {
    prop::collection::vec((0u64..64, 1u32..20, 1u32..5), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn steps_are_bijections(width in 1usize..7, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_classical_program(width, 4, width, &mut rng);
        for f in p.permutations().unwrap() {
            let mut seen = BTreeSet::new();
            for v in 0..1u64 << width {
                let w = f.apply(v);
                prop_assert!(seen.insert(w));
                prop_assert_eq!(f.apply_inverse(w), v);
            }
        }
    }

    #[test]
    fn step_table_agrees_with_gatewise_application(width in 3usize..7, seed: u64, v: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_classical_program(width, 1, width, &mut rng);
        let gates = &p.steps()[0];
        let f = compose_step(gates, width).unwrap();
        let v = v % (1 << width);
        let direct = gates.iter().fold(v, |acc, g| g.apply_to_value(acc));
        prop_assert_eq!(f.apply(v), direct);
        let traj = run(&p, BitWord::new(v, width).unwrap()).unwrap();
        prop_assert_eq!(traj[1].value(), direct);
    }

    #[test]
    fn toffoli_is_an_involution(v in 0u64..8, k in 1usize..4, l in 1usize..4, m in 1usize..4) {
        prop_assume!(k != l && l != m && k != m);
        let g = ClassicalGate::Toffoli(k, l, m);
        prop_assert_eq!(g.apply_to_value(g.apply_to_value(v)), v);
    }

    #[test]
    fn information_stays_in_its_cone(width in 2usize..7, seed: u64, v: u64, bit in 1usize..7) {
        let bit = (bit - 1) % width + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_classical_program(width, 5, width, &mut rng);
        let v = v % (1 << width);
        let a = run(&p, BitWord::new(v, width).unwrap()).unwrap();
        let b = run(&p, BitWord::new(v ^ (1 << (bit - 1)), width).unwrap()).unwrap();
        let start: BTreeSet<usize> = [bit].into();
        for t in 0..=p.len() {
            let cone = info_cone(&p, &start, 0, t).unwrap();
            for k in 1..=width {
                if !cone.contains(&k) {
                    prop_assert_eq!(a[t].bit(k), b[t].bit(k));
                }
            }
        }
    }

    #[test]
    fn ensembles_conserve_branches_and_totals(width in 1usize..6, seed: u64, entries in arb_entries()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_classical_program(width, 6, width, &mut rng);
        let e = ensemble_from(width, &entries);
        for later in evolve_program(&e, &p).unwrap() {
            prop_assert_eq!(later.branch_count(), e.branch_count());
            prop_assert_eq!(later.total(), e.total());
            let mut a: Vec<_> = later.entries().map(|(_, m)| m.clone()).collect();
            let mut b: Vec<_> = e.entries().map(|(_, m)| m.clone()).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn retiming_round_trips(width in 1usize..5, seed: u64, entries in arb_entries()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = StepPermutation::from_table(width, random_permutation(1 << width, &mut rng)).unwrap();
        let mu = ENumber::multiplicities(&ensemble_from(width, &entries), 0).unwrap();
        let there = retime_forward(&mu, &f).unwrap();
        prop_assert_eq!(there.time_tag(), 1);
        prop_assert_eq!(retime_backward(&there, &f).unwrap(), mu);
    }

    #[test]
    fn descriptor_relations_hold(width in 1usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_quantum_program(width, 30, width, GateMix::Mixed, &mut rng);
        let net = HeisenbergNetwork::from_state(width, basis_state(width, 0), 10).unwrap();
        let hist = run_quantum(&p, net).unwrap();
        for snap in &hist.snapshots {
            prop_assert!(relation_residuals(&snap.descriptors()).max() < 1e-10);
        }
    }

    #[test]
    fn probabilities_match_oracle(width in 1usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_quantum_program(width, 20, width, GateMix::Mixed, &mut rng);
        let psi = random_state(1 << width, &mut rng);
        let hist = run_quantum(&p, HeisenbergNetwork::from_state(width, psi.clone(), 10).unwrap()).unwrap();
        let oracle = schrodinger_oracle(&p, &psi).unwrap();
        for (t, snap) in hist.snapshots.iter().enumerate() {
            for (a, b) in snap.probabilities().iter().zip(&oracle.distributions[t]) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn classical_circuits_correspond_and_keep_linked_weights(
        width in 1usize..5,
        seed: u64,
        entries in arb_entries(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_classical_program(width, 5, width, &mut rng);
        let e = ensemble_from(width, &entries);
        let ensembles = evolve_program(&e, &p).unwrap();
        let q = QuantumProgram::from_classical(&p);
        let hist = run_quantum(&q, HeisenbergNetwork::from_state(width, ensemble_matched_state(&e), 10).unwrap()).unwrap();
        let report = check_correspondence(&hist, &ensembles, 1e-10).unwrap();
        prop_assert!(report.passed);

        let verdicts = classify_run(&hist, 1e-10);
        prop_assert!(verdicts.iter().all(|v| v.is_classical()));
        let qt = quantum_trace(&hist, &verdicts);
        let et = ensemble_trace(&ensembles, &p.permutations().unwrap());
        prop_assert_eq!(qt.rows.len(), et.rows.len());
        for t in 0..p.len() {
            prop_assert!(qt.step_linked(t));
            for row in qt.at(t) {
                let next = qt.at(t + 1).find(|r| Some(r.b) == row.link).unwrap();
                prop_assert!((next.weight - row.weight).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn empty_program_keeps_everything() {
    let p = NetworkProgram::new(3, vec![vec![], vec![]]).unwrap();
    let e = ensemble_from(3, &[(1, 2, 1), (6, 1, 3)]);
    let history = evolve_program(&e, &p).unwrap();
    assert!(history.iter().all(|h| h == &e));
}
