//! Property tests of the invariants the engine relies on.

mod common;

use mqnc::analysis::{fold, stabilizer_group};
use mqnc::circuit::{
    build_protocol, reschedule_asap, validate, Condition, OperationKind, PairKind, ProtocolId,
};
use mqnc::engine::{propagate_faults, run_datapoint, CompiledCircuit, TerminationRule};
use mqnc::noise::{sample_depolarizing, sample_memory, NoiseModel};
use mqnc::pauli::{conjugate_1q, conjugate_2q, Gate1, Gate2, Pauli, PauliFrame, PauliPair};
use mqnc::tableau::verify_protocol;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn pauli() -> impl Strategy<Value = Pauli> {
    prop::sample::select(Pauli::ALL.to_vec())
}

fn pair() -> impl Strategy<Value = PauliPair> {
    (0usize..16).prop_map(PauliPair::from_index)
}

fn kind() -> impl Strategy<Value = PairKind> {
    prop::sample::select(vec![PairKind::BellPhiPlus, PairKind::TwoQubitCluster])
}

fn gate1() -> impl Strategy<Value = Gate1> {
    prop::sample::select(vec![Gate1::H, Gate1::S, Gate1::X, Gate1::Y, Gate1::Z])
}

fn gate2() -> impl Strategy<Value = Gate2> {
    prop::sample::select(vec![Gate2::Cz, Gate2::Cnot])
}

/// Frames of `n` qubits as per-qubit Pauli lists.
fn frame(n: usize) -> impl Strategy<Value = Vec<Pauli>> {
    prop::collection::vec(pauli(), n)
}

fn anticommute_frames(a: &PauliFrame, b: &PauliFrame) -> bool {
    (0..a.len())
        .filter(|&q| a.get(q).anticommutes_with(b.get(q)))
        .count()
        % 2
        == 1
}

#[test]
fn conjugation_tables_match_matrices_exhaustively() {
    for g in [Gate1::H, Gate1::S, Gate1::X, Gate1::Y, Gate1::Z] {
        for p in Pauli::ALL {
            let want = identify_1q(&conjugate(&gate1_matrix(g), &pauli_matrix(p)))
                .expect("Clifford maps Paulis to Paulis");
            assert_eq!(conjugate_1q(p, g), want, "{g} {p}");
        }
    }
    for g in [Gate2::Cz, Gate2::Cnot] {
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let m = conjugate(&gate2_matrix(g), &kron(&pauli_matrix(a), &pauli_matrix(b)));
                assert_eq!(
                    conjugate_2q(a, b, g),
                    identify_2q(&m).unwrap(),
                    "{g} {a}{b}"
                );
            }
        }
    }
}

#[test]
fn matrix_oracle_rejects_wrong_answers() {
    // H X H = Z, so X must not be accepted.
    let m = conjugate(&gate1_matrix(Gate1::H), &pauli_matrix(Pauli::X));
    assert!(!equal_up_to_phase(&m, &pauli_matrix(Pauli::X)));
    assert!(equal_up_to_phase(&m, &pauli_matrix(Pauli::Z)));
}

#[test]
fn fold_cosets_partition_all_pairs() {
    for k in [PairKind::BellPhiPlus, PairKind::TwoQubitCluster] {
        let mut sizes = std::collections::BTreeMap::new();
        for r in PauliPair::all() {
            *sizes.entry(fold(r, k).index()).or_insert(0) += 1;
        }
        assert_eq!(sizes.len(), 4, "{k:?}");
        assert!(sizes.values().all(|&n| n == 4));
        // Representatives are the smallest coset member under I < X < Y < Z.
        for r in PauliPair::all() {
            // Ranked through the printed symbols, not through `index`.
            let rank = |p: PauliPair| {
                let s = p.to_string();
                let mut cs = s.chars().map(|c| "IXYZ".find(c).unwrap());
                (cs.next().unwrap(), cs.next().unwrap())
            };
            let coset = stabilizer_group(k).map(|s| r.compose(s));
            let min = coset.iter().copied().min_by_key(|&p| rank(p)).unwrap();
            assert_eq!(fold(r, k), min);
        }
    }
}

proptest! {
    #[test]
    fn fold_is_idempotent_and_coset_constant(r in pair(), k in kind(), s in 0usize..4) {
        let f = fold(r, k);
        prop_assert_eq!(fold(f, k), f);
        prop_assert_eq!(fold(r.compose(stabilizer_group(k)[s]), k), f);
    }

    #[test]
    fn folding_never_adds_errors(r in pair(), k in kind()) {
        prop_assert!(r.is_identity() <= fold(r, k).is_identity());
    }

    #[test]
    fn gates_preserve_commutation(a in frame(3), b in frame(3), g in gate2(), h in gate1(), q in 0usize..3) {
        let (mut fa, mut fb) = (PauliFrame::from_paulis(&a), PauliFrame::from_paulis(&b));
        let before = anticommute_frames(&fa, &fb);
        for f in [&mut fa, &mut fb] {
            f.conjugate_2q(0, 2, g);
            f.conjugate_1q(q, h);
        }
        prop_assert_eq!(anticommute_frames(&fa, &fb), before);
    }

    #[test]
    fn self_inverse_gates(p in frame(2), g in gate2()) {
        let mut f = PauliFrame::from_paulis(&p);
        f.conjugate_2q(0, 1, g);
        f.conjugate_2q(0, 1, g);
        prop_assert_eq!(f, PauliFrame::from_paulis(&p));
        let mut f = PauliFrame::from_paulis(&p);
        f.conjugate_1q(1, Gate1::H);
        f.conjugate_1q(1, Gate1::H);
        prop_assert_eq!(f, PauliFrame::from_paulis(&p));
    }

    #[test]
    fn s_has_order_two_on_the_frame(p in pauli()) {
        prop_assert_eq!(conjugate_1q(conjugate_1q(p, Gate1::S), Gate1::S), p);
    }

    #[test]
    fn frame_propagation_is_linear(id in prop::sample::select(ProtocolId::ALL.to_vec()),
                                   a in (2usize..5, 0usize..12, pauli()),
                                   b in (2usize..5, 0usize..12, pauli())) {
        // Residuals of two faults compose like Paulis; the frame is a group
        // homomorphism from injected errors to output errors.
        let c = CompiledCircuit::new(&build_protocol(id));
        let ra = propagate_faults(&c, &[a]).raw_residual;
        let rb = propagate_faults(&c, &[b]).raw_residual;
        let both = propagate_faults(&c, &[a, b]).raw_residual;
        prop_assert_eq!(both, [ra[0].compose(rb[0]), ra[1].compose(rb[1])]);
    }

    #[test]
    fn same_seed_same_datapoint(seed in any::<u64>()) {
        let c = build_protocol(ProtocolId::Esp);
        let m = NoiseModel::total(0.97, 0.99);
        let rule = TerminationRule { max_errors: 500, max_trials: 5_000 };
        prop_assert_eq!(run_datapoint(&c, &m, &rule, seed), run_datapoint(&c, &m, &rule, seed));
    }
}

#[test]
fn rescheduling_never_increases_depth_and_keeps_validity() {
    for id in ProtocolId::ALL {
        let c = build_protocol(id);
        let r = reschedule_asap(&c);
        assert!(r.depth() <= c.depth(), "{id}");
        assert!(validate(&r).is_empty(), "{id}: {:?}", validate(&r));
        assert_eq!(r.operations().count(), c.operations().count());
    }
}

#[test]
fn determinism_across_worker_counts() {
    let rule = TerminationRule {
        max_errors: 2_000,
        max_trials: 30_000,
    };
    for id in ProtocolId::ALL {
        let c = build_protocol(id);
        let m = NoiseModel::total(0.98, 0.99);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_datapoint(&c, &m, &rule, 77))
        };
        let one = run(1);
        assert_eq!(one, run(3), "{id}");
        assert_eq!(one, run(8), "{id}");
    }
}

#[test]
fn zero_noise_is_exactly_perfect() {
    let rule = TerminationRule {
        max_errors: 1,
        max_trials: 20_000,
    };
    for id in ProtocolId::ALL {
        let p = run_datapoint(&build_protocol(id), &NoiseModel::ideal(), &rule, 3);
        assert_eq!((p.fidelity, p.errors, p.trials), (1.0, 0, 20_000), "{id}");
        assert_eq!(p.histograms[0].folded[0], 20_000);
    }
}

#[test]
fn depolarizing_rate_and_memory_survival() {
    const N: usize = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let p = 0.02;
    let hits = (0..N)
        .filter(|_| !sample_depolarizing(p, &mut rng).is_identity())
        .count() as f64;
    let sigma = (N as f64 * p * (1.0 - p)).sqrt();
    assert!((hits - N as f64 * p).abs() < 3.0 * sigma, "{hits}");

    // Survival over k idle steps follows (1 - p)^k.
    let m = NoiseModel {
        p_mem: 0.01,
        ..NoiseModel::ideal()
    };
    let k = 5;
    let trials = 200_000;
    let survived = (0..trials)
        .filter(|_| (0..k).all(|_| sample_memory(&m, &mut rng).is_identity()))
        .count() as f64;
    let q = 0.99f64.powi(k);
    let sigma = (trials as f64 * q * (1.0 - q)).sqrt();
    assert!(
        (survived - trials as f64 * q).abs() < 3.0 * sigma,
        "{survived}"
    );
}

#[test]
fn dropped_byproduct_condition_fails_verification() {
    let mut c = build_protocol(ProtocolId::Mqnc);
    let (s, i) = c
        .steps
        .iter()
        .enumerate()
        .flat_map(|(s, step)| step.operations.iter().enumerate().map(move |(i, op)| (s, i, op)))
        .find(|(_, _, op)| matches!(op, OperationKind::Byproduct { condition, .. } if condition.labels().len() > 1))
        .map(|(s, i, _)| (s, i))
        .expect("a byproduct with a compound condition");
    if let OperationKind::Byproduct { condition, .. } = &mut c.steps[s].operations[i] {
        // Keep only the first label of the XOR.
        *condition = Condition::xor_of([condition.labels()[0]]);
    }
    let report = verify_protocol(&c);
    assert!(!report.passed());
    let failure = report.first_failure.expect("a failing branch");
    assert!(!failure.assignment.is_empty());
}
