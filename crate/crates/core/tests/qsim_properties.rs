mod common;

use common::{overlap, random_circuit, random_density, random_state};
use hqfnn::qsim::{
    make_channel, meyer_wallach, rotation_gate, state_fidelity, Axis, ChannelKind, DensityMatrix, GateMatrix,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn channel_kind() -> impl Strategy<Value = ChannelKind> {
    prop::sample::select(ChannelKind::ALL.to_vec())
}

fn axis() -> impl Strategy<Value = Axis> {
    prop::sample::select(Axis::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_circuits_preserve_norm(seed in any::<u64>(), n in 1usize..=6, gates in 0usize..=50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_circuit(&mut rng, n, gates).run();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotations_are_unitary(ax in axis(), angle in -100.0f64..100.0) {
        prop_assert!(rotation_gate(ax, angle).unwrap().unitarity_error() < 1e-12);
    }

    #[test]
    fn kraus_sets_are_complete(kind in channel_kind(), p in 0.0f64..=1.0) {
        prop_assert!(make_channel(kind, p).unwrap().completeness_error() < 1e-12);
    }

    #[test]
    fn fidelity_is_bounded_and_symmetric(seed in any::<u64>(), n in 1usize..=3, r1 in 1usize..4, r2 in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_density(&mut rng, n, r1);
        let b = random_density(&mut rng, n, r2);
        let f = state_fidelity(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((f - state_fidelity(&b, &a).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn pure_fidelity_is_overlap(seed in any::<u64>(), n in 1usize..=3, rank in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(&mut rng, n);
        let sigma = random_density(&mut rng, n, rank);
        let f = state_fidelity(&DensityMatrix::from_pure(&psi), &sigma).unwrap();
        prop_assert!((f - overlap(&psi, &sigma)).abs() < 1e-9);
    }

    #[test]
    fn meyer_wallach_ignores_local_unitaries(seed in any::<u64>(), n in 2usize..=5, ax in axis(), angle in -6.3f64..6.3, q in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = random_state(&mut rng, n);
        let before = meyer_wallach(&s).unwrap();
        s.apply_one_qubit(q % n, &rotation_gate(ax, angle).unwrap()).unwrap();
        prop_assert!((meyer_wallach(&s).unwrap() - before).abs() < 1e-9);
    }

    #[test]
    fn channels_keep_states_valid(seed in any::<u64>(), kind in channel_kind(), p in 0.0f64..=1.0, n in 1usize..=3, q in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rho = random_density(&mut rng, n, 2);
        rho.apply_channel(q % n, &make_channel(kind, p).unwrap()).unwrap();
        prop_assert!(rho.validate(1e-9).is_ok());
    }
}

#[test]
fn kraus_completeness_at_listed_probabilities() {
    for kind in ChannelKind::ALL {
        for p in [0.0, 0.01, 0.05, 0.1, 0.5, 1.0] {
            assert!(make_channel(kind, p).unwrap().completeness_error() < 1e-12, "{kind} P={p}");
        }
    }
}

#[test]
fn zero_probability_channel_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for kind in ChannelKind::ALL {
        let rho = random_density(&mut rng, 2, 3);
        let mut out = rho.clone();
        out.apply_channel(1, &make_channel(kind, 0.0).unwrap()).unwrap();
        for (a, b) in out.entries().iter().zip(rho.entries()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn fixed_gates_are_unitary() {
    for g in [GateMatrix::pauli_x(), GateMatrix::pauli_y(), GateMatrix::pauli_z(), GateMatrix::cnot(), GateMatrix::identity(4)] {
        assert!(g.unitarity_error() < 1e-12);
    }
}
