mod common;

use common::{random_image, tiny_config, tiny_model_gradient_check};
use hqfnn::grad::{finite_diff_grad, param_shift_grad, relative_error, FD_STEP};
use hqfnn::model::{sample_loss_and_grad, ModelParams, Slot};
use hqfnn::qsim::{rotation_gate, Axis, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn tiny_model_matches_finite_differences() {
    for seed in 0..10 {
        let report = tiny_model_gradient_check(seed);
        assert!(report.passed(), "seed {seed}: max rel err {}", report.max_rel_err);
    }
}

#[test]
fn single_rotation_shift_rule_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for axis in Axis::ALL {
        for _ in 0..20 {
            let pre = rng.gen_range(-3.0..3.0);
            let theta = rng.gen_range(-3.0..3.0);
            let f = |t: f64| {
                let mut s = PureState::zero(1).unwrap();
                s.apply_one_qubit(0, &rotation_gate(Axis::Y, pre).unwrap()).unwrap();
                s.apply_one_qubit(0, &rotation_gate(axis, t).unwrap()).unwrap();
                s.apply_one_qubit(0, &rotation_gate(Axis::X, 0.4).unwrap()).unwrap();
                s.expectation_z(0).unwrap()
            };
            let fd = finite_diff_grad(f, theta, FD_STEP).unwrap();
            assert!(relative_error(param_shift_grad(f, theta), fd) < 1e-6);
        }
    }
}

#[test]
fn frozen_branch_gets_exactly_zero_gradient() {
    // cut the crisp input of the classifier: nothing upstream of it may move
    let cfg = tiny_config();
    let mut params = ModelParams::init(cfg, 17).unwrap();
    let hidden = cfg.hidden;
    for j in 0..hidden {
        params[Slot::Fc1W].values[cfg.d * hidden + j] = 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let image = random_image(&mut rng, cfg.pixels());
    let (_, g) = sample_loss_and_grad(&image, 1, &params).unwrap();
    for slot in [
        Slot::QmfBias,
        Slot::QmfTheta,
        Slot::RuleW,
        Slot::RuleB,
        Slot::QdW,
        Slot::QdB,
        Slot::HeadW1,
        Slot::HeadB1,
        Slot::HeadW2,
        Slot::HeadB2,
    ] {
        assert!(g[slot].iter().all(|&v| v == 0.0), "{} not frozen", slot.name());
    }
    assert!(g[Slot::Fc2W].iter().any(|&v| v != 0.0));
}
