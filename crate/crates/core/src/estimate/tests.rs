use proptest::prelude::*;

use super::*;
use crate::disting::{sigma_secure_autonomous, DecideOptions};
use crate::exactla::Rational;
use crate::model::{boost, AugmentedPair};
use crate::simulate::{gen_attack, gen_input, gen_state, replay_witness, simulate, simulate_autonomous, AttackSignal};

type Q = Rational;
type M = Matrix<Q>;

fn q(n: i64) -> Q {
    Q::from_ratio(n, 1)
}

fn boost_sys() -> SwitchingSystem<Q> {
    boost::bundled().unwrap()
}

fn consistent_ids<T: Field>(res: &[ConsistencyResult<T>]) -> Vec<String> {
    res.iter().filter(|r| r.consistent).map(|r| r.mode.clone()).collect()
}

/// Two unforced scalar modes with three identical sensors: any single
/// remaining sensor still separates the growth rates 2 and 3.
fn secure_autonomous_system() -> SwitchingSystem<Q> {
    let mk = |id: &str, a: i64| {
        LinearMode::autonomous(id, M::from_i64(&[&[a]]), M::from_i64(&[&[1], &[1], &[1]])).unwrap()
    };
    SwitchingSystem::new(vec![mk("a", 2), mk("b", 3)], 1, 0, 2).unwrap()
}

#[test]
fn clean_autonomous_trace_identifies_its_mode() {
    let sys = secure_autonomous_system();
    let t = simulate_autonomous(&sys.modes[0], &[q(1)], 2).unwrap();
    let res = consistent_modes(&sys, &t.y, &M::zeros(2, 0), 0, 0, &EstimateOptions::default()).unwrap();
    assert_eq!(consistent_ids(&res), vec!["a"]);
    assert_eq!(res[0].x0_estimate.as_ref().unwrap(), &vec![q(1)]);
    assert_eq!(res[0].residual, 0.0);
    assert!(res[1].residual > 0.0);
}

#[test]
fn attacked_secure_pair_never_admits_wrong_mode() {
    let sys = secure_autonomous_system();
    let v = sigma_secure_autonomous(&sys.modes[0], &sys.modes[1], 1, &DecideOptions::default()).unwrap();
    assert!(v.result);
    for seed in 0..100u64 {
        let truth = (seed % 2) as usize;
        let x0 = gen_state::<Q>(1, 10.0, seed).unwrap();
        let (_, attack) = gen_attack::<Q>(3, 0, 1, 0, 1e6, 2, seed).unwrap();
        let t = simulate(&sys.modes[truth], &x0, &M::zeros(2, 0), &attack, 2).unwrap();
        let res = consistent_modes(&sys, &t.y, &M::zeros(2, 0), 1, 0, &EstimateOptions::default()).unwrap();
        assert_eq!(consistent_ids(&res), vec![sys.modes[truth].id.clone()], "seed {seed}");
    }
}

#[test]
fn witness_traces_are_ambiguous() {
    let sys = boost_sys();
    for (i, j) in sys.pairs() {
        let v = sigma_secure_autonomous(&sys.modes[i], &sys.modes[j], 1, &DecideOptions::default()).unwrap();
        let pair = AugmentedPair::nominal(&sys.modes[i], &sys.modes[j]).unwrap();
        let (ti, _) = replay_witness(&pair, &v.witness.unwrap()).unwrap();
        let res = consistent_modes(&sys, &ti.y, &ti.u, 1, 0, &EstimateOptions::default()).unwrap();
        let ids = consistent_ids(&res);
        assert!(ids.contains(&sys.modes[i].id) && ids.contains(&sys.modes[j].id), "{ids:?}");
        let est = estimate_mode(&sys, &ti.y, &ti.u, 1, 0, &EstimateOptions::default()).unwrap();
        assert!(!est.unique);
        assert!(est.mode.is_none());
    }
}

#[test]
fn nominal_boost_trace_gives_unique_mode() {
    let sys = boost_sys();
    let x0 = gen_state::<Q>(2, 5.0, 3).unwrap();
    let u = gen_input::<Q>(1, 4, 5.0, 3).unwrap();
    let t = simulate(&sys.modes[1], &x0, &u, &AttackSignal::none(4, 3, 1), 4).unwrap();
    let est = estimate_mode(&sys, &t.y, &t.u, 0, 0, &EstimateOptions::default()).unwrap();
    assert!(est.unique);
    assert_eq!(est.mode.as_deref(), Some("2"));
    assert!(est.caveat.is_some());
}

#[test]
fn garbage_trace_is_rejected() {
    let sys = boost_sys();
    let y = gen_input::<Q>(3, 4, 100.0, 17).unwrap();
    let u = gen_input::<Q>(1, 4, 1.0, 17).unwrap();
    let err = estimate_mode(&sys, &y, &u, 0, 0, &EstimateOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NoConsistentMode));
    assert!(err.to_string().contains("no consistent mode"));
}

#[test]
fn input_errors() {
    let sys = boost_sys();
    let opts = EstimateOptions::default();
    let u = M::zeros(4, 1);
    assert!(matches!(
        consistent_modes(&sys, &M::zeros(3, 3), &u, 0, 0, &opts),
        Err(Error::WrongHorizon { expected: 4, got: 3 })
    ));
    assert!(consistent_modes(&sys, &M::zeros(4, 2), &u, 0, 0, &opts).is_err());
    assert!(consistent_modes(&sys, &M::zeros(4, 3), &M::zeros(2, 1), 0, 0, &opts).is_err());
    assert!(consistent_modes(&sys, &M::zeros(4, 3), &u, 3, 0, &opts).is_err());
    assert!(consistent_modes(&sys, &M::zeros(4, 3), &u, 0, 2, &opts).is_err());
    // Three input rows are enough: only τ − 1 reach the outputs.
    assert!(consistent_modes(&sys, &M::zeros(4, 3), &M::zeros(3, 1), 0, 0, &opts).is_ok());
}

#[test]
fn supports_are_tried_smallest_first() {
    let sys = boost_sys();
    let x0 = vec![q(1), q(2)];
    let u = gen_input::<Q>(1, 4, 5.0, 8).unwrap();
    let t = simulate(&sys.modes[0], &x0, &u, &AttackSignal::none(4, 3, 1), 4).unwrap();
    let res = consistent_modes(&sys, &t.y, &t.u, 1, 1, &EstimateOptions::default()).unwrap();
    let best = res[0].best_support.as_ref().unwrap();
    assert!(best.gamma.is_empty() && best.delta.is_empty());
    assert_eq!(res[0].checked_supports, 4 * 2);
    assert_eq!(res[0].x0_estimate.as_ref().unwrap(), &x0);
}

#[test]
fn actuator_attack_is_explained() {
    let sys = boost_sys();
    let x0 = vec![q(1), q(-1)];
    let u = gen_input::<Q>(1, 4, 5.0, 21).unwrap();
    let (_, attack) = gen_attack::<Q>(3, 1, 0, 1, 1e3, 4, 21).unwrap();
    let t = simulate(&sys.modes[0], &x0, &u, &attack, 4).unwrap();
    let opts = EstimateOptions::default();
    let res = consistent_modes(&sys, &t.y, &t.u, 0, 1, &opts).unwrap();
    assert!(res[0].consistent);
    assert_eq!(res[0].best_support.as_ref().unwrap().delta.one_based(), vec![1]);
    let res = consistent_modes(&sys, &t.y, &t.u, 0, 0, &opts).unwrap();
    assert!(!res[0].consistent);
}

#[test]
fn float_backend_uses_relative_tolerance() {
    let sys = boost_sys().to_f64();
    let x0 = vec![0.5, -2.0];
    let u = gen_input::<f64>(1, 4, 5.0, 2).unwrap();
    let (_, attack) = gen_attack::<f64>(3, 1, 1, 0, 1e6, 4, 2).unwrap();
    let t = simulate(&sys.modes[0], &x0, &u, &attack, 4).unwrap();
    let res = consistent_modes(&sys, &t.y, &t.u, 1, 0, &EstimateOptions::default()).unwrap();
    assert!(res[0].consistent);
    assert!(res[0].residual <= 1e-8 * t.y.data().iter().map(|x| x * x).sum::<f64>().sqrt());
    let json = serde_json::to_value(&res[0]).unwrap();
    assert_eq!(json["mode"], "1");
}

fn random_mode(id: &str, n: usize, p: usize, vals: &[i64]) -> LinearMode<Q> {
    let mut it = vals.iter().cycle();
    let mut next = || Q::from_ratio(*it.next().unwrap(), 1);
    let a = M::from_fn(n, n, |_, _| next());
    let c = M::from_fn(p, n, |_, _| next());
    LinearMode::autonomous(id, a, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn more_deleted_sensors_never_shrink_the_consistent_set(
        n in 1usize..=2,
        vals in prop::collection::vec(prop::collection::vec(-2i64..=2, 12), 3),
        seed in any::<u64>(),
        truth in 0usize..3,
    ) {
        let modes: Vec<_> = vals.iter().enumerate().map(|(k, v)| random_mode(&k.to_string(), n, 3, v)).collect();
        let sys = SwitchingSystem::new(modes, 0, 0, 1).unwrap();
        let tau = 2 * n;
        let x0 = gen_state::<Q>(n, 5.0, seed).unwrap();
        let (_, attack) = gen_attack::<Q>(3, 0, 1, 0, 50.0, tau, seed).unwrap();
        let t = simulate(&sys.modes[truth], &x0, &M::zeros(tau, 0), &attack, tau).unwrap();
        let none = M::zeros(tau, 0);
        let opts = EstimateOptions::default();
        let small = consistent_ids(&consistent_modes(&sys, &t.y, &none, 1, 0, &opts).unwrap());
        let large = consistent_ids(&consistent_modes(&sys, &t.y, &none, 2, 0, &opts).unwrap());
        prop_assert!(small.contains(&sys.modes[truth].id));
        prop_assert!(small.iter().all(|m| large.contains(m)));
    }
}
