//! Property tests for the closure engine.

use std::sync::Arc;

use diamond_lab::diamond::GaloisParams;
use diamond_lab::engine::rules::rule_twist_subtract;
use diamond_lab::engine::{
    build_pi_table, certify_irreducible, check_pi_involution, CoeffVec, EngineError, LambdaSeq, Outcome,
};
use diamond_lab::ffield::{FElem, Field};
use proptest::prelude::*;

const RADIUS: i64 = 40;

fn f625() -> Arc<Field> {
    Arc::new(Field::new(5, 4).unwrap())
}

fn entries() -> impl Strategy<Value = Vec<(i64, u32)>> {
    prop::collection::btree_map(-10i64..=10, 1u32..625, 1..=8).prop_map(|m| m.into_iter().collect())
}

fn to_vec(f: &Field, e: &[(i64, u32)]) -> CoeffVec {
    CoeffVec::new(f, e.iter().map(|&(i, x)| (i, f.from_packed(x).unwrap())))
}

/// Lowest entry is 1 and no entry is zero.
fn is_normalized(f: &Field, v: &CoeffVec) -> bool {
    v.iter().next().is_none_or(|(_, c)| c == f.one()) && v.iter().all(|(_, c)| !c.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_idempotent_and_projective(e in entries(), scale in 1u32..625) {
        let f = f625();
        let v = to_vec(&f, &e);
        prop_assert!(is_normalized(&f, &v));
        prop_assert_eq!(&CoeffVec::new(&f, v.iter()), &v);
        let c = f.from_packed(scale).unwrap();
        let scaled = CoeffVec::new(&f, e.iter().map(|&(i, x)| (i, f.mul(c, f.from_packed(x).unwrap()))));
        prop_assert_eq!(scaled, v);
    }

    #[test]
    fn twist_commutes_with_shift(e in entries(), shift in -5i64..=5, seed in any::<u64>()) {
        let f = f625();
        let v = to_vec(&f, &e);
        let lambda = LambdaSeq::random_distinct(f.clone(), RADIUS, seed).unwrap();
        let moved = LambdaSeq::from_fn(f.clone(), RADIUS, |i| {
            lambda.get(i - shift).unwrap_or(f.one())
        }).unwrap();
        let mu = lambda.get(v.min_index().unwrap()).unwrap();
        let twisted = rule_twist_subtract(&v, &lambda, mu).unwrap();
        let twisted_moved = rule_twist_subtract(&v.shifted(shift), &moved, mu).unwrap();
        prop_assert_eq!(twisted.shifted(shift), twisted_moved);
    }

    #[test]
    fn twist_kills_exactly_the_matching_entries(e in entries(), seed in any::<u64>()) {
        let f = f625();
        let v = to_vec(&f, &e);
        let lambda = LambdaSeq::random_separated(f.clone(), RADIUS, seed).unwrap();
        for mu in v.support().map(|i| lambda.get(i).unwrap()).collect::<Vec<FElem>>() {
            let out = rule_twist_subtract(&v, &lambda, mu).unwrap();
            let survivors: Vec<i64> = v.support().filter(|&i| lambda.get(i).unwrap() != mu).collect();
            prop_assert_eq!(out.support().collect::<Vec<_>>(), survivors);
        }
    }

    #[test]
    fn separated_lambda_always_certifies(e in entries(), seed in any::<u64>()) {
        let f = f625();
        let params = GaloisParams::new(5, 1, 0).unwrap();
        let start = to_vec(&f, &e);
        let lambda = LambdaSeq::random_separated(f.clone(), RADIUS, seed).unwrap();
        prop_assert!(lambda.separated_at_0());
        match certify_irreducible(&start, &lambda, &params).unwrap() {
            Outcome::Certified(cert) => {
                prop_assert_eq!(cert.twist_steps, start.support_len() - 1);
                prop_assert!(cert.replay(&lambda).is_ok());
            }
            Outcome::Stuck(s) => prop_assert!(false, "stuck at {:?}", s.collision),
        }
    }

    #[test]
    fn pi_squared_is_identity(seed in any::<u64>(), radius in 1i64..60) {
        let f = f625();
        let lambda = LambdaSeq::random_distinct(f, radius, seed).unwrap();
        let report = check_pi_involution(&build_pi_table(&lambda), &lambda);
        prop_assert!(report.failures.is_empty());
    }
}

#[test]
fn certification_is_deterministic() {
    let f = f625();
    let params = GaloisParams::new(5, 1, 0).unwrap();
    let start = CoeffVec::new(&f, [(0, f.one()), (3, f.from_int(2))]);
    let render = || {
        let lambda = LambdaSeq::random_separated(f.clone(), 12, 9).unwrap();
        let cert = certify_irreducible(&start, &lambda, &params).unwrap().certified().unwrap();
        serde_json::to_string(&cert.to_json(&f)).unwrap()
    };
    assert_eq!(render(), render());
}

#[test]
fn dropping_a_step_breaks_replay() {
    let f = f625();
    let params = GaloisParams::new(5, 1, 0).unwrap();
    let start = CoeffVec::new(&f, [(-2, f.one()), (1, f.from_int(3)), (4, f.from_int(2))]);
    let lambda = LambdaSeq::random_distinct(f.clone(), 20, 3).unwrap();
    let cert = certify_irreducible(&start, &lambda, &params).unwrap().certified().unwrap();
    assert!(cert.replay(&lambda).is_ok());
    for k in 0..cert.steps.len() {
        let mut broken = cert.clone();
        broken.steps.remove(k);
        assert!(broken.replay(&lambda).is_err(), "removing step {k} went unnoticed");
    }
}

#[test]
fn window_overflow_names_required_radius() {
    let f = f625();
    let params = GaloisParams::new(5, 1, 0).unwrap();
    let start = CoeffVec::new(&f, [(-10, f.one()), (10, f.one())]);
    let lambda = LambdaSeq::random_distinct(f.clone(), 15, 1).unwrap();
    assert_eq!(
        certify_irreducible(&start, &lambda, &params).unwrap_err(),
        EngineError::WindowOverflow {
            required: 20,
            radius: 15
        }
    );
    let lambda = LambdaSeq::random_distinct(f, 20, 1).unwrap();
    assert!(certify_irreducible(&start, &lambda, &params).unwrap().is_certified());
}
