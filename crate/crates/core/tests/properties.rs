//! Property tests for the invariants every layer promises.

use proptest::prelude::*;

use singlet_hv::audit::{self, averaged_conditional};
use singlet_hv::model::NonlocalParameterModel;
use singlet_hv::oracle::{
    chsh_value, conditional_y_given_x, correlation, joint_prob, marginal_x, marginal_y,
};
use singlet_hv::sampler::wilson_interval;
use singlet_hv::{Angle, CounterexampleModel, HVValue, IntervalSet, Outcome};

const TOL: f64 = 1e-12;

fn angle() -> impl Strategy<Value = Angle> {
    (-10.0..10.0f64).prop_map(Angle::new)
}

fn hv() -> impl Strategy<Value = HVValue> {
    (0.0..1.0f64).prop_map(|p| HVValue::new(p).unwrap())
}

fn outcome() -> impl Strategy<Value = Outcome> {
    prop_oneof![Just(Outcome::Plus), Just(Outcome::Minus)]
}

fn variant_model() -> impl Strategy<Value = CounterexampleModel> {
    prop_oneof![
        Just(CounterexampleModel::disjoint()),
        Just(CounterexampleModel::maximal_overlap()),
    ]
}

fn interval_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 0..4).prop_map(|pairs| {
        IntervalSet::from_spans(
            pairs
                .into_iter()
                .map(|(a, b)| (a.min(b), a.max(b))),
        )
    })
}

proptest! {
    // ----- closed-form layer -----

    #[test]
    fn joint_law_normalized(t in angle(), p in angle()) {
        let total: f64 = Outcome::BOTH.iter().flat_map(|&x| {
            Outcome::BOTH.iter().map(move |&y| joint_prob(t, p, x, y))
        }).sum();
        prop_assert!((total - 1.0).abs() <= TOL);
    }

    #[test]
    fn marginals_independent_of_far_setting(t in angle(), p in angle(), x in outcome()) {
        prop_assert!((marginal_x(t, p, x) - 0.5).abs() <= TOL);
        prop_assert!((marginal_y(t, p, x) - 0.5).abs() <= TOL);
    }

    #[test]
    fn joint_law_rotation_covariant(t in angle(), p in angle(), delta in -5.0..5.0f64,
                                    x in outcome(), y in outcome()) {
        let shifted = joint_prob(Angle::new(t.radians() + delta), Angle::new(p.radians() + delta), x, y);
        prop_assert!((shifted - joint_prob(t, p, x, y)).abs() <= TOL);
    }

    #[test]
    fn joint_law_pi_periodic(t in angle(), p in angle(), x in outcome(), y in outcome()) {
        let base = joint_prob(t, p, x, y);
        let t_shift = joint_prob(Angle::new(t.radians() + std::f64::consts::PI), p, x, y);
        let p_shift = joint_prob(t, Angle::new(p.radians() + std::f64::consts::PI), x, y);
        prop_assert!((t_shift - base).abs() <= TOL);
        prop_assert!((p_shift - base).abs() <= TOL);
    }

    #[test]
    fn conditional_times_marginal_is_joint(t in angle(), p in angle(),
                                           x in outcome(), y in outcome()) {
        let lhs = conditional_y_given_x(t, p, y, x) * marginal_x(t, p, x);
        prop_assert!((lhs - joint_prob(t, p, x, y)).abs() <= TOL);
    }

    #[test]
    fn correlation_in_range_and_consistent(t in angle(), p in angle()) {
        let e = correlation(t, p);
        prop_assert!((-1.0 - TOL..=1.0 + TOL).contains(&e));
        let sum: f64 = Outcome::BOTH.iter().flat_map(|&x| {
            Outcome::BOTH.iter().map(move |&y| x.sign() * y.sign() * joint_prob(t, p, x, y))
        }).sum();
        prop_assert!((e - sum).abs() <= TOL);
    }

    #[test]
    fn chsh_within_quantum_bound(a in angle(), a2 in angle(), b in angle(), b2 in angle()) {
        let s = chsh_value(a, a2, b, b2);
        prop_assert!(s <= 2.0 * 2.0f64.sqrt() + TOL);
    }

    // ----- interval layer -----

    #[test]
    fn interval_inclusion_exclusion(a in interval_set(), b in interval_set()) {
        let lhs = a.measure() + b.measure() - a.intersection(&b).measure();
        prop_assert!((lhs - a.union(&b).measure()).abs() <= TOL);
    }

    #[test]
    fn interval_complement_partitions(a in interval_set(), x in 0.0..1.0f64) {
        let comp = a.complement();
        prop_assert!((a.measure() + comp.measure() - 1.0).abs() <= TOL);
        prop_assert!(a.contains(x) != comp.contains(x));
    }

    #[test]
    fn interval_membership_respects_algebra(a in interval_set(), b in interval_set(),
                                            x in 0.0..1.0f64) {
        prop_assert_eq!(a.intersection(&b).contains(x), a.contains(x) && b.contains(x));
        prop_assert_eq!(a.union(&b).contains(x), a.contains(x) || b.contains(x));
    }

    // ----- model layer -----

    #[test]
    fn x_rule_ignores_settings_and_variant(t1 in angle(), t2 in angle(), u in hv()) {
        // the signature admits no phi and no v at all; this pins that the
        // rule ignores theta and the response-set layout too
        let d = CounterexampleModel::disjoint();
        let o = CounterexampleModel::maximal_overlap();
        prop_assert_eq!(d.eval_x(t1, u), d.eval_x(t2, u));
        prop_assert_eq!(d.eval_x(t1, u), o.eval_x(t1, u));
    }

    #[test]
    fn response_measures_reproduce_conditionals(model in variant_model(),
                                                t in angle(), p in angle()) {
        let sets = model.response_sets(t, p);
        for &x in &Outcome::BOTH {
            for &y in &Outcome::BOTH {
                let measured = sets.y_set(x, y).measure();
                let oracle = conditional_y_given_x(t, p, y, x);
                prop_assert!((measured - oracle).abs() <= TOL);
            }
        }
    }

    #[test]
    fn response_measure_bookkeeping(model in variant_model(), t in angle(), p in angle()) {
        let s = model.response_sets(t, p);
        let lhs = s.plus_if_x_plus.measure() + s.plus_if_x_minus.measure()
            - s.plus_for_both.measure();
        let rhs = s.plus_if_x_plus.union(&s.plus_if_x_minus).measure();
        prop_assert!((lhs - rhs).abs() <= TOL);
    }

    // ----- audit layer -----

    #[test]
    fn averaged_conditional_is_three_valued(model in variant_model(), t in angle(),
                                            p in angle(), v in hv(), y in outcome()) {
        let l = averaged_conditional(&model, t, p, v, y);
        prop_assert!(l == 0.0 || l == 0.5 || l == 1.0);
    }

    #[test]
    fn averaged_conditional_total_probability(model in variant_model(), t in angle(),
                                              p in angle(), v in hv()) {
        let sum: f64 = Outcome::BOTH.iter()
            .map(|&y| averaged_conditional(&model, t, p, v, y))
            .sum();
        prop_assert_eq!(sum, 1.0);
    }

    #[test]
    fn averaged_conditional_agrees_with_generic_route(model in variant_model(), t in angle(),
                                                      p in angle(), v in hv(), y in outcome()) {
        let direct = averaged_conditional(&model, t, p, v, y);
        let generic = model.averaged_y_conditional(t, p, v, y);
        prop_assert_eq!(direct, generic);
    }

    #[test]
    fn disjoint_scan_is_always_flat(p in angle(), v in hv(), y in outcome()) {
        let d = CounterexampleModel::disjoint();
        let grid = audit::theta_grid(17);
        let report = audit::theta_scan(&d, p, v, y, &grid).unwrap();
        prop_assert_eq!(report.spread, 0.0);
    }

    #[test]
    fn observable_marginal_always_half(model in variant_model(), t in angle(),
                                       p in angle(), y in outcome()) {
        let m = audit::observable_marginal_y(&model, t, p, y);
        prop_assert!((m - 0.5).abs() <= TOL);
    }

    // ----- sampler layer -----

    #[test]
    fn wilson_contains_point_estimate(s in 0u64..1000, extra in 1u64..1000,
                                      conf in 0.5..0.999f64) {
        let n = s + extra;
        let (lo, hi) = wilson_interval(s, n, conf).unwrap();
        let p = s as f64 / n as f64;
        prop_assert!(lo <= p && p <= hi);
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!((0.0..=1.0).contains(&hi));
    }
}
