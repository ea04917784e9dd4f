use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coherent_surplus::allocation::{fair_premia, total_premium, worst_case_measure};
use coherent_surplus::cli::{parse_portfolio, serialize_portfolio};
use coherent_surplus::coherent::{choquet_utility, utility_dominates, Distortion};
use coherent_surplus::models::*;
use coherent_surplus::oracle::{
    core_contains, pwl_max, random_any_distortion, random_distortion, random_instance, Dims,
};
use coherent_surplus::prob::{is_comonotonic, ProbSpace, RandomVar};
use coherent_surplus::retention::RetentionProblem;

const TOL: f64 = 1e-9;

fn scaled_tol(values: &[f64]) -> f64 {
    TOL * values.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

fn space(n: usize) -> impl Strategy<Value = ProbSpace> {
    prop::collection::vec(0.05f64..1.0, n).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        ProbSpace::with_probs(raw.iter().map(|w| w / total).collect()).unwrap()
    })
}

fn var(n: usize) -> impl Strategy<Value = RandomVar> {
    prop::collection::vec(-5.0f64..5.0, n).prop_map(|v| RandomVar::new(v).unwrap())
}

/// Values on a coarse lattice so that ties occur.
fn lattice_var(n: usize) -> impl Strategy<Value = RandomVar> {
    prop::collection::vec(-3i32..=3, n)
        .prop_map(|v| RandomVar::new(v.into_iter().map(f64::from).collect()).unwrap())
}

fn distortion() -> impl Strategy<Value = Distortion> {
    prop_oneof![
        (1.0f64..6.0).prop_map(|g| Distortion::power(g).unwrap()),
        (0.05f64..=1.0).prop_map(|a| Distortion::expected_shortfall(a).unwrap()),
        any::<u64>().prop_map(|seed| random_any_distortion(&mut ChaCha8Rng::seed_from_u64(seed))),
    ]
}

fn setup() -> impl Strategy<Value = (ProbSpace, Distortion, RandomVar, RandomVar)> {
    (1usize..=6).prop_flat_map(|n| {
        (
            space(n),
            distortion(),
            prop_oneof![var(n), lattice_var(n)],
            prop_oneof![var(n), lattice_var(n)],
        )
    })
}

fn u(space: &ProbSpace, f: &Distortion, x: &RandomVar) -> f64 {
    choquet_utility(space, f, x).unwrap()
}

fn instance() -> impl Strategy<Value = Portfolio> {
    (
        any::<u64>(),
        1usize..=6,
        1usize..=3,
        prop_oneof![Just(0.0), Just(0.5)],
    )
        .prop_map(|(seed, atoms, agents, ties)| {
            random_instance(seed, Dims::new(atoms, agents).with_ties(ties))
                .unwrap()
                .portfolio
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn expectation_is_linear((sp, _f, x, y) in setup(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let m = sp.reference_measure();
        let lhs = sp.expectation(&(&x.scale(a) + &y.scale(b)), &m).unwrap();
        let rhs = a * sp.expectation(&x, &m).unwrap() + b * sp.expectation(&y, &m).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * 50.0);
    }

    #[test]
    fn survival_is_a_decreasing_probability((sp, _f, x, _y) in setup(), t in -6.0f64..6.0, dt in 0.0f64..3.0) {
        let m = sp.reference_measure();
        let s = sp.survival(&x, t, &m).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
        prop_assert!(sp.survival(&x, t + dt, &m).unwrap() <= s + 1e-12);
    }

    #[test]
    fn nondecreasing_transforms_are_comonotonic((_sp, _f, x, _y) in setup(), c in 0.0f64..3.0) {
        let g = x.map(|v| (v - c).max(0.0) + v.powi(3));
        prop_assert!(is_comonotonic(&x, &g).unwrap());
        prop_assert!(is_comonotonic(&x, &x.cap(c)).unwrap());
        prop_assert!(is_comonotonic(&x, &RandomVar::constant(x.len(), c)).unwrap());
    }

    #[test]
    fn comonotone_order_sorts_descending_and_groups_ties((sp, _f, x, _y) in setup()) {
        let order = sp.comonotone_order(&x).unwrap();
        let perm = order.permutation();
        let mut seen = perm.to_vec();
        seen.sort();
        prop_assert_eq!(seen, (0..x.len()).collect::<Vec<_>>());
        prop_assert!(perm.windows(2).all(|w| x.get(w[0]) >= x.get(w[1])));
        for group in order.groups() {
            let v = x.get(group[0]);
            prop_assert!(group.iter().all(|&a| (x.get(a) - v).abs() <= 1e-9));
        }
    }

    #[test]
    fn utility_translation((sp, f, x, _y) in setup(), c in -10.0f64..10.0) {
        let lhs = u(&sp, &f, &x.shift(c));
        let rhs = u(&sp, &f, &x) + c;
        prop_assert!((lhs - rhs).abs() <= scaled_tol(&[lhs, rhs]));
    }

    #[test]
    fn utility_positive_homogeneity((sp, f, x, _y) in setup(), l in 0.0f64..10.0) {
        let lhs = u(&sp, &f, &x.scale(l));
        let rhs = l * u(&sp, &f, &x);
        prop_assert!((lhs - rhs).abs() <= scaled_tol(&[lhs, rhs]));
    }

    #[test]
    fn utility_superadditivity((sp, f, x, y) in setup()) {
        let lhs = u(&sp, &f, &(&x + &y));
        let rhs = u(&sp, &f, &x) + u(&sp, &f, &y);
        prop_assert!(lhs >= rhs - scaled_tol(&[lhs, rhs]));
    }

    #[test]
    fn utility_monotonicity((sp, f, x, y) in setup()) {
        let dominated = RandomVar::new(x.values().iter().zip(y.values()).map(|(a, b)| a.min(*b)).collect()).unwrap();
        prop_assert!(u(&sp, &f, &dominated) <= u(&sp, &f, &x) + TOL * 10.0);
    }

    #[test]
    fn utility_commonotonic_additivity((sp, f, x, _y) in setup(), c in -2.0f64..2.0, k in 0.0f64..3.0) {
        let g = x.map(|v| k * (v - c).max(0.0) + (v / 2.0).floor());
        let lhs = u(&sp, &f, &(&x + &g));
        let rhs = u(&sp, &f, &x) + u(&sp, &f, &g);
        prop_assert!((lhs - rhs).abs() <= scaled_tol(&[lhs, rhs]) * 10.0);
    }

    #[test]
    fn utility_below_expectation((sp, f, x, _y) in setup()) {
        let e = sp.expectation(&x, &sp.reference_measure()).unwrap();
        prop_assert!(u(&sp, &f, &x) <= e + TOL * 10.0);
    }

    #[test]
    fn utility_is_law_invariant(n in 1usize..=6, f in distortion(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sp = ProbSpace::uniform(n);
        let values: Vec<f64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, -5.0..5.0)).collect();
        let mut shuffled = values.clone();
        shuffled.shuffle(&mut rng);
        let a = u(&sp, &f, &RandomVar::new(values).unwrap());
        let b = u(&sp, &f, &RandomVar::new(shuffled).unwrap());
        prop_assert!((a - b).abs() <= TOL * 10.0);
    }

    #[test]
    fn smaller_distortion_means_smaller_utility((sp, _f, x, _y) in setup(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let lo = random_distortion(&mut ChaCha8Rng::seed_from_u64(s1));
        let hi = pwl_max(&lo, &random_distortion(&mut ChaCha8Rng::seed_from_u64(s2)));
        prop_assert!(utility_dominates(&lo, &hi, ORDERING_GRID));
        prop_assert!(u(&sp, &lo, &x) <= u(&sp, &hi, &x) + TOL * 10.0);
    }

    #[test]
    fn dual_is_an_involution(f in distortion(), x in 0.0f64..=1.0) {
        let twice = 1.0 - f.dual(1.0 - x);
        prop_assert!((twice - f.eval(x)).abs() <= 1e-12);
        prop_assert!(f.dual(x) >= x - 1e-12);
    }

    #[test]
    fn worst_case_measure_attains_the_premium(p in instance()) {
        let s = p.aggregate();
        let q0 = worst_case_measure(&p.space, &p.insurer, &s).unwrap();
        let pi0 = total_premium(&p.space, &p.insurer, &p.claims).unwrap();
        prop_assert!((q0.expect(&s) - pi0).abs() <= scaled_tol(&[pi0]));
        prop_assert!(core_contains(&p.space, &p.insurer, q0.measure(), 1e-12).unwrap());
        prop_assert!((q0.measure().weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn fair_premia_exhaust_and_stay_below_standalone(p in instance(), scale in 0.1f64..10.0) {
        let pv = fair_premia(&p.space, &p.insurer, &p.claims).unwrap();
        let pi0 = total_premium(&p.space, &p.insurer, &p.claims).unwrap();
        prop_assert!((pv.total - pi0).abs() <= 1e-12 * pi0.abs().max(1.0));
        for (i, x) in p.claims.iter().enumerate() {
            prop_assert!(pv.get(i) >= -1e-12);
            let standalone = -u(&p.space, &p.insurer, &-x);
            prop_assert!(pv.get(i) <= standalone + TOL);
        }
        let scaled: Vec<RandomVar> = p.claims.iter().map(|x| x.scale(scale)).collect();
        let ps = fair_premia(&p.space, &p.insurer, &scaled).unwrap();
        for i in 0..p.claims.len() {
            prop_assert!((ps.get(i) - scale * pv.get(i)).abs() <= scaled_tol(&[ps.get(i)]));
        }
    }

    #[test]
    fn retention_inverts_the_stop_loss_integral(p in instance(), t1 in 0.0f64..5.0, dt in 0.0f64..3.0) {
        let s = p.aggregate();
        let q0 = worst_case_measure(&p.space, &p.insurer, &s).unwrap();
        let prob = RetentionProblem::new(&p.space, s.clone(), q0.measure().clone(), t1).unwrap();
        let r1 = prob.solve().retention;
        prop_assert!(r1 >= 0.0);
        prop_assert!((prob.phi(r1).unwrap() - t1).abs() <= 1e-9 * t1.max(1.0));
        let r2 = prob.with_target(t1 + dt).unwrap().solve().retention;
        prop_assert!(r2 >= r1 - 1e-12);
        let (a, b) = (prob.phi(0.5 * r1).unwrap(), prob.phi(r1).unwrap());
        prop_assert!(a <= b + 1e-12);
    }

    #[test]
    fn insurer_always_accepts(p in instance()) {
        for m in [ModelId::LimitedLiability, ModelId::SurplusSharing, ModelId::DirectAndReinsurer] {
            let r = run_model(m, &p).unwrap();
            prop_assert!(r.insurer_verdict().accepted, "{m}: gap {}", r.insurer_verdict().gap);
        }
        let r2 = model2_run(&p).unwrap();
        prop_assert!(r2.identity(ID_MODEL2_EQUALITY).unwrap().holds(TOL));
        let r3 = model3_run(&p).unwrap();
        prop_assert!(r3.identity(ID_MODEL3_RETAINED).unwrap().holds(TOL));
        if r3.shares.as_ref().is_some_and(|sh| !sh.degenerate) {
            prop_assert!(r3.identity(ID_MODEL3_INSURER).unwrap().holds(TOL));
        }
    }

    #[test]
    fn agents_accept_within_sufficient_bounds(p in instance()) {
        for r in [model3_run(&p).unwrap(), model4_run(&p).unwrap()] {
            for b in r.premium_bounds.iter().filter(|b| b.within_sufficient_bound) {
                prop_assert!(r.verdict(&b.agent).unwrap().accepted, "{} {}", r.model, b.agent);
            }
        }
    }

    #[test]
    fn money_balances_and_shares_sum_to_one(p in instance()) {
        let s = p.aggregate();
        for m in ModelId::ALL {
            let r = run_model(m, &p).unwrap();
            let scale = s.max().max(p.capital).max(1.0);
            prop_assert!(r.balance_residual <= 1e-9 * scale, "{m}: {}", r.balance_residual);
            if let Some(sh) = &r.shares {
                prop_assert!((sh.total() - 1.0).abs() <= 1e-12);
                prop_assert!(sh.insurer >= 0.0 && sh.agents.iter().all(|&l| l >= 0.0));
            }
        }
    }

    #[test]
    fn portfolio_files_round_trip(p in instance()) {
        let again = parse_portfolio(&serialize_portfolio(&p)).unwrap();
        prop_assert_eq!(p, again);
    }
}
