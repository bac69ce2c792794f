use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use bclab_core::cuts::{generate_cg_cut, verify_cut};
use bclab_core::disjunction::split_i64;
use bclab_core::io::{instance_from_json, instance_to_json, proof_from_json, proof_to_json};
use bclab_core::lp::{check_dual_certificate, enumerate_vertices, solve_lp, LpResult};
use bclab_core::proof::{run_branch_and_cut, verify_proof, ActionRule, Mode, Strategy};
use bclab_core::rational::{self, frac, int, Rational};
use bclab_core::zoo::random_bounded;
use bclab_core::{Error, Goal, Instance, LinearConstraint};

/// Integer points of a pure-integer instance from `random_bounded` (box
/// upper bounds are at most 5).
fn integer_points(inst: &Instance) -> Vec<Vec<Rational>> {
    let n = inst.dim();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    loop {
        let p = rational::ints(&x);
        if inst.polyhedron.contains(&p) {
            out.push(p);
        }
        let mut j = 0;
        while j < n && x[j] == 5 {
            x[j] = 0;
            j += 1;
        }
        if j == n {
            return out;
        }
        x[j] += 1;
    }
}

fn integer_max(inst: &Instance) -> Option<Rational> {
    integer_points(inst).iter().map(|p| rational::dot(p, &inst.objective)).max()
}

fn with_bound(inst: &Instance, bound: Rational) -> Instance {
    Instance {
        bound,
        goal: Goal::ProveBound,
        ..inst.clone()
    }
}

/// The tightest true statement: the integer optimum as bound, or
/// infeasibility when the instance has no integer point.
fn tightest(inst: &Instance) -> Instance {
    match integer_max(inst) {
        Some(best) => with_bound(inst, best),
        None => Instance {
            goal: Goal::ProveInfeasible,
            ..inst.clone()
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(0x0062_636c_6162),
        ..ProptestConfig::default()
    })]

    #[test]
    fn split_terms_cover_integer_points(
        pi in prop::collection::vec(-3i64..=3, 3),
        pi0 in -4i64..=4,
        x in prop::collection::vec(-5i64..=5, 3),
    ) {
        prop_assume!(pi.iter().any(|&c| c != 0));
        let d = split_i64(&pi, pi0, 3, 0).unwrap();
        let p = rational::ints(&x);
        prop_assert!(d.contains(&p));
        // The strip strictly between the terms holds no integer point but
        // does hold fractional ones.
        let mid = frac(2 * pi0 + 1, 2);
        prop_assert!(rational::dot(&rational::ints(&pi), &p) != mid);
    }

    #[test]
    fn cg_cuts_are_valid_on_integer_points(
        seed in 0u64..1000,
        n in 1usize..=3,
        weights in prop::collection::vec(0i64..=4, 16),
    ) {
        let inst = random_bounded(seed, n, 0, 2, 3);
        let rows = inst.polyhedron.oriented_len();
        let lambda: Vec<Rational> = (0..rows).map(|i| frac(weights[i % weights.len()], 4)).collect();
        let Ok(cut) = generate_cg_cut(&inst.polyhedron, &lambda) else {
            // Combination with a fractional coefficient: not a CG multiplier.
            return Ok(());
        };
        prop_assert!(verify_cut(&inst.polyhedron, &cut).is_ok());
        for p in integer_points(&inst) {
            prop_assert!(cut.halfspace.is_satisfied_by(&p), "cut {} violated at {:?}", cut.halfspace, p);
        }
    }

    #[test]
    fn lp_matches_vertex_enumeration(seed in 0u64..10_000, n_int in 1usize..=3, n_cont in 0usize..=1, extra in 0usize..=3) {
        let inst = random_bounded(seed, n_int, n_cont, extra, 3);
        let LpResult::Optimal(opt) = solve_lp(&inst.polyhedron, &inst.objective).unwrap() else {
            return Err(TestCaseError::fail("bounded feasible LP is not optimal"));
        };
        let best = enumerate_vertices(&inst.polyhedron)
            .unwrap()
            .iter()
            .map(|v| rational::dot(v, &inst.objective))
            .max();
        prop_assert_eq!(best, Some(opt.value.clone()));
        prop_assert!(check_dual_certificate(&inst.polyhedron, &inst.objective, &opt));
        prop_assert!(inst.polyhedron.contains(&opt.point));
    }

    #[test]
    fn driver_proofs_are_sound(seed in 0u64..10_000, n in 1usize..=3, cuts in any::<bool>()) {
        let raw = random_bounded(seed, n, 0, 2, 3);
        let inst = tightest(&raw);
        let mut strategy = Strategy::variable_branching();
        if cuts {
            strategy.action = ActionRule::CutRounds(2);
        }
        let tree = run_branch_and_cut(&inst, &strategy).unwrap();
        prop_assert!(verify_proof(&tree).accepted());
        // A bound below the integer optimum has no proof.
        let Some(best) = integer_max(&raw) else { return Ok(()) };
        let tight = with_bound(&raw, best - int(1));
        match run_branch_and_cut(&tight, &strategy) {
            Ok(t) => prop_assert!(!verify_proof(&t).accepted()),
            Err(e) => prop_assert!(matches!(e, Error::InstanceInvalid(_) | Error::Strategy { .. }), "{e}"),
        }
    }

    #[test]
    fn files_round_trip(seed in 0u64..10_000, n_int in 1usize..=3, n_cont in 0usize..=1) {
        let raw = random_bounded(seed, n_int, n_cont, 2, 3);
        let text = instance_to_json(&raw);
        prop_assert_eq!(&instance_from_json(&text).unwrap(), &raw);
        if n_cont == 0 {
            let inst = tightest(&raw);
            let mut strategy = Strategy::variable_branching();
            strategy.mode = Mode::Unrestricted;
            let tree = run_branch_and_cut(&inst, &strategy).unwrap();
            let text = proof_to_json(&tree);
            let back = proof_from_json(&text).unwrap();
            prop_assert_eq!(back.size(), tree.size());
            prop_assert!(verify_proof(&back).accepted());
            prop_assert_eq!(proof_to_json(&back), text);
        }
    }
}

#[test]
fn tightened_cut_is_caught() {
    let inst = bclab_core::zoo::jeroslow_inequality(5).unwrap();
    let mut lambda = rational::zeros(inst.polyhedron.oriented_len());
    lambda[0] = frac(1, 2);
    let mut cut = generate_cg_cut(&inst.polyhedron, &lambda).unwrap();
    assert!(verify_cut(&inst.polyhedron, &cut).is_ok());
    cut.halfspace = LinearConstraint::le(cut.halfspace.coeffs.clone(), &cut.halfspace.rhs - int(1));
    assert!(verify_cut(&inst.polyhedron, &cut).is_err());
}
