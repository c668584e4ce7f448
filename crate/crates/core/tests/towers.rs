//! Cross-checks between the four expressions of the operator towers and the
//! order calculus, on every unital commutative associative fixture and on
//! seeded random operators.

use derived_brackets::algebra::left_mult;
use derived_brackets::derived::{b_bracket, c_bracket};
use derived_brackets::endlie::EndLie;
use derived_brackets::fixtures;
use derived_brackets::higherops::{
    gamma, order_of, order_report, phi, psi, unshuffle_sum, verify_equivalence,
    verify_order_calculus, Order, OrderDefinition,
};
use derived_brackets::shlie::check_graded_symmetric;
use derived_brackets::{MultilinearMap, Vector};
use itertools::Itertools;

fn all_tuples(alg: &derived_brackets::algebra::AlgebraSpec, r: usize) -> Vec<Vec<usize>> {
    (0..r)
        .map(|_| alg.basis().indices())
        .multi_cartesian_product()
        .collect()
}

#[test]
fn four_routes_agree_on_random_operators() {
    for alg in [fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c()] {
        let one = alg.unit_vector().unwrap();
        for seed in 0..5u64 {
            let delta = fixtures::random_homogeneous_operator(&alg, seed, None);
            for r in 0..=3usize {
                for tuple in all_tuples(&alg, r) {
                    let args: Vec<Vector> = tuple.iter().map(|&i| alg.basis_vec(i)).collect();
                    let g1 = gamma(&alg, &delta, &args).unwrap().apply(&[&one]).unwrap();
                    let ps = psi(&alg, &delta, &args).unwrap();
                    let ph = phi(&alg, &delta, &args).unwrap();
                    let us = unshuffle_sum(&alg, &delta, &args).unwrap();
                    assert_eq!(g1, ps, "gamma/psi disagree");
                    assert_eq!(ps, ph, "psi/phi disagree");
                    assert_eq!(ph, us, "phi/unshuffle disagree");
                }
            }
        }
    }
}

#[test]
fn verify_equivalence_passes_on_fixture_operators() {
    let a = fixtures::fix_a();
    let rep = verify_equivalence(&a, a.operator("D2").unwrap(), 4).unwrap();
    assert!(rep.passed(), "{rep}");
    let b = fixtures::fix_b();
    let rep = verify_equivalence(&b, b.operator("D1").unwrap(), 3).unwrap();
    assert!(rep.passed(), "{rep}");
    let c = fixtures::fix_c();
    let rep = verify_equivalence(&c, c.operator("Delta").unwrap(), 4).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn towers_extend_through_bracket_chains() {
    // Phi^r_T = Psi^r_T = Gamma^r_T(..)(1) = B^r_T(l..)(1) = C^r_{ad T}(l..)(1)
    // with the last two computed inside the endomorphism Lie algebra
    let alg = fixtures::fix_b();
    let end = EndLie::new(&alg, false).unwrap();
    let one = alg.unit_vector().unwrap();
    for seed in [3u64, 17, 40] {
        let t = fixtures::random_homogeneous_operator(&alg, seed, None);
        let t_amb = end.to_ambient(&t).unwrap();
        let ad_t = end.lie().ad(&t_amb).unwrap();
        for r in 1..=3usize {
            for tuple in all_tuples(&alg, r) {
                let args: Vec<Vector> = tuple.iter().map(|&i| alg.basis_vec(i)).collect();
                let ph = phi(&alg, &t, &args).unwrap();
                let g1 = gamma(&alg, &t, &args).unwrap().apply(&[&one]).unwrap();
                let amb_args: Vec<Vector> = tuple
                    .iter()
                    .map(|&i| end.embed(&alg.basis_vec(i)).unwrap())
                    .collect();
                let b_val = b_bracket(end.lie(), &t_amb, &amb_args).unwrap();
                let b_op = end.from_ambient(&b_val).unwrap();
                let b1 = b_op.apply(&[&one]).unwrap();
                let c_val = c_bracket(end.lie(), &ad_t, &amb_args).unwrap();
                let c_op = end.from_ambient(&c_val).unwrap();
                let c1 = c_op.apply(&[&one]).unwrap();
                assert_eq!(ph, g1);
                assert_eq!(ph, b1, "b-bracket chain at {tuple:?}");
                assert_eq!(ph, c1, "c-bracket chain at {tuple:?}");
            }
        }
    }
}

#[test]
fn psi_and_phi_are_graded_symmetric() {
    for alg in [fixtures::fix_b(), fixtures::fix_c()] {
        for seed in [5u64, 23] {
            let delta = fixtures::random_homogeneous_operator(&alg, seed, None);
            for r in [2usize, 3] {
                let mut entries = std::collections::BTreeMap::new();
                for tuple in all_tuples(&alg, r) {
                    let args: Vec<Vector> = tuple.iter().map(|&i| alg.basis_vec(i)).collect();
                    let v = phi(&alg, &delta, &args).unwrap();
                    if !v.is_zero() {
                        entries.insert(tuple.clone(), v);
                    }
                }
                if entries.is_empty() {
                    continue;
                }
                let map = MultilinearMap::new(
                    alg.basis().clone(),
                    alg.basis().clone(),
                    r,
                    delta.degree(),
                    entries,
                )
                .unwrap();
                let sym = check_graded_symmetric(&map).unwrap();
                assert!(sym.holds, "asymmetry for seed {seed} arity {r}: {:?}", sym.witness);
            }
        }
    }
}

#[test]
fn recursion_consistency_of_order() {
    // order <= k via the recursive tower is equivalent to every adjoint
    // commutator [Delta, l_a] having order <= k-1
    let a = fixtures::fix_a();
    let d2 = a.operator("D2").unwrap();
    let k = order_of(&a, d2, OrderDefinition::Phi, 5).unwrap().order;
    assert_eq!(k, Order::Exact(2));
    for i in a.basis().indices() {
        let la = left_mult(&a, &a.basis_vec(i)).unwrap();
        let inner = derived_brackets::multilinear::graded_commutator(d2, &la).unwrap();
        let oi = order_of(&a, &inner, OrderDefinition::Phi, 5).unwrap().order;
        match oi {
            Order::Exact(m) => assert!(m <= 1, "commutator order {m} too big"),
            Order::AtLeast(_) => panic!("commutator order unbounded"),
        }
    }
}

#[test]
fn order_reports_are_consistent_across_definitions() {
    let a = fixtures::fix_a();
    for (name, expect) in [("D1", 1), ("D2", 2), ("Lx", 0)] {
        let rep = order_report(&a, name, a.operator(name).unwrap(), 5).unwrap();
        assert!(rep.consistent());
        for entry in &rep.entries {
            assert_eq!(entry.order, Order::Exact(expect), "{name} via {}", entry.definition);
        }
    }
}

#[test]
fn order_calculus_bounds_hold_on_the_operator_pool() {
    let a = fixtures::fix_a();
    let pool: Vec<(String, MultilinearMap)> = ["Lx", "D1", "D2"]
        .iter()
        .map(|n| (n.to_string(), a.operator(n).unwrap().clone()))
        .collect();
    let rep = verify_order_calculus(&a, &pool, 4).unwrap();
    assert!(rep.passed(), "{rep}");
}
