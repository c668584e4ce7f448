//! The projected-family and derived-bracket theorem suites on the
//! endomorphism algebras of the fixtures.

use derived_brackets::algebra::{derivations, LieSpec};
use derived_brackets::derived::{
    cross_construction_end, cross_construction_hochschild, extend_by_derivation, semidirect_sum,
    verify_derived_lie, voronov_family, DerivedBracketConfig, DerivedMode, SplitLie,
};
use derived_brackets::endlie::EndLie;
use derived_brackets::fixtures;
use derived_brackets::higherops::phi;
use derived_brackets::hochschild::DEFAULT_MAX_ARITY;
use derived_brackets::shlie::{check_linfty, symmetrize_ainfty, symmetrize_map_directly, AInftyFamily};
use derived_brackets::{Error, Vector};
use std::collections::BTreeMap;

fn end_split(alg: &derived_brackets::algebra::AlgebraSpec) -> (EndLie, SplitLie) {
    let end = EndLie::new(alg, false).unwrap();
    let split = SplitLie::new(
        end.lie().clone(),
        &end.l0_labels(),
        &end.l1_labels(),
        true,
    )
    .unwrap();
    (end, split)
}

#[test]
fn voronov_family_on_end_of_fix_a() {
    let a = fixtures::fix_a();
    let (end, split) = end_split(&a);
    let delta = end.to_ambient(a.operator("D2").unwrap()).unwrap();
    let config = DerivedBracketConfig::inner(delta);
    let family = voronov_family(&split, &config, 5).unwrap();
    // order-2 truncation: arities >= 3 vanish
    for r in 3..=5 {
        assert!(family.bracket(r).unwrap().is_zero(), "arity {r} should vanish");
    }
    assert!(!family.bracket(2).unwrap().is_zero());
    // the generalized Jacobi identities hold up to arity 5
    let rep = check_linfty(&family, 5).unwrap();
    assert!(rep.passed(), "{rep}");
    // the family values are the recursive tower values
    for i in a.basis().indices() {
        for j in a.basis().indices() {
            let v = family
                .bracket(2)
                .unwrap()
                .value_on(&[i, j]);
            let direct = phi(&a, a.operator("D2").unwrap(), &[a.basis_vec(i), a.basis_vec(j)]).unwrap();
            // both live on bases with the same ordering
            assert_eq!(
                v.coords().iter().map(|(&k, c)| (k, c.clone())).collect::<Vec<_>>(),
                direct.coords().iter().map(|(&k, c)| (k, c.clone())).collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn voronov_hypotheses_are_enforced() {
    let a = fixtures::fix_a();
    let (end, split) = end_split(&a);
    // an even operator is rejected
    let even = end
        .to_ambient(&derived_brackets::multilinear::MultilinearMap::identity(a.basis().clone()))
        .unwrap();
    match voronov_family(&split, &DerivedBracketConfig::inner(even), 3) {
        Err(Error::HypothesisViolation { condition, .. }) => assert_eq!(condition, "Delta odd"),
        other => panic!("unexpected {other:?}"),
    }
    // an element of L0 violates strictness
    let in_l0 = end.embed(&a.vec_of("t1").unwrap()).unwrap();
    match voronov_family(&split, &DerivedBracketConfig::inner(in_l0), 3) {
        Err(Error::HypothesisViolation { condition, .. }) => assert_eq!(condition, "Delta in L1"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn derivation_mode_reproduces_inner_mode_through_the_extension() {
    // the adjoint of the operator, taken as an abstract derivation, produces
    // the same family; and adjoining the derivation as a new element gives the
    // same family again through the inner construction
    let a = fixtures::fix_a();
    let (end, split) = end_split(&a);
    let delta_vec = end.to_ambient(a.operator("D2").unwrap()).unwrap();
    let inner_family = voronov_family(&split, &DerivedBracketConfig::inner(delta_vec.clone()), 4).unwrap();

    let d = end.lie().ad(&delta_vec).unwrap();
    let deriv_family = voronov_family(&split, &DerivedBracketConfig::derivation(d.clone()), 4).unwrap();
    for r in 1..=4 {
        assert_eq!(inner_family.bracket(r), deriv_family.bracket(r), "arity {r}");
    }

    // L* = L ⋊ C·d with Delta* the adjoined element
    let (extended, label) = extend_by_derivation(end.lie(), &d, "d*").unwrap();
    let mut l1 = end.l1_labels();
    l1.push(label.clone());
    let split_star = SplitLie::new(extended.clone(), &end.l0_labels(), &l1, true).unwrap();
    let delta_star = extended.vec_of(&label).unwrap();
    let star_family = voronov_family(&split_star, &DerivedBracketConfig::inner(delta_star), 4).unwrap();
    for r in 1..=4 {
        assert_eq!(inner_family.bracket(r), star_family.bracket(r), "arity {r} via extension");
    }
}

#[test]
fn derived_lie_identities_on_end_of_fix_a() {
    let a = fixtures::fix_a();
    let (end, _split) = end_split(&a);
    let delta_vec = end.to_ambient(a.operator("D2").unwrap()).unwrap();
    let config = DerivedBracketConfig::inner(delta_vec);
    let l0 = end.l0_labels();
    let report = verify_derived_lie(end.lie(), &config, Some(&l0)).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn cross_construction_agrees_on_end_and_hochschild_ambients() {
    let a = fixtures::fix_a();
    let rep = cross_construction_end(&a, "D2").unwrap();
    assert!(rep.passed(), "{rep}");
    let d = fixtures::fix_d();
    let rep = cross_construction_hochschild(&d).unwrap();
    assert!(rep.passed(), "{rep}");
    // the direct-sum fixture yields the zero bracket on L0 either way
    let ds = fixtures::direct_sum_fixture();
    let config = DerivedBracketConfig::inner(ds.vec_of("g").unwrap());
    let db = derived_brackets::derived::ks_derived_bracket(
        &ds,
        &config,
        &ds.vec_of("a1").unwrap(),
        &ds.vec_of("a2").unwrap(),
    )
    .unwrap();
    assert!(db.is_zero());
}

#[test]
fn cross_construction_rejects_high_order_operators() {
    // the truncated mixed derivative has order 4 with respect to the left
    // multiplications, so the containment hypothesis fails with a witness
    let c = fixtures::fix_c();
    match cross_construction_end(&c, "Delta") {
        Err(Error::HypothesisViolation { condition, .. }) => {
            assert!(condition.contains("contained in L0"), "{condition}");
        }
        Ok(rep) => panic!("expected hypothesis violation, got pass={}", rep.passed()),
        Err(other) => panic!("unexpected error {other}"),
    }
}

#[test]
fn semidirect_sum_of_left_mults_and_derivations_passes_jacobi() {
    // Diff^1 = l_A ⋊ Der(A) on the rank-3 exterior fixture
    let a = fixtures::fix_a();
    let ders = derivations(&a).unwrap();
    assert_eq!(ders.len(), 3 * 8);
    let abelian = fixtures::abelian_lie_from_algebra(&a);
    let (der_lie, action) = fixtures::derivation_lie(&a, &ders).unwrap();
    // semidirect_sum validates antisymmetry and Jacobi on construction
    let sum = semidirect_sum(&abelian, &der_lie, &action).unwrap();
    assert_eq!(sum.basis().len(), 8 + 24);
}

#[test]
fn semidirect_sum_rejects_non_homomorphic_actions() {
    // two commuting generators acting by non-commuting derivations
    let l0 = {
        let basis = derived_brackets::GradedBasis::new(vec![("a".into(), 0), ("b".into(), 0)]).unwrap();
        let bracket = derived_brackets::MultilinearMap::zero(basis.clone(), basis.clone(), 2, 0);
        LieSpec::new(basis, bracket, 0, false).unwrap()
    };
    let l1 = {
        let basis = derived_brackets::GradedBasis::new(vec![("D".into(), 0), ("E".into(), 0)]).unwrap();
        let bracket = derived_brackets::MultilinearMap::zero(basis.clone(), basis.clone(), 2, 0);
        LieSpec::new(basis, bracket, 0, false).unwrap()
    };
    let mk = |pairs: &[(usize, usize)]| {
        let basis = l0.basis().clone();
        let mut entries = BTreeMap::new();
        for &(from, to) in pairs {
            entries.insert(vec![from], Vector::basis_vector(basis.clone(), to));
        }
        derived_brackets::MultilinearMap::new(basis.clone(), basis, 1, 0, entries).unwrap()
    };
    let mut action = BTreeMap::new();
    action.insert("D".to_string(), mk(&[(0, 1)]));
    action.insert("E".to_string(), mk(&[(1, 0)]));
    match semidirect_sum(&l0, &l1, &action) {
        Err(Error::HypothesisViolation { condition, .. }) => {
            assert_eq!(condition, "action is a Lie homomorphism");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn dga_symmetrization_passes_linfty() {
    let dga = fixtures::fix_d_dga();
    let mut maps = BTreeMap::new();
    maps.insert(1, dga.operator("d").unwrap().clone());
    maps.insert(2, dga.product().clone());
    let family = AInftyFamily::new(dga.basis().clone(), maps).unwrap();
    let brackets = symmetrize_ainfty(&family, 4).unwrap();
    // b_1 = d (conjugated to the shifted basis), b_2 the symmetrized product,
    // higher arities vanish
    assert!(!brackets.bracket(1).unwrap().is_zero());
    assert!(!brackets.bracket(2).unwrap().is_zero());
    assert!(brackets.bracket(3).unwrap().is_zero());
    assert!(brackets.bracket(4).unwrap().is_zero());
    let rep = check_linfty(&brackets, 4).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn nested_bracket_route_equals_direct_symmetrization() {
    // independent oracle: symmetrize the shifted arity-2 component over S_2
    // with Koszul signs and compare against the nested-bracket construction
    let dga = fixtures::fix_d_dga();
    let mut maps = BTreeMap::new();
    maps.insert(1, dga.operator("d").unwrap().clone());
    maps.insert(2, dga.product().clone());
    let family = AInftyFamily::new(dga.basis().clone(), maps.clone()).unwrap();
    let brackets = symmetrize_ainfty(&family, 2).unwrap();
    let complex =
        derived_brackets::hochschild::HochschildComplex::new(dga.basis().clone(), 4).unwrap();
    let m_hat = complex.from_ainfty(&maps).unwrap();
    let direct2 = symmetrize_map_directly(m_hat.component(2).unwrap()).unwrap();
    assert_eq!(brackets.bracket(2).unwrap(), &direct2);
    let direct1 = symmetrize_map_directly(m_hat.component(1).unwrap()).unwrap();
    assert_eq!(brackets.bracket(1).unwrap(), &direct1);
}

#[test]
fn single_arity_family_symmetrizes_to_single_arity() {
    // a commutative even product symmetrizes to twice itself at arity 2 and
    // nothing else; for an anticommutative-even one it collapses to zero
    let alg = fixtures::commutative_poly3();
    let mut maps = BTreeMap::new();
    maps.insert(2, alg.product().clone());
    let family = AInftyFamily::new(alg.basis().clone(), maps).unwrap();
    let brackets = symmetrize_ainfty(&family, 3).unwrap();
    assert!(brackets.bracket(1).unwrap().is_zero());
    assert!(brackets.bracket(3).unwrap().is_zero());
    let b2 = brackets.bracket(2).unwrap();
    // on the shifted (all-odd) basis the Koszul symmetrization of a
    // commutative product is m(a,b) - m(b,a) = 0
    assert!(b2.is_zero());
    // the noncommutative triangular product symmetrizes to the commutator
    let d = fixtures::fix_d();
    let mut maps = BTreeMap::new();
    maps.insert(2, d.product().clone());
    let family = AInftyFamily::new(d.basis().clone(), maps).unwrap();
    let brackets = symmetrize_ainfty(&family, 2).unwrap();
    let b2 = brackets.bracket(2).unwrap();
    assert!(!b2.is_zero());
    let rep = check_linfty(&brackets, 2).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[test]
fn ainfty_rejects_wrong_parity_and_nonassociative_squares() {
    let d = fixtures::fix_d();
    // arity-1 even map on an ungraded basis has even shifted parity
    let id = derived_brackets::MultilinearMap::identity(d.basis().clone());
    let mut maps = BTreeMap::new();
    maps.insert(1, id);
    match AInftyFamily::new(d.basis().clone(), maps) {
        Err(Error::HypothesisViolation { condition, .. }) => {
            assert_eq!(condition, "suspended-odd components")
        }
        other => panic!("unexpected {other:?}"),
    }
    // a non-associative product fails [m,m] = 0 inside symmetrize
    let bad = fixtures::fix_d_nonassoc();
    let mut maps = BTreeMap::new();
    maps.insert(2, bad.product().clone());
    let family = AInftyFamily::new(bad.basis().clone(), maps).unwrap();
    match symmetrize_ainfty(&family, 2) {
        Err(Error::HypothesisViolation { condition, .. }) => assert_eq!(condition, "[m,m] = 0"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn voronov_family_respects_element_order_bound() {
    // if the generating element has order <= k with respect to L0, the
    // projected brackets of arity > k vanish
    let a = fixtures::fix_a();
    let (end, split) = end_split(&a);
    let delta = end.to_ambient(a.operator("D2").unwrap()).unwrap();
    let l0: Vec<usize> = (0..a.basis().len()).collect();
    let k = derived_brackets::derived::element_order_wrt(end.lie(), &delta, &l0, 5)
        .unwrap()
        .unwrap();
    assert_eq!(k, 2);
    let family = voronov_family(&split, &DerivedBracketConfig::inner(delta), 5).unwrap();
    for r in (k as usize + 1)..=5 {
        assert!(family.bracket(r).unwrap().is_zero());
    }
}

#[test]
fn derived_lie_reports_hypothesis_failures_but_still_checks() {
    // an even non-square-zero derivation: the hypothesis checks flag it while
    // the identity checks still execute (and fail where they should)
    let sd = fixtures::semidirect_fixture();
    // d = ad(a1): even (a1 has degree 0), d^2 = 0 trivially since the image is
    // central; identities may or may not hold, the point is the shape of the
    // report
    let config = DerivedBracketConfig {
        mode: DerivedMode::Inner(sd.vec_of("a1").unwrap()),
        ks_sign: true,
    };
    let report = verify_derived_lie(&sd, &config, None).unwrap();
    let odd_check = report.check("Delta is odd").unwrap();
    assert!(!odd_check.passed());
    assert!(report.check("(i) left Leibniz identity (shifted degrees)").is_some());
}
