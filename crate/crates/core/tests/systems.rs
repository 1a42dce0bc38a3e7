use proptest::prelude::*;
use tvkit::cyclotomic::QContext;
use tvkit::numeric::{BigComplex, Tolerance};
use tvkit::sixj::{tetrahedral_images, SqrtBranch};
use tvkit::systems::{
    build_tv, epsilon_system, export_system, gamma_system, homologically_trivial, import_system, systems_equal,
    verify_relation, Alignment, EpsilonBranch, RelationPattern,
};

const P: u32 = 60;

fn tol() -> Tolerance {
    Tolerance::for_precision(P)
}

#[test]
fn extraction_doubles_indices() {
    for (r, m) in [(5, 1), (5, 3), (7, 1), (7, 4), (9, 2)] {
        let ctx = QContext::new(r, m, P).unwrap();
        let tv = build_tv(&ctx);
        let th = homologically_trivial(&tv).unwrap();
        let n = th.colour_count();
        assert_eq!(n as i64, (r - 1) / 2);
        for i in 0..n {
            assert!(th.weight(i).within(tv.weight(2 * i), tol().value()));
        }
        for code in 0..n.pow(6) {
            let key: [u32; 6] = std::array::from_fn(|i| code / n.pow(i as u32) % n);
            let doubled = key.map(|c| 2 * c);
            assert_eq!(th.symbol(&key).is_some(), tv.symbol(&doubled).is_some(), "r = {r}, {key:?}");
            if let (Some(a), Some(b)) = (th.symbol(&key), tv.symbol(&doubled)) {
                assert!(a.within(b, tol().value()));
            }
        }
    }
    let th7 = homologically_trivial(&build_tv(&QContext::new(7, 1, P).unwrap())).unwrap();
    assert_eq!(th7.len(), 17);
}

#[test]
fn relation_holds_for_every_builtin_system() {
    let mut systems = vec![
        epsilon_system(EpsilonBranch::Positive, P).unwrap(),
        epsilon_system(EpsilonBranch::Negative, P).unwrap(),
        build_tv(&QContext::new(5, 2, P).unwrap()),
        homologically_trivial(&build_tv(&QContext::new(9, 1, P).unwrap())).unwrap(),
    ];
    for k in 1..=3 {
        systems.push(gamma_system(k, P).unwrap());
    }
    for sys in &systems {
        let report = verify_relation(sys, &tol(), RelationPattern::Book);
        assert!(report.passed(), "{}: worst {:?}", sys.label(), report.worst_tuple);
        assert_eq!(report.total, (sys.colour_count() as u64).pow(9));
    }
}

#[test]
fn printed_pattern_fails_with_a_worst_tuple() {
    let g = gamma_system(1, P).unwrap();
    let report = verify_relation(&g, &tol(), RelationPattern::Printed);
    assert!(!report.passed());
    assert!(report.failures.contains(&report.worst_tuple));
}

#[test]
fn gamma_roots_give_distinct_systems() {
    let a = gamma_system(1, P).unwrap();
    let b = gamma_system(2, P).unwrap();
    let c = systems_equal(&a, &b, &tol(), Alignment::SqrtSigns).unwrap();
    assert!(!c.equal);
    assert!(c.first_difference.is_some());
    assert!(gamma_system(0, P).is_err() && gamma_system(4, P).is_err());
}

#[test]
fn export_is_stable_and_importable() {
    for sys in [epsilon_system(EpsilonBranch::Positive, P).unwrap(), gamma_system(3, P).unwrap()] {
        let text = export_system(&sys).unwrap();
        assert_eq!(text, export_system(&sys).unwrap());
        let back = import_system(&text).unwrap();
        assert!(systems_equal(&sys, &back, &tol(), Alignment::Strict).unwrap().equal);
        let flipped = back.with_sqrt_branch(SqrtBranch::Flipped);
        let expected = sys.with_sqrt_branch(SqrtBranch::Flipped);
        assert!(systems_equal(&flipped, &expected, &tol(), Alignment::Strict).unwrap().equal);
    }
    assert!(import_system("{").is_err());
    assert!(import_system(r#"{"order": 3, "weights": ["1"], "symbols": []}"#).is_err());
}

#[test]
fn lookups_are_symmetric() {
    let g = gamma_system(2, P).unwrap();
    let zero = BigComplex::zero(g.bits());
    let table = g.table();
    for code in 0..3u32.pow(6) {
        let key: [u32; 6] = std::array::from_fn(|i| code / 3u32.pow(i as u32) % 3);
        let v = g.symbol(&key).unwrap_or(&zero);
        assert!(table.get(&key).unwrap_or(&zero).within(v, tol().value()));
        for image in tetrahedral_images(&key) {
            assert!(g.symbol(&image).unwrap_or(&zero).within(v, tol().value()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn face_gauges_are_undone(mask in 0u32..(1 << 8)) {
        let g = gamma_system(1, P).unwrap();
        let faces: Vec<_> = g.face_set().into_iter().collect();
        let flips = faces.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, f)| *f).collect();
        let h = g.apply_face_gauge(&flips);
        prop_assert!(systems_equal(&g, &h, &tol(), Alignment::SqrtSigns).unwrap().equal);
        prop_assert!(verify_relation(&h, &tol(), RelationPattern::Book).passed());
    }
}
