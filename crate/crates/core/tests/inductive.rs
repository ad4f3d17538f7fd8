use mvlam_core::circuit::{
    build_binary, build_dnf, build_unary, max_table, BuildError, BuiltTerm, StyleTag,
};
use mvlam_core::inductive::{
    build_hybrid, build_inductive, build_inductive_seeded, hybrid_compose, lift_fun,
};
use mvlam_core::reduce::{normalize_applied, DEFAULT_FUEL};
use mvlam_core::syntax::{alpha_eq, print_term, Term};
use mvlam_core::table::FunctionTable;
use mvlam_core::types::typechecks;
use mvlam_core::verify::{tabulate, verify_built};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn random_table(rng: &mut StdRng, n: usize, r: usize) -> FunctionTable {
    let entries = (0..r.pow(n as u32)).map(|_| rng.gen_range(0..r)).collect();
    FunctionTable::new(vec![r; n], r, entries).unwrap()
}

fn has_pairs(t: &Term) -> bool {
    let c = t.shape_counts();
    c.pairs + c.lets > 0
}

#[test]
fn base_case_is_the_unary_builder() {
    let t = FunctionTable::new(vec![3], 3, vec![2, 0, 1]).unwrap();
    let a = build_inductive(&t).unwrap();
    let b = build_unary(&t).unwrap();
    assert_eq!(print_term(&a.term), print_term(&b.term));
    assert_eq!(a.style, StyleTag::Inductive);
}

#[test]
fn min_at_radix_two_has_no_copies() {
    let t = FunctionTable::from_fn(vec![2, 2], 2, |u| u[0].min(u[1])).unwrap();
    let b = build_inductive(&t).unwrap();
    assert!(!has_pairs(&b.term));
    assert!(verify_built(&b, &t).passed());
}

#[test]
fn random_tables_agree_with_dnf() {
    let mut rng = StdRng::seed_from_u64(7);
    for (n, r) in [(2, 3), (3, 2), (2, 4)] {
        for _ in 0..4 {
            let t = random_table(&mut rng, n, r);
            let ind = build_inductive(&t).unwrap();
            assert!(!has_pairs(&ind.term));
            assert!(verify_built(&ind, &t).passed());
            let dnf = build_dnf(&t).unwrap();
            assert_eq!(
                tabulate(&ind.term, t.inputs(), r).unwrap(),
                tabulate(&dnf.term, t.inputs(), r).unwrap()
            );
        }
    }
}

#[test]
fn lifted_terms_ignore_their_function_argument() {
    let r = 2;
    for m_code in 0..4 {
        let m = FunctionTable::new(vec![r], r, vec![m_code & 1, m_code >> 1]).unwrap();
        let mb = build_unary(&m).unwrap();
        let lifted = lift_fun(&mb, 1, r).unwrap();
        typechecks(
            &vec![],
            &lifted.term,
            &lifted.certificate,
            &lifted.declared_type,
        )
        .unwrap();
        let twice = lift_fun(&lifted_as_unary(&lifted, &mb), 1, r).unwrap();
        for f_code in 0..4 {
            let f = FunctionTable::new(vec![r], r, vec![f_code & 1, f_code >> 1]).unwrap();
            let fb = build_unary(&f).unwrap();
            let applied = Term::app(lifted.term.clone(), fb.term.clone());
            let got = tabulate(&applied, &[r], r).unwrap();
            assert_eq!(got, m);
            let applied = Term::app(twice.term.clone(), fb.term.clone());
            assert_eq!(tabulate(&applied, &[r], r).unwrap(), m);
        }
    }
}

/// `lift(m) F0` for a fixed `F0`, rebuilt as a unary term so it can be
/// lifted again.
fn lifted_as_unary(lifted: &BuiltTerm, m: &BuiltTerm) -> BuiltTerm {
    let t = tabulate(&Term::app(lifted.term.clone(), m.term.clone()), &[2], 2).unwrap();
    build_unary(&t).unwrap()
}

#[test]
fn lift_rejects_wrong_types() {
    let b = build_binary(&max_table(2).unwrap()).unwrap();
    assert!(matches!(
        lift_fun(&b, 1, 2),
        Err(BuildError::TypeMismatch(_))
    ));
}

#[test]
fn hybrid_composition_disjoint_and_shared() {
    let r = 2;
    let mut rng = StdRng::seed_from_u64(11);
    let a = random_table(&mut rng, 2, r);
    let b = random_table(&mut rng, 2, r);
    let ia = build_inductive(&a).unwrap();
    let ib = build_inductive(&b).unwrap();
    let max = build_binary(&max_table(r).unwrap()).unwrap();

    let disjoint = hybrid_compose(
        &max,
        &[(ia.clone(), vec![0, 1]), (ib.clone(), vec![2, 3])],
        4,
    )
    .unwrap();
    assert_eq!(disjoint.style, StyleTag::Hybrid);
    let want =
        FunctionTable::from_fn(vec![r; 4], r, |u| a.get(&u[..2]).max(b.get(&u[2..]))).unwrap();
    assert!(verify_built(&disjoint, &want).passed());

    let shared = hybrid_compose(
        &max,
        &[(ia.clone(), vec![0, 1]), (ib.clone(), vec![1, 2])],
        3,
    )
    .unwrap();
    let want =
        FunctionTable::from_fn(vec![r; 3], r, |u| a.get(&u[..2]).max(b.get(&u[1..]))).unwrap();
    assert!(verify_built(&shared, &want).passed());
    assert!(shared.term.shape_counts().lets > 0);

    let id = build_unary(&FunctionTable::new(vec![r], r, vec![0, 1]).unwrap()).unwrap();
    let single = hybrid_compose(&id, &[(ia.clone(), vec![0, 1])], 2).unwrap();
    assert_eq!(tabulate(&single.term, &[r, r], r).unwrap(), a);

    assert!(matches!(
        hybrid_compose(
            &max,
            &[(ia.clone(), vec![0, 1]), (ib.clone(), vec![0, 1])],
            3
        ),
        Err(BuildError::Wiring(_))
    ));
    assert!(matches!(
        hybrid_compose(&max, &[(ia, vec![0, 1])], 2),
        Err(BuildError::Wiring(_))
    ));
}

#[test]
fn whole_table_hybrid_build() {
    let mut rng = StdRng::seed_from_u64(3);
    for (n, r) in [(2, 2), (2, 3), (3, 2)] {
        let t = random_table(&mut rng, n, r);
        let b = build_hybrid(&t).unwrap();
        assert_eq!(b.style, StyleTag::Hybrid);
        assert!(verify_built(&b, &t).passed());
    }
}

#[test]
fn seed_choice_is_irrelevant() {
    let t = FunctionTable::from_fn(vec![3, 3], 3, |u| (u[0] * 2 + u[1]) % 3).unwrap();
    let base = build_inductive(&t).unwrap();
    for seed in 0..3 {
        let b = build_inductive_seeded(&t, seed).unwrap();
        for u in t.tuples() {
            let a = normalize_applied(&base.term, &u, &[3, 3], DEFAULT_FUEL)
                .unwrap()
                .0;
            let c = normalize_applied(&b.term, &u, &[3, 3], DEFAULT_FUEL)
                .unwrap()
                .0;
            assert!(alpha_eq(&a, &c));
        }
    }
}
