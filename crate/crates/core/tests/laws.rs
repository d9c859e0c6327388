use proptest::prelude::*;
use synsem::laws::{check_laws, named_bind, LAWS};
use synsem::stdlib::{self, constants as k};
use synsem::syntax::{parse_term, print_canonical};
use synsem::{
    bind, enumerate_terms, rename, sort_of, subst1, Context, Renaming, Sort, Substitution, Term,
};

#[test]
fn laws_hold_on_small_terms() {
    for rs in [stdlib::ulc(), stdlib::stlc(), stdlib::pcf(), stdlib::ipc()] {
        let r = check_laws(&rs.signature, 3, 2);
        assert!(r.passed(), "{:?}", r.failures.first());
        for law in LAWS {
            assert!(r.checked[law] > 0, "{law} never exercised");
        }
    }
}

#[test]
fn capture_is_avoided() {
    // (abs (var 2))[var 1 := abs (var 2)] must shift the free variable
    let ulc = stdlib::ulc();
    let t = k::abs(Term::Var(1));
    let sigma = Substitution(vec![k::abs(Term::Var(1)), Term::Var(0)]);
    let got = bind(&ulc.signature, &t, &sigma);
    assert_eq!(got, k::abs(k::abs(Term::Var(2))));
    assert_eq!(got, named_bind(&ulc.signature, &t, 2, &sigma, 2));
}

#[test]
fn subst1_on_beta_body() {
    let ulc = stdlib::ulc();
    let body = k::app(Term::Var(0), Term::Var(1));
    let got = subst1(&ulc.signature, &body, &k::true_());
    assert_eq!(got, k::app(k::true_(), Term::Var(0)));
}

/// Closed-and-open ULC term counts by size, from the recurrence
/// c(n, d) = [n = 1] d + c(n-1, d+1) + sum c(i, d) c(n-1-i, d).
fn ulc_count(n: usize, d: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut c = if n == 1 { d } else { 0 };
    if n >= 2 {
        c += ulc_count(n - 1, d + 1);
        for i in 1..n - 1 {
            c += ulc_count(i, d) * ulc_count(n - 1 - i, d);
        }
    }
    c
}

#[test]
fn ulc_enumeration_matches_recurrence() {
    let ulc = stdlib::ulc();
    let star = Sort::atom("*");
    for d in 0..3 {
        let ctx = Context::from_innermost(vec![star.clone(); d]);
        for n in 1..=7 {
            let want: usize = (1..=n).map(|m| ulc_count(m, d)).sum();
            let got = enumerate_terms(&ulc.signature, &ctx, &star, n);
            assert_eq!(got.len(), want, "d={d} n={n}");
            let mut dedup = got.clone();
            dedup.sort_by_key(print_canonical);
            dedup.dedup();
            assert_eq!(dedup.len(), got.len());
        }
    }
}

#[test]
fn enumerated_terms_are_well_sorted() {
    let pcf = stdlib::pcf();
    let nat = Sort::atom("nat");
    let ctx = Context::from_innermost(vec![Sort::atom("bool")]);
    for s in [nat.clone(), Sort::new("arr", vec![nat.clone(), nat])] {
        let terms = enumerate_terms(&pcf.signature, &ctx, &s, 4);
        assert!(!terms.is_empty());
        for t in terms {
            assert_eq!(sort_of(&pcf.signature, &ctx, &t).as_ref(), Ok(&s));
            assert!(t.nodes() <= 4);
        }
    }
}

/// A raw tree shape; indices are reduced modulo the scope when converted.
#[derive(Debug, Clone)]
enum Shape {
    Var(usize),
    Abs(Box<Shape>),
    App(Box<Shape>, Box<Shape>),
}

fn shape() -> impl Strategy<Value = Shape> {
    let leaf = (0usize..6).prop_map(Shape::Var);
    leaf.prop_recursive(6, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|s| Shape::Abs(Box::new(s))),
            (inner.clone(), inner).prop_map(|(a, b)| Shape::App(Box::new(a), Box::new(b))),
        ]
    })
}

fn to_term(s: &Shape, depth: usize) -> Term {
    match s {
        Shape::Var(_) if depth == 0 => k::abs(Term::Var(0)),
        Shape::Var(i) => Term::Var(i % depth),
        Shape::Abs(b) => k::abs(to_term(b, depth + 1)),
        Shape::App(a, b) => k::app(to_term(a, depth), to_term(b, depth)),
    }
}

/// A term in `depth` free variables and a substitution from those into
/// `target` variables.
fn term_and_subst(depth: usize, target: usize) -> impl Strategy<Value = (Term, Substitution)> {
    (shape(), prop::collection::vec(shape(), depth)).prop_map(move |(t, images)| {
        (
            to_term(&t, depth),
            Substitution(images.iter().map(|s| to_term(s, target)).collect()),
        )
    })
}

proptest! {
    #[test]
    fn right_unit((t, _) in term_and_subst(3, 1)) {
        let sig = stdlib::ulc().signature;
        prop_assert_eq!(bind(&sig, &t, &Substitution::identity(3)), t);
    }

    #[test]
    fn agrees_with_named_oracle((t, sigma) in term_and_subst(3, 2)) {
        let sig = stdlib::ulc().signature;
        prop_assert_eq!(bind(&sig, &t, &sigma), named_bind(&sig, &t, 3, &sigma, 2));
    }

    #[test]
    fn associativity((t, sigma) in term_and_subst(2, 3), (_, tau) in term_and_subst(3, 2)) {
        let sig = stdlib::ulc().signature;
        let composed = Substitution(sigma.0.iter().map(|s| bind(&sig, s, &tau)).collect());
        prop_assert_eq!(
            bind(&sig, &bind(&sig, &t, &sigma), &tau),
            bind(&sig, &t, &composed)
        );
    }

    #[test]
    fn renaming_is_bind((t, _) in term_and_subst(3, 1), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let sig = stdlib::ulc().signature;
        let rho = Renaming(perm);
        prop_assert_eq!(
            rename(&sig, &t, &rho),
            bind(&sig, &t, &Substitution::from_renaming(&rho))
        );
    }

    #[test]
    fn canonical_roundtrip((t, _) in term_and_subst(2, 1)) {
        let sig = stdlib::ulc().signature;
        let ctx = Context::from_innermost(vec![Sort::atom("*"); 2]);
        let text = print_canonical(&t);
        prop_assert_eq!(parse_term(&sig, &ctx, &text).unwrap(), t);
    }

    #[test]
    fn reduction_keeps_scope((t, _) in term_and_subst(2, 1)) {
        let ulc = stdlib::ulc();
        let ctx = Context::from_innermost(vec![Sort::atom("*"); 2]);
        for (_, _, next) in synsem::successors(&ulc, &t) {
            prop_assert!(sort_of(&ulc.signature, &ctx, &next).is_ok());
        }
    }
}
