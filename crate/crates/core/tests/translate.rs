use synsem::stdlib::{self, constants as k};
use synsem::syntax::{parse_sort, parse_term, print_paper};
use synsem::translate::{
    check_all_rules, check_faithful, check_monad_morphism, identity_representation, retype_context,
    translate, TargetTemplate, TranslateError,
};
use synsem::{fold_sorts, sort_of, Context, Sort, Template, Term};

fn neg(a: Sort) -> Sort {
    Sort::new("imp", vec![a, Sort::atom("bot")])
}

#[test]
fn translation_example() {
    let rep = stdlib::pcf2ulc();
    let t = parse_term(
        &rep.source.signature,
        &Context::empty(),
        "(abs[bool,bool] (app (app (app (CondB) (var 1)) (ffff)) (tttt)))",
    )
    .unwrap();
    let image = translate(&rep, &t).unwrap();
    assert_eq!(
        print_paper(&image),
        "Abs (Abs (Abs (Abs (3 @ 2 @ 1))) @ 1 @ Abs (Abs 1) @ Abs (Abs 2))"
    );
}

#[test]
fn numerals_translate_to_church_numerals() {
    let rep = stdlib::pcf2ulc();
    for n in 0..5 {
        let t = Term::nat_con("nats", n, vec![]);
        assert_eq!(translate(&rep, &t).unwrap(), k::nat(n));
    }
}

#[test]
fn translation_keeps_variables_and_retypes_contexts() {
    let rep = stdlib::cpc2ipc();
    let p = Sort::atom("p");
    let ctx = Context::from_innermost(vec![p.clone()]);
    let t = Term::Var(0);
    assert_eq!(translate(&rep, &t).unwrap(), t);
    let retyped = retype_context(&rep.sort_trans, &ctx);
    assert_eq!(retyped.get(0), Some(&neg(neg(p))));
}

#[test]
fn godel_gentzen_clauses() {
    let g = stdlib::godel_gentzen();
    let sorts = stdlib::proposition_sorts();
    let s = |x: &str| parse_sort(&sorts, x).unwrap();
    let cases = [
        ("p", "(imp (imp p bot) bot)"),
        ("top", "(imp (imp top bot) bot)"),
        ("bot", "(imp (imp bot bot) bot)"),
        (
            "(and p q)",
            "(and (imp (imp p bot) bot) (imp (imp q bot) bot))",
        ),
        (
            "(or p q)",
            "(imp (and (imp (imp (imp p bot) bot) bot) (imp (imp (imp q bot) bot) bot)) bot)",
        ),
        (
            "(imp p q)",
            "(imp (imp (imp p bot) bot) (imp (imp q bot) bot))",
        ),
    ];
    for (from, to) in cases {
        assert_eq!(fold_sorts(&g, &s(from)).unwrap(), s(to), "{from}");
    }
}

#[test]
fn em_display_term_sort_checks() {
    let ipc = stdlib::ipc();
    let p = Sort::atom("p");
    let q = Sort::atom("q");
    for a in [p.clone(), q.clone(), Sort::new("and", vec![p, q])] {
        let want = neg(Sort::new("and", vec![neg(neg(a.clone())), neg(a.clone())]));
        let got = sort_of(
            &ipc.signature,
            &Context::empty(),
            &stdlib::em_display_term(&a),
        );
        assert_eq!(got, Ok(want), "{a}");
    }
}

#[test]
fn proof_images_sort_check_at_folded_sorts() {
    let rep = stdlib::cpc2ipc();
    let cpc = &rep.source.signature;
    let ipc = &rep.target.signature;
    let ctx = Context::from_innermost(vec![Sort::atom("p"), Sort::atom("q")]);
    for src in [
        "(EM[p])",
        "(EM[(and p q)])",
        "(orI1[p,q] (var 1))",
        "(orI2[p,q] (var 2))",
        "(andI (var 1) (var 2))",
        "(impI[r,p] (var 2))",
        "(topI)",
    ] {
        let t = parse_term(cpc, &ctx, src).unwrap();
        let s = sort_of(cpc, &ctx, &t).unwrap();
        let image = translate(&rep, &t).unwrap();
        let retyped = retype_context(&rep.sort_trans, &ctx);
        assert_eq!(
            sort_of(ipc, &retyped, &image),
            Ok(rep.sort_trans.fold(&s)),
            "{src}"
        );
    }
}

#[test]
fn partial_representation_rejects_missing_arity() {
    let rep = stdlib::cpc2ipc();
    let ctx = Context::from_innermost(vec![Sort::atom("p")]);
    let t = parse_term(
        &rep.source.signature,
        &ctx,
        "(orE[p,p,p] (orI1[p,p] (var 1)) (var 1) (var 1))",
    )
    .unwrap();
    assert_eq!(
        translate(&rep, &t),
        Err(TranslateError::Unrepresented("orE".into()))
    );
    assert_eq!(rep.unrepresented(), vec!["orE".into()]);
}

#[test]
fn with_template_rechecks_sorts() {
    let rep = stdlib::pcf2ulc();
    let bad = TargetTemplate::Plain(Template::Meta(3));
    assert!(rep.with_template("rec", bad).is_err());
}

#[test]
fn morphism_and_faithfulness_at_small_size() {
    let rep = stdlib::pcf2ulc();
    let m = check_monad_morphism(&rep, 3, 2).unwrap();
    assert!(m.passed());
    assert!(m.checked > 0);
    let f = check_faithful(&rep, 3, 1, 64).unwrap();
    assert!(f.passed());
    assert!(f.checked > 0);
    let m = check_monad_morphism(&stdlib::cpc2ipc(), 3, 1).unwrap();
    assert!(m.passed());
}

#[test]
fn identity_representation_satisfies_its_rules() {
    for rs in [stdlib::ulc(), stdlib::stlc()] {
        let rep = identity_representation(&rs);
        let report = check_all_rules(&rep, 8, 0).unwrap();
        assert!(report.passed());
        assert!(report.verdicts.iter().all(|v| v.witness.len() == 1));
    }
}
