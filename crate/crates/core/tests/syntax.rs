use std::path::PathBuf;

use synsem::stdlib::{self, constants, Builtin};
use synsem::syntax::{
    load_representation, load_signature, parse_context, parse_signature, parse_term,
    print_canonical, print_paper, print_signature,
};
use synsem::{Context, Enumerator, Sort, Term};

fn example(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

#[test]
fn shipped_signatures_match_builtins() {
    for name in ["ulc", "stlc", "pcf", "cpc", "ipc"] {
        let parsed = load_signature(&example(&format!("{name}.sig")))
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        let Ok(Builtin::Signature(builtin)) = stdlib::builtin(name) else {
            panic!("{name} is not a builtin signature")
        };
        assert_eq!(parsed, builtin, "{name}");
    }
}

#[test]
fn figure_variant_loads() {
    let rs = load_signature(&example("pcf-figure.sig")).unwrap();
    assert_eq!(rs.rules().len(), 11);
    assert_eq!(rs.signature, stdlib::pcf().signature);
}

#[test]
fn shipped_representations_match_builtins() {
    let rep = load_representation(&example("pcf2ulc.rep")).unwrap();
    assert_eq!(rep.rep, stdlib::pcf2ulc());
    let rep = load_representation(&example("cpc2ipc.rep")).unwrap();
    assert_eq!(rep.rep, stdlib::cpc2ipc());
    let rep = load_representation(&example("cpc2ipc-sorts.rep")).unwrap();
    assert_eq!(rep.rep.sort_trans, stdlib::godel_gentzen());
    assert_eq!(rep.rep.templates().count(), 0);
}

#[test]
fn ulc_constants() {
    let cases: [(&str, Term); 11] = [
        ("Abs (Abs 2)", constants::true_()),
        ("Abs (Abs 1)", constants::false_()),
        ("Abs (Abs 1)", constants::nat(0)),
        (
            "Abs (Abs (2 @ (Abs (Abs (2 @ (Abs (Abs 1) @ 2 @ 1))) @ 2 @ 1)))",
            constants::nat(2),
        ),
        ("Abs (Abs (Abs (2 @ (3 @ 2 @ 1))))", constants::succ()),
        (
            "Abs (Abs (Abs (3 @ Abs (Abs (1 @ (2 @ 4))) @ Abs 2 @ Abs 1)))",
            constants::pred(),
        ),
        (
            "Abs (1 @ Abs (Abs (Abs 1)) @ Abs (Abs 2))",
            constants::zero(),
        ),
        ("Abs (Abs (Abs (3 @ 2 @ 1)))", constants::cond()),
        ("Abs (1 @ 1) @ Abs (1 @ 1)", constants::omega()),
        (
            "Abs (Abs (1 @ (2 @ 2 @ 1))) @ Abs (Abs (1 @ (2 @ 2 @ 1)))",
            constants::theta(),
        ),
        (
            "Abs (Abs (2 @ (1 @ 1)) @ Abs (2 @ (1 @ 1)))",
            constants::y(),
        ),
    ];
    for (want, t) in cases {
        assert_eq!(print_paper(&t), want);
    }
}

#[test]
fn canonical_syntax() {
    let pcf = stdlib::pcf();
    let ctx = parse_context(&pcf.signature.sorts, "bool").unwrap();
    let t = parse_term(&pcf.signature, &ctx, "(app (app Succ (nats 2)) (var 1))");
    assert!(
        t.is_err(),
        "Succ applied to a numeral is a nat, not a function"
    );
    let t = parse_term(
        &pcf.signature,
        &Context::empty(),
        "(abs[bool,bool] (app (app (app (CondB) (var 1)) (ffff)) (tttt)))",
    )
    .unwrap();
    assert_eq!(
        print_canonical(&t),
        "(abs[bool,bool] (app[bool,bool] (app[bool,(arr bool bool)] \
         (app[bool,(arr bool (arr bool bool))] (CondB) (var 1)) (ffff)) (tttt)))"
    );
}

#[test]
fn omitted_sorts_need_a_witness() {
    let pcf = stdlib::pcf();
    let err = parse_term(&pcf.signature, &Context::empty(), "(abs (var 1))").unwrap_err();
    assert!(err.message.contains("cannot"), "{err}");
    assert_eq!((err.span.line, err.span.col), (1, 1));
}

#[test]
fn diagnostics_carry_positions() {
    let err = parse_signature("sorts { * : 0; }\nterms { app : *, * -> nope; }").unwrap_err();
    assert_eq!(err.span.line, 2);
    assert!(err.message.contains("nope"), "{err}");
    let err = parse_signature(
        "sorts { * : 0; } terms { abs : {*} * -> *; }\nrules {\n  bad : M:* |- M => M; }",
    )
    .unwrap_err();
    assert_eq!((err.span.line, err.span.col), (3, 3), "{err}");
}

#[test]
fn roundtrip_on_enumerated_terms() {
    for name in ["ulc", "stlc", "pcf", "cpc", "ipc"] {
        let Ok(Builtin::Signature(rs)) = stdlib::builtin(name) else {
            unreachable!()
        };
        let sig = &rs.signature;
        let mut en = Enumerator::new(sig);
        let universe: Vec<Sort> = en.universe().to_vec();
        for sort in &universe {
            let ctx = Context::from_innermost(vec![sort.clone()]);
            for t in en.terms(&ctx, sort, 5) {
                let text = print_canonical(&t);
                let back =
                    parse_term(sig, &ctx, &text).unwrap_or_else(|e| panic!("{name}: {text}: {e}"));
                assert_eq!(back, t, "{name}: {text}");
            }
        }
    }
}

#[test]
fn signature_printing_is_a_fixpoint() {
    for name in ["ulc", "stlc", "pcf", "cpc", "ipc"] {
        let once = print_signature(&load_signature(&example(&format!("{name}.sig"))).unwrap());
        let reparsed = parse_signature(&once).unwrap_or_else(|e| panic!("{name}: {e}\n{once}"));
        assert_eq!(print_signature(&reparsed), once, "{name}");
    }
}
