use synsem::rewrite::first_successor;
use synsem::stdlib::{self, constants as k};
use synsem::syntax::{parse_term, print_paper};
use synsem::translate::{check_all_rules, check_satisfies, TargetTemplate};
use synsem::{normalize, reduces_to, successors, Context, Position, Template, Term};

fn app(f: Term, x: Term) -> Term {
    k::app(f, x)
}

#[test]
fn beta_is_one_step() {
    let ulc = stdlib::ulc();
    let t = app(k::abs(Term::Var(0)), k::true_());
    let r = reduces_to(&ulc, &t, &k::true_(), 8);
    assert!(r.reached);
    assert_eq!(r.path.len(), 1);
    assert_eq!(r.path[0].rule.as_ref(), "beta");
    assert_eq!(r.path[0].position, Position::root());
}

#[test]
fn successors_in_preorder() {
    let ulc = stdlib::ulc();
    let id = || k::abs(Term::Var(0));
    let dup = k::abs(app(Term::Var(0), Term::Var(0)));
    let t = app(dup, app(id(), id()));
    let s = successors(&ulc, &t);
    assert_eq!(s.len(), 2);
    assert_eq!(s[0].0, Position::root());
    assert_eq!(s[1].0, Position(vec![1]));
    assert_eq!(
        first_successor(&ulc, &t).map(|x| x.0),
        Some(Position::root())
    );
}

#[test]
fn church_arithmetic() {
    let ulc = stdlib::ulc();
    let nf = |t: Term| {
        let n = normalize(&ulc, &t, 200);
        assert!(n.is_normal());
        n.term().clone()
    };
    assert_eq!(nf(app(k::zero(), k::nat(0))), k::true_());
    assert_eq!(nf(app(k::zero(), k::nat(2))), k::false_());
    assert_eq!(nf(app(k::succ(), k::nat(1))), nf(k::nat(2)));
    assert_eq!(nf(app(k::pred(), k::nat(3))), nf(k::nat(2)));
    assert_eq!(nf(app(k::pred(), k::nat(0))), nf(k::nat(0)));
    let cond = app(app(app(k::cond(), k::false_()), k::nat(1)), k::nat(2));
    assert_eq!(nf(cond), nf(k::nat(2)));
    assert_eq!(print_paper(&nf(k::nat(2))), "Abs (Abs (2 @ (2 @ 1)))");
}

#[test]
fn omega_exhausts_fuel() {
    let ulc = stdlib::ulc();
    let n = normalize(&ulc, &k::omega(), 10);
    assert!(!n.is_normal());
    assert_eq!(n.steps().len(), 10);
    assert_eq!(n.term(), &k::omega());
}

#[test]
fn theta_unfolds_by_reduction() {
    let ulc = stdlib::ulc();
    let g = k::abs(Term::Var(0));
    let t = app(k::theta(), g.clone());
    let r = reduces_to(&ulc, &t, &app(g.clone(), t.clone()), 64);
    assert!(r.reached);
    assert_eq!(r.path.len(), 2);
    let y = app(k::y(), g.clone());
    let r = reduces_to(&ulc, &y, &app(g, y.clone()), 100);
    assert!(!r.reached);
}

#[test]
fn pcf_interpreter_rules() {
    let pcf = stdlib::pcf();
    let nf = |src: &str| {
        let t = parse_term(&pcf.signature, &Context::empty(), src).unwrap();
        let n = normalize(&pcf, &t, 64);
        assert!(n.is_normal(), "{src}");
        n.term().to_string()
    };
    assert_eq!(nf("(app Pred (app Succ (nats 0)))"), "(nats 0)");
    assert_eq!(nf("(app Pred (app Succ (nats 4)))"), "(nats 4)");
    assert_eq!(nf("(app Zero (nats 3))"), "(ffff)");
    assert_eq!(
        nf("(app (app (app CondN (app Zero (nats 0))) (nats 1)) (nats 2))"),
        "(nats 1)"
    );
    assert_eq!(
        nf("(app (abs[nat,nat] (app Succ (var 1))) (nats 2))"),
        "(nats 3)"
    );
}

#[test]
fn rec_unfolds_once_per_step() {
    let pcf = stdlib::pcf();
    let t = parse_term(&pcf.signature, &Context::empty(), "(rec[nat] Succ)").unwrap();
    let n = normalize(&pcf, &t, 5);
    assert!(!n.is_normal());
    assert!(n.steps().iter().all(|s| s.rule.as_ref() == "rec_a"));
}

/// Witness lengths of the pcf2ulc satisfaction checks, recorded from the
/// breadth-first search and pinned here.
const WITNESS: &[(&str, Option<u64>, usize)] = &[
    ("app_abs", None, 1),
    ("condN_t", None, 5),
    ("condN_f", None, 5),
    ("condB_t", None, 5),
    ("condB_f", None, 5),
    ("succ_red", Some(0), 1),
    ("succ_red", Some(3), 1),
    ("zero_t", None, 3),
    ("zero_f", Some(0), 4),
    ("zero_f", Some(3), 4),
    ("pred_Succ", Some(0), 10),
    ("pred_z", None, 4),
    ("rec_a", None, 2),
];

#[test]
fn pcf2ulc_witness_lengths() {
    let report = check_all_rules(&stdlib::pcf2ulc(), 64, 3).unwrap();
    for &(rule, nat, len) in WITNESS {
        let v = report
            .verdicts
            .iter()
            .find(|v| v.rule.as_ref() == rule && v.nat == nat)
            .unwrap();
        assert!(v.satisfied, "{rule} {nat:?}");
        assert_eq!(v.witness.len(), len, "{rule} {nat:?}");
    }
}

#[test]
fn pred_succ_fails_beyond_zero() {
    let report = check_all_rules(&stdlib::pcf2ulc(), 64, 3).unwrap();
    let failed: Vec<(String, Option<u64>)> = report
        .verdicts
        .iter()
        .filter(|v| !v.satisfied)
        .map(|v| (v.rule.to_string(), v.nat))
        .collect();
    let expected: Vec<(String, Option<u64>)> = (1..=3)
        .map(|k| ("pred_Succ".to_string(), Some(k)))
        .collect();
    assert_eq!(failed, expected);
    assert_eq!(report.failed_rules().len(), 1);
}

#[test]
fn y_breaks_rec() {
    let rep = stdlib::pcf2ulc();
    let rec = Template::con(
        "app",
        vec![],
        vec![Template::from_term(&k::y()), Template::Meta(0)],
    );
    let rep = rep
        .with_template("rec", TargetTemplate::Plain(rec))
        .unwrap();
    let v = check_satisfies(&rep, "rec_a", 100, 3).unwrap();
    assert_eq!(v.len(), 1);
    assert!(!v[0].satisfied);
    assert_eq!(v[0].expansions, 100);
}

#[test]
fn trace_lines() {
    let pcf = stdlib::pcf();
    let t = parse_term(
        &pcf.signature,
        &Context::empty(),
        "(app Pred (app Succ (nats 0)))",
    )
    .unwrap();
    let n = normalize(&pcf, &t, 64);
    let lines: Vec<String> = n.steps().iter().map(|s| s.to_string()).collect();
    assert_eq!(
        lines,
        ["pred_Succ @ ε : (app[nat,nat] (Pred) (app[nat,nat] (Succ) (nats 0))) ==> (nats 0)"]
    );
}
