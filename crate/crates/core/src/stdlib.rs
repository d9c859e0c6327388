//! Built-in languages: untyped and simply typed lambda calculus, PCF with
//! its reduction rules, classical and intuitionistic propositional logic,
//! and the representations PCF → ULC and CPC → IPC.

use indexmap::IndexMap;
use thiserror::Error;

use crate::rewrite::{RewriteRule, RuleSet};
use crate::sort::{Name, Sort, SortExpr, SortSignature, SortTranslation};
use crate::template::{MetaDecl, NatExpr, Template};
use crate::term::{ArgSpec, Arity, Term, TermSignature};
use crate::translate::{Representation, TargetTemplate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StdlibError {
    #[error("unknown builtin `{0}` (known: {known})", known = BUILTINS.join(", "))]
    UnknownBuiltin(String),
}

pub const BUILTINS: &[&str] = &[
    "ulc",
    "stlc",
    "pcf",
    "cpc",
    "ipc",
    "pcf2ulc",
    "cpc2ipc-sorts",
    "cpc2ipc",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Signature(RuleSet),
    Representation(Box<Representation>),
    SortTranslation(SortTranslation),
}

pub fn builtin(name: &str) -> Result<Builtin, StdlibError> {
    Ok(match name {
        "ulc" => Builtin::Signature(ulc()),
        "stlc" => Builtin::Signature(stlc()),
        "pcf" => Builtin::Signature(pcf()),
        "cpc" => Builtin::Signature(cpc()),
        "ipc" => Builtin::Signature(ipc()),
        "pcf2ulc" => Builtin::Representation(Box::new(pcf2ulc())),
        "cpc2ipc-sorts" => Builtin::SortTranslation(godel_gentzen()),
        "cpc2ipc" => Builtin::Representation(Box::new(cpc2ipc())),
        _ => return Err(StdlibError::UnknownBuiltin(name.to_string())),
    })
}

fn c(name: &str) -> SortExpr {
    SortExpr::constant(name)
}

fn m(i: usize) -> SortExpr {
    SortExpr::Meta(i)
}

fn e(head: &str, args: Vec<SortExpr>) -> SortExpr {
    SortExpr::con(head, args)
}

fn t(arity: &str, children: Vec<Template>) -> Template {
    Template::con(arity, Vec::new(), children)
}

fn ts(arity: &str, sorts: Vec<SortExpr>, children: Vec<Template>) -> Template {
    Template::con(arity, sorts, children)
}

fn rule(
    name: &str,
    degree: usize,
    nat_var: bool,
    metas: Vec<MetaDecl>,
    lhs: Template,
    rhs: Template,
) -> RewriteRule {
    RewriteRule {
        name: Name::from(name),
        degree,
        nat_var,
        metas,
        lhs,
        rhs,
    }
}

/// Untyped lambda calculus with β.
pub fn ulc() -> RuleSet {
    let star = c("*");
    let sig = TermSignature::with_arities(
        SortSignature::from_pairs([("*", 0)]).expect("valid"),
        [
            Arity::new(
                "app",
                0,
                vec![ArgSpec::plain(star.clone()), ArgSpec::plain(star.clone())],
                star.clone(),
            ),
            Arity::new(
                "abs",
                0,
                vec![ArgSpec::new(vec![star.clone()], star.clone())],
                star.clone(),
            ),
        ],
    )
    .expect("valid");
    let beta = rule(
        "beta",
        0,
        false,
        vec![
            MetaDecl::new("M", vec![star.clone()], star.clone()),
            MetaDecl::new("N", vec![], star),
        ],
        t(
            "app",
            vec![t("abs", vec![Template::Meta(0)]), Template::Meta(1)],
        ),
        Template::subst1(Template::Meta(0), Template::Meta(1)),
    );
    RuleSet::new(sig, vec![beta]).expect("valid")
}

fn arr(a: SortExpr, b: SortExpr) -> SortExpr {
    e("arr", vec![a, b])
}

fn lambda_arities(base: &mut Vec<Arity>) {
    base.push(Arity::new(
        "app",
        2,
        vec![ArgSpec::plain(arr(m(1), m(2))), ArgSpec::plain(m(1))],
        m(2),
    ));
    base.push(Arity::new(
        "abs",
        2,
        vec![ArgSpec::new(vec![m(1)], m(2))],
        arr(m(1), m(2)),
    ));
}

fn typed_beta(name: &str) -> RewriteRule {
    rule(
        name,
        2,
        false,
        vec![
            MetaDecl::new("M", vec![m(1)], m(2)),
            MetaDecl::new("N", vec![], m(1)),
        ],
        ts(
            "app",
            vec![m(1), m(2)],
            vec![
                ts("abs", vec![m(1), m(2)], vec![Template::Meta(0)]),
                Template::Meta(1),
            ],
        ),
        Template::subst1(Template::Meta(0), Template::Meta(1)),
    )
}

/// Simply typed lambda calculus over one base sort, with β.
pub fn stlc() -> RuleSet {
    let mut arities = Vec::new();
    lambda_arities(&mut arities);
    let sig = TermSignature::with_arities(
        SortSignature::from_pairs([("*", 0), ("arr", 2)]).expect("valid"),
        arities,
    )
    .expect("valid");
    RuleSet::new(sig, vec![typed_beta("beta")]).expect("valid")
}

pub fn pcf_signature() -> TermSignature {
    let nat = || c("nat");
    let bool_ = || c("bool");
    let mut arities = Vec::new();
    lambda_arities(&mut arities);
    arities.push(Arity::new(
        "rec",
        1,
        vec![ArgSpec::plain(arr(m(1), m(1)))],
        m(1),
    ));
    arities.push(Arity::constant("tttt", bool_()));
    arities.push(Arity::constant("ffff", bool_()));
    arities.push(Arity::constant("nats", nat()).with_nat_param());
    arities.push(Arity::constant("Succ", arr(nat(), nat())));
    arities.push(Arity::constant("Pred", arr(nat(), nat())));
    arities.push(Arity::constant("Zero", arr(nat(), bool_())));
    arities.push(Arity::constant(
        "CondN",
        arr(bool_(), arr(nat(), arr(nat(), nat()))),
    ));
    arities.push(Arity::constant(
        "CondB",
        arr(bool_(), arr(bool_(), arr(bool_(), bool_()))),
    ));
    arities.push(Arity::new("bottom", 1, Vec::new(), m(1)));
    TermSignature::with_arities(
        SortSignature::from_pairs([("nat", 0), ("bool", 0), ("arr", 2)]).expect("valid"),
        arities,
    )
    .expect("valid")
}

/// `app` node between sorts given as expressions.
fn app(a: SortExpr, b: SortExpr, f: Template, x: Template) -> Template {
    ts("app", vec![a, b], vec![f, x])
}

fn konst(name: &str) -> Template {
    t(name, Vec::new())
}

fn nats(n: NatExpr) -> Template {
    Template::nat_con("nats", n)
}

/// `cond tttt/ffff x y` at value sort `s`.
fn cond(name: &str, s: SortExpr, test: &str, x: Template, y: Template) -> Template {
    let b = c("bool");
    let s3 = arr(s.clone(), arr(s.clone(), s.clone()));
    let s2 = arr(s.clone(), s.clone());
    app(
        s.clone(),
        s.clone(),
        app(
            s.clone(),
            s2.clone(),
            app(b, s3, konst(name), konst(test)),
            x,
        ),
        y,
    )
}

/// PCF with the eleven reduction rules of the interpreter, in order.
pub fn pcf() -> RuleSet {
    let nat = || c("nat");
    let bool_ = || c("bool");
    let n = |s: SortExpr| {
        vec![
            MetaDecl::new("n", vec![], s.clone()),
            MetaDecl::new("m", vec![], s),
        ]
    };
    let uv = |s: SortExpr| {
        vec![
            MetaDecl::new("u", vec![], s.clone()),
            MetaDecl::new("v", vec![], s),
        ]
    };
    let mut rules = vec![typed_beta("app_abs")];
    for (name, test, pick) in [("condN_t", "tttt", 0), ("condN_f", "ffff", 1)] {
        rules.push(rule(
            name,
            0,
            false,
            n(nat()),
            cond("CondN", nat(), test, Template::Meta(0), Template::Meta(1)),
            Template::Meta(pick),
        ));
    }
    for (name, test, pick) in [("condB_t", "tttt", 0), ("condB_f", "ffff", 1)] {
        rules.push(rule(
            name,
            0,
            false,
            uv(bool_()),
            cond("CondB", bool_(), test, Template::Meta(0), Template::Meta(1)),
            Template::Meta(pick),
        ));
    }
    let apply = |f: &str, a: Template, out: SortExpr| app(nat(), out, konst(f), a);
    rules.push(rule(
        "succ_red",
        0,
        true,
        vec![],
        apply("Succ", nats(NatExpr::Var), nat()),
        nats(NatExpr::Succ),
    ));
    rules.push(rule(
        "zero_t",
        0,
        false,
        vec![],
        apply("Zero", nats(NatExpr::Lit(0)), bool_()),
        konst("tttt"),
    ));
    rules.push(rule(
        "zero_f",
        0,
        true,
        vec![],
        apply("Zero", nats(NatExpr::Succ), bool_()),
        konst("ffff"),
    ));
    rules.push(rule(
        "pred_Succ",
        0,
        true,
        vec![],
        apply("Pred", apply("Succ", nats(NatExpr::Var), nat()), nat()),
        nats(NatExpr::Var),
    ));
    rules.push(rule(
        "pred_z",
        0,
        false,
        vec![],
        apply("Pred", nats(NatExpr::Lit(0)), nat()),
        nats(NatExpr::Lit(0)),
    ));
    let rec = |g: Template| ts("rec", vec![m(1)], vec![g]);
    rules.push(rule(
        "rec_a",
        1,
        false,
        vec![MetaDecl::new("g", vec![], arr(m(1), m(1)))],
        rec(Template::Meta(0)),
        app(m(1), m(1), Template::Meta(0), rec(Template::Meta(0))),
    ));
    RuleSet::new(pcf_signature(), rules).expect("valid")
}

/// Atomic propositions of the shipped logics.
pub const ATOMS: &[&str] = &["p", "q", "r"];

pub fn proposition_sorts() -> SortSignature {
    let mut sorts = SortSignature::new();
    for a in ATOMS {
        sorts.declare(a, 0).expect("valid");
    }
    for (name, arity) in [("top", 0), ("bot", 0), ("and", 2), ("or", 2), ("imp", 2)] {
        sorts.declare(name, arity).expect("valid");
    }
    sorts
}

fn neg(a: SortExpr) -> SortExpr {
    e("imp", vec![a, c("bot")])
}

fn ipc_arities() -> Vec<Arity> {
    let and = |a, b| e("and", vec![a, b]);
    let or = |a, b| e("or", vec![a, b]);
    let imp = |a, b| e("imp", vec![a, b]);
    vec![
        Arity::constant("topI", c("top")),
        Arity::new("botI", 1, vec![ArgSpec::plain(c("bot"))], m(1)),
        Arity::new(
            "andI",
            2,
            vec![ArgSpec::plain(m(1)), ArgSpec::plain(m(2))],
            and(m(1), m(2)),
        ),
        Arity::new("andE1", 2, vec![ArgSpec::plain(and(m(1), m(2)))], m(1)),
        Arity::new("andE2", 2, vec![ArgSpec::plain(and(m(1), m(2)))], m(2)),
        Arity::new(
            "impI",
            2,
            vec![ArgSpec::new(vec![m(1)], m(2))],
            imp(m(1), m(2)),
        ),
        Arity::new(
            "impE",
            2,
            vec![ArgSpec::plain(imp(m(1), m(2))), ArgSpec::plain(m(1))],
            m(2),
        ),
        Arity::new("orI1", 2, vec![ArgSpec::plain(m(1))], or(m(1), m(2))),
        Arity::new("orI2", 2, vec![ArgSpec::plain(m(2))], or(m(1), m(2))),
        Arity::new(
            "orE",
            3,
            vec![
                ArgSpec::plain(or(m(1), m(2))),
                ArgSpec::new(vec![m(1)], m(3)),
                ArgSpec::new(vec![m(2)], m(3)),
            ],
            m(3),
        ),
    ]
}

/// Intuitionistic propositional logic (natural deduction proof terms).
pub fn ipc() -> RuleSet {
    let sig = TermSignature::with_arities(proposition_sorts(), ipc_arities()).expect("valid");
    RuleSet::bare(sig)
}

/// Classical propositional logic: IPC plus excluded middle.
pub fn cpc() -> RuleSet {
    let mut arities = ipc_arities();
    arities.push(Arity::new(
        "EM",
        1,
        Vec::new(),
        e("or", vec![neg(m(1)), m(1)]),
    ));
    let sig = TermSignature::with_arities(proposition_sorts(), arities).expect("valid");
    RuleSet::bare(sig)
}

/// The Gödel-Gentzen negative translation of propositions.
pub fn godel_gentzen() -> SortTranslation {
    let nn = |a: SortExpr| neg(neg(a));
    let mut clauses: IndexMap<Name, SortExpr> = IndexMap::new();
    for a in ATOMS {
        clauses.insert(Name::from(*a), nn(c(a)));
    }
    clauses.insert(Name::from("top"), nn(c("top")));
    clauses.insert(Name::from("bot"), nn(c("bot")));
    clauses.insert(Name::from("and"), e("and", vec![m(1), m(2)]));
    clauses.insert(Name::from("or"), neg(e("and", vec![neg(m(1)), neg(m(2))])));
    clauses.insert(Name::from("imp"), e("imp", vec![m(1), m(2)]));
    let sorts = proposition_sorts();
    SortTranslation::new(sorts.clone(), sorts, clauses).expect("valid")
}

/// ULC terms used by the PCF representation.
pub mod constants {
    use crate::term::Term;

    fn v(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn abs(body: Term) -> Term {
        Term::con("abs", vec![], vec![body])
    }

    pub fn app(f: Term, x: Term) -> Term {
        Term::con("app", vec![], vec![f, x])
    }

    /// `λx y. x`
    pub fn true_() -> Term {
        abs(abs(v(1)))
    }

    /// `λx y. y`
    pub fn false_() -> Term {
        abs(abs(v(0)))
    }

    /// `λf x. x`
    pub fn nat_zero() -> Term {
        abs(abs(v(0)))
    }

    /// `λf x. f (prev f x)` for a closed `prev`.
    pub fn nat_step(prev: Term) -> Term {
        abs(abs(app(v(1), app(app(prev, v(1)), v(0)))))
    }

    /// Church numeral built by iterating [`nat_step`], without normalizing.
    pub fn nat(n: u64) -> Term {
        (0..n).fold(nat_zero(), |acc, _| nat_step(acc))
    }

    /// `λn f x. f (n f x)`
    pub fn succ() -> Term {
        abs(abs(abs(app(v(1), app(app(v(2), v(1)), v(0))))))
    }

    /// `λn f x. n (λg h. h (g f)) (λu. x) (λu. u)`
    pub fn pred() -> Term {
        abs(abs(abs(app(
            app(app(v(2), abs(abs(app(v(0), app(v(1), v(3)))))), abs(v(1))),
            abs(v(0)),
        ))))
    }

    /// `λn. n (λx. F) T`
    pub fn zero() -> Term {
        abs(app(app(v(0), abs(false_())), true_()))
    }

    /// `λp a b. p a b`
    pub fn cond() -> Term {
        abs(abs(abs(app(app(v(2), v(1)), v(0)))))
    }

    pub fn omega() -> Term {
        let w = abs(app(v(0), v(0)));
        app(w.clone(), w)
    }

    /// Turing's fixed-point combinator.
    pub fn theta() -> Term {
        let a = abs(abs(app(v(0), app(app(v(1), v(1)), v(0)))));
        app(a.clone(), a)
    }

    /// Curry's fixed-point combinator.
    pub fn y() -> Term {
        let half = abs(app(v(1), app(v(0), v(0))));
        abs(app(half.clone(), half))
    }

    /// Named constants, as usable from representation files.
    pub fn named() -> Vec<(&'static str, Term)> {
        vec![
            ("True", true_()),
            ("False", false_()),
            ("succ", succ()),
            ("pred", pred()),
            ("zero", zero()),
            ("cond", cond()),
            ("omega", omega()),
            ("theta", theta()),
            ("Y", y()),
        ]
    }
}

fn hole(i: usize) -> Template {
    Template::Meta(i)
}

/// PCF in ULC: every sort goes to `*`, `rec` goes to Θ, numerals are
/// Church numerals.
pub fn pcf2ulc() -> Representation {
    use constants as k;
    let source = pcf();
    let target = ulc();
    let clauses: IndexMap<Name, SortExpr> = ["nat", "bool", "arr"]
        .into_iter()
        .map(|s| (Name::from(s), c("*")))
        .collect();
    let g = SortTranslation::new(
        source.signature.sorts.clone(),
        target.signature.sorts.clone(),
        clauses,
    )
    .expect("valid");
    let closed = |term: Term| TargetTemplate::Plain(Template::from_term(&term));
    let mut tpl: IndexMap<Name, TargetTemplate> = IndexMap::new();
    tpl.insert(
        Name::from("app"),
        TargetTemplate::Plain(t("app", vec![hole(0), hole(1)])),
    );
    tpl.insert(
        Name::from("abs"),
        TargetTemplate::Plain(t("abs", vec![hole(0)])),
    );
    tpl.insert(
        Name::from("rec"),
        TargetTemplate::Plain(t("app", vec![Template::from_term(&k::theta()), hole(0)])),
    );
    tpl.insert(Name::from("tttt"), closed(k::true_()));
    tpl.insert(Name::from("ffff"), closed(k::false_()));
    let step = |prev: Template| {
        let v = Template::Var;
        t(
            "abs",
            vec![t(
                "abs",
                vec![t(
                    "app",
                    vec![v(1), t("app", vec![t("app", vec![prev, v(1)]), v(0)])],
                )],
            )],
        )
    };
    tpl.insert(
        Name::from("nats"),
        TargetTemplate::NatRec {
            zero: Template::from_term(&k::nat_zero()),
            succ: step(hole(0)),
        },
    );
    tpl.insert(Name::from("Succ"), closed(k::succ()));
    tpl.insert(Name::from("Pred"), closed(k::pred()));
    tpl.insert(Name::from("Zero"), closed(k::zero()));
    tpl.insert(Name::from("CondN"), closed(k::cond()));
    tpl.insert(Name::from("CondB"), closed(k::cond()));
    tpl.insert(Name::from("bottom"), closed(k::omega()));
    Representation::new(source, target, g, tpl).expect("valid")
}

/// The proof-term part of the Gödel-Gentzen translation. `orE` is left
/// out: its image needs stability of an arbitrary translated formula,
/// which no single template provides.
pub fn cpc2ipc() -> Representation {
    let nn = |a: SortExpr| neg(neg(a));
    let v = Template::Var;
    let mut tpl: IndexMap<Name, TargetTemplate> = IndexMap::new();
    let mut put = |name: &str, x: Template| {
        tpl.insert(Name::from(name), TargetTemplate::Plain(x));
    };
    // λn:¬⊤. n ⊤I
    put(
        "topI",
        ts(
            "impI",
            vec![neg(c("top")), c("bot")],
            vec![ts(
                "impE",
                vec![c("top"), c("bot")],
                vec![v(0), konst("topI")],
            )],
        ),
    );
    // ⊥I (d (λx:⊥. x)) with d : ¬¬⊥
    put(
        "botI",
        ts(
            "botI",
            vec![m(1)],
            vec![ts(
                "impE",
                vec![neg(c("bot")), c("bot")],
                vec![hole(0), ts("impI", vec![c("bot"), c("bot")], vec![v(0)])],
            )],
        ),
    );
    for (name, n_args) in [
        ("andI", 2),
        ("andE1", 1),
        ("andE2", 1),
        ("impI", 1),
        ("impE", 2),
    ] {
        put(
            name,
            ts(name, vec![m(1), m(2)], (0..n_args).map(hole).collect()),
        );
    }
    // λh:¬A∧¬B. (π1 h) a, and symmetrically
    for (name, proj, own) in [("orI1", "andE1", 1), ("orI2", "andE2", 2)] {
        let pair = || vec![neg(m(1)), neg(m(2))];
        put(
            name,
            ts(
                "impI",
                vec![e("and", pair()), c("bot")],
                vec![ts(
                    "impE",
                    vec![m(own), c("bot")],
                    vec![ts(proj, pair(), vec![v(0)]), hole(0)],
                )],
            ),
        );
    }
    // λh:¬(A→¬¬⊥)∧¬A. (π1 h) (λa n. n ((π2 h) a))
    let a = m(1);
    let bb = nn(c("bot"));
    let left = neg(e("imp", vec![a.clone(), bb.clone()]));
    let right = neg(a.clone());
    let pair = || vec![left.clone(), right.clone()];
    put(
        "EM",
        ts(
            "impI",
            vec![e("and", pair()), c("bot")],
            vec![ts(
                "impE",
                vec![e("imp", vec![a.clone(), bb.clone()]), c("bot")],
                vec![
                    ts("andE1", pair(), vec![v(0)]),
                    ts(
                        "impI",
                        vec![a.clone(), bb.clone()],
                        vec![ts(
                            "impI",
                            vec![neg(c("bot")), c("bot")],
                            vec![ts(
                                "impE",
                                vec![c("bot"), c("bot")],
                                vec![
                                    v(0),
                                    ts(
                                        "impE",
                                        vec![a.clone(), c("bot")],
                                        vec![ts("andE2", pair(), vec![v(2)]), v(1)],
                                    ),
                                ],
                            )],
                        )],
                    ),
                ],
            )],
        ),
    );
    Representation::partial(cpc(), ipc(), godel_gentzen(), tpl).expect("valid")
}

/// The excluded-middle proof displayed alongside the logic translation:
/// `λh:¬¬A∧¬A. (π1 h) (π2 h)`, of sort `¬(¬¬A ∧ ¬A)`.
pub fn em_display_term(a: &Sort) -> Term {
    let bot = Sort::atom("bot");
    let neg = |x: Sort| Sort::new("imp", vec![x, bot.clone()]);
    let n1 = neg(a.clone());
    let nn1 = neg(n1.clone());
    let conj = Sort::new("and", vec![nn1.clone(), n1.clone()]);
    let pair = vec![nn1, n1.clone()];
    Term::con(
        "impI",
        vec![conj, bot.clone()],
        vec![Term::con(
            "impE",
            vec![n1, bot],
            vec![
                Term::con("andE1", pair.clone(), vec![Term::Var(0)]),
                Term::con("andE2", pair, vec![Term::Var(0)]),
            ],
        )],
    )
}
