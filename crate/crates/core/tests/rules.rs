use synsem::syntax::parse_signature;

const ULC_HEAD: &str = "sorts { * : 0; } terms { app : *, * -> *; abs : {*} * -> *; }";

fn rejects(rule: &str, needle: &str) {
    let text = format!("{ULC_HEAD} rules {{ {rule}; }}");
    let err = parse_signature(&text).expect_err(rule);
    assert!(err.message.contains(needle), "{rule}: {}", err.message);
}

#[test]
fn ulc_file_from_one_line() {
    let text = format!("{ULC_HEAD} rules {{ beta : M{{*}}:*, N:* |- (app (abs M) N) => M[N]; }}");
    assert_eq!(parse_signature(&text).unwrap(), synsem::stdlib::ulc());
}

#[test]
fn pattern_restrictions() {
    rejects("dup : M:* |- (app M M) => M", "exactly once");
    rejects("bare : M:* |- M => M", "rooted at a constructor");
    rejects("scope : M:* |- (abs M) => M", "binders");
    rejects(
        "subst : M{*}:*, N:* |- (app (abs M[N]) N) => N",
        "substitution",
    );
    rejects(
        "rhs_only : M:*, N:* |- (app (abs (var 1)) M) => N",
        "found 0",
    );
}

#[test]
fn sides_must_agree() {
    let text = "sorts { a : 0; b : 0; } terms { f : a -> b; x : -> a; } \
                rules { r : |- (f x) => x; }";
    let err = parse_signature(text).unwrap_err();
    assert!(err.message.contains("sort"), "{}", err.message);
}

#[test]
fn nat_variable_must_be_bound() {
    let text = "sorts { nat : 0; } terms { n(nat) : -> nat; s : nat -> nat; } \
                rules { r(k) : |- (s (n 0)) => (n k); }";
    let err = parse_signature(text).unwrap_err();
    assert!(err.message.contains('k'), "{}", err.message);
}

#[test]
fn unbalanced_braces_load_nothing() {
    let err = parse_signature("sorts { * : 0; terms { }").unwrap_err();
    assert!(err.span.line >= 1);
    let err = parse_signature(&format!(
        "{ULC_HEAD} rules {{ beta : M:* |- (app M M) => M;"
    ))
    .unwrap_err();
    assert!(err.span.col > 1);
}

#[test]
fn comments_are_skipped() {
    let text = format!("# header\n{ULC_HEAD} # trailing\nrules {{ beta : M{{*}}:*, N:* |- (app (abs M) N) => M[N]; }}");
    assert_eq!(parse_signature(&text).unwrap(), synsem::stdlib::ulc());
}
