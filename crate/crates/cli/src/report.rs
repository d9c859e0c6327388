//! JSON report shapes. Field names and nesting are part of the CLI's
//! contract; see docs/json-reports.md.

use serde::Serialize;
use synsem::syntax::{print_term, Style};
use synsem::{Context, Step, Term};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: u32,
    pub command: &'static str,
    pub ok: bool,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Debug, Serialize)]
pub struct StepJson {
    pub rule: String,
    pub position: String,
    pub before: String,
    pub after: String,
}

impl StepJson {
    pub fn new(s: &Step, style: Style) -> Self {
        StepJson {
            rule: s.rule.to_string(),
            position: s.position.to_string(),
            before: print_term(&s.before, style),
            after: print_term(&s.after, style),
        }
    }
}

pub fn steps(steps: &[Step], style: Style) -> Vec<StepJson> {
    steps.iter().map(|s| StepJson::new(s, style)).collect()
}

pub fn ctx_string(ctx: &Context) -> String {
    ctx.iter_innermost()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn term(t: &Term, style: Style) -> String {
    print_term(t, style)
}

#[derive(Debug, Serialize)]
pub struct SignatureSummary {
    pub sort_constructors: usize,
    pub arities: usize,
    pub rules: usize,
}

#[derive(Debug, Serialize)]
pub struct CheckJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<SignatureSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term: Option<TermSort>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject_reduction: Option<SubjectReductionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roundtrip: Option<RoundtripJson>,
}

#[derive(Debug, Serialize)]
pub struct RepresentationSummary {
    pub source: String,
    pub target: String,
    pub total: bool,
    pub unrepresented: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TermSort {
    pub term: String,
    pub sort: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SubjectReductionJson {
    pub terms: usize,
    pub checked: usize,
    pub failures: Vec<SortChangeJson>,
}

#[derive(Debug, Serialize)]
pub struct SortChangeJson {
    pub ctx: String,
    pub term: String,
    pub sort: String,
    pub rule: String,
    pub position: String,
    pub successor: String,
    pub got: String,
}

#[derive(Debug, Serialize)]
pub struct RoundtripJson {
    pub checked: usize,
    pub failures: Vec<RoundtripFailureJson>,
}

#[derive(Debug, Serialize)]
pub struct RoundtripFailureJson {
    pub ctx: String,
    pub text: String,
    pub got: String,
}

#[derive(Debug, Serialize)]
pub struct ReduceJson {
    pub term: String,
    pub normal: bool,
    pub step_count: usize,
    pub steps: Vec<StepJson>,
}

#[derive(Debug, Serialize)]
pub struct TranslateJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sort: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct LawsJson {
    pub max_nodes: usize,
    pub ctx_len: usize,
    pub checked: Vec<LawCount>,
    pub failures: Vec<LawFailureJson>,
}

#[derive(Debug, Serialize)]
pub struct LawCount {
    pub law: String,
    pub instances: usize,
}

#[derive(Debug, Serialize)]
pub struct LawFailureJson {
    pub law: String,
    pub ctx: String,
    pub term: String,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerdictJson {
    pub rule: String,
    pub k: Option<u64>,
    pub satisfied: bool,
    pub lhs: String,
    pub rhs: String,
    pub witness_length: Option<usize>,
    pub expansions: usize,
    pub witness: Vec<StepJson>,
}

#[derive(Debug, Serialize)]
pub struct SatisfyJson {
    pub fuel: usize,
    pub nat_range: u64,
    pub verdicts: Vec<VerdictJson>,
    pub failed_rules: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct FaithfulJson {
    pub max_nodes: usize,
    pub ctx_len: usize,
    pub fuel: usize,
    pub checked: usize,
    pub max_expansions: usize,
    pub max_witness: usize,
    pub failures: Vec<FaithfulFailureJson>,
}

#[derive(Debug, Serialize)]
pub struct FaithfulFailureJson {
    pub ctx: String,
    pub source: String,
    pub rule: String,
    pub position: String,
    pub successor: String,
    pub image: String,
    pub successor_image: String,
    pub expansions: usize,
}
