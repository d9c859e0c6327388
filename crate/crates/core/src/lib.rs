//! Syntax and reduction semantics generated from 2-signatures.
//!
//! A signature declares sorts, binding term constructors and rewrite rules.
//! From it this crate builds well-sorted de Bruijn terms with substitution,
//! the reduction relation, and translations into other signatures defined
//! by folding a representation.

pub mod enumerate;
pub mod laws;
pub mod rewrite;
pub mod sort;
pub mod stdlib;
pub mod syntax;
pub mod template;
pub mod term;
pub mod translate;

pub use enumerate::{enumerate_terms, Enumerator};
pub use rewrite::{
    check_subject_reduction, match_rule, normalize, reduces_to, successors, Assignment,
    Normalization, Reachability, RewriteRule, RuleError, RuleSet, SortChange, Step,
    SubjectReductionReport,
};
pub use sort::{
    fold_sorts, instantiate_sort_expr, Name, Sort, SortError, SortExpr, SortSignature,
    SortTranslation,
};
pub use template::{MetaDecl, NatExpr, Template, TemplateError};
pub use term::{
    bind, rename, shift, sort_of, subst1, weaken, ArgSpec, Arity, ConTerm, Context, Position,
    Renaming, SignatureError, Substitution, Term, TermError, TermSignature,
};
