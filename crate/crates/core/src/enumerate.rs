//! Exhaustive enumeration of small well-sorted terms, used as the oracle
//! behind the law and faithfulness suites.

use std::collections::HashMap;
use std::rc::Rc;

use crate::sort::{cartesian, compositions, Sort, SortSignature};
use crate::term::{Arity, ConTerm, Context, Term, TermSignature};

/// Sorts with at most this many nodes are used for sort parameters that the
/// expected sort leaves undetermined (e.g. the argument sort of `app`)...
pub const DEFAULT_SORT_NODES: usize = 3;

/// ...unless that gives more than this many sorts, in which case the node
/// bound is lowered (to at least 1).
pub const DEFAULT_UNIVERSE_CAP: usize = 16;

pub fn default_universe(sorts: &SortSignature) -> Vec<Sort> {
    let mut best = sorts.sorts_up_to(1);
    for nodes in 2..=DEFAULT_SORT_NODES {
        let u = sorts.sorts_up_to(nodes);
        if u.len() > DEFAULT_UNIVERSE_CAP {
            break;
        }
        best = u;
    }
    best
}

/// One way to build a term of a given sort: an arity with all its sort
/// parameters chosen, and the sorts and binders its arguments then need.
struct Candidate<'a> {
    arity: &'a Arity,
    params: Vec<Sort>,
    child_sorts: Vec<Sort>,
    binders: Vec<Vec<Sort>>,
}

/// Memoizing enumerator over one signature.
///
/// Sort parameters fixed by the requested sort are taken from it; the
/// remaining ones range over `universe`, which keeps enumeration finite for
/// signatures with polymorphic constants.
pub struct Enumerator<'a> {
    sig: &'a TermSignature,
    universe: Vec<Sort>,
    memo: HashMap<(Context, Sort, usize), Rc<Vec<Term>>>,
    candidates: HashMap<(Sort, usize), Rc<Vec<Candidate<'a>>>>,
    nat_limit: Option<u64>,
}

impl<'a> Enumerator<'a> {
    pub fn new(sig: &'a TermSignature) -> Self {
        Enumerator::with_universe(sig, default_universe(&sig.sorts))
    }

    pub fn with_universe(sig: &'a TermSignature, universe: Vec<Sort>) -> Self {
        Enumerator {
            sig,
            universe,
            memo: HashMap::new(),
            candidates: HashMap::new(),
            nat_limit: None,
        }
    }

    /// Caps the natural-number parameter independently of the node budget.
    pub fn with_nat_limit(mut self, limit: u64) -> Self {
        self.nat_limit = Some(limit);
        self
    }

    pub fn universe(&self) -> &[Sort] {
        &self.universe
    }

    /// All terms of `sort` in `ctx` with at most `max_nodes` nodes, smallest
    /// first. Natural-number parameters range over `0..=max_nodes`.
    pub fn terms(&mut self, ctx: &Context, sort: &Sort, max_nodes: usize) -> Vec<Term> {
        let nat_max = self.nat_limit.unwrap_or(max_nodes as u64);
        let mut out = Vec::new();
        for size in 1..=max_nodes {
            out.extend(self.exact(ctx, sort, size, nat_max).iter().cloned());
        }
        out
    }

    /// Constants of `sort`.
    fn leaves(&self, sort: &Sort, nat_max: u64, out: &mut Vec<Term>) {
        for arity in self.sig.arities().filter(|a| a.args.is_empty()) {
            let mut assignment = vec![None; arity.degree];
            if !arity.out.match_sort(sort, &mut assignment) {
                continue;
            }
            let free: Vec<usize> = (0..arity.degree)
                .filter(|&i| assignment[i].is_none())
                .collect();
            let pools: Vec<&Vec<Sort>> = free.iter().map(|_| &self.universe).collect();
            for choice in cartesian(&pools) {
                let mut params = assignment.clone();
                for (slot, s) in free.iter().zip(choice) {
                    params[*slot] = Some(s);
                }
                let params: Vec<Sort> = params.into_iter().map(Option::unwrap).collect();
                let nats: Vec<Option<u64>> = if arity.nat_param {
                    (0..=nat_max).map(Some).collect()
                } else {
                    vec![None]
                };
                for nat in nats {
                    out.push(Term::Con(ConTerm {
                        arity: arity.name.clone(),
                        nat,
                        sorts: params.clone(),
                        children: Vec::new(),
                    }));
                }
            }
        }
    }

    /// Ways to build a term of `sort` from an arity with between one and
    /// `max_args` arguments.
    fn candidates(&mut self, sort: &Sort, max_args: usize) -> Rc<Vec<Candidate<'a>>> {
        let key = (sort.clone(), max_args);
        if let Some(hit) = self.candidates.get(&key) {
            return hit.clone();
        }
        let sig = self.sig;
        let mut out = Vec::new();
        for arity in sig
            .arities()
            .filter(|a| !a.args.is_empty() && a.args.len() <= max_args)
        {
            let mut assignment = vec![None; arity.degree];
            if !arity.out.match_sort(sort, &mut assignment) {
                continue;
            }
            let free: Vec<usize> = (0..arity.degree)
                .filter(|&i| assignment[i].is_none())
                .collect();
            let pools: Vec<&Vec<Sort>> = free.iter().map(|_| &self.universe).collect();
            for choice in cartesian(&pools) {
                let mut params = assignment.clone();
                for (slot, s) in free.iter().zip(choice) {
                    params[*slot] = Some(s);
                }
                let params: Vec<Sort> = params.into_iter().map(Option::unwrap).collect();
                let n = arity.args.len();
                out.push(Candidate {
                    arity,
                    child_sorts: (0..n).map(|i| arity.arg_sort(i, &params)).collect(),
                    binders: (0..n).map(|i| arity.binder_sorts(i, &params)).collect(),
                    params,
                });
            }
        }
        let out = Rc::new(out);
        self.candidates.insert(key, out.clone());
        out
    }

    fn exact(&mut self, ctx: &Context, sort: &Sort, size: usize, nat_max: u64) -> Rc<Vec<Term>> {
        let key = (ctx.clone(), sort.clone(), size);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            for (i, s) in ctx.iter_innermost().enumerate() {
                if s == sort {
                    out.push(Term::Var(i));
                }
            }
            self.leaves(sort, nat_max, &mut out);
            let out = Rc::new(out);
            self.memo.insert(key, out.clone());
            return out;
        }
        let widest = self.sig.arities().map(|a| a.args.len()).max().unwrap_or(0);
        for cand in self.candidates(sort, widest.min(size - 1)).iter() {
            let arity = cand.arity;
            let n_args = arity.args.len();
            let nats: Vec<Option<u64>> = if arity.nat_param {
                (0..=nat_max).map(Some).collect()
            } else {
                vec![None]
            };
            let child_ctxs: Vec<Context> = cand.binders.iter().map(|b| ctx.extended(b)).collect();
            for split in compositions(size - 1, n_args) {
                let mut pools: Vec<Rc<Vec<Term>>> = Vec::with_capacity(n_args);
                for i in 0..n_args {
                    let pool = self.exact(&child_ctxs[i], &cand.child_sorts[i], split[i], nat_max);
                    if pool.is_empty() {
                        break;
                    }
                    pools.push(pool);
                }
                if pools.len() < n_args {
                    continue;
                }
                let refs: Vec<&Vec<Term>> = pools.iter().map(|p| p.as_ref()).collect();
                for children in cartesian(&refs) {
                    for nat in &nats {
                        out.push(Term::Con(ConTerm {
                            arity: arity.name.clone(),
                            nat: *nat,
                            sorts: cand.params.clone(),
                            children: children.clone(),
                        }));
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    /// Terms of every universe sort, paired with their sort.
    pub fn terms_of_all_sorts(&mut self, ctx: &Context, max_nodes: usize) -> Vec<(Sort, Term)> {
        let universe = self.universe.clone();
        universe
            .into_iter()
            .flat_map(|s| {
                self.terms(ctx, &s, max_nodes)
                    .into_iter()
                    .map(move |t| (s.clone(), t))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// Contexts of length at most `max_len` over the given sorts, shortest
    /// first.
    pub fn contexts(sorts: &[Sort], max_len: usize) -> Vec<Context> {
        let mut out = vec![Context::empty()];
        let mut layer = vec![Context::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for ctx in &layer {
                for s in sorts {
                    next.push(ctx.extended(std::slice::from_ref(s)));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// Contexts of at most `max_len` entries, each a one-node sort. The suites
/// quantify over these; sort parameters inside terms still range over the
/// full universe.
pub fn small_contexts(sorts: &SortSignature, max_len: usize) -> Vec<Context> {
    Enumerator::contexts(&sorts.sorts_up_to(1), max_len)
}

/// All terms of `sort` in `ctx` with at most `max_nodes` nodes, using the
/// default sort universe.
pub fn enumerate_terms(
    sig: &TermSignature,
    ctx: &Context,
    sort: &Sort,
    max_nodes: usize,
) -> Vec<Term> {
    Enumerator::new(sig).terms(ctx, sort, max_nodes)
}
