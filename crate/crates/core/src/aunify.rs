//! A-unification: syntactic unification where equations between abducible
//! constants do not fail but are collected as residual constraints.
//!
//! The transformation rules are tried in a fixed order on the leftmost
//! pending equation: trivial deletion, residual abducible equation, head
//! clash, occurs check, variable elimination, decomposition. Bindings are
//! kept in a map and resolved lazily, so terms are never copied while the
//! rules run; the final substitution is built once at the end.

use std::collections::BTreeMap;

use crate::aset::ASet;
use crate::terms::{LitBuild, Substitution, TermId, TermNode, Var};
use crate::Ctx;

/// A substitution together with the positive A-set of residual equations
/// between abducibles required for the instantiated terms to become equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASubstitution {
    pub subst: Substitution,
    pub residual: ASet,
}

impl ASubstitution {
    pub fn identity() -> Self {
        ASubstitution {
            subst: Substitution::new(),
            residual: ASet::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnifyError {
    /// Distinct non-abducible head symbols.
    Clash,
    /// A variable occurs properly inside its own binding.
    OccursCheck,
}

impl std::fmt::Display for UnifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UnifyError::Clash => write!(f, "head symbol clash"),
            UnifyError::OccursCheck => write!(f, "occurs check failure"),
        }
    }
}

impl std::error::Error for UnifyError {}

/// Chases variable bindings at the top of a term.
fn walk(bindings: &BTreeMap<Var, TermId>, bank: &crate::terms::TermBank, t: TermId) -> TermId {
    let mut cur = t;
    while let TermNode::Var(v) = bank.node(cur) {
        match bindings.get(v) {
            Some(&next) => cur = next,
            None => break,
        }
    }
    cur
}

/// Occurs check through the binding map.
fn occurs(
    bindings: &BTreeMap<Var, TermId>,
    bank: &crate::terms::TermBank,
    v: Var,
    t: TermId,
) -> bool {
    let t = walk(bindings, bank, t);
    match bank.node(t).clone() {
        TermNode::Var(w) => w == v,
        TermNode::App(_, args) => args.iter().any(|&a| occurs(bindings, bank, v, a)),
    }
}

/// Most general A-unifier of `t` and `s`, unique up to equivalence; the
/// deterministic representative binds the leftmost variable first.
pub fn unify(ctx: &mut Ctx, t: TermId, s: TermId) -> Result<ASubstitution, UnifyError> {
    unify_all(ctx, &[(t, s)])
}

/// Simultaneous A-unification of several equations.
pub fn unify_all(ctx: &mut Ctx, pairs: &[(TermId, TermId)]) -> Result<ASubstitution, UnifyError> {
    let mut bindings: BTreeMap<Var, TermId> = BTreeMap::new();
    let mut residual = ASet::new();
    let mut work: Vec<(TermId, TermId)> = pairs.to_vec();
    work.reverse(); // treat as a stack whose top is the leftmost equation

    // every rule strictly decreases (variables, total size); the fuel
    // bound asserts that termination measure
    let mut fuel: u64 = 1_000
        + pairs
            .iter()
            .map(|&(a, b)| (ctx.bank.size(a) + ctx.bank.size(b)) as u64)
            .sum::<u64>()
            * 64;
    while let Some((l, r)) = work.pop() {
        fuel -= 1;
        assert!(fuel > 0, "unification failed to terminate");
        let l = walk(&bindings, &ctx.bank, l);
        let r = walk(&bindings, &ctx.bank, r);
        // (T) trivial
        if l == r {
            continue;
        }
        match (ctx.bank.node(l).clone(), ctx.bank.node(r).clone()) {
            // (E) residual equation between distinct abducibles
            (TermNode::App(f, _), TermNode::App(g, _))
                if ctx.sig.is_abducible(f) && ctx.sig.is_abducible(g) =>
            {
                let tf = ctx.bank.constant(&ctx.sig, f);
                let tg = ctx.bank.constant(&ctx.sig, g);
                if let Ok(LitBuild::Lit(lit)) = ctx.literal(tf, tg, true) {
                    residual
                        .add(ctx, &lit)
                        .expect("abducible equation is admissible");
                }
            }
            // (C) clash, (D) decomposition
            (TermNode::App(f, fargs), TermNode::App(g, gargs)) => {
                if f != g {
                    return Err(UnifyError::Clash);
                }
                for (&a, &b) in fargs.iter().zip(gargs.iter()).rev() {
                    work.push((a, b));
                }
            }
            // (O)/(R) variable cases
            (TermNode::Var(v), _) => {
                if occurs(&bindings, &ctx.bank, v, r) {
                    return Err(UnifyError::OccursCheck);
                }
                bindings.insert(v, r);
            }
            (_, TermNode::Var(v)) => {
                if occurs(&bindings, &ctx.bank, v, l) {
                    return Err(UnifyError::OccursCheck);
                }
                bindings.insert(v, l);
            }
        }
    }

    // resolve the lazy bindings into a fully applied substitution
    let mut subst = Substitution::new();
    let vars: Vec<Var> = bindings.keys().copied().collect();
    for v in vars {
        let t = ctx.bank.var(v);
        let resolved = resolve(&bindings, ctx, t);
        if resolved != t {
            subst.bind(v, resolved);
        }
    }
    Ok(ASubstitution { subst, residual })
}

fn resolve(bindings: &BTreeMap<Var, TermId>, ctx: &mut Ctx, t: TermId) -> TermId {
    let t = walk(bindings, &ctx.bank, t);
    match ctx.bank.node(t).clone() {
        TermNode::Var(_) => t,
        TermNode::App(f, args) => {
            let new_args: Vec<TermId> = args.iter().map(|&a| resolve(bindings, ctx, a)).collect();
            if new_args == args {
                t
            } else {
                ctx.bank
                    .app(&ctx.sig, f, new_args)
                    .expect("resolution preserves well-formedness")
            }
        }
    }
}

/// The generality preorder on A-substitutions: `lhs` is more general than
/// `rhs` when `lhs.residual` is contained in `rhs.residual` and some
/// substitution carries every binding of `lhs` onto the corresponding
/// binding of `rhs`, up to reduction by `rhs.residual`.
pub fn more_general(ctx: &mut Ctx, lhs: &ASubstitution, rhs: &ASubstitution) -> bool {
    // residual inclusion: every equation of lhs.residual holds in rhs.residual
    for (a, r) in lhs.residual.oriented_eqs().collect::<Vec<_>>() {
        if !rhs.residual.same_class(a, r) {
            return false;
        }
    }
    // find a witness by matching x·lhs against x·rhs modulo reduction
    let mut witness: BTreeMap<Var, TermId> = BTreeMap::new();
    let mut domains: Vec<Var> = lhs.subst.domain().chain(rhs.subst.domain()).collect();
    domains.sort();
    domains.dedup();
    for v in domains {
        let tv = ctx.bank.var(v);
        let pattern = ctx.bank.apply(tv, &lhs.subst);
        let target0 = ctx.bank.apply(tv, &rhs.subst);
        let target = rhs.residual.reduce_term(ctx, target0);
        if !match_modulo(ctx, &rhs.residual, pattern, target, &mut witness) {
            return false;
        }
    }
    true
}

/// Matching modulo an A-set: pattern variables bind to the (reduced)
/// target subterms; abducibles match when they share a class.
fn match_modulo(
    ctx: &mut Ctx,
    modulo: &ASet,
    pattern: TermId,
    target: TermId,
    witness: &mut BTreeMap<Var, TermId>,
) -> bool {
    match ctx.bank.node(pattern).clone() {
        TermNode::Var(v) => match witness.get(&v) {
            Some(&bound) => {
                let reduced = modulo.reduce_term(ctx, bound);
                reduced == target
            }
            None => {
                witness.insert(v, target);
                true
            }
        },
        TermNode::App(f, fargs) => {
            let reduced_pat_head = if ctx.sig.is_abducible(f) {
                modulo.rep(f)
            } else {
                f
            };
            match ctx.bank.node(target).clone() {
                TermNode::App(g, gargs) if reduced_pat_head == g => fargs
                    .iter()
                    .zip(gargs.iter())
                    .all(|(&a, &b)| match_modulo(ctx, modulo, a, b, witness)),
                _ => false,
            }
        }
    }
}
