//! Inference rules over constrained clauses, plus the tautology and
//! subsumption checks that implement the safe fragment of the redundancy
//! criterion.
//!
//! Each rule returns every conclusion derivable from the given premises;
//! inapplicable rules return nothing. Ordering guards use the sound
//! under-approximation from the ordering module, so a guard may fail to
//! block an inference that the exact relation would block, but never
//! blocks a required one.

use crate::aset::ASet;
use crate::aunify::{unify, ASubstitution};
use crate::terms::{Clause, LitBuild, Literal, Substitution, SymbolId, TermId, Var};
use crate::Ctx;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleTag {
    Input,
    Superposition,
    Reflection,
    Factorization,
    Assertion,
    Substitutivity,
}

impl RuleTag {
    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Input => "input",
            RuleTag::Superposition => "sup",
            RuleTag::Reflection => "ref",
            RuleTag::Factorization => "fact",
            RuleTag::Assertion => "assert",
            RuleTag::Substitutivity => "subst",
        }
    }
}

/// A stored, identified constrained clause.
#[derive(Debug, Clone)]
pub struct AClause {
    pub id: u32,
    pub clause: Clause,
    pub constraint: ASet,
    pub rule: RuleTag,
    pub parents: Vec<u32>,
}

/// A conclusion that has not been admitted (and numbered) yet.
#[derive(Debug, Clone)]
pub struct Derived {
    pub clause: Clause,
    pub constraint: ASet,
    pub rule: RuleTag,
    pub parents: Vec<u32>,
}

impl AClause {
    pub fn weight(&self, ctx: &Ctx) -> u32 {
        self.clause.weight(&ctx.bank) + self.constraint.weight(ctx)
    }

    pub fn vars(&self, ctx: &Ctx) -> Vec<Var> {
        let mut vs = self.clause.vars(&ctx.bank);
        vs.extend(self.constraint.vars(ctx));
        vs.sort();
        vs.dedup();
        vs
    }
}

/// Renames every variable of the clause and constraint to a fresh one,
/// advancing the counter. Saturation renames each clause on activation.
pub fn rename_apart(ctx: &mut Ctx, c: &AClause, next_var: &mut u32) -> AClause {
    let vars = c.vars(ctx);
    let mut map = Substitution::new();
    for v in vars {
        let fresh = ctx.bank.var(Var(*next_var));
        *next_var += 1;
        map.bind(v, fresh);
    }
    AClause {
        id: c.id,
        clause: apply_clause(ctx, &c.clause, &map).expect("renaming cannot collapse literals"),
        constraint: c.constraint.rename(ctx, &map),
        rule: c.rule,
        parents: c.parents.clone(),
    }
}

/// Literal-wise instance of a clause; `None` when a `true = true` literal
/// appears (the instance is a tautology).
pub fn apply_clause(ctx: &mut Ctx, c: &Clause, subst: &Substitution) -> Option<Clause> {
    let mut parts = Vec::with_capacity(c.len());
    for l in c.iter() {
        let lhs = ctx.bank.apply(l.lhs, subst);
        let rhs = ctx.bank.apply(l.rhs, subst);
        match ctx.literal(lhs, rhs, l.positive) {
            Ok(b) => parts.push(b),
            Err(_) => return None,
        }
    }
    ctx.clause(parts)
}

fn clause_without(c: &Clause, index: usize) -> Vec<Literal> {
    c.literals()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .map(|(_, l)| *l)
        .collect()
}

/// Both orientations of a literal, skipping the degenerate second one.
fn orientations(l: &Literal) -> Vec<(TermId, TermId)> {
    if l.lhs == l.rhs {
        vec![(l.lhs, l.rhs)]
    } else {
        vec![(l.lhs, l.rhs), (l.rhs, l.lhs)]
    }
}

/// Substitution purity with respect to the variables of the given sets.
fn pure_for(ctx: &Ctx, subst: &Substitution, sets: &[&ASet]) -> bool {
    for set in sets {
        for v in set.vars(ctx) {
            if let Some(t) = subst.get(v) {
                if !ctx.bank.is_flat_side(&ctx.sig, t) {
                    return false;
                }
            }
        }
    }
    true
}

fn selected(ctx: &Ctx, clause: &Clause) -> Vec<Literal> {
    ctx.ord.select(&ctx.sig, &ctx.bank, clause)
}

/// By selection stability, a literal unselected in the premise stays
/// unselected in every instance, so the instance-level guard can only
/// succeed for literals selected here.
fn into_lit_may_act(sel: &[Literal], lit: &Literal) -> bool {
    sel.contains(lit)
}

fn literal_of(ctx: &Ctx, lhs: TermId, rhs: TermId, positive: bool) -> Option<LitBuild> {
    ctx.literal(lhs, rhs, positive).ok()
}

/// A-Superposition from `from` (premise with the positive equation) into
/// `into`, at every position of every literal. The premises must have
/// disjoint variables. With `block_flat`, inferences whose acting literal
/// on either side is A-flat are skipped (the restricted calculus).
pub fn a_superposition(
    ctx: &mut Ctx,
    into: &AClause,
    from: &AClause,
    block_flat: bool,
) -> Vec<Derived> {
    let mut out = Vec::new();
    let into_lits: Vec<(usize, Literal)> = into
        .clause
        .literals()
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, l)| !(block_flat && l.is_a_flat(&ctx.bank, &ctx.sig)))
        .collect();
    let from_lits: Vec<(usize, Literal)> = from
        .clause
        .literals()
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, l)| l.positive && !(block_flat && l.is_a_flat(&ctx.bank, &ctx.sig)))
        .collect();
    let constraint_vars: Vec<Var> = into.constraint.vars(ctx);
    // selection of the original premises, reused whenever the unifier
    // leaves the clauses unchanged
    let sel_into = selected(ctx, &into.clause);
    let sel_from = selected(ctx, &from.clause);
    // the parent constraints merge the same way for every inference
    let parent_union = into.constraint.union(ctx, &from.constraint);

    for &(ii, into_lit) in &into_lits {
        if !into_lit_may_act(&sel_into, &into_lit) {
            continue;
        }
        for (t, s) in orientations(&into_lit) {
            if ctx.bank.is_true(&ctx.sig, t) {
                continue;
            }
            for pos in ctx.bank.positions(t) {
                let tp = match ctx.bank.subterm_at(t, &pos) {
                    Ok(tp) => tp,
                    Err(_) => continue,
                };
                // superposition into a variable only when it occurs in the
                // constraint of the into premise
                if let Some(v) = ctx.bank.as_var(tp) {
                    if !constraint_vars.contains(&v) {
                        continue;
                    }
                }
                for &(fi, from_lit) in &from_lits {
                    if !sel_from.contains(&from_lit) {
                        continue;
                    }
                    for (u, v) in orientations(&from_lit) {
                        if ctx.bank.is_true(&ctx.sig, u) {
                            continue;
                        }
                        // heads must agree up to abducible renaming
                        if let (Some(hu), Some(hp)) = (ctx.bank.head(u), ctx.bank.head(tp)) {
                            if hu != hp && !(ctx.sig.is_abducible(hu) && ctx.sig.is_abducible(hp)) {
                                continue;
                            }
                        }
                        let ASubstitution { subst, residual } = match unify(ctx, u, tp) {
                            Ok(r) => r,
                            Err(_) => continue,
                        };
                        if !pure_for(ctx, &subst, &[&into.constraint, &from.constraint]) {
                            continue;
                        }
                        let us = ctx.bank.apply(u, &subst);
                        let vs = ctx.bank.apply(v, &subst);
                        let ts = ctx.bank.apply(t, &subst);
                        let ss = ctx.bank.apply(s, &subst);
                        if ctx.ord.geq_a(&ctx.sig, &ctx.bank, vs, us)
                            || ctx.ord.geq_a(&ctx.sig, &ctx.bank, ss, ts)
                        {
                            continue;
                        }
                        // selection guards on the instances; the original
                        // selection was checked above, which is exact when
                        // the unifier does not touch the premises
                        if !subst.is_empty() {
                            let into_inst = match apply_clause(ctx, &into.clause, &subst) {
                                Some(c) => c,
                                None => continue,
                            };
                            let from_inst = match apply_clause(ctx, &from.clause, &subst) {
                                Some(c) => c,
                                None => continue,
                            };
                            let into_lit_inst = match literal_of(ctx, ts, ss, into_lit.positive) {
                                Some(LitBuild::Lit(l)) => l,
                                _ => continue,
                            };
                            let from_lit_inst = match literal_of(ctx, us, vs, true) {
                                Some(LitBuild::Lit(l)) => l,
                                _ => continue,
                            };
                            if !selected(ctx, &into_inst).contains(&into_lit_inst)
                                || !selected(ctx, &from_inst).contains(&from_lit_inst)
                            {
                                continue;
                            }
                        }
                        // conclusion clause
                        let replaced = match ctx.bank.replace_at(t, &pos, v) {
                            Ok(r) => r,
                            Err(_) => continue,
                        };
                        let new_lhs = ctx.bank.apply(replaced, &subst);
                        let mut parts = Vec::new();
                        match literal_of(ctx, new_lhs, ss, into_lit.positive) {
                            Some(b) => parts.push(b),
                            None => continue,
                        }
                        let mut ok = true;
                        let rest = clause_without(&into.clause, ii)
                            .into_iter()
                            .chain(clause_without(&from.clause, fi));
                        if subst.is_empty() {
                            parts.extend(rest.map(LitBuild::Lit));
                        } else {
                            for l in rest {
                                let lhs = ctx.bank.apply(l.lhs, &subst);
                                let rhs = ctx.bank.apply(l.rhs, &subst);
                                match literal_of(ctx, lhs, rhs, l.positive) {
                                    Some(b) => parts.push(b),
                                    None => {
                                        ok = false;
                                        break;
                                    }
                                }
                            }
                        }
                        if !ok {
                            continue;
                        }
                        let clause = match ctx.clause(parts) {
                            Some(c) => c,
                            None => continue, // true = true conclusion: tautology
                        };
                        let merged = parent_union.union(ctx, &residual);
                        let constraint = match merged.apply_subst(ctx, &subst) {
                            Ok(x) => x,
                            Err(_) => continue,
                        };
                        out.push(Derived {
                            clause,
                            constraint,
                            rule: RuleTag::Superposition,
                            parents: vec![from.id, into.id],
                        });
                    }
                }
            }
        }
    }
    out
}

/// A-Reflection: removes a selected disequation whose sides A-unify,
/// adding the residual equations to the constraint.
pub fn a_reflection(ctx: &mut Ctx, c: &AClause) -> Vec<Derived> {
    let mut out = Vec::new();
    let sel = selected(ctx, &c.clause);
    for (i, lit) in c.clause.literals().iter().copied().enumerate() {
        if lit.positive || !sel.contains(&lit) {
            continue;
        }
        let ASubstitution { subst, residual } = match unify(ctx, lit.lhs, lit.rhs) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if !pure_for(ctx, &subst, &[&c.constraint]) {
            continue;
        }
        if !subst.is_empty() {
            let inst = match apply_clause(ctx, &c.clause, &subst) {
                Some(cl) => cl,
                None => continue,
            };
            let ls = ctx.bank.apply(lit.lhs, &subst);
            let rs = ctx.bank.apply(lit.rhs, &subst);
            let lit_inst = match literal_of(ctx, ls, rs, false) {
                Some(LitBuild::Lit(l)) => l,
                _ => continue,
            };
            if !selected(ctx, &inst).contains(&lit_inst) {
                continue;
            }
        }
        let rest = clause_without(&c.clause, i);
        let clause = match apply_clause(ctx, &Clause::new(rest), &subst) {
            Some(cl) => cl,
            None => continue,
        };
        let merged = c.constraint.union(ctx, &residual);
        let constraint = match merged.apply_subst(ctx, &subst) {
            Ok(x) => x,
            Err(_) => continue,
        };
        out.push(Derived {
            clause,
            constraint,
            rule: RuleTag::Reflection,
            parents: vec![c.id],
        });
    }
    out
}

/// Equational A-Factorization on ordered pairs of positive literals.
/// With `block_flat`, pairs whose acted-on literal is A-flat are skipped.
pub fn eq_a_factorization(ctx: &mut Ctx, c: &AClause, block_flat: bool) -> Vec<Derived> {
    let mut out = Vec::new();
    let lits: Vec<(usize, Literal)> = c
        .clause
        .literals()
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, l)| l.positive)
        .collect();
    let sel = selected(ctx, &c.clause);
    for &(i, li) in &lits {
        if block_flat && li.is_a_flat(&ctx.bank, &ctx.sig) {
            continue;
        }
        if !sel.contains(&li) {
            continue;
        }
        for &(j, lj) in &lits {
            if i == j {
                continue;
            }
            for (t, s) in orientations(&li) {
                for (u, v) in orientations(&lj) {
                    if ctx.bank.is_true(&ctx.sig, t) || ctx.bank.is_true(&ctx.sig, u) {
                        continue;
                    }
                    let ASubstitution { subst, residual } = match unify(ctx, t, u) {
                        Ok(r) => r,
                        Err(_) => continue,
                    };
                    if !pure_for(ctx, &subst, &[&c.constraint]) {
                        continue;
                    }
                    let ts = ctx.bank.apply(t, &subst);
                    let ss = ctx.bank.apply(s, &subst);
                    let us = ctx.bank.apply(u, &subst);
                    let vs = ctx.bank.apply(v, &subst);
                    if ctx.ord.geq_a(&ctx.sig, &ctx.bank, ss, ts)
                        || ctx.ord.geq_a(&ctx.sig, &ctx.bank, vs, us)
                    {
                        continue;
                    }
                    if !subst.is_empty() {
                        let inst = match apply_clause(ctx, &c.clause, &subst) {
                            Some(cl) => cl,
                            None => continue,
                        };
                        let main_inst = match literal_of(ctx, ts, ss, true) {
                            Some(LitBuild::Lit(l)) => l,
                            _ => continue,
                        };
                        if !selected(ctx, &inst).contains(&main_inst) {
                            continue;
                        }
                    }
                    let mut parts = Vec::new();
                    // s != v is omitted when the instances coincide
                    if ss != vs {
                        match literal_of(ctx, ss, vs, false) {
                            Some(b) => parts.push(b),
                            None => continue,
                        }
                    }
                    match literal_of(ctx, ts, ss, true) {
                        Some(b) => parts.push(b),
                        None => continue,
                    }
                    let mut ok = true;
                    for l in c
                        .clause
                        .literals()
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i && *k != j)
                        .map(|(_, l)| *l)
                    {
                        let lhs = ctx.bank.apply(l.lhs, &subst);
                        let rhs = ctx.bank.apply(l.rhs, &subst);
                        match literal_of(ctx, lhs, rhs, l.positive) {
                            Some(b) => parts.push(b),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let clause = match ctx.clause(parts) {
                        Some(cl) => cl,
                        None => continue,
                    };
                    let merged = c.constraint.union(ctx, &residual);
                    let constraint = match merged.apply_subst(ctx, &subst) {
                        Ok(x) => x,
                        Err(_) => continue,
                    };
                    out.push(Derived {
                        clause,
                        constraint,
                        rule: RuleTag::Factorization,
                        parents: vec![c.id],
                    });
                }
            }
        }
    }
    out
}

/// A-Assertion: moves a selected A-flat literal, complemented, into the
/// constraint. Applies to positive equations between variables and
/// abducibles and to flat predicate atoms of either polarity.
pub fn a_assertion(ctx: &mut Ctx, c: &AClause) -> Vec<Derived> {
    if ctx.abducibles().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let sel = selected(ctx, &c.clause);
    for (i, lit) in c.clause.literals().iter().copied().enumerate() {
        if !sel.contains(&lit) {
            continue;
        }
        let assertable = if lit.is_predicate(&ctx.bank, &ctx.sig) {
            lit.is_a_flat(&ctx.bank, &ctx.sig)
        } else {
            lit.positive && lit.is_elementary(&ctx.bank, &ctx.sig)
        };
        if !assertable {
            continue;
        }
        let mut constraint = c.constraint.clone();
        if constraint.add(ctx, &lit.complement()).is_err() {
            continue;
        }
        out.push(Derived {
            clause: Clause::new(clause_without(&c.clause, i)),
            constraint,
            rule: RuleTag::Assertion,
            parents: vec![c.id],
        });
    }
    out
}

/// The all-reflexivity instance of A-Substitutivity for one predicate and
/// polarity: `[p(x...) ⋈ true | p(x...) ⋈ true]`. Always a tautology, kept
/// for completeness of the rule set; redundancy elimination discards it.
pub fn substitutivity_axiom(
    ctx: &mut Ctx,
    p: SymbolId,
    positive: bool,
    next_var: &mut u32,
) -> Derived {
    let arity = ctx.sig.arity(p);
    let mut args = Vec::with_capacity(arity);
    for _ in 0..arity {
        args.push(ctx.bank.var(Var(*next_var)));
        *next_var += 1;
    }
    let atom = ctx.bank.app(&ctx.sig, p, args).expect("flat atom");
    let tt = ctx.bank.true_term(&ctx.sig);
    let lit = match ctx.literal(atom, tt, positive) {
        Ok(LitBuild::Lit(l)) => l,
        _ => unreachable!("predicate atom literal"),
    };
    let mut constraint = ASet::new();
    constraint.add(ctx, &lit).expect("flat predicate literal");
    Derived {
        clause: Clause::new(vec![lit]),
        constraint,
        rule: RuleTag::Substitutivity,
        parents: Vec::new(),
    }
}

/// A-Substitutivity instances triggered by a clause with a selected
/// positive equation between variables and abducibles: the equation's
/// left side enters one argument position of a predicate atom, the other
/// positions are fresh variables (reflexivity premises), and the mirrored
/// atom goes into the constraint.
pub fn a_substitutivity(ctx: &mut Ctx, c: &AClause, next_var: &mut u32) -> Vec<Derived> {
    let mut out = Vec::new();
    let sel = selected(ctx, &c.clause);
    let preds = ctx.sig.predicates();
    for (i, lit) in c.clause.literals().iter().copied().enumerate() {
        if !lit.positive
            || !sel.contains(&lit)
            || !lit.is_elementary(&ctx.bank, &ctx.sig)
            || lit.is_predicate(&ctx.bank, &ctx.sig)
        {
            continue;
        }
        for &p in &preds {
            let arity = ctx.sig.arity(p);
            if arity == 0 {
                continue;
            }
            for pos in 0..arity {
                for (t, s) in orientations(&lit) {
                    for positive in [true, false] {
                        let mut head_args = Vec::with_capacity(arity);
                        let mut cons_args = Vec::with_capacity(arity);
                        for k in 0..arity {
                            if k == pos {
                                head_args.push(t);
                                cons_args.push(s);
                            } else {
                                let x = ctx.bank.var(Var(*next_var));
                                *next_var += 1;
                                head_args.push(x);
                                cons_args.push(x);
                            }
                        }
                        let head = ctx.bank.app(&ctx.sig, p, head_args).expect("flat atom");
                        let cons = ctx.bank.app(&ctx.sig, p, cons_args).expect("flat atom");
                        let tt = ctx.bank.true_term(&ctx.sig);
                        let head_lit = match ctx.literal(head, tt, positive) {
                            Ok(LitBuild::Lit(l)) => l,
                            _ => continue,
                        };
                        let cons_lit = match ctx.literal(cons, tt, positive) {
                            Ok(LitBuild::Lit(l)) => l,
                            _ => continue,
                        };
                        let mut constraint = c.constraint.clone();
                        if constraint.add(ctx, &cons_lit).is_err() {
                            continue;
                        }
                        let mut lits = clause_without(&c.clause, i);
                        lits.push(head_lit);
                        out.push(Derived {
                            clause: Clause::new(lits),
                            constraint,
                            rule: RuleTag::Substitutivity,
                            parents: vec![c.id],
                        });
                    }
                }
            }
        }
    }
    out
}

/// Sound tautology test, exact for quasi-positive A-flat clauses over a
/// satisfiable constraint: the constraint is unsatisfiable, or the reduced
/// clause contains complementary literals or `t = t`, or some literal of
/// the reduced clause already occurs in the constraint.
pub fn is_tautology(ctx: &mut Ctx, clause: &Clause, constraint: &ASet) -> bool {
    if !constraint.satisfiable(ctx) {
        return true;
    }
    let red = constraint.reduce_clause(ctx, clause);
    for l in red.iter() {
        if l.positive && l.lhs == l.rhs {
            return true;
        }
        if red.contains(&l.complement()) {
            return true;
        }
        if constraint.contains(ctx, l) {
            return true;
        }
    }
    false
}

/// Subsumption: some substitution embeds the general clause into the
/// specific one (multiset inclusion) and carries the general constraint
/// into the specific constraint (membership modulo reduction).
pub fn subsumes(ctx: &mut Ctx, general: &AClause, specific: &AClause) -> bool {
    if general.clause.len() > specific.clause.len() {
        return false;
    }
    // polarity counts are preserved by multiset inclusion
    let count = |c: &Clause, pos: bool| c.iter().filter(|l| l.positive == pos).count();
    if count(&general.clause, true) > count(&specific.clause, true)
        || count(&general.clause, false) > count(&specific.clause, false)
    {
        return false;
    }
    // constraint literals need targets of the right kind
    if (general.constraint.diseqs().next().is_some()
        && specific.constraint.diseqs().next().is_none())
        || (general.constraint.preds().next().is_some()
            && specific.constraint.preds().next().is_none())
    {
        return false;
    }
    // ground equations of the general constraint must hold in the specific
    for (a, r) in general.constraint.oriented_eqs().collect::<Vec<_>>() {
        if !specific.constraint.same_class(a, r) {
            return false;
        }
    }
    let d_lits: Vec<Literal> = general.clause.literals().to_vec();
    let y_lits: Vec<Literal> = general
        .constraint
        .diseqs()
        .cloned()
        .chain(general.constraint.preds().cloned())
        .collect();
    let mut used = vec![false; specific.clause.len()];
    let mut bind = std::collections::BTreeMap::new();
    match_clause_lits(ctx, &d_lits, 0, specific, &mut used, &mut bind, &y_lits)
}

fn match_clause_lits(
    ctx: &mut Ctx,
    d_lits: &[Literal],
    k: usize,
    specific: &AClause,
    used: &mut Vec<bool>,
    bind: &mut std::collections::BTreeMap<Var, TermId>,
    y_lits: &[Literal],
) -> bool {
    if k == d_lits.len() {
        return match_constraint_lits(ctx, y_lits, 0, specific, bind);
    }
    let pat = d_lits[k];
    let targets: Vec<(usize, Literal)> = specific
        .clause
        .literals()
        .iter()
        .copied()
        .enumerate()
        .filter(|(i, l)| !used[*i] && l.positive == pat.positive)
        .collect();
    for (i, target) in targets {
        for (pl, pr) in orientations(&pat) {
            let snapshot = bind.clone();
            if match_term(ctx, pl, target.lhs, bind, None)
                && match_term(ctx, pr, target.rhs, bind, None)
            {
                used[i] = true;
                if match_clause_lits(ctx, d_lits, k + 1, specific, used, bind, y_lits) {
                    return true;
                }
                used[i] = false;
            }
            *bind = snapshot;
        }
    }
    false
}

fn match_constraint_lits(
    ctx: &mut Ctx,
    y_lits: &[Literal],
    k: usize,
    specific: &AClause,
    bind: &mut std::collections::BTreeMap<Var, TermId>,
) -> bool {
    if k == y_lits.len() {
        return true;
    }
    let pat = y_lits[k];
    let targets: Vec<Literal> = if pat.is_predicate(&ctx.bank, &ctx.sig) {
        specific
            .constraint
            .preds()
            .filter(|l| l.positive == pat.positive)
            .cloned()
            .collect()
    } else {
        specific.constraint.diseqs().cloned().collect()
    };
    for target in targets {
        for (pl, pr) in orientations(&pat) {
            let snapshot = bind.clone();
            if match_term(ctx, pl, target.lhs, bind, Some(&specific.constraint))
                && match_term(ctx, pr, target.rhs, bind, Some(&specific.constraint))
                && match_constraint_lits(ctx, y_lits, k + 1, specific, bind)
            {
                return true;
            }
            *bind = snapshot;
        }
    }
    false
}

/// One-sided matching. When `modulo` is given, abducibles are compared
/// through their class representatives, which realizes membership modulo
/// reduction for constraint literals.
fn match_term(
    ctx: &mut Ctx,
    pattern: TermId,
    target: TermId,
    bind: &mut std::collections::BTreeMap<Var, TermId>,
    modulo: Option<&ASet>,
) -> bool {
    let eq_terms = |ctx: &mut Ctx, a: TermId, b: TermId| -> bool {
        match modulo {
            None => a == b,
            Some(x) => x.reduce_term(ctx, a) == x.reduce_term(ctx, b),
        }
    };
    match ctx.bank.node(pattern).clone() {
        crate::terms::TermNode::Var(v) => match bind.get(&v) {
            Some(&b) => eq_terms(ctx, b, target),
            None => {
                bind.insert(v, target);
                true
            }
        },
        crate::terms::TermNode::App(f, fargs) => match ctx.bank.node(target).clone() {
            crate::terms::TermNode::App(g, gargs) => {
                let heads_match = if f == g {
                    true
                } else if let Some(x) = modulo {
                    ctx.sig.is_abducible(f) && ctx.sig.is_abducible(g) && x.rep(f) == x.rep(g)
                } else {
                    false
                };
                heads_match
                    && fargs
                        .iter()
                        .zip(gargs.iter())
                        .all(|(&a, &b)| match_term(ctx, a, b, bind, modulo))
            }
            crate::terms::TermNode::Var(_) => false,
        },
    }
}
