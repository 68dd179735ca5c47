//! Given-clause saturation loop with the full and restricted calculi,
//! compatibility filtering, and resource limits.
//!
//! The restricted mode blocks every inference whose acting literal is
//! A-flat, except assertion and reflection; incoming clauses are
//! normalized by transferring all selected A-flat literals into their
//! constraints before being stored, which is where the restricted
//! calculus gets its exponentially smaller search space from.

use std::io::Write;

use crate::aset::ASet;
use crate::calculus::{
    a_assertion, a_reflection, a_substitutivity, a_superposition, apply_clause, eq_a_factorization,
    is_tautology, rename_apart, substitutivity_axiom, subsumes, AClause, Derived, RuleTag,
};
use crate::implicates::{constraint_negation, entails_ground, extract, Implicate};
use crate::terms::{Clause, Substitution};
use crate::Ctx;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Full calculus.
    Sa,
    /// Inferences upon A-flat literals blocked except assertion and
    /// reflection; A-flat literals migrate to the constraints.
    Sar,
}

/// Restriction on the constraint negations of stored clauses. Every
/// variant denotes a clause class closed under subsumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PFilter {
    None,
    MaxLiterals(usize),
    PositiveOnly,
    NegativeOnly,
    EntailsOneOf(Vec<Clause>),
}

#[derive(Debug, Clone)]
pub struct SaturationConfig {
    pub mode: Mode,
    pub filter: PFilter,
    pub max_clauses: usize,
    pub max_weight: u32,
    pub max_iterations: usize,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig {
            mode: Mode::Sa,
            filter: PFilter::None,
            max_clauses: 100_000,
            max_weight: 60,
            max_iterations: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Saturated,
    LimitReached,
}

#[derive(Debug)]
pub struct SaturationResult {
    /// The persistent set: everything not deleted by subsumption.
    pub clauses: Vec<AClause>,
    pub status: Status,
    pub iterations: usize,
    pub generated: usize,
}

/// Line-delimited event log for the trace flag.
pub struct Trace<'a> {
    out: Option<&'a mut dyn Write>,
}

impl<'a> Trace<'a> {
    pub fn none() -> Self {
        Trace { out: None }
    }

    pub fn to(out: &'a mut dyn Write) -> Self {
        Trace { out: Some(out) }
    }

    fn emit(&mut self, line: &str) {
        if let Some(out) = self.out.as_mut() {
            let _ = writeln!(out, "{line}");
        }
    }

    fn derived(&mut self, id: u32, rule: RuleTag, parents: &[u32]) {
        let event = if rule == RuleTag::Assertion {
            "asserted"
        } else {
            "derived"
        };
        let parents: Vec<String> = parents.iter().map(|p| p.to_string()).collect();
        self.emit(&format!(
            "event={event} id={id} rule={} parents={}",
            rule.name(),
            parents.join(",")
        ));
    }

    fn transferred(&mut self, id: u32) {
        self.emit(&format!("event=asserted id={id} rule=assert parents={id}"));
    }

    fn subsumed(&mut self, id: u32, by: u32) {
        self.emit(&format!(
            "event=subsumed id={id} rule=subsumption parents={by}"
        ));
    }
}

struct State {
    active: Vec<AClause>,
    passive: Vec<AClause>,
    /// Every canonical form ever processed, whatever its verdict;
    /// regenerated conclusions stop at this set.
    seen: std::collections::HashSet<(Clause, ASet)>,
    next_id: u32,
    next_var: u32,
    generated: usize,
    /// Some conclusion was dropped for a resource limit: the result is a
    /// sound under-approximation and is flagged as such.
    limit_hit: bool,
    /// The clause budget is exhausted: stop the main loop.
    abort: bool,
}

impl State {
    fn stored_count(&self) -> usize {
        self.active.len() + self.passive.len()
    }
}

/// Does the constraint negation belong to the filter class?
pub fn filter_admits(ctx: &mut Ctx, filter: &PFilter, constraint: &ASet) -> bool {
    match filter {
        PFilter::None => true,
        PFilter::MaxLiterals(k) => constraint.len() <= *k,
        PFilter::PositiveOnly => {
            constraint.oriented_eqs().next().is_none() && constraint.preds().all(|l| !l.positive)
        }
        PFilter::NegativeOnly => constraint.is_positive(),
        PFilter::EntailsOneOf(targets) => {
            let vars = constraint.vars(ctx);
            let abducibles = ctx.abducibles().to_vec();
            if vars.is_empty() {
                let neg = constraint_negation(ctx, constraint);
                return targets.iter().any(|t| entails_ground(ctx, &neg, t));
            }
            if abducibles.is_empty() {
                return true;
            }
            // every satisfiable instantiation must entail a target
            let mut assignment = vec![0usize; vars.len()];
            loop {
                let mut subst = Substitution::new();
                for (i, &v) in vars.iter().enumerate() {
                    let t = ctx.bank.constant(&ctx.sig, abducibles[assignment[i]]);
                    subst.bind(v, t);
                }
                if let Ok(inst) = constraint.apply_subst(ctx, &subst) {
                    if inst.satisfiable(ctx) {
                        let neg = constraint_negation(ctx, &inst);
                        if !targets.iter().any(|t| entails_ground(ctx, &neg, t)) {
                            return false;
                        }
                    }
                }
                let mut i = 0;
                loop {
                    if i == vars.len() {
                        return true;
                    }
                    assignment[i] += 1;
                    if assignment[i] < abducibles.len() {
                        break;
                    }
                    assignment[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

/// Transfers every selected A-flat literal of the clause into the
/// constraint: assertion for positive equations and predicate literals,
/// reflection for elementary disequations. Returns the normal form.
fn sar_normalize(ctx: &mut Ctx, clause: Clause, constraint: ASet) -> (Clause, ASet, bool) {
    let mut clause = clause;
    let mut constraint = constraint;
    let mut changed = false;
    let have_abducibles = !ctx.abducibles().is_empty();
    'outer: loop {
        let sel = ctx.ord.select(&ctx.sig, &ctx.bank, &clause);
        for (i, lit) in clause.literals().iter().copied().enumerate() {
            if !sel.contains(&lit) || !lit.is_a_flat(&ctx.bank, &ctx.sig) {
                continue;
            }
            let rest = || {
                clause
                    .literals()
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i)
                    .map(|(_, l)| *l)
                    .collect::<Vec<_>>()
            };
            if !lit.positive && lit.is_elementary(&ctx.bank, &ctx.sig) {
                // reflection step: unify the two flat sides
                if let Ok(u) = crate::aunify::unify(ctx, lit.lhs, lit.rhs) {
                    let rest = rest();
                    if let Some(next) = apply_clause(ctx, &Clause::new(rest), &u.subst) {
                        let merged = constraint.union(ctx, &u.residual);
                        if let Ok(next_constraint) = merged.apply_subst(ctx, &u.subst) {
                            clause = next;
                            constraint = next_constraint;
                            changed = true;
                            continue 'outer;
                        }
                    }
                }
                continue;
            }
            let assertable =
                have_abducibles && (lit.is_predicate(&ctx.bank, &ctx.sig) || lit.positive);
            if assertable {
                let mut next_constraint = constraint.clone();
                if next_constraint.add(ctx, &lit.complement()).is_ok() {
                    clause = Clause::new(rest());
                    constraint = next_constraint;
                    changed = true;
                    continue 'outer;
                }
            }
        }
        return (clause, constraint, changed);
    }
}

/// Renames the variables of a clause/constraint pair to 0,1,2,... in
/// order of first occurrence, so that alpha-variants share one canonical
/// form. Stored clauses are renamed apart again on activation.
fn normalize_vars(ctx: &mut Ctx, clause: Clause, constraint: ASet) -> (Clause, ASet) {
    if clause.is_ground(&ctx.bank)
        && constraint
            .diseqs()
            .chain(constraint.preds())
            .all(|l| l.is_ground(&ctx.bank))
    {
        return (clause, constraint);
    }
    let mut order: Vec<crate::terms::Var> = clause.vars(&ctx.bank);
    for v in constraint.vars(ctx) {
        if !order.contains(&v) {
            order.push(v);
        }
    }
    if order.iter().enumerate().all(|(i, v)| v.0 as usize == i) {
        return (clause, constraint);
    }
    let mut map = Substitution::new();
    for (i, v) in order.iter().enumerate() {
        let fresh = ctx.bank.var(crate::terms::Var(i as u32));
        map.bind(*v, fresh);
    }
    // two-step renaming when source and target ranges overlap
    let overlap = order.iter().any(|v| (v.0 as usize) < order.len());
    if overlap {
        let mut shift = Substitution::new();
        for (i, v) in order.iter().enumerate() {
            let tmp = ctx.bank.var(crate::terms::Var(1_000_000 + i as u32));
            shift.bind(*v, tmp);
        }
        let clause = crate::calculus::apply_clause(ctx, &clause, &shift)
            .expect("renaming cannot collapse literals");
        let constraint = constraint.rename(ctx, &shift);
        let mut back = Substitution::new();
        for (i, _) in order.iter().enumerate() {
            let tmp = crate::terms::Var(1_000_000 + i as u32);
            let fresh = ctx.bank.var(crate::terms::Var(i as u32));
            back.bind(tmp, fresh);
        }
        let clause = crate::calculus::apply_clause(ctx, &clause, &back)
            .expect("renaming cannot collapse literals");
        let constraint = constraint.rename(ctx, &back);
        (clause, constraint)
    } else {
        let clause = crate::calculus::apply_clause(ctx, &clause, &map)
            .expect("renaming cannot collapse literals");
        let constraint = constraint.rename(ctx, &map);
        (clause, constraint)
    }
}

/// The admission normal form: in restricted mode all selected A-flat
/// literals transfer to the constraint; the clause part is kept reduced
/// by its own constraint (an equivalent form that folds renaming
/// variants), duplicate literals merge, and variables are renumbered.
fn normal_form(
    ctx: &mut Ctx,
    mode: Mode,
    clause: Clause,
    constraint: ASet,
) -> (Clause, ASet, bool) {
    let (clause, constraint, transferred) = if mode == Mode::Sar {
        sar_normalize(ctx, clause, constraint)
    } else {
        (clause, constraint, false)
    };
    let clause = if constraint.oriented_eqs().next().is_some() {
        constraint.reduce_clause(ctx, &clause)
    } else {
        clause
    };
    let clause = {
        let mut lits = clause.literals().to_vec();
        lits.dedup();
        Clause::new(lits)
    };
    let (clause, constraint) = normalize_vars(ctx, clause, constraint);
    (clause, constraint, transferred)
}

fn process_new(
    ctx: &mut Ctx,
    state: &mut State,
    cfg: &SaturationConfig,
    trace: &mut Trace,
    d: Derived,
) {
    state.generated += 1;
    let (clause, constraint, transferred) = normal_form(ctx, cfg.mode, d.clause, d.constraint);
    // every processed form is remembered, whatever its fate: the rules
    // regenerate the same conclusions over and over, and the verdict
    // (tautology, filter, weight, subsumed-by-a-kept-clause) is stable
    if !state.seen.insert((clause.clone(), constraint.clone())) {
        return;
    }
    let weight = clause.weight(&ctx.bank) + constraint.weight(ctx);
    if weight > cfg.max_weight {
        state.limit_hit = true;
        return;
    }
    if is_tautology(ctx, &clause, &constraint) {
        return;
    }
    if !filter_admits(ctx, &cfg.filter, &constraint) {
        return;
    }
    let candidate = AClause {
        id: state.next_id,
        clause,
        constraint,
        rule: d.rule,
        parents: d.parents,
    };
    for stored in state.active.iter().chain(state.passive.iter()) {
        if subsumes(ctx, stored, &candidate) {
            return;
        }
    }
    if state.stored_count() >= cfg.max_clauses {
        state.limit_hit = true;
        state.abort = true;
        return;
    }
    state.next_id += 1;
    trace.derived(candidate.id, candidate.rule, &candidate.parents);
    if transferred {
        trace.transferred(candidate.id);
    }
    // the clause-shrinking unary rules are applied eagerly, so constrained
    // empty clauses surface as soon as their parent is derived instead of
    // waiting for activation
    let mut eager: Vec<Derived> = Vec::new();
    eager.extend(a_reflection(ctx, &candidate));
    eager.extend(eq_a_factorization(ctx, &candidate, cfg.mode == Mode::Sar));
    if cfg.mode == Mode::Sa {
        eager.extend(a_assertion(ctx, &candidate));
    }
    state.passive.push(candidate);
    for d in eager {
        process_new(ctx, state, cfg, trace, d);
    }
}

/// Picks the next given clause: alternately the oldest and the lightest.
fn pick(state: &mut State, ctx: &Ctx, iteration: usize) -> Option<AClause> {
    if state.passive.is_empty() {
        return None;
    }
    let idx = if iteration.is_multiple_of(2) {
        state
            .passive
            .iter()
            .enumerate()
            .min_by_key(|(_, c)| c.id)
            .map(|(i, _)| i)
            .unwrap_or(0)
    } else {
        state
            .passive
            .iter()
            .enumerate()
            .min_by_key(|(_, c)| (c.weight(ctx), c.id))
            .map(|(i, _)| i)
            .unwrap_or(0)
    };
    Some(state.passive.remove(idx))
}

pub fn saturate(
    ctx: &mut Ctx,
    inputs: &[Clause],
    cfg: &SaturationConfig,
    trace: &mut Trace,
) -> SaturationResult {
    let mut state = State {
        active: Vec::new(),
        passive: Vec::new(),
        seen: std::collections::HashSet::new(),
        next_id: 1,
        next_var: 0,
        generated: 0,
        limit_hit: false,
        abort: false,
    };
    // start variable numbering above anything the inputs use
    for c in inputs {
        for v in c.vars(&ctx.bank) {
            state.next_var = state.next_var.max(v.0 + 1);
        }
    }
    for c in inputs {
        process_new(
            ctx,
            &mut state,
            cfg,
            trace,
            Derived {
                clause: c.clone(),
                constraint: ASet::new(),
                rule: RuleTag::Input,
                parents: Vec::new(),
            },
        );
    }
    // substitutivity axioms for the declared predicates (full mode only);
    // always tautologies, discarded again by the admission checks
    if cfg.mode == Mode::Sa {
        for p in ctx.sig.predicates() {
            for positive in [true, false] {
                let ax = substitutivity_axiom(ctx, p, positive, &mut state.next_var);
                process_new(ctx, &mut state, cfg, trace, ax);
            }
        }
    }

    let block_flat = cfg.mode == Mode::Sar;
    let mut iterations = 0usize;
    while !state.abort {
        if iterations >= cfg.max_iterations {
            if !state.passive.is_empty() {
                state.limit_hit = true;
            }
            break;
        }
        let given = match pick(&mut state, ctx, iterations) {
            Some(g) => g,
            None => break,
        };
        iterations += 1;
        let given = rename_apart(ctx, &given, &mut state.next_var);

        // the given clause may have become subsumed since its admission
        let mut drop_given = None;
        for stored in &state.active {
            if subsumes(ctx, stored, &given) {
                drop_given = Some(stored.id);
                break;
            }
        }
        if let Some(by) = drop_given {
            trace.subsumed(given.id, by);
            continue;
        }

        // backward subsumption: the given removes older stored clauses
        let mut removed = Vec::new();
        let mut kept = Vec::new();
        for stored in std::mem::take(&mut state.active) {
            if subsumes(ctx, &given, &stored) {
                removed.push(stored.id);
            } else {
                kept.push(stored);
            }
        }
        state.active = kept;
        let mut kept = Vec::new();
        for stored in std::mem::take(&mut state.passive) {
            if subsumes(ctx, &given, &stored) {
                removed.push(stored.id);
            } else {
                kept.push(stored);
            }
        }
        state.passive = kept;
        for id in removed {
            trace.subsumed(id, given.id);
        }

        // generate
        let mut conclusions: Vec<Derived> = Vec::new();
        conclusions.extend(a_reflection(ctx, &given));
        conclusions.extend(eq_a_factorization(ctx, &given, block_flat));
        if cfg.mode == Mode::Sa {
            conclusions.extend(a_assertion(ctx, &given));
            conclusions.extend(a_substitutivity(ctx, &given, &mut state.next_var));
        }
        for i in 0..state.active.len() {
            let partner = &state.active[i];
            conclusions.extend(a_superposition(ctx, partner, &given, block_flat));
            let partner = &state.active[i];
            conclusions.extend(a_superposition(ctx, &given, partner, block_flat));
        }
        // self-pairing with a renamed copy
        let copy = rename_apart(ctx, &given, &mut state.next_var);
        conclusions.extend(a_superposition(ctx, &given, &copy, block_flat));

        state.active.push(given);
        for d in conclusions {
            process_new(ctx, &mut state, cfg, trace, d);
        }
    }

    let mut clauses = Vec::new();
    clauses.extend(state.active);
    clauses.extend(state.passive);
    clauses.sort_by_key(|c| c.id);
    SaturationResult {
        clauses,
        status: if state.limit_hit {
            Status::LimitReached
        } else {
            Status::Saturated
        },
        iterations,
        generated: state.generated,
    }
}

/// Text form of a constrained clause, for traces and diagnostics. The
/// constraint renders in its canonical order: oriented equations first
/// (descending representative), then disequations, then predicate
/// literals, each sorted by the reduction ordering.
pub fn render_aclause(ctx: &mut Ctx, c: &AClause) -> String {
    let mut lits: Vec<crate::terms::Literal> = c.clause.literals().to_vec();
    lits.sort_by(|a, b| ctx.ord.total_cmp_literals(&ctx.sig, &ctx.bank, a, b));
    let lits: Vec<String> = lits
        .iter()
        .map(|l| crate::implicates::render_literal(ctx, l))
        .collect();
    let eq_count = c.constraint.oriented_eqs().count();
    let mut members = c.constraint.to_literals(ctx);
    let rest = members.split_off(eq_count);
    let mut diseqs: Vec<_> = rest
        .iter()
        .filter(|l| !l.is_predicate(&ctx.bank, &ctx.sig))
        .copied()
        .collect();
    let mut preds: Vec<_> = rest
        .iter()
        .filter(|l| l.is_predicate(&ctx.bank, &ctx.sig))
        .copied()
        .collect();
    diseqs.sort_by(|a, b| ctx.ord.total_cmp_literals(&ctx.sig, &ctx.bank, a, b));
    preds.sort_by(|a, b| ctx.ord.total_cmp_literals(&ctx.sig, &ctx.bank, a, b));
    members.extend(diseqs);
    members.extend(preds);
    let cons: Vec<String> = members
        .iter()
        .map(|l| crate::implicates::render_literal(ctx, l))
        .collect();
    format!("[{} | {}]", lits.join(" | "), cons.join(", "))
}

/// Saturatedness audit used by tests: every conclusion derivable from the
/// stored set is a tautology or subsumed by a stored clause.
pub fn is_saturated(ctx: &mut Ctx, clauses: &[AClause], mode: Mode) -> bool {
    let block_flat = mode == Mode::Sar;
    let mut next_var = 1_000_000;
    for c in clauses {
        let c = rename_apart(ctx, c, &mut next_var);
        let mut concls = Vec::new();
        concls.extend(a_reflection(ctx, &c));
        concls.extend(eq_a_factorization(ctx, &c, block_flat));
        if mode == Mode::Sa {
            concls.extend(a_assertion(ctx, &c));
            concls.extend(a_substitutivity(ctx, &c, &mut next_var));
        }
        for d in clauses {
            let d = rename_apart(ctx, d, &mut next_var);
            concls.extend(a_superposition(ctx, &c, &d, block_flat));
            concls.extend(a_superposition(ctx, &d, &c, block_flat));
        }
        for concl in concls {
            let (clause, constraint, _) = normal_form(ctx, mode, concl.clause, concl.constraint);
            if is_tautology(ctx, &clause, &constraint) {
                continue;
            }
            let as_aclause = AClause {
                id: u32::MAX,
                clause,
                constraint,
                rule: concl.rule,
                parents: Vec::new(),
            };
            if !clauses.iter().any(|s| subsumes(ctx, s, &as_aclause)) {
                if std::env::var_os("ABSUP_AUDIT_DEBUG").is_some() {
                    eprintln!(
                        "unredundant conclusion: {} from {} and rule {:?}",
                        render_aclause(ctx, &as_aclause),
                        c.id,
                        as_aclause.rule
                    );
                }
                return false;
            }
        }
    }
    true
}

/// The two-stage combination: restricted saturation first, then the full
/// calculus over the extracted clauses, filtered to conclusions whose
/// constraint negations entail one of them. The result is a
/// redundancy-free set equivalent to the implicates of the input.
pub struct PipelineResult {
    pub implicates: Vec<Implicate>,
    pub status: Status,
    pub generated: usize,
}

pub fn combine_pipeline(
    ctx: &mut Ctx,
    inputs: &[Clause],
    base: &SaturationConfig,
    trace: &mut Trace,
) -> PipelineResult {
    let sar_cfg = SaturationConfig {
        mode: Mode::Sar,
        filter: PFilter::None,
        ..base.clone()
    };
    let r1 = saturate(ctx, inputs, &sar_cfg, trace);
    let k1 = extract(ctx, &r1.clauses);
    let k1_clauses: Vec<Clause> = k1.iter().map(|i| i.clause.clone()).collect();
    let sa_cfg = SaturationConfig {
        mode: Mode::Sa,
        filter: PFilter::EntailsOneOf(k1_clauses.clone()),
        ..base.clone()
    };
    let r2 = saturate(ctx, &k1_clauses, &sa_cfg, trace);
    let k2 = extract(ctx, &r2.clauses);
    let status = if r1.status == Status::LimitReached || r2.status == Status::LimitReached {
        Status::LimitReached
    } else {
        Status::Saturated
    };
    PipelineResult {
        implicates: k2,
        status,
        generated: r1.generated + r2.generated,
    }
}
