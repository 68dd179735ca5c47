//! Independent ground semantics used as the test reference: entailment by
//! exhaustive model search over the finite subterm universe, and prime
//! implicate enumeration by candidate generation. Deliberately simple and
//! separate from the saturation path; correctness over speed.

use crate::aset::tuples;
use crate::implicates::{minimize, Implicate};
use crate::terms::{Clause, LitBuild, Literal, TermId, TermNode};
use crate::Ctx;

pub const DEFAULT_UNIVERSE_BOUND: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    NonGround,
    UniverseTooLarge { size: usize, bound: usize },
    TooManyCandidates { count: usize },
}

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleError::NonGround => write!(f, "oracle requires ground clauses"),
            OracleError::UniverseTooLarge { size, bound } => {
                write!(
                    f,
                    "ground subterm universe has {size} terms, bound is {bound}"
                )
            }
            OracleError::TooManyCandidates { count } => {
                write!(f, "candidate clause space too large ({count})")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Congruence-closure state over a fixed universe of ground terms.
#[derive(Clone)]
struct ModelState {
    parent: Vec<usize>,
    diseqs: Vec<(usize, usize)>,
}

struct Universe {
    terms: Vec<TermId>,
    /// Head symbol and argument indexes of each application term, so the
    /// congruence propagation works on integers only.
    apps: Vec<Option<(crate::terms::SymbolId, Vec<usize>)>>,
}

impl Universe {
    fn build(ctx: &Ctx, clauses: &[&Clause]) -> Self {
        let mut terms = Vec::new();
        fn add(ctx: &Ctx, t: TermId, terms: &mut Vec<TermId>) {
            if !terms.contains(&t) {
                terms.push(t);
            }
            if let TermNode::App(_, args) = ctx.bank.node(t) {
                for &a in args.clone().iter() {
                    add(ctx, a, terms);
                }
            }
        }
        for c in clauses {
            for l in c.iter() {
                add(ctx, l.lhs, &mut terms);
                add(ctx, l.rhs, &mut terms);
            }
        }
        let apps = terms
            .iter()
            .map(|&t| match ctx.bank.node(t) {
                TermNode::Var(_) => None,
                TermNode::App(f, args) => Some((
                    *f,
                    args.iter()
                        .map(|a| terms.iter().position(|u| u == a).expect("subterm"))
                        .collect(),
                )),
            })
            .collect();
        Universe { terms, apps }
    }

    fn index(&self, t: TermId) -> usize {
        self.terms
            .iter()
            .position(|&u| u == t)
            .expect("term in universe")
    }

    /// Clause as index pairs plus polarity.
    fn index_clause(&self, c: &Clause) -> Vec<(usize, usize, bool)> {
        c.iter()
            .map(|l| (self.index(l.lhs), self.index(l.rhs), l.positive))
            .collect()
    }
}

impl ModelState {
    fn new(n: usize) -> Self {
        ModelState {
            parent: (0..n).collect(),
            diseqs: Vec::new(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] == i {
            i
        } else {
            let r = self.find(self.parent[i]);
            self.parent[i] = r;
            r
        }
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[ri] = rj;
        }
    }

    /// Function congruence over the universe, to fixpoint.
    fn propagate(&mut self, uni: &Universe) {
        loop {
            let mut changed = false;
            for i in 0..uni.terms.len() {
                for j in (i + 1)..uni.terms.len() {
                    if self.find(i) == self.find(j) {
                        continue;
                    }
                    if let (Some((f, fa)), Some((g, ga))) = (&uni.apps[i], &uni.apps[j]) {
                        if f == g && !fa.is_empty() {
                            let pairs: Vec<(usize, usize)> =
                                fa.iter().copied().zip(ga.iter().copied()).collect();
                            let eq_args =
                                pairs.into_iter().all(|(x, y)| self.find(x) == self.find(y));
                            if eq_args {
                                self.union(i, j);
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn consistent(&mut self) -> bool {
        for k in 0..self.diseqs.len() {
            let (a, b) = self.diseqs[k];
            if self.find(a) == self.find(b) {
                return false;
            }
        }
        true
    }

    fn literal_satisfied(&mut self, a: usize, b: usize, positive: bool) -> bool {
        if positive {
            self.find(a) == self.find(b)
        } else {
            let (ra, rb) = (self.find(a), self.find(b));
            for k in 0..self.diseqs.len() {
                let (x, y) = self.diseqs[k];
                let (rx, ry) = (self.find(x), self.find(y));
                if (rx == ra && ry == rb) || (rx == rb && ry == ra) {
                    return true;
                }
            }
            false
        }
    }
}

/// SAT test over congruences of the finite universe: DPLL-style splitting
/// on clause literals with congruence propagation after every assertion.
fn satisfiable(
    uni: &Universe,
    clauses: &[Vec<(usize, usize, bool)>],
    mut state: ModelState,
) -> bool {
    state.propagate(uni);
    if !state.consistent() {
        return false;
    }
    let open = clauses.iter().find(|c| {
        !c.iter()
            .any(|&(a, b, pos)| state.literal_satisfied(a, b, pos))
    });
    let open = match open {
        None => return true,
        Some(c) => c,
    };
    if open.is_empty() {
        return false;
    }
    for &(a, b, positive) in open.iter() {
        let mut next = state.clone();
        if positive {
            next.union(a, b);
        } else {
            if next.find(a) == next.find(b) {
                continue;
            }
            next.diseqs.push((a, b));
        }
        if satisfiable(uni, clauses, next) {
            return true;
        }
    }
    false
}

fn check_ground(ctx: &Ctx, clauses: &[&Clause]) -> Result<(), OracleError> {
    for c in clauses {
        if !c.is_ground(&ctx.bank) {
            return Err(OracleError::NonGround);
        }
    }
    Ok(())
}

/// `S |= C` for ground clause sets: no congruence of the subterm universe
/// satisfies `S` together with the complement of `C`.
pub fn oracle_entails(
    ctx: &mut Ctx,
    s: &[Clause],
    c: &Clause,
    bound: usize,
) -> Result<bool, OracleError> {
    let mut all: Vec<&Clause> = s.iter().collect();
    all.push(c);
    check_ground(ctx, &all)?;
    let uni = Universe::build(ctx, &all);
    if uni.terms.len() > bound {
        return Err(OracleError::UniverseTooLarge {
            size: uni.terms.len(),
            bound,
        });
    }
    let mut problem: Vec<Vec<(usize, usize, bool)>> =
        s.iter().map(|cl| uni.index_clause(cl)).collect();
    for unit in c.complement() {
        problem.push(vec![(
            uni.index(unit.lhs),
            uni.index(unit.rhs),
            unit.positive,
        )]);
    }
    let state = ModelState::new(uni.terms.len());
    Ok(!satisfiable(&uni, &problem, state))
}

/// All prime implicates of a ground clause set, up to `max_len` literals,
/// by candidate enumeration plus entailment filtering and minimization.
pub fn oracle_implicates(
    ctx: &mut Ctx,
    s: &[Clause],
    max_len: usize,
    bound: usize,
) -> Result<Vec<Implicate>, OracleError> {
    let refs: Vec<&Clause> = s.iter().collect();
    check_ground(ctx, &refs)?;

    // literal pool: equations and disequations over distinct abducibles,
    // plus flat predicate atoms of both polarities
    let abducibles = ctx.sig.abducibles();
    let mut pool: Vec<Literal> = Vec::new();
    for i in 0..abducibles.len() {
        for j in (i + 1)..abducibles.len() {
            let ta = ctx.bank.constant(&ctx.sig, abducibles[i]);
            let tb = ctx.bank.constant(&ctx.sig, abducibles[j]);
            for positive in [true, false] {
                if let Ok(LitBuild::Lit(l)) = ctx.literal(ta, tb, positive) {
                    pool.push(l);
                }
            }
        }
    }
    let tt = ctx.bank.true_term(&ctx.sig);
    for p in ctx.sig.predicates() {
        let arity = ctx.sig.arity(p);
        for combo in tuples(&abducibles, arity) {
            let args: Vec<TermId> = combo
                .iter()
                .map(|&c| ctx.bank.constant(&ctx.sig, c))
                .collect();
            let atom = ctx.bank.app(&ctx.sig, p, args).expect("flat atom");
            for positive in [true, false] {
                if let Ok(LitBuild::Lit(l)) = ctx.literal(atom, tt, positive) {
                    pool.push(l);
                }
            }
        }
    }

    let mut count: usize = 1;
    let mut binom: usize = 1;
    for k in 1..=max_len.min(pool.len()) {
        binom = binom.saturating_mul(pool.len() - k + 1) / k;
        count = count.saturating_add(binom);
    }
    if count > 500_000 {
        return Err(OracleError::TooManyCandidates { count });
    }

    // one universe covering the inputs and every pool literal serves all
    // candidate checks
    let mut all: Vec<&Clause> = refs.clone();
    let pool_clause = Clause::new(pool.clone());
    all.push(&pool_clause);
    let uni = Universe::build(ctx, &all);
    if uni.terms.len() > bound {
        return Err(OracleError::UniverseTooLarge {
            size: uni.terms.len(),
            bound,
        });
    }

    let indexed: Vec<Vec<(usize, usize, bool)>> = s.iter().map(|cl| uni.index_clause(cl)).collect();
    let mut found: Vec<Implicate> = Vec::new();
    let mut chosen: Vec<Literal> = Vec::new();
    enumerate(
        ctx,
        &indexed,
        &uni,
        &pool,
        0,
        max_len,
        &mut chosen,
        &mut found,
    );
    Ok(minimize(ctx, &found))
}

fn entails_with(uni: &Universe, s: &[Vec<(usize, usize, bool)>], c: &Clause) -> bool {
    let mut problem: Vec<Vec<(usize, usize, bool)>> = s.to_vec();
    for unit in c.complement() {
        problem.push(vec![(
            uni.index(unit.lhs),
            uni.index(unit.rhs),
            unit.positive,
        )]);
    }
    let state = ModelState::new(uni.terms.len());
    !satisfiable(uni, &problem, state)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    ctx: &mut Ctx,
    s: &[Vec<(usize, usize, bool)>],
    uni: &Universe,
    pool: &[Literal],
    start: usize,
    budget: usize,
    chosen: &mut Vec<Literal>,
    found: &mut Vec<Implicate>,
) {
    let candidate = Clause::new(chosen.clone());
    if let Some(imp) = Implicate::new(ctx, candidate) {
        if imp.clause.len() == chosen.len() && entails_with(uni, s, &imp.clause) {
            found.push(imp);
            // supersets of an entailed clause are entailed but never
            // prime, so this branch is done
            return;
        }
    }
    if budget == 0 {
        return;
    }
    for i in start..pool.len() {
        if chosen.iter().any(|l| *l == pool[i].complement()) {
            continue;
        }
        chosen.push(pool[i]);
        enumerate(ctx, s, uni, pool, i + 1, budget - 1, chosen, found);
        chosen.pop();
    }
}
