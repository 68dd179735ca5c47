//! A-sets: closed sets of A-flat literals used as clause constraints.
//!
//! The closed set of the definition is quadratic in the number of
//! abducibles, so the stored form is the oriented normal form: a map from
//! each abducible to the least member of its equivalence class, plus the
//! irreducible disequations and predicate literals (kept reduced). Logical
//! membership reduces the queried literal first.

use std::collections::{BTreeMap, BTreeSet};

use crate::terms::{Clause, LitBuild, Literal, Substitution, SymbolId, TermId, TermNode, Var};
use crate::Ctx;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ASetError {
    /// Substitution maps a constrained variable to a non-flat term.
    NotPure { var: Var },
    /// Literal cannot be part of an A-set (not A-flat, or a non-ground
    /// positive equation).
    NotAdmissible,
}

impl std::fmt::Display for ASetError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ASetError::NotPure { var } => write!(f, "substitution not pure on variable v{}", var.0),
            ASetError::NotAdmissible => write!(f, "literal not admissible in an A-set"),
        }
    }
}

impl std::error::Error for ASetError {}

/// Constraint set attached to a clause. Empty means "no hypotheses".
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ASet {
    /// Non-trivial class entries: abducible -> least member of its class.
    repr: BTreeMap<SymbolId, SymbolId>,
    /// Reduced disequations `u != v` with flat sides; an entry with
    /// `lhs == rhs` records unsatisfiability.
    diseqs: BTreeSet<Literal>,
    /// Reduced predicate literals `p(t...) ⋈ true` with flat arguments.
    preds: BTreeSet<Literal>,
}

impl ASet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.repr.is_empty() && self.diseqs.is_empty() && self.preds.is_empty()
    }

    /// Representative (least class member) of an abducible.
    pub fn rep(&self, a: SymbolId) -> SymbolId {
        self.repr.get(&a).copied().unwrap_or(a)
    }

    pub fn same_class(&self, a: SymbolId, b: SymbolId) -> bool {
        self.rep(a) == self.rep(b)
    }

    /// Oriented equations `member = rep`, one per non-representative member.
    pub fn oriented_eqs(&self) -> impl Iterator<Item = (SymbolId, SymbolId)> + '_ {
        self.repr.iter().map(|(&a, &r)| (a, r))
    }

    pub fn diseqs(&self) -> impl Iterator<Item = &Literal> {
        self.diseqs.iter()
    }

    pub fn preds(&self) -> impl Iterator<Item = &Literal> {
        self.preds.iter()
    }

    /// True when the set contains only positive literals.
    pub fn is_positive(&self) -> bool {
        self.diseqs.is_empty() && self.preds.iter().all(|l| l.positive)
    }

    /// Number of stored (concise-form) literals.
    pub fn len(&self) -> usize {
        self.repr.len() + self.diseqs.len() + self.preds.len()
    }

    /// Total symbol count of the stored literals: the contribution of the
    /// constraint to clause weight.
    pub fn weight(&self, ctx: &Ctx) -> u32 {
        let eqw = 2 * self.repr.len() as u32;
        let rest: u32 = self
            .diseqs
            .iter()
            .chain(self.preds.iter())
            .map(|l| ctx.bank.size(l.lhs) + ctx.bank.size(l.rhs))
            .sum();
        eqw + rest
    }

    pub fn vars(&self, ctx: &Ctx) -> Vec<Var> {
        let mut vs = Vec::new();
        for l in self.diseqs.iter().chain(self.preds.iter()) {
            vs.extend(l.vars(&ctx.bank));
        }
        vs.sort();
        vs.dedup();
        vs
    }

    fn add_eq(&mut self, ctx: &mut Ctx, a: SymbolId, b: SymbolId) {
        let ra = self.rep(a);
        let rb = self.rep(b);
        if ra == rb {
            return;
        }
        // the least member (by the reduction ordering) becomes the rep
        let (keep, merge) = if ctx.ord.prec_of(ra) < ctx.ord.prec_of(rb) {
            (ra, rb)
        } else {
            (rb, ra)
        };
        let members: Vec<SymbolId> = ctx.abducibles().to_vec();
        for m in members {
            if self.rep(m) == merge {
                self.repr.insert(m, keep);
            }
        }
        self.repr.retain(|k, v| k != v);
        self.renormalize(ctx);
    }

    fn renormalize(&mut self, ctx: &mut Ctx) {
        let diseqs = std::mem::take(&mut self.diseqs);
        for l in diseqs {
            let lit = self.reduce_literal(ctx, &l);
            self.diseqs.insert(lit);
        }
        let preds = std::mem::take(&mut self.preds);
        for l in preds {
            let lit = self.reduce_literal(ctx, &l);
            self.preds.insert(lit);
        }
    }

    /// Adds one A-flat literal and re-closes. Positive equations must be
    /// ground (between abducibles); predicate literals of either polarity
    /// and disequations may contain variables.
    pub fn add(&mut self, ctx: &mut Ctx, lit: &Literal) -> Result<(), ASetError> {
        if lit.is_predicate(&ctx.bank, &ctx.sig) {
            if !lit.is_a_flat(&ctx.bank, &ctx.sig) {
                return Err(ASetError::NotAdmissible);
            }
            let reduced = self.reduce_literal(ctx, lit);
            self.preds.insert(reduced);
            return Ok(());
        }
        if !lit.is_elementary(&ctx.bank, &ctx.sig) {
            return Err(ASetError::NotAdmissible);
        }
        if lit.positive {
            match (ctx.bank.head(lit.lhs), ctx.bank.head(lit.rhs)) {
                (Some(a), Some(b)) => {
                    self.add_eq(ctx, a, b);
                    Ok(())
                }
                _ => Err(ASetError::NotAdmissible),
            }
        } else {
            let reduced = self.reduce_literal(ctx, lit);
            self.diseqs.insert(reduced);
            Ok(())
        }
    }

    /// E↓X on a term: every abducible replaced by its class representative.
    pub fn reduce_term(&self, ctx: &mut Ctx, t: TermId) -> TermId {
        match ctx.bank.node(t).clone() {
            TermNode::Var(_) => t,
            TermNode::App(f, args) => {
                if ctx.sig.is_abducible(f) {
                    let r = self.rep(f);
                    if r == f {
                        t
                    } else {
                        ctx.bank.constant(&ctx.sig, r)
                    }
                } else {
                    let new_args: Vec<TermId> =
                        args.iter().map(|&a| self.reduce_term(ctx, a)).collect();
                    if new_args == args {
                        t
                    } else {
                        ctx.bank
                            .app(&ctx.sig, f, new_args)
                            .expect("reduction preserves well-formedness")
                    }
                }
            }
        }
    }

    pub fn reduce_literal(&self, ctx: &mut Ctx, l: &Literal) -> Literal {
        let lhs = self.reduce_term(ctx, l.lhs);
        let rhs = self.reduce_term(ctx, l.rhs);
        match ctx.literal(lhs, rhs, l.positive) {
            Ok(LitBuild::Lit(lit)) => lit,
            // reduction renames abducibles only, so the shape is preserved
            _ => unreachable!("reduction cannot produce a true/true literal"),
        }
    }

    pub fn reduce_clause(&self, ctx: &mut Ctx, c: &Clause) -> Clause {
        Clause::new(c.iter().map(|l| self.reduce_literal(ctx, l)).collect())
    }

    /// Logical membership: the literal belongs to the closed set.
    pub fn contains(&self, ctx: &mut Ctx, l: &Literal) -> bool {
        let red = self.reduce_literal(ctx, l);
        if red.is_predicate(&ctx.bank, &ctx.sig) {
            return self.preds.contains(&red);
        }
        if red.positive {
            // reflexive members a = a, plus class equality
            red.lhs == red.rhs && ctx.bank.is_abducible(&ctx.sig, red.lhs)
        } else {
            self.diseqs.contains(&red)
        }
    }

    /// Smallest A-set containing both: transitive closure of the union.
    pub fn union(&self, ctx: &mut Ctx, other: &ASet) -> ASet {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let mut out = self.clone();
        for (a, r) in other.oriented_eqs() {
            out.add_eq(ctx, a, r);
        }
        for l in other.diseqs.iter().cloned().collect::<Vec<_>>() {
            let red = out.reduce_literal(ctx, &l);
            out.diseqs.insert(red);
        }
        for l in other.preds.iter().cloned().collect::<Vec<_>>() {
            let red = out.reduce_literal(ctx, &l);
            out.preds.insert(red);
        }
        out
    }

    /// Xσ for an X-pure substitution: literal-wise image, re-closed.
    pub fn apply_subst(&self, ctx: &mut Ctx, subst: &Substitution) -> Result<ASet, ASetError> {
        if subst.is_empty() {
            return Ok(self.clone());
        }
        for v in self.vars(ctx) {
            if let Some(t) = subst.get(v) {
                if !ctx.bank.is_flat_side(&ctx.sig, t) {
                    return Err(ASetError::NotPure { var: v });
                }
            }
        }
        let mut out = ASet {
            repr: self.repr.clone(),
            ..ASet::default()
        };
        for l in &self.diseqs {
            let lhs = ctx.bank.apply(l.lhs, subst);
            let rhs = ctx.bank.apply(l.rhs, subst);
            let lit = match ctx.literal(lhs, rhs, false) {
                Ok(LitBuild::Lit(lit)) => lit,
                _ => unreachable!("flat disequation image stays a disequation"),
            };
            let red = out.reduce_literal(ctx, &lit);
            out.diseqs.insert(red);
        }
        for l in &self.preds {
            let lhs = ctx.bank.apply(l.lhs, subst);
            let lit = match ctx.literal(lhs, l.rhs, l.positive) {
                Ok(LitBuild::Lit(lit)) => lit,
                _ => unreachable!("predicate atom image stays an atom"),
            };
            let red = out.reduce_literal(ctx, &lit);
            out.preds.insert(red);
        }
        Ok(out)
    }

    fn ground_consistent(&self, ctx: &Ctx) -> bool {
        for l in &self.diseqs {
            if l.lhs == l.rhs {
                return false;
            }
        }
        for l in &self.preds {
            if l.positive && ctx.bank.is_ground(l.lhs) && self.preds.contains(&l.complement()) {
                return false;
            }
        }
        true
    }

    /// Satisfiability. Ground conflicts are detected directly; variables
    /// are resolved by searching for an assignment into the abducibles.
    pub fn satisfiable(&self, ctx: &mut Ctx) -> bool {
        if !self.ground_consistent(ctx) {
            return false;
        }
        let vars = self.vars(ctx);
        if vars.is_empty() {
            return true;
        }
        let abducibles = ctx.abducibles().to_vec();
        if abducibles.is_empty() {
            return false;
        }
        let mut assignment = vec![0usize; vars.len()];
        loop {
            let mut subst = Substitution::new();
            for (i, &v) in vars.iter().enumerate() {
                let c = ctx.bank.constant(&ctx.sig, abducibles[assignment[i]]);
                subst.bind(v, c);
            }
            if let Ok(inst) = self.apply_subst(ctx, &subst) {
                if inst.ground_consistent(ctx) {
                    return true;
                }
            }
            // next assignment in base |A|
            let mut i = 0;
            loop {
                if i == vars.len() {
                    return false;
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

    /// The stored literals in concise form: oriented equations, then
    /// disequations, then predicate literals.
    pub fn to_literals(&self, ctx: &mut Ctx) -> Vec<Literal> {
        let mut out = Vec::new();
        let mut eqs: Vec<(SymbolId, SymbolId)> = self.oriented_eqs().collect();
        eqs.sort_by(|a, b| {
            ctx.ord
                .prec_of(b.1)
                .cmp(&ctx.ord.prec_of(a.1))
                .then(ctx.ord.prec_of(b.0).cmp(&ctx.ord.prec_of(a.0)))
        });
        for (a, r) in eqs {
            let ta = ctx.bank.constant(&ctx.sig, a);
            let tr = ctx.bank.constant(&ctx.sig, r);
            match ctx.literal(ta, tr, true) {
                Ok(LitBuild::Lit(l)) => out.push(l),
                _ => unreachable!(),
            }
        }
        out.extend(self.diseqs.iter().cloned());
        out.extend(self.preds.iter().cloned());
        out
    }

    /// Builds an A-set from literals, failing on inadmissible members.
    pub fn from_literals(ctx: &mut Ctx, lits: &[Literal]) -> Result<ASet, ASetError> {
        let mut x = ASet::new();
        for l in lits {
            x.add(ctx, l)?;
        }
        Ok(x)
    }

    /// Renames the variables of the set according to the map.
    pub fn rename(&self, ctx: &mut Ctx, map: &Substitution) -> ASet {
        self.apply_subst(ctx, map).expect("renaming is always pure")
    }

    /// All complete satisfiable extensions of a ground satisfiable A-set:
    /// every partition of the abducibles refining the current classes and
    /// honoring the disequations, times every total predicate valuation
    /// consistent with the stored predicate literals.
    pub fn complete_extensions(&self, ctx: &mut Ctx) -> Vec<ASet> {
        if !self.satisfiable(ctx) {
            return Vec::new();
        }
        let reps: Vec<SymbolId> = {
            let mut r: Vec<SymbolId> = ctx.abducibles().iter().map(|&a| self.rep(a)).collect();
            r.sort();
            r.dedup();
            r
        };
        let mut out = Vec::new();
        for rgs in restricted_growth_strings(reps.len()) {
            let mut ext = self.clone();
            let mut ok = true;
            // merge classes per the partition
            for i in 0..reps.len() {
                for j in (i + 1)..reps.len() {
                    if rgs[i] == rgs[j] {
                        ext.add_eq(ctx, reps[i], reps[j]);
                    }
                }
            }
            if !ext.ground_consistent(ctx) {
                continue;
            }
            // record all inter-class disequations
            let final_reps: Vec<SymbolId> = {
                let mut r: Vec<SymbolId> = ctx.abducibles().iter().map(|&a| ext.rep(a)).collect();
                r.sort();
                r.dedup();
                r
            };
            for i in 0..final_reps.len() {
                for j in (i + 1)..final_reps.len() {
                    let ta = ctx.bank.constant(&ctx.sig, final_reps[i]);
                    let tb = ctx.bank.constant(&ctx.sig, final_reps[j]);
                    if let Ok(LitBuild::Lit(l)) = ctx.literal(ta, tb, false) {
                        let red = ext.reduce_literal(ctx, &l);
                        ext.diseqs.insert(red);
                    }
                }
            }
            if !ext.ground_consistent(ctx) {
                continue;
            }
            // enumerate predicate valuations over the free atoms
            let mut atoms: Vec<TermId> = Vec::new();
            for p in ctx.sig.predicates() {
                let arity = ctx.sig.arity(p);
                for combo in tuples(&final_reps, arity) {
                    let args: Vec<TermId> = combo
                        .iter()
                        .map(|&c| ctx.bank.constant(&ctx.sig, c))
                        .collect();
                    let atom = ctx.bank.app(&ctx.sig, p, args).expect("flat atom");
                    atoms.push(atom);
                }
            }
            let tt = ctx.bank.true_term(&ctx.sig);
            let mut free = Vec::new();
            let base = ext.clone();
            for &atom in &atoms {
                let pos = match ctx.literal(atom, tt, true) {
                    Ok(LitBuild::Lit(l)) => l,
                    _ => unreachable!(),
                };
                let has_pos = base.contains(ctx, &pos);
                let has_neg = base.contains(ctx, &pos.complement());
                if has_pos && has_neg {
                    ok = false;
                    break;
                }
                if !has_pos && !has_neg {
                    free.push(pos);
                }
            }
            if !ok {
                continue;
            }
            // non-ground predicate members cannot appear here: the
            // receiver is ground by precondition
            for mask in 0..(1u64 << free.len()) {
                let mut m = base.clone();
                for (k, lit) in free.iter().enumerate() {
                    let chosen = if mask & (1 << k) != 0 {
                        *lit
                    } else {
                        lit.complement()
                    };
                    m.preds.insert(chosen);
                }
                out.push(m);
            }
        }
        out
    }
}

/// All partitions of `{0..n}`, encoded as restricted growth strings.
pub fn restricted_growth_strings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    fn go(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=max + 1 {
            prefix.push(v);
            let new_max = max.max(v);
            go(prefix, new_max, n, out);
            prefix.pop();
        }
    }
    let mut prefix = vec![0];
    go(&mut prefix, 0, n, &mut out);
    out
}

/// All tuples of length `len` over `items`.
pub fn tuples<T: Copy>(items: &[T], len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            for &i in items {
                let mut t2 = t.clone();
                t2.push(i);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}
