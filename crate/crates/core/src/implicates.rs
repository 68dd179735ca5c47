//! Extraction of ground flat implicates from empty-clause constraints,
//! clause-to-clause entailment by congruence closure, and minimization
//! down to prime representatives.

use crate::aset::ASet;
use crate::calculus::AClause;
use crate::terms::{Clause, Literal, Substitution, TermId, TermNode};
use crate::Ctx;

/// A ground A-flat non-tautological consequence of the input, stored with
/// merged duplicate literals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Implicate {
    pub clause: Clause,
}

impl Implicate {
    /// Canonicalizes and validates: ground, A-flat, not a tautology. The
    /// tautology test is semantic: a clause is valid exactly when its
    /// complement is equationally unsatisfiable, which catches validity
    /// through congruence (a = b | a != c | b != c) as well as the
    /// syntactic reflexive and complementary cases.
    pub fn new(ctx: &Ctx, clause: Clause) -> Option<Implicate> {
        let mut lits: Vec<Literal> = clause.literals().to_vec();
        lits.sort();
        lits.dedup();
        let clause = Clause::new(lits);
        if !clause.is_ground(&ctx.bank) {
            return None;
        }
        if clause.classify(&ctx.bank, &ctx.sig) == crate::terms::ClauseClass::Neither {
            return None;
        }
        if flat_lits_unsat(ctx, &clause.complement()) {
            return None;
        }
        Some(Implicate { clause })
    }

    /// Rendering: literals sorted by the reduction ordering, `=` and `!=`
    /// for equations, bare or `~`-prefixed predicate atoms.
    pub fn render(&self, ctx: &Ctx) -> String {
        if self.clause.is_empty() {
            return "[]".to_string();
        }
        let mut lits: Vec<Literal> = self.clause.literals().to_vec();
        lits.sort_by(|a, b| ctx.ord.total_cmp_literals(&ctx.sig, &ctx.bank, a, b));
        let parts: Vec<String> = lits.iter().map(|l| render_literal(ctx, l)).collect();
        parts.join(" | ")
    }
}

pub fn render_term(ctx: &Ctx, t: TermId) -> String {
    match ctx.bank.node(t) {
        TermNode::Var(v) => format!("X{}", v.0),
        TermNode::App(f, args) => {
            let name = ctx.sig.name(*f).to_string();
            if args.is_empty() {
                name
            } else {
                let inner: Vec<String> = args.iter().map(|&a| render_term(ctx, a)).collect();
                format!("{}({})", name, inner.join(","))
            }
        }
    }
}

pub fn render_literal(ctx: &Ctx, l: &Literal) -> String {
    if l.is_predicate(&ctx.bank, &ctx.sig) {
        let atom = render_term(ctx, l.lhs);
        if l.positive {
            atom
        } else {
            format!("~{atom}")
        }
    } else {
        let op = if l.positive { "=" } else { "!=" };
        format!(
            "{} {} {}",
            render_term(ctx, l.lhs),
            op,
            render_term(ctx, l.rhs)
        )
    }
}

/// The complement clause of an A-set, in concise form: one complemented
/// literal per oriented equation, disequation and predicate literal.
pub fn constraint_negation(ctx: &mut Ctx, x: &ASet) -> Clause {
    let lits = x.to_literals(ctx);
    Clause::new(lits.iter().map(|l| l.complement()).collect())
}

/// C_A(S): for every `[[] | X]` in the set and every assignment of the
/// constraint variables to abducibles keeping X satisfiable, the
/// complement of the instantiated constraint.
pub fn extract(ctx: &mut Ctx, clauses: &[AClause]) -> Vec<Implicate> {
    let mut out = Vec::new();
    let abducibles = ctx.sig.abducibles();
    for c in clauses {
        if !c.clause.is_empty() {
            continue;
        }
        let vars = c.constraint.vars(ctx);
        if vars.is_empty() {
            if c.constraint.satisfiable(ctx) {
                let clause = constraint_negation(ctx, &c.constraint);
                if let Some(imp) = Implicate::new(ctx, clause) {
                    out.push(imp);
                }
            }
            continue;
        }
        if abducibles.is_empty() {
            continue;
        }
        let mut assignment = vec![0usize; vars.len()];
        'assignments: loop {
            let mut subst = Substitution::new();
            for (i, &v) in vars.iter().enumerate() {
                let t = ctx.bank.constant(&ctx.sig, abducibles[assignment[i]]);
                subst.bind(v, t);
            }
            if let Ok(inst) = c.constraint.apply_subst(ctx, &subst) {
                if inst.satisfiable(ctx) {
                    let clause = constraint_negation(ctx, &inst);
                    if let Some(imp) = Implicate::new(ctx, clause) {
                        out.push(imp);
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == vars.len() {
                    break 'assignments;
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
    sorted_dedup(out)
}

fn sorted_dedup(mut v: Vec<Implicate>) -> Vec<Implicate> {
    v.sort();
    v.dedup();
    v
}

/// Union-find over ground flat terms for single clause-pair entailment.
/// Predicate atoms participate as nodes; asserting `p(a...) = true` links
/// the atom to the `true` node, and congruence over flat arguments merges
/// atoms whose arguments are equated.
struct FlatCc {
    nodes: Vec<TermId>,
    parent: Vec<usize>,
}

impl FlatCc {
    fn new() -> Self {
        FlatCc {
            nodes: Vec::new(),
            parent: Vec::new(),
        }
    }

    fn node(&mut self, t: TermId) -> usize {
        if let Some(i) = self.nodes.iter().position(|&n| n == t) {
            return i;
        }
        self.nodes.push(t);
        self.parent.push(self.parent.len());
        self.parent.len() - 1
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

    /// Propagates congruence over flat predicate atoms until fixpoint.
    fn congruence_close(&mut self, ctx: &Ctx) {
        loop {
            let mut changed = false;
            for i in 0..self.nodes.len() {
                for j in (i + 1)..self.nodes.len() {
                    if self.find(i) == self.find(j) {
                        continue;
                    }
                    let (a, b) = (self.nodes[i], self.nodes[j]);
                    if let (TermNode::App(f, fa), TermNode::App(g, ga)) =
                        (ctx.bank.node(a).clone(), ctx.bank.node(b).clone())
                    {
                        if f == g && !fa.is_empty() && fa.len() == ga.len() {
                            let all_eq = fa.iter().zip(ga.iter()).all(|(&x, &y)| {
                                let nx = self.node(x);
                                let ny = self.node(y);
                                self.find(nx) == self.find(ny)
                            });
                            if all_eq {
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
}

/// Unsatisfiability of a set of ground flat literals, by congruence
/// closure over the constants and predicate atoms involved.
fn flat_lits_unsat(ctx: &Ctx, lits: &[Literal]) -> bool {
    let mut cc = FlatCc::new();
    let mut diseqs = Vec::new();
    for l in lits {
        let na = cc.node(l.lhs);
        let nb = cc.node(l.rhs);
        if l.positive {
            cc.union(na, nb);
        } else {
            diseqs.push((na, nb));
        }
    }
    cc.congruence_close(ctx);
    for (a, b) in diseqs {
        if cc.find(a) == cc.find(b) {
            return true;
        }
    }
    false
}

/// Ground flat clause entailment: `c` entails `d` iff every literal of
/// `c`, together with the complement of `d`, is equationally unsatisfiable.
pub fn entails_ground(ctx: &mut Ctx, c: &Clause, d: &Clause) -> bool {
    let d_complement = d.complement();
    for l in c.iter() {
        let mut lits = d_complement.clone();
        lits.push(*l);
        if !flat_lits_unsat(ctx, &lits) {
            return false;
        }
    }
    true
}

/// Keeps one representative per equivalence class among the most general
/// implicates: the output and input denote the same theory, and no kept
/// element strictly entails another.
pub fn minimize(ctx: &mut Ctx, impls: &[Implicate]) -> Vec<Implicate> {
    let mut items = sorted_dedup(impls.to_vec());
    // representative choice must not depend on term interning order:
    // sort by the canonical rendering
    items.sort_by_cached_key(|i| i.render(ctx));
    let n = items.len();
    let mut entails = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            entails[i][j] = entails_ground(ctx, &items[i].clause, &items[j].clause);
        }
    }
    let mut keep = Vec::new();
    'outer: for i in 0..n {
        // prime: everything entailing items[i] is entailed back
        #[allow(clippy::needless_range_loop)]
        for j in 0..n {
            if entails[j][i] && !entails[i][j] {
                continue 'outer;
            }
        }
        // representative: the least member of its equivalence class
        #[allow(clippy::needless_range_loop)]
        for j in 0..i {
            if entails[j][i] && entails[i][j] {
                continue 'outer;
            }
        }
        keep.push(items[i].clone());
    }
    keep
}

/// Renders a set of implicates, one per line, lexicographically sorted.
pub fn render_all(ctx: &Ctx, impls: &[Implicate]) -> Vec<String> {
    let mut lines: Vec<String> = impls.iter().map(|i| i.render(ctx)).collect();
    lines.sort();
    lines.dedup();
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aset::ASet;
    use crate::calculus::RuleTag;
    use crate::terms::{LitBuild, Signature, SymbolKind, Var};

    fn ctx(names: &[&str]) -> Ctx {
        let mut sig = Signature::new();
        for n in names {
            sig.declare(n, 0, SymbolKind::Abducible).unwrap();
        }
        Ctx::new(sig)
    }

    fn lit(ctx: &mut Ctx, a: &str, b: &str, positive: bool) -> Literal {
        let sa = ctx.sig.lookup(a).unwrap();
        let sb = ctx.sig.lookup(b).unwrap();
        let ta = ctx.bank.constant(&ctx.sig, sa);
        let tb = ctx.bank.constant(&ctx.sig, sb);
        match ctx.literal(ta, tb, positive).unwrap() {
            LitBuild::Lit(l) => l,
            _ => unreachable!(),
        }
    }

    fn empty_aclause(constraint: ASet) -> AClause {
        AClause {
            id: 0,
            clause: Clause::empty(),
            constraint,
            rule: RuleTag::Input,
            parents: Vec::new(),
        }
    }

    #[test]
    fn extract_ground_constraint() {
        // [[] | {a = b, c != a}] yields the complement clause
        let mut ctx = ctx(&["a", "b", "c"]);
        let ab = lit(&mut ctx, "a", "b", true);
        let ca = lit(&mut ctx, "c", "a", false);
        let x = ASet::from_literals(&mut ctx, &[ab, ca]).unwrap();
        let impls = extract(&mut ctx, &[empty_aclause(x)]);
        assert_eq!(impls.len(), 1);
        let got = &impls[0].clause;
        assert_eq!(got.len(), 2);
        assert!(got.contains(&ab.complement()));
        // the disequation is stored reduced (a collapses to b), so its
        // complement mentions the representative
        let cb = lit(&mut ctx, "c", "b", true);
        assert!(got.contains(&cb));
    }

    #[test]
    fn extract_enumerates_variable_assignments() {
        // [[] | {x != a, x != b, c != d}] over A = {a..e}
        let mut ctx = ctx(&["a", "b", "c", "d", "e"]);
        let xv = ctx.bank.var(Var(0));
        let sa = ctx.sig.lookup("a").unwrap();
        let sb = ctx.sig.lookup("b").unwrap();
        let ta = ctx.bank.constant(&ctx.sig, sa);
        let tb = ctx.bank.constant(&ctx.sig, sb);
        let xa = match ctx.literal(xv, ta, false).unwrap() {
            LitBuild::Lit(l) => l,
            _ => unreachable!(),
        };
        let xb = match ctx.literal(xv, tb, false).unwrap() {
            LitBuild::Lit(l) => l,
            _ => unreachable!(),
        };
        let cd = lit(&mut ctx, "c", "d", false);
        let x = ASet::from_literals(&mut ctx, &[xa, xb, cd]).unwrap();
        let impls = extract(&mut ctx, &[empty_aclause(x)]);

        // x -> e gives e = a | e = b | c = d
        let ea = lit(&mut ctx, "e", "a", true);
        let eb = lit(&mut ctx, "e", "b", true);
        let cd_pos = lit(&mut ctx, "c", "d", true);
        let want = Clause::new(vec![ea, eb, cd_pos]);
        assert!(impls.iter().any(|i| i.clause == want));
        // x -> c gives c = a | c = b | c = d
        let ca = lit(&mut ctx, "c", "a", true);
        let cb = lit(&mut ctx, "c", "b", true);
        let want2 = Clause::new(vec![ca, cb, cd_pos]);
        assert!(impls.iter().any(|i| i.clause == want2));
        // x -> a and x -> b are unsatisfiable; x -> d remains
        assert_eq!(impls.len(), 3);
    }

    #[test]
    fn entailment_examples() {
        let mut ctx = ctx(&["a", "b", "c", "d", "e"]);
        // a != b | d = e entails a != c | b != c | d = e
        let ab = lit(&mut ctx, "a", "b", false);
        let de = lit(&mut ctx, "d", "e", true);
        let ac = lit(&mut ctx, "a", "c", false);
        let bc = lit(&mut ctx, "b", "c", false);
        let general = Clause::new(vec![ab, de]);
        let specific = Clause::new(vec![ac, bc, de]);
        assert!(entails_ground(&mut ctx, &general, &specific));
        assert!(!entails_ground(&mut ctx, &specific, &general));
        // reflexivity
        assert!(entails_ground(&mut ctx, &general, &general.clone()));
        // a = b does not entail c = d
        let abp = lit(&mut ctx, "a", "b", true);
        let cdp = lit(&mut ctx, "c", "d", true);
        assert!(!entails_ground(
            &mut ctx,
            &Clause::new(vec![abp]),
            &Clause::new(vec![cdp])
        ));
        // and the empty clause entails everything
        assert!(entails_ground(&mut ctx, &Clause::empty(), &general));
    }

    #[test]
    fn minimize_keeps_most_general() {
        let mut ctx = ctx(&["a", "b", "c", "d", "e"]);
        let ab = lit(&mut ctx, "a", "b", false);
        let de = lit(&mut ctx, "d", "e", true);
        let ac = lit(&mut ctx, "a", "c", false);
        let bc = lit(&mut ctx, "b", "c", false);
        let i1 = Implicate::new(&ctx, Clause::new(vec![ab, de])).unwrap();
        let i2 = Implicate::new(&ctx, Clause::new(vec![ac, bc, de])).unwrap();
        let out = minimize(&mut ctx, &[i1.clone(), i2]);
        assert_eq!(out, vec![i1.clone()]);
        // idempotent and a fixpoint on singletons
        assert_eq!(minimize(&mut ctx, std::slice::from_ref(&i1)), vec![i1]);
    }

    #[test]
    fn implicate_rejects_tautologies() {
        let mut ctx = ctx(&["a", "b"]);
        let ab = lit(&mut ctx, "a", "b", true);
        assert!(Implicate::new(&ctx, Clause::new(vec![ab, ab.complement()])).is_none());
        let aa = lit(&mut ctx, "a", "a", true);
        assert!(Implicate::new(&ctx, Clause::new(vec![aa])).is_none());
        // duplicates merge
        let i = Implicate::new(&ctx, Clause::new(vec![ab, ab])).unwrap();
        assert_eq!(i.clause.len(), 1);
    }
}
