//! Reduction ordering and literal selection.
//!
//! The fixed reduction ordering is a Knuth-Bendix ordering with variable
//! weight 1. The configuration keeps the special constant `true` minimal
//! and places every abducible constant directly above it (weight 1,
//! precedence below all other symbols), so that `f(t...) > a` holds for
//! every abducible `a` and non-abducible `f`.
//!
//! On top of the plain ordering, [`symbolic_cmp`] computes a sound
//! under-approximation of the "always greater" relation that must hold
//! for every renaming of abducible constants: all abducibles share one
//! minimal placeholder, and comparisons that would tie two distinct
//! abducibles are rejected as unknown. `geq_a` may therefore answer
//! `false` for pairs that are in fact always-comparable; this only ever
//! enables extra inferences, never blocks a required one.

use std::cmp::Ordering as StdOrdering;
use std::collections::{BTreeMap, HashMap};

use crate::terms::{Clause, Literal, Signature, SymbolId, SymbolKind, TermBank, TermId, TermNode};

/// Result of comparing two terms or literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermCmp {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl TermCmp {
    pub fn flip(self) -> TermCmp {
        match self {
            TermCmp::Greater => TermCmp::Less,
            TermCmp::Less => TermCmp::Greater,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingError {
    UnknownSymbol(String),
    BadWeight { name: String },
}

impl std::fmt::Display for OrderingError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrderingError::UnknownSymbol(n) => write!(f, "unknown symbol in ordering config: {n}"),
            OrderingError::BadWeight { name } => {
                write!(f, "weight of `{name}` must be positive")
            }
        }
    }
}

impl std::error::Error for OrderingError {}

/// KBO weights and precedence. Built through [`OrderingConfig::build`],
/// which enforces the side constraints regardless of user input.
#[derive(Debug, Clone)]
pub struct OrderingConfig {
    weights: Vec<u32>,
    /// Precedence rank per symbol; a larger rank means a greater symbol.
    prec: Vec<u32>,
    var_weight: u32,
    /// All symbol weights equal the variable weight: term weight is size.
    uniform: bool,
    /// User-supplied overrides, kept so the config can be rebuilt when a
    /// symbol is declared after construction.
    user_weights: HashMap<SymbolId, u32>,
    user_prec: HashMap<SymbolId, i64>,
}

impl OrderingConfig {
    /// Default configuration: weight 1 everywhere, precedence by
    /// declaration order (earlier declarations are greater), abducibles
    /// squeezed between `true` and everything else.
    pub fn default_for(sig: &Signature) -> Self {
        Self::build(sig, &HashMap::new(), &HashMap::new()).expect("defaults are valid")
    }

    /// `user_weights` and `user_prec` are keyed by symbol id. Weights for
    /// abducibles and `true` are forced to 1; precedence is forced into
    /// three bands (`true` < abducibles < the rest). Within a band,
    /// symbols are sorted by the user-supplied index (larger index means
    /// greater), defaulting to declaration order with earlier = greater.
    /// All predicate symbols share one weight.
    pub fn build(
        sig: &Signature,
        user_weights: &HashMap<SymbolId, u32>,
        user_prec: &HashMap<SymbolId, i64>,
    ) -> Result<Self, OrderingError> {
        let n = sig.len();
        let mut weights = vec![1u32; n];
        for (&id, &w) in user_weights {
            if w == 0 {
                return Err(OrderingError::BadWeight {
                    name: sig.name(id).to_string(),
                });
            }
            weights[id.0 as usize] = w;
        }
        // predicates share one weight: take the maximum assigned
        let pred_weight = sig
            .predicates()
            .iter()
            .map(|&p| weights[p.0 as usize])
            .max()
            .unwrap_or(1);
        for p in sig.predicates() {
            weights[p.0 as usize] = pred_weight;
        }
        // abducibles and true get the minimal constant weight
        for (id, info) in sig.iter() {
            if matches!(info.kind, SymbolKind::Abducible | SymbolKind::True) {
                weights[id.0 as usize] = 1;
            }
        }

        // precedence bands; default index makes earlier declarations greater
        let key = |id: SymbolId| -> i64 {
            user_prec
                .get(&id)
                .copied()
                .unwrap_or_else(|| -(id.0 as i64))
        };
        let mut abducibles: Vec<SymbolId> = sig.abducibles();
        abducibles.sort_by_key(|&id| (key(id), std::cmp::Reverse(id.0)));
        let mut others: Vec<SymbolId> = sig
            .iter()
            .filter(|(_, info)| !matches!(info.kind, SymbolKind::Abducible | SymbolKind::True))
            .map(|(id, _)| id)
            .collect();
        others.sort_by_key(|&id| (key(id), std::cmp::Reverse(id.0)));

        let mut prec = vec![0u32; n];
        let mut rank = 0u32;
        prec[sig.true_symbol().0 as usize] = rank;
        for id in abducibles {
            rank += 1;
            prec[id.0 as usize] = rank;
        }
        for id in others {
            rank += 1;
            prec[id.0 as usize] = rank;
        }

        let uniform = weights.iter().all(|&w| w == 1);
        Ok(OrderingConfig {
            weights,
            prec,
            var_weight: 1,
            uniform,
            user_weights: user_weights.clone(),
            user_prec: user_prec.clone(),
        })
    }

    /// Rebuilds the config for a grown signature, keeping the overrides.
    pub fn rebuilt_for(&self, sig: &Signature) -> Self {
        Self::build(sig, &self.user_weights, &self.user_prec)
            .expect("previously valid config stays valid")
    }

    pub fn weight_of(&self, f: SymbolId) -> u32 {
        self.weights[f.0 as usize]
    }

    pub fn prec_of(&self, f: SymbolId) -> u32 {
        self.prec[f.0 as usize]
    }

    fn term_weight(&self, bank: &TermBank, t: TermId) -> u64 {
        if self.uniform {
            // every symbol weighs the same as a variable: weight = size
            return bank.size(t) as u64 * self.var_weight as u64;
        }
        match bank.node(t) {
            TermNode::Var(_) => self.var_weight as u64,
            TermNode::App(f, args) => {
                let mut w = self.weight_of(*f) as u64;
                for &a in args.clone().iter() {
                    w += self.term_weight(bank, a);
                }
                w
            }
        }
    }

    /// Plain KBO. A simplification ordering, total on ground terms.
    pub fn cmp_terms(&self, sig: &Signature, bank: &TermBank, t: TermId, s: TermId) -> TermCmp {
        self.kbo(sig, bank, t, s, false)
    }

    /// Abducible-collapsing KBO: `Greater` only when the verdict holds for
    /// every renaming of abducibles, i.e. a sound test for "always greater".
    pub fn symbolic_cmp(&self, sig: &Signature, bank: &TermBank, t: TermId, s: TermId) -> TermCmp {
        self.kbo(sig, bank, t, s, true)
    }

    fn kbo(
        &self,
        sig: &Signature,
        bank: &TermBank,
        t: TermId,
        s: TermId,
        symbolic: bool,
    ) -> TermCmp {
        if t == s {
            return TermCmp::Equal;
        }
        let (t_has_extra, s_has_extra) = if bank.is_ground(t) && bank.is_ground(s) {
            (false, false)
        } else {
            let mut tc = BTreeMap::new();
            let mut sc = BTreeMap::new();
            bank.var_counts(t, &mut tc);
            bank.var_counts(s, &mut sc);
            let s_extra = sc.iter().any(|(v, &c)| c > tc.get(v).copied().unwrap_or(0));
            let t_extra = tc.iter().any(|(v, &c)| c > sc.get(v).copied().unwrap_or(0));
            (t_extra, s_extra)
        };

        let wt = self.term_weight(bank, t);
        let ws = self.term_weight(bank, s);
        if wt > ws {
            return if s_has_extra {
                TermCmp::Incomparable
            } else {
                TermCmp::Greater
            };
        }
        if wt < ws {
            return if t_has_extra {
                TermCmp::Incomparable
            } else {
                TermCmp::Less
            };
        }
        match (bank.node(t).clone(), bank.node(s).clone()) {
            (TermNode::Var(_), _) | (_, TermNode::Var(_)) => TermCmp::Incomparable,
            (TermNode::App(f, ts), TermNode::App(g, ss)) => {
                if f != g {
                    if symbolic && sig.is_abducible(f) && sig.is_abducible(g) {
                        return TermCmp::Incomparable;
                    }
                    let c = self.prec_of(f).cmp(&self.prec_of(g));
                    match c {
                        StdOrdering::Greater if !s_has_extra => TermCmp::Greater,
                        StdOrdering::Less if !t_has_extra => TermCmp::Less,
                        _ => TermCmp::Incomparable,
                    }
                } else {
                    for (&ti, &si) in ts.iter().zip(ss.iter()) {
                        match self.kbo(sig, bank, ti, si, symbolic) {
                            TermCmp::Equal => continue,
                            TermCmp::Greater if !s_has_extra => return TermCmp::Greater,
                            TermCmp::Less if !t_has_extra => return TermCmp::Less,
                            _ => return TermCmp::Incomparable,
                        }
                    }
                    TermCmp::Equal
                }
            }
        }
    }

    /// Total order on terms used for canonical literal orientation:
    /// KBO first, structural tie-break for incomparable pairs.
    pub fn total_cmp(&self, sig: &Signature, bank: &TermBank, t: TermId, s: TermId) -> StdOrdering {
        match self.cmp_terms(sig, bank, t, s) {
            TermCmp::Greater => StdOrdering::Greater,
            TermCmp::Less => StdOrdering::Less,
            TermCmp::Equal => StdOrdering::Equal,
            TermCmp::Incomparable => bank.structural_cmp(t, s),
        }
    }

    /// Sound test for `t` being greater than or equal to `s` in every
    /// A-set reduction and ground instantiation.
    pub fn geq_a(&self, sig: &Signature, bank: &TermBank, t: TermId, s: TermId) -> bool {
        if t == s || bank.is_true(sig, s) {
            return true;
        }
        // s a variable of t: instances keep s as a proper subterm
        if let Some(v) = bank.as_var(s) {
            if bank.contains_var(t, v) {
                return true;
            }
        }
        matches!(
            self.symbolic_cmp(sig, bank, t, s),
            TermCmp::Greater | TermCmp::Equal
        )
    }

    fn lit_encoding(&self, l: &Literal) -> Vec<Vec<TermId>> {
        if l.positive {
            vec![vec![l.lhs], vec![l.rhs]]
        } else {
            vec![vec![l.lhs, l.rhs]]
        }
    }

    /// Literal comparison: `t = s` is ordered as `{{t},{s}}` and `t != s`
    /// as `{{t,s}}`, compared by the nested multiset extension.
    pub fn cmp_literals(
        &self,
        sig: &Signature,
        bank: &TermBank,
        a: &Literal,
        b: &Literal,
    ) -> TermCmp {
        self.lit_cmp_inner(sig, bank, a, b, false)
    }

    pub fn symbolic_cmp_literals(
        &self,
        sig: &Signature,
        bank: &TermBank,
        a: &Literal,
        b: &Literal,
    ) -> TermCmp {
        self.lit_cmp_inner(sig, bank, a, b, true)
    }

    fn lit_cmp_inner(
        &self,
        sig: &Signature,
        bank: &TermBank,
        a: &Literal,
        b: &Literal,
        symbolic: bool,
    ) -> TermCmp {
        let ea = self.lit_encoding(a);
        let eb = self.lit_encoding(b);
        let term_cmp = |x: &TermId, y: &TermId| self.kbo(sig, bank, *x, *y, symbolic);
        let inner_cmp = |xs: &Vec<TermId>, ys: &Vec<TermId>| multiset_cmp(xs, ys, term_cmp);
        multiset_cmp(&ea, &eb, inner_cmp)
    }

    /// Selection: all literals of the clause that are not strictly
    /// dominated by another literal under the symbolic comparison. The
    /// selected set always contains every maximal literal; domination is
    /// only claimed when it holds for all abducible renamings, which makes
    /// the selection stable under A-substitutions.
    pub fn select(&self, sig: &Signature, bank: &TermBank, clause: &Clause) -> Vec<Literal> {
        let lits = clause.literals();
        let mut out = Vec::new();
        'outer: for (i, l) in lits.iter().enumerate() {
            for (j, m) in lits.iter().enumerate() {
                if i != j && self.lit_cmp_inner(sig, bank, m, l, true) == TermCmp::Greater {
                    continue 'outer;
                }
            }
            if !out.contains(l) {
                out.push(*l);
            }
        }
        out
    }

    /// Total order on ground literals for canonical renderings; falls back
    /// to the structural order when KBO does not decide (non-ground input).
    pub fn total_cmp_literals(
        &self,
        sig: &Signature,
        bank: &TermBank,
        a: &Literal,
        b: &Literal,
    ) -> StdOrdering {
        match self.cmp_literals(sig, bank, a, b) {
            TermCmp::Greater => StdOrdering::Greater,
            TermCmp::Less => StdOrdering::Less,
            TermCmp::Equal => StdOrdering::Equal,
            TermCmp::Incomparable => (a.positive, a.lhs, a.rhs).cmp(&(b.positive, b.lhs, b.rhs)),
        }
    }
}

/// Multiset extension of a (possibly partial) strict order: `M > N` iff
/// after cancelling equal elements pairwise, every remaining element of
/// `N` is dominated by some remaining element of `M`.
fn multiset_cmp<T: Clone>(xs: &[T], ys: &[T], cmp: impl Fn(&T, &T) -> TermCmp) -> TermCmp {
    let mut xs: Vec<Option<T>> = xs.iter().cloned().map(Some).collect();
    let mut ys: Vec<Option<T>> = ys.iter().cloned().map(Some).collect();
    for x in xs.iter_mut() {
        for y in ys.iter_mut() {
            if let (Some(xv), Some(yv)) = (x.as_ref(), y.as_ref()) {
                if cmp(xv, yv) == TermCmp::Equal {
                    *x = None;
                    *y = None;
                    break;
                }
            }
        }
    }
    let xs: Vec<T> = xs.into_iter().flatten().collect();
    let ys: Vec<T> = ys.into_iter().flatten().collect();
    match (xs.is_empty(), ys.is_empty()) {
        (true, true) => TermCmp::Equal,
        (true, false) => TermCmp::Less,
        (false, true) => TermCmp::Greater,
        (false, false) => {
            let gt = ys
                .iter()
                .all(|y| xs.iter().any(|x| cmp(x, y) == TermCmp::Greater));
            if gt {
                return TermCmp::Greater;
            }
            let lt = xs
                .iter()
                .all(|x| ys.iter().any(|y| cmp(x, y) == TermCmp::Less));
            if lt {
                return TermCmp::Less;
            }
            TermCmp::Incomparable
        }
    }
}
