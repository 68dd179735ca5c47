//! Terms, literals, clauses and substitutions.
//!
//! All terms live in an append-only [`TermBank`] and are referred to by
//! [`TermId`]; structurally equal terms always receive the same id, so
//! equality and hashing of terms are O(1). Clause and literal values are
//! plain data and can be moved freely between threads; the bank itself is
//! only mutated while building new terms.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

/// Symbol classification. `True` is the special boolean constant that
/// predicate atoms are equated with; exactly one exists per signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Function,
    Predicate,
    Abducible,
    True,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

#[derive(Debug, Clone)]
pub struct SymbolInfo {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
}

/// Errors raised while declaring symbols or building terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    ArityConflict {
        name: String,
        declared: usize,
        used: usize,
    },
    KindConflict {
        name: String,
    },
    /// A predicate-headed (boolean) term may only appear as the left side
    /// of an atom `p(t...) = true`; nesting it below a function symbol or
    /// equating two predicate atoms is forbidden.
    BooleanMisuse {
        context: String,
    },
    InvalidPosition,
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::ArityConflict {
                name,
                declared,
                used,
            } => write!(
                f,
                "symbol `{name}` declared with arity {declared} but used with arity {used}"
            ),
            TermError::KindConflict { name } => {
                write!(f, "symbol `{name}` redeclared with a different kind")
            }
            TermError::BooleanMisuse { context } => {
                write!(f, "predicate symbol used outside an atom: {context}")
            }
            TermError::InvalidPosition => write!(f, "position does not occur in term"),
        }
    }
}

impl std::error::Error for TermError {}

/// The signature: a table of declared symbols. The `true` constant is
/// created eagerly so that every signature has it.
#[derive(Debug, Clone)]
pub struct Signature {
    symbols: Vec<SymbolInfo>,
    by_name: HashMap<String, SymbolId>,
    true_sym: SymbolId,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Self {
        let mut sig = Signature {
            symbols: Vec::new(),
            by_name: HashMap::new(),
            true_sym: SymbolId(0),
        };
        sig.true_sym = sig
            .declare("true", 0, SymbolKind::True)
            .expect("fresh signature");
        sig
    }

    pub fn true_symbol(&self) -> SymbolId {
        self.true_sym
    }

    pub fn declare(
        &mut self,
        name: &str,
        arity: usize,
        kind: SymbolKind,
    ) -> Result<SymbolId, TermError> {
        if kind == SymbolKind::Abducible && arity != 0 {
            return Err(TermError::ArityConflict {
                name: name.to_string(),
                declared: 0,
                used: arity,
            });
        }
        // exactly one true constant exists, created with the signature
        if kind == SymbolKind::True
            && !self.symbols.is_empty()
            && self.by_name.get(name) != Some(&self.true_sym)
        {
            return Err(TermError::KindConflict {
                name: name.to_string(),
            });
        }
        if let Some(&id) = self.by_name.get(name) {
            let info = &self.symbols[id.0 as usize];
            if info.arity != arity {
                return Err(TermError::ArityConflict {
                    name: name.to_string(),
                    declared: info.arity,
                    used: arity,
                });
            }
            if info.kind != kind {
                return Err(TermError::KindConflict {
                    name: name.to_string(),
                });
            }
            return Ok(id);
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(SymbolInfo {
            name: name.to_string(),
            arity,
            kind,
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn info(&self, id: SymbolId) -> &SymbolInfo {
        &self.symbols[id.0 as usize]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.info(id).name
    }

    pub fn arity(&self, id: SymbolId) -> usize {
        self.info(id).arity
    }

    pub fn kind(&self, id: SymbolId) -> SymbolKind {
        self.info(id).kind
    }

    pub fn is_abducible(&self, id: SymbolId) -> bool {
        self.kind(id) == SymbolKind::Abducible
    }

    /// Boolean symbols are predicates and the `true` constant.
    pub fn is_boolean(&self, id: SymbolId) -> bool {
        matches!(self.kind(id), SymbolKind::Predicate | SymbolKind::True)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &SymbolInfo)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, info)| (SymbolId(i as u32), info))
    }

    pub fn abducibles(&self) -> Vec<SymbolId> {
        self.iter()
            .filter(|(_, info)| info.kind == SymbolKind::Abducible)
            .map(|(id, _)| id)
            .collect()
    }

    pub fn predicates(&self) -> Vec<SymbolId> {
        self.iter()
            .filter(|(_, info)| info.kind == SymbolKind::Predicate)
            .map(|(id, _)| id)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermNode {
    Var(Var),
    App(SymbolId, Vec<TermId>),
}

/// Hash-consing term store. Append-only: ids never change meaning, so a
/// `TermId` is valid for the lifetime of the bank that produced it.
#[derive(Debug, Default, Clone)]
pub struct TermBank {
    nodes: Vec<TermNode>,
    ground: Vec<bool>,
    size: Vec<u32>,
    dedup: HashMap<TermNode, TermId>,
}

impl TermBank {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, node: TermNode) -> TermId {
        if let Some(&id) = self.dedup.get(&node) {
            return id;
        }
        let (ground, size) = match &node {
            TermNode::Var(_) => (false, 1),
            TermNode::App(_, args) => {
                let mut g = true;
                let mut s = 1u32;
                for &a in args {
                    g &= self.ground[a.0 as usize];
                    s += self.size[a.0 as usize];
                }
                (g, s)
            }
        };
        let id = TermId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.ground.push(ground);
        self.size.push(size);
        self.dedup.insert(node, id);
        id
    }

    pub fn var(&mut self, v: Var) -> TermId {
        self.intern(TermNode::Var(v))
    }

    /// Builds an application term. Enforces the predicate discipline: a
    /// boolean term never occurs below another symbol.
    pub fn app(
        &mut self,
        sig: &Signature,
        f: SymbolId,
        args: Vec<TermId>,
    ) -> Result<TermId, TermError> {
        if args.len() != sig.arity(f) {
            return Err(TermError::ArityConflict {
                name: sig.name(f).to_string(),
                declared: sig.arity(f),
                used: args.len(),
            });
        }
        for &a in &args {
            if let TermNode::App(g, _) = self.node(a) {
                if sig.is_boolean(*g) {
                    return Err(TermError::BooleanMisuse {
                        context: format!("`{}` below `{}`", sig.name(*g), sig.name(f)),
                    });
                }
            }
        }
        Ok(self.intern(TermNode::App(f, args)))
    }

    pub fn constant(&mut self, sig: &Signature, c: SymbolId) -> TermId {
        self.app(sig, c, Vec::new())
            .expect("constants have arity 0")
    }

    pub fn true_term(&mut self, sig: &Signature) -> TermId {
        self.constant(sig, sig.true_symbol())
    }

    pub fn node(&self, t: TermId) -> &TermNode {
        &self.nodes[t.0 as usize]
    }

    pub fn is_ground(&self, t: TermId) -> bool {
        self.ground[t.0 as usize]
    }

    /// Symbol count, variables included.
    pub fn size(&self, t: TermId) -> u32 {
        self.size[t.0 as usize]
    }

    pub fn is_var(&self, t: TermId) -> bool {
        matches!(self.node(t), TermNode::Var(_))
    }

    pub fn as_var(&self, t: TermId) -> Option<Var> {
        match self.node(t) {
            TermNode::Var(v) => Some(*v),
            TermNode::App(..) => None,
        }
    }

    pub fn head(&self, t: TermId) -> Option<SymbolId> {
        match self.node(t) {
            TermNode::Var(_) => None,
            TermNode::App(f, _) => Some(*f),
        }
    }

    pub fn is_true(&self, sig: &Signature, t: TermId) -> bool {
        self.head(t) == Some(sig.true_symbol())
    }

    pub fn is_abducible(&self, sig: &Signature, t: TermId) -> bool {
        self.head(t).is_some_and(|f| sig.is_abducible(f))
    }

    /// Variable, or abducible constant.
    pub fn is_flat_side(&self, sig: &Signature, t: TermId) -> bool {
        self.is_var(t) || self.is_abducible(sig, t)
    }

    pub fn is_predicate_term(&self, sig: &Signature, t: TermId) -> bool {
        self.head(t)
            .is_some_and(|f| sig.kind(f) == SymbolKind::Predicate)
    }

    pub fn vars(&self, t: TermId) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(t, &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, t: TermId, out: &mut Vec<Var>) {
        match self.node(t) {
            TermNode::Var(v) => out.push(*v),
            TermNode::App(_, args) => {
                for a in args.clone() {
                    self.collect_vars(a, out);
                }
            }
        }
    }

    /// Multiset of variable occurrences, as counts.
    pub fn var_counts(&self, t: TermId, out: &mut BTreeMap<Var, u32>) {
        match self.node(t) {
            TermNode::Var(v) => *out.entry(*v).or_insert(0) += 1,
            TermNode::App(_, args) => {
                for a in args.clone() {
                    self.var_counts(a, out);
                }
            }
        }
    }

    pub fn contains_var(&self, t: TermId, v: Var) -> bool {
        match self.node(t) {
            TermNode::Var(w) => *w == v,
            TermNode::App(_, args) => args.clone().iter().any(|&a| self.contains_var(a, v)),
        }
    }

    /// Every position occurring in `t`, in depth-first order (epsilon first).
    pub fn positions(&self, t: TermId) -> Vec<Position> {
        let mut out = vec![Position::root()];
        if let TermNode::App(_, args) = self.node(t) {
            for (i, &a) in args.clone().iter().enumerate() {
                for sub in self.positions(a) {
                    out.push(sub.prepend((i + 1) as u32));
                }
            }
        }
        out
    }

    pub fn subterm_at(&self, t: TermId, p: &Position) -> Result<TermId, TermError> {
        let mut cur = t;
        for &i in &p.0 {
            match self.node(cur) {
                TermNode::App(_, args) if (i as usize) >= 1 && (i as usize) <= args.len() => {
                    cur = args[(i - 1) as usize];
                }
                _ => return Err(TermError::InvalidPosition),
            }
        }
        Ok(cur)
    }

    pub fn replace_at(&mut self, t: TermId, p: &Position, s: TermId) -> Result<TermId, TermError> {
        self.replace_at_depth(t, &p.0, s)
    }

    fn replace_at_depth(&mut self, t: TermId, p: &[u32], s: TermId) -> Result<TermId, TermError> {
        match p.split_first() {
            None => Ok(s),
            Some((&i, rest)) => match self.node(t).clone() {
                TermNode::App(f, mut args) if (i as usize) >= 1 && (i as usize) <= args.len() => {
                    let idx = (i - 1) as usize;
                    args[idx] = self.replace_at_depth(args[idx], rest, s)?;
                    Ok(self.intern(TermNode::App(f, args)))
                }
                _ => Err(TermError::InvalidPosition),
            },
        }
    }

    pub fn apply(&mut self, t: TermId, subst: &Substitution) -> TermId {
        if subst.is_empty() || self.is_ground(t) {
            return t;
        }
        match self.node(t).clone() {
            TermNode::Var(v) => match subst.get(v) {
                Some(s) => s,
                None => t,
            },
            TermNode::App(f, args) => {
                let new_args: Vec<TermId> = args.iter().map(|&a| self.apply(a, subst)).collect();
                if new_args == args {
                    t
                } else {
                    self.intern(TermNode::App(f, new_args))
                }
            }
        }
    }

    /// Total structural order on terms: vars before applications, then by
    /// symbol id and arguments lexicographically. Used as the deterministic
    /// tie-break for literal orientation and canonical renderings.
    pub fn structural_cmp(&self, a: TermId, b: TermId) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if a == b {
            return Ordering::Equal;
        }
        match (self.node(a), self.node(b)) {
            (TermNode::Var(x), TermNode::Var(y)) => x.cmp(y),
            (TermNode::Var(_), TermNode::App(..)) => Ordering::Less,
            (TermNode::App(..), TermNode::Var(_)) => Ordering::Greater,
            (TermNode::App(f, xs), TermNode::App(g, ys)) => f.cmp(g).then_with(|| {
                for (&x, &y) in xs.iter().zip(ys.iter()) {
                    let c = self.structural_cmp(x, y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                xs.len().cmp(&ys.len())
            }),
        }
    }
}

/// A position in a term: a sequence of 1-based argument indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position(pub Vec<u32>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn from_indices(ix: &[u32]) -> Self {
        Position(ix.to_vec())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    fn prepend(mut self, i: u32) -> Self {
        self.0.insert(0, i);
        self
    }
}

/// Finite map from variables to terms. Only bindings with `x != t` are kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Var, TermId>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Var, t: TermId) -> Self {
        let mut s = Self::new();
        s.bind(v, t);
        s
    }

    pub fn bind(&mut self, v: Var, t: TermId) {
        self.map.insert(v, t);
    }

    pub fn get(&self, v: Var) -> Option<TermId> {
        self.map.get(&v).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.map.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, TermId)> + '_ {
        self.map.iter().map(|(&v, &t)| (v, t))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }
}

/// A literal: an unordered pair of terms with a polarity. Constructors
/// canonicalize the orientation so that structurally identical literals
/// compare equal regardless of how they were written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub lhs: TermId,
    pub rhs: TermId,
    pub positive: bool,
}

/// Outcome of literal construction. `true != true` disappears, and
/// `true = true` poisons the enclosing clause into a tautology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LitBuild {
    Lit(Literal),
    Dropped,
    TautologyMarker,
}

impl Literal {
    /// Canonical constructor. `cmp` must be a total order on terms; the
    /// larger term becomes `lhs`. Rejects ill-formed boolean literals.
    pub fn new_with(
        bank: &TermBank,
        sig: &Signature,
        a: TermId,
        b: TermId,
        positive: bool,
        cmp: impl Fn(TermId, TermId) -> std::cmp::Ordering,
    ) -> Result<LitBuild, TermError> {
        let a_bool = bank.head(a).is_some_and(|f| sig.is_boolean(f));
        let b_bool = bank.head(b).is_some_and(|f| sig.is_boolean(f));
        if a_bool != b_bool {
            return Err(TermError::BooleanMisuse {
                context: "atom equating a boolean and a non-boolean term".into(),
            });
        }
        if a_bool && b_bool {
            let a_true = bank.is_true(sig, a);
            let b_true = bank.is_true(sig, b);
            match (a_true, b_true) {
                (true, true) => {
                    return Ok(if positive {
                        LitBuild::TautologyMarker
                    } else {
                        LitBuild::Dropped
                    });
                }
                (false, false) => {
                    return Err(TermError::BooleanMisuse {
                        context: "equation between two predicate atoms".into(),
                    });
                }
                _ => {}
            }
        }
        let (lhs, rhs) = if cmp(a, b) == std::cmp::Ordering::Less {
            (b, a)
        } else {
            (a, b)
        };
        Ok(LitBuild::Lit(Literal { lhs, rhs, positive }))
    }

    pub fn complement(self) -> Literal {
        Literal {
            positive: !self.positive,
            ..self
        }
    }

    pub fn is_ground(&self, bank: &TermBank) -> bool {
        bank.is_ground(self.lhs) && bank.is_ground(self.rhs)
    }

    /// `t = t` (same for both polarities' shape check).
    pub fn is_reflexive(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Predicate atom `p(t...) ⋈ true`.
    pub fn is_predicate(&self, bank: &TermBank, sig: &Signature) -> bool {
        bank.is_true(sig, self.rhs) && bank.is_predicate_term(sig, self.lhs)
    }

    /// Both sides are variables or abducibles, or the literal is a
    /// predicate atom with flat arguments.
    pub fn is_a_flat(&self, bank: &TermBank, sig: &Signature) -> bool {
        if bank.is_flat_side(sig, self.lhs) && bank.is_flat_side(sig, self.rhs) {
            return true;
        }
        if self.is_predicate(bank, sig) {
            if let TermNode::App(_, args) = bank.node(self.lhs) {
                return args.iter().all(|&a| bank.is_flat_side(sig, a));
            }
        }
        false
    }

    /// A-flat and free of predicate symbols.
    pub fn is_elementary(&self, bank: &TermBank, sig: &Signature) -> bool {
        bank.is_flat_side(sig, self.lhs) && bank.is_flat_side(sig, self.rhs)
    }

    pub fn vars(&self, bank: &TermBank) -> Vec<Var> {
        let mut vs = bank.vars(self.lhs);
        vs.extend(bank.vars(self.rhs));
        vs.sort();
        vs.dedup();
        vs
    }
}

/// Classification of a clause relative to a set of abducibles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseClass {
    AFlat,
    Elementary,
    Neither,
}

/// A clause: a multiset of literals, stored sorted for canonical shape.
/// The empty clause is `Clause { literals: vec![] }`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(mut literals: Vec<Literal>) -> Self {
        literals.sort();
        Clause { literals }
    }

    pub fn empty() -> Self {
        Clause::default()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.literals.iter()
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.literals.binary_search(l).is_ok()
    }

    /// The complement: one unit literal per member, complemented.
    pub fn complement(&self) -> Vec<Literal> {
        self.literals.iter().map(|l| l.complement()).collect()
    }

    pub fn is_ground(&self, bank: &TermBank) -> bool {
        self.literals.iter().all(|l| l.is_ground(bank))
    }

    pub fn vars(&self, bank: &TermBank) -> Vec<Var> {
        let mut vs = Vec::new();
        for l in &self.literals {
            vs.extend(l.vars(bank));
        }
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn classify(&self, bank: &TermBank, sig: &Signature) -> ClauseClass {
        if !self.literals.iter().all(|l| l.is_a_flat(bank, sig)) {
            return ClauseClass::Neither;
        }
        if self.literals.iter().all(|l| l.is_elementary(bank, sig)) {
            ClauseClass::Elementary
        } else {
            ClauseClass::AFlat
        }
    }

    /// The only negative literals are negated predicate atoms.
    pub fn is_quasi_positive(&self, bank: &TermBank, sig: &Signature) -> bool {
        self.literals
            .iter()
            .filter(|l| !l.positive)
            .all(|l| l.is_predicate(bank, sig))
    }

    /// Weight for clause selection: total symbol count.
    pub fn weight(&self, bank: &TermBank) -> u32 {
        self.literals
            .iter()
            .map(|l| bank.size(l.lhs) + bank.size(l.rhs))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Signature, TermBank) {
        (Signature::new(), TermBank::new())
    }

    fn cmp_of(bank: &TermBank) -> impl Fn(TermId, TermId) -> std::cmp::Ordering + '_ {
        |a, b| bank.structural_cmp(a, b)
    }

    #[test]
    fn subterm_and_replace() {
        let (mut sig, mut bank) = setup();
        let f = sig.declare("f", 2, SymbolKind::Function).unwrap();
        let g = sig.declare("g", 1, SymbolKind::Function).unwrap();
        let a = sig.declare("a", 0, SymbolKind::Function).unwrap();
        let b = sig.declare("b", 0, SymbolKind::Function).unwrap();
        let c = sig.declare("c", 0, SymbolKind::Function).unwrap();
        let ta = bank.constant(&sig, a);
        let tb = bank.constant(&sig, b);
        let tc = bank.constant(&sig, c);
        let gb = bank.app(&sig, g, vec![tb]).unwrap();
        let fagb = bank.app(&sig, f, vec![ta, gb]).unwrap();

        // f(a,g(b))|_{2.1} = b
        let p = Position::from_indices(&[2, 1]);
        assert_eq!(bank.subterm_at(fagb, &p).unwrap(), tb);

        // f(a,b)[c]_1 = f(c,b)
        let fab = bank.app(&sig, f, vec![ta, tb]).unwrap();
        let fcb = bank.app(&sig, f, vec![tc, tb]).unwrap();
        assert_eq!(
            bank.replace_at(fab, &Position::from_indices(&[1]), tc)
                .unwrap(),
            fcb
        );

        // t[s]_eps = s
        assert_eq!(bank.replace_at(fab, &Position::root(), tc).unwrap(), tc);

        // invalid position
        assert_eq!(
            bank.subterm_at(ta, &Position::from_indices(&[1])),
            Err(TermError::InvalidPosition)
        );
    }

    #[test]
    fn replace_subterm_roundtrip() {
        let (mut sig, mut bank) = setup();
        let f = sig.declare("f", 2, SymbolKind::Function).unwrap();
        let a = sig.declare("a", 0, SymbolKind::Function).unwrap();
        let ta = bank.constant(&sig, a);
        let x = bank.var(Var(0));
        let t = bank.app(&sig, f, vec![ta, x]).unwrap();
        for p in bank.positions(t) {
            let sub = bank.subterm_at(t, &p).unwrap();
            assert_eq!(bank.replace_at(t, &p, sub).unwrap(), t);
        }
    }

    #[test]
    fn literal_canonicalization() {
        let (mut sig, mut bank) = setup();
        let a = sig.declare("a", 0, SymbolKind::Abducible).unwrap();
        let b = sig.declare("b", 0, SymbolKind::Abducible).unwrap();
        let ta = bank.constant(&sig, a);
        let tb = bank.constant(&sig, b);
        let l1 = Literal::new_with(&bank, &sig, ta, tb, true, cmp_of(&bank)).unwrap();
        let l2 = Literal::new_with(&bank, &sig, tb, ta, true, cmp_of(&bank)).unwrap();
        assert_eq!(l1, l2);
    }

    #[test]
    fn true_literal_handling() {
        let (sig, mut bank) = setup();
        let tt = bank.true_term(&sig);
        let pos = Literal::new_with(&bank, &sig, tt, tt, true, cmp_of(&bank)).unwrap();
        assert_eq!(pos, LitBuild::TautologyMarker);
        let neg = Literal::new_with(&bank, &sig, tt, tt, false, cmp_of(&bank)).unwrap();
        assert_eq!(neg, LitBuild::Dropped);
    }

    #[test]
    fn predicate_equation_rejected() {
        let (mut sig, mut bank) = setup();
        let p = sig.declare("p", 1, SymbolKind::Predicate).unwrap();
        let q = sig.declare("q", 1, SymbolKind::Predicate).unwrap();
        let a = sig.declare("a", 0, SymbolKind::Function).unwrap();
        let ta = bank.constant(&sig, a);
        let pa = bank.app(&sig, p, vec![ta]).unwrap();
        let qa = bank.app(&sig, q, vec![ta]).unwrap();
        assert!(Literal::new_with(&bank, &sig, pa, qa, true, cmp_of(&bank)).is_err());
        // predicate below a function symbol is also rejected
        let f = sig.declare("f", 1, SymbolKind::Function).unwrap();
        assert!(bank.app(&sig, f, vec![pa]).is_err());
    }

    #[test]
    fn classify_examples() {
        let (mut sig, mut bank) = setup();
        let a = sig.declare("a", 0, SymbolKind::Abducible).unwrap();
        let b = sig.declare("b", 0, SymbolKind::Abducible).unwrap();
        let c = sig.declare("c", 0, SymbolKind::Abducible).unwrap();
        let p = sig.declare("p", 2, SymbolKind::Predicate).unwrap();
        let f = sig.declare("f", 1, SymbolKind::Function).unwrap();
        let (ta, tb, tc) = (
            bank.constant(&sig, a),
            bank.constant(&sig, b),
            bank.constant(&sig, c),
        );
        let x = bank.var(Var(0));
        let tt = bank.true_term(&sig);
        let cmp = |u: TermId, v: TermId| bank.structural_cmp(u, v);

        // a = b | p(x,c) is A-flat
        let l1 = match Literal::new_with(&bank, &sig, ta, tb, true, cmp).unwrap() {
            LitBuild::Lit(l) => l,
            _ => unreachable!(),
        };
        let pxc = bank.app(&sig, p, vec![x, tc]).unwrap();
        let cmp = |u: TermId, v: TermId| bank.structural_cmp(u, v);
        let l2 = match Literal::new_with(&bank, &sig, pxc, tt, true, cmp).unwrap() {
            LitBuild::Lit(l) => l,
            _ => unreachable!(),
        };
        let cl = Clause::new(vec![l1, l2]);
        assert_eq!(cl.classify(&bank, &sig), ClauseClass::AFlat);

        // a != b is elementary
        let l3 = match Literal::new_with(&bank, &sig, ta, tb, false, cmp).unwrap() {
            LitBuild::Lit(l) => l,
            _ => unreachable!(),
        };
        assert_eq!(
            Clause::new(vec![l3]).classify(&bank, &sig),
            ClauseClass::Elementary
        );

        // f(a) = b is neither
        let fa = bank.app(&sig, f, vec![ta]).unwrap();
        let cmp = |u: TermId, v: TermId| bank.structural_cmp(u, v);
        let l4 = match Literal::new_with(&bank, &sig, fa, tb, true, cmp).unwrap() {
            LitBuild::Lit(l) => l,
            _ => unreachable!(),
        };
        assert_eq!(
            Clause::new(vec![l4]).classify(&bank, &sig),
            ClauseClass::Neither
        );

        // quasi-positive checks
        let l5 = match Literal::new_with(&bank, &sig, pxc, tt, false, cmp).unwrap() {
            LitBuild::Lit(l) => l,
            _ => unreachable!(),
        };
        assert!(Clause::new(vec![l1, l5]).is_quasi_positive(&bank, &sig));
        assert!(!Clause::new(vec![l3]).is_quasi_positive(&bank, &sig));
        assert!(Clause::empty().is_quasi_positive(&bank, &sig));
    }

    #[test]
    fn clause_complement_involution() {
        let (mut sig, mut bank) = setup();
        let a = sig.declare("a", 0, SymbolKind::Abducible).unwrap();
        let b = sig.declare("b", 0, SymbolKind::Abducible).unwrap();
        let (ta, tb) = (bank.constant(&sig, a), bank.constant(&sig, b));
        let cmp = |u: TermId, v: TermId| bank.structural_cmp(u, v);
        let l = match Literal::new_with(&bank, &sig, ta, tb, true, cmp).unwrap() {
            LitBuild::Lit(l) => l,
            _ => unreachable!(),
        };
        let cl = Clause::new(vec![l, l]);
        let doubled = Clause::new(cl.complement().iter().map(|m| m.complement()).collect());
        assert_eq!(cl, doubled);
    }
}
