//! Generation of abducible implicates for sets of first-order equational
//! clauses, by saturation under a constrained superposition calculus.
//!
//! Given clauses over a signature with a distinguished finite set of
//! abducible constants, the engine derives constrained empty clauses
//! `[[] | X]` whose constraint negations are exactly the ground flat
//! implicates of the input. Dually, each constraint is a set of
//! hypotheses whose addition makes the input unsatisfiable.
//!
//! The main entry points are [`problem::ProblemFile`] for parsing,
//! [`saturation::saturate`] / [`saturation::combine_pipeline`] for the
//! search itself, and [`implicates::extract`] / [`implicates::minimize`]
//! for reading off the results. [`oracle`] contains an independent
//! brute-force ground semantics used as a test reference.

pub mod aset;
pub mod aunify;
pub mod calculus;
pub mod implicates;
pub mod oracle;
pub mod ordering;
pub mod problem;
pub mod saturation;
pub mod terms;

use ordering::OrderingConfig;
use terms::{Clause, LitBuild, Literal, Signature, TermBank, TermError, TermId};

/// Shared state for one problem: the signature, the term store and the
/// reduction ordering. The term store is append-only; everything else is
/// immutable after construction, so clause values built against a context
/// remain valid for its whole lifetime.
#[derive(Debug)]
pub struct Ctx {
    pub sig: Signature,
    pub bank: TermBank,
    pub ord: OrderingConfig,
    abducibles: Vec<terms::SymbolId>,
}

impl Ctx {
    pub fn new(sig: Signature) -> Self {
        let ord = OrderingConfig::default_for(&sig);
        let abducibles = sig.abducibles();
        Ctx {
            sig,
            bank: TermBank::new(),
            ord,
            abducibles,
        }
    }

    pub fn with_ordering(sig: Signature, ord: OrderingConfig) -> Self {
        let abducibles = sig.abducibles();
        Ctx {
            sig,
            bank: TermBank::new(),
            ord,
            abducibles,
        }
    }

    /// The declared abducible constants, cached.
    pub fn abducibles(&self) -> &[terms::SymbolId] {
        &self.abducibles
    }

    /// Declares a symbol after construction, keeping the ordering config
    /// consistent with the grown signature.
    pub fn declare(
        &mut self,
        name: &str,
        arity: usize,
        kind: terms::SymbolKind,
    ) -> Result<terms::SymbolId, TermError> {
        let id = self.sig.declare(name, arity, kind)?;
        self.ord = self.ord.rebuilt_for(&self.sig);
        self.abducibles = self.sig.abducibles();
        Ok(id)
    }

    /// Canonically oriented literal over this context's total order.
    pub fn literal(&self, a: TermId, b: TermId, positive: bool) -> Result<LitBuild, TermError> {
        Literal::new_with(&self.bank, &self.sig, a, b, positive, |s, t| {
            self.ord.total_cmp(&self.sig, &self.bank, s, t)
        })
    }

    /// Builds a clause from literal outcomes; `None` when the clause is a
    /// tautology (`true = true` member).
    pub fn clause(&self, parts: Vec<LitBuild>) -> Option<Clause> {
        let mut lits = Vec::new();
        for p in parts {
            match p {
                LitBuild::Lit(l) => lits.push(l),
                LitBuild::Dropped => {}
                LitBuild::TautologyMarker => return None,
            }
        }
        Some(Clause::new(lits))
    }
}
