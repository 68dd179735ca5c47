//! Problem files: a minimal line-based format with abducible and
//! predicate declarations, clauses, and an optional ordering section.
//!
//! ```text
//! % comment
//! abducibles a, b, c;
//! predicate le/2;
//! weight f 2;
//! precedence f 10;
//! clause g(f(X)) = d | a != b | le(a,b) | ~le(b,a);
//! ```
//!
//! Identifiers starting with an uppercase letter are variables; everything
//! else must be declared or is inferred as a function symbol with the
//! arity it is first used at.

use std::collections::HashMap;
use std::fmt;

use crate::ordering::OrderingConfig;
use crate::terms::{Clause, LitBuild, Signature, SymbolKind, TermId, Var};
use crate::Ctx;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AstTerm {
    Var(String),
    App(String, Vec<AstTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstLiteral {
    /// `None` right side marks a bare predicate atom.
    pub lhs: AstTerm,
    pub rhs: Option<AstTerm>,
    pub positive: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub abducibles: Vec<String>,
    pub predicates: Vec<(String, usize)>,
    pub weights: Vec<(String, u32)>,
    pub precedences: Vec<(String, i64)>,
    pub clauses: Vec<(usize, Vec<AstLiteral>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Ident,
    Comma,
    Semi,
    Pipe,
    LParen,
    RParen,
    Eq,
    Neq,
    Tilde,
    Slash,
    Minus,
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
    tok: Tok,
    text: String,
    tok_line: usize,
    tok_col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
            tok: Tok::Eof,
            text: String::new(),
            tok_line: 1,
            tok_col: 1,
        };
        lx.bump()?;
        Ok(lx)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.tok_line,
            col: self.tok_col,
            message: message.into(),
        }
    }

    fn advance_char(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek_char(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek_char() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.advance_char();
                }
                Some(b'%') => {
                    while let Some(c) = self.advance_char() {
                        if c == b'\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        self.tok_line = self.line;
        self.tok_col = self.col;
        self.text.clear();
        let c = match self.advance_char() {
            None => {
                self.tok = Tok::Eof;
                return Ok(());
            }
            Some(c) => c,
        };
        self.tok = match c {
            b',' => Tok::Comma,
            b';' => Tok::Semi,
            b'|' => Tok::Pipe,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'~' => Tok::Tilde,
            b'/' => Tok::Slash,
            b'-' => Tok::Minus,
            b'=' => Tok::Eq,
            b'!' => {
                if self.peek_char() == Some(b'=') {
                    self.advance_char();
                    Tok::Neq
                } else {
                    return Err(ParseError {
                        line: self.tok_line,
                        col: self.tok_col,
                        message: "expected `=` after `!`".into(),
                    });
                }
            }
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                self.text.push(c as char);
                while let Some(n) = self.peek_char() {
                    if n.is_ascii_alphanumeric() || n == b'_' {
                        self.text.push(n as char);
                        self.advance_char();
                    } else {
                        break;
                    }
                }
                Tok::Ident
            }
            other => {
                return Err(ParseError {
                    line: self.tok_line,
                    col: self.tok_col,
                    message: format!("unexpected character `{}`", other as char),
                });
            }
        };
        Ok(())
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<String, ParseError> {
        if self.tok != tok {
            return Err(self.error(format!("expected {what}")));
        }
        let text = self.text.clone();
        self.bump()?;
        Ok(text)
    }
}

fn is_variable_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

fn parse_term(lx: &mut Lexer) -> Result<AstTerm, ParseError> {
    let name = lx.expect(Tok::Ident, "a term")?;
    if is_variable_name(&name) {
        return Ok(AstTerm::Var(name));
    }
    if lx.tok == Tok::LParen {
        lx.bump()?;
        let mut args = Vec::new();
        loop {
            args.push(parse_term(lx)?);
            match lx.tok {
                Tok::Comma => {
                    lx.bump()?;
                }
                Tok::RParen => {
                    lx.bump()?;
                    break;
                }
                _ => return Err(lx.error("expected `,` or `)` in argument list")),
            }
        }
        Ok(AstTerm::App(name, args))
    } else {
        Ok(AstTerm::App(name, Vec::new()))
    }
}

fn parse_literal(lx: &mut Lexer) -> Result<AstLiteral, ParseError> {
    if lx.tok == Tok::Tilde {
        lx.bump()?;
        let atom = parse_term(lx)?;
        if matches!(atom, AstTerm::Var(_)) {
            return Err(lx.error("negated atom must be a predicate application"));
        }
        return Ok(AstLiteral {
            lhs: atom,
            rhs: None,
            positive: false,
        });
    }
    let lhs = parse_term(lx)?;
    match lx.tok {
        Tok::Eq => {
            lx.bump()?;
            let rhs = parse_term(lx)?;
            Ok(AstLiteral {
                lhs,
                rhs: Some(rhs),
                positive: true,
            })
        }
        Tok::Neq => {
            lx.bump()?;
            let rhs = parse_term(lx)?;
            Ok(AstLiteral {
                lhs,
                rhs: Some(rhs),
                positive: false,
            })
        }
        _ => {
            if matches!(lhs, AstTerm::Var(_)) {
                return Err(lx.error("a bare variable is not a literal"));
            }
            Ok(AstLiteral {
                lhs,
                rhs: None,
                positive: true,
            })
        }
    }
}

pub fn parse(text: &str) -> Result<ProblemFile, ParseError> {
    let mut lx = Lexer::new(text)?;
    let mut pf = ProblemFile::default();
    loop {
        match lx.tok {
            Tok::Eof => return Ok(pf),
            Tok::Ident => {}
            _ => return Err(lx.error("expected a declaration")),
        }
        let line = lx.tok_line;
        let keyword = lx.expect(Tok::Ident, "a declaration keyword")?;
        match keyword.as_str() {
            "abducibles" => loop {
                let name = lx.expect(Tok::Ident, "an abducible name")?;
                if is_variable_name(&name) {
                    return Err(lx.error("abducible names must not start uppercase"));
                }
                pf.abducibles.push(name);
                match lx.tok {
                    Tok::Comma => {
                        lx.bump()?;
                    }
                    Tok::Semi => {
                        lx.bump()?;
                        break;
                    }
                    _ => return Err(lx.error("expected `,` or `;`")),
                }
            },
            "predicate" => {
                let name = lx.expect(Tok::Ident, "a predicate name")?;
                if is_variable_name(&name) {
                    return Err(lx.error("predicate names must not start uppercase"));
                }
                lx.expect(Tok::Slash, "`/` before the arity")?;
                let arity_text = lx.expect(Tok::Ident, "an arity")?;
                let arity: usize = arity_text
                    .parse()
                    .map_err(|_| lx.error("arity must be a number"))?;
                lx.expect(Tok::Semi, "`;`")?;
                pf.predicates.push((name, arity));
            }
            "weight" => {
                let name = lx.expect(Tok::Ident, "a symbol name")?;
                let w_text = lx.expect(Tok::Ident, "a weight")?;
                let w: u32 = w_text
                    .parse()
                    .map_err(|_| lx.error("weight must be a number"))?;
                lx.expect(Tok::Semi, "`;`")?;
                pf.weights.push((name, w));
            }
            "precedence" => {
                let name = lx.expect(Tok::Ident, "a symbol name")?;
                let negative = if lx.tok == Tok::Minus {
                    lx.bump()?;
                    true
                } else {
                    false
                };
                let p_text = lx.expect(Tok::Ident, "a precedence index")?;
                let p: i64 = p_text
                    .parse()
                    .map_err(|_| lx.error("precedence must be a number"))?;
                lx.expect(Tok::Semi, "`;`")?;
                pf.precedences.push((name, if negative { -p } else { p }));
            }
            "clause" => {
                let mut lits = Vec::new();
                loop {
                    lits.push(parse_literal(&mut lx)?);
                    match lx.tok {
                        Tok::Pipe => {
                            lx.bump()?;
                        }
                        Tok::Semi => {
                            lx.bump()?;
                            break;
                        }
                        _ => return Err(lx.error("expected `|` or `;`")),
                    }
                }
                pf.clauses.push((line, lits));
            }
            other => {
                return Err(ParseError {
                    line,
                    col: 1,
                    message: format!("unknown declaration `{other}`"),
                });
            }
        }
    }
}

fn render_term(t: &AstTerm, out: &mut String) {
    match t {
        AstTerm::Var(v) => out.push_str(v),
        AstTerm::App(f, args) => {
            out.push_str(f);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    render_term(a, out);
                }
                out.push(')');
            }
        }
    }
}

/// Canonical text form; `parse(render(parse(t)))` equals `parse(t)`.
pub fn render(pf: &ProblemFile) -> String {
    let mut out = String::new();
    if !pf.abducibles.is_empty() {
        out.push_str(&format!("abducibles {};\n", pf.abducibles.join(", ")));
    }
    for (p, n) in &pf.predicates {
        out.push_str(&format!("predicate {p}/{n};\n"));
    }
    for (s, w) in &pf.weights {
        out.push_str(&format!("weight {s} {w};\n"));
    }
    for (s, p) in &pf.precedences {
        out.push_str(&format!("precedence {s} {p};\n"));
    }
    for (_, lits) in &pf.clauses {
        out.push_str("clause ");
        for (i, l) in lits.iter().enumerate() {
            if i > 0 {
                out.push_str(" | ");
            }
            match (&l.rhs, l.positive) {
                (Some(r), pos) => {
                    render_term(&l.lhs, &mut out);
                    out.push_str(if pos { " = " } else { " != " });
                    render_term(r, &mut out);
                }
                (None, true) => render_term(&l.lhs, &mut out),
                (None, false) => {
                    out.push('~');
                    render_term(&l.lhs, &mut out);
                }
            }
        }
        out.push_str(";\n");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for BuildError {}

/// A fully interned problem: the context plus the input clauses.
#[derive(Debug)]
pub struct Problem {
    pub ctx: Ctx,
    pub clauses: Vec<Clause>,
}

impl ProblemFile {
    /// Declares all symbols, builds the ordering, interns the clauses.
    /// Symbol inference: undeclared lowercase heads become function
    /// symbols with the arity of their first use.
    pub fn build(&self) -> Result<Problem, BuildError> {
        let mut sig = Signature::new();
        for name in &self.abducibles {
            sig.declare(name, 0, SymbolKind::Abducible)
                .map_err(|e| BuildError {
                    line: 0,
                    message: e.to_string(),
                })?;
        }
        for (name, arity) in &self.predicates {
            sig.declare(name, *arity, SymbolKind::Predicate)
                .map_err(|e| BuildError {
                    line: 0,
                    message: e.to_string(),
                })?;
        }
        // infer function symbols from the clause terms
        for (line, lits) in &self.clauses {
            for l in lits {
                declare_terms(&mut sig, &l.lhs, *line)?;
                if let Some(r) = &l.rhs {
                    declare_terms(&mut sig, r, *line)?;
                }
            }
        }
        let mut weights = HashMap::new();
        for (name, w) in &self.weights {
            let id = sig.lookup(name).ok_or_else(|| BuildError {
                line: 0,
                message: format!("weight for unknown symbol `{name}`"),
            })?;
            weights.insert(id, *w);
        }
        let mut precs = HashMap::new();
        for (name, p) in &self.precedences {
            let id = sig.lookup(name).ok_or_else(|| BuildError {
                line: 0,
                message: format!("precedence for unknown symbol `{name}`"),
            })?;
            precs.insert(id, *p);
        }
        let ord = OrderingConfig::build(&sig, &weights, &precs).map_err(|e| BuildError {
            line: 0,
            message: e.to_string(),
        })?;
        let mut ctx = Ctx::with_ordering(sig, ord);

        let mut clauses = Vec::new();
        let mut next_var = 0u32;
        for (line, lits) in &self.clauses {
            // variables are scoped per clause
            let mut var_map: HashMap<String, Var> = HashMap::new();
            let mut parts = Vec::new();
            for l in lits {
                let part = build_literal(&mut ctx, l, &mut var_map, &mut next_var, *line)?;
                parts.push(part);
            }
            // a clause with a true = true member is dropped as valid
            if let Some(c) = ctx.clause(parts) {
                clauses.push(c);
            }
        }
        Ok(Problem { ctx, clauses })
    }
}

/// Interns a clause AST against an existing context; symbols must already
/// be declared. Used by tests to build expected clauses for comparison.
pub fn intern_clause(
    ctx: &mut Ctx,
    lits: &[AstLiteral],
    next_var: &mut u32,
) -> Result<Option<Clause>, BuildError> {
    let mut var_map: HashMap<String, Var> = HashMap::new();
    let mut parts = Vec::new();
    for l in lits {
        if let AstTerm::App(name, _) = &l.lhs {
            if ctx.sig.lookup(name).is_none() {
                return Err(BuildError {
                    line: 0,
                    message: format!("unknown symbol `{name}`"),
                });
            }
        }
        parts.push(build_literal(ctx, l, &mut var_map, next_var, 0)?);
    }
    Ok(ctx.clause(parts))
}

fn declare_terms(sig: &mut Signature, t: &AstTerm, line: usize) -> Result<(), BuildError> {
    match t {
        AstTerm::Var(_) => Ok(()),
        AstTerm::App(name, args) => {
            match sig.lookup(name) {
                Some(id) => {
                    if sig.arity(id) != args.len() {
                        return Err(BuildError {
                            line,
                            message: format!(
                                "symbol `{}` used with arity {} but has arity {}",
                                name,
                                args.len(),
                                sig.arity(id)
                            ),
                        });
                    }
                }
                None => {
                    sig.declare(name, args.len(), SymbolKind::Function)
                        .map_err(|e| BuildError {
                            line,
                            message: e.to_string(),
                        })?;
                }
            }
            for a in args {
                declare_terms(sig, a, line)?;
            }
            Ok(())
        }
    }
}

fn build_term(
    ctx: &mut Ctx,
    t: &AstTerm,
    var_map: &mut HashMap<String, Var>,
    next_var: &mut u32,
    line: usize,
) -> Result<TermId, BuildError> {
    match t {
        AstTerm::Var(name) => {
            let v = *var_map.entry(name.clone()).or_insert_with(|| {
                let v = Var(*next_var);
                *next_var += 1;
                v
            });
            Ok(ctx.bank.var(v))
        }
        AstTerm::App(name, args) => {
            let id = ctx.sig.lookup(name).ok_or_else(|| BuildError {
                line,
                message: format!("unknown symbol `{name}`"),
            })?;
            let mut built = Vec::with_capacity(args.len());
            for a in args {
                built.push(build_term(ctx, a, var_map, next_var, line)?);
            }
            ctx.bank.app(&ctx.sig, id, built).map_err(|e| BuildError {
                line,
                message: e.to_string(),
            })
        }
    }
}

fn build_literal(
    ctx: &mut Ctx,
    l: &AstLiteral,
    var_map: &mut HashMap<String, Var>,
    next_var: &mut u32,
    line: usize,
) -> Result<LitBuild, BuildError> {
    match &l.rhs {
        None => {
            // bare predicate atom
            let name = match &l.lhs {
                AstTerm::App(name, _) => name.clone(),
                AstTerm::Var(_) => unreachable!("rejected by the parser"),
            };
            let id = ctx.sig.lookup(&name).ok_or_else(|| BuildError {
                line,
                message: format!("unknown symbol `{name}`"),
            })?;
            if ctx.sig.kind(id) != SymbolKind::Predicate {
                return Err(BuildError {
                    line,
                    message: format!("`{name}` is not a declared predicate"),
                });
            }
            let atom = build_term(ctx, &l.lhs, var_map, next_var, line)?;
            let tt = ctx.bank.true_term(&ctx.sig);
            ctx.literal(atom, tt, l.positive).map_err(|e| BuildError {
                line,
                message: e.to_string(),
            })
        }
        Some(r) => {
            let lhs = build_term(ctx, &l.lhs, var_map, next_var, line)?;
            let rhs = build_term(ctx, r, var_map, next_var, line)?;
            ctx.literal(lhs, rhs, l.positive).map_err(|e| BuildError {
                line,
                message: e.to_string(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_declarations_and_clauses() {
        let pf = parse("abducibles a,b,c; clause g(f(X)) = d;").unwrap();
        assert_eq!(pf.abducibles, vec!["a", "b", "c"]);
        assert_eq!(pf.clauses.len(), 1);
        let p = pf.build().unwrap();
        assert_eq!(p.clauses.len(), 1);
        assert!(!p.clauses[0].is_ground(&p.ctx.bank));
    }

    #[test]
    fn predicate_atoms_are_encoded() {
        let pf = parse("abducibles a,b; predicate p/1; clause p(a) | a != b;").unwrap();
        let p = pf.build().unwrap();
        assert_eq!(p.clauses.len(), 1);
        let clause = p.clauses[0].clone();
        assert_eq!(clause.len(), 2);
        let pred = clause
            .iter()
            .find(|l| l.is_predicate(&p.ctx.bank, &p.ctx.sig))
            .unwrap();
        assert!(pred.positive);
        assert!(p.ctx.bank.is_true(&p.ctx.sig, pred.rhs));
    }

    #[test]
    fn predicate_equations_are_rejected() {
        let pf = parse("predicate p/1; predicate q/1; clause p(X) = q(Y);").unwrap();
        assert!(pf.build().is_err());
    }

    #[test]
    fn arity_conflicts_are_rejected() {
        let pf = parse("clause f(a) = b | f(a,a) = b;").unwrap();
        let e = pf.build().unwrap_err();
        assert!(e.message.contains("arity"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse("clause f(a = b;").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.col > 1);
        let e = parse("abducibles a\nclause a = b;").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn render_parse_fixpoint() {
        let text =
            "abducibles a, b, c;\npredicate le/2;\nclause g(f(X)) = d | le(a,X);\nclause a != b;\n";
        let pf = parse(text).unwrap();
        let rendered = render(&pf);
        let pf2 = parse(&rendered).unwrap();
        // line numbers differ; compare everything else
        let strip = |p: &ProblemFile| {
            (
                p.abducibles.clone(),
                p.predicates.clone(),
                p.weights.clone(),
                p.precedences.clone(),
                p.clauses.iter().map(|(_, l)| l.clone()).collect::<Vec<_>>(),
            )
        };
        assert_eq!(strip(&pf), strip(&pf2));
        assert_eq!(rendered, render(&pf2));
    }

    #[test]
    fn ordering_section_is_applied() {
        let pf = parse("abducibles a,b; weight f 3; precedence g 5; clause f(a) = g(b);").unwrap();
        let p = pf.build().unwrap();
        let f = p.ctx.sig.lookup("f").unwrap();
        assert_eq!(p.ctx.ord.weight_of(f), 3);
    }

    #[test]
    fn variables_are_uppercase() {
        let pf = parse("clause f(X) = f(Y) | X = c;").unwrap();
        let p = pf.build().unwrap();
        let vars = p.clauses[0].vars(&p.ctx.bank);
        assert_eq!(vars.len(), 2);
    }
}
