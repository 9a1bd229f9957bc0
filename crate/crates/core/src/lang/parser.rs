//! Recursive-descent parser for conditions, filters, queries and effect
//! statements.
//!
//! The user-facing condition grammar is conjunctive: `parse_condition`
//! rejects disjunction and negation outright. `parse_condition_full`
//! additionally accepts `OR`, which generated complements need.

use std::collections::BTreeSet;

use crate::lang::ast::{AttrRef, Condition, ConditionalUpdate, Effect, Filter, Query, Term};
use crate::lang::lexer::{describe, lex, Kw, Sym, Tok, Token};
use crate::lang::LangError;
use crate::value::{ArithOp, CompareOp, Value};

pub fn parse_condition(text: &str) -> Result<Condition, LangError> {
    let tokens = lex_surface(text)?;
    let mut p = Parser::new(tokens);
    let cond = p.condition()?;
    p.expect_end()?;
    Ok(cond)
}

/// Internal-grammar variant admitting `OR` (complements of conjunctions).
pub fn parse_condition_full(text: &str) -> Result<Condition, LangError> {
    let tokens = lex_checked(text)?;
    let mut p = Parser::new(tokens);
    let cond = p.condition()?;
    p.expect_end()?;
    Ok(cond)
}

pub fn parse_term(text: &str) -> Result<Term, LangError> {
    let tokens = lex_checked(text)?;
    let mut p = Parser::new(tokens);
    let term = p.term()?;
    p.expect_end()?;
    Ok(term)
}

pub fn parse_query(text: &str) -> Result<Query, LangError> {
    let tokens = lex_checked(text)?;
    let mut p = Parser::new(tokens);
    let q = p.query()?;
    p.expect_end()?;
    Ok(q)
}

/// Parses a filter (conditions plus tuple-membership atoms); the grammar of
/// property documents.
pub fn parse_filter(text: &str) -> Result<Filter, LangError> {
    let tokens = lex_checked(text)?;
    let mut p = Parser::new(tokens);
    let f = p.filter()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses a `;`-separated list of effect statements and applies the
/// grammar-level static rules (single assignment per variable, placeholder
/// totality).
pub fn parse_effects(text: &str) -> Result<Vec<Effect>, LangError> {
    let tokens = lex_checked(text)?;
    let mut p = Parser::new(tokens);
    let mut stmts = Vec::new();
    loop {
        while p.eat_sym(Sym::Semicolon) {}
        if p.at_end() {
            break;
        }
        stmts.push(p.effect()?);
        if !p.at_end() && !p.eat_sym(Sym::Semicolon) {
            return Err(p.err_here("expected ';' between statements"));
        }
    }
    check_effects(&stmts)?;
    Ok(stmts)
}

/// Grammar-level statement rules, also applied to programmatically built
/// effects.
pub fn check_effects(stmts: &[Effect]) -> Result<(), LangError> {
    let mut assigned = BTreeSet::new();
    for stmt in stmts {
        match stmt {
            Effect::Assign { var, .. } => {
                if !assigned.insert(var.clone()) {
                    return Err(LangError::Static(format!(
                        "process variable '{var}' is assigned more than once in a single effect"
                    )));
                }
            }
            Effect::Update(upd) => check_update(upd)?,
            _ => {}
        }
    }
    Ok(())
}

fn check_update(upd: &ConditionalUpdate) -> Result<(), LangError> {
    let placeholders: Vec<&String> = upd.set.iter().map(|(_, p)| p).collect();
    let mut check_assigns = |assigns: &[(String, Term)], what: &str| -> Result<(), LangError> {
        for (ph, _) in assigns {
            if !placeholders.contains(&ph) {
                return Err(LangError::Static(format!(
                    "placeholder '@{ph}' in {what} is not named in the SET clause"
                )));
            }
        }
        for ph in &placeholders {
            if !assigns.iter().any(|(p, _)| p == *ph) {
                return Err(LangError::Static(format!(
                    "placeholder '@{ph}' is not bound in {what}"
                )));
            }
        }
        Ok(())
    };
    for (i, (_, assigns)) in upd.branches.iter().enumerate() {
        check_assigns(assigns, &format!("WHEN branch {}", i + 1))?;
    }
    check_assigns(&upd.else_branch, "the ELSE branch")?;
    Ok(())
}

fn lex_checked(text: &str) -> Result<Vec<Token>, LangError> {
    let tokens = lex(text)?;
    for t in &tokens {
        if t.tok == Tok::Keyword(Kw::Not) {
            return Err(LangError::parse(
                t.line,
                t.col,
                "negation is not part of the language; use the complementary comparison",
            ));
        }
    }
    Ok(tokens)
}

fn lex_surface(text: &str) -> Result<Vec<Token>, LangError> {
    let tokens = lex_checked(text)?;
    for t in &tokens {
        if t.tok == Tok::Keyword(Kw::Or) {
            return Err(LangError::parse(
                t.line,
                t.col,
                "disjunction is not allowed in conditions",
            ));
        }
    }
    Ok(tokens)
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(tokens: Vec<Token>) -> Parser {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.pos + 1).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn err_here(&self, msg: impl Into<String>) -> LangError {
        match self.tokens.get(self.pos) {
            Some(t) => LangError::parse(
                t.line,
                t.col,
                format!("{} (found {})", msg.into(), describe(&t.tok)),
            ),
            None => {
                let (line, col) = self
                    .tokens
                    .last()
                    .map(|t| (t.line, t.col + 1))
                    .unwrap_or((1, 1));
                LangError::parse(line, col, format!("{} (found end of input)", msg.into()))
            }
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), LangError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err_here("unexpected trailing input"))
        }
    }

    fn eat_sym(&mut self, sym: Sym) -> bool {
        if self.peek() == Some(&Tok::Sym(sym)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: Kw) -> bool {
        if self.peek() == Some(&Tok::Keyword(kw)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, sym: Sym) -> Result<(), LangError> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            Err(self.err_here(format!("expected '{}'", sym.text())))
        }
    }

    fn expect_kw(&mut self, kw: Kw) -> Result<(), LangError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.err_here(format!("expected '{}'", kw.text())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LangError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Token {
                    tok: Tok::Ident(name),
                    ..
                }) = self.next()
                else {
                    unreachable!()
                };
                Ok(name)
            }
            _ => Err(self.err_here(format!("expected {what}"))),
        }
    }

    // -- conditions ---------------------------------------------------------

    pub(crate) fn condition(&mut self) -> Result<Condition, LangError> {
        let mut parts = vec![self.cond_and()?];
        while self.eat_kw(Kw::Or) {
            parts.push(self.cond_and()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Condition::Or(parts)
        })
    }

    fn cond_and(&mut self) -> Result<Condition, LangError> {
        let mut parts = vec![self.cond_primary()?];
        while self.eat_kw(Kw::And) {
            parts.push(self.cond_primary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Condition::And(parts)
        })
    }

    fn cond_primary(&mut self) -> Result<Condition, LangError> {
        // TRUE/FALSE are conditions unless a comparison operator follows,
        // in which case they are boolean constant terms of an atom.
        match self.peek() {
            Some(Tok::Keyword(kw @ (Kw::True | Kw::False))) => {
                let is_true = *kw == Kw::True;
                if !matches!(self.peek2(), Some(Tok::Sym(s)) if cmp_of(*s).is_some()) {
                    self.pos += 1;
                    return Ok(if is_true {
                        Condition::True
                    } else {
                        Condition::False
                    });
                }
            }
            Some(Tok::Sym(Sym::LParen)) => {
                // Either a parenthesised condition group or an atom whose
                // left term is parenthesised arithmetic; try the group first.
                let saved = self.pos;
                self.pos += 1;
                if let Ok(cond) = self.condition() {
                    if self.eat_sym(Sym::RParen)
                        && !matches!(self.peek(), Some(Tok::Sym(s)) if cmp_of(*s).is_some())
                    {
                        return Ok(cond);
                    }
                }
                self.pos = saved;
            }
            _ => {}
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Condition, LangError> {
        let lhs = self.term()?;
        let op = self.compare_op()?;
        let rhs = self.term()?;
        check_literal_atom(&lhs, op, &rhs)?;
        Ok(Condition::Atom { lhs, op, rhs })
    }

    fn compare_op(&mut self) -> Result<CompareOp, LangError> {
        if let Some(Tok::Sym(s)) = self.peek() {
            if let Some(op) = cmp_of(*s) {
                self.pos += 1;
                return Ok(op);
            }
        }
        Err(self.err_here("expected a comparison operator"))
    }

    // -- terms --------------------------------------------------------------

    pub(crate) fn term(&mut self) -> Result<Term, LangError> {
        let mut lhs = self.term_mul()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(Sym::Plus)) => ArithOp::Add,
                Some(Tok::Sym(Sym::Minus)) => ArithOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term_mul()?;
            lhs = Term::Arith(Box::new(lhs), op, Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term_mul(&mut self) -> Result<Term, LangError> {
        let mut lhs = self.term_primary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(Sym::Star)) => ArithOp::Mul,
                Some(Tok::Sym(Sym::Slash)) => ArithOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term_primary()?;
            lhs = Term::Arith(Box::new(lhs), op, Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term_primary(&mut self) -> Result<Term, LangError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Term::Const(Value::Int(v)))
            }
            Some(Tok::Float(v)) => {
                self.pos += 1;
                Ok(Term::Const(Value::Double(v)))
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Term::Const(Value::Str(s)))
            }
            Some(Tok::Keyword(Kw::True)) => {
                self.pos += 1;
                Ok(Term::Const(Value::Bool(true)))
            }
            Some(Tok::Keyword(Kw::False)) => {
                self.pos += 1;
                Ok(Term::Const(Value::Bool(false)))
            }
            Some(Tok::Sym(Sym::Minus)) => {
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::Int(v)) => {
                        self.pos += 1;
                        Ok(Term::Const(Value::Int(-v)))
                    }
                    Some(Tok::Float(v)) => {
                        self.pos += 1;
                        Ok(Term::Const(Value::Double(-v)))
                    }
                    _ => Err(self.err_here("'-' must be followed by a numeric literal")),
                }
            }
            Some(Tok::Sym(Sym::LParen)) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect_sym(Sym::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident("a name")?;
                if self.peek() == Some(&Tok::Sym(Sym::Dot)) {
                    self.pos += 1;
                    let attr = self.ident("an attribute name")?;
                    Ok(Term::Attr(Some(name), attr))
                } else {
                    Ok(Term::Var(name))
                }
            }
            _ => Err(self.err_here("expected a term")),
        }
    }

    // -- filters ------------------------------------------------------------

    pub(crate) fn filter(&mut self) -> Result<Filter, LangError> {
        let mut f = self.filter_atom()?;
        while self.eat_kw(Kw::And) {
            let rhs = self.filter_atom()?;
            f = Filter::And(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn filter_atom(&mut self) -> Result<Filter, LangError> {
        if self.eat_kw(Kw::Tuple) {
            self.expect_sym(Sym::LParen)?;
            let mut terms = vec![self.term()?];
            while self.eat_sym(Sym::Comma) {
                terms.push(self.term()?);
            }
            self.expect_sym(Sym::RParen)?;
            self.expect_kw(Kw::In)?;
            let relation = self.ident("a relation name")?;
            self.expect_sym(Sym::Dot)?;
            self.expect_sym(Sym::LParen)?;
            let mut attrs = vec![self.ident("an attribute name")?];
            while self.eat_sym(Sym::Comma) {
                attrs.push(self.ident("an attribute name")?);
            }
            self.expect_sym(Sym::RParen)?;
            if terms.len() != attrs.len() {
                return Err(LangError::Static(format!(
                    "TUPLE arity {} does not match the {} projected attributes",
                    terms.len(),
                    attrs.len()
                )));
            }
            return Ok(Filter::TupleIn {
                terms,
                relation,
                attrs,
            });
        }
        if self.peek() == Some(&Tok::Sym(Sym::LParen)) {
            // Parenthesised condition group used as one filter atom.
            let saved = self.pos;
            self.pos += 1;
            if let Ok(cond) = self.condition() {
                if self.eat_sym(Sym::RParen)
                    && !matches!(self.peek(), Some(Tok::Sym(s)) if cmp_of(*s).is_some())
                {
                    return Ok(Filter::Cond(cond));
                }
            }
            self.pos = saved;
        }
        let cond = self.cond_single()?;
        Ok(Filter::Cond(cond))
    }

    /// A condition without top-level AND (the filter layer owns the chain).
    fn cond_single(&mut self) -> Result<Condition, LangError> {
        match self.peek() {
            Some(Tok::Keyword(kw @ (Kw::True | Kw::False))) => {
                let is_true = *kw == Kw::True;
                if !matches!(self.peek2(), Some(Tok::Sym(s)) if cmp_of(*s).is_some()) {
                    self.pos += 1;
                    return Ok(if is_true {
                        Condition::True
                    } else {
                        Condition::False
                    });
                }
            }
            _ => {}
        }
        self.atom()
    }

    // -- queries ------------------------------------------------------------

    pub(crate) fn query(&mut self) -> Result<Query, LangError> {
        self.expect_kw(Kw::Select)?;
        let mut select = vec![self.attr_ref()?];
        while self.eat_sym(Sym::Comma) {
            select.push(self.attr_ref()?);
        }
        self.expect_kw(Kw::From)?;
        let mut from = vec![self.ident("a relation name")?];
        while self.eat_sym(Sym::Comma) {
            from.push(self.ident("a relation name")?);
        }
        let filter = if self.eat_kw(Kw::Where) {
            self.filter()?
        } else {
            Filter::Cond(Condition::True)
        };
        Ok(Query {
            select,
            from,
            filter,
        })
    }

    fn attr_ref(&mut self) -> Result<AttrRef, LangError> {
        let first = self.ident("an attribute reference")?;
        if self.eat_sym(Sym::Dot) {
            let attr = self.ident("an attribute name")?;
            Ok(AttrRef {
                relation: Some(first),
                attr,
            })
        } else {
            Ok(AttrRef {
                relation: None,
                attr: first,
            })
        }
    }

    // -- effects ------------------------------------------------------------

    fn effect(&mut self) -> Result<Effect, LangError> {
        match self.peek() {
            Some(Tok::Keyword(Kw::Insert)) => self.insert(),
            Some(Tok::Keyword(Kw::Delete)) => self.delete(),
            Some(Tok::Keyword(Kw::Update)) => self.update(),
            Some(Tok::Ident(_)) => {
                let var = self.ident("a variable name")?;
                self.expect_sym(Sym::Eq)?;
                let term = self.term()?;
                Ok(Effect::Assign { var, term })
            }
            _ => Err(self.err_here("expected an effect statement")),
        }
    }

    fn insert(&mut self) -> Result<Effect, LangError> {
        self.expect_kw(Kw::Insert)?;
        let mut values = vec![self.term()?];
        while self.eat_sym(Sym::Comma) {
            values.push(self.term()?);
        }
        self.expect_kw(Kw::Into)?;
        let table = self.ident("a table name")?;
        Ok(Effect::Insert { values, table })
    }

    fn delete(&mut self) -> Result<Effect, LangError> {
        self.expect_kw(Kw::Delete)?;
        self.expect_kw(Kw::From)?;
        let table = self.ident("a table name")?;
        self.expect_kw(Kw::Where)?;
        let filter = self.condition()?;
        Ok(Effect::Delete { filter, table })
    }

    fn update(&mut self) -> Result<Effect, LangError> {
        self.expect_kw(Kw::Update)?;
        let table = self.ident("a table name")?;
        self.expect_kw(Kw::Set)?;
        let mut set = vec![self.set_item(&table)?];
        while self.eat_sym(Sym::Comma) {
            set.push(self.set_item(&table)?);
        }
        self.expect_kw(Kw::Where)?;
        self.expect_kw(Kw::Case)?;
        let mut branches = Vec::new();
        while self.eat_kw(Kw::When) {
            let filter = self.filter()?;
            self.expect_kw(Kw::Then)?;
            let assigns = self.placeholder_assigns()?;
            branches.push((filter, assigns));
        }
        if branches.is_empty() {
            return Err(self.err_here("expected at least one WHEN branch"));
        }
        self.expect_kw(Kw::Else)?;
        let else_branch = self.placeholder_assigns()?;
        Ok(Effect::Update(ConditionalUpdate {
            table,
            set,
            branches,
            else_branch,
        }))
    }

    fn set_item(&mut self, table: &str) -> Result<(String, String), LangError> {
        let first = self.ident("an attribute name")?;
        let attr = if self.eat_sym(Sym::Dot) {
            if first != table {
                return Err(LangError::Static(format!(
                    "SET clause may only qualify attributes with the updated table \
                     ('{table}'), found '{first}'"
                )));
            }
            self.ident("an attribute name")?
        } else {
            first
        };
        self.expect_sym(Sym::Eq)?;
        match self.next() {
            Some(Token {
                tok: Tok::Placeholder(ph),
                ..
            }) => Ok((attr, ph)),
            _ => Err(self.err_here("expected a placeholder ('@name')")),
        }
    }

    fn placeholder_assigns(&mut self) -> Result<Vec<(String, Term)>, LangError> {
        let mut out = Vec::new();
        loop {
            match self.next() {
                Some(Token {
                    tok: Tok::Placeholder(ph),
                    ..
                }) => {
                    self.expect_sym(Sym::Eq)?;
                    let term = self.term()?;
                    out.push((ph, term));
                }
                _ => return Err(self.err_here("expected a placeholder assignment")),
            }
            if !self.eat_sym(Sym::Comma) {
                break;
            }
        }
        Ok(out)
    }
}

fn cmp_of(sym: Sym) -> Option<CompareOp> {
    Some(match sym {
        Sym::Eq => CompareOp::Eq,
        Sym::Neq => CompareOp::Neq,
        Sym::Gt => CompareOp::Gt,
        Sym::Lt => CompareOp::Lt,
        Sym::Le => CompareOp::Le,
        Sym::Ge => CompareOp::Ge,
        _ => return None,
    })
}

/// Statically known operand types must agree; string/numeric mixes are
/// rejected at parse time, the rest at resolution.
fn check_literal_atom(lhs: &Term, op: CompareOp, rhs: &Term) -> Result<(), LangError> {
    if let (Term::Const(a), Term::Const(b)) = (lhs, rhs) {
        if crate::value::compare(op, a, b).is_err() {
            return Err(LangError::Type(format!(
                "incompatible operand types: {} {} {}",
                a.prim_type(),
                op.symbol(),
                b.prim_type()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_simple_atom() {
        let cond = parse_condition("score > 3.5").unwrap();
        assert_eq!(
            cond,
            Condition::Atom {
                lhs: Term::Var("score".into()),
                op: CompareOp::Gt,
                rhs: Term::Const(Value::Double(3.5)),
            }
        );
    }

    #[test]
    fn true_shorthand() {
        assert_eq!(parse_condition("TRUE").unwrap(), Condition::True);
        assert_eq!(parse_condition("false").unwrap(), Condition::False);
    }

    #[test]
    fn conjunction_is_flattened() {
        let cond = parse_condition("a = b AND c <= d").unwrap();
        match cond {
            Condition::And(parts) => {
                assert_eq!(parts.len(), 2);
                assert!(matches!(
                    parts[0],
                    Condition::Atom {
                        op: CompareOp::Eq,
                        ..
                    }
                ));
                assert!(matches!(
                    parts[1],
                    Condition::Atom {
                        op: CompareOp::Le,
                        ..
                    }
                ));
            }
            other => panic!("expected And, got {other:?}"),
        }
    }

    #[test]
    fn surface_rejects_or_and_not() {
        assert!(matches!(
            parse_condition("a = 1 OR b = 2"),
            Err(LangError::Parse { .. })
        ));
        assert!(matches!(
            parse_condition("NOT a = 1"),
            Err(LangError::Parse { .. })
        ));
        assert!(parse_condition_full("a = 1 OR b = 2").is_ok());
    }

    #[test]
    fn arithmetic_inside_atoms() {
        let cond = parse_condition("culturalFit + teamCollaboration + finalEvaluation >= 11")
            .unwrap();
        match cond {
            Condition::Atom { lhs, .. } => {
                let mut vars = Vec::new();
                lhs.collect_vars(&mut vars);
                assert_eq!(vars, ["culturalFit", "teamCollaboration", "finalEvaluation"]);
            }
            other => panic!("expected atom, got {other:?}"),
        }
    }

    #[test]
    fn parenthesised_term_on_the_left() {
        let cond = parse_condition("(a + b) > c").unwrap();
        assert!(matches!(
            cond,
            Condition::Atom {
                lhs: Term::Arith(..),
                ..
            }
        ));
    }

    #[test]
    fn literal_type_mismatch_is_rejected() {
        assert!(matches!(
            parse_condition("'open' = 3"),
            Err(LangError::Type(_))
        ));
    }

    #[test]
    fn parses_query_with_default_where() {
        let q = parse_query("SELECT offerID FROM Offers").unwrap();
        assert_eq!(q.select.len(), 1);
        assert_eq!(q.select[0].attr, "offerID");
        assert_eq!(q.from, ["Offers"]);
        assert!(q.filter.is_true());
    }

    #[test]
    fn query_without_relation_is_an_error() {
        assert!(matches!(
            parse_query("SELECT x FROM"),
            Err(LangError::Parse { .. })
        ));
    }

    #[test]
    fn tuple_membership_arity() {
        let q = parse_query("SELECT a.n FROM R WHERE TUPLE(v1, v2) IN R.(a, b)").unwrap();
        match q.filter {
            Filter::TupleIn { terms, attrs, .. } => {
                assert_eq!(terms.len(), 2);
                assert_eq!(attrs, ["a", "b"]);
            }
            other => panic!("expected TupleIn, got {other:?}"),
        }
        assert!(matches!(
            parse_query("SELECT a.n FROM R WHERE TUPLE(v1) IN R.(a, b)"),
            Err(LangError::Static(_))
        ));
    }

    #[test]
    fn parses_assignment_and_insert() {
        let stmts = parse_effects("finalScore = score; INSERT name, email INTO Candidate").unwrap();
        assert_eq!(stmts.len(), 2);
        assert!(matches!(&stmts[0], Effect::Assign { var, .. } if var == "finalScore"));
        assert!(
            matches!(&stmts[1], Effect::Insert { values, table } if values.len() == 2 && table == "Candidate")
        );
    }

    #[test]
    fn double_assignment_is_rejected() {
        assert!(matches!(
            parse_effects("x = 1; x = 2"),
            Err(LangError::Static(_))
        ));
    }

    #[test]
    fn parses_conditional_update() {
        let text = "UPDATE Candidate SET status = @v WHERE \
                    CASE WHEN offerID = chosen THEN @v = 'accepted' \
                    ELSE @v = status";
        let stmts = parse_effects(text).unwrap();
        match &stmts[0] {
            Effect::Update(upd) => {
                assert_eq!(upd.table, "Candidate");
                assert_eq!(upd.set, vec![("status".into(), "v".into())]);
                assert_eq!(upd.branches.len(), 1);
                assert_eq!(upd.else_branch.len(), 1);
            }
            other => panic!("expected update, got {other:?}"),
        }
    }

    #[test]
    fn update_without_else_is_rejected() {
        let text = "UPDATE T SET a = @v WHERE CASE WHEN x = 1 THEN @v = 2";
        assert!(parse_effects(text).is_err());
    }

    #[test]
    fn unbound_placeholder_is_rejected() {
        let text = "UPDATE T SET a = @v, b = @w WHERE \
                    CASE WHEN x = 1 THEN @v = 2 ELSE @v = 3, @w = 4";
        assert!(matches!(parse_effects(text), Err(LangError::Static(_))));
    }
}
