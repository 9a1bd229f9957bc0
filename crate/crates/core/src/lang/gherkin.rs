//! Line-oriented scenario syntax for conditional bulk updates.
//!
//! Grammar (keywords case-insensitive, one clause per line):
//!
//! ```text
//! When <condition> Then set <attr> to <term> [and set <attr> to <term>]*
//! ...                                               (one or more When lines)
//! Otherwise set <attr> to <term> [and set <attr> to <term>]*
//! ```
//!
//! Every clause must assign the same attribute set; the `Otherwise` clause
//! is mandatory so the translated update always has a total ELSE branch.

use crate::lang::ast::{Condition, ConditionalUpdate, Filter, Term};
use crate::lang::lexer::{lex, Kw, Sym, Tok, Token};
use crate::lang::parser::Parser;
use crate::lang::LangError;

fn gherkin_err(clause: usize, message: impl Into<String>) -> LangError {
    LangError::Gherkin {
        clause,
        message: message.into(),
    }
}

struct Clause {
    condition: Option<Condition>,
    assigns: Vec<(String, Term)>,
}

/// Parses a scenario into a conditional update on `table`. Conditions stay
/// unresolved; callers resolve them against the table's attributes and the
/// task scope.
pub fn parse_gherkin(text: &str, table: &str) -> Result<ConditionalUpdate, LangError> {
    let mut clauses = Vec::new();
    let mut saw_otherwise = false;
    let mut clause_no = 0usize;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        clause_no += 1;
        let tokens =
            lex(line).map_err(|e| gherkin_err(clause_no, format!("cannot read clause: {e}")))?;
        let clause = parse_clause(&tokens, clause_no)?;
        if clause.condition.is_none() {
            if saw_otherwise {
                return Err(gherkin_err(clause_no, "more than one Otherwise clause"));
            }
            saw_otherwise = true;
        } else if saw_otherwise {
            return Err(gherkin_err(
                clause_no,
                "When clauses must precede the Otherwise clause",
            ));
        }
        clauses.push(clause);
    }
    if clauses.is_empty() {
        return Err(gherkin_err(0, "empty scenario"));
    }
    if !saw_otherwise {
        return Err(gherkin_err(
            clause_no + 1,
            "missing mandatory Otherwise clause",
        ));
    }
    if clauses.len() == 1 {
        return Err(gherkin_err(1, "expected at least one When clause"));
    }

    // The SET attribute list is the first clause's assignment order; every
    // clause must bind exactly that set.
    let set_attrs: Vec<String> = clauses[0].assigns.iter().map(|(a, _)| a.clone()).collect();
    for (idx, clause) in clauses.iter().enumerate() {
        let attrs: Vec<&String> = clause.assigns.iter().map(|(a, _)| a).collect();
        for attr in &set_attrs {
            if !attrs.contains(&attr) {
                return Err(gherkin_err(
                    idx + 1,
                    format!("clause does not assign attribute '{attr}'"),
                ));
            }
        }
        for attr in attrs {
            if !set_attrs.contains(attr) {
                return Err(gherkin_err(
                    idx + 1,
                    format!("attribute '{attr}' is not assigned by the first clause"),
                ));
            }
        }
    }

    let set: Vec<(String, String)> = set_attrs.iter().map(|a| (a.clone(), a.clone())).collect();
    let mut branches = Vec::new();
    let mut else_branch = Vec::new();
    for clause in clauses {
        let assigns: Vec<(String, Term)> = clause.assigns;
        match clause.condition {
            Some(cond) => branches.push((Filter::Cond(cond), assigns)),
            None => else_branch = assigns,
        }
    }
    Ok(ConditionalUpdate {
        table: table.to_string(),
        set,
        branches,
        else_branch,
    })
}

fn parse_clause(tokens: &[Token], clause_no: usize) -> Result<Clause, LangError> {
    let Some(first) = tokens.first() else {
        return Err(gherkin_err(clause_no, "empty clause"));
    };
    match first.tok {
        Tok::Keyword(Kw::When) => {
            let then_pos = tokens
                .iter()
                .position(|t| t.tok == Tok::Keyword(Kw::Then))
                .ok_or_else(|| gherkin_err(clause_no, "When clause is missing 'Then'"))?;
            let cond_tokens = tokens[1..then_pos].to_vec();
            if cond_tokens.is_empty() {
                return Err(gherkin_err(clause_no, "When clause has no condition"));
            }
            if let Some(t) = cond_tokens.iter().find(|t| t.tok == Tok::Keyword(Kw::Or)) {
                return Err(gherkin_err(
                    clause_no,
                    format!(
                        "disjunction is not allowed in conditions (column {})",
                        t.col
                    ),
                ));
            }
            let mut p = Parser::new(cond_tokens);
            let condition = p
                .condition()
                .and_then(|c| p.expect_end().map(|_| c))
                .map_err(|e| gherkin_err(clause_no, format!("bad condition: {e}")))?;
            let assigns = parse_assigns(&tokens[then_pos + 1..], clause_no)?;
            Ok(Clause {
                condition: Some(condition),
                assigns,
            })
        }
        Tok::Keyword(Kw::Otherwise) => {
            let assigns = parse_assigns(&tokens[1..], clause_no)?;
            Ok(Clause {
                condition: None,
                assigns,
            })
        }
        _ => Err(gherkin_err(
            clause_no,
            "clause must start with 'When' or 'Otherwise'",
        )),
    }
}

/// `set <attr> to <term> [and set <attr> to <term>]*`
fn parse_assigns(tokens: &[Token], clause_no: usize) -> Result<Vec<(String, Term)>, LangError> {
    let mut assigns = Vec::new();
    let mut pos = 0;
    loop {
        match tokens.get(pos).map(|t| &t.tok) {
            Some(Tok::Keyword(Kw::Set)) => pos += 1,
            _ => return Err(gherkin_err(clause_no, "expected 'set'")),
        }
        let attr = match tokens.get(pos).map(|t| &t.tok) {
            Some(Tok::Ident(name)) => name.clone(),
            _ => return Err(gherkin_err(clause_no, "expected an attribute name")),
        };
        pos += 1;
        match tokens.get(pos).map(|t| &t.tok) {
            Some(Tok::Keyword(Kw::To)) => pos += 1,
            _ => return Err(gherkin_err(clause_no, "expected 'to'")),
        }
        // The term runs until the next top-level 'and' or the end.
        let mut depth = 0usize;
        let start = pos;
        while let Some(t) = tokens.get(pos) {
            match t.tok {
                Tok::Sym(Sym::LParen) => depth += 1,
                Tok::Sym(Sym::RParen) => depth = depth.saturating_sub(1),
                Tok::Keyword(Kw::And) if depth == 0 => break,
                _ => {}
            }
            pos += 1;
        }
        if start == pos {
            return Err(gherkin_err(clause_no, "expected a value after 'to'"));
        }
        let mut p = Parser::new(tokens[start..pos].to_vec());
        let term = p
            .term()
            .and_then(|t| p.expect_end().map(|_| t))
            .map_err(|e| gherkin_err(clause_no, format!("bad value: {e}")))?;
        if assigns.iter().any(|(a, _)| a == &attr) {
            return Err(gherkin_err(
                clause_no,
                format!("attribute '{attr}' is assigned twice"),
            ));
        }
        assigns.push((attr, term));
        match tokens.get(pos).map(|t| &t.tok) {
            Some(Tok::Keyword(Kw::And)) => pos += 1,
            None => break,
            _ => return Err(gherkin_err(clause_no, "expected 'and' or end of clause")),
        }
    }
    Ok(assigns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{CompareOp, Value};

    #[test]
    fn translates_a_one_branch_scenario() {
        let text = "When offerStatus = 'open' Then set offerStatus to 'pending'\n\
                    Otherwise set offerStatus to offerStatus";
        let upd = parse_gherkin(text, "Offers").unwrap();
        assert_eq!(upd.table, "Offers");
        assert_eq!(upd.set, vec![("offerStatus".into(), "offerStatus".into())]);
        assert_eq!(upd.branches.len(), 1);
        match &upd.branches[0].0 {
            Filter::Cond(Condition::Atom { op, rhs, .. }) => {
                assert_eq!(*op, CompareOp::Eq);
                assert_eq!(*rhs, Term::Const(Value::Str("open".into())));
            }
            other => panic!("unexpected filter {other:?}"),
        }
        assert_eq!(
            upd.branches[0].1,
            vec![(
                "offerStatus".to_string(),
                Term::Const(Value::Str("pending".into()))
            )]
        );
        assert_eq!(
            upd.else_branch,
            vec![(
                "offerStatus".into(),
                Term::Var("offerStatus".into())
            )]
        );
    }

    #[test]
    fn missing_otherwise_is_an_error() {
        let text = "When a = 1 Then set x to 2";
        let err = parse_gherkin(text, "T").unwrap_err();
        assert!(matches!(err, LangError::Gherkin { .. }));
    }

    #[test]
    fn partial_assignment_reports_the_clause() {
        let text = "When a = 1 Then set x to 1 and set y to 2\n\
                    Otherwise set x to x";
        match parse_gherkin(text, "T").unwrap_err() {
            LangError::Gherkin { clause, message } => {
                assert_eq!(clause, 2);
                assert!(message.contains("'y'"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn multiple_when_branches_keep_order() {
        let text = "When score >= 4 Then set grade to 'A'\n\
                    When score >= 2 Then set grade to 'B'\n\
                    Otherwise set grade to 'C'";
        let upd = parse_gherkin(text, "T").unwrap();
        assert_eq!(upd.branches.len(), 2);
    }
}
