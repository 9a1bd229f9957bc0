//! Canonical concrete syntax for the ASTs. Printing then reparsing yields a
//! structurally equal AST; encoded documents and golden files rely on this.

use crate::lang::ast::{AttrRef, Condition, ConditionalUpdate, Effect, Filter, Query, Term};

pub fn print_term(term: &Term) -> String {
    print_term_prec(term, 0)
}

/// Precedence: 0 additive, 1 multiplicative, 2 primary.
fn print_term_prec(term: &Term, min_prec: u8) -> String {
    match term {
        Term::Const(v) => v.literal(),
        Term::Var(name) => name.clone(),
        Term::Attr(Some(rel), attr) => format!("{rel}.{attr}"),
        Term::Attr(None, attr) => attr.clone(),
        Term::Arith(lhs, op, rhs) => {
            use crate::value::ArithOp;
            let prec = match op {
                ArithOp::Add | ArithOp::Sub => 0,
                ArithOp::Mul | ArithOp::Div => 1,
            };
            // Left-associative: the right operand needs strictly higher
            // precedence to omit parentheses.
            let text = format!(
                "{} {} {}",
                print_term_prec(lhs, prec),
                op.symbol(),
                print_term_prec(rhs, prec + 1)
            );
            if prec < min_prec {
                format!("({text})")
            } else {
                text
            }
        }
    }
}

pub fn print_condition(cond: &Condition) -> String {
    match cond {
        Condition::True => "TRUE".into(),
        Condition::False => "FALSE".into(),
        Condition::Atom { lhs, op, rhs } => {
            format!("{} {} {}", print_term(lhs), op.symbol(), print_term(rhs))
        }
        Condition::And(parts) => parts
            .iter()
            .map(|p| print_cond_child(p))
            .collect::<Vec<_>>()
            .join(" AND "),
        Condition::Or(parts) => parts
            .iter()
            .map(|p| print_cond_child(p))
            .collect::<Vec<_>>()
            .join(" OR "),
    }
}

/// Children of And/Or are parenthesised unless they are leaves, so nesting
/// always survives a round trip.
fn print_cond_child(cond: &Condition) -> String {
    match cond {
        Condition::And(_) | Condition::Or(_) => format!("({})", print_condition(cond)),
        _ => print_condition(cond),
    }
}

pub fn print_filter(filter: &Filter) -> String {
    match filter {
        Filter::Cond(cond) => match cond {
            Condition::And(_) | Condition::Or(_) => format!("({})", print_condition(cond)),
            _ => print_condition(cond),
        },
        Filter::TupleIn {
            terms,
            relation,
            attrs,
        } => format!(
            "TUPLE({}) IN {}.({})",
            terms.iter().map(print_term).collect::<Vec<_>>().join(", "),
            relation,
            attrs.join(", ")
        ),
        Filter::And(lhs, rhs) => format!("{} AND {}", print_filter(lhs), print_filter(rhs)),
    }
}

fn print_attr_ref(r: &AttrRef) -> String {
    match &r.relation {
        Some(rel) => format!("{rel}.{}", r.attr),
        None => r.attr.clone(),
    }
}

pub fn print_query(q: &Query) -> String {
    let mut out = format!(
        "SELECT {} FROM {}",
        q.select
            .iter()
            .map(print_attr_ref)
            .collect::<Vec<_>>()
            .join(", "),
        q.from.join(", ")
    );
    if !q.filter.is_true() {
        out.push_str(" WHERE ");
        out.push_str(&print_filter(&q.filter));
    }
    out
}

pub fn print_effect(stmt: &Effect) -> String {
    match stmt {
        Effect::Assign { var, term } => format!("{var} = {}", print_term(term)),
        Effect::Insert { values, table } => format!(
            "INSERT {} INTO {table}",
            values.iter().map(print_term).collect::<Vec<_>>().join(", ")
        ),
        Effect::Delete { filter, table } => {
            format!("DELETE FROM {table} WHERE {}", print_condition(filter))
        }
        Effect::Update(upd) => print_update(upd),
    }
}

fn print_update(upd: &ConditionalUpdate) -> String {
    let mut out = format!(
        "UPDATE {} SET {} WHERE CASE",
        upd.table,
        upd.set
            .iter()
            .map(|(attr, ph)| format!("{attr} = @{ph}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    for (filter, assigns) in &upd.branches {
        out.push_str(" WHEN ");
        out.push_str(&print_filter(filter));
        out.push_str(" THEN ");
        out.push_str(&print_assigns(assigns));
    }
    out.push_str(" ELSE ");
    out.push_str(&print_assigns(&upd.else_branch));
    out
}

fn print_assigns(assigns: &[(String, Term)]) -> String {
    assigns
        .iter()
        .map(|(ph, term)| format!("@{ph} = {}", print_term(term)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn print_effects(stmts: &[Effect]) -> String {
    stmts.iter().map(print_effect).collect::<Vec<_>>().join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::{parse_condition_full, parse_effects, parse_query};

    fn round_trip_cond(text: &str) {
        let ast = parse_condition_full(text).unwrap();
        let printed = print_condition(&ast);
        let reparsed = parse_condition_full(&printed).unwrap();
        assert_eq!(ast, reparsed, "round trip changed {text:?} -> {printed:?}");
    }

    #[test]
    fn condition_round_trips() {
        round_trip_cond("a = b AND c <= d AND e > 1");
        round_trip_cond("a != b OR (c < d AND e >= 2.5)");
        round_trip_cond("(a + b) * c > 4 AND TRUE = x");
        round_trip_cond("TRUE");
    }

    #[test]
    fn complement_of_a_conjunction_round_trips() {
        let ast = parse_condition_full("score > 3.5 AND grade = 'A'").unwrap();
        let comp = ast.complement();
        assert_eq!(print_condition(&comp), "score <= 3.5 OR grade != 'A'");
        let reparsed = parse_condition_full(&print_condition(&comp)).unwrap();
        assert_eq!(comp, reparsed);
    }

    #[test]
    fn query_round_trips() {
        for text in [
            "SELECT offerID FROM Offers",
            "SELECT Offers.offerID, Offers.offerDate FROM Offers WHERE Offers.offerStatus = 'open'",
            "SELECT a FROM R, S WHERE (a = 1 AND b = 2) AND TUPLE(x, y) IN R.(a, b)",
        ] {
            let ast = parse_query(text).unwrap();
            assert_eq!(parse_query(&print_query(&ast)).unwrap(), ast);
        }
    }

    #[test]
    fn effects_round_trip() {
        let text = "finalScore = score; \
                    INSERT newId, applicant.name INTO Candidate; \
                    DELETE FROM Candidate WHERE candidateID = 'c9'; \
                    UPDATE Candidate SET status = @v WHERE CASE \
                    WHEN offerID = chosen THEN @v = 'accepted' ELSE @v = status";
        let ast = parse_effects(text).unwrap();
        let printed = print_effects(&ast);
        assert_eq!(parse_effects(&printed).unwrap(), ast);
    }
}
