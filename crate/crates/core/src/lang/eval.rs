//! Pure evaluation of terms, conditions and filters under a binding.
//!
//! Evaluation is total and crash-free: unknown names, type mismatches and
//! division by zero surface as errors, never as panics or NaN. Tuple
//! membership atoms evaluate against a [`TupleSource`] (the store implements
//! it); plain conditions need none.

use thiserror::Error;

use crate::lang::ast::{Binding, Condition, Filter, Term};
use crate::value::{self, Value, ValueError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("unbound name '{0}'")]
    Unbound(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("no relation source available for membership test on '{0}'")]
    NoRelations(String),
    #[error("unknown relation '{0}'")]
    UnknownRelation(String),
}

impl From<ValueError> for EvalError {
    fn from(e: ValueError) -> EvalError {
        match e {
            ValueError::Type(msg) => EvalError::Type(msg),
            ValueError::DivisionByZero => EvalError::DivisionByZero,
            ValueError::Overflow(_) => EvalError::Overflow,
        }
    }
}

/// Source of relation contents for `TUPLE(..) IN R.(..)` atoms.
pub trait TupleSource {
    fn contains(
        &self,
        relation: &str,
        attrs: &[String],
        values: &[Value],
    ) -> Result<bool, EvalError>;
}

pub struct EvalContext<'a> {
    pub binding: &'a Binding,
    pub tuples: Option<&'a dyn TupleSource>,
}

impl<'a> EvalContext<'a> {
    pub fn new(binding: &'a Binding) -> EvalContext<'a> {
        EvalContext {
            binding,
            tuples: None,
        }
    }

    pub fn with_tuples(binding: &'a Binding, tuples: &'a dyn TupleSource) -> EvalContext<'a> {
        EvalContext {
            binding,
            tuples: Some(tuples),
        }
    }
}

pub fn eval_term(term: &Term, ctx: &EvalContext) -> Result<Value, EvalError> {
    match term {
        Term::Const(v) => Ok(v.clone()),
        Term::Var(name) => ctx
            .binding
            .var(name)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(name.clone())),
        Term::Attr(Some(rel), attr) => ctx
            .binding
            .attr(rel, attr)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(format!("{rel}.{attr}"))),
        Term::Attr(None, attr) => ctx
            .binding
            .var(attr)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(attr.clone())),
        Term::Arith(lhs, op, rhs) => {
            let a = eval_term(lhs, ctx)?;
            let b = eval_term(rhs, ctx)?;
            Ok(value::arith(*op, &a, &b)?)
        }
    }
}

pub fn eval_condition(cond: &Condition, ctx: &EvalContext) -> Result<bool, EvalError> {
    match cond {
        Condition::True => Ok(true),
        Condition::False => Ok(false),
        Condition::Atom { lhs, op, rhs } => {
            let a = eval_term(lhs, ctx)?;
            let b = eval_term(rhs, ctx)?;
            Ok(value::compare(*op, &a, &b)?)
        }
        Condition::And(parts) => {
            for p in parts {
                if !eval_condition(p, ctx)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Condition::Or(parts) => {
            for p in parts {
                if eval_condition(p, ctx)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

pub fn eval_filter(filter: &Filter, ctx: &EvalContext) -> Result<bool, EvalError> {
    match filter {
        Filter::Cond(cond) => eval_condition(cond, ctx),
        Filter::TupleIn {
            terms,
            relation,
            attrs,
        } => {
            let source = ctx
                .tuples
                .ok_or_else(|| EvalError::NoRelations(relation.clone()))?;
            let values = terms
                .iter()
                .map(|t| eval_term(t, ctx))
                .collect::<Result<Vec<_>, _>>()?;
            source.contains(relation, attrs, &values)
        }
        Filter::And(lhs, rhs) => Ok(eval_filter(lhs, ctx)? && eval_filter(rhs, ctx)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::{parse_condition, parse_condition_full};

    fn eval(text: &str, binding: &Binding) -> Result<bool, EvalError> {
        let cond = parse_condition_full(text).unwrap();
        eval_condition(&cond, &EvalContext::new(binding))
    }

    #[test]
    fn simple_atom_evaluates() {
        let b = Binding::new();
        assert!(eval("4.0 > 3.5", &b).unwrap());
    }

    #[test]
    fn candidate_predicate_row_is_false() {
        // Threshold row: 3.5 is not strictly greater than 3.5.
        let cond = parse_condition(
            "technicalScore > 3.5 AND culturalFit + teamCollaboration + finalEvaluation >= 11",
        )
        .unwrap();
        let b = Binding::new()
            .with_var("technicalScore", Value::Double(3.5))
            .with_var("culturalFit", Value::Double(5.0))
            .with_var("teamCollaboration", Value::Double(4.0))
            .with_var("finalEvaluation", Value::Double(4.0));
        assert!(!eval_condition(&cond, &EvalContext::new(&b)).unwrap());
    }

    #[test]
    fn unbound_name_is_reported() {
        let b = Binding::new();
        assert_eq!(eval("x = 1", &b), Err(EvalError::Unbound("x".into())));
    }

    #[test]
    fn conjunction_against_truth_table() {
        // Brute-force oracle over a small domain: And must agree with the
        // pointwise conjunction of its atoms.
        let cond = parse_condition("a < b AND b < c AND a != 2").unwrap();
        for a in 0..3i64 {
            for b in 0..3i64 {
                for c in 0..3i64 {
                    let binding = Binding::new()
                        .with_var("a", Value::Int(a))
                        .with_var("b", Value::Int(b))
                        .with_var("c", Value::Int(c));
                    let expect = a < b && b < c && a != 2;
                    assert_eq!(
                        eval_condition(&cond, &EvalContext::new(&binding)).unwrap(),
                        expect
                    );
                }
            }
        }
    }

    #[test]
    fn complement_agrees_with_negation_over_small_domain() {
        let cond = parse_condition("a = b AND c < d").unwrap();
        let comp = cond.complement();
        for a in 0..3i64 {
            for b in 0..3i64 {
                for c in 0..3i64 {
                    for d in 0..3i64 {
                        let binding = Binding::new()
                            .with_var("a", Value::Int(a))
                            .with_var("b", Value::Int(b))
                            .with_var("c", Value::Int(c))
                            .with_var("d", Value::Int(d));
                        let ctx = EvalContext::new(&binding);
                        assert_eq!(
                            eval_condition(&comp, &ctx).unwrap(),
                            !eval_condition(&cond, &ctx).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let b = Binding::new().with_var("x", Value::Int(0));
        assert_eq!(eval("1 / x > 0", &b), Err(EvalError::DivisionByZero));
    }
}
