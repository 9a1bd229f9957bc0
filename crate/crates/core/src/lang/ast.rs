//! ASTs of the condition, query and effect languages.
//!
//! The surface condition grammar is purely conjunctive; `Or` exists in the
//! AST because the complement of a conjunction is a disjunction and guard
//! complements must stay expressible. No negation node exists at all:
//! complements are computed structurally, so every AST is negation-free by
//! construction.

use std::collections::BTreeMap;

use crate::value::{ArithOp, CompareOp, PrimitiveType, Value};

/// A term: constant, process variable, (possibly qualified) attribute
/// reference, or arithmetic over terms.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Const(Value),
    Var(String),
    /// `relation.attribute`; the relation part may be a table in scope or a
    /// named input of the owning task. Unqualified references are resolved
    /// against the single relation in scope.
    Attr(Option<String>, String),
    Arith(Box<Term>, ArithOp, Box<Term>),
}

impl Term {
    pub fn attr(rel: impl Into<String>, name: impl Into<String>) -> Term {
        Term::Attr(Some(rel.into()), name.into())
    }

    /// Collects variable names in first-appearance order.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(name) => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Term::Arith(lhs, _, rhs) => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    True,
    False,
    Atom {
        lhs: Term,
        op: CompareOp,
        rhs: Term,
    },
    And(Vec<Condition>),
    Or(Vec<Condition>),
}

impl Condition {
    pub fn atom(lhs: Term, op: CompareOp, rhs: Term) -> Condition {
        Condition::Atom { lhs, op, rhs }
    }

    /// Conjunction of the given conditions, flattening the trivial cases.
    pub fn conjoin(mut parts: Vec<Condition>) -> Condition {
        parts.retain(|c| !matches!(c, Condition::True));
        match parts.len() {
            0 => Condition::True,
            1 => parts.pop().unwrap(),
            _ => Condition::And(parts),
        }
    }

    /// The complementary condition: De Morgan dualization all the way down,
    /// with comparison operators flipped at the atoms. The result is
    /// negation-free and in negation normal form.
    pub fn complement(&self) -> Condition {
        match self {
            Condition::True => Condition::False,
            Condition::False => Condition::True,
            Condition::Atom { lhs, op, rhs } => Condition::Atom {
                lhs: lhs.clone(),
                op: op.complement(),
                rhs: rhs.clone(),
            },
            Condition::And(parts) => Condition::Or(parts.iter().map(|c| c.complement()).collect()),
            Condition::Or(parts) => Condition::And(parts.iter().map(|c| c.complement()).collect()),
        }
    }

    pub fn atoms(&self) -> Vec<&Condition> {
        let mut out = Vec::new();
        self.walk_atoms(&mut out);
        out
    }

    fn walk_atoms<'a>(&'a self, out: &mut Vec<&'a Condition>) {
        match self {
            Condition::Atom { .. } => out.push(self),
            Condition::And(parts) | Condition::Or(parts) => {
                for p in parts {
                    p.walk_atoms(out);
                }
            }
            _ => {}
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Condition::Atom { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            Condition::And(parts) | Condition::Or(parts) => {
                for p in parts {
                    p.collect_vars(out);
                }
            }
            _ => {}
        }
    }
}

/// An attribute reference in a query SELECT list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrRef {
    pub relation: Option<String>,
    pub attr: String,
}

/// `SELECT ... FROM ... WHERE filter`. The FROM relations are the read
/// persistent relations in scope; an absent WHERE clause is `TRUE`.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub select: Vec<AttrRef>,
    pub from: Vec<String>,
    pub filter: Filter,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    Cond(Condition),
    /// `TUPLE(t1, ..., tk) IN R.(a1, ..., ak)` — membership of a projected
    /// tuple in relation R.
    TupleIn {
        terms: Vec<Term>,
        relation: String,
        attrs: Vec<String>,
    },
    And(Box<Filter>, Box<Filter>),
}

impl Filter {
    pub fn is_true(&self) -> bool {
        matches!(self, Filter::Cond(Condition::True))
    }
}

/// One effect statement. A task's effect is an ordered list of these,
/// applied atomically against the snapshot the precondition was evaluated
/// on.
#[derive(Debug, Clone, PartialEq)]
pub enum Effect {
    Assign {
        var: String,
        term: Term,
    },
    Insert {
        values: Vec<Term>,
        table: String,
    },
    Delete {
        filter: Condition,
        table: String,
    },
    Update(ConditionalUpdate),
}

/// A conditional bulk update: every tuple of `table` is rewritten; the first
/// branch whose filter accepts the tuple binds the placeholders, the ELSE
/// branch binds them when none does.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalUpdate {
    pub table: String,
    /// `(attribute, placeholder)` pairs of the SET clause, in declaration
    /// order.
    pub set: Vec<(String, String)>,
    /// `(filter, assignments)` branches in declaration order; assignments
    /// are `(placeholder, term)` pairs.
    pub branches: Vec<(Filter, Vec<(String, Term)>)>,
    pub else_branch: Vec<(String, Term)>,
}

/// A (partial) valuation: process variables by name, attributes by
/// `(relation, attribute)` pair. Relations here may be tables or named
/// task inputs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Binding {
    pub vars: BTreeMap<String, Value>,
    pub attrs: BTreeMap<(String, String), Value>,
}

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    pub fn with_var(mut self, name: impl Into<String>, value: Value) -> Binding {
        self.vars.insert(name.into(), value);
        self
    }

    pub fn with_attr(
        mut self,
        rel: impl Into<String>,
        attr: impl Into<String>,
        value: Value,
    ) -> Binding {
        self.attrs.insert((rel.into(), attr.into()), value);
        self
    }

    pub fn set_var(&mut self, name: impl Into<String>, value: Value) {
        self.vars.insert(name.into(), value);
    }

    pub fn set_attr(&mut self, rel: impl Into<String>, attr: impl Into<String>, value: Value) {
        self.attrs.insert((rel.into(), attr.into()), value);
    }

    pub fn var(&self, name: &str) -> Option<&Value> {
        self.vars.get(name)
    }

    pub fn attr(&self, rel: &str, attr: &str) -> Option<&Value> {
        self.attrs.get(&(rel.to_string(), attr.to_string()))
    }

    /// Overlays `other` on top of `self` (entries of `other` win).
    pub fn merged(&self, other: &Binding) -> Binding {
        let mut out = self.clone();
        for (k, v) in &other.vars {
            out.vars.insert(k.clone(), v.clone());
        }
        for (k, v) in &other.attrs {
            out.attrs.insert(k.clone(), v.clone());
        }
        out
    }
}

/// Type of a variable or input available to an expression scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypedName(pub PrimitiveType);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_flips_structure_and_operators() {
        let cond = Condition::And(vec![
            Condition::atom(Term::Var("a".into()), CompareOp::Eq, Term::Var("b".into())),
            Condition::atom(Term::Var("c".into()), CompareOp::Lt, Term::Var("d".into())),
        ]);
        let comp = cond.complement();
        match &comp {
            Condition::Or(parts) => {
                assert!(matches!(
                    parts[0],
                    Condition::Atom {
                        op: CompareOp::Neq,
                        ..
                    }
                ));
                assert!(matches!(
                    parts[1],
                    Condition::Atom {
                        op: CompareOp::Ge,
                        ..
                    }
                ));
            }
            other => panic!("expected Or, got {other:?}"),
        }
        assert_eq!(comp.complement(), cond);
    }

    #[test]
    fn true_complements_to_false() {
        assert_eq!(Condition::True.complement(), Condition::False);
        assert_eq!(Condition::False.complement(), Condition::True);
    }
}
