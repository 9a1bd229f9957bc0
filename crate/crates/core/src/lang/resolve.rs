//! Name resolution and type checking of parsed expressions against a scope.
//!
//! Resolution qualifies bare names (process variable, task input, or
//! attribute of an in-scope relation), verifies component-wise type
//! compatibility of every atom, and coerces string literals to dates where
//! the opposite side is date-typed.

use std::collections::BTreeMap;

use crate::lang::ast::{AttrRef, Condition, Filter, Query, Term};
use crate::lang::LangError;
use crate::value::{parse_date, ArithOp, CompareOp, PrimitiveType, Value};

/// A row-bound relation: its attributes are available as `name.attr` (and
/// unqualified when unambiguous).
#[derive(Debug, Clone)]
pub struct ScopeRelation {
    pub name: String,
    pub attrs: Vec<(String, PrimitiveType)>,
}

impl ScopeRelation {
    pub fn attr_type(&self, attr: &str) -> Option<PrimitiveType> {
        self.attrs
            .iter()
            .find(|(n, _)| n == attr)
            .map(|(_, t)| *t)
    }
}

/// Everything an expression may legally name.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    /// Declared tables (schema views) for membership atoms and FROM clauses.
    pub tables: BTreeMap<String, Vec<(String, PrimitiveType)>>,
    /// Row-bound relations whose attributes are in scope.
    pub relations: Vec<ScopeRelation>,
    /// Flat names: process variables and scalar task inputs.
    pub names: BTreeMap<String, PrimitiveType>,
}

impl Scope {
    fn relation(&self, name: &str) -> Option<&ScopeRelation> {
        self.relations.iter().find(|r| r.name == name)
    }
}

pub fn resolve_term(term: &Term, scope: &Scope) -> Result<(Term, PrimitiveType), LangError> {
    match term {
        Term::Const(v) => Ok((term.clone(), v.prim_type())),
        Term::Var(name) | Term::Attr(None, name) => resolve_name(name, scope),
        Term::Attr(Some(rel), attr) => {
            let relation = scope.relation(rel).ok_or_else(|| {
                LangError::Unbound(format!("{rel}.{attr} (relation '{rel}' is not in scope)"))
            })?;
            let ty = relation
                .attr_type(attr)
                .ok_or_else(|| LangError::Unbound(format!("{rel}.{attr}")))?;
            Ok((Term::Attr(Some(rel.clone()), attr.clone()), ty))
        }
        Term::Arith(lhs, op, rhs) => {
            let (l, lt) = resolve_term(lhs, scope)?;
            let (r, rt) = resolve_term(rhs, scope)?;
            if !lt.is_numeric() || !rt.is_numeric() {
                return Err(LangError::Type(format!(
                    "arithmetic requires numeric operands, got {lt} {} {rt}",
                    op.symbol()
                )));
            }
            let ty = if lt == PrimitiveType::Int && rt == PrimitiveType::Int {
                PrimitiveType::Int
            } else {
                PrimitiveType::Double
            };
            Ok((Term::Arith(Box::new(l), *op, Box::new(r)), ty))
        }
    }
}

fn resolve_name(name: &str, scope: &Scope) -> Result<(Term, PrimitiveType), LangError> {
    if let Some(ty) = scope.names.get(name) {
        return Ok((Term::Var(name.to_string()), *ty));
    }
    let mut hits = scope
        .relations
        .iter()
        .filter_map(|r| r.attr_type(name).map(|t| (r.name.clone(), t)));
    match (hits.next(), hits.next()) {
        (Some((rel, ty)), None) => Ok((Term::Attr(Some(rel), name.to_string()), ty)),
        (Some(_), Some(_)) => Err(LangError::Type(format!(
            "'{name}' is ambiguous; qualify it with a relation name"
        ))),
        (None, _) => Err(LangError::Unbound(name.to_string())),
    }
}

pub fn resolve_condition(cond: &Condition, scope: &Scope) -> Result<Condition, LangError> {
    match cond {
        Condition::True | Condition::False => Ok(cond.clone()),
        Condition::Atom { lhs, op, rhs } => {
            let (l, lt) = resolve_term(lhs, scope)?;
            let (r, rt) = resolve_term(rhs, scope)?;
            let (l, lt, r, rt) = coerce_dates(l, lt, r, rt);
            check_atom_types(lt, *op, rt)?;
            Ok(Condition::Atom {
                lhs: l,
                op: *op,
                rhs: r,
            })
        }
        Condition::And(parts) => Ok(Condition::And(
            parts
                .iter()
                .map(|p| resolve_condition(p, scope))
                .collect::<Result<_, _>>()?,
        )),
        Condition::Or(parts) => Ok(Condition::Or(
            parts
                .iter()
                .map(|p| resolve_condition(p, scope))
                .collect::<Result<_, _>>()?,
        )),
    }
}

fn check_atom_types(lt: PrimitiveType, op: CompareOp, rt: PrimitiveType) -> Result<(), LangError> {
    let compatible = lt == rt || (lt.is_numeric() && rt.is_numeric());
    if !compatible {
        return Err(LangError::Type(format!(
            "incompatible operand types: {lt} {} {rt}",
            op.symbol()
        )));
    }
    if lt == PrimitiveType::Bool && op.is_ordering() {
        return Err(LangError::Type(
            "booleans admit only = and != comparisons".into(),
        ));
    }
    Ok(())
}

/// A string literal compared against a date-typed term becomes a date
/// constant; dates are written as ISO-8601 strings in the concrete syntax.
fn coerce_dates(
    l: Term,
    lt: PrimitiveType,
    r: Term,
    rt: PrimitiveType,
) -> (Term, PrimitiveType, Term, PrimitiveType) {
    let (l, lt) = coerce_one(l, lt, rt);
    let (r, rt) = coerce_one(r, rt, lt);
    (l, lt, r, rt)
}

fn coerce_one(term: Term, ty: PrimitiveType, other: PrimitiveType) -> (Term, PrimitiveType) {
    if ty == PrimitiveType::Str && other == PrimitiveType::Date {
        if let Term::Const(Value::Str(s)) = &term {
            if let Some(d) = parse_date(s) {
                return (Term::Const(Value::Date(d)), PrimitiveType::Date);
            }
        }
    }
    (term, ty)
}

pub fn resolve_filter(filter: &Filter, scope: &Scope) -> Result<Filter, LangError> {
    match filter {
        Filter::Cond(cond) => Ok(Filter::Cond(resolve_condition(cond, scope)?)),
        Filter::TupleIn {
            terms,
            relation,
            attrs,
        } => {
            let table = scope
                .tables
                .get(relation)
                .ok_or_else(|| LangError::Unbound(format!("table '{relation}'")))?;
            let mut resolved = Vec::with_capacity(terms.len());
            for (term, attr) in terms.iter().zip(attrs) {
                let attr_ty = table
                    .iter()
                    .find(|(n, _)| n == attr)
                    .map(|(_, t)| *t)
                    .ok_or_else(|| LangError::Unbound(format!("{relation}.{attr}")))?;
                let (t, ty) = resolve_term(term, scope)?;
                let (t, ty) = coerce_one(t, ty, attr_ty);
                if ty != attr_ty && !(ty.is_numeric() && attr_ty.is_numeric()) {
                    return Err(LangError::Type(format!(
                        "tuple component for {relation}.{attr} has type {ty}, expected {attr_ty}"
                    )));
                }
                resolved.push(t);
            }
            Ok(Filter::TupleIn {
                terms: resolved,
                relation: relation.clone(),
                attrs: attrs.clone(),
            })
        }
        Filter::And(lhs, rhs) => Ok(Filter::And(
            Box::new(resolve_filter(lhs, scope)?),
            Box::new(resolve_filter(rhs, scope)?),
        )),
    }
}

/// Resolves a query: FROM relations must be declared tables; SELECT
/// references resolve against FROM; the filter additionally sees the
/// enclosing scope (variables, task inputs).
pub fn resolve_query(query: &Query, outer: &Scope) -> Result<Query, LangError> {
    let mut scope = outer.clone();
    let mut from_relations = Vec::new();
    for rel in &query.from {
        let table = outer
            .tables
            .get(rel)
            .ok_or_else(|| LangError::Unbound(format!("table '{rel}'")))?;
        from_relations.push(ScopeRelation {
            name: rel.clone(),
            attrs: table.clone(),
        });
    }
    // FROM relations take precedence over outer relations of the same name.
    let mut relations = from_relations.clone();
    relations.extend(outer.relations.iter().cloned());
    scope.relations = relations;

    let mut select = Vec::with_capacity(query.select.len());
    for r in &query.select {
        match &r.relation {
            Some(rel) => {
                if !query.from.contains(rel) {
                    return Err(LangError::Unbound(format!(
                        "{rel}.{} (relation '{rel}' is not listed in FROM)",
                        r.attr
                    )));
                }
                let table = &outer.tables[rel];
                if !table.iter().any(|(n, _)| n == &r.attr) {
                    return Err(LangError::Unbound(format!("{rel}.{}", r.attr)));
                }
                select.push(r.clone());
            }
            None => {
                let mut hits = from_relations
                    .iter()
                    .filter(|rel| rel.attr_type(&r.attr).is_some());
                match (hits.next(), hits.next()) {
                    (Some(rel), None) => {
                        let relation = if query.from.len() == 1 {
                            // Single-relation queries keep references bare so
                            // the printed query reads like its source.
                            None
                        } else {
                            Some(rel.name.clone())
                        };
                        select.push(AttrRef {
                            relation,
                            attr: r.attr.clone(),
                        });
                    }
                    (Some(_), Some(_)) => {
                        return Err(LangError::Type(format!(
                            "'{}' is ambiguous; qualify it with a relation name",
                            r.attr
                        )))
                    }
                    (None, _) => return Err(LangError::Unbound(r.attr.clone())),
                }
            }
        }
    }
    let filter = resolve_filter(&query.filter, &scope)?;
    Ok(Query {
        select,
        from: query.from.clone(),
        filter,
    })
}

/// Convenience check used by tests and callers that only need validity.
pub fn type_of_term(term: &Term, scope: &Scope) -> Result<PrimitiveType, LangError> {
    resolve_term(term, scope).map(|(_, t)| t)
}

pub fn numeric_result(op: ArithOp, lt: PrimitiveType, rt: PrimitiveType) -> PrimitiveType {
    let _ = op;
    if lt == PrimitiveType::Int && rt == PrimitiveType::Int {
        PrimitiveType::Int
    } else {
        PrimitiveType::Double
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::{parse_condition, parse_query};

    fn scope() -> Scope {
        let mut tables = BTreeMap::new();
        tables.insert(
            "Offers".to_string(),
            vec![
                ("offerID".to_string(), PrimitiveType::Str),
                ("offerDate".to_string(), PrimitiveType::Date),
            ],
        );
        let mut names = BTreeMap::new();
        names.insert("chosen".to_string(), PrimitiveType::Str);
        names.insert("score".to_string(), PrimitiveType::Double);
        Scope {
            tables,
            relations: vec![ScopeRelation {
                name: "Offers".into(),
                attrs: vec![
                    ("offerID".into(), PrimitiveType::Str),
                    ("offerDate".into(), PrimitiveType::Date),
                ],
            }],
            names,
        }
    }

    #[test]
    fn bare_attribute_gets_qualified() {
        let cond = parse_condition("offerID = chosen").unwrap();
        let resolved = resolve_condition(&cond, &scope()).unwrap();
        match resolved {
            Condition::Atom { lhs, .. } => {
                assert_eq!(lhs, Term::attr("Offers", "offerID"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn string_literal_coerces_to_date() {
        let cond = parse_condition("offerDate >= '2024-01-01'").unwrap();
        let resolved = resolve_condition(&cond, &scope()).unwrap();
        match resolved {
            Condition::Atom { rhs, .. } => {
                assert!(matches!(rhs, Term::Const(Value::Date(_))));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn string_vs_numeric_is_rejected() {
        let cond = parse_condition("offerID > 3").unwrap();
        assert!(matches!(
            resolve_condition(&cond, &scope()),
            Err(LangError::Type(_))
        ));
    }

    #[test]
    fn unknown_name_is_unbound() {
        let cond = parse_condition("nosuch = 1").unwrap();
        assert!(matches!(
            resolve_condition(&cond, &scope()),
            Err(LangError::Unbound(_))
        ));
    }

    #[test]
    fn single_table_select_stays_bare() {
        let q = parse_query("SELECT offerID FROM Offers WHERE offerID = chosen").unwrap();
        let resolved = resolve_query(&q, &scope()).unwrap();
        assert_eq!(resolved.select[0].relation, None);
    }
}
