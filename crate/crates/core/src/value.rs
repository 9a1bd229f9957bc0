//! Typed runtime values shared by the expression language, the store and the
//! engine.
//!
//! Values are scalar: five primitive types, no NULL. Comparisons between
//! mismatched types are errors rather than silent coercions; the only
//! implicit promotion is integer-to-double inside numeric comparisons and
//! arithmetic.

use std::cmp::Ordering;
use std::fmt;

use chrono::NaiveDate;
use thiserror::Error;

/// The primitive (system-reserved) types of the modeling language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimitiveType {
    Str,
    Int,
    Double,
    Bool,
    Date,
}

impl PrimitiveType {
    pub fn name(self) -> &'static str {
        match self {
            PrimitiveType::Str => "string",
            PrimitiveType::Int => "integer",
            PrimitiveType::Double => "double",
            PrimitiveType::Bool => "boolean",
            PrimitiveType::Date => "date",
        }
    }

    pub fn parse(name: &str) -> Option<PrimitiveType> {
        match name {
            "string" => Some(PrimitiveType::Str),
            "integer" => Some(PrimitiveType::Int),
            "double" => Some(PrimitiveType::Double),
            "boolean" => Some(PrimitiveType::Bool),
            "date" => Some(PrimitiveType::Date),
            _ => None,
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, PrimitiveType::Int | PrimitiveType::Double)
    }
}

impl fmt::Display for PrimitiveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A runtime value. Doubles are finite by construction: literals are parsed
/// finite and division by zero is an evaluation error, never a NaN.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Str(String),
    Int(i64),
    Double(f64),
    Bool(bool),
    Date(NaiveDate),
}

impl Eq for Value {}

impl std::hash::Hash for Value {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Value::Str(s) => (0u8, s).hash(state),
            Value::Int(i) => (1u8, i).hash(state),
            Value::Double(d) => (2u8, d.to_bits()).hash(state),
            Value::Bool(b) => (3u8, b).hash(state),
            Value::Date(d) => (4u8, d).hash(state),
        }
    }
}

impl Value {
    pub fn prim_type(&self) -> PrimitiveType {
        match self {
            Value::Str(_) => PrimitiveType::Str,
            Value::Int(_) => PrimitiveType::Int,
            Value::Double(_) => PrimitiveType::Double,
            Value::Bool(_) => PrimitiveType::Bool,
            Value::Date(_) => PrimitiveType::Date,
        }
    }

    /// Total order used for canonical (order-insensitive) state hashing.
    /// Orders first by type tag, then within the type.
    pub fn canonical_cmp(&self, other: &Value) -> Ordering {
        use Value::*;
        match (self, other) {
            (Str(a), Str(b)) => a.cmp(b),
            (Int(a), Int(b)) => a.cmp(b),
            (Double(a), Double(b)) => a.total_cmp(b),
            (Bool(a), Bool(b)) => a.cmp(b),
            (Date(a), Date(b)) => a.cmp(b),
            _ => type_rank(self).cmp(&type_rank(other)),
        }
    }

    /// Renders the value as a literal of the concrete syntax: strings and
    /// dates single-quoted, numbers and booleans bare.
    pub fn literal(&self) -> String {
        match self {
            Value::Str(s) => quote(s),
            Value::Int(i) => i.to_string(),
            Value::Double(d) => format_double(*d),
            Value::Bool(b) => b.to_string(),
            Value::Date(d) => format!("'{}'", d.format("%Y-%m-%d")),
        }
    }
}

fn type_rank(v: &Value) -> u8 {
    match v {
        Value::Str(_) => 0,
        Value::Int(_) => 1,
        Value::Double(_) => 2,
        Value::Bool(_) => 3,
        Value::Date(_) => 4,
    }
}

/// Single-quotes a string, doubling embedded quotes.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        if c == '\'' {
            out.push('\'');
        }
        out.push(c);
    }
    out.push('\'');
    out
}

/// Formats a double so it always reads back as a double (keeps a decimal
/// point or exponent).
pub fn format_double(d: f64) -> String {
    let s = format!("{:?}", d);
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{}.0", s)
    }
}

pub fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ValueError {
    #[error("type error: {0}")]
    Type(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

/// Comparison operators of the condition language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Neq,
    Gt,
    Lt,
    Le,
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Neq => "!=",
            CompareOp::Gt => ">",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Ge => ">=",
        }
    }

    /// The complementary operator: the one that holds exactly when `self`
    /// does not.
    pub fn complement(self) -> CompareOp {
        match self {
            CompareOp::Eq => CompareOp::Neq,
            CompareOp::Neq => CompareOp::Eq,
            CompareOp::Gt => CompareOp::Le,
            CompareOp::Le => CompareOp::Gt,
            CompareOp::Lt => CompareOp::Ge,
            CompareOp::Ge => CompareOp::Lt,
        }
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, CompareOp::Eq | CompareOp::Neq)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

/// Applies a comparison with integer-to-double promotion. Booleans admit
/// equality only; strings and dates compare by their natural order.
pub fn compare(op: CompareOp, a: &Value, b: &Value) -> Result<bool, ValueError> {
    use Value::*;
    let ord = match (a, b) {
        (Int(x), Int(y)) => x.cmp(y),
        (Double(x), Double(y)) => x.partial_cmp(y).ok_or_else(nan_error)?,
        (Int(x), Double(y)) => (*x as f64).partial_cmp(y).ok_or_else(nan_error)?,
        (Double(x), Int(y)) => x.partial_cmp(&(*y as f64)).ok_or_else(nan_error)?,
        (Str(x), Str(y)) => x.cmp(y),
        (Date(x), Date(y)) => x.cmp(y),
        (Bool(x), Bool(y)) => {
            if op.is_ordering() {
                return Err(ValueError::Type(
                    "booleans admit only = and != comparisons".into(),
                ));
            }
            return Ok(match op {
                CompareOp::Eq => x == y,
                _ => x != y,
            });
        }
        _ => {
            return Err(ValueError::Type(format!(
                "cannot compare {} with {}",
                a.prim_type(),
                b.prim_type()
            )))
        }
    };
    Ok(match op {
        CompareOp::Eq => ord == Ordering::Equal,
        CompareOp::Neq => ord != Ordering::Equal,
        CompareOp::Gt => ord == Ordering::Greater,
        CompareOp::Lt => ord == Ordering::Less,
        CompareOp::Le => ord != Ordering::Greater,
        CompareOp::Ge => ord != Ordering::Less,
    })
}

fn nan_error() -> ValueError {
    ValueError::Type("NaN is not comparable".into())
}

/// Arithmetic over numerics. Integer pairs stay integral (checked), any
/// double operand promotes the result to double.
pub fn arith(op: ArithOp, a: &Value, b: &Value) -> Result<Value, ValueError> {
    use Value::*;
    match (a, b) {
        (Int(x), Int(y)) => {
            let r = match op {
                ArithOp::Add => x.checked_add(*y),
                ArithOp::Sub => x.checked_sub(*y),
                ArithOp::Mul => x.checked_mul(*y),
                ArithOp::Div => {
                    if *y == 0 {
                        return Err(ValueError::DivisionByZero);
                    }
                    x.checked_div(*y)
                }
            };
            r.map(Int).ok_or(ValueError::Overflow("integer arithmetic"))
        }
        (Int(_) | Double(_), Int(_) | Double(_)) => {
            let x = as_f64(a);
            let y = as_f64(b);
            if matches!(op, ArithOp::Div) && y == 0.0 {
                return Err(ValueError::DivisionByZero);
            }
            let r = match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
                ArithOp::Div => x / y,
            };
            Ok(Double(r))
        }
        _ => Err(ValueError::Type(format!(
            "arithmetic requires numeric operands, got {} {} {}",
            a.prim_type(),
            op.symbol(),
            b.prim_type()
        ))),
    }
}

fn as_f64(v: &Value) -> f64 {
    match v {
        Value::Int(i) => *i as f64,
        Value::Double(d) => *d,
        _ => unreachable!("checked by caller"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_promotes_ints() {
        assert!(compare(CompareOp::Gt, &Value::Double(4.0), &Value::Int(3)).unwrap());
        assert!(compare(CompareOp::Eq, &Value::Int(4), &Value::Double(4.0)).unwrap());
    }

    #[test]
    fn bool_ordering_rejected() {
        let err = compare(CompareOp::Lt, &Value::Bool(true), &Value::Bool(false));
        assert!(matches!(err, Err(ValueError::Type(_))));
    }

    #[test]
    fn mixed_types_rejected() {
        let err = compare(CompareOp::Eq, &Value::Str("a".into()), &Value::Int(1));
        assert!(matches!(err, Err(ValueError::Type(_))));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            arith(ArithOp::Div, &Value::Int(1), &Value::Int(0)),
            Err(ValueError::DivisionByZero)
        );
        assert_eq!(
            arith(ArithOp::Div, &Value::Double(1.0), &Value::Int(0)),
            Err(ValueError::DivisionByZero)
        );
    }

    #[test]
    fn double_formatting_keeps_the_point() {
        assert_eq!(format_double(4.0), "4.0");
        assert_eq!(format_double(3.4), "3.4");
    }
}
