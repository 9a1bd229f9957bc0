//! Parser, printer, evaluator and static analysis for the condition, query
//! and effect languages, plus the mini-Gherkin front end for conditional
//! updates.

pub mod ast;
pub mod eval;
pub mod gherkin;
pub mod lexer;
pub mod parser;
pub mod print;
pub mod resolve;

pub use ast::{
    AttrRef, Binding, Condition, ConditionalUpdate, Effect, Filter, Query, Term,
};
pub use eval::{eval_condition, eval_filter, eval_term, EvalContext, EvalError};
pub use gherkin::parse_gherkin;
pub use parser::{
    parse_condition, parse_condition_full, parse_effects, parse_filter, parse_query, parse_term,
};
pub use print::{
    print_condition, print_effect, print_effects, print_filter, print_query, print_term,
};
pub use resolve::{Scope, ScopeRelation};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LangError {
    #[error("parse error at {line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("type error: {0}")]
    Type(String),
    #[error("invalid statement: {0}")]
    Static(String),
    #[error("scenario clause {clause}: {message}")]
    Gherkin { clause: usize, message: String },
    #[error("unknown name '{0}'")]
    Unbound(String),
}

impl LangError {
    pub fn parse(line: usize, col: usize, message: impl Into<String>) -> LangError {
        LangError::Parse {
            line,
            col,
            message: message.into(),
        }
    }
}
