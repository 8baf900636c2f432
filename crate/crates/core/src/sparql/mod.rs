//! A closed SPARQL SELECT dialect: basic graph patterns with sequence and
//! zero-or-more paths, OPTIONAL, UNION, FILTER, FILTER NOT EXISTS, BIND and
//! COUNT sub-selects. Anything else is rejected at parse time.

pub mod ast;
mod eval;
mod expr;
mod lexer;
pub mod numeric;
mod parser;

use std::collections::BTreeMap;

use thiserror::Error;

pub use ast::{Expr, GroupPattern, PathExpr, Query, Var};
pub use eval::{eval_path, evaluate};
pub use expr::{eval_expr, ExprError};
pub use parser::parse_query;

use crate::rdf::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SparqlError {
    #[error("query syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported SPARQL feature at {line}:{column}: {construct}")]
    Unsupported { construct: String, line: usize, column: usize },
    #[error("unbound prefix '{prefix}:' at {line}:{column}")]
    UnboundPrefix { prefix: String, line: usize, column: usize },
}

/// One row of variable bindings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution(BTreeMap<Var, Term>);

impl Solution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn insert(&mut self, var: impl Into<Var>, term: Term) {
        self.0.insert(var.into(), term);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    /// Shared variables agree.
    pub fn compatible(&self, other: &Solution) -> bool {
        other.0.iter().all(|(k, v)| self.0.get(k).is_none_or(|mine| mine == v))
    }

    /// The join of two compatible solutions.
    pub fn merge(&self, other: &Solution) -> Option<Solution> {
        if !self.compatible(other) {
            return None;
        }
        let mut out = self.clone();
        for (k, v) in &other.0 {
            out.0.entry(k.clone()).or_insert_with(|| v.clone());
        }
        Some(out)
    }

    pub fn project<'a>(&self, vars: impl Iterator<Item = &'a Var>) -> Solution {
        Solution(vars.filter_map(|v| self.0.get(v).map(|t| (v.clone(), t.clone()))).collect())
    }
}

impl FromIterator<(Var, Term)> for Solution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Solution(iter.into_iter().collect())
    }
}
