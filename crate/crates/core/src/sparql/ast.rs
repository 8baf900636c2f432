use std::collections::BTreeSet;
use std::sync::Arc;

use crate::rdf::{Iri, Term};

pub type Var = Arc<str>;

/// A parsed SELECT query.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub projection: Vec<Projection>,
    pub pattern: GroupPattern,
    pub group_by: Vec<Var>,
    /// Variables written with a leading `$` anywhere in the query text.
    pub prebindable: BTreeSet<Var>,
}

impl Query {
    pub fn projected_vars(&self) -> impl Iterator<Item = &Var> {
        self.projection.iter().map(|p| match p {
            Projection::Var(v) => v,
            Projection::Count { alias, .. } => alias,
        })
    }

    pub fn has_aggregate(&self) -> bool {
        self.projection.iter().any(|p| matches!(p, Projection::Count { .. }))
    }

    /// True when `var` is mentioned anywhere in the pattern (including nested groups).
    pub fn mentions(&self, var: &str) -> bool {
        let mut vars = BTreeSet::new();
        self.pattern.collect_vars(&mut vars);
        vars.contains(var)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    Var(Var),
    /// `(COUNT(?v) AS ?alias)`; `var = None` means `COUNT(*)`.
    Count { var: Option<Var>, alias: Var },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupPattern {
    pub elements: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Triple(TriplePattern),
    Optional(GroupPattern),
    /// Two or more branches; `{A} UNION {B} UNION {C}` is kept flat.
    Union(Vec<GroupPattern>),
    /// A nested `{ ... }` group that is not part of a union.
    Group(GroupPattern),
    Filter(Expr),
    NotExists(GroupPattern),
    Bind(Expr, Var),
    SubSelect(Box<Query>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum VarOrTerm {
    Var(Var),
    Term(Term),
}

impl VarOrTerm {
    pub fn as_var(&self) -> Option<&Var> {
        match self {
            VarOrTerm::Var(v) => Some(v),
            VarOrTerm::Term(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verb {
    Var(Var),
    Path(PathExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriplePattern {
    pub subject: VarOrTerm,
    pub verb: Verb,
    pub object: VarOrTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathExpr {
    Predicate(Iri),
    Sequence(Box<PathExpr>, Box<PathExpr>),
    ZeroOrMore(Box<PathExpr>),
}

impl PathExpr {
    pub fn seq(a: PathExpr, b: PathExpr) -> PathExpr {
        PathExpr::Sequence(Box::new(a), Box::new(b))
    }

    pub fn star(p: PathExpr) -> PathExpr {
        PathExpr::ZeroOrMore(Box::new(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(Var),
    Const(Term),
    Or(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Bound(Var),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    Str(Box<Expr>),
    StrStarts(Box<Expr>, Box<Expr>),
    IsLiteral(Box<Expr>),
    IsIri(Box<Expr>),
    IsBlank(Box<Expr>),
    Datatype(Box<Expr>),
    Replace(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl GroupPattern {
    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        for el in &self.elements {
            match el {
                Element::Triple(t) => {
                    for v in [t.subject.as_var(), t.object.as_var()].into_iter().flatten() {
                        out.insert(v.clone());
                    }
                    if let Verb::Var(v) = &t.verb {
                        out.insert(v.clone());
                    }
                }
                Element::Optional(g) | Element::Group(g) | Element::NotExists(g) => g.collect_vars(out),
                Element::Union(branches) => branches.iter().for_each(|b| b.collect_vars(out)),
                Element::Filter(e) => e.collect_vars(out),
                Element::Bind(e, v) => {
                    e.collect_vars(out);
                    out.insert(v.clone());
                }
                Element::SubSelect(q) => out.extend(q.projected_vars().cloned()),
            }
        }
    }
}

impl Expr {
    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Expr::Var(v) | Expr::Bound(v) => {
                out.insert(v.clone());
            }
            Expr::Const(_) => {}
            Expr::Not(a) | Expr::Str(a) | Expr::IsLiteral(a) | Expr::IsIri(a) | Expr::IsBlank(a) | Expr::Datatype(a) => {
                a.collect_vars(out)
            }
            Expr::Or(a, b) | Expr::And(a, b) | Expr::Cmp(_, a, b) | Expr::StrStarts(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::If(a, b, c) | Expr::Replace(a, b, c) => {
                a.collect_vars(out);
                b.collect_vars(out);
                c.collect_vars(out);
            }
        }
    }
}
