use std::collections::BTreeSet;
use std::sync::Arc;

use super::ast::*;
use super::lexer::{tokenize, Spanned, Tok};
use super::SparqlError;
use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{Iri, Literal, PrefixMap, Term};

/// Words that name SPARQL features outside the dialect.
const UNSUPPORTED_WORDS: &[&str] = &[
    "MINUS", "SERVICE", "GRAPH", "VALUES", "ORDER", "LIMIT", "OFFSET", "HAVING", "DISTINCT", "REDUCED", "CONSTRUCT",
    "ASK", "DESCRIBE", "FROM", "NAMED", "LOAD", "INSERT", "DELETE", "BASE",
];

/// Parses a query in the supported dialect. Prefixed names resolve against
/// `prefixes` plus any `PREFIX` declarations at the head of the query.
pub fn parse_query(text: &str, prefixes: &PrefixMap) -> Result<Query, SparqlError> {
    let toks = tokenize(text)?;
    let prebindable = toks
        .iter()
        .filter_map(|t| match &t.tok {
            Tok::Var { name, dollar: true } => Some(Arc::from(name.as_str())),
            _ => None,
        })
        .collect();
    let mut p = Parser { toks, pos: 0, prefixes: prefixes.clone(), prebindable };
    p.prologue()?;
    let q = p.query(true)?;
    p.expect(&Tok::Eof, "end of query")?;
    Ok(q)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    prefixes: PrefixMap,
    prebindable: BTreeSet<Var>,
}

type PResult<T> = Result<T, SparqlError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn syntax(&self, message: impl Into<String>) -> SparqlError {
        let (line, column) = self.here();
        SparqlError::Syntax { line, column, message: message.into() }
    }

    fn unsupported(&self, construct: impl Into<String>) -> SparqlError {
        let (line, column) = self.here();
        SparqlError::Unsupported { construct: construct.into(), line, column }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> PResult<()> {
        if self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}, found {}", self.peek().describe())))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.peek().is_word(w) {
            self.next();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {w}, found {}", self.peek().describe())))
        }
    }

    fn check_unsupported_word(&self) -> PResult<()> {
        if let Tok::Word(w) = self.peek() {
            if let Some(u) = UNSUPPORTED_WORDS.iter().find(|u| w.eq_ignore_ascii_case(u)) {
                return Err(self.unsupported(*u));
            }
        }
        Ok(())
    }

    fn prologue(&mut self) -> PResult<()> {
        while self.peek().is_word("PREFIX") {
            self.next();
            let Tok::PName { prefix, local } = self.peek().clone() else {
                return Err(self.syntax("expected 'prefix:' after PREFIX"));
            };
            if !local.is_empty() {
                return Err(self.syntax("expected 'prefix:' after PREFIX"));
            }
            self.next();
            let Tok::Iri(ns) = self.peek().clone() else {
                return Err(self.syntax("expected namespace IRI"));
            };
            self.next();
            self.prefixes.insert(prefix, ns);
        }
        Ok(())
    }

    fn var(&mut self) -> PResult<Var> {
        match self.peek().clone() {
            Tok::Var { name, .. } => {
                self.next();
                Ok(Arc::from(name.as_str()))
            }
            other => Err(self.syntax(format!("expected a variable, found {}", other.describe()))),
        }
    }

    fn query(&mut self, top: bool) -> PResult<Query> {
        self.check_unsupported_word()?;
        self.expect_word("SELECT")?;
        self.check_unsupported_word()?;
        if *self.peek() == Tok::Star {
            return Err(self.unsupported("SELECT *"));
        }
        let mut projection = Vec::new();
        loop {
            match self.peek() {
                Tok::Var { .. } => projection.push(Projection::Var(self.var()?)),
                Tok::LParen => projection.push(self.aggregate()?),
                _ => break,
            }
        }
        if projection.is_empty() {
            return Err(self.syntax("expected at least one projected variable"));
        }
        if self.peek().is_word("WHERE") {
            self.next();
        }
        let pattern = self.group()?;
        let mut group_by = Vec::new();
        if self.peek().is_word("GROUP") {
            self.next();
            self.expect_word("BY")?;
            while let Tok::Var { .. } = self.peek() {
                group_by.push(self.var()?);
            }
            if group_by.is_empty() {
                return Err(self.syntax("expected variables after GROUP BY"));
            }
        }
        self.check_unsupported_word()?;
        let q = Query { projection, pattern, group_by, prebindable: self.prebindable.clone() };
        self.validate(&q, top)?;
        Ok(q)
    }

    fn validate(&self, q: &Query, top: bool) -> PResult<()> {
        let aggregates = q.projection.iter().filter(|p| matches!(p, Projection::Count { .. })).count();
        if top && (aggregates > 0 || !q.group_by.is_empty()) {
            return Err(self.unsupported("aggregation outside a sub-select"));
        }
        if aggregates > 1 {
            return Err(self.unsupported("more than one aggregate in a sub-select"));
        }
        let mut bound = BTreeSet::new();
        q.pattern.collect_vars(&mut bound);
        for p in &q.projection {
            match p {
                Projection::Var(v) => {
                    if !bound.contains(v) {
                        return Err(self.syntax(format!("projected variable ?{v} does not occur in the pattern")));
                    }
                    if aggregates > 0 && !q.group_by.contains(v) {
                        return Err(self.syntax(format!("projected variable ?{v} must appear in GROUP BY")));
                    }
                }
                Projection::Count { var: Some(v), .. } if !bound.contains(v) => {
                    return Err(self.syntax(format!("counted variable ?{v} does not occur in the pattern")));
                }
                Projection::Count { .. } => {}
            }
        }
        Ok(())
    }

    fn aggregate(&mut self) -> PResult<Projection> {
        self.expect(&Tok::LParen, "'('")?;
        match self.peek() {
            Tok::Word(w) if w.eq_ignore_ascii_case("COUNT") => {
                self.next();
            }
            Tok::Word(w) => return Err(self.unsupported(format!("{} in projection", w.to_ascii_uppercase()))),
            _ => return Err(self.unsupported("expression in projection")),
        }
        self.expect(&Tok::LParen, "'(' after COUNT")?;
        self.check_unsupported_word()?;
        let var = if *self.peek() == Tok::Star {
            self.next();
            None
        } else {
            Some(self.var()?)
        };
        self.expect(&Tok::RParen, "')'")?;
        self.expect_word("AS")?;
        let alias = self.var()?;
        self.expect(&Tok::RParen, "')'")?;
        Ok(Projection::Count { var, alias })
    }

    fn group(&mut self) -> PResult<GroupPattern> {
        self.expect(&Tok::LBrace, "'{'")?;
        if self.peek().is_word("SELECT") {
            let q = self.query(false)?;
            self.expect(&Tok::RBrace, "'}' after sub-select")?;
            return Ok(GroupPattern { elements: vec![Element::SubSelect(Box::new(q))] });
        }
        let mut elements = Vec::new();
        loop {
            self.check_unsupported_word()?;
            match self.peek().clone() {
                Tok::RBrace => {
                    self.next();
                    return Ok(GroupPattern { elements });
                }
                Tok::Dot => {
                    self.next();
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("OPTIONAL") => {
                    self.next();
                    elements.push(Element::Optional(self.group()?));
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("FILTER") => {
                    self.next();
                    elements.push(self.filter()?);
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("BIND") => {
                    self.next();
                    self.expect(&Tok::LParen, "'(' after BIND")?;
                    let e = self.expr()?;
                    self.expect_word("AS")?;
                    let v = self.var()?;
                    self.expect(&Tok::RParen, "')'")?;
                    elements.push(Element::Bind(e, v));
                }
                Tok::LBrace => {
                    let first = self.group()?;
                    if self.peek().is_word("UNION") {
                        let mut branches = vec![first];
                        while self.peek().is_word("UNION") {
                            self.next();
                            branches.push(self.group()?);
                        }
                        elements.push(Element::Union(branches));
                    } else if let [Element::SubSelect(_)] = first.elements.as_slice() {
                        elements.extend(first.elements);
                    } else {
                        elements.push(Element::Group(first));
                    }
                }
                Tok::Eof => return Err(self.syntax("unterminated group, expected '}'")),
                _ => self.triples(&mut elements)?,
            }
        }
    }

    fn filter(&mut self) -> PResult<Element> {
        if self.peek().is_word("NOT") {
            self.next();
            self.expect_word("EXISTS")?;
            return Ok(Element::NotExists(self.group()?));
        }
        if self.peek().is_word("EXISTS") {
            return Err(self.unsupported("FILTER EXISTS"));
        }
        if *self.peek() == Tok::LParen {
            self.next();
            let e = self.expr()?;
            self.expect(&Tok::RParen, "')' closing FILTER")?;
            return Ok(Element::Filter(e));
        }
        Ok(Element::Filter(self.primary()?))
    }

    fn triples(&mut self, out: &mut Vec<Element>) -> PResult<()> {
        let subject = self.node("subject")?;
        loop {
            let verb = self.verb()?;
            loop {
                let object = self.node("object")?;
                out.push(Element::Triple(TriplePattern { subject: subject.clone(), verb: verb.clone(), object }));
                if *self.peek() == Tok::Comma {
                    self.next();
                } else {
                    break;
                }
            }
            if *self.peek() == Tok::Semicolon {
                self.next();
                while *self.peek() == Tok::Semicolon {
                    self.next();
                }
                if matches!(self.peek(), Tok::Dot | Tok::RBrace) {
                    break;
                }
            } else {
                break;
            }
        }
        match self.peek() {
            Tok::Dot => {
                self.next();
                Ok(())
            }
            Tok::RBrace | Tok::LBrace | Tok::Word(_) => Ok(()),
            other => Err(self.syntax(format!("expected '.', ';' or '}}' after triple pattern, found {}", other.describe()))),
        }
    }

    fn node(&mut self, role: &str) -> PResult<VarOrTerm> {
        match self.peek() {
            Tok::Var { .. } => Ok(VarOrTerm::Var(self.var()?)),
            Tok::LBracket => Err(self.unsupported("blank node property list")),
            Tok::LParen => Err(self.unsupported("collection syntax in patterns")),
            Tok::Word(w) if w == "a" => Err(self.syntax(format!("'a' is not allowed as {role}"))),
            _ => match self.constant()? {
                Some(t) => Ok(VarOrTerm::Term(t)),
                None => Err(self.syntax(format!("expected {role}, found {}", self.peek().describe()))),
            },
        }
    }

    fn iri(&mut self) -> PResult<Option<Iri>> {
        let out = match self.peek().clone() {
            Tok::Iri(i) => i,
            Tok::PName { prefix, local } => {
                let Some(ns) = self.prefixes.get(&prefix) else {
                    let (line, column) = self.here();
                    return Err(SparqlError::UnboundPrefix { prefix, line, column });
                };
                format!("{ns}{local}")
            }
            _ => return Ok(None),
        };
        let iri = Iri::new(&out).map_err(|e| self.syntax(e.to_string()))?;
        self.next();
        Ok(Some(iri))
    }

    fn constant(&mut self) -> PResult<Option<Term>> {
        if let Some(i) = self.iri()? {
            return Ok(Some(Term::Iri(i)));
        }
        let t = match self.peek().clone() {
            Tok::Str(s) => {
                self.next();
                match self.peek().clone() {
                    Tok::LangTag(lang) => {
                        self.next();
                        Term::Literal(Literal::new_lang(s, lang))
                    }
                    Tok::Carets => {
                        self.next();
                        let dt = self.iri()?.ok_or_else(|| self.syntax("expected datatype IRI after '^^'"))?;
                        Term::Literal(Literal::new_typed(s, dt))
                    }
                    _ => Term::string(&s),
                }
            }
            Tok::Integer(n) => {
                self.next();
                Term::typed(&n, xsd::INTEGER)
            }
            Tok::Decimal(n) => {
                self.next();
                Term::typed(&n, xsd::DECIMAL)
            }
            Tok::Word(w) if w == "true" || w == "false" => {
                self.next();
                Term::typed(&w, xsd::BOOLEAN)
            }
            _ => return Ok(None),
        };
        Ok(Some(t))
    }

    fn verb(&mut self) -> PResult<Verb> {
        if let Tok::Var { .. } = self.peek() {
            return Ok(Verb::Var(self.var()?));
        }
        let path = self.path()?;
        if *self.peek() == Tok::Pipe {
            return Err(self.unsupported("property path alternation '|'"));
        }
        Ok(Verb::Path(path))
    }

    fn path(&mut self) -> PResult<PathExpr> {
        let mut p = self.path_elt()?;
        while *self.peek() == Tok::Slash {
            self.next();
            let rhs = self.path_elt()?;
            p = PathExpr::seq(p, rhs);
        }
        Ok(p)
    }

    fn path_elt(&mut self) -> PResult<PathExpr> {
        let primary = match self.peek().clone() {
            Tok::Word(w) if w == "a" => {
                self.next();
                PathExpr::Predicate(Iri::new(rdf::TYPE).expect("valid"))
            }
            Tok::LParen => {
                self.next();
                let p = self.path()?;
                if *self.peek() == Tok::Pipe {
                    return Err(self.unsupported("property path alternation '|'"));
                }
                self.expect(&Tok::RParen, "')' closing path")?;
                p
            }
            Tok::Caret => return Err(self.unsupported("inverse property path '^'")),
            Tok::Bang => return Err(self.unsupported("negated property set '!'")),
            _ => match self.iri()? {
                Some(i) => PathExpr::Predicate(i),
                None => return Err(self.syntax(format!("expected predicate, found {}", self.peek().describe()))),
            },
        };
        match self.peek() {
            Tok::Star => {
                self.next();
                Ok(PathExpr::star(primary))
            }
            Tok::Plus => Err(self.unsupported("one-or-more path '+'")),
            Tok::Question => Err(self.unsupported("zero-or-one path '?'")),
            _ => Ok(primary),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.and_expr()?;
        while *self.peek() == Tok::OrOr {
            self.next();
            let rhs = self.and_expr()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.relational()?;
        while *self.peek() == Tok::AndAnd {
            self.next();
            let rhs = self.relational()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn relational(&mut self) -> PResult<Expr> {
        let lhs = self.unary()?;
        self.reject_arithmetic()?;
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Gt => CmpOp::Gt,
            Tok::Le => CmpOp::Le,
            Tok::Ge => CmpOp::Ge,
            Tok::Word(w) if w.eq_ignore_ascii_case("IN") || w.eq_ignore_ascii_case("NOT") => {
                return Err(self.unsupported("IN / NOT IN"))
            }
            _ => return Ok(lhs),
        };
        self.next();
        let rhs = self.unary()?;
        self.reject_arithmetic()?;
        Ok(Expr::Cmp(op, Box::new(lhs), Box::new(rhs)))
    }

    fn reject_arithmetic(&self) -> PResult<()> {
        if matches!(self.peek(), Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash) {
            return Err(self.unsupported("arithmetic expressions"));
        }
        Ok(())
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.peek() {
            Tok::Bang => {
                self.next();
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Tok::Plus | Tok::Minus => Err(self.unsupported("arithmetic expressions")),
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Var { .. } => Ok(Expr::Var(self.var()?)),
            Tok::Word(w) if w != "true" && w != "false" => self.builtin(&w),
            _ => match self.constant()? {
                Some(t) => Ok(Expr::Const(t)),
                None => Err(self.syntax(format!("expected expression, found {}", self.peek().describe()))),
            },
        }
    }

    fn args(&mut self, n: usize, name: &str) -> PResult<Vec<Expr>> {
        self.expect(&Tok::LParen, &format!("'(' after {name}"))?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.expect(&Tok::Comma, &format!("',' in {name} arguments"))?;
            }
            out.push(self.expr()?);
        }
        if *self.peek() == Tok::Comma {
            return Err(self.unsupported(format!("{name} with more than {n} arguments")));
        }
        self.expect(&Tok::RParen, &format!("')' closing {name}"))?;
        Ok(out)
    }

    fn builtin(&mut self, word: &str) -> PResult<Expr> {
        let upper = word.to_ascii_uppercase();
        self.next();
        let boxed = |mut v: Vec<Expr>| Box::new(v.remove(0));
        Ok(match upper.as_str() {
            "BOUND" => {
                self.expect(&Tok::LParen, "'(' after BOUND")?;
                let v = self.var()?;
                self.expect(&Tok::RParen, "')' closing BOUND")?;
                Expr::Bound(v)
            }
            "IF" => {
                let mut a = self.args(3, "IF")?;
                let (c, t, e) = (a.remove(0), a.remove(0), a.remove(0));
                Expr::If(Box::new(c), Box::new(t), Box::new(e))
            }
            "STR" => Expr::Str(boxed(self.args(1, "STR")?)),
            "STRSTARTS" => {
                let mut a = self.args(2, "STRSTARTS")?;
                Expr::StrStarts(Box::new(a.remove(0)), Box::new(a.remove(0)))
            }
            "ISLITERAL" => Expr::IsLiteral(boxed(self.args(1, "isLiteral")?)),
            "ISIRI" | "ISURI" => Expr::IsIri(boxed(self.args(1, "isIRI")?)),
            "ISBLANK" => Expr::IsBlank(boxed(self.args(1, "isBlank")?)),
            "DATATYPE" => Expr::Datatype(boxed(self.args(1, "datatype")?)),
            "REPLACE" => {
                let mut a = self.args(3, "REPLACE")?;
                Expr::Replace(Box::new(a.remove(0)), Box::new(a.remove(0)), Box::new(a.remove(0)))
            }
            "EXISTS" | "NOT" => return Err(self.unsupported("EXISTS inside an expression")),
            _ => return Err(self.unsupported(format!("function {upper}"))),
        })
    }
}
