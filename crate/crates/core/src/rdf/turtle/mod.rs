//! Turtle reader and writer for the subset documented in `docs/turtle-subset.md`.

mod lexer;
mod writer;

use std::collections::{HashMap, HashSet};

use lexer::{Lexer, Spanned, Tok};
pub use writer::serialize_turtle;
pub(crate) use writer::term_text;

use super::graph::{Graph, Triple};
use super::prefix::PrefixMap;
use super::term::{BlankNode, Iri, Literal, Term};
use super::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TurtleError {
    #[error("syntax error at line {line}, column {column} near `{token}`: {message}")]
    Syntax { line: usize, column: usize, token: String, message: String },
    #[error("unbound prefix `{prefix}:` at line {line}, column {column}")]
    UnboundPrefix { prefix: String, line: usize, column: usize },
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Turtle { path: String, source: TurtleError },
}

impl FileError {
    pub fn path(&self) -> &str {
        match self {
            FileError::Io { path, .. } | FileError::Turtle { path, .. } => path,
        }
    }
}

pub fn read_turtle_file(path: impl AsRef<std::path::Path>) -> Result<(Graph, PrefixMap), FileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io { path: path.display().to_string(), source })?;
    parse_turtle(&text, None).map_err(|source| FileError::Turtle { path: path.display().to_string(), source })
}

/// Reads several files into one graph. Blank nodes from different files never merge;
/// the first file to declare a prefix wins.
pub fn read_turtle_files<P: AsRef<std::path::Path>>(paths: &[P]) -> Result<(Graph, PrefixMap), FileError> {
    let mut graph = Graph::new();
    let mut prefixes = PrefixMap::new();
    for path in paths {
        let (g, p) = read_turtle_file(path)?;
        graph.extend_disjoint(&g);
        prefixes.merge_missing(&p);
    }
    Ok((graph, prefixes))
}

/// Parses a Turtle document into a graph and the prefixes it declared.
pub fn parse_turtle(text: &str, base: Option<&str>) -> Result<(Graph, PrefixMap), TurtleError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut p = Parser {
        tokens,
        pos: 0,
        prefixes: PrefixMap::new(),
        base: base.map(str::to_owned),
        graph: Graph::new(),
        labels: HashMap::new(),
        used: HashSet::new(),
        counter: 0,
    };
    p.document()?;
    Ok((p.graph, p.prefixes))
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    prefixes: PrefixMap,
    base: Option<String>,
    graph: Graph,
    labels: HashMap<String, Term>,
    used: HashSet<String>,
    counter: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, sp: &Spanned, message: impl Into<String>) -> TurtleError {
        TurtleError::Syntax { line: sp.line, column: sp.column, token: sp.tok.describe(), message: message.into() }
    }

    fn error_here(&self, message: impl Into<String>) -> TurtleError {
        self.error_at(&self.tokens[self.pos], message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), TurtleError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn fresh_blank(&mut self) -> Term {
        loop {
            let label = format!("genid{}", self.counter);
            self.counter += 1;
            if self.used.insert(label.clone()) {
                return Term::BlankNode(BlankNode::new(label).expect("non-empty"));
            }
        }
    }

    fn labelled_blank(&mut self, label: &str) -> Term {
        if let Some(t) = self.labels.get(label) {
            return t.clone();
        }
        let term = if self.used.insert(label.to_owned()) {
            Term::BlankNode(BlankNode::new(label).expect("non-empty"))
        } else {
            self.fresh_blank()
        };
        self.labels.insert(label.to_owned(), term.clone());
        term
    }

    fn emit(&mut self, s: Term, p: Term, o: Term) {
        self.graph.insert(Triple { subject: s, predicate: p, object: o });
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            match self.peek() {
                Tok::Eof => return Ok(()),
                Tok::PrefixDirective => {
                    self.next();
                    self.prefix_decl()?;
                    self.expect(Tok::Dot, "'.' after @prefix")?;
                }
                Tok::SparqlPrefix => {
                    self.next();
                    self.prefix_decl()?;
                }
                Tok::BaseDirective => {
                    self.next();
                    self.base_decl()?;
                    self.expect(Tok::Dot, "'.' after @base")?;
                }
                Tok::SparqlBase => {
                    self.next();
                    self.base_decl()?;
                }
                _ => {
                    self.triples()?;
                    self.expect(Tok::Dot, "'.' at end of statement")?;
                }
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), TurtleError> {
        let sp = self.next();
        let Tok::PName { prefix, local } = &sp.tok else {
            return Err(self.error_at(&sp, "expected prefix name"));
        };
        if !local.is_empty() {
            return Err(self.error_at(&sp, "prefix declaration must end with ':'"));
        }
        let iri_sp = self.next();
        let Tok::Iri(ns) = &iri_sp.tok else {
            return Err(self.error_at(&iri_sp, "expected namespace IRI"));
        };
        let ns = self.resolve(ns, &iri_sp)?;
        self.prefixes.insert(prefix.clone(), ns);
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), TurtleError> {
        let sp = self.next();
        let Tok::Iri(iri) = &sp.tok else {
            return Err(self.error_at(&sp, "expected base IRI"));
        };
        let iri = self.resolve(iri, &sp)?;
        self.base = Some(iri);
        Ok(())
    }

    fn resolve(&self, iri: &str, sp: &Spanned) -> Result<String, TurtleError> {
        let has_scheme = iri
            .split_once(':')
            .is_some_and(|(scheme, _)| !scheme.is_empty() && scheme.chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c)));
        if has_scheme {
            Ok(iri.to_owned())
        } else if let Some(base) = &self.base {
            Ok(format!("{base}{iri}"))
        } else {
            Err(self.error_at(sp, "relative IRI without a base"))
        }
    }

    fn make_iri(&self, value: String, sp: &Spanned) -> Result<Term, TurtleError> {
        Iri::new(value).map(Term::Iri).map_err(|e| self.error_at(sp, e.to_string()))
    }

    fn iri_token(&mut self) -> Result<Option<Term>, TurtleError> {
        let sp = self.tokens[self.pos].clone();
        match &sp.tok {
            Tok::Iri(i) => {
                self.next();
                let resolved = self.resolve(i, &sp)?;
                Ok(Some(self.make_iri(resolved, &sp)?))
            }
            Tok::PName { prefix, local } => {
                self.next();
                let ns = self.prefixes.get(prefix).ok_or_else(|| TurtleError::UnboundPrefix {
                    prefix: prefix.clone(),
                    line: sp.line,
                    column: sp.column,
                })?;
                Ok(Some(self.make_iri(format!("{ns}{local}"), &sp)?))
            }
            _ => Ok(None),
        }
    }

    fn triples(&mut self) -> Result<(), TurtleError> {
        if *self.peek() == Tok::LBracket {
            let subject = self.blank_property_list()?;
            if *self.peek() != Tok::Dot {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> Result<Term, TurtleError> {
        if let Some(iri) = self.iri_token()? {
            return Ok(iri);
        }
        match self.peek().clone() {
            Tok::Blank(label) => {
                self.next();
                Ok(self.labelled_blank(&label))
            }
            Tok::LParen => self.collection(),
            _ => Err(self.error_here("expected subject")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), TurtleError> {
        loop {
            let predicate = self.verb()?;
            self.object_list(subject, &predicate)?;
            if *self.peek() != Tok::Semicolon {
                return Ok(());
            }
            while *self.peek() == Tok::Semicolon {
                self.next();
            }
            if matches!(self.peek(), Tok::Dot | Tok::RBracket) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Term, TurtleError> {
        if *self.peek() == Tok::A {
            self.next();
            return Ok(Term::iri(rdf::TYPE));
        }
        match self.iri_token()? {
            Some(p) => Ok(p),
            None => Err(self.error_here("expected predicate")),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Term) -> Result<(), TurtleError> {
        loop {
            let o = self.object()?;
            self.emit(subject.clone(), predicate.clone(), o);
            if *self.peek() == Tok::Comma {
                self.next();
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, TurtleError> {
        if let Some(iri) = self.iri_token()? {
            return Ok(iri);
        }
        let sp = self.tokens[self.pos].clone();
        match sp.tok {
            Tok::Blank(label) => {
                self.next();
                Ok(self.labelled_blank(&label))
            }
            Tok::LBracket => self.blank_property_list(),
            Tok::LParen => self.collection(),
            Tok::Str(s) => {
                self.next();
                match self.peek().clone() {
                    Tok::LangTag(lang) => {
                        self.next();
                        Ok(Term::Literal(Literal::new_lang(s, lang)))
                    }
                    Tok::Carets => {
                        self.next();
                        let dt_sp = self.tokens[self.pos].clone();
                        match self.iri_token()? {
                            Some(Term::Iri(dt)) => Ok(Term::Literal(Literal::new_typed(s, dt))),
                            _ => Err(self.error_at(&dt_sp, "expected datatype IRI after '^^'")),
                        }
                    }
                    _ => Ok(Term::Literal(Literal::new_simple(s))),
                }
            }
            Tok::Integer(n) => {
                self.next();
                Ok(Term::typed(&n, xsd::INTEGER))
            }
            Tok::Decimal(n) => {
                self.next();
                Ok(Term::typed(&n, xsd::DECIMAL))
            }
            Tok::True => {
                self.next();
                Ok(Term::boolean(true))
            }
            Tok::False => {
                self.next();
                Ok(Term::boolean(false))
            }
            _ => Err(self.error_at(&sp, "expected object")),
        }
    }

    fn blank_property_list(&mut self) -> Result<Term, TurtleError> {
        self.expect(Tok::LBracket, "'['")?;
        let node = self.fresh_blank();
        if *self.peek() != Tok::RBracket {
            self.predicate_object_list(&node)?;
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, TurtleError> {
        self.expect(Tok::LParen, "'('")?;
        let mut items = Vec::new();
        while *self.peek() != Tok::RParen {
            if *self.peek() == Tok::Eof {
                return Err(self.error_here("unterminated collection"));
            }
            items.push(self.object()?);
        }
        self.next();
        if items.is_empty() {
            return Ok(Term::iri(rdf::NIL));
        }
        let cells: Vec<Term> = items.iter().map(|_| self.fresh_blank()).collect();
        let first = Term::iri(rdf::FIRST);
        let rest = Term::iri(rdf::REST);
        for (i, item) in items.into_iter().enumerate() {
            self.emit(cells[i].clone(), first.clone(), item);
            let next = cells.get(i + 1).cloned().unwrap_or_else(|| Term::iri(rdf::NIL));
            self.emit(cells[i].clone(), rest.clone(), next);
        }
        Ok(cells[0].clone())
    }
}
