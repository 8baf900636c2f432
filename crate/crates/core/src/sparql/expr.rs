use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use regex::Regex;
use thiserror::Error;

use super::ast::{CmpOp, Expr};
use super::numeric::Decimal;
use super::Solution;
use crate::rdf::vocab::xsd;
use crate::rdf::Term;

/// The error value of expression evaluation. FILTER treats it as false and BIND leaves the
/// variable unbound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("variable ?{0} is unbound")]
    Unbound(String),
    #[error("type error: {0}")]
    Type(&'static str),
    #[error("invalid regular expression: {0}")]
    Regex(String),
}

type Value = Result<Term, ExprError>;

/// Evaluates `expr` against one solution.
pub fn eval_expr(expr: &Expr, sol: &Solution) -> Value {
    match expr {
        Expr::Var(v) => sol.get(v).cloned().ok_or_else(|| ExprError::Unbound(v.to_string())),
        Expr::Const(t) => Ok(t.clone()),
        Expr::Bound(v) => Ok(Term::boolean(sol.get(v).is_some())),
        Expr::Not(a) => Ok(Term::boolean(!ebv(&eval_expr(a, sol)?)?)),
        Expr::And(a, b) => {
            let l = eval_expr(a, sol).and_then(|t| ebv(&t));
            if l == Ok(false) {
                return Ok(Term::boolean(false));
            }
            let r = eval_expr(b, sol).and_then(|t| ebv(&t));
            match (l, r) {
                (_, Ok(false)) => Ok(Term::boolean(false)),
                (Ok(true), Ok(true)) => Ok(Term::boolean(true)),
                (Err(e), _) | (_, Err(e)) => Err(e),
                _ => unreachable!(),
            }
        }
        Expr::Or(a, b) => {
            let l = eval_expr(a, sol).and_then(|t| ebv(&t));
            if l == Ok(true) {
                return Ok(Term::boolean(true));
            }
            let r = eval_expr(b, sol).and_then(|t| ebv(&t));
            match (l, r) {
                (_, Ok(true)) => Ok(Term::boolean(true)),
                (Ok(false), Ok(false)) => Ok(Term::boolean(false)),
                (Err(e), _) | (_, Err(e)) => Err(e),
                _ => unreachable!(),
            }
        }
        Expr::Cmp(op, a, b) => compare(*op, &eval_expr(a, sol)?, &eval_expr(b, sol)?).map(Term::boolean),
        Expr::If(c, t, e) => {
            if ebv(&eval_expr(c, sol)?)? {
                eval_expr(t, sol)
            } else {
                eval_expr(e, sol)
            }
        }
        Expr::Str(a) => match eval_expr(a, sol)? {
            Term::Iri(i) => Ok(Term::string(i.as_str())),
            Term::Literal(l) => Ok(Term::string(l.lexical())),
            Term::BlankNode(_) => Err(ExprError::Type("STR of a blank node")),
        },
        Expr::StrStarts(a, b) => {
            let hay = string_arg(&eval_expr(a, sol)?)?;
            let needle = string_arg(&eval_expr(b, sol)?)?;
            Ok(Term::boolean(hay.starts_with(needle.as_str())))
        }
        Expr::IsLiteral(a) => Ok(Term::boolean(eval_expr(a, sol)?.is_literal())),
        Expr::IsIri(a) => Ok(Term::boolean(eval_expr(a, sol)?.is_iri())),
        Expr::IsBlank(a) => Ok(Term::boolean(eval_expr(a, sol)?.is_blank())),
        Expr::Datatype(a) => match eval_expr(a, sol)? {
            Term::Literal(l) => Ok(Term::Iri(l.datatype().clone())),
            _ => Err(ExprError::Type("datatype of a non-literal")),
        },
        Expr::Replace(s, pattern, replacement) => {
            let text = string_arg(&eval_expr(s, sol)?)?;
            let pattern = string_arg(&eval_expr(pattern, sol)?)?;
            let replacement = string_arg(&eval_expr(replacement, sol)?)?;
            let re = cached_regex(&pattern)?;
            Ok(Term::string(&re.replace_all(&text, replacement.as_str())))
        }
    }
}

thread_local! {
    static REGEX_CACHE: RefCell<HashMap<String, Regex>> = RefCell::new(HashMap::new());
}

pub(crate) fn cached_regex(pattern: &str) -> Result<Regex, ExprError> {
    REGEX_CACHE.with(|cache| {
        if let Some(re) = cache.borrow().get(pattern) {
            return Ok(re.clone());
        }
        let re = Regex::new(pattern).map_err(|e| ExprError::Regex(e.to_string()))?;
        cache.borrow_mut().insert(pattern.to_owned(), re.clone());
        Ok(re)
    })
}

fn string_arg(t: &Term) -> Result<String, ExprError> {
    match t {
        Term::Literal(l) if l.datatype().as_str() == xsd::STRING || l.language().is_some() => Ok(l.lexical().to_owned()),
        _ => Err(ExprError::Type("expected a string literal")),
    }
}

/// Effective boolean value.
pub fn ebv(t: &Term) -> Result<bool, ExprError> {
    let Term::Literal(l) = t else {
        return Err(ExprError::Type("no boolean value for a non-literal"));
    };
    match l.datatype().as_str() {
        xsd::BOOLEAN => match l.lexical() {
            "true" | "1" => Ok(true),
            "false" | "0" => Ok(false),
            _ => Ok(false),
        },
        xsd::STRING => Ok(!l.lexical().is_empty()),
        xsd::INTEGER | xsd::DECIMAL => Decimal::from_literal(l).map(|d| !d.is_zero()).ok_or(ExprError::Type("bad numeric")),
        _ if l.language().is_some() => Ok(!l.lexical().is_empty()),
        _ => Err(ExprError::Type("no boolean value for this datatype")),
    }
}

fn numeric(t: &Term) -> Option<Decimal> {
    t.as_literal().and_then(Decimal::from_literal)
}

fn simple_string(t: &Term) -> Option<&str> {
    match t {
        Term::Literal(l) if l.datatype().as_str() == xsd::STRING => Some(l.lexical()),
        _ => None,
    }
}

fn boolean(t: &Term) -> Option<bool> {
    match t {
        Term::Literal(l) if l.datatype().as_str() == xsd::BOOLEAN => match l.lexical() {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        },
        _ => None,
    }
}

/// Comparison with numeric promotion; `=`/`!=` fall back to term identity.
pub fn compare(op: CmpOp, a: &Term, b: &Term) -> Result<bool, ExprError> {
    let ordering: Option<Ordering> = if let (Some(x), Some(y)) = (numeric(a), numeric(b)) {
        Some(x.compare(&y).ok_or(ExprError::Type("numeric overflow"))?)
    } else if let (Some(x), Some(y)) = (simple_string(a), simple_string(b)) {
        Some(x.cmp(y))
    } else if let (Some(x), Some(y)) = (boolean(a), boolean(b)) {
        Some(x.cmp(&y))
    } else {
        None
    };
    match (op, ordering) {
        (CmpOp::Eq, Some(o)) => Ok(o == Ordering::Equal),
        (CmpOp::Ne, Some(o)) => Ok(o != Ordering::Equal),
        (CmpOp::Eq, None) => Ok(a == b),
        (CmpOp::Ne, None) => Ok(a != b),
        (CmpOp::Lt, Some(o)) => Ok(o == Ordering::Less),
        (CmpOp::Gt, Some(o)) => Ok(o == Ordering::Greater),
        (CmpOp::Le, Some(o)) => Ok(o != Ordering::Greater),
        (CmpOp::Ge, Some(o)) => Ok(o != Ordering::Less),
        (_, None) => Err(ExprError::Type("values are not comparable")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::{rdf, tio};
    use crate::rdf::PrefixMap;
    use crate::sparql::parse_query;
    use crate::sparql::ast::Element;

    fn filter_expr(text: &str) -> Expr {
        let q = parse_query(&format!("SELECT ?x WHERE {{ ?x ?p ?o FILTER({text}) }}"), &PrefixMap::common()).unwrap();
        match q.pattern.elements.last().unwrap() {
            Element::Filter(e) => e.clone(),
            other => panic!("{other:?}"),
        }
    }

    fn eval(text: &str, sol: &Solution) -> Value {
        eval_expr(&filter_expr(text), sol)
    }

    #[test]
    fn bound_of_unbound_is_false() {
        assert_eq!(eval("BOUND(?arityMax)", &Solution::new()), Ok(Term::boolean(false)));
    }

    #[test]
    fn if_short_circuits_on_identity() {
        assert_eq!(eval("IF(rdf:nil = rdf:nil, 0, 99)", &Solution::new()), Ok(Term::integer(0)));
        assert_eq!(eval("IF(rdf:nil != rdf:nil, ?unbound, 1)", &Solution::new()), Ok(Term::integer(1)));
    }

    #[test]
    fn strstarts_on_namespace() {
        let text = format!("STRSTARTS(STR(icm:target), \"{}\")", tio::ICM);
        assert_eq!(eval(&text, &Solution::new()), Ok(Term::boolean(true)));
    }

    #[test]
    fn unbound_operand_is_error_and_or_recovers() {
        assert!(eval("?x < 3", &Solution::new()).is_err());
        assert_eq!(eval("?x < 3 || true", &Solution::new()), Ok(Term::boolean(true)));
        assert_eq!(eval("?x < 3 && false", &Solution::new()), Ok(Term::boolean(false)));
    }

    #[test]
    fn integer_decimal_promotion() {
        assert_eq!(eval("2 < 2.5", &Solution::new()), Ok(Term::boolean(true)));
        assert_eq!(eval("2 = 2.0", &Solution::new()), Ok(Term::boolean(true)));
    }

    #[test]
    fn datatype_and_is_literal() {
        let mut s = Solution::new();
        s.insert("v", Term::boolean(true));
        assert_eq!(eval("isLiteral(?v) && datatype(?v) = xsd:boolean", &s), Ok(Term::boolean(true)));
        s.insert("w", Term::iri(rdf::NIL));
        assert!(eval("datatype(?w)", &s).is_err());
    }

    #[test]
    fn replace_extracts_unit() {
        let mut s = Solution::new();
        s.insert("q", Term::typed("320kbps", tio::QUANTITY_DATATYPE));
        assert_eq!(eval("REPLACE(STR(?q), \"^[+-]?[0-9]+([.][0-9]+)?\", \"\")", &s), Ok(Term::string("kbps")));
    }

    #[test]
    fn string_ordering() {
        assert_eq!(eval("\"a\" < \"b\"", &Solution::new()), Ok(Term::boolean(true)));
        assert!(eval("<http://x/a> < <http://x/b>", &Solution::new()).is_err());
    }
}
