use std::fmt;
use std::sync::LazyLock;

use regex::Regex;

use crate::sparql::numeric::Decimal;

/// Lexical grammar of the `quan:quantity` shorthand, e.g. `320kbps` or `-1.5ms`.
pub const QUANTITY_PATTERN: &str = r"^[+-]?[0-9]+(\.[0-9]+)?[A-Za-z%]+$";

static GRAMMAR: LazyLock<Regex> = LazyLock::new(|| Regex::new(QUANTITY_PATTERN).expect("valid pattern"));

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed quantity literal \"{0}\"")]
pub struct QuantityError(pub String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantityValue {
    pub magnitude: Decimal,
    pub unit: String,
}

impl fmt::Display for QuantityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.magnitude, self.unit)
    }
}

pub fn parse_quantity(lexical: &str) -> Result<QuantityValue, QuantityError> {
    if !GRAMMAR.is_match(lexical) {
        return Err(QuantityError(lexical.to_owned()));
    }
    let split = lexical.find(|c: char| c.is_ascii_alphabetic() || c == '%').expect("grammar guarantees a unit");
    let magnitude = Decimal::parse(&lexical[..split]).ok_or_else(|| QuantityError(lexical.to_owned()))?;
    Ok(QuantityValue { magnitude, unit: lexical[split..].to_owned() })
}

/// The unit token of a quantity literal, or `None` if it does not follow the grammar.
pub fn unit_of(lexical: &str) -> Option<&str> {
    if !GRAMMAR.is_match(lexical) {
        return None;
    }
    lexical.find(|c: char| c.is_ascii_alphabetic() || c == '%').map(|i| &lexical[i..])
}
