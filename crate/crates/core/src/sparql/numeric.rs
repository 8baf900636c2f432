//! Exact integer/decimal values for comparisons. Integers are decimals with scale 0.

use std::cmp::Ordering;

use crate::rdf::vocab::xsd;
use crate::rdf::Literal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decimal {
    mantissa: i128,
    scale: u32,
}

impl Decimal {
    /// Parses `[+-]?digits(.digits)?`.
    pub fn parse(lexical: &str) -> Option<Decimal> {
        let (neg, body) = match lexical.as_bytes().first()? {
            b'-' => (true, &lexical[1..]),
            b'+' => (false, &lexical[1..]),
            _ => (false, lexical),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || (body.contains('.') && frac.is_empty())
        {
            return None;
        }
        let frac = frac.trim_end_matches('0');
        let mut mantissa: i128 = 0;
        for b in int.bytes().chain(frac.bytes()) {
            mantissa = mantissa.checked_mul(10)?.checked_add(i128::from(b - b'0'))?;
        }
        Some(Decimal { mantissa: if neg { -mantissa } else { mantissa }, scale: frac.len() as u32 })
    }

    pub fn from_literal(lit: &Literal) -> Option<Decimal> {
        match lit.datatype().as_str() {
            xsd::INTEGER if !lit.lexical().contains('.') => Decimal::parse(lit.lexical()),
            xsd::DECIMAL => Decimal::parse(lit.lexical()),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0
    }

    fn rescaled(&self, scale: u32) -> Option<i128> {
        self.mantissa.checked_mul(10i128.checked_pow(scale - self.scale)?)
    }

    /// Value comparison; `None` only if aligning the scales overflows.
    pub fn compare(&self, other: &Decimal) -> Option<Ordering> {
        let scale = self.scale.max(other.scale);
        Some(self.rescaled(scale)?.cmp(&other.rescaled(scale)?))
    }
}

impl std::fmt::Display for Decimal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let digits = self.mantissa.unsigned_abs().to_string();
        let sign = if self.mantissa < 0 { "-" } else { "" };
        let scale = self.scale as usize;
        if scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let padded = format!("{digits:0>width$}", width = scale + 1);
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{sign}{int}.{frac}")
    }
}
