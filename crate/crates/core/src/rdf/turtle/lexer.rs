use super::TurtleError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Iri(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    Integer(String),
    Decimal(String),
    LangTag(String),
    True,
    False,
    A,
    PrefixDirective,
    BaseDirective,
    SparqlPrefix,
    SparqlBase,
    Carets,
    Dot,
    Semicolon,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Iri(i) => format!("<{i}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::Blank(b) => format!("_:{b}"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::Integer(s) | Tok::Decimal(s) => s.clone(),
            Tok::LangTag(l) => format!("@{l}"),
            Tok::True => "true".into(),
            Tok::False => "false".into(),
            Tok::A => "a".into(),
            Tok::PrefixDirective => "@prefix".into(),
            Tok::BaseDirective => "@base".into(),
            Tok::SparqlPrefix => "PREFIX".into(),
            Tok::SparqlBase => "BASE".into(),
            Tok::Carets => "^^".into(),
            Tok::Dot => ".".into(),
            Tok::Semicolon => ";".into(),
            Tok::Comma => ",".into(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, column: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn err(&self, line: usize, column: usize, token: impl Into<String>, message: impl Into<String>) -> TurtleError {
        TurtleError::Syntax { line, column, token: token.into(), message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    pub(crate) fn tokenize(mut self) -> Result<Vec<Spanned>, TurtleError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let (line, column) = (self.line, self.column);
            let Some(c) = self.peek() else {
                out.push(Spanned { tok: Tok::Eof, line, column });
                return Ok(out);
            };
            let tok = match c {
                '<' => {
                    self.bump();
                    let mut iri = String::new();
                    loop {
                        match self.bump() {
                            Some('>') => break,
                            Some(c) if c.is_whitespace() => {
                                return Err(self.err(line, column, format!("<{iri}"), "whitespace inside IRI reference"))
                            }
                            Some(c) => iri.push(c),
                            None => return Err(self.err(line, column, format!("<{iri}"), "unterminated IRI reference")),
                        }
                    }
                    Tok::Iri(iri)
                }
                '"' | '\'' => self.string(c, line, column)?,
                '_' if self.peek2() == Some(':') => {
                    self.bump();
                    self.bump();
                    let label = self.name_chars();
                    if label.is_empty() {
                        return Err(self.err(line, column, "_:", "empty blank node label"));
                    }
                    Tok::Blank(label)
                }
                '@' => {
                    self.bump();
                    let mut word = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == '-' {
                            word.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    match word.as_str() {
                        "prefix" => Tok::PrefixDirective,
                        "base" => Tok::BaseDirective,
                        "" => return Err(self.err(line, column, "@", "expected directive or language tag")),
                        _ => Tok::LangTag(word),
                    }
                }
                '^' => {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(self.err(line, column, "^", "expected '^^'"));
                    }
                    Tok::Carets
                }
                '.' if !self.peek2().is_some_and(|c| c.is_ascii_digit()) => {
                    self.bump();
                    Tok::Dot
                }
                ';' => {
                    self.bump();
                    Tok::Semicolon
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '[' => {
                    self.bump();
                    Tok::LBracket
                }
                ']' => {
                    self.bump();
                    Tok::RBracket
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.number(line, column)?,
                c if c.is_alphabetic() || c == ':' || c == '_' => self.name(line, column)?,
                other => return Err(self.err(line, column, other.to_string(), "unexpected character")),
            };
            out.push(Spanned { tok, line, column });
        }
    }

    fn string(&mut self, quote: char, line: usize, column: usize) -> Result<Tok, TurtleError> {
        self.bump();
        let long = self.peek() == Some(quote) && self.peek2() == Some(quote);
        if long {
            self.bump();
            self.bump();
        } else if self.peek() == Some(quote) {
            self.bump();
            return Ok(Tok::Str(String::new()));
        }
        let mut s = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(line, column, format!("{quote}{s}"), "unterminated string"));
            };
            match c {
                '\\' => {
                    let esc = self.bump();
                    match esc {
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        Some('r') => s.push('\r'),
                        Some('b') => s.push('\u{8}'),
                        Some('f') => s.push('\u{c}'),
                        Some('"') => s.push('"'),
                        Some('\'') => s.push('\''),
                        Some('\\') => s.push('\\'),
                        Some('u') => s.push(self.unicode_escape(4, line, column)?),
                        Some('U') => s.push(self.unicode_escape(8, line, column)?),
                        other => {
                            return Err(self.err(line, column, format!("\\{}", other.unwrap_or(' ')), "invalid escape sequence"))
                        }
                    }
                }
                '\n' if !long => return Err(self.err(line, column, format!("{quote}{s}"), "newline in single-line string")),
                c if c == quote => {
                    if !long {
                        return Ok(Tok::Str(s));
                    }
                    if self.peek() == Some(quote) && self.peek2() == Some(quote) {
                        self.bump();
                        self.bump();
                        return Ok(Tok::Str(s));
                    }
                    s.push(c);
                }
                c => s.push(c),
            }
        }
    }

    fn unicode_escape(&mut self, digits: usize, line: usize, column: usize) -> Result<char, TurtleError> {
        let mut hex = String::new();
        for _ in 0..digits {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                _ => return Err(self.err(line, column, format!("\\u{hex}"), "invalid unicode escape")),
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.err(line, column, format!("\\u{hex}"), "invalid unicode code point"))
    }

    fn number(&mut self, line: usize, column: usize) -> Result<Tok, TurtleError> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        let mut seen_dot = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.bump();
            } else if c == '.' && !seen_dot && self.peek2().is_some_and(|d| d.is_ascii_digit()) {
                seen_dot = true;
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            return Err(self.err(line, column, s, "numeric exponents are not supported"));
        }
        if !s.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.err(line, column, s, "expected a number"));
        }
        Ok(if seen_dot { Tok::Decimal(s) } else { Tok::Integer(s) })
    }

    fn name_chars(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            let name_char = |d: char| d.is_alphanumeric() || d == '_' || d == '-';
            if !(name_char(c) || c == '.' && self.peek2().is_some_and(name_char)) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn name(&mut self, line: usize, column: usize) -> Result<Tok, TurtleError> {
        let prefix = if self.peek() == Some(':') { String::new() } else { self.name_chars() };
        if self.peek() == Some(':') {
            self.bump();
            let mut local = String::new();
            loop {
                match self.peek() {
                    Some('%') => {
                        self.bump();
                        local.push('%');
                        for _ in 0..2 {
                            match self.bump() {
                                Some(h) if h.is_ascii_hexdigit() => local.push(h),
                                _ => return Err(self.err(line, column, format!("{prefix}:{local}"), "bad percent escape")),
                            }
                        }
                    }
                    Some(c) if c.is_alphanumeric() || c == '_' || c == '-' || c == ':' => {
                        local.push(c);
                        self.bump();
                    }
                    Some('.') if self.peek2().is_some_and(|d| d.is_alphanumeric() || d == '_' || d == '-' || d == ':') => {
                        local.push('.');
                        self.bump();
                    }
                    _ => break,
                }
            }
            return Ok(Tok::PName { prefix, local });
        }
        Ok(match prefix.as_str() {
            "a" => Tok::A,
            "true" => Tok::True,
            "false" => Tok::False,
            p if p.eq_ignore_ascii_case("prefix") => Tok::SparqlPrefix,
            p if p.eq_ignore_ascii_case("base") => Tok::SparqlBase,
            _ => return Err(self.err(line, column, prefix, "unknown bare word (missing ':'?)")),
        })
    }
}
