use super::SparqlError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Var { name: String, dollar: bool },
    Iri(String),
    PName { prefix: String, local: String },
    Str(String),
    Integer(String),
    Decimal(String),
    LangTag(String),
    /// Bare words: keywords, builtin names, `a`, `true`, `false`.
    Word(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Dot,
    Semicolon,
    Comma,
    Star,
    Slash,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    AndAnd,
    OrOr,
    Bang,
    Carets,
    Caret,
    Pipe,
    Plus,
    Minus,
    Question,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Var { name, dollar } => format!("{}{name}", if *dollar { '$' } else { '?' }),
            Tok::Iri(i) => format!("<{i}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::Integer(s) | Tok::Decimal(s) => s.clone(),
            Tok::LangTag(l) => format!("@{l}"),
            Tok::Word(w) => w.clone(),
            Tok::Eof => "end of query".into(),
            other => match other {
                Tok::LBrace => "{",
                Tok::RBrace => "}",
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBracket => "[",
                Tok::RBracket => "]",
                Tok::Dot => ".",
                Tok::Semicolon => ";",
                Tok::Comma => ",",
                Tok::Star => "*",
                Tok::Slash => "/",
                Tok::Eq => "=",
                Tok::Ne => "!=",
                Tok::Lt => "<",
                Tok::Gt => ">",
                Tok::Le => "<=",
                Tok::Ge => ">=",
                Tok::AndAnd => "&&",
                Tok::OrOr => "||",
                Tok::Bang => "!",
                Tok::Carets => "^^",
                Tok::Caret => "^",
                Tok::Pipe => "|",
                Tok::Plus => "+",
                Tok::Minus => "-",
                Tok::Question => "?",
                _ => unreachable!(),
            }
            .to_owned(),
        }
    }

    pub(crate) fn is_word(&self, w: &str) -> bool {
        matches!(self, Tok::Word(x) if x.eq_ignore_ascii_case(w))
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, SparqlError> {
    let chars: Vec<char> = text.chars().collect();
    let mut lx = Lexer { chars, pos: 0, line: 1, column: 1 };
    let mut out = Vec::new();
    loop {
        lx.skip_ws();
        let (line, column) = (lx.line, lx.column);
        let Some(c) = lx.peek(0) else {
            out.push(Spanned { tok: Tok::Eof, line, column });
            return Ok(out);
        };
        let err = |message: &str| SparqlError::Syntax { line, column, message: message.to_owned() };
        let tok = match c {
            '?' | '$' => {
                lx.bump();
                let name = lx.take_while(|c| c.is_alphanumeric() || c == '_');
                if name.is_empty() {
                    if c == '$' {
                        return Err(err("expected a variable name after '$'"));
                    }
                    Tok::Question
                } else {
                    Tok::Var { name, dollar: c == '$' }
                }
            }
            '<' => {
                if let Some(iri) = lx.try_iri() {
                    Tok::Iri(iri)
                } else {
                    lx.bump();
                    if lx.eat('=') {
                        Tok::Le
                    } else {
                        Tok::Lt
                    }
                }
            }
            '>' => {
                lx.bump();
                if lx.eat('=') {
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            '"' | '\'' => Tok::Str(lx.string(c).map_err(|m| err(&m))?),
            '@' => {
                lx.bump();
                let tag = lx.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                if tag.is_empty() {
                    return Err(err("expected a language tag after '@'"));
                }
                Tok::LangTag(tag)
            }
            '{' => lx.single(Tok::LBrace),
            '}' => lx.single(Tok::RBrace),
            '(' => lx.single(Tok::LParen),
            ')' => lx.single(Tok::RParen),
            '[' => lx.single(Tok::LBracket),
            ']' => lx.single(Tok::RBracket),
            ';' => lx.single(Tok::Semicolon),
            ',' => lx.single(Tok::Comma),
            '*' => lx.single(Tok::Star),
            '/' => lx.single(Tok::Slash),
            '=' => lx.single(Tok::Eq),
            '|' => {
                lx.bump();
                if lx.eat('|') {
                    Tok::OrOr
                } else {
                    Tok::Pipe
                }
            }
            '&' => {
                lx.bump();
                if !lx.eat('&') {
                    return Err(err("expected '&&'"));
                }
                Tok::AndAnd
            }
            '!' => {
                lx.bump();
                if lx.eat('=') {
                    Tok::Ne
                } else {
                    Tok::Bang
                }
            }
            '^' => {
                lx.bump();
                if lx.eat('^') {
                    Tok::Carets
                } else {
                    Tok::Caret
                }
            }
            '.' if !lx.peek(1).is_some_and(|d| d.is_ascii_digit()) => lx.single(Tok::Dot),
            '+' | '-' if !lx.peek(1).is_some_and(|d| d.is_ascii_digit()) => {
                lx.single(if c == '+' { Tok::Plus } else { Tok::Minus })
            }
            c if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => lx.number().map_err(|m| err(&m))?,
            c if c.is_alphabetic() || c == '_' || c == ':' => lx.name().map_err(|m| err(&m))?,
            other => return Err(err(&format!("unexpected character '{other}'"))),
        };
        out.push(Spanned { tok, line, column });
    }
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = *self.chars.get(self.pos)?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek(0) == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn single(&mut self, tok: Tok) -> Tok {
        self.bump();
        tok
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek(0) {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek(0) {
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

    /// An IRI reference when `<` is followed by IRI characters up to a `>`.
    fn try_iri(&mut self) -> Option<String> {
        let mut i = self.pos + 1;
        let mut iri = String::new();
        while let Some(&c) = self.chars.get(i) {
            match c {
                '>' => {
                    if iri.is_empty() {
                        return None;
                    }
                    for _ in self.pos..=i {
                        self.bump();
                    }
                    return Some(iri);
                }
                c if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') => return None,
                c => iri.push(c),
            }
            i += 1;
        }
        None
    }

    fn string(&mut self, quote: char) -> Result<String, String> {
        self.bump();
        let long = self.peek(0) == Some(quote) && self.peek(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut s = String::new();
        loop {
            let c = self.bump().ok_or("unterminated string")?;
            match c {
                '\\' => match self.bump() {
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some('r') => s.push('\r'),
                    Some('"') => s.push('"'),
                    Some('\'') => s.push('\''),
                    Some('\\') => s.push('\\'),
                    other => return Err(format!("invalid escape '\\{}'", other.unwrap_or(' '))),
                },
                '\n' if !long => return Err("newline in string".into()),
                c if c == quote => {
                    if !long {
                        return Ok(s);
                    }
                    if self.peek(0) == Some(quote) && self.peek(1) == Some(quote) {
                        self.bump();
                        self.bump();
                        return Ok(s);
                    }
                    s.push(c);
                }
                c => s.push(c),
            }
        }
    }

    fn number(&mut self) -> Result<Tok, String> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek(0) {
            s.push(c);
            self.bump();
        }
        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let mut decimal = false;
        if self.peek(0) == Some('.') && self.peek(1).is_some_and(|d| d.is_ascii_digit()) {
            decimal = true;
            s.push('.');
            self.bump();
            s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        }
        if matches!(self.peek(0), Some('e' | 'E')) {
            return Err("numeric exponents are not supported".into());
        }
        Ok(if decimal { Tok::Decimal(s) } else { Tok::Integer(s) })
    }

    fn name(&mut self) -> Result<Tok, String> {
        let prefix = self.take_while(|c| c.is_alphanumeric() || c == '_' || c == '-');
        if !self.eat(':') {
            return Ok(Tok::Word(prefix));
        }
        let mut local = String::new();
        loop {
            match self.peek(0) {
                Some(c) if c.is_alphanumeric() || matches!(c, '_' | '-' | ':') => {
                    local.push(c);
                    self.bump();
                }
                Some('.') if self.peek(1).is_some_and(|d| d.is_alphanumeric() || matches!(d, '_' | '-' | ':')) => {
                    local.push('.');
                    self.bump();
                }
                _ => break,
            }
        }
        Ok(Tok::PName { prefix, local })
    }
}
