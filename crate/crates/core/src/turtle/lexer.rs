//! Tokenizer shared by the Turtle and query parsers.

use super::diagnostic::{ParseDiagnostic, Position};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    /// Content of `<...>` with escapes decoded.
    IriRef(String),
    /// `prefix:local`; `local` is empty for a bare namespace token such as `crm:`.
    PrefixedName {
        prefix: String,
        local: String,
    },
    BlankLabel(String),
    Var(String),
    String(String),
    /// `@word`: a language tag or a directive keyword.
    AtWord(String),
    Integer(String),
    Decimal(String),
    Double(String),
    /// A bare word such as `a`, `true` or `SELECT`.
    Word(String),
    Dot,
    Semicolon,
    Comma,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    DoubleCaret,
    Op(&'static str),
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::IriRef(iri) => format!("IRI <{iri}>"),
            TokenKind::PrefixedName { prefix, local } => format!("prefixed name `{prefix}:{local}`"),
            TokenKind::BlankLabel(l) => format!("blank node `_:{l}`"),
            TokenKind::Var(v) => format!("variable `?{v}`"),
            TokenKind::String(_) => "string literal".to_owned(),
            TokenKind::AtWord(w) => format!("`@{w}`"),
            TokenKind::Integer(n) | TokenKind::Decimal(n) | TokenKind::Double(n) => format!("number `{n}`"),
            TokenKind::Word(w) => format!("bare word `{w}`"),
            TokenKind::Dot => "`.`".to_owned(),
            TokenKind::Semicolon => "`;`".to_owned(),
            TokenKind::Comma => "`,`".to_owned(),
            TokenKind::LBrace => "`{`".to_owned(),
            TokenKind::RBrace => "`}`".to_owned(),
            TokenKind::LParen => "`(`".to_owned(),
            TokenKind::RParen => "`)`".to_owned(),
            TokenKind::LBracket => "`[`".to_owned(),
            TokenKind::RBracket => "`]`".to_owned(),
            TokenKind::DoubleCaret => "`^^`".to_owned(),
            TokenKind::Op(op) => format!("`{op}`"),
            TokenKind::Eof => "end of input".to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub pos: Position,
}

/// Which extra token classes the caller accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Dialect {
    Turtle,
    Query,
}

pub(crate) struct Lexer<'a> {
    chars: Vec<char>,
    index: usize,
    line: usize,
    column: usize,
    last: Position,
    dialect: Dialect,
    _src: &'a str,
}

fn is_pn_chars_base(c: char) -> bool {
    c.is_alphabetic() && c != '_'
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c == '-'
        || c.is_ascii_digit()
        || c == '\u{B7}'
        || ('\u{300}'..='\u{36F}').contains(&c)
        || ('\u{203F}'..='\u{2040}').contains(&c)
}

const LOCAL_ESCAPES: &str = "_~.-!$&'()*+,;=/?#@%";

/// Whether `local` can be written as the local part of a prefixed name
/// without escapes.
pub(crate) fn is_plain_local_name(local: &str) -> bool {
    let mut chars = local.chars().peekable();
    let Some(first) = chars.next() else {
        return true;
    };
    if !(is_pn_chars_u(first) || first == ':' || first.is_ascii_digit()) {
        return false;
    }
    let mut last = first;
    for c in chars {
        if !(is_pn_chars(c) || c == '.' || c == ':') {
            return false;
        }
        last = c;
    }
    last != '.'
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(src: &'a str, dialect: Dialect) -> Self {
        Lexer {
            chars: src.chars().collect(),
            index: 0,
            line: 1,
            column: 1,
            last: Position { line: 1, column: 1 },
            dialect,
            _src: src,
        }
    }

    #[cfg(test)]
    pub(crate) fn tokenize(mut self) -> Result<Vec<Token>, ParseDiagnostic> {
        let mut out = Vec::new();
        loop {
            let token = self.next_token()?;
            let eof = token.kind == TokenKind::Eof;
            out.push(token);
            if eof {
                return Ok(out);
            }
        }
    }

    fn pos(&self) -> Position {
        Position { line: self.line, column: self.column }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.index).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.index + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.index).copied()?;
        self.last = self.pos();
        self.index += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    /// Position used for errors at end of input: the last real character.
    fn eof_pos(&self) -> Position {
        if self.chars.is_empty() {
            Position { line: 1, column: 1 }
        } else {
            self.last
        }
    }

    fn error_here(&self, message: impl Into<String>) -> ParseDiagnostic {
        let pos = if self.index < self.chars.len() { self.pos() } else { self.eof_pos() };
        ParseDiagnostic::error(pos, message)
    }

    fn skip_trivia(&mut self) {
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

    pub(crate) fn next_token(&mut self) -> Result<Token, ParseDiagnostic> {
        self.skip_trivia();
        let start = self.pos();
        let Some(c) = self.peek() else {
            return Ok(Token { kind: TokenKind::Eof, pos: self.eof_pos() });
        };
        let single = |kind| Ok(Some(kind));
        let kind = match c {
            '.' if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => None,
            '.' => single(TokenKind::Dot)?,
            ';' => single(TokenKind::Semicolon)?,
            ',' => single(TokenKind::Comma)?,
            '{' => single(TokenKind::LBrace)?,
            '}' => single(TokenKind::RBrace)?,
            '(' => single(TokenKind::LParen)?,
            ')' => single(TokenKind::RParen)?,
            '[' => single(TokenKind::LBracket)?,
            ']' => single(TokenKind::RBracket)?,
            _ => None,
        };
        if let Some(kind) = kind {
            self.bump();
            return Ok(Token { kind, pos: start });
        }
        let kind = match c {
            '<' => self.lex_angle()?,
            '"' | '\'' => self.lex_string(c)?,
            '@' => self.lex_at()?,
            '^' => {
                self.bump();
                if self.peek() == Some('^') {
                    self.bump();
                    TokenKind::DoubleCaret
                } else {
                    return Err(ParseDiagnostic::error(start, "expected `^^`"));
                }
            }
            '?' | '$' if self.dialect == Dialect::Query => {
                self.bump();
                let name = self.take_while(|c| is_pn_chars_u(c) || c.is_ascii_digit());
                if name.is_empty() {
                    return Err(ParseDiagnostic::error(start, "expected a variable name"));
                }
                TokenKind::Var(name)
            }
            '0'..='9' | '.' => self.lex_number()?,
            '+' | '-'
                if self.peek_at(1).is_some_and(|d| {
                    d.is_ascii_digit() || (d == '.' && self.peek_at(2).is_some_and(|e| e.is_ascii_digit()))
                }) =>
            {
                self.lex_number()?
            }
            '_' if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.lex_blank_label();
                if label.is_empty() {
                    return Err(ParseDiagnostic::error(start, "expected a blank node label after `_:`"));
                }
                TokenKind::BlankLabel(label)
            }
            c if is_pn_chars_base(c) || c == ':' => self.lex_name()?,
            _ if self.dialect == Dialect::Query => self.lex_operator(start)?,
            other => return Err(ParseDiagnostic::error(start, format!("unexpected character `{other}`"))),
        };
        Ok(Token { kind, pos: start })
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn lex_operator(&mut self, start: Position) -> Result<TokenKind, ParseDiagnostic> {
        let c = self.bump().expect("caller peeked");
        let next = self.peek();
        let op = match (c, next) {
            ('=', _) => "=",
            ('!', Some('=')) => "!=",
            ('!', _) => "!",
            ('>', Some('=')) => ">=",
            ('>', _) => ">",
            ('&', Some('&')) => "&&",
            ('|', Some('|')) => "||",
            ('*', _) => "*",
            (other, _) => return Err(ParseDiagnostic::error(start, format!("unexpected character `{other}`"))),
        };
        if op.len() == 2 {
            self.bump();
        }
        Ok(TokenKind::Op(op))
    }

    fn lex_angle(&mut self) -> Result<TokenKind, ParseDiagnostic> {
        let start = self.pos();
        // An IRI reference never contains whitespace, so in a query `<` followed
        // by anything else is a comparison operator.
        let mut end = self.index + 1;
        let mut is_iri = false;
        while let Some(&c) = self.chars.get(end) {
            if c == '>' {
                is_iri = true;
                break;
            }
            if c.is_whitespace() || "<\"{}|^`".contains(c) {
                break;
            }
            end += 1;
        }
        if !is_iri {
            if self.dialect == Dialect::Query {
                self.bump();
                if self.peek() == Some('=') {
                    self.bump();
                    return Ok(TokenKind::Op("<="));
                }
                return Ok(TokenKind::Op("<"));
            }
            return Err(ParseDiagnostic::error(start, "unterminated IRI reference"));
        }
        self.bump();
        let mut iri = String::new();
        loop {
            let pos = self.pos();
            match self.bump() {
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => iri.push(self.lex_hex(4, pos)?),
                    Some('U') => iri.push(self.lex_hex(8, pos)?),
                    _ => return Err(ParseDiagnostic::error(pos, "invalid escape in IRI")),
                },
                Some(c) => iri.push(c),
                None => return Err(self.error_here("unterminated IRI reference")),
            }
        }
        Ok(TokenKind::IriRef(iri))
    }

    fn lex_hex(&mut self, digits: usize, pos: Position) -> Result<char, ParseDiagnostic> {
        let mut value = 0u32;
        for _ in 0..digits {
            let d = self
                .peek()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| ParseDiagnostic::error(pos, "invalid unicode escape"))?;
            self.bump();
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| ParseDiagnostic::error(pos, "escape is not a unicode scalar value"))
    }

    fn lex_string(&mut self, quote: char) -> Result<TokenKind, ParseDiagnostic> {
        let start = self.pos();
        if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
            return Err(ParseDiagnostic::error(start, "long (triple-quoted) strings are not supported"));
        }
        self.bump();
        let mut out = String::new();
        loop {
            let pos = self.pos();
            match self.bump() {
                Some(c) if c == quote => return Ok(TokenKind::String(out)),
                Some('\n') | Some('\r') => {
                    return Err(ParseDiagnostic::error(pos, "line break inside a string literal"))
                }
                Some('\\') => {
                    let escaped = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.lex_hex(4, pos)?,
                        Some('U') => self.lex_hex(8, pos)?,
                        _ => return Err(ParseDiagnostic::error(pos, "invalid string escape")),
                    };
                    out.push(escaped);
                }
                Some(c) => out.push(c),
                None => return Err(ParseDiagnostic::error(start, "unterminated string literal")),
            }
        }
    }

    fn lex_at(&mut self) -> Result<TokenKind, ParseDiagnostic> {
        let start = self.pos();
        self.bump();
        let mut word = self.take_while(|c| c.is_ascii_alphabetic());
        if word.is_empty() {
            return Err(ParseDiagnostic::error(start, "expected a language tag or directive after `@`"));
        }
        while self.peek() == Some('-') && self.peek_at(1).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.bump();
            word.push('-');
            word.push_str(&self.take_while(|c| c.is_ascii_alphanumeric()));
        }
        Ok(TokenKind::AtWord(word))
    }

    fn lex_number(&mut self) -> Result<TokenKind, ParseDiagnostic> {
        let start = self.pos();
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let mut decimal = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            text.push('.');
            text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            decimal = true;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            text.push(self.bump().expect("peeked"));
            if let Some(sign @ ('+' | '-')) = self.peek() {
                text.push(sign);
                self.bump();
            }
            let exp = self.take_while(|c| c.is_ascii_digit());
            if exp.is_empty() {
                return Err(ParseDiagnostic::error(start, "malformed exponent"));
            }
            text.push_str(&exp);
            return Ok(TokenKind::Double(text));
        }
        Ok(if decimal { TokenKind::Decimal(text) } else { TokenKind::Integer(text) })
    }

    fn lex_blank_label(&mut self) -> String {
        let mut label = String::new();
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {
                label.push(c);
                self.bump();
            }
            _ => return label,
        }
        self.take_name_tail(&mut label, |c| is_pn_chars(c) || c == '.');
        label
    }

    /// Consumes `(allowed)*` but leaves a trailing run of dots unconsumed.
    fn take_name_tail(&mut self, out: &mut String, allowed: impl Fn(char) -> bool) {
        let mut end = self.index;
        while self.chars.get(end).is_some_and(|&c| allowed(c)) {
            end += 1;
        }
        while end > self.index && self.chars[end - 1] == '.' {
            end -= 1;
        }
        while self.index < end {
            out.push(self.bump().expect("within bounds"));
        }
    }

    fn lex_name(&mut self) -> Result<TokenKind, ParseDiagnostic> {
        let mut prefix = String::new();
        if self.peek() != Some(':') {
            prefix.push(self.bump().expect("caller peeked"));
            self.take_name_tail(&mut prefix, |c| is_pn_chars(c) || c == '.');
        }
        if self.peek() != Some(':') {
            return Ok(TokenKind::Word(prefix));
        }
        self.bump();
        let local = self.lex_local()?;
        Ok(TokenKind::PrefixedName { prefix, local })
    }

    fn lex_local(&mut self) -> Result<String, ParseDiagnostic> {
        let mut local = String::new();
        let mut first = true;
        while let Some(c) = self.peek() {
            let ok = if first {
                is_pn_chars_u(c) || c == ':' || c.is_ascii_digit() || c == '%' || c == '\\'
            } else {
                is_pn_chars(c) || c == '.' || c == ':' || c == '%' || c == '\\'
            };
            if !ok {
                break;
            }
            if c == '.' {
                // A dot is part of the name only if more name characters follow.
                let mut look = self.index;
                while self.chars.get(look) == Some(&'.') {
                    look += 1;
                }
                let continues =
                    self.chars.get(look).is_some_and(|&n| is_pn_chars(n) || n == ':' || n == '%' || n == '\\');
                if !continues {
                    break;
                }
            }
            match c {
                '%' => {
                    let h1 = self.peek_at(1).filter(char::is_ascii_hexdigit);
                    let h2 = self.peek_at(2).filter(char::is_ascii_hexdigit);
                    match (h1, h2) {
                        (Some(a), Some(b)) => {
                            self.bump();
                            self.bump();
                            self.bump();
                            local.push('%');
                            local.push(a);
                            local.push(b);
                        }
                        _ => return Err(ParseDiagnostic::error(self.pos(), "malformed percent escape in local name")),
                    }
                }
                '\\' => match self.peek_at(1) {
                    Some(e) if LOCAL_ESCAPES.contains(e) => {
                        self.bump();
                        self.bump();
                        local.push(e);
                    }
                    _ => return Err(ParseDiagnostic::error(self.pos(), "invalid escape in local name")),
                },
                c => {
                    self.bump();
                    local.push(c);
                }
            }
            first = false;
        }
        Ok(local)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str, dialect: Dialect) -> Vec<TokenKind> {
        Lexer::new(src, dialect).tokenize().unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn local_names_keep_inner_dots_and_drop_terminator() {
        let ks = kinds(":39794-authorship-attribution-1.", Dialect::Turtle);
        assert_eq!(
            ks,
            vec![
                TokenKind::PrefixedName { prefix: String::new(), local: "39794-authorship-attribution-1".into() },
                TokenKind::Dot,
                TokenKind::Eof
            ]
        );
        let ks = kinds("ex:a.b .", Dialect::Turtle);
        assert_eq!(ks[0], TokenKind::PrefixedName { prefix: "ex".into(), local: "a.b".into() });
    }

    #[test]
    fn numbers_and_statement_dot() {
        let ks = kinds("1. 2.5 .5 -3 1e3", Dialect::Turtle);
        assert_eq!(
            ks,
            vec![
                TokenKind::Integer("1".into()),
                TokenKind::Dot,
                TokenKind::Decimal("2.5".into()),
                TokenKind::Decimal(".5".into()),
                TokenKind::Integer("-3".into()),
                TokenKind::Double("1e3".into()),
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn query_operators_versus_iris() {
        let ks = kinds("?y<=1985 && ?x < <http://e/x>", Dialect::Query);
        assert_eq!(
            ks,
            vec![
                TokenKind::Var("y".into()),
                TokenKind::Op("<="),
                TokenKind::Integer("1985".into()),
                TokenKind::Op("&&"),
                TokenKind::Var("x".into()),
                TokenKind::Op("<"),
                TokenKind::IriRef("http://e/x".into()),
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn strings_with_hash_and_escapes() {
        let ks = kinds(r#""Receipt #KG1950" 'it\'s' "É""#, Dialect::Turtle);
        assert_eq!(ks[0], TokenKind::String("Receipt #KG1950".into()));
        assert_eq!(ks[1], TokenKind::String("it's".into()));
        assert_eq!(ks[2], TokenKind::String("É".into()));
    }

    #[test]
    fn eof_error_points_at_last_character() {
        let err = Lexer::new("\"abc", Dialect::Turtle).tokenize().unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        let err = Lexer::new("x\n<http://a", Dialect::Turtle).tokenize().unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
    }

    #[test]
    fn plain_local_names() {
        assert!(is_plain_local_name("E22_Human-Made_Object"));
        assert!(is_plain_local_name("39794-creation-1"));
        assert!(!is_plain_local_name("a b"));
        assert!(!is_plain_local_name("trailing."));
        assert!(!is_plain_local_name("-lead"));
    }
}
