use super::{Pos, TurtleError};

#[derive(Clone, Debug, PartialEq)]
pub(super) enum Tok {
    PrefixDirective,
    Iri(String),
    PName { prefix: String, local: String },
    Blank(String),
    A,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Semi,
    Comma,
    Dot,
    Str(String),
    DatatypeMark,
    Integer(i64),
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::PrefixDirective => "`@prefix`".into(),
            Tok::Iri(i) => format!("`<{i}>`"),
            Tok::PName { prefix, local } => format!("`{prefix}:{local}`"),
            Tok::Blank(l) => format!("`_:{l}`"),
            Tok::A => "`a`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Str(_) => "string literal".into(),
            Tok::DatatypeMark => "`^^`".into(),
            Tok::Integer(v) => format!("`{v}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub(super) struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    column: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

impl<'a> Lexer<'a> {
    pub(super) fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.char_indices().peekable(),
            src,
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek_second(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, keep: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !keep(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    /// Local-name characters; a `.` is kept only when another name character follows.
    fn take_local(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if is_name_char(c) || (c == '.' && self.peek_second().is_some_and(is_name_char)) {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    pub(super) fn next_token(&mut self) -> Result<(Tok, Pos), TurtleError> {
        self.skip_trivia();
        let pos = self.pos();
        let err = |msg: String| Err(TurtleError::syntax(pos, msg));
        let Some(c) = self.peek() else {
            return Ok((Tok::Eof, pos));
        };
        let tok = match c {
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
            ';' => {
                self.bump();
                Tok::Semi
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '.' => {
                self.bump();
                Tok::Dot
            }
            '^' => {
                self.bump();
                if self.bump() != Some('^') {
                    return err("expected `^^`".into());
                }
                Tok::DatatypeMark
            }
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_ascii_alphabetic());
                match word.as_str() {
                    "prefix" => Tok::PrefixDirective,
                    "base" => return err("`@base` is not supported; use absolute IRIs".into()),
                    _ => return err(format!("unknown directive `@{word}`")),
                }
            }
            '<' => {
                self.bump();
                let iri = self.take_while(|c| c != '>' && c != '\n' && !c.is_whitespace());
                if self.bump() != Some('>') {
                    return err("unterminated IRI".into());
                }
                if !iri.contains(':') {
                    return err(format!(
                        "relative IRI `<{iri}>` is not supported; no base IRI is available"
                    ));
                }
                Tok::Iri(iri)
            }
            '"' => self.string(pos)?,
            '\'' => return err("single-quoted strings are not supported".into()),
            '_' if self.peek_second() == Some(':') => {
                self.bump();
                self.bump();
                let label = self.take_local();
                if label.is_empty() {
                    return err("empty blank node label".into());
                }
                Tok::Blank(label)
            }
            '+' | '-' | '0'..='9' => {
                let mut text = String::new();
                if c == '+' || c == '-' {
                    text.push(c);
                    self.bump();
                }
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
                let fractional = self.peek() == Some('.')
                    && self.peek_second().is_some_and(|c| c.is_ascii_digit());
                if fractional || matches!(self.peek(), Some('e' | 'E')) {
                    return err("only integer literals are supported".into());
                }
                match text.parse::<i64>() {
                    Ok(v) => Tok::Integer(v),
                    Err(_) => return err(format!("invalid integer `{text}`")),
                }
            }
            c if is_name_start(c) || c == ':' => {
                let prefix = self.take_while(is_name_char);
                if self.peek() == Some(':') {
                    self.bump();
                    let local = self.take_local();
                    Tok::PName { prefix, local }
                } else {
                    match prefix.as_str() {
                        "a" => Tok::A,
                        "true" | "false" => return err("boolean literals are not supported".into()),
                        "PREFIX" | "BASE" => {
                            return err(format!(
                                "SPARQL-style `{prefix}` is not supported; use `@prefix`"
                            ))
                        }
                        _ => return err(format!("unexpected word `{prefix}`")),
                    }
                }
            }
            other => return err(format!("unexpected character `{other}`")),
        };
        Ok((tok, pos))
    }

    fn string(&mut self, pos: Pos) -> Result<Tok, TurtleError> {
        let rest = &self.src[self.chars.peek().map(|&(i, _)| i).unwrap_or(self.src.len())..];
        if rest.starts_with("\"\"\"") {
            return Err(TurtleError::syntax(
                pos,
                "multi-line strings are not supported",
            ));
        }
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => {
                    return Err(TurtleError::syntax(pos, "unterminated string literal"))
                }
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some('r') => s.push('\r'),
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    _ => {
                        return Err(TurtleError::syntax(
                            pos,
                            "unsupported escape in string literal",
                        ))
                    }
                },
                Some(c) => s.push(c),
            }
        }
        if self.peek() == Some('@') {
            return Err(TurtleError::syntax(
                pos,
                "language-tagged literals are not supported",
            ));
        }
        Ok(Tok::Str(s))
    }
}
