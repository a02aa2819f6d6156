//! Minimal s-expression reader and printer used by the inequality database,
//! the verification specs and the branch strategy scripts.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum SExpr {
    Atom(String, Pos),
    Str(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl PartialEq for SExpr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SExpr::Atom(a, _), SExpr::Atom(b, _)) => a == b,
            (SExpr::Str(a, _), SExpr::Str(b, _)) => a == b,
            (SExpr::List(a, _), SExpr::List(b, _)) => a == b,
            _ => false,
        }
    }
}

/// A top-level item: either a form or a `;` comment line.
#[derive(Debug, Clone, PartialEq)]
pub enum TopLevel {
    Comment(String),
    Form(SExpr),
}

impl SExpr {
    pub fn atom(s: impl Into<String>) -> SExpr {
        SExpr::Atom(s.into(), Pos::default())
    }

    pub fn string(s: impl Into<String>) -> SExpr {
        SExpr::Str(s.into(), Pos::default())
    }

    pub fn list(items: Vec<SExpr>) -> SExpr {
        SExpr::List(items, Pos::default())
    }

    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::Str(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(v, _) => Some(v),
            _ => None,
        }
    }

    /// The head atom of a list, if any.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }

    pub fn expect_atom(&self, what: &str) -> Result<&str, ParseError> {
        self.as_atom()
            .ok_or_else(|| ParseError::new(self.pos(), format!("expected {what}")))
    }

    pub fn expect_list(&self, what: &str) -> Result<&[SExpr], ParseError> {
        self.as_list()
            .ok_or_else(|| ParseError::new(self.pos(), format!("expected {what}")))
    }

    pub fn expect_str(&self, what: &str) -> Result<&str, ParseError> {
        match self {
            SExpr::Str(s, _) => Ok(s),
            _ => Err(ParseError::new(self.pos(), format!("expected {what}"))),
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(s, _) => f.write_str(s),
            SExpr::Str(s, _) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
            SExpr::List(items, _) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Reader<'a> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn skip_ws(&mut self, comments: Option<&mut Vec<TopLevel>>) {
        let mut sink = comments;
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(';') => {
                    let mut text = String::new();
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        text.push(c);
                        self.bump();
                    }
                    if let Some(out) = sink.as_deref_mut() {
                        out.push(TopLevel::Comment(text));
                    }
                }
                _ => return,
            }
        }
    }

    fn read(&mut self) -> Result<SExpr, ParseError> {
        self.skip_ws(None);
        let start = self.pos;
        match self.peek() {
            None => Err(ParseError::new(start, "unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws(None);
                    match self.peek() {
                        None => return Err(ParseError::new(start, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items, start));
                        }
                        _ => items.push(self.read()?),
                    }
                }
            }
            Some(')') => Err(ParseError::new(start, "unexpected `)`")),
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(ParseError::new(start, "unterminated string")),
                        Some('"') => return Ok(SExpr::Str(s, start)),
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(ParseError::new(self.pos, "bad escape")),
                        },
                        Some(c) => s.push(c),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(SExpr::Atom(s, start))
            }
        }
    }
}

/// Reads every top-level form, keeping comment lines in order.
pub fn parse_document(text: &str) -> Result<Vec<TopLevel>, ParseError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();
    loop {
        r.skip_ws(Some(&mut out));
        if r.peek().is_none() {
            return Ok(out);
        }
        out.push(TopLevel::Form(r.read()?));
    }
}

/// Reads every top-level form, dropping comments.
pub fn parse_all(text: &str) -> Result<Vec<SExpr>, ParseError> {
    Ok(parse_document(text)?
        .into_iter()
        .filter_map(|t| match t {
            TopLevel::Form(f) => Some(f),
            TopLevel::Comment(_) => None,
        })
        .collect())
}

/// One item per line.
pub fn emit_document(items: &[TopLevel]) -> String {
    let mut s = String::new();
    for it in items {
        match it {
            TopLevel::Comment(c) => s.push_str(c),
            TopLevel::Form(f) => s.push_str(&f.to_string()),
        }
        s.push('\n');
    }
    s
}

/// Parses a decimal or integer atom.
pub fn number(e: &SExpr) -> Result<f64, ParseError> {
    let a = e.expect_atom("number")?;
    a.parse::<f64>()
        .map_err(|_| ParseError::new(e.pos(), format!("bad number `{a}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_canonical() {
        let text = "; header\n(row 1 (ctx face 3 3) (cite \"a \\\"b\\\"\"))\n(const pt 0.05)\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(emit_document(&doc), text);
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_all("(a b\n  (c d)").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 1 });
        let e = parse_all("(a)\n  )").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn head_and_number() {
        let f = &parse_all("(mul 1.4 pt)").unwrap()[0];
        assert_eq!(f.head(), Some("mul"));
        assert_eq!(number(&f.as_list().unwrap()[1]).unwrap(), 1.4);
    }
}
