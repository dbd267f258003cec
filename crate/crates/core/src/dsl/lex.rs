use super::{DiagKind, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    /// `'name`
    Sym(String),
    Punct(&'static str),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("number {n}"),
            Tok::Sym(s) => format!("symbol '{s}"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

const PUNCT: &[&str] = &["->", ";", ":", ",", "=", "(", ")", "{", "}", "[", "]", "*", "+", ".", "-", "/"];

pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let cs: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let mut out = Vec::new();
    let ident_char = |c: char| c.is_ascii_alphanumeric() || c == '_';
    while i < cs.len() {
        let c = cs[i];
        let at = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < cs.len() && cs[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < cs.len() && ident_char(cs[i]) {
                i += 1;
            }
            Tok::Ident(cs[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = cs[start..i].iter().collect();
            let n = s
                .parse()
                .map_err(|_| Diagnostic::new(DiagKind::Lexical, at, format!("number {s} is too large")))?;
            Tok::Num(n)
        } else if c == '\'' {
            i += 1;
            while i < cs.len() && ident_char(cs[i]) {
                i += 1;
            }
            if i == start + 1 {
                return Err(Diagnostic::new(DiagKind::Lexical, at, "empty symbol").expecting("a symbol name after `'`"));
            }
            Tok::Sym(cs[start + 1..i].iter().collect())
        } else if let Some(p) = PUNCT.iter().find(|p| cs[i..].starts_with(&p.chars().collect::<Vec<_>>())) {
            i += p.len();
            Tok::Punct(p)
        } else {
            return Err(Diagnostic::new(DiagKind::Lexical, at, format!("unexpected character {c:?}")).expecting("a token"));
        };
        col += (i - start) as u32;
        out.push(Token { tok, line: at.0, col: at.1 });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
