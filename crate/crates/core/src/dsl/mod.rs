//! The `.dgm` text format: declarations of alphabets, carriers, generators,
//! maps, nodes, arrows, anchors and bounds. Parsing keeps the syntax tree, so
//! printing a parsed document and reading it back gives the same document;
//! resolution turns it into a [`Diagram`](crate::Diagram) with anchors.
//!
//! The grammar is in `GRAMMAR.ebnf` at the crate root.

mod ast;
mod lex;
mod parse;
mod print;
mod resolve;

use std::fmt;

pub use ast::{ArrowKind, Decl, GenBody, Ident, Located, MapAst, SetExpr};
pub use print::print_spec;
pub use resolve::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagKind {
    Lexical,
    Syntax,
    Resolution,
}

impl fmt::Display for DiagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagKind::Lexical => "lexical",
            DiagKind::Syntax => "syntax",
            DiagKind::Resolution => "resolution",
        })
    }
}

/// A located error. Lines and columns count from 1; columns count characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagKind,
    pub line: u32,
    pub col: u32,
    pub message: String,
    pub expected: Option<String>,
}

impl Diagnostic {
    pub(crate) fn new(kind: DiagKind, (line, col): (u32, u32), message: impl Into<String>) -> Diagnostic {
        Diagnostic { kind, line, col, message: message.into(), expected: None }
    }

    pub(crate) fn expecting(mut self, what: impl Into<String>) -> Diagnostic {
        self.expected = Some(what.into());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {} error: {}", self.line, self.col, self.kind, self.message)?;
        if let Some(e) = &self.expected {
            write!(f, " (expected {e})")?;
        }
        Ok(())
    }
}

/// A parsed and resolved document.
#[derive(Debug, Clone)]
pub struct SpecDocument {
    pub decls: Vec<Located<Decl>>,
    pub model: Model,
}

/// Documents are equal when their declarations are, positions aside.
impl PartialEq for SpecDocument {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

impl SpecDocument {
    pub fn node_count(&self) -> usize {
        self.model.diagram.nodes.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.model.diagram.arrows.len()
    }

    pub fn anchor_count(&self) -> usize {
        self.model.anchors.len()
    }
}

/// Parse and resolve. Syntax stops at the first error; resolution reports
/// every error it finds.
pub fn parse_spec(text: &str) -> Result<SpecDocument, Vec<Diagnostic>> {
    let toks = lex::lex(text).map_err(|d| vec![d])?;
    let decls = parse::Parser::new(toks).document().map_err(|d| vec![d])?;
    let model = resolve::resolve(&decls)?;
    Ok(SpecDocument { decls, model })
}

/// Parse without resolving.
pub fn parse_decls(text: &str) -> Result<Vec<Located<Decl>>, Diagnostic> {
    parse::Parser::new(lex::lex(text)?).document()
}
