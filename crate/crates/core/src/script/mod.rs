//! Plain-text authoring format for FPD models.
//!
//! ```text
//! process "Collar Screwing" {
//!     product Collar in
//!     operator "Automated Collar Screwing"
//!     product "Screwed Collar" out
//!     flow Collar -> "Automated Collar Screwing"
//!     flow "Automated Collar Screwing" -> "Screwed Collar"
//! }
//! ```
//!
//! Statements end at a newline or `;`. Names are bare words or quoted
//! strings. Element ids are generated when omitted. References resolve by
//! id first, then by unique short name within the process.

mod ast;
mod lexer;
mod parser;
mod printer;
mod resolve;

use std::collections::HashMap;
use std::fmt;

use crate::model::Model;

pub use printer::print;

/// A 1-based, inclusive source range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: String,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    /// Never empty.
    pub expected: Vec<String>,
    pub found: String,
    pub hint: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected ", self.span)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)?;
        if let Some(hint) = &self.hint {
            write!(f, " ({hint})")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Where each element of a parsed model was declared.
#[derive(Debug, Clone, Default)]
pub struct SourceMap {
    spans: HashMap<String, SourceSpan>,
}

impl SourceMap {
    pub fn get(&self, id: &str) -> Option<&SourceSpan> {
        self.spans.get(id)
    }

    fn insert(&mut self, id: &str, span: &SourceSpan) {
        self.spans.entry(id.to_owned()).or_insert_with(|| span.clone());
    }
}

/// Parses a document into a built model.
pub fn parse(text: &str) -> Result<Model, Vec<ParseError>> {
    parse_with_spans(text, "<input>").map(|(model, _)| model)
}

/// Like [`parse`], also returning declaration spans labelled with `file`.
pub fn parse_with_spans(text: &str, file: &str) -> Result<(Model, SourceMap), Vec<ParseError>> {
    let mut parser = parser::Parser::new(text, file);
    let decls = parser.document();
    if !parser.errors.is_empty() {
        return Err(parser.errors);
    }
    resolve::resolve(decls)
}
