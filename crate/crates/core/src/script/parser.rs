#![allow(clippy::result_large_err)]

use super::ast::*;
use super::lexer::{lex, Pos, Tok, Token};
use super::{ParseError, SourceSpan};

/// Words that cannot be used as bare names or references.
pub(crate) const RESERVED: &[&str] = &[
    "process",
    "product",
    "energy",
    "information",
    "operator",
    "resource",
    "fork",
    "join",
    "decision",
    "merge",
    "flow",
    "usage",
    "in",
    "out",
    "internal",
    "refines",
    "decompose",
    "char",
    "unit",
    "unbounded",
    "id",
    "long",
    "version",
    "revision",
    "ref",
    "boundary",
];

const DECL_KEYWORDS: &[&str] = &[
    "product",
    "energy",
    "information",
    "operator",
    "resource",
    "fork",
    "join",
    "decision",
    "merge",
    "flow",
    "usage",
];

pub(crate) struct Parser<'f> {
    toks: Vec<Token>,
    pos: usize,
    file: &'f str,
    pub errors: Vec<ParseError>,
}

type PResult<T> = Result<T, ParseError>;

impl<'f> Parser<'f> {
    pub fn new(text: &str, file: &'f str) -> Self {
        Parser {
            toks: lex(text),
            pos: 0,
            file,
            errors: Vec::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn span(&self, start: Pos, end: Pos) -> SourceSpan {
        SourceSpan {
            file: self.file.to_owned(),
            start_line: start.line,
            start_col: start.col,
            end_line: end.line,
            end_col: end.col,
        }
    }

    fn here(&self) -> SourceSpan {
        let t = &self.toks[self.pos];
        self.span(t.start, t.end)
    }

    fn last_end(&self) -> Pos {
        self.toks[self.pos.saturating_sub(1)].end
    }

    fn error(&self, expected: &[&str], hint: Option<&str>) -> ParseError {
        ParseError {
            span: self.here(),
            expected: expected.iter().map(|s| (*s).to_owned()).collect(),
            found: self.peek().to_string(),
            hint: hint.map(str::to_owned),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error(&[what], None))
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Semi) {
            self.bump();
        }
    }

    pub fn document(&mut self) -> Vec<ProcessDecl> {
        let mut processes = Vec::new();
        self.skip_separators();
        if *self.peek() == Tok::Eof {
            self.errors.push(self.error(&["`process`"], None));
        }
        while *self.peek() != Tok::Eof {
            if self.at_word("process") {
                match self.process() {
                    Ok(p) => processes.push(p),
                    Err(e) => {
                        self.errors.push(e);
                        self.recover_to_process();
                    }
                }
            } else {
                self.errors.push(self.error(&["`process`"], None));
                self.bump();
                self.recover_to_process();
            }
            self.skip_separators();
        }
        processes
    }

    /// Skips to the next `process` keyword outside any braces.
    fn recover_to_process(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Word(w) if w == "process" && depth == 0 => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth = depth.saturating_sub(1),
                _ => {}
            }
            self.bump();
        }
    }

    /// Skips the rest of a statement. Stops before a closing brace of the
    /// enclosing block, after a newline/semicolon.
    fn recover_statement(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::RBrace if depth == 0 => return,
                Tok::RBrace => depth -= 1,
                Tok::LBrace => depth += 1,
                Tok::Newline | Tok::Semi if depth == 0 => {
                    self.bump();
                    return;
                }
                _ => {}
            }
            self.bump();
        }
    }

    fn process(&mut self) -> PResult<ProcessDecl> {
        let kw = self.bump();
        let name = self.name()?;
        let mut attrs = Attrs::default();
        let mut unbounded = false;
        loop {
            if self.at_word("unbounded") {
                self.bump();
                unbounded = true;
            } else if self.at_attr() {
                self.attr(&mut attrs, &["id", "boundary", "long", "version", "revision", "ref"])?;
            } else {
                break;
            }
        }
        if unbounded && attrs.boundary.is_some() {
            return Err(ParseError {
                hint: Some("a process cannot be both `unbounded` and have a `boundary=`".into()),
                ..self.error(&["`{`"], None)
            });
        }
        let header = self.span(kw.start, self.last_end());
        self.expect(Tok::LBrace, "`{`")?;
        let mut decls = Vec::new();
        loop {
            self.skip_separators();
            match self.peek() {
                Tok::RBrace => {
                    self.bump();
                    break;
                }
                Tok::Eof => {
                    self.errors.push(self.error(&["`}`"], Some("unclosed process block")));
                    break;
                }
                _ => {}
            }
            match self.decl() {
                Ok(d) => {
                    decls.push(d);
                    if !matches!(self.peek(), Tok::Newline | Tok::Semi | Tok::RBrace | Tok::Eof) {
                        self.errors.push(self.error(&["end of line", "`;`"], None));
                        self.recover_statement();
                    }
                }
                Err(e) => {
                    self.errors.push(e);
                    self.recover_statement();
                }
            }
        }
        Ok(ProcessDecl {
            name,
            attrs,
            unbounded,
            span: header,
            decls,
        })
    }

    fn at_attr(&self) -> bool {
        matches!(self.peek(), Tok::Word(_)) && *self.peek_at(1) == Tok::Eq
    }

    fn attr(&mut self, attrs: &mut Attrs, allowed: &[&str]) -> PResult<()> {
        let Tok::Word(key) = self.peek().clone() else {
            unreachable!("at_attr checked")
        };
        if !allowed.contains(&key.as_str()) {
            let exp: Vec<String> = allowed.iter().map(|a| format!("`{a}=`")).collect();
            let exp: Vec<&str> = exp.iter().map(String::as_str).collect();
            return Err(self.error(&exp, Some("attribute not allowed here")));
        }
        self.bump();
        self.bump(); // '='
        let value = self.value()?;
        let slot = match key.as_str() {
            "id" => &mut attrs.id,
            "boundary" => &mut attrs.boundary,
            "long" => &mut attrs.long,
            "version" => &mut attrs.version,
            "revision" => &mut attrs.revision,
            "ref" => {
                attrs.refs.push(value.value);
                return Ok(());
            }
            _ => unreachable!(),
        };
        if slot.is_some() {
            return Err(ParseError {
                span: value.span,
                expected: vec!["a single value".into()],
                found: format!("second `{key}=`"),
                hint: Some("attribute given twice".into()),
            });
        }
        *slot = Some(value);
        Ok(())
    }

    /// A bare word or a quoted string, used for names and references.
    fn name(&mut self) -> PResult<Spanned> {
        match self.peek().clone() {
            Tok::Word(w) if !RESERVED.contains(&w.as_str()) => {
                let t = self.bump();
                Ok(Spanned {
                    value: w,
                    span: self.span(t.start, t.end),
                })
            }
            Tok::Str(s) => {
                let t = self.bump();
                Ok(Spanned {
                    value: s,
                    span: self.span(t.start, t.end),
                })
            }
            Tok::Word(w) => Err(self.error(
                &["name", "quoted string"],
                Some(&format!("`{w}` is a keyword; quote it to use it as a name")),
            )),
            _ => Err(self.error(&["name", "quoted string"], None)),
        }
    }

    /// Attribute values may also be bare keywords (`id=in` is unambiguous).
    fn value(&mut self) -> PResult<Spanned> {
        match self.peek().clone() {
            Tok::Word(w) => {
                let t = self.bump();
                Ok(Spanned {
                    value: w,
                    span: self.span(t.start, t.end),
                })
            }
            Tok::Str(s) => {
                let t = self.bump();
                Ok(Spanned {
                    value: s,
                    span: self.span(t.start, t.end),
                })
            }
            _ => Err(self.error(&["value"], None)),
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let start = self.toks[self.pos].start;
        let Tok::Word(kw) = self.peek().clone() else {
            return Err(self.error(&["declaration"], None));
        };
        let kind = match kw.as_str() {
            "product" => DeclKind::State(crate::model::StateKind::Product),
            "energy" => DeclKind::State(crate::model::StateKind::Energy),
            "information" => DeclKind::State(crate::model::StateKind::Information),
            "operator" => DeclKind::Operator,
            "resource" => DeclKind::Resource,
            "fork" => DeclKind::Connector(crate::model::ConnectorKind::Fork),
            "join" => DeclKind::Connector(crate::model::ConnectorKind::Join),
            "decision" => DeclKind::Connector(crate::model::ConnectorKind::Decision),
            "merge" => DeclKind::Connector(crate::model::ConnectorKind::Merge),
            "flow" => return self.edge(EdgeKind::Flow, start),
            "usage" => return self.edge(EdgeKind::Usage, start),
            _ => {
                let hint = if kw == "process" {
                    Some("processes cannot be nested")
                } else {
                    None
                };
                let exp: Vec<String> = DECL_KEYWORDS.iter().map(|k| format!("`{k}`")).collect();
                let exp: Vec<&str> = exp.iter().map(String::as_str).collect();
                return Err(self.error(&exp, hint));
            }
        };
        self.bump();
        let name = self.name()?;
        let mut attrs = Attrs::default();
        while self.at_attr() {
            self.attr(&mut attrs, &["id", "long", "version", "revision", "ref"])?;
        }
        let mut node = NodeDecl {
            kind,
            name,
            attrs,
            direction: None,
            refines: None,
            decompose: None,
            chars: Vec::new(),
            span: self.span(start, start),
        };
        match kind {
            DeclKind::State(_) => {
                node.direction = Some(match self.peek() {
                    Tok::Word(w) if w == "in" => Direction::In,
                    Tok::Word(w) if w == "out" => Direction::Out,
                    Tok::Word(w) if w == "internal" => Direction::Internal,
                    _ => {
                        return Err(self.error(
                            &["`in`", "`out`", "`internal`"],
                            Some("states need a placement keyword"),
                        ))
                    }
                });
                self.bump();
                if self.at_word("refines") {
                    self.bump();
                    node.refines = Some(self.value()?);
                }
            }
            DeclKind::Operator if self.at_word("decompose") => {
                self.bump();
                node.decompose = Some(self.value()?);
            }
            _ => {}
        }
        node.span = self.span(start, self.last_end());
        if *self.peek() == Tok::LBrace && !matches!(kind, DeclKind::Connector(_)) {
            node.chars = self.char_block()?;
        }
        Ok(Decl::Node(node))
    }

    fn edge(&mut self, kind: EdgeKind, start: Pos) -> PResult<Decl> {
        self.bump();
        let from = self.name()?;
        match kind {
            EdgeKind::Flow => self.expect(Tok::Arrow, "`->`")?,
            EdgeKind::Usage => self.expect(Tok::DashDash, "`--`")?,
        };
        let to = self.name()?;
        let mut attrs = Attrs::default();
        while self.at_attr() {
            self.attr(&mut attrs, &["id"])?;
        }
        Ok(Decl::Edge(EdgeDecl {
            kind,
            from,
            to,
            id: attrs.id,
            span: self.span(start, self.last_end()),
        }))
    }

    /// `{ char* }`. Errors inside the block are recorded and recovered
    /// locally so the enclosing declaration survives.
    fn char_block(&mut self) -> PResult<Vec<CharDecl>> {
        self.bump();
        let mut chars = Vec::new();
        loop {
            self.skip_separators();
            match self.peek() {
                Tok::RBrace => {
                    self.bump();
                    return Ok(chars);
                }
                Tok::Eof => return Err(self.error(&["`}`"], Some("unclosed characteristics block"))),
                _ => {}
            }
            match self.characteristic() {
                Ok(c) => {
                    chars.push(c);
                    if !matches!(self.peek(), Tok::Newline | Tok::Semi | Tok::RBrace) {
                        self.errors.push(self.error(&["end of line", "`;`"], None));
                        self.recover_statement();
                    }
                }
                Err(e) => {
                    self.errors.push(e);
                    self.recover_statement();
                }
            }
        }
    }

    fn characteristic(&mut self) -> PResult<CharDecl> {
        let start = self.toks[self.pos].start;
        if !self.at_word("char") {
            return Err(self.error(&["`char`", "`}`"], None));
        }
        self.bump();
        let name = self.name()?;
        let mut attrs = Attrs::default();
        while self.at_attr() {
            self.attr(&mut attrs, &["id", "long", "version", "revision", "ref"])?;
        }
        self.expect(Tok::Eq, "`=`")?;
        let value = self.value()?;
        let mut unit = None;
        if self.at_word("unit") {
            self.bump();
            unit = Some(self.value()?);
        }
        let span = self.span(start, self.last_end());
        let children = if *self.peek() == Tok::LBrace {
            self.char_block()?
        } else {
            Vec::new()
        };
        Ok(CharDecl {
            name,
            attrs,
            value: value.value,
            unit: unit.map(|u| u.value).unwrap_or_default(),
            children,
            span,
        })
    }
}
