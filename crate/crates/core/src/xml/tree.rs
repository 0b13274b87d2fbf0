//! Minimal element tree used both for reading interchange documents and
//! for writing them in canonical form.

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::XmlError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Node {
    Element(Element),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Element {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Node>,
    pub line: usize,
    pub col: usize,
}

impl Element {
    pub fn new(name: &str) -> Self {
        Element {
            name: name.to_owned(),
            attrs: Vec::new(),
            children: Vec::new(),
            line: 0,
            col: 0,
        }
    }

    pub fn attr(mut self, key: &str, value: &str) -> Self {
        self.attrs.push((key.to_owned(), value.to_owned()));
        self
    }

    pub fn child(mut self, child: Element) -> Self {
        self.children.push(Node::Element(child));
        self
    }

    pub fn push(&mut self, child: Element) {
        self.children.push(Node::Element(child));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|n| match n {
            Node::Element(e) => Some(e),
            Node::Text(_) => None,
        })
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.children.iter().filter_map(|n| match n {
            Node::Text(t) => Some(t.as_str()),
            Node::Element(_) => None,
        })
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..text.floor_char_boundary_compat(offset)];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

trait FloorBoundary {
    fn floor_char_boundary_compat(&self, i: usize) -> usize;
}

impl FloorBoundary for str {
    fn floor_char_boundary_compat(&self, mut i: usize) -> usize {
        while i > 0 && !self.is_char_boundary(i) {
            i -= 1;
        }
        i
    }
}

fn markup(text: &str, offset: usize, message: impl Into<String>) -> XmlError {
    let (line, col) = line_col(text, offset);
    XmlError::Markup {
        line,
        col,
        message: message.into(),
    }
}

/// Parses markup into an element tree. Comments, processing instructions
/// and the XML declaration are dropped; whitespace-only text is dropped.
pub(crate) fn parse(text: &str) -> Result<Element, XmlError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().check_end_names = true;
    let mut stack: Vec<Element> = Vec::new();
    let mut root: Option<Element> = None;

    loop {
        let before = reader.buffer_position() as usize;
        let event = reader
            .read_event()
            .map_err(|e| markup(text, reader.error_position() as usize, e.to_string()))?;
        match event {
            Event::Start(start) => {
                if root.is_some() {
                    return Err(markup(text, before, "content after the root element"));
                }
                stack.push(open(text, &start, before)?);
            }
            Event::Empty(start) => {
                if root.is_some() {
                    return Err(markup(text, before, "content after the root element"));
                }
                let el = open(text, &start, before)?;
                match stack.last_mut() {
                    Some(parent) => parent.push(el),
                    None => root = Some(el),
                }
            }
            Event::End(_) => {
                let el = stack.pop().ok_or_else(|| markup(text, before, "unexpected end tag"))?;
                match stack.last_mut() {
                    Some(parent) => parent.push(el),
                    None => root = Some(el),
                }
            }
            Event::Text(t) => {
                let s = t.unescape().map_err(|e| markup(text, before, e.to_string()))?;
                push_text(&mut stack, &s, text, before)?;
            }
            Event::CData(c) => {
                let s =
                    String::from_utf8(c.into_inner().into_owned()).map_err(|e| markup(text, before, e.to_string()))?;
                push_text(&mut stack, &s, text, before)?;
            }
            Event::Comment(_) | Event::Decl(_) | Event::PI(_) | Event::DocType(_) => {}
            Event::Eof => break,
        }
    }
    if let Some(open) = stack.last() {
        return Err(markup(text, text.len(), format!("unclosed element <{}>", open.name)));
    }
    root.ok_or_else(|| markup(text, text.len(), "document has no root element"))
}

fn push_text(stack: &mut [Element], s: &str, text: &str, at: usize) -> Result<(), XmlError> {
    if s.trim().is_empty() {
        return Ok(());
    }
    match stack.last_mut() {
        Some(parent) => {
            parent.children.push(Node::Text(s.trim().to_owned()));
            Ok(())
        }
        None => Err(markup(text, at, "text outside the root element")),
    }
}

fn open(text: &str, start: &BytesStart, at: usize) -> Result<Element, XmlError> {
    let name = String::from_utf8(start.name().as_ref().to_vec()).map_err(|e| markup(text, at, e.to_string()))?;
    let (line, col) = line_col(text, at);
    let mut el = Element {
        name,
        attrs: Vec::new(),
        children: Vec::new(),
        line,
        col,
    };
    for attr in start.attributes().with_checks(true) {
        let attr = attr.map_err(|e| markup(text, at, e.to_string()))?;
        let key = String::from_utf8(attr.key.as_ref().to_vec()).map_err(|e| markup(text, at, e.to_string()))?;
        let value = attr.unescape_value().map_err(|e| markup(text, at, e.to_string()))?;
        el.attrs.push((key, value.into_owned()));
    }
    Ok(el)
}

/// Attribute order used when writing. Unlisted attributes follow in their
/// original order.
fn attribute_order(element: &str) -> &'static [&'static str] {
    match element {
        "process" => &["id", "longName", "versionNumber", "revisionNumber"],
        "systemLimit" => &["id", "shortName"],
        "state" => &["stateType", "placement", "refines"],
        "identification" => &[
            "uniqueIdent",
            "shortName",
            "longName",
            "versionNumber",
            "revisionNumber",
        ],
        "characteristic" => &["value", "unit"],
        "processOperator" => &["decompositionRef"],
        "connector" => &["connectorType"],
        "flow" => &["id", "sourceRef", "targetRef"],
        "usage" => &["id", "operatorRef", "resourceRef"],
        "assigned" | "exit" | "entry" | "reference" => &["id"],
        _ => &[],
    }
}

const INDENT: &str = "    ";

/// Writes a tree in canonical form: UTF-8, LF newlines, four-space
/// indentation, fixed attribute order.
pub(crate) fn write(root: &Element) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    write_element(&mut out, root, 0);
    out
}

fn write_element(out: &mut String, el: &Element, depth: usize) {
    let pad = INDENT.repeat(depth);
    out.push_str(&pad);
    out.push('<');
    out.push_str(&el.name);
    let order = attribute_order(&el.name);
    let known = order.iter().filter_map(|k| el.attrs.iter().find(|(a, _)| a == k));
    let rest = el.attrs.iter().filter(|(a, _)| !order.contains(&a.as_str()));
    for (k, v) in known.chain(rest) {
        out.push(' ');
        out.push_str(k);
        out.push_str("=\"");
        escape_attr(out, v);
        out.push('"');
    }
    if el.children.is_empty() {
        if el.attrs.is_empty() {
            out.push_str("></");
            out.push_str(&el.name);
            out.push_str(">\n");
        } else {
            out.push_str(" />\n");
        }
        return;
    }
    if el.children.iter().all(|c| matches!(c, Node::Text(_))) {
        out.push('>');
        for t in el.texts() {
            escape_text(out, t);
        }
        out.push_str("</");
        out.push_str(&el.name);
        out.push_str(">\n");
        return;
    }
    out.push_str(">\n");
    for child in &el.children {
        match child {
            Node::Element(c) => write_element(out, c, depth + 1),
            Node::Text(t) => {
                out.push_str(&pad);
                out.push_str(INDENT);
                escape_text(out, t);
                out.push('\n');
            }
        }
    }
    out.push_str(&pad);
    out.push_str("</");
    out.push_str(&el.name);
    out.push_str(">\n");
}

fn escape_attr(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
}

fn escape_text(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
}
