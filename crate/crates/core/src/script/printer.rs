use std::collections::HashMap;
use std::fmt::Write;

use crate::model::{Characteristic, Identification, Model, Placement, Process, StateKind};

use super::lexer::is_word_char;
use super::parser::RESERVED;

const INDENT: &str = "    ";

/// Renders a model in canonical text form.
///
/// Every id is written explicitly so that parsing the output reproduces
/// the model exactly. Flow and usage endpoints are written by name when
/// that name resolves unambiguously to the same element.
pub fn print(model: &Model) -> String {
    let mut out = String::new();
    for (i, process) in model.processes().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_process(&mut out, process);
    }
    out
}

pub(crate) fn quote(s: &str) -> String {
    if !s.is_empty() && s.chars().all(is_word_char) && !RESERVED.contains(&s) {
        return s.to_owned();
    }
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        match c {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            '\t' => q.push_str("\\t"),
            '\r' => q.push_str("\\r"),
            c if c.is_control() => {
                let _ = write!(q, "\\u{{{:x}}}", c as u32);
            }
            c => q.push(c),
        }
    }
    q.push('"');
    q
}

fn attrs(out: &mut String, ident: &Identification) {
    let _ = write!(out, " id={}", quote(&ident.unique_ident));
    rest_attrs(out, ident);
}

fn rest_attrs(out: &mut String, ident: &Identification) {
    for (key, value) in [
        ("long", &ident.long_name),
        ("version", &ident.version_number),
        ("revision", &ident.revision_number),
    ] {
        if !value.is_empty() {
            let _ = write!(out, " {key}={}", quote(value));
        }
    }
    for r in &ident.references {
        let _ = write!(out, " ref={}", quote(r));
    }
}

fn print_process(out: &mut String, p: &Process) {
    let _ = write!(out, "process {} id={}", quote(p.name()), quote(p.id()));
    match &p.system_boundary_id {
        Some(b) => {
            let _ = write!(out, " boundary={}", quote(b));
        }
        None => out.push_str(" unbounded"),
    }
    rest_attrs(out, &p.identification);
    out.push_str(" {\n");

    let mut sections: Vec<String> = Vec::new();
    let mut section = String::new();

    for s in &p.states {
        let kind = match s.kind {
            StateKind::Product => "product",
            StateKind::Energy => "energy",
            StateKind::Information => "information",
        };
        let _ = write!(section, "{INDENT}{kind} {}", quote(s.name()));
        attrs(&mut section, &s.identification);
        let direction = match s.placement {
            Placement::Intermediate => "internal",
            Placement::Boundary => {
                let has_in = p.incoming(s.id()).next().is_some();
                let has_out = p.outgoing(s.id()).next().is_some();
                if has_in && !has_out {
                    "out"
                } else {
                    "in"
                }
            }
        };
        let _ = write!(section, " {direction}");
        if let Some(r) = &s.refines {
            let _ = write!(section, " refines {}", quote(r));
        }
        chars_block(&mut section, &s.characteristics, 1);
    }
    push_section(&mut sections, &mut section);

    for o in &p.operators {
        let _ = write!(section, "{INDENT}operator {}", quote(o.name()));
        attrs(&mut section, &o.identification);
        if let Some(d) = &o.decomposition {
            let _ = write!(section, " decompose {}", quote(d));
        }
        chars_block(&mut section, &o.characteristics, 1);
    }
    push_section(&mut sections, &mut section);

    for r in &p.resources {
        let _ = write!(section, "{INDENT}resource {}", quote(r.name()));
        attrs(&mut section, &r.identification);
        chars_block(&mut section, &r.characteristics, 1);
    }
    push_section(&mut sections, &mut section);

    for c in &p.connectors {
        let _ = write!(
            section,
            "{INDENT}{} {}",
            c.kind.as_str().to_ascii_lowercase(),
            quote(c.name())
        );
        attrs(&mut section, &c.identification);
        section.push('\n');
    }
    push_section(&mut sections, &mut section);

    let names = NameTable::new(p);
    for f in &p.flows {
        let _ = writeln!(
            section,
            "{INDENT}flow {} -> {} id={}",
            names.reference(&f.source),
            names.reference(&f.target),
            quote(&f.id)
        );
    }
    push_section(&mut sections, &mut section);

    for u in &p.usages {
        let _ = writeln!(
            section,
            "{INDENT}usage {} -- {} id={}",
            names.reference(&u.operator),
            names.reference(&u.resource),
            quote(&u.id)
        );
    }
    push_section(&mut sections, &mut section);

    out.push_str(&sections.join("\n"));
    out.push_str("}\n");
}

fn push_section(sections: &mut Vec<String>, section: &mut String) {
    if !section.is_empty() {
        sections.push(std::mem::take(section));
    }
}

fn chars_block(out: &mut String, chars: &[Characteristic], depth: usize) {
    if chars.is_empty() {
        out.push('\n');
        return;
    }
    out.push_str(" {\n");
    for c in chars {
        let pad = INDENT.repeat(depth + 1);
        let _ = write!(out, "{pad}char {}", quote(&c.identification.short_name));
        attrs(out, &c.identification);
        let _ = write!(out, " = {}", quote_always(&c.value));
        if !c.unit.is_empty() {
            let _ = write!(out, " unit {}", quote_always(&c.unit));
        }
        chars_block(out, &c.children, depth + 1);
    }
    let _ = writeln!(out, "{}}}", INDENT.repeat(depth));
}

fn quote_always(s: &str) -> String {
    let q = quote(s);
    if q.starts_with('"') {
        q
    } else {
        format!("\"{q}\"")
    }
}

/// Decides whether an endpoint can be written by its short name.
struct NameTable<'a> {
    name_of: HashMap<&'a str, &'a str>,
    by_name: HashMap<&'a str, usize>,
}

impl<'a> NameTable<'a> {
    fn new(p: &'a Process) -> Self {
        let mut name_of = HashMap::new();
        let mut by_name: HashMap<&str, usize> = HashMap::new();
        let idents = p
            .states
            .iter()
            .map(|s| &s.identification)
            .chain(p.operators.iter().map(|o| &o.identification))
            .chain(p.resources.iter().map(|r| &r.identification))
            .chain(p.connectors.iter().map(|c| &c.identification));
        for i in idents {
            name_of.insert(i.unique_ident.as_str(), i.short_name.as_str());
            *by_name.entry(i.short_name.as_str()).or_default() += 1;
        }
        NameTable { name_of, by_name }
    }

    /// References resolve by id before name, so a name that is also some
    /// other element's id must not be used.
    fn reference(&self, id: &str) -> String {
        match self.name_of.get(id) {
            Some(&name)
                if !name.is_empty() && self.by_name[name] == 1 && (name == id || !self.name_of.contains_key(name)) =>
            {
                quote(name)
            }
            _ => quote(id),
        }
    }
}
