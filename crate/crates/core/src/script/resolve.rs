use std::collections::{HashMap, HashSet};

use crate::model::{
    BuildError, Characteristic, ConnectorNode, Flow, Identification, Model, Placement, Process, ProcessOperator,
    StateNode, TechnicalResource, Usage,
};

use super::ast::*;
use super::{ParseError, SourceMap, SourceSpan};

/// Sequential id generator that skips every id written explicitly in the
/// document.
struct IdGen {
    taken: HashSet<String>,
    counters: HashMap<&'static str, usize>,
}

impl IdGen {
    fn fresh(&mut self, prefix: &'static str) -> String {
        let n = self.counters.entry(prefix).or_insert(0);
        loop {
            *n += 1;
            let id = format!("{prefix}{n}");
            if self.taken.insert(id.clone()) {
                return id;
            }
        }
    }

    fn id_or_fresh(&mut self, explicit: &Option<Spanned>, prefix: &'static str) -> String {
        match explicit {
            Some(s) => s.value.clone(),
            None => self.fresh(prefix),
        }
    }
}

fn err(span: &SourceSpan, expected: &str, found: String, hint: &str) -> ParseError {
    ParseError {
        span: span.clone(),
        expected: vec![expected.to_owned()],
        found,
        hint: Some(hint.to_owned()),
    }
}

pub(crate) fn resolve(decls: Vec<ProcessDecl>) -> Result<(Model, SourceMap), Vec<ParseError>> {
    let mut errors = Vec::new();
    let mut gen = IdGen {
        taken: HashSet::new(),
        counters: HashMap::new(),
    };
    collect_explicit_ids(&decls, &mut gen.taken, &mut errors);
    if !errors.is_empty() {
        return Err(errors);
    }

    let mut map = SourceMap::default();
    let mut ref_spans: HashMap<String, SourceSpan> = HashMap::new();
    let mut processes = Vec::with_capacity(decls.len());
    // Assign ids in document order first so that edge resolution can see them.
    let mut pending = Vec::with_capacity(decls.len());
    for pd in &decls {
        let id = gen.id_or_fresh(&pd.attrs.id, "proc");
        let boundary = if pd.unbounded {
            None
        } else {
            Some(gen.id_or_fresh(&pd.attrs.boundary, "sb"))
        };
        let mut process = Process {
            identification: identification(id, &pd.name.value, &pd.attrs),
            system_boundary_id: boundary,
            states: Vec::new(),
            operators: Vec::new(),
            resources: Vec::new(),
            connectors: Vec::new(),
            flows: Vec::new(),
            usages: Vec::new(),
        };
        map.insert(process.id(), &pd.span);
        for decl in &pd.decls {
            let Decl::Node(n) = decl else { continue };
            let prefix = match n.kind {
                DeclKind::State(_) => "st",
                DeclKind::Operator => "op",
                DeclKind::Resource => "res",
                DeclKind::Connector(_) => "con",
            };
            let id = gen.id_or_fresh(&n.attrs.id, prefix);
            map.insert(&id, &n.span);
            let ident = identification(id, &n.name.value, &n.attrs);
            let chars = characteristics(&n.chars, &mut gen, &mut errors);
            match n.kind {
                DeclKind::State(kind) => {
                    let refines = n.refines.as_ref().map(|r| {
                        ref_spans.entry(r.value.clone()).or_insert_with(|| r.span.clone());
                        r.value.clone()
                    });
                    process.states.push(StateNode {
                        identification: ident,
                        kind,
                        placement: match n.direction {
                            Some(Direction::Internal) => Placement::Intermediate,
                            _ => Placement::Boundary,
                        },
                        characteristics: chars,
                        refines,
                    });
                }
                DeclKind::Operator => process.operators.push(ProcessOperator {
                    identification: ident,
                    characteristics: chars,
                    decomposition: None,
                }),
                DeclKind::Resource => process.resources.push(TechnicalResource {
                    identification: ident,
                    characteristics: chars,
                }),
                DeclKind::Connector(kind) => process.connectors.push(ConnectorNode {
                    identification: ident,
                    kind,
                }),
            }
        }
        pending.push(process);
    }

    // Process references for `decompose`: id first, then unique name.
    let process_ids: HashSet<String> = pending.iter().map(|p| p.id().to_owned()).collect();
    let mut process_names: HashMap<String, Vec<String>> = HashMap::new();
    for p in &pending {
        process_names
            .entry(p.name().to_owned())
            .or_default()
            .push(p.id().to_owned());
    }

    for (pd, mut process) in decls.iter().zip(pending) {
        let scope = Scope::new(&process);
        let mut op_index = 0;
        for decl in &pd.decls {
            match decl {
                Decl::Node(n) if n.kind == DeclKind::Operator => {
                    if let Some(target) = &n.decompose {
                        ref_spans
                            .entry(target.value.clone())
                            .or_insert_with(|| target.span.clone());
                        let resolved = if process_ids.contains(&target.value) {
                            Some(target.value.clone())
                        } else {
                            match process_names.get(&target.value).map(Vec::as_slice) {
                                Some([one]) => Some(one.clone()),
                                Some(_) => {
                                    errors.push(ambiguous(target, "process"));
                                    None
                                }
                                None => {
                                    errors.push(undeclared(target, "process name or id"));
                                    None
                                }
                            }
                        };
                        process.operators[op_index].decomposition = resolved;
                    }
                    op_index += 1;
                }
                Decl::Node(_) => {}
                Decl::Edge(e) => {
                    let from = scope.resolve(&e.from, &mut errors);
                    let to = scope.resolve(&e.to, &mut errors);
                    let (Some(from), Some(to)) = (from, to) else { continue };
                    let prefix = match e.kind {
                        EdgeKind::Flow => "fl",
                        EdgeKind::Usage => "us",
                    };
                    let id = gen.id_or_fresh(&e.id, prefix);
                    map.insert(&id, &e.span);
                    match e.kind {
                        EdgeKind::Flow => process.flows.push(Flow::new(id, from, to)),
                        EdgeKind::Usage => process.usages.push(Usage::new(id, from, to)),
                    }
                }
            }
        }
        processes.push(process);
    }

    // refines must name some declared state; the parent scope is checked by build.
    let state_ids: HashSet<&str> = processes.iter().flat_map(|p| &p.states).map(|s| s.id()).collect();
    for pd in &decls {
        for decl in &pd.decls {
            if let Decl::Node(NodeDecl { refines: Some(r), .. }) = decl {
                if !state_ids.contains(r.value.as_str()) {
                    errors.push(undeclared(r, "state id"));
                }
            }
        }
    }

    if !errors.is_empty() {
        errors.sort_by_key(|e| (e.span.start_line, e.span.start_col));
        return Err(errors);
    }

    match Model::build(processes) {
        Ok(model) => Ok((model, map)),
        Err(e) => Err(vec![build_error(e, &map, &ref_spans, &decls)]),
    }
}

fn identification(id: String, name: &str, attrs: &Attrs) -> Identification {
    let text = |s: &Option<Spanned>| s.as_ref().map(|s| s.value.clone()).unwrap_or_default();
    Identification {
        unique_ident: id,
        short_name: name.to_owned(),
        long_name: text(&attrs.long),
        version_number: text(&attrs.version),
        revision_number: text(&attrs.revision),
        references: attrs.refs.clone(),
    }
}

fn characteristics(chars: &[CharDecl], gen: &mut IdGen, errors: &mut Vec<ParseError>) -> Vec<Characteristic> {
    let mut seen = HashSet::new();
    chars
        .iter()
        .map(|c| {
            let id = gen.id_or_fresh(&c.attrs.id, "ch");
            if !seen.insert(id.clone()) {
                errors.push(err(
                    &c.span,
                    "unique characteristic id",
                    format!("`{id}`"),
                    "duplicate id among sibling characteristics",
                ));
            }
            Characteristic {
                identification: identification(id, &c.name.value, &c.attrs),
                value: c.value.clone(),
                unit: c.unit.clone(),
                children: characteristics(&c.children, gen, errors),
            }
        })
        .collect()
}

fn collect_explicit_ids(decls: &[ProcessDecl], taken: &mut HashSet<String>, errors: &mut Vec<ParseError>) {
    let mut claim = |s: &Option<Spanned>, taken: &mut HashSet<String>| {
        let Some(s) = s else { return };
        if s.value.is_empty() {
            errors.push(err(
                &s.span,
                "identifier",
                "empty string".into(),
                "identifiers must not be empty",
            ));
        } else if !taken.insert(s.value.clone()) {
            errors.push(err(
                &s.span,
                "unique identifier",
                format!("`{}`", s.value),
                "duplicate id",
            ));
        }
    };
    fn char_ids(chars: &[CharDecl], out: &mut Vec<Option<Spanned>>) {
        for c in chars {
            out.push(c.attrs.id.clone());
            char_ids(&c.children, out);
        }
    }
    let mut char_explicit = Vec::new();
    for pd in decls {
        claim(&pd.attrs.id, taken);
        claim(&pd.attrs.boundary, taken);
        for decl in &pd.decls {
            match decl {
                Decl::Node(n) => {
                    claim(&n.attrs.id, taken);
                    char_ids(&n.chars, &mut char_explicit);
                }
                Decl::Edge(e) => claim(&e.id, taken),
            }
        }
    }
    // Characteristic ids are sibling-scoped; they only need to be kept
    // away from the generator.
    for s in char_explicit.into_iter().flatten() {
        if s.value.is_empty() {
            errors.push(err(
                &s.span,
                "identifier",
                "empty string".into(),
                "identifiers must not be empty",
            ));
        }
        taken.insert(s.value);
    }
}

struct Scope {
    ids: HashSet<String>,
    names: HashMap<String, Vec<String>>,
}

impl Scope {
    fn new(process: &Process) -> Self {
        let mut ids = HashSet::new();
        let mut names: HashMap<String, Vec<String>> = HashMap::new();
        let idents = process
            .states
            .iter()
            .map(|s| &s.identification)
            .chain(process.operators.iter().map(|o| &o.identification))
            .chain(process.resources.iter().map(|r| &r.identification))
            .chain(process.connectors.iter().map(|c| &c.identification));
        for ident in idents {
            ids.insert(ident.unique_ident.clone());
            names
                .entry(ident.short_name.clone())
                .or_default()
                .push(ident.unique_ident.clone());
        }
        Scope { ids, names }
    }

    fn resolve(&self, r: &Spanned, errors: &mut Vec<ParseError>) -> Option<String> {
        if self.ids.contains(&r.value) {
            return Some(r.value.clone());
        }
        match self.names.get(&r.value).map(Vec::as_slice) {
            Some([one]) => Some(one.clone()),
            Some(_) => {
                errors.push(ambiguous(r, "element"));
                None
            }
            None => {
                errors.push(undeclared(r, "declared element name or id"));
                None
            }
        }
    }
}

fn undeclared(r: &Spanned, expected: &str) -> ParseError {
    err(&r.span, expected, format!("`{}`", r.value), "undeclared element")
}

fn ambiguous(r: &Spanned, what: &str) -> ParseError {
    err(
        &r.span,
        &format!("unique {what} name or id"),
        format!("`{}`", r.value),
        "ambiguous name; refer to the element by id",
    )
}

fn build_error(
    e: BuildError,
    map: &SourceMap,
    ref_spans: &HashMap<String, SourceSpan>,
    decls: &[ProcessDecl],
) -> ParseError {
    let fallback = decls[0].span.clone();
    let decl_span = |id: &str| map.get(id).cloned().unwrap_or_else(|| fallback.clone());
    let (span, found, hint) = match &e {
        BuildError::DanglingReference(id) => (
            ref_spans.get(id).cloned().unwrap_or_else(|| fallback.clone()),
            format!("`{id}`"),
            "refines must name a state of a process that decomposes into this one".to_owned(),
        ),
        BuildError::DecompositionCycle(path) => {
            (decl_span(&path[0]), format!("`{}`", path.join(" -> ")), e.to_string())
        }
        BuildError::SelfLoop(id) | BuildError::InvalidEndpoint { flow: id, .. } => {
            (decl_span(id), format!("flow `{id}`"), e.to_string())
        }
        BuildError::DuplicateId(id) => (decl_span(id), format!("`{id}`"), e.to_string()),
        BuildError::NoProcess | BuildError::EmptyId(_) => (fallback.clone(), "document".into(), e.to_string()),
    };
    ParseError {
        span,
        expected: vec!["well-formed model".into()],
        found,
        hint: Some(hint),
    }
}
