use std::collections::HashSet;

use crate::model::{
    Characteristic, ConnectorKind, ConnectorNode, Flow, Identification, Model, Placement, Process, ProcessOperator,
    StateKind, StateNode, TechnicalResource, Usage,
};

use super::tree::Element;
use super::{Mode, XmlError, XmlWarning};

const IDENT_ATTRS: &[&str] = &[
    "uniqueIdent",
    "shortName",
    "longName",
    "versionNumber",
    "revisionNumber",
];

/// What a state element claims about its connections. Checked against the
/// model once it has been built.
struct StateClaims {
    path: String,
    process: String,
    state: String,
    assigned: Option<Vec<String>>,
    exits: Option<Vec<String>>,
    entries: Option<Vec<String>>,
}

pub(crate) struct TreeReader {
    mode: Mode,
    pub warnings: Vec<XmlWarning>,
    claims: Vec<StateClaims>,
}

fn schema(path: &str, reason: impl Into<String>) -> XmlError {
    XmlError::Schema {
        path: path.to_owned(),
        reason: reason.into(),
    }
}

impl TreeReader {
    pub fn new(mode: Mode) -> Self {
        TreeReader {
            mode,
            warnings: Vec::new(),
            claims: Vec::new(),
        }
    }

    /// A recoverable schema problem: an error in strict mode, a warning in
    /// lenient mode.
    fn complain(&mut self, path: &str, reason: impl Into<String>) -> Result<(), XmlError> {
        match self.mode {
            Mode::Strict => Err(schema(path, reason)),
            Mode::Lenient => {
                self.warnings.push(XmlWarning {
                    path: path.to_owned(),
                    message: reason.into(),
                });
                Ok(())
            }
        }
    }

    fn check_attrs(&mut self, el: &Element, path: &str, allowed: &[&str]) -> Result<(), XmlError> {
        for (key, _) in &el.attrs {
            if !allowed.contains(&key.as_str()) {
                self.complain(path, format!("unknown attribute `{key}`"))?;
            }
        }
        Ok(())
    }

    /// Child elements named in `allowed`, paired with their paths.
    fn children<'e>(
        &mut self,
        el: &'e Element,
        path: &str,
        allowed: &[&str],
    ) -> Result<Vec<(&'e Element, String)>, XmlError> {
        if el.texts().next().is_some() {
            self.complain(path, "unexpected text content")?;
        }
        let mut out = Vec::new();
        let mut counts: Vec<(&str, usize)> = Vec::new();
        for child in el.elements() {
            if !allowed.contains(&child.name.as_str()) {
                self.complain(path, format!("unknown element <{}>", child.name))?;
                continue;
            }
            let n = match counts.iter_mut().find(|(name, _)| *name == child.name) {
                Some((_, n)) => {
                    *n += 1;
                    *n
                }
                None => {
                    counts.push((&child.name, 1));
                    1
                }
            };
            out.push((child, format!("{path}/{}[{n}]", child.name)));
        }
        Ok(out)
    }

    /// Like [`Self::children`] for elements that contain at most one of
    /// each child.
    fn sections<'e>(
        &mut self,
        el: &'e Element,
        path: &str,
        allowed: &[&str],
    ) -> Result<Vec<(&'e Element, String)>, XmlError> {
        let mut out: Vec<(&Element, String)> = Vec::new();
        for (child, _) in self.children(el, path, allowed)? {
            let p = format!("{path}/{}", child.name);
            if out.iter().any(|(c, _)| c.name == child.name) {
                self.complain(&p, "section given more than once; keeping the first")?;
                continue;
            }
            out.push((child, p));
        }
        Ok(out)
    }

    fn required<'e>(&self, el: &'e Element, path: &str, key: &str) -> Result<&'e str, XmlError> {
        el.get(key)
            .ok_or_else(|| schema(path, format!("missing required attribute `{key}`")))
    }

    pub fn document(&mut self, root: &Element) -> Result<Model, XmlError> {
        let mut processes = Vec::new();
        match root.name.as_str() {
            "fpd" => {
                self.check_attrs(root, "/fpd", &[])?;
                for (p, path) in self.children(root, "/fpd", &["process"])? {
                    processes.push(self.process(p, &path)?);
                }
            }
            "process" => processes.push(self.process(root, "/process")?),
            other => return Err(schema(&format!("/{other}"), "root element must be <fpd> or <process>")),
        }
        let model = Model::build(processes)?;
        self.check_claims(&model)?;
        Ok(model)
    }

    fn process(&mut self, el: &Element, path: &str) -> Result<Process, XmlError> {
        self.check_attrs(
            el,
            path,
            &["id", "shortName", "longName", "versionNumber", "revisionNumber"],
        )?;
        let id = self.required(el, path, "id")?;
        let mut p = Process::new(id, el.get("shortName").unwrap_or_default(), "");
        p.system_boundary_id = None;
        p.identification.long_name = el.get("longName").unwrap_or_default().to_owned();
        p.identification.version_number = el.get("versionNumber").unwrap_or_default().to_owned();
        p.identification.revision_number = el.get("revisionNumber").unwrap_or_default().to_owned();

        let sections = self.sections(
            el,
            path,
            &[
                "systemLimit",
                "references",
                "states",
                "processOperators",
                "technicalResources",
                "connectors",
                "flows",
                "usages",
            ],
        )?;
        for (section, spath) in sections {
            if !matches!(section.name.as_str(), "systemLimit" | "references") {
                self.check_attrs(section, &spath, &[])?;
            }
            match section.name.as_str() {
                "systemLimit" => {
                    self.check_attrs(section, &spath, &["id", "shortName"])?;
                    self.children(section, &spath, &[])?;
                    p.system_boundary_id = Some(self.required(section, &spath, "id")?.to_owned());
                    if let Some(name) = section.get("shortName") {
                        match el.get("shortName") {
                            None => p.identification.short_name = name.to_owned(),
                            Some(own) if own != name => {
                                self.complain(&spath, "shortName differs from the process shortName")?;
                            }
                            Some(_) => {}
                        }
                    }
                }
                "references" => p.identification.references = self.references(section, &spath)?,
                "states" => {
                    for (s, sp) in self.children(section, &spath, &["state"])? {
                        let state = self.state(s, &sp, id)?;
                        p.states.push(state);
                    }
                }
                "processOperators" => {
                    for (o, op) in self.children(section, &spath, &["processOperator"])? {
                        p.operators.push(self.operator(o, &op)?);
                    }
                }
                "technicalResources" => {
                    for (r, rp) in self.children(section, &spath, &["technicalResource"])? {
                        self.check_attrs(r, &rp, &[])?;
                        let (identification, characteristics) = self.body(r, &rp, true)?;
                        p.resources.push(TechnicalResource {
                            identification,
                            characteristics,
                        });
                    }
                }
                "connectors" => {
                    for (c, cp) in self.children(section, &spath, &["connector"])? {
                        self.check_attrs(c, &cp, &["connectorType"])?;
                        let raw = self.required(c, &cp, "connectorType")?;
                        let kind = ConnectorKind::parse(raw)
                            .ok_or_else(|| schema(&cp, format!("unknown connectorType `{raw}`")))?;
                        let (identification, _) = self.body(c, &cp, false)?;
                        p.connectors.push(ConnectorNode { identification, kind });
                    }
                }
                "flows" => {
                    for (f, fp) in self.children(section, &spath, &["flow"])? {
                        self.check_attrs(f, &fp, &["id", "sourceRef", "targetRef"])?;
                        self.children(f, &fp, &[])?;
                        p.flows.push(Flow::new(
                            self.required(f, &fp, "id")?,
                            self.required(f, &fp, "sourceRef")?,
                            self.required(f, &fp, "targetRef")?,
                        ));
                    }
                }
                "usages" => {
                    for (u, up) in self.children(section, &spath, &["usage"])? {
                        self.check_attrs(u, &up, &["id", "operatorRef", "resourceRef"])?;
                        self.children(u, &up, &[])?;
                        p.usages.push(Usage::new(
                            self.required(u, &up, "id")?,
                            self.required(u, &up, "operatorRef")?,
                            self.required(u, &up, "resourceRef")?,
                        ));
                    }
                }
                _ => unreachable!(),
            }
        }
        Ok(p)
    }

    fn state(&mut self, el: &Element, path: &str, process: &str) -> Result<StateNode, XmlError> {
        self.check_attrs(el, path, &["stateType", "placement", "refines"])?;
        let raw = self.required(el, path, "stateType")?;
        let kind = StateKind::parse(raw).ok_or_else(|| schema(path, format!("unknown stateType `{raw}`")))?;
        let placement = match el.get("placement") {
            None | Some("boundary") => Placement::Boundary,
            Some("intermediate") => Placement::Intermediate,
            Some(other) => return Err(schema(path, format!("unknown placement `{other}`"))),
        };
        let mut claims = StateClaims {
            path: path.to_owned(),
            process: process.to_owned(),
            state: String::new(),
            assigned: None,
            exits: None,
            entries: None,
        };
        let mut identification = None;
        let mut characteristics = Vec::new();
        for (child, cp) in self.sections(el, path, &["identification", "characteristics", "assignments", "flows"])? {
            if matches!(child.name.as_str(), "assignments" | "flows") {
                self.check_attrs(child, &cp, &[])?;
            }
            match child.name.as_str() {
                "identification" => identification = Some(self.identification(child, &cp)?),
                "characteristics" => characteristics = self.characteristics(child, &cp)?,
                "assignments" => {
                    let mut ids = Vec::new();
                    for (a, ap) in self.children(child, &cp, &["assigned"])? {
                        self.check_attrs(a, &ap, &["id"])?;
                        self.children(a, &ap, &[])?;
                        ids.push(self.required(a, &ap, "id")?.to_owned());
                    }
                    claims.assigned = Some(ids);
                }
                "flows" => {
                    let (mut exits, mut entries) = (Vec::new(), Vec::new());
                    for (f, fp) in self.children(child, &cp, &["flow"])? {
                        self.check_attrs(f, &fp, &[])?;
                        let ends = self.children(f, &fp, &["exit", "entry"])?;
                        if ends.len() != 1 {
                            self.complain(&fp, "expected exactly one <exit> or <entry>")?;
                        }
                        for (end, ep) in ends {
                            self.check_attrs(end, &ep, &["id"])?;
                            self.children(end, &ep, &[])?;
                            let id = self.required(end, &ep, "id")?.to_owned();
                            if end.name == "exit" {
                                exits.push(id);
                            } else {
                                entries.push(id);
                            }
                        }
                    }
                    claims.exits = Some(exits);
                    claims.entries = Some(entries);
                }
                _ => unreachable!(),
            }
        }
        let identification = identification.ok_or_else(|| schema(path, "missing <identification>"))?;
        claims.state = identification.unique_ident.clone();
        self.claims.push(claims);
        Ok(StateNode {
            identification,
            kind,
            placement,
            characteristics,
            refines: el.get("refines").map(str::to_owned),
        })
    }

    fn operator(&mut self, el: &Element, path: &str) -> Result<ProcessOperator, XmlError> {
        self.check_attrs(el, path, &["decompositionRef"])?;
        let (identification, characteristics) = self.body(el, path, true)?;
        Ok(ProcessOperator {
            identification,
            characteristics,
            decomposition: el.get("decompositionRef").map(str::to_owned),
        })
    }

    /// `identification` plus, where allowed, `characteristics`.
    fn body(
        &mut self,
        el: &Element,
        path: &str,
        with_characteristics: bool,
    ) -> Result<(Identification, Vec<Characteristic>), XmlError> {
        let allowed: &[&str] = if with_characteristics {
            &["identification", "characteristics"]
        } else {
            &["identification"]
        };
        let mut identification = None;
        let mut characteristics = Vec::new();
        for (child, cp) in self.sections(el, path, allowed)? {
            if child.name == "identification" {
                identification = Some(self.identification(child, &cp)?);
            } else {
                characteristics = self.characteristics(child, &cp)?;
            }
        }
        let identification = identification.ok_or_else(|| schema(path, "missing <identification>"))?;
        Ok((identification, characteristics))
    }

    fn identification(&mut self, el: &Element, path: &str) -> Result<Identification, XmlError> {
        self.check_attrs(el, path, IDENT_ATTRS)?;
        let mut ident = Identification::new(
            self.required(el, path, "uniqueIdent")?,
            el.get("shortName").unwrap_or_default(),
        );
        ident.long_name = el.get("longName").unwrap_or_default().to_owned();
        ident.version_number = el.get("versionNumber").unwrap_or_default().to_owned();
        ident.revision_number = el.get("revisionNumber").unwrap_or_default().to_owned();
        for (refs, rp) in self.sections(el, path, &["references"])? {
            ident.references = self.references(refs, &rp)?;
        }
        Ok(ident)
    }

    fn references(&mut self, el: &Element, path: &str) -> Result<Vec<String>, XmlError> {
        self.check_attrs(el, path, &[])?;
        let mut out = Vec::new();
        for (r, rp) in self.children(el, path, &["reference"])? {
            self.check_attrs(r, &rp, &["id"])?;
            self.children(r, &rp, &[])?;
            out.push(self.required(r, &rp, "id")?.to_owned());
        }
        Ok(out)
    }

    fn characteristics(&mut self, el: &Element, path: &str) -> Result<Vec<Characteristic>, XmlError> {
        self.check_attrs(el, path, &[])?;
        let mut out = Vec::new();
        for (c, cp) in self.children(el, path, &["characteristic"])? {
            self.check_attrs(c, &cp, &["value", "unit"])?;
            let (identification, children) = self.body(c, &cp, true)?;
            out.push(Characteristic {
                identification,
                value: c.get("value").unwrap_or_default().to_owned(),
                unit: c.get("unit").unwrap_or_default().to_owned(),
                children,
            });
        }
        Ok(out)
    }

    /// Assignments and state-level flow lists are derived data; when a
    /// document carries them they must agree with the model.
    fn check_claims(&mut self, model: &Model) -> Result<(), XmlError> {
        let claims = std::mem::take(&mut self.claims);
        for c in claims {
            let p = model.process(&c.process).expect("claims refer to built processes");
            let set = |v: Vec<String>| v.into_iter().collect::<HashSet<_>>();
            if let Some(assigned) = c.assigned {
                let derived: Vec<String> = p
                    .assigned_operators(&c.state)
                    .iter()
                    .map(|o| o.id().to_owned())
                    .collect();
                if set(assigned) != set(derived) {
                    self.complain(
                        &format!("{}/assignments", c.path),
                        "assigned operators do not match the flows",
                    )?;
                }
            }
            if let Some(exits) = c.exits {
                let derived: Vec<String> = p.outgoing(&c.state).map(|f| f.id.clone()).collect();
                if set(exits) != set(derived) {
                    self.complain(&format!("{}/flows", c.path), "exit ids do not match the outgoing flows")?;
                }
            }
            if let Some(entries) = c.entries {
                let derived: Vec<String> = p.incoming(&c.state).map(|f| f.id.clone()).collect();
                if set(entries) != set(derived) {
                    self.complain(
                        &format!("{}/flows", c.path),
                        "entry ids do not match the incoming flows",
                    )?;
                }
            }
        }
        Ok(())
    }
}
