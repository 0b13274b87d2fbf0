use crate::model::{Characteristic, Identification, Model, Placement, Process};

use super::tree::Element;

pub(crate) fn model_tree(model: &Model) -> Element {
    let mut root = Element::new("fpd");
    for p in model.processes() {
        root.push(process(p));
    }
    root
}

fn process(p: &Process) -> Element {
    let ident = &p.identification;
    let mut el = Element::new("process")
        .attr("id", &ident.unique_ident)
        .attr("shortName", &ident.short_name);
    for (key, value) in [
        ("longName", &ident.long_name),
        ("versionNumber", &ident.version_number),
        ("revisionNumber", &ident.revision_number),
    ] {
        if !value.is_empty() {
            el = el.attr(key, value);
        }
    }
    if let Some(b) = &p.system_boundary_id {
        el.push(
            Element::new("systemLimit")
                .attr("id", b)
                .attr("shortName", &ident.short_name),
        );
    }
    if !ident.references.is_empty() {
        el.push(references(&ident.references));
    }

    let paths = p.flow_paths();
    let mut states = Element::new("states");
    for s in &p.states {
        let mut st = Element::new("state").attr("stateType", s.kind.as_str());
        if s.placement == Placement::Intermediate {
            st = st.attr("placement", "intermediate");
        }
        if let Some(r) = &s.refines {
            st = st.attr("refines", r);
        }
        let mut assignments = Element::new("assignments");
        for op in p.assigned_operators_in(&paths, s.id()) {
            assignments.push(Element::new("assigned").attr("id", op.id()));
        }
        let mut flows = Element::new("flows");
        for f in p.outgoing(s.id()) {
            flows.push(Element::new("flow").child(Element::new("exit").attr("id", &f.id)));
        }
        for f in p.incoming(s.id()) {
            flows.push(Element::new("flow").child(Element::new("entry").attr("id", &f.id)));
        }
        states.push(
            st.child(identification(&s.identification))
                .child(characteristics(&s.characteristics))
                .child(assignments)
                .child(flows),
        );
    }
    el.push(states);

    let mut operators = Element::new("processOperators");
    for o in &p.operators {
        let mut op = Element::new("processOperator");
        if let Some(d) = &o.decomposition {
            op = op.attr("decompositionRef", d);
        }
        operators.push(
            op.child(identification(&o.identification))
                .child(characteristics(&o.characteristics)),
        );
    }
    el.push(operators);

    let mut resources = Element::new("technicalResources");
    for r in &p.resources {
        resources.push(
            Element::new("technicalResource")
                .child(identification(&r.identification))
                .child(characteristics(&r.characteristics)),
        );
    }
    el.push(resources);

    let mut connectors = Element::new("connectors");
    for c in &p.connectors {
        connectors.push(
            Element::new("connector")
                .attr("connectorType", c.kind.as_str())
                .child(identification(&c.identification)),
        );
    }
    el.push(connectors);

    let mut flows = Element::new("flows");
    for f in &p.flows {
        flows.push(
            Element::new("flow")
                .attr("id", &f.id)
                .attr("sourceRef", &f.source)
                .attr("targetRef", &f.target),
        );
    }
    el.push(flows);

    let mut usages = Element::new("usages");
    for u in &p.usages {
        usages.push(
            Element::new("usage")
                .attr("id", &u.id)
                .attr("operatorRef", &u.operator)
                .attr("resourceRef", &u.resource),
        );
    }
    el.push(usages);
    el
}

fn identification(ident: &Identification) -> Element {
    Element::new("identification")
        .attr("uniqueIdent", &ident.unique_ident)
        .attr("shortName", &ident.short_name)
        .attr("longName", &ident.long_name)
        .attr("versionNumber", &ident.version_number)
        .attr("revisionNumber", &ident.revision_number)
        .child(references(&ident.references))
}

fn references(refs: &[String]) -> Element {
    let mut el = Element::new("references");
    for r in refs {
        el.push(Element::new("reference").attr("id", r));
    }
    el
}

fn characteristics(chars: &[Characteristic]) -> Element {
    let mut el = Element::new("characteristics");
    for c in chars {
        el.push(
            Element::new("characteristic")
                .attr("value", &c.value)
                .attr("unit", &c.unit)
                .child(identification(&c.identification))
                .child(characteristics(&c.children)),
        );
    }
    el
}
