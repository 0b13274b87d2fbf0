use crate::model::{ConnectorKind, FlowPath, Model, NodeKind, Placement, Process, ProcessOperator, StateNode};

use super::{Diagnostic, RuleId};

/// Message reported for a flow that links two states.
pub const STATE_TO_STATE_MESSAGE: &str =
    "A state must always be assigned a process operator. Linking two states is not permitted.";

pub(super) fn run(model: &Model, rule: RuleId) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for process in model.processes() {
        let mut sink = Sink {
            rule,
            process_id: process.id(),
            out: &mut out,
        };
        match rule {
            RuleId::R1 => state_to_state(process, &mut sink),
            RuleId::R2 => has_operator(process, &mut sink),
            RuleId::R3 => states_assigned(process, &mut sink),
            RuleId::R4 => min_states(process, &mut sink),
            RuleId::R5 => boundary_direction(process, &mut sink),
            RuleId::R6 => intermediate_both(process, &mut sink),
            RuleId::R7 => operator_io(process, &mut sink),
            RuleId::R8 => usage_endpoints(process, &mut sink),
            RuleId::R9 => decomposition(model, process, &mut sink),
            RuleId::R10 => alternation(process, &mut sink),
            RuleId::R11 => has_boundary(process, &mut sink),
            RuleId::R12 => connector_arity(process, &mut sink),
            RuleId::R13 => resource_used(process, &mut sink),
        }
    }
    out
}

struct Sink<'a> {
    rule: RuleId,
    process_id: &'a str,
    out: &'a mut Vec<Diagnostic>,
}

impl Sink<'_> {
    fn push(&mut self, elements: Vec<String>, message: String) {
        debug_assert!(!elements.is_empty());
        self.out.push(Diagnostic {
            rule: self.rule,
            severity: self.rule.default_severity(),
            message,
            elements,
            process_id: self.process_id.to_owned(),
        });
    }
}

fn label(name: &str, id: &str) -> String {
    if name.is_empty() {
        format!("`{id}`")
    } else {
        format!("`{name}`")
    }
}

fn is_state(process: &Process, id: &str) -> bool {
    process.node_kind(id) == Some(NodeKind::State)
}

fn state_to_state(process: &Process, sink: &mut Sink) {
    for flow in &process.flows {
        if is_state(process, &flow.source) && is_state(process, &flow.target) {
            sink.push(
                vec![flow.id.clone(), flow.source.clone(), flow.target.clone()],
                STATE_TO_STATE_MESSAGE.to_owned(),
            );
        }
    }
}

fn has_operator(process: &Process, sink: &mut Sink) {
    if process.operators.is_empty() {
        sink.push(
            vec![process.id().to_owned()],
            format!(
                "Process {} has no process operator.",
                label(process.name(), process.id())
            ),
        );
    }
}

fn states_assigned(process: &Process, sink: &mut Sink) {
    let paths = process.flow_paths();
    for state in &process.states {
        if process.assigned_operators_in(&paths, state.id()).is_empty() {
            sink.push(
                vec![state.id().to_owned()],
                format!(
                    "State {} is not connected to any process operator.",
                    label(state.name(), state.id())
                ),
            );
        }
    }
}

fn min_states(process: &Process, sink: &mut Sink) {
    let boundary = process.boundary_states();
    let (n, i, o) = (process.states.len(), boundary.inputs.len(), boundary.outputs.len());
    if n < 2 || i == 0 || o == 0 {
        sink.push(
            vec![process.id().to_owned()],
            format!(
                "Process {} needs at least two states with at least one boundary input and one boundary output \
                 (found {n} states, {i} inputs, {o} outputs).",
                label(process.name(), process.id())
            ),
        );
    }
}

fn flow_counts(process: &Process, id: &str) -> (usize, usize) {
    (process.incoming(id).count(), process.outgoing(id).count())
}

fn boundary_direction(process: &Process, sink: &mut Sink) {
    for state in process.states.iter().filter(|s| s.placement == Placement::Boundary) {
        let (ins, outs) = flow_counts(process, state.id());
        let problem = match (ins, outs) {
            (0, 0) => "has no flows",
            (i, o) if i > 0 && o > 0 => "has both incoming and outgoing flows",
            _ => continue,
        };
        sink.push(
            vec![state.id().to_owned()],
            format!(
                "Boundary state {} {problem}; it must either enter or leave the system.",
                label(state.name(), state.id())
            ),
        );
    }
}

fn intermediate_both(process: &Process, sink: &mut Sink) {
    for state in process.states.iter().filter(|s| s.placement == Placement::Intermediate) {
        let (ins, outs) = flow_counts(process, state.id());
        if ins == 0 || outs == 0 {
            sink.push(
                vec![state.id().to_owned()],
                format!(
                    "Intermediate state {} needs both an incoming and an outgoing flow (has {ins} in, {outs} out).",
                    label(state.name(), state.id())
                ),
            );
        }
    }
}

fn operator_io(process: &Process, sink: &mut Sink) {
    let paths = process.flow_paths();
    for op in &process.operators {
        let io = process.operator_io_in(&paths, op.id());
        let missing = match (io.inputs.is_empty(), io.outputs.is_empty()) {
            (false, false) => continue,
            (true, true) => "input and output states",
            (true, false) => "an input state",
            (false, true) => "an output state",
        };
        sink.push(
            vec![op.id().to_owned()],
            format!("Process operator {} has no {missing}.", label(op.name(), op.id())),
        );
    }
}

fn usage_endpoints(process: &Process, sink: &mut Sink) {
    for usage in &process.usages {
        let op_ok = process.node_kind(&usage.operator) == Some(NodeKind::Operator);
        let res_ok = process.node_kind(&usage.resource) == Some(NodeKind::Resource);
        if !(op_ok && res_ok) {
            sink.push(
                vec![usage.id.clone(), usage.operator.clone(), usage.resource.clone()],
                format!(
                    "Usage `{}` must join a process operator (`{}`) and a technical resource (`{}`).",
                    usage.id, usage.operator, usage.resource
                ),
            );
        }
    }
}

#[derive(Debug, PartialEq)]
enum Mismatch {
    Missing,
    Ambiguous,
    NotConnected,
    KindDiffers,
}

/// Finds the operator-side state matching a sub-process boundary state.
fn correspondence(sub: &StateNode, candidates: &[&StateNode], parent: &Process) -> Result<(), Mismatch> {
    if let Some(target) = sub.refines.as_deref().filter(|t| parent.state(t).is_some()) {
        return match candidates.iter().find(|c| c.id() == target) {
            Some(c) if c.kind == sub.kind => Ok(()),
            Some(_) => Err(Mismatch::KindDiffers),
            None => Err(Mismatch::NotConnected),
        };
    }
    match candidates
        .iter()
        .filter(|c| c.kind == sub.kind && c.name() == sub.name())
        .count()
    {
        1 => Ok(()),
        0 => Err(Mismatch::Missing),
        _ => Err(Mismatch::Ambiguous),
    }
}

fn decomposition(model: &Model, process: &Process, sink: &mut Sink) {
    let paths = process.flow_paths();
    for op in &process.operators {
        let Some(sub) = model.decomposition_of(op) else {
            continue;
        };
        let io = process.operator_io_in(&paths, op.id());
        let boundary = sub.boundary_states();
        for (states, candidates, side) in [
            (&boundary.inputs, &io.inputs, "input"),
            (&boundary.outputs, &io.outputs, "output"),
        ] {
            for state in states {
                if let Err(why) = correspondence(state, candidates, process) {
                    sink.push(
                        vec![op.id().to_owned(), state.id().to_owned()],
                        decomposition_message(op, sub, state, side, why),
                    );
                }
            }
        }
    }
}

fn decomposition_message(op: &ProcessOperator, sub: &Process, state: &StateNode, side: &str, why: Mismatch) -> String {
    let what = format!(
        "Boundary {side} {} ({}) of sub-process {}",
        label(state.name(), state.id()),
        state.kind,
        label(sub.name(), sub.id())
    );
    let op = label(op.name(), op.id());
    match why {
        Mismatch::Missing => format!("{what} has no corresponding {side} of process operator {op}."),
        Mismatch::Ambiguous => {
            format!("{what} matches more than one {side} of process operator {op}; add an explicit refines reference.")
        }
        Mismatch::NotConnected => format!("{what} refines a state that is not an {side} of process operator {op}."),
        Mismatch::KindDiffers => {
            format!("{what} refines an {side} of process operator {op} with a different state kind.")
        }
    }
}

fn alternation(process: &Process, sink: &mut Sink) {
    let paths = process.flow_paths();
    for path in &paths {
        if let Some(problem) = alternation_problem(process, path) {
            let mut elements = vec![path.origin.clone()];
            elements.extend(path.connectors.iter().cloned());
            elements.push(path.terminus.clone());
            sink.push(elements, format!("Flow path `{}` {problem}.", render_path(path)));
        }
    }
    // Connector cycles that no state or operator leads into yield no paths.
    for c in &process.connectors {
        let on_path = paths
            .iter()
            .any(|p| p.origin == c.id() || p.terminus == c.id() || p.connectors.iter().any(|x| x == c.id()));
        if !on_path && process.incoming(c.id()).next().is_some() {
            sink.push(
                vec![c.id().to_owned()],
                format!(
                    "Connector {} lies on a flow cycle that no state or process operator leads into.",
                    label(c.name(), c.id())
                ),
            );
        }
    }
}

fn alternation_problem(process: &Process, path: &FlowPath) -> Option<&'static str> {
    let origin = process.node_kind(&path.origin);
    let terminus = process.node_kind(&path.terminus);
    match (origin, terminus) {
        (Some(NodeKind::State), Some(NodeKind::Operator)) | (Some(NodeKind::Operator), Some(NodeKind::State)) => None,
        (Some(NodeKind::Connector), _) => Some("starts at a connector without incoming flow"),
        (_, Some(NodeKind::Connector)) => Some("dead-ends at a connector"),
        (Some(NodeKind::State), Some(NodeKind::State)) => Some("links two states"),
        (Some(NodeKind::Operator), Some(NodeKind::Operator)) => Some("links two process operators"),
        _ => Some("does not alternate between state and process operator"),
    }
}

fn render_path(path: &FlowPath) -> String {
    let mut parts = vec![path.origin.as_str()];
    parts.extend(path.connectors.iter().map(String::as_str));
    parts.push(&path.terminus);
    parts.join(" -> ")
}

fn has_boundary(process: &Process, sink: &mut Sink) {
    if process.system_boundary_id.is_none() {
        sink.push(
            vec![process.id().to_owned()],
            format!(
                "Process {} declares no system boundary.",
                label(process.name(), process.id())
            ),
        );
    }
}

fn connector_arity(process: &Process, sink: &mut Sink) {
    for c in &process.connectors {
        let (ins, outs) = flow_counts(process, c.id());
        let (ok, expected) = match c.kind {
            ConnectorKind::Fork | ConnectorKind::Decision => {
                (ins == 1 && outs >= 2, "one incoming and at least two outgoing")
            }
            ConnectorKind::Join | ConnectorKind::Merge => {
                (ins >= 2 && outs == 1, "at least two incoming and one outgoing")
            }
        };
        if !ok {
            sink.push(
                vec![c.id().to_owned()],
                format!(
                    "{} {} needs {expected} flows (has {ins} in, {outs} out).",
                    c.kind,
                    label(c.name(), c.id())
                ),
            );
        }
    }
}

fn resource_used(process: &Process, sink: &mut Sink) {
    for r in &process.resources {
        if !process.usages.iter().any(|u| u.resource == r.id()) {
            sink.push(
                vec![r.id().to_owned()],
                format!(
                    "Technical resource {} is not used by any process operator.",
                    label(r.name(), r.id())
                ),
            );
        }
    }
}
