//! Derived properties of a process: boundary inputs/outputs, operator I/O
//! through connector nodes, resource linkage and flow paths.

use super::{NodeKind, Placement, Process, ProcessOperator, StateNode, TechnicalResource};

/// Boundary states split by the direction of their flows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundaryStates<'a> {
    pub inputs: Vec<&'a StateNode>,
    pub outputs: Vec<&'a StateNode>,
}

/// States entering and leaving a process operator.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorIo<'a> {
    pub inputs: Vec<&'a StateNode>,
    pub outputs: Vec<&'a StateNode>,
}

/// A maximal directed path whose interior nodes are all connectors.
///
/// `terminus` is a connector only when the path dead-ends there, either
/// because the connector has no outgoing flow or because following it
/// would revisit a connector already on the path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowPath {
    pub origin: String,
    pub connectors: Vec<String>,
    pub terminus: String,
}

impl Process {
    pub fn boundary_states(&self) -> BoundaryStates<'_> {
        let mut out = BoundaryStates::default();
        for state in self.states.iter().filter(|s| s.placement == Placement::Boundary) {
            let has_out = self.outgoing(state.id()).next().is_some();
            let has_in = self.incoming(state.id()).next().is_some();
            match (has_in, has_out) {
                (false, true) => out.inputs.push(state),
                (true, false) => out.outputs.push(state),
                _ => {}
            }
        }
        out
    }

    pub fn flow_paths(&self) -> Vec<FlowPath> {
        let mut paths = Vec::new();
        let origins = self
            .states
            .iter()
            .map(|s| s.id())
            .chain(self.operators.iter().map(|o| o.id()))
            .chain(
                self.connectors
                    .iter()
                    .map(|c| c.id())
                    .filter(|id| self.incoming(id).next().is_none()),
            );
        for origin in origins {
            let mut stack = Vec::new();
            for flow in self.outgoing(origin) {
                self.walk(origin, &flow.target, &mut stack, &mut paths);
            }
        }
        paths
    }

    fn walk<'a>(&'a self, origin: &str, node: &'a str, stack: &mut Vec<&'a str>, paths: &mut Vec<FlowPath>) {
        let emit = |stack: &[&str], paths: &mut Vec<FlowPath>| {
            paths.push(FlowPath {
                origin: origin.to_owned(),
                connectors: stack.iter().map(|s| (*s).to_owned()).collect(),
                terminus: node.to_owned(),
            })
        };
        if self.node_kind(node) != Some(NodeKind::Connector) || node == origin || stack.contains(&node) {
            emit(stack, paths);
            return;
        }
        let mut next = self.outgoing(node).peekable();
        if next.peek().is_none() {
            emit(stack, paths);
            return;
        }
        stack.push(node);
        for flow in next {
            self.walk(origin, &flow.target, stack, paths);
        }
        stack.pop();
    }

    pub fn operator_io(&self, operator: &ProcessOperator) -> OperatorIo<'_> {
        self.operator_io_in(&self.flow_paths(), operator.id())
    }

    pub(crate) fn operator_io_in(&self, paths: &[FlowPath], operator_id: &str) -> OperatorIo<'_> {
        let reaches = |from: &str, to: &str| paths.iter().any(|p| p.origin == from && p.terminus == to);
        OperatorIo {
            inputs: self.states.iter().filter(|s| reaches(s.id(), operator_id)).collect(),
            outputs: self.states.iter().filter(|s| reaches(operator_id, s.id())).collect(),
        }
    }

    /// Operators connected to `state_id` by a flow path in either direction,
    /// in operator declaration order.
    pub fn assigned_operators(&self, state_id: &str) -> Vec<&ProcessOperator> {
        self.assigned_operators_in(&self.flow_paths(), state_id)
    }

    pub(crate) fn assigned_operators_in(&self, paths: &[FlowPath], state_id: &str) -> Vec<&ProcessOperator> {
        self.operators
            .iter()
            .filter(|o| {
                paths.iter().any(|p| {
                    (p.origin == state_id && p.terminus == o.id()) || (p.origin == o.id() && p.terminus == state_id)
                })
            })
            .collect()
    }

    pub fn resources_of(&self, operator: &ProcessOperator) -> Vec<&TechnicalResource> {
        self.usages
            .iter()
            .filter(|u| u.operator == operator.id())
            .filter_map(|u| self.resource(&u.resource))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::model::*;

    fn state(id: &str, p: Placement) -> StateNode {
        StateNode::new(id, id, StateKind::Product, p)
    }

    fn names(states: &[&StateNode]) -> Vec<String> {
        states.iter().map(|s| s.id().to_owned()).collect()
    }

    #[test]
    fn boundary_states_classify_by_direction() {
        let mut p = Process::new("P", "p", "B");
        p.states = vec![
            state("in", Placement::Boundary),
            state("out", Placement::Boundary),
            state("both", Placement::Boundary),
            state("mid", Placement::Intermediate),
            state("lonely", Placement::Boundary),
        ];
        p.operators.push(ProcessOperator::new("O", "o"));
        p.flows = vec![
            Flow::new("f1", "in", "O"),
            Flow::new("f2", "O", "out"),
            Flow::new("f3", "both", "O"),
            Flow::new("f4", "O", "both"),
            Flow::new("f5", "O", "mid"),
        ];
        let b = p.boundary_states();
        assert_eq!(names(&b.inputs), ["in"]);
        assert_eq!(names(&b.outputs), ["out"]);
    }

    #[test]
    fn no_states_no_boundary() {
        let p = Process::new("P", "p", "B");
        assert_eq!(p.boundary_states(), BoundaryStates::default());
    }

    #[test]
    fn fork_feeds_both_operators() {
        let mut p = Process::new("P", "p", "B");
        p.states.push(state("S", Placement::Boundary));
        p.operators = vec![ProcessOperator::new("A", "a"), ProcessOperator::new("B2", "b")];
        p.connectors.push(ConnectorNode::new("F", "f", ConnectorKind::Fork));
        p.flows = vec![
            Flow::new("f1", "S", "F"),
            Flow::new("f2", "F", "A"),
            Flow::new("f3", "F", "B2"),
        ];
        for op in &p.operators {
            assert_eq!(names(&p.operator_io(op).inputs), ["S"]);
            assert!(p.operator_io(op).outputs.is_empty());
        }
        assert_eq!(
            p.flow_paths(),
            vec![
                FlowPath {
                    origin: "S".into(),
                    connectors: vec!["F".into()],
                    terminus: "A".into()
                },
                FlowPath {
                    origin: "S".into(),
                    connectors: vec!["F".into()],
                    terminus: "B2".into()
                },
            ]
        );
    }

    #[test]
    fn operator_without_flows() {
        let mut p = Process::new("P", "p", "B");
        p.operators.push(ProcessOperator::new("O", "o"));
        assert_eq!(p.operator_io(&p.operators[0]), OperatorIo::default());
    }

    #[test]
    fn direct_paths() {
        let mut p = Process::new("P", "p", "B");
        p.states = vec![state("S1", Placement::Boundary), state("S2", Placement::Boundary)];
        p.operators.push(ProcessOperator::new("O", "o"));
        p.flows = vec![Flow::new("f1", "O", "S1"), Flow::new("f2", "O", "S2")];
        let paths = p.flow_paths();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.origin == "O" && p.connectors.is_empty()));
    }

    #[test]
    fn dead_ends_and_connector_cycles() {
        let mut p = Process::new("P", "p", "B");
        p.states.push(state("S", Placement::Boundary));
        p.connectors = vec![
            ConnectorNode::new("F", "f", ConnectorKind::Fork),
            ConnectorNode::new("J", "j", ConnectorKind::Join),
            ConnectorNode::new("D", "d", ConnectorKind::Decision),
        ];
        p.flows = vec![
            Flow::new("f1", "S", "F"),
            Flow::new("f2", "F", "J"),
            Flow::new("f3", "J", "F"),
            Flow::new("f4", "F", "D"),
        ];
        let paths = p.flow_paths();
        assert!(paths.contains(&FlowPath {
            origin: "S".into(),
            connectors: vec!["F".into(), "J".into()],
            terminus: "F".into()
        }));
        assert!(paths.contains(&FlowPath {
            origin: "S".into(),
            connectors: vec!["F".into()],
            terminus: "D".into()
        }));
        assert_eq!(paths.len(), 2);
    }

    #[test]
    fn resources_in_declaration_order() {
        let mut p = Process::new("P", "p", "B");
        p.operators = vec![ProcessOperator::new("O", "o"), ProcessOperator::new("O2", "o2")];
        p.resources = vec![TechnicalResource::new("R1", "r1"), TechnicalResource::new("R2", "r2")];
        assert!(p.resources_of(&p.operators[0]).is_empty());
        p.usages = vec![
            Usage::new("u1", "O", "R2"),
            Usage::new("u0", "O2", "R1"),
            Usage::new("u2", "O", "R1"),
        ];
        let ids: Vec<_> = p.resources_of(&p.operators[0]).iter().map(|r| r.id()).collect();
        assert_eq!(ids, ["R2", "R1"]);
    }

    #[test]
    fn decomposition_lookup_is_direct() {
        let mut p1 = Process::new("P1", "a", "B1");
        let mut op1 = ProcessOperator::new("OP1", "x");
        op1.decomposition = Some("P2".into());
        p1.operators.push(op1);
        let mut p2 = Process::new("P2", "b", "B2");
        let mut op2 = ProcessOperator::new("OP2", "y");
        op2.decomposition = Some("P3".into());
        p2.operators.push(op2);
        let p3 = Process::new("P3", "c", "B3");
        let model = Model::build(vec![p1, p2, p3]).unwrap();
        let op2 = &model.process("P2").unwrap().operators[0];
        assert_eq!(model.decomposition_of(op2).map(|p| p.id()), Some("P3"));
        let leaf = ProcessOperator::new("Z", "z");
        assert!(model.decomposition_of(&leaf).is_none());
        assert_eq!(model.decomposition_depth("P1"), 2);
        assert_eq!(model.decomposition_depth("P3"), 0);
    }
}
