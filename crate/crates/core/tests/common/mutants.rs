//! One minimal mutant of the collar fixtures per rule, with the exact set of
//! rules each is expected to trip.
//!
//! Collar ids: proc1 (boundary sb1); states st1 Collar, st2 Rivet Position,
//! st3 Electrical Energy Supply (inputs), st4 Screwed Collar, st5 Thermal
//! Energy (outputs); operator op1; resource res1; flows fl1..fl5; usage us1.

use std::collections::BTreeSet;

use fpd_core::{
    fixtures, ConnectorKind, ConnectorNode, Flow, Model, Placement, Process, ProcessOperator, RuleId, StateKind,
    StateNode, TechnicalResource, Usage,
};

pub struct Mutant {
    pub target: RuleId,
    pub description: &'static str,
    pub model: Model,
    pub expected: BTreeSet<RuleId>,
}

fn collar(edit: impl FnOnce(&mut Vec<Process>)) -> Model {
    let mut processes = fixtures::collar().into_processes();
    edit(&mut processes);
    Model::build(processes).expect("mutant builds")
}

fn decomposed(edit: impl FnOnce(&mut Vec<Process>)) -> Model {
    let mut processes = fixtures::collar_decomposed().into_processes();
    edit(&mut processes);
    Model::build(processes).expect("mutant builds")
}

fn set(rules: &[RuleId]) -> BTreeSet<RuleId> {
    rules.iter().copied().collect()
}

fn retarget(p: &mut Process, flow: &str, source: &str, target: &str) {
    let f = p.flows.iter_mut().find(|f| f.id == flow).unwrap();
    f.source = source.into();
    f.target = target.into();
}

pub fn state_link(processes: &mut [Process]) {
    processes[0].flows.push(Flow::new("bad", "st1", "st4"));
}

pub fn all() -> Vec<Mutant> {
    use RuleId::*;
    vec![
        Mutant {
            target: R1,
            description: "flow from Collar straight to Screwed Collar",
            // The two-node path is also a non-alternating flow path.
            model: collar(|ps| state_link(ps)),
            expected: set(&[R1, R10]),
        },
        Mutant {
            target: R2,
            description: "second process with a boundary and nothing else",
            // Without states it also lacks boundary inputs and outputs.
            model: collar(|ps| ps.push(Process::new("empty", "Empty", "sb_empty"))),
            expected: set(&[R2, R4]),
        },
        Mutant {
            target: R3,
            description: "extra boundary state without flows",
            // A flowless boundary state has no direction either.
            model: collar(|ps| {
                ps[0].states.push(StateNode::new(
                    "loose",
                    "Loose",
                    StateKind::Product,
                    Placement::Boundary,
                ))
            }),
            expected: set(&[R3, R5]),
        },
        Mutant {
            target: R4,
            description: "both output states removed",
            // The operator is left without outputs.
            model: collar(|ps| {
                let p = &mut ps[0];
                p.states.retain(|s| s.id() != "st4" && s.id() != "st5");
                p.flows.retain(|f| f.target != "st4" && f.target != "st5");
            }),
            expected: set(&[R4, R7]),
        },
        Mutant {
            target: R5,
            description: "operator feeds back into Collar",
            model: collar(|ps| ps[0].flows.push(Flow::new("back", "op1", "st1"))),
            expected: set(&[R5]),
        },
        Mutant {
            target: R6,
            description: "Thermal Energy made intermediate",
            model: collar(|ps| ps[0].states[4].placement = Placement::Intermediate),
            expected: set(&[R6]),
        },
        Mutant {
            target: R7,
            description: "second operator consuming Collar with no output",
            model: collar(|ps| {
                ps[0].operators.push(ProcessOperator::new("op2", "Inspect"));
                ps[0].flows.push(Flow::new("to_op2", "st1", "op2"));
            }),
            expected: set(&[R7]),
        },
        Mutant {
            target: R8,
            description: "usage between the operator and a state",
            model: collar(|ps| ps[0].usages.push(Usage::new("us_bad", "op1", "st1"))),
            expected: set(&[R8]),
        },
        Mutant {
            target: R9,
            description: "refines removed from the sub-process product input",
            model: decomposed(|ps| ps[1].states[0].refines = None),
            expected: set(&[R9]),
        },
        Mutant {
            target: R10,
            description: "fork routes Collar to the operator and to Screwed Collar",
            model: collar(|ps| {
                let p = &mut ps[0];
                p.connectors
                    .push(ConnectorNode::new("fk", "Split", ConnectorKind::Fork));
                retarget(p, "fl1", "st1", "fk");
                p.flows.push(Flow::new("fk_op", "fk", "op1"));
                p.flows.push(Flow::new("fk_st", "fk", "st4"));
            }),
            expected: set(&[R10]),
        },
        Mutant {
            target: R11,
            description: "system boundary removed",
            model: collar(|ps| ps[0].system_boundary_id = None),
            expected: set(&[R11]),
        },
        Mutant {
            target: R12,
            description: "join with a single incoming flow between Collar and the operator",
            model: collar(|ps| {
                let p = &mut ps[0];
                p.connectors
                    .push(ConnectorNode::new("jn", "Gather", ConnectorKind::Join));
                retarget(p, "fl1", "st1", "jn");
                p.flows.push(Flow::new("jn_op", "jn", "op1"));
            }),
            expected: set(&[R12]),
        },
        Mutant {
            target: R13,
            description: "extra resource without usage",
            model: collar(|ps| ps[0].resources.push(TechnicalResource::new("spare", "Spare"))),
            expected: set(&[R13]),
        },
    ]
}
