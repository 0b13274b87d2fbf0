use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{Characteristic, Model, NodeKind, Process};

/// Structural defects that prevent a [`Model`] from being built.
///
/// These are distinct from rule violations: a model that builds may still
/// break well-formedness rules, which are reported as diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("a model needs at least one process")]
    NoProcess,
    #[error("empty identifier on {0}")]
    EmptyId(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("reference to unknown element `{0}`")]
    DanglingReference(String),
    #[error("flow `{0}` connects an element to itself")]
    SelfLoop(String),
    #[error("flow `{flow}` cannot attach to technical resource `{endpoint}`")]
    InvalidEndpoint { flow: String, endpoint: String },
    #[error("decomposition cycle: {}", .0.join(" -> "))]
    DecompositionCycle(Vec<String>),
}

impl Model {
    /// Resolves and checks a set of processes, producing an immutable model.
    pub fn build(processes: Vec<Process>) -> Result<Model, BuildError> {
        if processes.is_empty() {
            return Err(BuildError::NoProcess);
        }
        check_ids(&processes)?;
        for process in &processes {
            check_edges(process)?;
        }

        let process_index: HashMap<String, usize> = processes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id().to_owned(), i))
            .collect();
        for process in &processes {
            for op in &process.operators {
                if let Some(target) = &op.decomposition {
                    if !process_index.contains_key(target) {
                        return Err(BuildError::DanglingReference(target.clone()));
                    }
                }
            }
        }
        check_decomposition_acyclic(&processes, &process_index)?;

        let model = Model {
            root_process_ids: processes
                .iter()
                .filter(|p| {
                    !processes
                        .iter()
                        .flat_map(|q| &q.operators)
                        .any(|o| o.decomposition.as_deref() == Some(p.id()))
                })
                .map(|p| p.id().to_owned())
                .collect(),
            processes,
            process_index,
        };
        check_refines(&model)?;
        Ok(model)
    }
}

fn check_ids<'a>(processes: &'a [Process]) -> Result<(), BuildError> {
    let mut seen: HashSet<&str> = HashSet::new();
    let mut insert = |id: &'a str, what: &str| -> Result<(), BuildError> {
        if id.is_empty() {
            return Err(BuildError::EmptyId(what.to_owned()));
        }
        if !seen.insert(id) {
            return Err(BuildError::DuplicateId(id.to_owned()));
        }
        Ok(())
    };

    for p in processes {
        insert(p.id(), "process")?;
        if let Some(b) = &p.system_boundary_id {
            insert(b, &format!("system boundary of process `{}`", p.id()))?;
        }
        for s in &p.states {
            insert(s.id(), &format!("state `{}`", s.name()))?;
            check_characteristics(&s.characteristics)?;
        }
        for o in &p.operators {
            insert(o.id(), &format!("process operator `{}`", o.name()))?;
            check_characteristics(&o.characteristics)?;
        }
        for r in &p.resources {
            insert(r.id(), &format!("technical resource `{}`", r.name()))?;
            check_characteristics(&r.characteristics)?;
        }
        for c in &p.connectors {
            insert(c.id(), &format!("connector `{}`", c.name()))?;
        }
        for f in &p.flows {
            insert(&f.id, &format!("flow `{} -> {}`", f.source, f.target))?;
        }
        for u in &p.usages {
            insert(&u.id, &format!("usage `{} -- {}`", u.operator, u.resource))?;
        }
    }
    Ok(())
}

/// Characteristic ids only need to be unique among siblings.
fn check_characteristics(chars: &[Characteristic]) -> Result<(), BuildError> {
    let mut seen = HashSet::new();
    for c in chars {
        let id = c.identification.unique_ident.as_str();
        if id.is_empty() {
            return Err(BuildError::EmptyId(format!(
                "characteristic `{}`",
                c.identification.short_name
            )));
        }
        if !seen.insert(id) {
            return Err(BuildError::DuplicateId(id.to_owned()));
        }
        check_characteristics(&c.children)?;
    }
    Ok(())
}

fn check_edges(process: &Process) -> Result<(), BuildError> {
    for flow in &process.flows {
        for end in [&flow.source, &flow.target] {
            match process.node_kind(end) {
                None => return Err(BuildError::DanglingReference(end.clone())),
                Some(NodeKind::Resource) => {
                    return Err(BuildError::InvalidEndpoint {
                        flow: flow.id.clone(),
                        endpoint: end.clone(),
                    })
                }
                Some(_) => {}
            }
        }
        if flow.source == flow.target {
            return Err(BuildError::SelfLoop(flow.id.clone()));
        }
    }
    // Usage endpoint kinds are a rule concern; only resolution is enforced here.
    for usage in &process.usages {
        for end in [&usage.operator, &usage.resource] {
            if process.node(end).is_none() {
                return Err(BuildError::DanglingReference(end.clone()));
            }
        }
    }
    Ok(())
}

fn check_decomposition_acyclic(processes: &[Process], index: &HashMap<String, usize>) -> Result<(), BuildError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Unvisited,
        Active,
        Done,
    }

    fn visit(
        i: usize,
        processes: &[Process],
        index: &HashMap<String, usize>,
        marks: &mut [Mark],
        stack: &mut Vec<usize>,
    ) -> Result<(), BuildError> {
        marks[i] = Mark::Active;
        stack.push(i);
        for op in &processes[i].operators {
            let Some(j) = op.decomposition.as_deref().and_then(|t| index.get(t)).copied() else {
                continue;
            };
            match marks[j] {
                Mark::Active => {
                    let start = stack.iter().position(|&k| k == j).unwrap_or(0);
                    let mut path: Vec<String> = stack[start..].iter().map(|&k| processes[k].id().to_owned()).collect();
                    path.push(processes[j].id().to_owned());
                    return Err(BuildError::DecompositionCycle(path));
                }
                Mark::Unvisited => visit(j, processes, index, marks, stack)?,
                Mark::Done => {}
            }
        }
        stack.pop();
        marks[i] = Mark::Done;
        Ok(())
    }

    let mut marks = vec![Mark::Unvisited; processes.len()];
    let mut stack = Vec::new();
    for i in 0..processes.len() {
        if marks[i] == Mark::Unvisited {
            visit(i, processes, index, &mut marks, &mut stack)?;
        }
    }
    Ok(())
}

fn check_refines(model: &Model) -> Result<(), BuildError> {
    for process in model.processes() {
        for state in &process.states {
            let Some(target) = &state.refines else {
                continue;
            };
            let resolves = model
                .parents_of(process.id())
                .any(|(parent, _)| parent.state(target).is_some());
            if !resolves {
                return Err(BuildError::DanglingReference(target.clone()));
            }
        }
    }
    Ok(())
}
