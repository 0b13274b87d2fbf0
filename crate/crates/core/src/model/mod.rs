//! Typed representation of Formalised Process Description documents.
//!
//! A [`Model`] is built once from a list of [`Process`] values and is
//! immutable afterwards. Construction resolves every cross reference; the
//! derived queries in [`query`] assume a built model and never fail.

mod build;
pub mod query;

pub use build::BuildError;
pub use query::{BoundaryStates, FlowPath, OperatorIo};

use std::collections::HashMap;
use std::fmt;

/// Identification block shared by every named FPD element.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Identification {
    pub unique_ident: String,
    pub short_name: String,
    pub long_name: String,
    pub version_number: String,
    pub revision_number: String,
    /// Opaque identifiers of external artifacts. Never resolved.
    pub references: Vec<String>,
}

impl Identification {
    pub fn new(unique_ident: impl Into<String>, short_name: impl Into<String>) -> Self {
        Identification {
            unique_ident: unique_ident.into(),
            short_name: short_name.into(),
            ..Default::default()
        }
    }
}

/// A (possibly nested) feature description attached to an element.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Characteristic {
    pub identification: Identification,
    pub value: String,
    pub unit: String,
    pub children: Vec<Characteristic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateKind {
    Product,
    Energy,
    Information,
}

impl StateKind {
    pub const ALL: [StateKind; 3] = [StateKind::Product, StateKind::Energy, StateKind::Information];

    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Product => "Product",
            StateKind::Energy => "Energy",
            StateKind::Information => "Information",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        StateKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether a state lies on the system boundary or inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Placement {
    #[default]
    Boundary,
    Intermediate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateNode {
    pub identification: Identification,
    pub kind: StateKind,
    pub placement: Placement,
    pub characteristics: Vec<Characteristic>,
    /// Id of the corresponding state in a parent process, for decomposition.
    pub refines: Option<String>,
}

impl StateNode {
    pub fn new(id: impl Into<String>, name: impl Into<String>, kind: StateKind, placement: Placement) -> Self {
        StateNode {
            identification: Identification::new(id, name),
            kind,
            placement,
            characteristics: Vec::new(),
            refines: None,
        }
    }

    pub fn id(&self) -> &str {
        &self.identification.unique_ident
    }

    pub fn name(&self) -> &str {
        &self.identification.short_name
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessOperator {
    pub identification: Identification,
    pub characteristics: Vec<Characteristic>,
    /// Id of the sub-process this operator is refined into.
    pub decomposition: Option<String>,
}

impl ProcessOperator {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        ProcessOperator {
            identification: Identification::new(id, name),
            characteristics: Vec::new(),
            decomposition: None,
        }
    }

    pub fn id(&self) -> &str {
        &self.identification.unique_ident
    }

    pub fn name(&self) -> &str {
        &self.identification.short_name
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TechnicalResource {
    pub identification: Identification,
    pub characteristics: Vec<Characteristic>,
}

impl TechnicalResource {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        TechnicalResource {
            identification: Identification::new(id, name),
            characteristics: Vec::new(),
        }
    }

    pub fn id(&self) -> &str {
        &self.identification.unique_ident
    }

    pub fn name(&self) -> &str {
        &self.identification.short_name
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConnectorKind {
    Fork,
    Join,
    Decision,
    Merge,
}

impl ConnectorKind {
    pub const ALL: [ConnectorKind; 4] = [
        ConnectorKind::Fork,
        ConnectorKind::Join,
        ConnectorKind::Decision,
        ConnectorKind::Merge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConnectorKind::Fork => "Fork",
            ConnectorKind::Join => "Join",
            ConnectorKind::Decision => "Decision",
            ConnectorKind::Merge => "Merge",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        ConnectorKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for ConnectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fork/Join (parallel) or Decision/Merge (alternative) routing node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectorNode {
    pub identification: Identification,
    pub kind: ConnectorKind,
}

impl ConnectorNode {
    pub fn new(id: impl Into<String>, name: impl Into<String>, kind: ConnectorKind) -> Self {
        ConnectorNode {
            identification: Identification::new(id, name),
            kind,
        }
    }

    pub fn id(&self) -> &str {
        &self.identification.unique_ident
    }

    pub fn name(&self) -> &str {
        &self.identification.short_name
    }
}

/// Directed flow connection between two nodes of a process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl Flow {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Flow {
            id: id.into(),
            source: source.into(),
            target: target.into(),
        }
    }
}

/// Usage relationship between a process operator and a technical resource.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Usage {
    pub id: String,
    pub operator: String,
    pub resource: String,
}

impl Usage {
    pub fn new(id: impl Into<String>, operator: impl Into<String>, resource: impl Into<String>) -> Self {
        Usage {
            id: id.into(),
            operator: operator.into(),
            resource: resource.into(),
        }
    }
}

/// One FPD diagram: a system boundary and everything inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Process {
    pub identification: Identification,
    /// `None` when the process declares no boundary.
    pub system_boundary_id: Option<String>,
    pub states: Vec<StateNode>,
    pub operators: Vec<ProcessOperator>,
    pub resources: Vec<TechnicalResource>,
    pub connectors: Vec<ConnectorNode>,
    pub flows: Vec<Flow>,
    pub usages: Vec<Usage>,
}

impl Process {
    pub fn new(id: impl Into<String>, name: impl Into<String>, boundary_id: impl Into<String>) -> Self {
        Process {
            identification: Identification::new(id, name),
            system_boundary_id: Some(boundary_id.into()),
            states: Vec::new(),
            operators: Vec::new(),
            resources: Vec::new(),
            connectors: Vec::new(),
            flows: Vec::new(),
            usages: Vec::new(),
        }
    }

    pub fn id(&self) -> &str {
        &self.identification.unique_ident
    }

    pub fn name(&self) -> &str {
        &self.identification.short_name
    }

    pub fn state(&self, id: &str) -> Option<&StateNode> {
        self.states.iter().find(|s| s.id() == id)
    }

    pub fn operator(&self, id: &str) -> Option<&ProcessOperator> {
        self.operators.iter().find(|o| o.id() == id)
    }

    pub fn resource(&self, id: &str) -> Option<&TechnicalResource> {
        self.resources.iter().find(|r| r.id() == id)
    }

    pub fn connector(&self, id: &str) -> Option<&ConnectorNode> {
        self.connectors.iter().find(|c| c.id() == id)
    }

    /// Looks up any graph node (state, operator, resource or connector).
    pub fn node(&self, id: &str) -> Option<NodeRef<'_>> {
        self.state(id)
            .map(NodeRef::State)
            .or_else(|| self.operator(id).map(NodeRef::Operator))
            .or_else(|| self.resource(id).map(NodeRef::Resource))
            .or_else(|| self.connector(id).map(NodeRef::Connector))
    }

    pub fn node_kind(&self, id: &str) -> Option<NodeKind> {
        self.node(id).map(|n| n.kind())
    }

    pub fn outgoing<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Flow> + 'a {
        self.flows.iter().filter(move |f| f.source == id)
    }

    pub fn incoming<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Flow> + 'a {
        self.flows.iter().filter(move |f| f.target == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    State,
    Operator,
    Resource,
    Connector,
}

#[derive(Debug, Clone, Copy)]
pub enum NodeRef<'a> {
    State(&'a StateNode),
    Operator(&'a ProcessOperator),
    Resource(&'a TechnicalResource),
    Connector(&'a ConnectorNode),
}

impl<'a> NodeRef<'a> {
    pub fn kind(&self) -> NodeKind {
        match self {
            NodeRef::State(_) => NodeKind::State,
            NodeRef::Operator(_) => NodeKind::Operator,
            NodeRef::Resource(_) => NodeKind::Resource,
            NodeRef::Connector(_) => NodeKind::Connector,
        }
    }

    pub fn identification(&self) -> &'a Identification {
        match self {
            NodeRef::State(s) => &s.identification,
            NodeRef::Operator(o) => &o.identification,
            NodeRef::Resource(r) => &r.identification,
            NodeRef::Connector(c) => &c.identification,
        }
    }
}

/// A validated FPD document.
///
/// Holds one or more processes whose references all resolve, with unique
/// ids across the whole document and an acyclic decomposition graph.
#[derive(Debug, Clone)]
pub struct Model {
    processes: Vec<Process>,
    root_process_ids: Vec<String>,
    process_index: HashMap<String, usize>,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.processes == other.processes
    }
}

impl Eq for Model {}

impl Model {
    pub fn processes(&self) -> &[Process] {
        &self.processes
    }

    /// Processes that are not the decomposition target of any operator.
    pub fn root_process_ids(&self) -> &[String] {
        &self.root_process_ids
    }

    pub fn process(&self, id: &str) -> Option<&Process> {
        self.process_index.get(id).map(|&i| &self.processes[i])
    }

    pub fn into_processes(self) -> Vec<Process> {
        self.processes
    }

    pub fn decomposition_of(&self, operator: &ProcessOperator) -> Option<&Process> {
        operator.decomposition.as_deref().and_then(|id| self.process(id))
    }

    /// Every (process, operator) pair whose operator decomposes into `process_id`.
    pub fn parents_of<'a>(
        &'a self,
        process_id: &'a str,
    ) -> impl Iterator<Item = (&'a Process, &'a ProcessOperator)> + 'a {
        self.processes.iter().flat_map(move |p| {
            p.operators
                .iter()
                .filter(move |o| o.decomposition.as_deref() == Some(process_id))
                .map(move |o| (p, o))
        })
    }

    /// Longest chain of decompositions starting at `process_id`.
    pub fn decomposition_depth(&self, process_id: &str) -> usize {
        let Some(process) = self.process(process_id) else {
            return 0;
        };
        process
            .operators
            .iter()
            .filter_map(|o| self.decomposition_of(o))
            .map(|sub| 1 + self.decomposition_depth(sub.id()))
            .max()
            .unwrap_or(0)
    }

    /// True if `id` names a process, boundary, node, flow or usage.
    pub fn contains_id(&self, id: &str) -> bool {
        self.processes.iter().any(|p| {
            p.id() == id
                || p.system_boundary_id.as_deref() == Some(id)
                || p.node(id).is_some()
                || p.flows.iter().any(|f| f.id == id)
                || p.usages.iter().any(|u| u.id == id)
        })
    }
}
