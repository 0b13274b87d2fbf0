//! Formalised Process Description (VDI/VDE 3682) toolkit.
//!
//! - [`model`]: typed process models with reference-checked construction
//!   and derived queries (boundary states, operator I/O, flow paths).
//! - [`rules`]: the well-formedness rule catalog and its evaluation engine.
//! - [`xml`]: XML interchange serializer, deserializer and canonicalizer.
//! - [`script`]: the `.fpd` text format, parser and canonical printer.
//! - [`fixtures`]: the collar-screwing example models.

pub mod fixtures;
pub mod model;
pub mod rules;
pub mod script;
pub mod xml;

pub use model::{
    BuildError, Characteristic, ConnectorKind, ConnectorNode, Flow, FlowPath, Identification, Model, Placement,
    Process, ProcessOperator, StateKind, StateNode, TechnicalResource, Usage,
};
pub use rules::{check_rule, list_rules, validate, Diagnostic, RuleConfig, RuleId, Severity};
