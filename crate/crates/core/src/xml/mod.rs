//! XML interchange format.
//!
//! ```xml
//! <fpd>
//!     <process id="p" shortName="Collar Screwing">
//!         <systemLimit id="sb" shortName="Collar Screwing" />
//!         <states>
//!             <state stateType="Product">
//!                 <identification uniqueIdent="s1" shortName="Collar" longName="" versionNumber="" revisionNumber="">
//!                     <references></references>
//!                 </identification>
//!                 <characteristics></characteristics>
//!                 <assignments>
//!                     <assigned id="op1" />
//!                 </assignments>
//!                 <flows>
//!                     <flow>
//!                         <exit id="f1" />
//!                     </flow>
//!                 </flows>
//!             </state>
//!         </states>
//!         <processOperators>...</processOperators>
//!         <technicalResources>...</technicalResources>
//!         <connectors>...</connectors>
//!         <flows>
//!             <flow id="f1" sourceRef="s1" targetRef="op1" />
//!         </flows>
//!         <usages>...</usages>
//!     </process>
//! </fpd>
//! ```
//!
//! `processOperators`, `technicalResources`, `connectors`, the process-level
//! `flows` and `usages` sections and the `placement`/`refines` attributes on
//! `state` are extensions of the published state layout. A bare `<process>`
//! root is accepted on input.

mod read;
mod tree;
mod write;

use std::fmt;

use thiserror::Error;

use crate::model::{BuildError, Model};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XmlError {
    #[error("{line}:{col}: malformed XML: {message}")]
    Markup { line: usize, col: usize, message: String },
    #[error("{path}: {reason}")]
    Schema { path: String, reason: String },
    #[error(transparent)]
    Model(#[from] BuildError),
}

/// Schema problem tolerated in [`Mode::Lenient`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlWarning {
    pub path: String,
    pub message: String,
}

impl fmt::Display for XmlWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Unknown elements and attributes, and derived data that disagrees
    /// with the model, are errors.
    #[default]
    Strict,
    /// Such content is skipped and reported as a warning.
    Lenient,
}

/// Renders a model as a canonical interchange document.
pub fn serialize(model: &Model) -> String {
    tree::write(&write::model_tree(model))
}

/// Reads a document in strict mode.
pub fn deserialize(text: &str) -> Result<Model, XmlError> {
    deserialize_with(text, Mode::Strict).map(|(model, _)| model)
}

pub fn deserialize_with(text: &str, mode: Mode) -> Result<(Model, Vec<XmlWarning>), XmlError> {
    let root = tree::parse(text)?;
    let mut reader = read::TreeReader::new(mode);
    let model = reader.document(&root)?;
    Ok((model, reader.warnings))
}

/// Normalizes a document.
///
/// A document that reads cleanly in strict mode canonicalizes to the
/// serialization of its model. Anything else that is well-formed is only
/// reindented, has its attributes put in serializer order and, if it has a
/// bare `<process>` root, is wrapped in `<fpd>`.
pub fn canonicalize(text: &str) -> Result<String, XmlError> {
    let root = tree::parse(text)?;
    if let Ok(model) = read::TreeReader::new(Mode::Strict).document(&root) {
        return Ok(serialize(&model));
    }
    let root = if root.name == "process" {
        tree::Element::new("fpd").child(root)
    } else {
        root
    };
    Ok(tree::write(&root))
}
