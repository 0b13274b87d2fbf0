use crate::model::{ConnectorKind, StateKind};

use super::SourceSpan;

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub value: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Attrs {
    pub id: Option<Spanned>,
    pub boundary: Option<Spanned>,
    pub long: Option<Spanned>,
    pub version: Option<Spanned>,
    pub revision: Option<Spanned>,
    pub refs: Vec<String>,
}

#[derive(Debug, Clone)]
pub(crate) struct ProcessDecl {
    pub name: Spanned,
    pub attrs: Attrs,
    pub unbounded: bool,
    pub span: SourceSpan,
    pub decls: Vec<Decl>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    In,
    Out,
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DeclKind {
    State(StateKind),
    Operator,
    Resource,
    Connector(ConnectorKind),
}

#[derive(Debug, Clone)]
pub(crate) struct NodeDecl {
    pub kind: DeclKind,
    pub name: Spanned,
    pub attrs: Attrs,
    pub direction: Option<Direction>,
    pub refines: Option<Spanned>,
    pub decompose: Option<Spanned>,
    pub chars: Vec<CharDecl>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EdgeKind {
    Flow,
    Usage,
}

#[derive(Debug, Clone)]
pub(crate) struct EdgeDecl {
    pub kind: EdgeKind,
    pub from: Spanned,
    pub to: Spanned,
    pub id: Option<Spanned>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub(crate) enum Decl {
    Node(NodeDecl),
    Edge(EdgeDecl),
}

#[derive(Debug, Clone)]
pub(crate) struct CharDecl {
    pub name: Spanned,
    pub attrs: Attrs,
    pub value: String,
    pub unit: String,
    pub children: Vec<CharDecl>,
    pub span: SourceSpan,
}
