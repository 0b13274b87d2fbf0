//! Well-formedness rule catalog and the engine that evaluates it.
//!
//! Each rule is a pure function over a built [`Model`]. [`validate`] runs
//! every enabled rule and orders the resulting diagnostics by
//! `(process id, rule, first element id)`.

mod checks;

pub use checks::STATE_TO_STATE_MESSAGE;

use std::fmt;
use std::str::FromStr;

use crate::model::Model;

/// Stable rule identifiers. Never renumbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
}

impl RuleId {
    pub const ALL: [RuleId; 13] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
        RuleId::R12,
        RuleId::R13,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn code(self) -> &'static str {
        CATALOG[self.index()].code
    }

    pub fn name(self) -> &'static str {
        CATALOG[self.index()].name
    }

    pub fn description(self) -> &'static str {
        CATALOG[self.index()].description
    }

    pub fn default_severity(self) -> Severity {
        CATALOG[self.index()].default_severity
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownRule(pub String);

impl fmt::Display for UnknownRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown rule `{}`", self.0)
    }
}

impl std::error::Error for UnknownRule {}

impl FromStr for RuleId {
    type Err = UnknownRule;

    /// Accepts either the code (`R4`, case-insensitive) or the rule name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        RuleId::ALL
            .into_iter()
            .find(|r| r.code().eq_ignore_ascii_case(t) || r.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| UnknownRule(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Severity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "error" => Ok(Severity::Error),
            "warning" | "warn" => Ok(Severity::Warning),
            other => Err(format!("unknown severity `{other}`")),
        }
    }
}

/// Static description of one catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleInfo {
    pub id: RuleId,
    pub code: &'static str,
    pub name: &'static str,
    pub description: &'static str,
    pub default_severity: Severity,
}

const fn info(id: RuleId, code: &'static str, name: &'static str, description: &'static str) -> RuleInfo {
    RuleInfo {
        id,
        code,
        name,
        description,
        default_severity: Severity::Error,
    }
}

static CATALOG: [RuleInfo; 13] = [
    info(
        RuleId::R1,
        "R1",
        "FLOW_STATE_TO_STATE",
        "No flow may connect a state to another state; states are always linked through a process operator.",
    ),
    info(
        RuleId::R2,
        "R2",
        "PROC_HAS_OPERATOR",
        "Every process contains at least one process operator.",
    ),
    info(
        RuleId::R3,
        "R3",
        "STATE_ASSIGNED",
        "Every state is connected by a flow path to at least one process operator.",
    ),
    info(
        RuleId::R4,
        "R4",
        "PROC_MIN_STATES",
        "Every process has at least two states, including at least one boundary input and one boundary output.",
    ),
    info(
        RuleId::R5,
        "R5",
        "BOUNDARY_STATE_DIRECTION",
        "A state on the system boundary has flows in exactly one direction.",
    ),
    info(
        RuleId::R6,
        "R6",
        "INTERMEDIATE_STATE_BOTH",
        "An intermediate state has at least one incoming and one outgoing flow.",
    ),
    info(
        RuleId::R7,
        "R7",
        "OPERATOR_IO",
        "Every process operator has at least one input state and one output state.",
    ),
    info(
        RuleId::R8,
        "R8",
        "USAGE_ENDPOINTS",
        "Every usage joins exactly one process operator and one technical resource.",
    ),
    info(
        RuleId::R9,
        "R9",
        "DECOMP_CONSISTENCY",
        "Boundary states of a sub-process correspond to inputs/outputs of the decomposed operator with the same state kind.",
    ),
    info(
        RuleId::R10,
        "R10",
        "FLOW_ALTERNATION",
        "Every flow path through connector nodes runs from a state to an operator or from an operator to a state.",
    ),
    info(
        RuleId::R11,
        "R11",
        "PROC_HAS_BOUNDARY",
        "Every process declares exactly one system boundary.",
    ),
    info(
        RuleId::R12,
        "R12",
        "CONNECTOR_ARITY",
        "Fork and Decision take one incoming and at least two outgoing flows; Join and Merge take at least two incoming and one outgoing flow.",
    ),
    RuleInfo {
        default_severity: Severity::Warning,
        ..info(
            RuleId::R13,
            "R13",
            "RESOURCE_USED",
            "Every technical resource participates in at least one usage.",
        )
    },
];

/// The full rule catalog in rule order.
pub fn list_rules() -> &'static [RuleInfo] {
    &CATALOG
}

/// One rule violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: RuleId,
    pub severity: Severity,
    pub message: String,
    /// Offending element ids; never empty.
    pub elements: Vec<String>,
    pub process_id: String,
}

/// Which rules run, and at which severity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleConfig {
    enabled: [bool; 13],
    severity: [Option<Severity>; 13],
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            enabled: [true; 13],
            severity: [None; 13],
        }
    }
}

impl RuleConfig {
    /// Only the given rules enabled.
    pub fn only(rules: impl IntoIterator<Item = RuleId>) -> Self {
        let mut config = RuleConfig {
            enabled: [false; 13],
            ..Default::default()
        };
        for r in rules {
            config.enabled[r.index()] = true;
        }
        config
    }

    pub fn set_enabled(&mut self, rule: RuleId, enabled: bool) -> &mut Self {
        self.enabled[rule.index()] = enabled;
        self
    }

    pub fn set_severity(&mut self, rule: RuleId, severity: Severity) -> &mut Self {
        self.severity[rule.index()] = Some(severity);
        self
    }

    pub fn is_enabled(&self, rule: RuleId) -> bool {
        self.enabled[rule.index()]
    }

    pub fn severity(&self, rule: RuleId) -> Severity {
        self.severity[rule.index()].unwrap_or(rule.default_severity())
    }
}

/// Evaluates every enabled rule.
pub fn validate(model: &Model, config: &RuleConfig) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = RuleId::ALL
        .into_iter()
        .filter(|&r| config.is_enabled(r))
        .flat_map(|r| {
            let severity = config.severity(r);
            checks::run(model, r).into_iter().map(move |mut d| {
                d.severity = severity;
                d
            })
        })
        .collect();
    sort(&mut out);
    out
}

/// Diagnostics of a single rule at its default severity.
pub fn check_rule(model: &Model, rule: RuleId) -> Vec<Diagnostic> {
    let mut out = checks::run(model, rule);
    sort(&mut out);
    out
}

fn sort(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        (a.process_id.as_str(), a.rule, a.elements.first()).cmp(&(b.process_id.as_str(), b.rule, b.elements.first()))
    });
}
