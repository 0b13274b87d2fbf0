#![allow(dead_code)]

pub mod gen;
pub mod mutants;
pub mod oracle;

use std::collections::BTreeSet;

use fpd_core::{validate, Model, RuleConfig, RuleId};

/// Rules that report at least one diagnostic under the default config.
pub fn fired(model: &Model) -> BTreeSet<RuleId> {
    validate(model, &RuleConfig::default())
        .into_iter()
        .map(|d| d.rule)
        .collect()
}
