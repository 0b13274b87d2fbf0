//! The collar-screwing example, shipped as `.fpd` sources.

use crate::model::Model;
use crate::script;

/// Single-process collar screwing model. Validates clean.
pub const COLLAR_FPD: &str = include_str!("../fixtures/collar.fpd");

/// Two-level variant whose operator is decomposed into a sub-process.
pub const COLLAR_DECOMPOSED_FPD: &str = include_str!("../fixtures/collar_decomposed.fpd");

pub fn collar() -> Model {
    script::parse(COLLAR_FPD).expect("collar fixture parses")
}

pub fn collar_decomposed() -> Model {
    script::parse(COLLAR_DECOMPOSED_FPD).expect("decomposed collar fixture parses")
}
