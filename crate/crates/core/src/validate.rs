//! Acceptance checks for LLM-generated solutions.

use serde::{Deserialize, Serialize};

use crate::source::{
    count_code_lines, count_function_defs, extract_lines, find_banned, strip_comments,
    strip_fences, SanitizedSolution, StripWarning,
};

pub const DEFAULT_MAX_LINES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValidationFailure {
    TooManyLines,
    BannedConstruct,
    MultipleFunctions,
    EmptySolution,
    RaggedIndentation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    fn from_failures(failures: Vec<ValidationFailure>) -> Self {
        Self { passed: failures.is_empty(), failures }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validated {
    pub solution: SanitizedSolution,
    pub report: ValidationReport,
}

/// Fences, then comments, then line extraction, then the content rules.
/// Never errors: every problem lands in the report.
pub fn validate_solution(raw: &str, max_lines: usize) -> Result<Validated, ValidationReport> {
    let stripped = strip_comments(&strip_fences(raw));
    for StripWarning::UnterminatedString { line } in &stripped.warnings {
        tracing::warn!(line, "generated solution has an unterminated string literal");
    }
    let solution = match extract_lines(&stripped.text) {
        Ok(s) => s,
        Err(_) => {
            return Err(ValidationReport::from_failures(vec![ValidationFailure::RaggedIndentation]))
        }
    };

    let mut failures = Vec::new();
    let lines = count_code_lines(&solution);
    if lines == 0 {
        failures.push(ValidationFailure::EmptySolution);
    }
    if lines > max_lines {
        failures.push(ValidationFailure::TooManyLines);
    }
    if !find_banned(&solution).is_empty() {
        failures.push(ValidationFailure::BannedConstruct);
    }
    if count_function_defs(&solution) > 1 {
        failures.push(ValidationFailure::MultipleFunctions);
    }

    let report = ValidationReport::from_failures(failures);
    if report.passed {
        Ok(Validated { solution, report })
    } else {
        Err(report)
    }
}
