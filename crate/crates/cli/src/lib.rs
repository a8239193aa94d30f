//! Operator commands behind the `puzzlemaker` binary.

pub mod args;
pub mod generate;
pub mod report;

use std::path::Path;

use thiserror::Error;

use puzzlemaker_core::bank::ExerciseBankFile;
use puzzlemaker_core::puzzle::{grade, GradeReport};
use puzzlemaker_core::{Attempt, ExerciseId};

/// Exit codes: 1 for a negative result, 2 for usage, input or config errors.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        Self::Usage(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

/// Grades an attempt file against an exercise from a bank.
pub fn grade_from_bank(bank: &Path, exercise_id: &str, attempt: &Path) -> Result<GradeReport, CliError> {
    let bank = ExerciseBankFile::load(bank).map_err(CliError::usage)?;
    let exercise = bank
        .find(&ExerciseId::from(exercise_id))
        .ok_or_else(|| CliError::Usage(format!("no exercise {exercise_id} in bank")))?;
    let text = std::fs::read_to_string(attempt)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", attempt.display())))?;
    let attempt: Attempt = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid attempt {}: {e}", attempt.display())))?;
    grade(&exercise.puzzle, &attempt).map_err(CliError::usage)
}
