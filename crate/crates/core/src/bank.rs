//! Versioned exercise bank files produced by batch generation.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pipeline::{Exercise, ExerciseId};

pub const BANK_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankFailure {
    pub item: usize,
    pub context: String,
    pub concepts: Vec<String>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExerciseBankFile {
    pub version: u32,
    pub exercises: Vec<Exercise>,
    #[serde(default)]
    pub failures: Vec<BankFailure>,
}

#[derive(Debug, Error)]
pub enum BankError {
    #[error("cannot access bank file: {0}")]
    Io(#[from] std::io::Error),
    #[error("bank file is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported bank version {0} (expected {BANK_VERSION})")]
    Version(u32),
}

impl Default for ExerciseBankFile {
    fn default() -> Self {
        Self { version: BANK_VERSION, exercises: Vec::new(), failures: Vec::new() }
    }
}

impl ExerciseBankFile {
    pub fn find(&self, id: &ExerciseId) -> Option<&Exercise> {
        self.exercises.iter().find(|e| &e.exercise_id == id)
    }

    pub fn to_json(&self) -> Result<String, BankError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, BankError> {
        let bank: ExerciseBankFile = serde_json::from_str(text)?;
        if bank.version != BANK_VERSION {
            return Err(BankError::Version(bank.version));
        }
        Ok(bank)
    }

    pub fn save(&self, path: &Path) -> Result<(), BankError> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, BankError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
