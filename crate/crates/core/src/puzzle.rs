//! Parsons puzzle construction and grading.

use std::collections::HashMap;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

use crate::rng::SplitMix64;
use crate::source::SanitizedSolution;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockId(String);

impl BlockId {
    pub fn fresh() -> Self {
        BlockId(Uuid::new_v4().simple().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for BlockId {
    fn from(s: &str) -> Self {
        BlockId(s.to_string())
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeBlock {
    pub block_id: BlockId,
    pub text: String,
    pub indent_level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzleSpec {
    pub solution: Vec<CodeBlock>,
    pub presented_order: Vec<BlockId>,
    pub shuffle_seed: u64,
}

impl PuzzleSpec {
    pub fn new(solution: Vec<CodeBlock>, shuffle_seed: u64) -> Self {
        let presented_order = shuffle_blocks(&solution, shuffle_seed);
        Self { solution, presented_order, shuffle_seed }
    }

    pub fn block(&self, id: &BlockId) -> Option<&CodeBlock> {
        self.solution.iter().find(|b| &b.block_id == id)
    }

    /// Presented order expressed as solution positions, independent of ids.
    pub fn presented_positions(&self) -> Vec<usize> {
        let index: HashMap<&BlockId, usize> = self
            .solution
            .iter()
            .enumerate()
            .map(|(i, b)| (&b.block_id, i))
            .collect();
        self.presented_order.iter().map(|id| index[id]).collect()
    }

    /// The placements that reproduce the solution exactly.
    pub fn solved_attempt(&self) -> Attempt {
        Attempt {
            placements: self
                .solution
                .iter()
                .map(|b| Placement { block_id: b.block_id.clone(), indent_level: b.indent_level })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub block_id: BlockId,
    pub indent_level: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub placements: Vec<Placement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradeStatus {
    Solved,
    Incorrect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    Correct,
    WrongPosition,
    WrongIndent,
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeReport {
    pub status: GradeStatus,
    pub diagnostics: Vec<Diagnostic>,
    pub extra_blocks: Vec<BlockId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuzzleError {
    #[error("solution has no lines")]
    EmptySolution,
    #[error("block {0} is not part of this exercise")]
    UnknownBlock(BlockId),
    #[error("block {0} is placed more than once")]
    DuplicatePlacement(BlockId),
}

pub fn build_blocks(solution: &SanitizedSolution) -> Result<Vec<CodeBlock>, PuzzleError> {
    if solution.lines.is_empty() {
        return Err(PuzzleError::EmptySolution);
    }
    Ok(solution
        .lines
        .iter()
        .map(|l| CodeBlock {
            block_id: BlockId::fresh(),
            text: l.text.clone(),
            indent_level: l.indent_level,
        })
        .collect())
}

/// Seeded permutation of solution positions: Fisher-Yates from the last index
/// down over [`SplitMix64`]. An identity result for two or more blocks has its
/// first two entries swapped so the puzzle never starts solved.
pub fn shuffle_positions(len: usize, seed: u64) -> Vec<usize> {
    let mut rng = SplitMix64::new(seed);
    let mut order: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = rng.next_index(i + 1);
        order.swap(i, j);
    }
    if len >= 2 && order.iter().enumerate().all(|(i, &p)| i == p) {
        order.swap(0, 1);
    }
    order
}

pub fn shuffle_blocks(blocks: &[CodeBlock], seed: u64) -> Vec<BlockId> {
    shuffle_positions(blocks.len(), seed)
        .into_iter()
        .map(|p| blocks[p].block_id.clone())
        .collect()
}

/// Position-by-position comparison of the attempt's (text, indent) sequence
/// with the solution's. Blocks with identical text are interchangeable.
pub fn grade(puzzle: &PuzzleSpec, attempt: &Attempt) -> Result<GradeReport, PuzzleError> {
    let mut seen = HashSet::new();
    let mut placed = Vec::with_capacity(attempt.placements.len());
    for p in &attempt.placements {
        let block = puzzle
            .block(&p.block_id)
            .ok_or_else(|| PuzzleError::UnknownBlock(p.block_id.clone()))?;
        if !seen.insert(&p.block_id) {
            return Err(PuzzleError::DuplicatePlacement(p.block_id.clone()));
        }
        placed.push((block.text.as_str(), p.indent_level));
    }

    let diagnostics: Vec<Diagnostic> = puzzle
        .solution
        .iter()
        .enumerate()
        .map(|(i, expected)| match placed.get(i) {
            None => Diagnostic::Missing,
            Some(&(text, _)) if text != expected.text => Diagnostic::WrongPosition,
            Some(&(_, indent)) if indent != expected.indent_level => Diagnostic::WrongIndent,
            Some(_) => Diagnostic::Correct,
        })
        .collect();

    let status = if diagnostics.iter().all(|d| *d == Diagnostic::Correct) {
        GradeStatus::Solved
    } else {
        GradeStatus::Incorrect
    };
    Ok(GradeReport { status, diagnostics, extra_blocks: Vec::new() })
}

pub const SOLVED_MESSAGE: &str = "Correct — puzzle solved!";

pub fn render_feedback(report: &GradeReport) -> Vec<String> {
    if report.status == GradeStatus::Solved {
        return vec![SOLVED_MESSAGE.to_string()];
    }
    let mut messages: Vec<String> = report
        .diagnostics
        .iter()
        .enumerate()
        .filter_map(|(i, d)| {
            let problem = match d {
                Diagnostic::Correct => return None,
                Diagnostic::WrongIndent => "incorrect indentation",
                Diagnostic::WrongPosition => "this line is out of order",
                Diagnostic::Missing => "missing line",
            };
            Some(format!("Line {}: {}", i + 1, problem))
        })
        .collect();
    messages.extend(
        report
            .extra_blocks
            .iter()
            .map(|id| format!("Block {id} is not part of the solution")),
    );
    messages
}
