//! Predefined contexts, programming concepts and surprise topics.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::request::{ContextMode, GenerationRequest};
use crate::rng::SplitMix64;

pub const CONTEXTS: [&str; 20] = [
    "Amusement Park",
    "Animals",
    "Aquarium",
    "Basketball",
    "Cooking",
    "Film",
    "Fishing",
    "Gardening",
    "Mental Health",
    "Modern Gaming",
    "Music",
    "Olympics",
    "Pets",
    "Relationships",
    "Restaurant",
    "Rugby",
    "Social Media",
    "Sports",
    "Streaming Services",
    "Virtual Reality",
];

pub const CONCEPTS: [&str; 8] = [
    "Arithmetic operators",
    "Dictionaries",
    "File handling & I/O",
    "Lists",
    "Loops",
    "Selection statements (if/else, etc.)",
    "Strings",
    "Variables",
];

pub const MAX_CONCEPTS: usize = 3;
pub const MAX_CUSTOM_CONTEXT_CHARS: usize = 100;

pub const BUILTIN_SURPRISE_TOPICS: &str = include_str!("../data/surprise_topics.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("at least one programming concept is required")]
    NoConcepts,
    #[error("at most {MAX_CONCEPTS} programming concepts may be selected, got {0}")]
    TooManyConcepts(usize),
    #[error("unknown programming concept {0:?}")]
    UnknownConcept(String),
    #[error("unknown context {0:?}")]
    UnknownNamedContext(String),
    #[error("a context is required for this mode")]
    MissingContext,
    #[error("custom context is empty")]
    EmptyCustomContext,
    #[error("custom context exceeds {MAX_CUSTOM_CONTEXT_CHARS} characters")]
    CustomContextTooLong,
    #[error("custom context contains control characters")]
    InvalidCustomContext,
    #[error("context text is not accepted for mode {0:?}")]
    UnexpectedContext(ContextMode),
    #[error("no surprise topics are configured")]
    SurpriseUnavailable,
    #[error("cannot read topic file: {0}")]
    TopicFile(String),
}

impl CatalogError {
    /// Stable machine-readable code used in API error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Self::NoConcepts => "NoConcepts",
            Self::TooManyConcepts(_) => "TooManyConcepts",
            Self::UnknownConcept(_) => "UnknownConcept",
            Self::UnknownNamedContext(_) => "UnknownNamedContext",
            Self::MissingContext => "MissingContext",
            Self::EmptyCustomContext => "EmptyCustomContext",
            Self::CustomContextTooLong => "CustomContextTooLong",
            Self::InvalidCustomContext => "InvalidCustomContext",
            Self::UnexpectedContext(_) => "UnexpectedContext",
            Self::SurpriseUnavailable => "SurpriseUnavailable",
            Self::TopicFile(_) => "TopicFile",
        }
    }
}

/// Unvalidated request fields as received from a client.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, serde::Serialize)]
pub struct RequestInput {
    pub context_mode: Option<ContextMode>,
    #[serde(default)]
    pub context_text: Option<String>,
    #[serde(default)]
    pub concepts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    contexts: Vec<String>,
    concepts: Vec<String>,
    surprise_topics: Vec<String>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self::with_topics(parse_topics(BUILTIN_SURPRISE_TOPICS))
    }
}

/// One topic per line; blank lines and `#` comment lines are skipped.
pub fn parse_topics(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn concept_matches(label: &str, input: &str) -> bool {
    let short = label.split(" (").next().unwrap_or(label);
    label.eq_ignore_ascii_case(input) || short.eq_ignore_ascii_case(input)
}

impl Catalog {
    pub fn with_topics(surprise_topics: Vec<String>) -> Self {
        Self {
            contexts: CONTEXTS.iter().map(|s| s.to_string()).collect(),
            concepts: CONCEPTS.iter().map(|s| s.to_string()).collect(),
            surprise_topics,
        }
    }

    pub fn from_topics_file(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::TopicFile(format!("{}: {e}", path.display())))?;
        Ok(Self::with_topics(parse_topics(&text)))
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    pub fn concepts(&self) -> &[String] {
        &self.concepts
    }

    pub fn surprise_topics(&self) -> &[String] {
        &self.surprise_topics
    }

    pub fn named_context(&self, text: &str) -> Result<&str, CatalogError> {
        let text = text.trim();
        self.contexts
            .iter()
            .find(|c| c.eq_ignore_ascii_case(text))
            .map(String::as_str)
            .ok_or_else(|| CatalogError::UnknownNamedContext(text.to_string()))
    }

    /// Case-insensitive match against the catalog, deduplicated with the
    /// first occurrence's position kept.
    pub fn validate_concepts<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<String>, CatalogError> {
        let mut out: Vec<String> = Vec::new();
        for raw in labels {
            let raw = raw.as_ref().trim();
            let label = self
                .concepts
                .iter()
                .find(|c| concept_matches(c, raw))
                .ok_or_else(|| CatalogError::UnknownConcept(raw.to_string()))?;
            if !out.contains(label) {
                out.push(label.clone());
            }
        }
        match out.len() {
            0 => Err(CatalogError::NoConcepts),
            n if n > MAX_CONCEPTS => Err(CatalogError::TooManyConcepts(n)),
            _ => Ok(out),
        }
    }

    pub fn validate_request(&self, input: &RequestInput) -> Result<GenerationRequest, CatalogError> {
        let mode = input.context_mode.unwrap_or(ContextMode::None);
        let text = input.context_text.as_deref();
        let context_text = match mode {
            ContextMode::Named => {
                Some(self.named_context(text.ok_or(CatalogError::MissingContext)?)?.to_string())
            }
            ContextMode::Custom => Some(sanitize_custom_context(
                text.ok_or(CatalogError::EmptyCustomContext)?,
            )?),
            ContextMode::None | ContextMode::Surprise => {
                if text.is_some_and(|t| !t.trim().is_empty()) {
                    return Err(CatalogError::UnexpectedContext(mode));
                }
                if mode == ContextMode::Surprise && self.surprise_topics.is_empty() {
                    return Err(CatalogError::SurpriseUnavailable);
                }
                None
            }
        };
        let concepts = self.validate_concepts(&input.concepts)?;
        Ok(GenerationRequest { context_mode: mode, context_text, concepts })
    }

    /// The concrete context that goes into the prompt, if any.
    pub fn resolve_context(
        &self,
        mode: ContextMode,
        context_text: Option<&str>,
        seed: u64,
    ) -> Result<Option<String>, CatalogError> {
        match mode {
            ContextMode::Named => self
                .named_context(context_text.ok_or(CatalogError::MissingContext)?)
                .map(|c| Some(c.to_string())),
            ContextMode::Custom => {
                sanitize_custom_context(context_text.ok_or(CatalogError::EmptyCustomContext)?)
                    .map(Some)
            }
            ContextMode::None => Ok(None),
            ContextMode::Surprise => {
                if self.surprise_topics.is_empty() {
                    return Err(CatalogError::SurpriseUnavailable);
                }
                let idx = SplitMix64::new(seed).next_index(self.surprise_topics.len());
                Ok(Some(self.surprise_topics[idx].clone()))
            }
        }
    }
}

/// Trims, collapses internal whitespace, rejects control characters and caps
/// the length.
pub fn sanitize_custom_context(text: &str) -> Result<String, CatalogError> {
    if text.chars().any(|c| c.is_control() && !c.is_whitespace()) {
        return Err(CatalogError::InvalidCustomContext);
    }
    let collapsed = text.split_whitespace().collect::<Vec<_>>().join(" ");
    if collapsed.is_empty() {
        return Err(CatalogError::EmptyCustomContext);
    }
    if collapsed.chars().count() > MAX_CUSTOM_CONTEXT_CHARS {
        return Err(CatalogError::CustomContextTooLong);
    }
    Ok(collapsed)
}
