//! Zero-shot prompt templates for the statement and solution requests.

use thiserror::Error;

use crate::request::{ContextMode, GenerationRequest};

const CONSTRAINTS: &str = "The solution associated with the problem should not exceed ten lines of code and should be limited to only a single function at most.\n\n\
The problem cannot use while(true), or any break statements or exceptions (try, catch blocks).\n\n\
Do not include information on the constraints I have defined in the problem statement.\n\n\
Only provide the problem statement as the output.";

const SOLUTION_INSTRUCTIONS: &str = "Only provide code solutions based on the problem description above.\n\n\
Do not explain the solution or add any extra detail to the output; only provide the code solution.";

/// Marker that identifies a solution prompt.
pub const SOLUTION_PROMPT_MARKER: &str = "Only provide code solutions based on the problem description above.";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("surprise context has not been resolved")]
    UnresolvedSurprise,
    #[error("context text missing for mode {0:?}")]
    MissingContext(ContextMode),
    #[error("problem statement is blank")]
    BlankStatement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptBundle {
    pub description_prompt: String,
    pub solution_prompt: Option<String>,
}

/// Statement prompt with a context woven in.
pub fn contextual_prompt(context: &str, concepts: &[String]) -> String {
    format!(
        "Generate a problem in Python that only includes a problem statement with a context of \u{2018}{context},\u{2019} and the programming concepts should be \u{2018}{}\u{2019}.\n\n{CONSTRAINTS}",
        concepts.join(", ")
    )
}

/// Statement prompt for requests without a context.
pub fn context_free_prompt(concepts: &[String]) -> String {
    format!(
        "Generate a problem in Python that only includes a problem statement with the following programming concepts: \u{2018}{}.\u{2019} Do not apply a context to the exercise.\n\n{CONSTRAINTS}",
        concepts.join(", ")
    )
}

/// `context` is the resolved context; for surprise requests it comes from the
/// topic catalog, otherwise it is the request's own context text.
pub fn build_description_prompt(
    req: &GenerationRequest,
    context: Option<&str>,
) -> Result<String, PromptError> {
    let context = context.or(req.context_text.as_deref());
    match req.context_mode {
        ContextMode::None => Ok(context_free_prompt(&req.concepts)),
        ContextMode::Surprise => context
            .map(|c| contextual_prompt(c, &req.concepts))
            .ok_or(PromptError::UnresolvedSurprise),
        mode @ (ContextMode::Named | ContextMode::Custom) => context
            .map(|c| contextual_prompt(c, &req.concepts))
            .ok_or(PromptError::MissingContext(mode)),
    }
}

pub fn build_solution_prompt(statement: &str) -> Result<String, PromptError> {
    if statement.trim().is_empty() {
        return Err(PromptError::BlankStatement);
    }
    Ok(format!("{statement}\n\n{SOLUTION_INSTRUCTIONS}"))
}

pub fn is_solution_prompt(prompt: &str) -> bool {
    prompt.contains(SOLUTION_PROMPT_MARKER)
}

/// Trims the statement and removes one layer of wrapping quotes or a code
/// fence. The wording itself is left alone.
pub fn clean_statement(raw: &str) -> String {
    let mut s = raw.trim();
    if s.starts_with("```") {
        let inner = crate::source::strip_fences(s);
        return inner.trim().to_string();
    }
    for (open, close) in [("\"", "\""), ("'", "'"), ("\u{201c}", "\u{201d}"), ("\u{2018}", "\u{2019}")] {
        if s.len() > open.len() + close.len() && s.starts_with(open) && s.ends_with(close) {
            let inner = &s[open.len()..s.len() - close.len()];
            if !inner.contains(open) && !inner.contains(close) {
                s = inner.trim();
            }
            break;
        }
    }
    s.to_string()
}
