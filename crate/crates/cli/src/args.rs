use puzzlemaker_core::{ContextMode, RequestInput};

/// Parses a context argument: `none`, `surprise`, `custom:<text>`, or a
/// named catalog context.
pub fn parse_context(spec: &str) -> (ContextMode, Option<String>) {
    let trimmed = spec.trim();
    if trimmed.eq_ignore_ascii_case("none") {
        (ContextMode::None, None)
    } else if trimmed.eq_ignore_ascii_case("surprise") {
        (ContextMode::Surprise, None)
    } else if let Some(text) = trimmed.strip_prefix("custom:") {
        (ContextMode::Custom, Some(text.to_string()))
    } else {
        (ContextMode::Named, Some(trimmed.to_string()))
    }
}

/// Splits a concept set on commas outside parentheses, so full labels such
/// as `Selection statements (if/else, etc.)` survive.
pub fn split_concepts(set: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in set.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut current));
                continue;
            }
            _ => {}
        }
        current.push(ch);
    }
    out.push(current);
    out.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

pub fn request_input(context: &str, concepts: &str) -> RequestInput {
    let (mode, text) = parse_context(context);
    RequestInput { context_mode: Some(mode), context_text: text, concepts: split_concepts(concepts) }
}
