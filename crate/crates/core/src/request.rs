use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextMode {
    Named,
    Custom,
    None,
    Surprise,
}

impl ContextMode {
    pub const ALL: [ContextMode; 4] = [Self::Named, Self::Custom, Self::None, Self::Surprise];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Named => "named",
            Self::Custom => "custom",
            Self::None => "none",
            Self::Surprise => "surprise",
        }
    }
}

/// A validated personalization choice. Build one through
/// [`Catalog::validate_request`](crate::catalog::Catalog::validate_request).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub context_mode: ContextMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context_text: Option<String>,
    pub concepts: Vec<String>,
}

impl GenerationRequest {
    /// The context label recorded in the request log: the catalog label for
    /// named contexts, otherwise the mode's display name.
    pub fn logged_label(&self) -> String {
        logged_label(self.context_mode, self.context_text.as_deref())
    }
}

pub fn logged_label(mode: ContextMode, context_text: Option<&str>) -> String {
    match mode {
        ContextMode::Named => context_text.unwrap_or("").to_string(),
        ContextMode::Custom => "Custom".to_string(),
        ContextMode::None => "None".to_string(),
        ContextMode::Surprise => "Surprise Me".to_string(),
    }
}
