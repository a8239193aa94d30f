//! Lightweight analysis of generated Python-language solutions: fence and
//! comment removal, logical line extraction with indent levels, and
//! detection of the constructs the exercises are not allowed to use.

pub mod scan;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use scan::{SpanKind, Token};

/// Indent units accepted after inference.
pub const ALLOWED_INDENT_UNITS: [usize; 5] = [1, 2, 3, 4, 8];
pub const DEFAULT_INDENT_UNIT: usize = 4;
pub const TAB_WIDTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalLine {
    pub text: String,
    pub indent_level: usize,
    pub source_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SanitizedSolution {
    pub lines: Vec<LogicalLine>,
    pub indent_unit: usize,
}

impl SanitizedSolution {
    /// Re-indents every line with `indent_level * indent_unit` spaces.
    pub fn render(&self) -> String {
        self.lines
            .iter()
            .map(|l| format!("{}{}", " ".repeat(l.indent_level * self.indent_unit), l.text))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BannedConstruct {
    WhileTrue,
    Break,
    TryExcept,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BannedFinding {
    pub construct: BannedConstruct,
    pub source_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StripWarning {
    UnterminatedString { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripped {
    pub text: String,
    pub warnings: Vec<StripWarning>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error("line {source_index} is indented by {leading_spaces} spaces, not a multiple of the {indent_unit}-space indent unit")]
    RaggedIndentation {
        source_index: usize,
        leading_spaces: usize,
        indent_unit: usize,
    },
}

fn is_fence(line: &str) -> bool {
    let t = line.trim();
    t.starts_with("```") && !t[3..].contains('`')
}

/// Removes a leading and trailing markdown code fence. Unfenced text is
/// returned unchanged.
pub fn strip_fences(raw: &str) -> String {
    let mut lines: Vec<&str> = raw.lines().collect();
    let mut changed = false;
    loop {
        let first = lines.iter().position(|l| !l.trim().is_empty());
        let Some(first) = first else { break };
        if !is_fence(lines[first]) {
            break;
        }
        lines.drain(..=first);
        if let Some(last) = lines.iter().rposition(|l| !l.trim().is_empty()) {
            if is_fence(lines[last]) {
                lines.truncate(last);
            }
        }
        changed = true;
    }
    if changed {
        lines.join("\n")
    } else {
        raw.to_string()
    }
}

/// Removes every `#` comment outside string literals and trims trailing
/// whitespace from lines that end in code. Line count is preserved.
pub fn strip_comments(raw: &str) -> Stripped {
    let scanned = scan::scan(raw);
    let mut out = String::with_capacity(raw.len());
    // Trailing-whitespace trimming must never eat into string contents.
    let mut floor = 0usize;

    fn trim_tail(out: &mut String, floor: usize) {
        let keep = out[floor..].trim_end_matches([' ', '\t', '\r']).len() + floor;
        out.truncate(keep);
    }

    for span in &scanned.spans {
        let body = &raw[span.range.clone()];
        match span.kind {
            SpanKind::Comment => {}
            SpanKind::Str => {
                out.push_str(body);
                floor = out.len();
            }
            SpanKind::Code => {
                for (n, piece) in body.split('\n').enumerate() {
                    if n > 0 {
                        trim_tail(&mut out, floor);
                        out.push('\n');
                        floor = out.len();
                    }
                    out.push_str(piece);
                }
            }
        }
    }
    trim_tail(&mut out, floor);

    Stripped {
        text: out,
        warnings: scanned
            .unterminated
            .into_iter()
            .map(|line| StripWarning::UnterminatedString { line })
            .collect(),
    }
}

fn leading_width(line: &str) -> (usize, &str) {
    let mut width = 0;
    for (i, c) in line.char_indices() {
        match c {
            ' ' => width += 1,
            '\t' => width += TAB_WIDTH,
            _ => return (width, &line[i..]),
        }
    }
    (width, "")
}

/// Splits stripped code into non-blank logical lines with integer indent
/// levels. The indent unit is the smallest positive indentation seen.
pub fn extract_lines(raw: &str) -> Result<SanitizedSolution, SourceError> {
    let measured: Vec<(usize, usize, &str)> = raw
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, l)| {
            let (width, rest) = leading_width(l);
            (idx, width, rest.trim_end())
        })
        .collect();

    let indent_unit = measured
        .iter()
        .map(|&(_, w, _)| w)
        .filter(|&w| w > 0)
        .min()
        .unwrap_or(DEFAULT_INDENT_UNIT);

    if !ALLOWED_INDENT_UNITS.contains(&indent_unit) {
        let &(source_index, leading_spaces, _) = measured
            .iter()
            .find(|&&(_, w, _)| w == indent_unit)
            .expect("unit comes from a measured line");
        return Err(SourceError::RaggedIndentation {
            source_index,
            leading_spaces,
            indent_unit,
        });
    }

    let lines = measured
        .into_iter()
        .map(|(source_index, width, text)| {
            if width % indent_unit != 0 {
                return Err(SourceError::RaggedIndentation {
                    source_index,
                    leading_spaces: width,
                    indent_unit,
                });
            }
            Ok(LogicalLine {
                text: text.to_string(),
                indent_level: width / indent_unit,
                source_index,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(SanitizedSolution { lines, indent_unit })
}

pub fn count_code_lines(solution: &SanitizedSolution) -> usize {
    solution.lines.len()
}

/// Token-level scan for `while True`, `break` and `try`/`except`/`finally`.
pub fn find_banned(solution: &SanitizedSolution) -> Vec<BannedFinding> {
    let rendered = solution.render();
    let toks = scan::tokens(&rendered);
    let source_index = |line: usize| solution.lines[line].source_index;

    let mut found = Vec::new();
    for (i, (tok, line)) in toks.iter().enumerate() {
        let construct = match tok {
            Token::Ident("while") => {
                let next = toks[i + 1..]
                    .iter()
                    .find(|(t, _)| *t != Token::Punct('('));
                matches!(next, Some((Token::Ident("True"), _))).then_some(BannedConstruct::WhileTrue)
            }
            Token::Ident("break") => Some(BannedConstruct::Break),
            Token::Ident("try" | "except" | "finally") => Some(BannedConstruct::TryExcept),
            _ => None,
        };
        if let Some(construct) = construct {
            found.push(BannedFinding {
                construct,
                source_index: source_index(*line),
            });
        }
    }
    found
}

/// Lines whose first token is `def` (or `async def`).
pub fn count_function_defs(solution: &SanitizedSolution) -> usize {
    solution
        .lines
        .iter()
        .filter(|l| {
            let mut words = l.text.split(|c: char| !(c.is_alphanumeric() || c == '_'));
            match words.next() {
                Some("def") => true,
                Some("async") => words.next() == Some("def"),
                _ => false,
            }
        })
        .count()
}
