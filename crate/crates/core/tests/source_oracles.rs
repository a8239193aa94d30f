//! Source analysis checked against fixtures frozen from CPython's `tokenize`
//! (see fixtures/gen_oracles.py), plus property tests for the invariants.

use proptest::prelude::*;
use serde::Deserialize;

use puzzlemaker_core::source::{
    extract_lines, find_banned, strip_comments, strip_fences, BannedConstruct, BannedFinding,
};
use puzzlemaker_core::validate::{validate_solution, DEFAULT_MAX_LINES};

#[derive(Deserialize)]
struct CommentCase {
    input: String,
    expected: String,
}

#[derive(Deserialize)]
struct BannedCase {
    input: String,
    expected: Vec<(String, usize)>,
}

#[derive(Deserialize)]
struct IndentCase {
    input: String,
    levels: Vec<usize>,
}

fn normalize(s: &str) -> String {
    s.split('\n').map(str::trim_end).collect::<Vec<_>>().join("\n")
}

#[test]
fn comment_stripping_matches_reference_tokenizer() {
    let cases: Vec<CommentCase> =
        serde_json::from_str(include_str!("fixtures/comment_corpus.json")).unwrap();
    assert_eq!(cases.len(), 50);
    for case in &cases {
        let got = strip_comments(&case.input);
        assert_eq!(normalize(&got.text), normalize(&case.expected), "input: {:?}", case.input);
        assert!(got.warnings.is_empty(), "unexpected warning for {:?}", case.input);
    }
}

#[test]
fn banned_detection_matches_reference_tokenizer() {
    let cases: Vec<BannedCase> =
        serde_json::from_str(include_str!("fixtures/banned_corpus.json")).unwrap();
    for case in &cases {
        let solution = extract_lines(&case.input).unwrap();
        let expected: Vec<BannedFinding> = case
            .expected
            .iter()
            .map(|(kind, line)| BannedFinding {
                construct: match kind.as_str() {
                    "WhileTrue" => BannedConstruct::WhileTrue,
                    "Break" => BannedConstruct::Break,
                    "TryExcept" => BannedConstruct::TryExcept,
                    other => panic!("unknown construct {other}"),
                },
                source_index: *line,
            })
            .collect();
        assert_eq!(find_banned(&solution), expected, "input: {:?}", case.input);
    }
}

#[test]
fn indent_levels_match_reference_indent_stack() {
    let cases: Vec<IndentCase> =
        serde_json::from_str(include_str!("fixtures/indent_corpus.json")).unwrap();
    for case in &cases {
        let levels: Vec<usize> = extract_lines(&case.input)
            .unwrap()
            .lines
            .iter()
            .map(|l| l.indent_level)
            .collect();
        assert_eq!(levels, case.levels, "input: {:?}", case.input);
    }
}

fn code_line() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        Just("x = 1".to_string()),
        Just("print('#')".to_string()),
        Just("s = \"a # b\"".to_string()),
        Just("# comment".to_string()),
        Just("y = 'it\\'s'  # tail".to_string()),
        Just("".to_string()),
        Just("total += n  # add".to_string()),
        Just("msg = 'take a break'".to_string()),
        "[a-z]{1,6} = [0-9]{1,3}",
    ];
    (0usize..4, piece).prop_map(|(lvl, p)| format!("{}{}", "    ".repeat(lvl), p))
}

fn snippet() -> impl Strategy<Value = String> {
    // The anchor lines pin the inferred indent unit to four spaces.
    prop::collection::vec(code_line(), 0..15)
        .prop_map(|lines| format!("def f():\n    pass\n{}", lines.join("\n")))
}

proptest! {
    #[test]
    fn strip_comments_is_idempotent(text in snippet()) {
        let once = strip_comments(&text).text;
        prop_assert_eq!(strip_comments(&once).text, once);
    }

    #[test]
    fn strip_fences_is_idempotent(text in snippet(), fenced in any::<bool>()) {
        let text = if fenced { format!("```python\n{text}\n```") } else { text };
        let once = strip_fences(&text);
        prop_assert_eq!(strip_fences(&once), once);
    }

    #[test]
    fn extracted_lines_keep_order_and_round_trip(text in snippet()) {
        let stripped = strip_comments(&text).text;
        let solution = extract_lines(&stripped).unwrap();
        for pair in solution.lines.windows(2) {
            prop_assert!(pair[0].source_index < pair[1].source_index);
        }
        for line in &solution.lines {
            prop_assert!(!line.text.trim().is_empty());
            prop_assert!(!line.text.starts_with('#'));
        }
        let expected: Vec<&str> = stripped.lines().filter(|l| !l.trim().is_empty()).collect();
        let rendered = solution.render();
        let rendered: Vec<&str> = rendered.lines().collect();
        prop_assert_eq!(rendered, expected);
    }

    #[test]
    fn accepted_solutions_have_no_banned_constructs(text in snippet()) {
        if let Ok(valid) = validate_solution(&text, DEFAULT_MAX_LINES) {
            prop_assert!(find_banned(&valid.solution).is_empty());
        }
    }
}
