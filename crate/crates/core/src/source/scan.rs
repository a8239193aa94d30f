//! Character-level scanner that splits Python-language source into code,
//! string-literal and comment spans.
//!
//! This is deliberately not a tokenizer for the full grammar. It knows about
//! single, double and triple quotes, backslash escapes and `#` comments,
//! which is all comment stripping and keyword detection need.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanKind {
    Code,
    Str,
    Comment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub kind: SpanKind,
    /// Byte range into the scanned text.
    pub range: Range<usize>,
    /// 0-based line on which the span starts.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scan {
    pub spans: Vec<Span>,
    /// Lines on which a string literal opened and never closed.
    pub unterminated: Vec<usize>,
}

#[derive(Clone, Copy)]
enum State {
    Code,
    Comment,
    Str { quote: char, triple: bool },
}

pub fn scan(text: &str) -> Scan {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut spans: Vec<Span> = Vec::new();
    let mut unterminated = Vec::new();

    let mut state = State::Code;
    let mut start = 0usize;
    let mut start_line = 0usize;
    let mut line = 0usize;
    let mut i = 0usize;

    let push = |spans: &mut Vec<Span>, kind, range: Range<usize>, line| {
        if range.is_empty() {
            return;
        }
        match spans.last_mut() {
            Some(last) if last.kind == kind && last.range.end == range.start => {
                last.range.end = range.end;
            }
            _ => spans.push(Span { kind, range, line }),
        }
    };
    let at = |i: usize| chars.get(i).map(|&(_, c)| c);
    let offset = |i: usize| chars.get(i).map_or(text.len(), |&(o, _)| o);

    while i < chars.len() {
        let c = chars[i].1;
        match state {
            State::Code => {
                if c == '#' {
                    push(&mut spans, SpanKind::Code, start..offset(i), start_line);
                    state = State::Comment;
                    start = offset(i);
                    start_line = line;
                    i += 1;
                } else if c == '\'' || c == '"' {
                    push(&mut spans, SpanKind::Code, start..offset(i), start_line);
                    let triple = at(i + 1) == Some(c) && at(i + 2) == Some(c);
                    state = State::Str { quote: c, triple };
                    start = offset(i);
                    start_line = line;
                    i += if triple { 3 } else { 1 };
                } else {
                    if c == '\n' {
                        line += 1;
                    }
                    i += 1;
                }
            }
            State::Comment => {
                if c == '\n' {
                    push(&mut spans, SpanKind::Comment, start..offset(i), start_line);
                    state = State::Code;
                    start = offset(i);
                    start_line = line;
                } else {
                    i += 1;
                }
            }
            State::Str { quote, triple } => {
                if c == '\\' {
                    if at(i + 1) == Some('\n') {
                        line += 1;
                    }
                    i += 2;
                } else if c == quote && (!triple || (at(i + 1) == Some(c) && at(i + 2) == Some(c))) {
                    i += if triple { 3 } else { 1 };
                    push(&mut spans, SpanKind::Str, start..offset(i), start_line);
                    state = State::Code;
                    start = offset(i);
                    start_line = line;
                } else if c == '\n' && !triple {
                    // Unterminated single-line literal: it ends with its line.
                    unterminated.push(start_line);
                    push(&mut spans, SpanKind::Str, start..offset(i), start_line);
                    state = State::Code;
                    start = offset(i);
                    start_line = line;
                } else {
                    if c == '\n' {
                        line += 1;
                    }
                    i += 1;
                }
            }
        }
    }

    let end = text.len();
    match state {
        State::Code => push(&mut spans, SpanKind::Code, start..end, start_line),
        State::Comment => push(&mut spans, SpanKind::Comment, start..end, start_line),
        State::Str { .. } => {
            unterminated.push(start_line);
            push(&mut spans, SpanKind::Str, start..end, start_line);
        }
    }

    Scan { spans, unterminated }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token<'a> {
    Ident(&'a str),
    Punct(char),
    Literal,
}

/// Identifier/punctuation token stream over the code spans, each token tagged
/// with its 0-based line. String literals collapse into one `Literal` token.
pub fn tokens(text: &str) -> Vec<(Token<'_>, usize)> {
    let mut out = Vec::new();
    for span in scan(text).spans {
        match span.kind {
            SpanKind::Comment => {}
            SpanKind::Str => out.push((Token::Literal, span.line)),
            SpanKind::Code => {
                let body = &text[span.range.clone()];
                let mut line = span.line;
                let mut iter = body.char_indices().peekable();
                while let Some((pos, c)) = iter.next() {
                    if c == '\n' {
                        line += 1;
                    } else if c.is_alphabetic() || c == '_' {
                        let mut end = pos + c.len_utf8();
                        while let Some(&(p, n)) = iter.peek() {
                            if n.is_alphanumeric() || n == '_' {
                                end = p + n.len_utf8();
                                iter.next();
                            } else {
                                break;
                            }
                        }
                        out.push((Token::Ident(&body[pos..end]), line));
                    } else if c.is_ascii_digit() {
                        while let Some(&(_, n)) = iter.peek() {
                            if n.is_alphanumeric() || n == '_' || n == '.' {
                                iter.next();
                            } else {
                                break;
                            }
                        }
                        out.push((Token::Literal, line));
                    } else if !c.is_whitespace() && c != '\\' {
                        out.push((Token::Punct(c), line));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<(SpanKind, &str)> {
        scan(text)
            .spans
            .into_iter()
            .map(|s| (s.kind, &text[s.range]))
            .collect()
    }

    #[test]
    fn splits_code_string_comment() {
        assert_eq!(
            kinds("s = '#x'  # c"),
            vec![
                (SpanKind::Code, "s = "),
                (SpanKind::Str, "'#x'"),
                (SpanKind::Code, "  "),
                (SpanKind::Comment, "# c"),
            ]
        );
    }

    #[test]
    fn triple_quotes_span_lines() {
        let text = "a = '''x\n# y\n'''\nb";
        let scan = scan(text);
        let strs: Vec<_> = scan
            .spans
            .iter()
            .filter(|s| s.kind == SpanKind::Str)
            .collect();
        assert_eq!(strs.len(), 1);
        assert_eq!(&text[strs[0].range.clone()], "'''x\n# y\n'''");
        assert!(scan.spans.iter().all(|s| s.kind != SpanKind::Comment));
        assert_eq!(scan.spans.last().unwrap().line, 2);
    }

    #[test]
    fn escaped_quote_does_not_close() {
        assert_eq!(
            kinds(r##"x = "a\"#b""##),
            vec![(SpanKind::Code, "x = "), (SpanKind::Str, r##""a\"#b""##)]
        );
    }

    #[test]
    fn unterminated_string_closes_at_end_of_line() {
        let scan = scan("x = 'oops # c\ny = 1");
        assert_eq!(scan.unterminated, vec![0]);
        assert!(scan.spans.iter().all(|s| s.kind != SpanKind::Comment));
    }

    #[test]
    fn token_lines_follow_newlines() {
        let toks = tokens("while True:\n    break");
        assert_eq!(toks[0], (Token::Ident("while"), 0));
        assert_eq!(toks[1], (Token::Ident("True"), 0));
        assert_eq!(toks[2], (Token::Punct(':'), 0));
        assert_eq!(toks[3], (Token::Ident("break"), 1));
    }
}
