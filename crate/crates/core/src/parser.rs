//! ONTO text parser.
//!
//! The grammar is line oriented: an entity header `Name[N]:` at column 1,
//! then field lines indented by exactly 4 spaces per nesting level. A field
//! line is either `name: v1|v2|...` (a leaf carrying N values) or a bare
//! `name:` that opens a group of deeper fields. Parsing stops at the first
//! error.

use std::fmt;

use thiserror::Error;

use crate::value::{is_identifier, EntityBlock, EntitySpan, FieldKind, FieldNode, OntoDocument, Value};

pub const INDENT_WIDTH: usize = 4;
/// Deepest permitted field level (entity header is level 0).
pub const MAX_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    BadIndentation,
    BadEntityHeader,
    BadFieldName,
    CountMismatch,
    UnterminatedBacktick,
    TabCharacter,
    DuplicateField,
    EmptyGroup,
    StrayContent,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// First error found in a document. `line` and `column` are 1-based;
/// columns count characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Error inside one line payload, positioned by byte offset.
struct SegmentError {
    kind: ParseErrorKind,
    offset: usize,
    message: String,
}

impl SegmentError {
    fn new(kind: ParseErrorKind, offset: usize, message: impl Into<String>) -> Self {
        Self {
            kind,
            offset,
            message: message.into(),
        }
    }

    fn at(self, line: usize, text: &str, base: usize) -> ParseError {
        ParseError {
            kind: self.kind,
            line,
            column: column_of(text, base + self.offset),
            message: self.message,
        }
    }
}

fn column_of(text: &str, byte_offset: usize) -> usize {
    let clamped = byte_offset.min(text.len().saturating_sub(1));
    let mut at = clamped;
    while !text.is_char_boundary(at) {
        at -= 1;
    }
    text[..at].chars().count() + 1
}

/// Parses a whole ONTO document.
pub fn loads(source: &str) -> Result<OntoDocument, ParseError> {
    let normalized;
    let source = if source.contains("\r\n") {
        normalized = source.replace("\r\n", "\n");
        normalized.as_str()
    } else {
        source
    };
    let lines: Vec<&str> = source.strip_suffix('\n').unwrap_or(source).split('\n').collect();
    let lines = if source.is_empty() { Vec::new() } else { lines };
    Parser { lines: &lines, pos: 0 }.document()
}

struct Parser<'a> {
    lines: &'a [&'a str],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, kind: ParseErrorKind, idx: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            kind,
            line: idx + 1,
            column,
            message: message.into(),
        }
    }

    /// Indentation level of line `idx`, validating the leading whitespace.
    fn level(&self, idx: usize) -> Result<usize, ParseError> {
        let line = self.lines[idx];
        let spaces = line
            .bytes()
            .take_while(|&b| b == b' ' || b == b'\t')
            .collect::<Vec<_>>();
        if let Some(tab) = spaces.iter().position(|&b| b == b'\t') {
            return Err(self.error(
                ParseErrorKind::TabCharacter,
                idx,
                tab + 1,
                "tab in indentation; indent with 4 spaces per level",
            ));
        }
        let width = spaces.len();
        if width == line.len() && width > 0 {
            return Err(self.error(ParseErrorKind::StrayContent, idx, 1, "whitespace-only line"));
        }
        if width % INDENT_WIDTH != 0 {
            return Err(self.error(
                ParseErrorKind::BadIndentation,
                idx,
                width + 1,
                format!("indentation of {width} spaces is not a multiple of {INDENT_WIDTH}"),
            ));
        }
        let level = width / INDENT_WIDTH;
        if level > MAX_DEPTH {
            return Err(self.error(
                ParseErrorKind::BadIndentation,
                idx,
                width + 1,
                format!("nesting deeper than {MAX_DEPTH} levels"),
            ));
        }
        Ok(level)
    }

    fn document(mut self) -> Result<OntoDocument, ParseError> {
        let mut entities: Vec<EntityBlock> = Vec::new();
        let mut spans = Vec::new();
        while self.pos < self.lines.len() {
            let idx = self.pos;
            if self.lines[idx].is_empty() {
                self.pos += 1;
                continue;
            }
            if self.level(idx)? != 0 {
                return Err(self.error(
                    ParseErrorKind::StrayContent,
                    idx,
                    1,
                    "indented line outside an entity block",
                ));
            }
            let (name, count) = self.header(idx)?;
            if entities.iter().any(|e| e.name() == name) {
                return Err(self.error(
                    ParseErrorKind::DuplicateField,
                    idx,
                    1,
                    format!("entity `{name}` declared twice"),
                ));
            }
            self.pos += 1;
            let fields = self.fields(1, count, "")?;
            if count > 0 && fields.is_empty() {
                return Err(self.error(
                    ParseErrorKind::EmptyGroup,
                    idx,
                    1,
                    format!("entity `{name}` declares {count} records but no fields"),
                ));
            }
            let block = EntityBlock::new(name, count, fields)
                .expect("parser only builds blocks that satisfy the model invariants");
            entities.push(block);
            spans.push(EntitySpan {
                first_line: idx + 1,
                last_line: self.pos,
            });
        }
        Ok(OntoDocument::with_spans(entities, spans))
    }

    fn header(&self, idx: usize) -> Result<(&'a str, usize), ParseError> {
        let line = self.lines[idx];
        let bad = |column: usize, message: &str| {
            self.error(
                ParseErrorKind::BadEntityHeader,
                idx,
                column,
                format!("{message}; expected `Name[N]:`"),
            )
        };
        let Some(open) = line.find('[') else {
            return Err(bad(1, "missing `[N]`"));
        };
        let name = &line[..open];
        if !is_identifier(name) {
            return Err(bad(1, "invalid entity name"));
        }
        let rest = &line[open + 1..];
        let Some(body) = rest.strip_suffix("]:") else {
            return Err(bad(open + 2, "header must end with `]:`"));
        };
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(open + 2, "record count must be a non-negative integer"));
        }
        let count = body
            .parse::<usize>()
            .map_err(|_| bad(open + 2, "record count out of range"))?;
        Ok((name, count))
    }

    /// Parses sibling field lines at `level` until a shallower line, a blank
    /// line or the end of input.
    fn fields(&mut self, level: usize, count: usize, prefix: &str) -> Result<Vec<FieldNode>, ParseError> {
        let mut nodes: Vec<FieldNode> = Vec::new();
        while self.pos < self.lines.len() && !self.lines[self.pos].is_empty() {
            let idx = self.pos;
            let line_level = self.level(idx)?;
            if line_level < level {
                break;
            }
            let indent = level * INDENT_WIDTH;
            if line_level > level {
                return Err(self.error(
                    ParseErrorKind::BadIndentation,
                    idx,
                    line_level * INDENT_WIDTH + 1,
                    format!(
                        "expected indentation of {indent} spaces, found {}",
                        line_level * INDENT_WIDTH
                    ),
                ));
            }
            let line = self.lines[idx];
            let content = &line[indent..];
            let Some(colon) = content.find(':') else {
                return Err(self.error(
                    ParseErrorKind::BadFieldName,
                    idx,
                    indent + 1,
                    "field line must be `name:` or `name: values`",
                ));
            };
            let name = &content[..colon];
            if !is_identifier(name) {
                return Err(self.error(
                    ParseErrorKind::BadFieldName,
                    idx,
                    indent + 1,
                    format!("`{name}` is not a valid field name"),
                ));
            }
            if nodes.iter().any(|n| n.name == name) {
                return Err(self.error(
                    ParseErrorKind::DuplicateField,
                    idx,
                    indent + 1,
                    format!("field `{name}` appears twice"),
                ));
            }
            let path = if prefix.is_empty() {
                name.to_owned()
            } else {
                format!("{prefix}.{name}")
            };
            let rest = &content[colon + 1..];
            self.pos += 1;

            let kind = if rest.is_empty() {
                let opens_group = match self.lines.get(self.pos) {
                    Some(next) if !next.is_empty() => self.level(self.pos)? > level,
                    _ => false,
                };
                if opens_group {
                    if level == MAX_DEPTH {
                        return Err(self.error(
                            ParseErrorKind::BadIndentation,
                            self.pos,
                            1,
                            format!("nesting deeper than {MAX_DEPTH} levels"),
                        ));
                    }
                    let first_child = self.pos;
                    if self.level(first_child)? != level + 1 {
                        return Err(self.error(
                            ParseErrorKind::BadIndentation,
                            first_child,
                            1,
                            format!("group `{path}` must indent its fields by exactly one level"),
                        ));
                    }
                    FieldKind::Group(self.fields(level + 1, count, &path)?)
                } else if count == 0 {
                    FieldKind::Leaf(Vec::new())
                } else {
                    return Err(self.error(
                        ParseErrorKind::CountMismatch,
                        idx,
                        indent + colon + 1,
                        format!("field `{path}` has 0 values, expected {count}"),
                    ));
                }
            } else {
                let payload_start = indent + colon + 1 + (rest.len() - rest.trim_start_matches(' ').len());
                let payload = &line[payload_start..];
                let values = split_segments(payload).map_err(|e| e.at(idx + 1, line, payload_start))?;
                if values.len() != count {
                    return Err(self.error(
                        ParseErrorKind::CountMismatch,
                        idx,
                        column_of(line, payload_start),
                        format!("field `{path}` has {} values, expected {count}", values.len()),
                    ));
                }
                FieldKind::Leaf(values)
            };
            nodes.push(FieldNode {
                name: name.to_owned(),
                kind,
            });
        }
        Ok(nodes)
    }
}

/// Splits a leaf payload into one value per `|`-separated segment. A segment
/// holding `^` becomes an array. Delimiters inside backtick spans are
/// literal.
pub fn split_values(payload: &str) -> Result<Vec<Value>, ParseError> {
    split_segments(payload).map_err(|e| e.at(1, payload, 0))
}

/// Infers the value of one delimiter-free element.
///
/// Empty is null, a backtick span is a string, `true`/`false` are booleans,
/// then signed 64-bit integers, then finite floats; anything else is a string.
pub fn infer_scalar(raw: &str) -> Result<Value, ParseError> {
    let to_error = |e: SegmentError| e.at(1, raw, 0);
    if raw.starts_with('`') {
        let (value, end) = quoted(raw, 0).map_err(to_error)?;
        if end != raw.len() {
            return Err(to_error(SegmentError::new(
                ParseErrorKind::StrayContent,
                end,
                "content after closing backtick",
            )));
        }
        return Ok(value);
    }
    if let Some(at) = raw.find('`') {
        return Err(to_error(SegmentError::new(
            ParseErrorKind::StrayContent,
            at,
            "backtick inside an unquoted value",
        )));
    }
    Ok(infer_unquoted(raw))
}

pub(crate) fn infer_unquoted(raw: &str) -> Value {
    match raw {
        "" => return Value::Null,
        "true" => return Value::Bool(true),
        "false" => return Value::Bool(false),
        _ => {}
    }
    match numeric_lexeme(raw) {
        Some(Numeric::Int) => match raw.parse::<i64>() {
            Ok(i) => Value::Int(i),
            Err(_) => Value::Str(raw.to_owned()),
        },
        Some(Numeric::Float) => match raw.parse::<f64>().ok().and_then(|f| Value::float(f).ok()) {
            Some(v) => v,
            None => Value::Str(raw.to_owned()),
        },
        None => Value::Str(raw.to_owned()),
    }
}

enum Numeric {
    Int,
    Float,
}

/// Matches `-?[0-9]+` (int), `-?[0-9]+\.[0-9]+([eE][+-]?[0-9]+)?` or
/// `-?[0-9]+[eE][+-]?[0-9]+` (float).
fn numeric_lexeme(raw: &str) -> Option<Numeric> {
    let b = raw.as_bytes();
    let mut i = usize::from(b.first() == Some(&b'-'));
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > start
    };
    if !digits(&mut i) {
        return None;
    }
    if i == b.len() {
        return Some(Numeric::Int);
    }
    if b[i] == b'.' {
        i += 1;
        if !digits(&mut i) {
            return None;
        }
        if i == b.len() {
            return Some(Numeric::Float);
        }
    }
    if matches!(b[i], b'e' | b'E') {
        i += 1;
        if i < b.len() && matches!(b[i], b'+' | b'-') {
            i += 1;
        }
        if digits(&mut i) && i == b.len() {
            return Some(Numeric::Float);
        }
    }
    None
}

/// Parses the backtick span starting at `start`. Returns the string and the
/// offset just past the closing backtick. A doubled backtick inside the span
/// is one literal backtick.
fn quoted(text: &str, start: usize) -> Result<(Value, usize), SegmentError> {
    debug_assert_eq!(text.as_bytes()[start], b'`');
    let mut out = String::new();
    let mut i = start + 1;
    loop {
        let Some(rel) = text[i..].find('`') else {
            return Err(SegmentError::new(
                ParseErrorKind::UnterminatedBacktick,
                start,
                "backtick span is not closed on this line",
            ));
        };
        out.push_str(&text[i..i + rel]);
        let tick = i + rel;
        if text.as_bytes().get(tick + 1) == Some(&b'`') {
            out.push('`');
            i = tick + 2;
        } else {
            return Ok((Value::Str(out), tick + 1));
        }
    }
}

fn split_segments(payload: &str) -> Result<Vec<Value>, SegmentError> {
    let bytes = payload.as_bytes();
    let mut segments = Vec::new();
    let mut elements = Vec::new();
    let mut pos = 0;
    loop {
        let (value, end) = if bytes.get(pos) == Some(&b'`') {
            quoted(payload, pos)?
        } else {
            let len = payload[pos..].find(['|', '^', '`']).unwrap_or(payload.len() - pos);
            let end = pos + len;
            if bytes.get(end) == Some(&b'`') {
                return Err(SegmentError::new(
                    ParseErrorKind::StrayContent,
                    end,
                    "backtick inside an unquoted value",
                ));
            }
            (infer_unquoted(&payload[pos..end]), end)
        };
        elements.push(value);
        match bytes.get(end) {
            None => {
                segments.push(finish_segment(&mut elements));
                return Ok(segments);
            }
            Some(b'|') => segments.push(finish_segment(&mut elements)),
            Some(b'^') => {}
            Some(_) => {
                return Err(SegmentError::new(
                    ParseErrorKind::StrayContent,
                    end,
                    "content after closing backtick",
                ))
            }
        }
        pos = end + 1;
    }
}

fn finish_segment(elements: &mut Vec<Value>) -> Value {
    if elements.len() == 1 {
        elements.pop().expect("one element")
    } else {
        Value::Array(std::mem::take(elements))
    }
}
