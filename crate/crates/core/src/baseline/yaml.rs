//! Block-style YAML for sequences of records: `- key: value` items, two
//! spaces per nesting level, flow-style scalar arrays. No anchors, tags or
//! multi-line scalars.

use std::sync::LazyLock;

use fancy_regex::Regex;

use crate::emit::{Annotated, Category, Format, Sink};
use crate::value::{Record, Value};

pub fn to_yaml(records: &[Record]) -> String {
    let mut out = String::new();
    write_yaml(&mut out, records);
    out
}

pub fn to_yaml_annotated(records: &[Record]) -> Annotated {
    let mut out = Annotated::tracked(Format::Yaml);
    write_yaml(&mut out, records);
    out
}

fn write_yaml(out: &mut impl Sink, records: &[Record]) {
    if records.is_empty() {
        out.put("[]", Category::Punctuation);
        out.put("\n", Category::Whitespace);
        return;
    }
    for record in records {
        out.put("-", Category::Punctuation);
        out.put(" ", Category::Whitespace);
        if record.is_empty() {
            out.put("{}", Category::Punctuation);
            out.put("\n", Category::Whitespace);
        } else {
            mapping(out, record, 2, true);
        }
    }
}

/// Writes `record` at `indent`. With `inline_first`, the first key continues
/// the current line (after `- `).
fn mapping(out: &mut impl Sink, record: &Record, indent: usize, inline_first: bool) {
    for (i, (key, value)) in record.iter().enumerate() {
        if i > 0 || !inline_first {
            out.indent(indent);
        }
        scalar_text(out, key, Category::Key, false);
        out.put(":", Category::Punctuation);
        match value {
            Value::Record(inner) if !inner.is_empty() => {
                out.put("\n", Category::Whitespace);
                mapping(out, inner, indent + 2, false);
                continue;
            }
            Value::Record(_) => {
                out.put(" ", Category::Whitespace);
                out.put("{}", Category::Punctuation);
            }
            Value::Array(_) => {
                out.put(" ", Category::Whitespace);
                flow(out, value);
            }
            other => {
                out.put(" ", Category::Whitespace);
                scalar(out, other, false);
            }
        }
        out.put("\n", Category::Whitespace);
    }
}

/// Flow-style rendering, used for arrays.
fn flow(out: &mut impl Sink, value: &Value) {
    match value {
        Value::Array(items) => {
            out.put("[", Category::Punctuation);
            for (j, item) in items.iter().enumerate() {
                if j > 0 {
                    out.put(",", Category::Punctuation);
                    out.put(" ", Category::Whitespace);
                }
                flow(out, item);
            }
            out.put("]", Category::Punctuation);
        }
        Value::Record(record) => {
            out.put("{", Category::Punctuation);
            for (j, (key, item)) in record.iter().enumerate() {
                if j > 0 {
                    out.put(",", Category::Punctuation);
                    out.put(" ", Category::Whitespace);
                }
                scalar_text(out, key, Category::Key, true);
                out.put(":", Category::Punctuation);
                out.put(" ", Category::Whitespace);
                flow(out, item);
            }
            out.put("}", Category::Punctuation);
        }
        scalar_value => scalar(out, scalar_value, true),
    }
}

fn scalar(out: &mut impl Sink, value: &Value, flow: bool) {
    match value {
        Value::Null => out.put("null", Category::Value),
        Value::Bool(b) => out.put(if *b { "true" } else { "false" }, Category::Value),
        Value::Int(i) => out.put(&i.to_string(), Category::Value),
        Value::Float(x) => out.put(&x.to_string(), Category::Value),
        Value::Str(s) => scalar_text(out, s, Category::Value, flow),
        Value::Array(_) | Value::Record(_) => unreachable!("collections go through flow()"),
    }
}

fn scalar_text(out: &mut impl Sink, s: &str, category: Category, flow: bool) {
    match quoting(s, flow) {
        Quoting::Plain => out.put(s, category),
        Quoting::Single => {
            out.put("'", Category::Punctuation);
            for (i, piece) in s.split('\'').enumerate() {
                if i > 0 {
                    out.put("''", Category::Punctuation);
                }
                out.put(piece, category);
            }
            out.put("'", Category::Punctuation);
        }
        Quoting::Double => {
            out.put("\"", Category::Punctuation);
            out.put(&escape_double(s), category);
            out.put("\"", Category::Punctuation);
        }
    }
}

/// YAML's printable set; anything else must be escaped.
fn printable(c: char) -> bool {
    matches!(c, '\t' | '\n' | '\r' | ' '..='~' | '\u{85}' | '\u{a0}'..='\u{d7ff}' | '\u{e000}'..='\u{fffd}' | '\u{10000}'..)
}

fn escape_double(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c if printable(c) && !c.is_control() => out.push(c),
            c if (c as u32) <= 0xff => out.push_str(&format!("\\x{:02X}", c as u32)),
            c => out.push_str(&format!("\\u{:04X}", c as u32)),
        }
    }
    out
}

enum Quoting {
    Plain,
    Single,
    Double,
}

/// Plain scalars that a YAML 1.1 or 1.2 core resolver would read as
/// something other than a string.
static RESOLVES_TO_NON_STRING: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(concat!(
        r"^(?:",
        r"~|null|Null|NULL",
        r"|y|Y|yes|Yes|YES|n|N|no|No|NO|true|True|TRUE|false|False|FALSE|on|On|ON|off|Off|OFF",
        r"|[-+]?(?:0|[1-9][0-9_]*)",
        r"|[-+]?0b[0-1_]+|[-+]?0o?[0-7_]+|[-+]?0x[0-9a-fA-F_]+",
        r"|[-+]?[1-9][0-9_]*(?::[0-5]?[0-9])+",
        r"|[-+]?(?:[0-9][0-9_]*)?\.[0-9._]*(?:[eE][-+]?[0-9]+)?",
        r"|[-+]?[0-9][0-9_]*(?:\.[0-9_]*)?[eE][-+]?[0-9]+",
        r"|[-+]?\.(?:inf|Inf|INF)|\.(?:nan|NaN|NAN)",
        r"|[0-9]{4}-[0-9]{1,2}-[0-9]{1,2}(?:(?:[Tt]|[ \t]+)[0-9]{1,2}:[0-9]{2}:[0-9]{2}(?:\.[0-9]*)?(?:[ \t]*(?:Z|[-+][0-9]{1,2}(?::[0-9]{2})?))?)?",
        r"|=|<<",
        r")$"
    ))
    .expect("valid resolver pattern")
});

fn quoting(s: &str, flow: bool) -> Quoting {
    if s.chars().any(|c| c.is_control() || !printable(c)) {
        return Quoting::Double;
    }
    let first = s.chars().next();
    let needs = s.is_empty()
        || matches!(
            first,
            Some(
                '-' | '?'
                    | ':'
                    | ','
                    | '['
                    | ']'
                    | '{'
                    | '}'
                    | '#'
                    | '&'
                    | '*'
                    | '!'
                    | '|'
                    | '>'
                    | '\''
                    | '"'
                    | '%'
                    | '@'
                    | '`'
                    | ' '
            )
        )
        || s.ends_with(' ')
        || s.ends_with(':')
        || s.contains(": ")
        || s.contains(" #")
        || (flow && s.contains([',', '[', ']', '{', '}', ':']))
        || RESOLVES_TO_NON_STRING.is_match(s).unwrap_or(true);
    if needs {
        Quoting::Single
    } else {
        Quoting::Plain
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(pairs: Vec<(&str, Value)>) -> Record {
        Record::try_from_pairs(pairs).unwrap()
    }

    #[test]
    fn block_style() {
        let rs = vec![rec(vec![
            ("a", Value::Int(1)),
            ("b", Value::Record(rec(vec![("c", Value::Int(2))]))),
        ])];
        assert_eq!(to_yaml(&rs), "- a: 1\n  b:\n    c: 2\n");
        assert_eq!(to_yaml(&[]), "[]\n");
    }

    #[test]
    fn nested_first_and_arrays() {
        let rs = vec![
            rec(vec![
                ("loc", Value::Record(rec(vec![("lat", Value::float(37.77).unwrap())]))),
                (
                    "tags",
                    Value::Array(vec![Value::str("a"), Value::str("b,c"), Value::Null]),
                ),
                ("none", Value::Null),
            ]),
            Record::new(),
        ];
        assert_eq!(
            to_yaml(&rs),
            "- loc:\n    lat: 37.77\n  tags: [a, 'b,c', null]\n  none: null\n- {}\n"
        );
    }

    #[test]
    fn quoting_policy() {
        let q = |s: &str| to_yaml(&[rec(vec![("k", Value::str(s))])]);
        assert_eq!(q("123"), "- k: '123'\n");
        assert_eq!(q("sensor-001"), "- k: sensor-001\n");
        assert_eq!(q("2024-01-15T00:00:00Z"), "- k: '2024-01-15T00:00:00Z'\n");
        assert_eq!(q("true"), "- k: 'true'\n");
        assert_eq!(q("yes"), "- k: 'yes'\n");
        assert_eq!(q(""), "- k: ''\n");
        assert_eq!(q("it's"), "- k: it's\n");
        assert_eq!(q("-x"), "- k: '-x'\n");
        assert_eq!(q("a: b"), "- k: 'a: b'\n");
        assert_eq!(q("'q'"), "- k: '''q'''\n");
        assert_eq!(q("1e5"), "- k: '1e5'\n");
        assert_eq!(q("3fa9c1d2"), "- k: 3fa9c1d2\n");
        assert_eq!(q("line\nbreak"), "- k: \"line\\nbreak\"\n");
        assert_eq!(q("Database query took 12 ms"), "- k: Database query took 12 ms\n");
    }

    #[test]
    fn annotated_roles_align() {
        let rs = vec![rec(vec![("a", Value::str("x y"))])];
        let a = to_yaml_annotated(&rs);
        assert_eq!(a.text().len(), a.roles().unwrap().len());
        assert_eq!(a.roles().unwrap()[0], Category::Punctuation);
    }

    #[test]
    fn non_printable_and_flow_colon() {
        let rs = vec![rec(vec![
            ("s", Value::str("a\u{7f}\u{0}\u{fffe}\"")),
            ("t", Value::Array(vec![Value::str("x:y"), Value::str("z")])),
        ])];
        assert_eq!(to_yaml(&rs), "- s: \"a\\x7F\\x00\\uFFFE\\\"\"\n  t: ['x:y', z]\n");
    }
}
