use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::emit::{Annotated, Category, Format, Sink};
use crate::value::{Record, Value};

/// Whitespace layout of emitted JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JsonStyle {
    /// No whitespace at all.
    Compact,
    /// One line, `", "` and `": "` separators.
    #[default]
    Spaced,
    /// One member per line, indented by the given width.
    Indented(usize),
}

impl fmt::Display for JsonStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JsonStyle::Compact => f.write_str("compact"),
            JsonStyle::Spaced => f.write_str("spaced"),
            JsonStyle::Indented(w) => write!(f, "indented:{w}"),
        }
    }
}

impl FromStr for JsonStyle {
    type Err = String;

    /// Accepts `compact`, `spaced`, `indented` (width 2) or `indented:W`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "compact" => Ok(JsonStyle::Compact),
            "spaced" => Ok(JsonStyle::Spaced),
            "indented" => Ok(JsonStyle::Indented(2)),
            other => other
                .strip_prefix("indented:")
                .and_then(|w| w.parse().ok())
                .map(JsonStyle::Indented)
                .ok_or_else(|| format!("unknown JSON style `{other}`")),
        }
    }
}

/// JSON array of the records. Key order follows each record.
pub fn to_json(records: &[Record], style: JsonStyle) -> String {
    let mut out = String::new();
    write_json(&mut out, records, style);
    out
}

pub fn to_json_annotated(records: &[Record], style: JsonStyle) -> Annotated {
    let mut out = Annotated::tracked(Format::Json);
    write_json(&mut out, records, style);
    out
}

/// A single record as a JSON object.
pub fn object_to_json(record: &Record, style: JsonStyle) -> String {
    let mut out = String::new();
    Writer { out: &mut out, style }.object(record, 0);
    out
}

fn write_json(out: &mut impl Sink, records: &[Record], style: JsonStyle) {
    let mut w = Writer { out, style };
    w.seq(records.iter(), 0, |w, r, depth| w.object(r, depth));
}

struct Writer<'a, S> {
    out: &'a mut S,
    style: JsonStyle,
}

impl<S: Sink> Writer<'_, S> {
    fn seq<'v, T: 'v>(
        &mut self,
        items: impl ExactSizeIterator<Item = &'v T>,
        depth: usize,
        mut each: impl FnMut(&mut Self, &'v T, usize),
    ) {
        self.open_close("[", "]", items, depth, &mut each);
    }

    fn open_close<'v, T: 'v>(
        &mut self,
        open: &str,
        close: &str,
        items: impl ExactSizeIterator<Item = &'v T>,
        depth: usize,
        each: &mut impl FnMut(&mut Self, &'v T, usize),
    ) {
        self.out.put(open, Category::Punctuation);
        let empty = items.len() == 0;
        for (i, item) in items.enumerate() {
            if i > 0 {
                self.out.put(",", Category::Punctuation);
                if self.style == JsonStyle::Spaced {
                    self.out.put(" ", Category::Whitespace);
                }
            }
            self.newline(depth + 1);
            each(self, item, depth + 1);
        }
        if !empty {
            self.newline(depth);
        }
        self.out.put(close, Category::Punctuation);
    }

    fn newline(&mut self, depth: usize) {
        if let JsonStyle::Indented(width) = self.style {
            self.out.put("\n", Category::Whitespace);
            self.out.indent(width * depth);
        }
    }

    fn object(&mut self, record: &Record, depth: usize) {
        let fields: Vec<_> = record.iter().collect();
        self.open_close("{", "}", fields.iter(), depth, &mut |w, (key, value), depth| {
            w.out.put(&quote(key), Category::Key);
            w.out.put(":", Category::Punctuation);
            if w.style != JsonStyle::Compact {
                w.out.put(" ", Category::Whitespace);
            }
            w.value(value, depth);
        });
    }

    fn value(&mut self, value: &Value, depth: usize) {
        match value {
            Value::Null => self.out.put("null", Category::Value),
            Value::Bool(b) => self.out.put(if *b { "true" } else { "false" }, Category::Value),
            Value::Int(i) => self.out.put(&i.to_string(), Category::Value),
            Value::Float(x) => self.out.put(&x.to_string(), Category::Value),
            Value::Str(s) => {
                let q = quote(s);
                self.out.put("\"", Category::Punctuation);
                self.out.put(&q[1..q.len() - 1], Category::Value);
                self.out.put("\"", Category::Punctuation);
            }
            Value::Array(items) => self.seq(items.iter(), depth, |w, v, d| w.value(v, d)),
            Value::Record(r) => self.object(r, depth),
        }
    }
}

/// RFC 8259 string literal.
fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}
