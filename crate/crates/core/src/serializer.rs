//! Canonical ONTO emitter.

use thiserror::Error;

use crate::emit::{Annotated, Category, Format, Sink};
use crate::parser::{infer_unquoted, INDENT_WIDTH};
use crate::value::{block_of, EntityBlock, FieldKind, FieldNode, ModelError, OntoDocument, Record, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("value at `{path}` cannot be written: {reason}")]
    UnrepresentableValue { path: String, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Canonical ONTO text for a document. Entities are separated by one blank
/// line; output ends with a newline.
pub fn dumps(doc: &OntoDocument) -> Result<String, SerializeError> {
    let mut out = String::new();
    write_document(&mut out, doc)?;
    Ok(out)
}

/// [`dumps`] with a role tag for every output byte.
pub fn dumps_annotated(doc: &OntoDocument) -> Result<Annotated, SerializeError> {
    let mut out = Annotated::tracked(Format::Onto);
    write_document(&mut out, doc)?;
    Ok(out)
}

/// Pivots `records` into a single entity and emits it.
pub fn dumps_records(entity_name: &str, records: &[Record]) -> Result<String, SerializeError> {
    let block = block_of(entity_name, records)?;
    dumps(&OntoDocument::from(block))
}

fn write_document(out: &mut impl Sink, doc: &OntoDocument) -> Result<(), SerializeError> {
    for (i, block) in doc.entities().iter().enumerate() {
        if i > 0 {
            out.put("\n", Category::Whitespace);
        }
        write_block(out, block)?;
    }
    Ok(())
}

pub(crate) fn write_block(out: &mut impl Sink, block: &EntityBlock) -> Result<(), SerializeError> {
    out.put(block.name(), Category::Key);
    out.put("[", Category::Punctuation);
    out.put(&block.count().to_string(), Category::Punctuation);
    out.put("]:", Category::Punctuation);
    out.put("\n", Category::Whitespace);
    write_fields(out, block.fields(), 1, block.count(), "")
}

fn write_fields(
    out: &mut impl Sink,
    nodes: &[FieldNode],
    depth: usize,
    count: usize,
    prefix: &str,
) -> Result<(), SerializeError> {
    for node in nodes {
        let path = if prefix.is_empty() {
            node.name.clone()
        } else {
            format!("{prefix}.{}", node.name)
        };
        out.indent(depth * INDENT_WIDTH);
        out.put(&node.name, Category::Key);
        out.put(":", Category::Punctuation);
        match &node.kind {
            FieldKind::Group(children) => {
                out.put("\n", Category::Whitespace);
                write_fields(out, children, depth + 1, count, &path)?;
            }
            FieldKind::Leaf(values) => {
                if count > 0 {
                    out.put(" ", Category::Whitespace);
                    for (i, value) in values.iter().enumerate() {
                        if i > 0 {
                            out.put("|", Category::Punctuation);
                        }
                        write_segment(out, value, &path)?;
                    }
                }
                out.put("\n", Category::Whitespace);
            }
        }
    }
    Ok(())
}

fn unrepresentable(path: &str, reason: &str) -> SerializeError {
    SerializeError::UnrepresentableValue {
        path: path.to_owned(),
        reason: reason.to_owned(),
    }
}

fn write_segment(out: &mut impl Sink, value: &Value, path: &str) -> Result<(), SerializeError> {
    match value {
        Value::Array(items) => {
            if items.len() < 2 {
                return Err(unrepresentable(
                    path,
                    "arrays need at least two elements; a one-element array reads back as a scalar",
                ));
            }
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.put("^", Category::Punctuation);
                }
                if !item.is_scalar() {
                    return Err(unrepresentable(path, "array elements must be scalars"));
                }
                write_scalar(out, item, path)?;
            }
            Ok(())
        }
        Value::Record(_) => Err(unrepresentable(path, "nested record inside a leaf")),
        scalar => write_scalar(out, scalar, path),
    }
}

fn write_scalar(out: &mut impl Sink, value: &Value, path: &str) -> Result<(), SerializeError> {
    match value {
        Value::Null => {}
        Value::Bool(b) => out.put(if *b { "true" } else { "false" }, Category::Value),
        Value::Int(i) => out.put(&i.to_string(), Category::Value),
        Value::Float(x) => out.put(&x.to_string(), Category::Value),
        Value::Str(s) => {
            if s.contains(['\n', '\r']) {
                return Err(unrepresentable(path, "strings cannot contain line breaks"));
            }
            if needs_backticks(s) {
                out.put("`", Category::Punctuation);
                for (i, piece) in s.split('`').enumerate() {
                    if i > 0 {
                        out.put("``", Category::Punctuation);
                    }
                    out.put(piece, Category::Value);
                }
                out.put("`", Category::Punctuation);
            } else {
                out.put(s, Category::Value);
            }
        }
        Value::Array(_) | Value::Record(_) => unreachable!("callers pass scalars"),
    }
    Ok(())
}

/// True when a raw string would be misread: it is empty, holds a reserved
/// character, has edge spaces, or infers as a non-string.
pub(crate) fn needs_backticks(s: &str) -> bool {
    s.is_empty()
        || s.contains(['|', '^', '`'])
        || s.starts_with(' ')
        || s.ends_with(' ')
        || !matches!(infer_unquoted(s), Value::Str(_))
}
