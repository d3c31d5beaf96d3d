//! Attribution of a document's tokens to keys, punctuation, values,
//! indentation and other whitespace.
//!
//! Byte roles come from the emitters ([`Annotated`]); each token goes to the
//! category owning most of its bytes, ties broken key > punctuation >
//! structure_indent > whitespace > value.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::emit::{Annotated, Category, Format};
use crate::tokenizer::TokenizerModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("text carries no emitter byte roles for {format}")]
    UnknownProvenance { format: Format },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub format: Format,
    pub keys: usize,
    pub punctuation: usize,
    pub values: usize,
    pub structure_indent: usize,
    pub whitespace: usize,
    pub total: usize,
}

impl CompositionReport {
    pub fn get(&self, category: Category) -> usize {
        match category {
            Category::Key => self.keys,
            Category::Punctuation => self.punctuation,
            Category::Value => self.values,
            Category::StructureIndent => self.structure_indent,
            Category::Whitespace => self.whitespace,
        }
    }

    pub fn category_sum(&self) -> usize {
        Category::ALL.iter().map(|&c| self.get(c)).sum()
    }
}

/// Per-byte roles of self-emitted text.
pub fn classify_bytes(format: Format, text: &Annotated) -> Result<&[Category], CompositionError> {
    match text.roles() {
        Some(roles) if text.format() == format && roles.len() == text.text().len() => Ok(roles),
        _ => Err(CompositionError::UnknownProvenance { format }),
    }
}

pub fn compose(
    model: &TokenizerModel,
    format: Format,
    text: &Annotated,
) -> Result<CompositionReport, CompositionError> {
    let roles = classify_bytes(format, text)?;
    let mut counts = [0usize; 5];
    let tokens = model.encode_with_spans(text.text());
    for token in &tokens {
        let mut bytes = [0usize; 5];
        for &role in &roles[token.span.clone()] {
            bytes[slot(role)] += 1;
        }
        let owner = Category::ALL
            .into_iter()
            .max_by(|&a, &b| {
                bytes[slot(a)]
                    .cmp(&bytes[slot(b)])
                    .then(b.precedence().cmp(&a.precedence()))
            })
            .expect("non-empty category list");
        counts[slot(owner)] += 1;
    }
    Ok(CompositionReport {
        format,
        keys: counts[slot(Category::Key)],
        punctuation: counts[slot(Category::Punctuation)],
        values: counts[slot(Category::Value)],
        structure_indent: counts[slot(Category::StructureIndent)],
        whitespace: counts[slot(Category::Whitespace)],
        total: tokens.len(),
    })
}

fn slot(category: Category) -> usize {
    match category {
        Category::Key => 0,
        Category::Punctuation => 1,
        Category::Value => 2,
        Category::StructureIndent => 3,
        Category::Whitespace => 4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::{to_json_annotated, JsonStyle};
    use crate::parser::loads;
    use crate::serializer::dumps_annotated;
    use crate::value::{Record, Value};

    #[test]
    fn onto_leaf_line_roles() {
        let doc = loads("E[2]:\n    lat: 37.77|37.78\n").unwrap();
        let a = dumps_annotated(&doc).unwrap();
        let roles = classify_bytes(Format::Onto, &a).unwrap();
        let line = &roles[6..roles.len() - 1];
        let count = |c| line.iter().filter(|&&r| r == c).count();
        assert_eq!(count(Category::StructureIndent), 4);
        assert_eq!(count(Category::Key), 3);
        assert_eq!(count(Category::Punctuation), 2);
        assert_eq!(count(Category::Whitespace), 1);
        assert_eq!(count(Category::Value), 10);
    }

    #[test]
    fn json_object_roles() {
        let rs = vec![Record::try_from_pairs([("a", Value::Int(1))]).unwrap()];
        let a = to_json_annotated(&rs, JsonStyle::Spaced);
        let roles = classify_bytes(Format::Json, &a).unwrap();
        // Skip the surrounding array brackets.
        use Category::{Key, Punctuation, Whitespace};
        assert_eq!(
            &roles[1..roles.len() - 1],
            &[
                Punctuation,
                Key,
                Key,
                Key,
                Punctuation,
                Whitespace,
                Category::Value,
                Punctuation
            ]
        );
    }

    #[test]
    fn unknown_provenance() {
        let plain = Annotated::plain(Format::Json, "[]");
        assert_eq!(
            classify_bytes(Format::Json, &plain),
            Err(CompositionError::UnknownProvenance { format: Format::Json })
        );
        let doc = loads("E[0]:\n").unwrap();
        let onto = dumps_annotated(&doc).unwrap();
        assert!(classify_bytes(Format::Yaml, &onto).is_err());
    }

    #[test]
    fn majority_and_tie_break() {
        // Byte-level vocabulary: every token is one byte, so categories map
        // one-to-one. "ab" merges into one token split 1:1 key/value.
        let model = TokenizerModel::from_rank_bytes("t", b"YQ== 0\nYg== 1\nYWI= 2\n").unwrap();
        let mut a = Annotated::tracked(Format::Onto);
        use crate::emit::Sink;
        a.put("a", Category::Value);
        a.put("b", Category::Key);
        let r = compose(&model, Format::Onto, &a).unwrap();
        assert_eq!((r.keys, r.values, r.total), (1, 0, 1));

        let mut a = Annotated::tracked(Format::Onto);
        a.put("a", Category::Whitespace);
        a.put("b", Category::Punctuation);
        let r = compose(&model, Format::Onto, &a).unwrap();
        assert_eq!((r.punctuation, r.total), (1, 1));
        assert_eq!(r.category_sum(), r.total);
    }
}
