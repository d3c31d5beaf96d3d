//! Output sinks shared by the ONTO, JSON and YAML emitters.
//!
//! Every emitter writes through [`Sink`], tagging each piece with the
//! [`Category`] of the bytes it writes. A plain `String` discards the tags;
//! [`Annotated`] keeps one tag per byte for the composition analyzer.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Serialization formats under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Yaml,
    Onto,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Json, Format::Yaml, Format::Onto];

    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Yaml => "yaml",
            Format::Onto => "onto",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Role of an emitted byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Key,
    Punctuation,
    Value,
    StructureIndent,
    Whitespace,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Key,
        Category::Punctuation,
        Category::Value,
        Category::StructureIndent,
        Category::Whitespace,
    ];

    /// Tie-break order for tokens whose bytes split evenly between
    /// categories; lower wins.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            Category::Key => 0,
            Category::Punctuation => 1,
            Category::StructureIndent => 2,
            Category::Whitespace => 3,
            Category::Value => 4,
        }
    }
}

pub(crate) trait Sink {
    fn put(&mut self, text: &str, category: Category);

    fn indent(&mut self, width: usize) {
        for _ in 0..width {
            self.put(" ", Category::StructureIndent);
        }
    }
}

impl Sink for String {
    fn put(&mut self, text: &str, _category: Category) {
        self.push_str(text);
    }
}

/// Emitted text together with the role of every byte, when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotated {
    format: Format,
    text: String,
    roles: Option<Vec<Category>>,
}

impl Annotated {
    pub(crate) fn tracked(format: Format) -> Self {
        Self {
            format,
            text: String::new(),
            roles: Some(Vec::new()),
        }
    }

    /// Wraps text of unknown origin. Such text cannot be classified.
    pub fn plain(format: Format, text: impl Into<String>) -> Self {
        Self {
            format,
            text: text.into(),
            roles: None,
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn into_text(self) -> String {
        self.text
    }

    pub fn roles(&self) -> Option<&[Category]> {
        self.roles.as_deref()
    }
}

impl Sink for Annotated {
    fn put(&mut self, text: &str, category: Category) {
        self.text.push_str(text);
        if let Some(roles) = &mut self.roles {
            roles.extend(std::iter::repeat_n(category, text.len()));
        }
    }
}
