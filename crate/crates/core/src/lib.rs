//! ONTO: a columnar text notation for feeding homogeneous records to
//! language models with fewer tokens than JSON.
//!
//! ```text
//! Telemetry[3]:
//!     device_id: sensor-001|sensor-002|sensor-003
//!     temperature: 23.5|24.1|22.9
//!     location:
//!         lat: 37.77|37.78|37.79
//! ```
//!
//! Field names appear once per entity; each field line carries one value
//! per record, separated by `|`. The crate also ships the measurement side:
//! JSON/YAML baselines, a cl100k_base-compatible BPE token counter, token
//! composition analysis and seeded benchmark datasets.

pub mod baseline;
pub mod bench;
pub mod composition;
pub mod datagen;
mod emit;
pub mod parser;
pub mod serializer;
pub mod tokenizer;
pub mod value;

pub use emit::{Annotated, Category, Format};
pub use parser::{infer_scalar, loads, split_values, ParseError, ParseErrorKind};
pub use serializer::{dumps, dumps_annotated, dumps_records, SerializeError};
pub use value::{
    block_of, records_of, EntityBlock, FieldKind, FieldNode, Finite, ModelError, OntoDocument, Record, Value,
};

/// System prompt that explains the notation to a model reading it cold.
pub const WARM_PROMPT: &str = include_str!("../assets/warm_prompt.txt");

/// Task line appended to every generated prompt.
pub const SUMMARY_TASK: &str = "Summarize this data in one sentence.";
