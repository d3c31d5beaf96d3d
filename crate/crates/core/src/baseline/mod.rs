//! JSON and YAML emitters over the same value model as ONTO, so token
//! comparisons start from identical data.

mod json;
mod yaml;

pub use json::{object_to_json, to_json, to_json_annotated, JsonStyle};
pub use yaml::{to_yaml, to_yaml_annotated};
