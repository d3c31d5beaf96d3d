//! Token benchmark harness: generate, serialize to every format, count and
//! report. Also JSON import for `onto convert` and prompt-file assembly.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baseline::{to_json_annotated, to_yaml_annotated, JsonStyle};
use crate::composition::{compose, CompositionReport};
use crate::datagen::{generate, DatasetKind, DatasetSpec};
use crate::emit::{Annotated, Format};
use crate::serializer::{dumps_annotated, SerializeError};
use crate::tokenizer::TokenizerModel;
use crate::value::{block_of, OntoDocument, Record, Value};
use crate::{SUMMARY_TASK, WARM_PROMPT};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Serialize(#[from] SerializeError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Serializes `records` as `format`, with byte roles attached.
pub fn render(records: &[Record], entity: &str, format: Format, style: JsonStyle) -> Result<Annotated, SerializeError> {
    Ok(match format {
        Format::Json => to_json_annotated(records, style),
        Format::Yaml => to_yaml_annotated(records),
        Format::Onto => dumps_annotated(&OntoDocument::from(block_of(entity, records)?))?,
    })
}

/// Token counts for one generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenReport {
    pub dataset: DatasetKind,
    pub n_records: usize,
    pub seed: u64,
    pub json_style: JsonStyle,
    pub tokens: BTreeMap<Format, usize>,
    /// `1 - tokens[format] / tokens[json]`, derived from `tokens`.
    pub reduction_vs_json: BTreeMap<Format, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub composition: BTreeMap<Format, CompositionReport>,
    pub rank_file_sha256: String,
    pub tool_version: String,
}

impl TokenReport {
    fn new(
        spec: &DatasetSpec,
        json_style: JsonStyle,
        tokens: BTreeMap<Format, usize>,
        composition: BTreeMap<Format, CompositionReport>,
        model: &TokenizerModel,
    ) -> Self {
        let json = tokens[&Format::Json] as f64;
        let reduction_vs_json = tokens.iter().map(|(&f, &n)| (f, 1.0 - n as f64 / json)).collect();
        Self {
            dataset: spec.kind,
            n_records: spec.n_records,
            seed: spec.seed,
            json_style,
            tokens,
            reduction_vs_json,
            composition,
            rank_file_sha256: model.content_hash().to_owned(),
            tool_version: TOOL_VERSION.to_owned(),
        }
    }

    pub fn reduction(&self, format: Format) -> f64 {
        1.0 - self.tokens[&format] as f64 / self.tokens[&Format::Json] as f64
    }
}

/// Generates `spec`, emits all three formats and counts tokens. With
/// `with_composition`, also attributes tokens per category.
pub fn measure(
    model: &TokenizerModel,
    spec: &DatasetSpec,
    json_style: JsonStyle,
    with_composition: bool,
) -> Result<TokenReport, BenchError> {
    let records = generate(spec);
    let mut tokens = BTreeMap::new();
    let mut composition = BTreeMap::new();
    for format in Format::ALL {
        let text = render(&records, spec.kind.entity_name(), format, json_style)?;
        if with_composition {
            let report = compose(model, format, &text).expect("emitted text carries roles");
            tokens.insert(format, report.total);
            composition.insert(format, report);
        } else {
            tokens.insert(format, model.count_tokens(text.text()));
        }
    }
    Ok(TokenReport::new(spec, json_style, tokens, composition, model))
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub kinds: Vec<DatasetKind>,
    pub scales: Vec<usize>,
    pub runs: u64,
    /// Run `r` uses seed `base_seed + r`.
    pub base_seed: u64,
    pub json_style: JsonStyle,
    pub with_composition: bool,
    /// Worker threads; 0 picks the number of CPUs.
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            kinds: DatasetKind::ALL.to_vec(),
            scales: vec![100, 500, 1000],
            runs: 5,
            base_seed: 1000,
            json_style: JsonStyle::Spaced,
            with_composition: false,
            jobs: 0,
        }
    }
}

/// Runs every (kind, scale, run) cell in parallel. Reports come back sorted
/// by kind, scale and seed.
pub fn run_bench(model: &TokenizerModel, config: &BenchConfig) -> Result<Vec<TokenReport>, BenchError> {
    let mut specs = Vec::new();
    for &kind in &config.kinds {
        for &n in &config.scales {
            for run in 0..config.runs {
                if let Some(spec) = DatasetSpec::new(kind, n, config.base_seed + run) {
                    specs.push(spec);
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;
    let mut reports = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| measure(model, spec, config.json_style, config.with_composition))
            .collect::<Result<Vec<_>, _>>()
    })?;
    reports.sort_by_key(|r| (r.dataset, r.n_records, r.seed));
    Ok(reports)
}

/// Mean token counts and reductions over the runs of one (kind, scale).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub dataset: DatasetKind,
    pub n_records: usize,
    pub runs: usize,
    pub mean_tokens: BTreeMap<Format, f64>,
    pub mean_reduction: BTreeMap<Format, f64>,
}

pub fn summarize(reports: &[TokenReport]) -> Vec<CellSummary> {
    let mut cells: BTreeMap<(DatasetKind, usize), Vec<&TokenReport>> = BTreeMap::new();
    for r in reports {
        cells.entry((r.dataset, r.n_records)).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|((dataset, n_records), rs)| {
            let runs = rs.len();
            let mean = |f: &dyn Fn(&TokenReport) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / runs as f64;
            CellSummary {
                dataset,
                n_records,
                runs,
                mean_tokens: Format::ALL
                    .iter()
                    .map(|&fmt| (fmt, mean(&|r| r.tokens[&fmt] as f64)))
                    .collect(),
                mean_reduction: Format::ALL
                    .iter()
                    .map(|&fmt| (fmt, mean(&|r| r.reduction(fmt))))
                    .collect(),
            }
        })
        .collect()
}

/// Largest minus smallest mean ONTO reduction across the scales of `kind`.
pub fn reduction_drift(summary: &[CellSummary], kind: DatasetKind) -> Option<f64> {
    let values: Vec<f64> = summary
        .iter()
        .filter(|c| c.dataset == kind)
        .map(|c| c.mean_reduction[&Format::Onto])
        .collect();
    let max = values.iter().copied().reduce(f64::max)?;
    let min = values.iter().copied().reduce(f64::min)?;
    Some(max - min)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverRow {
    pub n_records: usize,
    pub json: usize,
    pub onto: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossover {
    pub dataset: DatasetKind,
    pub rows: Vec<CrossoverRow>,
    /// Smallest N at which ONTO needs fewer tokens than JSON.
    pub crossover: Option<usize>,
}

/// Token pairs for N = 1..=max_n, each N generated with the same seed.
pub fn crossover(
    model: &TokenizerModel,
    kind: DatasetKind,
    seed: u64,
    json_style: JsonStyle,
    max_n: usize,
) -> Result<Crossover, BenchError> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let spec = DatasetSpec::new(kind, n, seed).expect("n >= 1");
        let records = generate(&spec);
        let count = |format| -> Result<usize, BenchError> {
            Ok(model.count_tokens(render(&records, kind.entity_name(), format, json_style)?.text()))
        };
        rows.push(CrossoverRow {
            n_records: n,
            json: count(Format::Json)?,
            onto: count(Format::Onto)?,
        });
    }
    let crossover = rows.iter().find(|r| r.onto < r.json).map(|r| r.n_records);
    Ok(Crossover {
        dataset: kind,
        rows,
        crossover,
    })
}

/// Ready-to-send prompt text per format: optional format explanation (ONTO
/// only), the data, then the summary task.
pub fn prompt_pack(
    spec: &DatasetSpec,
    warm: bool,
    json_style: JsonStyle,
) -> Result<Vec<(Format, String)>, SerializeError> {
    let records = generate(spec);
    Format::ALL
        .iter()
        .map(|&format| {
            let data = render(&records, spec.kind.entity_name(), format, json_style)?.into_text();
            let mut prompt = String::new();
            if warm && format == Format::Onto {
                prompt.push_str(WARM_PROMPT);
                prompt.push('\n');
            }
            prompt.push_str(&data);
            if !data.ends_with('\n') {
                prompt.push('\n');
            }
            prompt.push('\n');
            prompt.push_str(SUMMARY_TASK);
            prompt.push('\n');
            Ok((format, prompt))
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum JsonInputError {
    #[error("{line}:{column}: invalid JSON: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("expected a JSON array of objects; element {index} is not an object")]
    NotRecords { index: usize },
    #[error("expected a JSON array of objects")]
    NotArray,
}

/// Reads a JSON array of objects, keeping key order. Integers outside the
/// signed 64-bit range become strings.
pub fn records_from_json(text: &str) -> Result<Vec<Record>, JsonInputError> {
    let parsed: serde_json::Value = serde_json::from_str(text).map_err(|e| JsonInputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let serde_json::Value::Array(items) = parsed else {
        return Err(JsonInputError::NotArray);
    };
    items
        .into_iter()
        .enumerate()
        .map(|(index, item)| match from_json_value(item) {
            Value::Record(r) => Ok(r),
            _ => Err(JsonInputError::NotRecords { index }),
        })
        .collect()
}

fn from_json_value(v: serde_json::Value) -> Value {
    use serde_json::Value as J;
    match v {
        J::Null => Value::Null,
        J::Bool(b) => Value::Bool(b),
        J::Number(n) => {
            if let Some(i) = n.as_i64() {
                Value::Int(i)
            } else if n.is_u64() {
                Value::Str(n.to_string())
            } else {
                n.as_f64()
                    .and_then(|x| Value::float(x).ok())
                    .unwrap_or_else(|| Value::Str(n.to_string()))
            }
        }
        J::String(s) => Value::Str(s),
        J::Array(items) => Value::Array(items.into_iter().map(from_json_value).collect()),
        J::Object(map) => {
            let mut r = Record::new();
            for (k, v) in map {
                // serde_json objects have unique keys; empty keys fall out here.
                let _ = r.push(k, from_json_value(v));
            }
            Value::Record(r)
        }
    }
}
