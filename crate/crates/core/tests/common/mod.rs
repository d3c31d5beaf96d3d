#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use onto_core::tokenizer::{load_model, TokenizerModel};

/// `ONTO_RANK_FILE`, else `<workspace>/data/cl100k_base.tiktoken`.
pub fn rank_file() -> PathBuf {
    if let Some(p) = std::env::var_os("ONTO_RANK_FILE") {
        return PathBuf::from(p);
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/cl100k_base.tiktoken")
}

pub fn model() -> &'static TokenizerModel {
    static MODEL: OnceLock<TokenizerModel> = OnceLock::new();
    MODEL.get_or_init(|| {
        let path = rank_file();
        load_model(&path).unwrap_or_else(|e| {
            panic!(
                "cannot load cl100k_base rank file at {} ({e}); set ONTO_RANK_FILE or copy it into data/",
                path.display()
            )
        })
    })
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

use onto_core::{Record, Value};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fragments that collide with ONTO syntax or type inference.
const NASTY: &[&str] = &[
    "|",
    "^",
    "`",
    "``",
    "a|b",
    "x^y",
    "`q`",
    "123",
    "-7",
    "0",
    "-0",
    "4.5",
    "-4.5e3",
    "1e9",
    "1E+2",
    "1e999",
    "99999999999999999999",
    "true",
    "false",
    "True",
    "null",
    "",
    " ",
    " lead",
    "trail ",
    "  ",
    "é",
    "日本語",
    "\t",
    "a\tb",
    "#",
    ":",
    "a: b",
    "[3]:",
    "E[1]:",
    "x.y",
    "-",
    ".5",
    "5.",
    "0x1f",
    "nan",
    "inf",
    "+1",
    "1_000",
    "\u{0}",
    "\u{7f}",
    "\\",
    "\"",
];

#[derive(Clone, Copy)]
enum Column {
    Int,
    Float,
    Bool,
    Text,
    Array,
    Mixed,
}

enum Shape {
    Leaf(String, Column),
    Group(String, Vec<Shape>),
}

fn name(rng: &mut ChaCha8Rng, used: &mut Vec<String>) -> String {
    const FIRST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    const REST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789.-";
    loop {
        let mut s = String::new();
        s.push(*FIRST.choose(rng).unwrap() as char);
        for _ in 0..rng.random_range(0..8) {
            s.push(*REST.choose(rng).unwrap() as char);
        }
        if !used.contains(&s) {
            used.push(s.clone());
            return s;
        }
    }
}

fn shapes(rng: &mut ChaCha8Rng, depth: usize) -> Vec<Shape> {
    let mut used = Vec::new();
    (0..rng.random_range(1..=6))
        .map(|_| {
            let n = name(rng, &mut used);
            if depth < 2 && rng.random_bool(0.25) {
                Shape::Group(n, shapes(rng, depth + 1))
            } else {
                let col = *[
                    Column::Int,
                    Column::Float,
                    Column::Bool,
                    Column::Text,
                    Column::Array,
                    Column::Mixed,
                ]
                .choose(rng)
                .unwrap();
                Shape::Leaf(n, col)
            }
        })
        .collect()
}

pub fn nasty_string(rng: &mut ChaCha8Rng) -> String {
    let mut s = String::new();
    for _ in 0..rng.random_range(1..=3) {
        if rng.random_bool(0.7) {
            s.push_str(NASTY.choose(rng).unwrap());
        } else {
            for _ in 0..rng.random_range(1..6) {
                s.push(rng.random_range(' '..='~'));
            }
        }
    }
    s
}

fn scalar(rng: &mut ChaCha8Rng, col: Column) -> Value {
    match col {
        Column::Int => Value::Int(match rng.random_range(0..4) {
            0 => rng.random(),
            1 => [i64::MIN, i64::MAX, 0, -1][rng.random_range(0..4)],
            _ => rng.random_range(-1000..1000),
        }),
        Column::Float => {
            let x = match rng.random_range(0..4) {
                0 => f64::from_bits(rng.random()),
                1 => [0.1, -0.0, 1e300, 5e-324, 1e21, 1e-7, 123456789.125][rng.random_range(0..7)],
                _ => rng.random_range(-1000.0..1000.0),
            };
            Value::float(if x.is_finite() { x } else { 1.5 }).unwrap()
        }
        Column::Bool => Value::Bool(rng.random()),
        Column::Text => Value::Str(nasty_string(rng)),
        Column::Array => unreachable!(),
        Column::Mixed => {
            let pick = [Column::Int, Column::Float, Column::Bool, Column::Text][rng.random_range(0..4)];
            scalar(rng, pick)
        }
    }
}

fn value(rng: &mut ChaCha8Rng, col: Column) -> Value {
    if rng.random_bool(0.1) {
        return Value::Null;
    }
    match col {
        Column::Array => Value::Array(
            (0..rng.random_range(2..=4))
                .map(|_| {
                    if rng.random_bool(0.15) {
                        Value::Null
                    } else {
                        scalar(rng, Column::Mixed)
                    }
                })
                .collect(),
        ),
        c => scalar(rng, c),
    }
}

fn row(rng: &mut ChaCha8Rng, shape: &[Shape]) -> Record {
    let mut r = Record::new();
    for s in shape {
        match s {
            Shape::Leaf(n, col) => r.push(n.clone(), value(rng, *col)).unwrap(),
            Shape::Group(n, inner) => r.push(n.clone(), Value::Record(row(rng, inner))).unwrap(),
        }
    }
    r
}

/// Homogeneous records, depth ≤ 2, 1..=200 rows, adversarial strings.
pub fn random_dataset(seed: u64) -> Vec<Record> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = shapes(&mut rng, 1);
    let n = rng.random_range(1..=200);
    (0..n).map(|_| row(&mut rng, &shape)).collect()
}

/// Identifier-safe entity name for a seed.
pub fn entity_name(seed: u64) -> String {
    format!("E{}", seed % 97)
}
