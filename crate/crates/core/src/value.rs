//! In-memory data model shared by the parser, the serializers and the
//! dataset generators.
//!
//! Values are row-oriented ([`Record`]) at the edges and column-oriented
//! ([`EntityBlock`]) inside ONTO. [`block_of`] and [`records_of`] pivot
//! between the two views.

use std::fmt;

use thiserror::Error;

/// Errors raised while building or pivoting model values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("record {index} differs in shape from record 0 at field `{path}`")]
    HeterogeneousRecords { index: usize, path: String },
    #[error("`{name}` is not a valid identifier")]
    InvalidName { name: String },
    #[error("duplicate name `{name}`")]
    DuplicateName { name: String },
    #[error("group `{path}` has no fields")]
    EmptyGroup { path: String },
    #[error("array at `{path}` contains a non-scalar element")]
    NestedArray { path: String },
    #[error("leaf `{path}` holds {got} values, entity declares {expected}")]
    LengthMismatch { path: String, expected: usize, got: usize },
    #[error("leaf `{path}` holds a nested record")]
    RecordInLeaf { path: String },
    #[error("float value is not finite")]
    NonFiniteFloat,
}

/// A 64-bit float that is guaranteed finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Finite(f64);

impl Finite {
    pub fn new(value: f64) -> Result<Self, ModelError> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(ModelError::NonFiniteFloat)
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Finite {
    type Error = ModelError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl fmt::Display for Finite {
    /// Shortest decimal that round-trips to the same 64-bit value. Always
    /// carries a fraction or an exponent so it never reads back as an integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut buf = ryu::Buffer::new();
        f.write_str(buf.format_finite(self.0))
    }
}

/// A dynamically typed datum.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Float(Finite),
    Str(String),
    /// Scalars only; see [`Value::is_scalar`].
    Array(Vec<Value>),
    Record(Record),
}

impl Value {
    /// Builds a float value, rejecting NaN and infinities.
    pub fn float(value: f64) -> Result<Self, ModelError> {
        Finite::new(value).map(Value::Float)
    }

    pub fn str(value: impl Into<String>) -> Self {
        Value::Str(value.into())
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, Value::Array(_) | Value::Record(_))
    }

    pub fn as_record(&self) -> Option<&Record> {
        match self {
            Value::Record(r) => Some(r),
            _ => None,
        }
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<Finite> for Value {
    fn from(v: Finite) -> Self {
        Value::Float(v)
    }
}

impl From<Record> for Value {
    fn from(v: Record) -> Self {
        Value::Record(v)
    }
}

/// An ordered map of field name to value. Names are non-empty and unique;
/// equality is order-sensitive.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn try_from_pairs<I, K>(pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (K, Value)>,
        K: Into<String>,
    {
        let mut record = Record::new();
        for (k, v) in pairs {
            record.push(k, v)?;
        }
        Ok(record)
    }

    /// Appends a field. Fails on an empty or already present name.
    pub fn push(&mut self, name: impl Into<String>, value: Value) -> Result<(), ModelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModelError::InvalidName { name });
        }
        if self.get(&name).is_some() {
            return Err(ModelError::DuplicateName { name });
        }
        self.fields.push((name, value));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.fields.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }
}

/// Entity and field names: `[A-Za-z_][A-Za-z0-9_.-]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut bytes = name.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

/// One node of an entity's field tree.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldNode {
    pub name: String,
    pub kind: FieldKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    /// Column of values, one per record.
    Leaf(Vec<Value>),
    /// Nested record.
    Group(Vec<FieldNode>),
}

impl FieldNode {
    pub fn leaf(name: impl Into<String>, values: Vec<Value>) -> Self {
        Self {
            name: name.into(),
            kind: FieldKind::Leaf(values),
        }
    }

    pub fn group(name: impl Into<String>, children: Vec<FieldNode>) -> Self {
        Self {
            name: name.into(),
            kind: FieldKind::Group(children),
        }
    }
}

/// A named homogeneous collection of `count` records stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityBlock {
    name: String,
    count: usize,
    fields: Vec<FieldNode>,
}

impl EntityBlock {
    /// Checks every block invariant: identifier names, unique siblings,
    /// non-empty groups, scalar-only arrays, and leaf length == `count`.
    /// A block with records must have at least one field.
    pub fn new(name: impl Into<String>, count: usize, fields: Vec<FieldNode>) -> Result<Self, ModelError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(ModelError::InvalidName { name });
        }
        if count > 0 && fields.is_empty() {
            return Err(ModelError::EmptyGroup { path: name });
        }
        validate_fields(&fields, count, "")?;
        Ok(Self { name, count, fields })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn fields(&self) -> &[FieldNode] {
        &self.fields
    }

    /// Visits every leaf with its dotted path, depth-first in field order.
    pub fn leaves(&self) -> Vec<(String, &[Value])> {
        fn walk<'a>(nodes: &'a [FieldNode], prefix: &str, out: &mut Vec<(String, &'a [Value])>) {
            for node in nodes {
                let path = join_path(prefix, &node.name);
                match &node.kind {
                    FieldKind::Leaf(values) => out.push((path, values)),
                    FieldKind::Group(children) => walk(children, &path, out),
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.fields, "", &mut out);
        out
    }
}

fn join_path(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_owned()
    } else {
        format!("{prefix}.{name}")
    }
}

fn validate_fields(nodes: &[FieldNode], count: usize, prefix: &str) -> Result<(), ModelError> {
    for (i, node) in nodes.iter().enumerate() {
        if !is_identifier(&node.name) {
            return Err(ModelError::InvalidName {
                name: node.name.clone(),
            });
        }
        if nodes[..i].iter().any(|n| n.name == node.name) {
            return Err(ModelError::DuplicateName {
                name: node.name.clone(),
            });
        }
        let path = join_path(prefix, &node.name);
        match &node.kind {
            FieldKind::Leaf(values) => {
                if values.len() != count {
                    return Err(ModelError::LengthMismatch {
                        path,
                        expected: count,
                        got: values.len(),
                    });
                }
                for v in values {
                    check_leaf_value(v, &path)?;
                }
            }
            FieldKind::Group(children) => {
                if children.is_empty() {
                    return Err(ModelError::EmptyGroup { path });
                }
                validate_fields(children, count, &path)?;
            }
        }
    }
    Ok(())
}

fn check_leaf_value(value: &Value, path: &str) -> Result<(), ModelError> {
    match value {
        Value::Record(_) => Err(ModelError::RecordInLeaf { path: path.to_owned() }),
        Value::Array(items) if !items.iter().all(Value::is_scalar) => {
            Err(ModelError::NestedArray { path: path.to_owned() })
        }
        _ => Ok(()),
    }
}

/// Span of source lines (1-based, inclusive) an entity was parsed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntitySpan {
    pub first_line: usize,
    pub last_line: usize,
}

/// An ordered sequence of uniquely named entity blocks.
#[derive(Debug, Clone)]
pub struct OntoDocument {
    entities: Vec<EntityBlock>,
    spans: Option<Vec<EntitySpan>>,
}

impl OntoDocument {
    pub fn new(entities: Vec<EntityBlock>) -> Result<Self, ModelError> {
        for (i, e) in entities.iter().enumerate() {
            if entities[..i].iter().any(|p| p.name == e.name) {
                return Err(ModelError::DuplicateName { name: e.name.clone() });
            }
        }
        Ok(Self { entities, spans: None })
    }

    pub(crate) fn with_spans(entities: Vec<EntityBlock>, spans: Vec<EntitySpan>) -> Self {
        debug_assert_eq!(entities.len(), spans.len());
        Self {
            entities,
            spans: Some(spans),
        }
    }

    pub fn entities(&self) -> &[EntityBlock] {
        &self.entities
    }

    pub fn entity(&self, name: &str) -> Option<&EntityBlock> {
        self.entities.iter().find(|e| e.name == name)
    }

    /// Line spans per entity, present on documents produced by the parser.
    pub fn source_spans(&self) -> Option<&[EntitySpan]> {
        self.spans.as_deref()
    }
}

impl From<EntityBlock> for OntoDocument {
    fn from(block: EntityBlock) -> Self {
        Self {
            entities: vec![block],
            spans: None,
        }
    }
}

/// Source spans are provenance only; equality compares entities.
impl PartialEq for OntoDocument {
    fn eq(&self, other: &Self) -> bool {
        self.entities == other.entities
    }
}

/// Row view of a block: `count` records with groups materialized as nested
/// records, field order preserved.
pub fn records_of(block: &EntityBlock) -> Vec<Record> {
    (0..block.count).map(|i| record_at(&block.fields, i)).collect()
}

fn record_at(nodes: &[FieldNode], i: usize) -> Record {
    let fields = nodes
        .iter()
        .map(|node| {
            let value = match &node.kind {
                FieldKind::Leaf(values) => values[i].clone(),
                FieldKind::Group(children) => Value::Record(record_at(children, i)),
            };
            (node.name.clone(), value)
        })
        .collect();
    Record { fields }
}

/// Column view of homogeneous records. Inverse of [`records_of`].
///
/// Every record must carry the same field names in the same order with the
/// same nesting. `Null` is data: it may share a leaf with any scalar or array,
/// but not stand in for a nested record.
pub fn block_of(entity_name: &str, records: &[Record]) -> Result<EntityBlock, ModelError> {
    if !is_identifier(entity_name) {
        return Err(ModelError::InvalidName {
            name: entity_name.to_owned(),
        });
    }
    let Some(first) = records.first() else {
        return EntityBlock::new(entity_name, 0, Vec::new());
    };
    if first.is_empty() {
        return Err(ModelError::EmptyGroup {
            path: entity_name.to_owned(),
        });
    }
    let mut fields = skeleton(first, "")?;
    for (index, record) in records.iter().enumerate() {
        fill(&mut fields, record, index, "")?;
    }
    EntityBlock::new(entity_name, records.len(), fields)
}

fn skeleton(record: &Record, prefix: &str) -> Result<Vec<FieldNode>, ModelError> {
    record
        .iter()
        .map(|(name, value)| {
            let path = join_path(prefix, name);
            if !is_identifier(name) {
                return Err(ModelError::InvalidName { name: name.to_owned() });
            }
            Ok(match value {
                Value::Record(inner) => {
                    if inner.is_empty() {
                        return Err(ModelError::EmptyGroup { path });
                    }
                    FieldNode::group(name, skeleton(inner, &path)?)
                }
                _ => FieldNode::leaf(name, Vec::new()),
            })
        })
        .collect()
}

fn fill(nodes: &mut [FieldNode], record: &Record, index: usize, prefix: &str) -> Result<(), ModelError> {
    let heterogeneous = |path: String| ModelError::HeterogeneousRecords { index, path };
    if record.len() > nodes.len() {
        let (name, _) = &record.fields[nodes.len()];
        return Err(heterogeneous(join_path(prefix, name)));
    }
    for (pos, node) in nodes.iter_mut().enumerate() {
        let Some((name, value)) = record.fields.get(pos) else {
            return Err(heterogeneous(join_path(prefix, &node.name)));
        };
        let path = join_path(prefix, name);
        if *name != node.name {
            return Err(heterogeneous(path));
        }
        match (&mut node.kind, value) {
            (FieldKind::Group(children), Value::Record(inner)) => {
                fill(children, inner, index, &path)?;
            }
            (FieldKind::Leaf(values), v) if !matches!(v, Value::Record(_)) => {
                if let Value::Array(items) = v {
                    if !items.iter().all(Value::is_scalar) {
                        return Err(ModelError::NestedArray { path });
                    }
                }
                values.push(v.clone());
            }
            _ => return Err(heterogeneous(path)),
        }
    }
    Ok(())
}
