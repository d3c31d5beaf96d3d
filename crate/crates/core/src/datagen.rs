//! Seeded synthetic datasets: IoT telemetry (one nested group), system
//! metrics (flat) and application logs (flat, mixed types).
//!
//! Randomness comes from ChaCha8 seeded with the 64-bit dataset seed, so a
//! `DatasetSpec` fixes the output on every platform. Record `i` always
//! carries timestamp `EPOCH + 60 * i` seconds.

use std::fmt;
use std::str::FromStr;

use chrono::DateTime;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::value::{block_of, EntityBlock, FieldKind, FieldNode, Record, Value};

/// 2024-01-15T00:00:00Z
pub const EPOCH_SECONDS: i64 = 1_705_276_800;
pub const STEP_SECONDS: i64 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Iot,
    Metrics,
    Logs,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 3] = [DatasetKind::Iot, DatasetKind::Metrics, DatasetKind::Logs];

    pub fn as_str(self) -> &'static str {
        match self {
            DatasetKind::Iot => "iot",
            DatasetKind::Metrics => "metrics",
            DatasetKind::Logs => "logs",
        }
    }

    /// Entity name used when the dataset is written as ONTO.
    pub fn entity_name(self) -> &'static str {
        match self {
            DatasetKind::Iot => "Telemetry",
            DatasetKind::Metrics => "Metrics",
            DatasetKind::Logs => "Logs",
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DatasetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iot" => Ok(DatasetKind::Iot),
            "metrics" => Ok(DatasetKind::Metrics),
            "logs" => Ok(DatasetKind::Logs),
            other => Err(format!("unknown dataset `{other}` (expected iot, metrics or logs)")),
        }
    }
}

/// Generator identity; fully determines a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    pub n_records: usize,
    pub seed: u64,
}

impl DatasetSpec {
    /// `None` when `n_records` is zero.
    pub fn new(kind: DatasetKind, n_records: usize, seed: u64) -> Option<Self> {
        (n_records >= 1).then_some(Self { kind, n_records, seed })
    }
}

pub fn generate(spec: &DatasetSpec) -> Vec<Record> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.n_records)
        .map(|i| match spec.kind {
            DatasetKind::Iot => iot(&mut rng, i),
            DatasetKind::Metrics => metrics(&mut rng, i),
            DatasetKind::Logs => logs(&mut rng, i),
        })
        .collect()
}

/// The dataset's field tree with zero records: header plus field-name lines.
pub fn schema_block(kind: DatasetKind) -> EntityBlock {
    fn empty(nodes: &[FieldNode]) -> Vec<FieldNode> {
        nodes
            .iter()
            .map(|n| match &n.kind {
                FieldKind::Leaf(_) => FieldNode::leaf(n.name.clone(), Vec::new()),
                FieldKind::Group(children) => FieldNode::group(n.name.clone(), empty(children)),
            })
            .collect()
    }
    let sample = generate(&DatasetSpec {
        kind,
        n_records: 1,
        seed: 0,
    });
    let block = block_of(kind.entity_name(), &sample).expect("generators are homogeneous");
    EntityBlock::new(kind.entity_name(), 0, empty(block.fields())).expect("valid schema")
}

fn record(fields: Vec<(&str, Value)>) -> Record {
    Record::try_from_pairs(fields).expect("generator field names are unique")
}

fn timestamp(i: usize) -> Value {
    let secs = EPOCH_SECONDS + STEP_SECONDS * i as i64;
    let t = DateTime::from_timestamp(secs, 0).expect("timestamp in range");
    Value::Str(t.format("%Y-%m-%dT%H:%M:%SZ").to_string())
}

/// Uniform value on a fixed-decimal grid, `lo..=hi` in units of `10^-places`.
fn fixed(rng: &mut impl Rng, lo: i64, hi: i64, places: i32) -> Value {
    let units = rng.random_range(lo..=hi);
    Value::float(units as f64 / 10f64.powi(places)).expect("finite")
}

fn iot(rng: &mut ChaCha8Rng, i: usize) -> Record {
    let device_id = format!("sensor-{:03}", i % 50 + 1);
    let temperature = fixed(rng, 150, 350, 1);
    let humidity = fixed(rng, 300, 700, 1);
    let pressure = fixed(rng, 9800, 10400, 1);
    let battery = Value::Int(rng.random_range(0..=100));
    let lat = fixed(rng, 3770, 3780, 2);
    let lon = fixed(rng, -12250, -12240, 2);
    record(vec![
        ("device_id", Value::Str(device_id)),
        ("timestamp", timestamp(i)),
        ("temperature", temperature),
        ("humidity", humidity),
        ("pressure", pressure),
        ("battery_level", battery),
        ("location", Value::Record(record(vec![("lat", lat), ("lon", lon)]))),
    ])
}

fn metrics(rng: &mut ChaCha8Rng, i: usize) -> Record {
    // Byte counters are heavy-tailed: pick a digit count, then a value below it.
    const COUNTER_DIGITS: u32 = 9;
    let host = format!("host-{:02}", i % 20 + 1);
    let cpu = fixed(rng, 0, 1000, 1);
    let memory = fixed(rng, 0, 1000, 1);
    let mut counter = || {
        let digits = rng.random_range(1..=COUNTER_DIGITS);
        Value::Int(rng.random_range(0..10i64.pow(digits)))
    };
    record(vec![
        ("host", Value::Str(host)),
        ("timestamp", timestamp(i)),
        ("cpu_percent", cpu),
        ("memory_percent", memory),
        ("disk_io_read", counter()),
        ("disk_io_write", counter()),
        ("network_in", counter()),
        ("network_out", counter()),
    ])
}

const LEVELS: [(&str, u32); 4] = [("DEBUG", 2), ("INFO", 6), ("WARN", 1), ("ERROR", 1)];

const SERVICES: [&str; 8] = [
    "auth-service",
    "api-gateway",
    "user-service",
    "payment-service",
    "order-service",
    "inventory-service",
    "notification-service",
    "search-service",
];

/// `{}` marks the numeric slot.
const MESSAGES: [&str; 20] = [
    "Request completed in {} ms",
    "User login successful for account {}",
    "Cache miss for key session:{}",
    "Database query took {} ms",
    "Retrying connection attempt {}",
    "Processed batch of {} items",
    "Rate limit exceeded for client {}",
    "Payment authorized for order {}",
    "Token refreshed after {} seconds",
    "Queue depth at {} messages",
    "Health check passed in {} ms",
    "Connection pool size is {}",
    "Invalid input rejected at field {}",
    "Scheduled job finished with {} updates",
    "Upstream timeout after {} ms",
    "Loaded configuration version {}",
    "Sent {} notifications",
    "Search index returned {} results",
    "Inventory reserved for sku {}",
    "Garbage collection paused for {} ms",
];

const STATUS_CODES: [(i64, u32); 5] = [(200, 6), (201, 1), (400, 1), (404, 1), (500, 1)];

fn logs(rng: &mut ChaCha8Rng, i: usize) -> Record {
    let level_dist = WeightedIndex::new(LEVELS.iter().map(|(_, w)| *w)).expect("positive weights");
    let status_dist = WeightedIndex::new(STATUS_CODES.iter().map(|(_, w)| *w)).expect("positive weights");
    let level = LEVELS[level_dist.sample(rng)].0;
    let service = SERVICES[rng.random_range(0..SERVICES.len())];
    let template = MESSAGES[rng.random_range(0..MESSAGES.len())];
    let message = template.replace("{}", &rng.random_range(1..=9999).to_string());
    let request_id = format!("{:08x}", rng.random::<u32>());
    let duration = rng.random_range(1..=5000);
    let status = STATUS_CODES[status_dist.sample(rng)].0;
    record(vec![
        ("timestamp", timestamp(i)),
        ("level", Value::str(level)),
        ("service", Value::str(service)),
        ("message", Value::Str(message)),
        ("request_id", Value::Str(request_id)),
        ("duration_ms", Value::Int(duration)),
        ("status_code", Value::Int(status)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: DatasetKind, n: usize, seed: u64) -> DatasetSpec {
        DatasetSpec::new(kind, n, seed).unwrap()
    }

    #[test]
    fn iot_shape() {
        let rs = generate(&spec(DatasetKind::Iot, 3, 1000));
        assert_eq!(rs.len(), 3);
        let names: Vec<_> = rs[0].iter().map(|(k, _)| k).collect();
        assert_eq!(
            names,
            [
                "device_id",
                "timestamp",
                "temperature",
                "humidity",
                "pressure",
                "battery_level",
                "location"
            ]
        );
        let loc = rs[0].get("location").and_then(Value::as_record).unwrap();
        assert_eq!(loc.iter().map(|(k, _)| k).collect::<Vec<_>>(), ["lat", "lon"]);
        assert_eq!(rs[0].get("device_id"), Some(&Value::str("sensor-001")));
        assert_eq!(rs[2].get("timestamp"), Some(&Value::str("2024-01-15T00:02:00Z")));
    }

    #[test]
    fn metrics_and_logs_shape() {
        let rs = generate(&spec(DatasetKind::Metrics, 1000, 1000));
        assert_eq!(rs.len(), 1000);
        assert!(rs.iter().all(|r| r.len() == 8 && r.iter().all(|(_, v)| v.is_scalar())));
        assert_eq!(rs[20].get("host"), Some(&Value::str("host-01")));
        let logs = generate(&spec(DatasetKind::Logs, 50, 7));
        assert!(logs.iter().all(|r| r.len() == 7));
        for r in &logs {
            let Some(Value::Str(id)) = r.get("request_id") else {
                panic!()
            };
            assert_eq!(id.len(), 8);
            assert!(id.bytes().all(|b| b.is_ascii_hexdigit()));
        }
    }

    #[test]
    fn value_ranges() {
        for r in generate(&spec(DatasetKind::Iot, 500, 3)) {
            let Some(Value::Float(t)) = r.get("temperature") else {
                panic!()
            };
            assert!((15.0..=35.0).contains(&t.get()));
            let Some(Value::Int(b)) = r.get("battery_level") else {
                panic!()
            };
            assert!((0..=100).contains(b));
            let loc = r.get("location").and_then(Value::as_record).unwrap();
            let Some(Value::Float(lon)) = loc.get("lon") else {
                panic!()
            };
            assert!((-122.50..=-122.40).contains(&lon.get()));
        }
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        for kind in DatasetKind::ALL {
            let a = generate(&spec(kind, 100, 1000));
            assert_eq!(a, generate(&spec(kind, 100, 1000)));
            assert_ne!(a, generate(&spec(kind, 100, 1001)));
            assert!(block_of(kind.entity_name(), &a).is_ok());
        }
        assert!(DatasetSpec::new(DatasetKind::Iot, 0, 1).is_none());
    }

    #[test]
    fn schema_only() {
        let block = schema_block(DatasetKind::Iot);
        assert_eq!(block.count(), 0);
        assert_eq!(block.fields().len(), 7);
    }
}
