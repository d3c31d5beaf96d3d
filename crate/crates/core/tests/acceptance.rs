//! One PASS/FAIL line per acceptance criterion. Runs as a plain binary so
//! the lines are always printed; exits non-zero if any criterion fails.

mod common;

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use onto_core::baseline::JsonStyle;
use onto_core::bench::{crossover, render, run_bench, summarize, BenchConfig, CellSummary};
use onto_core::composition::compose;
use onto_core::datagen::{generate, schema_block, DatasetKind, DatasetSpec};
use onto_core::tokenizer::TokenizerModel;
use onto_core::{
    block_of, dumps, loads, EntityBlock, FieldNode, Format, OntoDocument, ParseErrorKind, Value, WARM_PROMPT,
};
use serde::Deserialize;

const LISTING: &str = "\
Telemetry[3]:
    device_id: sensor-001|sensor-002|sensor-003
    temperature: 23.5|24.1|22.9
    humidity: 45.2|43.8|46.1
    location:
        lat: 37.77|37.78|37.79
        lon: -122.41|-122.42|-122.43
";

const REDUCTION_TARGETS: [(DatasetKind, f64); 3] = [
    (DatasetKind::Iot, 46.3),
    (DatasetKind::Metrics, 50.8),
    (DatasetKind::Logs, 47.3),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Runner {
    failures: usize,
}

impl Runner {
    fn run(&mut self, id: &str, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let mut o = f();
        let took = start.elapsed();
        if let Some(limit) = limit {
            if took > limit {
                o.pass = false;
                o.detail.push_str(&format!("; over time limit {limit:?}"));
            }
        }
        if !o.pass {
            self.failures += 1;
        }
        println!(
            "{} {id:>3} {title}: {} ({:.2}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64()
        );
    }
}

fn floats(xs: &[f64]) -> Vec<Value> {
    xs.iter().map(|&x| Value::float(x).unwrap()).collect()
}

fn grammar_conformance() -> Outcome {
    let strs = |xs: &[&str]| xs.iter().map(|&s| Value::str(s)).collect();
    let expected = EntityBlock::new(
        "Telemetry",
        3,
        vec![
            FieldNode::leaf("device_id", strs(&["sensor-001", "sensor-002", "sensor-003"])),
            FieldNode::leaf("temperature", floats(&[23.5, 24.1, 22.9])),
            FieldNode::leaf("humidity", floats(&[45.2, 43.8, 46.1])),
            FieldNode::group(
                "location",
                vec![
                    FieldNode::leaf("lat", floats(&[37.77, 37.78, 37.79])),
                    FieldNode::leaf("lon", floats(&[-122.41, -122.42, -122.43])),
                ],
            ),
        ],
    )
    .unwrap();
    let doc = match loads(LISTING) {
        Ok(d) => d,
        Err(e) => return outcome(false, format!("parse failed: {e}")),
    };
    let parsed_ok = doc.entities() == [expected];
    let bytes_ok = dumps(&doc).as_deref() == Ok(LISTING);
    outcome(
        parsed_ok && bytes_ok,
        format!("block matches: {parsed_ok}, byte-identical dumps: {bytes_ok}"),
    )
}

fn round_trip_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut records = 0;
    for seed in 0..1000u64 {
        let rs = common::random_dataset(seed);
        records += rs.len();
        let doc = OntoDocument::from(block_of(&common::entity_name(seed), &rs).unwrap());
        let s = match dumps(&doc) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        match loads(&s) {
            Ok(back) if back == doc && dumps(&back).as_deref() == Ok(s.as_str()) => {}
            Ok(_) => failures.push(format!("seed {seed}: mismatch")),
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "1000 datasets, {records} records, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

#[derive(Deserialize)]
struct GoldenCase {
    text: String,
    count: usize,
}

fn tokenizer_oracle(model: &TokenizerModel) -> Outcome {
    let raw = std::fs::read_to_string(common::fixture("cl100k_golden.jsonl")).unwrap();
    let cases: Vec<GoldenCase> = raw.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let wrong = cases.iter().filter(|c| model.count_tokens(&c.text) != c.count).count();
    outcome(
        cases.len() == 500 && wrong == 0,
        format!("{} cases, {wrong} mismatches", cases.len()),
    )
}

fn cell(summary: &[CellSummary], kind: DatasetKind, n: usize) -> &CellSummary {
    summary
        .iter()
        .find(|c| c.dataset == kind && c.n_records == n)
        .expect("cell present")
}

fn reduction_pp(summary: &[CellSummary], kind: DatasetKind, n: usize) -> f64 {
    100.0 * cell(summary, kind, n).mean_reduction[&Format::Onto]
}

fn reduction_targets(summary: &[CellSummary]) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for (kind, target) in REDUCTION_TARGETS {
        let got = reduction_pp(summary, kind, 1000);
        let ok = (got - target).abs() <= 4.0;
        pass &= ok;
        let _ = write!(detail, "{kind} {got:.2}% (target {target}±4.0) ");
    }
    outcome(pass, detail.trim_end())
}

fn scaling(summary: &[CellSummary]) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for kind in DatasetKind::ALL {
        let d = (reduction_pp(summary, kind, 100) - reduction_pp(summary, kind, 1000)).abs();
        pass &= d < 1.5;
        let _ = write!(detail, "{kind} {d:.2}pp ");
    }
    outcome(pass, format!("{}(limit < 1.5pp)", detail))
}

fn nesting_gap(summary: &[CellSummary]) -> Outcome {
    let gap = reduction_pp(summary, DatasetKind::Metrics, 1000) - reduction_pp(summary, DatasetKind::Iot, 1000);
    outcome(
        (2.5..=6.5).contains(&gap),
        format!("metrics - iot = {gap:.2}pp (range [2.5, 6.5])"),
    )
}

fn crossover_point(model: &TokenizerModel) -> Outcome {
    let c = crossover(model, DatasetKind::Iot, 1000, JsonStyle::Spaced, 10).unwrap();
    let pass = c.crossover.is_some_and(|n| n <= 3);
    outcome(pass, format!("iot crossover at N = {:?} (limit ≤ 3)", c.crossover))
}

fn crossover_monotone(model: &TokenizerModel) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for kind in DatasetKind::ALL {
        let c = crossover(model, kind, 1000, JsonStyle::Spaced, 10).unwrap();
        let ratios: Vec<f64> = c.rows.iter().map(|r| r.onto as f64 / r.json as f64).collect();
        let ok = ratios.windows(2).all(|w| w[1] <= w[0]);
        pass &= ok;
        let _ = write!(detail, "{kind} {} ", if ok { "non-increasing" } else { "NOT monotone" });
    }
    outcome(pass, format!("{}over N = 1..10", detail))
}

fn composition_laws(model: &TokenizerModel) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for kind in DatasetKind::ALL {
        let report = |n: usize, format: Format| {
            let rs = generate(&DatasetSpec::new(kind, n, 1000).unwrap());
            let text = render(&rs, kind.entity_name(), format, JsonStyle::Spaced).unwrap();
            compose(model, format, &text).unwrap()
        };
        let mut sums_ok = true;
        let mut onto_keys = Vec::new();
        for n in [10, 100, 1000] {
            let r = report(n, Format::Onto);
            sums_ok &= r.category_sum() == r.total;
            onto_keys.push(r.keys);
        }
        let keys_const = onto_keys.windows(2).all(|w| w[0] == w[1]);

        let ns = [100.0, 500.0, 1000.0];
        let mut json_keys = Vec::new();
        let mut json_1k = None;
        for n in ns {
            let r = report(n as usize, Format::Json);
            sums_ok &= r.category_sum() == r.total;
            json_keys.push(r.keys as f64);
            json_1k = Some(r);
        }
        let residual = linear_fit_residual(&ns, &json_keys);
        let json_1k = json_1k.unwrap();
        let onto_1k = report(1000, Format::Onto);
        let yaml_1k = report(1000, Format::Yaml);
        sums_ok &= yaml_1k.category_sum() == yaml_1k.total;
        let value_diff = (json_1k.values as f64 - onto_1k.values as f64).abs() / json_1k.values as f64;

        let ok = keys_const && residual < 0.01 && value_diff < 0.05 && sums_ok;
        pass &= ok;
        let _ = write!(
            detail,
            "[{kind}: onto keys {onto_keys:?}, json keys {json_keys:?} residual {:.3}%, values json/onto {}/{} diff {:.2}%, sums {}] ",
            100.0 * residual,
            json_1k.values,
            onto_1k.values,
            100.0 * value_diff,
            if sums_ok { "exact" } else { "MISMATCH" }
        );
    }
    outcome(pass, detail.trim_end())
}

/// Largest relative residual of a least-squares line through the points.
fn linear_fit_residual(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    xs.iter()
        .zip(ys)
        .map(|(x, y)| ((slope * x + intercept) - y).abs() / y)
        .fold(0.0, f64::max)
}

fn schema_cost(model: &TokenizerModel) -> Outcome {
    let doc = OntoDocument::from(schema_block(DatasetKind::Iot));
    let text = dumps(&doc).unwrap();
    let n = model.count_tokens(&text);
    outcome(n <= 60, format!("{n} tokens for the N=0 IoT schema (limit ≤ 60)"))
}

fn error_reporting() -> Outcome {
    let fixtures = [
        ("bad_indentation.line4.onto", ParseErrorKind::BadIndentation, 4),
        ("bad_entity_header.line4.onto", ParseErrorKind::BadEntityHeader, 4),
        ("bad_field_name.line3.onto", ParseErrorKind::BadFieldName, 3),
        ("count_mismatch.line3.onto", ParseErrorKind::CountMismatch, 3),
        (
            "unterminated_backtick.line3.onto",
            ParseErrorKind::UnterminatedBacktick,
            3,
        ),
        ("tab_character.line3.onto", ParseErrorKind::TabCharacter, 3),
        ("duplicate_field.line5.onto", ParseErrorKind::DuplicateField, 5),
        ("empty_group.line4.onto", ParseErrorKind::EmptyGroup, 4),
        ("stray_content.line3.onto", ParseErrorKind::StrayContent, 3),
    ];
    let mut wrong = Vec::new();
    for (file, kind, line) in fixtures {
        let text = std::fs::read_to_string(common::fixture("errors").join(file)).unwrap();
        match loads(&text) {
            Err(e) if e.kind == kind && e.line == line => {}
            other => wrong.push(format!("{file}: {other:?}")),
        }
    }
    outcome(
        wrong.is_empty(),
        format!("{} kinds, {} wrong {:?}", fixtures.len(), wrong.len(), wrong),
    )
}

fn warm_prompt(model: &TokenizerModel) -> Outcome {
    let n = model.count_tokens(WARM_PROMPT);
    outcome((150..=260).contains(&n), format!("{n} tokens (range [150, 260])"))
}

fn main() -> ExitCode {
    let mut runner = Runner { failures: 0 };
    let t = Instant::now();
    let model = common::model();
    println!("cl100k_base loaded in {:.2}s", t.elapsed().as_secs_f64());

    runner.run(
        "1",
        "grammar conformance",
        Some(Duration::from_secs(1)),
        grammar_conformance,
    );
    runner.run("2", "round-trip suite", Some(Duration::from_secs(30)), round_trip_suite);
    runner.run(
        "3",
        "tokenizer oracle equivalence",
        Some(Duration::from_secs(5)),
        || tokenizer_oracle(model),
    );

    let start = Instant::now();
    let config = BenchConfig {
        scales: vec![100, 1000],
        ..BenchConfig::default()
    };
    let summary = summarize(&run_bench(model, &config).unwrap());
    let bench_time = start.elapsed();
    let within = |o: Outcome| {
        if bench_time > Duration::from_secs(120) {
            outcome(false, format!("{}; bench took {bench_time:?}", o.detail))
        } else {
            o
        }
    };
    runner.run("4", "reduction vs JSON at N=1000", None, || {
        within(reduction_targets(&summary))
    });
    runner.run("5", "scaling stability N=100 vs N=1000", None, || {
        within(scaling(&summary))
    });
    runner.run("6", "flat-vs-nested gap", None, || nesting_gap(&summary));
    runner.run("7", "crossover", None, || crossover_point(model));
    runner.run("8", "composition laws", None, || composition_laws(model));
    runner.run("9", "schema cost", None, || schema_cost(model));
    runner.run("10", "error reporting", None, error_reporting);
    runner.run("+", "warm prompt size", None, || warm_prompt(model));
    runner.run("+", "crossover ratio monotone", None, || crossover_monotone(model));

    if runner.failures == 0 {
        println!(
            "acceptance: all criteria passed (bench {:.2}s)",
            bench_time.as_secs_f64()
        );
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria FAILED", runner.failures);
        ExitCode::FAILURE
    }
}
