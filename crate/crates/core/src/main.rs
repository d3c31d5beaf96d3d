use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use onto_core::baseline::{to_json, to_yaml, JsonStyle};
use onto_core::bench::{self, BenchConfig};
use onto_core::composition::compose;
use onto_core::datagen::{generate, DatasetKind, DatasetSpec};
use onto_core::tokenizer::{load_model, TokenizerModel};
use onto_core::{dumps, dumps_records, loads, records_of, Category, Format};

/// Exit status 1: runtime or I/O failure. Exit status 2: bad input.
enum CliError {
    Runtime(String),
    Input(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

type CliResult = Result<(), CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Runtime(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(
    name = "onto",
    version,
    about = "ONTO columnar notation: convert, validate and benchmark token usage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Json,
    Onto,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Yaml,
    Onto,
}

#[derive(clap::Args)]
struct RankFile {
    /// cl100k_base rank file (`<base64> <rank>` per line).
    #[arg(long, env = "ONTO_RANK_FILE")]
    rank_file: PathBuf,
}

impl RankFile {
    fn load(&self) -> Result<TokenizerModel, CliError> {
        load_model(&self.rank_file).map_err(|e| match e {
            onto_core::tokenizer::TokenizerError::Io { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Input(e.to_string()),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Convert between JSON (array of objects) and ONTO.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        from: Option<DataFormat>,
        #[arg(long, value_enum)]
        to: Option<DataFormat>,
        /// Entity name for JSON input; entity to extract for ONTO input.
        #[arg(long)]
        entity: Option<String>,
        #[arg(long, default_value = "spaced")]
        json_style: JsonStyle,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Parse ONTO files and report the first error in each.
    Validate {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Write a seeded synthetic dataset.
    Generate {
        #[arg(long)]
        kind: DatasetKind,
        #[arg(short = 'n', long, default_value_t = 100)]
        records: usize,
        #[arg(long, default_value_t = 1000)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
        #[arg(long, default_value = "spaced")]
        json_style: JsonStyle,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Token counts for JSON, YAML and ONTO across datasets, scales and seeds.
    Bench {
        #[command(flatten)]
        rank: RankFile,
        #[arg(long, value_delimiter = ',', default_value = "iot,metrics,logs")]
        kinds: Vec<DatasetKind>,
        #[arg(long, value_delimiter = ',', default_value = "100,500,1000")]
        scales: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        runs: u64,
        /// Run r uses seed + r.
        #[arg(long, default_value_t = 1000)]
        seed: u64,
        #[arg(long, default_value = "spaced")]
        json_style: JsonStyle,
        /// Include per-category token composition in each report.
        #[arg(long)]
        composition: bool,
        /// Worker threads (0 = all CPUs).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// JSON-lines report path; defaults to stdout (summary then goes to stderr).
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Smallest record count where ONTO beats JSON.
    Crossover {
        #[command(flatten)]
        rank: RankFile,
        #[arg(long)]
        kind: DatasetKind,
        #[arg(long, default_value_t = 1000)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_records: usize,
        #[arg(long, default_value = "spaced")]
        json_style: JsonStyle,
    },
    /// Token composition by category for each format.
    Analyze {
        #[command(flatten)]
        rank: RankFile,
        #[arg(long)]
        kind: DatasetKind,
        #[arg(short = 'n', long, default_value_t = 1000)]
        records: usize,
        #[arg(long, default_value_t = 1000)]
        seed: u64,
        #[arg(long, default_value = "spaced")]
        json_style: JsonStyle,
    },
    /// Write prompt files (data + task) for each format.
    PromptPack {
        #[arg(long)]
        kind: DatasetKind,
        #[arg(short = 'n', long, default_value_t = 1000)]
        records: usize,
        #[arg(long, default_value_t = 1000)]
        seed: u64,
        /// Prepend the format explanation to the ONTO prompt.
        #[arg(long)]
        warm: bool,
        #[arg(long, default_value = "spaced")]
        json_style: JsonStyle,
        /// Output directory.
        #[arg(short = 'o', long, default_value = ".")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Convert {
            input,
            from,
            to,
            entity,
            json_style,
            output,
        } => convert(&input, from, to, entity.as_deref(), json_style, output.as_deref()),
        Command::Validate { inputs } => validate(&inputs),
        Command::Generate {
            kind,
            records,
            seed,
            format,
            json_style,
            output,
        } => generate_cmd(kind, records, seed, format, json_style, output.as_deref()),
        Command::Bench {
            rank,
            kinds,
            scales,
            runs,
            seed,
            json_style,
            composition,
            jobs,
            output,
        } => rank.load().and_then(|model| {
            let config = BenchConfig {
                kinds,
                scales,
                runs,
                base_seed: seed,
                json_style,
                with_composition: composition,
                jobs,
            };
            bench_cmd(&model, &config, output.as_deref())
        }),
        Command::Crossover {
            rank,
            kind,
            seed,
            max_records,
            json_style,
        } => rank
            .load()
            .and_then(|model| crossover_cmd(&model, kind, seed, max_records, json_style)),
        Command::Analyze {
            rank,
            kind,
            records,
            seed,
            json_style,
        } => rank
            .load()
            .and_then(|model| analyze_cmd(&model, kind, records, seed, json_style)),
        Command::PromptPack {
            kind,
            records,
            seed,
            warm,
            json_style,
            output,
        } => prompt_pack_cmd(kind, records, seed, warm, json_style, &output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Runtime(msg) | CliError::Input(msg)) = &e;
            eprintln!("onto: {msg}");
            ExitCode::from(e.code())
        }
    }
}

fn write_output(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => fs::write(path, text).map_err(io_err(path)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string())),
    }
}

fn spec_for(kind: DatasetKind, n: usize, seed: u64) -> Result<DatasetSpec, CliError> {
    DatasetSpec::new(kind, n, seed).ok_or_else(|| CliError::Input("record count must be at least 1".into()))
}

fn convert(
    input: &Path,
    from: Option<DataFormat>,
    to: Option<DataFormat>,
    entity: Option<&str>,
    json_style: JsonStyle,
    output: Option<&Path>,
) -> CliResult {
    let text = fs::read_to_string(input).map_err(io_err(input))?;
    let from = from.unwrap_or(match input.extension().and_then(|e| e.to_str()) {
        Some("onto") => DataFormat::Onto,
        _ => DataFormat::Json,
    });
    let to = to.unwrap_or(match from {
        DataFormat::Json => DataFormat::Onto,
        DataFormat::Onto => DataFormat::Json,
    });
    let located = |e: &dyn std::fmt::Display| CliError::Input(format!("{}:{e}", input.display()));
    let doc = match from {
        DataFormat::Json => {
            let records = bench::records_from_json(&text).map_err(|e| located(&e))?;
            return match to {
                DataFormat::Onto => {
                    let name = entity.unwrap_or("Data");
                    let onto = dumps_records(name, &records).map_err(|e| CliError::Input(e.to_string()))?;
                    write_output(output, &onto)
                }
                DataFormat::Json => write_output(output, &(to_json(&records, json_style) + "\n")),
            };
        }
        DataFormat::Onto => loads(&text).map_err(|e| located(&e))?,
    };
    let text = match to {
        DataFormat::Onto => dumps(&doc).map_err(|e| CliError::Input(e.to_string()))?,
        DataFormat::Json => {
            let blocks: Vec<_> = match entity {
                Some(name) => vec![doc
                    .entity(name)
                    .ok_or_else(|| CliError::Input(format!("no entity named `{name}`")))?],
                None => doc.entities().iter().collect(),
            };
            if let [block] = blocks.as_slice() {
                to_json(&records_of(block), json_style) + "\n"
            } else {
                // Several entities: one JSON object keyed by entity name.
                let mut wrapper = onto_core::Record::new();
                for block in blocks {
                    let items = records_of(block).into_iter().map(onto_core::Value::Record).collect();
                    wrapper
                        .push(block.name(), onto_core::Value::Array(items))
                        .map_err(|e| CliError::Input(e.to_string()))?;
                }
                onto_core::baseline::object_to_json(&wrapper, json_style) + "\n"
            }
        }
    };
    write_output(output, &text)
}

fn validate(inputs: &[PathBuf]) -> CliResult {
    let mut failed = false;
    for path in inputs {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        match loads(&text) {
            Ok(doc) => {
                let summary: Vec<String> = doc
                    .entities()
                    .iter()
                    .map(|e| format!("{}[{}] ({} leaf fields)", e.name(), e.count(), e.leaves().len()))
                    .collect();
                println!("{}: ok: {}", path.display(), summary.join(", "));
            }
            Err(e) => {
                eprintln!("{}:{e}", path.display());
                failed = true;
            }
        }
    }
    if failed {
        Err(CliError::Input("validation failed".into()))
    } else {
        Ok(())
    }
}

fn generate_cmd(
    kind: DatasetKind,
    n: usize,
    seed: u64,
    format: OutFormat,
    json_style: JsonStyle,
    output: Option<&Path>,
) -> CliResult {
    let records = generate(&spec_for(kind, n, seed)?);
    let text = match format {
        OutFormat::Json => to_json(&records, json_style) + "\n",
        OutFormat::Yaml => to_yaml(&records),
        OutFormat::Onto => dumps_records(kind.entity_name(), &records).map_err(|e| CliError::Runtime(e.to_string()))?,
    };
    write_output(output, &text)
}

fn bench_cmd(model: &TokenizerModel, config: &BenchConfig, output: Option<&Path>) -> CliResult {
    let reports = bench::run_bench(model, config).map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut jsonl = String::new();
    for r in &reports {
        jsonl.push_str(&serde_json::to_string(r).expect("reports serialize"));
        jsonl.push('\n');
    }
    write_output(output, &jsonl)?;

    let summary = bench::summarize(&reports);
    let mut table = format!(
        "{:<8} {:>7} {:>4} {:>11} {:>11} {:>11} {:>9} {:>9}\n",
        "dataset", "records", "runs", "json", "yaml", "onto", "yaml red", "onto red"
    );
    for cell in &summary {
        table.push_str(&format!(
            "{:<8} {:>7} {:>4} {:>11.1} {:>11.1} {:>11.1} {:>8.1}% {:>8.1}%\n",
            cell.dataset,
            cell.n_records,
            cell.runs,
            cell.mean_tokens[&Format::Json],
            cell.mean_tokens[&Format::Yaml],
            cell.mean_tokens[&Format::Onto],
            100.0 * cell.mean_reduction[&Format::Yaml],
            100.0 * cell.mean_reduction[&Format::Onto],
        ));
    }
    for kind in &config.kinds {
        if let Some(drift) = bench::reduction_drift(&summary, *kind) {
            table.push_str(&format!(
                "{kind}: ONTO reduction drift across scales {:.2} pp\n",
                100.0 * drift
            ));
        }
    }
    table.push_str(&format!("rank file sha256 {}\n", model.content_hash()));
    if output.is_some() {
        print!("{table}");
    } else {
        eprint!("{table}");
    }
    Ok(())
}

fn crossover_cmd(model: &TokenizerModel, kind: DatasetKind, seed: u64, max_n: usize, style: JsonStyle) -> CliResult {
    let result = bench::crossover(model, kind, seed, style, max_n).map_err(|e| CliError::Runtime(e.to_string()))?;
    println!("{:>7} {:>7} {:>7} {:>7}", "records", "json", "onto", "ratio");
    for row in &result.rows {
        println!(
            "{:>7} {:>7} {:>7} {:>7.3}",
            row.n_records,
            row.json,
            row.onto,
            row.onto as f64 / row.json as f64
        );
    }
    match result.crossover {
        Some(n) => println!("crossover: {n} records"),
        None => println!("crossover: none up to {max_n} records"),
    }
    Ok(())
}

fn analyze_cmd(model: &TokenizerModel, kind: DatasetKind, n: usize, seed: u64, style: JsonStyle) -> CliResult {
    let records = generate(&spec_for(kind, n, seed)?);
    println!("{:<18} {:>10} {:>10} {:>10}", "category", "json", "yaml", "onto");
    let mut reports = Vec::new();
    for format in Format::ALL {
        let text =
            bench::render(&records, kind.entity_name(), format, style).map_err(|e| CliError::Runtime(e.to_string()))?;
        reports.push(compose(model, format, &text).map_err(|e| CliError::Runtime(e.to_string()))?);
    }
    let labels = [
        (Category::Key, "keys"),
        (Category::Punctuation, "punctuation"),
        (Category::Value, "values"),
        (Category::StructureIndent, "structure_indent"),
        (Category::Whitespace, "whitespace"),
    ];
    for (category, label) in labels {
        println!(
            "{:<18} {:>10} {:>10} {:>10}",
            label,
            reports[0].get(category),
            reports[1].get(category),
            reports[2].get(category)
        );
    }
    println!(
        "{:<18} {:>10} {:>10} {:>10}",
        "total", reports[0].total, reports[1].total, reports[2].total
    );
    Ok(())
}

fn prompt_pack_cmd(kind: DatasetKind, n: usize, seed: u64, warm: bool, style: JsonStyle, dir: &Path) -> CliResult {
    let spec = spec_for(kind, n, seed)?;
    let prompts = bench::prompt_pack(&spec, warm, style).map_err(|e| CliError::Runtime(e.to_string()))?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (format, text) in prompts {
        let suffix = if warm && format == Format::Onto { "-warm" } else { "" };
        let path = dir.join(format!("{kind}-{n}-{seed}-{format}{suffix}.prompt.txt"));
        fs::write(&path, text).map_err(io_err(&path))?;
        println!("{}", path.display());
    }
    Ok(())
}
