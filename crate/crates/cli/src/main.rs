use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use argkg_core::pipeline::{
    load_input, load_options, process_document, run_pipeline, ExitReport, Format, InputSpec, PipelineConfig,
    PipelineError, ReportedError,
};
use argkg_core::{to_canonical_json, DotOptions, DEFAULT_CAP};
use clap::{Args, Parser, Subcommand};

/// Turn annotated argumentative essays into knowledge graphs and compute
/// their extensions.
#[derive(Debug, Parser)]
#[command(name = "argkg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate annotations and emit the canonical JSON document.
    Ingest(Common),
    /// Build the KB graph, argument set and AKG.
    Build(Common),
    /// Compute naive and preferred extensions.
    Semantics(Common),
    /// Write the formats named with --format.
    Export(Common),
    /// Run every stage and write all formats.
    Run(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Essay text (.txt, paired with --ann) or canonical JSON document (.json).
    #[arg(long, short, required = true)]
    input: Vec<PathBuf>,
    /// Standoff annotations for the .txt inputs, in order; defaults to the
    /// sibling .ann file.
    #[arg(long)]
    ann: Vec<PathBuf>,
    /// Marker lexicon (TSV: surface, Premise|Claim); falls back to $ARGKG_LEXICON.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Preference chains, one per line, most preferred first: `A5 > A2`.
    #[arg(long)]
    prefs: Option<PathBuf>,
    /// Premise kind overrides (TSV: component id, n|p|a).
    #[arg(long)]
    kinds: Option<PathBuf>,
    /// Treat this relation's rule as strict (repeatable).
    #[arg(long = "strict", value_name = "RULE")]
    strict: Vec<String>,
    /// Also resolve markers that overlap a component span.
    #[arg(long)]
    implicit_ims: bool,
    /// Output directory; without it results go to stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Output format (repeatable).
    #[arg(long, short, value_name = "FORMAT")]
    format: Vec<Format>,
    /// Largest framework the extension engine accepts.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Report whether this comma-separated set is conflict-free and admissible (repeatable).
    #[arg(long = "check-set", value_name = "ID,ID,...", value_delimiter = ';')]
    check_set: Vec<String>,
    /// Draw pruned support edges in AKG DOT output.
    #[arg(long)]
    show_pruned: bool,
}

fn input_specs(c: &Common) -> Result<Vec<InputSpec>, String> {
    let mut anns = c.ann.iter();
    let mut specs = Vec::new();
    for path in &c.input {
        if path.extension().is_some_and(|e| e == "json") {
            specs.push(InputSpec::Json(path.clone()));
        } else {
            let ann = anns.next().cloned().unwrap_or_else(|| path.with_extension("ann"));
            specs.push(InputSpec::Brat { txt: path.clone(), ann });
        }
    }
    if anns.next().is_some() {
        return Err("more --ann files than .txt inputs".into());
    }
    Ok(specs)
}

fn config_for(command: &Command) -> Result<(PipelineConfig, bool), String> {
    let (c, defaults): (&Common, &[Format]) = match command {
        Command::Ingest(c) => (c, &[Format::JsonDoc]),
        Command::Build(c) => (c, &[Format::JsonKb, Format::JsonArgs, Format::JsonAkg]),
        Command::Semantics(c) => (c, &[Format::Semantics]),
        Command::Export(c) => (c, &[]),
        Command::Run(c) => (c, &Format::ALL),
    };
    let mut formats: BTreeSet<Format> = c.format.iter().copied().collect();
    if formats.is_empty() {
        if matches!(command, Command::Export(_)) {
            return Err("export needs at least one --format".into());
        }
        formats = defaults.iter().copied().collect();
    }
    let config = PipelineConfig {
        inputs: input_specs(c)?,
        lexicon: c.lexicon.clone(),
        prefs: c.prefs.clone(),
        kinds: c.kinds.clone(),
        strict_rules: c.strict.iter().cloned().collect(),
        implicit_ims: c.implicit_ims,
        out_dir: c.out.clone(),
        formats,
        cap: c.cap,
        check_sets: c.check_set.iter().map(|s| split_ids(s)).collect(),
        compute_semantics: matches!(command, Command::Run(_) | Command::Semantics(_)),
        dot: DotOptions { show_pruned: c.show_pruned },
    };
    Ok((config, matches!(command, Command::Ingest(_))))
}

fn split_ids(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn input_name(input: &InputSpec) -> String {
    match input {
        InputSpec::Brat { txt, .. } => txt.display().to_string(),
        InputSpec::Json(path) => path.display().to_string(),
    }
}

fn reported(input: &str, e: &PipelineError) -> ReportedError {
    ReportedError { input: input.to_string(), code: e.code(), message: e.to_string() }
}

/// Ingest only validates, so it never runs the later stages.
fn ingest(config: &PipelineConfig) -> ExitReport {
    let mut report = ExitReport::default();
    for input in &config.inputs {
        let name = input_name(input);
        match load_input(input) {
            Ok((doc, warnings)) => {
                for w in warnings {
                    log::warn!("{name}: {w}");
                }
                let json = to_canonical_json(&doc);
                match &config.out_dir {
                    Some(dir) => {
                        let path = dir.join(format!("{}.{}", doc.doc_id(), Format::JsonDoc.suffix()));
                        let written = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, json));
                        if let Err(source) = written {
                            report.errors.push(reported(&name, &PipelineError::Io { path, source }));
                        }
                    }
                    None => print!("{json}"),
                }
            }
            Err(e) => report.errors.push(reported(&name, &e)),
        }
    }
    report
}

/// Without an output directory, render each document's formats to stdout.
fn to_stdout(config: &PipelineConfig) -> ExitReport {
    let mut report = ExitReport::default();
    let opts = match load_options(config) {
        Ok(o) => o,
        Err(e) => {
            report.errors.push(reported("", &e));
            return report;
        }
    };
    let mut stdout = std::io::stdout().lock();
    for input in &config.inputs {
        let name = input_name(input);
        let result = load_input(input).and_then(|(doc, _)| process_document(doc, &opts));
        match result {
            Ok(out) => {
                for w in &out.warnings {
                    log::warn!("{name}: {w}");
                }
                for format in &config.formats {
                    let _ = stdout.write_all(out.render(*format, config.dot).as_bytes());
                }
                report.documents.push(out.summary());
            }
            Err(e) => report.errors.push(reported(&name, &e)),
        }
    }
    report
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (config, ingest_only) = match config_for(&cli.command) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    log::info!("{} input(s), formats {:?}", config.inputs.len(), config.formats);
    let report = if ingest_only {
        ingest(&config)
    } else if config.out_dir.is_some() || matches!(cli.command, Command::Run(_)) {
        run_pipeline(&config)
    } else {
        to_stdout(&config)
    };
    if ingest_only || config.out_dir.is_none() && !matches!(cli.command, Command::Run(_)) {
        for e in &report.errors {
            eprintln!("error [{}] {}: {}", e.code, e.input, e.message);
        }
    } else {
        print!("{report}");
    }
    ExitCode::from(report.exit_code() as u8)
}
