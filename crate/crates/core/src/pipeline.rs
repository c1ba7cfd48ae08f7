//! End-to-end driver: ingest, markers, knowledge base, arguments, AKG,
//! semantics and exports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::akg::{build_akg, Akg, AkgError, EdgeKind};
use crate::annotation::{
    parse_brat_ann_with_warnings, parse_canonical_json_with_warnings, to_canonical_json, AnnotatedDocument,
    ComponentKind, IngestError,
};
use crate::arguments::{derive_argument_set_with_warnings, rule_argument_ids, ArgumentSet};
use crate::diagnostics::Warning;
use crate::ekb::{build_ekb, parse_kind_overrides, Ekb, EkbConfig, EkbError, PreferenceConfig, PremiseKind};
use crate::export::{export_akg_dot, export_apx, export_kb_dot, to_json, DotOptions};
use crate::kb_graph::{build_kb_graph, KbGraph};
use crate::markers::{detect_ims, resolve_implicit_ims, ImMatch, LexiconError, MarkerLexicon};
use crate::semantics::{project_af, semantics_report, AfProjection, SemanticsError, SemanticsReport, DEFAULT_CAP};

/// Environment variable naming a lexicon file used when none is given.
pub const LEXICON_ENV: &str = "ARGKG_LEXICON";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Format {
    JsonDoc,
    DotKb,
    DotAkg,
    JsonKb,
    JsonAkg,
    JsonArgs,
    Apx,
    Semantics,
}

impl Format {
    pub const ALL: [Format; 8] = [
        Format::JsonDoc,
        Format::DotKb,
        Format::DotAkg,
        Format::JsonKb,
        Format::JsonAkg,
        Format::JsonArgs,
        Format::Apx,
        Format::Semantics,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Format::JsonDoc => "json-doc",
            Format::DotKb => "dot-kb",
            Format::DotAkg => "dot-akg",
            Format::JsonKb => "json-kb",
            Format::JsonAkg => "json-akg",
            Format::JsonArgs => "json-args",
            Format::Apx => "apx",
            Format::Semantics => "semantics",
        }
    }

    /// Output file suffix, appended to the document id.
    pub fn suffix(self) -> &'static str {
        match self {
            Format::JsonDoc => "doc.json",
            Format::DotKb => "kb.dot",
            Format::DotAkg => "akg.dot",
            Format::JsonKb => "kb.json",
            Format::JsonAkg => "akg.json",
            Format::JsonArgs => "args.json",
            Format::Apx => "apx",
            Format::Semantics => "semantics.json",
        }
    }

    pub fn needs_semantics(self) -> bool {
        self == Format::Semantics
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Format::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown format {s:?}; expected one of {}", Format::ALL.map(|f| f.as_str()).join(", ")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSpec {
    Brat { txt: PathBuf, ann: PathBuf },
    Json(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub inputs: Vec<InputSpec>,
    pub lexicon: Option<PathBuf>,
    pub prefs: Option<PathBuf>,
    pub kinds: Option<PathBuf>,
    pub strict_rules: BTreeSet<String>,
    pub implicit_ims: bool,
    pub out_dir: Option<PathBuf>,
    pub formats: BTreeSet<Format>,
    pub cap: usize,
    pub check_sets: Vec<Vec<String>>,
    /// Compute extensions even when no semantics output is requested.
    pub compute_semantics: bool,
    pub dot: DotOptions,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            inputs: vec![],
            lexicon: None,
            prefs: None,
            kinds: None,
            strict_rules: BTreeSet::new(),
            implicit_ims: false,
            out_dir: None,
            formats: BTreeSet::new(),
            cap: DEFAULT_CAP,
            check_sets: vec![],
            compute_semantics: false,
            dot: DotOptions::default(),
        }
    }
}

/// Settings shared by every document of a run.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub lexicon: MarkerLexicon,
    pub preferences: PreferenceConfig,
    pub kind_overrides: BTreeMap<String, PremiseKind>,
    pub strict_rules: BTreeSet<String>,
    pub implicit_ims: bool,
    pub cap: usize,
    pub check_sets: Vec<Vec<String>>,
    pub compute_semantics: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            lexicon: MarkerLexicon::builtin(),
            preferences: PreferenceConfig::default(),
            kind_overrides: BTreeMap::new(),
            strict_rules: BTreeSet::new(),
            implicit_ims: false,
            cap: DEFAULT_CAP,
            check_sets: vec![],
            compute_semantics: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Ekb(#[from] EkbError),
    #[error(transparent)]
    Akg(#[from] AkgError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

impl PipelineError {
    /// Module-qualified error code.
    pub fn code(&self) -> String {
        fn variant<T: fmt::Debug>(e: &T) -> String {
            let dbg = format!("{e:?}");
            dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
        }
        match self {
            PipelineError::Io { .. } => "io/IOError".into(),
            PipelineError::Config(_) => "config/InvalidConfig".into(),
            PipelineError::Lexicon(e) => format!("marker_engine/{}", variant(e)),
            PipelineError::Ingest(e) => format!("annotation_ingest/{}", variant(e)),
            PipelineError::Ekb(e) => format!("ekb_core/{}", variant(e)),
            PipelineError::Akg(e) => format!("akg_builder/{}", variant(e)),
            PipelineError::Semantics(e) => format!("semantics_engine/{}", variant(e)),
        }
    }
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, content: &str) -> Result<(), PipelineError> {
    fs::write(path, content).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

/// Everything built for one document.
#[derive(Debug, Clone)]
pub struct DocumentOutput {
    pub doc: AnnotatedDocument,
    pub ims: Vec<ImMatch>,
    pub ekb: Ekb,
    pub kb: KbGraph,
    pub arguments: ArgumentSet,
    pub akg: Akg,
    pub af: AfProjection,
    pub semantics: Option<SemanticsReport>,
    pub warnings: Vec<Warning>,
}

impl DocumentOutput {
    pub fn render(&self, format: Format, dot: DotOptions) -> String {
        match format {
            Format::JsonDoc => to_canonical_json(&self.doc),
            Format::DotKb => export_kb_dot(&self.kb),
            Format::DotAkg => export_akg_dot(&self.akg, dot),
            Format::JsonKb => to_json(&self.kb),
            Format::JsonAkg => to_json(&self.akg),
            Format::JsonArgs => to_json(&self.arguments),
            Format::Apx => export_apx(&self.af),
            Format::Semantics => to_json(&self.semantics),
        }
    }

    pub fn summary(&self) -> DocumentSummary {
        DocumentSummary {
            doc_id: self.doc.doc_id().to_string(),
            arguments: self.arguments.len(),
            mp_groups: self.arguments.mp_applications.len(),
            supports: self.akg.edges_of_kind(EdgeKind::Support).count(),
            attacks: self.akg.edges_of_kind(EdgeKind::Attack).count(),
            pruned_supports: self.akg.prune_log.len(),
            naive_extensions: self.semantics.as_ref().map(|s| s.naive.len()),
            preferred_extensions: self.semantics.as_ref().map(|s| s.preferred.len()),
            warnings: self.warnings.clone(),
            files: vec![],
        }
    }
}

fn inference_markers(doc: &AnnotatedDocument, opts: &PipelineOptions) -> (Vec<ImMatch>, Vec<Warning>) {
    let mut ims = detect_ims(&doc.document, &opts.lexicon);
    let mut warnings = Vec::new();
    if opts.implicit_ims {
        let spans: BTreeMap<&str, _> = doc
            .components
            .iter()
            .filter(|c| c.kind != ComponentKind::InferenceRule)
            .filter_map(|c| c.span.map(|s| (c.comp_id.as_str(), s)))
            .collect();
        let pairs: Vec<_> = doc
            .relations
            .iter()
            .filter_map(|r| Some((*spans.get(r.source.as_str())?, *spans.get(r.target.as_str())?)))
            .collect();
        let (implicit, w) = resolve_implicit_ims(&doc.document, &pairs, &ims);
        ims.extend(implicit);
        ims.sort_by_key(|m| (m.span.start, m.span.end));
        warnings = w;
    }
    (ims, warnings)
}

/// Preference chains may name IRP arguments (`A5 > A2`); those are mapped to
/// rule ids through a preference-free derivation, whose numbering is the same.
fn resolve_preferences(
    doc: &AnnotatedDocument,
    ims: &[ImMatch],
    opts: &PipelineOptions,
) -> Result<PreferenceConfig, PipelineError> {
    if opts.preferences.chains.is_empty() {
        return Ok(PreferenceConfig::default());
    }
    let base = EkbConfig {
        preferences: PreferenceConfig::default(),
        kind_overrides: opts.kind_overrides.clone(),
        strict_rules: opts.strict_rules.clone(),
    };
    let (ekb, _) = build_ekb(doc, ims, &base)?;
    let (aset, _) = derive_argument_set_with_warnings(&ekb, doc);
    let by_arg: BTreeMap<String, String> =
        rule_argument_ids(&aset).into_iter().map(|(rule, arg)| (arg, rule.to_string())).collect();
    Ok(opts.preferences.map_ids(|id| if ekb.rule(&id.into()).is_some() { None } else { by_arg.get(id).cloned() }))
}

/// Run every stage on one parsed document.
pub fn process_document(doc: AnnotatedDocument, opts: &PipelineOptions) -> Result<DocumentOutput, PipelineError> {
    let (ims, mut warnings) = inference_markers(&doc, opts);
    let config = EkbConfig {
        preferences: resolve_preferences(&doc, &ims, opts)?,
        kind_overrides: opts.kind_overrides.clone(),
        strict_rules: opts.strict_rules.clone(),
    };
    let (ekb, w) = build_ekb(&doc, &ims, &config)?;
    warnings.extend(w);
    let kb = build_kb_graph(&ekb, doc.doc_id());
    let (arguments, w) = derive_argument_set_with_warnings(&ekb, &doc);
    warnings.extend(w);
    let (akg, w) = build_akg(&ekb, &arguments, &doc)?;
    warnings.extend(w);
    let af = project_af(&akg);
    let semantics = if opts.compute_semantics || !opts.check_sets.is_empty() {
        Some(semantics_report(&af, opts.cap, &opts.check_sets)?)
    } else {
        None
    };
    Ok(DocumentOutput { doc, ims, ekb, kb, arguments, akg, af, semantics, warnings })
}

/// Load one input into an annotated document plus ingest warnings.
pub fn load_input(input: &InputSpec) -> Result<(AnnotatedDocument, Vec<Warning>), PipelineError> {
    match input {
        InputSpec::Brat { txt, ann } => {
            let doc_id = txt.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(parse_brat_ann_with_warnings(&doc_id, &read(txt)?, &read(ann)?)?)
        }
        InputSpec::Json(path) => Ok(parse_canonical_json_with_warnings(&read(path)?)?),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DocumentSummary {
    pub doc_id: String,
    pub arguments: usize,
    pub mp_groups: usize,
    pub supports: usize,
    pub attacks: usize,
    pub pruned_supports: usize,
    pub naive_extensions: Option<usize>,
    pub preferred_extensions: Option<usize>,
    pub warnings: Vec<Warning>,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportedError {
    pub input: String,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ExitReport {
    pub documents: Vec<DocumentSummary>,
    pub errors: Vec<ReportedError>,
}

impl ExitReport {
    pub fn is_success(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_success() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for ExitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.documents {
            write!(
                f,
                "{}: {} arguments, {} MP groups, {} supports ({} pruned), {} attacks",
                d.doc_id, d.arguments, d.mp_groups, d.supports, d.pruned_supports, d.attacks
            )?;
            if let (Some(n), Some(p)) = (d.naive_extensions, d.preferred_extensions) {
                write!(f, ", {n} naive / {p} preferred extensions")?;
            }
            writeln!(f)?;
            for w in &d.warnings {
                writeln!(f, "  warning: {w}")?;
            }
            for file in &d.files {
                writeln!(f, "  wrote {}", file.display())?;
            }
        }
        for e in &self.errors {
            writeln!(f, "error [{}] {}: {}", e.code, e.input, e.message)?;
        }
        Ok(())
    }
}

fn input_name(input: &InputSpec) -> String {
    match input {
        InputSpec::Brat { txt, .. } => txt.display().to_string(),
        InputSpec::Json(path) => path.display().to_string(),
    }
}

/// Read the optional side files named in `config` into shared options.
pub fn load_options(config: &PipelineConfig) -> Result<PipelineOptions, PipelineError> {
    let lexicon_path = config.lexicon.clone().or_else(|| std::env::var_os(LEXICON_ENV).map(PathBuf::from));
    let lexicon = match lexicon_path {
        Some(path) => MarkerLexicon::parse(&read(&path)?)?,
        None => MarkerLexicon::builtin(),
    };
    let preferences = match &config.prefs {
        Some(path) => PreferenceConfig::parse(&read(path)?)?,
        None => PreferenceConfig::default(),
    };
    let kind_overrides = match &config.kinds {
        Some(path) => parse_kind_overrides(&read(path)?)?,
        None => BTreeMap::new(),
    };
    Ok(PipelineOptions {
        lexicon,
        preferences,
        kind_overrides,
        strict_rules: config.strict_rules.clone(),
        implicit_ims: config.implicit_ims,
        cap: config.cap,
        check_sets: config.check_sets.clone(),
        compute_semantics: config.compute_semantics || config.formats.iter().any(|f| f.needs_semantics()),
    })
}

fn run_one(input: &InputSpec, opts: &PipelineOptions, config: &PipelineConfig) -> Result<DocumentSummary, PipelineError> {
    let (doc, ingest_warnings) = load_input(input)?;
    let mut out = process_document(doc, opts)?;
    out.warnings.splice(0..0, ingest_warnings);
    let mut summary = out.summary();
    if let Some(dir) = &config.out_dir {
        fs::create_dir_all(dir).map_err(|source| PipelineError::Io { path: dir.clone(), source })?;
        for format in &config.formats {
            let path = dir.join(format!("{}.{}", out.doc.doc_id(), format.suffix()));
            write(&path, &out.render(*format, config.dot))?;
            summary.files.push(path);
        }
    }
    Ok(summary)
}

/// Process every input (in parallel) and write the requested outputs.
pub fn run_pipeline(config: &PipelineConfig) -> ExitReport {
    let mut report = ExitReport::default();
    if config.inputs.is_empty() {
        let e = PipelineError::Config("no input documents".into());
        report.errors.push(ReportedError { input: String::new(), code: e.code(), message: e.to_string() });
        return report;
    }
    let opts = match load_options(config) {
        Ok(o) => o,
        Err(e) => {
            report.errors.push(ReportedError { input: String::new(), code: e.code(), message: e.to_string() });
            return report;
        }
    };
    let results: Vec<_> = config.inputs.par_iter().map(|input| (input, run_one(input, &opts, config))).collect();
    for (input, result) in results {
        match result {
            Ok(summary) => report.documents.push(summary),
            Err(e) => {
                log::error!("{}: {e}", input_name(input));
                report.errors.push(ReportedError { input: input_name(input), code: e.code(), message: e.to_string() })
            }
        }
    }
    report
}
