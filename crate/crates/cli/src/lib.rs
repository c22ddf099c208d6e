//! Command-line front end. [`run`] takes the argument list and two sinks so
//! that tests can drive it in-process.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use zamo::alignment::{builtin_alignment, export_alignment_table, load_mappings, validate_mappings};
use zamo::inference::{saturate, scan_pitfalls, validate_instances, RuleSet};
use zamo::ontology::{builtin_graph, controlled_vocabulary, extract_schema, standard_prefixes, Module};
use zamo::query::parse_query;
use zamo::samod::{load_suite, run_iteration, run_regression, run_suite, TestReport};
use zamo::turtle::{parse_turtle, serialize_turtle, ParsedTurtle, PrefixMap};
use zamo::{Graph, Iri};

/// Process exit status: 0 success, 1 checks failed, 2 usage or input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExitStatus(u8);

impl ExitStatus {
    pub const SUCCESS: ExitStatus = ExitStatus(0);
    /// A well-formed run whose checks found problems.
    pub const FAILURE: ExitStatus = ExitStatus(1);
    pub const USAGE: ExitStatus = ExitStatus(2);

    pub fn code(self) -> u8 {
        self.0
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            Self::SUCCESS
        } else {
            Self::FAILURE
        }
    }
}

#[derive(Parser)]
#[command(name = "zamo", version, about = "Knowledge graph tools for the Zeri Art Market Ontology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a Turtle document and print it back in canonical form.
    Parse {
        file: PathBuf,
        /// Base IRI for relative references and the undeclared empty prefix.
        #[arg(long)]
        base: Option<String>,
    },
    /// Evaluate a SELECT query over a Turtle document and print CSV.
    Query {
        data: PathBuf,
        query: PathBuf,
        /// Saturate the data under the ZAMO schema before evaluating.
        #[arg(long)]
        reason: bool,
        /// Restrict the schema to these modules (repeatable).
        #[arg(long = "schema", value_enum)]
        schema: Vec<ModuleArg>,
        #[arg(long)]
        base: Option<String>,
    },
    /// Saturate a dataset and check it against the ZAMO schema.
    Validate {
        data: PathBuf,
        #[arg(long = "schema", value_enum)]
        schema: Vec<ModuleArg>,
        #[arg(long)]
        base: Option<String>,
    },
    /// Scan the ZAMO vocabulary, plus any extra model files, for modelling pitfalls.
    Pitfalls {
        #[arg(long = "schema", value_enum)]
        schema: Vec<ModuleArg>,
        /// Additional model documents merged into the scanned model.
        #[arg(long = "file")]
        files: Vec<PathBuf>,
    },
    /// Work with the SKOS alignment of a module.
    Align {
        #[command(subcommand)]
        action: AlignAction,
    },
    /// Replay SAMOD scenario suites.
    Samod {
        #[command(subcommand)]
        action: SamodAction,
    },
}

#[derive(Subcommand)]
enum AlignAction {
    /// Check the mappings against the vocabulary.
    Validate {
        #[arg(value_enum)]
        module: ModuleArg,
        /// Alignment document to check instead of the shipped one.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Print the alignment table as CSV.
    Export {
        #[arg(value_enum)]
        module: ModuleArg,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SamodAction {
    /// Run a suite, one iteration, or a regression.
    Run {
        manifest: PathBuf,
        /// Run only this iteration, or the regression up to it with `--regression`.
        #[arg(long)]
        iteration: Option<u32>,
        /// Rerun every earlier iteration too, in isolation and cumulatively.
        #[arg(long)]
        regression: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModuleArg {
    Agents,
    Events,
    Sources,
}

impl From<ModuleArg> for Module {
    fn from(m: ModuleArg) -> Module {
        match m {
            ModuleArg::Agents => Module::Agents,
            ModuleArg::Events => Module::Events,
            ModuleArg::Sources => Module::Sources,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

/// An error that ends the run with status 2.
struct Fatal(String);

impl<E: fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<ExitStatus, Fatal>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn print(&mut self, text: &str) -> Result<(), Fatal> {
        self.out.write_all(text.as_bytes()).map_err(Fatal::from)
    }

    fn warn(&mut self, line: impl fmt::Display) -> Result<(), Fatal> {
        writeln!(self.err, "{line}").map_err(Fatal::from)
    }
}

/// Runs the command line `args` (program name first).
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational =
                matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if informational {
                let _ = stdout.write_all(rendered.as_bytes());
                return ExitStatus::SUCCESS;
            }
            let _ = stderr.write_all(rendered.as_bytes());
            return ExitStatus::USAGE;
        }
    };
    let mut io = Io { out: stdout, err: stderr };
    match dispatch(cli.command, &mut io) {
        Ok(status) => status,
        Err(Fatal(message)) => {
            let _ = writeln!(io.err, "error: {message}");
            ExitStatus::USAGE
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Outcome {
    match command {
        Command::Parse { file, base } => parse_cmd(&file, base.as_deref(), io),
        Command::Query { data, query, reason, schema, base } => {
            query_cmd(&data, &query, reason, &modules(&schema), base.as_deref(), io)
        }
        Command::Validate { data, schema, base } => validate_cmd(&data, &modules(&schema), base.as_deref(), io),
        Command::Pitfalls { schema, files } => pitfalls_cmd(&modules(&schema), &files, io),
        Command::Align { action } => match action {
            AlignAction::Validate { module, file } => align_validate(module.into(), file.as_deref(), io),
            AlignAction::Export { module, file } => align_export(module.into(), file.as_deref(), io),
        },
        Command::Samod { action: SamodAction::Run { manifest, iteration, regression, report } } => {
            samod_run(&manifest, iteration, regression, report, io)
        }
    }
}

/// All three modules unless the user restricted the schema.
fn modules(selected: &[ModuleArg]) -> Vec<Module> {
    if selected.is_empty() {
        Module::ALL.to_vec()
    } else {
        let mut out: Vec<Module> = selected.iter().map(|&m| m.into()).collect();
        out.sort();
        out.dedup();
        out
    }
}

fn read(path: &Path) -> Result<String, Fatal> {
    fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn load_turtle(path: &Path, base: Option<&str>, io: &mut Io) -> Result<ParsedTurtle, Fatal> {
    let base = base.map(Iri::new).transpose().map_err(|e| Fatal(format!("--base: {e}")))?;
    let parsed = parse_turtle(&read(path)?, base.as_ref()).map_err(|e| {
        for d in &e.diagnostics {
            let _ = writeln!(io.err, "{}:{d}", path.display());
        }
        Fatal(format!("{}: not a valid Turtle document", path.display()))
    })?;
    for w in &parsed.warnings {
        io.warn(format_args!("{}:{w}", path.display()))?;
    }
    Ok(parsed)
}

fn parse_cmd(file: &Path, base: Option<&str>, io: &mut Io) -> Outcome {
    let parsed = load_turtle(file, base, io)?;
    io.print(&serialize_turtle(&parsed.graph, &parsed.prefixes))?;
    Ok(ExitStatus::SUCCESS)
}

/// The vocabularies of `modules`, the controlled vocabulary and `data`.
fn with_model(data: &Graph, modules: &[Module]) -> Graph {
    Graph::merge(&Graph::merge(data, &builtin_graph(modules)), &controlled_vocabulary())
}

fn merged_prefixes(extra: &PrefixMap) -> PrefixMap {
    let mut p = standard_prefixes();
    for (label, iri) in extra.iter() {
        p.insert(label, iri.clone());
    }
    p
}

fn query_cmd(data: &Path, query: &Path, reason: bool, modules: &[Module], base: Option<&str>, io: &mut Io) -> Outcome {
    let parsed = load_turtle(data, base, io)?;
    let prefixes = merged_prefixes(&parsed.prefixes);
    let q = parse_query(&read(query)?, &prefixes).map_err(|e| {
        for d in &e.diagnostics {
            let _ = writeln!(io.err, "{}:{d}", query.display());
        }
        Fatal(format!("{}: not a valid query", query.display()))
    })?;
    let graph = if reason {
        let model = with_model(&parsed.graph, modules);
        let schema = extract_schema(&model)?.schema;
        saturate(&model, &schema, RuleSet::all())
    } else {
        parsed.graph
    }
    .frozen();
    let table = zamo::query::evaluate(&q, &graph);
    io.print(&table.to_csv(&merged_prefixes(q.prefixes())))?;
    Ok(ExitStatus::SUCCESS)
}

fn validate_cmd(data: &Path, modules: &[Module], base: Option<&str>, io: &mut Io) -> Outcome {
    let parsed = load_turtle(data, base, io)?;
    let model = with_model(&parsed.graph, modules);
    let extracted = extract_schema(&model)?;
    let saturated = saturate(&model, &extracted.schema, RuleSet::all()).frozen();
    let violations = validate_instances(&saturated, &extracted.schema);
    let mut errors = 0;
    for v in &violations {
        io.print(&format!("{v}\n"))?;
        errors += usize::from(v.is_error());
    }
    io.print(&format!("{} finding(s), {errors} error(s)\n", violations.len()))?;
    if errors > 0 {
        io.warn(format_args!("{}: {errors} violation(s) of the schema", data.display()))?;
    }
    Ok(ExitStatus::from_pass(errors == 0))
}

fn pitfalls_cmd(modules: &[Module], files: &[PathBuf], io: &mut Io) -> Outcome {
    let mut model = builtin_graph(modules);
    for f in files {
        model = Graph::merge(&model, &load_turtle(f, None, io)?.graph);
    }
    let extracted = extract_schema(&model)?;
    for w in &extracted.warnings {
        io.warn(format_args!("warning: {w}"))?;
    }
    let found = scan_pitfalls(&extracted.schema);
    for p in &found {
        io.print(&format!("{p}\n"))?;
    }
    io.print(&format!("{} pitfall(s)\n", found.len()))?;
    if !found.is_empty() {
        io.warn(format_args!("model has {} pitfall(s)", found.len()))?;
    }
    Ok(ExitStatus::from_pass(found.is_empty()))
}

fn alignment_graph(module: Module, file: Option<&Path>, io: &mut Io) -> Result<Graph, Fatal> {
    match file {
        Some(f) => Ok(load_turtle(f, None, io)?.graph),
        None => Ok(builtin_alignment(module)),
    }
}

fn align_validate(module: Module, file: Option<&Path>, io: &mut Io) -> Outcome {
    let loaded = match load_mappings(&alignment_graph(module, file, io)?) {
        Ok(l) => l,
        Err(e) => {
            io.warn(format_args!("error: {e}"))?;
            return Ok(ExitStatus::FAILURE);
        }
    };
    for w in &loaded.warnings {
        io.warn(format_args!("warning: {w}"))?;
    }
    let schema = extract_schema(&builtin_graph(&Module::ALL))?.schema;
    let violations = validate_mappings(&loaded.mappings, &schema);
    for v in &violations {
        io.print(&format!("{v}\n"))?;
    }
    io.print(&format!("{} mapping(s), {} violation(s)\n", loaded.mappings.len(), violations.len()))?;
    if !violations.is_empty() {
        io.warn(format_args!("{module} alignment has {} violation(s)", violations.len()))?;
    }
    Ok(ExitStatus::from_pass(violations.is_empty()))
}

fn align_export(module: Module, file: Option<&Path>, io: &mut Io) -> Outcome {
    let loaded = match load_mappings(&alignment_graph(module, file, io)?) {
        Ok(l) => l,
        Err(e) => return Err(Fatal(e.to_string())),
    };
    for w in &loaded.warnings {
        io.warn(format_args!("warning: {w}"))?;
    }
    io.print(&export_alignment_table(&loaded.mappings, module))?;
    Ok(ExitStatus::SUCCESS)
}

fn samod_run(manifest: &Path, iteration: Option<u32>, regression: bool, format: ReportFormat, io: &mut Io) -> Outcome {
    let suite = load_suite(manifest)?;
    let missing = |id: u32| Fatal(format!("{}: no iteration {id}", manifest.display()));
    let report = match (iteration, regression) {
        (Some(id), true) => run_regression(&suite, id).ok_or_else(|| missing(id))?,
        (Some(id), false) => {
            let run = run_iteration(&suite, id).ok_or_else(|| missing(id))?;
            TestReport::from_runs(suite.module, None, vec![run])
        }
        (None, true) => {
            let last = suite.iterations.last().map(|i| i.id).ok_or_else(|| missing(0))?;
            run_regression(&suite, last).ok_or_else(|| missing(last))?
        }
        (None, false) => run_suite(&suite),
    };
    io.print(&match format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json(),
    })?;
    if !report.passed {
        io.warn(format_args!(
            "{}: {} of {} CQs passed; see the report",
            manifest.display(),
            report.cq_passed,
            report.cq_total
        ))?;
    }
    Ok(ExitStatus::from_pass(report.passed))
}
