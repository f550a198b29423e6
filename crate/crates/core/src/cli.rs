//! The `npls` command line: argument parsing and the subcommands.
//!
//! Every command writes either a human-readable report or, with
//! `--format machine`, one JSON record per line. Exit codes are 0 on
//! success, 1 when the input is understood but fails (invalid proof,
//! unverified witness, broken condition) and 2 on I/O, parse or usage
//! errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::extract::{
    build_npls, build_pls, extract_witness_npls, extract_witness_pls, ExtractError,
    ExtractionContext, ExtractionMode, WitnessReport,
};
use crate::fixtures;
use crate::graph::{
    generate_family, npls_from_family, pls_from_digraph, CostedDigraph, FamilyNpls, GraphError,
    NestedGraphFamily,
};
use crate::json::{digraph_to_json, family_to_json, parse_input, InputFile, JsonError};
use crate::point::PointId;
use crate::proof::{
    generate_derivation, unfold, validate, Derivation, DerivationShape, FormulaClass, ProofClass,
    Rule, TemplateError,
};
use crate::search::verify::VERIFY_LIMIT_BITS;
use crate::search::{
    default_max_steps, solve_npls, solve_pls, verify_npls_conditions, verify_pls_conditions,
    NplsInstance, PlsCondition, PlsConditionReport, PlsInstance, SearchError, SearchTrace,
    SteepestDescent,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check a derivation against the calculus rules
    Validate,
    /// Compile a derivation to a search problem and read off a witness
    Extract,
    /// Run the solver and print its trace
    Solve,
    /// Check the search-problem conditions exhaustively
    Verify,
    /// Write a generated nested graph family
    GenGraph,
    /// Time generation, solving and extraction over a batch of seeds
    Bench,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    /// One JSON record per line
    Machine,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "npls",
    version,
    about = "Nested polynomial local search and proof-to-search compilation"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Input file, or a fixture name such as D3 or NG2
    pub input: Option<String>,
    /// Extraction mode; inferred from the cut formulas when omitted
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<ExtractionMode>,
    /// Parameter value for templates
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Solver step budget
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    #[arg(long, default_value_t = 2)]
    pub max_rank: u64,
    #[arg(long, default_value_t = 4)]
    pub max_width: usize,
    /// Number of seeds for bench
    #[arg(long, default_value_t = 20)]
    pub count: u64,
}

fn parse_mode(s: &str) -> Result<ExtractionMode, String> {
    match s {
        "pls" => Ok(ExtractionMode::Pls),
        "npls" => Ok(ExtractionMode::Npls),
        _ => Err(format!("unknown mode {s:?}, expected pls or npls")),
    }
}

impl RunConfig {
    /// A config for `command` with every option at its default.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            mode: None,
            x: None,
            seed: 0,
            max_steps: None,
            out: None,
            format: OutputFormat::Text,
            max_rank: 2,
            max_width: 4,
            count: 20,
        }
    }

    pub fn with_input(mut self, input: impl Into<String>) -> Self {
        self.input = Some(input.into());
        self
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: JsonError },
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Template(#[from] TemplateError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Usage(_)
            | CliError::Output(_) => 2,
            _ => 1,
        }
    }
}

/// Runs one command. Output goes to `--out` when given, else to `stdout`;
/// errors go to `stderr`. Returns the exit code.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let result = match &cfg.out {
        Some(path) => match fs::File::create(path) {
            Ok(file) => {
                let mut w = io::BufWriter::new(file);
                dispatch(cfg, &mut w)
                    .and_then(|code| w.flush().map(|_| code).map_err(CliError::from))
            }
            Err(source) => Err(CliError::Io {
                path: path.clone(),
                source,
            }),
        },
        None => dispatch(cfg, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cfg: &RunConfig, w: &mut dyn Write) -> Result<u8, CliError> {
    let mut out = Emitter {
        format: cfg.format,
        w,
    };
    match cfg.command {
        Command::Validate => cmd_validate(cfg, &mut out),
        Command::Extract => cmd_extract(cfg, &mut out),
        Command::Solve => cmd_solve(cfg, &mut out),
        Command::Verify => cmd_verify(cfg, &mut out),
        Command::GenGraph => cmd_gen_graph(cfg, &mut out),
        Command::Bench => cmd_bench(cfg, &mut out),
    }
}

/// Writes text lines or JSON records, whichever the format asks for.
pub struct Emitter<'a> {
    format: OutputFormat,
    w: &'a mut dyn Write,
}

impl Emitter<'_> {
    fn text(&mut self, line: impl AsRef<str>) -> io::Result<()> {
        if self.format == OutputFormat::Text {
            writeln!(self.w, "{}", line.as_ref())?;
        }
        Ok(())
    }

    fn record(&mut self, kind: &str, mut value: Value) -> io::Result<()> {
        if self.format == OutputFormat::Machine {
            if let Value::Object(map) = &mut value {
                map.insert("record".into(), Value::from(kind));
            }
            writeln!(self.w, "{value}")?;
        }
        Ok(())
    }

    fn text_block(&mut self, s: &str) -> io::Result<()> {
        if self.format == OutputFormat::Text {
            self.w.write_all(s.as_bytes())?;
        }
        Ok(())
    }

    fn raw(&mut self, s: &str) -> io::Result<()> {
        self.w.write_all(s.as_bytes())
    }
}

fn load(cfg: &RunConfig) -> Result<InputFile, CliError> {
    let name = cfg
        .input
        .as_deref()
        .ok_or_else(|| CliError::Usage("an input file is required".into()))?;
    let path = fixtures::resolve(name);
    let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    parse_input(&text).map_err(|source| CliError::Parse { path, source })
}

/// The derivation in `input`, unfolding templates at `--x`.
fn as_derivation(cfg: &RunConfig, input: InputFile) -> Result<Derivation, CliError> {
    match input {
        InputFile::Derivation(d) => match cfg.x {
            Some(x) if x != d.end_x => Err(CliError::Usage(format!(
                "--x {x} does not apply: the derivation is closed at x = {}",
                d.end_x
            ))),
            _ => Ok(d),
        },
        InputFile::Template(t) => Ok(unfold(&t, cfg.x.unwrap_or(0))?),
        other => Err(CliError::Usage(format!(
            "expected a derivation, got a {} file",
            other.kind()
        ))),
    }
}

/// `npls` when some cut is on a Σb2 formula, else `pls`.
pub fn infer_mode(d: &Derivation) -> ExtractionMode {
    let sigma2_cut = d
        .iter()
        .any(|(_, n)| matches!(&n.rule, Rule::Cut { formula } if formula.class() == FormulaClass::Sigma2));
    if sigma2_cut {
        ExtractionMode::Npls
    } else {
        ExtractionMode::Pls
    }
}

fn context(cfg: &RunConfig, d: Derivation) -> Result<ExtractionContext, CliError> {
    let mode = cfg.mode.unwrap_or_else(|| infer_mode(&d));
    Ok(ExtractionContext::new(d, mode)?)
}

pub fn cmd_validate(cfg: &RunConfig, out: &mut Emitter) -> Result<u8, CliError> {
    let d = as_derivation(cfg, load(cfg)?)?;
    let class = match cfg.mode {
        Some(ExtractionMode::Pls) => ProofClass::Sigma1,
        _ => ProofClass::Sigma2,
    };
    let report = validate(&d, class);
    out.text_block(&report.to_string())?;
    for f in &report.failures {
        out.record("failure", json!({ "path": f.path.0, "message": f.message }))?;
    }
    out.record(
        "summary",
        json!({ "valid": report.is_valid(), "failures": report.failures.len(), "nodes": d.len() }),
    )?;
    Ok(u8::from(!report.is_valid()))
}

fn witness_record(r: &WitnessReport) -> Value {
    json!({
        "mode": r.mode,
        "witness": r.witness,
        "solution": r.solution_node.0,
        "goal": r.goal_node.0,
        "verified": r.verified,
        "steps": r.trace.step_count(),
    })
}

fn extract(ctx: &ExtractionContext) -> Result<WitnessReport, CliError> {
    Ok(match ctx.mode() {
        ExtractionMode::Pls => extract_witness_pls(ctx)?,
        ExtractionMode::Npls => extract_witness_npls(ctx)?,
    })
}

pub fn cmd_extract(cfg: &RunConfig, out: &mut Emitter) -> Result<u8, CliError> {
    let ctx = context(cfg, as_derivation(cfg, load(cfg)?)?)?;
    let r = extract(&ctx)?;
    out.text(format!(
        "witness={} verified={} solution={} goal={} steps={}",
        r.witness,
        r.verified,
        r.solution_node,
        r.goal_node,
        r.trace.step_count()
    ))?;
    out.record("witness", witness_record(&r))?;
    Ok(u8::from(!r.verified))
}

fn emit_trace(
    out: &mut Emitter,
    trace: &SearchTrace,
    source_label: &dyn Fn(PointId) -> String,
    label: &dyn Fn(PointId) -> String,
) -> io::Result<()> {
    out.text(format!(
        "{:<5} {:<10} {:<10} {:>4} {:>6}  action",
        "level", "source", "target", "rank", "cost"
    ))?;
    for s in &trace.steps {
        let action = serde_json::to_value(s.action).unwrap_or(Value::Null);
        let kind = action["kind"].as_str().unwrap_or("?").to_string();
        out.text(format!(
            "{:<5} {:<10} {:<10} {:>4} {:>6}  {kind}",
            s.level,
            source_label(s.source),
            label(s.target),
            s.rank,
            s.cost
        ))?;
        out.record(
            "step",
            json!({
                "level": s.level,
                "source": source_label(s.source),
                "target": label(s.target),
                "rank": s.rank,
                "cost": s.cost,
                "action": action,
            }),
        )?;
    }
    Ok(())
}

fn family_label(inst: &FamilyNpls) -> impl Fn(PointId) -> String + '_ {
    |t| match inst.decode(t) {
        Some((p, v)) => format!("{p}:{v}"),
        None => t.to_string(),
    }
}

pub fn cmd_solve(cfg: &RunConfig, out: &mut Emitter) -> Result<u8, CliError> {
    match load(cfg)? {
        InputFile::Digraph(g) => {
            let inst = SteepestDescent(pls_from_digraph(&g, 0, g.nodes as u64)?);
            let steps = cfg
                .max_steps
                .unwrap_or(default_max_steps(inst.d_bound().at_len_of(0)));
            let (y, trace) = solve_pls(&inst, 0, steps)?;
            emit_trace(out, &trace, &|p| p.to_string(), &|p| p.to_string())?;
            out.text(format!("solution={y} cost={}", inst.cost(0, y)))?;
            out.record(
                "solution",
                json!({ "point": y.0, "cost": inst.cost(0, y), "steps": trace.step_count() }),
            )?;
        }
        InputFile::Family(f) => {
            let inst = npls_from_family(&f)?;
            let x = cfg.x.unwrap_or(0);
            let steps = cfg
                .max_steps
                .unwrap_or_else(|| default_max_steps(inst.d_bits(x)));
            let (y, trace) = solve_npls(&inst, x, steps)?;
            let label = family_label(&inst);
            emit_trace(out, &trace, &|p| format!("p{p}"), &label)?;
            out.text(format!("solution={}", label(y)))?;
            out.record(
                "solution",
                json!({ "point": label(y), "steps": trace.step_count() }),
            )?;
        }
        input => {
            let ctx = context(cfg, as_derivation(cfg, input)?)?;
            let r = extract(&ctx)?;
            let label = |p: PointId| {
                ctx.path_of(p)
                    .map_or_else(|| p.to_string(), |path| path.to_string())
            };
            emit_trace(out, &r.trace, &label, &label)?;
            out.text(format!("witness={} verified={}", r.witness, r.verified))?;
            out.record("witness", witness_record(&r))?;
            return Ok(u8::from(!r.verified));
        }
    }
    Ok(0)
}

fn emit_pls_report(out: &mut Emitter, report: &PlsConditionReport) -> io::Result<()> {
    for (c, counterexample) in &report.results {
        let name = match c {
            PlsCondition::SizeBound => "size-bound",
            PlsCondition::InitialFeasible => "initial-feasible",
            PlsCondition::NeighborFeasible => "neighbor-feasible",
            PlsCondition::CostDescent => "cost-descent",
        };
        match counterexample {
            None => out.text(format!("{name:<17} pass"))?,
            Some(p) => out.text(format!("{name:<17} FAIL ({p})"))?,
        }
        out.record(
            "condition",
            json!({ "name": name, "passed": counterexample.is_none(), "counterexample": counterexample.map(|p| vec![p.0]) }),
        )?;
    }
    Ok(())
}

fn emit_npls_report(out: &mut Emitter, report: &crate::search::ConditionReport) -> io::Result<()> {
    out.text_block(&report.to_string())?;
    for r in &report.results {
        out.record(
            "condition",
            json!({
                "name": r.condition.name(),
                "passed": r.passed(),
                "counterexample": r.counterexample.as_ref().map(|t| t.iter().map(|p| p.0).collect::<Vec<_>>()),
            }),
        )?;
    }
    Ok(())
}

fn verify_family(out: &mut Emitter, f: &NestedGraphFamily) -> Result<bool, CliError> {
    if let Err(e) = f.check() {
        out.text(format!("note: {e}"))?;
    }
    let report = verify_npls_conditions(&FamilyNpls::new_unchecked(f), 0)?;
    emit_npls_report(out, &report)?;
    Ok(report.all_passed())
}

fn verify_digraph(out: &mut Emitter, g: &CostedDigraph) -> Result<bool, CliError> {
    let inst = SteepestDescent(pls_from_digraph(g, 0, g.nodes as u64)?);
    let report = verify_pls_conditions(&inst, 0, VERIFY_LIMIT_BITS)?;
    emit_pls_report(out, &report)?;
    Ok(report.all_passed())
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut Emitter) -> Result<u8, CliError> {
    let passed = match load(cfg)? {
        InputFile::Family(f) => verify_family(out, &f)?,
        InputFile::Digraph(g) => verify_digraph(out, &g)?,
        input => {
            let ctx = context(cfg, as_derivation(cfg, input)?)?;
            match ctx.mode() {
                ExtractionMode::Pls => {
                    let report =
                        verify_pls_conditions(&build_pls(&ctx)?, ctx.x(), VERIFY_LIMIT_BITS)?;
                    emit_pls_report(out, &report)?;
                    report.all_passed()
                }
                ExtractionMode::Npls => {
                    let report = verify_npls_conditions(&build_npls(&ctx)?, ctx.x())?;
                    emit_npls_report(out, &report)?;
                    report.all_passed()
                }
            }
        }
    };
    out.record("summary", json!({ "passed": passed }))?;
    Ok(u8::from(!passed))
}

fn check_generator_args(cfg: &RunConfig) -> Result<(), CliError> {
    use crate::graph::{MAX_GENERATED_RANK, MAX_GENERATED_WIDTH};
    if cfg.max_rank > MAX_GENERATED_RANK {
        return Err(CliError::Usage(format!(
            "--max-rank must be at most {MAX_GENERATED_RANK}"
        )));
    }
    if !(1..=MAX_GENERATED_WIDTH).contains(&cfg.max_width) {
        return Err(CliError::Usage(format!(
            "--max-width must be in 1..={MAX_GENERATED_WIDTH}"
        )));
    }
    Ok(())
}

/// Writes the family for `--seed`; with `--max-rank 0` the top problem is
/// written as a plain digraph.
pub fn cmd_gen_graph(cfg: &RunConfig, out: &mut Emitter) -> Result<u8, CliError> {
    check_generator_args(cfg)?;
    let f = generate_family(cfg.seed, cfg.max_rank, cfg.max_width);
    let text = if cfg.max_rank == 0 {
        digraph_to_json(&f.top_problem().graph)
    } else {
        family_to_json(&f)
    };
    out.raw(&text)?;
    Ok(0)
}

pub fn cmd_bench(cfg: &RunConfig, out: &mut Emitter) -> Result<u8, CliError> {
    check_generator_args(cfg)?;
    let seeds = cfg.seed..cfg.seed.saturating_add(cfg.count);
    let mut failures = 0u64;

    let start = Instant::now();
    let mut steps = 0;
    for seed in seeds.clone() {
        let inst = npls_from_family(&generate_family(seed, cfg.max_rank, cfg.max_width))?;
        let budget = cfg.max_steps.unwrap_or(1 << 24);
        match solve_npls(&inst, 0, budget) {
            Ok((_, trace)) => steps += trace.step_count(),
            Err(_) => failures += 1,
        }
    }
    bench_line(out, "families", cfg.count, steps, start)?;

    for (name, class, mode) in [
        ("sigma1-proofs", ProofClass::Sigma1, ExtractionMode::Pls),
        ("sigma2-proofs", ProofClass::Sigma2, ExtractionMode::Npls),
    ] {
        let start = Instant::now();
        let mut steps = 0;
        for seed in seeds.clone() {
            let d = generate_derivation(seed, DerivationShape::new(class));
            let ok = ExtractionContext::new(d, mode)
                .map_err(CliError::from)
                .and_then(|ctx| extract(&ctx));
            match ok {
                Ok(r) if r.verified => steps += r.trace.step_count(),
                _ => failures += 1,
            }
        }
        bench_line(out, name, cfg.count, steps, start)?;
    }
    out.text(format!("failures {failures}"))?;
    out.record("summary", json!({ "failures": failures }))?;
    Ok(u8::from(failures > 0))
}

fn bench_line(
    out: &mut Emitter,
    name: &str,
    count: u64,
    steps: usize,
    start: Instant,
) -> io::Result<()> {
    let ms = start.elapsed().as_secs_f64() * 1e3;
    out.text(format!(
        "{name:<14} {count:>4} runs {steps:>8} steps {ms:>9.2} ms"
    ))?;
    out.record(
        "bench",
        json!({ "name": name, "runs": count, "steps": steps, "ms": ms }),
    )
}
