//! `engel-nq`: nilpotent quotients, pc presentation tools, the finite-group
//! oracle and the scripted verification runs.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check
//! fails, 2 for usage, I/O and parse errors, 3 when a resource budget ran
//! out.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use engel_core::nq::{nilpotent_quotient, Budget, InstanceStrategy, NqError, NqOptions, NqState};
use engel_core::oracle::{self, check_lemma, enumerate, right_2_engel_set, OracleError};
use engel_core::par::Execution;
use engel_core::pcp::json::{self as pcp_json, PcpDocument};
use engel_core::pcp::{consistency_violations, PcPresentation, PcpError};
use engel_core::verify::{self, ScenarioReport, VerifyOptions};
use engel_core::words::parse_presentation;

#[derive(Parser, Debug)]
#[command(name = "engel-nq", version, about = "Nilpotent quotients of groups with laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized audits.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true, env = "ENGEL_NQ_BUDGET_SECONDS")]
    budget_seconds: Option<f64>,
    /// Maximum number of relation rows per class step.
    #[arg(long, global = true)]
    budget_rows: Option<usize>,
    /// Run every phase on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the largest nilpotent quotient of a presentation file.
    Nq {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        max_class: u32,
        /// Law instances: 1 (generators), 2 (products) or full.
        #[arg(long, default_value = "full")]
        depth: InstanceStrategy,
        /// Also write the pc presentation as JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the overlap tests on a pc presentation JSON file.
    Consistency {
        file: PathBuf,
        /// Run every test instead of those up to weight class + 1.
        #[arg(long)]
        full: bool,
    },
    /// Collect a word such as `g1^2 g0 g2^-1` to normal form.
    Collect { file: PathBuf, word: String },
    #[command(subcommand)]
    Oracle(OracleCommand),
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args, Debug)]
struct GroupInput {
    /// A presentation file, or a pc presentation JSON file.
    file: PathBuf,
    #[arg(long, default_value_t = 20)]
    max_class: u32,
    #[arg(long, default_value = "full")]
    depth: InstanceStrategy,
    /// Largest group the oracle will enumerate.
    #[arg(long, default_value_t = oracle::DEFAULT_GUARD)]
    bound: usize,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Check that every involution of G/R2(G) is left 2-Engel.
    CheckLemma(GroupInput),
    /// Describe the right 2-Engel elements R2(G).
    R2(GroupInput),
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Reproduce the computation of N and its control runs.
    Paper {
        #[arg(long, default_value = "full")]
        depth: InstanceStrategy,
    },
    /// The group generated by n left 2-Engel involutions.
    Small {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        max_class: u32,
        #[arg(long, default_value_t = oracle::DEFAULT_GUARD)]
        bound: usize,
        /// Allow n other than 2.
        #[arg(long)]
        allow_large: bool,
    },
}

enum Failure {
    Usage(String),
    Check(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<NqError> for Failure {
    fn from(e: NqError) -> Self {
        match e {
            NqError::Word(_) | NqError::Pcp(PcpError::Invalid(_)) => Failure::Usage(e.to_string()),
            NqError::Budget(_) => Failure::Budget(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => Failure::Budget(e.to_string()),
            OracleError::ExponentTooLarge(_) | OracleError::Infinite => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<PcpError> for Failure {
    fn from(e: PcpError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Outcome of a command: what to print and the exit status.
struct Output {
    text: String,
    report: Value,
    runtime_ms: u64,
    failure: Option<Failure>,
}

impl Output {
    fn ok(text: String, report: Value) -> Self {
        Output {
            text,
            report,
            runtime_ms: 0,
            failure: None,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn execution(g: &Global) -> Execution {
    if g.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn budget(g: &Global) -> Result<Budget, Failure> {
    let mut b = match g.budget_seconds {
        Some(s) if !(s > 0.0 && s.is_finite()) => {
            return Err(Failure::Usage(format!("budget seconds must be positive, got {s}")))
        }
        Some(s) => Budget::with_seconds(s),
        None => Budget::default(),
    };
    if g.budget_rows == Some(0) {
        return Err(Failure::Usage("budget rows must be positive".into()));
    }
    b.max_rows = g.budget_rows;
    Ok(b)
}

fn nq_options(g: &Global, max_class: u32, depth: InstanceStrategy) -> Result<NqOptions, Failure> {
    Ok(NqOptions {
        max_class,
        strategy: depth,
        execution: execution(g),
        budget: budget(g)?,
        check_consistency: true,
    })
}

fn run_nq(file: &Path, opts: &NqOptions) -> Result<NqState, Failure> {
    let p = parse_presentation(&read(file)?).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    Ok(nilpotent_quotient(&p, opts)?)
}

fn read_pcp(file: &Path) -> Result<PcpDocument, Failure> {
    pcp_json::from_json(&read(file)?).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))
}

fn cmd_nq(g: &Global, file: &Path, max_class: u32, depth: InstanceStrategy, out: Option<&Path>) -> Result<Output, Failure> {
    let s = run_nq(file, &nq_options(g, max_class, depth)?)?;
    if let Some(out) = out {
        let text = pcp_json::to_canonical_json(&s.pcp, Some(&s.image_map()));
        std::fs::write(out, text + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
    }
    let mut text = String::new();
    for st in &s.log {
        text.push_str(&format!(
            "class {}: {} tails, {} rows, rank {}, {} new generators\n",
            st.class,
            st.tails,
            st.rows,
            st.rank,
            st.new_rel_orders.len()
        ));
    }
    let order = s.order().map_or("infinite".to_string(), |o| o.to_string());
    text.push_str(&format!(
        "{}: class {}, order {}{}\n",
        s.presentation.name,
        s.class,
        order,
        if s.truncated { " (truncated)" } else { "" }
    ));
    Ok(Output::ok(text, s.to_json()))
}

fn cmd_consistency(g: &Global, file: &Path, full: bool) -> Result<Output, Failure> {
    let doc = read_pcp(file)?;
    let v = consistency_violations(&doc.pcp, full, execution(g))?;
    let mut text = format!("{} violations\n", v.len());
    for x in &v {
        text.push_str(&format!("  {:?}: {} vs {}\n", x.test, x.left, x.right));
    }
    let report = json!({
        "violations": v.iter().map(|x| json!({
            "test": format!("{:?}", x.test),
            "left": pcp_json::vector_value(&x.left),
            "right": pcp_json::vector_value(&x.right),
        })).collect::<Vec<_>>(),
    });
    let mut out = Output::ok(text, report);
    if !v.is_empty() {
        out.failure = Some(Failure::Check(format!("{} consistency violations", v.len())));
    }
    Ok(out)
}

/// Parses `g2^-1 g0^3` (letters separated by spaces or `*`).
fn parse_pc_word(s: &str, p: &PcPresentation) -> Result<Vec<(usize, i64)>, Failure> {
    let bad = |t: &str| Failure::Usage(format!("bad letter `{t}`; expected g<index> or g<index>^<exponent>"));
    s.split(|c: char| c.is_whitespace() || c == '*')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let body = t.strip_prefix('g').ok_or_else(|| bad(t))?;
            let (g, e) = match body.split_once('^') {
                Some((g, e)) => (g, e.parse::<i64>().map_err(|_| bad(t))?),
                None => (body, 1),
            };
            let g: usize = g.parse().map_err(|_| bad(t))?;
            if g >= p.n() {
                return Err(Failure::Usage(format!("generator g{g} out of range (n = {})", p.n())));
            }
            Ok((g, e))
        })
        .collect()
}

fn cmd_collect(file: &Path, word: &str) -> Result<Output, Failure> {
    let doc = read_pcp(file)?;
    let w = parse_pc_word(word, &doc.pcp)?;
    let v = doc.pcp.collect(&w)?;
    Ok(Output::ok(format!("{v}\n"), json!({ "normal_form": pcp_json::vector_value(&v) })))
}

fn group_from_input(g: &Global, input: &GroupInput) -> Result<(String, PcPresentation), Failure> {
    let text = read(&input.file)?;
    if text.trim_start().starts_with('{') {
        let doc = read_pcp(&input.file)?;
        let name = input.file.file_stem().map_or("G".into(), |s| s.to_string_lossy().into_owned());
        Ok((name, doc.pcp))
    } else {
        let s = run_nq(&input.file, &nq_options(g, input.max_class, input.depth)?)?;
        Ok((s.presentation.name.clone(), s.pcp))
    }
}

fn cmd_check_lemma(g: &Global, input: &GroupInput) -> Result<Output, Failure> {
    let (name, p) = group_from_input(g, input)?;
    let group = enumerate(&p, input.bound, execution(g))?;
    let rep = check_lemma(&group, execution(g))?;
    let text = format!(
        "{name}: order {}, exponent {}, |R2| = {}, |G/R2| = {}, {} involutions, lemma {}\n",
        rep.order,
        rep.exponent,
        rep.r2_order,
        rep.quotient_order,
        rep.involution_count,
        if rep.lemma_pass { "holds" } else { "FAILS" }
    );
    let mut out = Output::ok(text, rep.to_json(&name));
    if !rep.lemma_pass {
        out.failure = Some(Failure::Check(format!("{} counterexamples", rep.witnesses.len())));
    }
    Ok(out)
}

fn cmd_r2(g: &Global, input: &GroupInput) -> Result<Output, Failure> {
    let (name, p) = group_from_input(g, input)?;
    let exec = execution(g);
    let group = enumerate(&p, input.bound, exec)?;
    let r2 = right_2_engel_set(&group, exec);
    let opt = |x: Option<u32>| x.map_or(Value::Null, |c| json!(c.to_string()));
    let report = json!({
        "group": name,
        "order": group.order().to_string(),
        "r2_order": r2.order().to_string(),
        "is_subgroup": r2.is_subgroup,
        "is_normal": r2.is_normal,
        "nilpotency_class": opt(r2.nilpotency_class),
        "derived_length": opt(r2.derived_length),
        "generators": r2.generators.iter().map(|&x| pcp_json::vector_value(group.label(x))).collect::<Vec<_>>(),
    });
    let show = |x: Option<u32>| x.map_or("none".to_string(), |c| c.to_string());
    let text = format!(
        "{name}: |G| = {}, |R2| = {}, subgroup {}, normal {}, class {}, derived length {}\n",
        group.order(),
        r2.order(),
        r2.is_subgroup,
        r2.is_normal,
        show(r2.nilpotency_class),
        show(r2.derived_length)
    );
    let mut out = Output::ok(text, report);
    if !(r2.is_subgroup && r2.is_normal) {
        out.failure = Some(Failure::Check("R2 is not a normal subgroup".into()));
    }
    Ok(out)
}

fn verify_options(g: &Global, depth: InstanceStrategy, bound: usize, allow_large: bool) -> Result<VerifyOptions, Failure> {
    Ok(VerifyOptions {
        execution: execution(g),
        budget: budget(g)?,
        strategy: depth,
        seed: g.seed,
        guard: bound,
        allow_large,
        ..VerifyOptions::default()
    })
}

fn reports_output(reports: Vec<ScenarioReport>) -> Output {
    let text: String = reports.iter().map(|r| r.to_text()).collect();
    let report = Value::Array(reports.iter().map(|r| r.to_canonical_json()).collect());
    let failure = if reports.iter().any(|r| r.checks.iter().any(|c| c.pass == Some(false))) {
        Some(Failure::Check("a check failed".into()))
    } else if reports.iter().any(|r| r.inconclusive) {
        Some(Failure::Budget("budget exhausted; the report is inconclusive".into()))
    } else {
        None
    };
    Output {
        text,
        report,
        runtime_ms: reports.iter().map(|r| r.runtime_ms).sum(),
        failure,
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Nq {
            file,
            max_class,
            depth,
            out,
        } => cmd_nq(g, file, *max_class, *depth, out.as_deref()),
        Command::Consistency { file, full } => cmd_consistency(g, file, *full),
        Command::Collect { file, word } => cmd_collect(file, word),
        Command::Oracle(OracleCommand::CheckLemma(input)) => cmd_check_lemma(g, input),
        Command::Oracle(OracleCommand::R2(input)) => cmd_r2(g, input),
        Command::Verify(VerifyCommand::Paper { depth }) => {
            let opts = verify_options(g, *depth, oracle::DEFAULT_GUARD, false)?;
            Ok(reports_output(verify::verify_paper(&opts)))
        }
        Command::Verify(VerifyCommand::Small {
            n,
            max_class,
            bound,
            allow_large,
        }) => {
            let opts = verify_options(g, InstanceStrategy::Complete, *bound, *allow_large)?;
            let r = verify::verify_small_quotients(*n, *max_class, &opts).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(reports_output(vec![r]))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    match dispatch(&cli) {
        Ok(mut out) => {
            if out.runtime_ms == 0 {
                out.runtime_ms = started.elapsed().as_millis() as u64;
            }
            if cli.global.json {
                let doc = json!({
                    "report": out.report,
                    "envelope": { "runtime_ms": out.runtime_ms.to_string() },
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json values serialize"));
            } else {
                print!("{}", out.text);
            }
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(f) => {
                    eprintln!("engel-nq: {}", f.message());
                    ExitCode::from(f.code())
                }
            }
        }
        Err(f) => {
            eprintln!("engel-nq: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
