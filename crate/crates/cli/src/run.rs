use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use omd_core::oracle::{self, OracleConfig, OracleError};
use omd_core::schema::validate_schema;
use omd_core::{
    certain_answers, chase, parse_ontology, parse_query, AnswerSet, ChaseConfig, ChaseResult,
    ConjunctiveQuery, Ontology, Verdict,
};

use crate::args::{Cli, Command, EngineArgs, Format, QuerySource};
use crate::data::merge_csv;
use crate::report::{Answers, RunReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_INCONSISTENT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

/// Exit code for a chase verdict.
pub fn exit_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Consistent => EXIT_OK,
        Verdict::Inconsistent { .. } => EXIT_INCONSISTENT,
        Verdict::StepBudgetExhausted => EXIT_BUDGET,
    }
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let start = Instant::now();
    let mut report = RunReport::new(command_name(&cli.command));
    let result = execute(cli, &mut report);
    report.elapsed = start.elapsed();
    let (code, stdout) = match result {
        Ok(done) => done,
        Err(e) => {
            report.verdict = "error".into();
            report.diagnostics.push(format!("error: {e:#}"));
            (EXIT_ERROR, String::new())
        }
    };
    for d in &report.diagnostics {
        let _ = writeln!(err, "{d}");
    }
    match cli.format {
        Format::Text => {
            let _ = out.write_all(stdout.as_bytes());
            let _ = writeln!(err, "{}", report.summary());
        }
        Format::Json => {
            let _ = writeln!(out, "{}", report.to_json());
        }
    }
    code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Chase { .. } => "chase",
        Command::Check { .. } => "check",
        Command::Query { .. } => "query",
    }
}

/// Exit code and text for standard output.
type Done = (u8, String);

fn execute(cli: &Cli, report: &mut RunReport) -> Result<Done> {
    match &cli.command {
        Command::Validate { file } => {
            let o = load(cli, file)?;
            let r = validate_schema(&o);
            report
                .diagnostics
                .extend(r.diagnostics.iter().map(ToString::to_string));
            report.verdict = if r.is_ok() { "valid" } else { "invalid" }.into();
            Ok((if r.is_ok() { EXIT_OK } else { EXIT_ERROR }, String::new()))
        }
        Command::Chase { file, engine, out } => {
            let o = load_valid(cli, file, report)?;
            let Some(result) = materialize(&o, engine, report)? else {
                return Ok((EXIT_BUDGET, String::new()));
            };
            let export = result.instance.export();
            let mut stdout = String::new();
            match out {
                Some(path) => std::fs::write(path, &export)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => stdout = export.clone(),
            }
            report.instance = Some(export.lines().map(String::from).collect());
            Ok((exit_code(&result.verdict), stdout))
        }
        Command::Check { file, engine } => {
            let o = load_valid(cli, file, report)?;
            let code = match materialize(&o, engine, report)? {
                Some(result) => exit_code(&result.verdict),
                None => EXIT_BUDGET,
            };
            Ok((code, format!("{}\n", report.verdict)))
        }
        Command::Query {
            file,
            engine,
            query,
        } => {
            let mut o = load(cli, file)?;
            let q = resolve_query(&mut o, query)?;
            check_valid(&o, report)?;
            let Some(result) = materialize(&o, engine, report)? else {
                return Ok((EXIT_BUDGET, String::new()));
            };
            if !result.verdict.is_consistent() {
                return Ok((exit_code(&result.verdict), String::new()));
            }
            let answers = answer(&q, &result, engine.oracle)?;
            report.answers = Some(Answers::from(&answers));
            Ok((EXIT_OK, answers.to_tsv()))
        }
    }
}

fn load(cli: &Cli, file: &Path) -> Result<Ontology> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let mut o = parse_ontology(&text, file)?;
    for d in &cli.data {
        merge_csv(&mut o, &d.relation, &d.path)?;
    }
    Ok(o)
}

fn load_valid(cli: &Cli, file: &Path, report: &mut RunReport) -> Result<Ontology> {
    let o = load(cli, file)?;
    check_valid(&o, report)?;
    Ok(o)
}

/// Records all diagnostics and fails if any is an error.
fn check_valid(o: &Ontology, report: &mut RunReport) -> Result<()> {
    let r = validate_schema(o);
    report
        .diagnostics
        .extend(r.diagnostics.iter().map(ToString::to_string));
    let errors = r.errors().count();
    if errors > 0 {
        return Err(anyhow!("{errors} validation error(s)"));
    }
    Ok(())
}

fn resolve_query(o: &mut Ontology, source: &QuerySource) -> Result<ConjunctiveQuery> {
    match (&source.name, &source.inline) {
        (Some(name), _) => o
            .query(name)
            .cloned()
            .ok_or_else(|| anyhow!("no query named `{name}`")),
        (None, Some(text)) => {
            let q = parse_query(text, "<inline>")?;
            if o.query(&q.name).is_some() {
                return Err(anyhow!(
                    "inline query `{}` shadows a declared query",
                    q.name
                ));
            }
            // Validated together with the ontology.
            o.queries.push(q.clone());
            Ok(q)
        }
        (None, None) => Err(anyhow!("a query is required")),
    }
}

/// Runs the engine or the oracle. `None` means the oracle ran out of rounds.
fn materialize(
    o: &Ontology,
    engine: &EngineArgs,
    report: &mut RunReport,
) -> Result<Option<ChaseResult>> {
    let result = if engine.oracle {
        match oracle::naive_chase(o, &OracleConfig::default()) {
            Ok(r) => r,
            Err(OracleError::RoundBudgetExhausted(n)) => {
                report.verdict = Verdict::StepBudgetExhausted.to_string();
                report
                    .diagnostics
                    .push(format!("error: no fixpoint after {n} rounds"));
                return Ok(None);
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let mut config = ChaseConfig::default();
        if let Some(n) = engine.max_steps {
            config.max_steps = n;
        }
        chase(o, &config)?
    };
    report.steps_used = result.steps_used;
    report.verdict = result.verdict.to_string();
    match &result.verdict {
        Verdict::Consistent => {}
        Verdict::Inconsistent { constraint, .. } => {
            let at = constraint_span(o, constraint)
                .map(|s| format!("{s}: "))
                .unwrap_or_default();
            report
                .diagnostics
                .push(format!("{at}error: ontology is {}", result.verdict));
        }
        Verdict::StepBudgetExhausted => report.diagnostics.push(format!(
            "error: no fixpoint within {} steps",
            result.steps_used
        )),
    }
    Ok(Some(result))
}

fn constraint_span(o: &Ontology, id: &str) -> Option<String> {
    let span = o
        .nc(id)
        .and_then(|c| c.span.as_ref())
        .or_else(|| o.egd(id).and_then(|c| c.span.as_ref()))?;
    Some(span.to_string())
}

fn answer(q: &ConjunctiveQuery, result: &ChaseResult, use_oracle: bool) -> Result<AnswerSet> {
    if use_oracle {
        Ok(oracle::brute_force_answers(q, &result.dimensions, &result.instance)?.null_free())
    } else {
        Ok(certain_answers(q, result)?)
    }
}
