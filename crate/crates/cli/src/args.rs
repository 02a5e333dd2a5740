use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Validate, chase and query ontological multidimensional data (OMD) files.
#[derive(Debug, Parser)]
#[command(name = "omd", version)]
pub struct Cli {
    /// Merge the rows of a CSV file into relation R. Repeatable.
    #[arg(long = "data", value_name = "R=PATH", global = true, value_parser = parse_data_arg)]
    pub data: Vec<DataArg>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an ontology for schema, rule and data errors.
    Validate { file: PathBuf },
    /// Materialize an ontology and print or export the resulting instance.
    Chase {
        file: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        /// Write the instance to PATH instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Materialize an ontology and report only whether it is consistent.
    Check {
        file: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Print the certain answers of a query.
    Query {
        file: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        query: QuerySource,
    },
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Maximum number of rule applications before giving up.
    #[arg(long, value_name = "N")]
    pub max_steps: Option<usize>,

    /// Use the brute-force reference chase instead of the engine.
    #[arg(long, hide = true)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct QuerySource {
    /// Name of a query declared in the file.
    #[arg(long, value_name = "Q")]
    pub name: Option<String>,

    /// An inline query, e.g. `query Q(w): exists s: Shifts(w, d; n, s).`
    #[arg(long = "q", value_name = "QUERY")]
    pub inline: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataArg {
    pub relation: String,
    pub path: PathBuf,
}

fn parse_data_arg(s: &str) -> Result<DataArg, String> {
    match s.split_once('=') {
        Some((r, p)) if !r.is_empty() && !p.is_empty() => Ok(DataArg {
            relation: r.to_string(),
            path: PathBuf::from(p),
        }),
        _ => Err(format!("expected R=PATH, got `{s}`")),
    }
}
