use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use scindex::analytics::{pearson_matrix, rank_by, AnalyticsTable};
use scindex::indicators::{descriptor, indicator_symbols, registry};
use scindex::io::{
    emit_matrix, emit_table, parse_citation_list, parse_input, InputFormat, TableFormat,
};
use scindex::plot::{emit_loglog_svg, PlotSeries};
use scindex::scaling::{probe_all, ProbeOutcome, DEFAULT_LAMBDAS};
use scindex::{table1, CitationVector, DimExpr, Dimension, Error};

#[derive(Parser)]
#[command(
    name = "scindex",
    version,
    about = "Citation indices with dimensional checking"
)]
struct Cli {
    /// Decimal places for reported values, or `full` for round-trip precision.
    #[arg(long, global = true, env = "SCINDEX_PRECISION", default_value = "2", value_parser = parse_precision)]
    precision: Precision,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy)]
struct Precision(Option<usize>);

fn parse_precision(s: &str) -> Result<Precision, String> {
    if s.eq_ignore_ascii_case("full") {
        return Ok(Precision(None));
    }
    s.parse::<usize>()
        .map(|p| Precision(Some(p)))
        .map_err(|_| format!("`{s}` is neither a number of decimals nor `full`"))
}

#[derive(Subcommand)]
enum Command {
    /// Compute every indicator for each portfolio in an input file.
    Compute {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, short, default_value = "tsv")]
        output: TableFormat,
    },
    /// Pearson correlation matrix between indicator columns.
    Correlate {
        #[command(flatten)]
        input: InputArgs,
        /// Columns to correlate (default: every available indicator).
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
        #[arg(long, short, default_value = "tsv")]
        output: TableFormat,
    },
    /// Rank portfolios by one indicator, largest first.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        by: String,
    },
    /// Check indicators scale with their declared dimension under replication.
    Probe {
        /// Base citation vector, e.g. "4;2;1".
        #[arg(long)]
        base: String,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LAMBDAS)]
        lambdas: Vec<u32>,
        /// Indicators to probe (default: all registered).
        #[arg(long = "index", value_delimiter = ',')]
        indices: Vec<String>,
        /// Write a log-log SVG here, with the points alongside as .csv.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Dimension of an expression over indicator symbols, e.g. "C/P".
    Dims {
        expr: String,
        /// Extra or overriding symbol, e.g. `k=3/2` or `k=[P^2]`.
        #[arg(long = "symbol")]
        symbols: Vec<String>,
    },
    /// Rebuild the published ten-author table and its correlation block.
    Table1 {
        #[arg(long, short, default_value = "tsv")]
        output: TableFormat,
        /// Show the printed values instead of reconstructing z, i_E and C.
        #[arg(long)]
        printed: bool,
    },
}

#[derive(clap::Args)]
struct InputArgs {
    /// Input file; `-` or omitted reads stdin.
    file: Option<PathBuf>,
    /// Input format (default: from the file extension, else csv).
    #[arg(long)]
    format: Option<InputFormat>,
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut out = io::stdout().lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let precision = cli.precision.0;
    let write = |out: &mut dyn Write, s: &str| {
        out.write_all(s.as_bytes())
            .map_err(|e| Failure::Input(format!("writing output: {e}")))
    };
    match cli.command {
        Command::Compute { input, output } => {
            let table = load_table(&input)?;
            write(out, &emit_table(&table, output, precision))
        }
        Command::Correlate {
            input,
            columns,
            output,
        } => {
            let table = load_table(&input)?;
            let cols: Vec<&str> = if columns.is_empty() {
                table.columns().collect()
            } else {
                columns.iter().map(String::as_str).collect()
            };
            let m = pearson_matrix(&table, &cols)?;
            write(out, &emit_matrix(&m, output, precision))
        }
        Command::Rank { input, by } => {
            let table = load_table(&input)?;
            let values = table.column_values(&by)?;
            let labels: Vec<&str> = table.rows().iter().map(|r| r.label.as_str()).collect();
            let mut s = String::new();
            for (pos, label) in rank_by(&table, &by)?.iter().enumerate() {
                let idx = labels.iter().position(|l| l == label).unwrap_or(0);
                let v = scindex::io::format_number(values[idx], precision);
                s.push_str(&format!("{}\t{label}\t{v}\n", pos + 1));
            }
            write(out, &s)
        }
        Command::Probe {
            base,
            lambdas,
            indices,
            svg,
        } => probe(out, &base, &lambdas, &indices, svg.as_deref()),
        Command::Dims { expr, symbols } => {
            let mut table = indicator_symbols();
            for s in &symbols {
                let (name, dim) = s.split_once('=').ok_or_else(|| {
                    Failure::Input(format!("symbol `{s}` must look like name=dimension"))
                })?;
                let dim: Dimension = dim
                    .parse()
                    .map_err(|e| Failure::Input(format!("symbol `{s}`: {e}")))?;
                table.insert(name.trim().to_string(), dim);
            }
            let parsed = DimExpr::parse(&expr).map_err(|e| expr_failure(&expr, e))?;
            let dim = parsed.eval(&table).map_err(|e| expr_failure(&expr, e))?;
            write(out, &format!("{dim}\n"))
        }
        Command::Table1 { output, printed } => {
            let table = if printed {
                table1::printed_table()
            } else {
                table1::reconstructed_table()
            };
            // Correlations are always taken over the printed, rounded values.
            let m = pearson_matrix(&table1::printed_table(), &table1::COLUMNS)?;
            let text = match output {
                TableFormat::Json => {
                    let t: Value = serde_json::from_str(&emit_table(&table, output, precision))
                        .expect("emitted JSON parses");
                    let c: Value = serde_json::from_str(&emit_matrix(&m, output, precision))
                        .expect("emitted JSON parses");
                    serde_json::to_string_pretty(&serde_json::json!({
                        "table": t,
                        "correlation": c,
                    }))
                    .expect("serialisable")
                        + "\n"
                }
                _ => format!(
                    "{}\n{}",
                    emit_table(&table, output, precision),
                    emit_matrix(&m, output, precision)
                ),
            };
            write(out, &text)
        }
    }
}

fn expr_failure(expr: &str, e: Error) -> Failure {
    match &e {
        Error::Parse { position, .. } => {
            Failure::Input(format!("{e}\n  {expr}\n  {}^", " ".repeat(*position)))
        }
        _ => Failure::Input(format!("`{expr}`: {e}")),
    }
}

fn load_table(input: &InputArgs) -> Result<AnalyticsTable<f64>, Failure> {
    let (bytes, name) = match input.file.as_deref() {
        None => (read_stdin()?, "<stdin>".to_string()),
        Some(p) if p == Path::new("-") => (read_stdin()?, "<stdin>".to_string()),
        Some(p) => (
            fs::read(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
            p.display().to_string(),
        ),
    };
    let format = input.format.unwrap_or_else(|| {
        match input
            .file
            .as_deref()
            .and_then(Path::extension)
            .and_then(|e| e.to_str())
        {
            Some(ext) if ext.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::Csv,
        }
    });
    let located = |e: Error| Failure::Input(format!("{name}: {e}"));
    let records = parse_input(&bytes, format).map_err(located)?;
    if records.is_empty() {
        return Err(Failure::Input(format!("{name}: no records")));
    }
    let portfolios = records
        .iter()
        .map(|r| {
            r.to_portfolio()
                .map_err(|e| Failure::Input(format!("{name}: `{}`: {e}", r.author())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    AnalyticsTable::from_portfolios(&portfolios, None).map_err(located)
}

fn read_stdin() -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    io::stdin()
        .read_to_end(&mut buf)
        .map_err(|e| Failure::Input(format!("reading stdin: {e}")))?;
    Ok(buf)
}

fn probe(
    out: &mut dyn Write,
    base: &str,
    lambdas: &[u32],
    indices: &[String],
    svg: Option<&Path>,
) -> Result<(), Failure> {
    let base = CitationVector::new(
        parse_citation_list(base).map_err(|e| Failure::Input(format!("--base: {e}")))?,
    )?;
    let descriptors = if indices.is_empty() {
        registry::<f64>()
    } else {
        indices
            .iter()
            .map(|n| descriptor::<f64>(n))
            .collect::<Result<Vec<_>, _>>()?
    };
    let records = probe_all(&descriptors, &base, lambdas)?;
    let mut text = String::new();
    for r in &records {
        text.push_str(&r.summary());
        text.push('\n');
    }
    let failed: Vec<&str> = records
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    text.push_str(&format!(
        "{}/{} indicators scale as declared\n",
        records.len() - failed.len(),
        records.len()
    ));
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Input(format!("writing output: {e}")))?;

    if let Some(path) = svg {
        let series: Vec<PlotSeries<f64>> = records
            .iter()
            .filter(|r| matches!(r.outcome, ProbeOutcome::Fitted(_)))
            .map(|r| PlotSeries::new(r.name.clone(), r.series.points()))
            .collect();
        let plot = emit_loglog_svg(&series)?;
        let csv_path = path.with_extension("csv");
        fs::write(path, plot.svg)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        fs::write(&csv_path, plot.csv)
            .map_err(|e| Failure::Input(format!("{}: {e}", csv_path.display())))?;
    }

    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} did not scale as declared",
            failed.join(", ")
        )))
    }
}
