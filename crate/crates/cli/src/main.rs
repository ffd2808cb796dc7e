use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use journal_indicators::analysis::{correlation_table, top_k};
use journal_indicators::io::{self, IndicatorJson};
use journal_indicators::properties::{
    field_insensitivity_check, leave_one_out, leave_one_out_sweep, min_delta,
};
use journal_indicators::synth::{self, ArticleCounts, BlockModelSpec};
use journal_indicators::{
    structure, Dataset, EigenParams, Error, IndicatorSpec, IwNormalization, Method, PageRankParams,
    SolverConfig,
};
use serde_json::json;

/// Journal performance indicators from a citation matrix.
#[derive(Parser)]
#[command(name = "jind", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one indicator for every journal.
    Compute {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        indicator: IndicatorArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Only print the k best journals (descending, ties by id).
        #[arg(long)]
        top: Option<usize>,
    },
    /// Pearson (lower-left) and Spearman (upper-right) correlations between
    /// indicators.
    Correlate {
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated list, e.g. `if,af,ai:0,ai:0.5,ai:0.85,ai:1,sjr:0.9:0.0999`.
        #[arg(long, value_delimiter = ',', required = true)]
        indicators: Vec<String>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recompute an indicator with journals removed.
    Sensitivity {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        indicator: IndicatorArgs,
        /// Journal id to remove.
        #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
        drop: Option<String>,
        /// Remove each journal in turn and rank by largest relative change.
        #[arg(long)]
        sweep: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the two-field insensitivity bounds for an indicator.
    FieldCheck {
        #[command(flatten)]
        data: DataArgs,
        /// CSV with header `id,field`, field 1 or 2.
        #[arg(long)]
        partition: PathBuf,
        #[command(flatten)]
        indicator: IndicatorArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Report irreducibility, periodicity, dangling and uncited journals.
    Structure {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Export a built-in fixture and print expected against computed values.
    Demo {
        fixture: Fixture,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Generate a seeded two-field random instance.
    Generate {
        #[arg(long, default_value_t = 5)]
        journals_per_field: usize,
        #[arg(long, default_value_t = 20.0)]
        within_mean: f64,
        #[arg(long, default_value_t = 2.0)]
        cross_mean: f64,
        /// Constant first-period article count.
        #[arg(long, default_value_t = 100.0, conflicts_with = "articles_range")]
        articles: f64,
        /// Random mirrored article counts `MIN:MAX` (fields stay balanced).
        #[arg(long)]
        articles_range: Option<String>,
        /// Second-period articles as a multiple of first-period articles.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        export: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    Table1,
    Counterexample,
}

#[derive(Args)]
struct DataArgs {
    /// CSV with header `id,name,articles_t1,articles_t2`.
    #[arg(long)]
    journals: PathBuf,
    /// CSV whose first header cell is `citing\cited`.
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    If,
    Af,
    Iw,
    Ipp,
    Ef,
    Ai,
    Wpr,
    Sjr,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalization {
    References,
    JournalMean,
}

#[derive(Args)]
struct IndicatorArgs {
    #[arg(long, value_enum)]
    indicator: Kind,
    /// Damping for ef/ai (default 0.85).
    #[arg(long)]
    alpha: Option<f64>,
    /// Citation weight for wpr/sjr.
    #[arg(long)]
    beta: Option<f64>,
    /// Article-share weight for wpr/sjr.
    #[arg(long)]
    gamma: Option<f64>,
    /// Scale of influence weights for iw/ipp.
    #[arg(long, value_enum)]
    iw_normalization: Option<Normalization>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iterations: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Direct,
    Power,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Decimal places; full precision when omitted.
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    /// A core error raised while working on a loaded dataset, so indices in
    /// the record can be reported as journal ids.
    Data(Error, Vec<String>),
    Io(String),
}

fn on(data: &Dataset) -> impl Fn(Error) -> CliError + '_ {
    move |e| CliError::Data(e, data.journals().ids().map(str::to_string).collect())
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

impl SolverArgs {
    fn config(&self) -> CliResult<SolverConfig> {
        let config = SolverConfig {
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            method: match self.method {
                MethodArg::Auto => Method::Auto,
                MethodArg::Direct => Method::Direct,
                MethodArg::Power => Method::Power,
            },
        };
        config.validate()?;
        Ok(config)
    }
}

impl IndicatorArgs {
    fn spec(&self) -> CliResult<IndicatorSpec> {
        let invalid = |m: &str| CliError::Core(Error::InvalidParams(m.to_string()));
        let eigen = matches!(self.indicator, Kind::Ef | Kind::Ai);
        let pagerank = matches!(self.indicator, Kind::Wpr | Kind::Sjr);
        let influence = matches!(self.indicator, Kind::Iw | Kind::Ipp);
        if self.alpha.is_some() && !eigen {
            return Err(invalid("--alpha applies only to ef and ai"));
        }
        if (self.beta.is_some() || self.gamma.is_some()) && !pagerank {
            return Err(invalid("--beta/--gamma apply only to wpr and sjr"));
        }
        if self.iw_normalization.is_some() && !influence {
            return Err(invalid("--iw-normalization applies only to iw and ipp"));
        }
        let norm = match self.iw_normalization {
            Some(Normalization::JournalMean) => IwNormalization::JournalMean,
            _ => IwNormalization::References,
        };
        let alpha = || EigenParams::new(self.alpha.unwrap_or(EigenParams::DEFAULT_ALPHA));
        Ok(match self.indicator {
            Kind::If => IndicatorSpec::If,
            Kind::Af => IndicatorSpec::Af,
            Kind::Iw => IndicatorSpec::Iw(norm),
            Kind::Ipp => IndicatorSpec::Ipp(norm),
            Kind::Ef => IndicatorSpec::Ef(alpha()?),
            Kind::Ai => IndicatorSpec::Ai(alpha()?),
            Kind::Wpr => IndicatorSpec::Wpr(PageRankParams::new(
                self.beta.unwrap_or(WPR_DEFAULT_BETA),
                self.gamma.unwrap_or(0.0),
            )?),
            Kind::Sjr => {
                let d = PageRankParams::SJR_DEFAULT;
                IndicatorSpec::Sjr(PageRankParams::new(
                    self.beta.unwrap_or(d.beta),
                    self.gamma.unwrap_or(d.gamma),
                )?)
            }
        })
    }
}

const WPR_DEFAULT_BETA: f64 = 0.85;

/// Parses `kind[:param[:param]]`, e.g. `ai:0.5` or `sjr:0.9:0.0999`.
fn parse_indicator_token(token: &str) -> CliResult<IndicatorSpec> {
    let invalid = || CliError::Core(Error::InvalidParams(format!("bad indicator {token:?}")));
    let mut parts = token.trim().split(':');
    let kind = parts.next().unwrap_or_default().to_ascii_lowercase();
    let params = parts
        .map(|p| p.parse::<f64>().map_err(|_| invalid()))
        .collect::<CliResult<Vec<f64>>>()?;
    let spec = match (kind.as_str(), params.as_slice()) {
        ("if", []) => IndicatorSpec::If,
        ("af", []) => IndicatorSpec::Af,
        ("iw", []) => IndicatorSpec::Iw(IwNormalization::References),
        ("ipp", []) => IndicatorSpec::Ipp(IwNormalization::References),
        ("ef", []) => IndicatorSpec::Ef(EigenParams::default()),
        ("ef", [a]) => IndicatorSpec::Ef(EigenParams::new(*a)?),
        ("ai", []) => IndicatorSpec::Ai(EigenParams::default()),
        ("ai", [a]) => IndicatorSpec::Ai(EigenParams::new(*a)?),
        ("wpr", []) => IndicatorSpec::Wpr(PageRankParams::new(WPR_DEFAULT_BETA, 0.0)?),
        ("wpr", [b]) => IndicatorSpec::Wpr(PageRankParams::new(*b, 0.0)?),
        ("wpr", [b, g]) => IndicatorSpec::Wpr(PageRankParams::new(*b, *g)?),
        ("sjr", []) => IndicatorSpec::Sjr(PageRankParams::SJR_DEFAULT),
        ("sjr", [b, g]) => IndicatorSpec::Sjr(PageRankParams::new(*b, *g)?),
        _ => return Err(invalid()),
    };
    Ok(spec)
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load(args: &DataArgs) -> CliResult<Dataset> {
    Ok(io::load_dataset(
        &read(&args.journals)?,
        &read(&args.matrix)?,
    )?)
}

fn fmt_value(v: f64, precision: Option<usize>) -> String {
    match precision {
        Some(p) => format!("{v:.p$}"),
        None => v.to_string(),
    }
}

fn fmt_opt(v: Option<f64>, precision: Option<usize>) -> String {
    v.map(|v| fmt_value(v, precision)).unwrap_or_default()
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable output")
    );
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Compute {
            data,
            indicator,
            output,
            top,
        } => {
            let data = load(&data)?;
            let spec = indicator.spec()?;
            let vector = spec
                .compute(&data, &indicator.solver.config()?)
                .map_err(on(&data))?;
            if let Some(k) = top {
                let ranked = top_k(data.journals(), &vector, k)?;
                match output.format {
                    Format::Csv => {
                        println!("rank,id,{}", vector.label());
                        for (r, (id, v)) in ranked.iter().enumerate() {
                            println!("{},{id},{}", r + 1, fmt_value(*v, output.precision));
                        }
                    }
                    Format::Json => print_json(&ranked),
                }
                return Ok(());
            }
            match output.format {
                Format::Csv => print!(
                    "{}",
                    io::write_indicator_csv(data.journals(), &vector, output.precision)
                ),
                Format::Json => print_json(&IndicatorJson::new(
                    data.journals(),
                    &vector,
                    output.precision,
                )),
            }
        }
        Command::Correlate {
            data,
            indicators,
            solver,
            output,
        } => {
            let data = load(&data)?;
            let config = solver.config()?;
            let vectors = indicators
                .iter()
                .map(|t| {
                    parse_indicator_token(t)?
                        .compute(&data, &config)
                        .map_err(on(&data))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let table = correlation_table(&vectors)?;
            match output.format {
                Format::Csv => print!("{}", io::write_correlation_csv(&table, output.precision)),
                Format::Json => print_json(&table),
            }
        }
        Command::Sensitivity {
            data,
            indicator,
            drop,
            sweep,
            output,
        } => {
            let data = load(&data)?;
            let spec = indicator.spec()?;
            let config = indicator.solver.config()?;
            let ids: Vec<String> = data.journals().ids().map(str::to_string).collect();
            if sweep {
                let reports = leave_one_out_sweep(&data, &spec, &config).map_err(on(&data))?;
                match output.format {
                    Format::Csv => {
                        println!("dropped,max_relative_change");
                        for r in &reports {
                            println!(
                                "{},{}",
                                ids[r.dropped],
                                fmt_value(r.max_relative_change, output.precision)
                            );
                        }
                    }
                    Format::Json => print_json(
                        &reports
                            .iter()
                            .map(|r| json!({"dropped": ids[r.dropped], "max_relative_change": r.max_relative_change}))
                            .collect::<Vec<_>>(),
                    ),
                }
            } else {
                let id = drop.expect("clap requires --drop without --sweep");
                let index = data.journals().index_of(&id).ok_or_else(|| {
                    CliError::Core(Error::InvalidParams(format!("unknown journal id {id:?}")))
                })?;
                let report = leave_one_out(&data, index, &spec, &config).map_err(on(&data))?;
                match output.format {
                    Format::Csv => {
                        println!("id,before,after,relative_change");
                        for (k, &i) in report.survivors.iter().enumerate() {
                            println!(
                                "{},{},{},{}",
                                ids[i],
                                fmt_value(report.before[k], output.precision),
                                fmt_value(report.after[k], output.precision),
                                fmt_opt(report.relative_change[k], output.precision)
                            );
                        }
                    }
                    Format::Json => print_json(&json!({
                        "dropped": id,
                        "survivors": report.survivors.iter().map(|&i| &ids[i]).collect::<Vec<_>>(),
                        "before": report.before,
                        "after": report.after,
                        "relative_change": report.relative_change,
                        "max_relative_change": report.max_relative_change,
                    })),
                }
            }
        }
        Command::FieldCheck {
            data,
            partition,
            indicator,
            output,
        } => {
            let data = load(&data)?;
            let partition = io::parse_partition_csv(&read(&partition)?, data.journals())?;
            let vector = indicator
                .spec()?
                .compute(&data, &indicator.solver.config()?)
                .map_err(on(&data))?;
            let report = field_insensitivity_check(&data, &partition, &vector)?;
            match output.format {
                Format::Csv => {
                    let p = output.precision;
                    println!("metric,value");
                    println!("indicator,{}", vector.label());
                    println!("delta,{}", fmt_value(report.delta, p));
                    println!("balanced,{}", report.balanced);
                    println!("overall_mean,{}", fmt_value(report.overall_mean, p));
                    println!("field1_mean,{}", fmt_value(report.field_means[0], p));
                    println!("field2_mean,{}", fmt_value(report.field_means[1], p));
                    println!("lower_bound,{}", fmt_value(report.lower_bound, p));
                    println!("upper_bound,{}", fmt_value(report.upper_bound, p));
                    println!("field1_bounds_hold,{}", report.bounds_hold[0]);
                    println!("field2_bounds_hold,{}", report.bounds_hold[1]);
                    println!("bounds_hold,{}", report.holds());
                    println!("eta,{}", fmt_opt(report.eta, p));
                }
                Format::Json => print_json(&report),
            }
        }
        Command::Structure { data } => {
            let data = load(&data)?;
            let ids: Vec<&str> = data.journals().ids().collect();
            let named = |v: &[usize]| v.iter().map(|&i| ids[i]).collect::<Vec<_>>();
            let report = structure(data.matrix());
            print_json(&json!({
                "irreducible": report.irreducible,
                "aperiodic": report.aperiodic,
                "period": report.period,
                "dangling": named(&report.dangling_rows),
                "uncited": named(&report.zero_columns),
                "components": report.components.iter().map(|c| named(c)).collect::<Vec<_>>(),
            }));
        }
        Command::Demo { fixture, export } => demo(fixture, export.as_deref())?,
        Command::Generate {
            journals_per_field,
            within_mean,
            cross_mean,
            articles,
            articles_range,
            eta,
            seed,
            export,
        } => {
            let articles = match articles_range {
                Some(range) => {
                    let (min, max) = range
                        .split_once(':')
                        .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                        .ok_or_else(|| {
                            CliError::Core(Error::InvalidParams(format!(
                                "--articles-range expects MIN:MAX, got {range:?}"
                            )))
                        })?;
                    ArticleCounts::Mirrored { min, max }
                }
                None => ArticleCounts::Constant(articles),
            };
            let spec = BlockModelSpec {
                journals_per_field,
                within_mean,
                cross_mean,
                articles,
                eta,
                seed,
            };
            let (data, partition) = synth::block_model(&spec)?;
            export_dataset(&export, &data)?;
            write(
                &export.join("partition.csv"),
                &io::write_partition_csv(data.journals(), &partition),
            )?;
            println!("wrote {} journals to {}", data.n(), export.display());
        }
    }
    Ok(())
}

fn export_dataset(dir: &Path, data: &Dataset) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    write(
        &dir.join("journals.csv"),
        &io::write_journals_csv(data.journals()),
    )?;
    write(&dir.join("matrix.csv"), &io::write_matrix_csv(data))
}

const TABLE1_IPP: [[f64; 8]; 2] = [
    [5.500, 5.500, 0.055, 0.055, 5.500, 5.500, 0.055, 0.055],
    [5.513, 5.513, 0.055, 0.055, 5.490, 5.490, 0.055, f64::NAN],
];
const TABLE1_AF: [[f64; 8]; 2] = [
    [44.000, 44.000, 0.440, 0.440, 44.000, 44.000, 0.440, 0.440],
    [
        42.938,
        42.938,
        0.429,
        0.429,
        34.063,
        34.063,
        0.341,
        f64::NAN,
    ],
];

fn demo(fixture: Fixture, export: Option<&Path>) -> CliResult<()> {
    let config = SolverConfig::default();
    match fixture {
        Fixture::Table1 => {
            let full = synth::table1_instance();
            if let Some(dir) = export {
                export_dataset(dir, &full)?;
            }
            println!("scenario,indicator,id,expected,computed");
            let reduced = full.drop_journal(7)?;
            let scenarios = [(1, &full), (2, &reduced)];
            for (k, (scenario, data)) in scenarios.into_iter().enumerate() {
                let rows = [
                    (
                        "IPP",
                        IndicatorSpec::Ipp(IwNormalization::JournalMean),
                        &TABLE1_IPP[k],
                    ),
                    ("AF", IndicatorSpec::Af, &TABLE1_AF[k]),
                ];
                for (label, spec, expected) in rows {
                    let v = spec.compute(data, &config)?;
                    for ((id, value), e) in data.journals().ids().zip(&v.values).zip(expected) {
                        println!("{scenario},{label},{id},{e:.3},{value:.3}");
                    }
                }
            }
        }
        Fixture::Counterexample => {
            let (data, partition) = synth::counterexample_instance();
            if let Some(dir) = export {
                export_dataset(dir, &data)?;
                write(
                    &dir.join("partition.csv"),
                    &io::write_partition_csv(data.journals(), &partition),
                )?;
            }
            let ipp = IndicatorSpec::Ipp(IwNormalization::References).compute(&data, &config)?;
            let report = field_insensitivity_check(&data, &partition, &ipp)?;
            println!("quantity,expected,computed");
            println!("delta,0.003,{}", min_delta(data.matrix(), &partition)?);
            println!("IPP[1],15,{:.6}", ipp.values[0]);
            println!("IPP[2],5,{:.6}", ipp.values[1]);
            println!("field1_mean,15,{:.6}", report.field_means[0]);
            println!("upper_bound,10.03,{:.6}", report.upper_bound);
            println!("bounds_hold,false,{}", report.holds());
        }
    }
    Ok(())
}

fn error_record(err: &CliError) -> (serde_json::Value, u8) {
    let (e, ids) = match err {
        CliError::Io(message) => return (json!({"error": "Io", "message": message}), 1),
        CliError::Core(e) => (e, None),
        CliError::Data(e, ids) => (e, Some(ids)),
    };
    let named = |v: &[usize]| -> serde_json::Value {
        match ids {
            Some(ids) => json!(v.iter().map(|&i| &ids[i]).collect::<Vec<_>>()),
            None => json!(v),
        }
    };
    let details = match e {
        Error::NotIrreducible(report) => json!({
            "closed_component": named(report.closed_component().unwrap_or_default()),
            "components": report.components.iter().map(|c| named(c)).collect::<Vec<_>>(),
            "dangling": named(&report.dangling_rows),
        }),
        Error::Invalid(issues) => {
            json!(issues.iter().map(ToString::to_string).collect::<Vec<_>>())
        }
        Error::NoConvergence {
            iterations,
            residual,
        } => json!({"iterations": iterations, "residual": residual}),
        _ => serde_json::Value::Null,
    };
    let code = if matches!(e, Error::NoConvergence { .. }) {
        2
    } else {
        1
    };
    (
        json!({"error": e.code(), "message": e.to_string(), "details": details}),
        code,
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (record, code) = error_record(&err);
            eprintln!("{record}");
            ExitCode::from(code)
        }
    }
}
