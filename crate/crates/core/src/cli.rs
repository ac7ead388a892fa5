//! Command-line front end. The binary is a thin wrapper over [`run`].

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::baselines::{compare, ml_t2l1};
use crate::check::{oracle_check, OracleCheck};
use crate::error::Error;
use crate::gen::{generate, seed_from_env, GenParams};
use crate::multilevel::{mine_multilevel, DescentPolicy, LevelConfig};
use crate::report::{
    mining_body, render_compare_text, render_mining_text, CompareReport, Meta, MiningReport,
};
use crate::rules::validate_confidence;
use crate::taxonomy::Taxonomy;
use crate::transactions::{MinSupport, TransactionDb};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ORACLE_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pincer-ml",
    version,
    about = "Multilevel association rule mining with Pincer search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine maximal and frequent itemsets and rules at every level.
    Mine(MineArgs),
    /// Compare Pincer against per-level Apriori.
    Compare(CompareArgs),
    /// Check the miner against brute-force enumeration.
    OracleCheck(DataArgs),
    /// Write a synthetic taxonomy and transaction set with a planted pattern.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportMode {
    Absolute,
    Fractional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Taxonomy CSV with columns `code,name`.
    #[arg(long)]
    pub taxonomy: PathBuf,
    /// Transaction CSV with columns `tid,item`.
    #[arg(long)]
    pub transactions: PathBuf,
    /// One threshold per level, comma separated. The count sets the depth.
    #[arg(long, value_delimiter = ',', required = true)]
    pub minsup: Vec<String>,
    #[arg(long, value_enum, default_value_t = SupportMode::Absolute)]
    pub support_mode: SupportMode,
    #[arg(long, default_value_t = DescentPolicy::FrequentParents)]
    pub policy: DescentPolicy,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MineArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 0.5)]
    pub min_conf: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// Directory receiving `taxonomy.csv` and `transactions.csv`.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub categories: usize,
    #[arg(long, default_value_t = 2)]
    pub branching: usize,
    #[arg(long, default_value_t = 60)]
    pub transactions: usize,
    #[arg(long, default_value_t = 6)]
    pub planted: usize,
    #[arg(long, default_value_t = 0.4)]
    pub plant_rate: f64,
    #[arg(long, default_value_t = 0.05)]
    pub noise: f64,
    /// Defaults to `PINCER_ML_SEED`, then 7.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Failure with the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::VocabularyTooLarge(_) => EXIT_ORACLE_LIMIT,
            Error::InvalidMinsup(_)
            | Error::InvalidFraction(_)
            | Error::InvalidConfidence(_)
            | Error::LevelCountMismatch { .. } => EXIT_CONFIG,
            _ => EXIT_RUNTIME,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses per-level thresholds. Absolute mode accepts integral values
/// written either way (`2` or `2.0`).
pub fn parse_minsup(values: &[String], mode: SupportMode) -> CliResult<Vec<MinSupport>> {
    if values.is_empty() {
        return Err(CliError::config("--minsup needs at least one threshold"));
    }
    values
        .iter()
        .map(|raw| {
            let text = raw.trim();
            let bad = || CliError::config(format!("invalid --minsup value {text:?}"));
            let support = match mode {
                SupportMode::Absolute => {
                    let v: f64 = text.parse().map_err(|_| bad())?;
                    if v.fract() != 0.0 || v < 1.0 {
                        return Err(bad());
                    }
                    MinSupport::Absolute(v as u64)
                }
                SupportMode::Fractional => MinSupport::Fraction(text.parse().map_err(|_| bad())?),
            };
            support
                .validate()
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok(support)
        })
        .collect()
}

/// Validated inputs shared by the data-driven subcommands.
pub struct RunConfig {
    pub db: TransactionDb,
    pub levels: LevelConfig,
    pub taxonomy_path: PathBuf,
    pub transactions_path: PathBuf,
}

fn check_file(path: &Path, what: &str) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::config(format!(
            "{what} file not found: {}",
            path.display()
        )))
    }
}

pub fn load(data: &DataArgs) -> CliResult<RunConfig> {
    let minsup = parse_minsup(&data.minsup, data.support_mode)?;
    let levels = LevelConfig::new(minsup, data.policy)?;
    check_file(&data.taxonomy, "taxonomy")?;
    check_file(&data.transactions, "transactions")?;
    let taxonomy = Taxonomy::from_path(&data.taxonomy, levels.total_levels)
        .map_err(|e| CliError::config(format!("{}: {e}", data.taxonomy.display())))?;
    let db = TransactionDb::from_path(&data.transactions, Arc::new(taxonomy))
        .map_err(|e| CliError::config(format!("{}: {e}", data.transactions.display())))?;
    Ok(RunConfig {
        db,
        levels,
        taxonomy_path: data.taxonomy.clone(),
        transactions_path: data.transactions.clone(),
    })
}

fn meta(command: &str, run: &RunConfig, data: &DataArgs, min_conf: Option<f64>) -> Meta {
    let mut config = serde_json::json!({
        "minsup": data.minsup,
        "support_mode": data.support_mode,
        "policy": data.policy,
    });
    if let Some(c) = min_conf {
        config["min_conf"] = serde_json::json!(c);
    }
    Meta::new(
        command,
        &run.taxonomy_path.display().to_string(),
        &run.transactions_path.display().to_string(),
        &run.db.fingerprint(),
        config,
    )
}

pub fn cmd_mine(args: &MineArgs) -> CliResult<MiningReport> {
    validate_confidence(args.min_conf)?;
    let run = load(&args.data)?;
    let result = mine_multilevel(&run.db, &run.levels)?;
    let body = mining_body(&result, args.min_conf)?;
    Ok(MiningReport {
        meta: meta("mine", &run, &args.data, Some(args.min_conf)),
        body,
    })
}

pub fn cmd_compare(args: &CompareArgs) -> CliResult<CompareReport> {
    let run = load(&args.data)?;
    let pincer = mine_multilevel(&run.db, &run.levels)?;
    let baseline = ml_t2l1(&run.db, &run.levels)?;
    Ok(CompareReport {
        meta: meta("compare", &run, &args.data, None),
        body: compare(&pincer, &baseline)?,
    })
}

pub fn cmd_oracle_check(args: &DataArgs) -> CliResult<OracleCheck> {
    let run = load(args)?;
    Ok(oracle_check(&run.db, &run.levels)?)
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<String> {
    let params = GenParams {
        categories: args.categories,
        branching: args.branching,
        transactions: args.transactions,
        planted: args.planted,
        plant_rate: args.plant_rate,
        noise: args.noise,
        seed: args
            .seed
            .unwrap_or_else(|| seed_from_env(GenParams::default().seed)),
    };
    if !(0.0..=1.0).contains(&params.plant_rate) || !(0.0..=1.0).contains(&params.noise) {
        return Err(CliError::config(
            "--plant-rate and --noise must lie in [0, 1]",
        ));
    }
    let data = generate(&params);
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::runtime(format!("{}: {e}", args.out_dir.display())))?;
    let write = |name: &str, header: [&str; 2], rows: &[(String, String)]| -> CliResult<PathBuf> {
        let path = args.out_dir.join(name);
        let fail = |e: csv::Error| CliError::runtime(format!("{}: {e}", path.display()));
        let mut w = csv::Writer::from_path(&path).map_err(fail)?;
        w.write_record(header).map_err(fail)?;
        for (a, b) in rows {
            w.write_record([a, b]).map_err(fail)?;
        }
        w.flush()
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        Ok(path)
    };
    let tax = write("taxonomy.csv", ["code", "name"], &data.taxonomy)?;
    let txn = write("transactions.csv", ["tid", "item"], &data.transactions)?;
    let planted: Vec<String> = data.planted.iter().map(ToString::to_string).collect();
    Ok(format!(
        "seed {}\ntaxonomy {}\ntransactions {}\nplanted {{{}}}\n",
        params.seed,
        tax.display(),
        txn.display(),
        planted.join(", ")
    ))
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::runtime(e.to_string()))
}

fn emit(output: &OutputArgs, text: &str) -> CliResult<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_check(check: &OracleCheck) -> String {
    let mut out = String::new();
    for l in &check.levels {
        let status = match &l.mismatch {
            None => "ok".to_string(),
            Some(m) => format!("MISMATCH {m}"),
        };
        out.push_str(&format!(
            "level {}: minsup {}, {} items, {} maximal, {} frequent: {status}\n",
            l.level, l.minsup, l.vocabulary, l.maximal, l.frequent
        ));
    }
    out
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Mine(args) => {
            let report = cmd_mine(&args)?;
            let text = match args.output.format {
                Format::Json => to_json(&report)?,
                Format::Text => render_mining_text(&report),
            };
            emit(&args.output, &text)
        }
        Command::Compare(args) => {
            let report = cmd_compare(&args)?;
            let text = match args.output.format {
                Format::Json => to_json(&report)?,
                Format::Text => render_compare_text(&report),
            };
            emit(&args.output, &text)
        }
        Command::OracleCheck(args) => {
            let check = cmd_oracle_check(&args)?;
            print!("{}", render_check(&check));
            match check.first_mismatch() {
                None => Ok(()),
                Some(m) => Err(CliError::runtime(format!("first differing itemset: {m}"))),
            }
        }
        Command::Gen(args) => {
            print!("{}", cmd_gen(&args)?);
            Ok(())
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
