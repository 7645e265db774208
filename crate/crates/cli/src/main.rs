//! `mzr`: classify integer points of the multiple zeta function, reduce the
//! regular ones to exact rational combinations of multiple zeta values, and
//! evaluate those combinations numerically.
//!
//! Exit codes: 0 success, 1 singular input (the verdict is printed to stderr
//! as JSON), 2 usage or parse errors, 3 an internal regularity violation
//! (the reduction reached a singular sub-point with nonzero multiplier;
//! the offending path is dumped).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mzr_core::numerics::{EvalConfig, Evaluator, NumericCache};
use mzr_core::reduce::{PivotStrategy, ReduceError, Reducer};
use mzr_core::{classify, selftest, IndexPoint};

#[derive(Parser)]
#[command(
    name = "mzr",
    version,
    about = "Exact reduction of multiple zeta function values at regular integer points",
    after_help = "Negative index entries must be separated from flags by `--`,\n\
                  e.g. `mzr reduce --format latex -- -1 -2`."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an integer point as regular or singular
    Classify {
        /// Index entries n1 ... nr, written after `--`
        #[arg(last = true, required = true, value_parser = clap::value_parser!(i64))]
        entries: Vec<i64>,
    },
    /// Reduce a regular point to a combination of multiple zeta values
    Reduce {
        /// Pivot strategy: rightmost, leftmost, or j=K
        #[arg(long, default_value = "rightmost")]
        pivot: String,
        /// Output format: json, latex, or plain
        #[arg(long, default_value = "json")]
        format: String,
        /// Also emit the reduction trace
        #[arg(long)]
        trace: bool,
        /// Index entries n1 ... nr, written after `--`
        #[arg(last = true, required = true, value_parser = clap::value_parser!(i64))]
        entries: Vec<i64>,
    },
    /// Reduce and evaluate numerically
    Eval {
        /// Series truncation (at least 100)
        #[arg(long = "N", default_value_t = EvalConfig::DEFAULT_TRUNCATION)]
        truncation: usize,
        /// Numeric cache file; created if missing
        #[arg(long, env = "MZR_CACHE")]
        cache: Option<PathBuf>,
        /// Pivot strategy: rightmost, leftmost, or j=K
        #[arg(long, default_value = "rightmost")]
        pivot: String,
        /// Index entries n1 ... nr, written after `--`
        #[arg(last = true, required = true, value_parser = clap::value_parser!(i64))]
        entries: Vec<i64>,
    },
    /// Tabulate every regular point of a rectangular integer range
    Table {
        /// Depth (number of coordinates)
        #[arg(long)]
        depth: usize,
        /// Lower bound of every coordinate
        #[arg(long, allow_hyphen_values = true)]
        min: i64,
        /// Upper bound of every coordinate
        #[arg(long, allow_hyphen_values = true)]
        max: i64,
        /// Output format: json (one object per line) or csv
        #[arg(long, default_value = "json")]
        format: String,
        /// Series truncation (at least 100)
        #[arg(long = "N", default_value_t = EvalConfig::DEFAULT_TRUNCATION)]
        truncation: usize,
        /// Numeric cache file; created if missing
        #[arg(long, env = "MZR_CACHE")]
        cache: Option<PathBuf>,
    },
    /// Run the built-in invariant suites
    Selftest,
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn parse_pivot(s: &str) -> Result<PivotStrategy, String> {
    s.parse()
}

fn load_cache(path: Option<&Path>) -> Result<NumericCache, String> {
    match path {
        Some(p) if p.exists() => {
            NumericCache::load(p).map_err(|e| format!("cannot load cache {}: {e}", p.display()))
        }
        _ => Ok(NumericCache::new()),
    }
}

fn save_cache(path: Option<&Path>, evaluator: &Evaluator) {
    if let Some(p) = path {
        if let Err(e) = evaluator.cache().save(p) {
            eprintln!("warning: cannot save cache {}: {e}", p.display());
        }
    }
}

/// Maps reduction failures to the documented exit codes.
fn report_reduce_error(err: &ReduceError) -> ExitCode {
    match err {
        ReduceError::SingularInput { point, witness } => {
            eprintln!("{}", classify(point).to_json());
            eprintln!("cannot reduce {point}: {witness}");
            ExitCode::from(1)
        }
        ReduceError::RegularityViolation { .. } => {
            eprintln!("{err}");
            ExitCode::from(3)
        }
    }
}

fn run_classify(entries: Vec<i64>) -> ExitCode {
    let point = IndexPoint::new(entries);
    println!("{}", classify(&point).to_json());
    ExitCode::SUCCESS
}

fn run_reduce(pivot: String, format: String, trace: bool, entries: Vec<i64>) -> ExitCode {
    let strategy = match parse_pivot(&pivot) {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    if !matches!(format.as_str(), "json" | "latex" | "plain") {
        return usage_error(&format!("unknown format {format:?}"));
    }
    let point = IndexPoint::new(entries);
    let mut reducer = Reducer::new();
    let outcome = if trace {
        reducer.reduce_traced(&point, strategy)
    } else {
        reducer.reduce(&point, strategy).map(|c| (c, Default::default()))
    };
    let (combination, reduction_trace) = match outcome {
        Ok(x) => x,
        Err(e) => return report_reduce_error(&e),
    };
    match format.as_str() {
        "json" => {
            if trace {
                println!(
                    "{}",
                    serde_json::json!({
                        "combination": combination.to_json(),
                        "trace": reduction_trace.to_json(),
                    })
                );
            } else {
                println!("{}", combination.to_json());
            }
        }
        "latex" => {
            println!("{}", combination.to_latex());
            if trace {
                println!("{}", reduction_trace.to_json());
            }
        }
        _ => {
            println!("{}", combination.to_plain());
            if trace {
                println!("{}", reduction_trace.to_json());
            }
        }
    }
    ExitCode::SUCCESS
}

fn run_eval(
    truncation: usize,
    cache_path: Option<PathBuf>,
    pivot: String,
    entries: Vec<i64>,
) -> ExitCode {
    let strategy = match parse_pivot(&pivot) {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let cfg = match EvalConfig::new(truncation) {
        Ok(c) => c,
        Err(e) => return usage_error(&e.to_string()),
    };
    let cache = match load_cache(cache_path.as_deref()) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    let point = IndexPoint::new(entries);
    let mut reducer = Reducer::new();
    let mut evaluator = Evaluator::with_cache(cache);
    match evaluator.eval_point(&mut reducer, &point, strategy, &cfg) {
        Ok(value) => {
            println!("{}", value.to_json());
            save_cache(cache_path.as_deref(), &evaluator);
            ExitCode::SUCCESS
        }
        Err(e) => report_reduce_error(&e),
    }
}

/// Row-major walk over the rectangular range [min, max]^depth.
struct RangeWalker {
    current: Vec<i64>,
    min: i64,
    max: i64,
    done: bool,
}

impl RangeWalker {
    fn new(depth: usize, min: i64, max: i64) -> Self {
        RangeWalker {
            current: vec![min; depth],
            min,
            max,
            done: false,
        }
    }
}

impl Iterator for RangeWalker {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        for slot in self.current.iter_mut().rev() {
            if *slot < self.max {
                *slot += 1;
                return Some(out);
            }
            *slot = self.min;
        }
        self.done = true;
        Some(out)
    }
}

fn run_table(
    depth: usize,
    min: i64,
    max: i64,
    format: String,
    truncation: usize,
    cache_path: Option<PathBuf>,
) -> ExitCode {
    if depth == 0 {
        return usage_error("depth must be at least 1");
    }
    if min > max {
        return usage_error("min must not exceed max");
    }
    if !matches!(format.as_str(), "json" | "csv") {
        return usage_error(&format!("unknown format {format:?}"));
    }
    let cfg = match EvalConfig::new(truncation) {
        Ok(c) => c,
        Err(e) => return usage_error(&e.to_string()),
    };
    let cache = match load_cache(cache_path.as_deref()) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };

    let mut reducer = Reducer::new();
    let mut evaluator = Evaluator::with_cache(cache);
    // a closed pipe (e.g. `mzr table ... | head`) ends the walk quietly
    let stdout = std::io::stdout();
    let mut csv_writer = if format == "csv" {
        let mut w = csv::Writer::from_writer(stdout.lock());
        let mut header: Vec<String> = (1..=depth).map(|i| format!("n{i}")).collect();
        header.extend(["status", "value", "error_bound", "combination"].map(String::from));
        if w.write_record(&header).is_err() {
            return ExitCode::SUCCESS;
        }
        Some(w)
    } else {
        None
    };

    for entries in RangeWalker::new(depth, min, max) {
        let point = IndexPoint::new(entries.clone());
        if !classify(&point).is_regular() {
            continue;
        }
        let combination = match reducer.reduce(&point, PivotStrategy::Rightmost) {
            Ok(c) => c,
            Err(e) => return report_reduce_error(&e),
        };
        let value = evaluator.eval_combination(&combination, &cfg);
        let wrote = match &mut csv_writer {
            Some(w) => {
                let mut record: Vec<String> = entries.iter().map(|n| n.to_string()).collect();
                record.push("regular".to_string());
                record.push(value.value.to_string());
                record.push(value.error_bound.to_string());
                record.push(combination.to_json().to_string());
                w.write_record(&record).is_ok()
            }
            None => {
                use std::io::Write;
                let row = serde_json::json!({
                    "entries": entries,
                    "status": "regular",
                    "value": value.value,
                    "error_bound": value.error_bound,
                    "combination": combination.to_json(),
                });
                writeln!(stdout.lock(), "{row}").is_ok()
            }
        };
        if !wrote {
            break;
        }
    }
    if let Some(w) = &mut csv_writer {
        w.flush().ok();
    }
    save_cache(cache_path.as_deref(), &evaluator);
    ExitCode::SUCCESS
}

fn run_selftest() -> ExitCode {
    let report = selftest::run();
    println!("{report}");
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify { entries } => run_classify(entries),
        Command::Reduce {
            pivot,
            format,
            trace,
            entries,
        } => run_reduce(pivot, format, trace, entries),
        Command::Eval {
            truncation,
            cache,
            pivot,
            entries,
        } => run_eval(truncation, cache, pivot, entries),
        Command::Table {
            depth,
            min,
            max,
            format,
            truncation,
            cache,
        } => run_table(depth, min, max, format, truncation, cache),
        Command::Selftest => run_selftest(),
    }
}
