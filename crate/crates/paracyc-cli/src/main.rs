use clap::Parser;
use paracyc_cli::{list_builtins, run_job, to_csv, AlgebraDesc, GroupDesc, JobSpec};
use std::path::PathBuf;

/// Exact verification suites and homology computations for equivariant
/// periodic cyclic homology of finite group actions.
#[derive(Parser, Debug)]
#[command(name = "paracyc", version, about)]
struct Cli {
    /// Command: verify-forms, verify-cq, greenjulg, dual-greenjulg, hpg, hp.
    command: Option<String>,
    /// Job description as a JSON document (fields: command, group, algebra,
    /// level, measure). Command-line flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Group builtin: trivial, cyclic(n), klein4, symmetric(3).
    #[arg(long)]
    group: Option<String>,
    /// Algebra builtin: scalars, dual-numbers, group-algebra-adjoint,
    /// functions-on-G-set, O_G, K_G, crossed(…), tensor(…, …), unitarize(…).
    #[arg(long)]
    algebra: Option<String>,
    /// Maximum degree / truncation level (≥ 2).
    #[arg(long)]
    level: Option<usize>,
    /// Measure convention: counting or normalized.
    #[arg(long)]
    measure: Option<String>,
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// List available builtins and exit.
    #[arg(long)]
    list_builtins: bool,
}

fn main() {
    if let Ok(threads) = std::env::var("PARACYC_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    std::process::exit(real_main(cli));
}

fn real_main(cli: Cli) -> i32 {
    if cli.list_builtins {
        println!("{}", serde_json::to_string_pretty(&list_builtins()).unwrap());
        return 0;
    }
    let mut spec = match &cli.spec {
        None => JobSpec {
            command: String::new(),
            group: None,
            algebra: None,
            level: None,
            measure: None,
        },
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return 2;
                }
            };
            match serde_json::from_str::<JobSpec>(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: invalid job document: {e}");
                    return 2;
                }
            }
        }
    };
    if let Some(c) = &cli.command {
        spec.command = c.clone();
    }
    if let Some(g) = &cli.group {
        spec.group = Some(GroupDesc::Name(g.clone()));
    }
    if let Some(a) = &cli.algebra {
        spec.algebra = Some(AlgebraDesc::Name(a.clone()));
    }
    if let Some(n) = cli.level {
        spec.level = Some(n);
    }
    if let Some(m) = &cli.measure {
        spec.measure = Some(m.clone());
    }
    if spec.command.is_empty() {
        eprintln!("error: no command given (flag or job document)");
        return 2;
    }
    let (report, exit) = match run_job(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let rendered = match cli.format.as_str() {
        "csv" => to_csv(&report),
        _ => format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
    };
    match &cli.output {
        None => print!("{rendered}"),
        Some(path) => {
            // Atomic write: temp file in the same directory, then rename.
            let tmp = path.with_extension("tmp");
            if let Err(e) = std::fs::write(&tmp, &rendered) {
                eprintln!("error: cannot write {}: {e}", tmp.display());
                return 2;
            }
            if let Err(e) = std::fs::rename(&tmp, path) {
                eprintln!("error: cannot move report into place: {e}");
                return 2;
            }
        }
    }
    exit
}
