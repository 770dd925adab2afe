use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eoflex::decoder::cross_check;
use eoflex::metrics::{complexity_report, default_bench_set, to_csv, to_text};
use eoflex::shardio::{reconstruct, shard_file, DEFAULT_SHARD_LANE_WIDTH};
use eoflex::{CodeParams, Error};

#[derive(Parser)]
#[command(name = "eoflex", version, about = "Flexible-height binary MDS array codes")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Split a file into k + 2 shard files.
    Encode {
        #[arg(long)]
        tau: i64,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = DEFAULT_SHARD_LANE_WIDTH)]
        lane_width: usize,
        file: PathBuf,
        dir: PathBuf,
    },
    /// Rebuild a file from a shard directory with up to two shards lost.
    Decode { dir: PathBuf, out: PathBuf },
    /// Erase every column pair of random arrays and check both decoders.
    Verify {
        #[arg(long)]
        tau: i64,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print XOR counts and update complexity against the closed forms.
    Bench {
        /// CSV of tau,p,k lines; a non-numeric first line is skipped.
        #[arg(long)]
        params_file: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("eoflex: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.verb {
        Verb::Encode {
            tau,
            p,
            k,
            lane_width,
            file,
            dir,
        } => {
            let params = CodeParams::new(tau, p, k).map_err(show)?;
            let paths = shard_file(&file, &params, lane_width, &dir).map_err(show)?;
            println!("wrote {} shards to {}", paths.len(), dir.display());
        }
        Verb::Decode { dir, out } => {
            let r = reconstruct(&dir, &out).map_err(show)?;
            if r.missing.is_empty() {
                println!("{}: all shards present, wrote {} bytes", r.params, r.bytes_written);
            } else {
                println!(
                    "{}: rebuilt columns {:?}, wrote {} bytes",
                    r.params, r.missing, r.bytes_written
                );
            }
        }
        Verb::Verify {
            tau,
            p,
            k,
            trials,
            seed,
        } => {
            let params = CodeParams::new(tau, p, k).map_err(show)?;
            let results = cross_check(&params, trials, seed);
            let ok = results.iter().filter(|r| r.passed()).count();
            for r in &results {
                let (a, b) = r.pair;
                if r.passed() {
                    println!("({a},{b}) pass");
                } else {
                    println!(
                        "({a},{b}) FAIL decoder {}/{} oracle {}/{} disagree {}",
                        r.decoder_failures, r.trials, r.oracle_failures, r.trials, r.disagreements
                    );
                }
            }
            println!("{ok}/{} column pairs OK", results.len());
            if ok != results.len() {
                return Err(format!("{} column pairs failed", results.len() - ok));
            }
        }
        Verb::Bench { params_file } => {
            let list = match params_file {
                Some(path) => parse_params(&fs::read_to_string(&path).map_err(|e| {
                    format!("{}: {e}", path.display())
                })?)?,
                None => default_bench_set(),
            };
            let reports = complexity_report(&list);
            print!("{}", to_text(&reports));
            println!();
            print!("{}", to_csv(&reports));
        }
    }
    Ok(())
}

fn show(e: Error) -> String {
    e.to_string()
}

fn parse_params(text: &str) -> Result<Vec<CodeParams>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let nums: Result<Vec<i64>, _> = fields.iter().map(|f| f.parse::<i64>()).collect();
        match nums {
            Ok(v) if v.len() == 3 => {
                out.push(CodeParams::new(v[0], v[1], v[2]).map_err(|e| format!("line {}: {e}", n + 1))?)
            }
            Err(_) if n == 0 => continue,
            _ => return Err(format!("line {}: expected tau,p,k", n + 1)),
        }
    }
    Ok(out)
}
