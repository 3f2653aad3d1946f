mod args;
mod commands;
mod config;
mod error;
mod output;
mod record;

use std::time::Instant;

use clap::Parser;
use serde_json::json;

use args::{Cli, Command, Format, ReplayArgs};
use error::{CliError, CliResult};
use output::Sink;
use record::{RunRecord, SCHEMA_VERSION};

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let argv = match config::merge(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let threads = cli.threads;
    if let Command::Replay(r) = &cli.command {
        return replay(r, threads);
    }
    let format = cli.format.unwrap_or_else(|| commands::default_format(&cli.command));
    let mut sink = Sink::new(format);
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let exec = weylbound::parallel::with_threads(threads, || commands::execute(&cli.command, &mut sink))??;
    let elapsed_ms = clock.elapsed().as_secs_f64() * 1e3;
    sink.finish(&exec.outputs)?;

    if let Some(dir) = &cli.out {
        let record = RunRecord {
            version: env!("CARGO_PKG_VERSION").to_string(),
            schema: SCHEMA_VERSION.to_string(),
            command: cli.command.name().to_string(),
            params: serde_json::from_value(exec.params)?,
            seed: exec.seed,
            outputs: exec.outputs,
            started: started.to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            elapsed_ms,
        };
        let path = record.write_to(dir)?;
        eprintln!("record: {}", path.display());
    }
    match exec.capped {
        0 => Ok(()),
        n => Err(CliError::CapRows(n)),
    }
}

fn replay(args: &ReplayArgs, threads: usize) -> CliResult<()> {
    let record = RunRecord::read(&args.record)?;
    let params = serde_json::to_value(&record.params)?;
    let command = commands::from_record(&record.command, params)?;
    let mut sink = Sink::new(Format::Json);
    let exec = weylbound::parallel::with_threads(threads, || commands::execute(&command, &mut sink))??;
    let matches = exec.outputs == record.outputs && exec.seed == record.seed;
    let summary = json!({
        "command": record.command,
        "record": args.record.display().to_string(),
        "seed": record.seed,
        "matches": matches,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if matches {
        Ok(())
    } else {
        Err(CliError::ReplayMismatch)
    }
}
