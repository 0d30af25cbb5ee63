use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use ripscollapse_cli::args::Cli;
use ripscollapse_cli::{commands, RunReport};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (mut report, code) = match commands::run(&cli) {
        Ok(report) => {
            let code = if report.passed { 0 } else { 1 };
            (report, code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut report = RunReport::new(cli.command.name());
            report.result("error", e.to_string());
            report.passed = false;
            (report, e.exit_code())
        }
    };
    report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;

    let mut stdout = std::io::stdout().lock();
    let json_to_stdout = cli.global.json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if let Some(payload) = &report.payload {
        let _ = stdout.write_all(payload.as_bytes());
        eprint!("{}", report.text);
    } else if !json_to_stdout {
        let _ = stdout.write_all(report.text.as_bytes());
    }
    match cli.global.json.as_deref() {
        Some(_) if json_to_stdout => {
            let _ = writeln!(stdout, "{}", report.to_json());
        }
        Some(path) => {
            if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {}
    }
    ExitCode::from(code as u8)
}
