use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = serre_cli::run(std::env::args_os());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.report.as_bytes());
    let _ = out.flush();
    ExitCode::from(outcome.exit_code() as u8)
}
