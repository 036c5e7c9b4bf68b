use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = tridots_cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stderr.write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code)
}
