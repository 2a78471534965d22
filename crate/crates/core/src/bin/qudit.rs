use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = qudit_duality::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(result.stdout.as_bytes());
    let _ = std::io::stderr().write_all(result.stderr.as_bytes());
    ExitCode::from(result.exit_code as u8)
}
