use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(faith::cli::run(std::env::args()) as u8)
}
