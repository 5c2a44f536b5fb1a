use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lqgkit::cli::dispatch(std::env::args().skip(1)))
}
