use std::process::ExitCode;

fn main() -> ExitCode {
    frailhr::cli::main_with_args(std::env::args_os())
}
