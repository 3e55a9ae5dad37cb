use std::process::ExitCode;

fn main() -> ExitCode {
    craft::cli::main_with(std::env::args_os())
}
