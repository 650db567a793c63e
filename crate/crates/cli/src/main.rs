use std::process::ExitCode;

use mimo_capacity::{parse_args, run};

fn main() -> ExitCode {
    let invocation = match parse_args(std::env::args_os()) {
        Ok(inv) => inv,
        Err(e) if e.is_info() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            if !e.to_string().ends_with('\n') {
                eprintln!();
            }
            return ExitCode::from(2);
        }
    };
    match run(&invocation) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
