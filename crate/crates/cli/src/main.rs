use std::io::Write;
use std::process::ExitCode;

use ggcode_cli::{parse_config, run, EXIT_OK};

fn main() -> ExitCode {
    let config = match parse_config(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => {
            if e.exit == EXIT_OK {
                print!("{}", e.message);
            } else {
                eprint!("{}", e.message);
            }
            return ExitCode::from(e.exit);
        }
    };
    let outcome = run(&config);
    if outcome.status == EXIT_OK || outcome.status == ggcode_cli::EXIT_CLAIM {
        print!("{}", outcome.output);
        let _ = std::io::stdout().flush();
    } else {
        eprint!("{}", outcome.output);
    }
    ExitCode::from(outcome.status)
}
