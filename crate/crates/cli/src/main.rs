use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use hgt_cli::report::Style;

fn main() -> ExitCode {
    let style = Style::detect(std::io::stdout().is_terminal());
    let out = hgt_cli::run(std::env::args_os(), &mut std::io::stdin().lock(), &style);
    // a closed pipe is not worth reporting
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}
