//! The `hgauge` command line.

pub mod args;
mod commands;
mod inputs;
pub mod report;

use std::ffi::OsString;
use std::io::Read;

use clap::Parser;

use args::{Cli, Command};
use report::{render_json, render_text, Status, Style};

/// The published JSON Schema of `--json` reports.
pub const REPORT_JSON_SCHEMA: &str = include_str!("../report.schema.json");

pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line. `stdin` supplies a discretization when `--disc`
/// is absent.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, style: &Style) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Status::Error.exit_code() } else { 0 };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code, stdout: String::new(), stderr: text }
            } else {
                Output { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let (json, outcome) = match &cli.command {
        Command::Validate(a) => (a.common.json, commands::validate(a, stdin)),
        Command::Laws(a) => (a.inputs.common.json, commands::laws(a, stdin)),
        Command::Enumerate(a) => (a.inputs.common.json, commands::enumerate(a, stdin)),
        Command::Orbits(a) => (a.inputs.common.json, commands::orbits(a, stdin)),
        Command::Act(a) => (a.common.json, commands::act(a, stdin)),
        Command::Compose(a) => (a.common.json, commands::compose(a, stdin)),
        Command::Change(a) => (a.common.json, commands::change(a, stdin)),
        Command::Example(a) => (a.common.json, commands::example(a)),
    };
    let name = cli.command.name();
    let (status, stdout) = match outcome {
        Ok(o) => {
            let status = o.status();
            let out = if json {
                render_json(name, status, o.result, o.issues)
            } else {
                render_text(&o.text, o.document, status, &o.issues, style)
            };
            (status, out)
        }
        Err(f) => {
            let status = f.status();
            let out = if json {
                render_json(name, status, serde_json::Value::Null, f.issues)
            } else {
                render_text("", false, status, &f.issues, style)
            };
            (status, out)
        }
    };
    Output {
        code: status.exit_code(),
        stdout,
        stderr: String::new(),
    }
}
