//! Expression language and command-line front-end for `lindiff`.

pub mod commands;
pub mod config;
pub mod error;
pub mod eval;
pub mod syntax;

use clap::Parser;

pub use commands::{execute, Cli, Command, Format, Output};
pub use error::CliError;
pub use syntax::{parse, parse_with, Expr, ParseError};

/// Exit codes: success, failed verification verdict, usage or input error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Run one invocation; returns (stdout, stderr, exit code).
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() { (String::new(), text, code) } else { (text, String::new(), code) };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string(&out.json).expect("serializable")),
                Format::Text => out.text,
            };
            (body, String::new(), if out.failed { EXIT_FAIL } else { EXIT_OK })
        }
        Err(e) => (String::new(), format!("error: {e}\n"), EXIT_USAGE),
    }
}
