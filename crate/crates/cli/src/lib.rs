//! Library side of the `bchdual` binary: argument parsing, commands and report rendering.

pub mod args;
pub mod commands;
pub mod report;

use clap::Parser;

pub use args::{Cli, Command, Format};
pub use commands::Precondition;
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

pub fn execute(command: &Command) -> Result<Report, Precondition> {
    match command {
        Command::Cosets(a) => commands::cosets(a),
        Command::DualBound(a) => commands::dual_bound(a),
        Command::DuallyBch(a) => commands::dually_bch(a),
        Command::VerifyPaper(a) => commands::verify_paper(a),
    }
}

pub fn exit_code(report: &Report) -> i32 {
    if report.mismatches.is_empty() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

/// Parses `argv`, runs the command and returns `(exit code, stdout, stderr)`.
pub fn run<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (EXIT_PRECONDITION, String::new(), text)
            } else {
                (EXIT_OK, text, String::new())
            };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return (EXIT_PRECONDITION, String::new(), "error: --threads must be positive\n".into());
        }
        // Fails only if the global pool already exists, as in repeated in-process runs.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli.command) {
        Ok(report) => (exit_code(&report), report.render(cli.format), String::new()),
        Err(e) => (EXIT_PRECONDITION, String::new(), format!("error: {e}\n")),
    }
}
