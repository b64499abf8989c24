//! Command-line front end for `moreau-core`.
//!
//! Every subcommand is a function in [`commands`] returning its output, so
//! tests can drive the tool without spawning a process. Exit codes: 0 ok,
//! 1 parse or usage error, 2 invalid function, 3 comparison failure,
//! 4 degenerate gauge.

// `!(a <= b)` is used on purpose so NaN fails range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod svg;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, GaugeKind};
use commands::{CliError, CliResult, GaugeMode, PlotRequest};
use moreau::Gauge2D;

/// What a run printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `argv` (including the program name) and run the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        // the failing report is still the command's output
        Err(CliError::Comparison(report)) => Outcome { code: 3, stdout: report, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") },
    }
}

fn dispatch(command: Command) -> CliResult<String> {
    match command {
        Command::Validate(a) => commands::cmd_validate(&a.input),
        Command::Eval { input, r, x } => commands::cmd_eval(&input.input, r, x),
        Command::Partition { input, r } => commands::cmd_partition(&input.input, r),
        Command::Compare { input, r, samples, seed } => commands::cmd_compare(&input.input, &r, samples, seed),
        Command::Plot { input, r, range, samples, out } => commands::cmd_plot(&PlotRequest {
            input: input.input,
            r_values: r,
            range,
            samples,
            output: out.output,
            format: out.format,
        }),
        Command::Gauge(g) => {
            let gauge = match g.kind {
                GaugeKind::Max => Gauge2D::MaxNorm,
                GaugeKind::L1 => Gauge2D::L1Norm,
                GaugeKind::Euclid => Gauge2D::scaled_euclidean(g.scale)?,
                GaugeKind::Custom => {
                    let [w1, w2] = g.weights[..] else {
                        return Err(CliError::Usage(format!("--weights takes two values, got {}", g.weights.len())));
                    };
                    commands::weighted_lp(g.norm_p, [w1, w2])?
                }
            };
            let mode = match (g.grid, g.samples) {
                (Some(grid), None) => GaugeMode::Grid(grid),
                (None, Some(n)) => GaugeMode::Circle(n),
                _ => return Err(CliError::Usage("give exactly one of --grid or --samples".into())),
            };
            let doc = commands::gauge_document(&gauge, &g.r, mode, g.out.format)?;
            commands::emit(doc, g.out.output.as_deref())
        }
    }
}
