mod analyze;
mod census;
mod exact;
mod figures;

use anyhow::Result;

use crate::cli::{Cli, Command, Format};
use crate::output::emit;

/// How a command that produced output ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    TrendFailure,
}

pub struct Outcome {
    pub text: String,
    pub status: Status,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            status: Status::Success,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::Analyze => analyze::run(g, g.format.unwrap_or(Format::Json))?,
        Command::Fig1 { p0_grid } => figures::fig1(g, p0_grid, g.format.unwrap_or(Format::Csv))?,
        Command::Fig2 { x_points } => figures::fig2(g, *x_points, g.format.unwrap_or(Format::Csv))?,
        Command::ExactCompare {
            kind,
            k,
            alpha,
            crosscheck,
        } => exact::run(
            g,
            *kind,
            k,
            alpha,
            *crosscheck,
            g.format.unwrap_or(Format::Csv),
        )?,
        Command::Census { k } => census::run(g, k, g.format.unwrap_or(Format::Csv))?,
    };
    emit(&outcome.text, g.out.as_deref())?;
    Ok(outcome.status)
}
