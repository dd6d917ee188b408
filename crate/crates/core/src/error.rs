use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid rectangle [{x0}, {x1}] x [{y0}, {y1}]")]
    InvalidRectangle { x0: f64, y0: f64, x1: f64, y1: f64 },

    #[error("invalid configuration: {}", format_violations(.0))]
    InvalidConfiguration(Vec<Violation>),

    #[error("configurations live on different rectangles")]
    RectangleMismatch,

    #[error("sub-rectangle is not contained in the configuration rectangle")]
    NotContained,

    #[error("invalid initial law: {0}")]
    InvalidLaw(String),

    #[error("operation requires a Poisson initial law")]
    UnsupportedLaw,

    #[error("invalid sampling range: {0}")]
    InvalidRange(String),

    #[error("runaway diagram: more than {max_events} events")]
    RunawayDiagram { max_events: u64 },

    #[error("statistical test undefined: {0}")]
    Inconclusive(String),
}

fn format_violations(violations: &[Violation]) -> String {
    let shown: Vec<String> = violations.iter().take(5).map(|v| v.to_string()).collect();
    let mut out = shown.join("; ");
    if violations.len() > 5 {
        out.push_str(&format!(" (+{} more)", violations.len() - 5));
    }
    out
}
