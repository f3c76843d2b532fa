//! File formats and command implementations behind the `srcflow` binary.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure (a
//! diagnostic JSON object goes to stderr), 3 validation failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod table;

use serde_json::{json, Value};
use srcflow_core::Error;

/// A failed run: exit code, one-line message and optional diagnostic JSON.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub diagnostic: Option<Value>,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into(), diagnostic: None }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into(), diagnostic: None }
    }

    /// Maps a solver error: argument and model-kind errors are configuration
    /// errors, everything else is a numerical failure.
    pub fn from_core(err: Error) -> Self {
        let message = err.to_string();
        let (kind, details) = match &err {
            Error::Domain { value, .. } => ("domain", json!({ "value": value })),
            Error::ModelKind { .. } => ("model-kind", json!({})),
            Error::Regime { .. } => ("regime", json!({})),
            Error::Unsupported { .. } => ("unsupported", json!({})),
            Error::NoSolution { r } => ("no-solution", json!({ "r": r })),
            Error::BranchLost { r, v } => ("branch-lost", json!({ "r": r, "v": v })),
            Error::NonConvergence { residual, iterations, last } => (
                "non-convergence",
                json!({ "residual": residual, "iterations": iterations, "last_iterate": last }),
            ),
            Error::Singular { .. } => ("singular", json!({})),
            Error::NotInvertible { roots } => ("not-invertible", json!({ "roots": roots })),
            Error::Range { value, .. } => ("range", json!({ "value": value })),
            Error::NoStep { max_slope, background_slope } => (
                "no-step",
                json!({ "max_slope": max_slope, "background_slope": background_slope }),
            ),
        };
        let is_config = matches!(
            err,
            Error::Domain { .. } | Error::ModelKind { .. } | Error::Regime { .. } | Error::Unsupported { .. }
        );
        if is_config {
            return Failure::config(message);
        }
        let diagnostic = json!({
            "status": "numerical-failure",
            "kind": kind,
            "message": message,
            "details": details,
        });
        Failure { code: 2, message, diagnostic: Some(diagnostic) }
    }

    pub fn io(err: anyhow::Error) -> Self {
        Failure::config(format!("{err:#}"))
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::from_core(err)
    }
}
