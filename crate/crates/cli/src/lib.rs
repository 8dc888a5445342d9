//! Batch front-end for `abnorm-core`.
//!
//! Exit codes: 0 ok, 1 failed check or verdict mismatch, 2 usage,
//! 3 corrupted catalog data, 4 non-generating subspace.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::fmt;

pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NON_GENERATING: i32 = 4;

/// An error carrying the process exit status it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure::new(EXIT_USAGE, message)
    }

    pub fn usage_from(e: abnorm_core::error::Error) -> Self {
        Failure::usage(e.to_string())
    }

    pub fn internal_from(e: abnorm_core::error::Error) -> Self {
        Failure::new(EXIT_FAILED, e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}
