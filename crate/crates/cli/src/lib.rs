//! Library half of the study harness: configuration files, the power study
//! driver and the real-data battery. The `frytest` binary is a thin layer on
//! top of these.

pub mod battery;
pub mod config;
pub mod study;

use frytest::error::Error;

/// Process exit code for an error: 2 for configuration problems, 3 for data
/// problems, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Domain(_) | Error::Geometry(_) => 2,
        Error::Io(_) | Error::Parse { .. } | Error::Data(_) | Error::TooFewPoints { .. } => 3,
        _ => 1,
    }
}
