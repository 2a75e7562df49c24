//! Command implementations behind the `dnavlc` binary.

pub mod bench;
pub mod files;
pub mod images;

use dnavlc::Error;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CORRUPT: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

/// Process exit status for a failed command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::Corrupt { .. } | Error::Desync { .. } | Error::Structural(_) => EXIT_CORRUPT,
        _ => EXIT_INPUT,
    }
}
