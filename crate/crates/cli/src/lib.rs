//! Command implementations of the `bidisc` binary.

pub mod commands;
pub mod report;
pub mod verify;
