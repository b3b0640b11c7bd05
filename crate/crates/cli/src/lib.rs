//! Entry points for the interpreter: batch script runs, a REPL, region
//! dumps and an HTTP service.

pub mod commands;
pub mod server;
pub mod setup;
pub mod views;
