//! Companion crate to `drs-core`: JSON and Graphviz serializations of
//! certificates, and the `drsolve` command-line interface.

pub mod cli;
pub mod dot;
pub mod json;

pub use cli::{dispatch, Dispatch};
