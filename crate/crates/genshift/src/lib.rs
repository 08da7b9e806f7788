//! File formats, run configuration and the `genshift` command-line driver
//! on top of [`genshift_core`].

pub mod cli;
pub mod cmd;
pub mod config;
pub mod io;

pub use cli::{run, Exit};
