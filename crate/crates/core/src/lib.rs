pub mod curve;
pub mod error;
pub mod extension;
pub mod kernel;
pub mod report;
pub mod selftest;
pub mod universal;
pub mod extension_ops;
pub mod cli;
pub mod io;
pub mod pushout;
pub mod random;
