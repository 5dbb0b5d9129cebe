//! Command-line front end: scene files, built-in examples and the table and
//! benchmark drivers.

pub mod bench;
pub mod error;
pub mod examples;
pub mod output;
pub mod scene;
pub mod table2;
