//! Command-line front end, manifold config files and reports for
//! [`jmetric_core`].

pub mod cli;
pub mod config;
pub mod expr;
pub mod report;
