//! Gradient canyons of complex plane curve germs.

pub mod analysis;
pub mod canyon;
pub mod cluster;
pub mod corpus;
pub mod error;
pub mod number;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod polygon;
pub mod report;
pub mod selftest;
pub mod solver;
pub mod series;

pub use error::{Error, Result};
