pub mod catalog;
pub mod cli;
pub mod costs;
pub mod document;
pub mod effects;
pub mod entropy;
pub mod error;
pub mod hilbert;
pub mod matrix;
pub mod recovery;
pub mod report;
