pub mod expr;
pub mod json;
pub mod session;
pub mod suites;
pub mod cli;
