//! Symbolic and matrix-level tools for Langlands parameters of GL(2n) and
//! their linear periods.

pub mod cli;
pub mod distinction;
pub mod groups;
pub mod matrix;
pub mod notation;
pub mod param;
