//! Exact operator calculus on the Fock model of Hilbert schemes of points on a surface.

pub mod blocks;
pub mod chern;
pub mod decompose;
pub mod diagram;
pub mod dsl;
pub mod fock;
pub mod named;
pub mod op;
pub mod oracle;
pub mod rat;
pub mod rep;
pub mod split;
pub mod surface;
pub mod verify;
pub mod wick;
