pub mod dop;
pub mod scalar;
pub mod sp;
pub mod yin;
pub mod shapovalov;
