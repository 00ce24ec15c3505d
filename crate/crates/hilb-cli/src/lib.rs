pub mod cert;
pub mod suites;
