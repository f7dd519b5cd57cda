//! IO layer over `braidgate-core`: text formats, family files, the CLI,
//! and a threaded driver for the compiler's level search.

pub mod cli;
pub mod files;
pub mod format;
pub mod parallel;

pub fn cli_main() -> i32 {
    cli::run()
}
