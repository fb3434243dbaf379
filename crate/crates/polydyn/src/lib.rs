//! Map files, CSV and JSON reports, shared caches and the `polydyn` command
//! line on top of `polydyn-core`.

pub mod cache;
pub mod cli;
pub mod parallel;
pub mod parse;
pub mod report;
pub mod serialize;

pub use cache::SharedIterateCache;
pub use parse::{parse_map, parse_map_file, MapSpec, ParseError, ParseErrorKind};
pub use report::{Report, Table};
