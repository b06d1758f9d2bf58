//! Instance files, polynomial strings, report documents, and the self-test
//! harness behind the command-line tool.

pub mod instance;
pub mod poly;
pub mod report_json;
pub mod selftest;

pub use instance::{CoefficientMode, InstanceFile, TensorFile, TermFile};
pub use poly::{format_polynomial, parse_polynomial};
pub use report_json::{document, report_json};
pub use selftest::{run_selftest, SelftestSummary};
