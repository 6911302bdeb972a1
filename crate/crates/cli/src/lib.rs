//! Batch front-end: specification parsing, report generation and
//! certificate re-verification.

pub mod run;
pub mod spec;
pub mod verify;

pub use run::{run, Bundle, Report, Status};
pub use spec::{parse_spec, AnalysisSpec, SpecError, Task};
pub use verify::verify_certificate;
