//! Experiment specs, running them, and writing result records as JSON or CSV.

mod record;
mod run;
mod spec;

pub use record::{read_record, write_record, write_results, Format, Output, OutputValue, ResultRecord, Timing, Versions};
pub use run::run;
pub use spec::{parse_spec, Category, EdgeRef, ExperimentSpec, Kind, Limits, SCHEMA_VERSION};
