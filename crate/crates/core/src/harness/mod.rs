//! Generators, the configuration file format, and experiment reports.

mod experiment;
mod format;
mod generate;
mod report;
mod sweep;

pub use experiment::{run_experiment, ExperimentOptions, ReportRow};
pub use format::{parse_config, serialize_config};
pub use generate::{generate, GeneratorKind, GeneratorSpec, PlantedFlat};
pub use report::{read_csv, to_csv_string, write_csv, write_jsonl, COLUMNS};
pub use sweep::{sweep, ParamsDoc, SweepSpec, Vary};
