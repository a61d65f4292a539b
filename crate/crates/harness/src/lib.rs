//! Configuration, orchestration and file formats for the TDGL solver.

pub mod compare;
pub mod config;
pub mod error;
pub mod preset;
pub mod run;
pub mod snapshot;
pub mod sweep;
pub mod timeseries;

pub use compare::{compare_runs, Comparison};
pub use config::{load_config, InitialState, RunConfig};
pub use error::{HarnessError, Result};
pub use preset::preset;
pub use run::{run_simulation, run_to_equilibrium, RunReport, Simulation, Termination};
pub use snapshot::{read_snapshot, write_snapshot, SnapshotHeader};
pub use sweep::{stability_sweep, SweepOptions, SweepResult};
pub use timeseries::{emit_timeseries, Record};
