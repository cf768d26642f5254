//! Scenario files, parameter sweeps, CSV output and the `irs-hetnet` command
//! line driver built on the `irs-hetnet` core.

pub mod csv_out;
pub mod error;
pub mod link;
pub mod scenario;
pub mod sweep;
pub mod validate;

pub use error::{Result, SimError};
pub use scenario::{load_scenario, Scenario, Separation};
pub use sweep::{run_association_sweep, run_capacity_sweep, SweepRow, SweepSpec, SweepVariable};
