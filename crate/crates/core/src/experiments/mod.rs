//! Threshold sweeps, inheritance experiments, constructor stress runs and
//! CSV persistence.

mod config;
mod csv;
mod hosts;
mod inheritance;
mod stress;
mod sweep;

pub use self::csv::{
    read_csv, read_spread_csv_from, read_sweep_csv_from, spread_rows, write_csv, write_spread_csv_to,
    write_sweep_csv_to, SpreadRow, SPREAD_HEADER, SWEEP_HEADER,
};
pub use config::{HostSpec, SweepConfig};
pub use hosts::{build_host, dirac_extremal, random_uniform};
pub use inheritance::{run_inheritance_experiment, InheritanceReport};
pub use stress::{run_constructor_stress, standard_battery, StressConfig, StressReport};
pub use sweep::{crossing_point, run_threshold_sweep, run_threshold_sweep_threads, wilson_interval, SweepRow};
