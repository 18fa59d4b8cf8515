//! Experiment harness for the `cv2x-mec` latency model: JSON config loading,
//! multi-threaded replication runner, parameter sweeps, CSV and SVG output.

pub mod config;
pub mod csv_out;
pub mod error;
pub mod plot;
pub mod runner;
pub mod sweep;

pub use config::{load_config, parse_config, ConfigOverrides};
pub use csv_out::{emit_csv, write_csv};
pub use error::{ConfigError, SimError, Violation};
pub use plot::{emit_plot, render_svg};
pub use runner::Runner;
pub use sweep::{run_sweep, SweepParameter, SweepResult, SweepRow, SweepSpec};
