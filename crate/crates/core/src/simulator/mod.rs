//! Monte Carlo scenarios, parameter sweeps, presets and CSV output.
//!
//! A [`ScenarioConfig`] fixes antenna counts, SNR targets, the transmit
//! scheme and the eavesdropper's attacks. [`run_point`] evaluates it over
//! independent channel draws; [`sweep`] repeats that across one parameter.

pub mod config;
pub mod presets;
pub mod report;
pub mod run;
pub mod timing;
pub mod ula;

pub use config::{parse_config, parse_values, DesignChoice, EveStrategy, ScenarioConfig, SolverChoice, SweepSpec};
pub use presets::{preset, Preset, PRESET_NAMES};
pub use report::{write_reports, write_snr_traces, PointReport, SnrTrace};
pub use run::{run_point, sweep};
pub use timing::{brute_force_timing, write_timing_csv, TimingConfig, TimingRow};
pub use ula::{ula_scenario, write_ula_csv, UlaConfig, UlaPoint, UlaProfile};
