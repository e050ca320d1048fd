//! Experiment harness for the compute-and-forward simulation kernel:
//! sweep configuration and Monte Carlo driving, CSV emission, diversity
//! slope estimation, figure presets, and the self-check suites.

pub mod config;
pub mod diversity;
pub mod presets;
pub mod sweep;
pub mod validate;

pub use config::{parse_config, ConfigError};
pub use diversity::{estimate_diversity, DiversityError, DiversityEstimate};
pub use presets::{figure_presets, FigurePreset, LabeledSweep, UnknownPreset};
pub use sweep::{curve_from_csv, curve_to_csv, run_sweep, OutageCurve, SweepConfig, SweepError};
pub use validate::{run_suite, SuiteReport, UnknownSuite};
