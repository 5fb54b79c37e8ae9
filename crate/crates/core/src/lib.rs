//! Ordinal patterns of time series and ordinal pattern dependence between two series.
//!
//! - [`patterns`]: extraction of ordinal patterns, reflection, ranking, window schemes.
//! - [`dependence`]: pattern distributions, coincident/reflected counts and the
//!   `alpha_tilde`/`beta_tilde` estimators, delay scans and rolling windows.
//! - [`synth`]: seeded Gaussian walks, correlated AR(1) pairs and outlier injection.
//! - [`ingest`]: keyed series, CSV input/output and key alignment.
//! - [`cli`]: the `ordpat` command-line front end.
//!
//! ```
//! use ordpat::{analyze_values, PatternConfig};
//!
//! let x = [1.0, 3.0, 2.0, 5.0, 4.0, 6.0];
//! let y = [6.0, 4.0, 5.0, 2.0, 3.0, 1.0];
//! let report = analyze_values(&x, &y, &PatternConfig::sliding(2)).unwrap();
//! assert_eq!(report.n_reflected, report.n_windows);
//! ```

pub mod cli;
pub mod dependence;
pub mod error;
pub mod ingest;
pub mod patterns;
pub mod synth;

pub use dependence::{
    alpha_beta, analyze_pair, analyze_values, baselines, coincident_reflected_counts, delay_scan,
    distribution, increment_correlation, rolling_analysis, DependenceReport, PatternDistribution,
    RollingReport,
};
pub use error::{Error, Result};
pub use ingest::{align, read_csv, write_csv, TimeSeries};
pub use patterns::{
    extract_pattern, extract_pattern_with_tolerance, pattern_sequence, OrdinalPattern,
    PatternConfig, PatternSequence, WindowScheme,
};
