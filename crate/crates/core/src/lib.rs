//! Deterministic, seeded agent-based simulator for collective estimation
//! on social networks.
//!
//! Agents hold numeric estimates of a question with a known true value and
//! revise them over a few rounds of weighted averaging with their network
//! neighbors. How much weight an agent keeps on itself is modulated by two
//! humility-style signals: how the agent's evidence quality compares to its
//! neighbors', and how partisan its neighborhood is. Matched control and
//! treatment runs share everything except the modulation coefficients, so
//! any difference in collective error, polarization or revision behavior is
//! attributable to the modulation alone.
//!
//! Modules:
//! - [`graph`]: seeded generators for the four network structures
//! - [`calib`]: dataset ingestion, field synthesis, synthetic datasets
//! - [`dynamics`]: self-weight modulation and the update rule
//! - [`metrics`]: error, polarization, revision coefficient, error
//!   decomposition
//! - [`stats`]: correlation, paired permutation tests, bootstrap intervals
//! - [`harness`]: experiment orchestration, sweeps, persistence, reports

pub mod calib;
pub mod dynamics;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod seed;
pub mod stats;
