//! Cascaded multi-IRS link with one active IRS (AIRS) among passive ones
//! (PIRSs): optimal beamforming, received SNR and power, and placement of the
//! active surface along the path.
//!
//! Closed-form results live in [`metrics`] and [`deployment`]; [`channel`]
//! and [`beamforming`] rebuild the same quantities from explicit complex
//! channel matrices and serve as the reference they are tested against.

pub mod beamforming;
pub mod channel;
pub mod cli;
pub mod deployment;
pub mod error;
pub mod logspace;
pub mod metrics;
pub mod params;

pub use error::{Error, Result};
pub use metrics::{Mode, ObjectiveValue};
pub use params::{LinkBudget, Scenario, SystemParams};
