//! Exact and Monte Carlo audits of hidden-variable models for the
//! two-photon polarization singlet.
//!
//! Four layers:
//!
//! - [`oracle`]: closed-form outcome statistics for the correlated photon
//!   pair at analyzer settings (theta, phi) — the ground truth.
//! - [`model`]: deterministic hidden-variable models over uniform draws on
//!   the unit interval that reproduce those statistics exactly, in a
//!   disjoint and a maximally overlapping response-set layout.
//! - [`audit`]: exact interval-measure checks of whether averaging over
//!   Alice's outcome removes the theta dependence of Bob's conditional law
//!   at fixed hidden value — it does for the disjoint layout and fails for
//!   the overlapping one — plus faithfulness, observable-level
//!   non-signaling, and uniform-conditional checks. [`sampler`] provides
//!   the seeded Monte Carlo cross-check for every exact probability.
//! - [`commutator`]: a finite-dimensional demonstration that two functions
//!   of one Hermitian matrix always commute while truncated position and
//!   momentum never do, so no single Hermitian operator can sit behind
//!   both.

pub mod audit;
pub mod commutator;
pub mod error;
pub mod interval;
pub mod model;
pub mod oracle;
pub mod sampler;

pub use error::{Error, Result};
pub use interval::IntervalSet;
pub use model::{CounterexampleModel, HVValue, NonlocalParameterModel, ResponseSets, Variant};
pub use oracle::{Angle, Outcome};
