//! Lipschitz percolation above tilted planes.
//!
//! * [`lattice`] and [`field`]: tilted-plane geometry and the seeded site field.
//! * [`lambda`]: admissible lambda-path reachability and minimal surfaces.
//! * [`bounds`]: closed-form and numerically solved critical-probability bounds.
//! * [`rho`]: oriented rho-percolation dynamic programs.
//! * [`mc`]: Monte Carlo estimators on top of the engines.
//! * [`sweep`] and [`checks`]: parameter sweeps, reports and the self-check suite.

pub mod bounds;
pub mod checks;
pub mod error;
pub mod field;
pub mod lambda;
pub mod lattice;
pub mod mc;
pub mod rational;
pub mod rho;
pub mod roots;
pub mod stats;
pub mod sweep;

pub use error::{Error, Result};
pub use field::{ConfigField, SiteConfig, SiteState};
pub use lattice::{FloorKind, FloorSpec, Site, TiltSpec};
pub use rational::Alpha;
