//! Numerical laboratory for entanglement growth after local quenches.
//!
//! * [`fermion`]: Gaussian free-fermion chains via correlation matrices.
//! * [`spin`]: exact diagonalization of Ising chains (entropy, negativity, OTOCs).
//! * [`cft`]: closed-form quench, scrambling and shockwave formulas.
//! * [`eikonal`]: absorptive eikonal scattering and the suppression model.
//! * [`diagnostics`]: log-slope and OTOC fits, plateau detection, regime verdicts.

use serde::{Deserialize, Serialize};

pub mod cft;
pub mod diagnostics;
pub mod eikonal;
mod error;
pub mod fermion;
pub mod linalg;
pub mod series;
pub mod spin;

pub use error::{Error, Result};
pub use series::TimeSeries;

/// Lattice boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Version of this library, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
