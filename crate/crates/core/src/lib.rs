//! Numerical laboratory for a coupled semilinear wave-Klein-Gordon system
//! in radial symmetry: forward evolution, extraction of the asymptotic
//! profiles (Klein-Gordon amplitudes, interior homogeneous profile,
//! radiation field), and the scattering-from-infinity construction by
//! backward evolution from a ladder of final times.

pub mod error;
pub mod evolve;
pub mod geometry;
pub mod interp;
pub mod quad;

pub use error::{Error, Result};
