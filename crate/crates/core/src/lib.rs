//! Forward and inverse resonance problems for Jacobi operators on the
//! half-lattice with finitely supported perturbations.
//!
//! The forward map sends a perturbation `q = (a, b)` to the roots of its Jost
//! function `psi_0`: bound states inside the unit disc, virtual states at
//! `+-1` and resonances outside. The inverse maps recover `q` from those
//! roots, from the spectra of the two rank-one modified truncations `J^+-`,
//! or from the phase-shift sequence `omega`.

pub mod error;
pub mod fixtures;
pub mod inverse;
pub mod jacobi;
pub mod jost;
pub mod models;
pub mod poly;
pub mod spectral;
pub mod tolerance;

pub use error::{ErrorClass, JresError, Result, Rule};
pub use jacobi::{FiniteJacobi, VariantSpectra};
pub use jost::{AsymptoticReport, Perturbation};
pub use poly::{LaurentPoly, RealPoly, Root, RootSet};
pub use tolerance::Tolerances;
