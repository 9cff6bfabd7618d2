//! Exterior calculus of polynomial differential forms and the Poincaré-lemma
//! homotopy operators, with their `L^p` operator-norm constants.
//!
//! The crate is organised bottom-up:
//!
//! - [`form`]: exact rational polynomials and `k`-forms (`∧`, `d`, `ι`).
//! - [`geometry`]: domains, moment-exact and Monte Carlo `L^p` norms.
//! - [`homotopy`]: the radial homotopy operator `S` and the Poincaré identity.
//! - [`il`]: the averaging homotopy operator `T` of Iwaniec–Lutoborski.
//! - [`lipschitz`]: pullbacks, transfer operators, the simplex-to-ball map.
//! - [`constants`]: closed-form norm bounds and tables.
//! - [`pharmonic`]: p-harmonic representatives by convex minimisation.

pub mod constants;
pub mod error;
pub mod form;
pub mod geometry;
pub mod homotopy;
pub mod il;
pub mod lipschitz;
pub mod pharmonic;

pub use error::{Error, Result};
