//! The averaging homotopy operator `T` of Iwaniec and Lutoborski on a convex
//! domain,
//!
//! ```text
//! Tω(x) = ∫_D ι_{ζ(z, x−z)} ω(z) dz,
//! ζ(z, h) = Σ_{ν=k}^{n} C(n−k, ν−k) h/|h|^ν ∫₀^{diam D} s^{ν−1} φ(z − s h/|h|) ds,
//! ```
//!
//! evaluated by randomized lattice quadrature, plus a Galerkin probe of its
//! singular values.

mod discretize;
mod lattice;
mod mollifier;
mod operator;
mod sampled;
mod suite;

pub use discretize::{discretize_t, DiscretizeOptions, DiscretizedT, Spectrum};
pub use lattice::ShiftedLattice;
pub use mollifier::{GradientReport, Mollifier};
pub use operator::{
    homotopy_residual, t_apply, zeta, IlOperator, ResidualReport, TEstimate, FD_STEP, SHIFTS, SINGULAR_RADIUS,
};
pub use sampled::{component_count, fd_exterior_derivative, SampledForm, Stencil};
pub use suite::{smooth_suite, SuiteForm};
