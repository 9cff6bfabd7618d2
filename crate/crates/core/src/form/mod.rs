//! Exact algebra of differential forms with polynomial coefficients.
//!
//! All operations return canonical values (sorted keys, no zero
//! coefficients), so `==` decides equality of forms exactly.

mod kform;
mod multi_index;
mod polynomial;
pub mod random;
mod text;

pub use kform::{FloatForm, KForm};
pub use multi_index::{sort_with_sign, MultiIndex};
pub use polynomial::{rat, rat_to_f64, Exponents, FloatPoly, Polynomial};
pub use text::{format_form, parse_form, parse_polynomial};
