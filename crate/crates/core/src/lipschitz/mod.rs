//! Pullbacks along Lipschitz maps, the transfer operator `β* S α*`, and the
//! radial map of the standard simplex onto a ball.

mod map;
mod pullback;
mod simplex;
mod text;
mod transfer;

pub use map::{LipschitzMap, MapKind, PolynomialComponents};
pub use pullback::{pullback, pullback_at, pullback_operator_bounds, pullback_pointwise_bound, PullbackBounds};
pub use simplex::{simplex_map, SimplexRadialMap};
pub use text::parse_map;
pub use transfer::{homotopy_norm_bound, transfer_check, transfer_gamma, TransferOperator, TransferReport};
