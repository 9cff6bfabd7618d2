//! Domains, moment-exact and Monte Carlo integration, `L^p` norms of forms.

mod domain;
mod norms;
mod quadrature;
mod sampling;

pub use domain::Domain;
pub use norms::{
    exact_power_integral, lp_norm, lp_norm_sampled, ratio_check, ratio_check_sampled, NormEstimate,
    RatioCheck,
};
pub use quadrature::{ball_monomial_moment, ExactPlan, QuadratureConfig};
pub use sampling::{chunk_rng, sample_domain, Samples, CHUNK};
