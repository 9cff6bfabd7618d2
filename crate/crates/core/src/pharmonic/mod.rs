//! Minimal-energy primitives: `η = base + Σ c_b dφ_b` minimizing
//! `E(η) = ∫_D |η|^p` over a polynomial gauge space, so `dη` never changes.

mod energy;
mod solver;
mod space;

pub use energy::{energy, energy_gradient, EnergyModel};
pub use solver::{
    check_final_bound, minimize, p_harmonic_representative, quotient_norm, FinalBoundReport, PHarmonicResult,
    SolverOptions,
};
pub use space::SolutionSpace;
