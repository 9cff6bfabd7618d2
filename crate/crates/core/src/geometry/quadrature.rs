use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::domain::Domain;
use crate::error::{Error, Result};
use crate::form::{FloatPoly, Polynomial};
use crate::lipschitz::LipschitzMap;

/// Sampling parameters shared by every Monte Carlo routine.
///
/// The file form is TOML with the keys `samples`, `seed` and `t_steps`, all
/// optional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(rename = "samples")]
    pub sample_count: usize,
    pub seed: u64,
    #[serde(rename = "t_steps")]
    pub t_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            sample_count: 20_000,
            seed: 0x5eed,
            t_subdivisions: 16,
        }
    }
}

impl QuadratureConfig {
    pub fn new(sample_count: usize, seed: u64, t_subdivisions: usize) -> Result<Self> {
        let cfg = QuadratureConfig {
            sample_count,
            seed,
            t_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_samples(self, sample_count: usize) -> Self {
        QuadratureConfig { sample_count, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        QuadratureConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::Parameter("sample count must be at least 1".into()));
        }
        if self.t_subdivisions == 0 {
            return Err(Error::Parameter("t_steps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: QuadratureConfig =
            toml::from_str(text).map_err(|e| Error::Parameter(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parameter(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}

/// `∫_{B(r)} x^α dx` in `ℝⁿ`: zero if some `αᵢ` is odd, otherwise
/// `r^{n+|α|} Πᵢ Γ((αᵢ+1)/2) / Γ(1 + (n+|α|)/2)`.
pub fn ball_monomial_moment(n: usize, alpha: &[u32], r: f64) -> f64 {
    assert_eq!(alpha.len(), n, "exponent vector length must equal n");
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let total = n as f64 + alpha.iter().map(|&a| a as f64).sum::<f64>();
    let log_num: f64 = alpha.iter().map(|&a| ln_gamma((a as f64 + 1.0) / 2.0)).sum();
    (total * r.ln() + log_num - ln_gamma(1.0 + total / 2.0)).exp()
}

/// Exact polynomial integration over a ball (or interval), possibly through
/// an affine change of variables: `∫_{A(B)} g = |det A| ∫_B g∘A`.
#[derive(Debug, Clone)]
pub struct ExactPlan {
    n: usize,
    radius: f64,
    map: Option<LipschitzMap>,
    jacobian: f64,
}

impl ExactPlan {
    /// `None` unless the domain is a ball, an interval, or an affine image
    /// of one.
    pub fn for_domain(dom: &Domain) -> Option<Self> {
        match dom {
            Domain::Ball { n, radius } => Some(ExactPlan {
                n: *n,
                radius: *radius,
                map: None,
                jacobian: 1.0,
            }),
            Domain::Interval { half_width } => Some(ExactPlan {
                n: 1,
                radius: *half_width,
                map: None,
                jacobian: 1.0,
            }),
            Domain::StandardSimplex { .. } => None,
            Domain::BiLipschitzImage { base, map } => {
                let det = map.affine_abs_determinant()?;
                let inner = Self::for_domain(base)?;
                let composed = match &inner.map {
                    Some(m) => map.compose(m).ok()?,
                    None => map.clone(),
                };
                Some(ExactPlan {
                    map: Some(composed),
                    jacobian: inner.jacobian * det,
                    ..inner
                })
            }
        }
    }

    /// Pulls a polynomial on the domain back to the reference ball.
    pub fn to_reference(&self, f: &Polynomial) -> Polynomial {
        match &self.map {
            Some(m) => f.compose(m.polynomial_components().expect("affine maps are polynomial")),
            None => f.clone(),
        }
    }

    /// `∫` of a polynomial already expressed on the reference ball.
    pub fn integrate_reference(&self, f: &FloatPoly) -> f64 {
        self.jacobian
            * f.terms()
                .iter()
                .map(|(e, c)| c * ball_monomial_moment(self.n, e, self.radius))
                .sum::<f64>()
    }

    pub fn integrate(&self, f: &Polynomial) -> f64 {
        self.integrate_reference(&self.to_reference(f).to_float())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn moments() {
        assert!((ball_monomial_moment(2, &[0, 0], 1.0) - PI).abs() < 1e-14);
        assert!((ball_monomial_moment(1, &[2], 1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(ball_monomial_moment(3, &[1, 2, 0], 2.0), 0.0);
        assert!((ball_monomial_moment(2, &[2, 0], 1.0) - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn config_from_toml() {
        let cfg = QuadratureConfig::from_toml_str("samples = 500\nseed = 7\n").unwrap();
        assert_eq!(cfg.sample_count, 500);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.t_subdivisions, QuadratureConfig::default().t_subdivisions);
        assert!(QuadratureConfig::from_toml_str("samples = 0").is_err());
        assert!(QuadratureConfig::from_toml_str("bogus = 1").is_err());
    }
}
