use nalgebra::DMatrix;
use statrs::function::factorial::factorial;

use crate::constants::ball_volume;
use crate::error::{Error, Result};
use crate::lipschitz::LipschitzMap;

/// Integration domains. Balls and intervals are centered at the origin; the
/// standard simplex is `{x : xᵢ ≥ 0, Σxᵢ ≤ 1}`.
#[derive(Debug, Clone)]
pub enum Domain {
    Ball { n: usize, radius: f64 },
    Interval { half_width: f64 },
    StandardSimplex { n: usize },
    /// `map(base)`.
    BiLipschitzImage { base: Box<Domain>, map: LipschitzMap },
}

impl Domain {
    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("a ball needs n >= 1".into()));
        }
        check_radius(radius)?;
        Ok(Domain::Ball { n, radius })
    }

    pub fn unit_ball(n: usize) -> Self {
        Domain::Ball { n, radius: 1.0 }
    }

    pub fn interval(half_width: f64) -> Result<Self> {
        check_radius(half_width)?;
        Ok(Domain::Interval { half_width })
    }

    pub fn simplex(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("a simplex needs n >= 1".into()));
        }
        Ok(Domain::StandardSimplex { n })
    }

    pub fn image(base: Domain, map: LipschitzMap) -> Result<Self> {
        if base.dim() != map.dim() {
            return Err(Error::Dimension(format!(
                "map on R^{} applied to a domain in R^{}",
                map.dim(),
                base.dim()
            )));
        }
        Ok(Domain::BiLipschitzImage {
            base: Box::new(base),
            map,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Ball { n, .. } | Domain::StandardSimplex { n } => *n,
            Domain::Interval { .. } => 1,
            Domain::BiLipschitzImage { base, .. } => base.dim(),
        }
    }

    /// Diameter; for images this is the upper bound `C · diam(base)`.
    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Ball { radius, .. } => 2.0 * radius,
            Domain::Interval { half_width } => 2.0 * half_width,
            Domain::StandardSimplex { n } => {
                if *n == 1 {
                    1.0
                } else {
                    2f64.sqrt()
                }
            }
            Domain::BiLipschitzImage { base, map } => map.lipschitz_constant() * base.diameter(),
        }
    }

    /// Lebesgue measure when it is known in closed form (affine images
    /// included).
    pub fn volume(&self) -> Option<f64> {
        match self {
            Domain::Ball { n, radius } => Some(ball_volume(*n, *radius)),
            Domain::Interval { half_width } => Some(2.0 * half_width),
            Domain::StandardSimplex { n } => Some(1.0 / factorial(*n as u64)),
            Domain::BiLipschitzImage { base, map } => {
                Some(base.volume()? * map.affine_abs_determinant()?)
            }
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            Domain::Ball { radius, .. } => x.iter().map(|v| v * v).sum::<f64>() < radius * radius,
            Domain::Interval { half_width } => x[0].abs() < *half_width,
            Domain::StandardSimplex { .. } => {
                x.iter().all(|&v| v > 0.0) && x.iter().sum::<f64>() < 1.0
            }
            Domain::BiLipschitzImage { base, map } => map
                .apply_inverse(x)
                .is_some_and(|y| base.contains(&y)),
        }
    }

    /// A ball `(center, radius)` contained in the domain, when one is known.
    pub fn inscribed_ball(&self) -> Option<(Vec<f64>, f64)> {
        match self {
            Domain::Ball { n, radius } => Some((vec![0.0; *n], *radius)),
            Domain::Interval { half_width } => Some((vec![0.0], *half_width)),
            Domain::StandardSimplex { n } => {
                let nf = *n as f64;
                let r = 1.0 / (nf + nf.sqrt());
                Some((vec![r; *n], r))
            }
            Domain::BiLipschitzImage { base, map } => {
                if !map.is_affine() {
                    return None;
                }
                let (c, r) = base.inscribed_ball()?;
                let jac: DMatrix<f64> = map.jacobian(&c);
                let smin = jac.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
                Some((map.apply(&c), r * smin))
            }
        }
    }

    /// Whether the domain is convex: always for the basic kinds, and for
    /// affine images of convex domains.
    pub fn is_convex(&self) -> bool {
        match self {
            Domain::BiLipschitzImage { base, map } => map.is_affine() && base.is_convex(),
            _ => true,
        }
    }

    /// Axis-aligned box `(lo, hi)` of the base kinds, used for rejection
    /// sampling.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Domain::Ball { n, radius } => Some((vec![-radius; *n], vec![*radius; *n])),
            Domain::Interval { half_width } => Some((vec![-half_width], vec![*half_width])),
            Domain::StandardSimplex { n } => Some((vec![0.0; *n], vec![1.0; *n])),
            Domain::BiLipschitzImage { .. } => None,
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("radius must be positive, got {r}")))
    }
}
