use serde::Serialize;

use crate::constants::sphere_area;
use crate::error::{Error, Result};
use crate::geometry::Domain;

/// `φ(y) = A exp(−1/(1−|u|²))` for `|u| < 1`, `u = (y − c)/a`, with `A`
/// chosen so that `∫φ = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct Mollifier {
    center: Vec<f64>,
    scale: f64,
    normalization: f64,
}

/// The achieved `sup|∇φ|` next to `2μ(D)(diam D)^{−n−1}` (with `μ` the
/// Lebesgue measure). Reported, not enforced.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GradientReport {
    pub achieved: f64,
    pub reference: f64,
    pub within_reference: bool,
}

/// Simpson panels for the radial profile integral, and the midpoint count of
/// the independent check.
const PROFILE_PANELS: usize = 4000;
const CHECK_POINTS: usize = 40_000;

fn bump(t: f64) -> f64 {
    if t >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t)).exp()
    }
}

/// `∫₀¹ ρ^{n−1} exp(−1/(1−ρ²)) dρ` by composite Simpson and by the midpoint
/// rule.
fn profile_integrals(n: usize) -> (f64, f64) {
    let f = |r: f64| r.powi(n as i32 - 1) * bump(r * r);
    let h = 1.0 / PROFILE_PANELS as f64;
    let mut simpson = 0.0;
    for i in 0..PROFILE_PANELS {
        let a = i as f64 * h;
        simpson += f(a) + 4.0 * f(a + h / 2.0) + f(a + h);
    }
    simpson *= h / 6.0;
    let hm = 1.0 / CHECK_POINTS as f64;
    let midpoint = (0..CHECK_POINTS).map(|i| f((i as f64 + 0.5) * hm)).sum::<f64>() * hm;
    (simpson, midpoint)
}

impl Mollifier {
    /// Bump of radius `scale` about `center`; fails if the two profile
    /// quadratures disagree by more than `1e−6` relative.
    pub fn new(center: Vec<f64>, scale: f64) -> Result<Self> {
        let n = center.len();
        if n == 0 || !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Parameter("mollifier needs n >= 1 and a positive scale".into()));
        }
        let (simpson, midpoint) = profile_integrals(n);
        if ((simpson - midpoint) / simpson).abs() > 1e-6 {
            return Err(Error::Parameter(format!(
                "mollifier normalization unstable: {simpson} vs {midpoint}"
            )));
        }
        let mass = sphere_area(n) * scale.powi(n as i32) * simpson;
        Ok(Mollifier {
            center,
            scale,
            normalization: 1.0 / mass,
        })
    }

    /// Centered at the center of the domain's inscribed ball, with half its
    /// radius as scale.
    pub fn for_domain(dom: &Domain) -> Result<Self> {
        let (c, r) = dom
            .inscribed_ball()
            .ok_or_else(|| Error::Parameter("no inscribed ball known for this domain".into()))?;
        Self::new(c, 0.5 * r)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        let d2: f64 = y.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        self.normalization * bump(d2 / (self.scale * self.scale))
    }

    /// `sup|∇φ| = (A/a) max_ρ 2ρ e^{−1/(1−ρ²)}/(1−ρ²)²`, maximized on a fine
    /// grid.
    pub fn gradient_sup(&self) -> f64 {
        let m = 100_000;
        let peak = (1..m)
            .map(|i| {
                let r = i as f64 / m as f64;
                let t = 1.0 - r * r;
                2.0 * r * bump(r * r) / (t * t)
            })
            .fold(0.0, f64::max);
        self.normalization * peak / self.scale
    }

    pub fn gradient_report(&self, dom: &Domain) -> Option<GradientReport> {
        let mu = dom.volume()?;
        let reference = 2.0 * mu * dom.diameter().powi(-(dom.dim() as i32) - 1);
        let achieved = self.gradient_sup();
        Some(GradientReport {
            achieved,
            reference,
            within_reference: achieved <= reference,
        })
    }

    /// `[u_in, u_out]` with `u_in ≥ 0` such that `p − uθ` lies in the
    /// support for `u` in that range, `None` if the ray misses it.
    pub(crate) fn ray_interval(&self, p: &[f64], theta: &[f64]) -> Option<(f64, f64)> {
        let mut wt = 0.0;
        let mut ww = 0.0;
        for ((pi, ci), ti) in p.iter().zip(&self.center).zip(theta) {
            let w = pi - ci;
            wt += w * ti;
            ww += w * w;
        }
        let disc = wt * wt - ww + self.scale * self.scale;
        if disc <= 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let hi = wt + sq;
        if hi <= 0.0 {
            return None;
        }
        Some(((wt - sq).max(0.0), hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_mass_by_monte_carlo_grid() {
        // midpoint grid over the support square
        let m = Mollifier::new(vec![0.1, -0.2], 0.5).unwrap();
        let k = 800;
        let h = 1.0 / k as f64;
        let mut total = 0.0;
        for i in 0..k {
            for j in 0..k {
                let y = [0.1 - 0.5 + (i as f64 + 0.5) * h, -0.2 - 0.5 + (j as f64 + 0.5) * h];
                total += m.eval(&y);
            }
        }
        assert!((total * h * h - 1.0).abs() < 1e-6, "{}", total * h * h);
    }

    #[test]
    fn ray_hits_and_misses() {
        let m = Mollifier::new(vec![0.0, 0.0], 0.5).unwrap();
        let (a, b) = m.ray_interval(&[1.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!((a - 0.5).abs() < 1e-12 && (b - 1.5).abs() < 1e-12);
        assert!(m.ray_interval(&[1.0, 0.0], &[-1.0, 0.0]).is_none());
        assert!(m.ray_interval(&[1.0, 1.0], &[1.0, 0.0]).is_none());
    }

    #[test]
    fn gradient_report_exceeds_reference_on_disk() {
        let d = Domain::unit_ball(2);
        let r = Mollifier::for_domain(&d).unwrap().gradient_report(&d).unwrap();
        assert!((r.reference - std::f64::consts::PI / 4.0).abs() < 1e-12);
        assert!(r.achieved > r.reference);
    }
}
