//! Radial stretch of the standard simplex `{x ≥ 0, Σxᵢ ≤ 1}` onto a ball.
//!
//! With `c` the incenter of the simplex and `g` the Minkowski gauge of
//! `Δ − c` (so `g(v) = 1` exactly on the boundary), the map is
//!
//! ```text
//! φ(x) = λ(x) (x − c),   λ(x) = R g(x − c) / |x − c|,
//! ```
//!
//! i.e. every ray from `c` is stretched so that its boundary point lands on
//! the sphere of radius `R` about the origin, where `R` is the distance from
//! `c` to the farthest vertex. `λ ≥ 1` everywhere and `λ = 1` at the farthest
//! vertices. The certified Lipschitz constant is `n²`.

use nalgebra::DMatrix;

use super::map::LipschitzMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SimplexRadialMap {
    n: usize,
    center: Vec<f64>,
    radius: f64,
    /// Facets `a·x ≤ b` as `(a, b − a·c)`.
    facets: Vec<(Vec<f64>, f64)>,
}

impl SimplexRadialMap {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter("the simplex map needs n >= 2".into()));
        }
        let nf = n as f64;
        let inradius = 1.0 / (nf + nf.sqrt());
        let center = vec![inradius; n];
        let mut facets: Vec<(Vec<f64>, f64)> = (0..n)
            .map(|i| {
                let mut a = vec![0.0; n];
                a[i] = -1.0;
                (a, center[i])
            })
            .collect();
        facets.push((vec![1.0; n], 1.0 - nf * inradius));
        let mut vertices = vec![vec![0.0; n]];
        for i in 0..n {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            vertices.push(v);
        }
        let radius = vertices
            .iter()
            .map(|v| dist(v, &center))
            .fold(0.0, f64::max);
        Ok(SimplexRadialMap {
            n,
            center,
            radius,
            facets,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// Radius of the image ball (centered at the origin).
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Gauge `g(v) = max_F (a_F·v)/s_F` and the maximizing facet.
    fn gauge(&self, v: &[f64]) -> (f64, usize) {
        self.facets
            .iter()
            .enumerate()
            .map(|(i, (a, s))| (dot(a, v) / s, i))
            .fold((f64::NEG_INFINITY, 0), |best, cur| if cur.0 > best.0 { cur } else { best })
    }

    /// Stretch factor `λ(x)`; `λ(c)` is taken as its infimum, 1.
    pub fn stretch(&self, x: &[f64]) -> f64 {
        let v: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let r = norm(&v);
        if r == 0.0 {
            return 1.0;
        }
        self.radius * self.gauge(&v).0 / r
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let r = norm(&v);
        if r == 0.0 {
            return vec![0.0; self.n];
        }
        let scale = self.radius * self.gauge(&v).0 / r;
        v.iter().map(|vi| scale * vi).collect()
    }

    /// Inverse of [`Self::apply`], `y ↦ c + y|y|/(R g(y))`.
    pub fn apply_inverse(&self, y: &[f64]) -> Vec<f64> {
        let r = norm(y);
        if r == 0.0 {
            return self.center.clone();
        }
        let scale = r / (self.radius * self.gauge(y).0);
        y.iter().zip(&self.center).map(|(yi, ci)| ci + scale * yi).collect()
    }

    /// Differential inside the cone of the active facet:
    /// `Dφ = (R/s)[v aᵀ/|v| + (a·v)(I/|v| − v vᵀ/|v|³)]`.
    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let v: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let r = norm(&v);
        if r == 0.0 {
            // not differentiable at the center; report the zero matrix
            return DMatrix::zeros(n, n);
        }
        let (_, f) = self.gauge(&v);
        let (a, s) = &self.facets[f];
        let av = dot(a, &v);
        let k = self.radius / s;
        DMatrix::from_fn(n, n, |j, i| {
            let delta = if i == j { 1.0 } else { 0.0 };
            k * (v[j] * a[i] / r + av * (delta / r - v[j] * v[i] / (r * r * r)))
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// The radial map of the standard `n`-simplex onto the ball of radius
/// [`SimplexRadialMap::radius`] about the origin, with certified constant
/// `n²`.
pub fn simplex_map(n: usize) -> Result<LipschitzMap> {
    let radial = SimplexRadialMap::new(n)?;
    Ok(LipschitzMap::from_simplex_radial(radial, (n * n) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertices_land_on_sphere_and_center_on_origin() {
        for n in 2..=5 {
            let m = SimplexRadialMap::new(n).unwrap();
            let mut vertices = vec![vec![0.0; n]];
            for i in 0..n {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                vertices.push(v);
            }
            for v in &vertices {
                let y = m.apply(v);
                assert!((norm(&y) - m.radius()).abs() < 1e-12, "n={n} v={v:?}");
            }
            assert_eq!(m.apply(m.center()), vec![0.0; n]);
        }
    }

    #[test]
    fn inverse_round_trip_and_stretch_at_least_one() {
        let m = SimplexRadialMap::new(3).unwrap();
        for x in [[0.1, 0.2, 0.3], [0.5, 0.1, 0.05], [0.01, 0.01, 0.9]] {
            let back = m.apply_inverse(&m.apply(&x));
            assert!(dist(&back, &x) < 1e-12);
            assert!(m.stretch(&x) >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let m = SimplexRadialMap::new(3).unwrap();
        let x = [0.31, 0.12, 0.2];
        let jac = m.jacobian(&x);
        let h = 1e-6;
        for i in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let (fp, fm) = (m.apply(&xp), m.apply(&xm));
            for j in 0..3 {
                let fd = (fp[j] - fm[j]) / (2.0 * h);
                assert!((fd - jac[(j, i)]).abs() < 1e-6, "({j},{i}) {fd} vs {}", jac[(j, i)]);
            }
        }
    }
}
