use log::debug;
use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::factorial::binomial;

use super::lattice::ShiftedLattice;
use super::mollifier::Mollifier;
use super::sampled::{component_count, fd_exterior_derivative, SampledForm, Stencil};
use crate::constants::sphere_area;
use crate::error::{Error, Result};
use crate::form::MultiIndex;
use crate::geometry::{chunk_rng, Domain, QuadratureConfig};

/// Number of random lattice shifts; the error estimate uses their spread.
pub const SHIFTS: usize = 8;

/// Relative radius `ε/diam D` below which `z` is treated as `x`.
pub const SINGULAR_RADIUS: f64 = 1e-6;

/// Relative finite-difference step `h/diam D` for `dT`.
pub const FD_STEP: f64 = 1e-3;

const MAX_DIM: usize = 8;

/// `ι_θ` on dense covectors: for each `k`-index, the `(k−1)`-faces it
/// contributes to with sign and the removed coordinate.
#[derive(Debug, Clone)]
pub(crate) struct Contraction {
    pub(crate) out_len: usize,
    entries: Vec<Vec<(usize, f64, usize)>>,
}

impl Contraction {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let lower = MultiIndex::all(n, k - 1);
        let entries = MultiIndex::all(n, k)
            .iter()
            .map(|idx| {
                (0..k)
                    .map(|pos| {
                        let face = lower.binary_search(&idx.without_position(pos)).expect("face");
                        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                        (face, sign, idx.indices()[pos])
                    })
                    .collect()
            })
            .collect();
        Contraction {
            out_len: lower.len(),
            entries,
        }
    }

    /// `out += scale · ι_v w`.
    pub(crate) fn accumulate(&self, v: &[f64], w: &[f64], scale: f64, out: &mut [f64]) {
        for (wj, list) in w.iter().zip(&self.entries) {
            if *wj == 0.0 {
                continue;
            }
            for &(face, sign, j) in list {
                out[face] += scale * sign * v[j] * wj;
            }
        }
    }
}

/// Line integrals `I_ν = ∫ s^{ν−1} φ(p − sθ) ds` for `ν = k..=n` over the
/// part of `[0, s_max]` where the ray meets the support of `φ`, by composite
/// Simpson with `panels` panels. `out[ν − k]` receives `I_ν`.
pub(crate) fn ray_integrals(
    phi: &Mollifier,
    p: &[f64],
    theta: &[f64],
    k: usize,
    s_max: f64,
    panels: usize,
    out: &mut [f64],
) {
    let n = p.len();
    out.iter_mut().for_each(|v| *v = 0.0);
    let Some((lo, hi)) = phi.ray_interval(p, theta) else {
        return;
    };
    let hi = hi.min(s_max);
    if hi <= lo {
        return;
    }
    let h = (hi - lo) / panels as f64;
    let mut y = [0.0; MAX_DIM];
    let mut node = |s: f64, w: f64, out: &mut [f64]| {
        for i in 0..n {
            y[i] = p[i] - s * theta[i];
        }
        let f = phi.eval(&y[..n]);
        if f == 0.0 {
            return;
        }
        let mut sp = w * f * s.powi(k as i32 - 1);
        for v in out.iter_mut() {
            *v += sp;
            sp *= s;
        }
    };
    for i in 0..panels {
        let a = lo + i as f64 * h;
        let wa = if i == 0 { 1.0 } else { 2.0 };
        node(a, wa, out);
        node(a + 0.5 * h, 4.0, out);
    }
    node(hi, 1.0, out);
    out.iter_mut().for_each(|v| *v *= h / 6.0);
}

/// The kernel `ζ(z, h) = Σ_{ν=k}^{n} C(n−k, ν−k) h/|h|^ν ∫₀^{diam D} s^{ν−1} φ(z − s h/|h|) ds`.
pub fn zeta(
    z: &[f64],
    h: &[f64],
    k: usize,
    phi: &Mollifier,
    domain: &Domain,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let n = z.len();
    if n != h.len() || n != phi.dim() || n != domain.dim() {
        return Err(Error::Dimension("zeta arguments live in different dimensions".into()));
    }
    if k == 0 || k > n || n > MAX_DIM {
        return Err(Error::Degree(format!("zeta needs 1 <= k <= n <= {MAX_DIM}")));
    }
    let norm = h.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Singularity("zeta(z, 0) is undefined".into()));
    }
    let theta: Vec<f64> = h.iter().map(|v| v / norm).collect();
    let mut integrals = [0.0; MAX_DIM + 1];
    let m = n - k + 1;
    ray_integrals(phi, z, &theta, k, domain.diameter(), cfg.t_subdivisions, &mut integrals[..m]);
    let factor: f64 = (0..m)
        .map(|j| binomial((n - k) as u64, j as u64) * norm.powi(1 - (k + j) as i32) * integrals[j])
        .sum();
    Ok(theta.iter().map(|t| t * factor).collect())
}

/// `Tω(x)` with its standard error; `rejected` counts samples within the
/// singular radius of `x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TEstimate {
    pub value: Vec<f64>,
    pub std_error: Vec<f64>,
    pub rejected: usize,
}

/// The averaging operator `T` on a convex domain, set up for repeated
/// evaluation. All evaluations share one randomized lattice, so estimates
/// at nearby points use common random numbers.
#[derive(Debug, Clone)]
pub struct IlOperator {
    domain: Domain,
    phi: Mollifier,
    cfg: QuadratureConfig,
    lattice: ShiftedLattice,
}

impl IlOperator {
    pub fn new(domain: Domain, phi: Mollifier, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let n = domain.dim();
        if phi.dim() != n {
            return Err(Error::Dimension("mollifier and domain dimensions differ".into()));
        }
        if n > MAX_DIM {
            return Err(Error::Dimension(format!("T is implemented for n <= {MAX_DIM}")));
        }
        if !domain.is_convex() {
            return Err(Error::Parameter("T needs a convex domain".into()));
        }
        // direction coordinates plus one radial coordinate
        let dim = match n {
            1 | 2 => 2,
            3 => 3,
            _ => n + 1,
        };
        let lattice = ShiftedLattice::new(dim, cfg.sample_count.div_ceil(SHIFTS), SHIFTS, cfg.seed);
        Ok(IlOperator {
            domain,
            phi,
            cfg,
            lattice,
        })
    }

    /// With the default mollifier of the domain.
    pub fn for_domain(domain: Domain, cfg: QuadratureConfig) -> Result<Self> {
        let phi = Mollifier::for_domain(&domain)?;
        Self::new(domain, phi, cfg)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn mollifier(&self) -> &Mollifier {
        &self.phi
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    fn direction(&self, u: &[f64], theta: &mut [f64]) {
        let n = theta.len();
        match n {
            1 => theta[0] = if u[0] < 0.5 { -1.0 } else { 1.0 },
            2 => {
                let a = 2.0 * std::f64::consts::PI * u[0];
                theta[0] = a.cos();
                theta[1] = a.sin();
            }
            3 => {
                let c = 1.0 - 2.0 * u[0];
                let s = (1.0 - c * c).max(0.0).sqrt();
                let a = 2.0 * std::f64::consts::PI * u[1];
                theta[0] = s * a.cos();
                theta[1] = s * a.sin();
                theta[2] = c;
            }
            _ => {
                let normal = Normal::standard();
                for (t, v) in theta.iter_mut().zip(u) {
                    *t = normal.inverse_cdf(v.clamp(1e-12, 1.0 - 1e-12));
                }
                let r = theta.iter().map(|v| v * v).sum::<f64>().sqrt();
                theta.iter_mut().for_each(|v| *v /= r);
            }
        }
    }

    /// `Tω(x) = ∫_D ι_{ζ(z, x−z)} ω(z) dz`, integrated in polar coordinates
    /// `z = x − ρθ` about `x`, where the `ρ^{n−1}` Jacobian cancels the kernel
    /// singularity.
    pub fn apply(&self, w: &SampledForm, x: &[f64]) -> Result<TEstimate> {
        let n = self.domain.dim();
        let k = w.degree();
        if w.dim() != n || x.len() != n {
            return Err(Error::Dimension("form, point and domain dimensions differ".into()));
        }
        if k == 0 {
            return Err(Error::Degree("T is not defined on 0-forms".into()));
        }
        let contraction = Contraction::new(n, k);
        let out_len = contraction.out_len;
        let m = n - k + 1;
        let weights: Vec<f64> = (0..m).map(|j| binomial((n - k) as u64, j as u64)).collect();
        let diam = self.domain.diameter();
        let eps = SINGULAR_RADIUS * diam;
        let area = sphere_area(n);
        let size = self.lattice.size();
        let mut u = vec![0.0; self.lattice.dim()];
        let mut theta = vec![0.0; n];
        let mut z = vec![0.0; n];
        let mut wz = vec![0.0; w.components()];
        let mut integrals = [0.0; MAX_DIM + 1];
        let mut per_shift = Vec::with_capacity(self.lattice.shift_count());
        let mut rejected = 0;
        for r in 0..self.lattice.shift_count() {
            let mut acc = vec![0.0; out_len];
            for i in 0..size {
                self.lattice.point(r, i, &mut u);
                self.direction(&u, &mut theta);
                let Some((_, u_out)) = self.phi.ray_interval(x, &theta) else {
                    continue;
                };
                let rho = u[u.len() - 1] * u_out;
                if rho < eps {
                    rejected += 1;
                    continue;
                }
                for j in 0..n {
                    z[j] = x[j] - rho * theta[j];
                }
                ray_integrals(&self.phi, &z, &theta, k, diam, self.cfg.t_subdivisions, &mut integrals[..m]);
                // ζ(z, ρθ) ρ^{n−1} = θ Σ_ν C(n−k, ν−k) ρ^{n−ν} I_ν
                let radial: f64 = (0..m)
                    .map(|j| weights[j] * rho.powi((n - k - j) as i32) * integrals[j])
                    .sum();
                if radial == 0.0 {
                    continue;
                }
                w.eval_into(&z, &mut wz);
                contraction.accumulate(&theta, &wz, area * u_out * radial, &mut acc);
            }
            acc.iter_mut().for_each(|v| *v /= size as f64);
            per_shift.push(acc);
        }
        if rejected > 0 {
            debug!("T at {x:?}: {rejected} samples inside the singular radius");
        }
        let shifts = per_shift.len() as f64;
        let value: Vec<f64> = (0..out_len)
            .map(|c| per_shift.iter().map(|s| s[c]).sum::<f64>() / shifts)
            .collect();
        let std_error = (0..out_len)
            .map(|c| {
                let var = per_shift.iter().map(|s| (s[c] - value[c]).powi(2)).sum::<f64>() / (shifts - 1.0);
                (var / shifts).sqrt()
            })
            .collect();
        Ok(TEstimate {
            value,
            std_error,
            rejected,
        })
    }

    /// `d(Tω)(x)` by central differences with step `FD_STEP · diam D`.
    pub fn d_apply(&self, w: &SampledForm, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.domain.dim();
        let h = FD_STEP * self.domain.diameter();
        let k = w.degree();
        let mut failure = None;
        let d = fd_exterior_derivative(
            n,
            k - 1,
            |y| match self.apply(w, y) {
                Ok(t) => t.value,
                Err(e) => {
                    failure = Some(e);
                    vec![0.0; component_count(n, k - 1)]
                }
            },
            x,
            h,
            Stencil::Central,
        );
        match failure {
            Some(e) => Err(e),
            None => Ok(d),
        }
    }
}

/// `Tω(x)` with a freshly built operator.
pub fn t_apply(
    w: &SampledForm,
    phi: &Mollifier,
    domain: &Domain,
    x: &[f64],
    cfg: &QuadratureConfig,
) -> Result<TEstimate> {
    IlOperator::new(domain.clone(), phi.clone(), *cfg)?.apply(w, x)
}

/// Relative `L²` size of `ω − dTω − Tdω` over sample points of `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub relative_l2: f64,
    pub points: usize,
}

/// Evaluates the homotopy identity at `points` uniform points of `D` whose
/// finite-difference stencil stays inside `D`.
pub fn homotopy_residual(op: &IlOperator, w: &SampledForm, points: usize, seed: u64) -> Result<ResidualReport> {
    let dom = op.domain();
    let n = dom.dim();
    let k = w.degree();
    let dw = if k < n { Some(w.exterior_derivative()?) } else { None };
    let h = FD_STEP * dom.diameter();
    let (lo, hi) = dom
        .bounding_box()
        .ok_or_else(|| Error::Parameter("residual sampling needs a basic domain".into()))?;
    let mut rng = chunk_rng(seed, 0);
    let mut x = vec![0.0; n];
    let (mut num, mut den) = (0.0, 0.0);
    let mut taken = 0;
    while taken < points {
        for (i, v) in x.iter_mut().enumerate() {
            *v = rng.random_range(lo[i]..hi[i]);
        }
        let inside = (0..n).all(|i| {
            let mut y = x.clone();
            y[i] += h;
            let plus = dom.contains(&y);
            y[i] -= 2.0 * h;
            plus && dom.contains(&y)
        });
        if !dom.contains(&x) || !inside {
            continue;
        }
        taken += 1;
        let wx = w.eval(&x);
        let dt = op.d_apply(w, &x)?;
        let tdw = match &dw {
            Some(d) => op.apply(d, &x)?.value,
            None => vec![0.0; wx.len()],
        };
        for c in 0..wx.len() {
            num += (wx[c] - dt[c] - tdw[c]).powi(2);
            den += wx[c] * wx[c];
        }
    }
    Ok(ResidualReport {
        relative_l2: if den > 0.0 { (num / den).sqrt() } else { num.sqrt() },
        points,
    })
}
