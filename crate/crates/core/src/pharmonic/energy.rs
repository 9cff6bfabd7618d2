use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::space::SolutionSpace;
use crate::error::{Error, Result};
use crate::form::{FloatPoly, KForm};
use crate::geometry::{lp_norm, sample_domain, Domain, ExactPlan, QuadratureConfig, CHUNK};

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("the energy needs p > 1, got {p}")))
    }
}

/// `E(w) = ∫_D |w|^p`.
pub fn energy(w: &KForm, dom: &Domain, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_p(p)?;
    Ok(lp_norm(w, dom, p, cfg)?.value.powf(p))
}

/// Gradient of `c ↦ E(base + Σ c_b gauge_b)`:
/// `p ∫ |η|^{p−2} ⟨η, gauge_b⟩`.
pub fn energy_gradient(
    coeffs: &[f64],
    space: &SolutionSpace,
    dom: &Domain,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    EnergyModel::new(space, dom, p, cfg)?.gradient(coeffs)
}

#[derive(Debug, Clone)]
enum Kind {
    /// `p = 2` with exact moments: `E = e₀ + 2bᵀc + cᵀGc`.
    Quadratic { e0: f64, b: DVector<f64> },
    /// Even `p` with exact moments; polynomials on the reference ball.
    Moments {
        plan: ExactPlan,
        half: u32,
        base: Vec<FloatPoly>,
        gauge: Vec<Vec<FloatPoly>>,
    },
    /// Fixed sample: per point the weight, base values, then gauge values.
    Sampled {
        weights: Vec<f64>,
        base: Vec<f64>,
        gauge: Vec<f64>,
    },
}

/// Energy and gradient on the coefficient vector of a [`SolutionSpace`],
/// with the `L²` Gram matrix of the gauge directions under the same
/// quadrature.
#[derive(Debug, Clone)]
pub struct EnergyModel {
    p: f64,
    components: usize,
    len: usize,
    gram: DMatrix<f64>,
    kind: Kind,
}

impl EnergyModel {
    pub fn new(space: &SolutionSpace, dom: &Domain, p: f64, cfg: &QuadratureConfig) -> Result<Self> {
        check_p(p)?;
        let base = space.base();
        if base.dim() != dom.dim() {
            return Err(Error::Dimension(format!(
                "form on R^{} over a domain in R^{}",
                base.dim(),
                dom.dim()
            )));
        }
        let len = space.len();
        let half = (p.fract() == 0.0 && (p as u64).is_multiple_of(2) && p <= 64.0).then(|| (p / 2.0) as u32);
        if let (Some(half), Some(plan)) = (half, ExactPlan::for_domain(dom)) {
            let integrate = |a: &KForm, b: &KForm| -> Result<f64> { Ok(plan.integrate(&a.pointwise_inner(b)?)) };
            let mut gram = DMatrix::zeros(len, len);
            for a in 0..len {
                for b in a..len {
                    let v = integrate(&space.gauge()[a], &space.gauge()[b])?;
                    gram[(a, b)] = v;
                    gram[(b, a)] = v;
                }
            }
            let kind = if half == 1 {
                let b = (0..len)
                    .map(|i| integrate(base, &space.gauge()[i]))
                    .collect::<Result<Vec<_>>>()?;
                Kind::Quadratic {
                    e0: integrate(base, base)?,
                    b: DVector::from_vec(b),
                }
            } else {
                let reference = |w: &KForm| -> Vec<FloatPoly> {
                    w.dense_coefficients().iter().map(|f| plan.to_reference(f).to_float()).collect()
                };
                Kind::Moments {
                    half,
                    base: reference(base),
                    gauge: space.gauge().iter().map(reference).collect(),
                    plan,
                }
            };
            return Ok(EnergyModel {
                p,
                components: base.dense_coefficients().len(),
                len,
                gram,
                kind,
            });
        }
        let samples = sample_domain(dom, cfg)?;
        let fb = base.to_float();
        let fg: Vec<_> = space.gauge().iter().map(|g| g.to_float()).collect();
        let j = fb.components().len();
        let m = samples.len();
        let mut base_vals = vec![0.0; m * j];
        let mut gauge_vals = vec![0.0; m * len * j];
        for (i, (x, _)) in samples.iter().enumerate() {
            fb.eval_into(x, &mut base_vals[i * j..(i + 1) * j]);
            for (b, g) in fg.iter().enumerate() {
                let o = (i * len + b) * j;
                g.eval_into(x, &mut gauge_vals[o..o + j]);
            }
        }
        let weights: Vec<f64> = (0..m).map(|i| samples.weight(i)).collect();
        let mut gram = DMatrix::zeros(len, len);
        for (i, w) in weights.iter().enumerate() {
            for a in 0..len {
                let ga = &gauge_vals[(i * len + a) * j..(i * len + a + 1) * j];
                for b in a..len {
                    let gb = &gauge_vals[(i * len + b) * j..(i * len + b + 1) * j];
                    gram[(a, b)] += w * dot(ga, gb);
                }
            }
        }
        for a in 0..len {
            for b in a..len {
                let v = gram[(a, b)] / m as f64;
                gram[(a, b)] = v;
                gram[(b, a)] = v;
            }
        }
        Ok(EnergyModel {
            p,
            components: j,
            len,
            gram,
            kind: Kind::Sampled {
                weights,
                base: base_vals,
                gauge: gauge_vals,
            },
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Whether energies are computed from exact moments (rounding only).
    pub fn is_exact(&self) -> bool {
        !matches!(self.kind, Kind::Sampled { .. })
    }

    /// `G_ab = ∫⟨gauge_a, gauge_b⟩`.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    fn check_len(&self, c: &[f64]) -> Result<()> {
        if c.len() == self.len {
            Ok(())
        } else {
            Err(Error::Dimension(format!("{} coefficients for {} gauge directions", c.len(), self.len)))
        }
    }

    fn eta_polys(base: &[FloatPoly], gauge: &[Vec<FloatPoly>], c: &[f64]) -> Vec<FloatPoly> {
        base.iter()
            .enumerate()
            .map(|(j, f)| {
                c.iter()
                    .zip(gauge)
                    .filter(|(cb, _)| **cb != 0.0)
                    .fold(f.clone(), |acc, (cb, g)| acc.axpy(*cb, &g[j]))
            })
            .collect()
    }

    fn norm_sq(eta: &[FloatPoly]) -> FloatPoly {
        let n = eta.first().map_or(0, |f| f.nvars());
        eta.iter().fold(FloatPoly::zero(n), |acc, f| acc.axpy(1.0, &f.mul(f)))
    }

    /// Per-point `η(x)` into `out` for the sampled path.
    fn eta_at(&self, base: &[f64], gauge: &[f64], i: usize, c: &[f64], out: &mut [f64]) {
        let j = self.components;
        out.copy_from_slice(&base[i * j..(i + 1) * j]);
        for (b, cb) in c.iter().enumerate() {
            let o = (i * self.len + b) * j;
            for (v, g) in out.iter_mut().zip(&gauge[o..o + j]) {
                *v += cb * g;
            }
        }
    }

    pub fn energy(&self, c: &[f64]) -> Result<f64> {
        self.check_len(c)?;
        let p = self.p;
        Ok(match &self.kind {
            Kind::Quadratic { e0, b } => {
                let cv = DVector::from_column_slice(c);
                (e0 + 2.0 * b.dot(&cv) + cv.dot(&(&self.gram * &cv))).max(0.0)
            }
            Kind::Moments {
                plan, half, base, gauge,
            } => {
                let q = Self::norm_sq(&Self::eta_polys(base, gauge, c));
                plan.integrate_reference(&q.pow(*half)).max(0.0)
            }
            Kind::Sampled { weights, base, gauge } => {
                let j = self.components;
                let sum: f64 = chunked_sum(weights.len(), 1, |i, acc| {
                    let mut eta = vec![0.0; j];
                    self.eta_at(base, gauge, i, c, &mut eta);
                    acc[0] += weights[i] * dot(&eta, &eta).powf(p / 2.0);
                })[0];
                sum / weights.len() as f64
            }
        })
    }

    pub fn gradient(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.check_len(c)?;
        let p = self.p;
        Ok(match &self.kind {
            Kind::Quadratic { b, .. } => {
                let cv = DVector::from_column_slice(c);
                (2.0 * (b + &self.gram * cv)).iter().copied().collect()
            }
            Kind::Moments {
                plan, half, base, gauge,
            } => {
                let eta = Self::eta_polys(base, gauge, c);
                let w = Self::norm_sq(&eta).pow(half - 1);
                let v: Vec<FloatPoly> = eta.iter().map(|f| w.mul(f)).collect();
                gauge
                    .iter()
                    .map(|g| p * v.iter().zip(g).map(|(vj, gj)| plan.integrate_reference(&vj.mul(gj))).sum::<f64>())
                    .collect()
            }
            Kind::Sampled { weights, base, gauge } => {
                let (j, len) = (self.components, self.len);
                let sums = chunked_sum(weights.len(), len, |i, acc| {
                    let mut eta = vec![0.0; j];
                    self.eta_at(base, gauge, i, c, &mut eta);
                    let r2 = dot(&eta, &eta);
                    if r2 == 0.0 {
                        return;
                    }
                    let s = weights[i] * r2.powf(p / 2.0 - 1.0);
                    for (b, a) in acc.iter_mut().enumerate() {
                        let o = (i * len + b) * j;
                        *a += s * dot(&eta, &gauge[o..o + j]);
                    }
                });
                sums.iter().map(|s| p * s / weights.len() as f64).collect()
            }
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sums per-point contributions chunk by chunk in parallel, reducing in
/// chunk order so results do not depend on scheduling.
fn chunked_sum<F>(count: usize, width: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let partial: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|ch| {
            let mut acc = vec![0.0; width];
            for i in ch * CHUNK..((ch + 1) * CHUNK).min(count) {
                f(i, &mut acc);
            }
            acc
        })
        .collect();
    partial.into_iter().fold(vec![0.0; width], |mut acc, v| {
        acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        acc
    })
}
