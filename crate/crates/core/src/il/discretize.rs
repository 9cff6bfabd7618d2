use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::mollifier::Mollifier;
use super::operator::{zeta, Contraction};
use super::sampled::component_count;
use crate::error::{Error, Result};
use crate::geometry::{Domain, QuadratureConfig};

/// Galerkin discretization of `T: L^p k-forms → L^q (k−1)-forms` on hat
/// functions over a uniform grid.
#[derive(Debug, Clone)]
pub struct DiscretizedT {
    /// `A[(a,o),(b,i)] = ∫∫ ψ_a(x) K_{o,i}(x,z) ψ_b(z) dz dx`.
    pub galerkin: DMatrix<f64>,
    /// Hat-function mass matrix, shared by every component.
    pub mass: DMatrix<f64>,
    pub nodes: usize,
    pub quadrature_points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    /// Nonincreasing singular values.
    pub sigma: Vec<f64>,
}

impl Spectrum {
    /// `σ_i/σ_1` for 1-based `i`, `None` past the end.
    pub fn ratio(&self, i: usize) -> Option<f64> {
        let first = *self.sigma.first()?;
        let s = *self.sigma.get(i.checked_sub(1)?)?;
        Some(if first > 0.0 { s / first } else { 0.0 })
    }
}

/// Options of [`discretize_t`].
#[derive(Debug, Clone, Copy)]
pub struct DiscretizeOptions {
    /// Cells per axis of the hat-function grid.
    pub grid: usize,
    /// Quadrature cells per grid cell and axis.
    pub refine: usize,
    /// Skip the `1/p − 1/q < 1/n` check.
    pub allow_outside_hypothesis: bool,
}

impl DiscretizeOptions {
    pub fn new(grid: usize) -> Self {
        DiscretizeOptions {
            grid,
            refine: 2,
            allow_outside_hypothesis: false,
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn discretize_t(
    n: usize,
    k: usize,
    p: f64,
    q: f64,
    opts: DiscretizeOptions,
    phi: &Mollifier,
    domain: &Domain,
    cfg: &QuadratureConfig,
) -> Result<DiscretizedT> {
    if domain.dim() != n || phi.dim() != n {
        return Err(Error::Dimension("domain, mollifier and n disagree".into()));
    }
    if k == 0 || k > n {
        return Err(Error::Degree(format!("T acts on k-forms with 1 <= k <= {n}")));
    }
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::Parameter("p and q must be >= 1".into()));
    }
    if !opts.allow_outside_hypothesis && 1.0 / p - 1.0 / q >= 1.0 / n as f64 {
        return Err(Error::Parameter(format!(
            "1/p - 1/q = {} is not below 1/n = {}",
            1.0 / p - 1.0 / q,
            1.0 / n as f64
        )));
    }
    if opts.grid == 0 || opts.refine == 0 {
        return Err(Error::Parameter("grid and refinement must be positive".into()));
    }
    let (lo, hi) = domain
        .bounding_box()
        .ok_or_else(|| Error::Parameter("discretization needs a basic domain".into()))?;
    let g = opts.grid;
    let per_axis = g + 1;
    let nodes = per_axis.pow(n as u32);
    let spacing: Vec<f64> = (0..n).map(|i| (hi[i] - lo[i]) / g as f64).collect();

    // quadrature: midpoints of the refined grid inside D
    let qcells = g * opts.refine;
    let cell_volume: f64 = spacing.iter().map(|s| s / opts.refine as f64).product();
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<f64> = (0..n)
            .map(|i| lo[i] + (idx[i] as f64 + 0.5) * spacing[i] / opts.refine as f64)
            .collect();
        if domain.contains(&x) {
            points.push(x);
        }
        if !advance(&mut idx, qcells) {
            break;
        }
    }
    // hat functions touching each point: (node, value)
    let hats: Vec<Vec<(usize, f64)>> = points
        .iter()
        .map(|x| {
            let mut out = vec![(0usize, 1.0f64)];
            for i in 0..n {
                let t = (x[i] - lo[i]) / spacing[i];
                let c = (t.floor() as usize).min(g - 1);
                let f = t - c as f64;
                let stride = per_axis.pow(i as u32);
                out = out
                    .into_iter()
                    .flat_map(|(node, v)| [(node + c * stride, v * (1.0 - f)), (node + (c + 1) * stride, v * f)])
                    .collect();
            }
            out
        })
        .collect();

    let mut mass = DMatrix::zeros(nodes, nodes);
    for h in &hats {
        for &(a, va) in h {
            for &(b, vb) in h {
                mass[(a, b)] += cell_volume * va * vb;
            }
        }
    }

    let in_len = component_count(n, k);
    let contraction = Contraction::new(n, k);
    let out_len = contraction.out_len;
    let mut galerkin = DMatrix::zeros(nodes * out_len, nodes * in_len);
    let mut row = vec![0.0; nodes * in_len * out_len];
    let mut basis = vec![0.0; in_len];
    let mut kernel = vec![0.0; out_len];
    let mut h = vec![0.0; n];
    for (xi, x) in points.iter().enumerate() {
        row.iter_mut().for_each(|v| *v = 0.0);
        for (zi, z) in points.iter().enumerate() {
            if zi == xi {
                continue;
            }
            for j in 0..n {
                h[j] = x[j] - z[j];
            }
            let zeta_v = zeta(z, &h, k, phi, domain, cfg)?;
            if zeta_v.iter().all(|v| *v == 0.0) {
                continue;
            }
            for c in 0..in_len {
                basis.iter_mut().for_each(|v| *v = 0.0);
                basis[c] = 1.0;
                kernel.iter_mut().for_each(|v| *v = 0.0);
                contraction.accumulate(&zeta_v, &basis, 1.0, &mut kernel);
                for (o, kv) in kernel.iter().enumerate() {
                    if *kv == 0.0 {
                        continue;
                    }
                    for &(b, vb) in &hats[zi] {
                        row[(o * nodes + b) * in_len + c] += kv * vb;
                    }
                }
            }
        }
        let w2 = cell_volume * cell_volume;
        for &(a, va) in &hats[xi] {
            for o in 0..out_len {
                for b in 0..nodes {
                    for c in 0..in_len {
                        let v = row[(o * nodes + b) * in_len + c];
                        if v != 0.0 {
                            galerkin[(o * nodes + a, c * nodes + b)] += w2 * va * v;
                        }
                    }
                }
            }
        }
    }
    Ok(DiscretizedT {
        galerkin,
        mass,
        nodes,
        quadrature_points: points.len(),
    })
}

fn advance(idx: &mut [usize], limit: usize) -> bool {
    for v in idx.iter_mut() {
        *v += 1;
        if *v < limit {
            return true;
        }
        *v = 0;
    }
    false
}

impl DiscretizedT {
    /// Singular values of `M^{−1/2} A M^{−1/2}` (block-wise per component),
    /// the `L² → L²` singular values of the projected operator. Mass
    /// eigenvalues below `1e−12` of the largest are dropped.
    pub fn spectrum(&self) -> Spectrum {
        let eig = SymmetricEigen::new(self.mass.clone());
        let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..self.nodes).filter(|&i| eig.eigenvalues[i] > 1e-12 * top).collect();
        // M^{−1/2} restricted to the kept eigenvectors: V_k diag(λ^{−1/2})
        let half = DMatrix::from_fn(self.nodes, keep.len(), |r, c| {
            eig.eigenvectors[(r, keep[c])] / eig.eigenvalues[keep[c]].sqrt()
        });
        let out_blocks = self.galerkin.nrows() / self.nodes;
        let in_blocks = self.galerkin.ncols() / self.nodes;
        let m = keep.len();
        let mut b = DMatrix::zeros(out_blocks * m, in_blocks * m);
        for o in 0..out_blocks {
            for i in 0..in_blocks {
                let block = self.galerkin.view((o * self.nodes, i * self.nodes), (self.nodes, self.nodes));
                let reduced = half.transpose() * block * &half;
                b.view_mut((o * m, i * m), (m, m)).copy_from(&reduced);
            }
        }
        let mut sigma: Vec<f64> = b.singular_values().iter().copied().collect();
        sigma.sort_by(|a, b| b.total_cmp(a));
        Spectrum { sigma }
    }
}
