use nalgebra::DMatrix;
use serde::Serialize;
use statrs::function::factorial::factorial;

use super::map::LipschitzMap;
use crate::error::{Error, Result};
use crate::form::{FloatForm, KForm, MultiIndex};

/// Exact pullback `φ*ω = Σ_J f_J(φ) dφ_{j₁} ∧ … ∧ dφ_{j_k}` for polynomial
/// maps.
pub fn pullback(phi: &LipschitzMap, w: &KForm) -> Result<KForm> {
    let n = w.dim();
    if phi.dim() != n {
        return Err(Error::Dimension(format!(
            "map on R^{} cannot pull back a form on R^{n}",
            phi.dim()
        )));
    }
    let comps = phi
        .polynomial_components()
        .ok_or_else(|| Error::UnsupportedMap("exact pullback needs a polynomial map".into()))?;
    let k = w.degree();
    let differentials: Vec<KForm> = comps
        .iter()
        .map(|c| KForm::scalar(c.clone()).exterior_derivative())
        .collect::<Result<_>>()?;
    let mut out = KForm::zero(n, k)?;
    for (idx, f) in w.components() {
        let g = f.compose(comps);
        let mut term = KForm::scalar(g);
        for &j in idx.indices() {
            term = term.wedge(&differentials[j])?;
        }
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// Numerical pullback at `x` for any map with a differential: the
/// coefficient on `dx_I` is `Σ_J f_J(φ(x)) det Dφ(x)[J, I]`. The result is
/// dense in [`MultiIndex::all`] order.
pub fn pullback_at(phi: &LipschitzMap, w: &FloatForm, x: &[f64]) -> Vec<f64> {
    let n = w.dim();
    let k = w.degree();
    let y = phi.apply(x);
    let values = w.eval(&y);
    if k == 0 {
        return values;
    }
    let jac = phi.jacobian(x);
    let basis = MultiIndex::all(n, k);
    basis
        .iter()
        .map(|cols| {
            w.components()
                .iter()
                .zip(&values)
                .filter(|(_, v)| **v != 0.0)
                .map(|((rows, _), v)| v * minor(&jac, rows.indices(), cols.indices()))
                .sum()
        })
        .collect()
}

fn minor(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    match k {
        1 => m[(rows[0], cols[0])],
        2 => {
            m[(rows[0], cols[0])] * m[(rows[1], cols[1])] - m[(rows[0], cols[1])] * m[(rows[1], cols[0])]
        }
        _ => DMatrix::from_fn(k, k, |a, b| m[(rows[a], cols[b])]).determinant(),
    }
}

/// Pointwise constant `n!·C^k/(n−k)!` in `|φ*ω|ₓ ≤ const·|ω|_{φ(x)}`.
pub fn pullback_pointwise_bound(n: usize, k: usize, c: f64) -> Result<f64> {
    check(n, k, c)?;
    Ok(factorial(n as u64) / factorial((n - k) as u64) * c.powi(k as i32))
}

/// Operator-norm bounds for `β*` (with `β` `C`-Lipschitz) and `α*` (with
/// `α` `1/C`-Lipschitz) on `L^p` `k`-forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PullbackBounds {
    pub beta: f64,
    pub alpha: f64,
}

pub fn pullback_operator_bounds(n: usize, k: usize, p: f64, c: f64) -> Result<PullbackBounds> {
    check(n, k, c)?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::Parameter(format!("p must be >= 1, got {p}")));
    }
    let base = factorial(n as u64).powf((p + 1.0) / p) / factorial((n - k) as u64);
    let e = (p * k as f64 - n as f64) / p;
    Ok(PullbackBounds {
        beta: base * c.powf(e),
        alpha: base * c.powf(-e),
    })
}

fn check(n: usize, k: usize, c: f64) -> Result<()> {
    if k > n {
        return Err(Error::Degree(format!("no {k}-forms on R^{n}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Parameter(format!("Lipschitz constant must be positive, got {c}")));
    }
    Ok(())
}
