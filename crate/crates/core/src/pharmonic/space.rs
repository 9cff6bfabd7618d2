use std::collections::BTreeMap;

use num::{BigRational, Zero};

use crate::error::{Error, Result};
use crate::form::{Exponents, KForm, MultiIndex, Polynomial};
use crate::homotopy::homotopy_s;

type Key = (MultiIndex, Exponents);

/// An affine family `base + Σ c_b gauge_b` of forms with the same `d`:
/// every gauge direction is exactly closed.
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    base: KForm,
    gauge: Vec<KForm>,
    max_degree: u32,
}

fn sparse(w: &KForm) -> BTreeMap<Key, BigRational> {
    w.components()
        .flat_map(|(idx, f)| f.terms().map(move |(e, c)| ((idx.clone(), e.clone()), c.clone())))
        .collect()
}

/// Exact Gaussian elimination: keeps the candidates that are linearly
/// independent of the ones before them.
fn independent(candidates: Vec<KForm>) -> Vec<KForm> {
    let mut rows: Vec<(Key, BTreeMap<Key, BigRational>)> = Vec::new();
    let mut kept = Vec::new();
    for w in candidates {
        let mut v = sparse(&w);
        for (pivot, row) in &rows {
            if let Some(a) = v.get(pivot).cloned() {
                let f = a / &row[pivot];
                for (key, c) in row {
                    let e = v.entry(key.clone()).or_insert_with(BigRational::zero);
                    *e -= &f * c;
                    if e.is_zero() {
                        v.remove(key);
                    }
                }
            }
        }
        if let Some(pivot) = v.keys().next().cloned() {
            rows.push((pivot, v));
            kept.push(w);
        }
    }
    kept
}

/// Exponent vectors in `n` variables of total degree `≤ max`, by degree.
fn exponents_up_to(n: usize, max: u32) -> Vec<Exponents> {
    let mut out = vec![vec![0u32; n]];
    let mut layer = out.clone();
    for _ in 0..max {
        let mut next: Vec<Exponents> = Vec::new();
        for e in &layer {
            // only raise coordinates at or after the last nonzero one, so each
            // exponent is generated once
            let start = e.iter().rposition(|&v| v > 0).unwrap_or(0);
            for i in start..n {
                let mut f = e.clone();
                f[i] += 1;
                next.push(f);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Independent exact `j`-forms `d(x^α dx_I)`, `|I| = j − 1`, with
/// coefficient degree `≤ max_degree`.
fn exact_directions(n: usize, j: usize, max_degree: u32) -> Result<Vec<KForm>> {
    let mut candidates = Vec::new();
    for e in exponents_up_to(n, max_degree + 1) {
        for idx in MultiIndex::all(n, j - 1) {
            let phi = KForm::monomial(idx, Polynomial::monomial(n, e.clone(), BigRational::from_integer(1.into())))?;
            let d = phi.exterior_derivative()?;
            if !d.is_zero() {
                candidates.push(d);
            }
        }
    }
    Ok(independent(candidates))
}

impl SolutionSpace {
    /// Primitives of the exact form `ω`: base `Sω`, gauge `d(Ω^{k−2})`, or the
    /// constants when `k = 1`.
    pub fn for_target(omega: &KForm, max_degree: u32) -> Result<Self> {
        if omega.degree() == 0 {
            return Err(Error::Degree("0-forms have no primitive".into()));
        }
        if !omega.is_closed() {
            return Err(Error::NotClosed);
        }
        let base = homotopy_s(omega)?;
        let n = omega.dim();
        let gauge = if base.degree() == 0 {
            vec![KForm::scalar(Polynomial::one(n))]
        } else {
            exact_directions(n, base.degree(), max_degree)?
        };
        Ok(SolutionSpace {
            base,
            gauge,
            max_degree,
        })
    }

    /// The class `ζ + d(Ω^{k−1})` of a `k`-form (no gauge for `k = 0`).
    pub fn for_class(zeta: &KForm, max_degree: u32) -> Result<Self> {
        let gauge = if zeta.degree() == 0 {
            Vec::new()
        } else {
            exact_directions(zeta.dim(), zeta.degree(), max_degree)?
        };
        Ok(SolutionSpace {
            base: zeta.clone(),
            gauge,
            max_degree,
        })
    }

    pub fn base(&self) -> &KForm {
        &self.base
    }

    pub fn gauge(&self) -> &[KForm] {
        &self.gauge
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.gauge.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gauge.is_empty()
    }

    /// `base + Σ c_b gauge_b` with the floats converted exactly.
    pub fn member(&self, coeffs: &[f64]) -> Result<KForm> {
        if coeffs.len() != self.gauge.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} gauge directions",
                coeffs.len(),
                self.gauge.len()
            )));
        }
        let mut out = self.base.clone();
        for (c, g) in coeffs.iter().zip(&self.gauge) {
            let q = BigRational::from_float(*c)
                .ok_or_else(|| Error::Parameter(format!("non-finite coefficient {c}")))?;
            if !q.is_zero() {
                out = out.try_add(&g.scale(&q))?;
            }
        }
        Ok(out)
    }
}
