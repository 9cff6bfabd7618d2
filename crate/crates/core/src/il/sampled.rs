use std::fmt;
use std::sync::Arc;

use statrs::function::factorial::binomial;

use crate::error::{Error, Result};
use crate::form::{KForm, MultiIndex};

type Evaluator = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

/// A smooth `k`-form given pointwise, components dense in
/// [`MultiIndex::all`] order.
#[derive(Clone)]
pub struct SampledForm {
    n: usize,
    k: usize,
    eval: Evaluator,
    derivative: Option<Arc<SampledForm>>,
}

impl fmt::Debug for SampledForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledForm").field("n", &self.n).field("k", &self.k).finish()
    }
}

/// Number of components of a `k`-form on `ℝⁿ`.
pub fn component_count(n: usize, k: usize) -> usize {
    binomial(n as u64, k as u64) as usize
}

/// Step of the fourth-order stencil used for `d` of forms without an
/// analytic derivative.
const SMOOTH_STEP: f64 = 1e-3;

impl SampledForm {
    pub fn new<F>(n: usize, k: usize, eval: F) -> Result<Self>
    where
        F: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        if k > n {
            return Err(Error::Degree(format!("no {k}-forms on R^{n}")));
        }
        Ok(SampledForm {
            n,
            k,
            eval: Arc::new(eval),
            derivative: None,
        })
    }

    /// Polynomial-backed form; `d` is exact.
    pub fn from_kform(w: &KForm) -> Self {
        let float = w.to_float();
        let derivative = w.d_or_zero().map(|d| Arc::new(SampledForm::from_kform(&d)));
        SampledForm {
            n: w.dim(),
            k: w.degree(),
            eval: Arc::new(move |x, out| float.eval_into(x, out)),
            derivative,
        }
    }

    pub fn with_derivative(mut self, d: SampledForm) -> Result<Self> {
        if d.n != self.n || d.k != self.k + 1 {
            return Err(Error::Degree("derivative must be a (k+1)-form on the same space".into()));
        }
        self.derivative = Some(Arc::new(d));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn components(&self) -> usize {
        component_count(self.n, self.k)
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        (self.eval)(x, out)
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.components()];
        self.eval_into(x, &mut out);
        out
    }

    /// `dω`: the attached derivative, or a fourth-order central difference.
    pub fn exterior_derivative(&self) -> Result<SampledForm> {
        if self.k >= self.n {
            return Err(Error::Degree(format!("d of a {}-form on R^{}", self.k, self.n)));
        }
        if let Some(d) = &self.derivative {
            return Ok((**d).clone());
        }
        let inner = self.clone();
        let (n, k) = (self.n, self.k);
        SampledForm::new(n, k + 1, move |x, out| {
            let d = fd_exterior_derivative(n, k, |y| inner.eval(y), x, SMOOTH_STEP, Stencil::FourthOrder);
            out.copy_from_slice(&d);
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central,
    FourthOrder,
}

/// `dη` at `x` for a `k`-form `η` given pointwise, by finite differences:
/// `(dη)_I = Σ_pos (−1)^pos ∂_{i_pos} η_{I∖i_pos}`.
pub fn fd_exterior_derivative<F>(n: usize, k: usize, mut eta: F, x: &[f64], h: f64, stencil: Stencil) -> Vec<f64>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let mut y = x.to_vec();
    let partials: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut at = |t: f64| {
                y[i] = x[i] + t;
                let v = eta(&y);
                y[i] = x[i];
                v
            };
            match stencil {
                Stencil::Central => {
                    let (p, m) = (at(h), at(-h));
                    p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect()
                }
                Stencil::FourthOrder => {
                    let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
                    (0..p1.len())
                        .map(|c| (-p2[c] + 8.0 * p1[c] - 8.0 * m1[c] + m2[c]) / (12.0 * h))
                        .collect()
                }
            }
        })
        .collect();
    let lower = MultiIndex::all(n, k);
    MultiIndex::all(n, k + 1)
        .iter()
        .map(|idx| {
            (0..idx.degree())
                .map(|pos| {
                    let rest = idx.without_position(pos);
                    let c = lower.binary_search(&rest).expect("faces are k-indices");
                    let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                    sign * partials[idx.indices()[pos]][c]
                })
                .sum()
        })
        .collect()
}
