use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::Serialize;

use super::energy::{check_p, EnergyModel};
use super::space::SolutionSpace;
use crate::constants::{ball_admissible, bound_ball, bound_bilipschitz, bound_simplex};
use crate::error::{Error, Result};
use crate::form::KForm;
use crate::geometry::{lp_norm, Domain, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Coefficient degree bound of the gauge directions.
    pub max_degree: u32,
    /// Relative tolerance on `max_b |∂E/∂c_b| / (1 + E)`.
    pub tol: f64,
    pub max_iterations: usize,
    /// Run the descent even for `p = 2` instead of the direct solve.
    pub force_iterative: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_degree: 3,
            tol: 1e-6,
            max_iterations: 10_000,
            force_iterative: false,
        }
    }
}

impl SolverOptions {
    pub fn with_max_degree(self, max_degree: u32) -> Self {
        SolverOptions { max_degree, ..self }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        SolverOptions { tol, ..self }
    }
}

#[derive(Debug, Clone)]
pub struct PHarmonicResult {
    /// `base + Σ c_b gauge_b`, with the coefficients converted exactly.
    pub eta: KForm,
    pub coefficients: Vec<f64>,
    pub energy: f64,
    /// `max_b |∂E/∂c_b| / (1 + E)` at `eta`.
    pub el_residual: f64,
    pub iterations: usize,
    /// Energy of the starting point `base`.
    pub base_energy: f64,
    pub exact_quadrature: bool,
}

fn residual(g: &[f64], e: f64) -> f64 {
    g.iter().fold(0.0f64, |m, v| m.max(v.abs())) / (1.0 + e)
}

fn cholesky(gram: &DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(gram.clone())
        .ok_or_else(|| Error::Parameter("gauge Gram matrix is not positive definite on this domain".into()))
}

/// Minimizes the energy over a [`SolutionSpace`]. `p = 2` is a linear solve
/// unless `force_iterative`; otherwise Gram-preconditioned gradient descent
/// with Barzilai–Borwein trial steps and Armijo backtracking.
pub fn minimize(model: &EnergyModel, space: &SolutionSpace, opts: &SolverOptions) -> Result<PHarmonicResult> {
    let len = model.len();
    let zero = vec![0.0; len];
    let base_energy = model.energy(&zero)?;
    let finish = |c: Vec<f64>, iterations: usize| -> Result<PHarmonicResult> {
        let energy = model.energy(&c)?;
        let el_residual = residual(&model.gradient(&c)?, energy);
        Ok(PHarmonicResult {
            eta: space.member(&c)?,
            coefficients: c,
            energy,
            el_residual,
            iterations,
            base_energy,
            exact_quadrature: model.is_exact(),
        })
    };
    if len == 0 {
        return finish(zero, 0);
    }
    let chol = cholesky(model.gram())?;
    if model.p() == 2.0 && !opts.force_iterative {
        let g0 = DVector::from_vec(model.gradient(&zero)?);
        let c = chol.solve(&(-0.5 * g0));
        return finish(c.iter().copied().collect(), 1);
    }

    let mut c = DVector::from_vec(zero);
    let mut e = base_energy;
    let mut g = DVector::from_vec(model.gradient(c.as_slice())?);
    let mut step = 1.0;
    let mut previous: Option<(DVector<f64>, DVector<f64>)> = None;
    for it in 0..opts.max_iterations {
        if residual(g.as_slice(), e) <= opts.tol {
            return finish(c.iter().copied().collect(), it);
        }
        let d = -chol.solve(&g);
        if let Some((cp, gp)) = &previous {
            let s = &c - cp;
            let y = &g - gp;
            let sy = s.dot(&y);
            if sy > 0.0 {
                step = (s.dot(&(model.gram() * &s)) / sy).clamp(1e-12, 1e12);
            } else {
                step *= 2.0;
            }
        }
        let slope = g.dot(&d);
        let mut t = step;
        let accepted = loop {
            let trial = &c + t * &d;
            let et = model.energy(trial.as_slice())?;
            if et <= e + 1e-4 * t * slope {
                break Some((trial, et));
            }
            t *= 0.5;
            if t < 1e-16 * step.max(1.0) {
                break None;
            }
        };
        let Some((next, en)) = accepted else {
            return Err(Error::Convergence {
                iterations: it,
                residual: residual(g.as_slice(), e),
                best_coefficients: c.iter().copied().collect(),
                best_energy: e,
            });
        };
        step = t;
        let gn = DVector::from_vec(model.gradient(next.as_slice())?);
        previous = Some((std::mem::replace(&mut c, next), std::mem::replace(&mut g, gn)));
        e = en;
    }
    if residual(g.as_slice(), e) <= opts.tol {
        return finish(c.iter().copied().collect(), opts.max_iterations);
    }
    Err(Error::Convergence {
        iterations: opts.max_iterations,
        residual: residual(g.as_slice(), e),
        best_coefficients: c.iter().copied().collect(),
        best_energy: e,
    })
}

/// The minimal-energy primitive of the exact form `ω` in the truncated
/// gauge space around `Sω`.
pub fn p_harmonic_representative(
    omega: &KForm,
    dom: &Domain,
    p: f64,
    opts: &SolverOptions,
    cfg: &QuadratureConfig,
) -> Result<PHarmonicResult> {
    check_p(p)?;
    let space = SolutionSpace::for_target(omega, opts.max_degree)?;
    let model = EnergyModel::new(&space, dom, p, cfg)?;
    minimize(&model, &space, opts)
}

/// `inf ‖ζ + dθ‖_p` over the truncated gauge space.
pub fn quotient_norm(zeta: &KForm, dom: &Domain, p: f64, opts: &SolverOptions, cfg: &QuadratureConfig) -> Result<f64> {
    check_p(p)?;
    let space = SolutionSpace::for_class(zeta, opts.max_degree)?;
    let model = EnergyModel::new(&space, dom, p, cfg)?;
    Ok(minimize(&model, &space, opts)?.energy.powf(1.0 / p))
}

/// Operator-norm bound on the domain: balls use `C = 1`, the simplex its
/// radial map (`C = n²`), and images of a ball `C = 1/Lip(map)`.
fn final_bound(dom: &Domain, n: usize, k: usize, p: f64) -> Result<f64> {
    match dom {
        Domain::Ball { radius, .. } => bound_bilipschitz(n, k, p, 1.0, bound_ball(n, k, p, *radius)?),
        Domain::StandardSimplex { .. } => bound_simplex(n, k, p),
        Domain::BiLipschitzImage { base, map } => match base.as_ref() {
            Domain::Ball { radius, .. } => {
                bound_bilipschitz(n, k, p, 1.0 / map.lipschitz_constant(), bound_ball(n, k, p, *radius)?)
            }
            _ => Err(Error::Parameter("the final bound needs the image of a ball".into())),
        },
        Domain::Interval { .. } => Err(Error::Admissibility("the final bound needs n >= 2".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FinalBoundReport {
    pub quotient_norm: f64,
    pub omega_norm: f64,
    pub ratio: f64,
    pub bound: f64,
    /// Three standard errors of the ratio from the `‖ω‖` estimate (0 when
    /// exact).
    pub margin: f64,
    pub holds: bool,
    pub iterations: usize,
}

/// Compares `‖𝒮ω‖ / ‖ω‖_p`, with `𝒮ω` the p-harmonic primitive, against
/// the operator-norm bound on a bi-Lipschitz image of a ball.
pub fn check_final_bound(
    omega: &KForm,
    dom: &Domain,
    p: f64,
    opts: &SolverOptions,
    cfg: &QuadratureConfig,
) -> Result<FinalBoundReport> {
    let (n, k) = (omega.dim(), omega.degree());
    if !ball_admissible(n, k, p) {
        return Err(Error::Admissibility(format!(
            "(n, k, p) = ({n}, {k}, {p}) needs 2 <= k <= n and p > (n-1)/(k-1)"
        )));
    }
    if dom.dim() != n {
        return Err(Error::Dimension(format!("form on R^{n} over a domain in R^{}", dom.dim())));
    }
    let bound = final_bound(dom, n, k, p)?;
    let w = lp_norm(omega, dom, p, cfg)?;
    if omega.is_zero() || w.value == 0.0 {
        return Ok(FinalBoundReport {
            quotient_norm: 0.0,
            omega_norm: 0.0,
            ratio: 0.0,
            bound,
            margin: 0.0,
            holds: true,
            iterations: 0,
        });
    }
    let result = p_harmonic_representative(omega, dom, p, opts, cfg)?;
    let q = result.energy.powf(1.0 / p);
    let ratio = q / w.value;
    let margin = 3.0 * ratio * w.std_error / w.value;
    Ok(FinalBoundReport {
        quotient_norm: q,
        omega_norm: w.value,
        ratio,
        bound,
        margin,
        holds: ratio <= bound + margin,
        iterations: result.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::parse_form;
    use std::f64::consts::PI;

    fn small() -> QuadratureConfig {
        QuadratureConfig::default().with_samples(4000)
    }

    #[test]
    fn area_form_primitive_is_already_minimal() {
        let omega = KForm::basis(2, &[1, 2]).unwrap();
        let dom = Domain::unit_ball(2);
        let r = p_harmonic_representative(&omega, &dom, 2.0, &SolverOptions::default(), &small()).unwrap();
        assert!(r.exact_quadrature);
        assert!(r.coefficients.iter().all(|c| c.abs() < 1e-12), "{:?}", r.coefficients);
        assert!((r.energy - PI / 8.0).abs() < 1e-12);
        assert_eq!(r.eta.exterior_derivative().unwrap(), omega);
    }

    #[test]
    fn descent_matches_direct_solve_for_p2() {
        let omega = parse_form("1,2 : x1^2 + x2", Some(2)).unwrap();
        let dom = Domain::unit_ball(2);
        let direct = p_harmonic_representative(&omega, &dom, 2.0, &SolverOptions::default(), &small()).unwrap();
        let opts = SolverOptions {
            force_iterative: true,
            tol: 1e-9,
            ..SolverOptions::default()
        };
        let descent = p_harmonic_representative(&omega, &dom, 2.0, &opts, &small()).unwrap();
        assert!(direct.energy < direct.base_energy);
        assert!((descent.energy - direct.energy).abs() <= 1e-8 * direct.energy);
    }

    #[test]
    fn quotient_norm_of_coclosed_form() {
        let zeta = parse_form("1 : -1/2 x2\n2 : 1/2 x1", Some(2)).unwrap();
        let q = quotient_norm(&zeta, &Domain::unit_ball(2), 2.0, &SolverOptions::default(), &small()).unwrap();
        assert!((q - (PI / 8.0).sqrt()).abs() < 1e-10, "{q}");
    }

    #[test]
    fn final_bound_on_unit_disc() {
        let omega = KForm::basis(2, &[1, 2]).unwrap();
        let r = check_final_bound(&omega, &Domain::unit_ball(2), 2.0, &SolverOptions::default(), &small()).unwrap();
        assert!((r.bound - 8.0).abs() < 1e-12);
        assert!((r.ratio - 0.125f64.sqrt()).abs() < 1e-10, "{}", r.ratio);
        assert!(r.holds);
    }
}
