use serde::Serialize;

use super::domain::Domain;
use super::quadrature::{ExactPlan, QuadratureConfig};
use super::sampling::{sample_domain, Samples};
use crate::error::{Error, Result};
use crate::form::{FloatForm, KForm};

/// An `L^p` norm with its standard error; `exact` marks the moment path,
/// whose only error is floating-point rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub std_error: f64,
    pub exact: bool,
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("p must be >= 1, got {p}")))
    }
}

fn check_dim(w: &KForm, dom: &Domain) -> Result<()> {
    if w.dim() == dom.dim() {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "form on R^{} integrated over a domain in R^{}",
            w.dim(),
            dom.dim()
        )))
    }
}

/// Even integer exponent, as `p/2`.
fn half_even(p: f64) -> Option<u32> {
    (p.fract() == 0.0 && p >= 2.0 && (p as u64).is_multiple_of(2) && p <= 64.0).then(|| (p / 2.0) as u32)
}

/// `∫_D |w|^p`, exactly when `p` is an even integer and `D` is a ball, an
/// interval, or an affine image of one.
pub fn exact_power_integral(w: &KForm, dom: &Domain, p: f64) -> Option<f64> {
    let half = half_even(p)?;
    let plan = ExactPlan::for_domain(dom)?;
    let q = plan.to_reference(&w.pointwise_norm_sq()).to_float();
    Some(plan.integrate_reference(&q.pow(half)).max(0.0))
}

/// `‖w‖_{L^p(D)}`. See [`exact_power_integral`] for when the result is
/// exact; otherwise it is a Monte Carlo estimate with standard error.
pub fn lp_norm(w: &KForm, dom: &Domain, p: f64, cfg: &QuadratureConfig) -> Result<NormEstimate> {
    check_p(p)?;
    check_dim(w, dom)?;
    if w.is_zero() {
        return Ok(NormEstimate {
            value: 0.0,
            std_error: 0.0,
            exact: true,
        });
    }
    if let Some(i) = exact_power_integral(w, dom, p) {
        return Ok(NormEstimate {
            value: i.powf(1.0 / p),
            std_error: 0.0,
            exact: true,
        });
    }
    let samples = sample_domain(dom, cfg)?;
    Ok(lp_norm_sampled(&w.to_float(), &samples, p))
}

/// Monte Carlo `L^p` norm on a given sample; the error is propagated from
/// `∫|w|^p` by the delta method.
pub fn lp_norm_sampled(w: &FloatForm, samples: &Samples, p: f64) -> NormEstimate {
    let (i, se) = samples.integrate(|x| w.norm_sq(x).powf(p / 2.0));
    power_to_norm(i, se, p)
}

fn power_to_norm(i: f64, se: f64, p: f64) -> NormEstimate {
    if i <= 0.0 {
        return NormEstimate {
            value: 0.0,
            std_error: 0.0,
            exact: false,
        };
    }
    let value = i.powf(1.0 / p);
    NormEstimate {
        value,
        std_error: value * se / (p * i),
        exact: false,
    }
}

/// Check of `‖a‖_p ≤ K ‖b‖_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCheck {
    /// `‖a‖_p / ‖b‖_p` (0 when `b` vanishes).
    pub ratio: f64,
    pub bound: f64,
    /// Estimate of `∫(|a|^p − K^p |b|^p)` divided by its standard error;
    /// negative means the bound holds on the sample. Zero on the exact path.
    pub z_score: f64,
    pub exact: bool,
}

impl RatioCheck {
    /// Violation beyond `sigmas` standard errors (or, on the exact path,
    /// beyond a relative rounding slack of `1e−10`).
    pub fn violated(&self, sigmas: f64) -> bool {
        if self.exact {
            self.ratio > self.bound * (1.0 + 1e-10)
        } else {
            self.ratio > self.bound && self.z_score > sigmas
        }
    }
}

/// Compares `‖a‖_p` with `bound·‖b‖_p` on one shared sample (or exactly).
pub fn ratio_check(
    a: &KForm,
    b: &KForm,
    dom: &Domain,
    p: f64,
    bound: f64,
    cfg: &QuadratureConfig,
) -> Result<RatioCheck> {
    check_p(p)?;
    check_dim(a, dom)?;
    check_dim(b, dom)?;
    if let (Some(ia), Some(ib)) = (exact_power_integral(a, dom, p), exact_power_integral(b, dom, p)) {
        let ratio = if ib > 0.0 { (ia / ib).powf(1.0 / p) } else { 0.0 };
        return Ok(RatioCheck {
            ratio,
            bound,
            z_score: 0.0,
            exact: true,
        });
    }
    let samples = sample_domain(dom, cfg)?;
    Ok(ratio_check_sampled(&a.to_float(), &b.to_float(), &samples, p, bound))
}

pub fn ratio_check_sampled(a: &FloatForm, b: &FloatForm, samples: &Samples, p: f64, bound: f64) -> RatioCheck {
    let kp = bound.powf(p);
    let (ia, _) = samples.integrate(|x| a.norm_sq(x).powf(p / 2.0));
    let (ib, _) = samples.integrate(|x| b.norm_sq(x).powf(p / 2.0));
    let (diff, se) =
        samples.integrate(|x| a.norm_sq(x).powf(p / 2.0) - kp * b.norm_sq(x).powf(p / 2.0));
    let ratio = if ib > 0.0 { (ia / ib).powf(1.0 / p) } else { 0.0 };
    let z_score = if se > 0.0 {
        diff / se
    } else if diff > 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    };
    RatioCheck {
        ratio,
        bound,
        z_score,
        exact: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{MultiIndex, Polynomial};
    use std::f64::consts::PI;

    #[test]
    fn exact_examples() {
        let cfg = QuadratureConfig::default();
        let dom = Domain::unit_ball(2);
        let dx1 = KForm::basis(2, &[1]).unwrap();
        let n = lp_norm(&dx1, &dom, 2.0, &cfg).unwrap();
        assert!(n.exact && (n.value - PI.sqrt()).abs() < 1e-14);
        let w = KForm::monomial(MultiIndex::new(2, vec![1]).unwrap(), Polynomial::var(2, 0)).unwrap();
        assert!((lp_norm(&w, &dom, 2.0, &cfg).unwrap().value - (PI / 4.0).sqrt()).abs() < 1e-14);
        assert_eq!(lp_norm(&KForm::zero(2, 1).unwrap(), &dom, 3.0, &cfg).unwrap().value, 0.0);
        assert!(lp_norm(&dx1, &dom, 0.5, &cfg).is_err());
    }

    #[test]
    fn monte_carlo_matches_exact() {
        let cfg = QuadratureConfig::default().with_samples(100_000);
        let dom = Domain::unit_ball(2);
        let w = KForm::monomial(MultiIndex::new(2, vec![1]).unwrap(), Polynomial::var(2, 0)).unwrap();
        let exact = lp_norm(&w, &dom, 4.0, &cfg).unwrap();
        let s = sample_domain(&dom, &cfg).unwrap();
        let mc = lp_norm_sampled(&w.to_float(), &s, 4.0);
        assert!((mc.value - exact.value).abs() < 4.0 * mc.std_error);
    }
}
