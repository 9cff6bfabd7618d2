//! The radial homotopy operator
//! `Sω(x) = ∫₀¹ t^{k−1} ω(tx)⟨x, ·⟩ dt` on polynomial `k`-forms.
//!
//! On a monomial coefficient of degree `m` the `t`-integral is exactly
//! `1/(k+m)`, so `S` is computed without quadrature: each homogeneous part of
//! each coefficient is contracted with the radial field and divided by
//! `k + m`. With that convention `dS + Sd = id` holds exactly on every
//! polynomial form of degree `1 ≤ k ≤ n` (for `k = n`, `dSω = ω`).

use num::BigRational;

use crate::error::{Error, Result};
use crate::form::KForm;

/// Primitive and Poincaré residual of a form.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyResult {
    pub primitive: KForm,
    /// `ω − dSω − Sdω` (or `ω − dSω` for top-degree forms).
    pub residual: KForm,
}

/// Applies `S` to a `k`-form with `k ≥ 1`.
pub fn homotopy_s(w: &KForm) -> Result<KForm> {
    let k = w.degree();
    if k == 0 {
        return Err(Error::Degree("S is not defined on 0-forms".into()));
    }
    // Scale each homogeneous part by 1/(k+m) first; contraction by the radial
    // field commutes with that scaling.
    let weighted = w.map_coefficients(|f| {
        f.scale_by_degree(|m| BigRational::new(1.into(), (k as u64 + m as u64).into()))
    });
    weighted.interior_radial()
}

/// `ω − dSω − Sdω`, exactly; the `Sdω` term is dropped for `k = n`.
pub fn poincare_residual(w: &KForm) -> Result<KForm> {
    Ok(homotopy_with_residual(w)?.residual)
}

pub fn homotopy_with_residual(w: &KForm) -> Result<HomotopyResult> {
    let primitive = homotopy_s(w)?;
    let mut residual = w.try_sub(&primitive.exterior_derivative()?)?;
    if w.degree() < w.dim() {
        let sdw = homotopy_s(&w.exterior_derivative()?)?;
        residual = residual.try_sub(&sdw)?;
    }
    Ok(HomotopyResult { primitive, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{rat, MultiIndex, Polynomial};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(2, i)
    }

    fn one_form(c1: Polynomial, c2: Polynomial) -> KForm {
        KForm::from_components(
            2,
            1,
            [
                (MultiIndex::new(2, vec![0]).unwrap(), c1),
                (MultiIndex::new(2, vec![1]).unwrap(), c2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn constant_one_form() {
        let s = homotopy_s(&KForm::basis(2, &[1]).unwrap()).unwrap();
        assert_eq!(s, KForm::scalar(x(0)));
    }

    #[test]
    fn area_form_times_x1() {
        let w = KForm::monomial(MultiIndex::new(2, vec![0, 1]).unwrap(), x(0)).unwrap();
        let expect = one_form(-(&x(0) * &x(1)), x(0).pow(2)).scale(&rat(1, 3));
        let result = homotopy_with_residual(&w).unwrap();
        assert_eq!(result.primitive, expect);
        assert!(result.residual.is_zero());
        assert_eq!(result.primitive.exterior_derivative().unwrap(), w);
    }

    #[test]
    fn zero_and_degree_errors() {
        assert!(homotopy_s(&KForm::zero(3, 2).unwrap()).unwrap().is_zero());
        assert!(matches!(
            homotopy_s(&KForm::scalar(x(0))),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn non_closed_one_form() {
        // ω = x2 dx1: Sω = x1 x2 / 2, dω = −dx1∧dx2, Sdω = −(x1 dx2 − x2 dx1)/2
        let w = one_form(x(1), Polynomial::zero(2));
        assert_eq!(
            homotopy_s(&w).unwrap(),
            KForm::scalar((&x(0) * &x(1)).scale(&rat(1, 2)))
        );
        let sdw = homotopy_s(&w.exterior_derivative().unwrap()).unwrap();
        assert_eq!(sdw, one_form(x(1), -x(0)).scale(&rat(1, 2)));
        assert!(poincare_residual(&w).unwrap().is_zero());
        assert!(poincare_residual(&KForm::basis(2, &[1]).unwrap()).unwrap().is_zero());
    }
}
