use num::BigRational;
use serde::Serialize;

use super::map::LipschitzMap;
use super::pullback::pullback;
use crate::constants::{bound_ball, bound_bilipschitz, bound_interval, bound_one_form};
use crate::error::{Error, Result};
use crate::form::KForm;
use crate::geometry::{ratio_check, Domain, QuadratureConfig, RatioCheck};
use crate::homotopy::homotopy_s;

/// `γ = β* S α*` on `U`, for `β: U → V`, `α: V → U` with `α ∘ β = id_U`
/// and `S` the radial homotopy operator on `V`.
///
/// `C` is taken as `1/Lip(α)`. For similarities this is also `Lip(β)`; for
/// other maps it is the convention that keeps `α` a `1/C`-Lipschitz map.
#[derive(Debug, Clone)]
pub struct TransferOperator {
    alpha: LipschitzMap,
    beta: LipschitzMap,
    c: f64,
}

impl TransferOperator {
    /// Checks exactly that `α ∘ β` is the identity.
    pub fn new(alpha: LipschitzMap, beta: LipschitzMap) -> Result<Self> {
        if alpha.dim() != beta.dim() {
            return Err(Error::Dimension("alpha and beta live in different dimensions".into()));
        }
        if !alpha.compose(&beta)?.is_exact_identity() {
            return Err(Error::Parameter("alpha o beta is not the identity".into()));
        }
        let c = 1.0 / alpha.lipschitz_constant();
        Ok(TransferOperator { alpha, beta, c })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(LipschitzMap::identity(n), LipschitzMap::identity(n)).expect("identity pair")
    }

    /// `α(y) = s y`, `β(x) = x/s`: `U` is the ball `V` shrunk by `s`.
    pub fn scaling(n: usize, s: BigRational) -> Result<Self> {
        let alpha = LipschitzMap::scaling(n, s)?;
        let beta = alpha.inverse().cloned().expect("affine maps carry an inverse");
        Self::new(alpha, beta)
    }

    /// `α` the shear `y_i ↦ y_i + s y_j`, `β` its inverse.
    pub fn shear(n: usize, i: usize, j: usize, s: BigRational) -> Result<Self> {
        let alpha = LipschitzMap::shear(n, i, j, s)?;
        let beta = alpha.inverse().cloned().expect("affine maps carry an inverse");
        Self::new(alpha, beta)
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    pub fn alpha(&self) -> &LipschitzMap {
        &self.alpha
    }

    pub fn beta(&self) -> &LipschitzMap {
        &self.beta
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    /// `U = α(V)`.
    pub fn domain_u(&self, v: &Domain) -> Result<Domain> {
        Domain::image(v.clone(), self.alpha.clone())
    }

    /// Transferred bound `M (n−k+1)/C · (n!^{(p+1)/p}/(n−k+1)!)²`.
    pub fn bound(&self, k: usize, p: f64, m: f64) -> Result<f64> {
        bound_bilipschitz(self.dim(), k, p, self.c, m)
    }
}

/// `γω = β* S α* ω` for closed `ω`.
pub fn transfer_gamma(t: &TransferOperator, w: &KForm) -> Result<KForm> {
    if !w.is_closed() {
        return Err(Error::NotClosed);
    }
    pullback(&t.beta, &homotopy_s(&pullback(&t.alpha, w)?)?)
}

/// A bound `M` on `‖S‖` for `k`-forms over `V`: the ball bound for
/// `k ≥ 2`, the 1-form bound, or `2r` on an interval.
pub fn homotopy_norm_bound(v: &Domain, k: usize, p: f64) -> Result<f64> {
    match v {
        Domain::Ball { n, radius } if k >= 2 => bound_ball(*n, k, p, *radius),
        Domain::Ball { n, radius } if *n >= 2 => bound_one_form(*n, p, *radius),
        Domain::Ball { radius, .. } | Domain::Interval { half_width: radius } => bound_interval(*radius),
        _ => Err(Error::Admissibility("no closed-form bound for S on this domain".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferReport {
    /// `d(γω) == ω` exactly.
    pub exact_identity: bool,
    pub m: f64,
    pub c: f64,
    pub check: RatioCheck,
}

/// Computes `γω`, verifies `d(γω) = ω` exactly and compares
/// `‖γω‖_p / ‖ω‖_p` on `U = α(V)` with the bound.
pub fn transfer_check(
    t: &TransferOperator,
    w: &KForm,
    v: &Domain,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<TransferReport> {
    let k = w.degree();
    let eta = transfer_gamma(t, w)?;
    let exact_identity = eta.exterior_derivative()? == *w;
    let m = homotopy_norm_bound(v, k, p)?;
    let bound = t.bound(k, p, m)?;
    let u = t.domain_u(v)?;
    let check = ratio_check(&eta, w, &u, p, bound, cfg)?;
    Ok(TransferReport {
        exact_identity,
        m,
        c: t.c,
        check,
    })
}
