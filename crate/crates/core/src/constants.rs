//! Closed-form operator-norm constants and the tables built from them.
//!
//! Every function here is a pure formula. The admissibility rules follow the
//! hypotheses under which each bound holds; evaluating a bound outside them
//! returns [`Error::Admissibility`], which the tables render as `---`.
//!
//! Note on the sphere-area table: its printed header reads
//! `2π^{(n+2)/2}/Γ((n+2)/2)` but the printed values are those of
//! `2π^{n/2}/Γ(n/2)` (e.g. `6.2832 = 2π` at `n = 2`). The values, which also
//! agree with the `L¹` norm of `|x|^{1−n}` over the unit ball, are what
//! [`gt06_sphere_constant`] reproduces.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::factorial::{binomial, factorial};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `p(k−1) − n + 1`, the exponent base of the ball bound.
fn ball_gap(n: usize, k: usize, p: f64) -> f64 {
    p * (k as f64 - 1.0) - n as f64 + 1.0
}

/// Whether `(n, k, p)` satisfies `n ≥ 2`, `2 ≤ k ≤ n`, `p > (n−1)/(k−1)`.
pub fn ball_admissible(n: usize, k: usize, p: f64) -> bool {
    n >= 2 && k >= 2 && k <= n && p >= 1.0 && ball_gap(n, k, p) > 0.0
}

fn check_ball(n: usize, k: usize, p: f64) -> Result<()> {
    if ball_admissible(n, k, p) {
        Ok(())
    } else {
        Err(Error::Admissibility(format!(
            "(n, k, p) = ({n}, {k}, {p}) needs n >= 2, 2 <= k <= n and p > (n-1)/(k-1)"
        )))
    }
}

/// `n!^{(p+1)/p} / m!`, the factor shared by the pullback and transfer bounds.
fn factorial_ratio(n: usize, m: usize, p: f64) -> f64 {
    factorial(n as u64).powf((p + 1.0) / p) / factorial(m as u64)
}

/// Norm of the radial homotopy operator on `k`-forms over the `r`-ball:
/// `r √C(n,k) / (p(k−1) − n + 1)^{1/p}`.
pub fn bound_ball(n: usize, k: usize, p: f64, r: f64) -> Result<f64> {
    check_ball(n, k, p)?;
    check_positive("r", r)?;
    Ok(r * binomial(n as u64, k as u64).sqrt() / ball_gap(n, k, p).powf(1.0 / p))
}

/// Bound for 1-forms on the `r`-ball: `r^{1+(n−1)/p} √n / (p+n−1)^{1/p}`.
pub fn bound_one_form(n: usize, p: f64, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Admissibility(
            "the 1-form ball bound needs n >= 2; use bound_interval for n = 1".into(),
        ));
    }
    if p < 1.0 {
        return Err(Error::Admissibility(format!("p = {p} < 1")));
    }
    check_positive("r", r)?;
    let nf = n as f64;
    Ok(r.powf(1.0 + (nf - 1.0) / p) * nf.sqrt() / (p + nf - 1.0).powf(1.0 / p))
}

/// Bound on the interval `]−r, r[`: `2r`, valid whenever `1/p − 1/q ≤ 1`.
pub fn bound_interval(r: f64) -> Result<f64> {
    check_positive("r", r)?;
    Ok(2.0 * r)
}

/// Bound of the transferred operator on a `C`-bi-Lipschitz image of a domain
/// on which the homotopy operator has norm below `M`:
/// `M (n−k+1)/C · (n!^{(p+1)/p}/(n−k+1)!)²`.
pub fn bound_bilipschitz(n: usize, k: usize, p: f64, c: f64, m: f64) -> Result<f64> {
    check_positive("C", c)?;
    check_positive("M", m)?;
    if k == 0 || k > n {
        return Err(Error::Admissibility(format!("k = {k} outside 1..={n}")));
    }
    if p < 1.0 {
        return Err(Error::Admissibility(format!("p = {p} < 1")));
    }
    let f = factorial_ratio(n, n - k + 1, p);
    Ok(m * (n - k + 1) as f64 / c * f * f)
}

/// Bound on the open standard simplex, obtained through the radial map onto
/// its circumscribed ball with Lipschitz constant `n²`.
pub fn bound_simplex(n: usize, k: usize, p: f64) -> Result<f64> {
    check_ball(n, k, p)?;
    let m = bound_ball(n, k, p, 1.0)?;
    bound_bilipschitz(n, k, p, (n * n) as f64, m)
}

/// Operator-norm bound for the p-harmonic solving operator on a
/// `C`-bi-Lipschitz image of a ball:
/// `√C(n,k)(n−k+1) / (C (p(k−1)−n+1)^{1/p}) · (n!^{(p+1)/p}/(n−k+1)!)²`.
pub fn bound_p_harmonic(n: usize, k: usize, p: f64, c: f64) -> Result<f64> {
    check_ball(n, k, p)?;
    bound_bilipschitz(n, k, p, c, bound_ball(n, k, p, 1.0)?)
}

/// `‖|x|^{1−n}‖_{L¹(B(r))} = r · 2π^{n/2}/Γ(n/2)`, the surface area of
/// `S^{n−1}` times `r`.
pub fn gt06_sphere_constant(n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Admissibility(format!("n = {n} < 2")));
    }
    check_positive("r", r)?;
    let h = n as f64 / 2.0;
    Ok(r * 2.0 * PI.powf(h) / gamma(h))
}

/// Surface area of the unit sphere `S^{n−1}` (`2` for `n = 1`).
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// Volume of the `n`-ball of radius `r`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    let h = n as f64 / 2.0;
    r.powi(n as i32) * PI.powf(h) / gamma(1.0 + h)
}

/// Stirling's formula in the factorial form `x! ≈ x^x √(2πx) e^{−x}`, used
/// here as `Γ(x) = Γ(x+1)/x`.
pub fn stirling_gamma(x: f64) -> f64 {
    ln_stirling_gamma(x).exp()
}

fn ln_stirling_gamma(x: f64) -> f64 {
    x * x.ln() - x + 0.5 * (2.0 * PI / x).ln()
}

/// Ratio of [`gt06_sphere_constant`]`(n, 1)` to its Stirling approximation
/// `2π^{n/2}/Γ̃(n/2)`. Tends to 1 from below.
pub fn stirling_ratio(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Admissibility("n must be at least 1".into()));
    }
    let x = n as f64 / 2.0;
    // the π powers cancel, leaving Γ̃(x)/Γ(x); go through logs for large n
    Ok((ln_stirling_gamma(x) - statrs::function::gamma::ln_gamma(x)).exp())
}

/// The ball constant for `S` acting on `(k+1)`-forms of `ℝ^{n+1}`,
/// `√C(n+1,k+1)/(pk−n)^{1/p}`, over a range of dimensions. Diagnostic for the
/// growth claim in `n`; inadmissible entries are `None`.
pub fn ball_constant_sweep(ns: impl IntoIterator<Item = usize>, k: usize, p: f64) -> Vec<(usize, Option<f64>)> {
    ns.into_iter()
        .map(|n| (n, bound_ball(n + 1, k + 1, p, 1.0).ok()))
        .collect()
}

/// Which bound a [`BoundSpec`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundKind {
    Ball,
    Interval,
    OneForm,
    Simplex,
    BiLipschitz { c: f64, m: f64 },
    GT06Sphere,
    PullbackPointwise { c: f64 },
    PullbackOperator { c: f64 },
}

/// Parameters of one bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSpec {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub r: f64,
    pub kind: BoundKind,
}

impl BoundSpec {
    /// Evaluates the bound. For `PullbackOperator` this is the `β*` bound.
    pub fn evaluate(&self) -> Result<f64> {
        let BoundSpec { n, k, p, r, kind } = *self;
        match kind {
            BoundKind::Ball => bound_ball(n, k, p, r),
            BoundKind::Interval => bound_interval(r),
            BoundKind::OneForm => bound_one_form(n, p, r),
            BoundKind::Simplex => bound_simplex(n, k, p),
            BoundKind::BiLipschitz { c, m } => bound_bilipschitz(n, k, p, c, m),
            BoundKind::GT06Sphere => gt06_sphere_constant(n, r),
            BoundKind::PullbackPointwise { c } => {
                crate::lipschitz::pullback_pointwise_bound(n, k, c)
            }
            BoundKind::PullbackOperator { c } => {
                crate::lipschitz::pullback_operator_bounds(n, k, p, c).map(|b| b.beta)
            }
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.evaluate().is_ok()
    }
}

/// One dimension block of the ball-constant table: rows `k = 1..=n`, one
/// column per `p`, `None` where the bound is inadmissible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppendixTable {
    pub n: usize,
    pub p_values: Vec<f64>,
    pub rows: Vec<AppendixRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppendixRow {
    pub k: usize,
    pub values: Vec<Option<f64>>,
}

/// Table of `√C(n,k)/(p(k−1)−n+1)^{1/p}` for `k = 1..=n`.
pub fn appendix_table(n: usize, p_values: &[f64]) -> Result<AppendixTable> {
    if n < 1 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    if p_values.is_empty() {
        return Err(Error::Parameter("need at least one p".into()));
    }
    let rows = (1..=n)
        .map(|k| AppendixRow {
            k,
            values: p_values.iter().map(|&p| bound_ball(n, k, p, 1.0).ok()).collect(),
        })
        .collect();
    Ok(AppendixTable {
        n,
        p_values: p_values.to_vec(),
        rows,
    })
}

fn format_p(p: f64) -> String {
    if p.fract() == 0.0 {
        format!("{}", p as i64)
    } else {
        format!("{p}")
    }
}

fn format_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "---".to_string(), |x| format!("{x:.4}"))
}

impl AppendixTable {
    /// Layout of the printed table: a dimension banner, `k` rows, `p` columns,
    /// `---` for inadmissible cells.
    pub fn render_pretty(&self) -> String {
        let header: Vec<String> = std::iter::once("k".to_string())
            .chain(self.p_values.iter().map(|&p| format!("p={}", format_p(p))))
            .collect();
        let width = 10;
        let mut s = format!("Dimension n = {}\n", self.n);
        s.push_str(
            &header
                .iter()
                .map(|h| format!("{h:>width$}"))
                .collect::<Vec<_>>()
                .join(" |"),
        );
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = std::iter::once(row.k.to_string())
                .chain(row.values.iter().map(|&v| format_cell(v)))
                .collect();
            s.push_str(
                &cells
                    .iter()
                    .map(|c| format!("{c:>width$}"))
                    .collect::<Vec<_>>()
                    .join(" |"),
            );
            s.push('\n');
        }
        s
    }

    /// CSV rows `n,k,p,value` with `---` for inadmissible cells.
    pub fn render_csv(&self, with_header: bool) -> String {
        let mut s = String::new();
        if with_header {
            s.push_str("n,k,p,value\n");
        }
        for row in &self.rows {
            for (&p, &v) in self.p_values.iter().zip(&row.values) {
                s.push_str(&format!("{},{},{},{}\n", self.n, row.k, format_p(p), format_cell(v)));
            }
        }
        s
    }
}

/// Rows `(n, r·2π^{n/2}/Γ(n/2))` of the sphere-constant table.
pub fn gt06_table(ns: impl IntoIterator<Item = usize>, r: f64) -> Result<Vec<(usize, f64)>> {
    ns.into_iter()
        .map(|n| gt06_sphere_constant(n, r).map(|v| (n, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ball_bound_printed_values() {
        assert_abs_diff_eq!(bound_ball(2, 2, 2.0, 1.0).unwrap(), 1.0, epsilon = 5e-5);
        assert_abs_diff_eq!(bound_ball(3, 3, 2.5, 1.0).unwrap(), 0.6444, epsilon = 5e-5);
        assert_abs_diff_eq!(bound_ball(10, 6, 10.0, 1.0).unwrap(), 9.9961, epsilon = 5e-5);
    }

    #[test]
    fn ball_bound_rejects_inadmissible() {
        assert!(matches!(bound_ball(3, 2, 2.0, 1.0), Err(Error::Admissibility(_))));
        assert!(matches!(bound_ball(3, 1, 10.0, 1.0), Err(Error::Admissibility(_))));
        assert!(matches!(bound_ball(1, 1, 2.0, 1.0), Err(Error::Admissibility(_))));
    }

    #[test]
    fn ball_bound_is_linear_in_radius() {
        for &(n, k, p) in &[(2, 2, 2.0), (5, 4, 2.5), (10, 9, 10.0)] {
            let one = bound_ball(n, k, p, 1.0).unwrap();
            for r in [0.3, 2.0, 7.5] {
                let v = bound_ball(n, k, p, r).unwrap();
                assert!((v - r * one).abs() <= 4.0 * f64::EPSILON * v);
            }
        }
    }

    #[test]
    fn one_form_bound() {
        assert_abs_diff_eq!(bound_one_form(2, 2.0, 1.0).unwrap(), (2.0f64 / 3.0).sqrt(), epsilon = 1e-14);
        let (n, p) = (3, 2.5);
        let ratio = bound_one_form(n, p, 2.0).unwrap() / bound_one_form(n, p, 1.0).unwrap();
        assert_abs_diff_eq!(ratio, 2f64.powf(1.0 + (n as f64 - 1.0) / p), epsilon = 1e-12);
        assert!(matches!(bound_one_form(1, 2.0, 1.0), Err(Error::Admissibility(_))));
    }

    #[test]
    fn interval_bound() {
        assert_eq!(bound_interval(1.0).unwrap(), 2.0);
        assert_eq!(bound_interval(0.5).unwrap(), 1.0);
        assert_eq!(bound_interval(3.0).unwrap(), 6.0);
        assert!(bound_interval(0.0).is_err());
    }

    #[test]
    fn simplex_bound() {
        assert_abs_diff_eq!(bound_simplex(2, 2, 2.0).unwrap(), 2.0, epsilon = 1e-12);
        for &(n, k, p) in &[(3, 2, 10.0), (4, 3, 2.0), (5, 5, 2.5)] {
            let s = bound_simplex(n, k, p).unwrap();
            assert!(s.is_finite() && s > 0.0);
            let f = factorial_ratio(n, n - k + 1, p);
            let expect = (n - k + 1) as f64 / (n * n) as f64 * f * f;
            assert_abs_diff_eq!(s / bound_ball(n, k, p, 1.0).unwrap(), expect, epsilon = 1e-9 * expect);
        }
        assert!(bound_simplex(3, 2, 2.0).is_err());
    }

    #[test]
    fn bilipschitz_bound() {
        assert_abs_diff_eq!(bound_bilipschitz(2, 2, 2.0, 1.0, 1.0).unwrap(), 8.0, epsilon = 1e-12);
        let base = bound_bilipschitz(3, 2, 4.0, 1.5, 0.7).unwrap();
        assert_abs_diff_eq!(bound_bilipschitz(3, 2, 4.0, 1.5, 1.4).unwrap(), 2.0 * base, epsilon = 1e-12);
        assert_abs_diff_eq!(bound_bilipschitz(3, 2, 4.0, 3.0, 0.7).unwrap(), base / 2.0, epsilon = 1e-12);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn sphere_constants() {
        assert_abs_diff_eq!(gt06_sphere_constant(2, 1.0).unwrap(), 6.2832, epsilon = 5e-5);
        assert_abs_diff_eq!(gt06_sphere_constant(7, 1.0).unwrap(), 33.0734, epsilon = 5e-5);
        assert_abs_diff_eq!(gt06_sphere_constant(10, 1.0).unwrap(), 25.5016, epsilon = 5e-5);
        for n in 1..=10 {
            // ball volume relation |S^{n-1}| = n |B^n|
            assert_abs_diff_eq!(sphere_area(n), n as f64 * ball_volume(n, 1.0), epsilon = 1e-12);
        }
    }

    #[test]
    fn stirling_ratio_tends_to_one() {
        let r10 = stirling_ratio(10).unwrap();
        assert!((0.95..=1.05).contains(&r10), "{r10}");
        let r50 = stirling_ratio(50).unwrap();
        assert!((0.99..=1.01).contains(&r50), "{r50}");
        let mut prev = 0.0;
        for n in 10..=100 {
            let r = stirling_ratio(n).unwrap();
            assert!(r > prev && r < 1.0);
            prev = r;
        }
    }

    #[test]
    fn appendix_layout() {
        let t = appendix_table(4, &[2.0, 2.5, 10.0]).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert!(t.rows[0].values.iter().all(Option::is_none));
        assert_abs_diff_eq!(t.rows[2].values[0].unwrap(), 2.0, epsilon = 5e-5);
        let pretty = t.render_pretty();
        assert!(pretty.starts_with("Dimension n = 4"));
        assert!(pretty.contains("---"));
        let t7 = appendix_table(7, &[2.0, 2.5, 10.0]).unwrap();
        assert_abs_diff_eq!(t7.rows[4].values[1].unwrap(), 2.6320, epsilon = 5e-5);
    }

    #[test]
    fn bound_spec_dispatch() {
        let spec = BoundSpec {
            n: 2,
            k: 2,
            p: 2.0,
            r: 1.0,
            kind: BoundKind::BiLipschitz { c: 1.0, m: 1.0 },
        };
        assert_abs_diff_eq!(spec.evaluate().unwrap(), 8.0, epsilon = 1e-12);
        let bad = BoundSpec {
            kind: BoundKind::Ball,
            n: 3,
            k: 2,
            ..spec
        };
        assert!(!bad.is_admissible());
    }
}
