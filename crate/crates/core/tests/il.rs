use lp_homotopy::form::{parse_form, KForm};
use lp_homotopy::geometry::{Domain, QuadratureConfig};
use lp_homotopy::il::{
    discretize_t, homotopy_residual, smooth_suite, zeta, DiscretizeOptions, IlOperator, Mollifier, SampledForm,
};
use lp_homotopy::Error;

fn cfg(samples: usize) -> QuadratureConfig {
    QuadratureConfig::default().with_samples(samples)
}

#[test]
fn kernel_points_along_h_and_rejects_zero() {
    let dom = Domain::unit_ball(2);
    let phi = Mollifier::for_domain(&dom).unwrap();
    let z = [0.1, -0.2];
    let h = [0.3, 0.4];
    let v = zeta(&z, &h, 1, &phi, &dom, &cfg(1000)).unwrap();
    assert!((v[0] * h[1] - v[1] * h[0]).abs() < 1e-14);
    assert!(matches!(zeta(&z, &[0.0, 0.0], 1, &phi, &dom, &cfg(1000)), Err(Error::Singularity(_))));
    assert!(zeta(&z, &h, 3, &phi, &dom, &cfg(1000)).is_err());
}

#[test]
fn interval_primitive_of_dx() {
    // the centered mollifier has mean 0, so T(dx)(x) = x
    let op = IlOperator::for_domain(Domain::interval(1.0).unwrap(), cfg(4000)).unwrap();
    let w = SampledForm::from_kform(&KForm::basis(1, &[1]).unwrap());
    for x in [-0.6, 0.3, 0.8] {
        let t = op.apply(&w, &[x]).unwrap();
        assert!((t.value[0] - x).abs() < 1e-6 + 4.0 * t.std_error[0], "{x}: {:?}", t);
    }
}

#[test]
fn homotopy_identity_on_a_polynomial_form() {
    let dom = Domain::unit_ball(2);
    let op = IlOperator::for_domain(dom, cfg(4000)).unwrap();
    let w = parse_form("1 : x1 x2 + 1\n2 : x1^2 - x2", Some(2)).unwrap();
    let r = homotopy_residual(&op, &SampledForm::from_kform(&w), 12, 1).unwrap();
    assert!(r.relative_l2 < 0.01, "{r:?}");
}

#[test]
fn exact_forms_have_closed_images() {
    // for closed ω the identity reduces to dTω = ω
    let dom = Domain::unit_ball(2);
    let op = IlOperator::for_domain(dom, cfg(4000)).unwrap();
    let area = SampledForm::from_kform(&KForm::basis(2, &[1, 2]).unwrap());
    let r = homotopy_residual(&op, &area, 12, 2).unwrap();
    assert!(r.relative_l2 < 0.01, "{r:?}");
}

#[test]
fn smooth_suite_in_three_dimensions() {
    let op = IlOperator::for_domain(Domain::unit_ball(3), cfg(8000)).unwrap();
    let suite = smooth_suite(3).unwrap();
    assert_eq!(suite.len(), 5);
    let r = homotopy_residual(&op, &suite[0].form, 8, 3).unwrap();
    assert!(r.relative_l2 < 0.05, "{}: {r:?}", suite[0].name);
    assert!(smooth_suite(4).is_err());
}

#[test]
fn spectrum_regression_at_grid_16() {
    let dom = Domain::unit_ball(2);
    let phi = Mollifier::for_domain(&dom).unwrap();
    let t = discretize_t(2, 1, 2.0, 2.0, DiscretizeOptions::new(16), &phi, &dom, &QuadratureConfig::default()).unwrap();
    let s = t.spectrum();
    assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
    let ratio = s.ratio(25).unwrap();
    // observed value; the singular values decay like j^(-1/2) here
    assert!((ratio - 0.2669).abs() < 1e-3, "σ25/σ1 = {ratio}");
}

#[test]
fn discretization_checks_the_exponents() {
    let dom = Domain::unit_ball(2);
    let phi = Mollifier::for_domain(&dom).unwrap();
    let r = discretize_t(2, 1, 1.5, 10.0, DiscretizeOptions::new(4), &phi, &dom, &QuadratureConfig::default());
    assert!(matches!(r, Err(Error::Parameter(_))));
}
