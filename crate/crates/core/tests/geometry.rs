use std::f64::consts::PI;

use approx::assert_relative_eq;
use lp_homotopy::constants::ball_volume;
use lp_homotopy::form::{parse_form, rat, KForm};
use lp_homotopy::geometry::{
    ball_monomial_moment, exact_power_integral, lp_norm, ratio_check, sample_domain, Domain, ExactPlan,
    QuadratureConfig,
};
use lp_homotopy::lipschitz::LipschitzMap;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn ball_moments() {
    assert_relative_eq!(ball_monomial_moment(2, &[0, 0], 1.0), PI, max_relative = 1e-14);
    assert_relative_eq!(ball_monomial_moment(2, &[2, 0], 1.0), PI / 4.0, max_relative = 1e-14);
    assert_relative_eq!(ball_monomial_moment(3, &[2, 2, 0], 2.0), 512.0 * PI / 105.0, max_relative = 1e-12);
    assert_eq!(ball_monomial_moment(3, &[1, 2, 0], 1.0), 0.0);
}

#[test]
fn exact_and_sampled_norms_agree() {
    let w = parse_form("1 : x1 x2 + 1\n2 : x2^2\n3 : x3", Some(3)).unwrap();
    let dom = Domain::unit_ball(3);
    let exact = lp_norm(&w, &dom, 4.0, &cfg()).unwrap();
    assert!(exact.exact);
    let samples = sample_domain(&dom, &cfg()).unwrap();
    let sampled = lp_homotopy::geometry::lp_norm_sampled(&w.to_float(), &samples, 4.0);
    assert!((sampled.value - exact.value).abs() < 5.0 * sampled.std_error, "{sampled:?} vs {exact:?}");
}

#[test]
fn norm_examples() {
    let dom = Domain::unit_ball(2);
    let dx1 = KForm::basis(2, &[1]).unwrap();
    assert_relative_eq!(lp_norm(&dx1, &dom, 2.0, &cfg()).unwrap().value, PI.sqrt(), max_relative = 1e-14);
    let odd = lp_norm(&dx1, &dom, 3.0, &cfg()).unwrap();
    assert!(!odd.exact);
    assert!((odd.value - PI.powf(1.0 / 3.0)).abs() < 5.0 * odd.std_error.max(1e-12));
    assert_eq!(lp_norm(&KForm::zero(2, 1).unwrap(), &dom, 3.0, &cfg()).unwrap().value, 0.0);
    assert!(lp_norm(&dx1, &dom, 0.5, &cfg()).is_err());
    assert!(lp_norm(&dx1, &Domain::unit_ball(3), 2.0, &cfg()).is_err());
}

#[test]
fn affine_images_use_the_change_of_variables() {
    let m = LipschitzMap::affine(
        vec![vec![rat(2, 1), rat(1, 1)], vec![rat(0, 1), rat(1, 2)]],
        vec![rat(1, 1), rat(-1, 1)],
    )
    .unwrap();
    let dom = Domain::image(Domain::unit_ball(2), m).unwrap();
    assert!(ExactPlan::for_domain(&dom).is_some());
    let one = KForm::scalar(lp_homotopy::form::Polynomial::one(2));
    // area of the image ellipse is |det|·π
    assert_relative_eq!(exact_power_integral(&one, &dom, 2.0).unwrap(), PI, max_relative = 1e-13);
    let w = parse_form("1 : x1\n2 : x2^2", Some(2)).unwrap();
    let exact = exact_power_integral(&w, &dom, 2.0).unwrap();
    let samples = sample_domain(&dom, &cfg()).unwrap();
    let (mc, se) = samples.integrate(|x| x[0] * x[0] + x[1].powi(4));
    assert!((mc - exact).abs() < 5.0 * se, "{mc} ± {se} vs {exact}");
}

#[test]
fn simplex_sampling() {
    let dom = Domain::simplex(3).unwrap();
    assert_relative_eq!(dom.volume().unwrap(), 1.0 / 6.0, max_relative = 1e-14);
    let samples = sample_domain(&dom, &cfg()).unwrap();
    assert!(samples.iter().all(|(x, _)| dom.contains(x)));
    let (vol, se) = samples.integrate(|_| 1.0);
    assert!((vol - 1.0 / 6.0).abs() < 1e-12 + 5.0 * se);
    let (first, se) = samples.integrate(|x| x[0]);
    assert!((first - 1.0 / 24.0).abs() < 5.0 * se, "{first}");
}

#[test]
fn sampling_is_reproducible() {
    let dom = Domain::unit_ball(4);
    let a = sample_domain(&dom, &cfg()).unwrap();
    let b = sample_domain(&dom, &cfg()).unwrap();
    assert_eq!(a.point(1234), b.point(1234));
    let c = sample_domain(&dom, &cfg().with_seed(1)).unwrap();
    assert_ne!(a.point(0), c.point(0));
    assert_relative_eq!(a.integrate(|_| 1.0).0, ball_volume(4, 1.0), max_relative = 1e-12);
}

#[test]
fn ratio_checks() {
    let dom = Domain::unit_ball(2);
    let a = parse_form("1 : x1", Some(2)).unwrap();
    let b = KForm::basis(2, &[1]).unwrap();
    let r = ratio_check(&a, &b, &dom, 2.0, 0.5, &cfg()).unwrap();
    assert!(r.exact);
    assert_relative_eq!(r.ratio, 0.5, max_relative = 1e-14);
    assert!(!r.violated(4.0));
    assert!(ratio_check(&a, &b, &dom, 2.0, 0.49, &cfg()).unwrap().violated(4.0));
    let sampled = ratio_check(&a, &b, &dom, 3.0, 1.0, &cfg()).unwrap();
    assert!(!sampled.exact && sampled.z_score < 0.0);
}

#[test]
fn config_from_toml() {
    let c = QuadratureConfig::from_toml_str("samples = 1000\nseed = 9\nt_steps = 8\n").unwrap();
    assert_eq!((c.sample_count, c.seed, c.t_subdivisions), (1000, 9, 8));
    assert!(QuadratureConfig::from_toml_str("samples = 0\n").is_err());
}
