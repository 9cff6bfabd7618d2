use approx::assert_relative_eq;
use lp_homotopy::constants::bound_simplex;
use lp_homotopy::form::random::{random_closed_form, random_form, RandomFormSpec};
use lp_homotopy::form::{rat, KForm, Polynomial};
use lp_homotopy::geometry::{Domain, QuadratureConfig};
use lp_homotopy::lipschitz::{
    parse_map, pullback, pullback_at, pullback_operator_bounds, pullback_pointwise_bound, simplex_map,
    transfer_check, transfer_gamma, LipschitzMap, SimplexRadialMap, TransferOperator,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn x(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

/// `(x1 + x2², x2 + x3, x3)` and `(x1 x3, x2, x3 + x1)` on ℝ³.
fn polynomial_maps() -> (LipschitzMap, LipschitzMap) {
    let phi = LipschitzMap::polynomial(vec![x(3, 0) + &x(3, 1) * &x(3, 1), x(3, 1) + x(3, 2), x(3, 2)], 10.0).unwrap();
    let psi = LipschitzMap::polynomial(vec![&x(3, 0) * &x(3, 2), x(3, 1), x(3, 2) + x(3, 0)], 10.0).unwrap();
    (phi, psi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pullback_is_functorial(seed in any::<u64>(), k in 0usize..=3) {
        let (phi, psi) = polynomial_maps();
        let w = random_form(&mut ChaCha8Rng::seed_from_u64(seed), RandomFormSpec::new(3, k, 2));
        // (ψ∘φ)* = φ* ψ*
        let lhs = pullback(&psi.compose(&phi).unwrap(), &w).unwrap();
        let rhs = pullback(&phi, &pullback(&psi, &w).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_commutes_with_d(seed in any::<u64>(), k in 0usize..=2) {
        let (phi, _) = polynomial_maps();
        let w = random_form(&mut ChaCha8Rng::seed_from_u64(seed), RandomFormSpec::new(3, k, 3));
        prop_assert_eq!(
            pullback(&phi, &w.exterior_derivative().unwrap()).unwrap(),
            pullback(&phi, &w).unwrap().exterior_derivative().unwrap()
        );
    }
}

#[test]
fn numeric_pullback_of_polynomial_map() {
    let (phi, _) = polynomial_maps();
    let w = random_form(&mut ChaCha8Rng::seed_from_u64(4), RandomFormSpec::new(3, 2, 2));
    let exact = pullback(&phi, &w).unwrap().to_float();
    let p = [0.2, -0.4, 0.9];
    for (a, b) in exact.eval(&p).iter().zip(pullback_at(&phi, &w.to_float(), &p)) {
        assert_relative_eq!(*a, b, epsilon = 1e-12);
    }
}

#[test]
fn pointwise_bound_on_scalings() {
    // φ = 2x pulls a k-form back with factor 2^k, under n!/(n−k)!·2^k
    let phi = LipschitzMap::scaling(3, rat(2, 1)).unwrap();
    for k in 0..=3 {
        let w = random_form(&mut ChaCha8Rng::seed_from_u64(k as u64), RandomFormSpec::new(3, k, 2)).to_float();
        let y = [0.1, 0.3, -0.2];
        let lhs = pullback_at(&phi, &w, &y).iter().map(|v| v * v).sum::<f64>().sqrt();
        let at = w.norm_sq(&phi.apply(&y)).sqrt();
        assert_relative_eq!(lhs, 2f64.powi(k as i32) * at, max_relative = 1e-12);
        assert!(lhs <= pullback_pointwise_bound(3, k, phi.lipschitz_constant()).unwrap() * at);
    }
}

#[test]
fn operator_bound_symmetry() {
    let b = pullback_operator_bounds(4, 2, 3.0, 1.0).unwrap();
    assert_eq!(b.alpha, b.beta);
    assert!(pullback_operator_bounds(2, 3, 2.0, 1.0).is_err());
    assert!(pullback_operator_bounds(2, 1, 2.0, -1.0).is_err());
}

#[test]
fn simplex_map_difference_quotients() {
    for n in 2..=4 {
        let m = SimplexRadialMap::new(n).unwrap();
        let dom = Domain::simplex(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut draw = || loop {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            if dom.contains(&v) {
                return v;
            }
        };
        let mut worst: f64 = 0.0;
        for _ in 0..100_000 {
            let (u, v) = (draw(), draw());
            let d: f64 = u.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let fu = m.apply(&u);
            let fv = m.apply(&v);
            let df: f64 = fu.iter().zip(&fv).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if d > 1e-9 {
                worst = worst.max(df / d);
            }
        }
        let map = simplex_map(n).unwrap();
        assert!(worst <= map.lipschitz_constant(), "n={n}: {worst}");
    }
    assert!(bound_simplex(3, 3, 2.5).unwrap() > 0.0);
}

#[test]
fn transfer_pairs_keep_the_exact_identity() {
    let cfg = QuadratureConfig::default().with_samples(4000);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let pairs = [
        TransferOperator::identity(3),
        TransferOperator::scaling(3, rat(1, 2)).unwrap(),
        TransferOperator::shear(3, 0, 2, rat(-1, 3)).unwrap(),
    ];
    for t in &pairs {
        for k in 1..=3 {
            let w = random_closed_form(&mut rng, RandomFormSpec::new(3, k, 2));
            let eta = transfer_gamma(t, &w).unwrap();
            assert_eq!(eta.exterior_derivative().unwrap(), w);
        }
        let w = random_closed_form(&mut rng, RandomFormSpec::new(3, 2, 2));
        let r = transfer_check(t, &w, &Domain::unit_ball(3), 4.0, &cfg).unwrap();
        assert!(r.exact_identity && r.check.exact && !r.check.violated(4.0));
    }
}

#[test]
fn map_files() {
    let m = parse_map("# shear\ndim: 2\ncomponent: x1 + 1/2 x2\ncomponent: x2\n").unwrap();
    let t = TransferOperator::new(m.clone(), m.inverse().unwrap().clone()).unwrap();
    let area = KForm::basis(2, &[1, 2]).unwrap();
    assert_eq!(transfer_gamma(&t, &area).unwrap().exterior_derivative().unwrap(), area);
    assert!(parse_map("lipschitz: 0.5\ncomponent: 2 x1\n").is_err());
}
