use lp_homotopy::form::random::{random_form, random_polynomial, RandomFormSpec};
use lp_homotopy::form::{format_form, parse_form, rat, KForm, MultiIndex, Polynomial};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn radial(n: usize) -> Vec<Polynomial> {
    (0..n).map(|i| Polynomial::var(n, i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), n in 1usize..=4, k in 0usize..=4) {
        prop_assume!(k + 2 <= n);
        let w = random_form(&mut rng(seed), RandomFormSpec::new(n, k, 4));
        let dd = w.exterior_derivative().unwrap().exterior_derivative().unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), n in 2usize..=4, k in 0usize..=2, l in 0usize..=2) {
        prop_assume!(k + l < n);
        let mut r = rng(seed);
        let a = random_form(&mut r, RandomFormSpec::new(n, k, 3));
        let b = random_form(&mut r, RandomFormSpec::new(n, l, 3));
        let lhs = a.wedge(&b).unwrap().exterior_derivative().unwrap();
        let sign = rat(if k % 2 == 0 { 1 } else { -1 }, 1);
        let rhs = a.exterior_derivative().unwrap().wedge(&b).unwrap()
            .try_add(&a.wedge(&b.exterior_derivative().unwrap()).unwrap().scale(&sign)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), n in 1usize..=4, k in 0usize..=2, l in 0usize..=2) {
        prop_assume!(k + l <= n);
        let mut r = rng(seed);
        let a = random_form(&mut r, RandomFormSpec::new(n, k, 2));
        let b = random_form(&mut r, RandomFormSpec::new(n, l, 2));
        let sign = rat(if (k * l) % 2 == 0 { 1 } else { -1 }, 1);
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&sign));
    }

    #[test]
    fn interior_product_squares_to_zero(seed in any::<u64>(), n in 2usize..=4, k in 2usize..=4) {
        prop_assume!(k <= n);
        let mut r = rng(seed);
        let w = random_form(&mut r, RandomFormSpec::new(n, k, 2));
        let x: Vec<Polynomial> = (0..n).map(|_| random_polynomial(&mut r, n, 2, 3)).collect();
        let twice = w.interior_product(&x).unwrap().interior_product(&x).unwrap();
        prop_assert!(twice.is_zero());
    }

    /// Cartan's formula for the radial field on a form with homogeneous
    /// coefficients of degree m: `dι + ιd = (k + m)·id`.
    #[test]
    fn euler_identity(seed in any::<u64>(), n in 1usize..=4, k in 1usize..=4, m in 0u32..=3) {
        prop_assume!(k <= n);
        let w = random_form(&mut rng(seed), RandomFormSpec::new(n, k, 3))
            .map_coefficients(|f| f.homogeneous_components().remove(&m).unwrap_or_else(|| Polynomial::zero(n)));
        let x = radial(n);
        let mut lhs = w.interior_product(&x).unwrap().exterior_derivative().unwrap();
        if k < n {
            lhs = lhs.try_add(&w.exterior_derivative().unwrap().interior_product(&x).unwrap()).unwrap();
        }
        prop_assert_eq!(lhs, w.scale(&rat(k as i64 + m as i64, 1)));
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), n in 1usize..=4, k in 0usize..=4) {
        prop_assume!(k <= n);
        let w = random_form(&mut rng(seed), RandomFormSpec::new(n, k, 3));
        let text = format_form(&w);
        prop_assert_eq!(parse_form(&text, Some(n)).unwrap(), w);
    }
}

#[test]
fn basis_forms_and_display() {
    let w = KForm::basis(3, &[2, 1]).unwrap();
    assert_eq!(w, KForm::basis(3, &[1, 2]).unwrap().scale(&rat(-1, 1)));
    assert!(KForm::basis(3, &[1, 1]).unwrap().is_zero());
    assert!(KForm::basis(2, &[3]).is_err());
    assert_eq!(MultiIndex::all(5, 2).len(), 10);
}

#[test]
fn exterior_derivative_of_a_one_form() {
    // d(x2 dx1 − x1 dx2) = −2 dx1∧dx2
    let w = parse_form("1 : x2\n2 : -x1", Some(2)).unwrap();
    let expected = KForm::basis(2, &[1, 2]).unwrap().scale(&rat(-2, 1));
    assert_eq!(w.exterior_derivative().unwrap(), expected);
    assert!(KForm::basis(2, &[1, 2]).unwrap().exterior_derivative().is_err());
}

#[test]
fn evaluation_on_vectors() {
    let w = parse_form("1,2 : x3", Some(3)).unwrap();
    let x = [rat(0, 1), rat(0, 1), rat(2, 1)];
    let v = vec![rat(1, 1), rat(0, 1), rat(0, 1)];
    let u = vec![rat(0, 1), rat(1, 1), rat(0, 1)];
    assert_eq!(w.evaluate(&x, &[v.clone(), u.clone()]).unwrap(), rat(2, 1));
    assert_eq!(w.evaluate(&x, &[u, v]).unwrap(), rat(-2, 1));
}

#[test]
fn float_conversion_agrees_with_exact_evaluation() {
    let w = random_form(&mut rng(1), RandomFormSpec::new(3, 2, 3));
    let fw = w.to_float();
    let x = [0.25, -0.5, 0.75];
    let exact: Vec<f64> = w
        .dense_coefficients()
        .iter()
        .map(|f| f.eval_f64(&x))
        .collect();
    for (a, b) in fw.eval(&x).iter().zip(&exact) {
        assert!((a - b).abs() < 1e-12);
    }
}
