//! Seeded generators of random polynomial forms for property checks.

use num::BigRational;
use rand::Rng;

use super::kform::KForm;
use super::multi_index::MultiIndex;
use super::polynomial::{rat, Polynomial};

/// Shape of the random forms drawn by [`random_form`].
#[derive(Debug, Clone, Copy)]
pub struct RandomFormSpec {
    pub n: usize,
    pub k: usize,
    /// Maximum total degree of each coefficient.
    pub max_degree: u32,
    /// Maximum number of monomials per coefficient.
    pub max_terms: usize,
}

impl RandomFormSpec {
    pub fn new(n: usize, k: usize, max_degree: u32) -> Self {
        RandomFormSpec {
            n,
            k,
            max_degree,
            max_terms: 4,
        }
    }
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let mut num = 0;
    while num == 0 {
        num = rng.random_range(-6i64..=6);
    }
    rat(num, rng.random_range(1i64..=4))
}

fn random_exponents<R: Rng + ?Sized>(rng: &mut R, n: usize, max_degree: u32) -> Vec<u32> {
    let degree = rng.random_range(0..=max_degree);
    let mut e = vec![0u32; n];
    for _ in 0..degree {
        e[rng.random_range(0..n)] += 1;
    }
    e
}

pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, n: usize, max_degree: u32, max_terms: usize) -> Polynomial {
    let terms = rng.random_range(1..=max_terms.max(1));
    Polynomial::from_terms(
        n,
        (0..terms).map(|_| (random_exponents(rng, n, max_degree), random_rational(rng))),
    )
}

/// A random form; each component is present with probability 3/4 and at
/// least one component is nonzero whenever `k ≤ n`.
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, spec: RandomFormSpec) -> KForm {
    let indices = MultiIndex::all(spec.n, spec.k);
    loop {
        let mut w = KForm::zero(spec.n, spec.k).expect("k <= n");
        for j in &indices {
            if rng.random_bool(0.75) {
                let f = random_polynomial(rng, spec.n, spec.max_degree, spec.max_terms);
                w.add_component(j.clone(), f).expect("same shape");
            }
        }
        if !w.is_zero() || indices.is_empty() {
            return w;
        }
    }
}

/// A random closed `k`-form: `d` of a random `(k−1)`-form for `k < n`
/// (coefficient degree at most `max_degree`), any random form for `k = n`.
pub fn random_closed_form<R: Rng + ?Sized>(rng: &mut R, spec: RandomFormSpec) -> KForm {
    assert!(spec.k >= 1, "closed random forms need k >= 1");
    if spec.k == spec.n {
        return random_form(rng, spec);
    }
    loop {
        let primitive = random_form(
            rng,
            RandomFormSpec {
                k: spec.k - 1,
                max_degree: spec.max_degree + 1,
                ..spec
            },
        );
        let w = primitive.exterior_derivative().expect("k - 1 < n");
        if !w.is_zero() {
            return w;
        }
    }
}
