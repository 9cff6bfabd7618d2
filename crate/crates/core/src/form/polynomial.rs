//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Polynomial`] stores a map from exponent vectors to nonzero
//! [`BigRational`] coefficients. Zero coefficients are never stored, so two
//! polynomials are equal exactly when their term maps are equal. [`FloatPoly`]
//! is the `f64` image used by the numerical routines.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Vec<u32>;

/// Builds the rational `num / den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Converts an exact rational to the nearest `f64` (up to rounding of the
/// quotient).
pub fn rat_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        return v;
    }
    // Huge numerators and denominators: scale both down before dividing.
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The coordinate function `x_{i+1}` (`i` is zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, BigRational::one())
    }

    pub fn monomial(nvars: usize, exponents: Exponents, c: BigRational) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector has wrong length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Polynomial { nvars, terms }
    }

    /// Collects `(exponents, coefficient)` pairs, summing repeats and dropping
    /// zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigRational {
        self.terms.get(exponents).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    /// Splits into homogeneous parts keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.iter().sum();
            out.entry(d)
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn add_term(&mut self, exponents: Exponents, c: BigRational) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Applies `f(degree)` as a scalar factor to each homogeneous part.
    pub fn scale_by_degree<F>(&self, f: F) -> Polynomial
    where
        F: Fn(u32) -> BigRational,
    {
        Polynomial::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, v)| (e.clone(), v * f(e.iter().sum()))),
        )
    }

    /// Multiplies by the coordinate `x_{i+1}`.
    pub fn mul_var(&self, i: usize) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| {
                    let mut e = e.clone();
                    e[i] += 1;
                    (e, v.clone())
                })
                .collect(),
        }
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[i])));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars, "point has wrong dimension");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &a) in x.iter().zip(e) {
                if a > 0 {
                    t *= num::pow(xi.clone(), a as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| rat_to_f64(c) * monomial_f64(e, x))
            .sum()
    }

    /// Substitutes `subs[i]` for `x_{i+1}`. All substitutes must share one
    /// variable count, which becomes the variable count of the result.
    pub fn compose(&self, subs: &[Polynomial]) -> Polynomial {
        assert_eq!(subs.len(), self.nvars, "need one substitute per variable");
        let m = subs.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<Polynomial>> = subs.iter().map(|p| vec![Polynomial::one(p.nvars)]).collect();
        let mut out = Polynomial::zero(m);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(m, c.clone());
            for (i, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                while powers[i].len() <= a as usize {
                    let next = powers[i].last().unwrap() * &subs[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][a as usize];
            }
            out += t;
        }
        out
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), rat_to_f64(c)))
                .collect(),
        }
    }

    /// Largest absolute coefficient, zero for the zero polynomial.
    pub fn max_abs_coefficient(&self) -> BigRational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

pub(crate) fn monomial_f64(e: &[u32], x: &[f64]) -> f64 {
    let mut t = 1.0;
    for (xi, &a) in x.iter().zip(e) {
        if a > 0 {
            t *= xi.powi(a as i32);
        }
    }
    t
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs.clone();
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += rhs;
        self
    }
}

impl AddAssign for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl SubAssign for Polynomial {
    fn sub_assign(&mut self, rhs: Polynomial) {
        *self += -rhs;
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs.clone();
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= rhs;
        self
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

/// Polynomial with `f64` coefficients. Only what the integrators need.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPoly {
    nvars: usize,
    terms: Vec<(Exponents, f64)>,
}

impl FloatPoly {
    pub fn zero(nvars: usize) -> Self {
        FloatPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        FloatPoly {
            nvars,
            terms: vec![(vec![0; nvars], c)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exponents, f64)] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(e, c)| c * monomial_f64(e, x)).sum()
    }

    pub fn scale(&self, s: f64) -> FloatPoly {
        FloatPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &FloatPoly) -> FloatPoly {
        let mut map: BTreeMap<Exponents, f64> = self.terms.iter().cloned().collect();
        for (e, c) in &other.terms {
            *map.entry(e.clone()).or_insert(0.0) += s * c;
        }
        FloatPoly {
            nvars: self.nvars,
            terms: map.into_iter().collect(),
        }
    }

    pub fn mul(&self, other: &FloatPoly) -> FloatPoly {
        let mut map: BTreeMap<Exponents, f64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *map.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        FloatPoly {
            nvars: self.nvars,
            terms: map.into_iter().collect(),
        }
    }

    pub fn pow(&self, k: u32) -> FloatPoly {
        let mut acc = FloatPoly::constant(self.nvars, 1.0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}
