use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num::{BigRational, One, Zero};

use super::multi_index::MultiIndex;
use super::polynomial::{FloatPoly, Polynomial};
use crate::error::{Error, Result};

/// A `k`-form on `ℝⁿ` with polynomial coefficients,
/// `Σ_J f_J dx_{j1} ∧ … ∧ dx_{jk}`.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KForm {
    n: usize,
    k: usize,
    coeffs: BTreeMap<MultiIndex, Polynomial>,
}

impl KForm {
    pub fn zero(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::Degree(format!("no {k}-forms on R^{n}")));
        }
        Ok(KForm {
            n,
            k,
            coeffs: BTreeMap::new(),
        })
    }

    /// The 0-form given by a polynomial.
    pub fn scalar(f: Polynomial) -> Self {
        let n = f.nvars();
        let mut coeffs = BTreeMap::new();
        if !f.is_zero() {
            coeffs.insert(MultiIndex::empty(n), f);
        }
        KForm { n, k: 0, coeffs }
    }

    /// `dx_{j1} ∧ … ∧ dx_{jk}` from one-based indices, which may come in any
    /// order (the sign of the sorting permutation is applied). Repeated
    /// indices give the zero form.
    pub fn basis(n: usize, one_based: &[usize]) -> Result<Self> {
        if one_based.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::Dimension(format!("index outside 1..={n}")));
        }
        let k = one_based.len();
        let mut v: Vec<usize> = one_based.iter().map(|i| i - 1).collect();
        let mut out = KForm::zero(n, k)?;
        if let Some(sign) = super::multi_index::sort_with_sign(&mut v) {
            let idx = MultiIndex::new(n, v)?;
            out.coeffs
                .insert(idx, Polynomial::constant(n, BigRational::from_integer(sign.into())));
        }
        Ok(out)
    }

    /// `f dx_J`.
    pub fn monomial(idx: MultiIndex, f: Polynomial) -> Result<Self> {
        if idx.dim() != f.nvars() {
            return Err(Error::Dimension(format!(
                "coefficient has {} variables, index lives in R^{}",
                f.nvars(),
                idx.dim()
            )));
        }
        let mut out = KForm::zero(idx.dim(), idx.degree())?;
        out.add_component(idx, f)?;
        Ok(out)
    }

    pub fn from_components<I>(n: usize, k: usize, comps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Polynomial)>,
    {
        let mut out = KForm::zero(n, k)?;
        for (idx, f) in comps {
            out.add_component(idx, f)?;
        }
        Ok(out)
    }

    /// Adds `f` to the coefficient of `dx_J`.
    pub fn add_component(&mut self, idx: MultiIndex, f: Polynomial) -> Result<()> {
        if idx.dim() != self.n || f.nvars() != self.n {
            return Err(Error::Dimension(format!(
                "component does not live in R^{}",
                self.n
            )));
        }
        if idx.degree() != self.k {
            return Err(Error::Degree(format!(
                "component of degree {} added to a {}-form",
                idx.degree(),
                self.k
            )));
        }
        let entry = self
            .coeffs
            .entry(idx)
            .or_insert_with(|| Polynomial::zero(self.n));
        *entry += f;
        self.coeffs.retain(|_, p| !p.is_zero());
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Polynomial {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.n))
    }

    /// Largest total degree among the coefficients.
    pub fn coefficient_degree(&self) -> Option<u32> {
        self.coeffs.values().filter_map(Polynomial::total_degree).max()
    }

    pub fn scale(&self, c: &BigRational) -> KForm {
        KForm {
            n: self.n,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(j, f)| (j.clone(), f.scale(c)))
                .filter(|(_, f)| !f.is_zero())
                .collect(),
        }
    }

    /// Applies `g` to every coefficient polynomial.
    pub fn map_coefficients<F>(&self, g: F) -> KForm
    where
        F: Fn(&Polynomial) -> Polynomial,
    {
        KForm {
            n: self.n,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(j, f)| (j.clone(), g(f)))
                .filter(|(_, f)| !f.is_zero())
                .collect(),
        }
    }

    fn check_same_space(&self, other: &KForm) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "forms live in R^{} and R^{}",
                self.n, other.n
            )));
        }
        if self.k != other.k {
            return Err(Error::Degree(format!(
                "cannot add a {}-form and a {}-form",
                self.k, other.k
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &KForm) -> Result<KForm> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (j, f) in &other.coeffs {
            let entry = out
                .coeffs
                .entry(j.clone())
                .or_insert_with(|| Polynomial::zero(self.n));
            *entry += f.clone();
        }
        out.coeffs.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    pub fn try_sub(&self, other: &KForm) -> Result<KForm> {
        self.try_add(&-other.clone())
    }

    /// Exterior product. Bilinear, associative and graded-anticommutative.
    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "wedge of forms on R^{} and R^{}",
                self.n, other.n
            )));
        }
        let k = self.k + other.k;
        if k > self.n {
            return Err(Error::Degree(format!(
                "wedge degree {k} exceeds dimension {}",
                self.n
            )));
        }
        let mut out = KForm::zero(self.n, k)?;
        for (ja, fa) in &self.coeffs {
            for (jb, fb) in &other.coeffs {
                if let Some((j, sign)) = ja.concat_sorted(jb) {
                    let mut prod = fa * fb;
                    if sign < 0 {
                        prod = -prod;
                    }
                    out.add_component(j, prod)?;
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative `d`, computed exactly on the coefficients.
    pub fn exterior_derivative(&self) -> Result<KForm> {
        if self.k >= self.n {
            return Err(Error::Degree(format!(
                "d of a {}-form on R^{} would have degree above the dimension",
                self.k, self.n
            )));
        }
        let mut out = KForm::zero(self.n, self.k + 1)?;
        for (j, f) in &self.coeffs {
            for i in 0..self.n {
                let Some((ji, sign)) = j.insert_front(i) else {
                    continue;
                };
                let mut df = f.partial(i);
                if df.is_zero() {
                    continue;
                }
                if sign < 0 {
                    df = -df;
                }
                out.add_component(ji, df)?;
            }
        }
        Ok(out)
    }

    /// `d` with `dω = 0` understood for top-degree forms.
    pub fn d_or_zero(&self) -> Option<KForm> {
        self.exterior_derivative().ok()
    }

    pub fn is_closed(&self) -> bool {
        match self.exterior_derivative() {
            Ok(d) => d.is_zero(),
            Err(_) => true,
        }
    }

    /// Contraction with a polynomial vector field `X`:
    /// `ι_X(dx_{j1} ∧ … ∧ dx_{jk}) = Σᵢ (−1)^{i−1} X_{jᵢ} dx_{j1} ∧ … ĵᵢ … ∧ dx_{jk}`.
    pub fn interior_product(&self, field: &[Polynomial]) -> Result<KForm> {
        if field.len() != self.n || field.iter().any(|p| p.nvars() != self.n) {
            return Err(Error::Dimension(format!(
                "vector field must have {} polynomial components in {} variables",
                self.n, self.n
            )));
        }
        if self.k == 0 {
            return Err(Error::Degree("interior product of a 0-form".into()));
        }
        let mut out = KForm::zero(self.n, self.k - 1)?;
        for (j, f) in &self.coeffs {
            for (pos, &ji) in j.indices().iter().enumerate() {
                let mut term = &field[ji] * f;
                if pos % 2 == 1 {
                    term = -term;
                }
                out.add_component(j.without_position(pos), term)?;
            }
        }
        Ok(out)
    }

    /// Contraction with the radial field `Σ xᵢ ∂/∂xᵢ`.
    pub fn interior_radial(&self) -> Result<KForm> {
        if self.k == 0 {
            return Err(Error::Degree("interior product of a 0-form".into()));
        }
        let mut out = KForm::zero(self.n, self.k - 1)?;
        for (j, f) in &self.coeffs {
            for (pos, &ji) in j.indices().iter().enumerate() {
                let mut term = f.mul_var(ji);
                if pos % 2 == 1 {
                    term = -term;
                }
                out.add_component(j.without_position(pos), term)?;
            }
        }
        Ok(out)
    }

    /// `|w|ₓ² = Σ_J f_J(x)²` as an exact polynomial.
    pub fn pointwise_norm_sq(&self) -> Polynomial {
        self.coeffs
            .values()
            .fold(Polynomial::zero(self.n), |acc, f| acc + f * f)
    }

    /// Pointwise inner product `⟨a, b⟩ₓ` as a polynomial.
    pub fn pointwise_inner(&self, other: &KForm) -> Result<Polynomial> {
        self.check_same_space(other)?;
        let mut acc = Polynomial::zero(self.n);
        for (j, f) in &self.coeffs {
            if let Some(g) = other.coeffs.get(j) {
                acc += f * g;
            }
        }
        Ok(acc)
    }

    /// Evaluates the form at `x` on the tangent vectors `vectors`, exactly.
    pub fn evaluate(&self, x: &[BigRational], vectors: &[Vec<BigRational>]) -> Result<BigRational> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.n
            )));
        }
        if vectors.len() != self.k || vectors.iter().any(|v| v.len() != self.n) {
            return Err(Error::Dimension(format!(
                "expected {} vectors of length {}",
                self.k, self.n
            )));
        }
        let mut acc = BigRational::zero();
        for (j, f) in &self.coeffs {
            // dx_J(v_1, …, v_k) = det[v_m[j_l]]
            let mut m: Vec<Vec<BigRational>> = j
                .indices()
                .iter()
                .map(|&row| vectors.iter().map(|v| v[row].clone()).collect())
                .collect();
            acc += f.eval(x) * rational_det(&mut m);
        }
        Ok(acc)
    }

    /// Coefficient vector in the order of [`MultiIndex::all`].
    pub fn dense_coefficients(&self) -> Vec<Polynomial> {
        MultiIndex::all(self.n, self.k)
            .iter()
            .map(|j| self.coefficient(j))
            .collect()
    }

    pub fn to_float(&self) -> FloatForm {
        FloatForm {
            n: self.n,
            k: self.k,
            components: MultiIndex::all(self.n, self.k)
                .into_iter()
                .map(|j| {
                    let f = self.coefficient(&j).to_float();
                    (j, f)
                })
                .collect(),
        }
    }
}

/// Determinant by fraction-exact Gaussian elimination. Consumes the matrix.
fn rational_det(m: &mut [Vec<BigRational>]) -> BigRational {
    let size = m.len();
    let mut det = BigRational::one();
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= p.clone();
        for r in col + 1..size {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            let (top, rest) = m.split_at_mut(r);
            for (a, b) in rest[0][col..size].iter_mut().zip(&top[col][col..size]) {
                *a -= &factor * b;
            }
        }
    }
    det
}

impl Add for KForm {
    type Output = KForm;
    /// Panics on a dimension or degree mismatch; use [`KForm::try_add`] to
    /// handle that case.
    fn add(self, rhs: KForm) -> KForm {
        self.try_add(&rhs).expect("adding forms of different type")
    }
}

impl Sub for KForm {
    type Output = KForm;
    fn sub(self, rhs: KForm) -> KForm {
        self.try_sub(&rhs).expect("subtracting forms of different type")
    }
}

impl Neg for KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.map_coefficients(|f| -f.clone())
    }
}

/// A form with `f64` coefficients laid out densely in [`MultiIndex::all`]
/// order, for pointwise evaluation in quadrature loops.
#[derive(Debug, Clone)]
pub struct FloatForm {
    n: usize,
    k: usize,
    components: Vec<(MultiIndex, FloatPoly)>,
}

impl FloatForm {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn components(&self) -> &[(MultiIndex, FloatPoly)] {
        &self.components
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|(_, f)| f.eval(x)).collect()
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, (_, f)) in out.iter_mut().zip(&self.components) {
            *o = f.eval(x);
        }
    }

    pub fn norm_sq(&self, x: &[f64]) -> f64 {
        self.components
            .iter()
            .map(|(_, f)| {
                let v = f.eval(x);
                v * v
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::polynomial::rat;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn one_form(n: usize, comps: Vec<Polynomial>) -> KForm {
        KForm::from_components(
            n,
            1,
            comps
                .into_iter()
                .enumerate()
                .map(|(i, f)| (MultiIndex::new(n, vec![i]).unwrap(), f)),
        )
        .unwrap()
    }

    #[test]
    fn basis_wedge_and_antisymmetry() {
        let dx1 = KForm::basis(2, &[1]).unwrap();
        let dx2 = KForm::basis(2, &[2]).unwrap();
        assert_eq!(dx1.wedge(&dx2).unwrap(), KForm::basis(2, &[1, 2]).unwrap());
        assert!(dx1.wedge(&dx1).unwrap().is_zero());
        assert_eq!(
            dx2.wedge(&dx1).unwrap(),
            -KForm::basis(2, &[1, 2]).unwrap()
        );
        assert_eq!(KForm::basis(3, &[3, 1]).unwrap(), -KForm::basis(3, &[1, 3]).unwrap());
    }

    #[test]
    fn wedge_errors() {
        let a = KForm::basis(2, &[1]).unwrap();
        let b = KForm::basis(3, &[1]).unwrap();
        assert!(matches!(a.wedge(&b), Err(Error::Dimension(_))));
        let top = KForm::basis(2, &[1, 2]).unwrap();
        assert!(matches!(top.wedge(&a), Err(Error::Degree(_))));
    }

    #[test]
    fn derivative_examples() {
        // d(x1) = dx1
        assert_eq!(
            KForm::scalar(x(2, 0)).exterior_derivative().unwrap(),
            KForm::basis(2, &[1]).unwrap()
        );
        // d(x1 dx2) = dx1 ∧ dx2
        let w = one_form(2, vec![Polynomial::zero(2), x(2, 0)]);
        assert_eq!(w.exterior_derivative().unwrap(), KForm::basis(2, &[1, 2]).unwrap());
        // d(x1² dx2 − x1 x2 dx1) = 3 x1 dx1∧dx2
        let w = one_form(2, vec![-(&x(2, 0) * &x(2, 1)), x(2, 0).pow(2)]);
        let expect = KForm::monomial(
            MultiIndex::from_one_based(2, &[1, 2]).unwrap(),
            x(2, 0).scale(&rat(3, 1)),
        )
        .unwrap();
        assert_eq!(w.exterior_derivative().unwrap(), expect);
        // top degree
        assert!(matches!(
            KForm::basis(2, &[1, 2]).unwrap().exterior_derivative(),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn interior_radial_examples() {
        assert_eq!(
            KForm::basis(2, &[1]).unwrap().interior_radial().unwrap(),
            KForm::scalar(x(2, 0))
        );
        let i2 = KForm::basis(2, &[1, 2]).unwrap().interior_radial().unwrap();
        assert_eq!(i2, one_form(2, vec![-x(2, 1), x(2, 0)]));
        assert!(i2.interior_radial().unwrap().is_zero());
        assert!(matches!(
            KForm::scalar(x(2, 0)).interior_radial(),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(KForm::basis(2, &[1]).unwrap().pointwise_norm_sq(), Polynomial::one(2));
        let w = one_form(2, vec![-x(2, 1), x(2, 0)]);
        assert_eq!(w.pointwise_norm_sq(), &x(2, 0).pow(2) + &x(2, 1).pow(2));
        assert!(KForm::zero(3, 2).unwrap().pointwise_norm_sq().is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let e1 = vec![rat(1, 1), rat(0, 1)];
        let e2 = vec![rat(0, 1), rat(1, 1)];
        let pt = vec![rat(2, 1), rat(0, 1)];
        let dx1 = KForm::basis(2, &[1]).unwrap();
        assert_eq!(dx1.evaluate(&pt, std::slice::from_ref(&e1)).unwrap(), rat(1, 1));
        let vol = KForm::basis(2, &[1, 2]).unwrap();
        assert_eq!(vol.evaluate(&pt, &[e1.clone(), e2.clone()]).unwrap(), rat(1, 1));
        assert_eq!(vol.evaluate(&pt, &[e2.clone(), e1.clone()]).unwrap(), rat(-1, 1));
        let w = one_form(2, vec![Polynomial::zero(2), x(2, 0)]);
        assert_eq!(w.evaluate(&pt, std::slice::from_ref(&e2)).unwrap(), rat(2, 1));
        assert!(matches!(
            vol.evaluate(&pt, &[e1]),
            Err(Error::Dimension(_))
        ));
    }
}
