use nalgebra::DMatrix;
use num::{BigRational, One, Zero};

use super::simplex::SimplexRadialMap;
use crate::error::{Error, Result};
use crate::form::{rat_to_f64, FloatPoly, Polynomial};

/// How the components of a [`LipschitzMap`] are represented.
#[derive(Debug, Clone)]
pub enum MapKind {
    /// Polynomial components; the only kind supported on the exact path.
    Polynomial(PolynomialComponents),
    /// The radial stretch of the standard simplex onto its circumscribed
    /// ball.
    SimplexRadial(SimplexRadialMap),
}

#[derive(Debug, Clone)]
pub struct PolynomialComponents {
    exact: Vec<Polynomial>,
    float: Vec<FloatPoly>,
    /// `partials[j][i] = ∂φ_j/∂x_i`
    partials: Vec<Vec<FloatPoly>>,
}

impl PolynomialComponents {
    fn new(exact: Vec<Polynomial>) -> Self {
        let n = exact.len();
        let float = exact.iter().map(Polynomial::to_float).collect();
        let partials = exact
            .iter()
            .map(|p| (0..n).map(|i| p.partial(i).to_float()).collect())
            .collect();
        PolynomialComponents {
            exact,
            float,
            partials,
        }
    }
}

/// A map `ℝⁿ → ℝⁿ` together with a certified Lipschitz constant `C`,
/// `|φ(x) − φ(x′)| ≤ C |x − x′|`, and optionally its inverse.
#[derive(Debug, Clone)]
pub struct LipschitzMap {
    n: usize,
    kind: MapKind,
    lipschitz_constant: f64,
    inverse: Option<Box<LipschitzMap>>,
}

fn check_constant(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("Lipschitz constant must be positive, got {c}")))
    }
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Solves `A X = I` exactly; `None` when singular.
fn rational_inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot = m[col].clone();
                for (a, b) in m[r].iter_mut().zip(&pivot) {
                    *a -= &f * b;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn linear_components(matrix: &[Vec<BigRational>], shift: &[BigRational]) -> Vec<Polynomial> {
    let n = matrix.len();
    matrix
        .iter()
        .zip(shift)
        .map(|(row, b)| {
            let mut p = Polynomial::constant(n, b.clone());
            for (i, a) in row.iter().enumerate() {
                p += Polynomial::var(n, i).scale(a);
            }
            p
        })
        .collect()
}

fn float_matrix(matrix: &[Vec<BigRational>]) -> DMatrix<f64> {
    let n = matrix.len();
    DMatrix::from_fn(n, n, |i, j| rat_to_f64(&matrix[i][j]))
}

/// Relative slack added to numerically computed spectral norms so that the
/// certified constant dominates the true one.
const NORM_SLACK: f64 = 1e-12;

impl LipschitzMap {
    /// A polynomial map with a caller-supplied constant `C`. The constant is
    /// not verified here; see [`LipschitzMap::sampled_differential_norm`].
    pub fn polynomial(components: Vec<Polynomial>, lipschitz_constant: f64) -> Result<Self> {
        let n = components.len();
        if n == 0 || components.iter().any(|p| p.nvars() != n) {
            return Err(Error::Dimension(
                "a map on R^n needs n components in n variables".into(),
            ));
        }
        check_constant(lipschitz_constant)?;
        Ok(LipschitzMap {
            n,
            kind: MapKind::Polynomial(PolynomialComponents::new(components)),
            lipschitz_constant,
            inverse: None,
        })
    }

    pub fn identity(n: usize) -> Self {
        let comps = (0..n).map(|i| Polynomial::var(n, i)).collect();
        let mut m = Self::polynomial(comps, 1.0).expect("identity is well formed");
        m.inverse = Some(Box::new(m.clone()));
        m
    }

    /// `x ↦ s x` with inverse `y ↦ y/s`.
    pub fn scaling(n: usize, s: BigRational) -> Result<Self> {
        let diag: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { s.clone() } else { BigRational::zero() }).collect())
            .collect();
        Self::affine(diag, vec![BigRational::zero(); n])
    }

    /// `x ↦ A x + b` with exact inverse. Both constants are the spectral
    /// norms of `A` and `A⁻¹`.
    pub fn affine(matrix: Vec<Vec<BigRational>>, shift: Vec<BigRational>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) || shift.len() != n {
            return Err(Error::Dimension("affine map needs a square matrix and matching shift".into()));
        }
        let inv = rational_inverse(&matrix)
            .ok_or_else(|| Error::Parameter("affine map is singular".into()))?;
        // A⁻¹(y − b) = A⁻¹y − A⁻¹b
        let inv_shift: Vec<BigRational> = inv
            .iter()
            .map(|row| -row.iter().zip(&shift).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
            .collect();
        let c = spectral_norm(&float_matrix(&matrix)) * (1.0 + NORM_SLACK);
        let c_inv = spectral_norm(&float_matrix(&inv)) * (1.0 + NORM_SLACK);
        let forward = Self::polynomial(linear_components(&matrix, &shift), c)?;
        let mut inverse = Self::polynomial(linear_components(&inv, &inv_shift), c_inv)?;
        inverse.inverse = Some(Box::new(forward.clone()));
        Ok(LipschitzMap {
            inverse: Some(Box::new(inverse)),
            ..forward
        })
    }

    /// The shear `x_i ↦ x_i + s x_j` (zero-based `i ≠ j`).
    pub fn shear(n: usize, i: usize, j: usize, s: BigRational) -> Result<Self> {
        if i >= n || j >= n || i == j {
            return Err(Error::Parameter(format!("bad shear axes ({i}, {j}) in R^{n}")));
        }
        let m: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if r == c {
                            BigRational::one()
                        } else if r == i && c == j {
                            s.clone()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::affine(m, vec![BigRational::zero(); n])
    }

    pub(crate) fn from_simplex_radial(radial: SimplexRadialMap, c: f64) -> Self {
        LipschitzMap {
            n: radial.dim(),
            kind: MapKind::SimplexRadial(radial),
            lipschitz_constant: c,
            inverse: None,
        }
    }

    /// Attaches an inverse map.
    pub fn with_inverse(mut self, inverse: LipschitzMap) -> Result<Self> {
        if inverse.n != self.n {
            return Err(Error::Dimension("inverse lives in another dimension".into()));
        }
        self.inverse = Some(Box::new(inverse));
        Ok(self)
    }

    /// Replaces the certified constant, e.g. by a larger claimed one.
    pub fn with_lipschitz_constant(mut self, c: f64) -> Result<Self> {
        check_constant(c)?;
        self.lipschitz_constant = c;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn lipschitz_constant(&self) -> f64 {
        self.lipschitz_constant
    }

    pub fn inverse(&self) -> Option<&LipschitzMap> {
        self.inverse.as_deref()
    }

    pub fn polynomial_components(&self) -> Option<&[Polynomial]> {
        match &self.kind {
            MapKind::Polynomial(p) => Some(&p.exact),
            MapKind::SimplexRadial(_) => None,
        }
    }

    pub fn is_affine(&self) -> bool {
        self.polynomial_components()
            .is_some_and(|c| c.iter().all(|p| p.total_degree().unwrap_or(0) <= 1))
    }

    /// `|det Dφ|` for affine maps.
    pub fn affine_abs_determinant(&self) -> Option<f64> {
        if !self.is_affine() {
            return None;
        }
        let zero = vec![0.0; self.n];
        Some(self.jacobian(&zero).determinant().abs())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            MapKind::Polynomial(p) => p.float.iter().map(|f| f.eval(x)).collect(),
            MapKind::SimplexRadial(r) => r.apply(x),
        }
    }

    /// `φ⁻¹(y)` when an inverse is known.
    pub fn apply_inverse(&self, y: &[f64]) -> Option<Vec<f64>> {
        match (&self.kind, self.inverse()) {
            (_, Some(inv)) => Some(inv.apply(y)),
            (MapKind::SimplexRadial(r), None) => Some(r.apply_inverse(y)),
            _ => None,
        }
    }

    /// `Dφ(x)` with entry `(j, i) = ∂φ_j/∂x_i`.
    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        match &self.kind {
            MapKind::Polynomial(p) => DMatrix::from_fn(self.n, self.n, |j, i| p.partials[j][i].eval(x)),
            MapKind::SimplexRadial(r) => r.jacobian(x),
        }
    }

    /// Operator norm of `Dφ(x)`.
    pub fn differential_norm(&self, x: &[f64]) -> f64 {
        spectral_norm(&self.jacobian(x))
    }

    /// Largest `|Dφ|` over the given points; the certificate holds on them
    /// when this does not exceed [`Self::lipschitz_constant`].
    pub fn sampled_differential_norm<'a, I>(&self, points: I) -> f64
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        points
            .into_iter()
            .map(|x| self.differential_norm(x))
            .fold(0.0, f64::max)
    }

    /// `self ∘ inner` for polynomial maps, with constant `C_self · C_inner`.
    pub fn compose(&self, inner: &LipschitzMap) -> Result<LipschitzMap> {
        let (Some(outer), Some(inner_c)) = (self.polynomial_components(), inner.polynomial_components()) else {
            return Err(Error::UnsupportedMap("composition needs polynomial maps".into()));
        };
        if self.n != inner.n {
            return Err(Error::Dimension("composing maps of different dimension".into()));
        }
        let comps = outer.iter().map(|p| p.compose(inner_c)).collect();
        let mut out = LipschitzMap::polynomial(comps, self.lipschitz_constant * inner.lipschitz_constant)?;
        if let (Some(a), Some(b)) = (self.inverse(), inner.inverse()) {
            if let Ok(inv) = b.compose(a) {
                out.inverse = Some(Box::new(inv));
            }
        }
        Ok(out)
    }

    /// Whether `self` is exactly the identity polynomial map.
    pub fn is_exact_identity(&self) -> bool {
        self.polynomial_components().is_some_and(|c| {
            c.iter()
                .enumerate()
                .all(|(i, p)| *p == Polynomial::var(self.n, i))
        })
    }

    /// Largest `|φ(φ⁻¹(y)) − y|` over sample points, `None` without an inverse.
    pub fn inverse_defect<'a, I>(&self, points: I) -> Option<f64>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let inv = self.inverse()?;
        Some(
            points
                .into_iter()
                .map(|y| {
                    let back = self.apply(&inv.apply(y));
                    back.iter()
                        .zip(y)
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0, f64::max),
        )
    }
}
