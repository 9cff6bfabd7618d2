//! Map files: one `key: value` per line, `#` comments.
//!
//! ```text
//! dim: 2
//! lipschitz: 2
//! component: 2 x1
//! component: 2 x2 + x1
//! # optional; affine maps get their inverse computed exactly
//! inverse-lipschitz: 1
//! inverse: 1/2 x1
//! inverse: 1/2 x2 - 1/4 x1
//! ```

use num::{BigRational, Zero};

use super::map::LipschitzMap;
use crate::error::{Error, Result};
use crate::form::{parse_polynomial, Polynomial};

fn parse_constant(line: usize, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|c| c.is_finite() && *c > 0.0)
        .ok_or_else(|| Error::parse(line, format!("expected a positive constant, got {v:?}")))
}

/// Parses a map file. The result carries its inverse: the `inverse` lines
/// when present, otherwise the exact inverse of an affine map.
pub fn parse_map(text: &str) -> Result<LipschitzMap> {
    let mut dim = None;
    let mut lipschitz = None;
    let mut inverse_lipschitz = None;
    let mut components = Vec::new();
    let mut inverse = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| Error::parse(line, "expected `key: value`"))?;
        let value = value.trim();
        match key.trim() {
            "dim" => {
                dim = Some(
                    value
                        .parse::<usize>()
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| Error::parse(line, format!("bad dimension {value:?}")))?,
                )
            }
            "lipschitz" => lipschitz = Some(parse_constant(line, value)?),
            "inverse-lipschitz" => inverse_lipschitz = Some(parse_constant(line, value)?),
            "component" => components.push((line, value.to_string())),
            "inverse" => inverse.push((line, value.to_string())),
            other => return Err(Error::parse(line, format!("unknown key {other:?}"))),
        }
    }
    let n = dim.unwrap_or(components.len());
    if components.len() != n {
        return Err(Error::parse(0, format!("{} components for dim {n}", components.len())));
    }
    let polys = |lines: &[(usize, String)]| -> Result<Vec<Polynomial>> {
        lines
            .iter()
            .map(|(line, s)| parse_polynomial(s, n).map_err(|e| Error::parse(*line, e.to_string())))
            .collect()
    };
    let forward = polys(&components)?;
    let map = if inverse.is_empty() {
        let map = affine_from_components(&forward)?
            .ok_or_else(|| Error::parse(0, "non-affine maps need `inverse` lines"))?;
        match lipschitz {
            Some(c) if c < map.lipschitz_constant() * (1.0 - 1e-9) => {
                return Err(Error::Parameter(format!(
                    "claimed constant {c} is below the spectral norm {}",
                    map.lipschitz_constant()
                )))
            }
            Some(c) => map.with_lipschitz_constant(c)?,
            None => map,
        }
    } else {
        if inverse.len() != n {
            return Err(Error::parse(0, format!("{} inverse components for dim {n}", inverse.len())));
        }
        let c = lipschitz.ok_or_else(|| Error::parse(0, "missing `lipschitz`"))?;
        let ci = inverse_lipschitz.ok_or_else(|| Error::parse(0, "missing `inverse-lipschitz`"))?;
        let back = LipschitzMap::polynomial(polys(&inverse)?, ci)?;
        LipschitzMap::polynomial(forward, c)?.with_inverse(back)?
    };
    Ok(map)
}

/// `Some` exact affine map (with inverse) when every component has degree
/// at most one and the linear part is invertible.
fn affine_from_components(components: &[Polynomial]) -> Result<Option<LipschitzMap>> {
    let n = components.len();
    if components.iter().any(|p| p.total_degree().unwrap_or(0) > 1) {
        return Ok(None);
    }
    let mut matrix = vec![vec![BigRational::zero(); n]; n];
    let mut shift = vec![BigRational::zero(); n];
    for (j, p) in components.iter().enumerate() {
        for (e, c) in p.terms() {
            match e.iter().position(|&v| v == 1) {
                Some(i) => matrix[j][i] = c.clone(),
                None => shift[j] = c.clone(),
            }
        }
    }
    LipschitzMap::affine(matrix, shift).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_file_gets_exact_inverse() {
        let m = parse_map("dim: 2\nlipschitz: 3\ncomponent: 2 x1\ncomponent: 2 x2 + x1\n").unwrap();
        assert_eq!(m.lipschitz_constant(), 3.0);
        let inv = m.inverse().unwrap();
        assert!(m.compose(inv).unwrap().is_exact_identity());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_map("component: x1^2\n").is_err());
        assert!(parse_map("lipschitz: 1\ncomponent: 2 x1\n").is_err());
        assert!(parse_map("dim: 2\ncomponent: x1\n").is_err());
        assert!(matches!(parse_map("speed: 4\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn polynomial_map_with_inverse_lines() {
        let text = "lipschitz: 2\ninverse-lipschitz: 1\ncomponent: x1 + x2^3\ncomponent: x2\ninverse: x1 - x2^3\ninverse: x2\n";
        let m = parse_map(text).unwrap();
        assert!(m.compose(m.inverse().unwrap()).unwrap().is_exact_identity());
    }
}
