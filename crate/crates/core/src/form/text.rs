//! Plain-text serialization of polynomials and forms.
//!
//! A polynomial is a sum of terms `coeff * x1^a1 x2^a2 …`; the `*` between
//! factors is optional, coefficients are integers, fractions (`3/2`) or
//! finite decimals (`0.25`, read exactly). A form file holds one component per
//! line:
//!
//! ```text
//! # comment
//! dim = 2
//! degree = 1
//! 1 : -1/2 * x2
//! 2 : 1/2 * x1
//! ```
//!
//! Indices are one-based and comma separated; a 0-form uses an empty index
//! list (` : x1^2`). `dim` and `degree` are optional when they can be inferred
//! from the components.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::kform::KForm;
use super::multi_index::MultiIndex;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest degree first, then lexicographically descending exponents
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (pos, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (pos, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{abs}")?;
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, " * x{}", i + 1)?,
                    _ => write!(f, " * x{}^{a}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigRational),
    Var(usize),
    Caret,
    Star,
    Plus,
    Minus,
}

fn parse_number(s: &str) -> Option<BigRational> {
    if let Some((a, b)) = s.split_once('/') {
        let num = BigInt::from_str(a).ok()?;
        let den = BigInt::from_str(b).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
        let den = num::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(num, den));
    }
    BigInt::from_str(s).ok().map(BigRational::from_integer)
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Token::Minus);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            'x' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let idx: usize = chars[start..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::parse(line, "variable needs an index, e.g. x1"))?;
                if idx == 0 {
                    return Err(Error::parse(line, "variables are numbered from x1"));
                }
                out.push(Token::Var(idx - 1));
                i = j;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.' || chars[j] == '/') {
                    j += 1;
                }
                let text: String = chars[start..j].iter().collect();
                let v = parse_number(&text)
                    .ok_or_else(|| Error::parse(line, format!("bad number '{text}'")))?;
                out.push(Token::Num(v));
                i = j;
            }
            other => return Err(Error::parse(line, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

/// Largest variable index (one-based) mentioned in a polynomial string.
fn max_variable(tokens: &[Token]) -> usize {
    tokens
        .iter()
        .filter_map(|t| match t {
            Token::Var(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

fn parse_tokens(tokens: &[Token], nvars: usize, line: usize) -> Result<Polynomial> {
    let mut out = Polynomial::zero(nvars);
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut sign = BigRational::one();
        match tokens[pos] {
            Token::Plus => pos += 1,
            Token::Minus => {
                sign = -sign;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(Error::parse(line, "expected '+' or '-' between terms")),
        }
        first = false;
        let mut coeff = sign;
        let mut exps = vec![0u32; nvars];
        let mut factors = 0;
        loop {
            match tokens.get(pos) {
                Some(Token::Num(v)) => {
                    coeff *= v.clone();
                    pos += 1;
                }
                Some(Token::Var(i)) => {
                    if *i >= nvars {
                        return Err(Error::parse(
                            line,
                            format!("variable x{} outside dimension {nvars}", i + 1),
                        ));
                    }
                    pos += 1;
                    let mut power = 1u32;
                    if let Some(Token::Caret) = tokens.get(pos) {
                        pos += 1;
                        match tokens.get(pos) {
                            Some(Token::Num(v)) if v.is_integer() && !v.is_negative() => {
                                power = v
                                    .to_integer()
                                    .try_into()
                                    .map_err(|_| Error::parse(line, "exponent too large"))?;
                                pos += 1;
                            }
                            _ => return Err(Error::parse(line, "exponent must be a nonnegative integer")),
                        }
                    }
                    exps[*i] += power;
                }
                _ => return Err(Error::parse(line, "expected a coefficient or variable")),
            }
            factors += 1;
            match tokens.get(pos) {
                Some(Token::Star) => {
                    pos += 1;
                }
                Some(Token::Num(_)) | Some(Token::Var(_)) => {}
                _ => break,
            }
        }
        debug_assert!(factors > 0);
        out.add_term(exps, coeff);
    }
    if first {
        return Err(Error::parse(line, "empty polynomial"));
    }
    Ok(out)
}

/// Parses a polynomial in `nvars` variables.
pub fn parse_polynomial(s: &str, nvars: usize) -> Result<Polynomial> {
    parse_polynomial_at(s, nvars, 1)
}

pub(crate) fn parse_polynomial_at(s: &str, nvars: usize, line: usize) -> Result<Polynomial> {
    let tokens = tokenize(s, line)?;
    parse_tokens(&tokens, nvars, line)
}

/// Smallest dimension that can host a polynomial string (largest `xi`).
pub(crate) fn polynomial_dimension_hint(s: &str, line: usize) -> Result<usize> {
    Ok(max_variable(&tokenize(s, line)?))
}

/// Parses a form file. `dim` overrides any `dim =` directive in the text.
pub fn parse_form(text: &str, dim: Option<usize>) -> Result<KForm> {
    let mut n_directive = None;
    let mut k_directive = None;
    let mut rows: Vec<(usize, Vec<usize>, &str)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some((key, value)) = body.split_once('=') {
            let key = key.trim();
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(line, format!("'{key}' needs an integer value")))?;
            match key {
                "dim" | "n" => n_directive = Some(value),
                "degree" | "k" => k_directive = Some(value),
                _ => return Err(Error::parse(line, format!("unknown directive '{key}'"))),
            }
            continue;
        }
        let (idx, poly) = body
            .split_once(':')
            .ok_or_else(|| Error::parse(line, "expected 'j1,...,jk : polynomial'"))?;
        let idx = idx.trim();
        let indices = if idx.is_empty() {
            Vec::new()
        } else {
            idx.split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::parse(line, format!("bad index list '{idx}'")))?
        };
        rows.push((line, indices, poly.trim()));
    }

    let n = match dim.or(n_directive) {
        Some(n) => n,
        None => {
            let mut n = 0;
            for (line, indices, poly) in &rows {
                n = n.max(indices.iter().copied().max().unwrap_or(0));
                n = n.max(polynomial_dimension_hint(poly, *line)?);
            }
            n
        }
    };
    if n == 0 {
        return Err(Error::parse(0, "cannot infer the dimension; add 'dim = n'"));
    }
    let k = match (k_directive, rows.first()) {
        (Some(k), _) => k,
        (None, Some((_, indices, _))) => indices.len(),
        (None, None) => return Err(Error::parse(0, "empty form needs 'degree = k'")),
    };
    let mut form = KForm::zero(n, k)?;
    for (line, indices, poly) in rows {
        if indices.len() != k {
            return Err(Error::parse(
                line,
                format!("component has {} indices in a {k}-form", indices.len()),
            ));
        }
        let mut sorted: Vec<usize> = indices.iter().map(|i| i.wrapping_sub(1)).collect();
        if indices.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::parse(line, format!("index outside 1..={n}")));
        }
        let sign = super::multi_index::sort_with_sign(&mut sorted)
            .ok_or_else(|| Error::parse(line, "repeated index"))?;
        let mut p = parse_polynomial_at(poly, n, line)?;
        if sign < 0 {
            p = -p;
        }
        form.add_component(MultiIndex::new(n, sorted)?, p)?;
    }
    Ok(form)
}

/// Writes a form in the format read by [`parse_form`].
pub fn format_form(w: &KForm) -> String {
    let mut s = format!("dim = {}\ndegree = {}\n", w.dim(), w.degree());
    for (j, f) in w.components() {
        s.push_str(&format!("{j} : {f}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::polynomial::rat;

    #[test]
    fn parses_sparse_syntax() {
        let p = parse_polynomial("3/2 * x1^2 x2 - x1*x2 + 0.25", 2).unwrap();
        assert_eq!(p.coefficient(&[2, 1]), rat(3, 2));
        assert_eq!(p.coefficient(&[1, 1]), rat(-1, 1));
        assert_eq!(p.coefficient(&[0, 0]), rat(1, 4));
        assert_eq!(parse_polynomial("-x2", 2).unwrap(), -Polynomial::var(2, 1));
        assert!(parse_polynomial("x3", 2).is_err());
        assert!(parse_polynomial("x1 x2 +", 2).is_err());
        assert!(parse_polynomial("", 2).is_err());
    }

    #[test]
    fn display_round_trips() {
        let p = parse_polynomial("3/2 * x1^2 x2 - x1*x2 + 7 - x2^3", 2).unwrap();
        assert_eq!(parse_polynomial(&p.to_string(), 2).unwrap(), p);
        assert_eq!(Polynomial::zero(3).to_string(), "0");
    }

    #[test]
    fn form_file_round_trip_and_inference() {
        let text = "# rotation generator\n1 : -1/2 * x2\n2 : 1/2 x1\n";
        let w = parse_form(text, None).unwrap();
        assert_eq!((w.dim(), w.degree()), (2, 1));
        assert_eq!(parse_form(&format_form(&w), None).unwrap(), w);
        let swapped = parse_form("dim = 3\n2,1 : x3\n", None).unwrap();
        assert_eq!(swapped, parse_form("dim = 3\n1,2 : -x3\n", None).unwrap());
        let zero = parse_form("dim = 4\ndegree = 2\n", None).unwrap();
        assert!(zero.is_zero());
        assert!(parse_form("1,1 : x1\n", None).is_err());
        assert!(parse_form("1 : x1\n1,2 : x2\n", None).is_err());
    }
}
