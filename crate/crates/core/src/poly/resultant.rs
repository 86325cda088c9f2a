//! Resultants via fraction-free (Bareiss) elimination on the Sylvester matrix.

use num_bigint::BigInt;
use num_traits::Zero;

use super::IntPolynomial;
use crate::error::{Error, Result};

/// Which variable of a bivariate polynomial a resultant eliminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    X,
    Y,
}

/// A polynomial in `X` whose coefficients are polynomials in `Y`:
/// `sum_i c_i(Y) X^i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivariatePolynomial {
    coeffs: Vec<IntPolynomial>,
}

impl BivariatePolynomial {
    pub fn new(mut coeffs: Vec<IntPolynomial>) -> Self {
        while coeffs.last().is_some_and(IntPolynomial::is_zero) {
            coeffs.pop();
        }
        BivariatePolynomial { coeffs }
    }

    /// `f(X)` with constant coefficients in `Y`.
    pub fn from_x(f: &IntPolynomial) -> Self {
        BivariatePolynomial::new(f.coeffs().iter().map(|c| IntPolynomial::constant(c.clone())).collect())
    }

    /// `f(Y)`, constant in `X`.
    pub fn from_y(f: &IntPolynomial) -> Self {
        BivariatePolynomial::new(vec![f.clone()])
    }

    /// Builds from `(i, j, c)` terms `c X^i Y^j`.
    pub fn from_terms(terms: &[(usize, usize, i64)]) -> Self {
        let nx = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        let mut rows: Vec<Vec<BigInt>> = vec![Vec::new(); nx];
        for &(i, j, c) in terms {
            if rows[i].len() <= j {
                rows[i].resize(j + 1, BigInt::zero());
            }
            rows[i][j] += c;
        }
        BivariatePolynomial::new(rows.into_iter().map(IntPolynomial::new).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[IntPolynomial] {
        &self.coeffs
    }

    /// Exchanges the roles of `X` and `Y`.
    pub fn transpose(&self) -> Self {
        let ny = self.coeffs.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
        BivariatePolynomial::new(
            (0..ny)
                .map(|j| IntPolynomial::new(self.coeffs.iter().map(|c| c.coeff(j)).collect()))
                .collect(),
        )
    }
}

/// Resultant of `f` and `g` with respect to `eliminate`, as a polynomial in
/// the other variable. Uses the Sylvester matrix with the rows of `f` first.
pub fn resultant(
    f: &BivariatePolynomial,
    g: &BivariatePolynomial,
    eliminate: Variable,
) -> Result<IntPolynomial> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (f, g) = match eliminate {
        Variable::X => (f.clone(), g.clone()),
        Variable::Y => (f.transpose(), g.transpose()),
    };
    Ok(bareiss_det(sylvester(&f.coeffs, &g.coeffs)))
}

/// Resultant of two univariate polynomials.
pub fn resultant_univariate(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    let r = resultant(&BivariatePolynomial::from_x(f), &BivariatePolynomial::from_x(g), Variable::X)?;
    Ok(r.coeff(0))
}

fn sylvester(f: &[IntPolynomial], g: &[IntPolynomial]) -> Vec<Vec<IntPolynomial>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (src, count) in [(f, n), (g, m)] {
        for i in 0..count {
            let mut row = vec![IntPolynomial::zero(); size];
            for (k, c) in src.iter().rev().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Determinant over `Z[Y]` by fraction-free elimination; every division is exact.
fn bareiss_det(mut a: Vec<Vec<IntPolynomial>>) -> IntPolynomial {
    let n = a.len();
    if n == 0 {
        return IntPolynomial::one();
    }
    let mut negate = false;
    let mut prev = IntPolynomial::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return IntPolynomial::zero();
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = IntPolynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}
