use std::fmt;
use std::ops::Neg;

use num_traits::{ToPrimitive, Zero};

use crate::rational::{rat_int, Rational};

use super::{forward_binop, Poly};

/// Dense bivariate polynomial in (z, y) with exact rational coefficients.
///
/// `rows[i][j]` multiplies `z^i y^j`. The matrix is kept rectangular and
/// canonical: no trailing all-zero row and no trailing all-zero column, so
/// the zero polynomial has no rows at all.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    rows: Vec<Vec<Rational>>,
}

impl BiPoly {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let width = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut rows: Vec<Vec<Rational>> = rows
            .into_iter()
            .map(|mut r| {
                r.resize(width, Rational::zero());
                r
            })
            .collect();
        // trim trailing zero columns, then rows
        let mut width = width;
        while width > 0 && rows.iter().all(|r| r[width - 1].is_zero()) {
            width -= 1;
        }
        for r in &mut rows {
            r.truncate(width);
        }
        while rows.last().is_some_and(|r| r.iter().all(Zero::is_zero)) {
            rows.pop();
        }
        if rows.iter().all(|r| r.is_empty()) {
            rows.clear();
        }
        BiPoly { rows }
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn one() -> Self {
        BiPoly::constant(rat_int(1))
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::from_rows(vec![vec![c]])
    }

    pub fn z() -> Self {
        BiPoly::from_rows(vec![vec![rat_int(0)], vec![rat_int(1)]])
    }

    pub fn y() -> Self {
        BiPoly::from_rows(vec![vec![rat_int(0), rat_int(1)]])
    }

    /// Embeds a univariate polynomial as a polynomial in z alone.
    pub fn from_z_poly(p: &Poly) -> Self {
        BiPoly::from_rows(p.coeffs().iter().map(|c| vec![c.clone()]).collect())
    }

    /// Embeds a univariate polynomial as a polynomial in y alone.
    pub fn from_y_poly(p: &Poly) -> Self {
        BiPoly::from_rows(vec![p.coeffs().to_vec()])
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_z(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.rows.first().map(|r| r.len() - 1)
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.rows
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|a| a * c).collect())
                .collect(),
        }
    }

    /// Exact evaluation.
    pub fn eval(&self, z: &Rational, y: &Rational) -> Rational {
        self.rows
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, row| {
                let row_val = row
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |a, c| a * y + c);
                acc * z + row_val
            })
    }

    pub fn eval_f64(&self, z: f64, y: f64) -> f64 {
        self.rows.iter().rev().fold(0.0, |acc, row| {
            let row_val = row
                .iter()
                .rev()
                .fold(0.0, |a, c| a * y + c.to_f64().unwrap_or(f64::NAN));
            acc * z + row_val
        })
    }

    /// The slice z = 0, a polynomial in y.
    pub fn at_z0(&self) -> Poly {
        Poly::new(self.rows.first().cloned().unwrap_or_default())
    }

    /// Substitutes a value for z, leaving a polynomial in y.
    pub fn at_z(&self, z: &Rational) -> Poly {
        let width = self.rows.first().map_or(0, Vec::len);
        let mut out = vec![Rational::zero(); width];
        let mut zp = Rational::from_integer(1.into());
        for row in &self.rows {
            for (j, c) in row.iter().enumerate() {
                out[j] += c * &zp;
            }
            zp *= z;
        }
        Poly::new(out)
    }

    /// Substitutes a value for y, leaving a polynomial in z.
    pub fn at_y(&self, y: &Rational) -> Poly {
        Poly::new(
            self.rows
                .iter()
                .map(|row| row.iter().rev().fold(Rational::zero(), |a, c| a * y + c))
                .collect(),
        )
    }

    /// Substitutes y := z, collapsing onto a polynomial in z.
    pub fn subst_y_eq_z(&self) -> Poly {
        let mut out = Poly::zero();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out = &out + &Poly::monomial(c.clone(), i + j);
                }
            }
        }
        out
    }

    /// The z-profile of y^j: the polynomial in z multiplying that power.
    pub fn z_profile(&self, j: usize) -> Poly {
        Poly::new(self.rows.iter().map(|r| r.get(j).cloned().unwrap_or_else(Rational::zero)).collect())
    }

    /// j-th partial derivative in y; j = 0 returns the input unchanged.
    pub fn diff_y(&self, j: usize) -> Self {
        let mut cur = self.clone();
        for _ in 0..j {
            let rows = cur
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(m, c)| c * rat_int(m as i64))
                        .collect()
                })
                .collect();
            cur = BiPoly::from_rows(rows);
        }
        cur
    }

    /// (f(z, y) - f(0, y)) / z, always a polynomial.
    pub fn deflate_z(&self) -> Self {
        if self.rows.len() <= 1 {
            return BiPoly::zero();
        }
        BiPoly::from_rows(self.rows[1..].to_vec())
    }

    /// Strict division by z; None when the z = 0 slice is nonzero.
    pub fn div_z_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(BiPoly::zero());
        }
        if self.rows[0].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(BiPoly::from_rows(self.rows[1..].to_vec()))
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = BiPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Rows of fraction strings, z-degree major.
    pub fn coeff_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect()
    }
}

impl std::ops::Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let nrows = self.rows.len().max(rhs.rows.len());
        let ncols = self
            .rows
            .first()
            .map_or(0, Vec::len)
            .max(rhs.rows.first().map_or(0, Vec::len));
        let mut out = vec![vec![Rational::zero(); ncols]; nrows];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.coeff(i, j) + rhs.coeff(i, j);
            }
        }
        BiPoly::from_rows(out)
    }
}

impl std::ops::Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl std::ops::Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let nrows = self.rows.len() + rhs.rows.len() - 1;
        let ncols = self.rows[0].len() + rhs.rows[0].len() - 1;
        let mut out = vec![vec![Rational::zero(); ncols]; nrows];
        for (i1, r1) in self.rows.iter().enumerate() {
            for (j1, c1) in r1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (i2, r2) in rhs.rows.iter().enumerate() {
                    for (j2, c2) in r2.iter().enumerate() {
                        if !c2.is_zero() {
                            out[i1 + i2][j1 + j2] += c1 * c2;
                        }
                    }
                }
            }
        }
        BiPoly::from_rows(out)
    }
}

forward_binop!(Add, add, BiPoly);
forward_binop!(Sub, sub, BiPoly);
forward_binop!(Mul, mul, BiPoly);

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| -c).collect())
                .collect(),
        }
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c})")?;
                if i == 1 {
                    write!(f, "*z")?;
                } else if i > 1 {
                    write!(f, "*z^{i}")?;
                }
                if j == 1 {
                    write!(f, "*y")?;
                } else if j > 1 {
                    write!(f, "*y^{j}")?;
                }
            }
        }
        Ok(())
    }
}
