use std::fmt;
use std::ops::Neg;

use num_traits::{ToPrimitive, Zero};

use crate::rational::{rat_int, Rational};

use super::forward_binop;

/// Dense univariate polynomial with exact rational coefficients.
///
/// The variable is anonymous: the same type serves polynomials in z and,
/// for the late-customer marginal, polynomials in y. `coeffs[i]` multiplies
/// the i-th power; trailing zeros are trimmed so the zero polynomial is the
/// empty list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::from_integer(1.into()))
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Poly::new(vec![rat_int(0), rat_int(1)])
    }

    /// c times the k-th power of the variable.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Floating evaluation; coefficients are rounded to the nearest double
    /// before the Horner pass.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// (f(x) - f(0)) / x, always a polynomial.
    pub fn deflate(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(self.coeffs[1..].to_vec())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients rendered as fraction strings, constant term first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl std::ops::Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl std::ops::Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl std::ops::Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

forward_binop!(Add, add, Poly);
forward_binop!(Sub, sub, Poly);
forward_binop!(Mul, mul, Poly);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn add_cancels_to_canonical_zero() {
        let a = p(&[1, 1]); // 1 + x
        let b = p(&[0, -1]); // -x
        let sum = &a + &b;
        assert_eq!(sum, Poly::one());
        assert!((&a + &(-&a)).is_zero());
        assert_eq!((&a + &(-&a)).coeffs().len(), 0);
    }

    #[test]
    fn add_identity_and_exact_halves() {
        let a = p(&[3, 0, 7]);
        assert_eq!(&a + &Poly::zero(), a);
        let half_sq = Poly::monomial(rat(1, 2), 2);
        assert_eq!(&half_sq + &half_sq, Poly::monomial(rat_int(1), 2));
    }

    #[test]
    fn mul_difference_of_squares() {
        let zm1 = p(&[-1, 1]);
        let zp1 = p(&[1, 1]);
        assert_eq!(&zm1 * &zp1, p(&[-1, 0, 1]));
    }

    #[test]
    fn deflate_named_cases() {
        assert_eq!(p(&[3, 2, 1]).deflate(), p(&[2, 1]));
        assert_eq!(p(&[5]).deflate(), Poly::zero());
        assert_eq!(p(&[-1, 0, 1]).deflate(), p(&[0, 1]));
    }

    #[test]
    fn eval_named_cases() {
        // 1 + rho (z - 1) at z = 1 is 1 for any rho
        let rho = rat(3, 7);
        let f = Poly::new(vec![rat_int(1) - rho.clone(), rho]);
        assert_eq!(f.eval(&rat_int(1)), rat_int(1));
        assert_eq!(p(&[-1, 0, 1]).eval(&rat_int(0)), rat_int(-1));
        assert_eq!(Poly::monomial(rat(1, 2), 1).eval(&rat(1, 3)), rat(1, 6));
    }

    #[test]
    fn derivative_drops_degree() {
        assert_eq!(p(&[5, 3, 2]).derivative(), p(&[3, 4]));
        assert_eq!(Poly::one().derivative(), Poly::zero());
    }
}
