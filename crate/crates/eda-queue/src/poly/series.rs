use std::fmt;

use crate::rational::Rational;

use super::{BiPoly, Poly};

/// Power series in q, truncated at a fixed order, with bivariate (z, y)
/// polynomial coefficients. The order is fixed at construction and every
/// operation truncates back to it; mixing orders is a usage bug and panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    terms: Vec<BiPoly>,
}

impl QSeries {
    /// Builds a series of the given order from leading terms; missing terms
    /// are zero, excess terms are truncated away.
    pub fn from_terms(order: usize, mut terms: Vec<BiPoly>) -> Self {
        terms.truncate(order + 1);
        terms.resize(order + 1, BiPoly::zero());
        QSeries { terms }
    }

    pub fn zero(order: usize) -> Self {
        QSeries::from_terms(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        QSeries::from_terms(order, vec![BiPoly::one()])
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, k: usize) -> &BiPoly {
        &self.terms[k]
    }

    pub fn terms(&self) -> &[BiPoly] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(BiPoly::is_zero)
    }

    fn assert_same_order(&self, rhs: &Self, op: &str) {
        assert_eq!(
            self.order(),
            rhs.order(),
            "q-series order mismatch in {op}: {} vs {}",
            self.order(),
            rhs.order()
        );
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_same_order(rhs, "add");
        QSeries {
            terms: self
                .terms
                .iter()
                .zip(&rhs.terms)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.assert_same_order(rhs, "sub");
        QSeries {
            terms: self
                .terms
                .iter()
                .zip(&rhs.terms)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Truncated convolution product.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_same_order(rhs, "mul");
        let order = self.order();
        let mut out = vec![BiPoly::zero(); order + 1];
        for (i, a) in self.terms.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.terms.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        QSeries { terms: out }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries {
            terms: self.terms.iter().map(|t| t.scale(c)).collect(),
        }
    }

    pub fn mul_bipoly(&self, p: &BiPoly) -> Self {
        QSeries {
            terms: self.terms.iter().map(|t| t * p).collect(),
        }
    }

    /// Multiplies by q^k, dropping the terms pushed past the order.
    pub fn shift_q(&self, k: usize) -> Self {
        let order = self.order();
        let mut terms = vec![BiPoly::zero(); order + 1];
        for (i, t) in self.terms.iter().enumerate() {
            if i + k <= order {
                terms[i + k] = t.clone();
            }
        }
        QSeries { terms }
    }

    /// Substitutes y := q*y + (1 - q)*z, the map that pushes every late
    /// customer one slot forward, truncating at the series order.
    pub fn subst_y_convex(&self) -> Self {
        let order = self.order();
        let max_deg_y = self
            .terms
            .iter()
            .filter_map(BiPoly::deg_y)
            .max()
            .unwrap_or(0);
        // powers of z + q*(y - z)
        let step = QSeries::from_terms(
            order,
            vec![BiPoly::z(), BiPoly::y() - BiPoly::z()],
        );
        let mut step_pows = Vec::with_capacity(max_deg_y + 1);
        step_pows.push(QSeries::one(order));
        for j in 1..=max_deg_y {
            step_pows.push(step_pows[j - 1].mul(&step));
        }
        let mut acc = QSeries::zero(order);
        for (k, t) in self.terms.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            let mut sub = QSeries::zero(order);
            let slots = t.deg_y().unwrap_or(0) + 1;
            for (j, step_pow) in step_pows.iter().enumerate().take(slots) {
                let profile = t.z_profile(j);
                if profile.is_zero() {
                    continue;
                }
                sub = sub.add(&step_pow.mul_bipoly(&BiPoly::from_z_poly(&profile)));
            }
            acc = acc.add(&sub.shift_q(k));
        }
        acc
    }

    /// Strict division by z, term by term.
    ///
    /// Panics when some term has a nonzero z = 0 slice; callers use this on
    /// expressions that provably vanish at z = 0, so a failure signals an
    /// implementation bug.
    pub fn div_z_exact(&self) -> Self {
        QSeries {
            terms: self
                .terms
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    t.div_z_exact().unwrap_or_else(|| {
                        panic!("q-order {k} term is not divisible by z: {t}")
                    })
                })
                .collect(),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, z: &Rational, y: &Rational, q: &Rational) -> Rational {
        self.terms
            .iter()
            .rev()
            .fold(Rational::from_integer(0.into()), |acc, t| {
                acc * q + t.eval(z, y)
            })
    }

    pub fn eval_f64(&self, z: f64, y: f64, q: f64) -> f64 {
        self.terms
            .iter()
            .rev()
            .fold(0.0, |acc, t| acc * q + t.eval_f64(z, y))
    }

    /// Collapses y := 1, leaving one z-polynomial per q-order.
    pub fn at_y1(&self) -> Vec<Poly> {
        let one = Rational::from_integer(1.into());
        self.terms.iter().map(|t| t.at_y(&one)).collect()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, t) in self.terms.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "q^{k}*[{t}]")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn truncated_product_drops_high_orders() {
        // (1 + q)(1 - q) at order 1 is exactly 1
        let plus = QSeries::from_terms(1, vec![BiPoly::one(), BiPoly::one()]);
        let minus = QSeries::from_terms(1, vec![BiPoly::one(), -BiPoly::one()]);
        assert_eq!(plus.mul(&minus), QSeries::one(1));
    }

    #[test]
    fn subst_named_cases() {
        // f = y at order 1 becomes z + q*(y - z)
        let f = QSeries::from_terms(1, vec![BiPoly::y()]);
        let expect = QSeries::from_terms(1, vec![BiPoly::z(), BiPoly::y() - BiPoly::z()]);
        assert_eq!(f.subst_y_convex(), expect);
        // constants pass through
        let c = QSeries::one(2);
        assert_eq!(c.subst_y_convex(), c);
        // f = y^2 at order 1 becomes z^2 + 2 z (y - z) q
        let f2 = QSeries::from_terms(1, vec![&BiPoly::y() * &BiPoly::y()]);
        let expect2 = QSeries::from_terms(
            1,
            vec![
                &BiPoly::z() * &BiPoly::z(),
                (&BiPoly::z() * &(BiPoly::y() - BiPoly::z())).scale(&rat_int(2)),
            ],
        );
        assert_eq!(f2.subst_y_convex(), expect2);
    }

    #[test]
    #[should_panic(expected = "order mismatch")]
    fn order_mismatch_panics() {
        let a = QSeries::one(1);
        let b = QSeries::one(2);
        let _ = a.add(&b);
    }

    #[test]
    #[should_panic(expected = "not divisible by z")]
    fn inexact_division_panics() {
        let s = QSeries::one(1);
        let _ = s.div_z_exact();
    }

    #[test]
    fn eval_collapses_series() {
        // 1 + q*y at (z, y, q) = (0, 2, 1/2) is 2
        let s = QSeries::from_terms(1, vec![BiPoly::one(), BiPoly::y()]);
        assert_eq!(s.eval(&rat_int(0), &rat_int(2), &rat(1, 2)), rat_int(2));
        assert!((s.eval_f64(0.0, 2.0, 0.5) - 2.0).abs() < 1e-15);
    }
}
