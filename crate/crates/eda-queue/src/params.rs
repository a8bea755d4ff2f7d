//! Model parameters: the retention probability rho of the thinning and the
//! per-slot stay probability q of a late customer, with p = 1 - q the
//! probability that a late customer arrives within the next unit slot.

use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::rational::Rational;

/// Exact parameters for the solver. Requires 0 < rho < 1 (ergodicity; the
/// solution divides by 1 - rho throughout) and 0 <= q < 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelParamsExact {
    rho: Rational,
    q: Rational,
    p: Rational,
}

impl ModelParamsExact {
    pub fn new(rho: Rational, q: Rational) -> Result<Self, Error> {
        if rho <= Rational::zero() || rho >= Rational::one() {
            return Err(Error::RhoOutOfRange(rho.to_string()));
        }
        if q < Rational::zero() || q >= Rational::one() {
            return Err(Error::QOutOfRange(q.to_string()));
        }
        let p = Rational::one() - &q;
        Ok(ModelParamsExact { rho, q, p })
    }

    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    /// Nearest floating counterpart.
    pub fn to_float(&self) -> ModelParamsFloat {
        ModelParamsFloat {
            rho: self.rho.to_f64().unwrap_or(f64::NAN),
            q: self.q.to_f64().unwrap_or(f64::NAN),
            p: self.p.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// Floating parameters for the simulator.
///
/// The simulator tolerates the degenerate rho = 0 (every arrival thinned
/// away, the chain absorbs at (0, 0)); the solver does not.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParamsFloat {
    pub rho: f64,
    pub q: f64,
    pub p: f64,
}

impl ModelParamsFloat {
    pub fn new(rho: f64, q: f64) -> Result<Self, Error> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::RhoOutOfRange(rho.to_string()));
        }
        if !(0.0..1.0).contains(&q) {
            return Err(Error::QOutOfRange(q.to_string()));
        }
        Ok(ModelParamsFloat { rho, q, p: 1.0 - q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn exact_params_validate_ranges() {
        assert!(ModelParamsExact::new(rat(1, 2), rat(1, 10)).is_ok());
        assert!(ModelParamsExact::new(rat_int(0), rat(1, 10)).is_err());
        assert!(ModelParamsExact::new(rat_int(1), rat(1, 10)).is_err());
        assert!(ModelParamsExact::new(rat(1, 2), rat_int(1)).is_err());
        assert!(ModelParamsExact::new(rat(1, 2), rat(-1, 10)).is_err());
        // q = 0 is the memoryless boundary case and is allowed
        assert!(ModelParamsExact::new(rat(1, 2), rat_int(0)).is_ok());
    }

    #[test]
    fn p_complements_q_exactly() {
        let params = ModelParamsExact::new(rat(1, 2), rat(3, 10)).unwrap();
        assert_eq!(params.p() + params.q(), rat_int(1));
        let f = params.to_float();
        assert!((f.p - 0.7).abs() < 1e-15);
    }

    #[test]
    fn float_params_allow_degenerate_thinning() {
        assert!(ModelParamsFloat::new(0.0, 0.3).is_ok());
        assert!(ModelParamsFloat::new(1.0, 0.3).is_err());
        assert!(ModelParamsFloat::new(0.5, 1.0).is_err());
    }
}
