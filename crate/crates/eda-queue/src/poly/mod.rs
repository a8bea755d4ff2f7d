//! Dense polynomials over exact rationals: univariate, bivariate in (z, y),
//! and q-series truncated at a fixed order with bivariate coefficients.
//!
//! All three types keep a canonical representation (no trailing zero
//! coefficients, rows, or columns), so structural equality is mathematical
//! equality and the zero polynomial is the empty one. Values are immutable
//! after construction; every operation returns a fresh polynomial.

mod bi;
mod series;
mod uni;

pub use bi::BiPoly;
pub use series::QSeries;
pub use uni::Poly;

// Lifts an operator defined on references to the owned/borrowed combinations.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $t:ty) => {
        impl std::ops::$trait<$t> for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&$t> for $t {
            type Output = $t;
            fn $method(self, rhs: &$t) -> $t {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<$t> for &$t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                self.$method(&rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::rational::{rat, Rational};
    use proptest::prelude::*;

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(arb_rational(), 0..5).prop_map(Poly::new)
    }

    fn arb_bipoly() -> impl Strategy<Value = BiPoly> {
        proptest::collection::vec(proptest::collection::vec(arb_rational(), 0..4), 0..4)
            .prop_map(BiPoly::from_rows)
    }

    fn arb_qseries() -> impl Strategy<Value = QSeries> {
        proptest::collection::vec(arb_bipoly(), 0..4)
            .prop_map(|terms| QSeries::from_terms(3, terms))
    }

    proptest! {
        #[test]
        fn uni_ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn uni_additive_inverse_is_canonical_zero(a in arb_poly()) {
            let z = &a + &(-&a);
            prop_assert!(z.is_zero());
            prop_assert_eq!(z.coeffs().len(), 0);
        }

        #[test]
        fn uni_deflate_reconstructs(a in arb_poly()) {
            let rebuilt = &(a.deflate() * Poly::var()) + &Poly::constant(a.constant_term());
            prop_assert_eq!(rebuilt, a);
        }

        #[test]
        fn bi_ring_axioms(a in arb_bipoly(), b in arb_bipoly(), c in arb_bipoly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn bi_repeated_diff_matches_higher_order(a in arb_bipoly()) {
            prop_assert_eq!(a.diff_y(1).diff_y(1), a.diff_y(2));
        }

        #[test]
        fn bi_deflate_reconstructs(a in arb_bipoly()) {
            let rebuilt = &(a.deflate_z() * BiPoly::z()) + &BiPoly::from_y_poly(&a.at_z0());
            prop_assert_eq!(rebuilt, a);
        }

        #[test]
        fn qseries_subst_respects_mul(f in arb_qseries(), g in arb_qseries()) {
            let lhs = f.mul(&g).subst_y_convex();
            let rhs = f.subst_y_convex().mul(&g.subst_y_convex());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn qseries_add_commutes(f in arb_qseries(), g in arb_qseries()) {
            prop_assert_eq!(f.add(&g), g.add(&f));
        }
    }
}
