//! Order-by-order power-series solution of the stationary boundary value
//! problem in the stay probability q.
//!
//! Writing the generating function as sum_k q^k P_k(z, y), each coefficient
//! P_k is assembled from two triangular grids of univariate polynomials:
//!
//! * the *diagonal derivatives* a[k][j] — the j-th y-derivative, evaluated
//!   on the diagonal y = z, of P_k(0, y) + (P_k(z, y) - P_k(0, y))/z;
//! * the *Taylor weights* A[k][j] — the combinations
//!   j*rho*a[k-j][j-1] + (1 + rho*(z - 1))*a[k-j][j] that multiply
//!   (y - z)^j / j! in the Taylor form of P_k around y = z.
//!
//! The weights at order k only consume diagonal derivatives of strictly
//! earlier orders, and the empty-queue boundary slice P_k(0, z) is pinned by
//! requiring the correction to vanish at (0, 1), so the whole table builds
//! bottom-up over exact rationals.
//!
//! Two independent routes produce the same tables: [`build_tables`]
//! differentiates each assembled coefficient, while [`build_tables_recursive`]
//! advances the diagonal-derivative grid by its own self-contained recursion.
//! Their exact agreement is one of the strongest checks on both.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::params::ModelParamsExact;
use crate::poly::{BiPoly, Poly, QSeries};
use crate::rational::{factorial, Rational};

/// The coefficient tables of the truncated series, all exact.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTables {
    params: ModelParamsExact,
    order: usize,
    /// gf[k] = k-th series coefficient P_k(z, y).
    gf: Vec<BiPoly>,
    /// diag[k][j] = j-th diagonal derivative of the k-th coefficient.
    diag: Vec<Vec<Poly>>,
    /// weights[k][j] = Taylor weight of (y - z)^j / j! at order k.
    weights: Vec<Vec<Poly>>,
}

impl CoeffTables {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn params(&self) -> &ModelParamsExact {
        &self.params
    }

    /// The k-th q-order coefficient of the generating function.
    pub fn series_coeff(&self, k: usize) -> &BiPoly {
        &self.gf[k]
    }

    pub fn series_coeffs(&self) -> &[BiPoly] {
        &self.gf
    }

    /// a[k][j]; zero when j is outside the stored triangle.
    pub fn diag_deriv(&self, k: usize, j: usize) -> Poly {
        self.diag[k].get(j).cloned().unwrap_or_else(Poly::zero)
    }

    /// A[k][j]; zero when j is outside the stored triangle.
    pub fn taylor_weight(&self, k: usize, j: usize) -> Poly {
        self.weights[k].get(j).cloned().unwrap_or_else(Poly::zero)
    }

    /// P_k(z, 1), the z-polynomial the queue-length pmf is read from.
    pub fn coeff_at_y1(&self, k: usize) -> Poly {
        self.gf[k].at_y(&Rational::one())
    }

    /// P_k(1, y), the y-polynomial of the late-customer marginal.
    pub fn coeff_at_z1(&self, k: usize) -> Poly {
        self.gf[k].at_z(&Rational::one())
    }
}

/// 1 + rho*(z - 1) as a univariate polynomial in z.
fn one_plus_rho_zm1(rho: &Rational) -> Poly {
    Poly::new(vec![Rational::one() - rho, rho.clone()])
}

fn diag_get(diag: &[Vec<Poly>], k: usize, j: isize) -> Poly {
    if j < 0 {
        return Poly::zero();
    }
    diag[k].get(j as usize).cloned().unwrap_or_else(Poly::zero)
}

/// Taylor-weight row at order k (k >= 1) from earlier diagonal derivatives.
fn weights_row(diag: &[Vec<Poly>], k: usize, rho: &Rational, one_plus: &Poly) -> Vec<Poly> {
    let mut row = vec![Poly::zero()];
    for j in 1..=k {
        let lower = diag_get(diag, k - j, j as isize - 1);
        let same = diag_get(diag, k - j, j as isize);
        let jrho = Rational::from_integer(j.into()) * rho;
        row.push(&lower.scale(&jrho) + &(one_plus * &same));
    }
    row
}

/// Assembles the bivariate coefficient at order k >= 1 from its weight row.
///
/// The boundary slice P_k(0, z) comes out of the same weights evaluated at
/// z = 0: the requirement P_k(0, 1) = 0 fixes the constant term.
fn assemble_coeff(weights_k: &[Poly], rho: &Rational, one_plus: &Poly) -> BiPoly {
    let y_minus_z = BiPoly::y() - BiPoly::z();
    let mut ymz_pow = BiPoly::one();
    let mut boundary = Poly::zero();
    let mut out = BiPoly::zero();
    for (j, weight) in weights_k.iter().enumerate().skip(1) {
        ymz_pow = &ymz_pow * &y_minus_z;
        let inv_fact = Rational::new(1.into(), factorial(j));
        out = &out + &(&ymz_pow * &BiPoly::from_z_poly(weight)).scale(&inv_fact);
        let w0 = weight.constant_term() * &inv_fact;
        boundary = &boundary + &(&Poly::monomial(w0.clone(), j) - &Poly::constant(w0));
    }
    let inv_one_minus_rho = (Rational::one() - rho).recip();
    let scaled = (one_plus * &boundary).scale(&inv_one_minus_rho);
    &out + &BiPoly::from_z_poly(&scaled)
}

/// Diagonal-derivative row read off an assembled coefficient.
fn diag_row_from_coeff(coeff: &BiPoly, k: usize) -> Vec<Poly> {
    let boundary_y = BiPoly::from_y_poly(&coeff.at_z0());
    let mut g = &boundary_y + &coeff.deflate_z();
    let mut row = Vec::with_capacity(k + 1);
    for _ in 0..=k {
        row.push(g.subst_y_eq_z());
        g = g.diff_y(1);
    }
    row
}

/// Builds all tables up to the given order by assembling each coefficient
/// and differentiating it for the next orders.
pub fn build_tables(params: &ModelParamsExact, order: usize) -> CoeffTables {
    let rho = params.rho();
    let one_plus = one_plus_rho_zm1(rho);
    let mut gf = vec![BiPoly::from_z_poly(&one_plus)];
    let mut diag = vec![vec![Poly::one()]];
    let mut weights = vec![vec![one_plus.clone()]];
    for k in 1..=order {
        let w = weights_row(&diag, k, rho, &one_plus);
        let coeff = assemble_coeff(&w, rho, &one_plus);
        diag.push(diag_row_from_coeff(&coeff, k));
        weights.push(w);
        gf.push(coeff);
    }
    CoeffTables {
        params: params.clone(),
        order,
        gf,
        diag,
        weights,
    }
}

/// Builds the same tables, but advances the diagonal-derivative grid by its
/// own recursion instead of differentiating the assembled coefficients.
/// Independent route used for cross-checking.
pub fn build_tables_recursive(params: &ModelParamsExact, order: usize) -> CoeffTables {
    let rho = params.rho();
    let one_minus_rho = Rational::one() - rho;
    let one_plus = one_plus_rho_zm1(rho);
    let mut gf = vec![BiPoly::from_z_poly(&one_plus)];
    let mut diag: Vec<Vec<Poly>> = vec![vec![Poly::one()]];
    let mut weights = vec![vec![one_plus.clone()]];

    // weight value at z = 0 for order k, slot j, from earlier diagonal rows
    let weight_at_zero = |diag: &[Vec<Poly>], k: usize, j: usize| -> Rational {
        let lower = diag_get(diag, k - j, j as isize - 1).constant_term();
        let same = diag_get(diag, k - j, j as isize).constant_term();
        Rational::from_integer(j.into()) * rho * lower + (Rational::one() - rho) * same
    };

    for k in 1..=order {
        let mut row = Vec::with_capacity(k + 1);
        // j = 0 slot: the deflated boundary combination collapses to
        // P_k(0, z)/(1 - rho), expressed through the weights at z = 0.
        let mut base = Poly::zero();
        for j in 1..=k {
            let c = weight_at_zero(&diag, k, j)
                / (Rational::from_integer(factorial(j)) * &one_minus_rho);
            base = &base + &(&Poly::monomial(c.clone(), j) - &Poly::constant(c));
        }
        row.push(base);
        // higher slots
        for l in 1..=k {
            let mut acc = Poly::zero();
            let z_minus_one = Poly::new(vec![Rational::from_integer((-1).into()), Rational::one()]);
            for j in (l + 1)..=k {
                let c = weight_at_zero(&diag, k, j)
                    / Rational::from_integer(factorial(j - l));
                acc = &acc + &(&Poly::monomial(c, j - l - 1) * &z_minus_one);
            }
            let lower = diag_get(&diag, k - l, l as isize - 1);
            let same = diag_get(&diag, k - l, l as isize);
            let lrho = Rational::from_integer(l.into()) * rho;
            acc = &acc
                + &(&Poly::constant(lower.constant_term()) + &lower.deflate()).scale(&lrho);
            acc = &acc + &same.scale(rho);
            acc = &acc
                + &(&Poly::constant(same.constant_term()) + &same.deflate())
                    .scale(&one_minus_rho);
            row.push(acc);
        }
        let w = weights_row(&diag, k, rho, &one_plus);
        let coeff = assemble_coeff(&w, rho, &one_plus);
        diag.push(row);
        weights.push(w);
        gf.push(coeff);
    }
    CoeffTables {
        params: params.clone(),
        order,
        gf,
        diag,
        weights,
    }
}

/// Queue-length pmf of the truncated series: P_n = sum_k q^k [z^n] P_k(z, 1)
/// for n = 0..=n_max. Exact in q and in the coefficients; the truncation
/// error in q is of higher order than the series order.
pub fn queue_pmf(tables: &CoeffTables, q: &Rational, n_max: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); n_max + 1];
    let mut q_pow = Rational::one();
    for k in 0..=tables.order {
        let collapsed = tables.coeff_at_y1(k);
        for (n, slot) in acc.iter_mut().enumerate() {
            *slot += collapsed.coeff(n) * &q_pow;
        }
        q_pow *= q;
    }
    acc
}

/// Mean queue length of the truncated series: d/dz P(z, 1) at z = 1.
pub fn mean_queue_length(tables: &CoeffTables, q: &Rational) -> Rational {
    let one = Rational::one();
    let mut acc = Rational::zero();
    let mut q_pow = Rational::one();
    for k in 0..=tables.order {
        acc += tables.coeff_at_y1(k).derivative().eval(&one) * &q_pow;
        q_pow *= q;
    }
    acc
}

/// Residual of the stationarity functional equation, truncated at the table
/// order. The equation states that stepping every late customer forward one
/// slot (y := q*y + (1 - q)*z) and serving the head of the queue reproduces
/// the stationary generating function:
///
///   P(z, y) = (1 - rho + rho*u) * [(z - 1) P(0, u) + P(z, u)] / z,
///   u = z + q*(y - z).
///
/// The returned series is identically zero at every order when the tables
/// are correct. The division by z is exact because the bracket vanishes at
/// z = 0; a failure there panics, signalling an implementation bug.
pub fn check_functional_equation(tables: &CoeffTables) -> QSeries {
    let order = tables.order;
    let rho = tables.params.rho();
    let series = QSeries::from_terms(order, tables.gf.clone());
    let boundary = QSeries::from_terms(
        order,
        tables
            .gf
            .iter()
            .map(|p| BiPoly::from_y_poly(&p.at_z0()))
            .collect(),
    );
    let stepped = series.subst_y_convex();
    let stepped_boundary = boundary.subst_y_convex();
    let z_minus_one = &BiPoly::z() - &BiPoly::one();
    let inner = stepped_boundary
        .mul_bipoly(&z_minus_one)
        .add(&stepped)
        .div_z_exact();
    let prefactor = QSeries::from_terms(
        order,
        vec![
            BiPoly::from_z_poly(&one_plus_rho_zm1(rho)),
            (BiPoly::y() - BiPoly::z()).scale(rho),
        ],
    );
    series.sub(&prefactor.mul(&inner))
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryCheck {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub checks: Vec<BoundaryCheck>,
}

impl BoundaryReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Exact boundary identities of the coefficient tables:
///
/// * the order-0 coefficient carries the whole empty-queue mass 1 - rho at
///   (0, 1) and every correction vanishes there;
/// * every correction also vanishes at (1, 1), so normalization holds at any
///   truncation;
/// * on the diagonal y = z, each coefficient satisfies
///   (1 - rho) * P_k(z, z) = (1 + rho*(z - 1)) * P_k(0, z).
///
/// Failures are reported, not thrown.
pub fn check_boundary_identities(tables: &CoeffTables) -> BoundaryReport {
    let rho = tables.params.rho();
    let one = Rational::one();
    let zero = Rational::zero();
    let one_minus_rho = Rational::one() - rho;
    let one_plus = one_plus_rho_zm1(rho);
    let mut checks = Vec::new();
    checks.push(BoundaryCheck {
        name: "order 0 empty-queue mass at (0,1) equals 1 - rho".into(),
        pass: tables.gf[0].eval(&zero, &one) == one_minus_rho,
    });
    for k in 1..=tables.order {
        checks.push(BoundaryCheck {
            name: format!("order {k} coefficient vanishes at (0,1)"),
            pass: tables.gf[k].eval(&zero, &one).is_zero(),
        });
        checks.push(BoundaryCheck {
            name: format!("order {k} coefficient vanishes at (1,1)"),
            pass: tables.gf[k].eval(&one, &one).is_zero(),
        });
    }
    for k in 0..=tables.order {
        let diagonal = tables.gf[k].subst_y_eq_z();
        let boundary = tables.gf[k].at_z0(); // same coefficients read in z
        let pass = diagonal.scale(&one_minus_rho) == &boundary * &one_plus;
        checks.push(BoundaryCheck {
            name: format!("order {k} diagonal identity (1-rho)P(z,z) = (1+rho(z-1))P(0,z)"),
            pass,
        });
    }
    BoundaryReport { checks }
}

/// y-degree of each series coefficient. The first order whose coefficient
/// reaches y-degree m is m*(m+1)/2: piling up m late customers needs delays
/// surviving 1 + 2 + ... + m slots.
pub fn sparsity_profile(tables: &CoeffTables) -> Vec<(usize, usize)> {
    tables
        .gf
        .iter()
        .enumerate()
        .map(|(k, p)| (k, p.deg_y().unwrap_or(0)))
        .collect()
}

/// Smallest order whose coefficient has exactly the given y-degree.
pub fn first_order_with_y_degree(profile: &[(usize, usize)], m: usize) -> Option<usize> {
    profile.iter().find(|(_, d)| *d == m).map(|(k, _)| *k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn params(rho: Rational) -> ModelParamsExact {
        ModelParamsExact::new(rho, rat(1, 10)).unwrap()
    }

    fn zp(coeffs: &[Rational]) -> Poly {
        Poly::new(coeffs.to_vec())
    }

    #[test]
    fn order_zero_coefficient() {
        for rho in [rat(1, 4), rat(1, 2), rat(3, 4), rat(9, 10)] {
            let t = build_tables(&params(rho.clone()), 0);
            let expect = BiPoly::from_z_poly(&Poly::new(vec![
                rat_int(1) - rho.clone(),
                rho.clone(),
            ]));
            assert_eq!(t.series_coeff(0), &expect);
        }
    }

    #[test]
    fn first_order_coefficient_at_half() {
        // hand expansion at rho = 1/2: (y - z)/2 + (z^2 - 1)/2
        let t = build_tables(&params(rat(1, 2)), 1);
        let expect = &(BiPoly::y() - BiPoly::z()).scale(&rat(1, 2))
            + &BiPoly::from_z_poly(&zp(&[rat(-1, 2), rat_int(0), rat(1, 2)]));
        assert_eq!(t.series_coeff(1), &expect);
    }

    #[test]
    fn first_order_diagonal_derivatives() {
        for rho in [rat(1, 4), rat(1, 2), rat(4, 5)] {
            let t = build_tables(&params(rho.clone()), 1);
            let one_minus = rat_int(1) - rho.clone();
            // a_1 at order 1 is the constant rho
            assert_eq!(t.diag_deriv(1, 1), Poly::constant(rho.clone()));
            // a_0 at order 1 is rho (z - 1)/(1 - rho)
            let expect = zp(&[-rho.clone() / one_minus.clone(), rho.clone() / one_minus]);
            assert_eq!(t.diag_deriv(1, 0), expect);
            // slots above the order vanish
            assert!(t.diag_deriv(1, 2).is_zero());
        }
    }

    #[test]
    fn order_zero_diagonal_row_is_kronecker_delta() {
        let t = build_tables(&params(rat(1, 3)), 4);
        assert_eq!(t.diag_deriv(0, 0), Poly::one());
        for j in 1..=4 {
            assert!(t.diag_deriv(0, j).is_zero());
        }
    }

    #[test]
    fn known_taylor_weights() {
        for rho in [rat(1, 4), rat(1, 2), rat(2, 3)] {
            let t = build_tables(&params(rho.clone()), 4);
            let one_minus = rat_int(1) - rho.clone();
            // weight (2, 1): rho * (1 + rho (z-1) (2-rho)/(1-rho))
            let factor = (rat_int(2) - rho.clone()) / one_minus.clone();
            let expect = zp(&[
                rho.clone() * (rat_int(1) - rho.clone() * factor.clone()),
                rho.clone() * rho.clone() * factor,
            ]);
            assert_eq!(t.taylor_weight(2, 1), expect);
            // weights (3, 2) and (4, 2) are the constant 2 rho^2
            let two_rho_sq = Poly::constant(rat_int(2) * rho.clone() * rho.clone());
            assert_eq!(t.taylor_weight(3, 2), two_rho_sq);
            assert_eq!(t.taylor_weight(4, 2), two_rho_sq);
            // third diagonal derivative at order 3 is the same constant
            assert_eq!(
                t.diag_deriv(3, 2),
                Poly::constant(rat_int(2) * rho.clone() * rho.clone())
            );
            // top weight vanishes for k >= 2
            for k in 2..=4usize {
                assert!(t.taylor_weight(k, k).is_zero());
            }
        }
    }

    #[test]
    fn zero_slot_diagonal_is_scaled_boundary_slice() {
        // a[k][0] * (1 - rho) equals P_k(0, .) at every order
        for rho in [rat(1, 4), rat(1, 2), rat(9, 10)] {
            let one_minus = rat_int(1) - rho.clone();
            let t = build_tables(&params(rho), 8);
            for k in 0..=8usize {
                assert_eq!(
                    t.diag_deriv(k, 0).scale(&one_minus),
                    t.series_coeff(k).at_z0(),
                    "order {k}"
                );
            }
        }
    }

    #[test]
    fn near_diagonal_weights_vanish() {
        // linear-in-y low orders force A[j+1][j] = A[j+2][j] = 0 for j >= 3
        let t = build_tables(&params(rat(3, 7)), 10);
        for j in 3..=8usize {
            assert!(t.taylor_weight(j + 1, j).is_zero(), "weight ({}, {j})", j + 1);
            if j + 2 <= 10 {
                assert!(t.taylor_weight(j + 2, j).is_zero(), "weight ({}, {j})", j + 2);
            }
        }
    }

    #[test]
    fn diagonal_degree_stays_within_order() {
        let t = build_tables(&params(rat(2, 5)), 8);
        for k in 0..=8usize {
            for j in 0..=k {
                let d = t.diag_deriv(k, j).degree().unwrap_or(0);
                assert!(d <= k, "diag[{k}][{j}] has degree {d}");
            }
        }
    }

    #[test]
    fn routes_agree_exactly() {
        let p = params(rat(1, 3));
        assert_eq!(build_tables(&p, 6), build_tables_recursive(&p, 6));
    }

    #[test]
    fn pmf_q_zero_is_bernoulli() {
        let t = build_tables(&params(rat(1, 2)), 6);
        let pmf = queue_pmf(&t, &rat_int(0), 3);
        assert_eq!(pmf, vec![rat(1, 2), rat(1, 2), rat_int(0), rat_int(0)]);
    }

    #[test]
    fn pmf_empty_queue_mass_is_exact_for_any_q() {
        let t = build_tables(&params(rat(3, 10)), 8);
        for q in [rat(1, 10), rat(1, 4), rat(1, 2)] {
            let pmf = queue_pmf(&t, &q, 0);
            assert_eq!(pmf[0], rat(7, 10));
        }
    }

    #[test]
    fn pmf_total_mass_is_one_at_any_truncation() {
        for order in [0, 1, 4, 8] {
            let t = build_tables(&params(rat(2, 5)), order);
            let pmf = queue_pmf(&t, &rat(1, 5), order + 1);
            let total: Rational = pmf.iter().cloned().sum();
            assert_eq!(total, rat_int(1));
        }
    }

    #[test]
    fn mean_at_q_zero_is_rho() {
        let t = build_tables(&params(rat(1, 2)), 5);
        assert_eq!(mean_queue_length(&t, &rat_int(0)), rat(1, 2));
        let t_small = build_tables(&params(rat(1, 100)), 5);
        assert_eq!(mean_queue_length(&t_small, &rat_int(0)), rat(1, 100));
    }

    #[test]
    fn mean_third_order_matches_hand_expansion() {
        // rho = 1/2, q = 1/10, order 3: 1/2 + 1/2 q - q^2 + 3/2 q^3 = 1083/2000
        let t = build_tables(&params(rat(1, 2)), 3);
        assert_eq!(mean_queue_length(&t, &rat(1, 10)), rat(1083, 2000));
    }

    #[test]
    fn functional_equation_residual_vanishes() {
        for (rho, order) in [(rat(1, 2), 0), (rat(1, 3), 3), (rat(1, 2), 6)] {
            let t = build_tables(&params(rho), order);
            let residual = check_functional_equation(&t);
            assert!(residual.is_zero(), "nonzero residual: {residual}");
        }
    }

    #[test]
    fn boundary_identities_hold() {
        let t = build_tables(&params(rat(1, 2)), 6);
        let report = check_boundary_identities(&t);
        assert!(report.all_pass());
        assert_eq!(report.checks.len(), 1 + 2 * 6 + 7);
    }

    #[test]
    fn sparsity_thresholds() {
        let t = build_tables(&params(rat(1, 2)), 10);
        let profile = sparsity_profile(&t);
        assert_eq!(first_order_with_y_degree(&profile, 1), Some(1));
        assert_eq!(first_order_with_y_degree(&profile, 2), Some(3));
        assert_eq!(first_order_with_y_degree(&profile, 3), Some(6));
        assert_eq!(first_order_with_y_degree(&profile, 4), Some(10));
        for (k, d) in profile {
            let expect = (0..).take_while(|m| m * (m + 1) / 2 <= k).last().unwrap();
            assert_eq!(d, expect, "y-degree at order {k}");
        }
    }

    #[test]
    fn z_degree_of_coefficients_is_at_most_k_plus_one() {
        let t = build_tables(&params(rat(3, 5)), 8);
        for (k, p) in t.series_coeffs().iter().enumerate() {
            assert!(p.deg_z().unwrap_or(0) <= k + 1);
        }
    }
}
