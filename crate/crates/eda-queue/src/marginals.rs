//! The late-customer marginal P(1, y) two independent ways: as the expanded
//! q-Pochhammer product prod_{k>=0} [1 + rho q^(k+1) (y - 1)], and through
//! the count D(l, j) of partitions of l into j distinct positive parts.
//!
//! Both routes return, per q-order k, a polynomial in y; they must agree
//! exactly with each other and with the z = 1 slice of the solver tables.

use num_traits::One;

use crate::error::Error;
use crate::poly::Poly;
use crate::rational::Rational;

/// Memoized table of D(l, j), the number of partitions of l into j distinct
/// positive parts. Filled by the recurrence
/// D(l, j) = D(l - j, j - 1) + D(l - j, j): removing one from each of the j
/// parts either empties the smallest part or leaves j distinct parts.
#[derive(Clone, Debug)]
pub struct PartitionTable {
    rows: Vec<Vec<u64>>,
}

impl PartitionTable {
    /// Builds the table for all l <= l_max.
    pub fn up_to(l_max: usize) -> Self {
        // j parts need at least 1 + 2 + ... + j = j(j+1)/2, so the width
        // stays O(sqrt(l_max)).
        let j_max = (0..).take_while(|j| j * (j + 1) / 2 <= l_max).last().unwrap_or(0);
        let mut rows = vec![vec![0u64; j_max + 1]; l_max + 1];
        rows[0][0] = 1;
        for l in 1..=l_max {
            for j in 1..=j_max {
                if j * (j + 1) / 2 > l {
                    break;
                }
                let below = rows[l - j][j - 1];
                let same = rows[l - j][j];
                rows[l][j] = below + same;
            }
        }
        PartitionTable { rows }
    }

    /// D(l, j); zero outside the stored range (the count is zero there).
    pub fn count(&self, l: usize, j: usize) -> u64 {
        self.rows
            .get(l)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or(0)
    }
}

/// One-shot D(l, j).
pub fn partition_distinct(l: usize, j: usize) -> u64 {
    PartitionTable::up_to(l).count(l, j)
}

/// q-order coefficients of the late-customer marginal via partition counts:
/// the k-th coefficient is sum_j (rho (y - 1))^j D(k, j).
///
/// No 1/j! enters here: the coefficient of (y-1)^j must carry a bare rho^j
/// for the series to reproduce the expanded product, which this routine is
/// required to match exactly.
pub fn marginal_l_series(rho: &Rational, order: usize) -> Vec<Poly> {
    let table = PartitionTable::up_to(order);
    let y_minus_one = Poly::new(vec![-Rational::one(), Rational::one()]);
    (0..=order)
        .map(|k| {
            let mut acc = Poly::zero();
            let mut factor = Poly::one(); // (rho (y-1))^j
            let mut j = 0usize;
            loop {
                let d = table.count(k, j);
                if d > 0 {
                    acc = &acc + &factor.scale(&Rational::from_integer(d.into()));
                }
                j += 1;
                if j * (j + 1) / 2 > k {
                    break;
                }
                factor = &factor * &y_minus_one.scale(rho);
            }
            acc
        })
        .collect()
}

/// q-order coefficients of the truncated product
/// prod_{k=0}^{order-1} [1 + rho q^(k+1) (y - 1)].
///
/// Factors beyond the order cannot contribute below q^(order+1), so the
/// finite product is exact at every kept order.
pub fn pochhammer_expand(rho: &Rational, order: usize) -> Vec<Poly> {
    let mut coeffs = vec![Poly::zero(); order + 1];
    coeffs[0] = Poly::one();
    let step = Poly::new(vec![-rho.clone(), rho.clone()]); // rho (y - 1)
    for factor in 1..=order {
        // multiply by 1 + rho q^factor (y - 1), highest order first
        for i in (factor..=order).rev() {
            let bump = &coeffs[i - factor] * &step;
            coeffs[i] = &coeffs[i] + &bump;
        }
    }
    coeffs
}

/// Numerical partial product of the q-Pochhammer marginal at a point.
/// Successive factors differ from 1 by rho q^(k+1) |y - 1|, so the
/// truncation error decays geometrically inside |q| < 1.
pub fn pochhammer_eval(rho: f64, q: f64, y: f64, terms: usize) -> Result<f64, Error> {
    if q.abs() >= 1.0 || q.is_nan() {
        return Err(Error::QOutsideUnitDisk(q));
    }
    let mut product = 1.0;
    let mut q_pow = 1.0;
    for _ in 0..terms {
        q_pow *= q;
        product *= 1.0 + rho * q_pow * (y - 1.0);
    }
    Ok(product)
}
