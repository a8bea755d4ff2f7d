//! Cross-checks between the exact solver, the simulator, and the closed
//! forms: total-variation comparison of queue-length pmfs, the certified
//! growth bound on the diagonal-derivative polynomials, and the analyticity
//! radius it implies for the q-series.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Error;
use crate::params::{ModelParamsExact, ModelParamsFloat};
use crate::rational::to_f64;
use crate::simulator::{EmpiricalDist, RNG_NAME};
use crate::solver::{build_tables, queue_pmf, CoeffTables};

/// Per-state difference between two queue-length pmfs.
#[derive(Clone, Debug, Serialize)]
pub struct StateDiff {
    pub n: u32,
    pub empirical: f64,
    pub theoretical: f64,
    pub abs_diff: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PmfComparison {
    pub total_variation: f64,
    pub per_state: Vec<StateDiff>,
}

/// Compares two normalized pmfs over the union of their supports.
/// Total variation is half the absolute-difference mass, so it lives in
/// [0, 1] and vanishes exactly on equal distributions.
pub fn compare_pmf(
    empirical: &BTreeMap<u32, f64>,
    theoretical: &BTreeMap<u32, f64>,
) -> Result<PmfComparison, Error> {
    for pmf in [empirical, theoretical] {
        let mass: f64 = pmf.values().sum();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(mass));
        }
    }
    let support: std::collections::BTreeSet<u32> = empirical
        .keys()
        .chain(theoretical.keys())
        .copied()
        .collect();
    let mut per_state = Vec::with_capacity(support.len());
    let mut tv = 0.0;
    for n in support {
        let e = empirical.get(&n).copied().unwrap_or(0.0);
        let t = theoretical.get(&n).copied().unwrap_or(0.0);
        let d = (e - t).abs();
        tv += d;
        per_state.push(StateDiff {
            n,
            empirical: e,
            theoretical: t,
            abs_diff: d,
        });
    }
    Ok(PmfComparison {
        total_variation: tv / 2.0,
        per_state,
    })
}

/// Certified growth constant C = max{e^2, 2/(1 - rho)} for the
/// diagonal-derivative polynomials, and the analyticity radius phi = 1/C
/// it guarantees for the q-series.
pub fn radius_bound(rho: f64) -> Result<(f64, f64), Error> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::RhoOutOfRange(rho.to_string()));
    }
    let c = (std::f64::consts::E * std::f64::consts::E).max(2.0 / (1.0 - rho));
    Ok((c, 1.0 / c))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderRatio {
    pub order: usize,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheckReport {
    pub growth_constant: f64,
    pub grid_points: usize,
    pub per_order: Vec<OrderRatio>,
    pub violations: usize,
}

/// Evaluates every diagonal-derivative polynomial and its first z-derivative
/// on the grid and reports, per order k, the largest magnitude relative to
/// C^k. The certified bound says every ratio is at most 1.
pub fn coefficient_bound_check(tables: &CoeffTables, grid: &[f64]) -> BoundCheckReport {
    let rho = to_f64(tables.params().rho());
    let (c, _) = radius_bound(rho).expect("tables carry validated params");
    let mut per_order = Vec::with_capacity(tables.order() + 1);
    let mut violations = 0;
    let mut c_pow = 1.0;
    for k in 0..=tables.order() {
        let mut max_ratio: f64 = 0.0;
        for j in 0..=k {
            let poly = tables.diag_deriv(k, j);
            let deriv = poly.derivative();
            for &z in grid {
                let magnitude = poly.eval_f64(z).abs().max(deriv.eval_f64(z).abs());
                max_ratio = max_ratio.max(magnitude / c_pow);
            }
        }
        if max_ratio > 1.0 + 1e-9 {
            violations += 1;
        }
        per_order.push(OrderRatio {
            order: k,
            max_ratio,
        });
        c_pow *= c;
    }
    BoundCheckReport {
        growth_constant: c,
        grid_points: grid.len(),
        per_order,
        violations,
    }
}

/// Equispaced grid over [-1, 1], endpoints included.
pub fn unit_interval_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2, "grid needs at least the two endpoints");
    (0..points)
        .map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RadiusInfo {
    pub growth_constant: f64,
    pub radius: f64,
    pub q_inside_radius: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamsEcho {
    pub rho: f64,
    pub q: f64,
}

/// Full comparison artifact: simulator vs truncated-series pmf plus the
/// position of q relative to the certified radius.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub params: ParamsEcho,
    pub order: usize,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub rng: String,
    pub tv: f64,
    pub per_state: Vec<StateDiff>,
    pub radius: RadiusInfo,
    /// Set when rho is close to 1: the series coefficients carry inverse
    /// powers of 1 - rho, so truncation converges slowly there.
    pub slow_convergence_warning: bool,
}

/// Runs the simulator, reads the truncated-series pmf from fresh tables, and
/// compares the queue-length marginals.
pub fn end_to_end_compare(
    exact: &ModelParamsExact,
    float: &ModelParamsFloat,
    order: usize,
    steps: u64,
    burn_in: u64,
    seed: u64,
) -> Result<ComparisonReport, Error> {
    let from_exact = exact.to_float();
    if (from_exact.rho - float.rho).abs() > 1e-12 || (from_exact.q - float.q).abs() > 1e-12 {
        return Err(Error::ParamsMismatch(format!(
            "rho {} vs {}, q {} vs {}",
            from_exact.rho, float.rho, from_exact.q, float.q
        )));
    }
    let dist = EmpiricalDist::run(float, steps, burn_in, seed);
    let empirical = dist.marginal_n()?;
    let tables = build_tables(exact, order);
    let max_seen = empirical.keys().max().copied().unwrap_or(0) as usize;
    let n_max = max_seen.max(order + 1);
    let theoretical: BTreeMap<u32, f64> = queue_pmf(&tables, exact.q(), n_max)
        .iter()
        .enumerate()
        .map(|(n, p)| (n as u32, to_f64(p)))
        .collect();
    let cmp = compare_pmf(&empirical, &theoretical)?;
    let (c, phi) = radius_bound(float.rho)?;
    Ok(ComparisonReport {
        params: ParamsEcho {
            rho: float.rho,
            q: float.q,
        },
        order,
        steps,
        burn_in,
        seed,
        rng: RNG_NAME.to_string(),
        tv: cmp.total_variation,
        per_state: cmp.per_state,
        radius: RadiusInfo {
            growth_constant: c,
            radius: phi,
            q_inside_radius: float.q <= phi,
        },
        slow_convergence_warning: float.rho >= 0.9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pmf(entries: &[(u32, f64)]) -> BTreeMap<u32, f64> {
        entries.iter().copied().collect()
    }

    #[test]
    fn tv_of_identical_pmfs_is_zero() {
        let a = pmf(&[(0, 0.25), (1, 0.75)]);
        let cmp = compare_pmf(&a, &a).unwrap();
        assert_eq!(cmp.total_variation, 0.0);
    }

    #[test]
    fn tv_of_disjoint_supports_is_one() {
        let a = pmf(&[(0, 1.0)]);
        let b = pmf(&[(5, 1.0)]);
        assert_eq!(compare_pmf(&a, &b).unwrap().total_variation, 1.0);
    }

    #[test]
    fn tv_of_half_shift_is_half() {
        let a = pmf(&[(0, 0.5), (1, 0.5)]);
        let b = pmf(&[(0, 1.0)]);
        assert_eq!(compare_pmf(&a, &b).unwrap().total_variation, 0.5);
    }

    #[test]
    fn tv_is_symmetric() {
        let a = pmf(&[(0, 0.3), (1, 0.3), (2, 0.4)]);
        let b = pmf(&[(0, 0.6), (3, 0.4)]);
        let ab = compare_pmf(&a, &b).unwrap().total_variation;
        let ba = compare_pmf(&b, &a).unwrap().total_variation;
        assert_eq!(ab, ba);
        assert!(ab <= 1.0);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let a = pmf(&[(0, 0.5)]);
        let b = pmf(&[(0, 1.0)]);
        assert!(compare_pmf(&a, &b).is_err());
    }

    #[test]
    fn radius_named_values() {
        let (c, phi) = radius_bound(0.5).unwrap();
        assert!((c - 7.389_056_098_930_65).abs() < 1e-10);
        assert!((phi - 0.135_335_283_236_61).abs() < 1e-10);
        let (c, phi) = radius_bound(0.8).unwrap();
        assert!((c - 10.0).abs() < 1e-12);
        assert!((phi - 0.1).abs() < 1e-13);
        let (c, _) = radius_bound(1e-9).unwrap();
        assert!((c - std::f64::consts::E.powi(2)).abs() < 1e-12);
        assert!(radius_bound(0.0).is_err());
        assert!(radius_bound(1.0).is_err());
    }

    #[test]
    fn radius_is_monotone() {
        let mut last_c = 0.0;
        let mut last_phi = 1.0;
        for i in 1..100 {
            let rho = i as f64 / 100.0;
            let (c, phi) = radius_bound(rho).unwrap();
            assert!(c >= last_c);
            assert!(phi <= last_phi);
            last_c = c;
            last_phi = phi;
        }
    }

    #[test]
    fn bound_check_passes_and_pins_known_ratios() {
        let params = ModelParamsExact::new(rat(1, 2), rat(1, 10)).unwrap();
        let tables = build_tables(&params, 6);
        let grid = unit_interval_grid(64);
        let report = coefficient_bound_check(&tables, &grid);
        assert_eq!(report.violations, 0);
        // order 0 is the constant 1, so the ratio is exactly 1
        assert_eq!(report.per_order[0].max_ratio, 1.0);
        // order 1: max of |rho (z-1)/(1-rho)| = 2 rho/(1-rho) at z = -1,
        // |rho| and the derivative rho/(1-rho), against C
        let (c, _) = radius_bound(0.5).unwrap();
        assert!((report.per_order[1].max_ratio - 2.0 / c).abs() < 1e-12);
    }

    #[test]
    fn grid_is_symmetric_with_endpoints() {
        let grid = unit_interval_grid(64);
        assert_eq!(grid.len(), 64);
        assert_eq!(grid[0], -1.0);
        assert_eq!(grid[63], 1.0);
        assert!((grid[31] + grid[32]).abs() < 1e-15);
    }

    #[test]
    fn end_to_end_params_must_agree() {
        let exact = ModelParamsExact::new(rat(1, 2), rat(1, 10)).unwrap();
        let float = ModelParamsFloat::new(0.51, 0.1).unwrap();
        assert!(end_to_end_compare(&exact, &float, 2, 1000, 10, 1).is_err());
    }

    #[test]
    fn end_to_end_q_zero_matches_closed_form() {
        let exact = ModelParamsExact::new(rat(1, 2), rat(0, 1)).unwrap();
        let float = ModelParamsFloat::new(0.5, 0.0).unwrap();
        let report = end_to_end_compare(&exact, &float, 4, 200_000, 1000, 11).unwrap();
        // both sides are the two-point pmf {1/2, 1/2}; only Monte Carlo
        // noise separates them
        assert!(report.tv < 3.0 * (0.25f64 / 200_000.0).sqrt());
        assert!(report.radius.q_inside_radius);
        assert!(!report.slow_convergence_warning);
    }
}
