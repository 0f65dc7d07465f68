use crate::error::{Error, Result};
use crate::lmr::LmrConfig;

/// `d r (t - delta)^2 / (delta^2 ln(d t / (r delta))) + t^2 / delta^2`, the
/// tomography sample bound with its leading constant set to one.
pub fn tomography_bound(d: usize, r: usize, t: f64, delta: f64) -> Result<f64> {
    if r == 0 || r > d {
        return Err(Error::invalid(format!("need d >= r >= 1, got d = {d}, r = {r}")));
    }
    if !(delta > 0.0 && t > delta && t.is_finite()) {
        return Err(Error::invalid("need t > delta > 0"));
    }
    let (d, r) = (d as f64, r as f64);
    let arg = d * t / (r * delta);
    if arg <= 1.0 {
        return Err(Error::invalid("log argument d t / (r delta) must exceed 1"));
    }
    Ok(d * r * (t - delta).powi(2) / (delta * delta * arg.ln()) + t * t / (delta * delta))
}

/// One row of the budget comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetRow {
    pub delta: f64,
    pub lmr_budget: u64,
    pub tomography: f64,
    pub ratio: f64,
}

/// Partial-swap copy budget against the tomography bound for each `delta`.
pub fn compare_budgets(d: usize, r: usize, t: f64, deltas: &[f64]) -> Result<Vec<BudgetRow>> {
    deltas
        .iter()
        .map(|&delta| {
            let lmr_budget = LmrConfig::new(t, delta)?.steps();
            let tomography = tomography_bound(d, r, t, delta)?;
            Ok(BudgetRow { delta, lmr_budget, tomography, ratio: tomography / lmr_budget as f64 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominated_by_second_term_floor() {
        assert!(tomography_bound(2, 1, 1.0, 0.01).unwrap() > 1e4);
    }

    #[test]
    fn quadratic_in_inverse_delta() {
        let mut delta = 1e-3;
        let mut last = 0.0;
        for _ in 0..6 {
            let ratio = tomography_bound(2, 1, 1.0, delta / 2.0).unwrap() / tomography_bound(2, 1, 1.0, delta).unwrap();
            assert!(ratio < 4.0 && ratio > last);
            last = ratio;
            delta /= 2.0;
        }
        assert!((last - 4.0).abs() < 0.1);
    }

    #[test]
    fn ratio_to_budget_grows() {
        let rows = compare_budgets(2, 1, 1.0, &[0.1, 0.01, 0.001, 1e-4]).unwrap();
        assert!(rows.windows(2).all(|w| w[1].ratio > w[0].ratio));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(tomography_bound(2, 3, 1.0, 0.1).is_err());
        assert!(tomography_bound(2, 1, 0.1, 0.1).is_err());
        assert!(tomography_bound(2, 0, 1.0, 0.1).is_err());
    }
}
