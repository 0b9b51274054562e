//! Hill estimator baseline.

use crate::error::{Error, Result};

fn sorted_desc(data: &[f64]) -> Result<Vec<f64>> {
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input("non-finite value in data".into()));
    }
    let mut xs = data.to_vec();
    xs.sort_by(|a, b| b.total_cmp(a));
    Ok(xs)
}

/// `α̂_H(k) = (k⁻¹ Σ_{i=1..k} i ln(X(i)/X(i+1)))⁻¹` on the descending order
/// statistics `X(1) ≥ X(2) ≥ …`. Ties at the top give `+∞`.
pub fn hill_estimate(data: &[f64], k: usize) -> Result<f64> {
    let n = data.len();
    if k == 0 || k + 1 > n {
        return Err(Error::Parameter(format!("k must satisfy 1 <= k <= n - 1 = {}, got {k}", n.saturating_sub(1))));
    }
    let xs = sorted_desc(data)?;
    if !(xs[k] > 0.0) {
        return Err(Error::Domain(format!("order statistic X({}) = {} is not positive", k + 1, xs[k])));
    }
    let total: f64 = (1..=k).map(|i| i as f64 * (xs[i - 1] / xs[i]).ln()).sum();
    Ok(k as f64 / total)
}

/// `(k, α̂_H(k))` for every admissible `k`: `1..=n-1`, or fewer when the data
/// contain non-positive values (only strictly positive upper order statistics
/// are used).
pub fn hill_plot(data: &[f64]) -> Result<Vec<(usize, f64)>> {
    if data.len() < 3 {
        return Err(Error::Parameter(format!("hill plot needs at least 3 values, got {}", data.len())));
    }
    let xs = sorted_desc(data)?;
    let positive = xs.iter().take_while(|&&x| x > 0.0).count();
    if positive < 2 {
        return Err(Error::Domain("fewer than two positive values".into()));
    }
    let mut total = 0.0;
    Ok((1..positive)
        .map(|k| {
            total += k as f64 * (xs[k - 1] / xs[k]).ln();
            (k, k as f64 / total)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> [f64; 3] {
        [3f64.exp(), 2f64.exp(), 1f64.exp()]
    }

    #[test]
    fn hand_example() {
        assert!((hill_estimate(&three(), 2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((hill_estimate(&three(), 1).unwrap() - 1.0).abs() < 1e-15);
        let plot = hill_plot(&three()).unwrap();
        assert_eq!(plot.len(), 2);
        assert_eq!(plot[0].0, 1);
        assert!((plot[0].1 - 1.0).abs() < 1e-15);
        assert!((plot[1].1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn order_does_not_matter() {
        let mut d: Vec<f64> = (1..=50).map(|i| (i as f64).powf(1.3)).collect();
        let a = hill_plot(&d).unwrap();
        d.reverse();
        assert_eq!(a, hill_plot(&d).unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(hill_estimate(&three(), 0), Err(Error::Parameter(_))));
        assert!(matches!(hill_estimate(&three(), 3), Err(Error::Parameter(_))));
        assert!(matches!(hill_estimate(&[5.0, 2.0, 0.0], 2), Err(Error::Domain(_))));
        assert!(matches!(hill_plot(&[1.0, 2.0]), Err(Error::Parameter(_))));
        assert!(matches!(hill_plot(&[1.0, -2.0, -3.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn non_positive_values_truncate_the_plot() {
        let plot = hill_plot(&[5.0, 4.0, 3.0, -1.0, 0.0, 2.0]).unwrap();
        assert_eq!(plot.len(), 3);
        assert_eq!(plot.last().unwrap().0, 3);
    }
}
