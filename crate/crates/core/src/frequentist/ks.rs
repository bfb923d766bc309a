use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::kolmogorov_sf;
use crate::weibull::WeibullParams;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// One-sample Kolmogorov-Smirnov test of a complete sample against a fully
/// specified Weibull law. The p-value uses the asymptotic Kolmogorov law and
/// ignores that the parameters may have been estimated from the same data.
pub fn ks_test(data: &[f64], p: &WeibullParams) -> Result<KsResult> {
    if data.is_empty() {
        return Err(Error::domain("K-S test needs at least one observation"));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut stat: f64 = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let f = p.cdf(*x)?;
        let i = i as f64;
        stat = stat.max((i + 1.0) / n - f).max(f - i / n);
    }
    Ok(KsResult {
        statistic: stat,
        p_value: kolmogorov_sf(n.sqrt() * stat),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_at_midpoint_quantiles() {
        let p = WeibullParams::new(1.5, 1.0).unwrap();
        let n = 40;
        let data: Vec<f64> = (1..=n)
            .map(|i| p.quantile((i as f64 - 0.5) / n as f64).unwrap())
            .collect();
        let r = ks_test(&data, &p).unwrap();
        assert!((r.statistic - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn single_point_and_empty() {
        let p = WeibullParams::new(1.0, 1.0).unwrap();
        let r = ks_test(&[1.0], &p).unwrap();
        assert!((r.statistic - (1.0 - (-1.0f64).exp()).max((-1.0f64).exp())).abs() < 1e-15);
        assert!((0.0..=1.0).contains(&r.p_value));
        assert!(ks_test(&[], &p).is_err());
    }
}
