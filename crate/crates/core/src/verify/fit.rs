//! Least-squares power-law fits in log₂ coordinates.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|log₂ value − fitted|` over the points.
    pub max_residual: f64,
}

impl Fit {
    /// The fitted `log₂ value` at a scale.
    pub fn predict_log2(&self, scale: f64) -> f64 {
        self.intercept + self.slope * scale.log2()
    }
}

/// Fits `log₂ value = intercept + slope · log₂ scale`.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<Fit> {
    if points.len() < 3 {
        return Err(Error::Usage(format!(
            "a scaling fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(s, v)) = points.iter().find(|&&(s, v)| !(s > 0.0) || !(v > 0.0)) {
        return Err(Error::Data(format!(
            "scaling fit needs positive scales and values, got ({s}, {v})"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log2()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Data("scaling fit needs at least two distinct scales".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(Fit {
        slope,
        intercept,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = [2.0f64, 4.0, 8.0, 16.0].iter().map(|&s| (s, s.powf(1.25))).collect();
        let f = fit_scaling(&pts).unwrap();
        assert!((f.slope - 1.25).abs() < 1e-12);
        assert!(f.intercept.abs() < 1e-12);
        assert!(f.max_residual < 1e-12);
        let flat = fit_scaling(&[(1.0, 3.0), (2.0, 3.0), (4.0, 3.0)]).unwrap();
        assert_eq!(flat.slope, 0.0);
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts: Vec<_> = (1..=8)
            .map(|i| {
                let s = (1u64 << i) as f64;
                (s, 3.0 * s.powf(1.5) * (1.0 + rng.gen_range(-1e-3..1e-3)))
            })
            .collect();
        assert!((fit_scaling(&pts).unwrap().slope - 1.5).abs() < 0.01);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(fit_scaling(&[(1.0, 1.0), (2.0, 0.0), (4.0, 1.0)]), Err(Error::Data(_))));
        assert!(matches!(fit_scaling(&[(1.0, 1.0), (2.0, 1.0)]), Err(Error::Usage(_))));
    }
}
