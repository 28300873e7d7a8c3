//! Nested composite Simpson quadrature in time with a doubling certificate.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeQuadrature {
    /// Initial number of subintervals, rounded up to a power of two `≥ 2`.
    pub n_start: usize,
    pub n_max: usize,
    pub rtol: f64,
}

impl Default for TimeQuadrature {
    fn default() -> Self {
        Self {
            n_start: 64,
            n_max: 1 << 20,
            rtol: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Subintervals of the level that met the tolerance.
    pub n_t: usize,
    pub rel_change: f64,
}

fn sample<const K: usize, F: Fn(f64) -> [f64; K] + Sync>(
    f: &F,
    a: f64,
    b: f64,
    n: usize,
    idx: impl IndexedParallelIterator<Item = usize>,
) -> Vec<[f64; K]> {
    let len = b - a;
    idx.map(|i| f(a + len * (i as f64 / n as f64))).collect()
}

fn level_value<const K: usize>(samples: &[[f64; K]], k: usize, h: f64, p: f64) -> f64 {
    if p.is_infinite() {
        return samples.iter().map(|s| s[k]).fold(0.0, f64::max);
    }
    let n = samples.len() - 1;
    let pw = |v: f64| if p == 2.0 { v * v } else { v.powf(p) };
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, s) in samples.iter().enumerate().take(n).skip(1) {
        if i % 2 == 1 {
            odd += pw(s[k]);
        } else {
            even += pw(s[k]);
        }
    }
    let integral = h / 3.0 * (pw(samples[0][k]) + 4.0 * odd + 2.0 * even + pw(samples[n][k]));
    integral.max(0.0).powf(1.0 / p)
}

fn rel_change(cur: f64, prev: f64) -> f64 {
    if cur == prev {
        0.0
    } else {
        (cur - prev).abs() / cur.abs().max(f64::MIN_POSITIVE)
    }
}

/// `(∫_a^b f(t)^p dt)^{1/p}` for a nonnegative `f`, or `max f` at `p = ∞`.
///
/// The sample count doubles, reusing earlier samples, until two successive
/// values differ by less than `rtol` relatively.
pub fn lp_in_time<F>(f: F, interval: (f64, f64), p: f64, quad: &TimeQuadrature) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    let [r] = lp_in_time_many(|t| [f(t)], interval, p, quad)?;
    Ok(r)
}

/// Several integrands sharing their sample points; refinement continues
/// until every component meets the tolerance.
pub fn lp_in_time_many<const K: usize, F>(
    f: F,
    (a, b): (f64, f64),
    p: f64,
    quad: &TimeQuadrature,
) -> Result<[QuadratureResult; K]>
where
    F: Fn(f64) -> [f64; K] + Sync,
{
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("time exponent must be >= 1, got {p}")));
    }
    if !(b > a) {
        return Err(Error::Usage(format!("empty time interval [{a}, {b}]")));
    }
    let mut n = quad.n_start.max(2).next_power_of_two();
    if n > quad.n_max {
        return Err(Error::Usage(format!(
            "initial time samples {n} exceed the cap {}",
            quad.n_max
        )));
    }
    let mut samples = sample(&f, a, b, n, (0..n + 1).into_par_iter());
    let mut prev: [f64; K] = std::array::from_fn(|k| level_value(&samples, k, (b - a) / n as f64, p));
    loop {
        let n2 = 2 * n;
        if n2 > quad.n_max {
            // only reachable when the start level already sits at the cap
            return Err(Error::Convergence {
                n_t: n,
                last: prev[0],
                previous: f64::NAN,
            });
        }
        let fresh = sample(&f, a, b, n2, (0..n).into_par_iter().map(|i| 2 * i + 1));
        let mut merged = Vec::with_capacity(n2 + 1);
        for i in 0..n {
            merged.push(samples[i]);
            merged.push(fresh[i]);
        }
        merged.push(samples[n]);
        samples = merged;
        n = n2;
        let cur: [f64; K] = std::array::from_fn(|k| level_value(&samples, k, (b - a) / n as f64, p));
        let rel: [f64; K] = std::array::from_fn(|k| rel_change(cur[k], prev[k]));
        if rel.iter().all(|&r| r < quad.rtol) {
            return Ok(std::array::from_fn(|k| QuadratureResult {
                value: cur[k],
                n_t: n,
                rel_change: rel[k],
            }));
        }
        if 2 * n > quad.n_max {
            let worst = (0..K).max_by(|&i, &j| rel[i].total_cmp(&rel[j])).unwrap_or(0);
            return Err(Error::Convergence {
                n_t: n,
                last: cur[worst],
                previous: prev[worst],
            });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand() {
        let r = lp_in_time(|_| 2.0, (0.25, 0.75), 3.0, &TimeQuadrature::default()).unwrap();
        assert!((r.value - 2.0 * 0.5f64.powf(1.0 / 3.0)).abs() < 1e-14);
        assert_eq!(r.n_t, 128);
    }

    #[test]
    fn smooth_integrand_converges() {
        let quad = TimeQuadrature {
            rtol: 1e-12,
            ..Default::default()
        };
        let r = lp_in_time(|t| (1.0 + 0.5 * (20.0 * t).cos()).abs(), (0.0, 1.0), 2.0, &quad).unwrap();
        let exact = (1.0 + 0.25 * 0.5 + (20.0f64).sin() / 20.0 + 0.25 * (40.0f64).sin() / 80.0).sqrt();
        assert!((r.value - exact).abs() < 1e-10, "{} vs {exact}", r.value);
    }

    #[test]
    fn sup_and_failures() {
        let r = lp_in_time(|t| t, (0.0, 1.0), f64::INFINITY, &TimeQuadrature::default()).unwrap();
        assert_eq!(r.value, 1.0);
        let tight = TimeQuadrature {
            n_start: 4,
            n_max: 16,
            rtol: 1e-15,
        };
        let err = lp_in_time(|t| (1e3 * t).sin().abs(), (0.0, 1.0), 2.0, &tight).unwrap_err();
        assert!(matches!(err, Error::Convergence { n_t: 16, .. }));
        assert!(matches!(
            lp_in_time(|t| t, (0.0, 1.0), 0.5, &TimeQuadrature::default()),
            Err(Error::Domain(_))
        ));
    }
}
