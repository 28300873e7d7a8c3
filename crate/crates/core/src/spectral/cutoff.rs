//! Smooth Littlewood–Paley cutoffs.

use crate::error::{Error, Result};
use crate::torus::LatticePoint;

#[inline]
fn smooth_step_kernel(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// The base bump `ψ`: even, smooth, `ψ = 1` on `|s| ≤ 1`, `ψ = 0` on `|s| ≥ 2`,
/// non-increasing in `|s|`.
pub fn bump(s: f64) -> f64 {
    let a = s.abs();
    let up = smooth_step_kernel(2.0 - a);
    let down = smooth_step_kernel(a - 1.0);
    up / (up + down)
}

pub fn is_dyadic(n: u64) -> bool {
    n >= 1 && n.is_power_of_two()
}

/// The dyadic piece `ψ_N` of the partition of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicCutoff {
    n: u64,
}

impl DyadicCutoff {
    pub fn new(n: u64) -> Result<Self> {
        if !is_dyadic(n) {
            return Err(Error::Usage(format!("cutoff scale must be a dyadic integer >= 1, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn scale(&self) -> u64 {
        self.n
    }

    /// `ψ_N` as a function of `|ξ|`.
    pub fn eval_radius(&self, r: f64) -> f64 {
        let n = self.n as f64;
        if self.n == 1 {
            bump(r)
        } else {
            bump(r / n) - bump(2.0 * r / n)
        }
    }

    pub fn eval(&self, xi: &LatticePoint) -> f64 {
        self.eval_radius(xi.norm())
    }

    /// Radii outside which `ψ_N` vanishes: `[N/2, 2N]`, or `[0, 2]` for `N = 1`.
    pub fn support_radii(&self) -> (f64, f64) {
        if self.n == 1 {
            (0.0, 2.0)
        } else {
            (self.n as f64 / 2.0, 2.0 * self.n as f64)
        }
    }
}

/// Symbol of `P_{≤N} = Σ_{M ≤ N} P_M`, summed piece by piece.
pub fn low_pass_symbol(n: u64, r: f64) -> Result<f64> {
    if !is_dyadic(n) {
        return Err(Error::Usage(format!("low-pass scale must be dyadic, got {n}")));
    }
    let mut total = 0.0;
    let mut m = 1;
    while m <= n {
        total += DyadicCutoff { n: m }.eval_radius(r);
        m *= 2;
    }
    Ok(total)
}
