//! Space-time norms of products of propagated states, sequence norms and
//! Sobolev norms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{FourierState, GridField};
use crate::torus::sobolev_weight;

pub mod engine;
pub mod quadrature;
pub mod resonance;

pub use engine::{even_ceiling, ProductEvaluator};
pub use quadrature::{lp_in_time, lp_in_time_many, QuadratureResult, TimeQuadrature};
pub use resonance::{interval_kernel, PairSums, ResonanceSum, SmoothWindow};

/// `(G^{-d} Σ |u(x_m)|^q)^{1/q}`, or the grid maximum for `q = ∞`.
pub fn space_norm(field: &GridField, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::Domain(format!("space exponent must be >= 1, got {q}")));
    }
    if field.values.is_empty() {
        return Ok(0.0);
    }
    let m = engine::mean_pow(&field.values, q);
    Ok(if q.is_infinite() { m } else { m.powf(1.0 / q) })
}

/// `(Σ_k c_k^p)^{1/p}`, or `max c_k` at `p = ∞`.
pub fn seq_lp(values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    }
    values.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `(Σ ⟨n⟩^{2s} |φ̂(n)|²)^{1/2}`.
pub fn h_s_norm(state: &FourierState, s: f64) -> f64 {
    state
        .iter()
        .map(|(n, c)| sobolev_weight(n, s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedNormSpec {
    pub p: f64,
    pub q: f64,
    pub tau: (f64, f64),
    /// Initial subinterval count; derived from the time bandwidth when unset.
    pub n_t: Option<usize>,
    pub max_n_t: usize,
    /// Spatial grid size per axis; derived from the exactness rule when unset.
    pub grid_per_dim: Option<usize>,
    pub rtol: f64,
    /// Allow the separable fast path for rank-one box data.
    pub allow_tensor: bool,
}

impl MixedNormSpec {
    pub fn new(p: f64, q: f64, tau: (f64, f64)) -> Self {
        Self {
            p,
            q,
            tau,
            n_t: None,
            max_n_t: 1 << 20,
            grid_per_dim: None,
            rtol: 5e-3,
            allow_tensor: true,
        }
    }

    pub fn with_rtol(mut self, rtol: f64) -> Self {
        self.rtol = rtol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0) || !(self.q >= 1.0) {
            return Err(Error::Domain(format!(
                "exponents must satisfy p, q >= 1, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        let (a, b) = self.tau;
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::Usage(format!("time interval [{a}, {b}] must satisfy 0 <= t0 < t1 <= 1")));
        }
        if self.n_t.is_some_and(|n| n < 2) {
            return Err(Error::Usage("n_t must be at least 2".into()));
        }
        if !(self.rtol > 0.0) {
            return Err(Error::Usage("convergence_rtol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub n_t_used: usize,
    pub rel_change: f64,
    pub grid: Vec<usize>,
    pub path: &'static str,
    /// True when the spatial quadrature is exact (even integer `q`).
    pub space_exact: bool,
}

impl NormValue {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Starting subinterval count: at least 64 and at least four samples per
/// period of the fastest time frequency of `‖w(t)‖_q^p`.
pub fn initial_time_samples(spread: f64, p: f64, q: f64, len: f64) -> usize {
    let pe = if p.is_infinite() { 2.0 } else { p };
    let qe = if q.is_infinite() { 2.0 } else { q };
    let omega = spread * pe.max(qe).max(2.0) / 2.0;
    let want = (4.0 * omega * len).ceil();
    if want <= 64.0 {
        64
    } else if want >= (1u64 << 40) as f64 {
        1 << 40
    } else {
        (want as usize).next_power_of_two()
    }
}

/// `‖∏_j e^{2πiQt}φ_j‖_{L^p(τ, L^q(T^d))}`.
pub fn mixed_norm(factors: &[FourierState], spec: &MixedNormSpec) -> Result<NormValue> {
    spec.validate()?;
    let ev = ProductEvaluator::new(factors, spec.q, spec.grid_per_dim, spec.allow_tensor)?;
    let len = spec.tau.1 - spec.tau.0;
    let n0 = spec
        .n_t
        .unwrap_or_else(|| initial_time_samples(ev.spread(), spec.p, spec.q, len))
        .min(spec.max_n_t / 2)
        .max(2);
    let quad = TimeQuadrature {
        n_start: n0,
        n_max: spec.max_n_t,
        rtol: spec.rtol,
    };
    let r = lp_in_time(|t| ev.eval(t), spec.tau, spec.p, &quad)?;
    Ok(NormValue {
        value: r.value,
        n_t_used: r.n_t,
        rel_change: r.rel_change,
        grid: ev.grid().to_vec(),
        path: ev.path(),
        space_exact: ev.is_exact(),
    })
}
