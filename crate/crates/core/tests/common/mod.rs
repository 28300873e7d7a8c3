//! Independent oracles for the integration tests: direct resonance sums and
//! composite Gauss–Legendre quadrature.

#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;

use irrtorus::{FourierState, FrequencyRegion, IrrationalTorus};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// `P_n` and `P_n'` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the `n`-point rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫_a^b f` with `panels` panels of the `nodes`-point rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, nodes: usize) -> f64 {
    let rule = gauss_legendre(nodes);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let mid = a + (i as f64 + 0.5) * h;
            rule.iter().map(|&(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

struct Factor {
    coeffs: Vec<Complex64>,
    /// `Σ α_j n_j²`, evaluated here rather than through the library.
    q: Vec<f64>,
}

/// `‖∏_j e^{2πiQt}φ_j‖²_{L²(T^d)}` as the sum over output frequencies of the
/// squared resonant tuple sums, `Σ_n |Σ_{n_1+…+n_m=n} ∏ c_j e^{2πiQ(n_j)t}|²`.
/// The index tables of the iterated convolution are built once.
pub struct ResonanceOracle {
    factors: Vec<Factor>,
    /// For each convolution stage, `(left slot, factor mode, output slot)`.
    stages: Vec<Vec<(usize, usize, usize)>>,
    sizes: Vec<usize>,
}

impl ResonanceOracle {
    pub fn new(states: &[FourierState]) -> Self {
        let alphas = states[0].torus().alphas().to_vec();
        let factors: Vec<Factor> = states
            .iter()
            .map(|s| Factor {
                coeffs: s.iter().map(|(_, c)| *c).collect(),
                q: s
                    .iter()
                    .map(|(n, _)| n.coords().iter().zip(&alphas).map(|(&k, a)| a * (k * k) as f64).sum())
                    .collect(),
            })
            .collect();
        let points: Vec<Vec<Vec<i64>>> = states
            .iter()
            .map(|s| s.iter().map(|(n, _)| n.coords().to_vec()).collect())
            .collect();
        let mut current = points[0].clone();
        let mut stages = Vec::new();
        let mut sizes = vec![current.len()];
        for next in &points[1..] {
            let mut slots: HashMap<Vec<i64>, usize> = HashMap::new();
            let mut out = Vec::new();
            let mut table = Vec::with_capacity(current.len() * next.len());
            for (i, a) in current.iter().enumerate() {
                for (j, b) in next.iter().enumerate() {
                    let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    let len = out.len();
                    let slot = *slots.entry(sum.clone()).or_insert_with(|| {
                        out.push(sum);
                        len
                    });
                    table.push((i, j, slot));
                }
            }
            stages.push(table);
            sizes.push(out.len());
            current = out;
        }
        Self { factors, stages, sizes }
    }

    pub fn norm_sq_at(&self, t: f64) -> f64 {
        let phased = |f: &Factor| -> Vec<Complex64> {
            f.coeffs
                .iter()
                .zip(&f.q)
                .map(|(c, q)| c * Complex64::from_polar(1.0, 2.0 * PI * q * t))
                .collect()
        };
        let mut acc = phased(&self.factors[0]);
        for (s, table) in self.stages.iter().enumerate() {
            let b = phased(&self.factors[s + 1]);
            let mut out = vec![Complex64::default(); self.sizes[s + 1]];
            for &(i, j, slot) in table {
                out[slot] += acc[i] * b[j];
            }
            acc = out;
        }
        acc.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `(∫_a^b ‖∏_j u_j(t)‖_{L^{2m}}^{p} dt)^{1/p}` for `m`-fold repetition: the
/// `L^{2m}` norm of `u` is the `m`-th root of the `L²` norm of `u^m`.
pub fn oracle_mixed_norm(oracle: &ResonanceOracle, root: f64, p: f64, tau: (f64, f64), panels: usize) -> f64 {
    integrate(|t| oracle.norm_sq_at(t).powf(p / (2.0 * root)), tau.0, tau.1, panels, 8).powf(1.0 / p)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_state(torus: &IrrationalTorus, region: &FrequencyRegion, rng: &mut ChaCha8Rng) -> FourierState {
    let points = region.points();
    FourierState::from_coeffs(torus.clone(), points.into_iter().map(|n| (n, gaussian(rng)))).unwrap()
}

/// Direct evaluation `Σ c_n e^{2πin·x}`.
pub fn direct_sum(state: &FourierState, x: &[f64]) -> Complex64 {
    state
        .iter()
        .map(|(n, c)| {
            let arg: f64 = n.coords().iter().zip(x).map(|(&k, &y)| k as f64 * y).sum();
            c * Complex64::from_polar(1.0, 2.0 * PI * arg)
        })
        .sum()
}
