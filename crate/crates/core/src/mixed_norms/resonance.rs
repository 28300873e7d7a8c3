//! Exact `L²_{t,x}` norms of products through resonance sums.
//!
//! For `w(t,x) = Π_j Σ φ̂_j(n_j) e^{2πi(n_j·x + Q(n_j)t)}`, Plancherel in `x`
//! groups the tuples `(n_1,…,n_J)` by `a = Σ n_j`, and
//! `∫ W(t) ‖w(t)‖²_{L²_x} dt = Σ_a Σ_{i,j} c_i c̄_j Ŵ(Ω_i − Ω_j)` with
//! `Ω = Σ Q(n_j)` and `Ŵ(x) = ∫ W(t) e^{2πixt} dt`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{cis_turns, FourierState};
use crate::torus::LatticePoint;

fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-6 {
        1.0 - y * y / 6.0
    } else {
        y.sin() / y
    }
}

/// `x ↦ ∫_a^b e^{2πixt} dt`.
pub fn interval_kernel(a: f64, b: f64) -> impl Fn(f64) -> Complex64 + Sync + Copy {
    move |x| {
        let len = b - a;
        cis_turns(x * (a + b) / 2.0) * (len * sinc(PI * x * len))
    }
}

/// A smooth cutoff equal to 1 on `[a, b]`, supported in `[a − m, b + m]`,
/// with values in `[0, 1]`: the indicator of `[a − m/2, b + m/2]` convolved
/// with a Hann bump of width `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothWindow {
    pub a: f64,
    pub b: f64,
    pub margin: f64,
}

impl SmoothWindow {
    pub fn new(a: f64, b: f64, margin: f64) -> Result<Self> {
        if !(b > a) || !(margin > 0.0) {
            return Err(Error::Usage(format!("bad window [{a}, {b}] with margin {margin}")));
        }
        Ok(Self { a, b, margin })
    }

    fn bump_cdf(&self, s: f64) -> f64 {
        let m = self.margin;
        let s = s.clamp(-m / 2.0, m / 2.0);
        0.5 + s / m + (2.0 * PI * s / m).sin() / (2.0 * PI)
    }

    pub fn value(&self, t: f64) -> f64 {
        let m = self.margin;
        let (lo, hi) = (self.a - m / 2.0, self.b + m / 2.0);
        (self.bump_cdf(t - lo) - self.bump_cdf(t - hi)).clamp(0.0, 1.0)
    }

    /// `Ŵ(x) = ∫ W(t) e^{2πixt} dt`.
    pub fn fourier(&self, x: f64) -> Complex64 {
        let m = self.margin;
        let xm = x * m;
        let bump = sinc(PI * xm) + 0.5 * sinc(PI * (xm + 1.0)) + 0.5 * sinc(PI * (xm - 1.0));
        interval_kernel(self.a - m / 2.0, self.b + m / 2.0)(x) * bump
    }
}

struct Bucket {
    omega: Vec<f64>,
    amp: Vec<Complex64>,
    tag: Vec<i64>,
}

/// Kernel sums split by whether the two tuples carry the same tag.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairSums {
    pub same_tag: f64,
    pub cross_tag: f64,
}

impl PairSums {
    pub fn total(&self) -> f64 {
        self.same_tag + self.cross_tag
    }
}

pub struct ResonanceSum {
    buckets: Vec<Bucket>,
    tuples: usize,
}

impl ResonanceSum {
    pub fn new(factors: &[FourierState]) -> Result<Self> {
        Self::with_tags(factors, |_| 0)
    }

    /// Tags every tuple by a function of its first frequency `n_1`.
    pub fn with_tags(factors: &[FourierState], tag: impl Fn(&LatticePoint) -> i64) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::Usage("a product needs at least one factor".into()));
        };
        if factors.iter().any(|f| f.torus() != first.torus()) {
            return Err(Error::Usage("all factors must live on the same torus".into()));
        }
        let torus = first.torus();
        let mut tuples: Vec<(LatticePoint, f64, Complex64, i64)> =
            first.iter().map(|(n, &c)| (*n, torus.q(n), c, tag(n))).collect();
        for f in &factors[1..] {
            let mut next = Vec::with_capacity(tuples.len() * f.len());
            for &(a, om, c, tg) in &tuples {
                for (n, &cn) in f.iter() {
                    next.push((a.add(n), om + torus.q(n), c * cn, tg));
                }
            }
            tuples = next;
        }
        let count = tuples.len();
        let mut map: BTreeMap<LatticePoint, Bucket> = BTreeMap::new();
        for (a, om, c, tg) in tuples {
            let b = map.entry(a).or_insert_with(|| Bucket {
                omega: Vec::new(),
                amp: Vec::new(),
                tag: Vec::new(),
            });
            b.omega.push(om);
            b.amp.push(c);
            b.tag.push(tg);
        }
        Ok(Self {
            buckets: map.into_values().collect(),
            tuples: count,
        })
    }

    pub fn tuple_count(&self) -> usize {
        self.tuples
    }

    pub fn pair_count(&self) -> usize {
        self.buckets.iter().map(|b| b.omega.len() * (b.omega.len() + 1) / 2).sum()
    }

    /// `‖w(t)‖²_{L²_x}`.
    pub fn norm_sq_at(&self, t: f64) -> f64 {
        self.buckets
            .iter()
            .map(|b| {
                b.omega
                    .iter()
                    .zip(&b.amp)
                    .map(|(&om, &c)| c * cis_turns(om * t))
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum()
    }

    /// `Σ_a Σ_{i,j} c_i c̄_j K(Ω_i − Ω_j)` for a kernel with `K(−x) = conj K(x)`.
    pub fn pair_sums<K: Fn(f64) -> Complex64 + Sync>(&self, kernel: K) -> PairSums {
        let k0 = kernel(0.0).re;
        let parts: Vec<PairSums> = self
            .buckets
            .par_iter()
            .map(|b| {
                let mut s = PairSums::default();
                let n = b.omega.len();
                for i in 0..n {
                    s.same_tag += b.amp[i].norm_sqr() * k0;
                    for j in i + 1..n {
                        let v = 2.0 * (b.amp[i] * b.amp[j].conj() * kernel(b.omega[i] - b.omega[j])).re;
                        if b.tag[i] == b.tag[j] {
                            s.same_tag += v;
                        } else {
                            s.cross_tag += v;
                        }
                    }
                }
                s
            })
            .collect();
        parts.iter().fold(PairSums::default(), |acc, s| PairSums {
            same_tag: acc.same_tag + s.same_tag,
            cross_tag: acc.cross_tag + s.cross_tag,
        })
    }

    /// `‖w‖²_{L²([a,b] × T^d)}`.
    pub fn interval_norm_sq(&self, a: f64, b: f64) -> f64 {
        self.pair_sums(interval_kernel(a, b)).total()
    }
}
