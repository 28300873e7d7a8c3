//! Level-set lattice counts, exponential sums and the window of the point
//! estimate `‖#S_k‖_{ℓ^p} ≲ ‖Σ e^{2πif(n)t}‖_{L^{p'}(I)}`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{pow2_above, GridFft};
use crate::mixed_norms::{initial_time_samples, lp_in_time, lp_in_time_many, seq_lp, QuadratureResult, TimeQuadrature};
use crate::spectral::{cis_turns, FrequencyRegion};
use crate::torus::{IrrationalTorus, LatticePoint};
use crate::verify::{fit_scaling, trial_rng, Fit};

/// Counts `#{n ∈ S : |f(n) − k| ≤ r}` for every integer `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetFamily {
    pub r: f64,
    pub set_size: usize,
    /// Nonzero counts only.
    pub counts: BTreeMap<i64, u64>,
    /// `r < 1`: outside the range where the point estimate is asserted.
    pub small_r: bool,
}

impl LevelSetFamily {
    pub fn count(&self, k: i64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        let v: Vec<f64> = self.counts.values().map(|&c| c as f64).collect();
        seq_lp(&v, p)
    }
}

/// `values` holds `f(n)` for the points of `S`.
pub fn level_set_counts(values: &[f64], r: f64) -> LevelSetFamily {
    let mut counts = BTreeMap::new();
    for &v in values {
        let lo = (v - r).ceil() as i64;
        let hi = (v + r).floor() as i64;
        for k in lo..=hi {
            *counts.entry(k).or_insert(0) += 1;
        }
    }
    LevelSetFamily {
        r,
        set_size: values.len(),
        counts,
        small_r: r < 1.0,
    }
}

pub fn quadratic_values(torus: &IrrationalTorus, points: &[LatticePoint]) -> Vec<f64> {
    points.iter().map(|n| torus.q(n)).collect()
}

/// `η = c·χ_{[−a,a]} ∗ χ_{[−a,a]}` with `a = 1/(4r)`, `c = π²r²`, so that
/// `η̂ ≥ 1` on `[−r, r]` with equality at `|τ| = r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub r: f64,
    pub a: f64,
    pub c: f64,
}

pub fn make_window(r: f64) -> Result<Window> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("window radius must be positive, got {r}")));
    }
    Ok(Window {
        r,
        a: 1.0 / (4.0 * r),
        c: PI * PI * r * r,
    })
}

impl Window {
    pub fn eta(&self, t: f64) -> f64 {
        self.c * (2.0 * self.a - t.abs()).max(0.0)
    }

    pub fn eta_hat(&self, tau: f64) -> f64 {
        if tau == 0.0 {
            return self.c * 4.0 * self.a * self.a;
        }
        let s = (2.0 * PI * self.a * tau).sin() / (PI * tau);
        self.c * s * s
    }

    /// The support `I = [−2a, 2a]`.
    pub fn interval(&self) -> (f64, f64) {
        (-2.0 * self.a, 2.0 * self.a)
    }

    pub fn sup_eta(&self) -> f64 {
        2.0 * self.a * self.c
    }
}

/// `Σ e^{2πi v t}` with Neumaier-compensated accumulation.
pub fn exp_sum(values: &[f64], t: f64) -> Complex64 {
    let (mut re, mut ce_re, mut im, mut ce_im) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let add = |sum: &mut f64, comp: &mut f64, x: f64| {
        let s = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - s) + x;
        } else {
            *comp += (x - s) + *sum;
        }
        *sum = s;
    };
    for &v in values {
        let z = cis_turns(v * t);
        add(&mut re, &mut ce_re, z.re);
        add(&mut im, &mut ce_im, z.im);
    }
    Complex64::new(re + ce_re, im + ce_im)
}

fn value_spread(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

fn quadrature_for(values: &[f64], p: f64, (a, b): (f64, f64), quad: &TimeQuadrature) -> TimeQuadrature {
    TimeQuadrature {
        n_start: initial_time_samples(value_spread(values), p, 2.0, b - a)
            .max(quad.n_start)
            .min(quad.n_max / 2),
        ..*quad
    }
}

/// `‖Σ e^{2πif(n)t}‖_{L^{p'}(I)}`.
pub fn exp_sum_lp_norm(values: &[f64], p_dual: f64, interval: (f64, f64), quad: &TimeQuadrature) -> Result<QuadratureResult> {
    let q = quadrature_for(values, p_dual, interval, quad);
    lp_in_time(|t| exp_sum(values, t).norm(), interval, p_dual, &q)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointEstimate {
    pub lhs: f64,
    /// `‖η·Σ e^{2πif(n)t}‖_{L^{p'}(I)}`.
    pub intermediate: f64,
    pub rhs: f64,
    pub sup_eta: f64,
    pub ratio: f64,
    pub chain_holds: bool,
    pub n_t: usize,
}

/// Evaluates both sides of the point estimate and the middle term of its
/// proof chain `LHS ≤ ‖ηS‖_{L^{p'}(I)} ≤ sup η · RHS`, each inequality
/// allowed a relative slack `tol`.
pub fn point_estimate_check(values: &[f64], r: f64, p: f64, tol: f64, quad: &TimeQuadrature) -> Result<PointEstimate> {
    point_estimate_check_with(values, |t| exp_sum(values, t), r, p, tol, quad)
}

/// As [`point_estimate_check`], with the exponential sum supplied by `sum`,
/// which must equal `Σ e^{2πi v t}` over `values`.
pub fn point_estimate_check_with<S>(values: &[f64], sum: S, r: f64, p: f64, tol: f64, quad: &TimeQuadrature) -> Result<PointEstimate>
where
    S: Fn(f64) -> Complex64 + Sync,
{
    if !(p >= 2.0) {
        return Err(Error::Domain(format!("point estimate needs p >= 2, got {p}")));
    }
    if !(r >= 1.0) {
        return Err(Error::Domain(format!("point estimate needs r >= 1, got {r}")));
    }
    let w = make_window(r)?;
    let lhs = level_set_counts(values, r).lp_norm(p);
    let p_dual = if p.is_infinite() { 1.0 } else { p / (p - 1.0) };
    let interval = w.interval();
    let q = quadrature_for(values, p_dual, interval, quad);
    let [mid, rhs] = lp_in_time_many(
        |t| {
            let s = sum(t).norm();
            [w.eta(t) * s, s]
        },
        interval,
        p_dual,
        &q,
    )?;
    let sup_eta = w.sup_eta();
    let chain_holds = lhs <= mid.value * (1.0 + tol) && mid.value <= sup_eta * rhs.value * (1.0 + tol);
    Ok(PointEstimate {
        lhs,
        intermediate: mid.value,
        rhs: rhs.value,
        sup_eta,
        ratio: lhs / rhs.value,
        chain_holds,
        n_t: mid.n_t,
    })
}

/// `t ↦ Σ_{n∈S} e^{2πiQ(n)t}` using `e^{2πiQ(n)t} = Π_j e^{2πiα_j n_j² t}`
/// with per-axis phase tables over the coordinate range of `S`.
pub fn quadratic_exp_sum<'a>(torus: &'a IrrationalTorus, points: &'a [LatticePoint]) -> impl Fn(f64) -> Complex64 + Sync + 'a {
    let h = points.iter().map(|n| n.max_abs()).max().unwrap_or(0);
    move |t| {
        let tables: Vec<Vec<Complex64>> = torus
            .alphas()
            .iter()
            .map(|a| (-h..=h).map(|c| cis_turns(a * (c * c) as f64 * t)).collect())
            .collect();
        points
            .iter()
            .map(|n| {
                n.coords()
                    .iter()
                    .zip(&tables)
                    .map(|(&c, tab)| tab[(c + h) as usize])
                    .product::<Complex64>()
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointTrial {
    pub trial: u64,
    pub p: f64,
    pub r: f64,
    pub set_size: usize,
    pub lhs: f64,
    pub intermediate: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub trials: u64,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub max_set_size: usize,
    pub half_width: i64,
    pub radii: Vec<f64>,
    pub exponents: Vec<f64>,
    pub tol: f64,
    pub quad: TimeQuadrature,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            seed: 0,
            dims: vec![2, 3],
            max_set_size: 512,
            half_width: 16,
            radii: vec![1.0, 2.0, 4.0],
            exponents: vec![2.0, 3.0, 4.0],
            tol: 1e-6,
            quad: TimeQuadrature {
                n_start: 64,
                n_max: 1 << 22,
                rtol: 1e-7,
            },
        }
    }
}

/// Random sets `S ⊂ [−h, h]^d` with `f = Q` on the generic torus.
pub fn point_estimate_trials(cfg: &TrialConfig) -> Result<Vec<PointTrial>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let d = *cfg.dims.choose(&mut rng).expect("nonempty dims");
            let torus = IrrationalTorus::generic(d)?;
            let size = rng.gen_range(1..=cfg.max_set_size);
            let h = cfg.half_width;
            let mut set = BTreeSet::new();
            while set.len() < size {
                let c: Vec<i64> = (0..d).map(|_| rng.gen_range(-h..=h)).collect();
                set.insert(LatticePoint::new(&c));
            }
            let points: Vec<_> = set.into_iter().collect();
            let r = *cfg.radii.choose(&mut rng).expect("nonempty radii");
            let p = *cfg.exponents.choose(&mut rng).expect("nonempty exponents");
            let values = quadratic_values(&torus, &points);
            let sum = quadratic_exp_sum(&torus, &points);
            let est = point_estimate_check_with(&values, sum, r, p, cfg.tol, &cfg.quad)?;
            Ok(PointTrial {
                trial,
                p,
                r,
                set_size: points.len(),
                lhs: est.lhs,
                intermediate: est.intermediate,
                rhs: est.rhs,
                ratio: est.ratio,
                pass: est.chain_holds,
            })
        })
        .collect()
}

pub fn write_trials_csv<W: Write>(rows: &[PointTrial], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["trial", "p", "r", "set_size", "lhs", "intermediate", "rhs", "ratio", "pass"])
        .map_err(|e| Error::Format(e.to_string()))?;
    for t in rows {
        w.write_record([
            t.trial.to_string(),
            t.p.to_string(),
            t.r.to_string(),
            t.set_size.to_string(),
            t.lhs.to_string(),
            t.intermediate.to_string(),
            t.rhs.to_string(),
            t.ratio.to_string(),
            t.pass.to_string(),
        ])
        .map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylRow {
    pub m: u64,
    pub norm: f64,
    pub value_at_zero: f64,
    pub n_t: usize,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylReport {
    pub p: f64,
    pub rows: Vec<WeylRow>,
    pub fit: Fit,
    pub predicted: f64,
}

/// `‖Σ_{n<M} e^{2πin²t}‖_{L^s([0,1])}`.
///
/// The sum is sampled at `t = j/n_t` through one FFT of the histogram of
/// `n² mod n_t`. For even `s` the grid mean of `|S|^s` is exact once
/// `n_t > (s/2)(M−1)²`; other exponents double `n_t` until the periodic
/// trapezoid rule settles within `rtol`.
pub fn weyl_lp_norm(m: u64, s: f64, rtol: f64) -> Result<WeylRow> {
    if m == 0 {
        return Err(Error::Usage("Weyl sum needs M >= 1".into()));
    }
    if !(s >= 1.0) {
        return Err(Error::Domain(format!("exponent must be >= 1, got {s}")));
    }
    let value_at_zero = m as f64;
    if s.is_infinite() {
        return Ok(WeylRow {
            m,
            norm: value_at_zero,
            value_at_zero,
            n_t: 1,
            exact: true,
        });
    }
    let exact = s.fract() == 0.0 && (s as u64) % 2 == 0;
    let top = (m - 1) as f64;
    let bound = (s / 2.0).ceil() * top * top;
    let mut n_t = pow2_above(bound as usize).max(64);
    let eval = |n_t: usize| {
        let fft = GridFft::new(&[n_t]);
        let mut hist = vec![Complex64::default(); n_t];
        for n in 0..m {
            hist[((n * n) % n_t as u64) as usize] += 1.0;
        }
        fft.inverse(&mut hist);
        let sum: f64 = if exact {
            let half = (s as i32) / 2;
            hist.iter().map(|z| z.norm_sqr().powi(half)).sum()
        } else {
            hist.iter().map(|z| z.norm().powf(s)).sum()
        };
        (sum / n_t as f64).powf(1.0 / s)
    };
    let mut norm = eval(n_t);
    if !exact {
        loop {
            if n_t >= 1 << 26 {
                return Err(Error::Convergence {
                    n_t,
                    last: norm,
                    previous: f64::NAN,
                });
            }
            let next = eval(2 * n_t);
            n_t *= 2;
            let rel = (next - norm).abs() / next;
            norm = next;
            if rel < rtol {
                break;
            }
        }
    }
    Ok(WeylRow {
        m,
        norm,
        value_at_zero,
        n_t,
        exact,
    })
}

/// Fits the growth of `‖Σ_{n<M} e^{2πin²t}‖_{L^{2p}([0,1])}` in `M`; the
/// predicted exponent is `1 − 1/p`.
pub fn weyl_scaling(p: f64, m_list: &[u64], rtol: f64) -> Result<WeylReport> {
    if !(p > 2.0) {
        return Err(Error::Domain(format!("Weyl scaling needs p > 2, got {p}")));
    }
    if m_list.windows(2).any(|w| w[0] >= w[1]) || m_list.iter().any(|&m| !m.is_power_of_two()) {
        return Err(Error::Usage("M list must be dyadic and increasing".into()));
    }
    let rows = m_list
        .iter()
        .map(|&m| weyl_lp_norm(m, 2.0 * p, rtol))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_scaling(&rows.iter().map(|r| (r.m as f64, r.norm)).collect::<Vec<_>>())?;
    Ok(WeylReport {
        p,
        rows,
        fit,
        predicted: if p.is_infinite() { 1.0 } else { 1.0 - 1.0 / p },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubstitutionCount {
    pub direct: u64,
    pub substituted: u64,
    pub ell: i64,
}

fn bounding_cube_of(points: impl Iterator<Item = LatticePoint>, d: usize) -> FrequencyRegion {
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for p in points {
        for j in 0..d {
            lo[j] = lo[j].min(p.coords()[j]);
            hi[j] = hi[j].max(p.coords()[j]);
        }
    }
    let center: Vec<i64> = lo.iter().zip(&hi).map(|(l, h)| (l + h).div_euclid(2)).collect();
    let half = lo
        .iter()
        .zip(&hi)
        .zip(&center)
        .map(|((l, h), c)| (c - l).max(h - c))
        .max()
        .unwrap_or(0);
    FrequencyRegion::cube(LatticePoint::new(&center), half)
}

/// Compares `#{(n,m) ∈ C2×C3 : |Q(a−n−m)+Q(n)+Q(m)−k| ≤ ½}` with the count
/// after the change of variables `ñ = 3(n+m) − 2a`, `m̃ = n − m`:
/// `#{(ñ,m̃) ∈ C̃2×C̃3 : |Q(ñ) + 3Q(m̃) − ℓ| ≤ 4}`, `ℓ = ⌊6k − 2Q(a)⌋`,
/// where `C̃2, C̃3` are cubes enclosing the images. The map is injective, so
/// `direct ≤ substituted`.
pub fn substitution_count_check(
    torus: &IrrationalTorus,
    c2: &FrequencyRegion,
    c3: &FrequencyRegion,
    a: &LatticePoint,
    k: i64,
) -> SubstitutionCount {
    let d = torus.dim();
    let p2 = c2.points();
    let p3 = c3.points();
    let mut direct = 0;
    for n in &p2 {
        for m in &p3 {
            let e = torus.q(&a.sub(n).sub(m)) + torus.q(n) + torus.q(m) - k as f64;
            if e.abs() <= 0.5 {
                direct += 1;
            }
        }
    }
    let three = |x: &LatticePoint| LatticePoint::new(&x.coords().iter().map(|c| 3 * c).collect::<Vec<_>>());
    let tc2 = bounding_cube_of(
        p2.iter().flat_map(|n| p3.iter().map(move |m| three(&n.add(m)).sub(a).sub(a))),
        d,
    );
    let tc3 = bounding_cube_of(p2.iter().flat_map(|n| p3.iter().map(move |m| n.sub(m))), d);
    let ell = (6.0 * k as f64 - 2.0 * torus.q(a)).floor() as i64;
    let q3: Vec<f64> = tc3.points().iter().map(|m| 3.0 * torus.q(m)).collect();
    let mut substituted = 0;
    for n in tc2.points() {
        let qn = torus.q(&n) - ell as f64;
        substituted += q3.iter().filter(|&&q| (qn + q).abs() <= 4.0).count() as u64;
    }
    SubstitutionCount {
        direct,
        substituted,
        ell,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c)
    }

    #[test]
    fn level_set_examples() {
        let f = level_set_counts(&[0.0, 1.0, 4.0, 9.0], 0.5);
        assert_eq!(f.counts, BTreeMap::from([(0, 1), (1, 1), (4, 1), (9, 1)]));
        assert_eq!(f.lp_norm(2.0), 2.0);
        let g = level_set_counts(&[0.0], 1.0);
        assert_eq!(g.counts, BTreeMap::from([(-1, 1), (0, 1), (1, 1)]));
        assert!(!g.small_r);
        assert!(level_set_counts(&[0.0], 0.3).small_r);
    }

    #[test]
    fn level_sets_match_recount() {
        let torus = IrrationalTorus::generic(2).unwrap();
        let pts = FrequencyRegion::cube(lp(&[4, 4]), 4).points();
        let vals = quadratic_values(&torus, &pts);
        let fam = level_set_counts(&vals, 1.0);
        let kmax = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs())) as i64 + 2;
        for k in -kmax..=kmax {
            let mut c = 0;
            for x in 0..=8i64 {
                for y in 0..=8i64 {
                    let q = (x * x) as f64 + 2f64.sqrt() * (y * y) as f64;
                    if (q - k as f64).abs() <= 1.0 {
                        c += 1;
                    }
                }
            }
            assert_eq!(fam.count(k), c, "k = {k}");
        }
        assert_eq!(fam.total(), fam.counts.values().sum::<u64>());
    }

    #[test]
    fn window_examples() {
        for r in [1.0, 2.0, 4.0, 1.7] {
            let w = make_window(r).unwrap();
            assert!((w.eta_hat(0.0) - PI * PI / 4.0).abs() < 1e-12);
            assert!((w.eta_hat(r) - 1.0).abs() < 1e-12);
            assert_eq!(w.eta(2.0 * w.a), 0.0);
            assert_eq!(w.eta(3.0 * w.a), 0.0);
            assert!((w.sup_eta() - PI * PI * r / 2.0).abs() < 1e-12);
            let min = (0..=10_000)
                .map(|i| w.eta_hat(-r + 2.0 * r * i as f64 / 10_000.0))
                .fold(f64::INFINITY, f64::min);
            assert!(min >= 1.0 - 1e-9);
        }
        assert!(matches!(make_window(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn exp_sum_examples() {
        let vals: Vec<f64> = (0..16).map(|n| n as f64).collect();
        assert_eq!(exp_sum(&vals, 0.0), Complex64::new(16.0, 0.0));
        let t = 0.3;
        let want = cis_turns(15.0 * t / 2.0) * ((PI * 16.0 * t).sin() / (PI * t).sin());
        assert!((exp_sum(&vals, t) - want).norm() < 1e-12);
        let shifted: Vec<f64> = vals.iter().map(|v| v * v + 0.77).collect();
        let sq: Vec<f64> = vals.iter().map(|v| v * v).collect();
        let neg: Vec<f64> = sq.iter().map(|v| -v).collect();
        for t in [0.1, 0.4, 0.93] {
            assert!((exp_sum(&shifted, t).norm() - exp_sum(&sq, t).norm()).abs() < 1e-12);
            assert!((exp_sum(&neg, t).norm() - exp_sum(&sq, t).norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn separable_sum_matches_direct() {
        let torus = IrrationalTorus::generic(3).unwrap();
        let pts = FrequencyRegion::cube(lp(&[1, -2, 3]), 3).points();
        let vals = quadratic_values(&torus, &pts);
        let fast = quadratic_exp_sum(&torus, &pts);
        for t in [0.0, 0.013, -0.21, 0.4] {
            assert!((fast(t) - exp_sum(&vals, t)).norm() < 1e-11);
        }
    }

    #[test]
    fn exp_sum_norm_examples() {
        let quad = TimeQuadrature::default();
        let single = exp_sum_lp_norm(&[3.7], 1.5, (-0.25, 0.25), &quad).unwrap();
        assert!((single.value - 0.5f64.powf(1.0 / 1.5)).abs() < 1e-12);
        let zeros = exp_sum_lp_norm(&[0.0; 7], 1.5, (-0.25, 0.25), &quad).unwrap();
        assert!((zeros.value - 7.0 * 0.5f64.powf(1.0 / 1.5)).abs() < 1e-12);
    }

    #[test]
    fn point_estimate_singleton() {
        let quad = TimeQuadrature {
            rtol: 1e-9,
            ..Default::default()
        };
        let e = point_estimate_check(&[0.0], 1.0, 2.0, 1e-6, &quad).unwrap();
        assert!((e.lhs - 3f64.sqrt()).abs() < 1e-12);
        assert!(e.chain_holds);
        assert!(e.ratio <= PI * PI / 2.0);
        // f ≡ 0 on m points: both sides scale linearly in m
        let r1 = point_estimate_check(&[0.0; 5], 1.0, 2.0, 1e-6, &quad).unwrap();
        let r2 = point_estimate_check(&[0.0; 11], 1.0, 2.0, 1e-6, &quad).unwrap();
        assert!((r1.ratio - r2.ratio).abs() < 1e-9);
        assert!((r1.lhs - 5.0 * 3f64.sqrt()).abs() < 1e-12);
        assert!(point_estimate_check(&[0.0], 0.5, 2.0, 1e-6, &quad).is_err());
        assert!(point_estimate_check(&[0.0], 1.0, 1.5, 1e-6, &quad).is_err());
    }

    #[test]
    fn trial_rows_are_reproducible() {
        let cfg = TrialConfig {
            trials: 6,
            seed: 42,
            max_set_size: 40,
            half_width: 6,
            ..Default::default()
        };
        let a = point_estimate_trials(&cfg).unwrap();
        let b = point_estimate_trials(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|t| t.pass));
        let mut buf = Vec::new();
        write_trials_csv(&a, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("trial,p,r,set_size,lhs,intermediate,rhs,ratio,pass\n"));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn weyl_examples() {
        // brute-force sixth moment: number of solutions of n1²+n2²+n3² = n4²+n5²+n6²
        let m = 12u64;
        let mut reps = BTreeMap::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    *reps.entry(a * a + b * b + c * c).or_insert(0u64) += 1;
                }
            }
        }
        let sols: u64 = reps.values().map(|v| v * v).sum();
        let row = weyl_lp_norm(m, 6.0, 1e-9).unwrap();
        assert!(row.exact);
        assert!((row.norm - (sols as f64).powf(1.0 / 6.0)).abs() < 1e-10);
        assert_eq!(row.value_at_zero, 12.0);
        let inf = weyl_lp_norm(64, f64::INFINITY, 1e-9).unwrap();
        assert_eq!(inf.norm, 64.0);
        let rep = weyl_scaling(f64::INFINITY, &[4, 8, 16], 1e-6).unwrap();
        assert!((rep.fit.slope - 1.0).abs() < 1e-12);
        let non_even = weyl_lp_norm(16, 5.0, 1e-10).unwrap();
        assert!(!non_even.exact);
        assert!(weyl_scaling(2.0, &[4, 8, 16], 1e-6).is_err());
        assert!(weyl_scaling(3.0, &[4, 6, 16], 1e-6).is_err());
    }

    #[test]
    fn substitution_count_is_dominated() {
        let torus = IrrationalTorus::generic(2).unwrap();
        let mut rng = trial_rng(5, 0);
        for _ in 0..12 {
            let m = rng.gen_range(1..=3);
            let c2 = FrequencyRegion::cube(lp(&[rng.gen_range(-6..=6), rng.gen_range(-6..=6)]), m);
            let c3 = FrequencyRegion::cube(lp(&[rng.gen_range(-6..=6), rng.gen_range(-6..=6)]), m);
            let a = lp(&[rng.gen_range(-10..=10), rng.gen_range(-10..=10)]);
            let center_energy = {
                let n = c2.points()[0];
                let mm = c3.points()[0];
                torus.q(&a.sub(&n).sub(&mm)) + torus.q(&n) + torus.q(&mm)
            };
            let k = center_energy.round() as i64;
            let s = substitution_count_check(&torus, &c2, &c3, &a, k);
            assert!(s.direct <= s.substituted, "{s:?}");
        }
    }
}
