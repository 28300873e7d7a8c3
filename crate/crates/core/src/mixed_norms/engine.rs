//! Spatial evaluation of `‖∏_j e^{2πiQt}φ_j‖_{L^q_x}` at a single time.
//!
//! Every factor is demodulated: its coefficients are shifted so the support
//! is centred near the origin while the time phases keep the original `Q(n)`.
//! The shift only multiplies the factor by a unimodular `e^{2πic·x}`, so
//! `|∏ u_j|` is unchanged and the grid only has to resolve the sum of the
//! factors' half-widths instead of their absolute frequencies.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{smooth_size_above, wrap_index, GridFft};
use crate::spectral::{cis_turns, FourierState};

/// `⌈q⌉` rounded up to an even integer, with `∞` mapped to an oversampling
/// factor of 4.
pub fn even_ceiling(q: f64) -> usize {
    if q.is_infinite() {
        return 4;
    }
    let c = q.ceil().max(2.0) as usize;
    c + c % 2
}

/// Whether the grid mean of `|w|^q` is exact for trigonometric polynomials.
pub fn is_exact_exponent(q: f64) -> bool {
    q.is_finite() && q.fract() == 0.0 && (q as i64) % 2 == 0
}

/// `mean |z|^q` over the samples, or `max |z|` at `q = ∞`.
pub(crate) fn mean_pow(values: &[Complex64], q: f64) -> f64 {
    if q.is_infinite() {
        return values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let sum: f64 = if is_exact_exponent(q) {
        let half = (q as i32) / 2;
        values.iter().map(|z| z.norm_sqr().powi(half)).sum()
    } else {
        values.iter().map(|z| z.norm().powf(q)).sum()
    };
    sum / values.len() as f64
}

/// One factor restricted to a single axis of a separable product.
struct AxisPiece {
    /// `(shifted index, amplitude, α k²)`.
    modes: Vec<(i64, Complex64, f64)>,
}

struct TensorAxis {
    fft: GridFft,
    pieces: Vec<AxisPiece>,
}

struct GridFactor {
    /// `(flat grid index, amplitude, Q(n))`.
    modes: Vec<(usize, Complex64, f64)>,
}

enum Plan {
    Zero,
    Tensor(Vec<TensorAxis>),
    Grid {
        fft: GridFft,
        factors: Vec<GridFactor>,
    },
    /// `q = 2` with separable and general factors mixed.
    Split {
        axes: Vec<TensorAxis>,
        fft: GridFft,
        factors: Vec<GridFactor>,
        /// Frequency reach of `|U_G|²` per axis.
        reach: Vec<i64>,
    },
}

fn tensor_axis(tensors: &[&Vec<(i64, Vec<Complex64>)>], j: usize, g: usize, alpha: f64) -> TensorAxis {
    TensorAxis {
        fft: GridFft::new(&[g]),
        pieces: tensors
            .iter()
            .map(|axes| {
                let (lo, coeffs) = &axes[j];
                let hi = lo + coeffs.len() as i64 - 1;
                let (center, _) = centre_and_half_width(*lo, hi);
                let modes = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| {
                        let k = lo + i as i64;
                        (k - center, c, alpha * (k * k) as f64)
                    })
                    .collect();
                AxisPiece { modes }
            })
            .collect(),
    }
}

fn grid_factor(f: &FourierState, (lo, hi): &(Vec<i64>, Vec<i64>), fft: &GridFft) -> GridFactor {
    let center: Vec<i64> = lo.iter().zip(hi).map(|(&l, &h)| centre_and_half_width(l, h).0).collect();
    let torus = f.torus();
    let modes = f
        .iter()
        .map(|(n, &c)| {
            let shifted: Vec<i64> = n.coords().iter().zip(&center).map(|(a, b)| a - b).collect();
            (fft.flat_index(&shifted), c, torus.q(n))
        })
        .collect();
    GridFactor { modes }
}

fn grid_product(fft: &GridFft, factors: &[GridFactor], t: f64) -> Vec<Complex64> {
    let mut prod = vec![Complex64::new(1.0, 0.0); fft.len()];
    let mut buf = vec![Complex64::default(); fft.len()];
    for f in factors {
        buf.iter_mut().for_each(|z| *z = Complex64::default());
        for &(idx, c, q) in &f.modes {
            buf[idx] += c * cis_turns(q * t);
        }
        fft.inverse(&mut buf);
        prod.iter_mut().zip(&buf).for_each(|(p, b)| *p *= b);
    }
    prod
}

/// Precomputed evaluator for the spatial norm of a product at any time.
pub struct ProductEvaluator {
    q: f64,
    plan: Plan,
    grid: Vec<usize>,
    spread: f64,
}

/// Per-axis rank-one factorisation `φ̂(n) = Π_j a_j(n_j)` of a state whose
/// support is a full box.
fn tensor_factors(state: &FourierState) -> Option<Vec<(i64, Vec<Complex64>)>> {
    let (lo, hi) = state.bounding_box()?;
    let count: usize = lo.iter().zip(&hi).map(|(l, h)| (h - l + 1) as usize).product();
    if count != state.len() {
        return None;
    }
    let (pivot, &pc) = state
        .iter()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()).then(b.0.cmp(a.0)))?;
    if pc.norm() == 0.0 {
        return None;
    }
    let d = state.dim();
    let mut axes = Vec::with_capacity(d);
    for j in 0..d {
        let mut coeffs = Vec::with_capacity((hi[j] - lo[j] + 1) as usize);
        for k in lo[j]..=hi[j] {
            let mut c = pivot.coords().to_vec();
            c[j] = k;
            coeffs.push(state.get(&crate::torus::LatticePoint::new(&c)));
        }
        axes.push((lo[j], coeffs));
    }
    let scale = pc.powi(-(d as i32 - 1));
    let tol = 1e-12 * pc.norm();
    for (n, &c) in state.iter() {
        let mut pred = scale;
        for (j, (l, a)) in axes.iter().enumerate() {
            pred *= a[(n.coords()[j] - l) as usize];
        }
        if (pred - c).norm() > tol {
            return None;
        }
    }
    axes[0].1.iter_mut().for_each(|c| *c *= scale);
    Some(axes)
}

fn centre_and_half_width(lo: i64, hi: i64) -> (i64, i64) {
    let c = (lo + hi).div_euclid(2);
    (c, (c - lo).max(hi - c))
}

fn q_range(state: &FourierState) -> f64 {
    let torus = state.torus();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (n, _) in state.iter() {
        let q = torus.q(n);
        lo = lo.min(q);
        hi = hi.max(q);
    }
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

impl ProductEvaluator {
    /// Builds the evaluator; `grid_override` fixes the grid size per axis and
    /// must still satisfy the exactness rule.
    pub fn new(factors: &[FourierState], q: f64, grid_override: Option<usize>, allow_tensor: bool) -> Result<Self> {
        if !(q >= 1.0) {
            return Err(Error::Domain(format!("space exponent must be >= 1, got {q}")));
        }
        let Some(first) = factors.first() else {
            return Err(Error::Usage("a product needs at least one factor".into()));
        };
        let d = first.dim();
        if factors.iter().any(|f| f.torus() != first.torus()) {
            return Err(Error::Usage("all factors must live on the same torus".into()));
        }
        let spread: f64 = factors.iter().map(q_range).sum();
        if factors.iter().any(|f| f.is_empty()) {
            return Ok(Self {
                q,
                plan: Plan::Zero,
                grid: vec![0; d],
                spread,
            });
        }
        let qe = even_ceiling(q);
        let boxes: Vec<_> = factors.iter().map(|f| f.bounding_box().expect("nonempty")).collect();
        let mut grid: Vec<usize> = Vec::with_capacity(d);
        for j in 0..d {
            let b: i64 = boxes.iter().map(|(lo, hi)| centre_and_half_width(lo[j], hi[j]).1).sum();
            let need = qe * b as usize;
            let g = match grid_override {
                Some(g) if g <= need => {
                    return Err(Error::Resolution(format!(
                        "grid size {g} on axis {j} must exceed {need} for the product bandwidth"
                    )))
                }
                Some(g) => g,
                None => smooth_size_above(need),
            };
            grid.push(g);
        }
        let alphas = first.torus().alphas().to_vec();

        let tensors: Vec<Option<Vec<(i64, Vec<Complex64>)>>> = if allow_tensor {
            factors.iter().map(tensor_factors).collect()
        } else {
            vec![None; factors.len()]
        };
        let half_widths = |members: &[usize], j: usize| -> usize {
            members
                .iter()
                .map(|&i| centre_and_half_width(boxes[i].0[j], boxes[i].1[j]).1 as usize)
                .sum()
        };
        let separable: Vec<usize> = (0..factors.len()).filter(|&i| tensors[i].is_some()).collect();
        let general: Vec<usize> = (0..factors.len()).filter(|&i| tensors[i].is_none()).collect();
        let plan = if general.is_empty() {
            let pieces: Vec<_> = tensors.iter().flatten().collect();
            Plan::Tensor((0..d).map(|j| tensor_axis(&pieces, j, grid[j], alphas[j])).collect())
        } else if q == 2.0 && grid_override.is_none() && !separable.is_empty() {
            // ‖U_T U_G‖² = Σ_c (|U_T|²)^(c) conj (|U_G|²)^(c): the separable
            // group contributes per-axis coefficients, the rest a small grid.
            let reach: Vec<i64> = (0..d).map(|j| 2 * half_widths(&general, j) as i64).collect();
            let g_grid: Vec<usize> = (0..d).map(|j| smooth_size_above(2 * reach[j] as usize)).collect();
            let pieces: Vec<_> = separable.iter().map(|&i| tensors[i].as_ref().expect("separable")).collect();
            let axes = (0..d)
                .map(|j| {
                    let g = smooth_size_above(2 * half_widths(&separable, j) + reach[j] as usize);
                    tensor_axis(&pieces, j, g, alphas[j])
                })
                .collect();
            let fft = GridFft::new(&g_grid);
            let parts = general.iter().map(|&i| grid_factor(&factors[i], &boxes[i], &fft)).collect();
            grid = g_grid;
            Plan::Split {
                axes,
                fft,
                factors: parts,
                reach,
            }
        } else {
            let fft = GridFft::new(&grid);
            let parts = factors
                .iter()
                .zip(&boxes)
                .map(|(f, bx)| grid_factor(f, bx, &fft))
                .collect();
            Plan::Grid { fft, factors: parts }
        };
        Ok(Self { q, plan, grid, spread })
    }

    pub fn grid(&self) -> &[usize] {
        &self.grid
    }

    /// `Σ_j (max Q − min Q)` over the factor supports: the largest time
    /// frequency of `‖w(t)‖²`.
    pub fn spread(&self) -> f64 {
        self.spread
    }

    pub fn path(&self) -> &'static str {
        match self.plan {
            Plan::Zero => "zero",
            Plan::Tensor(_) => "tensor",
            Plan::Grid { .. } => "grid",
            Plan::Split { .. } => "split",
        }
    }

    pub fn is_exact(&self) -> bool {
        is_exact_exponent(self.q)
    }

    /// `‖∏_j u_j(t)‖_{L^q}`.
    pub fn eval(&self, t: f64) -> f64 {
        let m = match &self.plan {
            Plan::Zero => 0.0,
            Plan::Tensor(axes) => axes.iter().map(|axis| axis.eval(t, self.q)).product(),
            Plan::Grid { fft, factors } => mean_pow(&grid_product(fft, factors, t), self.q),
            Plan::Split {
                axes,
                fft,
                factors,
                reach,
            } => {
                let coeffs: Vec<Vec<Complex64>> = axes.iter().map(|a| a.modulus_sq_coeffs(t)).collect();
                let mut g = grid_product(fft, factors, t);
                g.iter_mut().for_each(|z| *z = Complex64::new(z.norm_sqr(), 0.0));
                fft.forward_normalized(&mut g);
                let d = reach.len();
                let mut c = vec![0i64; d];
                for (j, cj) in c.iter_mut().enumerate() {
                    *cj = -reach[j];
                }
                let mut acc = Complex64::default();
                'outer: loop {
                    let mut a = g[fft.flat_index(&c)].conj();
                    for j in 0..d {
                        let col = &coeffs[j];
                        a *= col[wrap_index(c[j], col.len())];
                    }
                    acc += a;
                    for j in (0..d).rev() {
                        if c[j] < reach[j] {
                            c[j] += 1;
                            continue 'outer;
                        }
                        c[j] = -reach[j];
                    }
                    break;
                }
                acc.re.max(0.0)
            }
        };
        if self.q.is_infinite() {
            m
        } else {
            m.powf(1.0 / self.q)
        }
    }
}

impl TensorAxis {
    fn product(&self, t: f64) -> Vec<Complex64> {
        let g = self.fft.len();
        let mut prod = vec![Complex64::new(1.0, 0.0); g];
        let mut buf = vec![Complex64::default(); g];
        for piece in &self.pieces {
            buf.iter_mut().for_each(|z| *z = Complex64::default());
            for &(k, c, q) in &piece.modes {
                buf[wrap_index(k, g)] += c * cis_turns(q * t);
            }
            self.fft.inverse(&mut buf);
            prod.iter_mut().zip(&buf).for_each(|(p, b)| *p *= b);
        }
        prod
    }

    fn eval(&self, t: f64, q: f64) -> f64 {
        mean_pow(&self.product(t), q)
    }

    /// Fourier coefficients of `|product|²` on this axis's grid.
    fn modulus_sq_coeffs(&self, t: f64) -> Vec<Complex64> {
        let mut v = self.product(t);
        v.iter_mut().for_each(|z| *z = Complex64::new(z.norm_sqr(), 0.0));
        self.fft.forward_normalized(&mut v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::FrequencyRegion;
    use crate::torus::{IrrationalTorus, LatticePoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dirichlet(torus: &IrrationalTorus, region: &FrequencyRegion) -> FourierState {
        FourierState::from_coeffs(
            torus.clone(),
            region.points().into_iter().map(|n| (n, Complex64::new(1.0, 0.0))),
        )
        .unwrap()
    }

    /// Direct `mean |Π u_j|^q` on a fine grid of undemodulated factors.
    fn direct(factors: &[FourierState], t: f64, q: f64, g: usize) -> f64 {
        let d = factors[0].dim();
        let mut acc = 0.0;
        let total = g.pow(d as u32);
        for flat in 0..total {
            let mut x = vec![0.0; d];
            let mut r = flat;
            for j in (0..d).rev() {
                x[j] = (r % g) as f64 / g as f64;
                r /= g;
            }
            let v: Complex64 = factors.iter().map(|f| f.propagate(t).eval_at(&x)).product();
            acc += v.norm().powf(q);
        }
        (acc / total as f64).powf(1.0 / q)
    }

    #[test]
    fn tensor_and_grid_paths_agree_with_direct_evaluation() {
        let torus = IrrationalTorus::generic(2).unwrap();
        let a = dirichlet(&torus, &FrequencyRegion::cube(LatticePoint::new(&[5, -2]), 2));
        let b = dirichlet(&torus, &FrequencyRegion::rectangle(LatticePoint::new(&[-3, 4]), vec![1, 3]));
        let fs = [a, b];
        for q in [2.0, 4.0] {
            let tensor = ProductEvaluator::new(&fs, q, None, true).unwrap();
            let grid = ProductEvaluator::new(&fs, q, None, false).unwrap();
            assert_eq!(tensor.path(), "tensor");
            assert_eq!(grid.path(), "grid");
            for t in [0.0, 0.137, 0.9] {
                let want = direct(&fs, t, q, 40);
                assert!((tensor.eval(t) - want).abs() < 1e-10 * want);
                assert!((grid.eval(t) - want).abs() < 1e-10 * want);
            }
        }
    }

    #[test]
    fn split_path_matches_grid_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in [2, 3] {
            let torus = IrrationalTorus::generic(d).unwrap();
            let mut c = vec![0i64; d];
            c[0] = 9;
            let boxed = dirichlet(&torus, &FrequencyRegion::cube(LatticePoint::new(&c), 3));
            let rough = FourierState::from_coeffs(
                torus.clone(),
                FrequencyRegion::annulus(d, 2)
                    .unwrap()
                    .points()
                    .into_iter()
                    .map(|n| (n, Complex64::new(rng.gen(), rng.gen()))),
            )
            .unwrap();
            let fs = [boxed.clone(), rough.clone(), rough, boxed];
            let split = ProductEvaluator::new(&fs, 2.0, None, true).unwrap();
            let grid = ProductEvaluator::new(&fs, 2.0, None, false).unwrap();
            assert_eq!(split.path(), "split");
            for t in [0.0, 0.31, 0.77] {
                let (a, b) = (split.eval(t), grid.eval(t));
                assert!((a - b).abs() < 1e-11 * b, "d={d} t={t}: {a} vs {b}");
            }
            assert_eq!(ProductEvaluator::new(&fs, 4.0, None, true).unwrap().path(), "grid");
        }
    }

    #[test]
    fn random_data_uses_grid_path() {
        let torus = IrrationalTorus::generic(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = FourierState::from_coeffs(
            torus,
            FrequencyRegion::centered_cube(2, 3)
                .points()
                .into_iter()
                .map(|n| (n, Complex64::new(rng.gen(), rng.gen()))),
        )
        .unwrap();
        let ev = ProductEvaluator::new(&[f.clone()], 2.0, None, true).unwrap();
        assert_eq!(ev.path(), "grid");
        assert!((ev.eval(0.4) - f.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn grid_override_checked() {
        let torus = IrrationalTorus::generic(2).unwrap();
        let f = dirichlet(&torus, &FrequencyRegion::centered_cube(2, 4));
        assert!(matches!(
            ProductEvaluator::new(&[f.clone(), f.clone()], 2.0, Some(16), true),
            Err(Error::Resolution(_))
        ));
        assert!(ProductEvaluator::new(&[f.clone(), f], 2.0, Some(17), true).is_ok());
    }

    #[test]
    fn even_ceiling_values() {
        assert_eq!(even_ceiling(2.0), 2);
        assert_eq!(even_ceiling(3.0), 4);
        assert_eq!(even_ceiling(6.0), 6);
        assert_eq!(even_ceiling(1.0), 2);
        assert_eq!(even_ceiling(f64::INFINITY), 4);
    }
}
