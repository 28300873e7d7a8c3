//! Fourier-side states, dyadic cutoffs, frequency regions and the linear
//! propagator `e^{2πiQ(n)t}`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridFft;
use crate::torus::{IrrationalTorus, LatticePoint};

pub mod cutoff;
pub mod io;
pub mod region;

pub use cutoff::{bump, low_pass_symbol, DyadicCutoff};
pub use region::{strip_decompose, strip_index, strip_width, FrequencyRegion, StripDecomposition};

/// `e^{2πix}` with the argument reduced modulo one first, so integer
/// arguments give exactly `1`.
#[inline]
pub fn cis_turns(x: f64) -> Complex64 {
    let frac = x - x.round();
    if frac == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, TAU * frac)
}

/// A trigonometric polynomial given by its Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    torus: IrrationalTorus,
    coeffs: BTreeMap<LatticePoint, Complex64>,
}

/// Samples of a state on the uniform grid `m/G`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub size: usize,
    pub dim: usize,
    pub values: Vec<Complex64>,
}

impl GridField {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl FourierState {
    pub fn new(torus: IrrationalTorus) -> Self {
        Self {
            torus,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs(
        torus: IrrationalTorus,
        coeffs: impl IntoIterator<Item = (LatticePoint, Complex64)>,
    ) -> Result<Self> {
        let mut s = Self::new(torus);
        for (n, c) in coeffs {
            s.insert(n, c)?;
        }
        Ok(s)
    }

    /// A single mode `c·e^{2πin·x}`.
    pub fn single_mode(torus: IrrationalTorus, n: LatticePoint, c: Complex64) -> Result<Self> {
        Self::from_coeffs(torus, [(n, c)])
    }

    pub fn insert(&mut self, n: LatticePoint, c: Complex64) -> Result<()> {
        if n.dim() != self.torus.dim() {
            return Err(Error::Usage(format!(
                "coefficient at {n:?} has dimension {}, torus has dimension {}",
                n.dim(),
                self.torus.dim()
            )));
        }
        self.coeffs.insert(n, c);
        Ok(())
    }

    pub fn torus(&self) -> &IrrationalTorus {
        &self.torus
    }

    pub fn dim(&self) -> usize {
        self.torus.dim()
    }

    pub fn coeffs(&self) -> &BTreeMap<LatticePoint, Complex64> {
        &self.coeffs
    }

    pub fn get(&self, n: &LatticePoint) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Largest `|n_j|` over the support, `0` for the empty state.
    pub fn max_abs_freq(&self) -> i64 {
        self.coeffs.keys().map(|n| n.max_abs()).max().unwrap_or(0)
    }

    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let first = self.coeffs.keys().next()?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for n in self.coeffs.keys() {
            for (j, &c) in n.coords().iter().enumerate() {
                lo[j] = lo[j].min(c);
                hi[j] = hi[j].max(c);
            }
        }
        Some((lo, hi))
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&LatticePoint, Complex64) -> Complex64) -> Self {
        Self {
            torus: self.torus.clone(),
            coeffs: self.coeffs.iter().map(|(n, &c)| (*n, f(n, c))).collect(),
        }
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        self.map_coeffs(|_, c| c * z)
    }

    /// `‖self − other‖₂` over the union of supports.
    pub fn l2_distance(&self, other: &FourierState) -> f64 {
        let mut acc = 0.0;
        for (n, c) in &self.coeffs {
            acc += (c - other.get(n)).norm_sqr();
        }
        for (n, c) in &other.coeffs {
            if !self.coeffs.contains_key(n) {
                acc += c.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// The free evolution `φ̂(n) ↦ e^{2πiQ(n)t} φ̂(n)`.
    pub fn propagate(&self, t: f64) -> Self {
        let torus = &self.torus;
        self.map_coeffs(|n, c| c * cis_turns(torus.q(n) * t))
    }

    /// Sharp projection onto a region; coefficients outside are dropped.
    pub fn project(&self, region: &FrequencyRegion) -> Self {
        Self {
            torus: self.torus.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(n, _)| region.contains(n))
                .map(|(n, c)| (*n, *c))
                .collect(),
        }
    }

    /// Smooth projection `P_N` with symbol `ψ_N`; zero coefficients are dropped.
    pub fn project_cutoff(&self, cutoff: &DyadicCutoff) -> Self {
        self.weighted(|n| cutoff.eval(n))
    }

    /// `P_{≤N} = Σ_{M≤N} P_M`.
    pub fn project_low(&self, n: u64) -> Result<Self> {
        low_pass_symbol(n, 0.0)?;
        Ok(self.weighted(|xi| low_pass_symbol(n, xi.norm()).unwrap_or(0.0)))
    }

    fn weighted(&self, w: impl Fn(&LatticePoint) -> f64) -> Self {
        Self {
            torus: self.torus.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter_map(|(n, c)| {
                    let s = w(n);
                    (s != 0.0).then(|| (*n, c * s))
                })
                .collect(),
        }
    }

    /// `Σ φ̂(n) e^{2πin·x}` evaluated directly.
    pub fn eval_at(&self, x: &[f64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(n, c)| {
                let arg: f64 = n.coords().iter().zip(x).map(|(&k, &y)| k as f64 * y).sum();
                c * cis_turns(arg)
            })
            .sum()
    }

    /// Values at `x_m = m/G` on a `G^d` grid through one inverse FFT.
    pub fn sample_grid(&self, g: usize) -> Result<GridField> {
        let fft = GridFft::new(&vec![g; self.dim()]);
        let values = self.sample_with(&fft)?;
        Ok(GridField {
            size: g,
            dim: self.dim(),
            values,
        })
    }

    pub(crate) fn sample_with(&self, fft: &GridFft) -> Result<Vec<Complex64>> {
        let k = self.max_abs_freq();
        for &g in fft.dims() {
            if (g as i64) <= 2 * k {
                return Err(Error::Resolution(format!(
                    "grid size {g} must exceed twice the maximal frequency {k}"
                )));
            }
        }
        let mut data = vec![Complex64::default(); fft.len()];
        for (n, c) in &self.coeffs {
            data[fft.flat_index(n.coords())] += c;
        }
        fft.inverse(&mut data);
        Ok(data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lp(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c)
    }

    fn random_state(rng: &mut ChaCha8Rng, torus: &IrrationalTorus, modes: usize, k: i64) -> FourierState {
        let d = torus.dim();
        let mut s = FourierState::new(torus.clone());
        while s.len() < modes {
            let n: Vec<i64> = (0..d).map(|_| rng.gen_range(-k..=k)).collect();
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            s.insert(lp(&n), c).unwrap();
        }
        s
    }

    #[test]
    fn integer_turns_are_exact() {
        assert_eq!(cis_turns(0.0), Complex64::new(1.0, 0.0));
        assert_eq!(cis_turns(17.0), Complex64::new(1.0, 0.0));
        assert!((cis_turns(0.25) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn propagation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t2 = IrrationalTorus::generic(2).unwrap();
        let phi = random_state(&mut rng, &t2, 20, 6);
        assert_eq!(phi.propagate(0.0), phi);
        let n0 = phi.l2_norm();
        for t in [0.1, 0.37, 1.0, 12.5] {
            assert!((phi.propagate(t).l2_norm() - n0).abs() <= 1e-12 * n0);
        }
        let rat = IrrationalTorus::rational(2).unwrap();
        let psi = random_state(&mut rng, &rat, 20, 6);
        assert_eq!(psi.propagate(1.0), psi);
    }

    #[test]
    fn projection_examples() {
        let t2 = IrrationalTorus::generic(2).unwrap();
        let box8 = FrequencyRegion::centered_cube(2, 8);
        let phi = FourierState::from_coeffs(
            t2.clone(),
            box8.points().into_iter().map(|n| (n, Complex64::new(1.0, 0.0))),
        )
        .unwrap();
        let cube = FrequencyRegion::cube(lp(&[2, 2]), 2);
        let p = phi.project(&cube);
        assert_eq!(p.len(), 25);
        assert_eq!(p.project(&cube), p);
        assert!(phi.project(&FrequencyRegion::explicit(2, [])).is_empty());
        assert_eq!(
            phi.propagate(0.3).project(&cube),
            phi.project(&cube).propagate(0.3)
        );
    }

    #[test]
    fn low_pass_support() {
        let t2 = IrrationalTorus::generic(2).unwrap();
        let phi = FourierState::from_coeffs(
            t2,
            FrequencyRegion::centered_cube(2, 20)
                .points()
                .into_iter()
                .map(|n| (n, Complex64::new(1.0, 0.0))),
        )
        .unwrap();
        let low = phi.project_low(4).unwrap();
        assert!(low.iter().all(|(n, _)| n.norm() < 8.0));
        assert!(low.iter().filter(|(n, _)| n.norm() <= 4.0).all(|(_, c)| (c.re - 1.0).abs() < 1e-12));
        assert!(phi.project_low(3).is_err());
    }

    #[test]
    fn grid_sampling_examples() {
        let t3 = IrrationalTorus::generic(3).unwrap();
        let one = FourierState::single_mode(t3.clone(), lp(&[2, -1, 3]), Complex64::new(1.0, 0.0)).unwrap();
        let f = one.sample_grid(8).unwrap();
        assert!(f.values.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        assert!(matches!(one.sample_grid(6), Err(Error::Resolution(_))));
        let zero = FourierState::new(t3);
        assert!(zero.sample_grid(4).unwrap().values.iter().all(|z| *z == Complex64::default()));
    }

    #[test]
    fn grid_matches_direct_sum_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t2 = IrrationalTorus::generic(2).unwrap();
        for _ in 0..5 {
            let phi = random_state(&mut rng, &t2, 9, 5);
            let g = 12;
            let f = phi.sample_grid(g).unwrap();
            for m0 in 0..g {
                for m1 in 0..g {
                    let x = [m0 as f64 / g as f64, m1 as f64 / g as f64];
                    assert!((f.values[m0 * g + m1] - phi.eval_at(&x)).norm() < 1e-12);
                }
            }
            let mean: f64 = f.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / f.values.len() as f64;
            assert!((mean - phi.l2_norm_sq()).abs() < 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn strips_reconstruct_cube(cx in -30i64..30, cy in -30i64..30, cz in -30i64..30,
                                       h in 1i64..4, lg1 in 2u32..6, d3 in any::<bool>(), seed in any::<u64>()) {
                prop_assume!(cx != 0 || cy != 0 || (d3 && cz != 0));
                let d = if d3 { 3 } else { 2 };
                let center = lp(&[cx, cy, cz][..d]);
                let n2 = 4u64;
                let n1 = 1u64 << lg1.max(2);
                let cube = FrequencyRegion::cube(center, h);
                let dec = strip_decompose(&cube, n1, n2).unwrap();
                let torus = IrrationalTorus::generic(d).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let phi = FourierState::from_coeffs(torus, cube.points().into_iter().chain([center.add(&lp(&[h + 1, 0, 0][..d]))])
                    .map(|n| (n, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))).unwrap();
                let full = phi.project(&cube);
                let mut seen = BTreeMap::new();
                for (_, s) in &dec.strips {
                    for (n, c) in phi.project(s).iter() {
                        prop_assert!(seen.insert(*n, *c).is_none());
                    }
                }
                prop_assert_eq!(&seen, full.coeffs());
            }

            #[test]
            fn propagation_commutes_with_projection(t in -5.0f64..5.0, seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let torus = IrrationalTorus::generic(2).unwrap();
                let phi = random_state(&mut rng, &torus, 30, 8);
                let region = FrequencyRegion::annulus(2, 4).unwrap();
                prop_assert_eq!(phi.propagate(t).project(&region), phi.project(&region).propagate(t));
            }
        }
    }
}
