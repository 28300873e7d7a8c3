//! Geometry of the flat irrational torus.
//!
//! The torus `R^d / (α_1 Z × … × α_d Z)` is handled through its rescaled form:
//! the unit torus with the anisotropic dispersion relation
//! `Q(n) = α_1 n_1² + … + α_d n_d²`.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 3;

/// Default aspect ratios for the generic irrational case.
pub fn default_alphas(d: usize) -> Vec<f64> {
    [1.0, std::f64::consts::SQRT_2, 3f64.sqrt()][..d].to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrationalTorus {
    alphas: Vec<f64>,
    c_bound: f64,
}

impl IrrationalTorus {
    /// Builds a torus from its aspect ratios; `c_bound` is metadata only.
    pub fn new(alphas: Vec<f64>, c_bound: f64) -> Result<Self> {
        let d = alphas.len();
        if !(2..=MAX_DIM).contains(&d) {
            return Err(Error::Usage(format!("torus dimension must be 2 or 3, got {d}")));
        }
        if !(c_bound > 1.0) || !c_bound.is_finite() {
            return Err(Error::Domain(format!("C must satisfy C > 1, got {c_bound}")));
        }
        for (j, &a) in alphas.iter().enumerate() {
            if !(a > 1.0 / c_bound && a < c_bound) {
                return Err(Error::Domain(format!(
                    "alpha_{} = {a} violates 1/C < alpha < C with C = {c_bound}",
                    j + 1
                )));
            }
        }
        Ok(Self { alphas, c_bound })
    }

    /// `(1, √2)` in 2d, `(1, √2, √3)` in 3d, with `C = 2`.
    pub fn generic(d: usize) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&d) {
            return Err(Error::Usage(format!("torus dimension must be 2 or 3, got {d}")));
        }
        Self::new(default_alphas(d), 2.0)
    }

    /// The rational control torus `α = (1, …, 1)`.
    pub fn rational(d: usize) -> Result<Self> {
        Self::new(vec![1.0; d], 2.0)
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn c_bound(&self) -> f64 {
        self.c_bound
    }

    /// True when every aspect ratio is an integer, so `Q(n) ∈ Z` on the lattice.
    pub fn is_rational(&self) -> bool {
        self.alphas.iter().all(|a| a.fract() == 0.0)
    }

    pub fn quadratic_form(&self, n: &LatticePoint) -> Result<f64> {
        if n.dim() != self.dim() {
            return Err(Error::Usage(format!(
                "lattice point has dimension {}, torus has dimension {}",
                n.dim(),
                self.dim()
            )));
        }
        Ok(self.q(n))
    }

    /// `Q(n)` without the dimension check; callers guarantee matching dimensions.
    #[inline]
    pub(crate) fn q(&self, n: &LatticePoint) -> f64 {
        self.alphas
            .iter()
            .zip(n.coords())
            .map(|(a, &c)| a * (c as f64) * (c as f64))
            .sum()
    }
}

/// A point of `Z^d`, `1 ≤ d ≤ 3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    dim: u8,
    c: [i64; MAX_DIM],
}

impl LatticePoint {
    pub fn new(coords: &[i64]) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&coords.len()),
            "lattice dimension must be between 1 and {MAX_DIM}"
        );
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Self {
            dim: coords.len() as u8,
            c,
        }
    }

    pub fn origin(dim: usize) -> Self {
        Self::new(&[0; MAX_DIM][..dim])
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[i64] {
        &self.c[..self.dim as usize]
    }

    pub fn norm_sq(&self) -> i64 {
        self.coords().iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    pub fn dot(&self, other: &LatticePoint) -> i64 {
        self.coords().iter().zip(other.coords()).map(|(a, b)| a * b).sum()
    }

    pub fn neg(&self) -> Self {
        let mut out = *self;
        out.c.iter_mut().for_each(|x| *x = -*x);
        out
    }

    pub fn add(&self, other: &LatticePoint) -> Self {
        let mut out = *self;
        for (o, b) in out.c.iter_mut().zip(other.c) {
            *o += b;
        }
        out
    }

    pub fn sub(&self, other: &LatticePoint) -> Self {
        self.add(&other.neg())
    }

    pub fn max_abs(&self) -> i64 {
        self.coords().iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

/// `s_c = d/2 − 1/k`, exactly.
pub fn critical_index(d: u32, k: u32) -> Result<Ratio<i64>> {
    if k == 0 {
        return Err(Error::Domain("critical index needs k >= 1".into()));
    }
    if d == 0 {
        return Err(Error::Domain("critical index needs d >= 1".into()));
    }
    Ok(Ratio::new(d as i64, 2) - Ratio::new(1, k as i64))
}

pub fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `⟨n⟩^{2s} = (1 + |n|²)^s` with the unweighted Euclidean length.
pub fn sobolev_weight(n: &LatticePoint, s: f64) -> f64 {
    (1.0 + n.norm_sq() as f64).powf(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c)
    }

    #[test]
    fn quadratic_form_examples() {
        let unit = IrrationalTorus::rational(2).unwrap();
        assert_eq!(unit.quadratic_form(&lp(&[3, 4])).unwrap(), 25.0);

        let t2 = IrrationalTorus::generic(2).unwrap();
        let q = t2.quadratic_form(&lp(&[1, 1])).unwrap();
        assert!((q - 2.414_213_562_4).abs() < 1e-10);

        let t3 = IrrationalTorus::generic(3).unwrap();
        let n = lp(&[2, 1, 1]);
        let mut oracle = 0.0;
        for j in 0..3 {
            let c = n.coords()[j] as f64;
            oracle += t3.alphas()[j] * c * c;
        }
        assert_eq!(t3.quadratic_form(&n).unwrap(), oracle);
        assert!((oracle - (4.0 + 2f64.sqrt() + 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_usage_error() {
        let t2 = IrrationalTorus::generic(2).unwrap();
        assert!(matches!(
            t2.quadratic_form(&lp(&[1, 2, 3])),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn torus_validation() {
        assert!(IrrationalTorus::new(vec![1.0], 2.0).is_err());
        assert!(IrrationalTorus::new(vec![1.0, 5.0], 2.0).is_err());
        assert!(IrrationalTorus::new(vec![1.0, 1.5], 1.0).is_err());
        let t = IrrationalTorus::new(vec![1.0, 1.5], 2.0).unwrap();
        assert_eq!(t.alphas(), &[1.0, 1.5]);
        assert!(!t.is_rational());
        assert!(IrrationalTorus::rational(3).unwrap().is_rational());
    }

    #[test]
    fn critical_index_examples() {
        assert_eq!(critical_index(3, 2).unwrap(), Ratio::from_integer(1));
        assert_eq!(critical_index(2, 3).unwrap(), Ratio::new(2, 3));
        // d/2 − 1/k vanishes at d = 2, k = 1 (the cubic problem on a 2d torus is L²-critical).
        assert_eq!(critical_index(2, 1).unwrap(), Ratio::from_integer(0));
        assert_eq!(critical_index(3, 1).unwrap(), Ratio::new(1, 2));
        assert!(matches!(critical_index(2, 0), Err(Error::Domain(_))));
        for k in 3..50 {
            let s = critical_index(2, k).unwrap();
            assert!(s > Ratio::new(1, 2) && s < Ratio::from_integer(1));
        }
    }

    #[test]
    fn sobolev_weight_examples() {
        assert_eq!(sobolev_weight(&lp(&[0, 0]), 3.7), 1.0);
        assert_eq!(sobolev_weight(&lp(&[1, 0]), 1.0), 2.0);
        assert_eq!(sobolev_weight(&lp(&[1, 1, 1]), 0.5), 2.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn q_is_even_and_bounded(a in -200i64..200, b in -200i64..200, c in -200i64..200) {
                let t = IrrationalTorus::generic(3).unwrap();
                let n = lp(&[a, b, c]);
                let q = t.q(&n);
                prop_assert_eq!(q, t.q(&n.neg()));
                let n2 = n.norm_sq() as f64;
                prop_assert!(q >= n2 / t.c_bound() - 1e-9);
                prop_assert!(q <= n2 * t.c_bound() + 1e-9);
            }
        }
    }
}
