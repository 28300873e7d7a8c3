//! Sharp frequency regions and the strip decomposition of a cube.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::spectral::cutoff::is_dyadic;
use crate::torus::LatticePoint;

/// Symbol of a sharp projection `P_S`.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyRegion {
    /// Sharp dyadic shell: `|ξ| ≤ 1` for `N = 1`, otherwise `N/2 < |ξ| ≤ N`.
    Annulus { dim: usize, n: u64 },
    /// `center + [-h, h]^d`, a member of `C_N` for every `N ≥ h`.
    Cube { center: LatticePoint, half_width: i64 },
    /// Axis-aligned box `center + Π [-h_j, h_j]`.
    Rectangle { center: LatticePoint, half_widths: Vec<i64> },
    /// `{ξ ∈ cube : ξ·ξ0 ∈ [|ξ0| M ℓ, |ξ0| M (ℓ+1))}`.
    Strip {
        center: LatticePoint,
        half_width: i64,
        xi0: LatticePoint,
        width: i64,
        ell: i64,
    },
    Explicit { dim: usize, points: BTreeSet<LatticePoint> },
}

impl FrequencyRegion {
    pub fn cube(center: LatticePoint, half_width: i64) -> Self {
        FrequencyRegion::Cube { center, half_width }
    }

    pub fn centered_cube(dim: usize, half_width: i64) -> Self {
        Self::cube(LatticePoint::origin(dim), half_width)
    }

    pub fn rectangle(center: LatticePoint, half_widths: Vec<i64>) -> Self {
        assert_eq!(center.dim(), half_widths.len());
        FrequencyRegion::Rectangle { center, half_widths }
    }

    pub fn annulus(dim: usize, n: u64) -> Result<Self> {
        if !is_dyadic(n) {
            return Err(Error::Usage(format!("annulus scale must be dyadic, got {n}")));
        }
        Ok(FrequencyRegion::Annulus { dim, n })
    }

    pub fn explicit(dim: usize, points: impl IntoIterator<Item = LatticePoint>) -> Self {
        let points: BTreeSet<_> = points.into_iter().collect();
        assert!(points.iter().all(|p| p.dim() == dim));
        FrequencyRegion::Explicit { dim, points }
    }

    pub fn dim(&self) -> usize {
        match self {
            FrequencyRegion::Annulus { dim, .. } | FrequencyRegion::Explicit { dim, .. } => *dim,
            FrequencyRegion::Cube { center, .. }
            | FrequencyRegion::Rectangle { center, .. }
            | FrequencyRegion::Strip { center, .. } => center.dim(),
        }
    }

    pub fn contains(&self, xi: &LatticePoint) -> bool {
        if xi.dim() != self.dim() {
            return false;
        }
        match self {
            FrequencyRegion::Annulus { n, .. } => {
                let r2 = xi.norm_sq();
                let n = *n as i64;
                if n == 1 {
                    r2 <= 1
                } else {
                    4 * r2 > n * n && r2 <= n * n
                }
            }
            FrequencyRegion::Cube { center, half_width } => in_box(xi, center, |_| *half_width),
            FrequencyRegion::Rectangle { center, half_widths } => {
                in_box(xi, center, |j| half_widths[j])
            }
            FrequencyRegion::Strip {
                center,
                half_width,
                xi0,
                width,
                ell,
            } => {
                in_box(xi, center, |_| *half_width)
                    && strip_index(xi.dot(xi0), xi0.norm_sq(), *width) == *ell
            }
            FrequencyRegion::Explicit { points, .. } => points.contains(xi),
        }
    }

    /// Inclusive coordinate bounds enclosing the region, `None` when empty.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let d = self.dim();
        match self {
            FrequencyRegion::Annulus { n, .. } => {
                let n = *n as i64;
                Some((vec![-n; d], vec![n; d]))
            }
            FrequencyRegion::Cube { center, half_width }
            | FrequencyRegion::Strip {
                center, half_width, ..
            } => Some((
                center.coords().iter().map(|c| c - half_width).collect(),
                center.coords().iter().map(|c| c + half_width).collect(),
            )),
            FrequencyRegion::Rectangle { center, half_widths } => Some((
                center.coords().iter().zip(half_widths).map(|(c, h)| c - h).collect(),
                center.coords().iter().zip(half_widths).map(|(c, h)| c + h).collect(),
            )),
            FrequencyRegion::Explicit { points, .. } => {
                let first = points.iter().next()?;
                let mut lo = first.coords().to_vec();
                let mut hi = lo.clone();
                for p in points {
                    for j in 0..d {
                        lo[j] = lo[j].min(p.coords()[j]);
                        hi[j] = hi[j].max(p.coords()[j]);
                    }
                }
                Some((lo, hi))
            }
        }
    }

    /// All lattice points of the region in increasing order.
    pub fn points(&self) -> Vec<LatticePoint> {
        if let FrequencyRegion::Explicit { points, .. } = self {
            return points.iter().copied().collect();
        }
        let Some((lo, hi)) = self.bounding_box() else {
            return Vec::new();
        };
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let p = LatticePoint::new(&cur);
            if self.contains(&p) {
                out.push(p);
            }
            let mut j = cur.len();
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if cur[j] < hi[j] {
                    cur[j] += 1;
                    break;
                }
                cur[j] = lo[j];
            }
        }
    }

    pub fn count(&self) -> usize {
        self.points().len()
    }

    /// Membership in `R_{N,M}` for axis-aligned regions: after a coordinate
    /// permutation and translation the box fits in `[-N,N]^{d-1} × [-M,M]`.
    /// Strips are checked through their defining slab condition only: the
    /// parent cube must lie in `C_N` and the slab width must not exceed `M`.
    pub fn fits_rectangle_family(&self, n: i64, m: i64) -> bool {
        let extents: Vec<i64> = match self {
            FrequencyRegion::Strip {
                half_width, width, ..
            } => return *half_width <= n && *width <= m.max(1) * 2,
            _ => match self.bounding_box() {
                Some((lo, hi)) => lo.iter().zip(&hi).map(|(l, h)| h - l).collect(),
                None => return true,
            },
        };
        let mut sorted = extents;
        sorted.sort_unstable();
        sorted[0] <= 2 * m && sorted.iter().all(|&e| e <= 2 * n)
    }
}

fn in_box(xi: &LatticePoint, center: &LatticePoint, half: impl Fn(usize) -> i64) -> bool {
    xi.coords()
        .iter()
        .zip(center.coords())
        .enumerate()
        .all(|(j, (x, c))| (x - c).abs() <= half(j))
}

/// Exact test of `a·√r ≤ s` for integers.
fn scaled_root_le(a: i64, r: i64, s: i64) -> bool {
    let (a, r, s) = (a as i128, r as i128, s as i128);
    match (a <= 0, s >= 0) {
        (true, true) => true,
        (false, false) => false,
        (false, true) => a * a * r <= s * s,
        (true, false) => a != 0 && a * a * r >= s * s,
    }
}

/// The index `ℓ` with `M ℓ √r ≤ s < M (ℓ+1) √r`, computed exactly.
pub fn strip_index(s: i64, r: i64, width: i64) -> i64 {
    debug_assert!(r > 0 && width > 0);
    let mut ell = (s as f64 / (width as f64 * (r as f64).sqrt())).floor() as i64;
    while !scaled_root_le(width * ell, r, s) {
        ell -= 1;
    }
    while scaled_root_le(width * (ell + 1), r, s) {
        ell += 1;
    }
    ell
}

/// A cube split into slabs orthogonal to its center.
#[derive(Debug, Clone)]
pub struct StripDecomposition {
    pub cube: FrequencyRegion,
    pub xi0: LatticePoint,
    pub width: i64,
    /// Nonempty strips ordered by `ℓ`.
    pub strips: Vec<(i64, FrequencyRegion)>,
}

impl StripDecomposition {
    pub fn strip_of(&self, xi: &LatticePoint) -> Option<i64> {
        if !self.cube.contains(xi) {
            return None;
        }
        Some(strip_index(xi.dot(&self.xi0), self.xi0.norm_sq(), self.width))
    }
}

/// Strip width `M = max{N2²/N1, 1}` for dyadic `N1 ≥ N2`.
pub fn strip_width(n1: u64, n2: u64) -> i64 {
    ((n2 * n2) / n1).max(1) as i64
}

/// Splits a cube of `C_{N2}` into strips of width `M = max{N2²/N1, 1}`
/// orthogonal to the cube center.
pub fn strip_decompose(cube: &FrequencyRegion, n1: u64, n2: u64) -> Result<StripDecomposition> {
    let FrequencyRegion::Cube { center, half_width } = cube else {
        return Err(Error::Usage("strip decomposition needs a cube region".into()));
    };
    if !is_dyadic(n1) || !is_dyadic(n2) {
        return Err(Error::Usage(format!("N1 = {n1} and N2 = {n2} must be dyadic")));
    }
    if n1 < n2 {
        return Err(Error::Usage(format!("need N1 >= N2, got N1 = {n1}, N2 = {n2}")));
    }
    if *half_width > n2 as i64 {
        return Err(Error::Usage(format!(
            "cube half-width {half_width} exceeds N2 = {n2}"
        )));
    }
    if center.norm_sq() == 0 {
        return Err(Error::DegenerateCenter);
    }
    let width = strip_width(n1, n2);
    let r = center.norm_sq();
    let ells: BTreeSet<i64> = cube
        .points()
        .iter()
        .map(|p| strip_index(p.dot(center), r, width))
        .collect();
    let strips = ells
        .into_iter()
        .map(|ell| {
            (
                ell,
                FrequencyRegion::Strip {
                    center: *center,
                    half_width: *half_width,
                    xi0: *center,
                    width,
                    ell,
                },
            )
        })
        .collect();
    Ok(StripDecomposition {
        cube: cube.clone(),
        xi0: *center,
        width,
        strips,
    })
}
