//! Test data families on frequency regions.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::config::DataFamily;
use super::trial_rng;
use crate::error::{Error, Result};
use crate::spectral::{cis_turns, FourierState, FrequencyRegion};
use crate::torus::{IrrationalTorus, LatticePoint};

/// Stream index for one factor of one trial at one sweep position.
pub fn data_stream(trial: u64, factor: u64, scale_index: u64) -> u64 {
    (trial << 32) | (factor << 24) | scale_index
}

/// Coefficients on `region`: all ones, unit-modulus random phases, or
/// complex standard normals (`E|c|² = 1`).
pub fn make_data(
    torus: &IrrationalTorus,
    region: &FrequencyRegion,
    family: DataFamily,
    seed: u64,
    stream: u64,
) -> Result<FourierState> {
    if region.dim() != torus.dim() {
        return Err(Error::Usage(format!(
            "region dimension {} does not match torus dimension {}",
            region.dim(),
            torus.dim()
        )));
    }
    let points = region.points();
    if points.is_empty() {
        return Err(Error::Usage(format!("cannot build {} data on an empty region", family.as_str())));
    }
    let mut rng = trial_rng(seed, stream);
    let coeffs = points.into_iter().map(|n| {
        let c = match family {
            DataFamily::Dirichlet => Complex64::new(1.0, 0.0),
            DataFamily::RandomPhase => cis_turns(rng.gen::<f64>()),
            DataFamily::Gaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            }
        };
        (n, c)
    });
    FourierState::from_coeffs(torus.clone(), coeffs)
}

/// A box inside the sharp annulus `N/2 < |n| ≤ N`: first coordinate in
/// `[5N/8, 7N/8]`, the others in `[−N/4, N/4]`. Below `N = 4` the box would
/// be degenerate and the whole annulus is used.
pub fn annulus_box(dim: usize, n: u64) -> Result<FrequencyRegion> {
    if n < 4 {
        return FrequencyRegion::annulus(dim, n);
    }
    let n = n as i64;
    let lo = (5 * n + 7) / 8;
    let hi = 7 * n / 8;
    // centre and half-width of the integer interval [lo, hi] rounded inward
    let half = (hi - lo) / 2;
    let mut center = vec![0i64; dim];
    center[0] = lo + half;
    let mut half_widths = vec![n / 4; dim];
    half_widths[0] = half;
    Ok(FrequencyRegion::rectangle(LatticePoint::new(&center), half_widths))
}
