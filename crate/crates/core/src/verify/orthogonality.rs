//! Almost-orthogonality of the strip pieces of a high-frequency factor.
//!
//! With `u_1` supported in a cube of side `N_2` at distance `N_1` from the
//! origin and `u_2, u_3` at frequency `≲ N_2`, the strip pieces of `u_1`
//! produce products whose time frequencies separate. For a smooth window `W`
//! equal to 1 on `τ_0` and supported in `τ_1`,
//! `LHS²(τ_0) ≤ ∫W‖w‖² = Σ_ℓ ∫W‖w_ℓ‖² + cross_W ≤ Σ_ℓ ‖w_ℓ‖²_{L²(τ_1)} + cross_W`,
//! so the deficit is bounded by `cross_W`, which is computed exactly.

use super::config::{ExperimentConfig, ExperimentKind};
use super::data::{data_stream, make_data};
use super::estimates::expect_kind;
use super::fit::fit_scaling;
use super::report::{ScalingReport, ScalingRow, SubCheck, ESTIMATE_CLOCK, REPORT_SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::mixed_norms::{interval_kernel, ResonanceSum, SmoothWindow};
use crate::spectral::{strip_decompose, DyadicCutoff, FrequencyRegion};
use crate::torus::LatticePoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityRow {
    pub n1: u64,
    pub n2: u64,
    pub strips: usize,
    pub lhs_sq: f64,
    pub strip_sum: f64,
    pub deficit: f64,
    pub cross_w: f64,
    /// `∏‖φ_j‖²` after projection.
    pub norm_product_sq: f64,
}

/// One configuration at `N_1 = N_2²`, `k = 1`, in 2d.
pub fn orthogonality_row(cfg: &ExperimentConfig, n2: u64, scale_index: usize) -> Result<OrthogonalityRow> {
    let torus = cfg.torus()?;
    let n1 = n2 * n2;
    let (t0, t1) = cfg.tau0();
    let margin = cfg.margin.unwrap_or(0.05);
    let seed = cfg.seed.unwrap_or(0);
    let family = cfg.family();
    let w = n2 as i64;
    if !(margin > 0.0) || t0 - margin < 0.0 || t1 + margin > 1.0 {
        return Err(Error::config("margin", format!("[{t0}, {t1}] widened by {margin} leaves [0, 1]")));
    }

    let cube1 = FrequencyRegion::cube(LatticePoint::new(&[n1 as i64, 0]), w);
    let decomposition = strip_decompose(&cube1, n1, n2)?;
    let data = |region: &FrequencyRegion, factor: u64, n: u64| -> Result<_> {
        let raw = make_data(&torus, region, family, seed, data_stream(0, factor, scale_index as u64))?;
        Ok(raw.project_cutoff(&DyadicCutoff::new(n)?))
    };
    let phi1 = data(&cube1, 0, n1)?;
    let phi2 = data(&FrequencyRegion::cube(LatticePoint::new(&[0, w]), 1), 1, n2)?;
    let phi3 = data(&FrequencyRegion::cube(LatticePoint::new(&[w, 0]), 1), 2, n2)?;
    let factors = [phi1, phi2, phi3];
    let norm_product_sq: f64 = factors.iter().map(|f| f.l2_norm_sq()).product();

    let sum = ResonanceSum::with_tags(&factors, |n| decomposition.strip_of(n).unwrap_or(i64::MIN))?;
    let lhs_sq = sum.pair_sums(interval_kernel(t0, t1)).total();
    let strip_sum = sum.pair_sums(interval_kernel(t0 - margin, t1 + margin)).same_tag;
    let window = SmoothWindow::new(t0, t1, margin)?;
    let cross_w = sum.pair_sums(|x| window.fourier(x)).cross_tag;
    Ok(OrthogonalityRow {
        n1,
        n2,
        strips: decomposition.strips.len(),
        lhs_sq,
        strip_sum,
        deficit: lhs_sq - strip_sum,
        cross_w,
        norm_product_sq,
    })
}

/// Sweeps `N_2`, fits `|cross_W| / ∏‖φ_j‖² ≈ K N_2^{−σ_0}` and checks the
/// deficit against the fitted bound.
pub fn run_orthogonality_check(cfg: &ExperimentConfig) -> Result<ScalingReport> {
    expect_kind(cfg, ExperimentKind::Orthogonality)?;
    cfg.validate()?;
    let scales = cfg.scales.clone().unwrap_or_else(|| vec![4, 8, 16, 32]);
    let rows: Vec<OrthogonalityRow> = scales
        .iter()
        .enumerate()
        .map(|(i, &n2)| orthogonality_row(cfg, n2, i))
        .collect::<Result<_>>()?;
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.n2 as f64, r.cross_w.abs() / r.norm_product_sq))
        .collect();
    let fit = fit_scaling(&points)?;
    let sigma0 = -fit.slope;
    let k = points
        .iter()
        .map(|&(n, v)| v * n.powf(sigma0))
        .fold(0.0, f64::max);
    let bound = |r: &OrthogonalityRow| k * (r.n2 as f64).powf(-sigma0) * r.norm_product_sq;
    let deficit_ratio = rows
        .iter()
        .map(|r| r.deficit / bound(r))
        .fold(f64::NEG_INFINITY, f64::max);
    let certificate = rows
        .iter()
        .map(|r| (r.deficit - r.cross_w) / r.norm_product_sq)
        .fold(f64::NEG_INFINITY, f64::max);
    let checks = vec![
        SubCheck::above("sigma0", sigma0, 0.0),
        SubCheck::at_most("deficit_over_bound", deficit_ratio, 1.0 + 1e-9),
        SubCheck::at_most("deficit_minus_cross_w", certificate, 1e-9),
    ];
    let torus = cfg.torus()?;
    let table: Vec<ScalingRow> = rows
        .iter()
        .zip(&points)
        .map(|(r, &(_, v))| {
            let rhs = r.strip_sum + bound(r);
            ScalingRow {
                scale: r.n2 as f64,
                value: v,
                n1: Some(r.n1),
                n2: Some(r.n2),
                n3: Some(r.n2),
                m: Some(1),
                lhs: r.lhs_sq,
                rhs_model: rhs,
                ratio: r.lhs_sq / rhs,
                n_t_used: 0,
                grid_used: Vec::new(),
                trial: 0,
            }
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(ScalingReport {
        schema_version: REPORT_SCHEMA_VERSION,
        experiment: cfg.name.clone().unwrap_or_else(|| cfg.kind.as_str().to_string()),
        kind: cfg.kind.as_str().into(),
        clock: ESTIMATE_CLOCK.into(),
        d: 2,
        alphas: torus.alphas().to_vec(),
        rational: torus.is_rational(),
        family: cfg.family().as_str().into(),
        seed: cfg.seed.unwrap_or(0),
        p: Some(2.0),
        q: Some(2.0),
        eps: None,
        sweep: "N2".into(),
        rows: table,
        slope: fit.slope,
        intercept: fit.intercept,
        max_residual: fit.max_residual,
        predicted: 0.0,
        tolerance: 0.0,
        slack: fit.slope,
        checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deficit_is_certified_by_the_cross_terms() {
        let cfg = ExperimentConfig::new(ExperimentKind::Orthogonality);
        for (i, n2) in [2u64, 4].into_iter().enumerate() {
            let r = orthogonality_row(&cfg, n2, i).unwrap();
            assert_eq!(r.strips, 2 * n2 as usize + 1);
            assert!(r.lhs_sq > 0.0 && r.strip_sum > 0.0);
            assert!(r.deficit <= r.cross_w + 1e-9 * r.norm_product_sq, "{r:?}");
        }
    }

    #[test]
    fn single_strip_has_no_cross_terms() {
        let torus = crate::torus::IrrationalTorus::generic(2).unwrap();
        let n1 = 16u64;
        let cube = FrequencyRegion::cube(LatticePoint::new(&[16, 0]), 4);
        let dec = strip_decompose(&cube, n1, 4).unwrap();
        let column = &dec.strips[3].1;
        let phi1 = make_data(&torus, column, crate::verify::config::DataFamily::Dirichlet, 0, 0).unwrap();
        let phi2 = make_data(&torus, &FrequencyRegion::cube(LatticePoint::new(&[0, 4]), 1), crate::verify::config::DataFamily::Dirichlet, 0, 1).unwrap();
        let sum = ResonanceSum::with_tags(&[phi1, phi2.clone(), phi2], |n| dec.strip_of(n).unwrap()).unwrap();
        let inner = sum.pair_sums(interval_kernel(0.25, 0.75));
        let outer = sum.pair_sums(interval_kernel(0.2, 0.8));
        assert_eq!(inner.cross_tag, 0.0);
        assert!(inner.total() <= outer.same_tag);
    }
}
