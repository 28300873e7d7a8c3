//! Declarative experiment configuration and hypothesis guards.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus::{default_alphas, IrrationalTorus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "point-estimate")]
    PointEstimate,
    #[serde(rename = "weyl")]
    Weyl,
    #[serde(rename = "trilinear-2d")]
    Trilinear2d,
    #[serde(rename = "linear-2d")]
    Linear2d,
    #[serde(rename = "multilinear-2d")]
    Multilinear2d,
    #[serde(rename = "linear-3d")]
    Linear3d,
    #[serde(rename = "trilinear-3d")]
    Trilinear3d,
    #[serde(rename = "orthogonality")]
    Orthogonality,
    #[serde(rename = "nls")]
    Nls,
    #[serde(rename = "small-data")]
    SmallData,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::PointEstimate => "point-estimate",
            ExperimentKind::Weyl => "weyl",
            ExperimentKind::Trilinear2d => "trilinear-2d",
            ExperimentKind::Linear2d => "linear-2d",
            ExperimentKind::Multilinear2d => "multilinear-2d",
            ExperimentKind::Linear3d => "linear-3d",
            ExperimentKind::Trilinear3d => "trilinear-3d",
            ExperimentKind::Orthogonality => "orthogonality",
            ExperimentKind::Nls => "nls",
            ExperimentKind::SmallData => "small-data",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    /// All scales equal and swept together.
    Balanced,
    /// Highest scale swept, the others held at `fixed`.
    Separated,
    /// Lowest scale swept with the two highest held at `fixed`.
    N3Sweep,
    Cube,
    Rectangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataFamily {
    Dirichlet,
    RandomPhase,
    Gaussian,
}

impl DataFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            DataFamily::Dirichlet => "dirichlet",
            DataFamily::RandomPhase => "random_phase",
            DataFamily::Gaussian => "gaussian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    /// `i∂_t u − Δu = −|u|^{2k}u`, whose conjugate solves the usual
    /// defocusing equation; the conserved energy is positive.
    Defocusing,
    /// `i∂_t u − Δu = +|u|^{2k}u`.
    Focusing,
}

impl Sign {
    /// The coefficient `λ` in `i∂_t u − Δu = λ|u|^{2k}u`.
    pub fn value(&self) -> f64 {
        match self {
            Sign::Defocusing => -1.0,
            Sign::Focusing => 1.0,
        }
    }
}

/// One experiment block. Fields that do not apply to a kind are ignored;
/// unset fields take the kind's desk-scale defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub name: Option<String>,
    pub dimension: Option<usize>,
    pub alphas: Option<Vec<f64>>,
    /// Shortcut for `alphas = [1, …, 1]`.
    pub rational: Option<bool>,
    pub c_bound: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub eps: Option<f64>,
    pub k: Option<u32>,
    pub mode: Option<SweepMode>,
    pub scales: Option<Vec<u64>>,
    pub fixed: Option<u64>,
    pub family: Option<DataFamily>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub tau0: Option<[f64; 2]>,
    pub margin: Option<f64>,
    pub rtol: Option<f64>,
    /// Allowed excess of a fitted slope over its prediction.
    pub tolerance: Option<f64>,
    pub radii: Option<Vec<f64>>,
    pub exponents: Option<Vec<f64>>,
    pub max_set_size: Option<usize>,
    pub half_width: Option<i64>,
    pub sign: Option<Sign>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub amplitude: Option<f64>,
    pub deltas: Option<Vec<f64>>,
    pub frames: Option<usize>,
    pub blowup: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            name: None,
            dimension: None,
            alphas: None,
            rational: None,
            c_bound: None,
            p: None,
            q: None,
            eps: None,
            k: None,
            mode: None,
            scales: None,
            fixed: None,
            family: None,
            trials: None,
            seed: None,
            tau0: None,
            margin: None,
            rtol: None,
            tolerance: None,
            radii: None,
            exponents: None,
            max_set_size: None,
            half_width: None,
            sign: None,
            dt: None,
            t_final: None,
            amplitude: None,
            deltas: None,
            frames: None,
            blowup: None,
        }
    }

    /// Dimension fixed by the kind, or configured for the others.
    pub fn dim(&self) -> usize {
        match self.kind {
            ExperimentKind::Trilinear2d
            | ExperimentKind::Linear2d
            | ExperimentKind::Multilinear2d
            | ExperimentKind::Orthogonality => 2,
            ExperimentKind::Linear3d | ExperimentKind::Trilinear3d => 3,
            ExperimentKind::SmallData => self.dimension.unwrap_or(3),
            _ => self.dimension.unwrap_or(2),
        }
    }

    pub fn torus(&self) -> Result<IrrationalTorus> {
        let d = self.dim();
        let alphas = match (&self.alphas, self.rational) {
            (Some(a), _) => {
                if a.len() != d {
                    return Err(Error::config(
                        "alphas",
                        format!("expected {d} aspect ratios, got {}", a.len()),
                    ));
                }
                a.clone()
            }
            (None, Some(true)) => vec![1.0; d],
            (None, _) => default_alphas(d),
        };
        IrrationalTorus::new(alphas, self.c_bound.unwrap_or(2.0)).map_err(|e| Error::config("alphas", e.to_string()))
    }

    pub fn family(&self) -> DataFamily {
        self.family.unwrap_or(DataFamily::Dirichlet)
    }

    pub fn trials(&self) -> u64 {
        self.trials.unwrap_or(match self.family() {
            DataFamily::Dirichlet => 1,
            _ => 3,
        })
    }

    pub fn tau0(&self) -> (f64, f64) {
        let t = self.tau0.unwrap_or(match self.kind {
            ExperimentKind::Orthogonality => [0.25, 0.75],
            _ => [0.0, 1.0],
        });
        (t[0], t[1])
    }

    pub fn mode(&self) -> SweepMode {
        self.mode.unwrap_or(match self.kind {
            ExperimentKind::Linear2d | ExperimentKind::Linear3d => SweepMode::Cube,
            _ => SweepMode::Balanced,
        })
    }

    /// Applies the hypothesis guards of the estimate named by `kind`.
    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.dimension {
            if !(2..=3).contains(&d) {
                return Err(Error::config("dimension", format!("must be 2 or 3, got {d}")));
            }
        }
        self.torus()?;
        let (a, b) = self.tau0();
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::config("tau0", format!("need 0 <= t0 < t1 <= 1, got [{a}, {b}]")));
        }
        if let Some(r) = self.rtol {
            if !(r > 0.0) {
                return Err(Error::config("rtol", "must be positive"));
            }
        }
        if let Some(m) = self.margin {
            if !(m > 0.0) {
                return Err(Error::config("margin", "must be positive"));
            }
        }
        if let Some(scales) = &self.scales {
            if scales.iter().any(|&s| s == 0 || !s.is_power_of_two()) {
                return Err(Error::config("scales", "every scale must be a dyadic integer"));
            }
            if scales.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::config("scales", "scales must be strictly increasing"));
            }
            let fitted = !matches!(self.kind, ExperimentKind::PointEstimate | ExperimentKind::Nls | ExperimentKind::SmallData);
            if fitted && scales.len() < 3 {
                return Err(Error::config("scales", format!("a scaling fit needs at least 3 scales, got {}", scales.len())));
            }
        }
        if let Some(f) = self.fixed {
            if f == 0 || !f.is_power_of_two() {
                return Err(Error::config("fixed", "must be a dyadic integer"));
            }
        }
        let p = self.p;
        let q = self.q;
        match self.kind {
            ExperimentKind::Trilinear2d => {
                if let Some(p) = p {
                    if !(p > 2.0 && p <= 4.0) {
                        return Err(Error::config("p", format!("trilinear-2d needs 2 < p <= 4, got {p}")));
                    }
                }
            }
            ExperimentKind::Linear2d => {
                if let Some(p) = p {
                    if !(p > 6.0) {
                        return Err(Error::config("p", format!("linear-2d needs p > 6, got {p}")));
                    }
                }
                let pv = p.unwrap_or(7.0);
                if let Some(q) = q {
                    match self.mode() {
                        SweepMode::Rectangle => {
                            if !(6.0 <= q && q < pv) {
                                return Err(Error::config("q", format!("linear-2d rectangles need 6 <= q < p, got q = {q}")));
                            }
                        }
                        _ => {
                            if q != 6.0 {
                                return Err(Error::config("q", format!("linear-2d cubes use q = 6, got {q}")));
                            }
                        }
                    }
                }
            }
            ExperimentKind::Linear3d => {
                if let Some(p) = p {
                    if !(p > 16.0 / 3.0) {
                        return Err(Error::config("p", format!("linear-3d needs p > 16/3, got {p}")));
                    }
                }
                let pv = p.unwrap_or(6.0);
                if let Some(q) = q {
                    match self.mode() {
                        SweepMode::Rectangle => {
                            if !(4.0 <= q && q < 0.75 * pv) {
                                return Err(Error::config("q", format!("linear-3d rectangles need 4 <= q < 3p/4, got q = {q}")));
                            }
                        }
                        _ => {
                            if q != 4.0 {
                                return Err(Error::config("q", format!("linear-3d cubes use q = 4, got {q}")));
                            }
                        }
                    }
                }
            }
            ExperimentKind::Multilinear2d => {
                if let Some(k) = self.k {
                    if k < 3 {
                        return Err(Error::config("k", format!("multilinear-2d needs k >= 3, got {k}")));
                    }
                }
            }
            ExperimentKind::Trilinear3d => {
                if let Some(e) = self.eps {
                    if !(e > 0.0) {
                        return Err(Error::config("eps", format!("needs eps > 0, got {e}")));
                    }
                }
            }
            ExperimentKind::Weyl => {
                if let Some(p) = p {
                    if !(p > 2.0) {
                        return Err(Error::config("p", format!("weyl needs p > 2, got {p}")));
                    }
                }
            }
            ExperimentKind::PointEstimate => {
                if let Some(r) = &self.radii {
                    if r.is_empty() || r.iter().any(|&r| !(r >= 1.0)) {
                        return Err(Error::config("radii", "radii must be nonempty and >= 1"));
                    }
                }
                if let Some(e) = &self.exponents {
                    if e.is_empty() || e.iter().any(|&p| !(p >= 2.0)) {
                        return Err(Error::config("exponents", "exponents must be nonempty and >= 2"));
                    }
                }
                if self.max_set_size == Some(0) {
                    return Err(Error::config("max_set_size", "must be positive"));
                }
            }
            ExperimentKind::Orthogonality => {
                if let Some(k) = self.k {
                    if k != 1 {
                        return Err(Error::config("k", "the orthogonality check is implemented for k = 1"));
                    }
                }
            }
            ExperimentKind::Nls | ExperimentKind::SmallData => {
                if let Some(dt) = self.dt {
                    if !(dt > 0.0) {
                        return Err(Error::config("dt", "must be positive"));
                    }
                }
                if self.k == Some(0) {
                    return Err(Error::config("k", "must be >= 1"));
                }
                if self.kind == ExperimentKind::SmallData {
                    let d = self.dim();
                    let k = self.k.unwrap_or(if d == 3 { 2 } else { 3 });
                    if !((d == 2 && k >= 3) || (d == 3 && k == 2)) {
                        return Err(Error::config("k", format!("small-data needs d = 2 with k >= 3 or d = 3 with k = 2, got d = {d}, k = {k}")));
                    }
                }
            }
        }
        Ok(())
    }
}
