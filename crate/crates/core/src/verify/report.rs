//! Scaling reports, their CSV rows and JSON summaries.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fit::Fit;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 17] = [
    "experiment",
    "d",
    "alphas",
    "family",
    "seed",
    "N1",
    "N2",
    "N3",
    "M",
    "p",
    "q",
    "eps",
    "lhs",
    "rhs_model",
    "ratio",
    "n_t_used",
    "grid_used",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    /// The swept scale of this row.
    pub scale: f64,
    /// The quantity entering the fit, usually `lhs / ∏‖φ_j‖`.
    pub value: f64,
    pub n1: Option<u64>,
    pub n2: Option<u64>,
    pub n3: Option<u64>,
    pub m: Option<u64>,
    pub lhs: f64,
    /// Model right-hand side with unit constant.
    pub rhs_model: f64,
    pub ratio: f64,
    pub n_t_used: usize,
    pub grid_used: Vec<usize>,
    /// Trial that attained the reported maximum.
    pub trial: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl SubCheck {
    /// Passes when `value ≤ limit`.
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }

    /// Passes when `value > limit`.
    pub fn above(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            pass: value > limit,
        }
    }
}

/// Version of the JSON summary layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Time convention of the estimate experiments: `e^{2πiQ(n)t}`.
pub const ESTIMATE_CLOCK: &str = "exp(2 pi i Q t)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub schema_version: u32,
    pub experiment: String,
    pub kind: String,
    pub clock: String,
    pub d: usize,
    pub alphas: Vec<f64>,
    pub rational: bool,
    pub family: String,
    pub seed: u64,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub eps: Option<f64>,
    /// Name of the swept scale.
    pub sweep: String,
    pub rows: Vec<ScalingRow>,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub predicted: f64,
    pub tolerance: f64,
    /// `slope − predicted`.
    pub slack: f64,
    pub checks: Vec<SubCheck>,
    pub pass: bool,
}

impl ScalingReport {
    pub fn fit(&self) -> Fit {
        Fit {
            slope: self.slope,
            intercept: self.intercept,
            max_residual: self.max_residual,
        }
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.scale, r.value)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("scaling report: {e}")))
    }

    pub fn alphas_field(&self) -> String {
        self.alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(";")
    }

    pub fn write_csv<W: Write>(&self, out: W, include_header: bool) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        let csv_err = |e: csv::Error| Error::Format(e.to_string());
        if include_header {
            w.write_record(CSV_HEADER).map_err(csv_err)?;
        }
        let opt_u = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let opt_f = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            let grid = r.grid_used.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("x");
            w.write_record([
                self.experiment.clone(),
                self.d.to_string(),
                self.alphas_field(),
                self.family.clone(),
                self.seed.to_string(),
                opt_u(r.n1),
                opt_u(r.n2),
                opt_u(r.n3),
                opt_u(r.m),
                opt_f(self.p),
                opt_f(self.q),
                opt_f(self.eps),
                r.lhs.to_string(),
                r.rhs_model.to_string(),
                r.ratio.to_string(),
                r.n_t_used.to_string(),
                grid,
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        self.write_csv(std::fs::File::create(csv_path)?, true)?;
        std::fs::write(dir.join(format!("{}.json", self.experiment)), self.to_json())?;
        Ok(())
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let checks = self
            .checks
            .iter()
            .map(|c| format!(" {}={:.4}/{:.4}{}", c.name, c.value, c.limit, if c.pass { "" } else { "!" }))
            .collect::<String>();
        format!(
            "{} [{}] slope {:.4} vs predicted {:.4} (+{}) over {} {}{}",
            self.experiment,
            if self.pass { "PASS" } else { "FAIL" },
            self.slope,
            self.predicted,
            self.tolerance,
            self.rows.len(),
            self.sweep,
            checks
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScalingReport {
        ScalingReport {
            schema_version: REPORT_SCHEMA_VERSION,
            experiment: "demo".into(),
            kind: "linear-2d".into(),
            clock: ESTIMATE_CLOCK.into(),
            d: 2,
            alphas: vec![1.0, 2f64.sqrt()],
            rational: false,
            family: "dirichlet".into(),
            seed: 7,
            p: Some(7.0),
            q: Some(6.0),
            eps: None,
            sweep: "N".into(),
            rows: vec![ScalingRow {
                scale: 4.0,
                value: 1.5,
                n1: Some(4),
                n2: None,
                n3: None,
                m: None,
                lhs: 13.5,
                rhs_model: 12.0,
                ratio: 1.125,
                n_t_used: 256,
                grid_used: vec![30, 30],
                trial: 0,
            }],
            slope: 0.4,
            intercept: 0.1,
            max_residual: 0.0,
            predicted: 0.38,
            tolerance: 0.1,
            slack: 0.02,
            checks: vec![],
            pass: true,
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "demo,2,1;1.4142135623730951,dirichlet,7,4,,,,7,6,,13.5,12,1.125,256,30x30"
        );
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(ScalingReport::from_json(&r.to_json()).unwrap(), r);
        assert!(ScalingReport::from_json("{").is_err());
    }
}
