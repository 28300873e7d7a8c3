//! Split-step pseudospectral solver for `i∂_t u − Δu = λ|u|^{2k}u` on an
//! irrational torus, with `Δ̂(n) = −4π²Q(n)`.
//!
//! The solver runs in physical time: the linear flow multiplies `û(n)` by
//! `e^{4π²iQ(n)t}`, which is the estimates' propagator `e^{2πiQ(n)t}` at time
//! `2πt`. Modes are kept in the cube `|n_j| ≤ K` of the initial data and the
//! collocation grid has `G > (2k+2)K` points per axis, so `|u|^{2k}u` is
//! alias-free inside the band and the grid mean of `|u|^{2k+2}` is exact.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{smooth_size_above, GridFft};
use crate::spectral::{cis_turns, FourierState, FrequencyRegion};
use crate::torus::{critical_index, ratio_to_f64, sobolev_weight, IrrationalTorus, LatticePoint};
use crate::verify::{trial_rng, Sign};

#[derive(Debug, Clone, PartialEq)]
pub struct NlsProblem {
    pub initial: FourierState,
    pub k: u32,
    pub sign: Sign,
    /// Final time; negative together with `dt` integrates backwards.
    pub t_final: f64,
    pub dt: f64,
    pub grid_per_dim: Option<usize>,
    /// Record conserved quantities every this many steps (0: ends only).
    pub frame_every: usize,
    /// Abort once `sup |u|` on the grid exceeds this.
    pub blowup: f64,
    /// Truncate to the retained band after each nonlinear step.
    pub dealias: bool,
    /// Drop the nonlinearity (linear flow only).
    pub nonlinear: bool,
    /// Keep the state at every recorded frame.
    pub snapshots: bool,
}

impl NlsProblem {
    pub fn new(initial: FourierState, k: u32, sign: Sign, t_final: f64, dt: f64) -> Self {
        Self {
            initial,
            k,
            sign,
            t_final,
            dt,
            grid_per_dim: None,
            frame_every: 0,
            blowup: 1e6,
            dealias: true,
            nonlinear: true,
            snapshots: false,
        }
    }

    pub fn steps(&self) -> Result<usize> {
        if self.dt == 0.0 || !self.dt.is_finite() || !self.t_final.is_finite() {
            return Err(Error::Usage(format!("bad time step {} for final time {}", self.dt, self.t_final)));
        }
        let ratio = self.t_final / self.dt;
        let steps = ratio.round();
        if steps < 0.0 || (ratio - steps).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::Usage(format!(
                "final time {} is not a nonnegative multiple of dt = {}",
                self.t_final, self.dt
            )));
        }
        Ok(steps as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Domain("nonlinearity power k must be >= 1".into()));
        }
        self.steps()?;
        if !(self.blowup > 0.0) {
            return Err(Error::Usage("blow-up ceiling must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservedQuantities {
    pub t: f64,
    /// `½ Σ|û(n)|²`.
    pub mass: f64,
    /// `½ Σ 4π²Q(n)|û(n)|² − λ (2k+2)^{-1} mean |u|^{2k+2}`, the constant of motion.
    pub energy: f64,
    /// The same with `Q(n)` replaced by `|n|²`.
    pub energy_unweighted: f64,
    pub h_sc_norm: f64,
    /// Largest `|u|` on the collocation grid.
    pub sup_norm: f64,
}

pub const FRAME_HEADER: [&str; 6] = ["t", "mass", "energy_weighted", "energy_unweighted", "h_sc", "sup_norm"];

/// Exact linear flow over `dt`: `û(n) ↦ e^{4π²iQ(n)dt} û(n)`.
pub fn linear_step(state: &FourierState, dt: f64) -> FourierState {
    state.propagate(2.0 * PI * dt)
}

/// Exact flow of `i∂_t u = λ|u|^{2k}u`: `u ↦ e^{−iλ|u|^{2k}dt} u` pointwise.
pub fn nonlinear_step(field: &mut [Complex64], dt: f64, k: u32, sign: Sign) {
    let lam = sign.value();
    for z in field.iter_mut() {
        let a = z.norm_sqr().powi(k as i32);
        *z *= Complex64::from_polar(1.0, -lam * a * dt);
    }
}

/// Plane-wave solution `A e^{2πin₀·x} e^{i(4π²Q(n₀) − λ|A|^{2k})t}`.
pub fn plane_wave(torus: &IrrationalTorus, n0: LatticePoint, amp: Complex64, k: u32, sign: Sign, t: f64) -> Result<FourierState> {
    let q = torus.quadratic_form(&n0)?;
    let phase = (4.0 * PI * PI * q - sign.value() * amp.norm_sqr().powi(k as i32)) * t;
    FourierState::single_mode(torus.clone(), n0, amp * Complex64::from_polar(1.0, phase))
}

/// Dense spectral workspace on the collocation grid.
struct Solver {
    torus: IrrationalTorus,
    fft: GridFft,
    g: usize,
    band: i64,
    /// Flat indices of the evolved modes with their lattice points: the band,
    /// or the whole grid when nothing is truncated.
    modes: Vec<(usize, LatticePoint)>,
    in_band: Vec<bool>,
    k: u32,
    sign: Sign,
    s_c: f64,
}

impl Solver {
    fn new(torus: &IrrationalTorus, band: i64, k: u32, sign: Sign, grid: Option<usize>, truncate: bool) -> Result<Self> {
        let d = torus.dim();
        let need = (2 * k as usize + 2) * band as usize;
        let g = match grid {
            Some(g) if g <= need => {
                return Err(Error::Resolution(format!(
                    "grid {g} must exceed (2k+2)·K = {need} for an alias-free nonlinearity"
                )))
            }
            Some(g) => g,
            None => smooth_size_above(need).max(2),
        };
        let fft = GridFft::new(&vec![g; d]);
        let mut modes = Vec::new();
        let mut in_band = vec![false; fft.len()];
        for p in FrequencyRegion::centered_cube(d, band).points() {
            in_band[fft.flat_index(p.coords())] = true;
        }
        let lo = -((g as i64 - 1) / 2);
        let hi = g as i64 / 2;
        for p in FrequencyRegion::rectangle(LatticePoint::origin(d), vec![hi; d]).points() {
            if p.coords().iter().all(|&c| c >= lo) {
                let idx = fft.flat_index(p.coords());
                if !truncate || in_band[idx] {
                    modes.push((idx, p));
                }
            }
        }
        let s_c = ratio_to_f64(critical_index(d as u32, k)?);
        Ok(Self {
            torus: torus.clone(),
            fft,
            g,
            band,
            modes,
            in_band,
            k,
            sign,
            s_c,
        })
    }

    fn scatter(&self, state: &FourierState) -> Vec<Complex64> {
        let mut c = vec![Complex64::default(); self.fft.len()];
        for (n, &z) in state.iter() {
            c[self.fft.flat_index(n.coords())] = z;
        }
        c
    }

    fn gather(&self, c: &[Complex64]) -> FourierState {
        let coeffs = self
            .modes
            .iter()
            .filter(|(idx, _)| c[*idx] != Complex64::default())
            .map(|(idx, p)| (*p, c[*idx]));
        FourierState::from_coeffs(self.torus.clone(), coeffs).expect("band points match the torus")
    }

    fn phases(&self, dt: f64) -> Vec<(usize, Complex64)> {
        self.modes
            .iter()
            .map(|(idx, p)| (*idx, cis_turns(2.0 * PI * self.torus.q(p) * dt)))
            .collect()
    }

    fn field(&self, c: &[Complex64]) -> Vec<Complex64> {
        let mut f = c.to_vec();
        self.fft.inverse(&mut f);
        f
    }

    fn quantities(&self, c: &[Complex64], t: f64) -> ConservedQuantities {
        let mut mass = 0.0;
        let mut kin = 0.0;
        let mut kin_flat = 0.0;
        let mut hs = 0.0;
        for (idx, p) in &self.modes {
            let a = c[*idx].norm_sqr();
            mass += a;
            kin += self.torus.q(p) * a;
            kin_flat += p.norm_sq() as f64 * a;
            hs += sobolev_weight(p, self.s_c) * a;
        }
        let field = self.field(c);
        let e = 2 * self.k as i32 + 2;
        let pot = field.iter().map(|z| z.norm_sqr().powi(e / 2)).sum::<f64>() / field.len() as f64;
        let sup = field.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let potential = -self.sign.value() * pot / e as f64;
        ConservedQuantities {
            t,
            mass: 0.5 * mass,
            energy: 2.0 * PI * PI * kin + potential,
            energy_unweighted: 2.0 * PI * PI * kin_flat + potential,
            h_sc_norm: hs.sqrt(),
            sup_norm: sup,
        }
    }
}

/// Conserved quantities of a state, sampled on the solver's grid for its band.
pub fn conserved(state: &FourierState, k: u32, sign: Sign, t: f64) -> Result<ConservedQuantities> {
    let band = state.max_abs_freq().max(0);
    let solver = Solver::new(state.torus(), band, k, sign, None, true)?;
    Ok(solver.quantities(&solver.scatter(state), t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub frames: Vec<ConservedQuantities>,
    pub final_state: FourierState,
    pub snapshots: Vec<(f64, FourierState)>,
    pub steps: usize,
    pub grid: usize,
    pub band: i64,
}

impl Trajectory {
    /// Largest `|mass(t) − mass(0)|` over the frames.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.frames[0].mass;
        self.frames.iter().map(|f| (f.mass - m0).abs()).fold(0.0, f64::max)
    }

    pub fn energy_drift(&self) -> f64 {
        let e0 = self.frames[0].energy;
        self.frames.iter().map(|f| (f.energy - e0).abs()).fold(0.0, f64::max)
    }

    pub fn write_frames_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(FRAME_HEADER).map_err(csv_err)?;
        for f in &self.frames {
            w.write_record([
                f.t.to_string(),
                f.mass.to_string(),
                f.energy.to_string(),
                f.energy_unweighted.to_string(),
                f.h_sc_norm.to_string(),
                f.sup_norm.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Strang splitting: half linear step, full nonlinear step, half linear step.
pub fn solve(problem: &NlsProblem) -> Result<Trajectory> {
    problem.validate()?;
    let steps = problem.steps()?;
    let torus = problem.initial.torus();
    let band = problem.initial.max_abs_freq().max(0);
    let solver = Solver::new(torus, band, problem.k, problem.sign, problem.grid_per_dim, problem.dealias)?;
    let half = solver.phases(problem.dt / 2.0);
    let mut c = solver.scatter(&problem.initial);
    let mut frames = vec![solver.quantities(&c, 0.0)];
    let mut snapshots = Vec::new();
    if problem.snapshots {
        snapshots.push((0.0, problem.initial.clone()));
    }
    for step in 1..=steps {
        for &(idx, ph) in &half {
            c[idx] *= ph;
        }
        if problem.nonlinear {
            solver.fft.inverse(&mut c);
            nonlinear_step(&mut c, problem.dt, problem.k, problem.sign);
            let sup = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if !(sup <= problem.blowup) {
                return Err(Error::BlowUp {
                    t: step as f64 * problem.dt,
                    sup_norm: sup,
                    ceiling: problem.blowup,
                });
            }
            solver.fft.forward_normalized(&mut c);
            if problem.dealias {
                c.iter_mut().zip(&solver.in_band).for_each(|(z, &keep)| {
                    if !keep {
                        *z = Complex64::default();
                    }
                });
            }
        }
        for &(idx, ph) in &half {
            c[idx] *= ph;
        }
        let t = step as f64 * problem.dt;
        if step == steps || (problem.frame_every > 0 && step % problem.frame_every == 0) {
            frames.push(solver.quantities(&c, t));
            if problem.snapshots {
                snapshots.push((t, solver.gather(&c)));
            }
        }
    }
    Ok(Trajectory {
        frames,
        final_state: solver.gather(&c),
        snapshots,
        steps,
        grid: solver.g,
        band: solver.band,
    })
}

/// Random-phase data on the centred cube of half-width `band`, normalised to
/// unit `H^{s_c}` norm.
pub fn small_data_profile(torus: &IrrationalTorus, band: i64, k: u32, seed: u64) -> Result<FourierState> {
    let d = torus.dim();
    let s_c = ratio_to_f64(critical_index(d as u32, k)?);
    let mut rng = trial_rng(seed, 0);
    let raw = FourierState::from_coeffs(
        torus.clone(),
        FrequencyRegion::centered_cube(d, band)
            .points()
            .into_iter()
            .map(|n| (n, cis_turns(rng.gen::<f64>()))),
    )?;
    let norm = crate::mixed_norms::h_s_norm(&raw, s_c);
    Ok(raw.scaled(Complex64::new(1.0 / norm, 0.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallDataRow {
    pub delta: f64,
    /// `sup_t ‖u(t)‖_{H^{s_c}} / ‖δφ‖_{H^{s_c}}`.
    pub ratio: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallDataReport {
    pub d: usize,
    pub k: u32,
    pub s_c: f64,
    pub seed: u64,
    pub rows: Vec<SmallDataRow>,
}

impl SmallDataReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["d", "k", "seed", "delta", "ratio", "mass_drift", "energy_drift"])
            .map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                self.d.to_string(),
                self.k.to_string(),
                self.seed.to_string(),
                r.delta.to_string(),
                r.ratio.to_string(),
                r.mass_drift.to_string(),
                r.energy_drift.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallDataSettings {
    pub band: i64,
    pub sign: Sign,
    pub dt: f64,
    pub t_final: f64,
    pub blowup: f64,
    pub nonlinear: bool,
}

impl Default for SmallDataSettings {
    fn default() -> Self {
        Self {
            band: 2,
            sign: Sign::Defocusing,
            dt: 1e-3,
            t_final: 1.0,
            blowup: 1e6,
            nonlinear: true,
        }
    }
}

/// Evolves `δφ` for every `δ` and reports the growth of the critical norm.
pub fn small_data_experiment(torus: &IrrationalTorus, k: u32, deltas: &[f64], seed: u64, settings: &SmallDataSettings) -> Result<SmallDataReport> {
    let d = torus.dim();
    if !((d == 2 && k >= 3) || (d == 3 && k == 2)) {
        return Err(Error::Domain(format!(
            "small-data runs need d = 2 with k >= 3 or d = 3 with k = 2, got d = {d}, k = {k}"
        )));
    }
    let s_c = ratio_to_f64(critical_index(d as u32, k)?);
    let profile = small_data_profile(torus, settings.band, k, seed)?;
    let rows = deltas
        .par_iter()
        .map(|&delta| {
            if delta == 0.0 {
                return Ok(SmallDataRow {
                    delta,
                    ratio: 1.0,
                    mass_drift: 0.0,
                    energy_drift: 0.0,
                });
            }
            let mut problem = NlsProblem::new(
                profile.scaled(Complex64::new(delta, 0.0)),
                k,
                settings.sign,
                settings.t_final,
                settings.dt,
            );
            problem.frame_every = 1;
            problem.blowup = settings.blowup;
            problem.nonlinear = settings.nonlinear;
            let traj = solve(&problem)?;
            let start = traj.frames[0].h_sc_norm;
            let peak = traj.frames.iter().map(|f| f.h_sc_norm).fold(0.0, f64::max);
            Ok(SmallDataRow {
                delta,
                ratio: peak / start,
                mass_drift: traj.mass_drift(),
                energy_drift: traj.energy_drift(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SmallDataReport { d, k, s_c, seed, rows })
}
