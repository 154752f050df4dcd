use std::collections::HashMap;

use num::complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::lattice::{Autocorrelation, LatticePoint, LatticeSignal};
use crate::scalar::Scalar;

/// Residual below which a run counts as converged.
pub const CONVERGED: f64 = 1e-6;

/// Fourier magnitudes handed to the solver.
#[derive(Debug, Clone, PartialEq)]
pub enum Magnitudes {
    /// The lag table; the solver picks its own grid.
    Autocorrelation(Autocorrelation),
    /// `|ŵ|` sampled on `grid[0] × … × grid[d−1]` DFT frequencies, first axis
    /// fastest.
    Sampled { grid: Vec<usize>, modulus: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverTarget {
    pub magnitudes: Magnitudes,
    /// Side lengths of the support box `[0, w₀) × … × [0, w_{d−1})`.
    pub support_box: Vec<usize>,
    /// References whose orbits the runs are measured against.
    pub f: Option<LatticeSignal>,
    pub g: Option<LatticeSignal>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverConstraint {
    /// Values on the support box are real.
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub restarts: usize,
    /// Hybrid input-output and error-reduction steps.
    pub iterations: usize,
    /// Extra error-reduction steps spent polishing a run.
    pub polish: usize,
    pub beta: f64,
    pub constraint: SolverConstraint,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: 50,
            iterations: 2000,
            polish: 3000,
            beta: 0.9,
            constraint: SolverConstraint::Real,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Landing {
    FOrbit,
    GOrbit,
    /// Converged, but away from both reference orbits.
    Other,
    Unconverged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverRun {
    pub seed: u64,
    pub restart: usize,
    pub iterations: usize,
    /// `‖ |x̂| − m ‖₂ / ‖m‖₂` on the solver grid.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist_f_orbit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist_g_orbit: Option<f64>,
    pub landing: Landing,
    pub estimate: LatticeSignal,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LandingStats {
    pub runs: usize,
    pub converged: usize,
    pub f_orbit: usize,
    pub g_orbit: usize,
    pub other: usize,
    pub unconverged: usize,
}

impl LandingStats {
    pub fn from_runs(runs: &[SolverRun]) -> Self {
        let mut s = LandingStats { runs: runs.len(), ..Default::default() };
        for r in runs {
            match r.landing {
                Landing::FOrbit => s.f_orbit += 1,
                Landing::GOrbit => s.g_orbit += 1,
                Landing::Other => s.other += 1,
                Landing::Unconverged => s.unconverged += 1,
            }
        }
        s.converged = s.runs - s.unconverged;
        s
    }
}

/// `min ‖x − e^{iα} u‖₂` over every shift and conjugate reflection `u` of
/// `t` and every phase.
///
/// For a fixed alignment the best phase is that of `⟨x, u⟩` and the squared
/// distance is `‖x‖² + ‖u‖² − 2|⟨x, u⟩|`. That expression cancels badly near
/// zero, so it only ranks the alignments; the best few are then evaluated
/// directly.
pub fn orbit_distance(x: &LatticeSignal, t: &LatticeSignal) -> f64 {
    let mut candidates: Vec<(f64, usize, LatticePoint, Complex64)> = Vec::new();
    let orbit = [t.clone(), t.conj_reflect()];
    for (which, u) in orbit.iter().enumerate() {
        let mut corr: HashMap<LatticePoint, Complex64> = HashMap::new();
        for (p, a) in x.iter() {
            let a = a.to_c64();
            for (q, b) in u.iter() {
                *corr.entry(p - q).or_default() += a * b.to_c64().conj();
            }
        }
        candidates.extend(corr.into_iter().map(|(s, c)| (c.norm(), which, s, c)));
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let direct = |u: &LatticeSignal, s: &LatticePoint, c: Complex64| -> f64 {
        let phase = if c.norm() > 0.0 { c / c.norm() } else { Complex64::new(1.0, 0.0) };
        let moved = u.translate(s);
        let mut sum = 0.0;
        for (p, a) in x.iter() {
            let b = moved.get(p).to_c64() * phase;
            sum += (a.to_c64() - b).norm_sqr();
        }
        for (p, b) in moved.iter() {
            if x.get(p).is_zero() {
                sum += b.to_c64().norm_sqr();
            }
        }
        sum.sqrt()
    };
    let energy = |w: &LatticeSignal| w.iter().map(|(_, v)| v.to_c64().norm_sqr()).sum::<f64>();
    let fallback = (energy(x) + energy(t)).sqrt();
    candidates
        .iter()
        .take(4)
        .map(|(_, which, s, c)| direct(&orbit[*which], s, *c))
        .fold(fallback, f64::min)
}

struct Grid {
    dims: Vec<usize>,
    total: usize,
}

impl Grid {
    fn new(dims: Vec<usize>) -> Self {
        let total = dims.iter().product();
        Grid { dims, total }
    }

    fn coords(&self, mut k: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|&n| {
                let c = k % n;
                k /= n;
                c
            })
            .collect()
    }

    fn index(&self, coords: &[i64]) -> usize {
        let mut k = 0;
        for (c, &n) in coords.iter().zip(&self.dims).rev() {
            k = k * n + c.rem_euclid(n as i64) as usize;
        }
        k
    }

    /// In-place DFT along every axis; the inverse is normalized.
    fn fft(&self, planner: &mut FftPlanner<f64>, data: &mut [Complex64], inverse: bool) {
        let mut stride = 1;
        for &n in &self.dims {
            let plan = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
            let mut line = vec![Complex64::default(); n];
            for start in 0..self.total {
                if (start / stride) % n != 0 {
                    continue;
                }
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[start + j * stride];
                }
                plan.process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    data[start + j * stride] = *v;
                }
            }
            stride *= n;
        }
        if inverse {
            let s = 1.0 / self.total as f64;
            data.iter_mut().for_each(|v| *v *= s);
        }
    }
}

fn target_modulus(
    target: &SolverTarget,
    planner: &mut FftPlanner<f64>,
) -> Result<(Grid, Vec<f64>), VerifyError> {
    let d = target.support_box.len();
    if d == 0 || target.support_box.contains(&0) {
        return Err(VerifyError::SolverInput("support box must have positive sides".into()));
    }
    match &target.magnitudes {
        Magnitudes::Autocorrelation(r) => {
            if r.dim() != d {
                return Err(VerifyError::SolverInput("autocorrelation and support box differ in dimension".into()));
            }
            let dims = target.support_box.iter().map(|&w| (4 * w).next_power_of_two()).collect();
            let grid = Grid::new(dims);
            let mut data = vec![Complex64::default(); grid.total];
            for (lag, v) in r.lags() {
                data[grid.index(lag.coords())] += v.to_c64();
            }
            grid.fft(planner, &mut data, false);
            Ok((grid, data.iter().map(|v| v.re.max(0.0).sqrt()).collect()))
        }
        Magnitudes::Sampled { grid, modulus } => {
            if grid.len() != d {
                return Err(VerifyError::SolverInput("grid and support box differ in dimension".into()));
            }
            for (&n, &w) in grid.iter().zip(&target.support_box) {
                if n < 4 * w {
                    return Err(VerifyError::GridTooSmall { grid: n, width: w });
                }
            }
            let grid = Grid::new(grid.clone());
            if modulus.len() != grid.total || modulus.iter().any(|m| !m.is_finite() || *m < 0.0) {
                return Err(VerifyError::SolverInput("modulus must hold one finite value ≥ 0 per grid point".into()));
            }
            Ok((grid, modulus.clone()))
        }
    }
}

struct Problem<'a> {
    grid: Grid,
    modulus: Vec<f64>,
    inside: Vec<bool>,
    constraint: SolverConstraint,
    planner: &'a mut FftPlanner<f64>,
}

impl Problem<'_> {
    /// Replaces Fourier moduli by the target while keeping phases.
    fn project_modulus(&mut self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = x.to_vec();
        self.grid.fft(self.planner, &mut y, false);
        for (v, &m) in y.iter_mut().zip(&self.modulus) {
            let n = v.norm();
            *v = if n > 0.0 { *v * (m / n) } else { Complex64::new(m, 0.0) };
        }
        self.grid.fft(self.planner, &mut y, true);
        y
    }

    fn admissible(&self, k: usize, v: Complex64) -> Complex64 {
        match (self.inside[k], self.constraint) {
            (false, _) => Complex64::default(),
            (true, SolverConstraint::Real) => Complex64::new(v.re, 0.0),
            (true, SolverConstraint::Complex) => v,
        }
    }

    fn error_reduction(&mut self, x: &mut [Complex64]) {
        let y = self.project_modulus(x);
        for (k, v) in y.into_iter().enumerate() {
            x[k] = self.admissible(k, v);
        }
    }

    /// `x ← P y + (I − P)(x − βy)` with `y` the modulus projection and `P`
    /// the (linear) support and value projection.
    fn hybrid_io(&mut self, x: &mut [Complex64], beta: f64) {
        let y = self.project_modulus(x);
        for (k, v) in y.into_iter().enumerate() {
            let feedback = x[k] - v * beta;
            x[k] = self.admissible(k, v) + feedback - self.admissible(k, feedback);
        }
    }

    fn residual(&mut self, x: &[Complex64]) -> f64 {
        let mut y = x.to_vec();
        self.grid.fft(self.planner, &mut y, false);
        let norm: f64 = self.modulus.iter().map(|m| m * m).sum::<f64>().sqrt();
        let diff: f64 = y
            .iter()
            .zip(&self.modulus)
            .map(|(v, m)| (v.norm() - m).powi(2))
            .sum::<f64>()
            .sqrt();
        if norm > 0.0 {
            diff / norm
        } else {
            diff
        }
    }
}

fn support_mask(grid: &Grid, support: &[usize]) -> Vec<bool> {
    (0..grid.total)
        .map(|k| grid.coords(k).iter().zip(support).all(|(c, w)| c < w))
        .collect()
}

fn estimate_signal(grid: &Grid, x: &[Complex64], inside: &[bool]) -> LatticeSignal {
    let peak = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let entries = (0..grid.total).filter(|&k| inside[k] && x[k].norm() > 1e-14 * peak).map(|k| {
        let c = grid.coords(k).into_iter().map(|c| c as i64).collect();
        (LatticePoint::new(c), Scalar::float(x[k].re, x[k].im))
    });
    LatticeSignal::from_entries(grid.dims.len(), entries).expect("grid points are distinct")
}

/// Alternating projections between the magnitude and support constraints.
///
/// Each restart runs hybrid input-output with an error-reduction step every
/// tenth iteration, then polishes with error reduction until the residual
/// drops below `1e-13` or the polish budget runs out. Nothing guarantees
/// convergence; the runs report where they end up.
pub fn solver_demo(target: &SolverTarget, config: &SolverConfig) -> Result<Vec<SolverRun>, VerifyError> {
    let mut planner = FftPlanner::new();
    let (grid, modulus) = target_modulus(target, &mut planner)?;
    let inside = support_mask(&grid, &target.support_box);
    for r in [&target.f, &target.g].into_iter().flatten() {
        if r.dim() != grid.dims.len() {
            return Err(VerifyError::SolverInput("reference signal has the wrong dimension".into()));
        }
    }
    let dist = |est: &LatticeSignal| {
        (
            target.f.as_ref().map(|f| orbit_distance(est, f)),
            target.g.as_ref().map(|g| orbit_distance(est, g)),
        )
    };
    let energy: f64 = modulus.iter().map(|m| m * m).sum::<f64>() / grid.total as f64;
    if energy == 0.0 {
        let zero = LatticeSignal::zero(grid.dims.len())?;
        let (df, dg) = dist(&zero);
        let run = |restart| SolverRun {
            seed: config.seed,
            restart,
            iterations: 0,
            residual: 0.0,
            dist_f_orbit: df,
            dist_g_orbit: dg,
            landing: Landing::Other,
            estimate: zero.clone(),
        };
        return Ok((0..config.restarts).map(run).collect());
    }
    let cells = inside.iter().filter(|&&b| b).count() as f64;
    let mut problem = Problem { grid, modulus, inside, constraint: config.constraint, planner: &mut planner };
    let mut runs = Vec::with_capacity(config.restarts);
    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64);
        let scale = (energy / cells).sqrt();
        let mut x: Vec<Complex64> = (0..problem.grid.total)
            .map(|k| {
                let re = rng.gen_range(-1.0..1.0) * scale;
                let im = rng.gen_range(-1.0..1.0) * scale;
                problem.admissible(k, Complex64::new(re, im))
            })
            .collect();
        let mut iterations = 0;
        for it in 0..config.iterations {
            if it % 10 == 9 {
                problem.error_reduction(&mut x);
            } else {
                problem.hybrid_io(&mut x, config.beta);
            }
            iterations += 1;
        }
        problem.error_reduction(&mut x);
        iterations += 1;
        let mut residual = problem.residual(&x);
        let mut spent = 0;
        while residual > 1e-13 && spent < config.polish {
            for _ in 0..25 {
                problem.error_reduction(&mut x);
            }
            spent += 25;
            let next = problem.residual(&x);
            let stalled = next > residual * (1.0 - 1e-9);
            residual = next;
            if stalled && residual > CONVERGED {
                break;
            }
        }
        iterations += spent;
        let estimate = estimate_signal(&problem.grid, &x, &problem.inside);
        let (df, dg) = dist(&estimate);
        let near = |d: Option<f64>| d.map_or(false, |d| d <= CONVERGED);
        let landing = if residual > CONVERGED {
            Landing::Unconverged
        } else if near(df) && df <= dg.or(df) {
            Landing::FOrbit
        } else if near(dg) {
            Landing::GOrbit
        } else {
            Landing::Other
        };
        runs.push(SolverRun {
            seed: config.seed,
            restart,
            iterations,
            residual,
            dist_f_orbit: df,
            dist_g_orbit: dg,
            landing,
            estimate,
        });
    }
    Ok(runs)
}
