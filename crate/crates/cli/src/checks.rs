//! Embedded invariant checks and informational reference comparisons.
//!
//! Checks decide the exit code. References compare against published
//! numbers that depend on unrecoverable inputs (random states, plotting
//! grids) and never fail a run.

use dicke_mpemba::linalg::{hermiticity_error, trace_norm, vectorize, CMatrix};
use dicke_mpemba::liouville::{overlap_coeffs, steady_state, Rk4IntervalMap, SpectralPropagator};
use dicke_mpemba::{LindbladGenerator, LiouvilleSpectrum, Result};
use serde::Serialize;

/// Eigen-residual, bi-orthogonality and fixed-point tolerance.
pub const SPECTRUM_TOL: f64 = 1e-8;
/// Largest negative eigenvalue allowed in an evolved state.
pub const POSITIVITY_TOL: f64 = 1e-8;
/// Trace-norm agreement between RK4 and the spectral expansion.
pub const CROSS_CHECK_TOL: f64 = 1e-6;
/// Samples of the RK4 cross-check.
pub const CROSS_CHECK_POINTS: usize = 20;
/// RK4 step as a fraction of `1 / max|λ|`.
pub const RK4_STEP_FRACTION: f64 = 0.01;
/// Largest allowed increase of `|v - v_ss|` between coherence samples.
pub const MONOTONE_TOL: f64 = 1e-9;
/// Positivity is checked on at most this many samples per trajectory.
pub const POSITIVITY_SAMPLES: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `value` must be `<= tolerance` (or `>= tolerance` for lower bounds).
    pub tolerance: f64,
    pub lower_bound: bool,
    pub passed: bool,
}

impl Check {
    /// Passes when `value <= tolerance`; NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            lower_bound: false,
            passed: value <= tolerance,
        }
    }

    /// Passes when `value >= bound`.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance: bound,
            lower_bound: true,
            passed: value >= bound,
        }
    }

    /// Boolean condition, recorded as value 1 (true) or 0.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::at_least(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }
}

/// Observed value next to a published one, or a bare diagnostic; never
/// affects the exit code.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reference {
    pub name: String,
    pub observed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published: Option<String>,
    pub note: String,
}

impl Reference {
    pub fn new(
        name: impl Into<String>,
        observed: impl Into<String>,
        published: impl Into<String>,
        note: &str,
    ) -> Self {
        Reference {
            name: name.into(),
            observed: observed.into(),
            published: Some(published.into()),
            note: note.into(),
        }
    }

    /// A relaxation time against a published one.
    pub fn time(
        name: impl Into<String>,
        observed: Option<f64>,
        published: f64,
        note: &str,
    ) -> Self {
        let obs = observed.map_or("not relaxed".to_string(), |t| {
            format!("{}", (t * 1e9).round() / 1e9)
        });
        Reference::new(name, obs, published.to_string(), note)
    }

    pub fn diagnostic(name: impl Into<String>, observed: impl ToString, note: &str) -> Self {
        Reference {
            name: name.into(),
            observed: observed.to_string(),
            published: None,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub references: Vec<Reference>,
}

impl Report {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn reference(&mut self, r: Reference) {
        self.references.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.references.extend(other.references);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let op = if c.lower_bound { ">=" } else { "<=" };
            let tag = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "{tag} {:<48} {:>12.4e} {op} {:.1e}\n",
                c.name, c.value, c.tolerance
            ));
        }
        for r in &self.references {
            let published = r
                .published
                .as_deref()
                .map_or(String::new(), |p| format!(" (published {p})"));
            out.push_str(&format!(
                "info {:<48} {}{published}; {}\n",
                r.name, r.observed, r.note
            ));
        }
        out
    }
}

/// Closure, bi-orthogonality, non-degeneracy and steady-state fixed point.
pub fn spectrum_checks(label: &str, lv: &CMatrix, spec: &LiouvilleSpectrum) -> Result<Report> {
    let mut r = Report::default();
    let (right, left) = spec.residuals(lv);
    r.push(Check::at_most(
        format!("{label}: right eigen-residual"),
        right,
        SPECTRUM_TOL,
    ));
    r.push(Check::at_most(
        format!("{label}: left eigen-residual"),
        left,
        SPECTRUM_TOL,
    ));
    r.push(Check::at_most(
        format!("{label}: bi-orthogonality"),
        spec.biorthogonality_error(),
        SPECTRUM_TOL,
    ));
    r.push(Check::holds(
        format!("{label}: non-degenerate spectrum"),
        !spec.is_degenerate(),
    ));
    if spec.is_degenerate() {
        return Ok(r);
    }
    let ss = steady_state(spec)?;
    let fixed = (lv * vectorize(ss.matrix())).norm();
    r.push(Check::at_most(
        format!("{label}: steady-state fixed point"),
        fixed,
        SPECTRUM_TOL,
    ));
    Ok(r)
}

/// Hermiticity and positivity of spectrally evolved states on a subsample
/// of `times`.
pub fn positivity_checks(
    label: &str,
    spec: &LiouvilleSpectrum,
    rho0: &CMatrix,
    times: &[f64],
) -> Result<Report> {
    let prop = SpectralPropagator::new(spec, &overlap_coeffs(spec, rho0)?)?;
    let stride = times.len().div_ceil(POSITIVITY_SAMPLES).max(1);
    let mut min_eig = f64::INFINITY;
    let mut herm = 0.0f64;
    for &t in times.iter().step_by(stride).chain(times.last()) {
        let rho = prop.at(t)?;
        min_eig = min_eig.min(rho.min_eigenvalue());
        herm = herm.max(hermiticity_error(rho.matrix()));
    }
    let mut r = Report::default();
    r.push(Check::at_least(
        format!("{label}: min eigenvalue of evolved state"),
        min_eig,
        -POSITIVITY_TOL,
    ));
    r.push(Check::at_most(
        format!("{label}: hermiticity of evolved state"),
        herm,
        1e-12,
    ));
    Ok(r)
}

/// RK4 step used for a spectrum: a fixed fraction of the fastest timescale.
pub fn rk4_step(spec: &LiouvilleSpectrum) -> f64 {
    let fastest = spec
        .eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if fastest > 0.0 {
        RK4_STEP_FRACTION / fastest
    } else {
        RK4_STEP_FRACTION
    }
}

/// Largest trace-norm gap between RK4 and spectral evolution of each state
/// on `CROSS_CHECK_POINTS` uniform samples of `[0, t_end]`.
pub fn cross_check(
    label: &str,
    gen: &LindbladGenerator,
    spec: &LiouvilleSpectrum,
    states: &[&CMatrix],
    t_end: f64,
) -> Result<Report> {
    let delta = t_end / (CROSS_CHECK_POINTS - 1) as f64;
    let map = Rk4IntervalMap::new(gen, delta, rk4_step(spec))?;
    let mut worst = 0.0f64;
    for rho0 in states {
        let prop = SpectralPropagator::new(spec, &overlap_coeffs(spec, rho0)?)?;
        for (j, ode) in map.samples(rho0, CROSS_CHECK_POINTS)?.iter().enumerate() {
            let spectral = prop.at(j as f64 * delta)?;
            worst = worst.max(trace_norm(&(spectral.matrix() - ode)));
        }
    }
    let mut r = Report::default();
    r.push(Check::at_most(
        format!("{label}: RK4 vs spectral (trace norm)"),
        worst,
        CROSS_CHECK_TOL,
    ));
    Ok(r)
}
