//! Initial-state transformations, relaxation trajectories and Mpemba
//! verdicts.
//!
//! A trajectory stores the raw measure value at each sampled time together
//! with its steady-state value; relaxation means `|v(t) - v_ss| < ε` from
//! some sampled time onwards (permanent entry, not first touch).

use nalgebra::{Matrix2x3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{
    bloch_state, c, hermiticity_error, hermitize, identity, kron, BlochVector, CMatrix, CVector,
    DensityMatrix, C64, ONE, ZERO,
};
use crate::liouville::{
    build_liouvillian, overlap_coeffs, spectral_decompose, steady_state, LindbladGenerator,
    LiouvilleSpectrum, SpectralPropagator,
};
use crate::measures::{differential_measure, evaluate_value, Bipartition, MeasureKind};

/// Default tolerance on `|v_A(0) - v_B(0)|` for unitarily related pairs.
pub const DEFAULT_TOL_INIT: f64 = 1e-9;

/// `U(β) = e^{iβσ_z} = diag(e^{iβ}, e^{-iβ})`.
pub fn coherence_preserving_unitary(beta: f64) -> CMatrix {
    let b = beta.rem_euclid(std::f64::consts::TAU);
    CMatrix::from_diagonal(&CVector::from_vec(vec![
        C64::from_polar(1.0, b),
        C64::from_polar(1.0, -b),
    ]))
}

/// `U(β) ρ U(β)^†` for a Bloch-vector state, built from the rotated vector
/// `(r_x cos2β + r_y sin2β, r_y cos2β - r_x sin2β, r_z)`.
pub fn rotated_bloch_state(b: &BlochVector, beta: f64) -> Result<DensityMatrix> {
    bloch_state(&rotate_bloch(b, beta))
}

pub fn rotate_bloch(b: &BlochVector, beta: f64) -> BlochVector {
    let (s, co) = (2.0 * beta).sin_cos();
    BlochVector {
        x: b.x * co + b.y * s,
        y: b.y * co - b.x * s,
        z: b.z,
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

/// Haar-random `d x d` unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let z = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            ONE
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `U_A ⊗ U_B` with independent Haar factors, deterministic per seed.
pub fn random_local_unitary(seed: u64, d1: usize, d2: usize) -> Result<CMatrix> {
    if d1 == 0 || d2 == 0 {
        return Err(invalid("subsystem dimensions must be positive"));
    }
    let mut r = rng(seed);
    let ua = haar_unitary(&mut r, d1);
    let ub = haar_unitary(&mut r, d2);
    Ok(kron(&ua, &ub))
}

/// Haar-random pure state vector from a normalized complex Gaussian.
pub fn random_pure_state(seed: u64, d: usize) -> Result<CVector> {
    if d == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let mut r = rng(seed);
    let v = CVector::from_fn(d, |_, _| gaussian(&mut r));
    let n = v.norm();
    Ok(v / c(n, 0.0))
}

/// Purity tolerance for states fed to the mode-elimination construction.
const PURITY_TOL: f64 = 1e-8;

/// Residual `|c'|` the construction must reach before it is accepted.
pub const ELIMINATION_TOL: f64 = 1e-8;

/// Unitary `U` with `Tr(ℓ_2^† U ρ₀ U^†) = 0`, removing the slowest
/// decaying mode from a pure initial state.
pub fn slowest_mode_elimination_unitary(
    spec: &LiouvilleSpectrum,
    rho0: &DensityMatrix,
) -> Result<CMatrix> {
    if spec.len() < 2 {
        return Err(invalid("spectrum has no decaying mode"));
    }
    mode_elimination_unitary(spec, rho0, 1)
}

/// As [`slowest_mode_elimination_unitary`] for an arbitrary mode index in
/// the sorted spectrum.
///
/// For Hermitian `ℓ` the state is rotated towards an eigenvector of `ℓ`
/// whose eigenvalue has the opposite sign of `⟨ψ|ℓ|ψ⟩`, and the angle is
/// bisected. Otherwise the real and imaginary parts of `⟨ψ|ℓ|ψ⟩` are
/// zeroed together on the Bloch sphere of a two-dimensional subspace.
pub fn mode_elimination_unitary(
    spec: &LiouvilleSpectrum,
    rho0: &DensityMatrix,
    mode: usize,
) -> Result<CMatrix> {
    if mode >= spec.len() {
        return Err(invalid(format!("mode {mode} out of range")));
    }
    if spec.is_degenerate() {
        return Err(Error::Unsupported("degenerate spectrum".into()));
    }
    if rho0.dim() != spec.dim() {
        return Err(invalid("state dimension does not match the spectrum"));
    }
    let psi = pure_vector(rho0)?;
    let ell = spec.left_eig(mode);
    let scale = ell.norm();
    let expect = |v: &CVector| v.dotc(&(&ell * v));
    let e0 = expect(&psi);
    if e0.norm() <= ELIMINATION_TOL * 1e-3 * scale {
        return Ok(identity(spec.dim()));
    }

    let u = if hermiticity_error(&ell) <= 1e-8 * scale {
        bracket_rotation(&hermitize(&ell), &psi, e0.re)
    } else {
        None
    }
    .or_else(|| sphere_rotation(&ell, &psi))
    .ok_or_else(|| {
        Error::ConstructionFailed(format!("no rotation removes mode {mode} (overlap {e0})"))
    })?;

    let residual = expect(&(&u * &psi)).norm();
    if residual > ELIMINATION_TOL {
        return Err(Error::ConstructionFailed(format!(
            "residual overlap {residual:e} after rotation"
        )));
    }
    Ok(u)
}

fn pure_vector(rho: &DensityMatrix) -> Result<CVector> {
    let eig = hermitize(rho).symmetric_eigen();
    let (k, top) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, v)| (k, *v))
        .ok_or_else(|| invalid("empty state"))?;
    if (top - 1.0).abs() > PURITY_TOL {
        return Err(invalid(format!(
            "initial state is not pure (largest eigenvalue {top})"
        )));
    }
    Ok(eig.eigenvectors.column(k).into_owned())
}

/// Plane rotation taking `psi` to `cosθ psi + sinθ w` (`w ⊥ psi`, unit).
fn plane_rotation(psi: &CVector, w: &CVector, cos: f64, sin: f64) -> CMatrix {
    let d = psi.len();
    let pp = psi * psi.adjoint();
    let ww = w * w.adjoint();
    let wp = w * psi.adjoint();
    let pw = psi * w.adjoint();
    identity(d) + (pp + ww) * c(cos - 1.0, 0.0) + (wp - pw) * c(sin, 0.0)
}

fn orthogonal_part(v: &CVector, psi: &CVector) -> Option<(CVector, C64)> {
    let overlap = psi.dotc(v);
    let w = v - psi * overlap;
    let n = w.norm();
    (n > 1e-12).then(|| (w / c(n, 0.0), overlap))
}

fn bracket_rotation(h: &CMatrix, psi: &CVector, e0: f64) -> Option<CMatrix> {
    let eig = h.clone().symmetric_eigen();
    let f = |v: &CVector| v.dotc(&(h * v)).re;
    // Opposite-sign eigenvectors, most negative product first.
    let mut cands: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] * e0 < 0.0)
        .collect();
    cands.sort_by(|&a, &b| (eig.eigenvalues[a] * e0).total_cmp(&(eig.eigenvalues[b] * e0)));
    for k in cands {
        let v: CVector = eig.eigenvectors.column(k).into_owned();
        let Some((w, overlap)) = orthogonal_part(&v, psi) else {
            continue;
        };
        // v, rephased so that ⟨ψ|v⟩ >= 0, sits at angle θ₀ along the great
        // circle from ψ through w (carrying the same phase).
        let w = if overlap.norm() > 0.0 {
            w * (overlap.conj() / overlap.norm())
        } else {
            w
        };
        let theta0 = overlap.norm().clamp(0.0, 1.0).acos();
        let path = |theta: f64| psi * c(theta.cos(), 0.0) + &w * c(theta.sin(), 0.0);
        let end = f(&path(theta0));
        if end * e0 >= 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (0.0, theta0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(&path(mid)) * e0 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-16 {
                break;
            }
        }
        let theta = 0.5 * (lo + hi);
        return Some(plane_rotation(psi, &w, theta.cos(), theta.sin()));
    }
    None
}

fn sphere_rotation(ell: &CMatrix, psi: &CVector) -> Option<CMatrix> {
    let h1 = hermitize(ell);
    let h2 = (ell - ell.adjoint()) * c(0.0, -0.5);
    let mut dirs: Vec<CVector> = Vec::new();
    for h in [&h1, &h2] {
        let eig = h.clone().symmetric_eigen();
        dirs.extend(eig.eigenvectors.column_iter().map(|c| c.into_owned()));
    }
    let mut best: Option<(f64, CMatrix)> = None;
    for v in dirs {
        let Some((w, _)) = orthogonal_part(&v, psi) else {
            continue;
        };
        let basis = [psi.clone(), w.clone()];
        let m = CMatrix::from_fn(2, 2, |i, j| basis[i].dotc(&(ell * &basis[j])));
        let Some(n) = sphere_root(&m) else { continue };
        // ψ' = cos(θ/2) ψ + e^{iφ} sin(θ/2) w for Bloch vector n.
        let half = 0.5 * n.z.clamp(-1.0, 1.0).acos();
        let phase = C64::from_polar(1.0, n.y.atan2(n.x));
        let (a, b) = (c(half.cos(), 0.0), phase * half.sin());
        let u = subspace_unitary(psi, &w, a, b);
        let res = (&u * psi).dotc(&(ell * (&u * psi))).norm();
        if best.as_ref().is_none_or(|(r, _)| res < *r) {
            best = Some((res, u));
        }
        if res < ELIMINATION_TOL * 1e-3 {
            break;
        }
    }
    best.map(|(_, u)| u)
}

/// Unit Bloch vector `n` with `Tr M + n·m = 0`, `m_k = Tr(M σ_k)`.
fn sphere_root(m: &CMatrix) -> Option<Vector3<f64>> {
    let tr = m[(0, 0)] + m[(1, 1)];
    let mx = m[(0, 1)] + m[(1, 0)];
    let my = (m[(0, 1)] - m[(1, 0)]) * c(0.0, 1.0);
    let mz = m[(0, 0)] - m[(1, 1)];
    let a = Matrix2x3::new(mx.re, my.re, mz.re, mx.im, my.im, mz.im);
    let rhs = nalgebra::Vector2::new(-tr.re, -tr.im);
    let svd = a.svd(true, true);
    let n0 = svd.solve(&rhs, 1e-12).ok()?;
    if (a * n0 - rhs).norm() > 1e-9 * (1.0 + rhs.norm()) {
        return None;
    }
    let r2 = n0.norm_squared();
    if r2 > 1.0 + 1e-12 {
        return None;
    }
    let row0 = Vector3::new(a[(0, 0)], a[(0, 1)], a[(0, 2)]);
    let row1 = Vector3::new(a[(1, 0)], a[(1, 1)], a[(1, 2)]);
    let mut k = row0.cross(&row1);
    if k.norm() < 1e-12 {
        // Rank one or zero: any direction orthogonal to the row space.
        let r = if row0.norm() > row1.norm() {
            row0
        } else {
            row1
        };
        k = r.cross(&Vector3::x());
        if k.norm() < 1e-6 * r.norm().max(1e-300) {
            k = r.cross(&Vector3::y());
        }
        if r.norm() == 0.0 {
            k = Vector3::z();
        }
    }
    let k = k.normalize();
    let s = (1.0 - r2).max(0.0).sqrt();
    Some(n0 + k * s)
}

/// Unitary acting as `[[a, -b*], [b, a*]]` on `span{psi, w}`, identity
/// elsewhere, so that `psi ↦ a psi + b w`.
fn subspace_unitary(psi: &CVector, w: &CVector, a: C64, b: C64) -> CMatrix {
    let d = psi.len();
    let mut u = identity(d);
    let e = [psi, w];
    let m = [[a - ONE, -b.conj()], [b, a.conj() - ONE]];
    for (i, ei) in e.iter().enumerate() {
        for (j, ej) in e.iter().enumerate() {
            if m[i][j] != ZERO {
                u += (*ei * ej.adjoint()) * m[i][j];
            }
        }
    }
    u
}

/// `n` equally spaced times on `[0, t_end]`.
pub fn uniform_grid(t_end: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0) || !t_end.is_finite() || n < 2 {
        return Err(invalid(format!(
            "grid needs t_end > 0 and at least 2 points (t_end = {t_end}, n = {n})"
        )));
    }
    let step = t_end / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { t_end } else { i as f64 * step })
        .collect())
}

/// Times `0, dt, 2dt, ...` up to and including the last multiple `<= t_end`.
pub fn stepped_grid(t_end: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !(t_end > 0.0) || !t_end.is_finite() {
        return Err(invalid(format!(
            "grid needs dt > 0 and t_end > 0 (dt = {dt}, t_end = {t_end})"
        )));
    }
    let n = (t_end / dt + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| i as f64 * dt).collect())
}

fn validate_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() || times[0] != 0.0 {
        return Err(invalid("time grid must start at 0"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
        return Err(invalid("time grid must be strictly increasing and finite"));
    }
    Ok(())
}

/// Sampled relaxation curve of one measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub steady_value: f64,
    pub measure: MeasureKind,
}

impl Trajectory {
    pub fn new(
        times: Vec<f64>,
        values: Vec<f64>,
        steady_value: f64,
        measure: MeasureKind,
    ) -> Result<Self> {
        validate_grid(&times)?;
        if times.len() != values.len() {
            return Err(invalid("times and values differ in length"));
        }
        Ok(Trajectory {
            times,
            values,
            steady_value,
            measure,
        })
    }

    /// `v(t) - v_ss` at every sample.
    pub fn differential(&self) -> Vec<f64> {
        self.values.iter().map(|v| v - self.steady_value).collect()
    }

    /// Largest spacing between consecutive samples.
    pub fn grid_step(&self) -> f64 {
        self.times
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Largest increase of `|v - v_ss|` between adjacent samples.
    pub fn max_increase(&self) -> f64 {
        let d: Vec<f64> = self.differential().iter().map(|x| x.abs()).collect();
        d.windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Samples `measure` along the spectral evolution of `rho0`.
///
/// Coherence and log-negativity are stored raw with the steady-state value
/// alongside; the trace distance is stored as `D(ρ(t), ρ_ss)` with steady
/// value 0.
pub fn sample_trajectory(
    spec: &LiouvilleSpectrum,
    rho0: &CMatrix,
    measure: MeasureKind,
    times: &[f64],
    part: Option<Bipartition>,
) -> Result<Trajectory> {
    validate_grid(times)?;
    let coeffs = overlap_coeffs(spec, rho0)?;
    let prop = SpectralPropagator::new(spec, &coeffs)?;
    let steady = prop.steady_state().clone();
    let steady_value = match measure {
        MeasureKind::TraceDistanceToSteady => 0.0,
        _ => evaluate_value(measure, &steady, &steady, part)?,
    };
    let values = times
        .iter()
        .map(|&t| {
            let rho = prop.at(t)?;
            evaluate_value(measure, &rho, &steady, part)
        })
        .collect::<Result<Vec<f64>>>()?;
    Trajectory::new(times.to_vec(), values, steady_value, measure)
}

/// Earliest sampled time from which `|v - v_ss| < ε` holds at every later
/// sample; `None` if the last sample is still outside the band.
pub fn relaxation_time(traj: &Trajectory, epsilon: f64) -> Result<Option<f64>> {
    if !(epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let inside = |i: usize| (traj.values[i] - traj.steady_value).abs() < epsilon;
    let mut first = traj.times.len();
    while first > 0 && inside(first - 1) {
        first -= 1;
    }
    Ok(traj.times.get(first).copied())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ordering {
    #[serde(rename = "A_faster")]
    AFaster,
    #[serde(rename = "B_faster")]
    BFaster,
    #[serde(rename = "tie")]
    Tie,
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl Ordering {
    pub fn swapped(self) -> Self {
        match self {
            Ordering::AFaster => Ordering::BFaster,
            Ordering::BFaster => Ordering::AFaster,
            o => o,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Ordering::AFaster | Ordering::BFaster)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpembaVerdict {
    pub measure: MeasureKind,
    pub initial_equal: bool,
    pub initial_difference: f64,
    pub relax_time_a: Option<f64>,
    pub relax_time_b: Option<f64>,
    pub ordering: Ordering,
    pub epsilon: f64,
    pub grid_step: f64,
    /// Interpolated times where `v_A - v_B` changes sign.
    pub crossing_times: Vec<f64>,
}

impl MpembaVerdict {
    /// Equal start and a strict ordering.
    pub fn shows_mpemba(&self) -> bool {
        self.initial_equal && self.ordering.is_strict()
    }
}

/// Compares the relaxation of two trajectories on the same grid.
///
/// Orderings closer than one grid step are a tie. If only one trajectory
/// relaxes within the grid it is the faster one unless it does so within
/// one step of the end.
pub fn detect_mpemba(
    a: &Trajectory,
    b: &Trajectory,
    epsilon: f64,
    tol_init: f64,
) -> Result<MpembaVerdict> {
    if a.times != b.times {
        return Err(invalid("trajectories are sampled on different grids"));
    }
    if a.measure != b.measure {
        return Err(invalid("trajectories use different measures"));
    }
    if !(tol_init >= 0.0) {
        return Err(invalid(format!(
            "tol_init must be non-negative, got {tol_init}"
        )));
    }
    let ta = relaxation_time(a, epsilon)?;
    let tb = relaxation_time(b, epsilon)?;
    let step = a.grid_step();
    let t_end = *a.times.last().unwrap_or(&0.0);
    let ordering = match (ta, tb) {
        (Some(x), Some(y)) if (x - y).abs() <= step * (1.0 + 1e-9) => Ordering::Tie,
        (Some(x), Some(y)) if x < y => Ordering::AFaster,
        (Some(_), Some(_)) => Ordering::BFaster,
        (Some(x), None) if t_end - x > step * (1.0 + 1e-9) => Ordering::AFaster,
        (None, Some(y)) if t_end - y > step * (1.0 + 1e-9) => Ordering::BFaster,
        _ => Ordering::Undetermined,
    };
    let initial_difference = (a.values[0] - b.values[0]).abs();
    Ok(MpembaVerdict {
        measure: a.measure,
        initial_equal: initial_difference < tol_init.max(f64::MIN_POSITIVE),
        initial_difference,
        relax_time_a: ta,
        relax_time_b: tb,
        ordering,
        epsilon,
        grid_step: step,
        crossing_times: crossing_times(a, b, tol_init),
    })
}

/// Sign changes of `v_A - v_B`, ignoring differences within `floor`.
fn crossing_times(a: &Trajectory, b: &Trajectory, floor: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for (i, &t) in a.times.iter().enumerate() {
        let d = a.values[i] - b.values[i];
        if d.abs() <= floor {
            continue;
        }
        if let Some((t0, d0)) = last {
            if d0.signum() != d.signum() {
                out.push(t0 + (t - t0) * d0 / (d0 - d));
            }
        }
        last = Some((t, d));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleReversalVerdict {
    pub verdict_1: MpembaVerdict,
    pub verdict_2: MpembaVerdict,
    pub reversed: bool,
}

impl RoleReversalVerdict {
    pub fn from_verdicts(verdict_1: MpembaVerdict, verdict_2: MpembaVerdict) -> Self {
        let reversed =
            verdict_1.ordering.is_strict() && verdict_2.ordering == verdict_1.ordering.swapped();
        RoleReversalVerdict {
            verdict_1,
            verdict_2,
            reversed,
        }
    }
}

/// One parameter set of a role-reversal comparison.
#[derive(Debug, Clone)]
pub struct RelaxationSetup<'a> {
    pub generator: &'a LindbladGenerator,
    pub times: &'a [f64],
}

/// Trajectories of a state pair under one generator.
#[derive(Debug, Clone)]
pub struct PairRun {
    pub spectrum: LiouvilleSpectrum,
    pub steady: DensityMatrix,
    pub a: Trajectory,
    pub b: Trajectory,
}

pub fn run_pair(
    gen: &LindbladGenerator,
    states: (&CMatrix, &CMatrix),
    measure: MeasureKind,
    times: &[f64],
    part: Option<Bipartition>,
) -> Result<PairRun> {
    let spectrum = spectral_decompose(&build_liouvillian(gen))?;
    let steady = steady_state(&spectrum)?;
    let a = sample_trajectory(&spectrum, states.0, measure, times, part)?;
    let b = sample_trajectory(&spectrum, states.1, measure, times, part)?;
    Ok(PairRun {
        spectrum,
        steady,
        a,
        b,
    })
}

/// Runs the same state pair under two generators and compares orderings.
pub fn detect_role_reversal(
    setups: [RelaxationSetup<'_>; 2],
    states: (&CMatrix, &CMatrix),
    measure: MeasureKind,
    epsilon: f64,
    tol_init: f64,
    part: Option<Bipartition>,
) -> Result<RoleReversalVerdict> {
    let mut verdicts = Vec::with_capacity(2);
    for s in &setups {
        let run = run_pair(s.generator, states, measure, s.times, part)?;
        verdicts.push(detect_mpemba(&run.a, &run.b, epsilon, tol_init)?);
    }
    let v2 = verdicts.pop().unwrap();
    let v1 = verdicts.pop().unwrap();
    Ok(RoleReversalVerdict::from_verdicts(v1, v2))
}

/// `m(ρ) - m(ρ_ss)` at every sample, for callers that want the
/// differential curve directly.
pub fn differential_curve(
    spec: &LiouvilleSpectrum,
    rho0: &CMatrix,
    measure: MeasureKind,
    times: &[f64],
    part: Option<Bipartition>,
) -> Result<Vec<f64>> {
    let coeffs = overlap_coeffs(spec, rho0)?;
    let prop = SpectralPropagator::new(spec, &coeffs)?;
    let steady = prop.steady_state().clone();
    times
        .iter()
        .map(|&t| differential_measure(measure, &prop.at(t)?.into_inner(), &steady, part))
        .collect()
}
