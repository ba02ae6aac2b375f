//! GKSL generators, their vectorized Liouvillian and spectral evolution.
//!
//! For `L[X] = -i[H, X] + Σ_μ (L_μ X L_μ^† - ½{L_μ^† L_μ, X})` the
//! column-stacked superoperator is
//!
//! ```text
//! L_v = -i (I ⊗ H - H^T ⊗ I)
//!       + Σ_μ [ L_μ^* ⊗ L_μ - ½ (I ⊗ L_μ^†L_μ + (L_μ^†L_μ)^T ⊗ I) ]
//! ```
//!
//! A non-degenerate spectrum `L[r_i] = λ_i r_i`, `L^†[ℓ_i] = λ_i^* ℓ_i`
//! gives
//!
//! ```text
//! ρ(t) = ρ_ss + Σ_{i≥2} e^{λ_i t} (c_i / k_i) r_i,
//! c_i = Tr(ℓ_i^† ρ₀),  k_i = Tr(ℓ_i^† r_i),  ρ_ss = r_1 / Tr(r_1).
//! ```
//!
//! Eigenvalues are sorted by descending real part (ties by descending
//! imaginary part), so index 0 is the steady mode and index 1 the slowest
//! decaying one.
//!
//! Gauge: right eigenmatrices have unit Frobenius norm and are phase-fixed
//! so that `Tr(r_i²)` is real and positive (Hermitian `r_i` for real
//! `λ_i`), with `Tr(r_1) > 0`. Left eigenmatrices are the rows of the
//! inverse eigenvector matrix, rescaled to Frobenius norm `√d`; this makes
//! `ℓ_1 = I_d` and keeps bi-orthogonality exact up to round-off.

use serde::{Deserialize, Serialize};

use crate::eigen::eigen_decompose;
use crate::error::{invalid, Error, Result};
use crate::linalg::{
    c, devectorize, hermiticity_error, hermitize, hs_inner, identity, kron, trace, vectorize,
    CMatrix, CVector, DensityMatrix, C64, ONE,
};

/// Eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Largest correction the Hermitize-and-renormalize step may apply to an
/// evolved state before the result is rejected.
pub const EVOLVE_CORRECTION_TOL: f64 = 1e-8;

/// `e^{λt}` is flushed to zero once `Re(λ) t` drops below this.
const UNDERFLOW_EXPONENT: f64 = -700.0;

/// Hamiltonian plus jump operators of a Markovian master equation.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    hamiltonian: CMatrix,
    jumps: Vec<CMatrix>,
    // Σ L^†L, cached for the matrix-form right-hand side.
    decay_sum: CMatrix,
}

impl LindbladGenerator {
    pub fn new(hamiltonian: CMatrix, jumps: Vec<CMatrix>) -> Result<Self> {
        let d = hamiltonian.nrows();
        if d == 0 || hamiltonian.ncols() != d {
            return Err(invalid(format!(
                "Hamiltonian must be square, got {:?}",
                hamiltonian.shape()
            )));
        }
        let herm = hermiticity_error(&hamiltonian);
        if herm > 1e-10 {
            return Err(invalid(format!(
                "Hamiltonian is not Hermitian (deviation {herm:e})"
            )));
        }
        let mut decay_sum = CMatrix::zeros(d, d);
        for (mu, l) in jumps.iter().enumerate() {
            if l.shape() != (d, d) {
                return Err(invalid(format!(
                    "jump {mu} has shape {:?}, expected ({d}, {d})",
                    l.shape()
                )));
            }
            decay_sum += l.adjoint() * l;
        }
        Ok(LindbladGenerator {
            hamiltonian,
            jumps,
            decay_sum,
        })
    }

    pub fn from_model(model: &crate::dicke::DickeModel) -> Result<Self> {
        Self::new(model.hamiltonian.clone(), model.jumps.clone())
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[CMatrix] {
        &self.jumps
    }

    /// `L[ρ]` evaluated directly in matrix form.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let h = &self.hamiltonian;
        let mut out = (h * rho - rho * h) * c(0.0, -1.0);
        for l in &self.jumps {
            out += l * rho * l.adjoint();
        }
        out -= (&self.decay_sum * rho + rho * &self.decay_sum) * c(0.5, 0.0);
        out
    }
}

/// Vectorized Liouvillian `L_v` of size `d² x d²`.
pub fn build_liouvillian(gen: &LindbladGenerator) -> CMatrix {
    let d = gen.dim();
    let id = identity(d);
    let h = &gen.hamiltonian;
    let mut lv = (kron(&id, h) - kron(&h.transpose(), &id)) * c(0.0, -1.0);
    for l in &gen.jumps {
        lv += kron(&l.conjugate(), l);
    }
    let ld = &gen.decay_sum;
    lv -= (kron(&id, ld) + kron(&ld.transpose(), &id)) * c(0.5, 0.0);
    lv
}

/// Sorted spectrum with bi-orthogonal left and right eigenmatrices.
#[derive(Debug, Clone)]
pub struct LiouvilleSpectrum {
    dim: usize,
    eigenvalues: Vec<C64>,
    /// Column `i` is `vec(r_i)`.
    right: CMatrix,
    /// Column `i` is `vec(ℓ_i)`.
    left: CMatrix,
    normalizers: Vec<C64>,
    gap: f64,
    min_separation: f64,
}

/// Eigendecomposes a vectorized Liouvillian.
pub fn spectral_decompose(lv: &CMatrix) -> Result<LiouvilleSpectrum> {
    let n = lv.nrows();
    if n != lv.ncols() || n == 0 {
        return Err(invalid(format!(
            "Liouvillian must be square, got {:?}",
            lv.shape()
        )));
    }
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(invalid(format!(
            "Liouvillian size {n} is not a perfect square"
        )));
    }

    let eig = eigen_decompose(lv)?;
    let order = sorted_order(&eig.values);
    let eigenvalues: Vec<C64> = order.iter().map(|&i| eig.values[i]).collect();

    let mut right = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col: CVector = eig.vectors.column(src).into_owned();
        fix_phase(&mut col, d, dst == 0);
        right.set_column(dst, &col);
    }

    let inv = right
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericFailure("right eigenvector matrix is singular".into()))?;
    let sqrt_d = (d as f64).sqrt();
    let mut left = CMatrix::zeros(n, n);
    let mut normalizers = Vec::with_capacity(n);
    for i in 0..n {
        let row = inv.row(i);
        let norm = row.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NumericFailure(format!(
                "dual vector {i} has invalid norm {norm}"
            )));
        }
        let col = CVector::from_iterator(n, row.iter().map(|z| z.conj() * (sqrt_d / norm)));
        // Rows of R^{-1} satisfy row_i · r_i = 1, so the normalizer is the
        // rescaling factor itself. Recomputing the dot product would fold
        // the (much larger) left-inverse error of an ill-conditioned
        // eigenbasis into every expansion amplitude.
        normalizers.push(C64::new(sqrt_d / norm, 0.0));
        left.set_column(i, &col);
    }

    let gap = if n > 1 {
        -eigenvalues[1].re
    } else {
        f64::INFINITY
    };
    Ok(LiouvilleSpectrum {
        dim: d,
        min_separation: min_pairwise_separation(&eigenvalues),
        eigenvalues,
        right,
        left,
        normalizers,
        gap,
    })
}

fn sorted_order(values: &[C64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].re.total_cmp(&values[a].re));
    // Clusters of equal real part (conjugate pairs, up to round-off) are
    // ordered by descending imaginary part.
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len()
            && (values[order[end - 1]].re - values[order[end]].re).abs() < DEGENERACY_TOL
        {
            end += 1;
        }
        order[start..end].sort_by(|&a, &b| values[b].im.total_cmp(&values[a].im));
        start = end;
    }
    order
}

fn min_pairwise_separation(values: &[C64]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            min = min.min((values[i] - values[j]).norm());
        }
    }
    min
}

/// Removes the arbitrary phase of an eigenvector (see the module docs).
fn fix_phase(col: &mut CVector, d: usize, steady: bool) {
    let m = CMatrix::from_column_slice(d, d, col.as_slice());
    let z = if steady {
        trace(&m)
    } else {
        // Tr(r r) = e^{2iθ} Tr(A²) for r = e^{iθ} A with A Hermitian.
        let sq = (&m * &m).trace();
        if sq.norm() > 1e-14 {
            sq.sqrt()
        } else {
            ONE
        }
    };
    if z.norm() > 1e-300 {
        let phase = z.conj() / z.norm();
        *col *= phase;
    }
    if !steady {
        // The square root leaves a sign; make the first (near-)largest
        // entry have a non-negative real part.
        let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(lead) = col.iter().find(|z| z.norm() >= (1.0 - 1e-6) * max) {
            if lead.re < 0.0 {
                col.neg_mut();
            }
        }
    }
}

impl LiouvilleSpectrum {
    /// Hilbert-space dimension `d` (the spectrum has `d²` entries).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, i: usize) -> C64 {
        self.eigenvalues[i]
    }

    pub fn right_eig(&self, i: usize) -> CMatrix {
        CMatrix::from_column_slice(self.dim, self.dim, self.right.column(i).as_slice())
    }

    pub fn left_eig(&self, i: usize) -> CMatrix {
        CMatrix::from_column_slice(self.dim, self.dim, self.left.column(i).as_slice())
    }

    /// `k_i = Tr(ℓ_i^† r_i)`.
    pub fn normalizers(&self) -> &[C64] {
        &self.normalizers
    }

    /// `-Re(λ_2)`, the asymptotic relaxation rate.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    pub fn is_degenerate(&self) -> bool {
        self.min_separation < DEGENERACY_TOL
    }

    /// Largest `|Tr(ℓ_j^† r_k)|` over `j != k`.
    pub fn biorthogonality_error(&self) -> f64 {
        let g = self.left.adjoint() * &self.right;
        let mut err = 0.0f64;
        for j in 0..g.nrows() {
            for k in 0..g.ncols() {
                if j != k {
                    err = err.max(g[(j, k)].norm());
                }
            }
        }
        err
    }

    /// Largest residual norms `‖L_v r_i - λ_i r_i‖` and `‖L_v^† ℓ_i - λ_i^* ℓ_i‖`.
    pub fn residuals(&self, lv: &CMatrix) -> (f64, f64) {
        let lr = lv * &self.right;
        let ll = lv.adjoint() * &self.left;
        let mut right = 0.0f64;
        let mut left = 0.0f64;
        for i in 0..self.len() {
            let lam = self.eigenvalues[i];
            right = right.max((lr.column(i) - self.right.column(i) * lam).norm());
            left = left.max((ll.column(i) - self.left.column(i) * lam.conj()).norm());
        }
        (right, left)
    }

    fn require_non_degenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::Unsupported(format!(
                "spectrum is degenerate (eigenvalues {:e} apart); use the ODE integrator",
                self.min_separation
            )));
        }
        Ok(())
    }

    /// Serializable snapshot for caching between runs.
    pub fn to_dump(&self) -> SpectrumDump {
        let pair = |z: &C64| [z.re, z.im];
        let cols = |m: &CMatrix| {
            m.column_iter()
                .map(|col| col.iter().map(pair).collect())
                .collect()
        };
        SpectrumDump {
            format: SpectrumDump::FORMAT.into(),
            version: SpectrumDump::VERSION,
            dim: self.dim,
            gap: self.gap,
            degenerate: self.is_degenerate(),
            eigenvalues: self.eigenvalues.iter().map(pair).collect(),
            normalizers: self.normalizers.iter().map(pair).collect(),
            right: cols(&self.right),
            left: cols(&self.left),
        }
    }

    pub fn from_dump(dump: &SpectrumDump) -> Result<Self> {
        if dump.format != SpectrumDump::FORMAT || dump.version != SpectrumDump::VERSION {
            return Err(invalid(format!(
                "unsupported spectrum dump {} v{}",
                dump.format, dump.version
            )));
        }
        let n = dump.dim * dump.dim;
        let ok = dump.eigenvalues.len() == n
            && dump.normalizers.len() == n
            && dump.right.len() == n
            && dump.left.len() == n
            && dump
                .right
                .iter()
                .chain(dump.left.iter())
                .all(|c| c.len() == n);
        if !ok || n == 0 {
            return Err(invalid("spectrum dump has inconsistent sizes"));
        }
        let z = |p: &[f64; 2]| c(p[0], p[1]);
        let mat = |cols: &[Vec<[f64; 2]>]| CMatrix::from_fn(n, n, |i, j| z(&cols[j][i]));
        let eigenvalues: Vec<C64> = dump.eigenvalues.iter().map(z).collect();
        Ok(LiouvilleSpectrum {
            dim: dump.dim,
            min_separation: min_pairwise_separation(&eigenvalues),
            gap: if n > 1 {
                -eigenvalues[1].re
            } else {
                f64::INFINITY
            },
            eigenvalues,
            normalizers: dump.normalizers.iter().map(z).collect(),
            right: mat(&dump.right),
            left: mat(&dump.left),
        })
    }
}

/// JSON-friendly spectrum: complex numbers as `[re, im]`, eigenmatrices
/// column-stacked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDump {
    pub format: String,
    pub version: u32,
    pub dim: usize,
    pub gap: f64,
    pub degenerate: bool,
    pub eigenvalues: Vec<[f64; 2]>,
    pub normalizers: Vec<[f64; 2]>,
    pub right: Vec<Vec<[f64; 2]>>,
    pub left: Vec<Vec<[f64; 2]>>,
}

impl SpectrumDump {
    pub const FORMAT: &'static str = "liouville-spectrum";
    pub const VERSION: u32 = 1;
}

/// Unique steady state `r_1 / Tr(r_1)`.
pub fn steady_state(spec: &LiouvilleSpectrum) -> Result<DensityMatrix> {
    spec.require_non_degenerate()?;
    let lam = spec.eigenvalues[0];
    if lam.norm() > 1e-9 {
        return Err(Error::NumericFailure(format!(
            "leading eigenvalue {lam} is not zero"
        )));
    }
    let r1 = spec.right_eig(0);
    let tr = trace(&r1);
    if tr.norm() <= 1e-12 {
        return Err(Error::NumericFailure(
            "steady eigenmatrix is traceless".into(),
        ));
    }
    let rho = hermitize(&(r1 / tr));
    let tr = trace(&rho);
    let rho = rho / tr;
    DensityMatrix::validate(&rho, 1e-10)
        .map_err(|e| Error::NumericFailure(format!("steady state: {e}")))?;
    Ok(DensityMatrix::new_unchecked(rho))
}

/// Overlaps `c_i = Tr(ℓ_i^† ρ₀)` of an initial state with every mode.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapCoefficients {
    pub c: Vec<C64>,
}

impl OverlapCoefficients {
    pub fn get(&self, i: usize) -> C64 {
        self.c[i]
    }
}

pub fn overlap_coeffs(spec: &LiouvilleSpectrum, rho0: &CMatrix) -> Result<OverlapCoefficients> {
    if rho0.shape() != (spec.dim, spec.dim) {
        return Err(invalid(format!(
            "state shape {:?} does not match dimension {}",
            rho0.shape(),
            spec.dim
        )));
    }
    let v = vectorize(rho0);
    Ok(OverlapCoefficients {
        c: (0..spec.len())
            .map(|i| spec.left.column(i).dotc(&v))
            .collect(),
    })
}

/// Precomputed spectral propagator for one initial state.
#[derive(Debug, Clone)]
pub struct SpectralPropagator<'a> {
    spec: &'a LiouvilleSpectrum,
    steady: CMatrix,
    amplitudes: Vec<C64>,
}

impl<'a> SpectralPropagator<'a> {
    pub fn new(spec: &'a LiouvilleSpectrum, coeffs: &OverlapCoefficients) -> Result<Self> {
        spec.require_non_degenerate()?;
        if coeffs.c.len() != spec.len() {
            return Err(invalid("coefficient count does not match the spectrum"));
        }
        let steady = steady_state(spec)?.into_inner();
        let amplitudes = coeffs
            .c
            .iter()
            .zip(&spec.normalizers)
            .map(|(ci, ki)| ci / ki)
            .collect();
        Ok(SpectralPropagator {
            spec,
            steady,
            amplitudes,
        })
    }

    pub fn steady_state(&self) -> &CMatrix {
        &self.steady
    }

    /// `ρ(t) - ρ_ss`, before any symmetrization.
    pub fn deviation(&self, t: f64) -> CMatrix {
        let n = self.spec.len();
        let mut w = CVector::zeros(n);
        for i in 1..n {
            let lam = self.spec.eigenvalues[i];
            if lam.re * t < UNDERFLOW_EXPONENT {
                continue;
            }
            w[i] = (lam * t).exp() * self.amplitudes[i];
        }
        let v = &self.spec.right * w;
        CMatrix::from_column_slice(self.spec.dim, self.spec.dim, v.as_slice())
    }

    /// Evolved state, Hermitized and trace-renormalized.
    pub fn at(&self, t: f64) -> Result<DensityMatrix> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(invalid(format!(
                "time must be finite and non-negative, got {t}"
            )));
        }
        let raw = &self.steady + self.deviation(t);
        let herm = hermitize(&raw);
        let tr = trace(&herm);
        if tr.norm() < 1e-12 {
            return Err(Error::NumericFailure(
                "evolved state has vanishing trace".into(),
            ));
        }
        let rho = herm / tr;
        let correction = crate::linalg::max_abs_diff(&rho, &raw);
        if correction > EVOLVE_CORRECTION_TOL {
            return Err(Error::NumericFailure(format!(
                "evolved state needed a correction of {correction:e} at t = {t}"
            )));
        }
        Ok(DensityMatrix::new_unchecked(rho))
    }
}

/// `ρ(t)` from the spectral expansion.
pub fn evolve(
    spec: &LiouvilleSpectrum,
    coeffs: &OverlapCoefficients,
    t: f64,
) -> Result<DensityMatrix> {
    SpectralPropagator::new(spec, coeffs)?.at(t)
}

/// Maximum allowed trace drift of the ODE integrator.
pub const ODE_TRACE_TOL: f64 = 1e-6;

/// Fixed-step RK4 integration of `dρ/dt = L[ρ]` in matrix form, sampled at
/// each entry of `times` (non-decreasing, starting at or after 0). Steps
/// never exceed `dt`.
pub fn evolve_ode_samples(
    gen: &LindbladGenerator,
    rho0: &CMatrix,
    times: &[f64],
    dt: f64,
) -> Result<Vec<CMatrix>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(invalid(format!("step size must be positive, got {dt}")));
    }
    if rho0.shape() != (gen.dim(), gen.dim()) {
        return Err(invalid(
            "initial state dimension does not match the generator",
        ));
    }
    let tr0 = trace(rho0);
    let bound = rho0.norm().max(tr0.norm());
    let mut rho = rho0.clone();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if !(target >= now) || !target.is_finite() {
            return Err(invalid(format!(
                "sample times must be non-decreasing and non-negative, got {target}"
            )));
        }
        let span = target - now;
        let steps = (span / dt).ceil() as usize;
        if steps > 0 {
            let h = span / steps as f64;
            for _ in 0..steps {
                rho = rk4_step(gen, &rho, h);
            }
        }
        now = target;
        let drift = (trace(&rho) - tr0).norm();
        if !(drift <= ODE_TRACE_TOL) {
            return Err(Error::NumericFailure(format!(
                "trace drifted by {drift:e} by t = {target}; reduce the step size (dt = {dt})"
            )));
        }
        // A density matrix has ‖ρ‖_F <= Tr ρ; unstable steps blow past it
        // long before round-off shows up in the trace.
        let growth = rho.norm() / bound;
        if !(growth <= 1.0 + ODE_TRACE_TOL) {
            return Err(Error::NumericFailure(format!(
                "integration went unstable by t = {target} (norm ratio {growth:e}); reduce the step size (dt = {dt})"
            )));
        }
        out.push(rho.clone());
    }
    Ok(out)
}

/// RK4 solution at a single time.
pub fn evolve_ode(gen: &LindbladGenerator, rho0: &CMatrix, t_end: f64, dt: f64) -> Result<CMatrix> {
    Ok(evolve_ode_samples(gen, rho0, &[t_end], dt)?.remove(0))
}

fn rk4_step(gen: &LindbladGenerator, rho: &CMatrix, h: f64) -> CMatrix {
    let half = c(0.5 * h, 0.0);
    let k1 = gen.apply(rho);
    let k2 = gen.apply(&(rho + &k1 * half));
    let k3 = gen.apply(&(rho + &k2 * half));
    let k4 = gen.apply(&(rho + &k3 * c(h, 0.0)));
    rho + (k1 + (k2 + k3) * c(2.0, 0.0) + k4) * c(h / 6.0, 0.0)
}

/// One RK4 step of size `h` as a superoperator. For a constant linear
/// generator the four RK4 stages collapse to the quartic Taylor polynomial
/// `I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24`.
pub fn rk4_step_map(lv: &CMatrix, h: f64) -> CMatrix {
    let n = lv.nrows();
    let hl = lv * c(h, 0.0);
    let eye = CMatrix::identity(n, n);
    // Horner: I + hL(I + hL/2(I + hL/3(I + hL/4)))
    let mut p = eye.clone();
    for k in (1..=4).rev() {
        p = &eye + &hl * p * c(1.0 / k as f64, 0.0);
    }
    p
}

/// Fixed-step RK4 over a sample interval `Δ`, with `2^m` steps of size
/// `Δ/2^m <= max_step`.
///
/// The interval map is built by squaring the one-step map `m` times, which
/// is the same arithmetic as stepping `2^m` times but costs `O(m)`
/// superoperator products. This makes step sizes far below the stiffest
/// timescale affordable over long horizons.
#[derive(Debug, Clone)]
pub struct Rk4IntervalMap {
    delta: f64,
    steps: u64,
    map: CMatrix,
}

impl Rk4IntervalMap {
    pub fn new(gen: &LindbladGenerator, delta: f64, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0) || !max_step.is_finite() || !(delta > 0.0) || !delta.is_finite() {
            return Err(invalid(format!(
                "need positive interval and step (delta = {delta}, max_step = {max_step})"
            )));
        }
        let squarings = (delta / max_step).log2().ceil().max(0.0) as u32;
        let mut map = rk4_step_map(&build_liouvillian(gen), delta / 2f64.powi(squarings as i32));
        for _ in 0..squarings {
            map = &map * &map;
        }
        Ok(Rk4IntervalMap {
            delta,
            steps: 1 << squarings,
            map,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of RK4 steps per interval.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// `ρ(jΔ)` for `j = 0..samples`.
    pub fn samples(&self, rho0: &CMatrix, samples: usize) -> Result<Vec<CMatrix>> {
        let d = rho0.nrows();
        if rho0.ncols() != d || d * d != self.map.nrows() {
            return Err(invalid(
                "initial state dimension does not match the generator",
            ));
        }
        let tr0 = trace(rho0);
        let bound = rho0.norm().max(tr0.norm());
        let mut v = vectorize(rho0);
        let mut out = Vec::with_capacity(samples);
        for j in 0..samples {
            if j > 0 {
                v = &self.map * v;
            }
            let rho = devectorize(&v)?;
            let drift = (trace(&rho) - tr0).norm();
            let growth = rho.norm() / bound;
            if !(drift <= ODE_TRACE_TOL) || !(growth <= 1.0 + ODE_TRACE_TOL) {
                return Err(Error::NumericFailure(format!(
                    "RK4 map went unstable by t = {} (trace drift {drift:e}, norm ratio {growth:e})",
                    j as f64 * self.delta
                )));
            }
            out.push(rho);
        }
        Ok(out)
    }
}

/// [`Rk4IntervalMap`] sampled on a uniform grid `0, Δ, 2Δ, ...`.
pub fn evolve_rk4_uniform(
    gen: &LindbladGenerator,
    rho0: &CMatrix,
    times: &[f64],
    max_step: f64,
) -> Result<Vec<CMatrix>> {
    if times.len() < 2 || times[0] != 0.0 {
        return Err(invalid(
            "uniform grid needs at least two samples starting at 0",
        ));
    }
    let delta = times[1];
    let uniform = times
        .iter()
        .enumerate()
        .all(|(i, &t)| (t - i as f64 * delta).abs() <= 1e-9 * delta.max(t));
    if !uniform {
        return Err(invalid("sample times must be uniformly spaced"));
    }
    Rk4IntervalMap::new(gen, delta, max_step)?.samples(rho0, times.len())
}

/// Devectorized `L_v vec(ρ)`.
pub fn apply_vectorized(lv: &CMatrix, rho: &CMatrix) -> Result<CMatrix> {
    devectorize(&(lv * vectorize(rho)))
}

/// `Tr(ℓ_i^† X)` for an arbitrary operator `X`.
pub fn mode_overlap(spec: &LiouvilleSpectrum, i: usize, x: &CMatrix) -> C64 {
    hs_inner(&spec.left_eig(i), x)
}
