//! Closed-form dynamics of the `Ω = ω = k = p` qubit.
//!
//! For this model the Liouvillian reduces to
//!
//! ```text
//! λ₁ = 0,  λ₂ = -2g²/5p,  λ₃ = (-q - g²)/5p,  λ₄ = (q - g²)/5p,
//! q = √(g⁴ - 25p⁴)
//! ```
//!
//! labels that differ from the sorted order of
//! [`crate::liouville::spectral_decompose`]; see [`LABEL_TO_SORTED`].
//!
//! With `x = qt/5p` and the initial state `r_x = r_y`, the l1 coherence of
//! `ρ(t)` and of the rotated `ρ'(t)` (initial state `U(β) ρ₀ U(β)^†`) is
//!
//! ```text
//! l1(t)  = √2 |r_x| e^{-g²t/5p} √b
//! l1'(t) = √2 |r_x| e^{-g²t/5p} √a
//! b = (g² cosh 2x + 5p²) / (g² + 5p²)
//! a = (g⁴ cosh 2x + g²(q sin4β sinh 2x - 10p² cos4β sinh²x) - 25p⁴) / q²
//! a - b = g² (q sin4β sinh 2x + 20p² sin²2β sinh²x) / q²
//! ```
//!
//! The closed forms are only defined for real `q`; below `g = √5 p` they
//! return [`Error::Unsupported`].

use std::f64::consts::{PI, SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::dicke::DickeParams;
use crate::error::{invalid, Error, Result};
use crate::linalg::{c, BlochVector, CMatrix, C64};
use crate::liouville::OverlapCoefficients;

/// `sorted_index = LABEL_TO_SORTED[label - 1]`: the labelled eigenvalues
/// `λ₁..λ₄` appear at these positions once sorted by descending real part
/// (ties by descending imaginary part). Holds for every `g > 0` except the
/// degenerate boundary `g = √5 p`.
pub const LABEL_TO_SORTED: [usize; 4] = [0, 3, 2, 1];

/// Sign tests treat `|sin| <= ANGLE_TOL` as zero.
const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricQubitParams {
    /// Common value of `Ω = ω = k`.
    pub p: f64,
    pub g: f64,
    /// Rotation angle of `U(β) = e^{iβσ_z}`, any real (reduced mod 2π).
    pub beta: f64,
    /// `r_x = r_y` component of the initial Bloch vector.
    pub r_x: f64,
    pub r_z: f64,
}

impl SymmetricQubitParams {
    pub fn new(p: f64, g: f64, beta: f64, r_x: f64, r_z: f64) -> Result<Self> {
        let s = SymmetricQubitParams {
            p,
            g,
            beta,
            r_x,
            r_z,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.p, self.g, self.beta, self.r_x, self.r_z]
            .iter()
            .all(|x| x.is_finite())
        {
            return Err(invalid("qubit parameters must be finite"));
        }
        if self.p <= 0.0 {
            return Err(invalid(format!("p must be positive, got {}", self.p)));
        }
        let n2 = 2.0 * self.r_x * self.r_x + self.r_z * self.r_z;
        if n2 > 1.0 + 1e-12 {
            return Err(invalid(format!(
                "Bloch norm^2 2r_x² + r_z² = {n2} exceeds 1"
            )));
        }
        Ok(())
    }

    /// `q` as a complex number; purely imaginary below `g = √5 p`.
    pub fn q_complex(&self) -> C64 {
        let p = self.p;
        c(self.g.powi(4) - 25.0 * p.powi(4), 0.0).sqrt()
    }

    /// `g > √5 p`, where `q` is real and positive.
    pub fn in_theorem_regime(&self) -> bool {
        self.g.abs() > 5f64.sqrt() * self.p
    }

    pub fn dicke_params(&self) -> Result<DickeParams> {
        DickeParams::symmetric_qubit(self.p, self.g)
    }

    pub fn bloch(&self) -> BlochVector {
        BlochVector {
            x: self.r_x,
            y: self.r_x,
            z: self.r_z,
        }
    }

    fn real_q(&self) -> Result<f64> {
        if !self.in_theorem_regime() {
            return Err(Error::Unsupported(format!(
                "closed forms need g > √5 p (g = {}, p = {})",
                self.g, self.p
            )));
        }
        Ok((self.g.powi(4) - 25.0 * self.p.powi(4)).sqrt())
    }
}

/// `λ₁..λ₄` in label order.
pub fn analytic_eigenvalues(p: f64, g: f64) -> [C64; 4] {
    let q = c(g.powi(4) - 25.0 * p.powi(4), 0.0).sqrt();
    let g2 = c(g * g, 0.0);
    let s = 5.0 * p;
    [
        c(0.0, 0.0),
        c(-2.0 * g * g / s, 0.0),
        (-q - g2) / s,
        (q - g2) / s,
    ]
}

/// Eigenvalues reordered to match the numerical sort.
pub fn analytic_eigenvalues_sorted(p: f64, g: f64) -> [C64; 4] {
    let lab = analytic_eigenvalues(p, g);
    let mut out = [c(0.0, 0.0); 4];
    for (i, &pos) in LABEL_TO_SORTED.iter().enumerate() {
        out[pos] = lab[i];
    }
    out
}

/// Normalizers and overlap coefficients in the labelled eigenbasis whose
/// right eigenmatrices are `r₁ = I₂` and `r₂ = -σ_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientChart {
    pub k: [C64; 4],
    pub c: [C64; 4],
    pub c_prime: [C64; 4],
}

pub fn coefficient_chart(s: &SymmetricQubitParams) -> Result<CoefficientChart> {
    let q = s.real_q()?;
    let (g2, g4, p2) = (s.g * s.g, s.g.powi(4), s.p * s.p);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let qc = c(q, 0.0);
    let k3 = one + (qc - i * 5.0 * p2).powi(2) / g4;
    let k4 = one + (qc + i * 5.0 * p2).powi(2) / g4;
    let half_m = c(0.5, -0.5);
    let half_p = c(0.5, 0.5);
    let e2 = C64::from_polar(1.0, -2.0 * s.beta);
    let e4 = C64::from_polar(1.0, 4.0 * s.beta);
    let rx = s.r_x;
    let c3 = half_m * (-i * q + g2 - 5.0 * p2) * rx / g2;
    let c4 = half_p * (qc - i * g2 + i * 5.0 * p2) * rx / g2;
    let c3p = half_m * e2 * (-i * q + e4 * g2 - 5.0 * p2) * rx / g2;
    let c4p = half_p * e2 * (qc - i * g2 * e4 + i * 5.0 * p2) * rx / g2;
    Ok(CoefficientChart {
        k: [c(2.0, 0.0), c(2.0, 0.0), k3, k4],
        c: [one, c(-s.r_z, 0.0), c3, c4],
        c_prime: [one, c(-s.r_z, 0.0), c3p, c4p],
    })
}

/// Overlaps of the rotated state `U(β) ρ₀ U(β)^†` from those of `ρ₀`:
///
/// ```text
/// c'_i = c_i + sinβ [ (α_x)_i (r_y cosβ - r_x sinβ) - (α_y)_i (r_y sinβ + r_x cosβ) ]
/// ```
///
/// with `(α_x)_i = Tr(ℓ_i^† σ_x)` and `(α_y)_i = Tr(ℓ_i^† σ_y)`.
pub fn c_prime_relation(
    coeffs: &OverlapCoefficients,
    alpha_x: &[C64],
    alpha_y: &[C64],
    beta: f64,
    r_x: f64,
    r_y: f64,
) -> Result<OverlapCoefficients> {
    let n = coeffs.c.len();
    if alpha_x.len() != n || alpha_y.len() != n {
        return Err(invalid("α lists must match the coefficient count"));
    }
    let (sb, cb) = beta.sin_cos();
    let u = r_y * cb - r_x * sb;
    let v = r_y * sb + r_x * cb;
    let c = (0..n)
        .map(|i| coeffs.c[i] + (alpha_x[i] * u - alpha_y[i] * v) * sb)
        .collect();
    Ok(OverlapCoefficients { c })
}

// Hyperbolic terms rescaled by e^{-2x}: cosh 2x = e^{2x} ch, etc.
struct Scaled {
    ch: f64,
    sh: f64,
    sh2: f64,
    // e^{-2x}
    decay: f64,
    // e^{(q - g²) t / 5p}, the overall envelope after pulling e^{x} out of √.
    envelope: f64,
}

fn scaled(s: &SymmetricQubitParams, q: f64, t: f64) -> Scaled {
    let x = q * t / (5.0 * s.p);
    let e = (-2.0 * x).exp();
    Scaled {
        ch: 0.5 * (1.0 + e * e),
        sh: 0.5 * (1.0 - e * e),
        sh2: 0.25 * (1.0 - e).powi(2),
        decay: e,
        envelope: ((q - s.g * s.g) * t / (5.0 * s.p)).exp(),
    }
}

/// `sin x` with values within [`ANGLE_TOL`] of zero snapped to zero, so
/// that `β = jπ/4` lands exactly on the boundary cases.
fn snapped_sin(x: f64) -> f64 {
    let s = x.sin();
    if s.abs() <= ANGLE_TOL {
        0.0
    } else {
        s
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

/// `e^{-2x} b`.
fn b_scaled(s: &SymmetricQubitParams, h: &Scaled) -> f64 {
    let (g2, p2) = (s.g * s.g, s.p * s.p);
    (g2 * h.ch + 5.0 * p2 * h.decay) / (g2 + 5.0 * p2)
}

/// `e^{-2x} a`.
fn a_scaled(s: &SymmetricQubitParams, q: f64, h: &Scaled) -> f64 {
    let (g2, p2) = (s.g * s.g, s.p * s.p);
    let b4 = 4.0 * s.beta;
    let num = g2 * g2 * h.ch + g2 * (q * snapped_sin(b4) * h.sh - 10.0 * p2 * b4.cos() * h.sh2)
        - 25.0 * p2 * p2 * h.decay;
    (num / (q * q)).max(0.0)
}

/// l1 coherence of `ρ(t)`.
pub fn analytic_l1(s: &SymmetricQubitParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let q = s.real_q()?;
    let h = scaled(s, q, t);
    Ok(SQRT_2 * s.r_x.abs() * h.envelope * b_scaled(s, &h).sqrt())
}

/// l1 coherence of `ρ'(t)`.
pub fn analytic_l1_prime(s: &SymmetricQubitParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let q = s.real_q()?;
    let h = scaled(s, q, t);
    Ok(SQRT_2 * s.r_x.abs() * h.envelope * a_scaled(s, q, &h).sqrt())
}

/// `a - b`.
pub fn a_minus_b(s: &SymmetricQubitParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let q = s.real_q()?;
    let h = scaled(s, q, t);
    let scaled_diff = diff_scaled(s, q, &h);
    if scaled_diff == 0.0 {
        return Ok(0.0);
    }
    // Overflows to ±inf with the right sign at very large t.
    Ok(scaled_diff * (2.0 * q * t / (5.0 * s.p)).exp())
}

/// `e^{-2x}(a - b)`.
fn diff_scaled(s: &SymmetricQubitParams, q: f64, h: &Scaled) -> f64 {
    let (s2, s4) = (snapped_sin(2.0 * s.beta), snapped_sin(4.0 * s.beta));
    s.g * s.g * (q * s4 * h.sh + 20.0 * s.p * s.p * s2 * s2 * h.sh2) / (q * q)
}

/// `l1'(t) - l1(t)`, evaluated as `√2|r_x| e^{-g²t/5p} (a - b)/(√a + √b)`
/// so that its sign is exactly that of [`a_minus_b`].
pub fn analytic_l1_difference(s: &SymmetricQubitParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let q = s.real_q()?;
    let h = scaled(s, q, t);
    let (sa, sb) = (a_scaled(s, q, &h).sqrt(), b_scaled(s, &h).sqrt());
    let diff = diff_scaled(s, q, &h);
    let denom = sa + sb;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(SQRT_2 * s.r_x.abs() * h.envelope * diff / denom)
}

/// Closed-form `ρ(t)` for the un-rotated initial state (`r_y = r_x`).
pub fn analytic_rho_t(s: &SymmetricQubitParams, t: f64) -> Result<CMatrix> {
    check_time(t)?;
    let q = s.real_q()?;
    let (g2, p2) = (s.g * s.g, s.p * s.p);
    let x = q * t / (5.0 * s.p);
    let env = (-g2 * t / (5.0 * s.p)).exp();
    let w = g2 + 5.0 * p2;
    let pre = c(1.0, 1.0) * s.r_x * env / (2.0 * w);
    let rho01 = pre * c(q * x.sinh(), -w * x.cosh());
    let rho10 = pre * c(w * x.cosh(), -q * x.sinh());
    let pop = s.r_z * (-2.0 * g2 * t / (5.0 * s.p)).exp();
    Ok(CMatrix::from_row_slice(
        2,
        2,
        &[
            c(0.5 * (1.0 + pop), 0.0),
            rho01,
            rho10,
            c(0.5 * (1.0 - pop), 0.0),
        ],
    ))
}

/// Closed-form `ρ(t)` for an arbitrary Bloch vector, valid for every
/// `g` (the complex-`q` regime included).
///
/// The coherence `z = ρ₀₁ = u + iv` obeys `u' = p v`, `v' = -p u - 2γ v`
/// with `γ = g²/5p`, so `(u, v)` evolves under
/// `e^{-γt} [cosh κt + (M + γ) sinh(κt)/κ]`, `κ = q/5p`.
pub fn closed_form_state(p: f64, g: f64, b: &BlochVector, t: f64) -> Result<CMatrix> {
    check_time(t)?;
    b.validate()?;
    if !(p > 0.0) {
        return Err(invalid(format!("p must be positive, got {p}")));
    }
    let gamma = g * g / (5.0 * p);
    let kappa = c(g.powi(4) - 25.0 * p.powi(4), 0.0).sqrt() / (5.0 * p);
    let kt = kappa * t;
    // sinh(κt)/κ, with its κ → 0 limit.
    let sinc = if kappa.norm() < 1e-8 {
        c(t, 0.0)
    } else {
        kt.sinh() / kappa
    };
    let ch = kt.cosh();
    let env = (-gamma * t).exp();
    let (u0, v0) = (0.5 * b.x, -0.5 * b.y);
    let u = env * ((ch + sinc * gamma) * u0 + sinc * p * v0).re;
    let v = env * ((ch - sinc * gamma) * v0 - sinc * p * u0).re;
    let pop = b.z * (-2.0 * gamma * t).exp();
    Ok(CMatrix::from_row_slice(
        2,
        2,
        &[
            c(0.5 * (1.0 + pop), 0.0),
            c(u, v),
            c(u, -v),
            c(0.5 * (1.0 - pop), 0.0),
        ],
    ))
}

/// Exact positivity condition of `a - b` for all `t > 0`:
/// `g > √5 p` and either `sin 4β > 0`, or `sin 4β = 0` with `sin 2β ≠ 0`.
///
/// As β windows: `(0, π/4] ∪ (π/2, 3π/4] ∪ (π, 5π/4] ∪ (3π/2, 7π/4]`.
pub fn theorem1_predicate(s: &SymmetricQubitParams) -> bool {
    if !s.in_theorem_regime() {
        return false;
    }
    let beta = s.beta.rem_euclid(TAU);
    let s4 = snapped_sin(4.0 * beta);
    s4 > 0.0 || (s4 == 0.0 && snapped_sin(2.0 * beta) != 0.0)
}

/// Whether `β` (mod 2π) lies in one of the four positivity windows.
pub fn in_beta_window(beta: f64) -> bool {
    let b = beta.rem_euclid(TAU);
    (0..4).any(|j| {
        let lo = j as f64 * PI / 2.0;
        b > lo + ANGLE_TOL && b <= lo + PI / 4.0 + ANGLE_TOL
    })
}
