//! Adiabatically eliminated dissipative Dicke model.
//!
//! With the cavity mode slaved to the collective spin, `a ≈ α S_x` with
//!
//! ```text
//! α = -g (4ω + 2ik) / (√N (4ω² + k²))
//! ```
//!
//! and the spin-only model is
//!
//! ```text
//! H̃  = Ω S_z - (4ω g² / (4ω² + k²)) S_x² / N
//! L̃₁ = √k α S_x
//! ```
//!
//! The `S_x²` coefficient follows from substituting `a = α S_x` into
//! `ω a†a + (g/√N)(a + a†) S_x`; it has no square root in the denominator.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{c, identity, kron, spin_x, spin_z, CMatrix, C64};

/// Physical parameters `(Ω, ω, g, k, N)` of one dissipative Dicke system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeParams {
    /// Spin splitting Ω.
    pub spin_freq: f64,
    /// Boson frequency ω.
    pub boson_freq: f64,
    /// Spin-boson coupling g.
    pub coupling: f64,
    /// Cavity decay rate k.
    pub decay: f64,
    /// Number of spins N; the Hilbert space has dimension N + 1.
    pub n_spins: usize,
}

impl DickeParams {
    pub fn new(
        spin_freq: f64,
        boson_freq: f64,
        coupling: f64,
        decay: f64,
        n_spins: usize,
    ) -> Result<Self> {
        let p = DickeParams {
            spin_freq,
            boson_freq,
            coupling,
            decay,
            n_spins,
        };
        p.validate()?;
        Ok(p)
    }

    /// The `Ω = ω = k = p` qubit model.
    pub fn symmetric_qubit(p: f64, g: f64) -> Result<Self> {
        Self::new(p, p, g, p, 1)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.spin_freq, self.boson_freq, self.coupling, self.decay];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(invalid("Dicke parameters must be finite"));
        }
        if self.spin_freq <= 0.0 {
            return Err(invalid(format!(
                "spin frequency must be positive, got {}",
                self.spin_freq
            )));
        }
        if self.boson_freq < 0.0 {
            return Err(invalid(format!(
                "boson frequency must be non-negative, got {}",
                self.boson_freq
            )));
        }
        if self.decay <= 0.0 {
            return Err(invalid(format!(
                "decay rate must be positive, got {}",
                self.decay
            )));
        }
        if self.n_spins == 0 {
            return Err(invalid("spin count N must be at least 1"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n_spins + 1
    }

    /// Non-fatal warning when the cavity is not clearly faster than the spin
    /// dynamics (`k < 2 max(Ω, ω)`), where adiabatic elimination is
    /// questionable.
    pub fn adiabatic_advisory(&self) -> Option<String> {
        let scale = self.spin_freq.max(self.boson_freq);
        (self.decay < 2.0 * scale).then(|| {
            format!(
                "decay rate k = {} is not large compared with max(Ω, ω) = {}; \
                 the adiabatic elimination may be inaccurate",
                self.decay, scale
            )
        })
    }

    fn n(&self) -> f64 {
        self.n_spins as f64
    }

    /// Coefficient of `S_x² / N` in the effective Hamiltonian (with its sign).
    pub fn squeezing_strength(&self) -> f64 {
        let (w, g, k) = (self.boson_freq, self.coupling, self.decay);
        -4.0 * w * g * g / (4.0 * w * w + k * k)
    }
}

/// Both halves of a non-interacting composite system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BipartiteDickeParams {
    pub a: DickeParams,
    pub b: DickeParams,
}

impl BipartiteDickeParams {
    pub fn new(a: DickeParams, b: DickeParams) -> Result<Self> {
        a.validate()?;
        b.validate()?;
        Ok(BipartiteDickeParams { a, b })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a.dim(), self.b.dim())
    }
}

/// Scalar α with `a ≈ α S_x` after eliminating the boson.
pub fn adiabatic_a_coefficient(p: &DickeParams) -> C64 {
    let (w, g, k) = (p.boson_freq, p.coupling, p.decay);
    let denom = p.n().sqrt() * (4.0 * w * w + k * k);
    c(-g * 4.0 * w / denom, -g * 2.0 * k / denom)
}

/// `H̃ = Ω S_z - (4ωg²/(4ω²+k²)) S_x²/N`.
pub fn effective_hamiltonian(p: &DickeParams) -> Result<CMatrix> {
    p.validate()?;
    let sz = spin_z(p.n_spins)?;
    let sx = spin_x(p.n_spins)?;
    Ok(sz * c(p.spin_freq, 0.0) + (&sx * &sx) * c(p.squeezing_strength() / p.n(), 0.0))
}

/// `L̃₁ = √k α S_x`.
pub fn effective_jump(p: &DickeParams) -> Result<CMatrix> {
    p.validate()?;
    Ok(spin_x(p.n_spins)? * (adiabatic_a_coefficient(p) * p.decay.sqrt()))
}

/// Hamiltonian and single jump operator of one eliminated Dicke system.
#[derive(Debug, Clone)]
pub struct DickeModel {
    pub hamiltonian: CMatrix,
    pub jumps: Vec<CMatrix>,
}

impl DickeModel {
    pub fn single(p: &DickeParams) -> Result<Self> {
        Ok(DickeModel {
            hamiltonian: effective_hamiltonian(p)?,
            jumps: vec![effective_jump(p)?],
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }
}

/// `H_AB = H̃_A ⊗ I + I ⊗ H̃_B` with jumps `{L̃_A ⊗ I, I ⊗ L̃_B}`.
pub fn bipartite_model(bp: &BipartiteDickeParams) -> Result<DickeModel> {
    let (da, db) = bp.dims();
    let (ia, ib) = (identity(da), identity(db));
    let ha = effective_hamiltonian(&bp.a)?;
    let hb = effective_hamiltonian(&bp.b)?;
    let la = effective_jump(&bp.a)?;
    let lb = effective_jump(&bp.b)?;
    Ok(DickeModel {
        hamiltonian: kron(&ha, &ib) + kron(&ia, &hb),
        jumps: vec![kron(&la, &ib), kron(&ia, &lb)],
    })
}
