//! Coherence, entanglement and distance measures.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{
    hermitian_eigenvalues, hermitian_trace_norm, partial_transpose, CMatrix, Subsystem,
};

/// Partial-transpose eigenvalues above `-NEGATIVITY_THRESHOLD` count as zero.
pub const NEGATIVITY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    L1Coherence,
    LogNegativity,
    TraceDistanceToSteady,
}

impl MeasureKind {
    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::L1Coherence => "l1_coherence",
            MeasureKind::LogNegativity => "log_negativity",
            MeasureKind::TraceDistanceToSteady => "trace_distance",
        }
    }
}

/// Sum of the absolute values of the off-diagonal entries.
pub fn l1_coherence(rho: &CMatrix) -> f64 {
    let mut sum = 0.0;
    for j in 0..rho.ncols() {
        for i in 0..rho.nrows() {
            if i != j {
                sum += rho[(i, j)].norm();
            }
        }
    }
    sum
}

/// Split of a `d1 * d2` Hilbert space into `A ⊗ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub d1: usize,
    pub d2: usize,
}

impl Bipartition {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(invalid("subsystem dimensions must be positive"));
        }
        Ok(Bipartition { d1, d2 })
    }

    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Negativity {
    /// Sum of `|μ|` over negative partial-transpose eigenvalues `μ`.
    pub negativity: f64,
    /// `log₂(1 + 2 N)`.
    pub log_negativity: f64,
}

/// Negativity of `rho` with respect to the transpose on `B`.
pub fn negativity(rho: &CMatrix, part: Bipartition) -> Result<Negativity> {
    let pt = partial_transpose(rho, part.d1, part.d2, Subsystem::B)?;
    let neg: f64 = hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&mu| mu < -NEGATIVITY_THRESHOLD)
        .map(|mu| -mu)
        .sum();
    Ok(Negativity {
        negativity: neg,
        log_negativity: (1.0 + 2.0 * neg).log2(),
    })
}

pub fn log_negativity(rho: &CMatrix, part: Bipartition) -> Result<f64> {
    Ok(negativity(rho, part)?.log_negativity)
}

/// `½‖ρ - σ‖₁`.
pub fn trace_distance(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(invalid(format!(
            "shape mismatch {:?} vs {:?}",
            rho.shape(),
            sigma.shape()
        )));
    }
    Ok(0.5 * hermitian_trace_norm(&(rho - sigma)))
}

/// Raw value of a measure on `rho`: `l1(ρ)`, `L_N(ρ)` or `D(ρ, ρ_ss)`.
pub fn evaluate_value(
    kind: MeasureKind,
    rho: &CMatrix,
    steady: &CMatrix,
    part: Option<Bipartition>,
) -> Result<f64> {
    match kind {
        MeasureKind::L1Coherence => Ok(l1_coherence(rho)),
        MeasureKind::LogNegativity => log_negativity(
            rho,
            part.ok_or_else(|| invalid("log-negativity needs a bipartition"))?,
        ),
        MeasureKind::TraceDistanceToSteady => trace_distance(rho, steady),
    }
}

/// Value of a measure on `rho` relative to the steady state: `m(ρ) - m(ρ_ss)`
/// for coherence and entanglement, `D(ρ, ρ_ss)` for the trace distance.
pub fn differential_measure(
    kind: MeasureKind,
    rho: &CMatrix,
    steady: &CMatrix,
    part: Option<Bipartition>,
) -> Result<f64> {
    match kind {
        MeasureKind::L1Coherence => Ok(l1_coherence(rho) - l1_coherence(steady)),
        MeasureKind::LogNegativity => {
            let part = part.ok_or_else(|| invalid("log-negativity needs a bipartition"))?;
            Ok(log_negativity(rho, part)? - log_negativity(steady, part)?)
        }
        MeasureKind::TraceDistanceToSteady => trace_distance(rho, steady),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        bloch_state, c, identity, kron, BlochVector, CVector, DensityMatrix, ONE, ZERO,
    };
    use approx::assert_abs_diff_eq;

    fn bell() -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&CVector::from_vec(vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]))
            .unwrap()
            .into_inner()
    }

    #[test]
    fn l1_examples() {
        let plus = CMatrix::from_element(2, 2, c(0.5, 0.0));
        assert_abs_diff_eq!(l1_coherence(&plus), 1.0, epsilon = 1e-15);
        assert_eq!(l1_coherence(&(identity(3) * c(1.0 / 3.0, 0.0))), 0.0);
        let rho = bloch_state(&BlochVector::new(0.4, 0.4, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(l1_coherence(&rho), 0.32f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn bell_state_negativity() {
        let n = negativity(&bell(), Bipartition::new(2, 2).unwrap()).unwrap();
        assert_abs_diff_eq!(n.negativity, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(n.log_negativity, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn maximally_entangled_qutrits() {
        let s = 1.0 / 3f64.sqrt();
        let mut psi = CVector::zeros(9);
        for i in 0..3 {
            psi[i * 3 + i] = c(s, 0.0);
        }
        let rho = DensityMatrix::pure(&psi).unwrap();
        let ln = log_negativity(&rho, Bipartition::new(3, 3).unwrap()).unwrap();
        assert_abs_diff_eq!(ln, 3f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn product_state_has_zero_negativity() {
        let a = bloch_state(&BlochVector::new(0.3, 0.1, 0.2).unwrap()).unwrap();
        let b = bloch_state(&BlochVector::new(-0.5, 0.2, 0.6).unwrap()).unwrap();
        let ln = log_negativity(&kron(&a, &b), Bipartition::new(2, 2).unwrap()).unwrap();
        assert_eq!(ln, 0.0);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let one = CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE]);
        assert_abs_diff_eq!(trace_distance(&zero, &one).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!(trace_distance(&zero, &identity(3)).is_err());
    }

    #[test]
    fn differential_forms() {
        let rho = bell();
        let part = Some(Bipartition::new(2, 2).unwrap());
        for kind in [
            MeasureKind::L1Coherence,
            MeasureKind::LogNegativity,
            MeasureKind::TraceDistanceToSteady,
        ] {
            assert_abs_diff_eq!(
                differential_measure(kind, &rho, &rho, part).unwrap(),
                0.0,
                epsilon = 1e-14
            );
        }
        assert!(differential_measure(MeasureKind::LogNegativity, &rho, &rho, None).is_err());
        let mixed = identity(4) * c(0.25, 0.0);
        let d = differential_measure(MeasureKind::LogNegativity, &rho, &mixed, part).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
        let d =
            differential_measure(MeasureKind::TraceDistanceToSteady, &rho, &mixed, None).unwrap();
        assert_abs_diff_eq!(d, 0.75, epsilon = 1e-12);
    }

    #[test]
    fn half_distance_to_mixed() {
        let zero = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let d = trace_distance(&(identity(2) * c(0.5, 0.0)), &zero).unwrap();
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-14);
    }
}
