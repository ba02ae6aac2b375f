//! Run configuration: one JSON document per run.
//!
//! ```json
//! { "version": 1, "seed": 282, "experiment": "trace-rr", "setups": [...], ... }
//! ```
//!
//! Every physical parameter is explicit. The only implicit defaults are in
//! [`TimeGrid`]: 2000 uniform points, and `t_end = 60 / gap` when `t_end`
//! is omitted.

use std::f64::consts::PI;
use std::path::Path;

use dicke_mpemba::mpemba::{stepped_grid, uniform_grid, DEFAULT_TOL_INIT};
use dicke_mpemba::{BipartiteDickeParams, BlochVector, DickeParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const CONFIG_VERSION: u32 = 1;

/// Samples per grid when neither `dt` nor `points` is given.
pub const DEFAULT_GRID_POINTS: usize = 2000;

/// `t_end = DEFAULT_HORIZON_GAPS / gap` when `t_end` is omitted.
pub const DEFAULT_HORIZON_GAPS: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Fig1Heatmap,
    CoherenceRr,
    EntanglementRr,
    TraceRr,
    TheoremScan,
    SpectrumDump,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Fig1Heatmap,
        Experiment::CoherenceRr,
        Experiment::EntanglementRr,
        Experiment::TraceRr,
        Experiment::TheoremScan,
        Experiment::SpectrumDump,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1Heatmap => "fig1-heatmap",
            Experiment::CoherenceRr => "coherence-rr",
            Experiment::EntanglementRr => "entanglement-rr",
            Experiment::TraceRr => "trace-rr",
            Experiment::TheoremScan => "theorem-scan",
            Experiment::SpectrumDump => "spectrum-dump",
        }
    }

    /// File-name stem for this experiment's outputs.
    pub fn stem(self) -> String {
        self.name().replace('-', "_")
    }
}

/// Sample grid `0 = t_0 < t_1 < ... <= t_end`.
///
/// Give at most one of `dt` (stepped grid) and `points` (uniform grid).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

impl TimeGrid {
    pub fn stepped(t_end: f64, dt: f64) -> Self {
        TimeGrid {
            t_end: Some(t_end),
            dt: Some(dt),
            points: None,
        }
    }

    pub fn uniform(t_end: f64, points: usize) -> Self {
        TimeGrid {
            t_end: Some(t_end),
            dt: None,
            points: Some(points),
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.dt.is_some() && self.points.is_some() {
            return Err(CliError::Config(
                "time grid takes `dt` or `points`, not both".into(),
            ));
        }
        if let Some(t) = self.t_end {
            if t <= 0.0 || !t.is_finite() {
                return Err(CliError::Config(format!("t_end must be positive, got {t}")));
            }
        }
        Ok(())
    }

    /// Sample times; `gap` fills in a missing `t_end`.
    pub fn times(&self, gap: f64) -> CliResult<Vec<f64>> {
        self.validate()?;
        let t_end = match self.t_end {
            Some(t) => t,
            None if gap > 0.0 && gap.is_finite() => DEFAULT_HORIZON_GAPS / gap,
            None => {
                return Err(CliError::Config(format!(
                    "cannot default t_end from spectral gap {gap}"
                )))
            }
        };
        let grid = match self.dt {
            Some(dt) => stepped_grid(t_end, dt)?,
            None => uniform_grid(t_end, self.points.unwrap_or(DEFAULT_GRID_POINTS))?,
        };
        Ok(grid)
    }
}

/// Heatmap of `l1(ρ'(t)) - l1(ρ(t))` over `(β, t)` for the `Ω = ω = k = p`
/// qubit, plus a single-β trajectory pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig1Config {
    pub p: f64,
    pub g: f64,
    /// `r_x = r_y` of the initial Bloch vector.
    pub r_x: f64,
    pub r_z: f64,
    /// `β_i = 2π i / beta_points`.
    pub beta_points: usize,
    pub time: TimeGrid,
    pub inset_beta: f64,
    pub inset_time: TimeGrid,
    pub epsilon: f64,
    #[serde(default = "default_tol_init")]
    pub tol_init: f64,
}

/// Coherence relaxation of `ρ` and `U(β)ρU(β)^†` under two parameter sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceRrConfig {
    pub setups: [DickeParams; 2],
    pub bloch: BlochVector,
    pub beta: f64,
    pub times: [TimeGrid; 2],
    pub epsilon: f64,
    #[serde(default = "default_tol_init")]
    pub tol_init: f64,
}

/// Log-negativity relaxation of `(1/√r) Σ_{i<r} |i i⟩` and a seeded random
/// local rotation of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementRrConfig {
    pub setups: [BipartiteDickeParams; 2],
    pub schmidt_rank: usize,
    pub times: [TimeGrid; 2],
    pub epsilon: f64,
    #[serde(default = "default_tol_init")]
    pub tol_init: f64,
}

/// Trace-distance relaxation of a seeded random pure state and its
/// slowest-mode-eliminated rotation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRrConfig {
    pub setups: [DickeParams; 2],
    /// Index of the setup whose slowest mode the rotation removes.
    pub elimination_setup: usize,
    pub times: [TimeGrid; 2],
    pub epsilon: f64,
    #[serde(default = "default_tol_init")]
    pub tol_init: f64,
}

/// Sign of `l1(ρ'(t)) - l1(ρ(t))` against the sufficient-condition
/// predicate over a `(g, β)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremScanConfig {
    pub p: f64,
    pub g_values: Vec<f64>,
    pub beta_points: usize,
    pub r_x: f64,
    pub time: TimeGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Single(DickeParams),
    Bipartite(BipartiteDickeParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDumpConfig {
    pub model: ModelSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Fig1Heatmap(Fig1Config),
    CoherenceRr(CoherenceRrConfig),
    EntanglementRr(EntanglementRrConfig),
    TraceRr(TraceRrConfig),
    TheoremScan(TheoremScanConfig),
    SpectrumDump(SpectrumDumpConfig),
}

impl ExperimentConfig {
    pub fn experiment(&self) -> Experiment {
        match self {
            ExperimentConfig::Fig1Heatmap(_) => Experiment::Fig1Heatmap,
            ExperimentConfig::CoherenceRr(_) => Experiment::CoherenceRr,
            ExperimentConfig::EntanglementRr(_) => Experiment::EntanglementRr,
            ExperimentConfig::TraceRr(_) => Experiment::TraceRr,
            ExperimentConfig::TheoremScan(_) => Experiment::TheoremScan,
            ExperimentConfig::SpectrumDump(_) => Experiment::SpectrumDump,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub version: u32,
    pub seed: u64,
    #[serde(flatten)]
    pub experiment: ExperimentConfig,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form, which is canonical because field
    /// order follows the type definitions.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(compact.as_bytes()))
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.version != CONFIG_VERSION {
            return Err(CliError::Config(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(CliError::Config(format!(
                    "{name} must be positive, got {x}"
                )))
            }
        };
        match &self.experiment {
            ExperimentConfig::Fig1Heatmap(c) => {
                positive("p", c.p)?;
                positive("epsilon", c.epsilon)?;
                if c.beta_points == 0 {
                    return Err(CliError::Config("beta_points must be positive".into()));
                }
                c.time.validate()?;
                c.inset_time.validate()?;
            }
            ExperimentConfig::CoherenceRr(c) => {
                for s in &c.setups {
                    s.validate()?;
                    if s.n_spins != 1 {
                        return Err(CliError::Config(
                            "coherence-rr needs single-qubit setups (n_spins = 1)".into(),
                        ));
                    }
                }
                c.bloch.validate()?;
                positive("epsilon", c.epsilon)?;
                c.times.iter().try_for_each(TimeGrid::validate)?;
            }
            ExperimentConfig::EntanglementRr(c) => {
                for s in &c.setups {
                    BipartiteDickeParams::new(s.a, s.b)?;
                }
                if c.setups[0].dims() != c.setups[1].dims() {
                    return Err(CliError::Config(
                        "both setups must have the same subsystem dimensions".into(),
                    ));
                }
                let (da, db) = c.setups[0].dims();
                if c.schmidt_rank == 0 || c.schmidt_rank > da.min(db) {
                    return Err(CliError::Config(format!(
                        "schmidt_rank must be in 1..={} for dimensions {da}x{db}",
                        da.min(db)
                    )));
                }
                positive("epsilon", c.epsilon)?;
                c.times.iter().try_for_each(TimeGrid::validate)?;
            }
            ExperimentConfig::TraceRr(c) => {
                for s in &c.setups {
                    s.validate()?;
                }
                if c.setups[0].n_spins != c.setups[1].n_spins {
                    return Err(CliError::Config(
                        "both setups must have the same n_spins".into(),
                    ));
                }
                if c.elimination_setup > 1 {
                    return Err(CliError::Config("elimination_setup must be 0 or 1".into()));
                }
                positive("epsilon", c.epsilon)?;
                c.times.iter().try_for_each(TimeGrid::validate)?;
            }
            ExperimentConfig::TheoremScan(c) => {
                positive("p", c.p)?;
                if c.g_values.is_empty() || c.beta_points == 0 {
                    return Err(CliError::Config(
                        "theorem-scan needs g_values and beta_points".into(),
                    ));
                }
                c.time.validate()?;
            }
            ExperimentConfig::SpectrumDump(c) => match &c.model {
                ModelSpec::Single(p) => p.validate()?,
                ModelSpec::Bipartite(b) => {
                    BipartiteDickeParams::new(b.a, b.b)?;
                }
            },
        }
        Ok(())
    }

    /// Built-in configuration reproducing the corresponding published
    /// figure.
    pub fn default_for(experiment: Experiment) -> Self {
        let dicke = |spin, boson, coupling, decay, n| DickeParams {
            spin_freq: spin,
            boson_freq: boson,
            coupling,
            decay,
            n_spins: n,
        };
        let (seed, experiment) = match experiment {
            Experiment::Fig1Heatmap => (
                0,
                ExperimentConfig::Fig1Heatmap(Fig1Config {
                    p: 1.0,
                    g: 3.0,
                    r_x: 0.4,
                    r_z: 0.0,
                    beta_points: 100,
                    time: TimeGrid::uniform(10.0, 200),
                    inset_beta: 0.65 * PI,
                    inset_time: TimeGrid::stepped(60.0, 0.01),
                    epsilon: 1e-4,
                    tol_init: DEFAULT_TOL_INIT,
                }),
            ),
            Experiment::CoherenceRr => (
                0,
                ExperimentConfig::CoherenceRr(CoherenceRrConfig {
                    setups: [dicke(1.0, 0.1, 1.0, 1.0, 1), dicke(1.0, 1.0, 4.5, 1.0, 1)],
                    bloch: BlochVector {
                        x: 0.4,
                        y: 0.4,
                        z: 0.68f64.sqrt(),
                    },
                    beta: 0.33 * PI,
                    times: [
                        TimeGrid::stepped(20.0, 0.01),
                        TimeGrid::stepped(100.0, 0.01),
                    ],
                    epsilon: 1e-4,
                    tol_init: DEFAULT_TOL_INIT,
                }),
            ),
            Experiment::EntanglementRr => {
                let a = dicke(3.0, 1.0, 1.0, 1.0, 3);
                (
                    20,
                    ExperimentConfig::EntanglementRr(EntanglementRrConfig {
                        setups: [
                            BipartiteDickeParams {
                                a,
                                b: dicke(2.5, 8.88, 3.5, 3.0, 3),
                            },
                            BipartiteDickeParams {
                                a,
                                b: dicke(2.5, 2.79, 3.5, 3.0, 3),
                            },
                        ],
                        schmidt_rank: 3,
                        times: [
                            TimeGrid::stepped(12.0, 0.005),
                            TimeGrid::stepped(6.0, 0.005),
                        ],
                        epsilon: 1e-12,
                        tol_init: 1e-10,
                    }),
                )
            }
            Experiment::TraceRr => (
                282,
                ExperimentConfig::TraceRr(TraceRrConfig {
                    setups: [dicke(3.0, 1.0, 1.0, 1.0, 25), dicke(3.0, 0.1, 1.0, 1.0, 25)],
                    elimination_setup: 0,
                    times: [
                        TimeGrid::stepped(2500.0, 0.5),
                        TimeGrid::stepped(600.0, 0.5),
                    ],
                    epsilon: 1e-12,
                    tol_init: 1e-10,
                }),
            ),
            Experiment::TheoremScan => (
                0,
                ExperimentConfig::TheoremScan(TheoremScanConfig {
                    p: 1.0,
                    g_values: vec![1.0, 2.0, 2.5, 3.0, 4.0, 5.0],
                    beta_points: 200,
                    r_x: 0.4,
                    time: TimeGrid::uniform(10.0, 200),
                }),
            ),
            Experiment::SpectrumDump => (
                0,
                ExperimentConfig::SpectrumDump(SpectrumDumpConfig {
                    model: ModelSpec::Single(dicke(1.0, 1.0, 3.0, 1.0, 1)),
                }),
            ),
        };
        RunConfig {
            version: CONFIG_VERSION,
            seed,
            experiment,
        }
    }
}

fn default_tol_init() -> f64 {
    DEFAULT_TOL_INIT
}
