//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any FAIL. Run with `cargo test -p dicke-mpemba-cli --release --test acceptance`.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dicke_mpemba::analytic::{
    analytic_eigenvalues_sorted, analytic_l1, analytic_l1_prime, SymmetricQubitParams,
};
use dicke_mpemba::linalg::{bloch_state, casimir_residual, max_abs_diff, trace, CMatrix};
use dicke_mpemba::liouville::{overlap_coeffs, steady_state, SpectralPropagator};
use dicke_mpemba::measures::{l1_coherence, log_negativity, trace_distance};
use dicke_mpemba::mpemba::{
    coherence_preserving_unitary, random_local_unitary, random_pure_state, rotated_bloch_state,
    sample_trajectory, slowest_mode_elimination_unitary, uniform_grid,
};
use dicke_mpemba::{Bipartition, DensityMatrix, DickeParams, MeasureKind, Ordering};
use mpemba_cli::checks::{cross_check, positivity_checks, spectrum_checks, Report, MONOTONE_TOL};
use mpemba_cli::config::{ExperimentConfig, RunConfig};
use mpemba_cli::experiments::{
    run_coherence_rr, run_entanglement_rr, run_fig1_heatmap, run_trace_rr, schmidt_state, Solved,
};
use mpemba_cli::Experiment;

const SPECTRUM_ORACLE_TOL: f64 = 1e-9;
const CLOSED_FORM_TOL: f64 = 1e-8;
const GRID_LIMIT: f64 = 0.01;
const ORDER_OF_MAGNITUDE: f64 = 5.0;
const LOG_NEG_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const INVARIANCE_TOL: f64 = 1e-10;
const MAX_CASIMIR_N: usize = 25;
const RECONSTRUCTION_TOL: f64 = 1e-8;
const DIAGONAL_TOL: f64 = 1e-8;

struct Outcome {
    failed: usize,
}

impl Outcome {
    fn line(&mut self, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn default_config(e: Experiment) -> RunConfig {
    RunConfig::default_for(e)
}

/// Model, states and horizon of every configuration the suite evolves.
struct Case {
    label: String,
    solved: Solved,
    states: Vec<CMatrix>,
    t_end: f64,
}

fn build_cases() -> Vec<Case> {
    let mut cases = Vec::new();

    let ExperimentConfig::Fig1Heatmap(f) = default_config(Experiment::Fig1Heatmap).experiment
    else {
        unreachable!()
    };
    let s = SymmetricQubitParams::new(f.p, f.g, f.inset_beta, f.r_x, f.r_z).unwrap();
    let b = s.bloch();
    cases.push(Case {
        label: "fig1 inset".into(),
        solved: Solved::single(&s.dicke_params().unwrap()).unwrap(),
        states: vec![
            bloch_state(&b).unwrap().into_inner(),
            rotated_bloch_state(&b, f.inset_beta).unwrap().into_inner(),
        ],
        t_end: f.inset_time.t_end.unwrap(),
    });

    let ExperimentConfig::CoherenceRr(c) = default_config(Experiment::CoherenceRr).experiment
    else {
        unreachable!()
    };
    for k in 0..2 {
        cases.push(Case {
            label: format!("coherence setup {}", k + 1),
            solved: Solved::single(&c.setups[k]).unwrap(),
            states: vec![
                bloch_state(&c.bloch).unwrap().into_inner(),
                rotated_bloch_state(&c.bloch, c.beta).unwrap().into_inner(),
            ],
            t_end: c.times[k].t_end.unwrap(),
        });
    }

    let run = default_config(Experiment::EntanglementRr);
    let ExperimentConfig::EntanglementRr(e) = run.experiment else {
        unreachable!()
    };
    let (da, db) = e.setups[0].dims();
    let rho = DensityMatrix::pure(&schmidt_state(da, db, e.schmidt_rank)).unwrap();
    let rot = rho.conjugate_by(&random_local_unitary(run.seed, da, db).unwrap());
    for k in 0..2 {
        cases.push(Case {
            label: format!("entanglement setup {}", k + 1),
            solved: Solved::bipartite(&e.setups[k]).unwrap(),
            states: vec![rho.matrix().clone(), rot.matrix().clone()],
            t_end: e.times[k].t_end.unwrap(),
        });
    }

    let run = default_config(Experiment::TraceRr);
    let ExperimentConfig::TraceRr(t) = run.experiment else {
        unreachable!()
    };
    let solved: Vec<Solved> = t
        .setups
        .iter()
        .map(|p| Solved::single(p).unwrap())
        .collect();
    let rho =
        DensityMatrix::pure(&random_pure_state(run.seed, t.setups[0].dim()).unwrap()).unwrap();
    let u = slowest_mode_elimination_unitary(&solved[t.elimination_setup].spectrum, &rho).unwrap();
    let rot = rho.conjugate_by(&u);
    for (k, s) in solved.into_iter().enumerate() {
        cases.push(Case {
            label: format!("trace setup {}", k + 1),
            solved: s,
            states: vec![rho.matrix().clone(), rot.matrix().clone()],
            t_end: t.times[k].t_end.unwrap(),
        });
    }
    cases
}

fn spectrum_oracle(out: &mut Outcome) {
    let (result, elapsed) =
        timed(|| Solved::single(&dicke_mpemba::DickeParams::symmetric_qubit(1.0, 3.0).unwrap()));
    let solved = result.unwrap();
    let exact = analytic_eigenvalues_sorted(1.0, 3.0);
    let err = exact
        .iter()
        .zip(solved.spectrum.eigenvalues())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    out.line(
        "spectrum oracle (g=3, p=1)",
        err < SPECTRUM_ORACLE_TOL && elapsed < Duration::from_secs(1),
        format!(
            "max eigenvalue error {err:.2e} (< {SPECTRUM_ORACLE_TOL:e}), {elapsed:.2?} (< 1 s)"
        ),
    );
}

fn closed_form_oracle(out: &mut Outcome) {
    let (worst, elapsed) = timed(|| {
        let base = SymmetricQubitParams::new(1.0, 3.0, 0.0, 0.4, 0.0).unwrap();
        let solved = Solved::single(&base.dicke_params().unwrap()).unwrap();
        let times = uniform_grid(10.0, 100).unwrap();
        let rho = bloch_state(&base.bloch()).unwrap().into_inner();
        let l1 = sample_trajectory(
            &solved.spectrum,
            &rho,
            MeasureKind::L1Coherence,
            &times,
            None,
        )
        .unwrap();
        let mut worst = 0.0f64;
        for i in 0..50 {
            let beta = TAU * i as f64 / 50.0;
            let s = SymmetricQubitParams { beta, ..base };
            let rot = rotated_bloch_state(&base.bloch(), beta)
                .unwrap()
                .into_inner();
            let l1p = sample_trajectory(
                &solved.spectrum,
                &rot,
                MeasureKind::L1Coherence,
                &times,
                None,
            )
            .unwrap();
            for (j, &t) in times.iter().enumerate() {
                worst = worst.max((analytic_l1(&s, t).unwrap() - l1.values[j]).abs());
                worst = worst.max((analytic_l1_prime(&s, t).unwrap() - l1p.values[j]).abs());
            }
        }
        worst
    });
    out.line(
        "closed-form coherence oracle (50x100 grid)",
        worst < CLOSED_FORM_TOL && elapsed < Duration::from_secs(30),
        format!("max |analytic - numerical| {worst:.2e} (< {CLOSED_FORM_TOL:e}), {elapsed:.2?} (< 30 s)"),
    );
}

fn theorem_reproduction(out: &mut Outcome, reports: &mut Vec<Report>) {
    let ExperimentConfig::Fig1Heatmap(cfg) = default_config(Experiment::Fig1Heatmap).experiment
    else {
        unreachable!()
    };
    let (result, elapsed) = timed(|| run_fig1_heatmap(&cfg).unwrap());
    let v = &result.verdict;
    let grid_ok = v.beta_points == 100 && v.time_points == 200;
    out.line(
        "theorem reproduction (100x200 grid)",
        grid_ok && v.counterexamples == 0 && v.max_abs_diff_at_t0 <= 1e-12 && elapsed < Duration::from_secs(60),
        format!(
            "{} counterexamples, {} non-positive cells all outside the predicate, |diff(t=0)| {:.1e}, {elapsed:.2?} (< 60 s)",
            v.counterexamples, v.nonpositive_cells, v.max_abs_diff_at_t0
        ),
    );
    reports.push(result.artifacts.report);
}

fn within_step(observed: Option<f64>, published: f64, step: f64) -> bool {
    observed.is_some_and(|t| (t - published).abs() <= step * (1.0 + 1e-9))
}

fn fmt_time(t: Option<f64>) -> String {
    t.map_or("none".into(), |t| format!("{t:.3}"))
}

fn coherence_reversal(out: &mut Outcome, reports: &mut Vec<Report>) {
    let ExperimentConfig::CoherenceRr(cfg) = default_config(Experiment::CoherenceRr).experiment
    else {
        unreachable!()
    };
    let (result, elapsed) = timed(|| run_coherence_rr(&cfg).unwrap());
    let v1 = &result.verdict.verdict.verdict_1;
    let step = v1.grid_step;
    let times_ok =
        within_step(v1.relax_time_a, 8.79, step) && within_step(v1.relax_time_b, 10.08, step);
    let pass = step <= GRID_LIMIT
        && times_ok
        && v1.ordering == Ordering::AFaster
        && result.verdict.verdict.reversed
        && elapsed < Duration::from_secs(60);
    out.line(
        "coherence relaxation times and reversal",
        pass,
        format!(
            "times {} / {} vs 8.79 / 10.08 at step {step:.3} (+-1 step), ordering {:?}, reversed {}, {elapsed:.2?} (< 60 s)",
            fmt_time(v1.relax_time_a),
            fmt_time(v1.relax_time_b),
            v1.ordering,
            result.verdict.verdict.reversed
        ),
    );
    reports.push(result.artifacts.report);
}

fn factor_ok(observed: Option<f64>, published: f64) -> bool {
    observed.is_some_and(|t| {
        t > 0.0 && t / published < ORDER_OF_MAGNITUDE && published / t < ORDER_OF_MAGNITUDE
    })
}

fn trace_reversal(out: &mut Outcome, reports: &mut Vec<Report>) {
    let run = default_config(Experiment::TraceRr);
    let ExperimentConfig::TraceRr(cfg) = &run.experiment else {
        unreachable!()
    };
    let (result, elapsed) = timed(|| run_trace_rr(cfg, run.seed).unwrap());
    let r = &result.verdict;
    let (v1, v2) = (&r.reversal.verdict.verdict_1, &r.reversal.verdict.verdict_2);
    let magnitudes = factor_ok(v1.relax_time_a, 1347.5)
        && factor_ok(v1.relax_time_b, 524.5)
        && factor_ok(v2.relax_time_a, 262.0)
        && factor_ok(v2.relax_time_b, 281.5);
    let pass = r.slowest_overlap_rotated < 1e-8
        && r.unitarity_error < 1e-10
        && v1.ordering == Ordering::BFaster
        && r.reversal.verdict.reversed
        && magnitudes
        && elapsed < Duration::from_secs(300);
    out.line(
        "N=25 trace-distance reversal",
        pass,
        format!(
            "seed {}, |c2'| {:.1e}, omega=1 {} vs {} ({:?}), omega=0.1 {} vs {} ({:?}), within factor 5 {magnitudes}, {elapsed:.2?} (< 300 s)",
            run.seed,
            r.slowest_overlap_rotated,
            fmt_time(v1.relax_time_a),
            fmt_time(v1.relax_time_b),
            v1.ordering,
            fmt_time(v2.relax_time_a),
            fmt_time(v2.relax_time_b),
            v2.ordering
        ),
    );
    reports.push(result.artifacts.report);
}

fn entanglement_reversal(out: &mut Outcome, reports: &mut Vec<Report>) {
    let run = default_config(Experiment::EntanglementRr);
    let ExperimentConfig::EntanglementRr(cfg) = &run.experiment else {
        unreachable!()
    };
    let (result, elapsed) = timed(|| run_entanglement_rr(cfg, run.seed).unwrap());
    let r = &result.verdict;
    let expected = (cfg.schmidt_rank as f64).log2();
    let init_err = r
        .initial_log_negativity
        .iter()
        .map(|x| (x - expected).abs())
        .fold(0.0, f64::max);
    let steady = r.steady_log_negativity.iter().copied().fold(0.0, f64::max);
    let v1 = &r.reversal.verdict.verdict_1;
    let pass = v1.shows_mpemba()
        && r.reversal.verdict.reversed
        && init_err < LOG_NEG_TOL
        && steady < LOG_NEG_TOL
        && elapsed < Duration::from_secs(120);
    out.line(
        "entanglement reversal",
        pass,
        format!(
            "seed {}, Mpemba at omega_B={} {}, reversed {}, |L_N(0) - log2 3| {init_err:.1e}, steady L_N {steady:.1e}, {elapsed:.2?} (< 120 s)",
            run.seed,
            cfg.setups[0].b.boson_freq,
            v1.shows_mpemba(),
            r.reversal.verdict.reversed
        ),
    );
    reports.push(result.artifacts.report);
}

fn cross_oracle(out: &mut Outcome, cases: &[Case]) {
    let mut worst = 0.0f64;
    let mut all = true;
    let (_, elapsed) = timed(|| {
        for case in cases {
            let states: Vec<&CMatrix> = case.states.iter().collect();
            let r = cross_check(
                &case.label,
                &case.solved.generator,
                &case.solved.spectrum,
                &states,
                case.t_end,
            )
            .unwrap();
            worst = worst.max(r.checks[0].value);
            all &= r.passed();
        }
    });
    out.line(
        "spectral vs RK4 dynamics",
        all && elapsed < Duration::from_secs(120),
        format!("{} configurations, 20 points each, max trace distance {worst:.2e} (< 1e-6), {elapsed:.2?} (< 120 s)", cases.len()),
    );
}

/// Raw trace of the spectral expansion before renormalization.
fn max_trace_drift(case: &Case) -> f64 {
    let times = uniform_grid(case.t_end, 50).unwrap();
    let mut worst = 0.0f64;
    for rho in &case.states {
        let prop = SpectralPropagator::new(
            &case.solved.spectrum,
            &overlap_coeffs(&case.solved.spectrum, rho).unwrap(),
        )
        .unwrap();
        for &t in &times {
            let raw = prop.steady_state() + prop.deviation(t);
            worst = worst.max((trace(&raw) - dicke_mpemba::C64::new(1.0, 0.0)).norm());
        }
    }
    worst
}

fn measure_invariance() -> f64 {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let psi = random_pure_state(seed, 6).unwrap();
        let mixed = random_local_unitary(seed + 200, 6, 1).unwrap();
        let rho = DensityMatrix::pure(&psi).unwrap().into_inner().scale(0.6)
            + DensityMatrix::maximally_mixed(6).into_inner().scale(0.4);
        let sigma = DensityMatrix::pure(&random_pure_state(seed + 100, 6).unwrap())
            .unwrap()
            .into_inner();

        let diag = coherence_preserving_unitary(0.37 * seed as f64);
        let d6 = dicke_mpemba::linalg::kron(&diag, &dicke_mpemba::linalg::identity(3));
        worst = worst.max((l1_coherence(&(&d6 * &rho * d6.adjoint())) - l1_coherence(&rho)).abs());

        let part = Bipartition::new(2, 3).unwrap();
        let local = random_local_unitary(seed, 2, 3).unwrap();
        let ln = log_negativity(&(&local * &rho * local.adjoint()), part).unwrap();
        worst = worst.max((ln - log_negativity(&rho, part).unwrap()).abs());

        let a = trace_distance(&rho, &sigma).unwrap();
        let b = trace_distance(
            &(&mixed * &rho * mixed.adjoint()),
            &(&mixed * &sigma * mixed.adjoint()),
        )
        .unwrap();
        worst = worst.max((a - b).abs());
    }
    worst
}

/// `max |ρ(0) - ρ_0|` of the spectral expansion, the worst case for
/// ill-conditioned eigenbases.
fn initial_reconstruction(case: &Case) -> f64 {
    let spec = &case.solved.spectrum;
    case.states
        .iter()
        .map(|rho| {
            let prop = SpectralPropagator::new(spec, &overlap_coeffs(spec, rho).unwrap()).unwrap();
            max_abs_diff(&(prop.steady_state() + prop.deviation(0.0)), rho)
        })
        .fold(0.0, f64::max)
}

fn off_diagonal(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// Steady-state coherence in the `S_z` basis for N = 1..25 at the
/// large-N parameters, reusing the spectra already built.
fn steady_diagonality(cases: &[Case]) -> f64 {
    let mut worst = 0.0f64;
    for case in cases {
        worst = worst.max(off_diagonal(
            steady_state(&case.solved.spectrum).unwrap().matrix(),
        ));
    }
    let ExperimentConfig::TraceRr(t) = default_config(Experiment::TraceRr).experiment else {
        unreachable!()
    };
    for n in 1..t.setups[0].n_spins {
        for setup in &t.setups {
            let p = DickeParams {
                n_spins: n,
                ..*setup
            };
            let solved = Solved::single(&p).unwrap();
            worst = worst.max(off_diagonal(
                steady_state(&solved.spectrum).unwrap().matrix(),
            ));
        }
    }
    worst
}

fn invariants(out: &mut Outcome, cases: &[Case]) {
    let mut report = Report::default();
    let mut drift = 0.0f64;
    let mut reconstruction = 0.0f64;
    for case in cases {
        report.extend(
            spectrum_checks(&case.label, &case.solved.liouvillian, &case.solved.spectrum).unwrap(),
        );
        let times = uniform_grid(case.t_end, 200).unwrap();
        for (k, rho) in case.states.iter().enumerate() {
            report.extend(
                positivity_checks(
                    &format!("{} state {k}", case.label),
                    &case.solved.spectrum,
                    rho,
                    &times,
                )
                .unwrap(),
            );
        }
        drift = drift.max(max_trace_drift(case));
        reconstruction = reconstruction.max(initial_reconstruction(case));
    }
    let diagonal = steady_diagonality(cases);
    let casimir = (1..=MAX_CASIMIR_N)
        .map(|n| casimir_residual(n).unwrap())
        .fold(0.0, f64::max);
    let invariance = measure_invariance();
    let failures: Vec<String> = report
        .failures()
        .iter()
        .map(|c| format!("{} = {:.2e}", c.name, c.value))
        .collect();
    let pass = failures.is_empty()
        && drift < TRACE_TOL
        && reconstruction < RECONSTRUCTION_TOL
        && diagonal < DIAGONAL_TOL
        && casimir < 1e-9
        && invariance < INVARIANCE_TOL;
    let worst = |key: &str| {
        report
            .checks
            .iter()
            .filter(|c| c.name.contains(key))
            .map(|c| c.value)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let min_eig = report
        .checks
        .iter()
        .filter(|c| c.name.contains("min eigenvalue"))
        .map(|c| c.value)
        .fold(f64::INFINITY, f64::min);
    out.line(
        "invariant suite",
        pass,
        format!(
            "{} checks, residual {:.1e}, bi-orthogonality {:.1e}, fixed point {:.1e}, min eigenvalue {min_eig:.1e}, hermiticity {:.1e}, trace drift {drift:.1e}, rho(0) reconstruction {reconstruction:.1e}, steady off-diagonal (N<=25) {diagonal:.1e}, Casimir (N<=25) {casimir:.1e}, measure invariance {invariance:.1e}{}",
            report.checks.len(),
            worst("eigen-residual"),
            worst("bi-orthogonality"),
            worst("fixed point"),
            worst("hermiticity"),
            if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
        ),
    );
}

fn monotonicity(out: &mut Outcome, reports: &[Report]) {
    let checks: Vec<_> = reports
        .iter()
        .flat_map(|r| &r.checks)
        .filter(|c| c.name.contains("l1 increase"))
        .collect();
    let worst = checks
        .iter()
        .map(|c| c.value)
        .fold(f64::NEG_INFINITY, f64::max);
    out.line(
        "l1 monotone decrease on acceptance configurations",
        !checks.is_empty() && checks.iter().all(|c| c.passed),
        format!(
            "{} trajectory sets, largest increase between samples {worst:.2e} (< {MONOTONE_TOL:e})",
            checks.len()
        ),
    );
}

fn main() -> ExitCode {
    let mut out = Outcome { failed: 0 };
    let mut reports = Vec::new();
    spectrum_oracle(&mut out);
    closed_form_oracle(&mut out);
    theorem_reproduction(&mut out, &mut reports);
    coherence_reversal(&mut out, &mut reports);
    trace_reversal(&mut out, &mut reports);
    entanglement_reversal(&mut out, &mut reports);
    let cases = build_cases();
    cross_oracle(&mut out, &cases);
    invariants(&mut out, &cases);
    monotonicity(&mut out, &reports);
    println!("{} failed", out.failed);
    if out.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
