//! One (quantum group, action, state) triple and the full pipeline run on
//! it: verification, ergodicity, non-degeneracy, harmonic space, the
//! theorem suite and, for classical G-sets, the oracle cross-check.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::actions::ActionData;
use crate::error::Result;
use crate::harmonic::{Analysis, TheoremCheck, Verdict};
use crate::measures::{self, Nondegeneracy};
use crate::numeric::{self, c, cabs, CMatrix, Tolerance, C64};
use crate::oracle;
use crate::verify::VerificationReport;

/// Bound for the Cesàro diagnostic `‖E − (1/n)Σ_{k=1}^n Φ^k‖`.
pub const CESARO_THRESHOLD: f64 = 1e-6;
pub const CESARO_STEPS: u64 = 10_000;
pub const CESARO_STEPS_EXTENDED: u64 = 100_000;
/// Entrywise agreement between the quantum Markov matrix and the classical kernel.
pub const ORACLE_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Expectations {
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub ergodic: Option<bool>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub nondegenerate: Option<bool>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub dim_harmonic: Option<usize>,
}

impl Expectations {
    pub fn is_empty(&self) -> bool {
        self.ergodic.is_none() && self.nondegenerate.is_none() && self.dim_harmonic.is_none()
    }
}

/// Group table and `act[g][x] = g·x` behind a classical scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalData {
    pub table: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub action: ActionData,
    pub measure: Vec<C64>,
    pub expect: Expectations,
    pub classical: Option<ClassicalData>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, action: ActionData, measure: Vec<C64>) -> Self {
        Self {
            name: name.into(),
            action,
            measure,
            expect: Expectations::default(),
            classical: None,
        }
    }

    pub fn with_classical(mut self, table: Vec<Vec<usize>>, act: Vec<Vec<usize>>) -> Self {
        self.classical = Some(ClassicalData { table, act });
        self
    }

    pub fn expecting(mut self, expect: Expectations) -> Self {
        self.expect = expect;
        self
    }

    /// Hopf, action and state axioms.
    pub fn verify(&self, tol: &Tolerance) -> Vec<VerificationReport> {
        let mut state = measures::check_state(self.action.hopf(), &self.measure, tol);
        state.subject = "measure".into();
        alloc::vec![
            self.action.hopf().verify(tol),
            self.action.verify(tol),
            state
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CesaroDiagnostic {
    pub steps: u64,
    pub deviation: f64,
    pub steps_extended: u64,
    pub deviation_extended: f64,
    pub threshold: f64,
    pub within_threshold: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CrossCheck {
    pub kernel_deviation: f64,
    pub dim_quantum: usize,
    pub dim_classical: usize,
    pub recurrent_classes: usize,
    pub harmonic_residual: f64,
    pub support_generates: bool,
    pub nondegenerate: bool,
    pub matches: bool,
}

/// Compares the quantum Markov matrix (columns `Φ(δ_y)` in the δ-basis)
/// with the classical kernel. With `α(f)(g, x) = f(g·x)` the two agree
/// entrywise: `Φ[x][y] = P[x][y]`.
pub fn cross_check(
    classical: &ClassicalData,
    measure: &[C64],
    markov: &CMatrix,
    harmonic: &[Vec<C64>],
    nondegenerate: bool,
) -> Result<CrossCheck> {
    let weights: Vec<f64> = measure.iter().map(|z| z.re).collect();
    let kernel = oracle::transition_matrix(&classical.table, &classical.act, &weights)?;
    let n = kernel.size();
    let mut kernel_deviation = if markov.rows() == n && markov.cols() == n {
        0.0f64
    } else {
        f64::INFINITY
    };
    if kernel_deviation == 0.0 {
        for x in 0..n {
            for y in 0..n {
                kernel_deviation = kernel_deviation.max(cabs(markov[(x, y)] - c(kernel.get(x, y))));
            }
        }
    }
    let classical_basis: Vec<Vec<C64>> = oracle::classical_harmonic(&kernel)?
        .into_iter()
        .map(|h| {
            let norm = h.iter().map(|v| v * v).sum::<f64>().sqrt();
            h.into_iter().map(|v| c(v / norm)).collect()
        })
        .collect();
    let into = harmonic
        .iter()
        .map(|x| numeric::residual_from_span(x, &classical_basis))
        .fold(0.0f64, f64::max);
    let back = classical_basis
        .iter()
        .map(|x| numeric::residual_from_span(x, harmonic))
        .fold(0.0f64, f64::max);
    let harmonic_residual = into.max(back);
    let support_generates = oracle::support_generates(&classical.table, &weights)?;
    let recurrent_classes = oracle::recurrent_classes(&kernel).len();
    let matches = kernel_deviation <= ORACLE_THRESHOLD
        && harmonic.len() == classical_basis.len()
        && harmonic_residual <= ORACLE_THRESHOLD
        && recurrent_classes == classical_basis.len()
        && support_generates == nondegenerate;
    Ok(CrossCheck {
        kernel_deviation,
        dim_quantum: harmonic.len(),
        dim_classical: classical_basis.len(),
        recurrent_classes,
        harmonic_residual,
        support_generates,
        nondegenerate,
        matches,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScenarioReport {
    pub name: String,
    pub dim_group: usize,
    pub dim_module: usize,
    pub verification: Vec<VerificationReport>,
    pub ergodic: Option<bool>,
    pub fixed_point_dim: Option<usize>,
    pub nondegeneracy: Option<Nondegeneracy>,
    pub dim_harmonic: Option<usize>,
    pub dim_group_harmonic: Option<usize>,
    /// `c[i][j][k]`: coefficient of `b_k` in `b_i ∘ b_j`, as `[re, im]`.
    pub choi_effros_table: Vec<Vec<Vec<[f64; 2]>>>,
    pub cesaro: Option<CesaroDiagnostic>,
    pub checks: Vec<TheoremCheck>,
    pub oracle: Option<CrossCheck>,
    pub expectation_mismatches: Vec<String>,
    pub first_failure: Option<String>,
    pub wall_time_ms: f64,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn check(&self, name: &str) -> Option<&TheoremCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn empty(scenario: &Scenario) -> Self {
        Self {
            name: scenario.name.clone(),
            dim_group: scenario.action.hopf().dim(),
            dim_module: scenario.action.target().dim(),
            verification: Vec::new(),
            ergodic: None,
            fixed_point_dim: None,
            nondegeneracy: None,
            dim_harmonic: None,
            dim_group_harmonic: None,
            choi_effros_table: Vec::new(),
            cesaro: None,
            checks: Vec::new(),
            oracle: None,
            expectation_mismatches: Vec::new(),
            first_failure: None,
            wall_time_ms: 0.0,
        }
    }

    fn fail(&mut self, what: String) {
        if self.first_failure.is_none() {
            self.first_failure = Some(what);
        }
    }
}

/// How far down the pipeline to go.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Axiom verification only.
    Verify,
    /// Verification, ergodicity, non-degeneracy and the harmonic space.
    Harmonic,
    /// Everything, including the theorem suite and the oracle cross-check.
    Suite,
}

/// Runs the full pipeline. Never errors: every problem is recorded in the
/// report and reflected in `first_failure`.
pub fn analyze(scenario: &Scenario, tol: &Tolerance, seed: u64) -> ScenarioReport {
    analyze_stage(scenario, tol, seed, Stage::Suite)
}

pub fn analyze_stage(
    scenario: &Scenario,
    tol: &Tolerance,
    seed: u64,
    stage: Stage,
) -> ScenarioReport {
    let mut rep = ScenarioReport::empty(scenario);
    rep.verification = scenario.verify(tol);
    let broken = rep.verification.iter().find_map(|v| {
        v.failures().next().map(|f| {
            format!(
                "verification: {} axiom `{}` (deviation {:.3e})",
                v.subject, f.axiom, f.deviation
            )
        })
    });
    if let Some(msg) = broken {
        rep.fail(msg);
    }
    if !rep.passed() || stage == Stage::Verify {
        return rep;
    }
    let analysis = match Analysis::new(
        scenario.action.clone(),
        scenario.measure.clone(),
        *tol,
        seed,
    ) {
        Ok(a) => a,
        Err(e) => {
            rep.fail(format!("pipeline: {e}"));
            return rep;
        }
    };
    rep.ergodic = Some(analysis.ergodic());
    rep.fixed_point_dim = Some(analysis.fixed_points.len());
    rep.nondegeneracy = Some(analysis.nondegeneracy.clone());
    rep.dim_harmonic = Some(analysis.harmonic_dim());
    rep.dim_group_harmonic = Some(analysis.group_harmonic.len());
    let table = analysis.harmonic.choi_effros_table();
    let h = analysis.harmonic_dim();
    rep.choi_effros_table = (0..h)
        .map(|i| {
            (0..h)
                .map(|j| {
                    (0..h)
                        .map(|k| table[(i * h + j) * h + k])
                        .map(|z| [z.re, z.im])
                        .collect()
                })
                .collect()
        })
        .collect();
    rep.cesaro = match (
        analysis.cesaro_deviation(CESARO_STEPS),
        analysis.cesaro_deviation(CESARO_STEPS_EXTENDED),
    ) {
        (Ok(d), Ok(d2)) => Some(CesaroDiagnostic {
            steps: CESARO_STEPS,
            deviation: d,
            steps_extended: CESARO_STEPS_EXTENDED,
            deviation_extended: d2,
            threshold: CESARO_THRESHOLD,
            within_threshold: d <= CESARO_THRESHOLD,
        }),
        _ => None,
    };
    if stage == Stage::Suite {
        run_suite(&mut rep, scenario, &analysis);
    }
    check_expectations(&mut rep, &scenario.expect, &analysis);
    rep
}

fn run_suite(rep: &mut ScenarioReport, scenario: &Scenario, analysis: &Analysis) {
    rep.checks = analysis.run_theorem_suite();
    if let Some(chk) = rep.checks.iter().find(|c| c.verdict == Verdict::Fail) {
        let msg = format!("theorem check `{}` failed", chk.name);
        rep.fail(msg);
    }
    if let Some(cl) = &scenario.classical {
        match cross_check(
            cl,
            &scenario.measure,
            analysis.operator.matrix(),
            analysis.harmonic.basis(),
            analysis.nondegenerate(),
        ) {
            Ok(x) => {
                if !x.matches {
                    rep.fail(
                        "oracle: classical kernel disagrees with the quantum Markov operator"
                            .into(),
                    );
                }
                rep.oracle = Some(x);
            }
            Err(e) => rep.fail(format!("oracle: {e}")),
        }
    }
}

fn check_expectations(rep: &mut ScenarioReport, e: &Expectations, analysis: &Analysis) {
    let h = analysis.harmonic_dim();
    if let Some(want) = e.ergodic {
        if want != analysis.ergodic() {
            rep.expectation_mismatches.push(format!(
                "ergodic: expected {want}, computed {}",
                analysis.ergodic()
            ));
        }
    }
    if let Some(want) = e.nondegenerate {
        if want != analysis.nondegenerate() {
            rep.expectation_mismatches.push(format!(
                "nondegenerate: expected {want}, computed {}",
                analysis.nondegenerate()
            ));
        }
    }
    if let Some(want) = e.dim_harmonic {
        if want != h {
            rep.expectation_mismatches
                .push(format!("dim_harmonic: expected {want}, computed {h}"));
        }
    }
    if let Some(m) = rep.expectation_mismatches.first().cloned() {
        rep.fail(format!("expectation mismatch: {m}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::hopf::HopfData;

    fn t() -> Tolerance {
        Tolerance::default()
    }

    fn z2_walk() -> Scenario {
        let g = FiniteGroup::cyclic(2);
        let h = HopfData::function_algebra(&g).unwrap();
        let mu = measures::point_mass(&h, 1).unwrap();
        Scenario::new("z2_walk", ActionData::comultiplication(&h).unwrap(), mu)
            .with_classical(g.table().to_vec(), g.table().to_vec())
    }

    #[test]
    fn z2_walk_passes_with_oracle() {
        let rep = analyze(&z2_walk(), &t(), 0);
        assert!(rep.passed(), "{:?}", rep.first_failure);
        assert_eq!(rep.dim_harmonic, Some(1));
        assert!(rep.oracle.as_ref().unwrap().matches);
        assert!(rep.cesaro.as_ref().unwrap().deviation < 1e-12);
    }

    #[test]
    fn expectation_mismatch_is_named() {
        let s = z2_walk().expecting(Expectations {
            dim_harmonic: Some(2),
            ..Default::default()
        });
        let rep = analyze(&s, &t(), 0);
        assert!(rep.first_failure.unwrap().contains("dim_harmonic"));
    }

    #[test]
    fn corrupted_action_stops_before_theorems() {
        let mut s = z2_walk();
        s.action = s.action.with_corrupted_entry(3, c(1e-3));
        let rep = analyze(&s, &t(), 0);
        assert!(rep.checks.is_empty());
        assert!(rep
            .first_failure
            .unwrap()
            .starts_with("verification: action"));
    }

    #[test]
    fn oracle_detects_wrong_convention() {
        let g = FiniteGroup::cyclic(3);
        let h = HopfData::function_algebra(&g).unwrap();
        let mu = measures::point_mass(&h, 1).unwrap();
        let inverse_act: Vec<Vec<usize>> = (0..3)
            .map(|a| (0..3).map(|x| g.mul(g.inv(a), x)).collect())
            .collect();
        let s = Scenario::new("z3", ActionData::comultiplication(&h).unwrap(), mu)
            .with_classical(g.table().to_vec(), inverse_act);
        let rep = analyze(&s, &t(), 0);
        assert!(!rep.oracle.unwrap().matches);
    }
}
