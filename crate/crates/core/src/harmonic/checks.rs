//! Structural checks relating ergodicity, non-degeneracy and harmonic
//! spaces, run on one (quantum group, action, state) triple.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::*;
use crate::measures::Nondegeneracy;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", rename_all = "snake_case"))]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable { reason: String },
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn na(reason: &str) -> Self {
        Verdict::NotApplicable {
            reason: reason.to_string(),
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail)
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TheoremCheck {
    pub name: &'static str,
    pub verdict: Verdict,
    pub metrics: BTreeMap<String, f64>,
    pub note: String,
}

impl TheoremCheck {
    fn new(name: &'static str, verdict: Verdict) -> Self {
        Self {
            name,
            verdict,
            metrics: BTreeMap::new(),
            note: String::new(),
        }
    }

    fn metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }

    fn note(mut self, note: &str) -> Self {
        self.note = note.to_string();
        self
    }
}

const NOT_ERGODIC: &str = "action is not ergodic";
const DEGENERATE: &str = "measure is degenerate";

/// Everything computed once per scenario and shared by the checks.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub action: ActionData,
    pub measure: Vec<C64>,
    pub tol: Tolerance,
    pub seed: u64,
    pub group_module: ModuleAlgebra,
    pub fixed_points: Vec<Vec<C64>>,
    pub nondegeneracy: Nondegeneracy,
    pub operator: MarkovOperator,
    pub harmonic: HarmonicSpace,
    /// Basis of the harmonic space of `Φ^μ` on `A` (the comultiplication action).
    pub group_harmonic: Vec<Vec<C64>>,
    pub cocommutative: bool,
}

impl Analysis {
    /// Runs the harmonic pipeline. Expects verified inputs; errors if the
    /// measure is not a state or the Cesàro decomposition fails.
    pub fn new(action: ActionData, measure: Vec<C64>, tol: Tolerance, seed: u64) -> Result<Self> {
        let h = action.hopf();
        let state = measures::check_state(h, &measure, &tol);
        if let Some(f) = state.failures().next() {
            return Err(Error::AxiomViolation {
                axiom: f.axiom.clone(),
                deviation: f.deviation,
            });
        }
        let group_module = hopf_as_module(h, &tol)?;
        let fixed_points = action.fixed_point_algebra(&tol)?;
        let nondegeneracy = measures::nondegeneracy(h, &measure, &tol)?;
        let operator = MarkovOperator::new(&action, &measure, &tol)?;
        let harmonic = HarmonicSpace::new(operator.matrix(), action.target(), &tol)?;
        let gen = CMatrix::identity(h.dim()).sub(operator.group_matrix())?;
        let group_harmonic = numeric::kernel_basis(&gen, &tol)?;
        let cocommutative = h.is_cocommutative(&tol);
        Ok(Self {
            action,
            measure,
            tol,
            seed,
            group_module,
            fixed_points,
            nondegeneracy,
            operator,
            harmonic,
            group_harmonic,
            cocommutative,
        })
    }

    pub fn ergodic(&self) -> bool {
        self.fixed_points.len() == 1
    }

    pub fn nondegenerate(&self) -> bool {
        self.nondegeneracy.nondegenerate
    }

    pub fn harmonic_dim(&self) -> usize {
        self.harmonic.dim()
    }

    /// The hypotheses shared by most triviality results: ergodic action
    /// and non-degenerate (spread-out) state.
    fn hypotheses(&self) -> Option<Verdict> {
        if !self.ergodic() {
            Some(Verdict::na(NOT_ERGODIC))
        } else if !self.nondegenerate() {
            Some(Verdict::na(DEGENERATE))
        } else if !measures::is_spread_out(&self.measure) {
            Some(Verdict::na("measure is not spread out"))
        } else {
            None
        }
    }

    fn trivial_harmonics(&self) -> bool {
        self.harmonic_dim() == 1
            && numeric::residual_from_span(
                self.action.target().algebra().unit(),
                self.harmonic.basis(),
            ) <= self.tol.eps_compare
    }

    /// Operator-norm distance between `E` and the Cesàro mean at `n`.
    pub fn cesaro_deviation(&self, n: u64) -> Result<f64> {
        self.harmonic.cesaro_deviation(self.operator.matrix(), n)
    }

    pub fn run_theorem_suite(&self) -> Vec<TheoremCheck> {
        alloc::vec![
            self.check_intertwining_relation(),
            self.check_orbit_map_identities(),
            self.check_harmonic_projection(),
            self.check_choi_effros_algebra(),
            self.check_harmonic_characterization(),
            self.check_boundary_transfer(),
            self.check_orbit_map_faithfulness(),
            self.check_markov_faithfulness(),
            self.check_maximum_principle(),
            self.check_state_extension(),
            self.check_normal_projection(),
            self.check_subalgebra_triviality(),
            self.check_multiplicative_domain(),
            self.check_compact_triviality(),
            self.check_action_restriction(),
            self.check_central_measure(),
            self.check_dual_choquet_deny(),
            self.check_invariant_state_triviality(),
            self.check_finite_factor(),
        ]
    }

    /// `αΦ^μ_α = (Φ^μ⊗ι)α`, unitality and complete positivity of `Φ^μ_α`.
    pub fn check_intertwining_relation(&self) -> TheoremCheck {
        let rep = self.operator.report();
        let mut c = TheoremCheck::new("intertwining_relation", Verdict::from_bool(rep.passed()));
        for chk in &rep.checks {
            c = c.metric(&chk.axiom, chk.deviation);
        }
        c
    }

    /// `(ι⊗φ_ω)α = Γφ_ω`, `Φ^μφ_ω = φ_ωΦ^μ_α` and `(ι⊗μ)Γφ_ω = φ_{μ⋆ω}`
    /// for the dual basis functionals of `N` and its trace.
    pub fn check_orbit_map_identities(&self) -> TheoremCheck {
        let n = self.action.target().dim();
        let mut family: Vec<Vec<C64>> = (0..n).map(|i| numeric::unit_vector(n, i)).collect();
        family.push(self.action.target().trace().to_vec());
        let mut worst = OrbitIdentities {
            coaction: 0.0,
            left: 0.0,
            right: 0.0,
            mixed: 0.0,
        };
        for omega in &family {
            match orbit_identities(&self.action, &self.measure, omega) {
                Ok(ids) => {
                    worst.coaction = worst.coaction.max(ids.coaction);
                    worst.left = worst.left.max(ids.left);
                    worst.right = worst.right.max(ids.right);
                    worst.mixed = worst.mixed.max(ids.mixed);
                }
                Err(_) => return TheoremCheck::new("orbit_map_identities", Verdict::Fail),
            }
        }
        TheoremCheck::new("orbit_map_identities", Verdict::from_bool(worst.worst() <= IDENTITY_THRESHOLD))
            .metric("coaction", worst.coaction)
            .metric("left_convolution", worst.left)
            .metric("right_convolution", worst.right)
            .metric("left_convolution_vs_predual", worst.mixed)
            .note("Φ^μφ_ω = φ_{μ⋆ω} holds with right convolution (ι⊗μ)Γ; with left convolution (μ⊗ι)Γ it holds when μ is central")
    }

    /// `E` is a unital completely positive idempotent onto the harmonic space.
    pub fn check_harmonic_projection(&self) -> TheoremCheck {
        let rep = self.harmonic.report();
        let mut ok = true;
        let mut c = TheoremCheck::new("harmonic_projection", Verdict::Pass);
        for chk in rep
            .checks
            .iter()
            .filter(|c| c.axiom.starts_with("projection_") || c.axiom.starts_with("harmonic_"))
        {
            ok &= chk.passed;
            c = c.metric(&chk.axiom, chk.deviation);
        }
        c.verdict = Verdict::from_bool(ok);
        c
    }

    /// `x∘y = E(xy)` is an associative unital *-product agreeing with the
    /// ambient product when the harmonic space is a subalgebra.
    pub fn check_choi_effros_algebra(&self) -> TheoremCheck {
        let rep = self.harmonic.report();
        let mut ok = true;
        let mut c = TheoremCheck::new("choi_effros_algebra", Verdict::Pass);
        for chk in rep
            .checks
            .iter()
            .filter(|c| c.axiom.starts_with("choi_effros_"))
        {
            ok &= chk.passed;
            c = c.metric(&chk.axiom, chk.deviation);
        }
        c.verdict = Verdict::from_bool(ok);
        c.metric("dim_harmonic", self.harmonic_dim() as f64)
    }

    /// Harmonic elements are exactly the `x` with `α(x) ∈ H^μ_Γ ⊗ N`.
    pub fn check_harmonic_characterization(&self) -> TheoremCheck {
        let name = "harmonic_characterization";
        let a = self.action.hopf().dim();
        let n = self.action.target().dim();
        let q = numeric::projector(&self.group_harmonic, a);
        let complement = CMatrix::identity(a).sub(&q).expect("square");
        let rhs = kron(&complement, &CMatrix::identity(n))
            .matmul(&self.action.matrix())
            .and_then(|m| numeric::kernel_basis(&m, &self.tol));
        let Ok(rhs) = rhs else {
            return TheoremCheck::new(name, Verdict::Fail);
        };
        let lhs = self.harmonic.basis();
        let into = lhs
            .iter()
            .map(|x| numeric::residual_from_span(x, &rhs))
            .fold(0.0f64, f64::max);
        let back = rhs
            .iter()
            .map(|x| numeric::residual_from_span(x, lhs))
            .fold(0.0f64, f64::max);
        let ok = lhs.len() == rhs.len() && into <= SUBSPACE_THRESHOLD && back <= SUBSPACE_THRESHOLD;
        TheoremCheck::new(name, Verdict::from_bool(ok))
            .metric("dim_harmonic", lhs.len() as f64)
            .metric("dim_lifted", rhs.len() as f64)
            .metric("harmonic_in_lifted", into)
            .metric("lifted_in_harmonic", back)
    }

    /// Ergodic `α` and `H^μ_Γ = C1` force `H^μ_α = C1`.
    pub fn check_boundary_transfer(&self) -> TheoremCheck {
        let name = "boundary_transfer";
        if !self.ergodic() {
            return TheoremCheck::new(name, Verdict::na(NOT_ERGODIC));
        }
        if self.group_harmonic.len() != 1 {
            return TheoremCheck::new(
                name,
                Verdict::na("harmonic space of the comultiplication is not trivial"),
            )
            .metric("dim_group_harmonic", self.group_harmonic.len() as f64);
        }
        TheoremCheck::new(name, Verdict::from_bool(self.trivial_harmonics()))
            .metric("dim_harmonic", self.harmonic_dim() as f64)
    }

    /// Ergodic: `φ_ν` is faithful for random and basis-derived states.
    /// Not ergodic: a state supported on an invariant projection `e`
    /// gives `φ_ω(1−e) = 0`, so `φ_ω` is not faithful.
    pub fn check_orbit_map_faithfulness(&self) -> TheoremCheck {
        let name = "orbit_map_faithfulness";
        let target = self.action.target();
        if self.ergodic() {
            let mut states = random_states(target, 20, self.seed);
            states.extend(basis_states(target));
            states.push(target.trace().to_vec());
            let mut min_rank = usize::MAX;
            let mut all = true;
            for nu in &states {
                match is_faithful_positive_map(
                    &self.action.orbit_map(nu),
                    target,
                    &self.group_module,
                    &self.tol,
                ) {
                    Ok(f) => {
                        min_rank = min_rank.min(f.support_rank);
                        all &= f.faithful;
                    }
                    Err(_) => all = false,
                }
            }
            return TheoremCheck::new(name, Verdict::from_bool(all))
                .metric("states_checked", states.len() as f64)
                .metric("min_support_rank", min_rank as f64)
                .metric("dim", target.dim() as f64);
        }
        match invariant_projection_witness(&self.action, &self.tol) {
            Ok(Some(w)) => {
                let ok = w.residual <= WITNESS_THRESHOLD
                    && w.projection_defect <= self.tol.eps_compare
                    && !w.orbit_map_faithful;
                TheoremCheck::new(name, Verdict::from_bool(ok))
                    .metric("witness_residual", w.residual)
                    .metric("projection_defect", w.projection_defect)
                    .note("witness: state supported on a projection in the fixed-point algebra")
            }
            _ => TheoremCheck::new(name, Verdict::Fail)
                .note("no invariant projection found for a non-ergodic action"),
        }
    }

    /// `Φ^μ` on `A` and `Φ^μ_α` on `N` are faithful.
    pub fn check_markov_faithfulness(&self) -> TheoremCheck {
        let name = "markov_faithfulness";
        let g = is_faithful_positive_map(
            self.operator.group_matrix(),
            &self.group_module,
            &self.group_module,
            &self.tol,
        );
        let n = is_faithful_positive_map(
            self.operator.matrix(),
            self.action.target(),
            self.action.target(),
            &self.tol,
        );
        match (g, n) {
            (Ok(g), Ok(n)) => TheoremCheck::new(name, Verdict::from_bool(g.faithful && n.faithful))
                .metric("group_support_rank", g.support_rank as f64)
                .metric("action_support_rank", n.support_rank as f64),
            _ => TheoremCheck::new(name, Verdict::Fail).note("Markov operator is not positive"),
        }
    }

    /// Every self-adjoint harmonic element attains its norm on a normal
    /// state (an eigenvector state) and so must be scalar.
    pub fn check_maximum_principle(&self) -> TheoremCheck {
        let name = "maximum_principle";
        if let Some(v) = self.hypotheses() {
            return TheoremCheck::new(name, v);
        }
        let target = self.action.target();
        let alg = target.algebra();
        let Ok(gns) = Gns::new(alg, target.trace(), &self.tol) else {
            return TheoremCheck::new(name, Verdict::Fail);
        };
        let mut worst = 0.0f64;
        let mut attained = 0.0f64;
        for b in self.harmonic.basis() {
            let bs = alg.star(b);
            for y in [
                numeric::vec_add(b, &bs),
                numeric::vec_scale(&numeric::vec_sub(b, &bs), I),
            ] {
                let py = gns.represent(&y);
                if let Ok(e) = numeric::eigh(
                    &py.add(&py.adjoint()).expect("square").scale(c(0.5)),
                    &self.tol,
                ) {
                    let top = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    attained = attained.max(top);
                }
                worst = worst.max(alg.scalar_part(&y).1);
            }
        }
        TheoremCheck::new(name, Verdict::from_bool(worst <= self.tol.eps_compare))
            .metric("max_scalar_residual", worst)
            .metric("max_norm_attained", attained)
            .note("norm attained at an eigenvector state of the GNS representation")
    }

    /// States on `H^μ_α` always extend at finite dimension, so the
    /// equivalence collapses to `H^μ_α = C1`.
    pub fn check_state_extension(&self) -> TheoremCheck {
        let name = "state_extension";
        if let Some(v) = self.hypotheses() {
            return TheoremCheck::new(name, v);
        }
        TheoremCheck::new(name, Verdict::from_bool(self.trivial_harmonics()))
            .metric("dim_harmonic", self.harmonic_dim() as f64)
            .note("extension hypothesis holds automatically at finite dimension")
    }

    /// `E` is normal at finite dimension, hence `H^μ_α = C1`.
    pub fn check_normal_projection(&self) -> TheoremCheck {
        let name = "normal_projection";
        if let Some(v) = self.hypotheses() {
            return TheoremCheck::new(name, v);
        }
        let projection_ok = self
            .harmonic
            .report()
            .checks
            .iter()
            .filter(|c| c.axiom.starts_with("projection_"))
            .all(|c| c.passed);
        TheoremCheck::new(
            name,
            Verdict::from_bool(projection_ok && self.trivial_harmonics()),
        )
        .metric("dim_harmonic", self.harmonic_dim() as f64)
    }

    /// If `H^μ_α` is closed under the product of `N` it is `C1`.
    pub fn check_subalgebra_triviality(&self) -> TheoremCheck {
        let name = "subalgebra_triviality";
        if let Some(v) = self.hypotheses() {
            return TheoremCheck::new(name, v);
        }
        let res = self.harmonic.subalgebra_residual();
        if !self.harmonic.is_subalgebra(&self.tol) {
            return TheoremCheck::new(name, Verdict::na("harmonic space is not a subalgebra"))
                .metric("subalgebra_residual", res);
        }
        TheoremCheck::new(name, Verdict::from_bool(self.trivial_harmonics()))
            .metric("subalgebra_residual", res)
            .metric("dim_harmonic", self.harmonic_dim() as f64)
    }

    /// `{x ∈ H : x*x, xx* ∈ H} = C1`.
    pub fn check_multiplicative_domain(&self) -> TheoremCheck {
        let name = "multiplicative_domain";
        let alg = self.action.target().algebra();
        let Ok(dom) = multiplicative_domain(
            alg,
            self.operator.matrix(),
            self.harmonic.basis(),
            &self.tol,
        ) else {
            return TheoremCheck::new(name, Verdict::Fail);
        };
        let mut closure = 0.0f64;
        for x in &dom {
            let xs = alg.star(x);
            closure = closure.max(numeric::residual_from_span(
                &alg.product(&xs, x),
                self.harmonic.basis(),
            ));
            closure = closure.max(numeric::residual_from_span(
                &alg.product(x, &xs),
                self.harmonic.basis(),
            ));
        }
        let base = TheoremCheck::new(name, Verdict::Pass)
            .metric("dim_domain", dom.len() as f64)
            .metric("dim_harmonic", self.harmonic_dim() as f64)
            .metric("domain_closure_residual", closure);
        if let Some(v) = self.hypotheses() {
            let mut c = base;
            c.verdict = v;
            if dom.len() > 1 {
                c.note = format!(
                    "non-scalar multiplicative domain of dimension {}",
                    dom.len()
                );
            }
            return c;
        }
        let unit_in = numeric::residual_from_span(alg.unit(), &dom) <= self.tol.eps_compare;
        let mut c = base;
        c.verdict =
            Verdict::from_bool(dom.len() == 1 && unit_in && closure <= self.tol.eps_compare);
        c
    }

    /// Ergodic action on a finite-dimensional algebra with a non-degenerate
    /// state: `H^μ_α = C1`.
    pub fn check_compact_triviality(&self) -> TheoremCheck {
        let name = "compact_triviality";
        if let Some(v) = self.hypotheses() {
            return TheoremCheck::new(name, v).metric("dim_harmonic", self.harmonic_dim() as f64);
        }
        TheoremCheck::new(name, Verdict::from_bool(self.trivial_harmonics()))
            .metric("dim_harmonic", self.harmonic_dim() as f64)
    }

    /// Largest residual of `(e_i^*⊗ι)α(x)` from the harmonic span.
    fn restriction_residual(&self) -> f64 {
        let a = self.action.hopf().dim();
        let mut worst = 0.0f64;
        for i in 0..a {
            let m = self.action.markov_matrix(&numeric::unit_vector(a, i));
            for x in self.harmonic.basis() {
                let y = m.matvec(x).expect("square");
                worst = worst.max(numeric::residual_from_span(&y, self.harmonic.basis()));
            }
        }
        worst
    }

    /// If `α` restricts to the harmonic space, then `H^μ_α = C1`.
    pub fn check_action_restriction(&self) -> TheoremCheck {
        let name = "action_restriction";
        if let Some(v) = self.hypotheses() {
            return TheoremCheck::new(name, v);
        }
        let res = self.restriction_residual();
        if res > self.tol.eps_compare {
            return TheoremCheck::new(
                name,
                Verdict::na("action does not restrict to the harmonic space"),
            )
            .metric("restriction_residual", res);
        }
        TheoremCheck::new(name, Verdict::from_bool(self.trivial_harmonics()))
            .metric("restriction_residual", res)
            .metric("dim_harmonic", self.harmonic_dim() as f64)
    }

    /// A central non-degenerate state makes `α` restrict to the harmonic
    /// space, hence `H^μ_α = C1`.
    pub fn check_central_measure(&self) -> TheoremCheck {
        let name = "central_measure";
        let defect = match measures::centrality_defect(self.action.hopf(), &self.measure, &self.tol)
        {
            Ok(d) => d,
            Err(_) => return TheoremCheck::new(name, Verdict::Fail),
        };
        if defect > self.tol.eps_compare {
            return TheoremCheck::new(name, Verdict::na("measure is not central"))
                .metric("centrality_defect", defect);
        }
        if let Some(v) = self.hypotheses() {
            return TheoremCheck::new(name, v).metric("centrality_defect", defect);
        }
        let res = self.restriction_residual();
        TheoremCheck::new(
            name,
            Verdict::from_bool(res <= self.tol.eps_compare && self.trivial_harmonics()),
        )
        .metric("centrality_defect", defect)
        .metric("restriction_residual", res)
        .metric("dim_harmonic", self.harmonic_dim() as f64)
    }

    /// Cocommutative `A` and non-degenerate `μ`: `H^μ_Γ = C1`.
    pub fn check_dual_choquet_deny(&self) -> TheoremCheck {
        let name = "dual_choquet_deny";
        let dim = self.group_harmonic.len() as f64;
        if !self.cocommutative {
            return TheoremCheck::new(name, Verdict::na("quantum group is not cocommutative"));
        }
        if !self.nondegenerate() {
            return TheoremCheck::new(name, Verdict::na(DEGENERATE))
                .metric("dim_group_harmonic", dim);
        }
        TheoremCheck::new(name, Verdict::from_bool(self.group_harmonic.len() == 1))
            .metric("dim_group_harmonic", dim)
    }

    /// An invariant state on an ergodic `N` forces `H^μ_α = C1`.
    pub fn check_invariant_state_triviality(&self) -> TheoremCheck {
        let name = "invariant_state_triviality";
        if let Some(v) = self.hypotheses() {
            return TheoremCheck::new(name, v);
        }
        let found = match find_invariant_state(&self.action, &self.tol) {
            Ok(Some(s)) => s,
            Ok(None) => {
                return TheoremCheck::new(
                    name,
                    Verdict::na("no invariant state found (inconclusive)"),
                )
            }
            Err(_) => return TheoremCheck::new(name, Verdict::Fail),
        };
        let target = self.action.target();
        let is_state = target
            .algebra()
            .check_state(&found.state, &self.tol)
            .passed();
        let ok = is_state && found.residual <= WITNESS_THRESHOLD && self.trivial_harmonics();
        TheoremCheck::new(name, Verdict::from_bool(ok))
            .metric("invariance_residual", found.residual)
            .metric("dim_harmonic", self.harmonic_dim() as f64)
            .note(&format!("invariant state from {}", found.source))
    }

    /// Classical group acting ergodically on a factor: the trace is
    /// invariant and `H^μ_α = C1`.
    pub fn check_finite_factor(&self) -> TheoremCheck {
        let name = "finite_factor";
        let h = self.action.hopf();
        if !h.algebra().is_commutative(&self.tol) {
            return TheoremCheck::new(name, Verdict::na("quantum group is not a classical group"));
        }
        match self.action.target().center_dim(&self.tol) {
            Ok(1) => {}
            _ => return TheoremCheck::new(name, Verdict::na("module algebra is not a factor")),
        }
        if let Some(v) = self.hypotheses() {
            return TheoremCheck::new(name, v);
        }
        let res = invariance_residual(&self.action, self.action.target().trace());
        TheoremCheck::new(name, Verdict::from_bool(res <= WITNESS_THRESHOLD && self.trivial_harmonics()))
            .metric("trace_invariance_residual", res)
            .metric("dim_harmonic", self.harmonic_dim() as f64)
            .note("Markov operator is x ↦ Σ_g μ(g) α_{g⁻¹}(x); the averaging ∫α_g dμ corresponds to the inverted measure")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::pauli_action;
    use crate::groups::FiniteGroup;

    fn t() -> Tolerance {
        Tolerance::default()
    }

    fn verdicts(a: &Analysis) -> BTreeMap<&'static str, Verdict> {
        a.run_theorem_suite()
            .into_iter()
            .map(|c| (c.name, c.verdict))
            .collect()
    }

    fn assert_no_failures(a: &Analysis) {
        for c in a.run_theorem_suite() {
            assert!(!c.verdict.is_fail(), "{} failed: {:?}", c.name, c);
        }
    }

    #[test]
    fn pauli_with_uniform_measure() {
        let p = pauli_action(&t()).unwrap();
        let mu = measures::haar(p.hopf());
        let a = Analysis::new(p, mu, t(), 1).unwrap();
        assert!(a.ergodic() && a.nondegenerate());
        assert_eq!(a.harmonic_dim(), 1);
        assert_no_failures(&a);
        let v = verdicts(&a);
        assert!(v["compact_triviality"].is_pass());
        assert!(v["invariant_state_triviality"].is_pass());
        assert!(v["finite_factor"].is_pass());
    }

    #[test]
    fn dual_choquet_deny_on_s3() {
        let g = FiniteGroup::dihedral(3);
        let h = HopfData::group_algebra(&g).unwrap();
        // (1 + χ)/2 with χ the sign character: fixed set {g : u(g) = 1} = rotations
        let chars = g.linear_characters();
        let sign = &chars[1];
        let u: Vec<C64> = sign.iter().map(|z| (ONE + z) * c(0.5)).collect();
        let a = Analysis::new(ActionData::comultiplication(&h).unwrap(), u, t(), 1).unwrap();
        assert!(!a.nondegenerate());
        assert_eq!(a.group_harmonic.len(), 3);
        assert_no_failures(&a);
        // (1 + δ_e)/2: fixed set trivial
        let mut u = alloc::vec![c(0.5); 6];
        u[0] = ONE;
        let a = Analysis::new(ActionData::comultiplication(&h).unwrap(), u, t(), 1).unwrap();
        assert!(a.nondegenerate());
        assert_eq!(a.group_harmonic.len(), 1);
        assert!(verdicts(&a)["dual_choquet_deny"].is_pass());
        assert_no_failures(&a);
    }

    #[test]
    fn subgroup_indicator_on_z4_is_sharpness_witness() {
        let h = HopfData::group_algebra(&FiniteGroup::cyclic(4)).unwrap();
        let u = measures::indicator(&h, &[0, 2]).unwrap();
        let a = Analysis::new(ActionData::comultiplication(&h).unwrap(), u, t(), 1).unwrap();
        assert!(!a.nondegenerate());
        assert_eq!(a.harmonic_dim(), 2);
        let suite = a.run_theorem_suite();
        let md = suite
            .iter()
            .find(|c| c.name == "multiplicative_domain")
            .unwrap();
        assert!(matches!(md.verdict, Verdict::NotApplicable { .. }));
        assert_eq!(md.metrics["dim_domain"], 2.0);
        assert_no_failures(&a);
    }

    #[test]
    fn two_orbit_set_is_not_applicable_but_consistent() {
        let z3 = FiniteGroup::cyclic(3);
        let act: Vec<Vec<usize>> = (0..3)
            .map(|g| alloc::vec![g % 3, (1 + g) % 3, (2 + g) % 3, 3])
            .collect();
        let a = ActionData::group_set(&z3, &act).unwrap();
        let mu = measures::point_mass(a.hopf(), 1).unwrap();
        let an = Analysis::new(a, mu, t(), 3).unwrap();
        assert!(!an.ergodic());
        assert_eq!(an.harmonic_dim(), 2);
        assert_no_failures(&an);
        let v = verdicts(&an);
        assert!(v["orbit_map_faithfulness"].is_pass());
        assert!(v["harmonic_characterization"].is_pass());
    }

    #[test]
    fn counit_is_degenerate_everywhere() {
        let h = HopfData::function_algebra(&FiniteGroup::dihedral(3)).unwrap();
        let a = Analysis::new(
            ActionData::comultiplication(&h).unwrap(),
            measures::counit(&h),
            t(),
            0,
        )
        .unwrap();
        assert_eq!(a.harmonic_dim(), 6);
        assert_no_failures(&a);
        assert!(matches!(
            verdicts(&a)["maximum_principle"],
            Verdict::NotApplicable { .. }
        ));
    }

    #[test]
    fn non_central_measure_on_s3() {
        let h = HopfData::function_algebra(&FiniteGroup::dihedral(3)).unwrap();
        let mu = measures::uniform_on(&h, &[0, 1, 3]).unwrap();
        let a = Analysis::new(ActionData::comultiplication(&h).unwrap(), mu, t(), 0).unwrap();
        assert!(a.nondegenerate() && a.ergodic());
        assert_eq!(a.harmonic_dim(), 1);
        assert_no_failures(&a);
        assert!(matches!(
            verdicts(&a)["central_measure"],
            Verdict::NotApplicable { .. }
        ));
    }

    #[test]
    fn signed_measure_rejected() {
        let h = HopfData::function_algebra(&FiniteGroup::cyclic(2)).unwrap();
        let err = Analysis::new(
            ActionData::comultiplication(&h).unwrap(),
            alloc::vec![c(1.5), c(-0.5)],
            t(),
            0,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::AxiomViolation { ref axiom, .. } if axiom == "positivity"),
            "{err:?}"
        );
    }
}
