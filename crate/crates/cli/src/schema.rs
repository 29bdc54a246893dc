//! Scenario file format, version 1.
//!
//! Complex scalars are `[re, im]`; tensors are nested arrays indexed
//! `[i][j][k]`; group tables are integer matrices with element 0 the
//! identity. Quantum groups, actions and measures are either constructor
//! directives (`"construct": ...`) or explicit tensors.

use std::path::{Path, PathBuf};

use qharm_core::actions::{self, ActionData, ActionKind, ModuleAlgebra};
use qharm_core::hopf;
use qharm_core::measures;
use qharm_core::numeric::{c, CMatrix, C64};
use qharm_core::scenario::{ClassicalData, Expectations, Scenario};
use qharm_core::{Algebra, FiniteGroup, HopfData, Tolerance, VerificationReport};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

pub type Cx = [f64; 2];

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("verification failed: {subject} axiom `{axiom}` (deviation {deviation:.3e})")]
    Verification {
        subject: String,
        axiom: String,
        deviation: f64,
    },
    #[error("dimension {dim} exceeds the --max-dim guard of {max}")]
    TooLarge { dim: usize, max: usize },
}

impl LoadError {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadError::Io { .. } => "io",
            LoadError::Schema { .. } => "schema",
            LoadError::Verification { .. } => "verification",
            LoadError::TooLarge { .. } => "too_large",
        }
    }
}

fn schema(path: &str, message: impl std::fmt::Display) -> LoadError {
    LoadError::Schema {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn first_failure(rep: &VerificationReport) -> Result<(), LoadError> {
    match rep.failures().next() {
        Some(f) => Err(LoadError::Verification {
            subject: rep.subject.clone(),
            axiom: f.axiom.clone(),
            deviation: f.deviation,
        }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub quantum_group: QuantumGroupSpec,
    pub action: ActionSpec,
    pub measure: MeasureSpec,
    #[serde(default, skip_serializing_if = "Expectations::is_empty")]
    pub expect: Expectations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construct", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuantumGroupSpec {
    /// `C(G)`. Give either a catalogue name (`"S3"`, `"Z2xZ2"`, ...) or a table.
    FunctionAlgebra {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<Vec<Vec<usize>>>,
    },
    /// `C[G]`.
    GroupAlgebra {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<Vec<Vec<usize>>>,
    },
    Dual {
        of: Box<QuantumGroupSpec>,
    },
    /// Explicit tensors, inline or from a file relative to the scenario.
    Load {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        data: Option<Box<HopfTensors>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraTensors {
    /// `mult[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    pub mult: Vec<Vec<Vec<Cx>>>,
    pub unit: Vec<Cx>,
    /// Matrix of `*` acting on conjugated coordinates.
    pub involution: Vec<Vec<Cx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfTensors {
    pub labels: Vec<String>,
    pub algebra: AlgebraTensors,
    /// `comult[i][j][k]`: coefficient of `e_j ⊗ e_k` in `Γ(e_i)`.
    pub comult: Vec<Vec<Vec<Cx>>>,
    pub counit: Vec<Cx>,
    pub antipode: Vec<Vec<Cx>>,
    /// Optional; always recomputed and compared, never trusted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub haar: Option<Vec<Cx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construct", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    MatrixAlgebra {
        n: usize,
    },
    Functions {
        points: usize,
    },
    Explicit {
        algebra: AlgebraTensors,
        /// Faithful tracial state; defaults to the normalized regular trace.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trace: Option<Vec<Cx>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalSpec {
    pub table: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construct", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionSpec {
    /// `N = A`, `α = Γ`.
    Comultiplication {},
    /// `act[g][x] = g·x` on a finite set; needs a function-algebra group.
    GroupSet {
        act: Vec<Vec<usize>>,
    },
    /// Left multiplication on `G/K`.
    CosetSpace {
        subgroup: Vec<usize>,
    },
    /// `autos[g]`: coordinate matrix of the automorphism `α_g` of `module`.
    Automorphisms {
        module: ModuleSpec,
        autos: Vec<Vec<Vec<Cx>>>,
    },
    /// `α_g(x) = U_g x U_g*` on `M_n`.
    Conjugation {
        n: usize,
        unitaries: Vec<Vec<Vec<Cx>>>,
    },
    Trivial {
        module: ModuleSpec,
    },
    /// `tensor[i][j][k]`: coefficient of `e_j ⊗ f_k` in `α(f_i)`.
    Explicit {
        module: ModuleSpec,
        tensor: Vec<Vec<Vec<Cx>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        classical: Option<ClassicalSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixturePart {
    pub weight: f64,
    pub measure: MeasureSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construct", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    Counit {},
    Haar {},
    PointMass {
        index: usize,
    },
    UniformOn {
        subset: Vec<usize>,
    },
    /// `e_i ↦ [i ∈ subset]`; on `C[G]` with a subgroup this is `1_K`.
    Indicator {
        subset: Vec<usize>,
    },
    /// A one-dimensional character of `G` as a state on `C[G]`.
    Character {
        index: usize,
    },
    /// `χ_reg/|G| = δ_e` as a state on `C[G]`.
    RegularCharacter {},
    /// Classical probability vector; must sum to 1 within 1e-12.
    Weights {
        weights: Vec<f64>,
    },
    Functional {
        values: Vec<Cx>,
    },
    Mixture {
        parts: Vec<MixturePart>,
    },
}

fn cx(z: C64) -> Cx {
    [z.re, z.im]
}

fn from_cx(v: &Cx) -> C64 {
    C64::new(v[0], v[1])
}

fn flat_vec(path: &str, v: &[Cx], n: usize) -> Result<Vec<C64>, LoadError> {
    if v.len() != n {
        return Err(schema(
            path,
            format!("expected length {n}, found {}", v.len()),
        ));
    }
    Ok(v.iter().map(from_cx).collect())
}

fn flat_matrix(path: &str, m: &[Vec<Cx>], rows: usize, cols: usize) -> Result<CMatrix, LoadError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(schema(path, format!("expected a {rows}x{cols} matrix")));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| from_cx(&m[i][j])))
}

fn flat_tensor(
    path: &str,
    t: &[Vec<Vec<Cx>>],
    a: usize,
    b: usize,
    d: usize,
) -> Result<Vec<C64>, LoadError> {
    if t.len() != a
        || t.iter()
            .any(|x| x.len() != b || x.iter().any(|y| y.len() != d))
    {
        return Err(schema(path, format!("expected a {a}x{b}x{d} tensor")));
    }
    Ok(t.iter().flatten().flatten().map(from_cx).collect())
}

fn nest_tensor(flat: &[C64], a: usize, b: usize, d: usize) -> Vec<Vec<Vec<Cx>>> {
    (0..a)
        .map(|i| {
            (0..b)
                .map(|j| (0..d).map(|k| cx(flat[(i * b + j) * d + k])).collect())
                .collect()
        })
        .collect()
}

fn nest_matrix(m: &CMatrix) -> Vec<Vec<Cx>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().copied().map(cx).collect())
        .collect()
}

impl AlgebraTensors {
    fn build(&self, path: &str) -> Result<Algebra, LoadError> {
        let d = self.unit.len();
        let mult = flat_tensor(&format!("{path}.mult"), &self.mult, d, d, d)?;
        let unit = flat_vec(&format!("{path}.unit"), &self.unit, d)?;
        let invol = flat_matrix(&format!("{path}.involution"), &self.involution, d, d)?;
        Algebra::new(d, mult, unit, invol).map_err(|e| schema(path, e))
    }

    fn from_algebra(a: &Algebra) -> Self {
        let d = a.dim();
        Self {
            mult: nest_tensor(a.structure_constants(), d, d, d),
            unit: a.unit().iter().copied().map(cx).collect(),
            involution: nest_matrix(a.involution()),
        }
    }
}

impl HopfTensors {
    fn build(&self, path: &str, tol: &Tolerance) -> Result<HopfData, LoadError> {
        let algebra = self.algebra.build(&format!("{path}.algebra"))?;
        let d = algebra.dim();
        if self.labels.len() != d {
            return Err(schema(
                &format!("{path}.labels"),
                format!("expected {d} labels"),
            ));
        }
        let comult = flat_tensor(&format!("{path}.comult"), &self.comult, d, d, d)?;
        let counit = flat_vec(&format!("{path}.counit"), &self.counit, d)?;
        let antipode = flat_matrix(&format!("{path}.antipode"), &self.antipode, d, d)?;
        let mut structure = hopf::structure_report(&algebra, &comult, &counit, &antipode, tol);
        structure.subject = "quantum group".into();
        first_failure(&structure)?;
        let h = HopfData::from_parts(self.labels.clone(), algebra, comult, counit, antipode, tol)
            .map_err(|e| LoadError::Verification {
            subject: "quantum group".into(),
            axiom: "haar_exists".into(),
            deviation: match e {
                qharm_core::Error::AxiomViolation { deviation, .. } => deviation,
                _ => f64::INFINITY,
            },
        })?;
        if let Some(given) = &self.haar {
            let given = flat_vec(&format!("{path}.haar"), given, d)?;
            let dev = given
                .iter()
                .zip(h.haar())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            if dev > tol.eps_compare {
                return Err(LoadError::Verification {
                    subject: "quantum group".into(),
                    axiom: "haar_matches_input".into(),
                    deviation: dev,
                });
            }
        }
        Ok(h)
    }

    pub fn from_hopf(h: &HopfData) -> Self {
        let d = h.dim();
        Self {
            labels: h.labels().to_vec(),
            algebra: AlgebraTensors::from_algebra(h.algebra()),
            comult: nest_tensor(h.comult_tensor(), d, d, d),
            counit: h.counit().iter().copied().map(cx).collect(),
            antipode: nest_matrix(h.antipode()),
            haar: Some(h.haar().iter().copied().map(cx).collect()),
        }
    }
}

/// What is known about the underlying classical group, if any.
#[derive(Debug, Clone)]
enum GroupContext {
    Functions(FiniteGroup),
    GroupAlgebra(FiniteGroup),
    Opaque,
}

fn resolve_group(
    path: &str,
    group: &Option<String>,
    table: &Option<Vec<Vec<usize>>>,
) -> Result<FiniteGroup, LoadError> {
    match (group, table) {
        (Some(name), None) => FiniteGroup::catalogue()
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
            .ok_or_else(|| schema(&format!("{path}.group"), format!("unknown group `{name}`"))),
        (None, Some(t)) => {
            FiniteGroup::new(t.clone()).map_err(|e| schema(&format!("{path}.table"), e))
        }
        _ => Err(schema(path, "give exactly one of `group` and `table`")),
    }
}

impl QuantumGroupSpec {
    fn build(
        &self,
        path: &str,
        base: &Path,
        tol: &Tolerance,
    ) -> Result<(HopfData, GroupContext), LoadError> {
        match self {
            QuantumGroupSpec::FunctionAlgebra { group, table } => {
                let g = resolve_group(path, group, table)?;
                let h = HopfData::function_algebra(&g).map_err(|e| schema(path, e))?;
                Ok((h, GroupContext::Functions(g)))
            }
            QuantumGroupSpec::GroupAlgebra { group, table } => {
                let g = resolve_group(path, group, table)?;
                let h = HopfData::group_algebra(&g).map_err(|e| schema(path, e))?;
                Ok((h, GroupContext::GroupAlgebra(g)))
            }
            QuantumGroupSpec::Dual { of } => {
                let (inner, ctx) = of.build(&format!("{path}.of"), base, tol)?;
                let h = inner.dual(tol).map_err(|e| LoadError::Verification {
                    subject: "dual quantum group".into(),
                    axiom: e.to_string(),
                    deviation: f64::INFINITY,
                })?;
                let ctx = match ctx {
                    GroupContext::Functions(g) => GroupContext::GroupAlgebra(g),
                    GroupContext::GroupAlgebra(g) => GroupContext::Functions(g),
                    GroupContext::Opaque => GroupContext::Opaque,
                };
                Ok((h, ctx))
            }
            QuantumGroupSpec::Load { path: file, data } => {
                let tensors = match (file, data) {
                    (Some(f), None) => {
                        let full = base.join(f);
                        let text =
                            std::fs::read_to_string(&full).map_err(|source| LoadError::Io {
                                path: full.display().to_string(),
                                source,
                            })?;
                        parse_json::<HopfTensors>(&text).map_err(|e| match e {
                            LoadError::Schema { path: p, message } => {
                                schema(&format!("{path}.path({f}).{p}"), message)
                            }
                            other => other,
                        })?
                    }
                    (None, Some(d)) => (**d).clone(),
                    _ => return Err(schema(path, "give exactly one of `path` and `data`")),
                };
                let data_path = format!("{path}.data");
                Ok((tensors.build(&data_path, tol)?, GroupContext::Opaque))
            }
        }
    }
}

impl ModuleSpec {
    fn build(&self, path: &str, tol: &Tolerance) -> Result<ModuleAlgebra, LoadError> {
        match self {
            ModuleSpec::MatrixAlgebra { n } => {
                ModuleAlgebra::matrix_algebra(*n).map_err(|e| schema(path, e))
            }
            ModuleSpec::Functions { points } => {
                ModuleAlgebra::functions(*points).map_err(|e| schema(path, e))
            }
            ModuleSpec::Explicit { algebra, trace } => {
                let alg = algebra.build(&format!("{path}.algebra"))?;
                let d = alg.dim();
                let trace = trace
                    .as_ref()
                    .map(|t| flat_vec(&format!("{path}.trace"), t, d))
                    .transpose()?;
                first_failure(&alg.verify(tol))?;
                ModuleAlgebra::new(alg, trace, tol).map_err(|e| match e {
                    qharm_core::Error::AxiomViolation { axiom, deviation } => {
                        LoadError::Verification {
                            subject: "module trace".into(),
                            axiom,
                            deviation,
                        }
                    }
                    other => schema(path, other),
                })
            }
        }
    }

    fn from_module(m: &ModuleAlgebra) -> Self {
        ModuleSpec::Explicit {
            algebra: AlgebraTensors::from_algebra(m.algebra()),
            trace: Some(m.trace().iter().copied().map(cx).collect()),
        }
    }
}

fn need_functions<'a>(path: &str, ctx: &'a GroupContext) -> Result<&'a FiniteGroup, LoadError> {
    match ctx {
        GroupContext::Functions(g) => Ok(g),
        _ => Err(schema(
            path,
            "this action needs a function-algebra quantum group C(G)",
        )),
    }
}

impl ActionSpec {
    fn build(
        &self,
        path: &str,
        h: &HopfData,
        ctx: &GroupContext,
        tol: &Tolerance,
    ) -> Result<(ActionData, Option<ClassicalData>), LoadError> {
        let bad = |e: qharm_core::Error| schema(path, e);
        match self {
            ActionSpec::Comultiplication {} => {
                let a = ActionData::comultiplication(h).map_err(bad)?;
                let classical = match ctx {
                    GroupContext::Functions(g) => Some(ClassicalData {
                        table: g.table().to_vec(),
                        act: g.table().to_vec(),
                    }),
                    _ => None,
                };
                Ok((a, classical))
            }
            ActionSpec::GroupSet { act } => {
                let g = need_functions(path, ctx)?;
                let a =
                    ActionData::group_set(g, act).map_err(|e| schema(&format!("{path}.act"), e))?;
                let classical = ClassicalData {
                    table: g.table().to_vec(),
                    act: act.clone(),
                };
                Ok((a, Some(classical)))
            }
            ActionSpec::CosetSpace { subgroup } => {
                let g = need_functions(path, ctx)?;
                let mut sorted = subgroup.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.iter().any(|&x| x >= g.order()) || g.generated_subgroup(&sorted) != sorted
                {
                    return Err(schema(&format!("{path}.subgroup"), "not a subgroup"));
                }
                let act = g.coset_action(&sorted);
                let a = ActionData::group_set(g, &act).map_err(bad)?;
                let classical = ClassicalData {
                    table: g.table().to_vec(),
                    act,
                };
                Ok((a, Some(classical)))
            }
            ActionSpec::Automorphisms { module, autos } => {
                let g = need_functions(path, ctx)?;
                let target = module.build(&format!("{path}.module"), tol)?;
                let n = target.dim();
                if autos.len() != g.order() {
                    return Err(schema(
                        &format!("{path}.autos"),
                        format!("expected {} matrices", g.order()),
                    ));
                }
                let mats = autos
                    .iter()
                    .enumerate()
                    .map(|(i, m)| flat_matrix(&format!("{path}.autos[{i}]"), m, n, n))
                    .collect::<Result<Vec<_>, _>>()?;
                let a = ActionData::automorphisms(g, target, &mats, tol)
                    .map_err(|e| schema(&format!("{path}.autos"), e))?;
                Ok((a, None))
            }
            ActionSpec::Conjugation { n, unitaries } => {
                let g = need_functions(path, ctx)?;
                if unitaries.len() != g.order() {
                    return Err(schema(
                        &format!("{path}.unitaries"),
                        format!("expected {} matrices", g.order()),
                    ));
                }
                let mats = unitaries
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        flat_matrix(&format!("{path}.unitaries[{i}]"), m, *n, *n)
                            .map(|u| actions::conjugation_matrix(&u))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let target = ModuleAlgebra::matrix_algebra(*n).map_err(bad)?;
                let a = ActionData::automorphisms(g, target, &mats, tol)
                    .map_err(|e| schema(&format!("{path}.unitaries"), e))?;
                Ok((a, None))
            }
            ActionSpec::Trivial { module } => {
                let target = module.build(&format!("{path}.module"), tol)?;
                Ok((ActionData::trivial(h, target).map_err(bad)?, None))
            }
            ActionSpec::Explicit {
                module,
                tensor,
                classical,
            } => {
                let target = module.build(&format!("{path}.module"), tol)?;
                let n = target.dim();
                let flat = flat_tensor(&format!("{path}.tensor"), tensor, n, h.dim(), n)?;
                let a =
                    ActionData::new(h.clone(), target, flat, ActionKind::Explicit).map_err(bad)?;
                let classical = match classical {
                    None => None,
                    Some(spec) => {
                        let cpath = format!("{path}.classical");
                        let g = FiniteGroup::new(spec.table.clone())
                            .map_err(|e| schema(&format!("{cpath}.table"), e))?;
                        let reference = ActionData::group_set(&g, &spec.act)
                            .map_err(|e| schema(&format!("{cpath}.act"), e))?;
                        if reference.hopf().tensor_deviation(h) > 0.0
                            || actions::tensor_deviation(&reference, &a) > 0.0
                        {
                            return Err(schema(&cpath, "classical data does not reproduce the quantum group and action tensors"));
                        }
                        Some(ClassicalData {
                            table: spec.table.clone(),
                            act: spec.act.clone(),
                        })
                    }
                };
                Ok((a, classical))
            }
        }
    }
}

impl MeasureSpec {
    fn build(&self, path: &str, h: &HopfData, ctx: &GroupContext) -> Result<Vec<C64>, LoadError> {
        let bad = |e: qharm_core::Error| schema(path, e);
        let group_algebra = |what: &str| match ctx {
            GroupContext::GroupAlgebra(g) => Ok(g),
            _ => Err(schema(
                path,
                format!("{what} needs a group-algebra quantum group C[G]"),
            )),
        };
        match self {
            MeasureSpec::Counit {} => Ok(measures::counit(h)),
            MeasureSpec::Haar {} => Ok(measures::haar(h)),
            MeasureSpec::PointMass { index } => measures::point_mass(h, *index).map_err(bad),
            MeasureSpec::UniformOn { subset } => measures::uniform_on(h, subset).map_err(bad),
            MeasureSpec::Indicator { subset } => measures::indicator(h, subset).map_err(bad),
            MeasureSpec::Character { index } => {
                let g = group_algebra("a character")?;
                let chars = g.linear_characters();
                chars.get(*index).cloned().ok_or_else(|| {
                    schema(
                        &format!("{path}.index"),
                        format!("only {} linear characters", chars.len()),
                    )
                })
            }
            MeasureSpec::RegularCharacter {} => {
                group_algebra("the regular character")?;
                measures::point_mass(h, 0).map_err(bad)
            }
            MeasureSpec::Weights { weights } => {
                if weights.len() != h.dim() {
                    return Err(schema(
                        &format!("{path}.weights"),
                        format!("expected {} weights", h.dim()),
                    ));
                }
                measures::check_probability(weights)
                    .map_err(|e| schema(&format!("{path}.weights"), e))?;
                Ok(weights.iter().map(|&w| c(w)).collect())
            }
            MeasureSpec::Functional { values } => {
                flat_vec(&format!("{path}.values"), values, h.dim())
            }
            MeasureSpec::Mixture { parts } => {
                let weights: Vec<f64> = parts.iter().map(|p| p.weight).collect();
                measures::check_probability(&weights)
                    .map_err(|e| schema(&format!("{path}.parts"), e))?;
                let built = parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        Ok((
                            p.weight,
                            p.measure
                                .build(&format!("{path}.parts[{i}].measure"), h, ctx)?,
                        ))
                    })
                    .collect::<Result<Vec<_>, LoadError>>()?;
                measures::convex_combination(&built).map_err(bad)
            }
        }
    }
}

impl ScenarioFile {
    /// Expands directives and verifies every axiom. `base` resolves
    /// relative `load` paths.
    pub fn build(&self, base: &Path, tol: &Tolerance) -> Result<Scenario, LoadError> {
        if self.schema != SCHEMA_VERSION {
            return Err(schema(
                "schema",
                format!(
                    "unsupported version {} (expected {SCHEMA_VERSION})",
                    self.schema
                ),
            ));
        }
        let (h, ctx) = self.quantum_group.build("quantum_group", base, tol)?;
        let (action, classical) = self.action.build("action", &h, &ctx, tol)?;
        let measure = self.measure.build("measure", &h, &ctx)?;
        let mut scenario =
            Scenario::new(self.name.clone(), action, measure).expecting(self.expect.clone());
        scenario.classical = classical;
        for rep in scenario.verify(tol) {
            first_failure(&rep)?;
        }
        Ok(scenario)
    }

    /// The fully expanded form: explicit tensors everywhere.
    pub fn from_scenario(s: &Scenario) -> Self {
        let h = s.action.hopf();
        let n = s.action.target().dim();
        Self {
            schema: SCHEMA_VERSION,
            name: s.name.clone(),
            description: None,
            quantum_group: QuantumGroupSpec::Load {
                path: None,
                data: Some(Box::new(HopfTensors::from_hopf(h))),
            },
            action: ActionSpec::Explicit {
                module: ModuleSpec::from_module(s.action.target()),
                tensor: nest_tensor(s.action.tensor(), n, h.dim(), n),
                classical: s.classical.as_ref().map(|cl| ClassicalSpec {
                    table: cl.table.clone(),
                    act: cl.act.clone(),
                }),
            },
            measure: MeasureSpec::Functional {
                values: s.measure.iter().copied().map(cx).collect(),
            },
            expect: s.expect.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario files always serialize")
    }
}

/// Parses JSON, reporting the failing field path.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, LoadError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(&path, e.into_inner())
    })
}

pub fn read_scenario_file(path: &Path) -> Result<ScenarioFile, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_json(&text)
}

/// Reads, expands and verifies a scenario.
pub fn load_scenario(path: &Path, tol: &Tolerance) -> Result<Scenario, LoadError> {
    let file = read_scenario_file(path)?;
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    file.build(&base, tol)
}

/// Largest entry difference between two scenarios' tensors, or infinity
/// if the shapes differ.
pub fn scenario_deviation(a: &Scenario, b: &Scenario) -> f64 {
    let diff = |x: &[C64], y: &[C64]| {
        if x.len() != y.len() {
            f64::INFINITY
        } else {
            x.iter()
                .zip(y)
                .fold(0.0f64, |m, (p, q)| m.max((p - q).norm()))
        }
    };
    let (ta, tb) = (a.action.target(), b.action.target());
    a.action
        .hopf()
        .tensor_deviation(b.action.hopf())
        .max(actions::tensor_deviation(&a.action, &b.action))
        .max(diff(
            ta.algebra().structure_constants(),
            tb.algebra().structure_constants(),
        ))
        .max(diff(ta.algebra().unit(), tb.algebra().unit()))
        .max(
            ta.algebra()
                .involution()
                .max_abs_diff(tb.algebra().involution()),
        )
        .max(diff(ta.trace(), tb.trace()))
        .max(diff(&a.measure, &b.measure))
}
