//! Coactions `α: N → A ⊗ N` of a finite quantum group on a
//! finite-dimensional *-algebra.
//!
//! The action tensor is `α(f_i) = Σ_{j,k} a[i][j][k] e_j ⊗ f_k`, flattened
//! as `(i·dA + j)·dN + k`. As a matrix, `α` is `(dA·dN) × dN` with column
//! `i` equal to `α(f_i)` in the Kronecker basis `e_j ⊗ f_k ↦ j·dN + k`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Algebra, TensorPair};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::hopf::HopfData;
use crate::numeric::{self, cabs, kron, CMatrix, Tolerance, C64, ONE, ZERO};
use crate::verify::VerificationReport;

/// A finite-dimensional *-algebra together with a faithful tracial state.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleAlgebra {
    algebra: Algebra,
    trace: Vec<C64>,
}

impl ModuleAlgebra {
    /// Uses `trace` when given, otherwise the normalized regular trace
    /// `x ↦ Tr(L_x)/dim`. The trace is checked to be a faithful tracial state.
    pub fn new(algebra: Algebra, trace: Option<Vec<C64>>, tol: &Tolerance) -> Result<Self> {
        let trace = trace.unwrap_or_else(|| algebra.regular_trace());
        let rep = algebra.verify_trace(&trace, tol);
        if let Some(f) = rep.failures().next() {
            return Err(Error::AxiomViolation {
                axiom: f.axiom.clone(),
                deviation: f.deviation,
            });
        }
        Ok(Self { algebra, trace })
    }

    /// `M_n` with the normalized trace.
    pub fn matrix_algebra(n: usize) -> Result<Self> {
        Self::new(Algebra::matrix_algebra(n)?, None, &Tolerance::default())
    }

    /// `C(X)` with the uniform measure.
    pub fn functions(points: usize) -> Result<Self> {
        Self::new(Algebra::functions(points)?, None, &Tolerance::default())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn trace(&self) -> &[C64] {
        &self.trace
    }

    /// Center dimension; `N` is a factor iff it is 1.
    pub fn center_dim(&self, tol: &Tolerance) -> Result<usize> {
        Ok(self.algebra.center_basis(tol)?.len())
    }
}

/// How an action was built; recorded in reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionKind {
    Comultiplication,
    GroupSet {
        act: Vec<Vec<usize>>,
    },
    /// `α(x) = Σ_g δ_g ⊗ α_{g⁻¹}(x)`.
    Automorphisms,
    Trivial,
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionData {
    hopf: HopfData,
    target: ModuleAlgebra,
    tensor: Vec<C64>,
    kind: ActionKind,
}

impl ActionData {
    pub fn new(
        hopf: HopfData,
        target: ModuleAlgebra,
        tensor: Vec<C64>,
        kind: ActionKind,
    ) -> Result<Self> {
        let expected = target.dim() * hopf.dim() * target.dim();
        if tensor.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "action tensor",
                expected,
                found: tensor.len(),
            });
        }
        Ok(Self {
            hopf,
            target,
            tensor,
            kind,
        })
    }

    /// `N = A`, `α = Γ`, with the Haar state as trace.
    pub fn comultiplication(hopf: &HopfData) -> Result<Self> {
        let target = ModuleAlgebra::new(
            hopf.algebra().clone(),
            Some(hopf.haar().to_vec()),
            &Tolerance::default(),
        )?;
        Self::new(
            hopf.clone(),
            target,
            hopf.comult_tensor().to_vec(),
            ActionKind::Comultiplication,
        )
    }

    /// `N = C(X)` with `α(δ_y) = Σ_{g·x = y} δ_g ⊗ δ_x`, i.e. `α(f)(g, x) = f(g·x)`.
    /// `act[g][x]` is `g·x`.
    pub fn group_set(group: &FiniteGroup, act: &[Vec<usize>]) -> Result<Self> {
        let n = check_group_action(group, act)?;
        let hopf = HopfData::function_algebra(group)?;
        let g = group.order();
        let mut tensor = vec![ZERO; n * g * n];
        for (gi, row) in act.iter().enumerate() {
            for (x, &y) in row.iter().enumerate() {
                tensor[(y * g + gi) * n + x] = ONE;
            }
        }
        Self::new(
            hopf,
            ModuleAlgebra::functions(n)?,
            tensor,
            ActionKind::GroupSet { act: act.to_vec() },
        )
    }

    /// `α(x) = Σ_g δ_g ⊗ α_{g⁻¹}(x)` for a homomorphism `g ↦ α_g` into
    /// *-automorphisms of `N`, given as coordinate matrices.
    pub fn automorphisms(
        group: &FiniteGroup,
        target: ModuleAlgebra,
        autos: &[CMatrix],
        tol: &Tolerance,
    ) -> Result<Self> {
        check_automorphisms(group, target.algebra(), autos, tol)?;
        let hopf = HopfData::function_algebra(group)?;
        let g = group.order();
        let n = target.dim();
        let mut tensor = vec![ZERO; n * g * n];
        for i in 0..n {
            for gi in 0..g {
                let m = &autos[group.inv(gi)];
                for k in 0..n {
                    tensor[(i * g + gi) * n + k] = m[(k, i)];
                }
            }
        }
        Self::new(hopf, target, tensor, ActionKind::Automorphisms)
    }

    /// `α(x) = 1 ⊗ x`.
    pub fn trivial(hopf: &HopfData, target: ModuleAlgebra) -> Result<Self> {
        let a = hopf.dim();
        let n = target.dim();
        let mut tensor = vec![ZERO; n * a * n];
        for i in 0..n {
            for (j, u) in hopf.unit().iter().enumerate() {
                tensor[(i * a + j) * n + i] = *u;
            }
        }
        Self::new(hopf.clone(), target, tensor, ActionKind::Trivial)
    }

    pub fn hopf(&self) -> &HopfData {
        &self.hopf
    }

    pub fn target(&self) -> &ModuleAlgebra {
        &self.target
    }

    pub fn tensor(&self) -> &[C64] {
        &self.tensor
    }

    pub fn kind(&self) -> &ActionKind {
        &self.kind
    }

    /// `α` as a `(dA·dN) × dN` matrix.
    pub fn matrix(&self) -> CMatrix {
        let a = self.hopf.dim();
        let n = self.target.dim();
        CMatrix::from_fn(a * n, n, |jk, i| self.tensor[i * a * n + jk])
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matrix()
            .matvec(x)
            .expect("dimension checked at construction")
    }

    /// `Φ^μ_α = (μ ⊗ ι)α` on `N`.
    pub fn markov_matrix(&self, mu: &[C64]) -> CMatrix {
        let n = self.target.dim();
        kron(&CMatrix::row_vector(mu), &CMatrix::identity(n))
            .matmul(&self.matrix())
            .expect("dimensions checked")
    }

    /// `φ_ω = (ι ⊗ ω)α: N → A`.
    pub fn orbit_map(&self, omega: &[C64]) -> CMatrix {
        let a = self.hopf.dim();
        kron(&CMatrix::identity(a), &CMatrix::row_vector(omega))
            .matmul(&self.matrix())
            .expect("dimensions checked")
    }

    /// Copy with one tensor entry shifted.
    pub fn with_corrupted_entry(&self, index: usize, delta: C64) -> Self {
        let mut out = self.clone();
        out.tensor[index] += delta;
        out
    }

    /// Checks the *-homomorphism, injectivity and coaction axioms.
    pub fn verify(&self, tol: &Tolerance) -> VerificationReport {
        let eps = tol.eps_compare;
        let a = self.hopf.dim();
        let n = self.target.dim();
        let na = self.target.algebra();
        let mut rep = VerificationReport::new("action");
        rep.extend(na.verify(tol));
        rep.extend(na.verify_trace(self.target.trace(), tol));

        let alpha = self.matrix();
        let images = alpha.columns();
        let tp = TensorPair::new(self.hopf.algebra(), na);
        let mut mult = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let lhs = alpha.matvec(na.basis_product(i, j)).expect("square");
                let rhs = tp.product(&images[i], &images[j]);
                mult = mult.max(numeric::vec_max_abs(&numeric::vec_sub(&lhs, &rhs)));
            }
        }
        rep.record("action_multiplicative", mult, eps);
        let mut star = 0.0f64;
        for (i, img) in images.iter().enumerate() {
            let lhs = alpha.matvec(&na.star(&na.basis_vector(i))).expect("square");
            star = star.max(numeric::vec_max_abs(&numeric::vec_sub(&lhs, &tp.star(img))));
        }
        rep.record("action_star", star, eps);
        let unit = alpha.matvec(na.unit()).expect("square");
        rep.record(
            "action_unital",
            numeric::vec_max_abs(&numeric::vec_sub(&unit, &tp.unit())),
            eps,
        );
        let rank = numeric::rank(&alpha, tol);
        rep.record("action_injective", (n - rank) as f64, 0.0);

        let gamma = self.hopf.comult_matrix();
        let lhs = kron(&gamma, &CMatrix::identity(n)).matmul(&alpha);
        let rhs = kron(&CMatrix::identity(a), &alpha).matmul(&alpha);
        let coaction = match (lhs, rhs) {
            (Ok(l), Ok(r)) => l.max_abs_diff(&r),
            _ => f64::INFINITY,
        };
        rep.record("coaction_identity", coaction, eps);
        rep
    }

    /// Orthonormal basis of `N^α = {x : α(x) = 1 ⊗ x}`.
    pub fn fixed_point_algebra(&self, tol: &Tolerance) -> Result<Vec<Vec<C64>>> {
        let n = self.target.dim();
        let embed = kron(
            &CMatrix::column_vector(self.hopf.unit()),
            &CMatrix::identity(n),
        );
        numeric::kernel_basis(&self.matrix().sub(&embed)?, tol)
    }

    /// Largest residual of products and adjoints of fixed-point basis
    /// elements from the fixed-point span.
    pub fn fixed_point_closure_residual(&self, basis: &[Vec<C64>]) -> f64 {
        subalgebra_residual(self.target.algebra(), basis)
    }

    pub fn is_ergodic(&self, tol: &Tolerance) -> Result<bool> {
        Ok(self.fixed_point_algebra(tol)?.len() == 1)
    }
}

/// How far `span(basis)` is from being closed under product and adjoint.
pub fn subalgebra_residual(alg: &Algebra, basis: &[Vec<C64>]) -> f64 {
    let mut worst = numeric::residual_from_span(alg.unit(), basis);
    for x in basis {
        worst = worst.max(numeric::residual_from_span(&alg.star(x), basis));
        for y in basis {
            worst = worst.max(numeric::residual_from_span(&alg.product(x, y), basis));
        }
    }
    worst
}

/// Validates `act[g][x] = g·x`; returns `|X|`.
pub fn check_group_action(group: &FiniteGroup, act: &[Vec<usize>]) -> Result<usize> {
    let g = group.order();
    if act.len() != g {
        return Err(Error::NotAGroupAction(format!(
            "{} rows for a group of order {g}",
            act.len()
        )));
    }
    let n = act[0].len();
    if n == 0 {
        return Err(Error::NotAGroupAction("empty set".into()));
    }
    for (gi, row) in act.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotAGroupAction(format!(
                "row {gi} has length {}",
                row.len()
            )));
        }
        if let Some(&y) = row.iter().find(|&&y| y >= n) {
            return Err(Error::NotAGroupAction(format!("point {y} out of range")));
        }
    }
    if (0..n).any(|x| act[0][x] != x) {
        return Err(Error::NotAGroupAction(
            "identity does not act trivially".into(),
        ));
    }
    for a in 0..g {
        for b in 0..g {
            for x in 0..n {
                if act[group.mul(a, b)][x] != act[a][act[b][x]] {
                    return Err(Error::NotAGroupAction(format!(
                        "({a}·{b})·{x} ≠ {a}·({b}·{x})"
                    )));
                }
            }
        }
    }
    Ok(n)
}

fn check_automorphisms(
    group: &FiniteGroup,
    alg: &Algebra,
    autos: &[CMatrix],
    tol: &Tolerance,
) -> Result<()> {
    let n = alg.dim();
    let eps = tol.eps_compare;
    if autos.len() != group.order() {
        return Err(Error::NotAGroupAction(format!(
            "{} automorphisms for a group of order {}",
            autos.len(),
            group.order()
        )));
    }
    for (gi, m) in autos.iter().enumerate() {
        if m.rows() != n || m.cols() != n {
            return Err(Error::NotAGroupAction(format!(
                "automorphism {gi} is not {n}x{n}"
            )));
        }
        let u = m.matvec(alg.unit())?;
        if numeric::vec_max_abs(&numeric::vec_sub(&u, alg.unit())) > eps {
            return Err(Error::NotAGroupAction(format!(
                "automorphism {gi} is not unital"
            )));
        }
        let images = m.columns();
        for i in 0..n {
            let s = m.matvec(&alg.star(&alg.basis_vector(i)))?;
            if numeric::vec_max_abs(&numeric::vec_sub(&s, &alg.star(&images[i]))) > eps {
                return Err(Error::NotAGroupAction(format!(
                    "automorphism {gi} does not preserve *"
                )));
            }
            for j in 0..n {
                let lhs = m.matvec(alg.basis_product(i, j))?;
                let rhs = alg.product(&images[i], &images[j]);
                if numeric::vec_max_abs(&numeric::vec_sub(&lhs, &rhs)) > eps {
                    return Err(Error::NotAGroupAction(format!(
                        "automorphism {gi} is not multiplicative"
                    )));
                }
            }
        }
    }
    if autos[0].max_abs_diff(&CMatrix::identity(n)) > eps {
        return Err(Error::NotAGroupAction(
            "identity does not act trivially".into(),
        ));
    }
    for a in 0..group.order() {
        for b in 0..group.order() {
            let prod = autos[a].matmul(&autos[b])?;
            if prod.max_abs_diff(&autos[group.mul(a, b)]) > eps {
                return Err(Error::NotAGroupAction(format!("α_{a}α_{b} ≠ α_({a}·{b})")));
            }
        }
    }
    Ok(())
}

/// Matrix of `x ↦ u x u*` on `M_n` in the matrix-unit basis `E_ab ↦ a·n + b`.
pub fn conjugation_matrix(u: &CMatrix) -> CMatrix {
    let n = u.rows();
    CMatrix::from_fn(n * n, n * n, |cd, ab| {
        let (cc, dd) = (cd / n, cd % n);
        let (a, b) = (ab / n, ab % n);
        u[(cc, a)] * u[(dd, b)].conj()
    })
}

/// Matrix of the automorphism of `C(X)` induced by a permutation:
/// `(α f)(x) = f(σ⁻¹ x)`, so `δ_x ↦ δ_{σ(x)}`.
pub fn permutation_matrix(sigma: &[usize]) -> CMatrix {
    let n = sigma.len();
    CMatrix::from_fn(n, n, |r, col| if sigma[col] == r { ONE } else { ZERO })
}

/// Pauli matrices `X^a Z^b`, indexed by `2a + b` to match `Z2×Z2`.
pub fn pauli_unitaries() -> Vec<CMatrix> {
    let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let z = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let id = CMatrix::identity(2);
    let xz = x.matmul(&z).expect("2x2");
    vec![id, z, x, xz]
}

/// The Pauli action of `Z2×Z2` on `M_2` by conjugation.
pub fn pauli_action(tol: &Tolerance) -> Result<ActionData> {
    let group = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    let autos: Vec<CMatrix> = pauli_unitaries().iter().map(conjugation_matrix).collect();
    ActionData::automorphisms(&group, ModuleAlgebra::matrix_algebra(2)?, &autos, tol)
}

/// Largest entry difference between two action tensors.
pub fn tensor_deviation(a: &ActionData, b: &ActionData) -> f64 {
    if a.tensor.len() != b.tensor.len() {
        return f64::INFINITY;
    }
    a.tensor
        .iter()
        .zip(&b.tensor)
        .fold(0.0f64, |m, (x, y)| m.max(cabs(x - y)))
}

/// A short human-readable description of the construction.
pub fn describe(kind: &ActionKind) -> String {
    match kind {
        ActionKind::Comultiplication => "comultiplication".into(),
        ActionKind::GroupSet { act } => {
            format!("group set on {} points", act.first().map_or(0, Vec::len))
        }
        ActionKind::Automorphisms => "automorphisms, x ↦ Σ_g δ_g ⊗ α_{g⁻¹}(x)".into(),
        ActionKind::Trivial => "trivial".into(),
        ActionKind::Explicit => "explicit tensor".into(),
    }
}
