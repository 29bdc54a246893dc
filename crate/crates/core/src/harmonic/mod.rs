//! Markov operators `Φ^μ_α = (μ⊗ι)α`, their harmonic spaces, the
//! Cesàro projection onto them and the Choi–Effros product, together with
//! the orbit maps `φ_ω = (ι⊗ω)α` and invariant states.

mod checks;

pub use checks::{Analysis, TheoremCheck, Verdict};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::{ActionData, ModuleAlgebra};
use crate::algebra::{Algebra, Gns};
use crate::error::{Error, Result};
use crate::hopf::HopfData;
use crate::measures;
use crate::numeric::{self, c, kron, CMatrix, Tolerance, C64, I, ONE, ZERO};
use crate::verify::VerificationReport;

/// Threshold for the intertwining relation `αΦ^μ_α = (Φ^μ⊗ι)α` and the
/// orbit-map identities.
pub const IDENTITY_THRESHOLD: f64 = 1e-9;
/// Threshold for the Choi–Effros algebra axioms.
pub const CHOI_EFFROS_THRESHOLD: f64 = 1e-9;
/// Mutual containment threshold when comparing two subspaces.
pub const SUBSPACE_THRESHOLD: f64 = 1e-8;
/// Threshold for `‖φ_ω(1−e)‖` and for invariance residuals.
pub const WITNESS_THRESHOLD: f64 = 1e-10;

/// `Φ^μ = (μ⊗ι)Γ` on `A`.
pub fn left_convolution_matrix(h: &HopfData, mu: &[C64]) -> CMatrix {
    kron(&CMatrix::row_vector(mu), &CMatrix::identity(h.dim()))
        .matmul(&h.comult_matrix())
        .expect("dimensions checked")
}

/// `(ι⊗μ)Γ` on `A`.
pub fn right_convolution_matrix(h: &HopfData, mu: &[C64]) -> CMatrix {
    kron(&CMatrix::identity(h.dim()), &CMatrix::row_vector(mu))
        .matmul(&h.comult_matrix())
        .expect("dimensions checked")
}

/// `A` viewed as a module algebra with its Haar trace.
pub fn hopf_as_module(h: &HopfData, tol: &Tolerance) -> Result<ModuleAlgebra> {
    ModuleAlgebra::new(h.algebra().clone(), Some(h.haar().to_vec()), tol)
}

/// Smallest eigenvalue of the (symmetrized) Choi matrix of `map`.
pub fn choi_min_eigenvalue(gns: &Gns, map: &CMatrix, tol: &Tolerance) -> Result<f64> {
    let choi = gns.choi(map)?;
    let sym = choi.add(&choi.adjoint())?.scale(c(0.5));
    numeric::min_eigenvalue(&sym, tol)
}

#[derive(Debug, Clone)]
pub struct MarkovOperator {
    matrix: CMatrix,
    group_matrix: CMatrix,
    is_markov: bool,
    report: VerificationReport,
}

impl MarkovOperator {
    /// Builds `Φ^μ_α` and checks unitality, the intertwining relation and
    /// complete positivity. A signed `μ` still yields an operator, flagged
    /// as non-Markov.
    pub fn new(action: &ActionData, mu: &[C64], tol: &Tolerance) -> Result<Self> {
        let h = action.hopf();
        if mu.len() != h.dim() {
            return Err(Error::DimensionMismatch {
                context: "measure",
                expected: h.dim(),
                found: mu.len(),
            });
        }
        let target = action.target();
        let n = target.dim();
        let matrix = action.markov_matrix(mu);
        let group_matrix = left_convolution_matrix(h, mu);
        let is_markov = measures::is_state(h, mu, tol);
        let mut report = VerificationReport::new("markov operator");
        let u = matrix.matvec(target.algebra().unit())?;
        report.record(
            "markov_unital",
            numeric::vec_max_abs(&numeric::vec_sub(&u, target.algebra().unit())),
            tol.eps_compare,
        );
        let alpha = action.matrix();
        let lhs = alpha.matmul(&matrix)?;
        let rhs = kron(&group_matrix, &CMatrix::identity(n)).matmul(&alpha)?;
        report.record(
            "intertwining_relation",
            lhs.max_abs_diff(&rhs),
            IDENTITY_THRESHOLD,
        );
        let gns = Gns::new(target.algebra(), target.trace(), tol)?;
        let min = choi_min_eigenvalue(&gns, &matrix, tol)?;
        report.record("markov_completely_positive", (-min).max(0.0), tol.eps_psd);
        Ok(Self {
            matrix,
            group_matrix,
            is_markov,
            report,
        })
    }

    /// `Φ^μ_α` on `N`.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Φ^μ` on `A`.
    pub fn group_matrix(&self) -> &CMatrix {
        &self.group_matrix
    }

    pub fn is_markov(&self) -> bool {
        self.is_markov
    }

    pub fn report(&self) -> &VerificationReport {
        &self.report
    }
}

/// The fixed points of a Markov map with the Cesàro projection and the
/// Choi–Effros product `x∘y = E(xy)`.
#[derive(Debug, Clone)]
pub struct HarmonicSpace {
    basis: Vec<Vec<C64>>,
    projection: CMatrix,
    table: Vec<C64>,
    subalgebra_residual: f64,
    report: VerificationReport,
}

impl HarmonicSpace {
    pub fn new(phi: &CMatrix, target: &ModuleAlgebra, tol: &Tolerance) -> Result<Self> {
        let alg = target.algebra();
        let n = target.dim();
        let gen = CMatrix::identity(n).sub(phi)?;
        let basis = numeric::kernel_basis(&gen, tol)?;
        let projection = numeric::spectral_projection_at_one(phi, tol)?;
        let hd = basis.len();
        let eps = tol.eps_compare;
        let mut report = VerificationReport::new("harmonic space");

        report.record(
            "harmonic_contains_unit",
            numeric::residual_from_span(alg.unit(), &basis),
            eps,
        );
        let adj = basis
            .iter()
            .map(|x| numeric::residual_from_span(&alg.star(x), &basis))
            .fold(0.0f64, f64::max);
        report.record("harmonic_adjoint_closed", adj, eps);

        let e2 = projection.matmul(&projection)?.max_abs_diff(&projection);
        report.record("projection_idempotent", e2, eps);
        let eu = projection.matvec(alg.unit())?;
        report.record(
            "projection_unital",
            numeric::vec_max_abs(&numeric::vec_sub(&eu, alg.unit())),
            eps,
        );
        let inv = phi
            .matmul(&projection)?
            .max_abs_diff(&projection)
            .max(projection.matmul(phi)?.max_abs_diff(&projection));
        report.record("projection_invariance", inv, eps);
        let fixes = basis
            .iter()
            .map(|x| {
                let ex = projection.matvec(x).expect("square");
                numeric::vec_max_abs(&numeric::vec_sub(&ex, x))
            })
            .fold(0.0f64, f64::max);
        report.record("projection_fixes_harmonic", fixes, eps);
        let range = projection
            .columns()
            .iter()
            .map(|col| numeric::residual_from_span(col, &basis))
            .fold(0.0f64, f64::max);
        report.record("projection_range", range, eps);
        let gns = Gns::new(alg, target.trace(), tol)?;
        let min = choi_min_eigenvalue(&gns, &projection, tol)?;
        report.record(
            "projection_completely_positive",
            (-min).max(0.0),
            tol.eps_psd,
        );

        // Choi–Effros structure constants over the harmonic basis.
        let mut table = vec![ZERO; hd * hd * hd];
        let mut products = Vec::with_capacity(hd * hd);
        for i in 0..hd {
            for j in 0..hd {
                let e = projection.matvec(&alg.product(&basis[i], &basis[j]))?;
                let coords = numeric::coordinates_in(&e, &basis);
                table[(i * hd + j) * hd..(i * hd + j + 1) * hd].copy_from_slice(&coords);
                products.push(e);
            }
        }
        let expand = |coords: &[C64]| -> Vec<C64> {
            let mut v = vec![ZERO; n];
            for (cf, b) in coords.iter().zip(&basis) {
                for (o, x) in v.iter_mut().zip(b) {
                    *o += cf * x;
                }
            }
            v
        };
        let mut assoc = 0.0f64;
        for i in 0..hd {
            for j in 0..hd {
                for k in 0..hd {
                    let mut left = vec![ZERO; hd];
                    let mut right = vec![ZERO; hd];
                    for l in 0..hd {
                        let cij = table[(i * hd + j) * hd + l];
                        let cjk = table[(j * hd + k) * hd + l];
                        for m in 0..hd {
                            left[m] += cij * table[(l * hd + k) * hd + m];
                            right[m] += cjk * table[(i * hd + l) * hd + m];
                        }
                    }
                    assoc = assoc.max(numeric::vec_max_abs(&numeric::vec_sub(
                        &expand(&left),
                        &expand(&right),
                    )));
                }
            }
        }
        report.record("choi_effros_associative", assoc, CHOI_EFFROS_THRESHOLD);
        let unit = basis
            .iter()
            .map(|x| {
                let ux = projection
                    .matvec(&alg.product(alg.unit(), x))
                    .expect("square");
                let xu = projection
                    .matvec(&alg.product(x, alg.unit()))
                    .expect("square");
                numeric::vec_max_abs(&numeric::vec_sub(&ux, x))
                    .max(numeric::vec_max_abs(&numeric::vec_sub(&xu, x)))
            })
            .fold(0.0f64, f64::max);
        report.record("choi_effros_unit", unit, CHOI_EFFROS_THRESHOLD);
        let mut adjoint = 0.0f64;
        for i in 0..hd {
            for j in 0..hd {
                let lhs = alg.star(&products[i * hd + j]);
                let rhs =
                    projection.matvec(&alg.product(&alg.star(&basis[j]), &alg.star(&basis[i])))?;
                adjoint = adjoint.max(numeric::vec_max_abs(&numeric::vec_sub(&lhs, &rhs)));
            }
        }
        report.record("choi_effros_adjoint", adjoint, CHOI_EFFROS_THRESHOLD);

        let subalgebra_residual = crate::actions::subalgebra_residual(alg, &basis);
        if subalgebra_residual <= eps {
            let mut dev = 0.0f64;
            for i in 0..hd {
                for j in 0..hd {
                    let ambient = alg.product(&basis[i], &basis[j]);
                    dev = dev.max(numeric::vec_max_abs(&numeric::vec_sub(
                        &products[i * hd + j],
                        &ambient,
                    )));
                }
            }
            report.record("choi_effros_matches_product", dev, CHOI_EFFROS_THRESHOLD);
        }
        Ok(Self {
            basis,
            projection,
            table,
            subalgebra_residual,
            report,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal basis (standard inner product on coordinates).
    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }

    /// The Cesàro projection `E` onto the harmonic space.
    pub fn projection(&self) -> &CMatrix {
        &self.projection
    }

    /// `c[i][j][k]` with `x_i∘x_j = Σ_k c[i][j][k] x_k`.
    pub fn choi_effros_table(&self) -> &[C64] {
        &self.table
    }

    /// Distance of the span from being closed under the ambient product.
    pub fn subalgebra_residual(&self) -> f64 {
        self.subalgebra_residual
    }

    pub fn is_subalgebra(&self, tol: &Tolerance) -> bool {
        self.subalgebra_residual <= tol.eps_compare
    }

    /// Largest deviation of `x∘y` from `xy` over basis pairs.
    pub fn product_deviation(&self, alg: &Algebra) -> f64 {
        let hd = self.dim();
        let mut dev = 0.0f64;
        for i in 0..hd {
            for j in 0..hd {
                let xy = alg.product(&self.basis[i], &self.basis[j]);
                let e = self.projection.matvec(&xy).expect("square");
                dev = dev.max(numeric::vec_max_abs(&numeric::vec_sub(&e, &xy)));
            }
        }
        dev
    }

    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    /// Operator-norm distance between `E` and `(1/n) Σ_{k≤n} Φ^k`.
    pub fn cesaro_deviation(&self, phi: &CMatrix, n: u64) -> Result<f64> {
        Ok(numeric::cesaro_average(phi, n)?
            .sub(&self.projection)?
            .op_norm())
    }
}

/// `ω ∘ Φ^μ_α`.
pub fn predual_convolve(action: &ActionData, mu: &[C64], omega: &[C64]) -> Result<Vec<C64>> {
    if omega.len() != action.target().dim() {
        return Err(Error::DimensionMismatch {
            context: "functional on N",
            expected: action.target().dim(),
            found: omega.len(),
        });
    }
    let phi = action.markov_matrix(mu);
    Ok(CMatrix::row_vector(omega).matmul(&phi)?.as_slice().to_vec())
}

/// Deviations of the orbit-map identities for one `ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitIdentities {
    /// `‖(ι⊗φ_ω)α − Γφ_ω‖`.
    pub coaction: f64,
    /// `‖Φ^μ φ_ω − φ_ω Φ^μ_α‖` with `Φ^μ = (μ⊗ι)Γ`.
    pub left: f64,
    /// `‖(ι⊗μ)Γ φ_ω − φ_{μ⋆ω}‖` with `μ⋆ω = ω∘Φ^μ_α`.
    pub right: f64,
    /// `‖Φ^μ φ_ω − φ_{μ⋆ω}‖`, which only vanishes in general when left and
    /// right convolution by `μ` agree.
    pub mixed: f64,
}

impl OrbitIdentities {
    pub fn worst(&self) -> f64 {
        self.coaction.max(self.left).max(self.right)
    }
}

pub fn orbit_identities(action: &ActionData, mu: &[C64], omega: &[C64]) -> Result<OrbitIdentities> {
    let h = action.hopf();
    let a = h.dim();
    let phi_omega = action.orbit_map(omega);
    let alpha = action.matrix();
    let gamma = h.comult_matrix();
    let coaction = kron(&CMatrix::identity(a), &phi_omega)
        .matmul(&alpha)?
        .max_abs_diff(&gamma.matmul(&phi_omega)?);
    let left_conv = left_convolution_matrix(h, mu);
    let lhs = left_conv.matmul(&phi_omega)?;
    let left = lhs.max_abs_diff(&phi_omega.matmul(&action.markov_matrix(mu))?);
    let moved = action.orbit_map(&predual_convolve(action, mu, omega)?);
    let right = right_convolution_matrix(h, mu)
        .matmul(&phi_omega)?
        .max_abs_diff(&moved);
    let mixed = lhs.max_abs_diff(&moved);
    Ok(OrbitIdentities {
        coaction,
        left,
        right,
        mixed,
    })
}

/// Outcome of testing a positive map for faithfulness.
#[derive(Debug, Clone, PartialEq)]
pub struct Faithfulness {
    pub faithful: bool,
    /// Rank of the density of `tr∘T` (full rank iff faithful).
    pub support_rank: usize,
    pub dim: usize,
}

/// Elements `f_i* f_i`, `(f_i + f_j)*(f_i + f_j)` and
/// `(f_i + i f_j)*(f_i + i f_j)`; they are positive and span the algebra.
fn positive_spanning_family(alg: &Algebra) -> Vec<Vec<C64>> {
    let n = alg.dim();
    let sq = |x: &[C64]| alg.product(&alg.star(x), x);
    let mut out = Vec::new();
    for i in 0..n {
        let fi = alg.basis_vector(i);
        out.push(sq(&fi));
        for j in i + 1..n {
            let fj = alg.basis_vector(j);
            out.push(sq(&numeric::vec_add(&fi, &fj)));
            out.push(sq(&numeric::vec_add(&fi, &numeric::vec_scale(&fj, I))));
        }
    }
    out
}

/// Decides whether a positive map `T: N → A` is faithful, via full
/// support of `tr_A ∘ T` (`T(x) = 0` for `x ≥ 0` forces `tr_A(T(x)) = 0`,
/// and conversely because `tr_A` is faithful). Positivity is checked on a
/// positive spanning family first.
pub fn is_faithful_positive_map(
    map: &CMatrix,
    source: &ModuleAlgebra,
    target: &ModuleAlgebra,
    tol: &Tolerance,
) -> Result<Faithfulness> {
    let n = source.dim();
    if map.rows() != target.dim() || map.cols() != n {
        return Err(Error::DimensionMismatch {
            context: "positive map",
            expected: target.dim() * n,
            found: map.rows() * map.cols(),
        });
    }
    let tgns = Gns::new(target.algebra(), target.trace(), tol)?;
    for x in positive_spanning_family(source.algebra()) {
        let y = map.matvec(&x)?;
        match tgns.is_positive(target.algebra(), &y, tol) {
            Ok(true) => {}
            _ => {
                return Err(Error::MapNotPositive(
                    "image of a positive element is not positive".into(),
                ))
            }
        }
    }
    let functional = CMatrix::row_vector(target.trace())
        .matmul(map)?
        .as_slice()
        .to_vec();
    let rho = source.algebra().density(source.trace(), &functional)?;
    let sgns = Gns::new(source.algebra(), source.trace(), tol)?;
    let support_rank = sgns.rank(&rho, tol);
    Ok(Faithfulness {
        faithful: support_rank == n,
        support_rank,
        dim: n,
    })
}

/// Normalized functional `τ(ρ ·)/τ(ρ)` for a positive `ρ`.
pub fn state_from_density(target: &ModuleAlgebra, rho: &[C64]) -> Option<Vec<C64>> {
    let f = target
        .algebra()
        .functional_from_density(target.trace(), rho);
    let mass = Algebra::apply(&f, target.algebra().unit());
    if mass.norm() <= 1e-12 {
        return None;
    }
    Some(numeric::vec_scale(&f, ONE / mass))
}

/// States `τ(f_i* f_i ·)` (normalized) for each basis element.
pub fn basis_states(target: &ModuleAlgebra) -> Vec<Vec<C64>> {
    let alg = target.algebra();
    (0..alg.dim())
        .filter_map(|i| {
            let f = alg.basis_vector(i);
            state_from_density(target, &alg.product(&alg.star(&f), &f))
        })
        .collect()
}

/// `count` states `τ(x*x ·)/τ(x*x)` with `x` drawn uniformly from the unit cube.
pub fn random_states(target: &ModuleAlgebra, count: usize, seed: u64) -> Vec<Vec<C64>> {
    let alg = target.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: Vec<C64> = (0..alg.dim())
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Some(s) = state_from_density(target, &alg.product(&alg.star(&x), &x)) {
            out.push(s);
        }
    }
    out
}

/// Solution space of `(ω⊗Ω)α = ω(1)Ω` for all `ω`.
pub fn invariant_functionals(action: &ActionData, tol: &Tolerance) -> Result<Vec<Vec<C64>>> {
    numeric::kernel_basis(&invariance_system(action), tol)
}

/// Rows `(m, j)`: `Σ_k a[m][j][k] Ω_k − 1_j Ω_m`.
fn invariance_system(action: &ActionData) -> CMatrix {
    let a = action.hopf().dim();
    let n = action.target().dim();
    let t = action.tensor();
    let unit = action.hopf().unit();
    let mut sys = CMatrix::zeros(n * a, n);
    for m in 0..n {
        for j in 0..a {
            let row = m * a + j;
            for k in 0..n {
                sys[(row, k)] = t[(m * a + j) * n + k];
            }
            sys[(row, m)] -= unit[j];
        }
    }
    sys
}

/// `max |(e_j^*⊗Ω)α(f_m) − 1_j Ω(f_m)|`.
pub fn invariance_residual(action: &ActionData, omega: &[C64]) -> f64 {
    let r = invariance_system(action)
        .matvec(omega)
        .expect("dimensions checked");
    numeric::vec_max_abs(&r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantState {
    pub state: Vec<C64>,
    pub source: String,
    pub residual: f64,
}

/// Looks for an invariant state: first the normalized projection of the
/// faithful trace onto the invariant functionals, then each basis
/// functional of that space. `None` is inconclusive.
pub fn find_invariant_state(
    action: &ActionData,
    tol: &Tolerance,
) -> Result<Option<InvariantState>> {
    let basis = invariant_functionals(action, tol)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let n = action.target().dim();
    let alg = action.target().algebra();
    let p = numeric::projector(&basis, n);
    let mut candidates: Vec<(String, Vec<C64>)> = vec![(
        String::from("projected trace"),
        p.matvec(action.target().trace())?,
    )];
    for (i, b) in basis.iter().enumerate() {
        candidates.push((alloc::format!("invariant basis functional {i}"), b.clone()));
    }
    for (source, v) in candidates {
        let mass = Algebra::apply(&v, alg.unit());
        if mass.norm() <= tol.eps_compare {
            continue;
        }
        let state = numeric::vec_scale(&v, ONE / mass);
        if alg.check_state(&state, tol).passed() {
            let residual = invariance_residual(action, &state);
            return Ok(Some(InvariantState {
                state,
                source,
                residual,
            }));
        }
    }
    Ok(None)
}

/// A projection in `N^α` and a state supported on it.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantProjectionWitness {
    pub projection: Vec<C64>,
    pub state: Vec<C64>,
    /// `‖φ_ω(1−e)‖`.
    pub residual: f64,
    /// `max(‖e² − e‖, ‖e* − e‖, ‖α(e) − 1⊗e‖)`.
    pub projection_defect: f64,
    pub orbit_map_faithful: bool,
}

/// For a non-ergodic action: picks a non-scalar self-adjoint `y ∈ N^α`,
/// takes the spectral projection `e` of its largest eigenvalue (a
/// polynomial in `y`, hence in `N^α`) and the state `ω = τ(e·)/τ(e)`.
pub fn invariant_projection_witness(
    action: &ActionData,
    tol: &Tolerance,
) -> Result<Option<InvariantProjectionWitness>> {
    let target = action.target();
    let alg = target.algebra();
    let fixed = action.fixed_point_algebra(tol)?;
    let mut best: Option<(f64, Vec<C64>)> = None;
    for b in &fixed {
        let bs = alg.star(b);
        for y in [
            numeric::vec_add(b, &bs),
            numeric::vec_scale(&numeric::vec_sub(b, &bs), I),
        ] {
            let t = Algebra::apply(target.trace(), &y);
            let y = numeric::vec_sub(&y, &numeric::vec_scale(alg.unit(), t));
            let size = numeric::vec_norm(&y);
            if size > best.as_ref().map_or(1e-6, |(s, _)| *s) {
                best = Some((size, y));
            }
        }
    }
    let Some((_, y)) = best else {
        return Ok(None);
    };
    let gns = Gns::new(alg, target.trace(), tol)?;
    let py = gns.represent(&y);
    let py = py.add(&py.adjoint())?.scale(c(0.5));
    let eig = numeric::eigh(&py, tol)?;
    let spread = eig
        .values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let mut distinct: Vec<f64> = Vec::new();
    for &v in &eig.values {
        if distinct.last().is_none_or(|&l| v - l > 1e-6 * spread) {
            distinct.push(v);
        }
    }
    let top = *distinct.last().expect("nonempty spectrum");
    let mut e = alg.unit().to_vec();
    for &other in &distinct[..distinct.len() - 1] {
        let factor = numeric::vec_scale(
            &numeric::vec_sub(&y, &numeric::vec_scale(alg.unit(), c(other))),
            c(1.0 / (top - other)),
        );
        e = alg.product(&e, &factor);
    }
    let idem = numeric::vec_max_abs(&numeric::vec_sub(&alg.product(&e, &e), &e));
    let sa = alg.self_adjoint_deviation(&e);
    let h = action.hopf();
    let embed = kron(
        &CMatrix::column_vector(h.unit()),
        &CMatrix::column_vector(&e),
    );
    let fixed_dev = numeric::vec_max_abs(&numeric::vec_sub(&action.apply(&e), embed.as_slice()));
    let Some(state) = state_from_density(target, &e) else {
        return Ok(None);
    };
    let one_minus_e = numeric::vec_sub(alg.unit(), &e);
    let image = action.orbit_map(&state).matvec(&one_minus_e)?;
    let residual = h.gns(tol)?.norm(&image);
    let a_mod = hopf_as_module(h, tol)?;
    let orbit_map_faithful =
        is_faithful_positive_map(&action.orbit_map(&state), target, &a_mod, tol)?.faithful;
    Ok(Some(InvariantProjectionWitness {
        projection: e,
        state,
        residual,
        projection_defect: idem.max(sa).max(fixed_dev),
        orbit_map_faithful,
    }))
}

/// Orthonormal basis of `{x ∈ H : x*x, xx* ∈ H}`, computed as the linear
/// space `{x ∈ H : Φ(yx) = Φ(y)x, Φ(xy) = xΦ(y) for all y}` (for fixed
/// points of a unital CP map both descriptions agree).
pub fn multiplicative_domain(
    alg: &Algebra,
    phi: &CMatrix,
    harmonic: &[Vec<C64>],
    tol: &Tolerance,
) -> Result<Vec<Vec<C64>>> {
    let n = alg.dim();
    let hd = harmonic.len();
    if hd == 0 {
        return Ok(Vec::new());
    }
    let images: Vec<Vec<C64>> = phi.columns();
    let mut sys = CMatrix::zeros(2 * n * n, hd);
    for (l, x) in harmonic.iter().enumerate() {
        for j in 0..n {
            let f = alg.basis_vector(j);
            let a = numeric::vec_sub(
                &phi.matvec(&alg.product(&f, x))?,
                &alg.product(&images[j], x),
            );
            let b = numeric::vec_sub(
                &phi.matvec(&alg.product(x, &f))?,
                &alg.product(x, &images[j]),
            );
            for k in 0..n {
                sys[(j * n + k, l)] = a[k];
                sys[(n * n + j * n + k, l)] = b[k];
            }
        }
    }
    let coeffs = numeric::kernel_basis(&sys, tol)?;
    let vectors = coeffs
        .iter()
        .map(|cf| {
            let mut v = vec![ZERO; n];
            for (c_l, x) in cf.iter().zip(harmonic) {
                for (o, xi) in v.iter_mut().zip(x) {
                    *o += c_l * xi;
                }
            }
            v
        })
        .collect();
    Ok(numeric::gram_schmidt(vectors))
}
