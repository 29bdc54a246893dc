//! Finite quantum groups as Hopf *-algebra structure tensors.
//!
//! A [`HopfData`] carries the algebra, the comultiplication
//! `Γ(e_i) = Σ_{j,k} Δ[i][j][k] e_j ⊗ e_k`, counit, antipode and the Haar
//! state. The Haar state is always recomputed from the invariance
//! equations and then checked to be a faithful tracial state; at finite
//! dimension left and right Haar weights coincide.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Algebra, Gns, TensorPair};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::numeric::{self, c, cabs, kron, CMatrix, Tolerance, C64, ONE, ZERO};
use crate::verify::VerificationReport;

#[derive(Debug, Clone, PartialEq)]
pub struct HopfData {
    labels: Vec<String>,
    algebra: Algebra,
    comult: Vec<C64>,
    counit: Vec<C64>,
    antipode: CMatrix,
    haar: Vec<C64>,
}

/// An element of a finite quantum group or of a module algebra, in basis
/// coordinates.
pub type Element = Vec<C64>;

impl HopfData {
    /// Assembles the structure tensors and computes the Haar state.
    pub fn from_parts(
        labels: Vec<String>,
        algebra: Algebra,
        comult: Vec<C64>,
        counit: Vec<C64>,
        antipode: CMatrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        let d = algebra.dim();
        check_len("labels", labels.len(), d)?;
        check_len("comult", comult.len(), d * d * d)?;
        check_len("counit", counit.len(), d)?;
        check_len("antipode", antipode.rows() * antipode.cols(), d * d)?;
        if !antipode.is_square() {
            return Err(Error::NotSquare {
                rows: antipode.rows(),
                cols: antipode.cols(),
            });
        }
        let haar = compute_haar(&algebra, &comult, tol)?;
        Ok(Self {
            labels,
            algebra,
            comult,
            counit,
            antipode,
            haar,
        })
    }

    /// `C(G)`: point masses `δ_g`, pointwise product, `Γ(δ_g) = Σ_{st=g} δ_s ⊗ δ_t`.
    pub fn function_algebra(group: &FiniteGroup) -> Result<Self> {
        let n = group.order();
        let algebra = Algebra::functions(n)?;
        let mut comult = vec![ZERO; n * n * n];
        for s in 0..n {
            for t in 0..n {
                comult[(group.mul(s, t) * n + s) * n + t] = ONE;
            }
        }
        let counit = numeric::unit_vector(n, 0);
        let antipode =
            CMatrix::from_fn(n, n, |r, col| if r == group.inv(col) { ONE } else { ZERO });
        let labels = (0..n).map(|g| format!("delta_{g}")).collect();
        Self::from_parts(
            labels,
            algebra,
            comult,
            counit,
            antipode,
            &Tolerance::default(),
        )
    }

    /// `C[G]`: `λ_g λ_h = λ_{gh}`, `Γ(λ_g) = λ_g ⊗ λ_g`, `λ_g* = λ_{g⁻¹}`.
    pub fn group_algebra(group: &FiniteGroup) -> Result<Self> {
        let n = group.order();
        let mut mult = vec![ZERO; n * n * n];
        let mut comult = vec![ZERO; n * n * n];
        for g in 0..n {
            for h in 0..n {
                mult[(g * n + h) * n + group.mul(g, h)] = ONE;
            }
            comult[(g * n + g) * n + g] = ONE;
        }
        let inversion =
            CMatrix::from_fn(n, n, |r, col| if r == group.inv(col) { ONE } else { ZERO });
        let algebra = Algebra::new(n, mult, numeric::unit_vector(n, 0), inversion.clone())?;
        let labels = (0..n).map(|g| format!("lambda_{g}")).collect();
        Self::from_parts(
            labels,
            algebra,
            comult,
            vec![ONE; n],
            inversion,
            &Tolerance::default(),
        )
    }

    /// The dual quantum group on the dual basis: product and coproduct
    /// are transposed, the unit is the counit and `f* = conj(f(S(·)*))`.
    pub fn dual(&self, tol: &Tolerance) -> Result<Self> {
        let d = self.dim();
        let mut mult = vec![ZERO; d * d * d];
        let mut comult = vec![ZERO; d * d * d];
        let m = self.algebra.structure_constants();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    mult[(i * d + j) * d + k] = self.comult[(k * d + i) * d + j];
                    comult[(i * d + j) * d + k] = m[(j * d + k) * d + i];
                }
            }
        }
        let invol = self
            .algebra
            .involution()
            .conj()
            .matmul(&self.antipode)?
            .transpose();
        let algebra = Algebra::new(d, mult, self.counit.clone(), invol)?;
        let labels = self.labels.iter().map(|l| format!("hat({l})")).collect();
        Self::from_parts(
            labels,
            algebra,
            comult,
            self.algebra.unit().to_vec(),
            self.antipode.transpose(),
            tol,
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn comult_tensor(&self) -> &[C64] {
        &self.comult
    }

    pub fn counit(&self) -> &[C64] {
        &self.counit
    }

    pub fn antipode(&self) -> &CMatrix {
        &self.antipode
    }

    pub fn haar(&self) -> &[C64] {
        &self.haar
    }

    pub fn unit(&self) -> &[C64] {
        self.algebra.unit()
    }

    /// `Γ` as a `d² × d` matrix; column `i` is `Γ(e_i)`.
    pub fn comult_matrix(&self) -> CMatrix {
        comult_matrix(&self.comult, self.dim())
    }

    pub fn comultiply(&self, x: &[C64]) -> Vec<C64> {
        self.comult_matrix()
            .matvec(x)
            .expect("dimension checked at construction")
    }

    pub fn gns(&self, tol: &Tolerance) -> Result<Gns> {
        Gns::new(&self.algebra, &self.haar, tol)
    }

    /// GNS Gram matrix `G_ij = h(e_i* e_j)`; errors if not positive definite.
    pub fn gns_gram(&self, tol: &Tolerance) -> Result<CMatrix> {
        let g = self.algebra.functional_gram(&self.haar);
        let e = numeric::eigh(&g, tol)?;
        let smax = e.values.last().copied().unwrap_or(0.0);
        if e.values.first().copied().unwrap_or(0.0) <= tol.eps_kernel * smax.max(1e-300) {
            return Err(Error::AxiomViolation {
                axiom: "haar_faithful".into(),
                deviation: e.values[0],
            });
        }
        Ok(g)
    }

    /// `x ≥ 0` iff `L_x` is positive for the GNS inner product.
    pub fn element_is_positive(&self, x: &[C64], tol: &Tolerance) -> Result<bool> {
        self.gns(tol)?.is_positive(&self.algebra, x, tol)
    }

    pub fn is_cocommutative(&self, tol: &Tolerance) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            (0..d).all(|j| {
                (0..d).all(|k| {
                    cabs(self.comult[(i * d + j) * d + k] - self.comult[(i * d + k) * d + j])
                        <= tol.eps_compare
                })
            })
        })
    }

    /// Largest entry difference across every structure tensor.
    pub fn tensor_deviation(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let diff =
            |a: &[C64], b: &[C64]| a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max(cabs(x - y)));
        diff(
            self.algebra.structure_constants(),
            other.algebra.structure_constants(),
        )
        .max(diff(self.algebra.unit(), other.algebra.unit()))
        .max(
            self.algebra
                .involution()
                .max_abs_diff(other.algebra.involution()),
        )
        .max(diff(&self.comult, &other.comult))
        .max(diff(&self.counit, &other.counit))
        .max(self.antipode.max_abs_diff(&other.antipode))
        .max(diff(&self.haar, &other.haar))
    }

    /// Checks every Hopf *-algebra and Haar-state axiom, reporting the
    /// maximal deviation of each.
    pub fn verify(&self, tol: &Tolerance) -> VerificationReport {
        let d = self.dim();
        let eps = tol.eps_compare;
        let alg = &self.algebra;
        let mut rep = structure_report(alg, &self.comult, &self.counit, &self.antipode, tol);
        let gamma = self.comult_matrix();
        let id = CMatrix::identity(d);

        let h = &self.haar;
        let h_row = CMatrix::row_vector(h);
        rep.record(
            "haar_normalized",
            cabs(Algebra::apply(h, alg.unit()) - ONE),
            eps,
        );
        let state = alg.check_state(h, tol);
        rep.record(
            "haar_positive",
            state
                .deviation("positivity")
                .unwrap_or(f64::INFINITY)
                .max(state.deviation("hermiticity").unwrap_or(0.0)),
            tol.eps_psd,
        );
        let faithful = self.gns_gram(tol).is_ok();
        rep.record_flag("haar_faithful", faithful);
        let h_target = CMatrix::column_vector(alg.unit())
            .matmul(&h_row)
            .expect("shapes");
        let left_inv = kron(&id, &h_row)
            .matmul(&gamma)
            .map(|x| x.max_abs_diff(&h_target))
            .unwrap_or(f64::INFINITY);
        let right_inv = kron(&h_row, &id)
            .matmul(&gamma)
            .map(|x| x.max_abs_diff(&h_target))
            .unwrap_or(f64::INFINITY);
        rep.record("haar_left_invariance", left_inv, eps);
        rep.record("haar_right_invariance", right_inv, eps);
        let mut tracial = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                tracial = tracial.max(cabs(
                    Algebra::apply(h, alg.basis_product(i, j))
                        - Algebra::apply(h, alg.basis_product(j, i)),
                ));
            }
        }
        rep.record("haar_tracial", tracial, eps);
        rep
    }

    /// Returns a copy with one comultiplication entry shifted by `delta`
    /// (the Haar state is kept, not recomputed).
    pub fn with_corrupted_comult(&self, index: usize, delta: C64) -> Self {
        let mut out = self.clone();
        out.comult[index] += delta;
        out
    }

    pub fn with_corrupted_antipode(&self, row: usize, col: usize, delta: C64) -> Self {
        let mut out = self.clone();
        out.antipode[(row, col)] += delta;
        out
    }
}

/// Hopf *-algebra axioms that do not involve the Haar state. Usable on raw
/// tensors before the Haar state can be computed.
pub fn structure_report(
    alg: &Algebra,
    comult: &[C64],
    counit: &[C64],
    antipode: &CMatrix,
    tol: &Tolerance,
) -> VerificationReport {
    let d = alg.dim();
    let eps = tol.eps_compare;
    let mut rep = VerificationReport::new("quantum group");
    rep.extend(alg.verify(tol));

    let gamma = comult_matrix(comult, d);
    let id = CMatrix::identity(d);
    let coassoc = kron(&gamma, &id)
        .matmul(&gamma)
        .and_then(|l| kron(&id, &gamma).matmul(&gamma).map(|r| l.max_abs_diff(&r)))
        .unwrap_or(f64::INFINITY);
    rep.record("coassociativity", coassoc, eps);

    let tp = TensorPair::new(alg, alg);
    let gu = gamma.matvec(alg.unit()).expect("square");
    rep.record(
        "comultiplication_unital",
        numeric::vec_max_abs(&numeric::vec_sub(&gu, &tp.unit())),
        eps,
    );
    let images: Vec<Vec<C64>> = gamma.columns();
    let mut mult_dev = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let lhs = gamma.matvec(alg.basis_product(i, j)).expect("square");
            let rhs = tp.product(&images[i], &images[j]);
            mult_dev = mult_dev.max(numeric::vec_max_abs(&numeric::vec_sub(&lhs, &rhs)));
        }
    }
    rep.record("comultiplication_multiplicative", mult_dev, eps);
    let mut star_dev = 0.0f64;
    for (i, img) in images.iter().enumerate() {
        let lhs = gamma
            .matvec(&alg.star(&alg.basis_vector(i)))
            .expect("square");
        star_dev = star_dev.max(numeric::vec_max_abs(&numeric::vec_sub(&lhs, &tp.star(img))));
    }
    rep.record("comultiplication_star", star_dev, eps);

    let eps_row = CMatrix::row_vector(counit);
    let left_counit = kron(&eps_row, &id)
        .matmul(&gamma)
        .map(|m| m.max_abs_diff(&id));
    let right_counit = kron(&id, &eps_row)
        .matmul(&gamma)
        .map(|m| m.max_abs_diff(&id));
    rep.record(
        "counit",
        left_counit
            .unwrap_or(f64::INFINITY)
            .max(right_counit.unwrap_or(f64::INFINITY)),
        eps,
    );

    let m = alg.mult_map();
    let target = CMatrix::column_vector(alg.unit())
        .matmul(&eps_row)
        .expect("shapes");
    let s_left = m
        .matmul(&kron(antipode, &id))
        .and_then(|x| x.matmul(&gamma))
        .map(|x| x.max_abs_diff(&target))
        .unwrap_or(f64::INFINITY);
    let s_right = m
        .matmul(&kron(&id, antipode))
        .and_then(|x| x.matmul(&gamma))
        .map(|x| x.max_abs_diff(&target))
        .unwrap_or(f64::INFINITY);
    rep.record("antipode", s_left.max(s_right), eps);
    rep
}

pub(crate) fn comult_matrix(comult: &[C64], d: usize) -> CMatrix {
    CMatrix::from_fn(d * d, d, |jk, i| comult[i * d * d + jk])
}

fn check_len(what: &'static str, found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch {
            context: what,
            expected,
            found,
        });
    }
    Ok(())
}

/// Solves `(ι ⊗ h)Γ(e_a) = h(e_a) 1` for all `a` with `h(1) = 1`.
///
/// Errors unless the invariant functionals form a single line whose
/// normalized representative is a faithful state.
pub fn compute_haar(algebra: &Algebra, comult: &[C64], tol: &Tolerance) -> Result<Vec<C64>> {
    let d = algebra.dim();
    check_len("comult", comult.len(), d * d * d)?;
    let unit = algebra.unit();
    // unknown h_k; equation (a, j): Σ_k Δ[a][j][k] h_k − unit_j h_a = 0
    let mut sys = CMatrix::zeros(d * d, d);
    for a in 0..d {
        for j in 0..d {
            let row = a * d + j;
            for k in 0..d {
                sys[(row, k)] += comult[(a * d + j) * d + k];
            }
            sys[(row, a)] -= unit[j];
        }
    }
    let ker = numeric::kernel_basis(&sys, tol)?;
    match ker.len() {
        0 => {
            return Err(Error::NoInvariantState(
                "left-invariance system has only the zero solution".into(),
            ))
        }
        1 => {}
        n => {
            return Err(Error::NoInvariantState(format!(
                "invariant functionals form a {n}-dimensional space"
            )))
        }
    }
    let v = &ker[0];
    let norm = Algebra::apply(v, unit);
    if cabs(norm) <= tol.eps_compare {
        return Err(Error::NoInvariantState(
            "invariant functional vanishes on the unit".into(),
        ));
    }
    let h = numeric::vec_scale(v, c(1.0) / norm);
    if !algebra.check_state(&h, tol).passed() {
        return Err(Error::NoInvariantState(
            "invariant functional is not positive".into(),
        ));
    }
    let gram = algebra.functional_gram(&h);
    if numeric::rank(&gram, tol) < d {
        return Err(Error::NoInvariantState(
            "invariant state is not faithful".into(),
        ));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n)
    }

    #[test]
    fn trivial_group_is_one_dimensional() {
        let h = HopfData::function_algebra(&FiniteGroup::trivial()).unwrap();
        assert_eq!(h.dim(), 1);
        assert!(h.verify(&tol()).passed());
        assert_eq!(h.comult_tensor(), &[ONE]);
        assert_eq!(h.haar(), &[ONE]);
    }

    #[test]
    fn z2_comultiplication() {
        let h = HopfData::function_algebra(&z(2)).unwrap();
        // Γ(δ_0) = δ_0⊗δ_0 + δ_1⊗δ_1
        let g0 = h.comultiply(&[ONE, ZERO]);
        assert_eq!(g0, vec![ONE, ZERO, ZERO, ONE]);
        assert!(h.verify(&tol()).passed());
    }

    #[test]
    fn z4_haar_is_uniform() {
        let h = HopfData::function_algebra(&z(4)).unwrap();
        for v in h.haar() {
            assert!((v - c(0.25)).norm() < 1e-14);
        }
    }

    #[test]
    fn group_algebra_examples() {
        let h = HopfData::group_algebra(&z(2)).unwrap();
        assert_eq!(
            h.algebra().product(&[ZERO, ONE], &[ZERO, ONE]),
            vec![ONE, ZERO]
        );
        let s3 = HopfData::group_algebra(&FiniteGroup::dihedral(3)).unwrap();
        let rep = s3.verify(&tol());
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.max_deviation() <= 1e-10);
        assert!((s3.haar()[0] - ONE).norm() < 1e-12);
        assert!(s3.haar()[1..].iter().all(|v| v.norm() < 1e-12));
        assert!(s3.is_cocommutative(&tol()));
        assert!(!HopfData::function_algebra(&FiniteGroup::dihedral(3))
            .unwrap()
            .is_cocommutative(&tol()));
    }

    #[test]
    fn corrupted_comultiplication_breaks_coassociativity() {
        let h = HopfData::function_algebra(&z(3)).unwrap();
        let bad = h.with_corrupted_comult(5, c(1e-3));
        let rep = bad.verify(&tol());
        assert!(!rep.passed());
        assert!(rep.failures().any(|f| f.axiom == "coassociativity"));
    }

    #[test]
    fn corrupted_comultiplication_has_no_haar() {
        let h = HopfData::function_algebra(&z(3)).unwrap();
        let bad = h.with_corrupted_comult(5, c(1e-3));
        let err = compute_haar(bad.algebra(), bad.comult_tensor(), &tol()).unwrap_err();
        assert!(matches!(err, Error::NoInvariantState(_)), "{err:?}");
    }

    #[test]
    fn corrupted_antipode_is_named() {
        let h = HopfData::group_algebra(&z(3)).unwrap();
        let bad = h.with_corrupted_antipode(1, 2, c(1e-3));
        let fails: Vec<_> = bad
            .verify(&tol())
            .failures()
            .map(|f| f.axiom.clone())
            .collect();
        assert_eq!(fails, vec![String::from("antipode")]);
    }

    #[test]
    fn dual_of_function_algebra_is_group_algebra() {
        for (name, g) in FiniteGroup::catalogue() {
            let f = HopfData::function_algebra(&g).unwrap();
            let dual = f.dual(&tol()).unwrap();
            let ga = HopfData::group_algebra(&g).unwrap();
            assert!(dual.tensor_deviation(&ga) < 1e-12, "{name}");
            let bidual = dual.dual(&tol()).unwrap();
            assert!(bidual.tensor_deviation(&f) < 1e-12, "{name}");
        }
    }

    #[test]
    fn z2_is_self_dual() {
        // C[Z/2] ≅ C(Z/2) through the Fourier basis (λ_0 ± λ_1)/2
        let f = HopfData::function_algebra(&z(2)).unwrap();
        let dual = f.dual(&tol()).unwrap();
        let p0 = vec![c(0.5), c(0.5)];
        let p1 = vec![c(0.5), c(-0.5)];
        let alg = dual.algebra();
        assert_eq!(alg.product(&p0, &p1), vec![ZERO, ZERO]);
        assert_eq!(alg.product(&p0, &p0), p0);
        // Γ(p_0) = p_0⊗p_0 + p_1⊗p_1 in the dual, as for δ_0 in C(Z/2)
        let g = dual.comultiply(&p0);
        let tp = kron(&CMatrix::column_vector(&p0), &CMatrix::column_vector(&p0))
            .add(&kron(
                &CMatrix::column_vector(&p1),
                &CMatrix::column_vector(&p1),
            ))
            .unwrap();
        assert!(numeric::vec_max_abs(&numeric::vec_sub(&g, tp.as_slice())) < 1e-15);
    }

    #[test]
    fn gns_gram_examples() {
        let f = HopfData::function_algebra(&z(2)).unwrap();
        let g = f.gns_gram(&tol()).unwrap();
        assert!(g.max_abs_diff(&CMatrix::identity(2).scale(c(0.5))) < 1e-15);
        let ga = HopfData::group_algebra(&FiniteGroup::dihedral(3)).unwrap();
        assert!(
            ga.gns_gram(&tol())
                .unwrap()
                .max_abs_diff(&CMatrix::identity(6))
                < 1e-14
        );
    }

    #[test]
    fn element_positivity_examples() {
        let t = tol();
        let f = HopfData::function_algebra(&z(2)).unwrap();
        assert!(f.element_is_positive(f.unit(), &t).unwrap());
        assert!(!f.element_is_positive(&[ONE, -ONE], &t).unwrap());
        let g = HopfData::group_algebra(&z(3)).unwrap();
        // λ_0 + (λ_1 + λ_2)/2 has Fourier values 1 + cos(2πk/3) ∈ {2, 1/2, 1/2}
        assert!(g.element_is_positive(&[ONE, c(0.5), c(0.5)], &t).unwrap());
        assert!(!g.element_is_positive(&[ONE, c(-1.0), c(-1.0)], &t).unwrap());
        assert!(g.element_is_positive(&[ONE, c(1.0), ZERO], &t).is_err());
    }

    #[test]
    fn positivity_agrees_with_pointwise_sign_on_function_algebras() {
        let t = tol();
        let f = HopfData::function_algebra(&z(5)).unwrap();
        let samples: [[f64; 5]; 4] = [
            [1.0, 0.0, 2.0, 0.5, 0.0],
            [1.0, -1e-3, 2.0, 0.5, 0.0],
            [-1.0, -2.0, -3.0, -4.0, -5.0],
            [0.0; 5],
        ];
        for s in samples {
            let x: Vec<C64> = s.iter().map(|&v| c(v)).collect();
            let pointwise = s.iter().all(|&v| v >= 0.0);
            assert_eq!(f.element_is_positive(&x, &t).unwrap(), pointwise, "{s:?}");
        }
    }
}
