//! Finite-dimensional *-algebras given by structure constants, their
//! faithful GNS representations, and positivity tests built on them.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric::{self, c, cabs, inner, kron, CMatrix, Tolerance, C64, ONE, ZERO};
use crate::verify::VerificationReport;

/// Unital *-algebra on a fixed basis `e_0 … e_{d-1}`.
///
/// `mult[(i*d + j)*d + k]` is the coefficient of `e_k` in `e_i e_j`. The
/// involution is antilinear: coordinates of `x*` are `invol · conj(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebra {
    dim: usize,
    mult: Vec<C64>,
    unit: Vec<C64>,
    invol: CMatrix,
}

impl Algebra {
    pub fn new(dim: usize, mult: Vec<C64>, unit: Vec<C64>, invol: CMatrix) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("algebra dimension must be positive"));
        }
        if mult.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                context: "Algebra::new (mult)",
                expected: dim * dim * dim,
                found: mult.len(),
            });
        }
        if unit.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "Algebra::new (unit)",
                expected: dim,
                found: unit.len(),
            });
        }
        if invol.rows() != dim || invol.cols() != dim {
            return Err(Error::DimensionMismatch {
                context: "Algebra::new (invol)",
                expected: dim * dim,
                found: invol.rows() * invol.cols(),
            });
        }
        if !mult
            .iter()
            .chain(unit.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
            || !invol.is_finite()
        {
            return Err(Error::NonFinite("Algebra::new"));
        }
        Ok(Self {
            dim,
            mult,
            unit,
            invol,
        })
    }

    /// Full matrix algebra `M_n` on matrix units `E_ab` (index `a*n + b`).
    pub fn matrix_algebra(n: usize) -> Result<Self> {
        let d = n * n;
        let mut mult = vec![ZERO; d * d * d];
        for a in 0..n {
            for b in 0..n {
                for d2 in 0..n {
                    let i = a * n + b;
                    let j = b * n + d2;
                    let k = a * n + d2;
                    mult[(i * d + j) * d + k] = ONE;
                }
            }
        }
        let mut unit = vec![ZERO; d];
        for a in 0..n {
            unit[a * n + a] = ONE;
        }
        let invol = CMatrix::from_fn(d, d, |r, col| {
            let (a, b) = (col / n, col % n);
            if r == b * n + a {
                ONE
            } else {
                ZERO
            }
        });
        Self::new(d, mult, unit, invol)
    }

    /// Commutative algebra `C(X)` of functions on `points` points.
    pub fn functions(points: usize) -> Result<Self> {
        let d = points;
        let mut mult = vec![ZERO; d * d * d];
        for i in 0..d {
            mult[(i * d + i) * d + i] = ONE;
        }
        Self::new(d, mult, vec![ONE; d], CMatrix::identity(d))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[C64] {
        &self.unit
    }

    pub fn involution(&self) -> &CMatrix {
        &self.invol
    }

    pub fn structure_constants(&self) -> &[C64] {
        &self.mult
    }

    /// Coefficients of `e_i e_j`.
    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[C64] {
        let d = self.dim;
        &self.mult[(i * d + j) * d..(i * d + j + 1) * d]
    }

    pub fn product(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let d = self.dim;
        let mut out = vec![ZERO; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == ZERO {
                    continue;
                }
                let s = xi * yj;
                for (o, m) in out.iter_mut().zip(self.basis_product(i, j)) {
                    *o += s * m;
                }
            }
        }
        out
    }

    pub fn star(&self, x: &[C64]) -> Vec<C64> {
        let cx: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        self.invol
            .matvec(&cx)
            .expect("involution is square of algebra dimension")
    }

    pub fn basis_vector(&self, i: usize) -> Vec<C64> {
        numeric::unit_vector(self.dim, i)
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mul(&self, x: &[C64]) -> CMatrix {
        let d = self.dim;
        let mut l = CMatrix::zeros(d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for j in 0..d {
                for (k, m) in self.basis_product(i, j).iter().enumerate() {
                    l[(k, j)] += xi * m;
                }
            }
        }
        l
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mul(&self, x: &[C64]) -> CMatrix {
        let d = self.dim;
        let mut r = CMatrix::zeros(d, d);
        for (j, &xj) in x.iter().enumerate() {
            if xj == ZERO {
                continue;
            }
            for i in 0..d {
                for (k, m) in self.basis_product(i, j).iter().enumerate() {
                    r[(k, i)] += xj * m;
                }
            }
        }
        r
    }

    /// Multiplication as a linear map `A ⊗ A → A` (a `d × d²` matrix).
    pub fn mult_map(&self) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d, d * d, |k, ij| self.mult[ij * d + k])
    }

    pub fn is_commutative(&self, tol: &Tolerance) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| {
                numeric::vec_max_abs(&numeric::vec_sub(
                    self.basis_product(i, j),
                    self.basis_product(j, i),
                )) <= tol.eps_compare
            })
        })
    }

    /// Orthonormal coordinate basis of the center.
    pub fn center_basis(&self, tol: &Tolerance) -> Result<Vec<Vec<C64>>> {
        let d = self.dim;
        // x central iff (L_{e_j} - R_{e_j}) x = 0 for all j, where L/R act on x
        let mut m = CMatrix::zeros(d * d, d);
        for j in 0..d {
            for i in 0..d {
                let ij = self.basis_product(i, j);
                let ji = self.basis_product(j, i);
                for k in 0..d {
                    m[(j * d + k, i)] = ij[k] - ji[k];
                }
            }
        }
        numeric::kernel_basis(&m, tol)
    }

    /// `τ(x) = Tr(L_x) / dim`: a faithful trace on any finite-dimensional
    /// C*-algebra, normalized so that `τ(1) = 1`.
    pub fn regular_trace(&self) -> Vec<C64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.basis_product(i, j)[j]).sum::<C64>() / c(d as f64))
            .collect()
    }

    /// `[φ(e_i* e_j)]`
    pub fn functional_gram(&self, phi: &[C64]) -> CMatrix {
        let d = self.dim;
        let stars: Vec<Vec<C64>> = (0..d).map(|i| self.star(&self.basis_vector(i))).collect();
        CMatrix::from_fn(d, d, |i, j| {
            let p = self.product(&stars[i], &self.basis_vector(j));
            p.iter().zip(phi).map(|(a, b)| a * b).sum()
        })
    }

    pub fn apply(phi: &[C64], x: &[C64]) -> C64 {
        phi.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Associativity, unit and involution axioms.
    pub fn verify(&self, tol: &Tolerance) -> VerificationReport {
        let d = self.dim;
        let mut rep = VerificationReport::new("*-algebra");
        let mut assoc = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j).to_vec();
                for k in 0..d {
                    let lhs = self.product(&ij, &self.basis_vector(k));
                    let rhs = self.product(&self.basis_vector(i), self.basis_product(j, k));
                    assoc = assoc.max(numeric::vec_max_abs(&numeric::vec_sub(&lhs, &rhs)));
                }
            }
        }
        rep.record("associativity", assoc, tol.eps_compare);

        let mut unit_dev = 0.0f64;
        for i in 0..d {
            let e = self.basis_vector(i);
            let l = self.product(&self.unit, &e);
            let r = self.product(&e, &self.unit);
            unit_dev = unit_dev
                .max(numeric::vec_max_abs(&numeric::vec_sub(&l, &e)))
                .max(numeric::vec_max_abs(&numeric::vec_sub(&r, &e)));
        }
        rep.record("unit", unit_dev, tol.eps_compare);

        let jj = self.invol.matmul(&self.invol.conj()).expect("square");
        let mut inv_dev = jj.max_abs_diff(&CMatrix::identity(d));
        for i in 0..d {
            for j in 0..d {
                let lhs = self.star(self.basis_product(i, j));
                let rhs = self.product(
                    &self.star(&self.basis_vector(j)),
                    &self.star(&self.basis_vector(i)),
                );
                inv_dev = inv_dev.max(numeric::vec_max_abs(&numeric::vec_sub(&lhs, &rhs)));
            }
        }
        rep.record("involution", inv_dev, tol.eps_compare);
        rep
    }

    /// Checks that `tau` is a faithful tracial state.
    pub fn verify_trace(&self, tau: &[C64], tol: &Tolerance) -> VerificationReport {
        let d = self.dim;
        let mut rep = VerificationReport::new("faithful trace");
        if tau.len() != d {
            rep.record("trace_dimension", f64::INFINITY, 0.0);
            return rep;
        }
        rep.record(
            "trace_normalized",
            cabs(Self::apply(tau, &self.unit) - ONE),
            tol.eps_compare,
        );
        let mut tr = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                tr = tr.max(cabs(
                    Self::apply(tau, self.basis_product(i, j))
                        - Self::apply(tau, self.basis_product(j, i)),
                ));
            }
        }
        rep.record("trace_tracial", tr, tol.eps_compare);
        let gram = self.functional_gram(tau);
        let min = numeric::min_eigenvalue(&gram, tol).unwrap_or(f64::NEG_INFINITY);
        let smax = gram.op_norm().max(1e-300);
        rep.record(
            "trace_faithful",
            if min > tol.eps_kernel * smax {
                0.0
            } else {
                -min.min(0.0) + 1.0
            },
            0.0,
        );
        rep
    }

    /// Hermiticity, normalization and positivity of a functional.
    pub fn check_state(&self, phi: &[C64], tol: &Tolerance) -> VerificationReport {
        let mut rep = VerificationReport::new("state");
        if phi.len() != self.dim {
            rep.record("dimension", f64::INFINITY, 0.0);
            return rep;
        }
        rep.record(
            "normalization",
            cabs(Self::apply(phi, &self.unit) - ONE),
            tol.eps_compare,
        );
        let gram = self.functional_gram(phi);
        let herm = gram.hermitian_deviation();
        rep.record("hermiticity", herm, tol.eps_compare);
        let neg = if herm <= tol.eps_compare {
            numeric::min_eigenvalue(&gram, tol)
                .map(|m| (-m).max(0.0))
                .unwrap_or(f64::INFINITY)
        } else {
            f64::INFINITY
        };
        rep.record("positivity", neg, tol.eps_psd);
        rep
    }

    /// Density of `phi` with respect to the faithful functional `tau`:
    /// the unique `ρ` with `phi(a) = tau(ρ a)` for every `a`.
    pub fn density(&self, tau: &[C64], phi: &[C64]) -> Result<Vec<C64>> {
        let d = self.dim;
        if phi.len() != d || tau.len() != d {
            return Err(Error::DimensionMismatch {
                context: "density",
                expected: d,
                found: phi.len(),
            });
        }
        // Σ_i ρ_i τ(e_i e_j) = φ(e_j)
        let t = CMatrix::from_fn(d, d, |j, i| Self::apply(tau, self.basis_product(i, j)));
        numeric::solve(&t, phi)
    }

    /// Inverse of `density`: `a ↦ tau(ρ a)`.
    pub fn functional_from_density(&self, tau: &[C64], rho: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|j| Self::apply(tau, &self.product(rho, &self.basis_vector(j))))
            .collect()
    }

    pub fn self_adjoint_deviation(&self, x: &[C64]) -> f64 {
        numeric::vec_max_abs(&numeric::vec_sub(&self.star(x), x))
    }

    /// Whether `x` is a multiple of the unit, with the best scalar.
    pub fn scalar_part(&self, x: &[C64]) -> (C64, f64) {
        let uu = inner(&self.unit, &self.unit);
        let s = inner(&self.unit, x) / uu;
        let res = numeric::vec_norm(&numeric::vec_sub(x, &numeric::vec_scale(&self.unit, s)));
        (s, res)
    }
}

/// Arithmetic in `A ⊗ B` on coordinates `x[i * dim_b + k]` without
/// materializing the product structure constants.
#[derive(Debug, Clone, Copy)]
pub struct TensorPair<'a> {
    pub left: &'a Algebra,
    pub right: &'a Algebra,
}

impl<'a> TensorPair<'a> {
    pub fn new(left: &'a Algebra, right: &'a Algebra) -> Self {
        Self { left, right }
    }

    pub fn dim(&self) -> usize {
        self.left.dim * self.right.dim
    }

    pub fn unit(&self) -> Vec<C64> {
        let db = self.right.dim;
        let mut u = vec![ZERO; self.dim()];
        for (i, a) in self.left.unit.iter().enumerate() {
            for (k, b) in self.right.unit.iter().enumerate() {
                u[i * db + k] = a * b;
            }
        }
        u
    }

    pub fn product(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let (da, db) = (self.left.dim, self.right.dim);
        let mut out = vec![ZERO; da * db];
        for (ik, &xv) in x.iter().enumerate() {
            if xv == ZERO {
                continue;
            }
            let (i, k) = (ik / db, ik % db);
            for (jl, &yv) in y.iter().enumerate() {
                if yv == ZERO {
                    continue;
                }
                let (j, l) = (jl / db, jl % db);
                let s = xv * yv;
                let ma = self.left.basis_product(i, j);
                let mb = self.right.basis_product(k, l);
                for (p, &a) in ma.iter().enumerate() {
                    if a == ZERO {
                        continue;
                    }
                    let sa = s * a;
                    for (q, &b) in mb.iter().enumerate() {
                        if b != ZERO {
                            out[p * db + q] += sa * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn star(&self, x: &[C64]) -> Vec<C64> {
        let j = kron(&self.left.invol, &self.right.invol);
        let cx: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        j.matvec(&cx).expect("square")
    }
}

/// The GNS representation of an algebra with a faithful state, written in
/// an orthonormal basis of `L²(A, τ)`.
#[derive(Debug, Clone)]
pub struct Gns {
    dim: usize,
    sqrt_gram: CMatrix,
    inv_sqrt_gram: CMatrix,
    images: Vec<CMatrix>,
    hs_gram_inv: CMatrix,
}

impl Gns {
    pub fn new(alg: &Algebra, state: &[C64], tol: &Tolerance) -> Result<Self> {
        let d = alg.dim();
        let gram = alg.functional_gram(state);
        let e = numeric::eigh(&gram, tol)?;
        let smax = e.values.last().copied().unwrap_or(0.0);
        let smin = e.values.first().copied().unwrap_or(0.0);
        if smin <= tol.eps_kernel * smax.max(1e-300) {
            return Err(Error::AxiomViolation {
                axiom: "faithful_state".into(),
                deviation: smin,
            });
        }
        let sqrt_gram = numeric::hermitian_function(&gram, tol, numeric::sqrt)?;
        let inv_sqrt_gram = numeric::hermitian_function(&gram, tol, |x| 1.0 / numeric::sqrt(x))?;
        let images: Vec<CMatrix> = (0..d)
            .map(|i| {
                sqrt_gram
                    .matmul(&alg.left_mul(&alg.basis_vector(i)))
                    .and_then(|m| m.matmul(&inv_sqrt_gram))
            })
            .collect::<Result<_>>()?;
        let hs = CMatrix::from_fn(d, d, |i, j| {
            images[i]
                .as_slice()
                .iter()
                .zip(images[j].as_slice())
                .map(|(a, b)| a.conj() * b)
                .sum()
        });
        let hs_gram_inv = numeric::inverse(&hs)?;
        Ok(Self {
            dim: d,
            sqrt_gram,
            inv_sqrt_gram,
            images,
            hs_gram_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sqrt_gram(&self) -> &CMatrix {
        &self.sqrt_gram
    }

    pub fn inv_sqrt_gram(&self) -> &CMatrix {
        &self.inv_sqrt_gram
    }

    /// `π(x)` as a `d × d` matrix.
    pub fn represent(&self, x: &[C64]) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d, d);
        for (xi, img) in x.iter().zip(&self.images) {
            if *xi == ZERO {
                continue;
            }
            for r in 0..d {
                for col in 0..d {
                    out[(r, col)] += xi * img[(r, col)];
                }
            }
        }
        out
    }

    /// Coordinates of the Hilbert–Schmidt projection of `m` onto `π(A)`.
    pub fn project_coords(&self, m: &CMatrix) -> Vec<C64> {
        let b: Vec<C64> = self
            .images
            .iter()
            .map(|img| {
                img.as_slice()
                    .iter()
                    .zip(m.as_slice())
                    .map(|(a, z)| a.conj() * z)
                    .sum()
            })
            .collect();
        self.hs_gram_inv.matvec(&b).expect("square")
    }

    /// Choi matrix `Σ_{ab} E_ab ⊗ π(T(P(E_ab)))` of `T ∘ P`, where `P` is the
    /// trace-preserving conditional expectation onto `π(A)`. It is PSD iff
    /// `T` is completely positive on `A`.
    pub fn choi(&self, map: &CMatrix) -> Result<CMatrix> {
        let r = self.dim;
        if map.rows() != r || map.cols() != r {
            return Err(Error::DimensionMismatch {
                context: "Gns::choi",
                expected: r * r,
                found: map.rows() * map.cols(),
            });
        }
        let mut choi = CMatrix::zeros(r * r, r * r);
        for a in 0..r {
            for b in 0..r {
                let mut unit = CMatrix::zeros(r, r);
                unit[(a, b)] = ONE;
                let coords = self.project_coords(&unit);
                let image = self.represent(&map.matvec(&coords)?);
                for i in 0..r {
                    for j in 0..r {
                        choi[(a * r + i, b * r + j)] = image[(i, j)];
                    }
                }
            }
        }
        Ok(choi)
    }

    pub fn is_positive(&self, alg: &Algebra, x: &[C64], tol: &Tolerance) -> Result<bool> {
        let dev = alg.self_adjoint_deviation(x);
        if dev > tol.eps_compare {
            return Err(Error::NotSelfAdjoint { deviation: dev });
        }
        let mut p = self.represent(x);
        // symmetrize away rounding before the eigen-solve
        p = p.add(&p.adjoint())?.scale(c(0.5));
        numeric::is_psd(&p, tol)
    }

    /// Rank of `π(x)`.
    pub fn rank(&self, x: &[C64], tol: &Tolerance) -> usize {
        numeric::rank(&self.represent(x), tol)
    }

    /// Operator norm `‖π(x)‖ = ‖x‖`.
    pub fn norm(&self, x: &[C64]) -> f64 {
        self.represent(x).op_norm()
    }
}
