//! Dense complex linear algebra with explicit tolerances.
//!
//! Everything downstream (Hopf axioms, fixed points, positivity) reduces to
//! the handful of kernels in this module: one-sided Jacobi SVD for ranks and
//! kernels, cyclic Jacobi for Hermitian spectra, LU for solves, and the
//! algebraic projection onto the fixed space of a power-bounded operator.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

const MAX_JACOBI_SWEEPS: usize = 80;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn cabs(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Unit-modulus complex number `exp(i·theta)`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(libm::cos(theta), libm::sin(theta))
}

/// Thresholds governing every numerical decision.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerance {
    /// Relative singular-value cutoff for rank and kernel decisions.
    pub eps_kernel: f64,
    /// Allowed negativity of the smallest eigenvalue in PSD tests.
    pub eps_psd: f64,
    /// Absolute tolerance for assertion comparisons.
    pub eps_compare: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_kernel: 1e-9,
            eps_psd: 1e-9,
            eps_compare: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(eps_kernel: f64, eps_psd: f64, eps_compare: f64) -> Result<Self> {
        let tol = Self {
            eps_kernel,
            eps_psd,
            eps_compare,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn with_compare(mut self, eps_compare: f64) -> Result<Self> {
        self.eps_compare = eps_compare;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(self.eps_kernel) && ok(self.eps_psd) && ok(self.eps_compare)) {
            return Err(Error::InvalidTolerance(
                "all tolerances must be finite and positive",
            ));
        }
        if self.eps_kernel > 1e-6 {
            return Err(Error::InvalidTolerance("eps_kernel must not exceed 1e-6"));
        }
        Ok(())
    }
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch {
                context: "CMatrix::from_vec",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r])
    }

    pub fn column_vector(v: &[C64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn row_vector(v: &[C64]) -> Self {
        Self {
            rows: 1,
            cols: v.len(),
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "CMatrix::add")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "CMatrix::sub")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "CMatrix::matmul",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                context: "CMatrix::matvec",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(cabs(*z)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Spectral norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max(cabs(self[(i, j)] - self[(j, i)].conj()));
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max(cabs(a - b)))
    }

    fn check_same_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

/// Kronecker product; row `(i, k)` of the result is `i * B.rows + k`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = (b.rows, b.cols);
    let mut out = CMatrix::zeros(a.rows * br, a.cols * bc);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn vec_norm(v: &[C64]) -> f64 {
    sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// `⟨u, v⟩ = Σ conj(u_i) v_i`
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_max_abs(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(cabs(*z)))
}

pub fn vec_sub(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn vec_add(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn vec_scale(v: &[C64], s: C64) -> Vec<C64> {
    v.iter().map(|z| z * s).collect()
}

pub fn unit_vector(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

/// Result of a one-sided Jacobi SVD: `A V = U Σ` with `V` unitary.
///
/// `sigma` is sorted in decreasing order and `v` holds the matching right
/// singular vectors as columns. `left` holds `A v_j / σ_j` for nonzero σ_j.
#[derive(Debug, Clone)]
pub struct Svd {
    pub sigma: Vec<f64>,
    pub v: CMatrix,
    pub left: Vec<Vec<C64>>,
}

/// One-sided (Hestenes) Jacobi SVD. Works for any shape; produces `cols`
/// singular values, the trailing ones zero when `rows < cols`.
pub fn svd(a: &CMatrix) -> Svd {
    let m = a.rows;
    let n = a.cols;
    // column-major working copies
    let mut u: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n).map(|j| unit_vector(n, j)).collect();

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = u[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = u[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&u[p], &u[q]);
                let g = cabs(gamma);
                if g == 0.0 || g <= 1e-15 * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let w = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                };
                let cs = 1.0 / sqrt(1.0 + t * t);
                let sn = cs * t;
                rotate_pair(&mut u, p, q, cs, sn, w);
                rotate_pair(&mut v, p, q, cs, sn, w);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = u.iter().map(|col| vec_norm(col)).enumerate().collect();
    order.sort_by(|x, y| {
        y.1.partial_cmp(&x.1)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(x.0.cmp(&y.0))
    });

    let sigma: Vec<f64> = order.iter().map(|&(_, s)| s).collect();
    let vcols: Vec<Vec<C64>> = order.iter().map(|&(j, _)| v[j].clone()).collect();
    let left = order
        .iter()
        .filter(|&&(_, s)| s > 0.0)
        .map(|&(j, s)| vec_scale(&u[j], c(1.0 / s)))
        .collect();
    Svd {
        sigma,
        v: CMatrix::from_columns(n, &vcols),
        left: {
            let l: Vec<Vec<C64>> = left;
            debug_assert!(l.iter().all(|x| x.len() == m));
            l
        },
    }
}

// u_p' = c u_p - s conj(w) u_q ; u_q' = s w u_p + c u_q
fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, cs: f64, sn: f64, w: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let up = &mut lo[p];
    let uq = &mut hi[0];
    let a = c(cs);
    let sw = w * sn;
    let swc = w.conj() * sn;
    for (x, y) in up.iter_mut().zip(uq.iter_mut()) {
        let xp = *x;
        let yq = *y;
        *x = a * xp - swc * yq;
        *y = sw * xp + a * yq;
    }
}

pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    svd(a).sigma
}

/// Numerical rank relative to the largest singular value (floored at 1).
pub fn rank(a: &CMatrix, tol: &Tolerance) -> usize {
    let s = singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&x| x > tol.eps_kernel * smax).count()
}

/// Orthonormal basis of the numerical kernel of `m`, in canonical order.
///
/// The SVD kernel is row-reduced with left-to-right pivoting and then
/// orthonormalized, so the output depends only on the subspace.
pub fn kernel_basis(m: &CMatrix, tol: &Tolerance) -> Result<Vec<Vec<C64>>> {
    if !m.is_finite() {
        return Err(Error::NonFinite("kernel_basis"));
    }
    let n = m.cols();
    if n == 0 {
        return Ok(Vec::new());
    }
    let s = svd(m);
    let smax = s.sigma.first().copied().unwrap_or(0.0).max(1.0);
    let raw: Vec<Vec<C64>> = s
        .sigma
        .iter()
        .enumerate()
        .filter(|&(_, &x)| x <= tol.eps_kernel * smax)
        .map(|(j, _)| s.v.column(j))
        .collect();
    Ok(canonical_basis(raw, n))
}

/// Orthonormal basis of the column space of `m`.
pub fn range_basis(m: &CMatrix, tol: &Tolerance) -> Vec<Vec<C64>> {
    let s = svd(m);
    let smax = s.sigma.first().copied().unwrap_or(0.0).max(1.0);
    let raw: Vec<Vec<C64>> = s
        .sigma
        .iter()
        .zip(&s.left)
        .filter(|&(&x, _)| x > tol.eps_kernel * smax)
        .map(|(_, u)| u.clone())
        .collect();
    canonical_basis(raw, m.rows())
}

/// Reduced row echelon form of the spanning set (rows), then Gram–Schmidt.
pub fn canonical_basis(vectors: Vec<Vec<C64>>, n: usize) -> Vec<Vec<C64>> {
    let mut rows = vectors;
    let k = rows.len();
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == k {
            break;
        }
        let (best, best_abs) =
            (pivot_row..k)
                .map(|r| (r, cabs(rows[r][col])))
                .fold(
                    (pivot_row, -1.0),
                    |acc, x| if x.1 > acc.1 { x } else { acc },
                );
        if best_abs <= 1e-10 {
            continue;
        }
        rows.swap(pivot_row, best);
        let p = rows[pivot_row][col];
        for z in rows[pivot_row].iter_mut() {
            *z /= p;
        }
        let prow = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row {
                continue;
            }
            let f = row[col];
            if f != ZERO {
                for (z, pz) in row.iter_mut().zip(&prow) {
                    *z -= f * pz;
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    gram_schmidt(rows)
}

/// Modified Gram–Schmidt with one reorthogonalization pass; drops
/// numerically dependent vectors.
pub fn gram_schmidt(vectors: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        let original = vec_norm(&v);
        for _ in 0..2 {
            for q in &out {
                let p = inner(q, &v);
                for (z, qz) in v.iter_mut().zip(q) {
                    *z -= p * qz;
                }
            }
        }
        let nv = vec_norm(&v);
        if nv > 1e-12 * original.max(1e-300) && nv > 0.0 {
            out.push(vec_scale(&v, c(1.0 / nv)));
        }
    }
    out
}

/// Orthogonal projector onto the span of orthonormal `basis` vectors.
pub fn projector(basis: &[Vec<C64>], n: usize) -> CMatrix {
    let mut p = CMatrix::zeros(n, n);
    for b in basis {
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] += b[i] * b[j].conj();
            }
        }
    }
    p
}

/// Distance from `v` to the span of orthonormal `basis`.
pub fn residual_from_span(v: &[C64], basis: &[Vec<C64>]) -> f64 {
    let mut r = v.to_vec();
    for b in basis {
        let p = inner(b, &r);
        for (z, bz) in r.iter_mut().zip(b) {
            *z -= p * bz;
        }
    }
    vec_norm(&r)
}

/// Coordinates of `v` in the orthonormal `basis`.
pub fn coordinates_in(v: &[C64], basis: &[Vec<C64>]) -> Vec<C64> {
    basis.iter().map(|b| inner(b, v)).collect()
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi.
/// Eigenvalues ascending; eigenvectors are the matching columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn eigh(h: &CMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    if !h.is_finite() {
        return Err(Error::NonFinite("eigh"));
    }
    let scale = h.max_abs().max(1.0);
    let dev = h.hermitian_deviation();
    if dev > tol.eps_compare * scale {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = h.rows();
    let mut a = h.clone();
    let mut v = CMatrix::identity(n);
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= 1e-30 * scale * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = cabs(apq);
                if g <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / g; // a_pq = g * phase
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta >= 0.0 {
                    1.0 / (theta + sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + sqrt(theta * theta + 1.0))
                };
                let cs = 1.0 / sqrt(1.0 + t * t);
                let sn = t * cs;
                // U restricted to (p, q): diag(1, conj(phase)) · [[c, s], [-s, c]]
                let upp = c(cs);
                let upq = c(sn);
                let uqp = phase.conj() * (-sn);
                let uqq = phase.conj() * cs;
                // A <- A U (columns)
                for r in 0..n {
                    let x = a[(r, p)];
                    let y = a[(r, q)];
                    a[(r, p)] = x * upp + y * uqp;
                    a[(r, q)] = x * upq + y * uqq;
                }
                // A <- U^† A (rows)
                for col in 0..n {
                    let x = a[(p, col)];
                    let y = a[(q, col)];
                    a[(p, col)] = upp.conj() * x + uqp.conj() * y;
                    a[(q, col)] = upq.conj() * x + uqq.conj() * y;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = c(a[(p, p)].re);
                a[(q, q)] = c(a[(q, q)].re);
                for r in 0..n {
                    let x = v[(r, p)];
                    let y = v[(r, q)];
                    v[(r, p)] = x * upp + y * uqp;
                    v[(r, q)] = x * upq + y * uqq;
                }
            }
        }
    }
    let mut order: Vec<(usize, f64)> = (0..n).map(|i| (i, a[(i, i)].re)).collect();
    order.sort_by(|x, y| {
        x.1.partial_cmp(&y.1)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(x.0.cmp(&y.0))
    });
    let values = order.iter().map(|&(_, l)| l).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| v[(r, order[k].0)]);
    Ok(HermitianEigen { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &CMatrix, tol: &Tolerance) -> Result<f64> {
    Ok(eigh(h, tol)?.values.first().copied().unwrap_or(0.0))
}

/// `true` iff `h` is Hermitian (within `eps_compare`) with smallest
/// eigenvalue at least `-eps_psd`.
pub fn is_psd(h: &CMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(min_eigenvalue(h, tol)? >= -tol.eps_psd)
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(h: &CMatrix, tol: &Tolerance, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let e = eigh(h, tol)?;
    let n = h.rows();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let fk = f(e.values[k]);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += e.vectors[(i, k)] * e.vectors[(j, k)].conj() * fk;
            }
        }
    }
    Ok(out)
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|r| (r, cabs(lu[(r, k)])))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= 1e-14 * scale || pmax == 0.0 {
                return Err(Error::Singular { pivot: k });
            }
            if p != k {
                for col in 0..n {
                    let t = lu[(k, col)];
                    lu[(k, col)] = lu[(p, col)];
                    lu[(p, col)] = t;
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for r in (k + 1)..n {
                let f = lu[(r, k)] / d;
                lu[(r, k)] = f;
                if f != ZERO {
                    for col in (k + 1)..n {
                        let t = lu[(k, col)];
                        lu[(r, col)] -= f * t;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                context: "Lu::solve",
                expected: n,
                found: b.len(),
            });
        }
        let mut y: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let t = self.lu[(i, k)] * y[k];
                y[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let t = self.lu[(i, k)] * y[k];
                y[i] -= t;
            }
            y[i] /= self.lu[(i, i)];
        }
        Ok(y)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        let n = self.lu.rows();
        let cols: Result<Vec<Vec<C64>>> = (0..n).map(|j| self.solve(&unit_vector(n, j))).collect();
        Ok(CMatrix::from_columns(n, &cols?))
    }
}

pub fn solve(a: &CMatrix, b: &[C64]) -> Result<Vec<C64>> {
    Lu::new(a)?.solve(b)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    Lu::new(a)?.inverse()
}

/// Projection onto `ker(I − Φ)` along `ran(I − Φ)`.
///
/// Built as `K (L^† K)^{-1} L^†` where the columns of `K` span the right
/// fixed vectors and those of `L` the left fixed vectors; the splitting
/// `ker ⊕ ran` holds exactly when `L^† K` is invertible.
pub fn spectral_projection_at_one(phi: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    if !phi.is_square() {
        return Err(Error::NotSquare {
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    let n = phi.rows();
    let gen = CMatrix::identity(n).sub(phi)?;
    let right = kernel_basis(&gen, tol)?;
    let left = kernel_basis(&gen.adjoint(), tol)?;
    if right.len() != left.len() {
        return Err(Error::Decomposition {
            detail: "left and right fixed spaces differ in dimension",
            deviation: (right.len() as f64 - left.len() as f64).abs(),
        });
    }
    if right.is_empty() {
        return Ok(CMatrix::zeros(n, n));
    }
    let k = CMatrix::from_columns(n, &right);
    let l = CMatrix::from_columns(n, &left);
    let pairing = l.adjoint().matmul(&k)?;
    let sv = singular_values(&pairing);
    let smin = sv.last().copied().unwrap_or(0.0);
    if smin < 1e-6 {
        return Err(Error::Decomposition {
            detail: "fixed space and range of I - Φ do not form a direct sum",
            deviation: smin,
        });
    }
    let e = k.matmul(&inverse(&pairing)?)?.matmul(&l.adjoint())?;

    let scale = e.max_abs().max(1.0);
    let idem = e.matmul(&e)?.max_abs_diff(&e);
    let left_inv = phi.matmul(&e)?.max_abs_diff(&e);
    let right_inv = e.matmul(phi)?.max_abs_diff(&e);
    let worst = idem.max(left_inv).max(right_inv);
    if worst > tol.eps_compare * scale {
        return Err(Error::Decomposition {
            detail: "projection fails E² = E or ΦE = EΦ = E",
            deviation: worst,
        });
    }
    Ok(e)
}

/// `(1/n) Σ_{k=1}^{n} Φ^k`, evaluated by binary doubling.
pub fn cesaro_average(phi: &CMatrix, n: u64) -> Result<CMatrix> {
    if !phi.is_square() {
        return Err(Error::NotSquare {
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("Cesàro average needs n ≥ 1"));
    }
    // invariant: power = Φ^m, sum = Σ_{k=1}^m Φ^k
    let mut power = phi.clone();
    let mut sum = phi.clone();
    let bits = 64 - n.leading_zeros();
    for b in (0..bits - 1).rev() {
        sum = sum.add(&power.matmul(&sum)?)?;
        power = power.matmul(&power)?;
        if (n >> b) & 1 == 1 {
            power = power.matmul(phi)?;
            sum = sum.add(&power)?;
        }
    }
    Ok(sum.scale(c(1.0 / n as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn naive_cesaro(phi: &CMatrix, n: usize) -> CMatrix {
        let mut p = CMatrix::identity(phi.rows());
        let mut s = CMatrix::zeros(phi.rows(), phi.cols());
        for _ in 0..n {
            p = p.matmul(phi).unwrap();
            s = s.add(&p).unwrap();
        }
        s.scale(c(1.0 / n as f64))
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let k = kernel_basis(&CMatrix::zeros(2, 2), &tol()).unwrap();
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&CMatrix::identity(3), &tol())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn kernel_of_all_ones() {
        let m = CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let k = kernel_basis(&m, &tol()).unwrap();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!((v[0] + v[1]).norm() < 1e-14);
        assert!((vec_norm(v) - 1.0).abs() < 1e-14);
        // canonical ordering: first pivot is positive real
        assert!(v[0].re > 0.0 && v[0].im.abs() < 1e-15);
    }

    #[test]
    fn kernel_vectors_meet_threshold() {
        let m = CMatrix::from_fn(3, 4, |i, j| {
            C64::new((i + 2 * j) as f64, (i * j) as f64 - 1.0)
        });
        let k = kernel_basis(&m, &tol()).unwrap();
        assert_eq!(k.len(), 2);
        let norm = m.op_norm();
        for v in &k {
            let mv = m.matvec(v).unwrap();
            assert!(vec_norm(&mv) <= tol().eps_kernel * norm);
        }
    }

    #[test]
    fn psd_examples() {
        let t = tol();
        assert!(is_psd(&CMatrix::identity(3), &t).unwrap());
        assert!(!is_psd(&CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]), &t).unwrap());
        assert!(is_psd(&CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]), &t).unwrap());
        let e = eigh(&CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]), &t).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn psd_rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(
            is_psd(&m, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigh_reconstructs_complex_hermitian() {
        let n = 5;
        let a = CMatrix::from_fn(n, n, |i, j| {
            C64::new((i * 3 + j) as f64 % 7.0 - 3.0, (i as f64 - j as f64) * 0.5)
        });
        let h = a.add(&a.adjoint()).unwrap();
        let e = eigh(&h, &tol()).unwrap();
        let d = CMatrix::from_fn(n, n, |i, j| if i == j { c(e.values[i]) } else { ZERO });
        let rec = e
            .vectors
            .matmul(&d)
            .unwrap()
            .matmul(&e.vectors.adjoint())
            .unwrap();
        assert!(rec.max_abs_diff(&h) < 1e-11);
        let vv = e.vectors.adjoint().matmul(&e.vectors).unwrap();
        assert!(vv.max_abs_diff(&CMatrix::identity(n)) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn svd_matches_known_singular_values() {
        let m = CMatrix::from_real_rows(&[&[3.0, 0.0], &[4.0, 5.0]]);
        let s = singular_values(&m);
        // σ² are the eigenvalues of MᵀM = [[25, 20], [20, 25]] → 45, 5
        assert!((s[0] - 45f64.sqrt()).abs() < 1e-12);
        assert!((s[1] - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kron_examples() {
        let two = CMatrix::from_real_rows(&[&[2.0]]);
        let m = CMatrix::from_fn(2, 3, |i, j| C64::new(i as f64, j as f64));
        assert_eq!(kron(&two, &m), m.scale(c(2.0)));
        assert_eq!(
            kron(&CMatrix::identity(2), &CMatrix::identity(3)),
            CMatrix::identity(6)
        );
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let expected = CMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(kron(&x, &CMatrix::identity(2)), expected);
    }

    #[test]
    fn projection_at_one_examples() {
        let t = tol();
        let e = spectral_projection_at_one(&CMatrix::identity(3), &t).unwrap();
        assert!(e.max_abs_diff(&CMatrix::identity(3)) < 1e-12);

        let swap = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = spectral_projection_at_one(&swap, &t).unwrap();
        let half = CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(e.max_abs_diff(&half) < 1e-12);

        let decay = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.5]]);
        let e = spectral_projection_at_one(&decay, &t).unwrap();
        assert!(e.max_abs_diff(&CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])) < 1e-12);
    }

    #[test]
    fn projection_detects_jordan_block() {
        // [[1, 1], [0, 1]] is not power-bounded: ker(I-Φ) ∩ ran(I-Φ) ≠ 0
        let j = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(
            spectral_projection_at_one(&j, &tol()),
            Err(Error::Decomposition { .. })
        ));
    }

    #[test]
    fn projection_for_non_normal_stochastic_matrix() {
        // absorbing chain: state 2 absorbing, 0 -> {1,2}, 1 -> {0,2}
        let p = CMatrix::from_real_rows(&[&[0.0, 0.5, 0.5], &[0.5, 0.0, 0.5], &[0.0, 0.0, 1.0]]);
        let e = spectral_projection_at_one(&p, &tol()).unwrap();
        let avg = cesaro_average(&p, 1 << 16).unwrap();
        assert!(e.max_abs_diff(&avg) < 1e-4);
        // harmonic functions are constants: every row of E is the absorption law (0,0,1)
        for r in 0..3 {
            assert!((e[(r, 2)] - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn cesaro_doubling_matches_naive_sum() {
        let p = CMatrix::from_real_rows(&[&[0.2, 0.8, 0.0], &[0.1, 0.3, 0.6], &[0.5, 0.0, 0.5]]);
        for n in [1u64, 2, 3, 7, 10, 33, 64, 100] {
            let fast = cesaro_average(&p, n).unwrap();
            let slow = naive_cesaro(&p, n as usize);
            assert!(fast.max_abs_diff(&slow) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn lu_solves_and_inverts() {
        let a = CMatrix::from_fn(4, 4, |i, j| {
            C64::new(if i == j { 4.0 } else { 1.0 }, (i as f64) - (j as f64))
        });
        let inv = inverse(&a).unwrap();
        assert!(a.matmul(&inv).unwrap().max_abs_diff(&CMatrix::identity(4)) < 1e-12);
        assert!(matches!(
            inverse(&CMatrix::zeros(2, 2)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(1e-9, 1e-9, 1e-8).is_ok());
        assert!(Tolerance::new(1e-3, 1e-9, 1e-8).is_err());
        assert!(Tolerance::new(1e-9, 0.0, 1e-8).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn cmat(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
            proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), rows * cols).prop_map(
                move |v| {
                    CMatrix::from_vec(
                        rows,
                        cols,
                        v.into_iter().map(|(a, b)| C64::new(a, b)).collect(),
                    )
                    .unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn kron_is_associative(a in cmat(2, 2), b in cmat(3, 3), d in cmat(2, 3)) {
                let l = kron(&kron(&a, &b), &d);
                let r = kron(&a, &kron(&b, &d));
                prop_assert!(l.max_abs_diff(&r) < 1e-12);
            }

            #[test]
            fn kron_is_bilinear(a in cmat(2, 2), a2 in cmat(2, 2), b in cmat(3, 3), s in -3.0f64..3.0) {
                let lhs = kron(&a.add(&a2.scale(c(s))).unwrap(), &b);
                let rhs = kron(&a, &b).add(&kron(&a2, &b).scale(c(s))).unwrap();
                prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            }

            #[test]
            fn mixed_product_rule(a in cmat(2, 2), b in cmat(3, 3), c2 in cmat(2, 2), d in cmat(3, 3)) {
                let lhs = kron(&a, &b).matmul(&kron(&c2, &d)).unwrap();
                let rhs = kron(&a.matmul(&c2).unwrap(), &b.matmul(&d).unwrap());
                prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11);
            }

            #[test]
            fn kernel_dimension_plus_rank_is_cols(m in cmat(3, 5)) {
                let t = Tolerance::default();
                let k = kernel_basis(&m, &t).unwrap();
                prop_assert_eq!(k.len() + rank(&m, &t), 5);
            }
        }
    }
}
