//! Brute-force classical reference: the Markov chain on a finite G-set
//! with `p(x, y) = μ({g : g·x = y})`, its bounded harmonic functions and
//! subgroup generation, computed from raw tables in real arithmetic.
//!
//! Nothing here goes through the quantum-group machinery.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::verify::VerificationReport;

pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TransitionKernel {
    labels: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl TransitionKernel {
    /// Validates row sums (within `1e-12`) and non-negativity.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = Self::unchecked(rows);
        let rep = k.verify();
        if let Some(f) = rep.failures().next() {
            let axiom = if f.axiom == "row_sum" {
                "row_sum"
            } else {
                "nonnegative"
            };
            return Err(Error::InvalidKernel {
                axiom,
                deviation: f.deviation,
            });
        }
        Ok(k)
    }

    fn unchecked(rows: Vec<Vec<f64>>) -> Self {
        Self {
            labels: (0..rows.len()).collect(),
            rows,
        }
    }

    pub fn verify(&self) -> VerificationReport {
        let n = self.rows.len();
        let mut rep = VerificationReport::new("transition kernel");
        let square = self.rows.iter().all(|r| r.len() == n);
        rep.record_flag("square", square);
        let mut row_dev = 0.0f64;
        let mut neg = 0.0f64;
        for r in &self.rows {
            row_dev = row_dev.max((r.iter().sum::<f64>() - 1.0).abs());
            for &p in r {
                if !p.is_finite() {
                    row_dev = f64::INFINITY;
                }
                neg = neg.max(-p);
            }
        }
        rep.record("row_sum", row_dev, ROW_SUM_TOLERANCE);
        rep.record("nonnegative", neg.max(0.0), 0.0);
        rep
    }

    /// Shifts one entry; the result is not revalidated.
    pub fn with_corrupted_entry(&self, x: usize, y: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.rows[x][y] += delta;
        out
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.rows[x][y]
    }

    /// `(Ph)(x) = Σ_y P[x][y] h(y)`.
    pub fn apply(&self, h: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(h).map(|(p, v)| p * v).sum())
            .collect()
    }
}

fn check_table(table: &[Vec<usize>]) -> Result<usize> {
    let g = table.len();
    if g == 0
        || table
            .iter()
            .any(|r| r.len() != g || r.iter().any(|&x| x >= g))
    {
        return Err(Error::NotAGroup(format!(
            "table of size {g} is not square with entries in range"
        )));
    }
    Ok(g)
}

/// `P[x][y] = Σ_{g : g·x = y} μ(g)` with `act[g][x] = g·x`.
pub fn transition_matrix(
    table: &[Vec<usize>],
    act: &[Vec<usize>],
    weights: &[f64],
) -> Result<TransitionKernel> {
    let g = check_table(table)?;
    if act.len() != g || weights.len() != g {
        return Err(Error::DimensionMismatch {
            context: "transition_matrix",
            expected: g,
            found: if act.len() != g {
                act.len()
            } else {
                weights.len()
            },
        });
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || (total - 1.0).abs() > ROW_SUM_TOLERANCE
    {
        return Err(Error::NotProbability(format!("weights sum to {total}")));
    }
    let n = act[0].len();
    if act
        .iter()
        .any(|r| r.len() != n || r.iter().any(|&y| y >= n))
    {
        return Err(Error::NotAGroupAction(
            "action rows have inconsistent length or range".into(),
        ));
    }
    let mut rows = vec![vec![0.0; n]; n];
    for (gi, w) in weights.iter().enumerate() {
        for x in 0..n {
            rows[x][act[gi][x]] += w;
        }
    }
    TransitionKernel::new(rows)
}

/// Reachability in the directed graph with an edge `x → y` iff `P[x][y] > 0`.
/// `reach[x][y]` includes `x → x`.
pub fn reachability(kernel: &TransitionKernel) -> Vec<Vec<bool>> {
    let n = kernel.size();
    let mut reach = vec![vec![false; n]; n];
    for (x, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![x];
        row[x] = true;
        while let Some(u) = stack.pop() {
            for (v, seen) in row.iter_mut().enumerate() {
                if kernel.get(u, v) > 0.0 && !*seen {
                    *seen = true;
                    stack.push(v);
                }
            }
        }
    }
    reach
}

/// Closed communicating classes, each sorted, in order of smallest element.
pub fn recurrent_classes(kernel: &TransitionKernel) -> Vec<Vec<usize>> {
    let n = kernel.size();
    let reach = reachability(kernel);
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&y| reach[x][y] && reach[y][x]).collect();
        for &y in &class {
            seen[y] = true;
        }
        let closed = class
            .iter()
            .all(|&u| (0..n).all(|v| !reach[u][v] || class.contains(&v)));
        if closed {
            classes.push(class);
        }
    }
    classes
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
fn solve_real(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty");
        if a[piv][col].abs() < 1e-14 {
            return Err(Error::Singular { pivot: col });
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                let (upper, lower) = a.split_at_mut(r);
                for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                    *dst -= f * src;
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Ok(x)
}

/// Basis of `{h : Ph = h}`: for each recurrent class `C`, the probability
/// of eventual absorption in `C`.
pub fn classical_harmonic(kernel: &TransitionKernel) -> Result<Vec<Vec<f64>>> {
    let n = kernel.size();
    let classes = recurrent_classes(kernel);
    let recurrent: Vec<bool> = (0..n)
        .map(|x| classes.iter().any(|c| c.contains(&x)))
        .collect();
    let transient: Vec<usize> = (0..n).filter(|&x| !recurrent[x]).collect();
    let mut basis = Vec::with_capacity(classes.len());
    for class in &classes {
        let mut h = vec![0.0; n];
        for &x in class {
            h[x] = 1.0;
        }
        if !transient.is_empty() {
            // (I − P_TT) h_T = P_TC 1
            let a: Vec<Vec<f64>> = transient
                .iter()
                .map(|&x| {
                    transient
                        .iter()
                        .map(|&y| if x == y { 1.0 } else { 0.0 } - kernel.get(x, y))
                        .collect()
                })
                .collect();
            let b: Vec<f64> = transient
                .iter()
                .map(|&x| class.iter().map(|&y| kernel.get(x, y)).sum())
                .collect();
            for (&x, v) in transient.iter().zip(solve_real(a, b)?) {
                h[x] = v;
            }
        }
        basis.push(h);
    }
    Ok(basis)
}

/// Subgroup generated by `gens`, by closure under multiplication.
pub fn generated_subgroup(table: &[Vec<usize>], gens: &[usize]) -> Result<Vec<usize>> {
    let g = check_table(table)?;
    let mut member = vec![false; g];
    member[0] = true;
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = table[x][s];
            if !member[y] {
                member[y] = true;
                frontier.push(y);
            }
        }
    }
    Ok((0..g).filter(|&x| member[x]).collect())
}

/// Whether the support of `weights` generates the whole group.
pub fn support_generates(table: &[Vec<usize>], weights: &[f64]) -> Result<bool> {
    let support: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    Ok(generated_subgroup(table, &support)?.len() == table.len())
}
