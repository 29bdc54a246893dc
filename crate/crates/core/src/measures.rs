//! States and measures on a finite quantum group.
//!
//! A functional is stored by its values on the basis, `μ(e_i)`. At finite
//! dimension every functional is normal and has a density with respect to
//! the (tracial) Haar state.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::hopf::{Element, HopfData};
use crate::numeric::{self, c, cabs, Tolerance, C64, ONE, ZERO};
use crate::verify::VerificationReport;

/// A linear functional in dual coordinates.
pub type Functional = Vec<C64>;

pub fn counit(h: &HopfData) -> Functional {
    h.counit().to_vec()
}

pub fn haar(h: &HopfData) -> Functional {
    h.haar().to_vec()
}

/// The dual basis functional `e_i ↦ 1`. On `C(G)` this is the point mass at `i`.
pub fn point_mass(h: &HopfData, i: usize) -> Result<Functional> {
    if i >= h.dim() {
        return Err(Error::InvalidArgument("point mass index out of range"));
    }
    Ok(numeric::unit_vector(h.dim(), i))
}

/// Uniform weights on `subset` (normalized to total mass 1).
pub fn uniform_on(h: &HopfData, subset: &[usize]) -> Result<Functional> {
    if subset.is_empty() || subset.iter().any(|&i| i >= h.dim()) {
        return Err(Error::InvalidArgument(
            "subset must be non-empty and in range",
        ));
    }
    let mut mu = vec![ZERO; h.dim()];
    let w = c(1.0 / subset.len() as f64);
    for &i in subset {
        mu[i] += w;
    }
    Ok(mu)
}

/// The functional `e_i ↦ [i ∈ subset]`. On `C[G]` with a subgroup `K`
/// this is the positive-definite function `1_K`.
pub fn indicator(h: &HopfData, subset: &[usize]) -> Result<Functional> {
    if subset.iter().any(|&i| i >= h.dim()) {
        return Err(Error::InvalidArgument("subset index out of range"));
    }
    let mut mu = vec![ZERO; h.dim()];
    for &i in subset {
        mu[i] = ONE;
    }
    Ok(mu)
}

/// `Σ w_i μ_i`.
pub fn convex_combination(parts: &[(f64, Functional)]) -> Result<Functional> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::InvalidArgument("empty combination"));
    };
    let mut out = vec![ZERO; first.len()];
    for (w, mu) in parts {
        if mu.len() != out.len() {
            return Err(Error::DimensionMismatch {
                context: "convex_combination",
                expected: out.len(),
                found: mu.len(),
            });
        }
        for (o, m) in out.iter_mut().zip(mu) {
            *o += c(*w) * m;
        }
    }
    Ok(out)
}

fn check_dim(h: &HopfData, mu: &[C64]) -> Result<()> {
    if mu.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            context: "functional",
            expected: h.dim(),
            found: mu.len(),
        });
    }
    Ok(())
}

/// Normalization, hermiticity and positivity of `μ`.
pub fn check_state(h: &HopfData, mu: &[C64], tol: &Tolerance) -> VerificationReport {
    h.algebra().check_state(mu, tol)
}

pub fn is_state(h: &HopfData, mu: &[C64], tol: &Tolerance) -> bool {
    check_state(h, mu, tol).passed()
}

/// Positivity without normalization: `[μ(e_i* e_j)]` is PSD.
pub fn is_positive(alg: &Algebra, mu: &[C64], tol: &Tolerance) -> bool {
    if mu.len() != alg.dim() {
        return false;
    }
    let gram = alg.functional_gram(mu);
    gram.hermitian_deviation() <= tol.eps_compare && numeric::is_psd(&gram, tol).unwrap_or(false)
}

/// `(μ⋆ν)(e_i) = Σ_{j,k} Δ[i][j][k] μ(e_j) ν(e_k)`, computed both as
/// `μ((ι⊗ν)Γ)` and `ν((μ⊗ι)Γ)`; errors if the two disagree.
pub fn convolve(h: &HopfData, mu: &[C64], nu: &[C64], tol: &Tolerance) -> Result<Functional> {
    check_dim(h, mu)?;
    check_dim(h, nu)?;
    let d = h.dim();
    let delta = h.comult_tensor();
    let mut via_right = vec![ZERO; d];
    let mut via_left = vec![ZERO; d];
    for i in 0..d {
        let block = &delta[i * d * d..(i + 1) * d * d];
        // μ applied to (ι⊗ν)Γ(e_i)
        let mut s = ZERO;
        for j in 0..d {
            let y: C64 = (0..d).map(|k| block[j * d + k] * nu[k]).sum();
            s += mu[j] * y;
        }
        via_right[i] = s;
        // ν applied to (μ⊗ι)Γ(e_i)
        let mut t = ZERO;
        for k in 0..d {
            let y: C64 = (0..d).map(|j| block[j * d + k] * mu[j]).sum();
            t += nu[k] * y;
        }
        via_left[i] = t;
    }
    let dev = numeric::vec_max_abs(&numeric::vec_sub(&via_right, &via_left));
    if dev > tol.eps_compare {
        return Err(Error::ConvolutionMismatch { deviation: dev });
    }
    Ok(via_right)
}

/// `μ^n`, left-associated.
pub fn power(h: &HopfData, mu: &[C64], n: usize, tol: &Tolerance) -> Result<Functional> {
    if n == 0 {
        return Err(Error::InvalidArgument("convolution power needs n ≥ 1"));
    }
    check_dim(h, mu)?;
    let mut acc = mu.to_vec();
    for _ in 1..n {
        acc = convolve(h, &acc, mu, tol)?;
    }
    Ok(acc)
}

/// The unique `ρ` with `μ(a) = h(ρ a)`.
pub fn density(h: &HopfData, mu: &[C64]) -> Result<Element> {
    check_dim(h, mu)?;
    h.algebra().density(h.haar(), mu)
}

/// Dimension of the range of the support projection of a positive `μ`.
pub fn support_rank(h: &HopfData, mu: &[C64], tol: &Tolerance) -> Result<usize> {
    check_dim(h, mu)?;
    if !is_positive(h.algebra(), mu, tol) {
        return Err(Error::NotPositive);
    }
    let rho = density(h, mu)?;
    Ok(h.gns(tol)?.rank(&rho, tol))
}

/// Support ranks of the Cesàro sums `σ_N = (1/N) Σ_{n≤N} μ^n`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Nondegeneracy {
    /// `ranks[N-1]` is the support rank of `σ_N`.
    pub ranks: Vec<usize>,
    pub full_rank: usize,
    pub nondegenerate: bool,
    pub definition: &'static str,
}

pub const NONDEGENERACY_DEFINITION: &str =
    "full support of the Cesàro sum of convolution powers (modeling choice)";

/// Computes support ranks of `σ_N` for `N = 1, 2, …` until the rank is
/// full or stops increasing (it then stays constant; `N ≤ d` suffices).
pub fn nondegeneracy(h: &HopfData, mu: &[C64], tol: &Tolerance) -> Result<Nondegeneracy> {
    let d = h.dim();
    let gns = h.gns(tol)?;
    let mut ranks = Vec::new();
    let mut sum = vec![ZERO; d];
    let mut pow = mu.to_vec();
    for n in 1..=d + 1 {
        if n > 1 {
            pow = convolve(h, &pow, mu, tol)?;
        }
        sum = numeric::vec_add(&sum, &pow);
        let sigma = numeric::vec_scale(&sum, c(1.0 / n as f64));
        if !is_positive(h.algebra(), &sigma, tol) {
            return Err(Error::NotPositive);
        }
        let r = gns.rank(&density(h, &sigma)?, tol);
        let stalled = ranks.last() == Some(&r);
        ranks.push(r);
        if r == d || stalled {
            break;
        }
    }
    let last = *ranks.last().unwrap_or(&0);
    Ok(Nondegeneracy {
        ranks,
        full_rank: d,
        nondegenerate: last == d,
        definition: NONDEGENERACY_DEFINITION,
    })
}

pub fn is_nondegenerate(h: &HopfData, mu: &[C64], tol: &Tolerance) -> Result<bool> {
    Ok(nondegeneracy(h, mu, tol)?.nondegenerate)
}

/// Decomposition `μ^n = ω_a + ω_s` witnessing the spread-out property.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadOut {
    pub power: usize,
    pub absolutely_continuous: Functional,
    pub singular: Functional,
}

/// Every state at finite dimension is spread out: `n = 1`, `ω_a = μ`, `ω_s = 0`.
pub fn spread_out(mu: &[C64]) -> SpreadOut {
    SpreadOut {
        power: 1,
        absolutely_continuous: mu.to_vec(),
        singular: vec![ZERO; mu.len()],
    }
}

pub fn is_spread_out(mu: &[C64]) -> bool {
    let w = spread_out(mu);
    w.power >= 1 && w.absolutely_continuous.iter().any(|z| cabs(*z) > 0.0)
}

/// Largest deviation of `μ⋆e_i^* − e_i^*⋆μ` over the dual basis.
pub fn centrality_defect(h: &HopfData, mu: &[C64], tol: &Tolerance) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..h.dim() {
        let e = numeric::unit_vector(h.dim(), i);
        let a = convolve(h, mu, &e, tol)?;
        let b = convolve(h, &e, mu, tol)?;
        worst = worst.max(numeric::vec_max_abs(&numeric::vec_sub(&a, &b)));
    }
    Ok(worst)
}

/// Validates a classical probability vector.
pub fn check_probability(weights: &[f64]) -> Result<()> {
    if weights.iter().any(|w| !w.is_finite() || *w < -1e-12) {
        return Err(Error::NotProbability(format!(
            "negative or non-finite weight in {weights:?}"
        )));
    }
    let s: f64 = weights.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(Error::NotProbability(format!("weights sum to {s}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    fn t() -> Tolerance {
        Tolerance::default()
    }

    fn close(a: &[C64], b: &[C64]) -> bool {
        numeric::vec_max_abs(&numeric::vec_sub(a, b)) < 1e-12
    }

    fn cz(n: usize) -> HopfData {
        HopfData::function_algebra(&FiniteGroup::cyclic(n)).unwrap()
    }

    #[test]
    fn state_examples() {
        let s3 = HopfData::group_algebra(&FiniteGroup::dihedral(3)).unwrap();
        for h in [cz(2), s3] {
            assert!(is_state(&h, &counit(&h), &t()));
            assert!(is_state(&h, &haar(&h), &t()));
        }
        let h = cz(2);
        let signed = vec![ONE, -ONE];
        assert!(!is_state(&h, &signed, &t()));
    }

    #[test]
    fn convolution_examples() {
        let h = cz(2);
        let d1 = point_mass(&h, 1).unwrap();
        assert!(close(
            &convolve(&h, &d1, &d1, &t()).unwrap(),
            &point_mass(&h, 0).unwrap()
        ));
        let g = HopfData::group_algebra(&FiniteGroup::dihedral(3)).unwrap();
        let mu = convex_combination(&[(0.5, counit(&g)), (0.5, haar(&g))]).unwrap();
        let eps = counit(&g);
        assert!(close(&convolve(&g, &eps, &mu, &t()).unwrap(), &mu));
        assert!(close(&convolve(&g, &mu, &eps, &t()).unwrap(), &mu));
        assert!(close(
            &convolve(&g, &haar(&g), &mu, &t()).unwrap(),
            &haar(&g)
        ));
    }

    #[test]
    fn power_examples() {
        let h = cz(4);
        assert!(close(
            &power(&h, &counit(&h), 5, &t()).unwrap(),
            &counit(&h)
        ));
        let d1 = point_mass(&h, 1).unwrap();
        assert!(close(
            &power(&h, &d1, 2, &t()).unwrap(),
            &point_mass(&h, 2).unwrap()
        ));
        let u = uniform_on(&h, &[0, 1]).unwrap();
        let u2 = power(&h, &u, 2, &t()).unwrap();
        assert!(close(&u2, &[c(0.25), c(0.5), c(0.25), ZERO]));
    }

    #[test]
    fn density_examples() {
        let h = cz(2);
        assert!(close(&density(&h, &haar(&h)).unwrap(), h.unit()));
        let d0 = point_mass(&h, 0).unwrap();
        assert!(close(&density(&h, &d0).unwrap(), &[c(2.0), ZERO]));
    }

    #[test]
    fn support_rank_examples() {
        let h = cz(2);
        assert_eq!(support_rank(&h, &haar(&h), &t()).unwrap(), 2);
        assert_eq!(
            support_rank(&h, &point_mass(&h, 0).unwrap(), &t()).unwrap(),
            1
        );
        let g = HopfData::group_algebra(&FiniteGroup::cyclic(2)).unwrap();
        assert!(close(&density(&g, &counit(&g)).unwrap(), &[ONE, ONE]));
        assert_eq!(support_rank(&g, &counit(&g), &t()).unwrap(), 1);
        assert_eq!(
            support_rank(&h, &[ONE, -ONE], &t()),
            Err(Error::NotPositive)
        );
    }

    #[test]
    fn nondegeneracy_examples() {
        let h = cz(4);
        let r = nondegeneracy(&h, &point_mass(&h, 1).unwrap(), &t()).unwrap();
        assert!(r.nondegenerate);
        assert_eq!(r.ranks, vec![1, 2, 3, 4]);
        let r = nondegeneracy(&h, &point_mass(&h, 2).unwrap(), &t()).unwrap();
        assert!(!r.nondegenerate);
        assert_eq!(*r.ranks.last().unwrap(), 2);
        assert!(is_nondegenerate(&h, &haar(&h), &t()).unwrap());
        let g = HopfData::group_algebra(&FiniteGroup::cyclic(4)).unwrap();
        assert!(!is_nondegenerate(&g, &counit(&g), &t()).unwrap());
        assert!(is_nondegenerate(&g, &haar(&g), &t()).unwrap());
    }

    #[test]
    fn every_state_is_spread_out() {
        let h = cz(2);
        let g = HopfData::group_algebra(&FiniteGroup::dihedral(3)).unwrap();
        for mu in [haar(&h), counit(&h), counit(&g), haar(&g)] {
            assert!(is_spread_out(&mu));
            let w = spread_out(&mu);
            assert_eq!(w.power, 1);
            assert!(w.singular.iter().all(|z| *z == ZERO));
        }
    }

    #[test]
    fn centrality() {
        let s3 = FiniteGroup::dihedral(3);
        let f = HopfData::function_algebra(&s3).unwrap();
        assert!(centrality_defect(&f, &point_mass(&f, 0).unwrap(), &t()).unwrap() < 1e-12);
        assert!(centrality_defect(&f, &point_mass(&f, 1).unwrap(), &t()).unwrap() > 0.5);
        assert!(centrality_defect(&f, &uniform_on(&f, &[1, 2]).unwrap(), &t()).unwrap() < 1e-12);
        assert!(centrality_defect(&f, &uniform_on(&f, &[3, 4, 5]).unwrap(), &t()).unwrap() < 1e-12);
        let g = HopfData::group_algebra(&s3).unwrap();
        assert!(centrality_defect(&g, &counit(&g), &t()).unwrap() < 1e-12);
    }

    #[test]
    fn probability_vectors() {
        assert!(check_probability(&[0.5, 0.5]).is_ok());
        assert!(check_probability(&[0.5, 0.6]).is_err());
        assert!(check_probability(&[1.5, -0.5]).is_err());
    }
}
