//! Finite groups given by multiplication tables (element 0 is the identity).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::{cis, C64};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity `0`, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {r} has length {} (expected {n})",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!(
                    "row {r} contains out-of-range element {bad}"
                )));
            }
        }
        for (g, row) in table.iter().enumerate() {
            if table[0][g] != g || row[0] != g {
                return Err(Error::NotAGroup(format!(
                    "element 0 is not an identity for {g}"
                )));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
                Some(h) => inverse[g] = h,
                None => return Err(Error::NotAGroup(format!("element {g} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self { table, inverse })
    }

    pub fn trivial() -> Self {
        Self::new(vec![vec![0]]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Self {
        Self::new(
            (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        )
        .expect("cyclic group")
    }

    /// Dihedral group of order `2n`; `r^k s^f` has index `k + n f`.
    pub fn dihedral(n: usize) -> Self {
        let idx = |k: usize, f: usize| k % n + n * f;
        let table = (0..2 * n)
            .map(|x| {
                let (a, f) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (b, g) = (y % n, y / n);
                        let k = if f == 0 { a + b } else { a + n - b };
                        idx(k, (f + g) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::new(table).expect("dihedral group")
    }

    /// Quaternion group: indices `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit products over {1, i, j, k} as (sign, unit)
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (sx, ux) = (x % 2 == 1, x / 2);
                        let (sy, uy) = (y % 2 == 1, y / 2);
                        let (s, u) = UNIT[ux][uy];
                        2 * u + usize::from(s ^ sx ^ sy)
                    })
                    .collect()
            })
            .collect();
        Self::new(table).expect("quaternion group")
    }

    /// `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        Self::new(table).expect("direct product")
    }

    /// All groups of order at most 8 up to isomorphism, with short names.
    pub fn catalogue() -> Vec<(String, FiniteGroup)> {
        let z = Self::cyclic;
        vec![
            ("Z1".into(), Self::trivial()),
            ("Z2".into(), z(2)),
            ("Z3".into(), z(3)),
            ("Z4".into(), z(4)),
            ("Z2xZ2".into(), Self::direct_product(&z(2), &z(2))),
            ("Z5".into(), z(5)),
            ("Z6".into(), z(6)),
            ("S3".into(), Self::dihedral(3)),
            ("Z7".into(), z(7)),
            ("Z8".into(), z(8)),
            ("Z4xZ2".into(), Self::direct_product(&z(4), &z(2))),
            (
                "Z2xZ2xZ2".into(),
                Self::direct_product(&Self::direct_product(&z(2), &z(2)), &z(2)),
            ),
            ("D4".into(), Self::dihedral(4)),
            ("Q8".into(), Self::quaternion()),
        ]
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order())
            .map(|g| self.element_order(g))
            .fold(1, lcm)
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::new();
        set.insert(0usize);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Every subgroup, ordered by size and then lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut found: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        let mut queue: Vec<Vec<usize>> = vec![vec![0]];
        found.insert((1, vec![0]));
        // every subgroup is reached by adjoining one element at a time
        while let Some(h) = queue.pop() {
            for g in 0..n {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.generated_subgroup(&gens);
                if found.insert((k.len(), k.clone())) {
                    queue.push(k);
                }
            }
        }
        found.into_iter().map(|(_, k)| k).collect()
    }

    /// Left cosets `gK`, ordered by smallest representative.
    pub fn left_cosets(&self, subgroup: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut cosets = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = subgroup.iter().map(|&k| self.mul(g, k)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    /// Action table `act[g][x]` of left multiplication on left cosets.
    pub fn coset_action(&self, subgroup: &[usize]) -> Vec<Vec<usize>> {
        let cosets = self.left_cosets(subgroup);
        let which = |e: usize| {
            cosets
                .iter()
                .position(|c| c.binary_search(&e).is_ok())
                .expect("partition")
        };
        (0..self.order())
            .map(|g| cosets.iter().map(|c| which(self.mul(g, c[0]))).collect())
            .collect()
    }

    /// One-dimensional characters as exponent vectors: `χ(g) = exp(2πi k_g / e)`
    /// with `e` the group exponent. The trivial character comes first.
    pub fn linear_character_exponents(&self) -> (usize, Vec<Vec<usize>>) {
        let e = self.exponent();
        let n = self.order();
        let mut gens: Vec<usize> = Vec::new();
        let mut span = vec![0usize];
        for g in 0..n {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.generated_subgroup(&gens);
            }
        }
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        let total = e.pow(gens.len() as u32);
        for code in 0..total {
            let mut assign = Vec::with_capacity(gens.len());
            let mut rest = code;
            for _ in 0..gens.len() {
                assign.push(rest % e);
                rest /= e;
            }
            if let Some(chi) = self.extend_character(&gens, &assign, e) {
                out.insert(chi);
            }
        }
        (e, out.into_iter().collect())
    }

    pub fn linear_characters(&self) -> Vec<Vec<C64>> {
        let (e, chars) = self.linear_character_exponents();
        chars
            .into_iter()
            .map(|k| {
                k.into_iter()
                    .map(|x| cis(2.0 * PI * x as f64 / e as f64))
                    .collect()
            })
            .collect()
    }

    fn extend_character(&self, gens: &[usize], assign: &[usize], e: usize) -> Option<Vec<usize>> {
        let n = self.order();
        let mut val = vec![usize::MAX; n];
        val[0] = 0;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for (&g, &k) in gens.iter().zip(assign) {
                let y = self.mul(x, g);
                let v = (val[x] + k) % e;
                if val[y] == usize::MAX {
                    val[y] = v;
                    frontier.push(y);
                } else if val[y] != v {
                    return None;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if val[self.mul(a, b)] != (val[a] + val[b]) % e {
                    return None;
                }
            }
        }
        Some(val)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
