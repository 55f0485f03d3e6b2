//! Finite groups by multiplication table, with the constructions the Hopf
//! layer consumes: automorphisms and their orbits, characters and
//! orthogonal idempotents of abelian group algebras, derived series,
//! quotients, and the group-algebra Hopf structure.
//!
//! Every group is a complete multiplication table over element indices
//! `0 .. order`, validated on construction (unique two-sided identity,
//! inverses, exhaustive associativity), so downstream code never needs to
//! re-derive group axioms. Elements carry printable names for reports.
//!
//! Abelian groups built from explicit cyclic factors additionally remember
//! their coordinate presentation `Z_{n_1} x ... x Z_{n_k}`; the orthogonal
//! idempotent basis of the group algebra — the discrete Fourier transform of
//! the group basis — is only available through such a presentation, because
//! its formulas index idempotents by character coordinates.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num::integer::lcm;
use serde::Serialize;

use crate::algebra::{AlgebraData, CoalgebraData, HopfData};
use crate::cyclotomic::{root_of_unity, CycScalar, FieldContext};
use crate::error::{HopfError, Result};
use crate::linalg::{tensor_index, SparseVec};

/// Upper bound on constructed group orders and enumerated lattice sizes,
/// read from `HOPFFORGE_ORDER_CAP` (default 256).
pub fn order_cap() -> usize {
    std::env::var("HOPFFORGE_ORDER_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(256)
}

/// Coordinate presentation of an abelian group as `Z_{n_1} x ... x Z_{n_k}`
/// with row-major element indexing (last coordinate fastest).
#[derive(Clone, Debug, Serialize)]
pub struct AbelianPresentation {
    /// Cyclic factor orders, in indexing order.
    pub orders: Vec<u64>,
}

impl AbelianPresentation {
    /// Mixed-radix coordinates of element `index`.
    pub fn coords_of(&self, mut index: usize) -> Vec<u64> {
        let mut coords = vec![0u64; self.orders.len()];
        for j in (0..self.orders.len()).rev() {
            coords[j] = (index as u64) % self.orders[j];
            index /= self.orders[j] as usize;
        }
        coords
    }

    /// Element index of mixed-radix coordinates (reduced mod each order).
    pub fn index_of(&self, coords: &[u64]) -> usize {
        let mut idx = 0usize;
        for (j, &n) in self.orders.iter().enumerate() {
            idx = idx * n as usize + (coords[j] % n) as usize;
        }
        idx
    }

    /// Group order.
    pub fn order(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }
}

/// A finite group as a validated multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    /// `table[i * order + j]` is the index of `g_i g_j`.
    table: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
    names: Vec<String>,
    abelian: Option<AbelianPresentation>,
}

impl FiniteGroup {
    /// Validates a raw table: square shape, in-range entries, a unique
    /// two-sided identity, inverses, and exhaustive associativity.
    pub fn from_table(table: Vec<usize>, names: Vec<String>) -> Result<Self> {
        let order = names.len();
        if order == 0 {
            return Err(HopfError::Malformed("empty group".into()));
        }
        if table.len() != order * order {
            return Err(HopfError::Malformed(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&e| e >= order) {
            return Err(HopfError::Malformed(format!(
                "table entry {bad} out of range for order {order}"
            )));
        }
        let mut identity = None;
        for e in 0..order {
            if (0..order).all(|j| table[e * order + j] == j && table[j * order + e] == j) {
                if identity.is_some() {
                    return Err(HopfError::Malformed("multiple identities".into()));
                }
                identity = Some(e);
            }
        }
        let identity = identity
            .ok_or_else(|| HopfError::Malformed("no two-sided identity element".into()))?;
        let mut inverse = vec![usize::MAX; order];
        for i in 0..order {
            match (0..order)
                .find(|&j| table[i * order + j] == identity && table[j * order + i] == identity)
            {
                Some(j) => inverse[i] = j,
                None => {
                    return Err(HopfError::Malformed(format!(
                        "element {i} has no two-sided inverse"
                    )))
                }
            }
        }
        for i in 0..order {
            for j in 0..order {
                let ij = table[i * order + j];
                for k in 0..order {
                    if table[ij * order + k] != table[i * order + table[j * order + k]] {
                        return Err(HopfError::Malformed(format!(
                            "associativity fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order,
            table,
            inverse,
            identity,
            names,
            abelian: None,
        })
    }

    /// The cyclic group `Z_n` with elements `g^0 .. g^(n-1)`.
    pub fn cyclic(n: u64) -> Self {
        Self::product_of_cyclics(&[n])
    }

    /// The direct product of cyclic groups with the given orders, indexed
    /// row-major with the last coordinate fastest.
    pub fn product_of_cyclics(orders: &[u64]) -> Self {
        assert!(!orders.is_empty() && orders.iter().all(|&n| n >= 1));
        let pres = AbelianPresentation {
            orders: orders.to_vec(),
        };
        let order = pres.order();
        let mut table = vec![0usize; order * order];
        for i in 0..order {
            let a = pres.coords_of(i);
            for j in 0..order {
                let b = pres.coords_of(j);
                let sum: Vec<u64> = a
                    .iter()
                    .zip(&b)
                    .zip(orders)
                    .map(|((x, y), n)| (x + y) % n)
                    .collect();
                table[i * order + j] = pres.index_of(&sum);
            }
        }
        let names = (0..order)
            .map(|i| {
                let c = pres.coords_of(i);
                if orders.len() == 1 {
                    format!("g^{}", c[0])
                } else {
                    format!(
                        "({})",
                        c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                    )
                }
            })
            .collect();
        let mut g = Self::from_table(table, names).expect("cyclic product is a group");
        g.abelian = Some(pres);
        g
    }

    /// Direct product, indexed `a_index * |B| + b_index`. Preserves abelian
    /// presentations when both factors carry one.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let order = a.order * b.order;
        let mut table = vec![0usize; order * order];
        let idx = |x: usize, y: usize| x * b.order + y;
        for xa in 0..a.order {
            for xb in 0..b.order {
                for ya in 0..a.order {
                    for yb in 0..b.order {
                        table[idx(xa, xb) * order + idx(ya, yb)] =
                            idx(a.mul(xa, ya), b.mul(xb, yb));
                    }
                }
            }
        }
        let names = (0..a.order)
            .flat_map(|xa| {
                (0..b.order).map(move |xb| format!("{}*{}", a.names[xa], b.names[xb]))
            })
            .collect();
        let mut g = Self::from_table(table, names).expect("direct product is a group");
        g.abelian = match (&a.abelian, &b.abelian) {
            (Some(pa), Some(pb)) => Some(AbelianPresentation {
                orders: pa.orders.iter().chain(&pb.orders).copied().collect(),
            }),
            _ => None,
        };
        g
    }

    /// The dihedral group of order `2n`: rotations `r^i` at indices
    /// `0..n`, reflections `r^i s` at indices `n..2n`.
    pub fn dihedral(n: u64) -> Self {
        assert!(n >= 1);
        let n = n as usize;
        let order = 2 * n;
        let idx = |i: usize, j: usize| i % n + n * (j % 2);
        let mut table = vec![0usize; order * order];
        for i in 0..n {
            for j in 0..2 {
                for k in 0..n {
                    for l in 0..2 {
                        // (r^i s^j)(r^k s^l): s r^k = r^(-k) s.
                        let rot = if j == 0 { i + k } else { i + n - k };
                        table[idx(i, j) * order + idx(k, l)] = idx(rot % n, j + l);
                    }
                }
            }
        }
        let names = (0..order)
            .map(|t| {
                if t < n {
                    format!("r^{}", t)
                } else {
                    format!("r^{}s", t - n)
                }
            })
            .collect();
        Self::from_table(table, names).expect("dihedral table is a group")
    }

    /// Closes a set of permutation generators (all of one length) under
    /// composition, with the global order cap. Returns the group together
    /// with the permutation realizing each element, in discovery order; the
    /// identity is element 0.
    pub fn from_perm_gens(gens: &[Vec<usize>]) -> Result<(Self, Vec<Vec<usize>>)> {
        Self::from_perm_gens_with_cap(gens, order_cap())
    }

    /// [`FiniteGroup::from_perm_gens`] with an explicit order cap.
    pub fn from_perm_gens_with_cap(
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<(Self, Vec<Vec<usize>>)> {
        let Some(first) = gens.first() else {
            return Err(HopfError::Malformed("no permutation generators".into()));
        };
        let width = first.len();
        for g in gens {
            if g.len() != width {
                return Err(HopfError::Malformed(
                    "permutation generators have mixed lengths".into(),
                ));
            }
            let mut seen = vec![false; width];
            for &x in g {
                if x >= width || seen[x] {
                    return Err(HopfError::Malformed(format!(
                        "generator {:?} is not a permutation",
                        g
                    )));
                }
                seen[x] = true;
            }
        }
        let identity: Vec<usize> = (0..width).collect();
        let mut elems: Vec<Vec<usize>> = vec![identity.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(at) = queue.pop_front() {
            for g in gens {
                let cur = &elems[at];
                // Right-multiply: (cur . g)(x) = cur[g[x]].
                let next: Vec<usize> = (0..width).map(|x| cur[g[x]]).collect();
                if !index.contains_key(&next) {
                    if elems.len() >= cap {
                        return Err(HopfError::OrderCap {
                            what: "permutation group closure".into(),
                            reached: elems.len() + 1,
                            cap,
                        });
                    }
                    index.insert(next.clone(), elems.len());
                    elems.push(next);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        let order = elems.len();
        let mut table = vec![0usize; order * order];
        for i in 0..order {
            for j in 0..order {
                let prod: Vec<usize> = (0..width).map(|x| elems[i][elems[j][x]]).collect();
                table[i * order + j] = *index.get(&prod).expect("closed under products");
            }
        }
        let names = elems.iter().map(|p| cycle_notation(p)).collect();
        Ok((Self::from_table(table, names)?, elems))
    }

    /// Group order.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Identity element index.
    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Product of element indices.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j]
    }

    /// Inverse of an element index.
    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// `g^k` for any integer exponent.
    pub fn power(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse[g] } else { g };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity;
        let mut cur = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, cur);
            }
            cur = self.mul(cur, cur);
            e >>= 1;
        }
        acc
    }

    /// Printable element name.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// All element names in index order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Coordinate presentation, if this group was built from cyclic factors.
    pub fn presentation(&self) -> Option<&AbelianPresentation> {
        self.abelian.as_ref()
    }

    /// Multiplicative order of an element.
    pub fn order_of(&self, i: usize) -> u64 {
        let mut k = 1u64;
        let mut cur = i;
        while cur != self.identity {
            cur = self.mul(cur, i);
            k += 1;
        }
        k
    }

    /// Exponent: least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        (0..self.order).fold(1u64, |e, i| lcm(e, self.order_of(i)))
    }

    /// True when all elements commute.
    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    /// Elements commuting with everything, ascending.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    /// True when the sorted element list forms a subgroup.
    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: std::collections::BTreeSet<usize> = elems.iter().copied().collect();
        set.contains(&self.identity)
            && elems
                .iter()
                .all(|&a| elems.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// True when the subgroup is normal.
    pub fn is_normal(&self, elems: &[usize]) -> bool {
        if !self.is_subgroup(elems) {
            return false;
        }
        let set: std::collections::BTreeSet<usize> = elems.iter().copied().collect();
        (0..self.order).all(|g| {
            elems
                .iter()
                .all(|&x| set.contains(&self.mul(self.mul(g, x), self.inv(g))))
        })
    }

    /// Commutator subgroup, generated by all `[a, b] = a b a^-1 b^-1`.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        self.commutator_of(&(0..self.order).collect::<Vec<_>>())
    }

    fn commutator_of(&self, elems: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        for &a in elems {
            for &b in elems {
                gens.push(self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))));
            }
        }
        gens.sort_unstable();
        gens.dedup();
        self.subgroup_closure(&gens)
    }

    /// Derived series `G >= G' >= G'' >= ...` until it stabilizes.
    pub fn derived_series(&self) -> Vec<Vec<usize>> {
        let mut series = vec![(0..self.order).collect::<Vec<_>>()];
        loop {
            let next = self.commutator_of(series.last().expect("nonempty"));
            if &next == series.last().expect("nonempty") {
                return series;
            }
            series.push(next);
        }
    }

    /// True when the derived series reaches the trivial subgroup.
    pub fn is_solvable(&self) -> bool {
        self.derived_series()
            .last()
            .map(|s| s == &[self.identity])
            .unwrap_or(false)
    }

    /// Quotient by a normal subgroup. Returns the quotient group (cosets
    /// ordered by least member) and the coset index of each element.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(normal) {
            return Err(HopfError::Precondition(
                "quotient requires a normal subgroup".into(),
            ));
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..self.order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(g);
            for &x in normal {
                coset_of[self.mul(g, x)] = id;
            }
        }
        let q = reps.len();
        let mut table = vec![0usize; q * q];
        for a in 0..q {
            for b in 0..q {
                table[a * q + b] = coset_of[self.mul(reps[a], reps[b])];
            }
        }
        let names = reps.iter().map(|&r| format!("[{}]", self.names[r])).collect();
        Ok((FiniteGroup::from_table(table, names)?, coset_of))
    }

    /// Elementary divisors of an abelian group — the multiset of prime
    /// power orders `p^a` of its cyclic factors, ascending — recovered
    /// purely from element order statistics.
    pub fn abelian_invariants(&self) -> Result<Vec<u64>> {
        if !self.is_abelian() {
            return Err(HopfError::Precondition(
                "abelian invariants require an abelian group".into(),
            ));
        }
        let orders: Vec<u64> = (0..self.order).map(|i| self.order_of(i)).collect();
        let n = self.order as u64;
        let mut primes = Vec::new();
        let mut m = n;
        let mut p = 2u64;
        while p * p <= m {
            if m % p == 0 {
                primes.push(p);
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        let mut divisors = Vec::new();
        for p in primes {
            // t_j = log_p #{g : ord(g) | p^j}; the differences t_j - t_(j-1)
            // form the conjugate of the exponent partition (a_i).
            let mut t = vec![0u32];
            let mut pj = 1u64;
            loop {
                pj *= p;
                let count = orders.iter().filter(|&&o| pj % o == 0).count() as u64;
                let mut log = 0u32;
                let mut c = count;
                while c > 1 {
                    assert_eq!(c % p, 0, "torsion count must be a power of {p}");
                    c /= p;
                    log += 1;
                }
                if log == *t.last().expect("nonempty") {
                    break;
                }
                t.push(log);
            }
            let diffs: Vec<u32> = (1..t.len()).map(|j| t[j] - t[j - 1]).collect();
            // Conjugate partition: a_i = #{j : diffs[j] >= i}.
            for i in 1..=diffs.iter().copied().max().unwrap_or(0) {
                let a = diffs.iter().filter(|&&d| d >= i).count() as u32;
                divisors.push(p.pow(a));
            }
        }
        divisors.sort_unstable();
        Ok(divisors)
    }
}

/// Renders a permutation in cycle notation, e.g. `(0 1 2)(3 4)`; the
/// identity is `()`.
pub fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&x.to_string());
            x = perm[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// A group automorphism, stored as the image of each element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAutomorphism {
    map: Vec<usize>,
}

impl GroupAutomorphism {
    /// Wraps and verifies: the map must be a bijection respecting products.
    pub fn new(group: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if map.len() != n {
            return Err(HopfError::Malformed(format!(
                "automorphism map has {} entries for order {n}",
                map.len()
            )));
        }
        let mut seen = vec![false; n];
        for &y in &map {
            if y >= n || seen[y] {
                return Err(HopfError::Precondition(
                    "automorphism map is not a bijection".into(),
                ));
            }
            seen[y] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if map[group.mul(i, j)] != group.mul(map[i], map[j]) {
                    return Err(HopfError::Precondition(format!(
                        "map is not a homomorphism at ({i},{j})"
                    )));
                }
            }
        }
        Ok(GroupAutomorphism { map })
    }

    /// The identity automorphism.
    pub fn identity(group: &FiniteGroup) -> Self {
        GroupAutomorphism {
            map: (0..group.order()).collect(),
        }
    }

    /// The inversion map `x -> x^-1`; an automorphism exactly when the
    /// group is abelian (verified).
    pub fn inversion(group: &FiniteGroup) -> Result<Self> {
        Self::new(group, (0..group.order()).map(|i| group.inv(i)).collect())
    }

    /// Conjugation `x -> h x h^-1`.
    pub fn conjugation(group: &FiniteGroup, h: usize) -> Self {
        let map = (0..group.order())
            .map(|x| group.mul(group.mul(h, x), group.inv(h)))
            .collect();
        GroupAutomorphism { map }
    }

    /// The linear map on an abelian presentation given by an integer
    /// matrix: coordinates transform by `c -> M c` mod the factor orders.
    /// Verified to be an automorphism.
    pub fn abelian_linear(group: &FiniteGroup, matrix: &[Vec<u64>]) -> Result<Self> {
        let pres = group.presentation().ok_or_else(|| {
            HopfError::Precondition("linear automorphism needs a coordinate presentation".into())
        })?;
        let k = pres.orders.len();
        if matrix.len() != k || matrix.iter().any(|row| row.len() != k) {
            return Err(HopfError::Malformed(format!(
                "matrix must be {k} x {k}"
            )));
        }
        let map = (0..group.order())
            .map(|i| {
                let c = pres.coords_of(i);
                let image: Vec<u64> = (0..k)
                    .map(|r| {
                        (0..k)
                            .map(|s| matrix[r][s].wrapping_mul(c[s]) % pres.orders[r])
                            .sum::<u64>()
                            % pres.orders[r]
                    })
                    .collect();
                pres.index_of(&image)
            })
            .collect();
        Self::new(group, map)
    }

    /// Applies the automorphism to an element index.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Underlying index map.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &GroupAutomorphism) -> GroupAutomorphism {
        GroupAutomorphism {
            map: other.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    /// `self^k` for `k >= 0`.
    pub fn pow(&self, k: u64) -> GroupAutomorphism {
        let mut acc = GroupAutomorphism {
            map: (0..self.map.len()).collect(),
        };
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Multiplicative order (least common multiple of cycle lengths).
    pub fn order(&self) -> u64 {
        self.orbits()
            .iter()
            .fold(1u64, |o, orbit| lcm(o, orbit.len() as u64))
    }

    /// Orbits on element indices, each starting at its least member;
    /// orbits ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.map.len()];
        let mut orbits = Vec::new();
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                orbit.push(x);
                x = self.map[x];
            }
            orbits.push(orbit);
        }
        orbits
    }
}

/// All characters of an abelian group, as rows of values `chi(g_i)`.
///
/// Characters are found by extending along a chain of cyclic steps: pick
/// the least element `g` outside the domain subgroup, find the least
/// `m >= 1` with `g^m` inside, and branch over the `m` solutions of
/// `chi(g)^m = chi(g^m)` among exponent-order roots of unity. The result
/// is deterministic and contains exactly `|G|` characters. Requires the
/// group exponent to divide the conductor.
pub fn characters_abelian(
    group: &FiniteGroup,
    ctx: &Arc<FieldContext>,
) -> Result<Vec<Vec<CycScalar>>> {
    if !group.is_abelian() {
        return Err(HopfError::Precondition(
            "characters of the full element set require an abelian group".into(),
        ));
    }
    let e = group.exponent();
    if ctx.conductor() % e != 0 {
        return Err(HopfError::RootOrder {
            r: e,
            conductor: ctx.conductor(),
        });
    }
    let n = group.order();
    // States: exponent of zeta_e per covered element (usize::MAX = not yet
    // covered).
    let mut complete: Vec<Vec<u64>> = Vec::new();
    let init = {
        let mut v = vec![u64::MAX; n];
        v[group.identity()] = 0;
        v
    };
    let mut stack = vec![init];
    while let Some(state) = stack.pop() {
        let Some(g) = (0..n).find(|&i| state[i] == u64::MAX) else {
            complete.push(state);
            continue;
        };
        // Least m >= 1 with g^m in the current domain.
        let mut m = 1u64;
        let mut gm = g;
        while state[gm] == u64::MAX {
            gm = group.mul(gm, g);
            m += 1;
        }
        let a = state[gm];
        assert_eq!(a % m, 0, "character value must extend along cyclic steps");
        let x0 = a / m;
        let step = e / m;
        // Push branches in reverse so they pop in ascending t order.
        for t in (0..m).rev() {
            let x = (x0 + t * step) % e;
            let mut next = state.clone();
            // Extend over the coset structure: cover h * g^k for covered h.
            let covered: Vec<usize> = (0..n).filter(|&i| state[i] != u64::MAX).collect();
            for &h in &covered {
                let mut cur = h;
                let mut val = next[h];
                for _ in 1..=m {
                    cur = group.mul(cur, g);
                    val = (val + x) % e;
                    next[cur] = val;
                }
            }
            stack.push(next);
        }
    }
    // Depth-first with ascending branches gives a deterministic order;
    // normalize by sorting rows of exponents for stability.
    complete.sort();
    if complete.len() != n {
        return Err(HopfError::InternalConsistency(format!(
            "found {} characters, expected {n}",
            complete.len()
        )));
    }
    complete
        .into_iter()
        .map(|state| {
            state
                .into_iter()
                .map(|x| root_of_unity(ctx, e, x as i64))
                .collect()
        })
        .collect()
}

/// The orthogonal idempotent basis of an abelian group algebra.
///
/// For a presentation `Z_{n_1} x ... x Z_{n_k}` with pairing
/// `lam^(m.r) = prod_j zeta_{n_j}^(m_j r_j)`, the idempotents are
/// `E_m = (1/n) sum_r lam^(m.r) g^r`, indexed by the same mixed-radix
/// scheme as the group elements. They satisfy `E_m E_l = delta E_m`,
/// `sum_m E_m = 1`, and `g^m E_l = lam^(-m.l) E_l`.
#[derive(Clone, Debug)]
pub struct IdempotentBasis {
    pres: AbelianPresentation,
    ctx: Arc<FieldContext>,
    vectors: Vec<SparseVec>,
}

impl IdempotentBasis {
    /// Number of idempotents (= group order).
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    /// True when the basis is empty (never for a real group).
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The idempotent `E_m` expanded in the group basis.
    pub fn vector(&self, m: usize) -> &SparseVec {
        &self.vectors[m]
    }

    /// The presentation the indexing refers to.
    pub fn presentation(&self) -> &AbelianPresentation {
        &self.pres
    }

    /// The pairing value `lam^(m.r)`.
    pub fn pairing(&self, m: usize, r: usize) -> CycScalar {
        let cm = self.pres.coords_of(m);
        let cr = self.pres.coords_of(r);
        let mut acc = self.ctx.one();
        for (j, &nj) in self.pres.orders.iter().enumerate() {
            let w = root_of_unity(&self.ctx, nj, (cm[j] * cr[j]) as i64)
                .expect("factor order divides conductor by construction");
            acc = &acc * &w;
        }
        acc
    }

    /// Index of the coordinate-wise sum `m + l`.
    pub fn add(&self, m: usize, l: usize) -> usize {
        let a = self.pres.coords_of(m);
        let b = self.pres.coords_of(l);
        let sum: Vec<u64> = a
            .iter()
            .zip(&b)
            .zip(&self.pres.orders)
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        self.pres.index_of(&sum)
    }

    /// Index of the coordinate-wise difference `m - l`.
    pub fn sub(&self, m: usize, l: usize) -> usize {
        let a = self.pres.coords_of(m);
        let b = self.pres.coords_of(l);
        let diff: Vec<u64> = a
            .iter()
            .zip(&b)
            .zip(&self.pres.orders)
            .map(|((x, y), n)| (x + n - y) % n)
            .collect();
        self.pres.index_of(&diff)
    }

    /// The group basis element `g^r` expanded in the idempotent basis:
    /// `g^r = sum_m lam^(-m.r) E_m`.
    pub fn group_element_in_idempotents(&self, r: usize) -> SparseVec {
        let mut v = SparseVec::new();
        for m in 0..self.len() {
            let neg_m = self.sub(0, m);
            v.add_to(m, &self.pairing(neg_m, r));
        }
        v
    }
}

/// Builds the idempotent basis; requires a coordinate presentation and
/// that every factor order divides the conductor.
pub fn abelian_idempotents(
    group: &FiniteGroup,
    ctx: &Arc<FieldContext>,
) -> Result<IdempotentBasis> {
    let pres = group
        .presentation()
        .ok_or_else(|| {
            HopfError::Precondition(
                "idempotent basis needs an abelian coordinate presentation".into(),
            )
        })?
        .clone();
    for &nj in &pres.orders {
        if ctx.conductor() % nj != 0 {
            return Err(HopfError::RootOrder {
                r: nj,
                conductor: ctx.conductor(),
            });
        }
    }
    let n = pres.order();
    let inv_n = ctx.integer(n as i64).inv()?;
    let mut basis = IdempotentBasis {
        pres,
        ctx: Arc::clone(ctx),
        vectors: Vec::new(),
    };
    for m in 0..n {
        let mut v = SparseVec::new();
        for r in 0..n {
            v.add_to(r, &(&basis.pairing(m, r) * &inv_n));
        }
        basis.vectors.push(v);
    }
    Ok(basis)
}

/// The group algebra as a Hopf algebra: grouplike basis, `S(g) = g^-1`.
pub fn group_algebra_hopf(group: &FiniteGroup, ctx: &Arc<FieldContext>) -> Result<HopfData> {
    let n = group.order();
    let mut mult = vec![SparseVec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            mult[i * n + j] = SparseVec::unit(group.mul(i, j), ctx.one());
        }
    }
    let unit = SparseVec::unit(group.identity(), ctx.one());
    let comult = (0..n)
        .map(|i| SparseVec::unit(tensor_index(i, i, n), ctx.one()))
        .collect();
    let counit = vec![ctx.one(); n];
    let antipode = (0..n)
        .map(|i| SparseVec::unit(group.inv(i), ctx.one()))
        .collect();
    HopfData::new(
        AlgebraData::new(ctx, n, mult, unit)?,
        CoalgebraData::new(ctx, n, comult, counit)?,
        antipode,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_basics() {
        let g = FiniteGroup::cyclic(6);
        assert_eq!(g.order(), 6);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.mul(4, 5), 3);
        assert_eq!(g.inv(2), 4);
        assert_eq!(g.order_of(2), 3);
        assert_eq!(g.exponent(), 6);
        assert!(g.is_abelian());
        assert_eq!(g.power(5, -2), 2);
    }

    #[test]
    fn corrupt_tables_are_rejected() {
        let g = FiniteGroup::cyclic(3);
        let mut table = g.table.clone();
        // Break closure/associativity by redirecting one product.
        table[1 * 3 + 1] = 1;
        assert!(FiniteGroup::from_table(table, g.names.clone()).is_err());
        // Wrong shape.
        assert!(FiniteGroup::from_table(vec![0; 5], vec!["a".into(); 2]).is_err());
    }

    #[test]
    fn klein_four_group_invariants() {
        let g = FiniteGroup::product_of_cyclics(&[2, 2]);
        assert_eq!(g.abelian_invariants().unwrap(), vec![2, 2]);
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.abelian_invariants().unwrap(), vec![4]);
        let z9 = FiniteGroup::cyclic(9);
        assert_eq!(z9.abelian_invariants().unwrap(), vec![9]);
        let z33 = FiniteGroup::product_of_cyclics(&[3, 3]);
        assert_eq!(z33.abelian_invariants().unwrap(), vec![3, 3]);
        let z2cubed = FiniteGroup::product_of_cyclics(&[2, 2, 2]);
        assert_eq!(z2cubed.abelian_invariants().unwrap(), vec![2, 2, 2]);
        let mixed = FiniteGroup::product_of_cyclics(&[6]);
        assert_eq!(mixed.abelian_invariants().unwrap(), vec![2, 3]);
    }

    #[test]
    fn dihedral_group_structure() {
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        // Center is {1, r^2}.
        assert_eq!(d4.center(), vec![0, 2]);
        assert!(d4.is_solvable());
        // s r s = r^-1: index of s is 4, r is 1.
        let s = 4;
        let r = 1;
        assert_eq!(d4.mul(d4.mul(s, r), s), d4.inv(r));
        // Quotient by the center has Klein four structure.
        let (q, _) = d4.quotient(&[0, 2]).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.abelian_invariants().unwrap(), vec![2, 2]);
    }

    #[test]
    fn alternating_group_from_permutations() {
        let (a5, perms) = FiniteGroup::from_perm_gens(&[
            vec![1, 2, 3, 4, 0], // (0 1 2 3 4)
            vec![1, 2, 0, 3, 4], // (0 1 2)
        ])
        .unwrap();
        assert_eq!(a5.order(), 60);
        assert_eq!(perms.len(), 60);
        assert!(!a5.is_abelian());
        assert_eq!(a5.center(), vec![a5.identity()]);
        // A5 is perfect: its commutator subgroup is everything.
        assert_eq!(a5.commutator_subgroup().len(), 60);
        assert!(!a5.is_solvable());
        assert_eq!(a5.exponent(), 30);
    }

    #[test]
    fn symmetric_group_is_solvable_at_order_six() {
        let (s3, _) = FiniteGroup::from_perm_gens(&[
            vec![1, 2, 0], // (0 1 2)
            vec![1, 0, 2], // (0 1)
        ])
        .unwrap();
        assert_eq!(s3.order(), 6);
        let series = s3.derived_series();
        assert_eq!(series.len(), 3);
        assert_eq!(series[1].len(), 3);
        assert_eq!(series[2], vec![s3.identity()]);
        assert!(s3.is_solvable());
    }

    #[test]
    fn permutation_closure_respects_cap() {
        let big_cycle: Vec<usize> = (1..30).chain([0]).collect();
        let err = FiniteGroup::from_perm_gens_with_cap(&[big_cycle], 10);
        assert!(matches!(err, Err(HopfError::OrderCap { .. })));
    }

    #[test]
    fn quotient_of_cyclic_group() {
        let z4 = FiniteGroup::cyclic(4);
        let (q, proj) = z4.quotient(&[0, 2]).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj, vec![0, 1, 0, 1]);
        // Non-normal (indeed non-subgroup) input is rejected.
        assert!(z4.quotient(&[0, 1]).is_err());
    }

    #[test]
    fn inversion_automorphism_on_cyclic_groups() {
        let z3 = FiniteGroup::cyclic(3);
        let inv = GroupAutomorphism::inversion(&z3).unwrap();
        assert_eq!(inv.order(), 2);
        assert_eq!(inv.orbits(), vec![vec![0], vec![1, 2]]);
        // Inversion is not a homomorphism on a nonabelian group.
        let d4 = FiniteGroup::dihedral(4);
        assert!(GroupAutomorphism::inversion(&d4).is_err());
    }

    #[test]
    fn linear_automorphism_of_klein_four_has_order_three() {
        let v4 = FiniteGroup::product_of_cyclics(&[2, 2]);
        // (x, y) -> (y, x + y).
        let theta =
            GroupAutomorphism::abelian_linear(&v4, &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(theta.order(), 3);
        let orbit_lengths: Vec<usize> = theta.orbits().iter().map(|o| o.len()).collect();
        assert_eq!(orbit_lengths, vec![1, 3]);
        assert_eq!(theta.pow(3), GroupAutomorphism::identity(&v4));
    }

    #[test]
    fn conjugation_automorphism_on_dihedral_group() {
        let d4 = FiniteGroup::dihedral(4);
        let s = 4;
        let conj = GroupAutomorphism::conjugation(&d4, s);
        // Verify it is a genuine automorphism.
        assert!(GroupAutomorphism::new(&d4, conj.map().to_vec()).is_ok());
        assert_eq!(conj.apply(1), d4.inv(1));
        assert_eq!(conj.order(), 2);
    }

    #[test]
    fn non_homomorphic_maps_are_rejected() {
        let z4 = FiniteGroup::cyclic(4);
        assert!(GroupAutomorphism::new(&z4, vec![0, 1, 3, 2]).is_err());
        assert!(GroupAutomorphism::new(&z4, vec![0, 0, 0, 0]).is_err());
    }

    #[test]
    fn characters_of_cyclic_four_match_fourier_table() {
        let z4 = FiniteGroup::cyclic(4);
        let ctx = FieldContext::new(4).unwrap();
        let chars = characters_abelian(&z4, &ctx).unwrap();
        assert_eq!(chars.len(), 4);
        // Each character is chi_t(g^j) = zeta_4^(t j) for some t; check the
        // full set matches {t = 0, 1, 2, 3}.
        let mut seen = vec![false; 4];
        for chi in &chars {
            assert!(chi[0].is_one());
            for t in 0..4i64 {
                if (0..4).all(|j| chi[j] == root_of_unity(&ctx, 4, t * j as i64).unwrap()) {
                    seen[t as usize] = true;
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn characters_satisfy_orthogonality() {
        let g = FiniteGroup::product_of_cyclics(&[2, 4]);
        let ctx = FieldContext::new(4).unwrap();
        let chars = characters_abelian(&g, &ctx).unwrap();
        assert_eq!(chars.len(), 8);
        for (a, chi) in chars.iter().enumerate() {
            for (b, psi) in chars.iter().enumerate() {
                let mut s = ctx.zero();
                for i in 0..g.order() {
                    s = &s + &(&chi[i] * &psi[g.inv(i)]);
                }
                let expected = if a == b { ctx.integer(8) } else { ctx.zero() };
                assert_eq!(s, expected, "orthogonality at ({a},{b})");
            }
        }
        // Exponent must divide the conductor.
        let small = FieldContext::new(2).unwrap();
        assert!(characters_abelian(&g, &small).is_err());
    }

    #[test]
    fn characters_are_multiplicative() {
        let g = FiniteGroup::product_of_cyclics(&[3, 3]);
        let ctx = FieldContext::new(3).unwrap();
        for chi in characters_abelian(&g, &ctx).unwrap() {
            for i in 0..g.order() {
                for j in 0..g.order() {
                    assert_eq!(&chi[i] * &chi[j], chi[g.mul(i, j)]);
                }
            }
        }
    }

    #[test]
    fn idempotents_are_orthogonal_and_complete() {
        let g = FiniteGroup::cyclic(4);
        let ctx = FieldContext::new(4).unwrap();
        let idem = abelian_idempotents(&g, &ctx).unwrap();
        let hopf = group_algebra_hopf(&g, &ctx).unwrap();
        let alg = hopf.algebra();
        let mut total = SparseVec::new();
        for m in 0..4 {
            for l in 0..4 {
                let prod = alg.mul(idem.vector(m), idem.vector(l));
                if m == l {
                    assert_eq!(&prod, idem.vector(m), "idempotent at {m}");
                } else {
                    assert!(prod.is_zero(), "orthogonality at ({m},{l})");
                }
            }
            total = total.plus(idem.vector(m));
        }
        assert_eq!(total, *alg.unit());
    }

    #[test]
    fn group_elements_act_on_idempotents_by_pairing_eigenvalues() {
        let g = FiniteGroup::product_of_cyclics(&[2, 4]);
        let ctx = FieldContext::new(8).unwrap();
        let idem = abelian_idempotents(&g, &ctx).unwrap();
        let hopf = group_algebra_hopf(&g, &ctx).unwrap();
        for m in 0..g.order() {
            for l in 0..g.order() {
                let lhs = hopf
                    .algebra()
                    .mul(&SparseVec::unit(m, ctx.one()), idem.vector(l));
                let neg_m = idem.sub(0, m);
                let rhs = idem.vector(l).scaled(&idem.pairing(neg_m, l));
                assert_eq!(lhs, rhs, "eigenvalue at ({m},{l})");
            }
        }
    }

    #[test]
    fn idempotent_comultiplication_is_additive_convolution() {
        let g = FiniteGroup::cyclic(4);
        let ctx = FieldContext::new(4).unwrap();
        let idem = abelian_idempotents(&g, &ctx).unwrap();
        let hopf = group_algebra_hopf(&g, &ctx).unwrap();
        let n = g.order();
        for m in 0..n {
            // Delta(E_m) expanded in the group (x) group basis.
            let lhs = hopf.coalgebra().comult(idem.vector(m));
            // sum_l E_l (x) E_(m-l), also in the group tensor basis.
            let mut rhs = SparseVec::new();
            for l in 0..n {
                let other = idem.sub(m, l);
                for (a, x) in idem.vector(l).iter() {
                    for (b, y) in idem.vector(other).iter() {
                        rhs.add_to(tensor_index(a, b, n), &(x * y));
                    }
                }
            }
            assert_eq!(lhs, rhs, "Delta(E_{m})");
        }
        // E_0 is the normalized integral: g E_0 = E_0 for every g.
        for r in 0..n {
            assert_eq!(
                hopf.algebra()
                    .mul(&SparseVec::unit(r, ctx.one()), idem.vector(0)),
                *idem.vector(0)
            );
        }
    }

    #[test]
    fn fourier_inversion_recovers_group_elements() {
        let g = FiniteGroup::product_of_cyclics(&[2, 2]);
        let ctx = FieldContext::new(2).unwrap();
        let idem = abelian_idempotents(&g, &ctx).unwrap();
        for r in 0..4 {
            let coords = idem.group_element_in_idempotents(r);
            // Expand back in the group basis.
            let mut back = SparseVec::new();
            for (m, c) in coords.iter() {
                back.add_scaled(idem.vector(m), c);
            }
            assert_eq!(back, SparseVec::unit(r, ctx.one()), "g^({r})");
        }
    }

    #[test]
    fn idempotents_require_presentation_and_conductor() {
        let ctx = FieldContext::new(4).unwrap();
        // No presentation: a table-built group.
        let d4 = FiniteGroup::dihedral(4);
        assert!(abelian_idempotents(&d4, &ctx).is_err());
        // Conductor must be divisible by the factor orders.
        let z3 = FiniteGroup::cyclic(3);
        assert!(abelian_idempotents(&z3, &ctx).is_err());
    }

    #[test]
    fn group_algebra_is_hopf_and_cocommutative() {
        let g = FiniteGroup::dihedral(3);
        let ctx = FieldContext::new(6).unwrap();
        let h = group_algebra_hopf(&g, &ctx).unwrap();
        assert!(h.verify_hopf().passed());
        assert!(h.coalgebra().is_cocommutative());
        assert!(!h.algebra().is_commutative());
        // Grouplikes are exactly the group basis vectors.
        for i in 0..g.order() {
            assert!(h.is_grouplike(&SparseVec::unit(i, ctx.one())));
        }
    }

    #[test]
    fn cycle_notation_rendering() {
        assert_eq!(cycle_notation(&[0, 1, 2]), "()");
        assert_eq!(cycle_notation(&[1, 2, 0]), "(0 1 2)");
        assert_eq!(cycle_notation(&[1, 0, 3, 2]), "(0 1)(2 3)");
    }

    #[test]
    fn direct_product_combines_presentations() {
        let a = FiniteGroup::cyclic(2);
        let b = FiniteGroup::cyclic(3);
        let p = FiniteGroup::direct_product(&a, &b);
        assert_eq!(p.order(), 6);
        assert_eq!(p.presentation().unwrap().orders, vec![2, 3]);
        assert_eq!(p.abelian_invariants().unwrap(), vec![2, 3]);
    }
}
