//! Independent semisimple-decomposition oracle for algebras over Q(zeta_N).
//!
//! This module answers one question about an [`AlgebraData`]: what is the
//! multiset of matrix-block sizes in its decomposition into simple blocks?
//! It deliberately shares no formulas with the constructive decomposition
//! machinery elsewhere in the crate, so the two can cross-check each other.
//!
//! The exact, proof-grade part:
//!
//! * the Jacobson radical is the kernel of the trace Gram matrix
//!   `T[i][j] = tr(L_(e_i e_j))` of the left regular representation (valid
//!   in characteristic zero); a nonzero kernel vetoes decomposition;
//! * the center is the exact solution space of all commutator constraints;
//! * a separating central element and its exact minimal polynomial `f` over
//!   the coefficient field are computed with exact linear algebra.
//!
//! The modular part works modulo rational primes `p = 1 (mod N)`, where the
//! cyclotomic field has a degree-one prime: scalars reduce through
//! `zeta -> w` for a primitive `N`-th root `w` in `F_p`. If `f` reduces
//! squarefree but does not have `deg f` roots in `F_p`, then `f` cannot
//! split into linear factors over the field, which *proves* the center is
//! not a power of the base field — decomposition over this conductor is
//! impossible and the oracle reports it as such. Otherwise the roots yield
//! the central atoms by Lagrange interpolation, each block size is the
//! square root of an `F_p`-rank, and the result is accepted only when all
//! structural gates pass (block count = center dimension, each rank a
//! perfect square, sizes summing to the dimension) and three independent
//! good primes agree on the multiset.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::AlgebraData;
use crate::cyclotomic::CycScalar;
use crate::error::{HopfError, Result};
use crate::linalg::{KernelSolver, SparseVec};

/// Outcome of the oracle on a semisimple algebra.
#[derive(Clone, Debug, Serialize)]
pub struct WedderburnReport {
    /// Dimension of the algebra.
    pub dim: usize,
    /// Exact dimension of the center (= number of simple blocks).
    pub center_dim: usize,
    /// Matrix block sizes, ascending: the algebra is the direct sum of
    /// full matrix algebras of these sizes.
    pub blocks: Vec<u64>,
    /// The three witness primes whose computations agreed.
    pub primes: Vec<u64>,
}

/// Exact basis of the Jacobson radical via the trace Gram kernel.
pub fn radical_basis(a: &AlgebraData) -> Vec<SparseVec> {
    let d = a.dim();
    let ctx = a.ctx();
    // tau[b] = trace of left multiplication by e_b.
    let mut tau = vec![ctx.zero(); d];
    for b in 0..d {
        let mut t = ctx.zero();
        for k in 0..d {
            if let Some(c) = a.mul_basis(b, k).get(k) {
                t = &t + c;
            }
        }
        tau[b] = t;
    }
    // Row i of the Gram matrix: j -> sum_b (e_i e_j)[b] tau[b]; the radical
    // is the kernel of v -> Gram rows paired with v.
    let mut solver = KernelSolver::new();
    for i in 0..d {
        let mut row = SparseVec::new();
        for j in 0..d {
            let mut entry = ctx.zero();
            for (b, c) in a.mul_basis(i, j).iter() {
                entry = &entry + &(c * &tau[b]);
            }
            row.add_to(j, &entry);
        }
        solver.feed(row, SparseVec::unit(i, ctx.one()));
    }
    solver.into_kernel()
}

/// Exact basis of the center `{z : z x = x z for all x}`.
pub fn center_basis(a: &AlgebraData) -> Vec<SparseVec> {
    let d = a.dim();
    let ctx = a.ctx();
    let mut solver = KernelSolver::new();
    for v in 0..d {
        // Stack all commutators [e_v, e_x] into one image vector.
        let mut image = SparseVec::new();
        for x in 0..d {
            let comm = a.mul_basis(v, x).minus(a.mul_basis(x, v));
            for (k, c) in comm.iter() {
                image.add_to(x * d + k, c);
            }
        }
        solver.feed(image, SparseVec::unit(v, ctx.one()));
    }
    solver.into_kernel()
}

/// Exact monic minimal polynomial of `z` in `a`, ascending coefficients.
pub fn minimal_polynomial(a: &AlgebraData, z: &SparseVec) -> Result<Vec<CycScalar>> {
    let ctx = a.ctx();
    let mut solver = KernelSolver::new();
    let mut power = a.unit().clone();
    for k in 0..=a.dim() {
        let rank_before = solver.image_rank();
        solver.feed(power.clone(), SparseVec::unit(k, ctx.one()));
        if solver.image_rank() == rank_before {
            // The power became dependent: the tracked combination is the
            // (unique, minimal-degree) relation sum_k rel[k] z^k = 0.
            let rel = solver
                .into_kernel()
                .pop()
                .expect("dependency was recorded");
            let deg = rel.support().max().expect("nonzero relation");
            let lead_inv = rel.get(deg).expect("leading coefficient").inv()?;
            let mut coeffs = vec![ctx.zero(); deg + 1];
            for (t, c) in rel.iter() {
                coeffs[t] = c * &lead_inv;
            }
            return Ok(coeffs);
        }
        power = a.mul(&power, z);
    }
    Err(HopfError::InternalConsistency(
        "no minimal polynomial within dimension bound".into(),
    ))
}

/// Runs the full oracle.
///
/// Errors with [`HopfError::Precondition`] when the algebra has a nonzero
/// radical, and with [`HopfError::FieldNotSplitting`] when a modular
/// witness proves the center does not split over the coefficient field.
pub fn semisimple_decomposition(a: &AlgebraData) -> Result<WedderburnReport> {
    let d = a.dim();
    let radical = radical_basis(a);
    if !radical.is_empty() {
        return Err(HopfError::Precondition(format!(
            "algebra has a radical of dimension {}; decomposition requires a semisimple algebra",
            radical.len()
        )));
    }
    let center = center_basis(a);
    let c = center.len();
    if c == 0 {
        return Err(HopfError::InternalConsistency(
            "unital algebra with empty center".into(),
        ));
    }

    // A separating central element: exact minimal polynomial degree equals
    // the center dimension. Geometric weights 1, b, b^2, ... are tried for
    // increasing bases b; on each the Vandermonde argument kills at most
    // deg - 1 bases per pair of blocks, so small bases succeed. Every
    // candidate is tested exactly.
    let ctx = a.ctx();
    let mut separator: Option<(SparseVec, Vec<CycScalar>)> = None;
    'search: for base in 2u64..130 {
        let mut z = SparseVec::new();
        let mut weight = BigInt::one();
        for basis_vec in &center {
            z.add_scaled(basis_vec, &ctx.rational(num::BigRational::from(weight.clone())));
            weight *= base;
        }
        let f = minimal_polynomial(a, &z)?;
        if f.len() == c + 1 {
            separator = Some((z, f));
            break 'search;
        }
    }
    let Some((z_sep, fpoly)) = separator else {
        return Err(HopfError::InternalConsistency(
            "no separating central element found in deterministic sweep".into(),
        ));
    };

    // Denominator guard for all modular reductions.
    let mut denom_lcm = BigInt::one();
    for i in 0..d {
        for j in 0..d {
            for (_, cfc) in a.mul_basis(i, j).iter() {
                denom_lcm = denom_lcm.lcm(&cfc.denominator_lcm());
            }
        }
    }
    for cfc in &fpoly {
        denom_lcm = denom_lcm.lcm(&cfc.denominator_lcm());
    }
    for (_, cfc) in z_sep.iter() {
        denom_lcm = denom_lcm.lcm(&cfc.denominator_lcm());
    }

    let conductor = ctx.conductor();
    let mut agreed: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut candidate = 0u64;
    let mut attempts = 0;
    while agreed.len() < 3 {
        attempts += 1;
        if attempts > 200 {
            return Err(HopfError::FieldNotSplitting(format!(
                "no three agreeing witness primes congruent to 1 mod {conductor} within the scan budget"
            )));
        }
        candidate += 1;
        let p = conductor * candidate + 1;
        if p < 5 || !is_prime_u64(p) {
            continue;
        }
        if (&denom_lcm % BigInt::from(p)).is_zero() {
            continue;
        }
        match try_prime(a, &z_sep, &fpoly, c, p)? {
            PrimeOutcome::Good(mut blocks) => {
                blocks.sort_unstable();
                if let Some((_, prev)) = agreed.first() {
                    if prev != &blocks {
                        return Err(HopfError::InternalConsistency(format!(
                            "witness primes disagree on the block multiset: {:?} vs {:?}",
                            prev, blocks
                        )));
                    }
                }
                agreed.push((p, blocks));
            }
            PrimeOutcome::BadPrime => continue,
            PrimeOutcome::NotSplit => {
                return Err(HopfError::FieldNotSplitting(format!(
                    "the center's minimal polynomial is squarefree but not fully split modulo \
                     the degree-one prime {p}; the algebra does not decompose into matrix \
                     blocks over Q(zeta_{conductor})"
                )));
            }
        }
    }

    let blocks = agreed[0].1.clone();
    Ok(WedderburnReport {
        dim: d,
        center_dim: c,
        blocks,
        primes: agreed.iter().map(|(p, _)| *p).collect(),
    })
}

enum PrimeOutcome {
    Good(Vec<u64>),
    BadPrime,
    NotSplit,
}

/// Attempts the block computation modulo one candidate prime.
fn try_prime(
    a: &AlgebraData,
    z: &SparseVec,
    fpoly: &[CycScalar],
    c: usize,
    p: u64,
) -> Result<PrimeOutcome> {
    let d = a.dim();
    let conductor = a.ctx().conductor();
    let w = primitive_root_of_unity_mod(p, conductor);
    let wpows: Vec<u64> = {
        let deg = a.ctx().degree();
        let mut v = Vec::with_capacity(deg);
        let mut cur = 1u64;
        for _ in 0..deg {
            v.push(cur);
            cur = mulmod(cur, w, p);
        }
        v
    };
    let red = |s: &CycScalar| scalar_mod(s, p, &wpows);

    // Reduce the minimal polynomial and check squarefreeness.
    let Some(fbar) = fpoly.iter().map(&red).collect::<Option<Vec<u64>>>() else {
        return Err(HopfError::InternalConsistency(
            "denominator slipped past the lcm guard".into(),
        ));
    };
    debug_assert_eq!(*fbar.last().expect("monic"), 1);
    let fder = poly_derivative_mod(&fbar, p);
    if poly_gcd_mod(&fbar, &fder, p).len() > 1 {
        return Ok(PrimeOutcome::BadPrime);
    }
    // Roots by direct scan of F_p.
    let mut roots = Vec::new();
    for x in 0..p {
        if poly_eval_mod(&fbar, x, p) == 0 {
            roots.push(x);
        }
    }
    if roots.len() != c {
        // Squarefree and missing roots: proof of non-splitness.
        return Ok(PrimeOutcome::NotSplit);
    }

    // Reduce the structure constants and the separating element.
    let mut mult: Vec<Vec<(usize, u64)>> = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut row = Vec::new();
            for (k, s) in a.mul_basis(i, j).iter() {
                let Some(v) = red(s) else {
                    return Err(HopfError::InternalConsistency(
                        "denominator slipped past the lcm guard".into(),
                    ));
                };
                if v != 0 {
                    row.push((k, v));
                }
            }
            mult.push(row);
        }
    }
    let mut zbar = vec![0u64; d];
    for (k, s) in z.iter() {
        let Some(v) = red(s) else {
            return Err(HopfError::InternalConsistency(
                "denominator slipped past the lcm guard".into(),
            ));
        };
        zbar[k] = v;
    }
    let mut unit = vec![0u64; d];
    for (k, s) in a.unit().iter() {
        let Some(v) = red(s) else {
            return Err(HopfError::InternalConsistency(
                "denominator slipped past the lcm guard".into(),
            ));
        };
        unit[k] = v;
    }
    let mul_vec = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0 {
                    continue;
                }
                let coeff = mulmod(x[i], y[j], p);
                for &(k, s) in &mult[i * d + j] {
                    out[k] = (out[k] + mulmod(coeff, s, p)) % p;
                }
            }
        }
        out
    };

    // Lagrange atoms E_i = prod_(j != i) (z - r_j) / (r_i - r_j).
    let mut blocks = Vec::with_capacity(c);
    let mut total = 0usize;
    for (i, &ri) in roots.iter().enumerate() {
        let mut atom = unit.clone();
        for (j, &rj) in roots.iter().enumerate() {
            if i == j {
                continue;
            }
            // factor = (z - r_j) * inv(r_i - r_j)
            let denom = (ri + p - rj) % p;
            let dinv = invmod(denom, p);
            let mut factor = zbar.clone();
            for (t, f) in factor.iter_mut().enumerate() {
                let shifted = (*f + p - mulmod(rj, unit[t], p)) % p;
                *f = mulmod(shifted, dinv, p);
            }
            atom = mul_vec(&atom, &factor);
        }
        // Idempotency gate.
        if mul_vec(&atom, &atom) != atom {
            return Ok(PrimeOutcome::BadPrime);
        }
        // Block dimension: rank of x -> atom * x.
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d);
        for x in 0..d {
            let mut ex = vec![0u64; d];
            ex[x] = 1;
            rows.push(mul_vec(&atom, &ex));
        }
        let rank = rank_mod(rows, p);
        let n = (rank as f64).sqrt().round() as u64;
        if (n * n) as usize != rank {
            return Ok(PrimeOutcome::BadPrime);
        }
        total += rank;
        blocks.push(n);
    }
    if total != d {
        return Ok(PrimeOutcome::BadPrime);
    }
    Ok(PrimeOutcome::Good(blocks))
}

/// Reduces a scalar through `zeta -> w`; `None` if a denominator dies.
fn scalar_mod(s: &CycScalar, p: u64, wpows: &[u64]) -> Option<u64> {
    let pb = BigInt::from(p);
    let mut acc = 0u64;
    for (i, coeff) in s.coeffs().iter().enumerate() {
        let den = coeff.denom().mod_floor(&pb);
        if den.is_zero() {
            return None;
        }
        let den = bigint_to_u64_mod(&den, p);
        let num = bigint_to_u64_mod(&coeff.numer().mod_floor(&pb), p);
        let val = mulmod(num, invmod(den, p), p);
        acc = (acc + mulmod(val, wpows[i], p)) % p;
    }
    Some(acc)
}

fn bigint_to_u64_mod(x: &BigInt, p: u64) -> u64 {
    // mod_floor already makes the value nonnegative and < p.
    let (_, digits) = x.to_u64_digits();
    debug_assert!(!x.is_negative());
    digits.first().copied().unwrap_or(0) % p
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A primitive `n`-th root of unity in `F_p`; requires `p = 1 (mod n)`.
fn primitive_root_of_unity_mod(p: u64, n: u64) -> u64 {
    debug_assert_eq!((p - 1) % n, 0);
    // Factor p - 1 and find a primitive root of F_p*.
    let mut m = p - 1;
    let mut primes = Vec::new();
    let mut q = 2u64;
    while q * q <= m {
        if m % q == 0 {
            primes.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    let g = (2..p)
        .find(|&g| primes.iter().all(|&q| powmod(g, (p - 1) / q, p) != 1))
        .expect("F_p has a primitive root");
    powmod(g, (p - 1) / n, p)
}

fn poly_eval_mod(f: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in f.iter().rev() {
        acc = (mulmod(acc, x, p) + c) % p;
    }
    acc
}

fn poly_derivative_mod(f: &[u64], p: u64) -> Vec<u64> {
    if f.len() <= 1 {
        return vec![0];
    }
    (1..f.len()).map(|k| mulmod(f[k], k as u64 % p, p)).collect()
}

fn poly_trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.len() > 1 && *f.last().expect("nonempty") == 0 {
        f.pop();
    }
    f
}

fn poly_gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = poly_trim(a.to_vec());
    let mut r1 = poly_trim(b.to_vec());
    while !(r1.len() == 1 && r1[0] == 0) {
        // r0 mod r1.
        let mut rem = r0.clone();
        let lead_inv = invmod(*r1.last().expect("nonempty"), p);
        while rem.len() >= r1.len() && !(rem.len() == 1 && rem[0] == 0) {
            let shift = rem.len() - r1.len();
            let coef = mulmod(*rem.last().expect("nonempty"), lead_inv, p);
            for (i, &bc) in r1.iter().enumerate() {
                let sub = mulmod(coef, bc, p);
                rem[shift + i] = (rem[shift + i] + p - sub) % p;
            }
            rem = poly_trim(rem);
            if rem.len() == 1 && rem[0] == 0 {
                break;
            }
        }
        r0 = r1;
        r1 = poly_trim(rem);
    }
    r0
}

/// Rank of a dense matrix over `F_p` by Gaussian elimination.
fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        let Some(pivot) = (row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(row, pivot);
        let inv = invmod(rows[row][col], p);
        for x in col..cols {
            rows[row][x] = mulmod(rows[row][x], inv, p);
        }
        for r in 0..rows.len() {
            if r != row && rows[r][col] != 0 {
                let f = rows[r][col];
                for x in col..cols {
                    let sub = mulmod(f, rows[row][x], p);
                    rows[r][x] = (rows[r][x] + p - sub) % p;
                }
            }
        }
        row += 1;
        rank += 1;
        if row == rows.len() {
            break;
        }
    }
    rank
}
