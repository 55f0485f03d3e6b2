//! Exact arithmetic in the cyclotomic field Q(zeta_N).
//!
//! Every scalar in this crate is an element of a single cyclotomic field
//! Q(zeta_N), represented on the power basis `1, zeta, ..., zeta^(phi(N)-1)`
//! with arbitrary-precision rational coefficients, reduced modulo the N-th
//! cyclotomic polynomial Phi_N. There is no floating point anywhere: all
//! verifications performed elsewhere in the crate are exact because this
//! layer is exact.
//!
//! A [`FieldContext`] fixes the conductor N once and precomputes Phi_N and
//! the reduction rows for `zeta^phi(N), ..., zeta^(2*phi(N)-2)` so that
//! products fold back onto the power basis with pure table lookups. One
//! computation uses one context; mixing scalars from different conductors is
//! an error, never a silent coercion.
//!
//! Roots of unity of any order `r` dividing N are available exactly as
//! `zeta_N^(N/r)` powers, which is what the group-algebra and biproduct
//! layers use for eigenvalues and character values.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{HopfError, Result};

/// Euler's totient function by trial-division factorization.
///
/// Conductors in this crate are small (a few hundred at most), so trial
/// division is exact and instantaneous.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi is defined for n >= 1");
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            phi = phi / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        phi = phi / m * (m - 1);
    }
    phi
}

/// Divisors of `n` in ascending order.
fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
    d.sort_unstable();
    d
}

/// Exact polynomial division over the integers; panics if not exact.
///
/// Both inputs are coefficient vectors in ascending degree order. Used only
/// for cyclotomic polynomials, where exactness is a theorem.
fn poly_div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    assert!(!lead.is_zero());
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=(nd - dd)).rev() {
        let c = &rem[k + dd] / &lead;
        assert_eq!(&c * &lead, rem[k + dd], "non-exact division");
        quot[k] = c.clone();
        for j in 0..=dd {
            let t = &c * &den[j];
            rem[k + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact division");
    quot
}

/// The N-th cyclotomic polynomial as ascending integer coefficients.
///
/// Computed by exact division: `Phi_n = (x^n - 1) / prod_(d|n, d<n) Phi_d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut memo: HashMap<u64, Vec<BigInt>> = HashMap::new();
    for d in divisors(n) {
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = BigInt::from(-1);
        num[d as usize] = BigInt::one();
        let mut quot = num;
        for e in divisors(d) {
            if e < d {
                quot = poly_div_exact_int(&quot, &memo[&e]);
            }
        }
        memo.insert(d, quot);
    }
    memo.remove(&n).expect("n divides n")
}

/// Precomputed data for one cyclotomic field Q(zeta_N).
///
/// Obtained through [`FieldContext::new`], which caches contexts per
/// conductor so that equal conductors share one allocation. All scalars
/// produced from a context carry a handle back to it; binary operations
/// insist the handles agree on the conductor.
#[derive(Debug)]
pub struct FieldContext {
    /// The conductor N.
    conductor: u64,
    /// phi(N), the degree of the field over Q and the length of every
    /// coefficient vector.
    phi: usize,
    /// Ascending coefficients of Phi_N (length `phi + 1`, monic).
    minimal_polynomial: Vec<BigInt>,
    /// Row `k` holds the power-basis expansion of `zeta^(phi + k)` for
    /// `k = 0 .. phi - 1`, enough to reduce any product of two reduced
    /// elements.
    reduction_rows: Vec<Vec<BigRational>>,
}

static CONTEXT_CACHE: Lazy<Mutex<HashMap<u64, Arc<FieldContext>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl FieldContext {
    /// Returns the (cached) context for Q(zeta_n).
    ///
    /// Errors if `n` is zero.
    pub fn new(n: u64) -> Result<Arc<FieldContext>> {
        if n == 0 {
            return Err(HopfError::Malformed("conductor must be >= 1".into()));
        }
        let mut cache = CONTEXT_CACHE.lock().expect("context cache poisoned");
        if let Some(ctx) = cache.get(&n) {
            return Ok(Arc::clone(ctx));
        }
        let phi = euler_phi(n) as usize;
        let min_poly = cyclotomic_polynomial(n);
        debug_assert_eq!(min_poly.len(), phi + 1);
        debug_assert!(min_poly[phi].is_one());

        // zeta^phi = -(c_0 + c_1 zeta + ... + c_(phi-1) zeta^(phi-1)).
        let base: Vec<BigRational> = (0..phi)
            .map(|i| BigRational::from(-min_poly[i].clone()))
            .collect();
        let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(phi.max(1));
        rows.push(base.clone());
        for _ in 1..phi {
            // Next row: multiply previous row by zeta, folding the overflow
            // coefficient through the base row.
            let prev = rows.last().expect("at least one row");
            let mut next = vec![BigRational::zero(); phi];
            for i in 0..phi.saturating_sub(1) {
                next[i + 1] = prev[i].clone();
            }
            let overflow = prev[phi - 1].clone();
            if !overflow.is_zero() {
                for i in 0..phi {
                    next[i] += &overflow * &base[i];
                }
            }
            rows.push(next);
        }

        let ctx = Arc::new(FieldContext {
            conductor: n,
            phi,
            minimal_polynomial: min_poly,
            reduction_rows: rows,
        });
        cache.insert(n, Arc::clone(&ctx));
        Ok(ctx)
    }

    /// The conductor N.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// phi(N): the number of power-basis coefficient slots.
    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Ascending coefficients of the minimal polynomial Phi_N.
    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.minimal_polynomial
    }

    /// The zero element.
    pub fn zero(self: &Arc<Self>) -> CycScalar {
        CycScalar {
            ctx: Arc::clone(self),
            coeffs: vec![BigRational::zero(); self.phi],
        }
    }

    /// The unit element.
    pub fn one(self: &Arc<Self>) -> CycScalar {
        self.integer(1)
    }

    /// Embeds an integer.
    pub fn integer(self: &Arc<Self>, v: i64) -> CycScalar {
        self.rational(BigRational::from(BigInt::from(v)))
    }

    /// Embeds a rational number.
    pub fn rational(self: &Arc<Self>, v: BigRational) -> CycScalar {
        let mut coeffs = vec![BigRational::zero(); self.phi];
        coeffs[0] = v;
        CycScalar {
            ctx: Arc::clone(self),
            coeffs,
        }
    }

    /// `zeta_N^m` for any exponent, reduced to the power basis.
    pub fn zeta_pow(self: &Arc<Self>, m: i64) -> CycScalar {
        let n = self.conductor as i64;
        let m = m.rem_euclid(n) as usize;
        let mut cur = self.one();
        // Repeated multiply-by-zeta with single-step folding; exponents are
        // bounded by the conductor, which is small.
        for _ in 0..m {
            cur = cur.mul_by_zeta();
        }
        cur
    }

    /// A fixed primitive N-th root of unity (the class of x).
    pub fn zeta(self: &Arc<Self>) -> CycScalar {
        self.zeta_pow(1)
    }
}

/// Returns `zeta_r^j` inside Q(zeta_N) as `zeta_N^((N/r) * j)`.
///
/// The order `r` must divide the conductor; otherwise the field has no
/// primitive `r`-th root of unity and an error is raised.
pub fn root_of_unity(ctx: &Arc<FieldContext>, r: u64, j: i64) -> Result<CycScalar> {
    if r == 0 || ctx.conductor % r != 0 {
        return Err(HopfError::RootOrder {
            r,
            conductor: ctx.conductor,
        });
    }
    let step = (ctx.conductor / r) as i64;
    Ok(ctx.zeta_pow(step.wrapping_mul(j.rem_euclid(r as i64))))
}

/// An element of Q(zeta_N) on the power basis.
///
/// Cheap to clone (one `Arc` plus phi(N) rationals) and exactly comparable.
/// The arithmetic operators (`+`, `-`, `*`) panic if conductors disagree —
/// they exist for internal formula plumbing where one context is already
/// guaranteed. Public entry points that may legitimately meet mixed data
/// should use [`CycScalar::checked_add`] and friends, which surface
/// [`HopfError::ConductorMismatch`] instead.
#[derive(Clone)]
pub struct CycScalar {
    ctx: Arc<FieldContext>,
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    /// The owning field context.
    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// Conductor of the field this scalar lives in.
    pub fn conductor(&self) -> u64 {
        self.ctx.conductor
    }

    /// Power-basis coefficients, ascending.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// True if this is the zero element.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True if this is the unit element.
    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Returns the rational part if the element is rational, else `None`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn require_same_ctx(&self, rhs: &CycScalar) -> Result<()> {
        if self.ctx.conductor != rhs.ctx.conductor {
            return Err(HopfError::ConductorMismatch {
                left: self.ctx.conductor,
                right: rhs.ctx.conductor,
            });
        }
        Ok(())
    }

    /// Sum, with conductor checking.
    pub fn checked_add(&self, rhs: &CycScalar) -> Result<CycScalar> {
        self.require_same_ctx(rhs)?;
        Ok(self + rhs)
    }

    /// Difference, with conductor checking.
    pub fn checked_sub(&self, rhs: &CycScalar) -> Result<CycScalar> {
        self.require_same_ctx(rhs)?;
        Ok(self - rhs)
    }

    /// Product, with conductor checking.
    pub fn checked_mul(&self, rhs: &CycScalar) -> Result<CycScalar> {
        self.require_same_ctx(rhs)?;
        Ok(self * rhs)
    }

    /// Quotient, with conductor and zero-divisor checking.
    pub fn checked_div(&self, rhs: &CycScalar) -> Result<CycScalar> {
        self.require_same_ctx(rhs)?;
        Ok(self * &rhs.inv()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x]
    /// against Phi_N. Errors on zero.
    pub fn inv(&self) -> Result<CycScalar> {
        if self.is_zero() {
            return Err(HopfError::DivisionByZero {
                conductor: self.ctx.conductor,
            });
        }
        let phi = self.ctx.phi;
        let modulus: Vec<BigRational> = self
            .ctx
            .minimal_polynomial
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        // Bezout: u * self + v * Phi = gcd (a nonzero constant, since Phi_N
        // is irreducible over Q and self != 0 has smaller degree).
        let (g, u) = poly_ext_gcd_first(&self.coeffs, &modulus);
        debug_assert!(g.len() == 1 && !g[0].is_zero(), "Phi_N must be coprime to a nonzero element");
        let ginv = g[0].recip();
        let mut coeffs = vec![BigRational::zero(); phi];
        for (i, c) in u.iter().enumerate() {
            // deg u < deg Phi, so this never overflows the basis.
            coeffs[i] = c * &ginv;
        }
        Ok(CycScalar {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        })
    }

    /// `self^k` for `k >= 0` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> CycScalar {
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Multiplies by zeta with a single folding step (degree bookkeeping
    /// stays inside the power basis).
    fn mul_by_zeta(&self) -> CycScalar {
        let phi = self.ctx.phi;
        let mut coeffs = vec![BigRational::zero(); phi];
        for i in 0..phi.saturating_sub(1) {
            coeffs[i + 1] = self.coeffs[i].clone();
        }
        let overflow = self.coeffs[phi - 1].clone();
        if !overflow.is_zero() {
            let row = &self.ctx.reduction_rows[0];
            for i in 0..phi {
                coeffs[i] += &overflow * &row[i];
            }
        }
        CycScalar {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        }
    }

    /// Least common multiple of all coefficient denominators (used by the
    /// independent decomposition oracle to veto bad primes).
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = num_integer::lcm(l, c.denom().clone());
        }
        l
    }
}

/// Extended Euclid over Q[x] returning `(gcd, u)` with
/// `u * a + v * b = gcd` (only the `a`-cofactor is needed here).
fn poly_ext_gcd_first(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
        while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
            p.pop();
        }
        p
    }
    fn is_zero_poly(p: &[BigRational]) -> bool {
        p.iter().all(|c| c.is_zero())
    }
    fn sub_scaled_shift(p: &mut Vec<BigRational>, q: &[BigRational], c: &BigRational, shift: usize) {
        if p.len() < q.len() + shift {
            p.resize(q.len() + shift, BigRational::zero());
        }
        for (i, qc) in q.iter().enumerate() {
            let t = c * qc;
            p[i + shift] -= t;
        }
        *p = trim(std::mem::take(p));
    }

    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut u0: Vec<BigRational> = vec![BigRational::one()];
    let mut u1: Vec<BigRational> = vec![BigRational::zero()];
    while !is_zero_poly(&r1) {
        // Divide r0 by r1.
        let mut rem = r0.clone();
        let mut usub = u0.clone();
        let d1 = r1.len() - 1;
        let lead = r1[d1].clone();
        while !is_zero_poly(&rem) && rem.len() - 1 >= d1 {
            let k = rem.len() - 1 - d1;
            let c = &rem[rem.len() - 1] / &lead;
            sub_scaled_shift(&mut rem, &r1, &c, k);
            // usub -= c * x^k * u1
            sub_scaled_shift(&mut usub, &u1, &c, k);
            if rem.len() - 1 < d1 || is_zero_poly(&rem) {
                break;
            }
        }
        r0 = r1;
        r1 = trim(rem);
        u0 = u1;
        u1 = trim(usub);
    }
    (r0, u0)
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.conductor == other.ctx.conductor && self.coeffs == other.coeffs
    }
}
impl Eq for CycScalar {}

macro_rules! binop_same_ctx {
    ($trait_:ident, $fn_:ident, $impl_:expr) => {
        impl std::ops::$trait_<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $fn_(self, rhs: &CycScalar) -> CycScalar {
                assert_eq!(
                    self.ctx.conductor, rhs.ctx.conductor,
                    "conductor mismatch in scalar arithmetic; use checked_* at boundaries"
                );
                #[allow(clippy::redundant_closure_call)]
                ($impl_)(self, rhs)
            }
        }
    };
}

binop_same_ctx!(Add, add, |a: &CycScalar, b: &CycScalar| {
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x + y)
        .collect();
    CycScalar {
        ctx: Arc::clone(&a.ctx),
        coeffs,
    }
});

binop_same_ctx!(Sub, sub, |a: &CycScalar, b: &CycScalar| {
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x - y)
        .collect();
    CycScalar {
        ctx: Arc::clone(&a.ctx),
        coeffs,
    }
});

binop_same_ctx!(Mul, mul, |a: &CycScalar, b: &CycScalar| {
    let phi = a.ctx.phi;
    // Schoolbook convolution; degrees stay below 2*phi - 1.
    let mut conv = vec![BigRational::zero(); 2 * phi - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            conv[i + j] += x * y;
        }
    }
    let mut coeffs: Vec<BigRational> = conv[..phi].to_vec();
    for k in phi..(2 * phi - 1) {
        if conv[k].is_zero() {
            continue;
        }
        let row = &a.ctx.reduction_rows[k - phi];
        for i in 0..phi {
            coeffs[i] += &conv[k] * &row[i];
        }
    }
    CycScalar {
        ctx: Arc::clone(&a.ctx),
        coeffs,
    }
});

impl std::ops::Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycScalar({})", self)
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*z", c)?,
                _ => write!(f, "({})*z^{}", c, i)?,
            }
        }
        Ok(())
    }
}

/// Canonical `p/q` rendering: lowest terms, positive denominator, zero as
/// `0/1`. `BigRational` maintains the first two invariants; the formatting
/// here makes the denominator explicit even when it is 1.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses a canonical `p/q` string.
pub fn rational_from_string(s: &str) -> Result<BigRational> {
    let (p, q) = s
        .split_once('/')
        .ok_or_else(|| HopfError::Malformed(format!("rational `{s}` is not in p/q form")))?;
    let p: BigInt = p
        .parse()
        .map_err(|_| HopfError::Malformed(format!("bad numerator in `{s}`")))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| HopfError::Malformed(format!("bad denominator in `{s}`")))?;
    if q.is_zero() {
        return Err(HopfError::Malformed(format!("zero denominator in `{s}`")));
    }
    if q.is_negative() {
        return Err(HopfError::Malformed(format!(
            "denominator must be positive in `{s}`"
        )));
    }
    Ok(BigRational::new(p, q))
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CycScalar", 2)?;
        st.serialize_field("conductor", &self.ctx.conductor)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(rational_to_string).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = CycScalar;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a {conductor, coeffs} map")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<CycScalar, A::Error> {
                let mut conductor: Option<u64> = None;
                let mut coeffs: Option<Vec<String>> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "conductor" => conductor = Some(map.next_value()?),
                        "coeffs" => coeffs = Some(map.next_value()?),
                        other => {
                            return Err(de::Error::unknown_field(other, &["conductor", "coeffs"]))
                        }
                    }
                }
                let conductor = conductor.ok_or_else(|| de::Error::missing_field("conductor"))?;
                let coeffs = coeffs.ok_or_else(|| de::Error::missing_field("coeffs"))?;
                scalar_from_parts(conductor, &coeffs).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_struct("CycScalar", &["conductor", "coeffs"], V)
    }
}

/// Rebuilds a scalar from serialized parts, validating the slot count.
pub fn scalar_from_parts(conductor: u64, coeffs: &[String]) -> Result<CycScalar> {
    let ctx = FieldContext::new(conductor)?;
    if coeffs.len() != ctx.degree() {
        return Err(HopfError::Malformed(format!(
            "expected {} coefficients for conductor {}, got {}",
            ctx.degree(),
            conductor,
            coeffs.len()
        )));
    }
    let coeffs = coeffs
        .iter()
        .map(|s| rational_from_string(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(CycScalar { ctx, coeffs })
}
