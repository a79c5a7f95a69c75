//! Exact arithmetic in the ring of integers of a real quadratic field.
//!
//! Elements are stored as coordinate pairs over the integral basis `(1, ω)`,
//! where `ω = √D` for `D ≡ 2, 3 (mod 4)` and `ω = (1 + √D)/2` for
//! `D ≡ 1 (mod 4)`. In both cases `ω = (t + √Δ)/2` with `t = Tr(ω)`, so an
//! element `a + bω` has real embeddings `(2a + bt ± b√Δ)/2`. Every ordering
//! and positivity decision reduces to the sign of an integer surd
//! `x + y√Δ`, which is decided without floating point.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisCase {
    /// `D ≡ 2, 3 (mod 4)`, `ω = √D`.
    Sqrt,
    /// `D ≡ 1 (mod 4)`, `ω = (1 + √D)/2`.
    HalfIntegral,
}

/// Immutable per-field constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    d: u64,
    delta: u64,
    basis: BasisCase,
    tr_omega: i64,
    nm_omega: i64,
    floor_xi: i64,
    c_d: i64,
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Squarefree integers in `[2, x]`, ascending.
pub fn squarefree_upto(x: u64) -> Vec<u64> {
    (2..=x).filter(|&d| is_squarefree(d)).collect()
}

impl FieldCtx {
    /// Builds the context for `Q(√D)`.
    pub fn new(d: i64) -> Result<Arc<FieldCtx>> {
        if d < 2 {
            return Err(Error::OutOfRange(d));
        }
        let du = d as u64;
        if !is_squarefree(du) {
            return Err(Error::NotSquarefree(du));
        }
        if du > u32::MAX as u64 {
            return Err(Error::TooLarge(format!("D = {du} exceeds 2^32")));
        }
        let (basis, delta, tr_omega, nm_omega, c_d) = if du % 4 == 1 {
            (BasisCase::HalfIntegral, du, 1, (1 - d) / 4, (d - 1) / 4)
        } else {
            (BasisCase::Sqrt, 4 * du, 0, -d, d)
        };
        // ξ = (√Δ - t)/2 and √Δ is irrational, so ⌊ξ⌋ = ⌊(⌊√Δ⌋ - t)/2⌋.
        let floor_xi = Integer::div_floor(&(delta.sqrt() as i64 - tr_omega), &2);
        Ok(Arc::new(FieldCtx {
            d: du,
            delta,
            basis,
            tr_omega,
            nm_omega,
            floor_xi,
            c_d,
        }))
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// The discriminant Δ.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn basis(&self) -> BasisCase {
        self.basis
    }

    pub fn tr_omega(&self) -> i64 {
        self.tr_omega
    }

    pub fn nm_omega(&self) -> i64 {
        self.nm_omega
    }

    pub fn floor_xi(&self) -> i64 {
        self.floor_xi
    }

    /// Upper bound for norms of indecomposables: `D`, or `(D - 1)/4` when `D ≡ 1 (mod 4)`.
    pub fn c_d(&self) -> i64 {
        self.c_d
    }

    /// `⌊√Δ⌋`.
    pub fn isqrt_delta(&self) -> u64 {
        self.delta.sqrt()
    }

    pub fn delta_big(&self) -> BigInt {
        BigInt::from(self.delta)
    }
}

/// Sign of `x + y√Δ` for integers `x, y`.
pub fn int_surd_sign(x: &BigInt, y: &BigInt, delta: u64) -> i8 {
    let sx = sign_of(x);
    let sy = sign_of(y);
    if sx >= 0 && sy >= 0 {
        return if sx == 0 && sy == 0 { 0 } else { 1 };
    }
    if sx <= 0 && sy <= 0 {
        return -1;
    }
    // mixed signs: compare x² with y²Δ
    let lhs = x * x;
    let rhs = y * y * BigInt::from(delta);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => 0,
    }
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// `⌊y√Δ⌋` for non-square Δ.
pub fn floor_y_sqrt(y: &BigInt, delta: u64) -> BigInt {
    if y.is_zero() {
        return BigInt::zero();
    }
    let r = (y * y * BigInt::from(delta)).sqrt();
    if y.is_positive() {
        r
    } else {
        -r - 1
    }
}

/// `⌊(x + y√Δ)/q⌋` for `q > 0` and non-square Δ.
pub fn floor_surd(x: &BigInt, y: &BigInt, q: &BigInt, delta: u64) -> BigInt {
    debug_assert!(q.is_positive());
    (x + floor_y_sqrt(y, delta)).div_floor(q)
}

/// `x + y√Δ` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdExpr {
    pub x: BigRational,
    pub y: BigRational,
    pub ctx: Arc<FieldCtx>,
}

impl SurdExpr {
    pub fn new(x: BigRational, y: BigRational, ctx: &Arc<FieldCtx>) -> Self {
        SurdExpr {
            x,
            y,
            ctx: Arc::clone(ctx),
        }
    }

    pub fn from_ints(x: impl Into<BigInt>, y: impl Into<BigInt>, ctx: &Arc<FieldCtx>) -> Self {
        SurdExpr::new(
            BigRational::from_integer(x.into()),
            BigRational::from_integer(y.into()),
            ctx,
        )
    }

    /// The exact value `√Δ`.
    pub fn sqrt_delta(ctx: &Arc<FieldCtx>) -> Self {
        SurdExpr::from_ints(0, 1, ctx)
    }

    /// Exact sign in `{-1, 0, 1}`.
    pub fn sign(&self) -> i8 {
        // clear denominators; the common denominator is positive
        let den = self.x.denom().lcm(self.y.denom());
        let x = self.x.numer() * (&den / self.x.denom());
        let y = self.y.numer() * (&den / self.y.denom());
        int_surd_sign(&x, &y, self.ctx.delta)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        SurdExpr::new(&self.x * k, &self.y * k, &self.ctx)
    }

    /// Non-authoritative floating-point value, for reports only.
    pub fn to_f64(&self) -> f64 {
        self.x.to_f64().unwrap_or(f64::NAN)
            + self.y.to_f64().unwrap_or(f64::NAN) * (self.ctx.delta as f64).sqrt()
    }
}

impl Add for &SurdExpr {
    type Output = SurdExpr;
    fn add(self, rhs: &SurdExpr) -> SurdExpr {
        assert_same_ctx(&self.ctx, &rhs.ctx);
        SurdExpr::new(&self.x + &rhs.x, &self.y + &rhs.y, &self.ctx)
    }
}

impl Sub for &SurdExpr {
    type Output = SurdExpr;
    fn sub(self, rhs: &SurdExpr) -> SurdExpr {
        assert_same_ctx(&self.ctx, &rhs.ctx);
        SurdExpr::new(&self.x - &rhs.x, &self.y - &rhs.y, &self.ctx)
    }
}

impl Mul for &SurdExpr {
    type Output = SurdExpr;
    fn mul(self, rhs: &SurdExpr) -> SurdExpr {
        assert_same_ctx(&self.ctx, &rhs.ctx);
        let delta = BigRational::from_integer(self.ctx.delta_big());
        let x = &self.x * &rhs.x + &self.y * &rhs.y * delta;
        let y = &self.x * &rhs.y + &self.y * &rhs.x;
        SurdExpr::new(x, y, &self.ctx)
    }
}

impl fmt::Display for SurdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.x, self.y, self.ctx.delta)
    }
}

fn assert_same_ctx(a: &FieldCtx, b: &FieldCtx) {
    if a.d != b.d {
        panic!("{}", Error::CtxMismatch(a.d, b.d));
    }
}

fn check_ctx(a: &FieldCtx, b: &FieldCtx) -> Result<()> {
    if a.d != b.d {
        Err(Error::CtxMismatch(a.d, b.d))
    } else {
        Ok(())
    }
}

/// An algebraic integer `a + bω`.
#[derive(Clone)]
pub struct QuadInt {
    a: BigInt,
    b: BigInt,
    ctx: Arc<FieldCtx>,
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, ctx: &Arc<FieldCtx>) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
            ctx: Arc::clone(ctx),
        }
    }

    pub fn from_int(n: impl Into<BigInt>, ctx: &Arc<FieldCtx>) -> Self {
        QuadInt::new(n, 0, ctx)
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        QuadInt::new(0, 0, ctx)
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        QuadInt::new(1, 0, ctx)
    }

    pub fn omega(ctx: &Arc<FieldCtx>) -> Self {
        QuadInt::new(0, 1, ctx)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `2·α = X + Y√Δ` for the first embedding, returned as `(X, Y)`.
    pub fn twice_surd(&self) -> (BigInt, BigInt) {
        (
            BigInt::from(2) * &self.a + &self.b * self.ctx.tr_omega,
            self.b.clone(),
        )
    }

    pub fn conjugate(&self) -> QuadInt {
        QuadInt {
            a: &self.a + &self.b * self.ctx.tr_omega,
            b: -&self.b,
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.a * &self.b * self.ctx.tr_omega
            + &self.b * &self.b * self.ctx.nm_omega
    }

    pub fn trace(&self) -> BigInt {
        BigInt::from(2) * &self.a + &self.b * self.ctx.tr_omega
    }

    /// Sign of the first real embedding.
    pub fn sign(&self) -> i8 {
        let (x, y) = self.twice_surd();
        int_surd_sign(&x, &y, self.ctx.delta)
    }

    /// Sign of the second (conjugate) real embedding.
    pub fn conj_sign(&self) -> i8 {
        let (x, y) = self.twice_surd();
        int_surd_sign(&x, &-y, self.ctx.delta)
    }

    pub fn is_totally_positive(&self) -> bool {
        self.sign() > 0 && self.conj_sign() > 0
    }

    /// `self ⪰ other`: the difference is totally positive or zero.
    pub fn succeq(&self, other: &QuadInt) -> Result<bool> {
        let d = self.try_sub(other)?;
        Ok(d.is_zero() || d.is_totally_positive())
    }

    /// `self ≻ other`.
    pub fn succ(&self, other: &QuadInt) -> Result<bool> {
        Ok(self.try_sub(other)?.is_totally_positive())
    }

    /// Compares first real embeddings exactly.
    pub fn cmp_real(&self, other: &QuadInt) -> Result<Ordering> {
        let d = self.try_sub(other)?;
        Ok(d.sign().cmp(&0))
    }

    /// Compares second real embeddings exactly.
    pub fn cmp_conj(&self, other: &QuadInt) -> Result<Ordering> {
        let d = self.try_sub(other)?;
        Ok(d.conj_sign().cmp(&0))
    }

    pub fn try_add(&self, rhs: &QuadInt) -> Result<QuadInt> {
        check_ctx(&self.ctx, &rhs.ctx)?;
        Ok(QuadInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            ctx: Arc::clone(&self.ctx),
        })
    }

    pub fn try_sub(&self, rhs: &QuadInt) -> Result<QuadInt> {
        check_ctx(&self.ctx, &rhs.ctx)?;
        Ok(QuadInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            ctx: Arc::clone(&self.ctx),
        })
    }

    pub fn try_mul(&self, rhs: &QuadInt) -> Result<QuadInt> {
        check_ctx(&self.ctx, &rhs.ctx)?;
        // ω² = tω - n
        let t = self.ctx.tr_omega;
        let n = self.ctx.nm_omega;
        let bd = &self.b * &rhs.b;
        Ok(QuadInt {
            a: &self.a * &rhs.a - &bd * n,
            b: &self.a * &rhs.b + &self.b * &rhs.a + bd * t,
            ctx: Arc::clone(&self.ctx),
        })
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> QuadInt {
        let k = k.into();
        QuadInt {
            a: &self.a * &k,
            b: &self.b * &k,
            ctx: Arc::clone(&self.ctx),
        }
    }

    /// Non-authoritative floating-point embeddings.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let (x, y) = self.twice_surd();
        let x = x.to_f64().unwrap_or(f64::NAN);
        let y = y.to_f64().unwrap_or(f64::NAN);
        let r = (self.ctx.delta as f64).sqrt();
        ((x + y * r) / 2.0, (x - y * r) / 2.0)
    }

    pub fn to_repr(&self) -> QuadIntRepr {
        QuadIntRepr {
            a: self.a.to_string(),
            b: self.b.to_string(),
            d: self.ctx.d,
        }
    }
}

impl PartialEq for QuadInt {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.d == other.ctx.d && self.a == other.a && self.b == other.b
    }
}

impl Eq for QuadInt {}

impl Hash for QuadInt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.d.hash(state);
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadInt({}, {}; D={})", self.a, self.b, self.ctx.d)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.ctx.basis {
            BasisCase::Sqrt => format!("√{}", self.ctx.d),
            BasisCase::HalfIntegral => "ω".to_string(),
        };
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}{}", self.b, w)
        } else if self.b.is_negative() {
            write!(f, "{} - {}{}", self.a, -&self.b, w)
        } else {
            write!(f, "{} + {}{}", self.a, self.b, w)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&QuadInt> for &QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: &QuadInt) -> QuadInt {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: QuadInt) -> QuadInt {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: &QuadInt) -> QuadInt {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            a: -&self.a,
            b: -&self.b,
            ctx: Arc::clone(&self.ctx),
        }
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

/// Wire form: `{"a": "...", "b": "...", "D": n}` with base-10 strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadIntRepr {
    pub a: String,
    pub b: String,
    #[serde(rename = "D")]
    pub d: u64,
}

impl QuadIntRepr {
    pub fn into_quadint(self) -> Result<QuadInt> {
        let ctx = FieldCtx::new(self.d as i64)?;
        let a: BigInt = self
            .a
            .parse()
            .map_err(|_| Error::BadIndex(format!("bad integer {:?}", self.a)))?;
        let b: BigInt = self
            .b
            .parse()
            .map_err(|_| Error::BadIndex(format!("bad integer {:?}", self.b)))?;
        Ok(QuadInt::new(a, b, &ctx))
    }
}

impl Serialize for QuadInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadInt {
    fn deserialize<De: Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let repr = QuadIntRepr::deserialize(d)?;
        repr.into_quadint().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64, ctx: &Arc<FieldCtx>) -> QuadInt {
        QuadInt::new(a, b, ctx)
    }

    #[test]
    fn make_field_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        assert_eq!(
            (f2.delta(), f2.c_d(), f2.tr_omega(), f2.floor_xi()),
            (8, 2, 0, 1)
        );
        let f5 = FieldCtx::new(5).unwrap();
        assert_eq!(
            (f5.delta(), f5.c_d(), f5.tr_omega(), f5.floor_xi()),
            (5, 1, 1, 0)
        );
        assert_eq!(FieldCtx::new(12).unwrap_err(), Error::NotSquarefree(12));
        assert_eq!(FieldCtx::new(1).unwrap_err(), Error::OutOfRange(1));
        assert_eq!(FieldCtx::new(-3).unwrap_err(), Error::OutOfRange(-3));
    }

    #[test]
    fn floor_xi_matches_float_screen() {
        for d in squarefree_upto(500) {
            let ctx = FieldCtx::new(d as i64).unwrap();
            let xi = match ctx.basis() {
                BasisCase::Sqrt => (d as f64).sqrt(),
                BasisCase::HalfIntegral => ((d as f64).sqrt() - 1.0) / 2.0,
            };
            assert_eq!(ctx.floor_xi(), xi.floor() as i64, "D={d}");
        }
    }

    #[test]
    fn conjugate_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let f5 = FieldCtx::new(5).unwrap();
        assert_eq!(q(3, 2, &f2).conjugate(), q(3, -2, &f2));
        assert_eq!(q(0, 1, &f5).conjugate(), q(1, -1, &f5));
        assert_eq!(q(4, 0, &f2).conjugate(), q(4, 0, &f2));
    }

    #[test]
    fn norm_trace_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let f5 = FieldCtx::new(5).unwrap();
        assert_eq!(q(3, 2, &f2).norm(), BigInt::from(1));
        assert_eq!(q(3, 2, &f2).trace(), BigInt::from(6));
        assert_eq!(q(0, 1, &f5).norm(), BigInt::from(-1));
        assert_eq!(q(0, 1, &f5).trace(), BigInt::from(1));
        for d in [2, 3, 5, 13] {
            let ctx = FieldCtx::new(d).unwrap();
            assert_eq!(q(7, 0, &ctx).norm(), BigInt::from(49));
            assert_eq!(q(7, 0, &ctx).trace(), BigInt::from(14));
        }
    }

    #[test]
    fn positivity_and_order_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        assert!(q(2, 1, &f2).is_totally_positive());
        assert!(!q(1, 1, &f2).is_totally_positive());
        assert!(!q(0, 0, &f2).is_totally_positive());
        assert!(q(4, 2, &f2).succeq(&q(2, 1, &f2)).unwrap());
        assert!(!q(3, 0, &f2).succeq(&q(1, 2, &f2)).unwrap());
        assert!(q(3, 0, &f2).succeq(&q(3, 0, &f2)).unwrap());
        assert!(!q(3, 0, &f2).succ(&q(3, 0, &f2)).unwrap());
        assert_eq!(q(2, 1, &f2).cmp_real(&q(3, 0, &f2)).unwrap(), Ordering::Greater);
        assert_eq!(q(1, 0, &f2).cmp_real(&q(2, 1, &f2)).unwrap(), Ordering::Less);
        assert_eq!(q(5, 3, &f2).cmp_real(&q(5, 3, &f2)).unwrap(), Ordering::Equal);
    }

    #[test]
    fn ctx_mismatch_is_an_error() {
        let f2 = FieldCtx::new(2).unwrap();
        let f3 = FieldCtx::new(3).unwrap();
        assert_eq!(
            q(1, 0, &f2).succeq(&q(1, 0, &f3)).unwrap_err(),
            Error::CtxMismatch(2, 3)
        );
        assert!(q(1, 0, &f2).cmp_real(&q(1, 0, &f3)).is_err());
    }

    #[test]
    #[should_panic(expected = "CtxMismatch")]
    fn operator_ctx_mismatch_panics() {
        let f2 = FieldCtx::new(2).unwrap();
        let f3 = FieldCtx::new(3).unwrap();
        let _ = q(1, 0, &f2) + q(1, 0, &f3);
    }

    #[test]
    fn surd_sign_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        assert_eq!(SurdExpr::from_ints(3, -1, &f2).sign(), 1);
        assert_eq!(SurdExpr::from_ints(0, 0, &f2).sign(), 0);
        assert_eq!(SurdExpr::from_ints(-3, 1, &f2).sign(), -1);
        let half = BigRational::new(1.into(), 2.into());
        let e = SurdExpr::new(half.clone(), -half, &f2);
        assert_eq!(e.sign(), -1);
    }

    #[test]
    fn serde_wire_format() {
        let f5 = FieldCtx::new(5).unwrap();
        let x = q(-12, 7, &f5);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"-12","b":"7","D":5}"#);
        let back: QuadInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<QuadInt>(r#"{"a":"1","b":"0","D":8}"#).is_err());
    }

    const TEST_DS: [i64; 8] = [2, 3, 5, 6, 7, 13, 21, 94];

    proptest! {
        #[test]
        fn conjugate_involution_and_norm(di in 0usize..8, a in -10_000i64..10_000, b in -10_000i64..10_000) {
            let ctx = FieldCtx::new(TEST_DS[di]).unwrap();
            let x = q(a, b, &ctx);
            prop_assert_eq!(x.conjugate().conjugate(), x.clone());
            let prod = &x * &x.conjugate();
            prop_assert_eq!(prod.b(), &BigInt::zero());
            prop_assert_eq!(prod.a(), &x.norm());
        }

        #[test]
        fn norm_multiplicative_trace_additive(di in 0usize..8, a in -500i64..500, b in -500i64..500, c in -500i64..500, d in -500i64..500) {
            let ctx = FieldCtx::new(TEST_DS[di]).unwrap();
            let x = q(a, b, &ctx);
            let y = q(c, d, &ctx);
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            prop_assert_eq!((&x + &y).trace(), x.trace() + y.trace());
        }

        #[test]
        fn total_positivity_via_cmp_real(di in 0usize..8, a in -300i64..300, b in -300i64..300) {
            let ctx = FieldCtx::new(TEST_DS[di]).unwrap();
            let x = q(a, b, &ctx);
            let zero = QuadInt::zero(&ctx);
            let expected = x.cmp_real(&zero).unwrap() == Ordering::Greater
                && x.conjugate().cmp_real(&zero).unwrap() == Ordering::Greater;
            prop_assert_eq!(x.is_totally_positive(), expected);
        }

        #[test]
        fn succeq_is_a_partial_order(di in 0usize..8, c in proptest::collection::vec(-60i64..60, 6)) {
            let ctx = FieldCtx::new(TEST_DS[di]).unwrap();
            let (x, y, z) = (q(c[0], c[1], &ctx), q(c[2], c[3], &ctx), q(c[4], c[5], &ctx));
            prop_assert!(x.succeq(&x).unwrap());
            if x.succeq(&y).unwrap() && y.succeq(&x).unwrap() {
                prop_assert_eq!(&x, &y);
            }
            if x.succeq(&y).unwrap() && y.succeq(&z).unwrap() {
                prop_assert!(x.succeq(&z).unwrap());
            }
        }

        #[test]
        fn succeq_agrees_with_float_screen(di in 0usize..8, a in -1000i64..1000, b in -1000i64..1000) {
            let ctx = FieldCtx::new(TEST_DS[di]).unwrap();
            let x = q(a, b, &ctx);
            let (e1, e2) = x.to_f64_pair();
            let zero = QuadInt::zero(&ctx);
            // the screen is only trusted away from the boundary
            if e1.abs() > 1e-6 && e2.abs() > 1e-6 {
                prop_assert_eq!(x.succeq(&zero).unwrap(), x.is_zero() || (e1 > 0.0 && e2 > 0.0));
            }
        }

        #[test]
        fn surd_sign_is_odd(di in 0usize..8, x in -1_000_000i64..1_000_000, y in -1_000i64..1_000, den in 1i64..50) {
            let ctx = FieldCtx::new(TEST_DS[di]).unwrap();
            let xr = BigRational::new(x.into(), den.into());
            let yr = BigRational::new(y.into(), (den + 1).into());
            let e = SurdExpr::new(xr.clone(), yr.clone(), &ctx);
            let ne = SurdExpr::new(-xr, -yr, &ctx);
            prop_assert_eq!(e.sign(), -ne.sign());
        }
    }
}
