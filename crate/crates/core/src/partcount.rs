//! Partition counts `p_K(α)` and `p_K(α|I)`, their closed forms for small
//! canonical coefficients, and generators of the elements with exactly two
//! indecomposable partitions or exactly six partitions.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::{Descent, Lattice, Pt};
use crate::qfield::{int_surd_sign, QuadInt};

const UNCAPPED: u64 = u64::MAX - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum CountResult {
    Exact(u64),
    AtLeast(u64),
}

impl CountResult {
    pub fn value(self) -> u64 {
        match self {
            CountResult::Exact(v) | CountResult::AtLeast(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, CountResult::Exact(_))
    }

    /// Whether a true count `n` is consistent with this result.
    pub fn admits(self, n: u64) -> bool {
        match self {
            CountResult::Exact(v) => v == n,
            CountResult::AtLeast(v) => n >= v,
        }
    }
}

impl fmt::Display for CountResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountResult::Exact(v) => write!(f, "{v}"),
            CountResult::AtLeast(v) => write!(f, "≥{v}"),
        }
    }
}

/// Parts sorted descending by real value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub parts: Vec<QuadInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    /// `2β_j`
    Double,
    /// `β_j + β_{j+1}`
    Pair,
}

fn check_input(field: &Field, alpha: &QuadInt) -> Result<()> {
    if alpha.ctx().d() != field.d() {
        return Err(Error::CtxMismatch(alpha.ctx().d(), field.d()));
    }
    if !alpha.is_zero() && !alpha.is_totally_positive() {
        return Err(Error::NotTotallyPositive(alpha.to_string()));
    }
    Ok(())
}

/// `ε⁺^k·α` with `k` chosen so both embeddings are as close as possible.
/// Partition counts are invariant under this rescaling.
pub fn balance(field: &Field, alpha: &QuadInt) -> QuadInt {
    if alpha.is_zero() {
        return alpha.clone();
    }
    let (e1, e2) = alpha.to_f64_pair();
    let eps = &field.units().epsilon_plus;
    let log_eps = eps.to_f64_pair().0.ln();
    let k = if e1.is_finite() && e2.is_finite() && e1 > 0.0 && e2 > 0.0 {
        ((e2.ln() - e1.ln()) / (2.0 * log_eps)).round() as i64
    } else {
        0
    };
    let step = if k >= 0 { eps.clone() } else { eps.conjugate() };
    let mut out = alpha.clone();
    for _ in 0..k.unsigned_abs() {
        out = &out * &step;
    }
    out
}

fn to_result(v: u64, cap: u64) -> CountResult {
    if v > cap {
        CountResult::AtLeast(cap + 1)
    } else {
        CountResult::Exact(v)
    }
}

/// All `γ ≻ 0` with `γ ⪯ α`, descending by real value.
pub fn parts_leq(field: &Field, alpha: &QuadInt) -> Result<Vec<QuadInt>> {
    check_input(field, alpha)?;
    if alpha.is_zero() {
        return Err(Error::NotTotallyPositive(alpha.to_string()));
    }
    let lat = Lattice::new(field.ctx());
    let a = lat.pt(alpha)?;
    let desc = Descent::new(&lat, lat.downset_points(a), 0);
    Ok(desc.parts().iter().map(|p| lat.quad(*p)).collect())
}

fn indec_points(field: &Field, lat: &Lattice, alpha: &QuadInt) -> Result<Vec<Pt>> {
    field
        .betas()
        .indecomposables_leq(alpha)?
        .iter()
        .map(|(_, b)| lat.pt(b))
        .collect()
}

fn count(field: &Field, alpha: &QuadInt, cap: Option<u64>, indec_only: bool) -> Result<CountResult> {
    check_input(field, alpha)?;
    let cap = cap.unwrap_or(UNCAPPED).min(UNCAPPED);
    if alpha.is_zero() {
        return Ok(to_result(1, cap));
    }
    let bal = balance(field, alpha);
    let lat = Lattice::new(field.ctx());
    let a = lat.pt(&bal)?;
    let parts = if indec_only {
        indec_points(field, &lat, &bal)?
    } else {
        lat.downset_points(a)
    };
    let mut desc = Descent::new(&lat, parts, cap);
    Ok(to_result(desc.count(a)?, cap))
}

/// `p_K(α)`; with a cap, counts above it come back as `AtLeast(cap + 1)`.
pub fn pk(field: &Field, alpha: &QuadInt, cap: Option<u64>) -> Result<CountResult> {
    count(field, alpha, cap, false)
}

/// `p_K(α|I)`: partitions into indecomposable parts.
pub fn pk_indec(field: &Field, alpha: &QuadInt, cap: Option<u64>) -> Result<CountResult> {
    count(field, alpha, cap, true)
}

/// Up to `limit` partitions of `α`, each sorted descending by real value.
pub fn partitions(field: &Field, alpha: &QuadInt, indec_only: bool, limit: usize) -> Result<Vec<Partition>> {
    check_input(field, alpha)?;
    if alpha.is_zero() {
        return Ok(vec![Partition { parts: Vec::new() }]);
    }
    let lat = Lattice::new(field.ctx());
    let a = lat.pt(alpha)?;
    let parts = if indec_only {
        indec_points(field, &lat, alpha)?
    } else {
        lat.downset_points(a)
    };
    let desc = Descent::new(&lat, parts, 0);
    Ok(desc
        .list(a, limit)
        .into_iter()
        .map(|ps| Partition {
            parts: ps.into_iter().map(|p| lat.quad(p)).collect(),
        })
        .collect())
}

fn check_ir(field: &Field, i: i64, r: u64) -> Result<u64> {
    if i < -1 || i.rem_euclid(2) != 1 {
        return Err(Error::BadIndex(format!("i = {i} must be odd and ≥ -1")));
    }
    let u = field.cf().u(i + 2);
    if r >= u {
        return Err(Error::BadIndex(format!("r = {r} must be below u_{} = {u}", i + 2)));
    }
    Ok(u)
}

/// Closed forms for `2α_{i,r}` and `α_{i,r} + α_{i,r+1}`.
pub fn pk_pair_closed(field: &Field, i: i64, r: u64, kind: PairKind, restricted: bool) -> Result<u64> {
    let u = check_ir(field, i, r)?;
    Ok(match (kind, restricted) {
        (PairKind::Double, true) => (r + 1).min(u - r + 1),
        (PairKind::Pair, true) => (r + 1).min(u - r),
        (PairKind::Double, false) => (r + 2).min(u - r + 2),
        (PairKind::Pair, false) => (r + 2).min(u - r + 1),
    })
}

/// Largest `k0` with `v_k = 2` on `[j - k0, j + k0 + t]`, or `None` when
/// `v_j > 2` or `v_{j+t} > 2`. Then `p_K(β_j + β_{j+t} | I) = k0 + 2`.
pub fn pair_run_radius(field: &Field, j: i64, t: u8) -> Option<u64> {
    assert!(t <= 1, "t must be 0 or 1");
    let t = t as i64;
    let m = field.betas();
    if m.v(j) > 2 || m.v(j + t) > 2 {
        return None;
    }
    let mut k0 = 0i64;
    while m.v(j - k0 - 1) == 2 && m.v(j + k0 + 1 + t) == 2 {
        k0 += 1;
    }
    let target = m.beta(j) + m.beta(j + t);
    for k in 0..=k0 + 1 {
        assert_eq!(m.beta(j - k) + m.beta(j + k + t), target, "chain identity at k = {k}");
    }
    Some(k0 as u64)
}

struct Local {
    e: i64,
    f: i64,
    vm: i64,
    v0: i64,
    v1: i64,
    v2: i64,
}

fn local(field: &Field, alpha: &QuadInt) -> Result<(i64, Local)> {
    let c = field.betas().canonical_decomp(alpha)?;
    let too_big = || Error::TooLarge(format!("canonical coefficients of {alpha}"));
    let e = c.e.to_i64().ok_or_else(too_big)?;
    let f = c.f.to_i64().ok_or_else(too_big)?;
    let m = field.betas();
    let j = c.j;
    Ok((
        j,
        Local {
            e,
            f,
            vm: m.v(j - 1) as i64,
            v0: m.v(j) as i64,
            v1: m.v(j + 1) as i64,
            v2: m.v(j + 2) as i64,
        },
    ))
}

/// Exactly one partition into indecomposables.
pub fn is_unique_decomp(field: &Field, alpha: &QuadInt) -> Result<bool> {
    let (_, l) = local(field, alpha)?;
    Ok(l.e >= 1 && l.e < l.v0 && l.f < l.v1 && (l.e, l.f) != (l.v0 - 1, l.v1 - 1))
}

/// Exactly two partitions into indecomposables.
pub fn is_pki_2(field: &Field, alpha: &QuadInt) -> Result<bool> {
    let (_, l) = local(field, alpha)?;
    let Local { e, f, vm, v0, v1, v2 } = l;
    let c1 = (v0..=2 * v0 - 1).contains(&e)
        && (0..=v1 - 2).contains(&f)
        && (e, f) != (2 * v0 - 1, v1 - 2)
        && (vm, e) != (2, 2 * v0 - 1)
        && (vm, e, f) != (2, 2 * v0 - 2, v1 - 2);
    let c2 = (1..=v0 - 2).contains(&e)
        && (v1..=2 * v1 - 1).contains(&f)
        && (e, f) != (v0 - 2, 2 * v1 - 1)
        && (f, v2) != (2 * v1 - 1, 2)
        && (e, f, v2) != (v0 - 2, 2 * v1 - 2, 2);
    let c3 = e == v0 - 1 && f == v1 - 1 && (vm, v0, v1, v2) != (2, 2, 2, 2);
    Ok(c1 || c2 || c3)
}

/// Coefficient window `e·α_{i,r} + f·α_{i,r+1}` with inclusive ranges.
struct Case {
    r: i64,
    e: (i64, i64),
    f: (i64, i64),
}

fn odd_indices(i_max: i64) -> impl Iterator<Item = i64> {
    (-1..=i_max).step_by(2)
}

/// Emits `x` and its conjugate once each, in real-value order.
fn finish(mut out: Vec<QuadInt>) -> Vec<QuadInt> {
    let conj: Vec<QuadInt> = out.iter().map(QuadInt::conjugate).collect();
    out.extend(conj);
    let mut seen = HashSet::new();
    out.retain(|q| seen.insert(q.clone()));
    out.sort_by(|a, b| a.cmp_real(b).expect("same field"));
    out
}

fn check_imax(i_max: i64) -> Result<()> {
    if i_max < -1 || i_max.rem_euclid(2) != 1 {
        return Err(Error::BadIndex(format!("i_max = {i_max} must be odd and ≥ -1")));
    }
    Ok(())
}

/// Every `α` with `p_K(α|I) = 2` built from `α_{i,r}` with `-1 ≤ i ≤ i_max`,
/// plus conjugates.
pub fn gen_pki2(field: &Field, i_max: i64) -> Result<Vec<QuadInt>> {
    check_imax(i_max)?;
    let cf = field.cf();
    let table = field.table();
    let mut out = Vec::new();
    for i in odd_indices(i_max) {
        let u = |k: i64| cf.u(k) as i64;
        let (a, b, c, d) = (u(i + 1), u(i + 2), u(i + 3), u(i + 4));
        let ui = u(i.abs());
        let mut cases = Vec::new();
        let mut add = |cond: bool, r: i64, e: (i64, i64), f: (i64, i64)| {
            if cond {
                cases.push(Case { r, e, f });
            }
        };
        // condition (1)
        add(b >= 2, 0, (a + 2, 2 * a + 1), (0, 0));
        add(ui == 1 && b >= 2, 0, (2 * a + 2, 2 * a + 2), (0, 0));
        add(ui >= 2 && b == 1, 0, (a + 2, 2 * a + 1), (0, c));
        add(ui >= 2 && b == 1, 0, (2 * a + 2, 2 * a + 2), (0, c - 1));
        add(ui == 1 && b == 1, 0, (a + 2, 2 * a + 2), (0, c));
        add(ui == 1 && b == 1, 0, (2 * a + 3, 2 * a + 3), (0, c - 1));
        add(b >= 3, 1, (2, 2), (0, 0));
        add(b == 2, 1, (2, 2), (0, c));
        add(b == 2, 1, (3, 3), (0, c - 1));
        add(b >= 3, b - 1, (2, 2), (0, c - 1));
        // condition (2)
        add(a >= 2 && b >= 3, 0, (1, a - 1), (2, 2));
        add(a >= 2 && b == 2, 0, (1, a - 1), (2, 3));
        add(b == 2, 0, (a, a), (2, 2));
        add(a >= 2 && b == 1 && d >= 2, 0, (1, a - 1), (c + 2, 2 * c + 2));
        add(b == 1 && d >= 2, 0, (a, a), (c + 2, 2 * c + 1));
        add(a >= 2 && b == 1 && d == 1, 0, (1, a - 1), (c + 2, 2 * c + 3));
        add(b == 1 && d == 1, 0, (a, a), (c + 2, 2 * c + 2));
        // condition (3)
        add(b >= 2, 0, (a + 1, a + 1), (1, 1));
        add(b == 1, 0, (a + 1, a + 1), (c + 1, c + 1));
        add(b >= 3, 1, (1, 1), (1, 1));
        add(b == 2, 1, (1, 1), (c + 1, c + 1));
        add(b >= 4, b - 2, (1, 1), (1, 1));
        add(b >= 3, b - 1, (1, 1), (c + 1, c + 1));

        for case in cases {
            let lo = table.semiconvergent(i, case.r as u64)?;
            let hi = table.semiconvergent(i, case.r as u64 + 1)?;
            for e in case.e.0..=case.e.1 {
                for f in case.f.0..=case.f.1 {
                    out.push(lo.scale(e) + hi.scale(f));
                }
            }
        }
    }
    Ok(finish(out))
}

/// Closed-form `p_K(α)` when the canonical coefficients are small, otherwise
/// a lower bound.
pub fn pk_closed_small(field: &Field, alpha: &QuadInt) -> Result<CountResult> {
    let (j, l) = local(field, alpha)?;
    let m = field.betas();
    use CountResult::{AtLeast, Exact};
    Ok(match (l.e, l.f) {
        (1, 0) => Exact(1),
        (2, 0) => {
            let (i, r) = m.index_of(j.abs());
            Exact(pk_pair_closed(field, i, r, PairKind::Double, false)?)
        }
        (1, 1) => {
            let (i, r) = m.index_of(if j >= 0 { j } else { -j - 1 });
            Exact(pk_pair_closed(field, i, r, PairKind::Pair, false)?)
        }
        (3, 0) => match l.v0 {
            v if v >= 4 => Exact(3),
            3 => Exact(4),
            _ if l.vm > 2 && l.v1 > 2 => Exact(6),
            _ => AtLeast(8),
        },
        (4, 0) => match l.v0 {
            v if v >= 5 => Exact(5),
            4 => Exact(6),
            3 => AtLeast(8),
            _ => AtLeast(16),
        },
        (2, 1) => two_one(l.vm, l.v0, l.v1),
        // conjugation turns β_j + 2β_{j+1} into 2β_{j'} + β_{j'+1}
        (1, 2) => two_one(l.v2, l.v1, l.v0),
        _ => AtLeast(7),
    })
}

fn two_one(vm: i64, v0: i64, v1: i64) -> CountResult {
    use CountResult::{AtLeast, Exact};
    match (v0, v1) {
        (3, 2) => Exact(5),
        (v, _) if v >= 3 => Exact(4),
        (_, w) if w >= 4 => Exact(6),
        (_, 3) if vm > 2 => Exact(6),
        (_, 3) => Exact(7),
        _ => AtLeast(8),
    }
}

/// Every `α` with `p_K(α) = 6` built from `α_{i,r}` with `-1 ≤ i ≤ i_max`,
/// plus conjugates.
pub fn gen_pk6(field: &Field, i_max: i64) -> Result<Vec<QuadInt>> {
    check_imax(i_max)?;
    let cf = field.cf();
    let t = field.table();
    let sc = |i: i64, r: i64| t.semiconvergent(i, r as u64);
    let mut out = Vec::new();
    for i in odd_indices(i_max) {
        let u = |k: i64| cf.u(k) as i64;
        let (a, b, c) = (u(i + 1), u(i + 2), u(i + 3));
        if b >= 8 {
            out.push(sc(i, 4)?.scale(2));
        }
        if b >= 9 {
            out.push(sc(i, b - 4)?.scale(2));
            out.push(sc(i, 4)? + sc(i, 5)?);
        }
        if b >= 10 {
            out.push(sc(i, b - 5)? + sc(i, b - 4)?);
        }
        if b == 2 {
            out.push(sc(i, 1)?.scale(3));
        }
        if a == 2 {
            out.push(sc(i, 0)?.scale(4));
        }
        if (b >= 2 && c >= 2) || (b == 2 && c == 1) {
            out.push(sc(i, b - 1)?.scale(2) + t.alpha(i + 2)?);
        }
        if (a >= 2 && b >= 2) || (a == 1 && b == 2) {
            out.push(sc(i, 0)? + sc(i, 1)?.scale(2));
        }
    }
    Ok(finish(out))
}

/// Whether some totally positive integer has exactly six partitions.
pub fn has_pk6(field: &Field) -> bool {
    let cf = field.cf();
    let n = 2 * cf.s() as i64;
    (0..=n).any(|i| {
        let u = cf.u(i);
        (i % 2 == 1 && u >= 8) || u == 2 || (u >= 2 && cf.u(i + 1) >= 2)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum SixOrNine {
    NotApplicable,
    Predicted { alpha: QuadInt, value: u64 },
}

/// The element `(⌈2ξ⌉ + 2) + 2ω` with its predicted count (6 or 9).
pub fn six_or_nine_element(field: &Field) -> SixOrNine {
    let ctx = field.ctx();
    if ctx.d() == 5 {
        return SixOrNine::NotApplicable;
    }
    let t = ctx.tr_omega();
    // ⌈2ξ⌉ = ⌊√Δ⌋ - t + 1 since 2ξ = √Δ - t is irrational
    let ceil_2xi = ctx.isqrt_delta() as i64 - t + 1;
    let alpha = QuadInt::new(ceil_2xi + 2, 2, ctx);
    // ⌈ξ⌉ - ξ > 1/2  ⇔  2⌊ξ⌋ + 1 + t - √Δ > 0
    let lhs = BigInt::from(2 * ctx.floor_xi() + 1 + t);
    let value = if int_surd_sign(&lhs, &-BigInt::one(), ctx.delta()) > 0 {
        6
    } else {
        9
    };
    SixOrNine::Predicted { alpha, value }
}

/// Whether `u_1 ≥ 2`, the continued-fraction form of the 6-vs-9 split.
pub fn predicts_six(field: &Field) -> bool {
    field.cf().u(1) >= 2
}

/// Canonical pair `(e, f)` as small integers, for callers that need them.
pub fn canonical_small(field: &Field, alpha: &QuadInt) -> Result<(i64, i64, i64)> {
    let c = field.betas().canonical_decomp(alpha)?;
    let conv = |v: &BigInt| v.to_i64().ok_or_else(|| Error::TooLarge(v.to_string()));
    Ok((c.j, conv(&c.e)?, conv(&c.f)?))
}

/// `e·β_j + f·β_{j+1}`
pub fn combo(field: &Field, j: i64, e: i64, f: i64) -> QuadInt {
    let m = field.betas();
    let mut out = m.beta(j).scale(e);
    if f != 0 {
        out = out + m.beta(j + 1).scale(f);
    }
    out
}
