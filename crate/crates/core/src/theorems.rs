//! Norm-bound verification, range witnesses, the exact decision procedure
//! for `m ∈ p_K(O_K⁺)`, scans over `D`, and density reports.
//!
//! Completeness of [`decide_m_in_range`]: if `p_K(α) = m` then
//! `p_K(α|I) ≤ m`, since partitions into indecomposables are a subset of all
//! partitions. Writing `α = eβ_j + fβ_{j+1}` canonically, `e ≥ m·v_j` would
//! give `m + 1` distinct indecomposable partitions (rewrite `m·v_j·β_j` one
//! `v_j`-block at a time), so `e < m·v_j` and likewise `f < m·v_{j+1}`.
//! Multiplying by powers of `ε⁺` shifts `j` by multiples of `s′` without
//! changing any count, so `j ∈ [0, s′)` suffices. Within that box `p_K` is
//! strictly increasing along `⪯`, and the chain `β_j ≺ 2β_j ≺ … ≺ α` has
//! length `e + f`, so `p_K(α) ≥ e + f`; loops stop once a count passes `m`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::partcount::{combo, gen_pki2, has_pk6, pk, pk_indec, CountResult};
use crate::qfield::{squarefree_upto, FieldCtx, QuadInt, SurdExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "m", rename_all = "snake_case")]
pub enum BoundKind {
    /// `Nm(β) ≤ c_D` for indecomposables.
    IndecNorm,
    /// Uniquely decomposable elements.
    UniqueDecomp,
    /// Elements with at most `m` indecomposable partitions.
    AtMost(u32),
    /// Elements with exactly two indecomposable partitions.
    TwoIndec,
}

impl BoundKind {
    /// Short token used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::IndecNorm => "ds",
            BoundKind::UniqueDecomp => "hk10",
            BoundKind::AtMost(_) => "n",
            BoundKind::TwoIndec => "n2",
        }
    }
}

/// The bound as an exact `x + y√Δ`.
pub fn bound_value(kind: BoundKind, ctx: &std::sync::Arc<FieldCtx>) -> SurdExpr {
    let d = BigInt::from(ctx.delta());
    match kind {
        BoundKind::IndecNorm => SurdExpr::from_ints(ctx.c_d(), 0, ctx),
        // √Δ(2√Δ + 1)(3√Δ + 2)
        BoundKind::UniqueDecomp => SurdExpr::from_ints(&d * 7, &d * 6 + 2, ctx),
        // m²(2m+1)(2m+3)·√Δ(√Δ + 2)²
        BoundKind::AtMost(m) => {
            let m = BigInt::from(m);
            let c = &m * &m * (&m * 2 + 1) * (&m * 2 + 3);
            SurdExpr::from_ints(&c * &d * 4, &c * (&d + 4), ctx)
        }
        // 5√Δ(√Δ + 1)(3√Δ + 2)
        BoundKind::TwoIndec => SurdExpr::from_ints(&d * 25, &d * 15 + 10, ctx),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    #[serde(rename = "D")]
    pub d: u64,
    pub bound_kind: BoundKind,
    pub candidates_checked: u64,
    pub max_norm_seen: String,
    pub bound_value: String,
    /// `max_norm_seen / bound`, floating point, informational.
    pub headroom: f64,
    pub violations: Vec<QuadInt>,
}

impl BoundReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

struct BoundCheck {
    bound: SurdExpr,
    strict: bool,
    checked: u64,
    max_norm: BigInt,
    violations: Vec<QuadInt>,
}

impl BoundCheck {
    fn new(bound: SurdExpr, strict: bool) -> Self {
        BoundCheck {
            bound,
            strict,
            checked: 0,
            max_norm: BigInt::from(0),
            violations: Vec::new(),
        }
    }

    fn check(&mut self, alpha: &QuadInt) {
        let n = alpha.norm();
        let diff = &self.bound - &SurdExpr::from_ints(n.clone(), 0, &self.bound.ctx);
        let s = diff.sign();
        if s < 0 || (self.strict && s == 0) {
            self.violations.push(alpha.clone());
        }
        if n > self.max_norm {
            self.max_norm = n;
        }
        self.checked += 1;
    }

    fn report(self, d: u64, kind: BoundKind) -> BoundReport {
        let headroom = self.max_norm.to_f64().unwrap_or(f64::NAN) / self.bound.to_f64();
        BoundReport {
            d,
            bound_kind: kind,
            candidates_checked: self.checked,
            max_norm_seen: self.max_norm.to_string(),
            bound_value: self.bound.to_string(),
            headroom,
            violations: self.violations,
        }
    }
}

/// `(j, e, f)` for `j ∈ [offset, offset + s′)`, `1 ≤ e ≤ m·v_j - 1`,
/// `0 ≤ f ≤ m·v_{j+1} - 1`.
pub fn candidate_triples(field: &Field, m: u64, offset: i64) -> Vec<(i64, i64, i64)> {
    let betas = field.betas();
    let mut out = Vec::new();
    for j in offset..offset + betas.s_prime() {
        let (ve, vf) = (m * betas.v(j), m * betas.v(j + 1));
        for e in 1..ve as i64 {
            for f in 0..vf as i64 {
                out.push((j, e, f));
            }
        }
    }
    out
}

/// Every `α` with `p_K(α|I) ≤ m`, up to units, appears here.
pub fn candidate_set(field: &Field, m: u64) -> Vec<QuadInt> {
    candidate_triples(field, m, 0)
        .into_iter()
        .map(|(j, e, f)| combo(field, j, e, f))
        .collect()
}

/// Visits canonical candidates whose indecomposable count is at most `m`,
/// skipping the rest of a row or block once the count passes `m`.
fn for_each_small_indec(
    field: &Field,
    m: u64,
    mut visit: impl FnMut(&QuadInt, u64),
) -> Result<()> {
    let betas = field.betas();
    for j in 0..betas.s_prime() {
        let (ve, vf) = (m * betas.v(j), m * betas.v(j + 1));
        for e in 1..ve as i64 {
            let mut row_empty = false;
            for f in 0..vf as i64 {
                let alpha = combo(field, j, e, f);
                match pk_indec(field, &alpha, Some(m))? {
                    CountResult::Exact(c) => visit(&alpha, c),
                    CountResult::AtLeast(_) => {
                        row_empty = f == 0;
                        break;
                    }
                }
            }
            if row_empty {
                break;
            }
        }
    }
    Ok(())
}

pub fn verify_bound(field: &Field, kind: BoundKind) -> Result<BoundReport> {
    let ctx = field.ctx();
    let bound = bound_value(kind, ctx);
    let mut chk = BoundCheck::new(bound, kind != BoundKind::IndecNorm);
    match kind {
        BoundKind::IndecNorm => {
            for j in 0..field.betas().s_prime() {
                chk.check(&field.betas().beta(j));
            }
        }
        BoundKind::UniqueDecomp => for_each_small_indec(field, 1, |a, _| chk.check(a))?,
        BoundKind::AtMost(m) => {
            if m == 0 {
                return Err(Error::BadIndex("m must be at least 1".into()));
            }
            for_each_small_indec(field, m as u64, |a, _| chk.check(a))?
        }
        BoundKind::TwoIndec => {
            let i_max = field.cf().unit_index_period() as i64 + 1;
            for a in gen_pki2(field, i_max)? {
                chk.check(&a);
            }
            for_each_small_indec(field, 2, |a, c| {
                if c == 2 {
                    chk.check(a)
                }
            })?;
        }
    }
    Ok(chk.report(ctx.d(), kind))
}

#[derive(Debug, Clone, Serialize)]
pub struct RangeWitnesses {
    /// Largest `u_i` over odd `i`.
    #[serde(rename = "B")]
    pub b: u64,
    pub witnesses: BTreeMap<u64, QuadInt>,
}

/// Elements with exactly `m` partitions for `1 ≤ m ≤ ⌊B/2⌋ + 2`.
pub fn range_witnesses(field: &Field) -> Result<RangeWitnesses> {
    let cf = field.cf();
    let (k, b) = (1..=2 * cf.s() as i64)
        .step_by(2)
        .map(|k| (k, cf.u(k)))
        .fold((1, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let i = k - 2;
    let mut witnesses = BTreeMap::new();
    witnesses.insert(1, field.betas().beta(1));
    for m in 2..=b / 2 + 2 {
        let w = field.table().semiconvergent(i, m - 2)?.scale(2);
        let c = pk(field, &w, Some(m + 1))?;
        if c != CountResult::Exact(m) {
            return Err(Error::Internal(format!(
                "witness {w} for m = {m} has {c} partitions"
            )));
        }
        witnesses.insert(m, w);
    }
    Ok(RangeWitnesses { b, witnesses })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub in_range: bool,
    pub witness: Option<QuadInt>,
    pub candidates_evaluated: u64,
}

/// Whether some `α ≻ 0` has exactly `m` partitions. Exact and complete.
pub fn decide_m_in_range(field: &Field, m: u64) -> Result<Decision> {
    decide_m_in_range_with_offset(field, m, 0)
}

/// As [`decide_m_in_range`] with the fundamental domain `[offset, offset + s′)`.
pub fn decide_m_in_range_with_offset(field: &Field, m: u64, offset: i64) -> Result<Decision> {
    if m == 0 {
        return Err(Error::BadIndex("m must be at least 1".into()));
    }
    let betas = field.betas();
    let mut evaluated = 0u64;
    let mi = m as i64;
    for j in offset..offset + betas.s_prime() {
        let e_max = (mi * betas.v(j) as i64 - 1).min(mi);
        let f_cap = mi * betas.v(j + 1) as i64 - 1;
        for e in 1..=e_max {
            let mut block_done = false;
            for f in 0..=f_cap.min(mi - e) {
                let alpha = combo(field, j, e, f);
                evaluated += 1;
                match pk(field, &alpha, Some(m))? {
                    CountResult::Exact(c) if c == m => {
                        return Ok(Decision {
                            in_range: true,
                            witness: Some(alpha),
                            candidates_evaluated: evaluated,
                        })
                    }
                    CountResult::Exact(_) => {}
                    CountResult::AtLeast(_) => {
                        block_done = f == 0;
                        break;
                    }
                }
            }
            if block_done {
                break;
            }
        }
    }
    Ok(Decision {
        in_range: false,
        witness: None,
        candidates_evaluated: evaluated,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    #[serde(rename = "D")]
    pub d: u64,
    pub m: u64,
    pub in_range: bool,
    pub witness: Option<QuadInt>,
}

fn squarefree_range(x: u64) -> Vec<u64> {
    squarefree_upto(x).into_iter().filter(|&d| d >= 2).collect()
}

/// One row per squarefree `D ∈ [2, X]`, ascending.
pub fn scan_rows(m: u64, x: u64, exec: Exec) -> Result<Vec<ScanRow>> {
    exec.map(squarefree_range(x), |d| {
        let field = Field::new(d as i64)?;
        let dec = decide_m_in_range(&field, m)?;
        Ok(ScanRow {
            d,
            m,
            in_range: dec.in_range,
            witness: dec.witness,
        })
    })
    .into_iter()
    .collect()
}

/// `D(m) ∩ [2, X]`
pub fn scan_dm(m: u64, x: u64, exec: Exec) -> Result<Vec<u64>> {
    Ok(scan_rows(m, x, exec)?
        .into_iter()
        .filter(|r| !r.in_range)
        .map(|r| r.d)
        .collect())
}

/// `D(6) ∩ [2, X]` from the continued-fraction criterion alone.
pub fn scan_d6_fast(x: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for d in squarefree_range(x) {
        if !has_pk6(&*Field::new(d as i64)?) {
            out.push(d);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub m: u64,
    #[serde(rename = "X")]
    pub x: u64,
    /// `#E(m, X)`
    pub count: u64,
    pub members: Vec<u64>,
    /// For each member, the values `k ≤ m` missing from the range.
    pub missing: BTreeMap<u64, Vec<u64>>,
    /// `100(2m-5)^{3/2}(log X)^{3/2}X^{7/8}`, floating point.
    pub rhs: f64,
    /// Whether `X ≥ (2m-5)^{12}(log X)^4`.
    pub hypothesis_holds: bool,
    /// Membership agrees with the per-`k` scans and with the range witnesses.
    pub consistent: bool,
}

pub fn density_report(m: u64, x: u64, exec: Exec) -> Result<DensityReport> {
    if m < 4 {
        return Err(Error::BadIndex(format!("density report needs m ≥ 4, got {m}")));
    }
    let ds = squarefree_range(x);
    let per_d: Vec<(u64, Vec<u64>, u64)> = exec
        .map(ds.clone(), |d| {
            let field = Field::new(d as i64)?;
            let mut missing = Vec::new();
            for k in 1..=m {
                if !decide_m_in_range(&field, k)?.in_range {
                    missing.push(k);
                }
            }
            let b = range_witnesses(&field)?.b;
            Ok((d, missing, b))
        })
        .into_iter()
        .collect::<Result<_>>()?;

    let mut missing = BTreeMap::new();
    let mut witnessed_ok = true;
    for (d, miss, b) in &per_d {
        // every k ≤ ⌊B/2⌋ + 2 has an explicit witness
        if miss.iter().any(|&k| k <= b / 2 + 2) {
            witnessed_ok = false;
        }
        if !miss.is_empty() {
            missing.insert(*d, miss.clone());
        }
    }
    let members: Vec<u64> = missing.keys().copied().collect();

    let mut union = BTreeSet::new();
    for k in 1..=m {
        union.extend(scan_dm(k, x, exec)?);
    }
    let consistent = witnessed_ok && union.into_iter().collect::<Vec<_>>() == members;

    let lx = (x as f64).ln();
    let c = (2 * m - 5) as f64;
    Ok(DensityReport {
        m,
        x,
        count: members.len() as u64,
        members,
        missing,
        rhs: 100.0 * c.powf(1.5) * lx.powf(1.5) * (x as f64).powf(0.875),
        hypothesis_holds: (x as f64) >= c.powi(12) * lx.powi(4),
        consistent,
    })
}

/// `|Nm(α)|` as a string, used by reports.
pub fn abs_norm(alpha: &QuadInt) -> String {
    alpha.norm().abs().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_value_examples() {
        let f2 = Field::new(2).unwrap();
        let n2 = bound_value(BoundKind::TwoIndec, f2.ctx());
        assert_eq!(n2, SurdExpr::from_ints(200, 130, f2.ctx()));
        let n1 = bound_value(BoundKind::AtMost(1), f2.ctx());
        // 15√8(√8 + 2)² = 15(4·8 + 12√8)
        assert_eq!(n1, SurdExpr::from_ints(480, 180, f2.ctx()));
        let f5 = Field::new(5).unwrap();
        assert_eq!(bound_value(BoundKind::IndecNorm, f5.ctx()), SurdExpr::from_ints(1, 0, f5.ctx()));
        let hk = bound_value(BoundKind::UniqueDecomp, f2.ctx());
        let r = 8f64.sqrt();
        assert!((hk.to_f64() - r * (2.0 * r + 1.0) * (3.0 * r + 2.0)).abs() < 1e-9);
    }

    #[test]
    fn candidate_set_examples() {
        let f2 = Field::new(2).unwrap();
        let c = candidate_set(&f2, 1);
        // v_0 = 4, v_1 = 2, v_2 = 4: j = 0 gives 3·2, j = 1 gives 1·4
        assert_eq!(c.len(), 10);
        let vmax = 4u64;
        assert!(c.len() as u64 <= f2.betas().s_prime() as u64 * vmax * vmax);
    }

    #[test]
    fn indec_norm_report_example() {
        let f2 = Field::new(2).unwrap();
        let r = verify_bound(&f2, BoundKind::IndecNorm).unwrap();
        assert_eq!(r.max_norm_seen, "2");
        assert!(r.ok());
    }

    #[test]
    fn witness_examples() {
        let f2 = Field::new(2).unwrap();
        let w = range_witnesses(&f2).unwrap();
        assert_eq!(w.b, 2);
        assert_eq!(w.witnesses.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(w.witnesses[&3], QuadInt::new(4, 2, f2.ctx()));
        let f5 = Field::new(5).unwrap();
        assert_eq!(range_witnesses(&f5).unwrap().b, 1);
    }

    #[test]
    fn decision_examples() {
        let f5 = Field::new(5).unwrap();
        assert!(!decide_m_in_range(&f5, 3).unwrap().in_range);
        let f2 = Field::new(2).unwrap();
        assert!(!decide_m_in_range(&f2, 5).unwrap().in_range);
        assert!(decide_m_in_range(&f2, 4).unwrap().in_range);
        let f7 = Field::new(7).unwrap();
        let d = decide_m_in_range(&f7, 5).unwrap();
        assert!(d.in_range);
        let w = d.witness.unwrap();
        assert_eq!(pk(&f7, &w, None).unwrap(), CountResult::Exact(5));
    }

    #[test]
    fn fast_six_examples() {
        assert_eq!(scan_d6_fast(2).unwrap(), Vec::<u64>::new());
        assert_eq!(
            scan_d6_fast(47).unwrap(),
            vec![5, 7, 15, 17, 21, 23, 34, 35, 37, 43, 47]
        );
    }
}
