//! The two-sided sequence of indecomposables `β_j` and canonical decompositions.
//!
//! For `j ≥ 0`, `β_j` runs through the semiconvergents `α_{i,r}` (odd `i ≥ -1`,
//! `0 ≤ r < u_{i+2}`) in increasing order; `β_{-j}` is the conjugate of `β_j`.
//! Within one totally positive unit period the index splits into blocks, one
//! per odd `i`, of sizes `u_{i+2}`; their total is `s′`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::cfrac::ConvergentTable;
use crate::error::{Error, Result};
use crate::qfield::{FieldCtx, QuadInt};

#[derive(Debug)]
pub struct BetaIndexMap {
    table: Arc<ConvergentTable>,
    /// Convergent-index period `P` with `α_{i+P} = ε⁺·α_i`.
    index_period: i64,
    /// Block offsets within one unit period, one per odd `i` in `[-1, P-1)`.
    offsets: Vec<i64>,
    sizes: Vec<i64>,
    s_prime: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalDecomp {
    pub j: i64,
    pub e: BigInt,
    pub f: BigInt,
}

/// One β row as exposed by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct BetaRow {
    pub j: i64,
    pub i: i64,
    pub r: u64,
    pub alpha: QuadInt,
    pub v: u64,
    pub norm: String,
}

impl BetaIndexMap {
    pub fn new(table: Arc<ConvergentTable>) -> Self {
        let cf = Arc::clone(table.cf());
        let index_period = cf.unit_index_period() as i64;
        let mut offsets = Vec::new();
        let mut sizes = Vec::new();
        let mut acc = 0i64;
        let mut i = -1i64;
        while i < index_period - 1 {
            offsets.push(acc);
            let size = cf.u(i + 2) as i64;
            sizes.push(size);
            acc += size;
            i += 2;
        }
        BetaIndexMap {
            table,
            index_period,
            offsets,
            sizes,
            s_prime: acc,
        }
    }

    pub fn table(&self) -> &Arc<ConvergentTable> {
        &self.table
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.table.ctx()
    }

    /// Number of indecomposables per totally positive unit period.
    pub fn s_prime(&self) -> i64 {
        self.s_prime
    }

    /// `(i, r)` with `β_{|j|} = α_{i,r}`.
    pub fn index_of(&self, j: i64) -> (i64, u64) {
        let j = j.abs();
        let (k, j0) = j.div_mod_floor(&self.s_prime);
        let b = match self.offsets.binary_search(&j0) {
            Ok(b) => b,
            Err(b) => b - 1,
        };
        debug_assert!(j0 - self.offsets[b] < self.sizes[b]);
        let i = -1 + 2 * b as i64 + k * self.index_period;
        (i, (j0 - self.offsets[b]) as u64)
    }

    pub fn beta(&self, j: i64) -> QuadInt {
        let (i, r) = self.index_of(j);
        let b = self
            .table
            .semiconvergent(i, r)
            .expect("β index maps to a valid semiconvergent");
        if j < 0 {
            b.conjugate()
        } else {
            b
        }
    }

    /// `v_j` with `v_j·β_j = β_{j-1} + β_{j+1}`.
    pub fn v(&self, j: i64) -> u64 {
        let (i, r) = self.index_of(j);
        if r >= 1 {
            2
        } else {
            self.table.cf().u(i + 1) + 2
        }
    }

    pub fn row(&self, j: i64) -> BetaRow {
        let (i, r) = self.index_of(j);
        let alpha = self.beta(j);
        let norm = alpha.norm().to_string();
        BetaRow {
            j,
            i,
            r,
            alpha,
            v: self.v(j),
            norm,
        }
    }

    fn check_tp(&self, alpha: &QuadInt) -> Result<()> {
        if alpha.ctx().d() != self.ctx().d() {
            return Err(Error::CtxMismatch(alpha.ctx().d(), self.ctx().d()));
        }
        if !alpha.is_totally_positive() {
            return Err(Error::NotTotallyPositive(alpha.to_string()));
        }
        Ok(())
    }

    /// Range `[j_min, j_max]` of indices with `β_j ≤ α` and `β_j′ ≤ α′`.
    /// Empty ranges come back with `j_min > j_max`.
    fn screen_range(&self, alpha: &QuadInt) -> (i64, i64) {
        let le_real = |j: i64| self.beta(j).cmp_real(alpha).expect("same field") != Ordering::Greater;
        let le_conj = |j: i64| self.beta(j).cmp_conj(alpha).expect("same field") != Ordering::Greater;
        // β_j increases with j; β_j′ decreases with j.
        let mut j_max = 0;
        if le_real(0) {
            while le_real(j_max + 1) {
                j_max += 1;
            }
        } else {
            while !le_real(j_max) {
                j_max -= 1;
            }
        }
        let mut j_min = 0;
        if le_conj(0) {
            while le_conj(j_min - 1) {
                j_min -= 1;
            }
        } else {
            while !le_conj(j_min) {
                j_min += 1;
            }
        }
        (j_min, j_max)
    }

    /// The unique `(j, e, f)` with `α = e·β_j + f·β_{j+1}`, `e ≥ 1`, `f ≥ 0`.
    pub fn canonical_decomp(&self, alpha: &QuadInt) -> Result<CanonicalDecomp> {
        self.check_tp(alpha)?;
        let (j_min, j_max) = self.screen_range(alpha);
        let mut found: Option<CanonicalDecomp> = None;
        let mut next = self.beta(j_min - 1);
        for j in (j_min - 1)..=(j_max + 1) {
            let cur = next;
            next = self.beta(j + 1);
            if let Some((e, f)) = solve_pair(alpha, &cur, &next) {
                if e >= BigInt::from(1) && f >= BigInt::zero() {
                    if let Some(prev) = &found {
                        return Err(Error::Internal(format!(
                            "two canonical decompositions of {alpha}: j = {} and j = {j}",
                            prev.j
                        )));
                    }
                    found = Some(CanonicalDecomp { j, e, f });
                }
            }
        }
        found.ok_or_else(|| Error::Internal(format!("no canonical decomposition of {alpha}")))
    }

    /// All `(j, β_j)` with `β_j ⪯ α`, ordered by `j`.
    pub fn indecomposables_leq(&self, alpha: &QuadInt) -> Result<Vec<(i64, QuadInt)>> {
        self.check_tp(alpha)?;
        let (j_min, j_max) = self.screen_range(alpha);
        let mut out = Vec::new();
        for j in j_min..=j_max {
            let b = self.beta(j);
            if alpha.succeq(&b)? {
                out.push((j, b));
            }
        }
        Ok(out)
    }

    pub fn is_indecomposable(&self, alpha: &QuadInt) -> Result<bool> {
        let c = self.canonical_decomp(alpha)?;
        Ok(c.e == BigInt::from(1) && c.f.is_zero())
    }
}

/// Integer solution of `α = e·β + f·γ`, if one exists.
fn solve_pair(alpha: &QuadInt, beta: &QuadInt, gamma: &QuadInt) -> Option<(BigInt, BigInt)> {
    let det = beta.a() * gamma.b() - gamma.a() * beta.b();
    if det.is_zero() {
        return None;
    }
    let en = alpha.a() * gamma.b() - gamma.a() * alpha.b();
    let fn_ = beta.a() * alpha.b() - alpha.a() * beta.b();
    let (e, re) = en.div_rem(&det);
    let (f, rf) = fn_.div_rem(&det);
    if re.is_zero() && rf.is_zero() {
        Some((e, f))
    } else {
        None
    }
}
