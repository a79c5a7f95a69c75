//! Periodic continued fraction of `ω`, convergents, semiconvergents and units.
//!
//! `ω = [⌈u₀/2⌉; u₁, …, u_s]` with `u_s = u₀`; the coefficients are indexed
//! absolutely, `u_i = u_{i mod s}` for `i ≥ 0`. Convergent rows are kept in a
//! lazily extended table so callers can index far past one period.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfield::{int_surd_sign, FieldCtx, QuadInt};

/// The quadratic irrational `(P + √Δ)/Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CFState {
    pub p: i64,
    pub q: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFData {
    ctx: Arc<FieldCtx>,
    u0: u64,
    /// `[u_1, …, u_s]`
    period: Vec<u64>,
    /// `[u_0, …, u_{s-1}]`, the purely periodic expansion of σ_D.
    sigma_period: Vec<u64>,
    /// Complete quotients `γ_1, …, γ_s`.
    states: Vec<CFState>,
}

/// Cache form of [`CFData`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFDataRepr {
    #[serde(rename = "D")]
    pub d: u64,
    pub u0: u64,
    pub period: Vec<u64>,
    pub states: Vec<CFState>,
}

fn step(state: CFState, isqrt_delta: i64, delta: i64) -> Result<(i64, CFState)> {
    if state.q <= 0 {
        return Err(Error::Internal(format!(
            "non-positive denominator in CF state {state:?}"
        )));
    }
    let a = (state.p + isqrt_delta).div_euclid(state.q);
    let p = a * state.q - state.p;
    let num = delta - p * p;
    if num % state.q != 0 {
        return Err(Error::Internal(format!(
            "Q does not divide Δ - P² after state {state:?}"
        )));
    }
    Ok((a, CFState { p, q: num / state.q }))
}

impl CFData {
    /// Expands `ω = (t + √Δ)/2` until the first repeated complete quotient.
    pub fn expand(ctx: &Arc<FieldCtx>) -> Result<CFData> {
        let delta = ctx.delta() as i64;
        let isq = ctx.isqrt_delta() as i64;
        let cap = (10.0 * (delta as f64).sqrt() * (delta as f64).ln() + 100.0) as usize;

        let start = CFState {
            p: ctx.tr_omega(),
            q: 2,
        };
        let (a0, first) = step(start, isq, delta)?;
        let mut quotients = Vec::new();
        let mut states = vec![first];
        let mut cur = first;
        loop {
            let (a, next) = step(cur, isq, delta)?;
            quotients.push(a as u64);
            if next == first {
                break;
            }
            states.push(next);
            cur = next;
            if states.len() > cap {
                return Err(Error::Internal(format!(
                    "period of D = {} exceeds sanity cap {cap}",
                    ctx.d()
                )));
            }
        }
        let u0 = (2 * a0 - ctx.tr_omega()) as u64;
        let s = quotients.len();
        let mut sigma_period = vec![u0];
        sigma_period.extend_from_slice(&quotients[..s - 1]);
        let cf = CFData {
            ctx: Arc::clone(ctx),
            u0,
            period: quotients,
            sigma_period,
            states,
        };
        cf.check_invariants()?;
        Ok(cf)
    }

    fn check_invariants(&self) -> Result<()> {
        let s = self.s();
        if self.period[s - 1] != self.u0 {
            return Err(Error::Internal(format!(
                "u_s = {} differs from u_0 = {}",
                self.period[s - 1],
                self.u0
            )));
        }
        if self.u0 * self.u0 >= self.ctx.delta() {
            return Err(Error::Internal("u_0² ≥ Δ".into()));
        }
        if self.period.contains(&0) {
            return Err(Error::Internal("zero partial quotient".into()));
        }
        Ok(())
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn u0(&self) -> u64 {
        self.u0
    }

    /// `⌊ω⌋ = ⌈u₀/2⌉`.
    pub fn a0(&self) -> u64 {
        (self.u0 + self.ctx.tr_omega() as u64) / 2
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn sigma_period(&self) -> &[u64] {
        &self.sigma_period
    }

    pub fn s(&self) -> usize {
        self.period.len()
    }

    /// `u_i` for `i ≥ 0`, with period wraparound.
    pub fn u(&self, i: i64) -> u64 {
        assert!(i >= 0, "u_i is defined for i ≥ 0, got {i}");
        self.sigma_period[(i as usize) % self.s()]
    }

    /// Complete quotient `γ_i` for `i ≥ 1`.
    pub fn gamma(&self, i: i64) -> Result<CFState> {
        if i < 1 {
            return Err(Error::BadIndex(format!("γ_i needs i ≥ 1, got {i}")));
        }
        Ok(self.states[((i - 1) as usize) % self.s()])
    }

    /// Checks `u_i < γ_i < u_i + 1` exactly.
    pub fn gamma_in_range(&self, i: i64) -> Result<bool> {
        let g = self.gamma(i)?;
        let u = self.u(i) as i64;
        let delta = self.ctx.delta();
        let one = BigInt::from(1);
        let lo = int_surd_sign(&BigInt::from(g.p - u * g.q), &one, delta);
        let hi = int_surd_sign(&BigInt::from(g.p - (u + 1) * g.q), &one, delta);
        Ok(lo > 0 && hi < 0)
    }

    /// Length of the unit period in convergent indices: `α_{i+P} = ε⁺·α_i`.
    pub fn unit_index_period(&self) -> usize {
        if self.s().is_multiple_of(2) {
            self.s()
        } else {
            2 * self.s()
        }
    }

    pub fn to_repr(&self) -> CFDataRepr {
        CFDataRepr {
            d: self.ctx.d(),
            u0: self.u0,
            period: self.period.clone(),
            states: self.states.clone(),
        }
    }

    pub fn from_repr(repr: CFDataRepr) -> Result<CFData> {
        let ctx = FieldCtx::new(repr.d as i64)?;
        let s = repr.period.len();
        if s == 0 || repr.states.len() != s {
            return Err(Error::Internal("malformed cached CF expansion".into()));
        }
        let mut sigma_period = vec![repr.u0];
        sigma_period.extend_from_slice(&repr.period[..s - 1]);
        let cf = CFData {
            ctx,
            u0: repr.u0,
            period: repr.period,
            sigma_period,
            states: repr.states,
        };
        cf.check_invariants()?;
        Ok(cf)
    }
}

/// One convergent row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub alpha: QuadInt,
    /// `N_i = |Nm(α_i)|`
    pub n: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Units {
    pub epsilon: QuadInt,
    pub epsilon_plus: QuadInt,
    pub s_parity: Parity,
}

/// Memoized convergents `α_i = p_i + q_i·ξ` for `i ≥ -1`.
#[derive(Debug)]
pub struct ConvergentTable {
    cf: Arc<CFData>,
    rows: RwLock<Vec<Convergent>>,
}

impl ConvergentTable {
    pub fn new(cf: Arc<CFData>) -> Self {
        let ctx = Arc::clone(cf.ctx());
        let t = ctx.tr_omega();
        let mk = |p: BigInt, q: BigInt| {
            // ξ = ω - t
            let alpha = QuadInt::new(&p - &q * t, q.clone(), &ctx);
            let n = alpha.norm().abs();
            Convergent { p, q, alpha, n }
        };
        let rows = vec![
            mk(BigInt::from(1), BigInt::zero()),
            mk(BigInt::from(cf.a0()), BigInt::from(1)),
        ];
        ConvergentTable {
            cf,
            rows: RwLock::new(rows),
        }
    }

    pub fn cf(&self) -> &Arc<CFData> {
        &self.cf
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.cf.ctx()
    }

    fn ensure(&self, i: i64) {
        let need = (i + 2) as usize;
        if self.rows.read().expect("convergent table poisoned").len() >= need {
            return;
        }
        let mut rows = self.rows.write().expect("convergent table poisoned");
        let t = self.ctx().tr_omega();
        while rows.len() < need {
            let k = rows.len() as i64 - 1;
            let u = BigInt::from(self.cf.u(k));
            let (r1, r2) = (&rows[rows.len() - 1], &rows[rows.len() - 2]);
            let p = &u * &r1.p + &r2.p;
            let q = &u * &r1.q + &r2.q;
            let alpha = QuadInt::new(&p - &q * t, q.clone(), self.ctx());
            let n = alpha.norm().abs();
            rows.push(Convergent { p, q, alpha, n });
        }
    }

    pub fn convergent(&self, i: i64) -> Result<Convergent> {
        if i < -1 {
            return Err(Error::BadIndex(format!("convergent index {i} < -1")));
        }
        self.ensure(i);
        Ok(self.rows.read().expect("convergent table poisoned")[(i + 1) as usize].clone())
    }

    pub fn alpha(&self, i: i64) -> Result<QuadInt> {
        Ok(self.convergent(i)?.alpha)
    }

    pub fn norm_abs(&self, i: i64) -> Result<BigInt> {
        Ok(self.convergent(i)?.n)
    }

    /// `α_{i,r} = α_i + r·α_{i+1}` for odd `i ≥ -1` and `0 ≤ r ≤ u_{i+2}`.
    pub fn semiconvergent(&self, i: i64, r: u64) -> Result<QuadInt> {
        if i < -1 || i.rem_euclid(2) != 1 {
            return Err(Error::BadIndex(format!("semiconvergent needs odd i ≥ -1, got {i}")));
        }
        let u = self.cf.u(i + 2);
        if r > u {
            return Err(Error::BadIndex(format!("r = {r} exceeds u_{} = {u}", i + 2)));
        }
        let base = self.alpha(i)?;
        let next = self.alpha(i + 1)?;
        Ok(base + next.scale(r))
    }

    pub fn units(&self) -> Result<Units> {
        let s = self.cf.s() as i64;
        let epsilon = self.alpha(s - 1)?;
        let (epsilon_plus, s_parity) = if s % 2 == 0 {
            (epsilon.clone(), Parity::Even)
        } else {
            (self.alpha(2 * s - 1)?, Parity::Odd)
        };
        let one = BigInt::from(1);
        if epsilon.norm().abs() != one
            || epsilon_plus.norm() != one
            || !epsilon_plus.is_totally_positive()
        {
            return Err(Error::Internal(format!(
                "unit check failed for D = {}",
                self.ctx().d()
            )));
        }
        Ok(Units {
            epsilon,
            epsilon_plus,
            s_parity,
        })
    }

    /// `None` when `N_{i+1}γ² - √Δ·γ + N_i = 0` (γ = γ_{i+2}) and
    /// `N_i·u_{i+1} < √Δ` both hold; otherwise a diagnostic.
    pub fn na1_violation(&self, i: i64) -> Option<String> {
        if i < -1 {
            return Some(format!("index {i} < -1"));
        }
        let g = match self.cf.gamma(i + 2) {
            Ok(g) => g,
            Err(e) => return Some(e.to_string()),
        };
        let (n_i, n_next) = match (self.norm_abs(i), self.norm_abs(i + 1)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Some("convergent lookup failed".into()),
        };
        // Multiply through by Q²; with γ = (P + √Δ)/Q the rational and
        // irrational parts must vanish separately.
        let p = BigInt::from(g.p);
        let q = BigInt::from(g.q);
        let delta = self.ctx().delta_big();
        let rational = &n_next * (&p * &p + &delta) - &q * &delta + &n_i * &q * &q;
        let irrational = &p * (BigInt::from(2) * &n_next - &q);
        if !rational.is_zero() || !irrational.is_zero() {
            return Some(format!(
                "Na1 identity fails at i = {i}: residue {rational} + {irrational}·√Δ"
            ));
        }
        let lhs = &n_i * BigInt::from(self.cf.u(i + 1));
        if &lhs * &lhs >= delta {
            return Some(format!("N_{i}·u_{} = {lhs} is not below √Δ", i + 1));
        }
        None
    }

    pub fn check_na1(&self, i: i64) -> bool {
        self.na1_violation(i).is_none()
    }

    /// `⌊√Δ⌋`-free upper bound helper: `u_i² < Δ` for all `i`.
    pub fn u_below_sqrt_delta(&self, i: i64) -> bool {
        let u = self.cf.u(i);
        u * u < self.ctx().delta() && u <= self.ctx().delta().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::squarefree_upto;

    fn table(d: i64) -> ConvergentTable {
        let ctx = FieldCtx::new(d).unwrap();
        ConvergentTable::new(Arc::new(CFData::expand(&ctx).unwrap()))
    }

    #[test]
    fn expansion_examples() {
        for (d, u0, period) in [(2, 2, vec![2]), (5, 1, vec![1]), (3, 2, vec![1, 2])] {
            let cf = CFData::expand(&FieldCtx::new(d).unwrap()).unwrap();
            assert_eq!(cf.u0(), u0, "D={d}");
            assert_eq!(cf.period(), &period[..], "D={d}");
            assert_eq!(cf.s(), period.len());
        }
        // √7 = [2; 1,1,1,4]
        let cf = CFData::expand(&FieldCtx::new(7).unwrap()).unwrap();
        assert_eq!(cf.period(), &[1, 1, 1, 4]);
        assert_eq!(cf.a0(), 2);
        // ω_13 = (1+√13)/2 = [2; 3]
        let cf = CFData::expand(&FieldCtx::new(13).unwrap()).unwrap();
        assert_eq!((cf.a0(), cf.period()), (2, &[3u64][..]));
    }

    #[test]
    fn gamma_examples() {
        let cf2 = CFData::expand(&FieldCtx::new(2).unwrap()).unwrap();
        assert_eq!(cf2.gamma(1).unwrap(), CFState { p: 2, q: 2 });
        let cf3 = CFData::expand(&FieldCtx::new(3).unwrap()).unwrap();
        assert_eq!(cf3.gamma(2).unwrap(), CFState { p: 2, q: 2 });
        assert!(cf3.gamma(0).is_err());
        for d in squarefree_upto(200) {
            let cf = CFData::expand(&FieldCtx::new(d as i64).unwrap()).unwrap();
            for i in 1..=(2 * cf.s() as i64 + 1) {
                assert!(cf.gamma_in_range(i).unwrap(), "D={d} i={i}");
            }
            assert_eq!(cf.a0() as i64 * 2 - cf.ctx().tr_omega(), cf.u0() as i64);
        }
    }

    #[test]
    fn convergent_examples() {
        let t = table(2);
        let ctx = Arc::clone(t.ctx());
        assert_eq!(t.alpha(-1).unwrap(), QuadInt::new(1, 0, &ctx));
        assert_eq!(t.alpha(0).unwrap(), QuadInt::new(1, 1, &ctx));
        assert_eq!(t.alpha(1).unwrap(), QuadInt::new(3, 2, &ctx));
        assert_eq!(t.norm_abs(1).unwrap(), BigInt::from(1));
        for d in [2, 3, 5, 6, 7, 13] {
            assert_eq!(table(d).norm_abs(-1).unwrap(), BigInt::from(1));
        }
        assert!(t.convergent(-2).is_err());
    }

    #[test]
    fn semiconvergent_examples() {
        let t = table(2);
        let ctx = Arc::clone(t.ctx());
        assert_eq!(t.semiconvergent(-1, 1).unwrap(), QuadInt::new(2, 1, &ctx));
        assert_eq!(t.semiconvergent(-1, 2).unwrap(), t.semiconvergent(1, 0).unwrap());
        assert!(t.semiconvergent(0, 0).is_err());
        assert!(t.semiconvergent(-1, 3).is_err());
        let t3 = table(3);
        assert_eq!(t3.semiconvergent(-1, 0).unwrap(), QuadInt::one(t3.ctx()));
    }

    #[test]
    fn units_examples() {
        let t = table(2);
        let ctx = Arc::clone(t.ctx());
        let u = t.units().unwrap();
        assert_eq!(u.epsilon, QuadInt::new(1, 1, &ctx));
        assert_eq!(u.epsilon.norm(), BigInt::from(-1));
        assert_eq!(u.epsilon_plus, QuadInt::new(3, 2, &ctx));
        assert_eq!(u.s_parity, Parity::Odd);

        let t = table(3);
        let ctx = Arc::clone(t.ctx());
        let u = t.units().unwrap();
        assert_eq!(u.epsilon, QuadInt::new(2, 1, &ctx));
        assert_eq!(u.epsilon_plus, u.epsilon);

        let t = table(5);
        let ctx = Arc::clone(t.ctx());
        let u = t.units().unwrap();
        assert_eq!(u.epsilon, QuadInt::new(0, 1, &ctx));
        assert_eq!(u.epsilon_plus, QuadInt::new(1, 1, &ctx));
    }

    #[test]
    fn na1_examples() {
        let t = table(2);
        assert_eq!(t.norm_abs(0).unwrap(), BigInt::from(1));
        assert!(t.check_na1(-1));
        let t = table(3);
        assert_eq!(t.norm_abs(0).unwrap(), BigInt::from(2));
        assert!(t.check_na1(-1));
        for d in squarefree_upto(120) {
            let t = table(d as i64);
            for i in -1..=(2 * t.cf().s() as i64) {
                assert_eq!(t.na1_violation(i), None, "D={d}");
            }
        }
    }

    #[test]
    fn structure_over_several_periods() {
        for d in squarefree_upto(150) {
            let t = table(d as i64);
            let s = t.cf().s() as i64;
            let eps = t.units().unwrap().epsilon;
            for i in -1..=(4 * s) {
                let a = t.alpha(i).unwrap();
                assert_eq!(a.is_totally_positive(), i.rem_euclid(2) == 1, "D={d} i={i}");
                let row = t.convergent(i).unwrap();
                assert_eq!(row.n, a.norm().abs());
                if i <= s {
                    assert_eq!(&eps * &a, t.alpha(s + i).unwrap(), "D={d} i={i}");
                }
                if i >= 0 {
                    assert!(t.u_below_sqrt_delta(i));
                }
            }
        }
    }

    #[test]
    fn wrapped_rows_match_unwrapped_expansion() {
        for d in squarefree_upto(120) {
            let ctx = FieldCtx::new(d as i64).unwrap();
            let t = table(d as i64);
            let s = t.cf().s();
            // run the raw (P, Q) iteration 3s steps without period detection
            let delta = ctx.delta() as i64;
            let isq = ctx.isqrt_delta() as i64;
            let mut st = CFState {
                p: ctx.tr_omega(),
                q: 2,
            };
            let mut quotients = Vec::new();
            for _ in 0..=3 * s {
                let (a, next) = step(st, isq, delta).unwrap();
                quotients.push(a);
                st = next;
            }
            let (mut p0, mut q0) = (BigInt::from(1), BigInt::zero());
            let (mut p1, mut q1) = (BigInt::from(quotients[0]), BigInt::from(1));
            for (k, &a) in quotients.iter().enumerate().skip(1) {
                let p2 = BigInt::from(a) * &p1 + &p0;
                let q2 = BigInt::from(a) * &q1 + &q0;
                (p0, q0, p1, q1) = (p1, q1, p2, q2);
                let row = t.convergent(k as i64).unwrap();
                assert_eq!((&row.p, &row.q), (&p1, &q1), "D={d} k={k}");
            }
        }
    }
}
