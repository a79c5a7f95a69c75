//! Cross-checks of the counting engine against a naive enumerator that uses
//! only exact `QuadInt` arithmetic, plus invariances of the decision search.

use std::collections::HashMap;

use quadpart::exec::Exec;
use quadpart::partcount::{parts_leq, pk, pk_indec, CountResult};
use quadpart::qfield::QuadInt;
use quadpart::theorems::{
    decide_m_in_range, decide_m_in_range_with_offset, range_witnesses, scan_dm,
};
use quadpart::Field;

/// Totally positive `γ ⪯ α` by scanning `b` and `a` over a generous box.
fn naive_parts(alpha: &QuadInt) -> Vec<QuadInt> {
    let ctx = alpha.ctx();
    let (e1, e2) = alpha.to_f64_pair();
    let r = (ctx.delta() as f64).sqrt();
    let t = ctx.tr_omega();
    let y_max = ((e1 + e2.abs()) / r).ceil() as i64 + 1;
    let mut out = Vec::new();
    for b in -y_max..=y_max {
        // a + b·ω has trace 2a + bt ≤ e1 + e2
        let a_hi = ((e1 + e2) as i64 - b * t) / 2 + 1;
        let a_lo = -(b.abs() * (r as i64 + 2)) - 1;
        for a in a_lo..=a_hi {
            let g = QuadInt::new(a, b, ctx);
            if g.is_totally_positive() && alpha.succeq(&g).unwrap() {
                out.push(g);
            }
        }
    }
    out
}

fn naive_count(alpha: &QuadInt, parts: &[QuadInt]) -> u64 {
    fn go(rem: &QuadInt, parts: &[QuadInt], k: usize, memo: &mut HashMap<(QuadInt, usize), u64>) -> u64 {
        if rem.is_zero() {
            return 1;
        }
        if let Some(&v) = memo.get(&(rem.clone(), k)) {
            return v;
        }
        let mut total = 0;
        for (i, p) in parts.iter().enumerate().skip(k) {
            if rem.succeq(p).unwrap() {
                total += go(&(rem - p), parts, i, memo);
            }
        }
        memo.insert((rem.clone(), k), total);
        total
    }
    go(alpha, parts, 0, &mut HashMap::new())
}

fn sample(f: &Field) -> Vec<QuadInt> {
    let m = f.betas();
    let mut out = Vec::new();
    for j in -2..=3 {
        for e in 1..=3 {
            for g in 0..=2 {
                out.push(m.beta(j).scale(e) + m.beta(j + 1).scale(g));
            }
        }
    }
    out
}

#[test]
fn counts_match_naive_enumeration() {
    for d in [2, 3, 5, 6, 7, 13] {
        let f = Field::new(d).unwrap();
        for alpha in sample(&f) {
            let mut all = naive_parts(&alpha);
            let mut engine = parts_leq(&f, &alpha).unwrap();
            all.sort_by(|x, y| x.cmp_real(y).unwrap());
            engine.sort_by(|x, y| x.cmp_real(y).unwrap());
            assert_eq!(all, engine, "D = {d}, α = {alpha}");
            let want = naive_count(&alpha, &all);
            assert_eq!(pk(&f, &alpha, None).unwrap(), CountResult::Exact(want), "D = {d}, α = {alpha}");
            let indec: Vec<QuadInt> = all
                .iter()
                .filter(|g| f.betas().is_indecomposable(g).unwrap())
                .cloned()
                .collect();
            let want_i = naive_count(&alpha, &indec);
            assert_eq!(pk_indec(&f, &alpha, None).unwrap(), CountResult::Exact(want_i), "D = {d}, α = {alpha}");
        }
    }
}

#[test]
fn caps_are_consistent_with_exact_counts() {
    let f = Field::new(6).unwrap();
    for alpha in sample(&f) {
        let exact = pk(&f, &alpha, None).unwrap().value();
        for cap in [1, 3, 6, 10] {
            let c = pk(&f, &alpha, Some(cap)).unwrap();
            assert!(c.admits(exact), "α = {alpha}, cap {cap}: {c} vs {exact}");
            assert_eq!(c.is_exact(), exact <= cap);
        }
    }
}

#[test]
fn decision_does_not_depend_on_fundamental_domain() {
    for d in [2, 3, 5, 7, 13, 21] {
        let f = Field::new(d).unwrap();
        for m in 1..=7 {
            let base = decide_m_in_range(&f, m).unwrap().in_range;
            for offset in [-3, -1, 2, 5] {
                let dec = decide_m_in_range_with_offset(&f, m, offset).unwrap();
                assert_eq!(dec.in_range, base, "D = {d}, m = {m}, offset {offset}");
                if let Some(w) = dec.witness {
                    assert_eq!(pk(&f, &w, None).unwrap(), CountResult::Exact(m));
                }
            }
        }
    }
}

#[test]
fn range_witnesses_have_the_stated_counts() {
    for d in [2, 3, 7, 23, 31, 83, 94] {
        let f = Field::new(d).unwrap();
        let w = range_witnesses(&f).unwrap();
        assert!(w.witnesses.len() as u64 >= w.b / 2 + 2);
        for (m, alpha) in &w.witnesses {
            assert_eq!(pk(&f, alpha, None).unwrap(), CountResult::Exact(*m), "D = {d}");
            assert!(decide_m_in_range(&f, *m).unwrap().in_range);
        }
    }
}

#[test]
fn scan_modes_agree() {
    let seq = scan_dm(7, 60, Exec::Sequential).unwrap();
    let def = scan_dm(7, 60, Exec::default()).unwrap();
    assert_eq!(seq, def);
    assert_eq!(&seq[..2], &[2, 5]);
}
