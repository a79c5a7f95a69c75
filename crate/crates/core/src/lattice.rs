//! Fixed-width lattice engine behind the partition counters.
//!
//! Elements are held as `(X, Y)` with `X = 2a + bt` (the trace) and `Y = b`,
//! so the embeddings are `(X ± Y√Δ)/2`. Coordinates are capped at `2^40` and
//! `D` at `2^32`, which keeps every product inside `i128`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::qfield::{FieldCtx, QuadInt};

pub const COORD_LIMIT: i64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt {
    pub x: i64,
    pub y: i64,
}

impl Pt {
    pub const ZERO: Pt = Pt { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Pt {
        Pt { x, y }
    }

    pub fn sub(self, o: Pt) -> Pt {
        Pt::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Pt) -> Pt {
        Pt::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, k: i64) -> Pt {
        Pt::new(self.x * k, self.y * k)
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }
}

#[derive(Debug, Clone)]
pub struct Lattice {
    ctx: Arc<FieldCtx>,
    delta: i128,
    t: i64,
}

fn isqrt_i128(v: i128) -> i128 {
    (v as u128).sqrt() as i128
}

impl Lattice {
    pub fn new(ctx: &Arc<FieldCtx>) -> Self {
        Lattice {
            ctx: Arc::clone(ctx),
            delta: ctx.delta() as i128,
            t: ctx.tr_omega(),
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    fn checked(v: &BigInt, what: &str) -> Result<i64> {
        v.to_i64()
            .filter(|c| c.abs() <= COORD_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("{what} coordinate {v} exceeds 2^40")))
    }

    pub fn pt(&self, q: &QuadInt) -> Result<Pt> {
        let (x, y) = q.twice_surd();
        Ok(Pt::new(Self::checked(&x, "trace")?, Self::checked(&y, "ω")?))
    }

    pub fn quad(&self, p: Pt) -> QuadInt {
        debug_assert_eq!((p.x - p.y * self.t).rem_euclid(2), 0);
        QuadInt::new((p.x - p.y * self.t) / 2, p.y, &self.ctx)
    }

    /// Sign of `x + y√Δ`.
    pub fn surd_sign(&self, x: i64, y: i64) -> Ordering {
        let (xs, ys) = (x.cmp(&0), y.cmp(&0));
        if xs != Ordering::Less && ys != Ordering::Less {
            return if x == 0 && y == 0 { Ordering::Equal } else { Ordering::Greater };
        }
        if xs != Ordering::Greater && ys != Ordering::Greater {
            return Ordering::Less;
        }
        let x2 = (x as i128) * (x as i128);
        let y2d = (y as i128) * (y as i128) * self.delta;
        // mixed signs: the larger square wins; equality is impossible
        if x2 > y2d {
            xs
        } else {
            ys
        }
    }

    pub fn is_tp(&self, p: Pt) -> bool {
        p.x > 0 && (p.x as i128) * (p.x as i128) > (p.y as i128) * (p.y as i128) * self.delta
    }

    /// `a ⪰ b`
    pub fn succeq(&self, a: Pt, b: Pt) -> bool {
        let d = a.sub(b);
        d.is_zero() || self.is_tp(d)
    }

    pub fn cmp_real(&self, a: Pt, b: Pt) -> Ordering {
        self.surd_sign(a.x - b.x, a.y - b.y)
    }

    pub fn cmp_conj(&self, a: Pt, b: Pt) -> Ordering {
        self.surd_sign(a.x - b.x, b.y - a.y)
    }

    /// `⌊m√Δ⌋`
    fn floor_msqrt(&self, m: i64) -> i64 {
        let r = isqrt_i128((m as i128) * (m as i128) * self.delta) as i64;
        if m >= 0 {
            r
        } else {
            -r - 1
        }
    }

    /// Both embeddings in floating point, each to full relative precision:
    /// the one prone to cancellation is recovered from the exact norm.
    pub fn embeddings(&self, p: Pt) -> (f64, f64) {
        let sq = (self.delta as f64).sqrt();
        let (x, y) = (p.x as f64, p.y as f64);
        let (a, b) = ((x + y * sq) / 2.0, (x - y * sq) / 2.0);
        let n = ((p.x as i128) * (p.x as i128) - (p.y as i128) * (p.y as i128) * self.delta) as f64 / 4.0;
        if a.abs() >= b.abs() {
            if a == 0.0 {
                (0.0, 0.0)
            } else {
                (a, n / a)
            }
        } else {
            (n / b, b)
        }
    }

    /// All `γ ≻ 0` with `γ ⪯ α`, enumerated along a basis reduced for the
    /// shape of `α`, so the work stays proportional to the output even when
    /// the two embeddings of `α` differ by many orders of magnitude.
    pub fn downset_points(&self, alpha: Pt) -> Vec<Pt> {
        if !self.is_tp(alpha) {
            return Vec::new();
        }
        let (ea, eb) = self.embeddings(alpha);
        let scaled = |p: Pt| {
            let (u, v) = self.embeddings(p);
            (u / ea, v / eb)
        };
        let dot = |a: (f64, f64), b: (f64, f64)| a.0 * b.0 + a.1 * b.1;
        let mut b1 = Pt::new(2, 0);
        let mut b2 = Pt::new(self.t, 1);
        for _ in 0..256 {
            let (mut s1, mut s2) = (scaled(b1), scaled(b2));
            if dot(s1, s1) > dot(s2, s2) {
                std::mem::swap(&mut b1, &mut b2);
                std::mem::swap(&mut s1, &mut s2);
            }
            let mu = (dot(s1, s2) / dot(s1, s1)).round();
            if mu == 0.0 || !mu.is_finite() {
                break;
            }
            b2 = b2.sub(b1.scale(mu as i64));
        }
        let (s1, s2) = (scaled(b1), scaled(b2));
        let cross = |a: (f64, f64), b: (f64, f64)| a.0 * b.1 - a.1 * b.0;
        let det = cross(s1, s2);
        // coefficient of b1 is cross(p, s2)/det; extremes sit at the corners
        let corners = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
        let k1s: Vec<f64> = corners.iter().map(|c| cross(*c, s2) / det).collect();
        let k1_lo = k1s.iter().cloned().fold(f64::INFINITY, f64::min).floor() as i64 - 1;
        let k1_hi = k1s.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
        let mut out = Vec::new();
        for k1 in k1_lo..=k1_hi {
            let c = (s1.0 * k1 as f64, s1.1 * k1 as f64);
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for (ci, bi) in [(c.0, s2.0), (c.1, s2.1)] {
                if bi.abs() < 1e-300 {
                    continue;
                }
                let (p, q) = ((0.0 - ci) / bi, (1.0 - ci) / bi);
                lo = lo.max(p.min(q));
                hi = hi.min(p.max(q));
            }
            if lo > hi + 2.0 {
                continue;
            }
            let base = b1.scale(k1);
            for k2 in (lo.floor() as i64 - 1)..=(hi.ceil() as i64 + 1) {
                let p = base.add(b2.scale(k2));
                if self.is_tp(p) && self.succeq(alpha, p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn conj(&self, p: Pt) -> Pt {
        Pt::new(p.x, -p.y)
    }

    pub fn mul(&self, a: Pt, b: Pt) -> Pt {
        // (X1 + Y1√Δ)(X2 + Y2√Δ)/2 in twice-surd form
        let x = (a.x as i128 * b.x as i128 + a.y as i128 * b.y as i128 * self.delta) / 2;
        let y = (a.x as i128 * b.y as i128 + a.y as i128 * b.x as i128) / 2;
        Pt::new(x as i64, y as i64)
    }
}

#[derive(Debug, Clone, Copy)]
struct Span {
    x0: i64,
    n: usize,
}

/// Totally positive points with `X + Y√Δ ≤ c1 + k1√Δ` and `X - Y√Δ ≤ c2 + k2√Δ`,
/// stored row by row in `Y` with dense indices.
#[derive(Debug, Clone)]
pub struct Region {
    y0: i64,
    spans: Vec<Span>,
    offsets: Vec<usize>,
    len: usize,
}

impl Region {
    pub fn new(lat: &Lattice, c1: i64, k1: i64, c2: i64, k2: i64) -> Region {
        let sq = (lat.delta as f64).sqrt();
        let y_hi = ((c1 as f64 / sq + k1 as f64) / 2.0).ceil() as i64 + 2;
        let y_lo = -(((c2 as f64 / sq + k2 as f64) / 2.0).ceil() as i64) - 2;
        let mut spans = Vec::new();
        for y in y_lo..=y_hi.max(y_lo) {
            let lo = if y == 0 { 1 } else { lat.floor_msqrt(y.abs()) + 1 };
            let hi = (c1 + lat.floor_msqrt(k1 - y)).min(c2 + lat.floor_msqrt(k2 + y));
            let mut x0 = lo;
            if (x0 - y * lat.t).rem_euclid(2) != 0 {
                x0 += 1;
            }
            let n = if hi >= x0 { ((hi - x0) / 2 + 1) as usize } else { 0 };
            spans.push(Span { x0, n });
        }
        let first = spans.iter().position(|s| s.n > 0);
        let last = spans.iter().rposition(|s| s.n > 0);
        let (y0, spans) = match (first, last) {
            (Some(f), Some(l)) => (y_lo + f as i64, spans[f..=l].to_vec()),
            _ => (0, Vec::new()),
        };
        let mut offsets = Vec::with_capacity(spans.len());
        let mut len = 0;
        for s in &spans {
            offsets.push(len);
            len += s.n;
        }
        Region {
            y0,
            spans,
            offsets,
            len,
        }
    }

    /// All `γ ≻ 0` with `γ ⪯ α`.
    pub fn downset(lat: &Lattice, alpha: Pt) -> Region {
        Region::new(lat, alpha.x, alpha.y, alpha.x, -alpha.y)
    }

    /// All `γ ≻ 0` whose embeddings are both at most `(k/2)·√Δ`.
    pub fn sqrt_box(lat: &Lattice, k: i64) -> Region {
        Region::new(lat, 0, k, 0, k)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self, p: Pt) -> Option<usize> {
        let r = p.y - self.y0;
        if r < 0 || r as usize >= self.spans.len() {
            return None;
        }
        let s = self.spans[r as usize];
        let dx = p.x - s.x0;
        if dx < 0 || dx % 2 != 0 || (dx / 2) as usize >= s.n {
            return None;
        }
        Some(self.offsets[r as usize] + (dx / 2) as usize)
    }

    pub fn points(&self) -> Vec<Pt> {
        let mut out = Vec::with_capacity(self.len);
        for (r, s) in self.spans.iter().enumerate() {
            let y = self.y0 + r as i64;
            for k in 0..s.n {
                out.push(Pt::new(s.x0 + 2 * k as i64, y));
            }
        }
        out
    }
}

/// Memoized descent counter: partitions into parts taken from a fixed list,
/// each part no larger (in real value) than the one before.
pub struct Descent<'a> {
    lat: &'a Lattice,
    parts: Vec<Pt>,
    cap: u64,
    memo: HashMap<(Pt, u32), u64>,
}

impl<'a> Descent<'a> {
    /// `parts` may come in any order; counts saturate at `cap + 1`.
    pub fn new(lat: &'a Lattice, mut parts: Vec<Pt>, cap: u64) -> Self {
        parts.sort_by(|a, b| lat.cmp_real(*b, *a));
        parts.dedup();
        Descent {
            lat,
            parts,
            cap,
            memo: HashMap::new(),
        }
    }

    pub fn parts(&self) -> &[Pt] {
        &self.parts
    }

    fn first_fitting(&self, rem: Pt, k: usize) -> usize {
        let lat = self.lat;
        let p = self
            .parts
            .partition_point(|q| lat.cmp_real(*q, rem) == Ordering::Greater);
        p.max(k)
    }

    pub fn count(&mut self, alpha: Pt) -> Result<u64> {
        self.count_from(alpha, 0)
    }

    fn count_from(&mut self, rem: Pt, k: usize) -> Result<u64> {
        if rem.is_zero() {
            return Ok(1);
        }
        if let Some(&c) = self.memo.get(&(rem, k as u32)) {
            return Ok(c);
        }
        let mut sum = 0u64;
        for idx in self.first_fitting(rem, k)..self.parts.len() {
            let p = self.parts[idx];
            if !self.lat.succeq(rem, p) {
                continue;
            }
            let c = self.count_from(rem.sub(p), idx)?;
            sum = sum
                .checked_add(c)
                .ok_or_else(|| Error::TooLarge("partition count exceeds u64".into()))?;
            if sum > self.cap {
                sum = self.cap + 1;
                break;
            }
        }
        self.memo.insert((rem, k as u32), sum);
        Ok(sum)
    }

    /// Up to `limit` partitions of `alpha`, parts in descending real order.
    pub fn list(&self, alpha: Pt, limit: usize) -> Vec<Vec<Pt>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.list_from(alpha, 0, &mut stack, &mut out, limit);
        out
    }

    fn list_from(
        &self,
        rem: Pt,
        k: usize,
        stack: &mut Vec<Pt>,
        out: &mut Vec<Vec<Pt>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if rem.is_zero() {
            out.push(stack.clone());
            return;
        }
        for idx in self.first_fitting(rem, k)..self.parts.len() {
            let p = self.parts[idx];
            if self.lat.succeq(rem, p) {
                stack.push(p);
                self.list_from(rem.sub(p), idx, stack, out, limit);
                stack.pop();
                if out.len() >= limit {
                    return;
                }
            }
        }
    }
}

/// Partition counts for every point of a down-closed region, by coin-change
/// dynamic programming in ascending trace order. Counts saturate at `sat`.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub region: Region,
    pub points: Vec<Pt>,
    pub pk: Vec<u32>,
    pub pk_indec: Vec<u32>,
}

fn coin_dp(lat: &Lattice, region: &Region, points: &[Pt], order: &[usize], coins: &[usize], sat: u32) -> Vec<u32> {
    let mut cnt = vec![0u32; points.len()];
    for &ci in coins {
        let c = points[ci];
        let start = order.partition_point(|&i| points[i].x < c.x);
        for &ai in &order[start..] {
            let d = points[ai].sub(c);
            let add = if d.is_zero() {
                1
            } else if lat.is_tp(d) {
                match region.index(d) {
                    Some(di) => cnt[di],
                    None => 0,
                }
            } else {
                continue;
            };
            cnt[ai] = cnt[ai].saturating_add(add).min(sat);
        }
    }
    cnt
}

impl Sweep {
    pub fn run(lat: &Lattice, region: Region, sat: u32) -> Sweep {
        let points = region.points();
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by_key(|&i| (points[i].x, points[i].y));
        let all: Vec<usize> = (0..points.len()).collect();
        let pk = coin_dp(lat, &region, &points, &order, &all, sat);
        let indec: Vec<usize> = all.iter().copied().filter(|&i| pk[i] == 1).collect();
        let pk_indec = coin_dp(lat, &region, &points, &order, &indec, sat);
        Sweep {
            region,
            points,
            pk,
            pk_indec,
        }
    }

    pub fn indecomposables(&self) -> Vec<Pt> {
        self.points
            .iter()
            .zip(&self.pk)
            .filter(|(_, &c)| c == 1)
            .map(|(p, _)| *p)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(d: i64) -> Lattice {
        Lattice::new(&FieldCtx::new(d).unwrap())
    }

    #[test]
    fn point_round_trip() {
        for d in [2, 5, 13] {
            let l = lat(d);
            for (a, b) in [(3, 1), (-4, 7), (0, 0), (5, -2)] {
                let q = QuadInt::new(a, b, l.ctx());
                assert_eq!(l.quad(l.pt(&q).unwrap()), q);
            }
        }
        let l = lat(2);
        let big = QuadInt::new(BigInt::from(1u64 << 45), 0, l.ctx());
        assert!(matches!(l.pt(&big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn order_matches_quadint() {
        for d in [2, 3, 5, 6, 7, 13] {
            let l = lat(d);
            for a in -6..=6 {
                for b in -4..=4 {
                    let q = QuadInt::new(a, b, l.ctx());
                    let p = l.pt(&q).unwrap();
                    assert_eq!(l.is_tp(p), q.is_totally_positive());
                    let one = QuadInt::one(l.ctx());
                    let po = l.pt(&one).unwrap();
                    assert_eq!(l.cmp_real(p, po), q.cmp_real(&one).unwrap());
                    assert_eq!(l.cmp_conj(p, po), q.cmp_conj(&one).unwrap());
                    let r = QuadInt::new(2, 1, l.ctx());
                    assert_eq!(l.mul(p, l.pt(&r).unwrap()), l.pt(&(&q * &r)).unwrap());
                }
            }
        }
    }

    #[test]
    fn downset_matches_filter() {
        for d in [2, 3, 5, 7, 13] {
            let l = lat(d);
            for (a, b) in [(4, 2), (9, 3), (7, -2), (1, 0), (20, 1)] {
                let q = QuadInt::new(a, b, l.ctx());
                if !q.is_totally_positive() {
                    continue;
                }
                let alpha = l.pt(&q).unwrap();
                let reg = Region::downset(&l, alpha);
                let pts = reg.points();
                let mut brute = Vec::new();
                for y in -60..=60 {
                    for x in 1..=alpha.x {
                        let p = Pt::new(x, y);
                        if (x - y * l.t).rem_euclid(2) == 0 && l.is_tp(p) && l.succeq(alpha, p) {
                            brute.push(p);
                        }
                    }
                }
                let mut got = pts.clone();
                got.sort();
                brute.sort();
                assert_eq!(got, brute, "D={d} α={q}");
                for (i, p) in pts.iter().enumerate() {
                    assert_eq!(reg.index(*p), Some(i));
                }
            }
        }
    }

    #[test]
    fn reduced_downset_matches_rows() {
        for d in [2, 3, 5, 6, 7, 13, 19, 31] {
            let l = lat(d);
            let f = crate::field::Field::new(d).unwrap();
            let m = f.betas();
            for j in 0..m.s_prime() + 2 {
                for (e, g) in [(1, 0), (2, 1), (3, 2), (1, 3), (5, 0)] {
                    let q = m.beta(j).scale(e) + m.beta(j + 1).scale(g);
                    let alpha = l.pt(&q).unwrap();
                    let mut fast = l.downset_points(alpha);
                    let mut rows = Region::downset(&l, alpha).points();
                    fast.sort();
                    rows.sort();
                    assert_eq!(fast, rows, "D={d} α={q}");
                }
            }
        }
    }

    #[test]
    fn reduced_downset_commutes_with_units() {
        for d in [46, 94, 151, 199] {
            let l = lat(d);
            let f = crate::field::Field::new(d).unwrap();
            let eps = l.pt(&f.units().epsilon_plus).unwrap();
            let m = f.betas();
            for j in [1, m.s_prime() / 3, m.s_prime() / 2] {
                let q = m.beta(j).scale(3) + m.beta(j + 1).scale(2);
                let Ok(alpha) = l.pt(&q) else { continue };
                let small = l.downset_points(alpha);
                let moved = l.mul(alpha, eps);
                if moved.x.abs() > COORD_LIMIT || moved.y.abs() > COORD_LIMIT {
                    continue;
                }
                let mut big = l.downset_points(moved);
                let mut image: Vec<Pt> = small.iter().map(|p| l.mul(*p, eps)).collect();
                big.sort();
                image.sort();
                assert_eq!(big, image, "D={d} j={j}");
                assert!(!small.is_empty());
            }
        }
    }

    #[test]
    fn descent_matches_sweep() {
        for d in [2, 3, 5, 6, 13] {
            let l = lat(d);
            let sweep = Sweep::run(&l, Region::sqrt_box(&l, 12), u32::MAX);
            for (i, p) in sweep.points.iter().enumerate() {
                let parts = Region::downset(&l, *p).points();
                let mut desc = Descent::new(&l, parts, u64::MAX - 1);
                assert_eq!(desc.count(*p).unwrap(), sweep.pk[i] as u64, "D={d} {p:?}");
            }
        }
    }

    #[test]
    fn rational_integers_count_like_ordinary_partitions() {
        // 1, 2, 3, ... only: parts of n in Q(√D) with no irrational part
        // appear once Δ is large enough that no y ≠ 0 part fits under n.
        let l = lat(1009);
        let p = [1u64, 1, 2, 3, 5, 7, 11, 15, 22, 30];
        for n in 1..10i64 {
            let alpha = Pt::new(2 * n, 0);
            let mut desc = Descent::new(&l, Region::downset(&l, alpha).points(), u64::MAX - 1);
            assert_eq!(desc.count(alpha).unwrap(), p[n as usize]);
        }
    }

    #[test]
    fn cap_saturates() {
        let l = lat(1009);
        let alpha = Pt::new(18, 0);
        let mut desc = Descent::new(&l, Region::downset(&l, alpha).points(), 10);
        assert_eq!(desc.count(alpha).unwrap(), 11);
        let desc = Descent::new(&l, Region::downset(&l, alpha).points(), 100);
        assert_eq!(desc.list(alpha, 100).len(), 30);
        assert_eq!(desc.list(alpha, 4).len(), 4);
    }
}
