//! Wire payloads. Every integer is a base-10 string so values of any size
//! survive any JSON reader; each payload renders as text or JSON.

use std::fmt::Write as _;

use quadpart::qfield::QuadInt;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

fn s(v: impl ToString) -> String {
    v.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elem {
    pub a: String,
    pub b: String,
}

impl From<&QuadInt> for Elem {
    fn from(q: &QuadInt) -> Self {
        Elem { a: s(q.a()), b: s(q.b()) }
    }
}

/// Top-level JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: u32,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Payload {
    Field(FieldOut),
    Cf(CfOut),
    Indec(IndecOut),
    Decomp(DecompOut),
    Pk(PkOut),
    Gen(GenOut),
    Verify(VerifyOut),
    Scan(ScanOut),
    Witness(WitnessOut),
    Density(DensityOut),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldOut {
    #[serde(rename = "D")]
    pub d: String,
    pub delta: String,
    pub omega: String,
    pub tr_omega: String,
    pub nm_omega: String,
    pub floor_xi: String,
    pub c_d: String,
    pub period: Vec<String>,
    pub s: String,
    pub epsilon: Elem,
    pub epsilon_norm: String,
    pub epsilon_plus: Elem,
    pub s_prime: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfRow {
    pub i: String,
    pub u: String,
    pub p: String,
    pub q: String,
    pub alpha: Elem,
    pub norm: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfOut {
    #[serde(rename = "D")]
    pub d: String,
    /// `⌊ω⌋ = ⌈u_0/2⌉`
    pub a0: String,
    pub u0: String,
    pub period: Vec<String>,
    pub rows: Vec<CfRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaOut {
    pub j: String,
    pub i: String,
    pub r: String,
    pub beta: Elem,
    pub v: String,
    pub norm: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndecOut {
    #[serde(rename = "D")]
    pub d: String,
    pub s_prime: String,
    pub rows: Vec<BetaOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompOut {
    #[serde(rename = "D")]
    pub d: String,
    pub alpha: Elem,
    pub j: String,
    pub e: String,
    pub f: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PkOut {
    #[serde(rename = "D")]
    pub d: String,
    pub alpha: Elem,
    pub indec: bool,
    /// `exact` or `at_least`
    pub kind: String,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<Vec<Vec<Elem>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenOut {
    #[serde(rename = "D")]
    pub d: String,
    pub target: String,
    pub i_max: String,
    pub elements: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOut {
    #[serde(rename = "D")]
    pub d: String,
    pub bound: String,
    pub candidates_checked: String,
    pub max_norm_seen: String,
    pub bound_value: String,
    pub headroom: f64,
    pub violations: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRowOut {
    #[serde(rename = "D")]
    pub d: String,
    pub in_range: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOut {
    pub m: String,
    #[serde(rename = "X")]
    pub x: String,
    pub method: String,
    /// `D(m) ∩ [2, X]`
    pub missing: Vec<String>,
    pub rows: Vec<ScanRowOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOut {
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "B")]
    pub b: String,
    pub witnesses: Vec<(String, Elem)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOut {
    pub m: String,
    #[serde(rename = "X")]
    pub x: String,
    pub count: String,
    pub members: Vec<(String, Vec<String>)>,
    pub rhs: f64,
    pub hypothesis_holds: bool,
    pub consistent: bool,
}

fn elem_text(e: &Elem, w: &str) -> String {
    match (e.a.as_str(), e.b.as_str()) {
        (a, "0") => a.to_string(),
        ("0", b) => format!("{b}{w}"),
        (a, b) => match b.strip_prefix('-') {
            Some(nb) => format!("{a} - {nb}{w}"),
            None => format!("{a} + {b}{w}"),
        },
    }
}

fn omega_symbol(d: &str) -> String {
    match d.parse::<u64>() {
        Ok(n) if n % 4 == 1 => "ω".into(),
        _ => format!("√{d}"),
    }
}

impl Payload {
    pub fn to_json(&self) -> String {
        let env = Envelope {
            schema: SCHEMA,
            payload: self.clone(),
        };
        serde_json::to_string_pretty(&env).expect("payloads serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        match self {
            Payload::Field(f) => {
                let w = omega_symbol(&f.d);
                let _ = writeln!(o, "D = {}", f.d);
                let _ = writeln!(o, "Δ = {}", f.delta);
                let _ = writeln!(o, "ω = {}", f.omega);
                let _ = writeln!(o, "Tr ω = {}, Nm ω = {}", f.tr_omega, f.nm_omega);
                let _ = writeln!(o, "⌊ξ⌋ = {}", f.floor_xi);
                let _ = writeln!(o, "c_D = {}", f.c_d);
                let _ = writeln!(o, "period = [{}], s = {}", f.period.join(", "), f.s);
                let _ = writeln!(o, "ε = {} (norm {})", elem_text(&f.epsilon, &w), f.epsilon_norm);
                let _ = writeln!(o, "ε⁺ = {}", elem_text(&f.epsilon_plus, &w));
                let _ = writeln!(o, "s′ = {}", f.s_prime);
            }
            Payload::Cf(c) => {
                let w = omega_symbol(&c.d);
                let _ = writeln!(o, "D = {}: ω = [{}; {}], u_0 = {}", c.d, c.a0, c.period.join(", "), c.u0);
                let _ = writeln!(o, "i\tu_i\tp_i\tq_i\tα_i\t|Nm α_i|");
                for r in &c.rows {
                    let _ = writeln!(o, "{}\t{}\t{}\t{}\t{}\t{}", r.i, r.u, r.p, r.q, elem_text(&r.alpha, &w), r.norm);
                }
            }
            Payload::Indec(x) => {
                let w = omega_symbol(&x.d);
                let _ = writeln!(o, "D = {}, s′ = {}", x.d, x.s_prime);
                let _ = writeln!(o, "j\ti\tr\tβ_j\tv_j\tNm β_j");
                for r in &x.rows {
                    let _ = writeln!(o, "{}\t{}\t{}\t{}\t{}\t{}", r.j, r.i, r.r, elem_text(&r.beta, &w), r.v, r.norm);
                }
            }
            Payload::Decomp(x) => {
                let _ = writeln!(o, "j={} e={} f={}", x.j, x.e, x.f);
            }
            Payload::Pk(x) => {
                let w = omega_symbol(&x.d);
                let name = if x.indec { "pk_indec" } else { "pk" };
                let rel = if x.kind == "exact" { "=" } else { "≥" };
                let _ = writeln!(o, "{name} {rel} {}", x.value);
                for p in x.partitions.iter().flatten() {
                    let parts: Vec<String> = p.iter().map(|e| format!("({})", elem_text(e, &w))).collect();
                    let _ = writeln!(o, "  {}", parts.join(" + "));
                }
            }
            Payload::Gen(g) => {
                let w = omega_symbol(&g.d);
                for e in &g.elements {
                    let _ = writeln!(o, "{}", elem_text(e, &w));
                }
            }
            Payload::Verify(v) => {
                let _ = writeln!(o, "D = {}, bound {}", v.d, v.bound);
                let _ = writeln!(o, "candidates checked: {}", v.candidates_checked);
                let _ = writeln!(o, "max norm seen: {} (bound {}, ratio {:.4})", v.max_norm_seen, v.bound_value, v.headroom);
                if v.violations.is_empty() {
                    let _ = writeln!(o, "no violations");
                } else {
                    let w = omega_symbol(&v.d);
                    for e in &v.violations {
                        let _ = writeln!(o, "violation: {}", elem_text(e, &w));
                    }
                }
            }
            Payload::Scan(x) => {
                let _ = writeln!(o, "{}", x.missing.join(","));
            }
            Payload::Witness(x) => {
                let w = omega_symbol(&x.d);
                let _ = writeln!(o, "D = {}, B = {}", x.d, x.b);
                for (m, e) in &x.witnesses {
                    let _ = writeln!(o, "{m}\t{}", elem_text(e, &w));
                }
            }
            Payload::Density(x) => {
                let _ = writeln!(o, "#E({}, {}) = {}", x.m, x.x, x.count);
                for (d, ks) in &x.members {
                    let _ = writeln!(o, "  D = {d}: missing {}", ks.join(","));
                }
                let _ = writeln!(o, "formula value: {:.6e}", x.rhs);
                let _ = writeln!(o, "hypothesis X ≥ (2m-5)^12 (log X)^4 holds: {}", x.hypothesis_holds);
                let _ = writeln!(o, "consistent: {}", x.consistent);
            }
        }
        o
    }
}

/// RFC-4180 CSV with columns `D, m, in_range, witness_a, witness_b, pk`.
pub fn scan_csv(scan: &ScanOut) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["D", "m", "in_range", "witness_a", "witness_b", "pk"])
        .expect("in-memory write");
    for r in &scan.rows {
        let (a, b, pk) = match &r.witness {
            Some(e) => (e.a.as_str(), e.b.as_str(), scan.m.as_str()),
            None => ("", "", ""),
        };
        w.write_record([r.d.as_str(), scan.m.as_str(), if r.in_range { "true" } else { "false" }, a, b, pk])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
