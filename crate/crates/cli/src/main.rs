mod cache;
mod output;

use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use quadpart::exec::Exec;
use quadpart::partcount::{self, CountResult};
use quadpart::qfield::QuadInt;
use quadpart::theorems::{self, BoundKind};
use quadpart::{Error, Field};

use cache::Cache;
use output::*;

#[derive(Parser, Debug)]
#[command(name = "quadpart", version, about = "Partitions of totally positive integers in real quadratic fields")]
struct Cli {
    /// Output format; csv applies to `scan` only.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Skip the on-disk cache (location: $QUADPART_CACHE_DIR or ./.quadpart-cache).
    #[arg(long, global = true)]
    no_cache: bool,
    /// Run scans on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BoundArg {
    Ds,
    Hk10,
    N,
    N2,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Field constants, period and units.
    Field { d: i64 },
    /// Continued fraction expansion and convergents α_{-1}, …, α_{rows-2}.
    Cf {
        d: i64,
        #[arg(long)]
        rows: Option<usize>,
    },
    /// Indecomposables β_j with v_j and norms for |j| ≤ window.
    Indec {
        d: i64,
        #[arg(long, default_value_t = 10)]
        window: i64,
    },
    /// Canonical α = e·β_j + f·β_{j+1} for α = a + bω.
    Decomp {
        d: i64,
        #[arg(allow_negative_numbers = true)]
        a: BigInt,
        #[arg(allow_negative_numbers = true)]
        b: BigInt,
    },
    /// Number of partitions of α = a + bω.
    Pk {
        d: i64,
        #[arg(allow_negative_numbers = true)]
        a: BigInt,
        #[arg(allow_negative_numbers = true)]
        b: BigInt,
        /// Only indecomposable parts.
        #[arg(long)]
        indec: bool,
        /// Stop counting above this value.
        #[arg(long)]
        cap: Option<u64>,
        /// List the partitions.
        #[arg(long)]
        list: bool,
        /// Maximum number of partitions listed.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Elements with six partitions (--pk 6) or two indecomposable partitions (--pki 2).
    #[command(group(ArgGroup::new("target").required(true).args(["pk", "pki"])))]
    Gen {
        d: i64,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["6"]))]
        pk: Option<String>,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["2"]))]
        pki: Option<String>,
        /// Largest odd convergent index used (default: one unit period).
        #[arg(long, allow_negative_numbers = true)]
        imax: Option<i64>,
    },
    /// Check a norm bound over its candidate set.
    Verify {
        d: i64,
        #[arg(long, value_enum)]
        bound: BoundArg,
        /// Partition count for `--bound n`.
        #[arg(long, required_if_eq("bound", "n"))]
        m: Option<u32>,
    },
    /// Squarefree D ≤ X for which no element has exactly m partitions.
    Scan {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        xmax: u64,
        /// Continued-fraction criterion instead of the search (m = 6 only).
        #[arg(long)]
        fast6: bool,
    },
    /// Elements with exactly m partitions for every small m.
    Witness { d: i64 },
    /// Count of D ≤ X missing some value in 1..=m, with the asymptotic formula.
    Density {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        xmax: u64,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

struct Run {
    payload: Payload,
    violated: bool,
}

impl Run {
    fn ok(payload: Payload) -> Self {
        Run { payload, violated: false }
    }
}

fn elems(v: &[QuadInt]) -> Vec<Elem> {
    v.iter().map(Elem::from).collect()
}

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn count_fields(c: CountResult) -> (String, String) {
    match c {
        CountResult::Exact(v) => ("exact".into(), v.to_string()),
        CountResult::AtLeast(v) => ("at_least".into(), v.to_string()),
    }
}

fn default_imax(field: &Field) -> i64 {
    let p = field.cf().unit_index_period() as i64;
    if p % 2 == 1 {
        p
    } else {
        p + 1
    }
}

fn field_out(f: &Field) -> FieldOut {
    let ctx = f.ctx();
    let cf = f.cf();
    let u = f.units();
    FieldOut {
        d: ctx.d().to_string(),
        delta: ctx.delta().to_string(),
        omega: if ctx.d() % 4 == 1 {
            format!("(1 + √{})/2", ctx.d())
        } else {
            format!("√{}", ctx.d())
        },
        tr_omega: ctx.tr_omega().to_string(),
        nm_omega: ctx.nm_omega().to_string(),
        floor_xi: ctx.floor_xi().to_string(),
        c_d: ctx.c_d().to_string(),
        period: strs(cf.period()),
        s: cf.s().to_string(),
        epsilon: Elem::from(&u.epsilon),
        epsilon_norm: u.epsilon.norm().to_string(),
        epsilon_plus: Elem::from(&u.epsilon_plus),
        s_prime: f.betas().s_prime().to_string(),
    }
}

fn run(cli: &Cli) -> Result<Run, Failure> {
    let cache = Cache::new(!cli.no_cache);
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let elem = |f: &Field, a: &BigInt, b: &BigInt| QuadInt::new(a.clone(), b.clone(), f.ctx());
    Ok(match &cli.cmd {
        Cmd::Field { d } => Run::ok(Payload::Field(field_out(&*cache.field(*d)?))),
        Cmd::Cf { d, rows } => {
            let f = cache.field(*d)?;
            let cf = f.cf();
            let n = rows.unwrap_or(2 * cf.s() + 2);
            let mut out = Vec::with_capacity(n);
            for i in -1..(n as i64 - 1) {
                let c = f.table().convergent(i)?;
                out.push(CfRow {
                    i: i.to_string(),
                    u: if i >= 0 { cf.u(i).to_string() } else { String::new() },
                    p: c.p.to_string(),
                    q: c.q.to_string(),
                    alpha: Elem::from(&c.alpha),
                    norm: c.n.to_string(),
                });
            }
            Run::ok(Payload::Cf(CfOut {
                d: f.d().to_string(),
                a0: cf.a0().to_string(),
                u0: cf.u0().to_string(),
                period: strs(cf.period()),
                rows: out,
            }))
        }
        Cmd::Indec { d, window } => {
            if *window < 0 {
                return Err(Failure::Usage("--window must be non-negative".into()));
            }
            let f = cache.field(*d)?;
            let rows = (-window..=*window)
                .map(|j| {
                    let r = f.betas().row(j);
                    BetaOut {
                        j: r.j.to_string(),
                        i: r.i.to_string(),
                        r: r.r.to_string(),
                        beta: Elem::from(&r.alpha),
                        v: r.v.to_string(),
                        norm: r.norm,
                    }
                })
                .collect();
            Run::ok(Payload::Indec(IndecOut {
                d: f.d().to_string(),
                s_prime: f.betas().s_prime().to_string(),
                rows,
            }))
        }
        Cmd::Decomp { d, a, b } => {
            let f = cache.field(*d)?;
            let alpha = elem(&f, a, b);
            let c = f.betas().canonical_decomp(&alpha)?;
            Run::ok(Payload::Decomp(DecompOut {
                d: f.d().to_string(),
                alpha: Elem::from(&alpha),
                j: c.j.to_string(),
                e: c.e.to_string(),
                f: c.f.to_string(),
            }))
        }
        Cmd::Pk { d, a, b, indec, cap, list, limit } => {
            let f = cache.field(*d)?;
            let alpha = elem(&f, a, b);
            let c = if *indec {
                partcount::pk_indec(&f, &alpha, *cap)?
            } else {
                partcount::pk(&f, &alpha, *cap)?
            };
            let partitions = if *list {
                Some(
                    partcount::partitions(&f, &alpha, *indec, *limit)?
                        .iter()
                        .map(|p| elems(&p.parts))
                        .collect(),
                )
            } else {
                None
            };
            let (kind, value) = count_fields(c);
            Run::ok(Payload::Pk(PkOut {
                d: f.d().to_string(),
                alpha: Elem::from(&alpha),
                indec: *indec,
                kind,
                value,
                partitions,
            }))
        }
        Cmd::Gen { d, pk, imax, .. } => {
            let f = cache.field(*d)?;
            let i_max = imax.unwrap_or_else(|| default_imax(&f));
            let (target, list) = if pk.is_some() {
                ("pk=6", partcount::gen_pk6(&f, i_max)?)
            } else {
                ("pki=2", partcount::gen_pki2(&f, i_max)?)
            };
            Run::ok(Payload::Gen(GenOut {
                d: f.d().to_string(),
                target: target.into(),
                i_max: i_max.to_string(),
                elements: elems(&list),
            }))
        }
        Cmd::Verify { d, bound, m } => {
            let f = cache.field(*d)?;
            let kind = match bound {
                BoundArg::Ds => BoundKind::IndecNorm,
                BoundArg::Hk10 => BoundKind::UniqueDecomp,
                BoundArg::N2 => BoundKind::TwoIndec,
                BoundArg::N => match m {
                    Some(m) if *m >= 1 => BoundKind::AtMost(*m),
                    _ => return Err(Failure::Usage("--bound n needs --m ≥ 1".into())),
                },
            };
            let rep = theorems::verify_bound(&f, kind)?;
            let name = match kind {
                BoundKind::AtMost(m) => format!("{}(m={m})", kind.name()),
                _ => kind.name().to_string(),
            };
            Run {
                violated: !rep.ok(),
                payload: Payload::Verify(VerifyOut {
                    d: rep.d.to_string(),
                    bound: name,
                    candidates_checked: rep.candidates_checked.to_string(),
                    max_norm_seen: rep.max_norm_seen,
                    bound_value: rep.bound_value,
                    headroom: rep.headroom,
                    violations: elems(&rep.violations),
                }),
            }
        }
        Cmd::Scan { m, xmax, fast6 } => {
            if *m == 0 {
                return Err(Failure::Usage("--m must be at least 1".into()));
            }
            if *fast6 && *m != 6 {
                return Err(Failure::Usage("--fast6 requires --m 6".into()));
            }
            let key = if *fast6 {
                format!("scan-fast6-x{xmax}.json")
            } else {
                format!("scan-m{m}-x{xmax}.json")
            };
            let out = cache.get_or(&key, || scan(*m, *xmax, *fast6, exec))?;
            Run::ok(Payload::Scan(out))
        }
        Cmd::Witness { d } => {
            let f = cache.field(*d)?;
            let w = theorems::range_witnesses(&f)?;
            Run::ok(Payload::Witness(WitnessOut {
                d: f.d().to_string(),
                b: w.b.to_string(),
                witnesses: w.witnesses.iter().map(|(m, q)| (m.to_string(), Elem::from(q))).collect(),
            }))
        }
        Cmd::Density { m, xmax } => {
            let rep = theorems::density_report(*m, *xmax, exec)?;
            Run {
                violated: !rep.consistent,
                payload: Payload::Density(DensityOut {
                    m: rep.m.to_string(),
                    x: rep.x.to_string(),
                    count: rep.count.to_string(),
                    members: rep.missing.iter().map(|(d, ks)| (d.to_string(), strs(ks))).collect(),
                    rhs: rep.rhs,
                    hypothesis_holds: rep.hypothesis_holds,
                    consistent: rep.consistent,
                }),
            }
        }
    })
}

fn scan(m: u64, xmax: u64, fast6: bool, exec: Exec) -> quadpart::Result<ScanOut> {
    let (method, rows) = if fast6 {
        let missing = theorems::scan_d6_fast(xmax)?;
        let rows: Vec<ScanRowOut> = quadpart::qfield::squarefree_upto(xmax)
            .into_iter()
            .filter(|&d| d >= 2)
            .map(|d| ScanRowOut {
                d: d.to_string(),
                in_range: !missing.contains(&d),
                witness: None,
            })
            .collect();
        ("continued-fraction criterion", rows)
    } else {
        let rows: Vec<ScanRowOut> = theorems::scan_rows(m, xmax, exec)?
            .into_iter()
            .map(|r| ScanRowOut {
                d: r.d.to_string(),
                in_range: r.in_range,
                witness: r.witness.as_ref().map(Elem::from),
            })
            .collect();
        ("decision procedure", rows)
    };
    let missing = rows
        .iter()
        .filter(|r| !r.in_range)
        .map(|r| r.d.clone())
        .collect();
    Ok(ScanOut {
        m: m.to_string(),
        x: xmax.to_string(),
        method: method.into(),
        missing,
        rows,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.format == Format::Csv && !matches!(cli.cmd, Cmd::Scan { .. }) {
        eprintln!("error: --format csv is only available for scan");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(r) => {
            let text = match (cli.format, &r.payload) {
                (Format::Json, p) => p.to_json(),
                (Format::Csv, Payload::Scan(s)) => scan_csv(s),
                (_, p) => p.to_text(),
            };
            print!("{text}");
            if r.violated {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
