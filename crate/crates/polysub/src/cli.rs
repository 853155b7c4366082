//! Command-line orchestration: subcommand dispatch, deterministic parallel
//! scans, and CSV/JSON report emission.
//!
//! Exit codes: 0 success, 1 mathematical anomaly found (a bound violation or
//! failed audit — the scientifically interesting exit), 2 usage error.
//! `RAYON_NUM_THREADS` sets the default worker count; `--threads` overrides it
//! with a dedicated pool for the run.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::ff::{Field, FieldElement};
use crate::markoff::{self, SurfaceIndex};
use crate::numth;
use crate::orbit;
use crate::poly;
use crate::report::{Format, Report, emit_value};
use crate::stepanov;
use crate::subgrp::{self, MobiusEquation, TheoremVerdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANOMALY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polysub", version, about = "Exact experiments on Markoff surfaces and subgroup equations")]
pub struct Cli {
    /// RNG seed for sampled scans.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default (RAYON_NUM_THREADS or cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Markoff surface mod p: connectivity scans and component structure.
    Markoff {
        #[command(subcommand)]
        cmd: MarkoffCmd,
    },
    /// Rotation orbits: recurrence data for one triple, or the intersection audit.
    Orbit(OrbitTop),
    /// Subgroup solution counting.
    Subgroup {
        #[command(subcommand)]
        cmd: SubgroupCmd,
    },
    /// Random scans of the fractional-linear equation over subgroups.
    Conjecture {
        #[command(subcommand)]
        cmd: ConjectureCmd,
    },
    /// Check the solution-count bound for one polynomial and scaling family.
    Theorem {
        #[command(subcommand)]
        cmd: TheoremCmd,
    },
    /// The explicit subgroup construction with many u, u+1 both in G.
    Sec6 {
        /// Subgroup parameter; the modulus is a primitive prime divisor of 2^{24m}−1.
        #[arg(long)]
        m: u32,
    },
    /// Coset pigeonhole: some coset pair carries at least the average count.
    Pigeonhole {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        t: u64,
        /// Fractional-linear equation "a11,a12,a21,a22" (signed residues).
        #[arg(long, default_value = "1,1,1,-1")]
        eq: String,
    },
    /// Auxiliary-polynomial certificates.
    Stepanov {
        #[command(subcommand)]
        cmd: StepanovCmd,
    },
    /// Divisor and smooth-number utilities.
    Numth {
        #[command(subcommand)]
        cmd: NumthCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum MarkoffCmd {
    /// Connectivity over all primes in [pmin, pmax].
    Scan {
        #[arg(long)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
    },
    /// Component structure for a single prime.
    Components {
        #[arg(short)]
        p: u64,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct OrbitTop {
    #[command(subcommand)]
    pub cmd: Option<OrbitCmd>,
    #[command(flatten)]
    pub run: OrbitRun,
}

#[derive(Debug, Args)]
pub struct OrbitRun {
    #[arg(short)]
    pub p: Option<u64>,
    #[arg(short)]
    pub x: Option<u64>,
    #[arg(short)]
    pub y: Option<u64>,
    #[arg(short)]
    pub z: Option<u64>,
    /// Recurrence prefix length to echo.
    #[arg(long, default_value_t = 12)]
    pub len: u64,
}

#[derive(Debug, Subcommand)]
pub enum OrbitCmd {
    /// Projection statistics and sampled Z-set intersections for the component of (1,1,1).
    Audit {
        #[arg(short)]
        p: u64,
        /// Conjectural intersection constant to audit against.
        #[arg(long = "A")]
        a: Option<u64>,
        /// Pair sample budget.
        #[arg(long, default_value_t = 2000)]
        pairs: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SubgroupCmd {
    /// #{(u,v) ∈ aG × bG : P(u,v) = 0}.
    Count {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        t: u64,
        /// Terms "i,j,c" separated by semicolons, e.g. "1,1,1;1,0,1;0,1,1".
        #[arg(long)]
        poly: String,
        /// Coset representatives "a,b".
        #[arg(long)]
        coset: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConjectureCmd {
    /// Sampled fractional-linear counts over all (p ≤ pmax, t ≤ p^texp).
    Scan {
        #[arg(long)]
        pmax: u64,
        #[arg(long, default_value_t = 0.5)]
        texp: f64,
        #[arg(long)]
        trials: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum TheoremCmd {
    /// Exact comparison of the subgroup solution count against the cube bound.
    Check {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        t: u64,
        #[arg(long)]
        poly: String,
        /// Scaling family "l,m;l,m;…"; defaults to the single trivial scaling.
        #[arg(long, default_value = "1,1")]
        scalings: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum StepanovCmd {
    /// Build and verify an auxiliary-polynomial certificate.
    Cert {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        t: u64,
        #[arg(long)]
        poly: String,
        /// Coset count; must match the scalings file when given.
        #[arg(long, default_value_t = 1)]
        h: u64,
        /// File with one "l,m" scaling pair per line.
        #[arg(long)]
        scalings: Option<std::path::PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum NumthCmd {
    /// Divisors of n up to z.
    Tau {
        #[arg(short)]
        n: u64,
        /// Threshold; defaults to n (all divisors).
        #[arg(long)]
        z: Option<f64>,
    },
    /// Count of y-smooth integers up to x.
    Psi {
        #[arg(short)]
        x: u64,
        #[arg(short)]
        y: u64,
    },
    /// Primitive prime divisors of 2^n − 1.
    Ppd {
        #[arg(short)]
        n: u32,
    },
}

/// Parses argv, runs the subcommand (inside a dedicated thread pool when
/// `--threads` is set), writes the report, and maps the outcome to an exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = if matches!(e.kind(), DisplayHelp | DisplayVersion) { EXIT_OK } else { EXIT_USAGE };
            let _ = e.print();
            return code;
        }
    };
    let output = cli.output.clone();
    let outcome = if cli.threads > 0 {
        let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
            Ok(pool) => pool,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        };
        pool.install(|| execute(&cli))
    } else {
        execute(&cli)
    };
    match outcome {
        Ok((body, code)) => {
            if let Some(path) = output {
                if let Err(e) = std::fs::write(&path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            } else {
                print!("{body}");
            }
            code
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn parse_pair(s: &str, p: u64) -> Result<(FieldElement, FieldElement), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"a,b\", got {s:?}"));
    }
    let a: i64 = parts[0].trim().parse().map_err(|e| format!("bad value {:?}: {e}", parts[0]))?;
    let b: i64 = parts[1].trim().parse().map_err(|e| format!("bad value {:?}: {e}", parts[1]))?;
    Ok((FieldElement::from_i64(a, p), FieldElement::from_i64(b, p)))
}

fn parse_scaling_family(s: &str, p: u64) -> Result<Vec<(FieldElement, FieldElement)>, String> {
    let fam: Result<Vec<_>, _> = s.split(';').filter(|t| !t.trim().is_empty()).map(|t| parse_pair(t, p)).collect();
    let fam = fam?;
    if fam.iter().any(|(l, m)| l.is_zero() || m.is_zero()) {
        return Err("scalings must be nonzero".into());
    }
    Ok(fam)
}

/// Runs one parsed command, returning the report body and the exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32), String> {
    let fmt: Format = cli.out.into();
    match &cli.cmd {
        Cmd::Markoff { cmd } => markoff_cmd(cmd, fmt),
        Cmd::Orbit(top) => orbit_cmd(top, fmt, cli.seed),
        Cmd::Subgroup { cmd } => subgroup_cmd(cmd, fmt),
        Cmd::Conjecture { cmd } => conjecture_cmd(cmd, fmt, cli.seed),
        Cmd::Theorem { cmd } => theorem_cmd(cmd, fmt),
        Cmd::Sec6 { m } => sec6_cmd(*m, fmt),
        Cmd::Pigeonhole { p, t, eq } => pigeonhole_cmd(*p, *t, eq, fmt),
        Cmd::Stepanov { cmd } => stepanov_cmd(cmd, fmt),
        Cmd::Numth { cmd } => numth_cmd(cmd, fmt),
    }
}

const MARKOFF_HEADER: [&str; 6] =
    ["p", "n_points", "n_components", "largest", "exceptional", "zero_coord_flag"];

fn markoff_row(r: &markoff::ComponentReport, with_sizes: bool) -> Vec<String> {
    let mut row = vec![
        r.p.to_string(),
        r.n_points.to_string(),
        r.n_components.to_string(),
        r.largest.to_string(),
        r.exceptional.to_string(),
        r.zero_coord_flag.to_string(),
    ];
    if with_sizes {
        let top: Vec<String> = r.sizes.iter().take(10).map(|s| s.to_string()).collect();
        row.push(top.join(";"));
    }
    row
}

fn markoff_cmd(cmd: &MarkoffCmd, fmt: Format) -> Result<(String, i32), String> {
    let (meta, reports) = match cmd {
        MarkoffCmd::Scan { pmin, pmax } => (
            json!({"cmd": "markoff scan", "pmin": pmin, "pmax": pmax}),
            markoff::exceptional_scan(*pmin, *pmax).map_err(|e| e.to_string())?,
        ),
        MarkoffCmd::Components { p } => {
            let idx = SurfaceIndex::enumerate(*p).map_err(|e| e.to_string())?;
            (json!({"cmd": "markoff components", "p": p}), vec![markoff::components(&idx)])
        }
    };
    // JSON mirrors the CSV columns plus the top component sizes
    let with_sizes = fmt == Format::Json;
    let mut header: Vec<String> = MARKOFF_HEADER.iter().map(|s| s.to_string()).collect();
    if with_sizes {
        header.push("top_sizes".into());
    }
    let mut rep = Report::new(meta, header);
    let mut anomaly = false;
    for r in &reports {
        anomaly |= r.exceptional != 0;
        rep.push(markoff_row(r, with_sizes));
    }
    Ok((rep.emit(fmt), if anomaly { EXIT_ANOMALY } else { EXIT_OK }))
}

fn orbit_cmd(top: &OrbitTop, fmt: Format, seed: u64) -> Result<(String, i32), String> {
    match &top.cmd {
        Some(OrbitCmd::Audit { p, a, pairs }) => {
            let idx = SurfaceIndex::enumerate(*p).map_err(|e| e.to_string())?;
            let audit = orbit::intersection_audit(&idx, *a, *pairs, seed).map_err(|e| e.to_string())?;
            let meta = json!({"cmd": "orbit audit", "p": p, "A": a, "pairs": pairs, "seed": seed});
            let body = match fmt {
                Format::Json => emit_value(meta, &audit),
                Format::Csv => {
                    let mut rep = Report::new(
                        meta,
                        vec![
                            "p", "component_size", "m_projections", "lstar_size", "pairs_sampled",
                            "max_intersection", "argmax_x", "argmax_xs", "sum_g_equals_m",
                            "g_zero_beyond_2m", "within_2a",
                        ],
                    );
                    rep.push(vec![
                        audit.p.to_string(),
                        audit.component_size.to_string(),
                        audit.m_projections.to_string(),
                        audit.lstar_size.to_string(),
                        audit.pairs_sampled.to_string(),
                        audit.max_intersection.to_string(),
                        audit.argmax_pair.0.to_string(),
                        audit.argmax_pair.1.to_string(),
                        audit.sum_g_equals_m.to_string(),
                        audit.g_zero_beyond_2m.to_string(),
                        audit.within_2a.map(|b| b.to_string()).unwrap_or_default(),
                    ]);
                    rep.emit(fmt)
                }
            };
            let bad = !audit.sum_g_equals_m || !audit.g_zero_beyond_2m || audit.within_2a == Some(false);
            Ok((body, if bad { EXIT_ANOMALY } else { EXIT_OK }))
        }
        None => {
            let (p, x, y, z) = match (top.run.p, top.run.x, top.run.y, top.run.z) {
                (Some(p), Some(x), Some(y), Some(z)) => (p, x, y, z),
                _ => return Err("orbit requires -p, -x, -y, -z (or the `audit` subcommand)".into()),
            };
            markoff::MarkoffTriple::new(x, y, z, p).map_err(|e| e.to_string())?;
            let fx = FieldElement::new(x % p, p);
            let fy = FieldElement::new(y % p, p);
            let fz = FieldElement::new(z % p, p);
            let zs = orbit::z_set(&fx, &fy, &fz).map_err(|e| e.to_string())?;
            let prefix: Vec<String> =
                orbit::recurrence(&fx, &fy, &fz, top.run.len as usize).iter().map(|v| v.to_string()).collect();
            let meta = json!({"cmd": "orbit", "p": p, "x": x, "y": y, "z": z, "len": top.run.len});
            let mut rep = Report::new(meta, vec!["p", "x", "y", "z", "t", "r", "zset_size", "prefix"]);
            rep.push(vec![
                p.to_string(),
                x.to_string(),
                y.to_string(),
                z.to_string(),
                zs.t.to_string(),
                zs.r.to_string(),
                zs.elements.len().to_string(),
                prefix.join(";"),
            ]);
            Ok((rep.emit(fmt), EXIT_OK))
        }
    }
}

fn subgroup_cmd(cmd: &SubgroupCmd, fmt: Format) -> Result<(String, i32), String> {
    let SubgroupCmd::Count { p, t, poly: poly_s, coset } = cmd;
    let pp = poly::parse_text(poly_s, *p).map_err(|e| e.to_string())?;
    let g = subgrp::build_subgroup_base(*p, *t).map_err(|e| e.to_string())?;
    let coset_pair = coset.as_deref().map(|s| parse_pair(s, *p)).transpose()?;
    if let Some((a, b)) = coset_pair {
        if a.is_zero() || b.is_zero() {
            return Err("coset representatives must be nonzero".into());
        }
    }
    let count = subgrp::count_poly_solutions(&pp, &g, &g, coset_pair).map_err(|e| e.to_string())?;
    let meta = json!({"cmd": "subgroup count", "p": p, "t": t, "poly": poly_s, "coset": coset});
    let mut rep = Report::new(meta, vec!["p", "t", "poly", "coset", "count"]);
    rep.push(vec![
        p.to_string(),
        t.to_string(),
        poly_s.clone(),
        coset.clone().unwrap_or_default(),
        count.to_string(),
    ]);
    Ok((rep.emit(fmt), EXIT_OK))
}

fn conjecture_cmd(cmd: &ConjectureCmd, fmt: Format, seed: u64) -> Result<(String, i32), String> {
    let ConjectureCmd::Scan { pmax, texp, trials } = cmd;
    let scan = subgrp::conjecture_scan(*pmax, *texp, *trials, seed).map_err(|e| e.to_string())?;
    let meta = json!({
        "cmd": "conjecture scan", "pmax": pmax, "texp": texp, "trials": trials, "seed": seed,
        "tasks": scan.tasks, "max_count": scan.max_count,
        "argmax": {
            "p": scan.argmax.0, "t": scan.argmax.1,
            "a11": scan.argmax.2, "a12": scan.argmax.3, "a21": scan.argmax.4, "a22": scan.argmax.5,
        },
    });
    let mut rep = Report::new(meta, vec!["count", "frequency"]);
    for (&count, &freq) in &scan.histogram {
        rep.push(vec![count.to_string(), freq.to_string()]);
    }
    Ok((rep.emit(fmt), EXIT_OK))
}

fn theorem_cmd(cmd: &TheoremCmd, fmt: Format) -> Result<(String, i32), String> {
    let TheoremCmd::Check { p, t, poly: poly_s, scalings } = cmd;
    let pp = poly::parse_text(poly_s, *p).map_err(|e| e.to_string())?;
    let fam = parse_scaling_family(scalings, *p)?;
    let g = subgrp::build_subgroup_base(*p, *t).map_err(|e| e.to_string())?;
    let report = subgrp::check_theorem(&pp, &fam, &g).map_err(|e| e.to_string())?;
    let meta = json!({"cmd": "theorem check", "p": p, "t": t, "poly": poly_s, "scalings": scalings});
    let body = match fmt {
        Format::Json => emit_value(meta, &report),
        Format::Csv => {
            let mut rep = Report::new(
                meta,
                vec!["p", "t", "m", "n", "g", "h", "n_solutions", "bound_ceil", "in_window", "verdict"],
            );
            rep.push(vec![
                report.p.to_string(),
                report.t.to_string(),
                report.m.to_string(),
                report.n.to_string(),
                report.g_inv.to_string(),
                report.h.to_string(),
                report.n_solutions.to_string(),
                report.bound.bound_ceil.to_string(),
                (report.bound.window_lower_ok && report.bound.window_upper_ok).to_string(),
                format!("{:?}", report.verdict),
            ]);
            rep.emit(fmt)
        }
    };
    let code = if report.verdict == TheoremVerdict::Violation { EXIT_ANOMALY } else { EXIT_OK };
    Ok((body, code))
}

fn sec6_cmd(m: u32, fmt: Format) -> Result<(String, i32), String> {
    let rep = subgrp::sec6_construction(m).map_err(|e| e.to_string())?;
    let meta = json!({"cmd": "sec6", "m": m});
    let body = match fmt {
        Format::Json => emit_value(meta, &rep),
        Format::Csv => {
            let mut table = Report::new(
                meta,
                vec!["m", "n", "p", "xi", "group_order", "mobius_count", "memberships_ok", "d_reading"],
            );
            table.push(vec![
                rep.m.to_string(),
                rep.n.to_string(),
                rep.p.to_string(),
                rep.xi.to_string(),
                rep.group_order.to_string(),
                rep.mobius_count.to_string(),
                rep.memberships_ok.to_string(),
                rep.d_reading.clone(),
            ]);
            table.emit(fmt)
        }
    };
    Ok((body, EXIT_OK))
}

fn pigeonhole_cmd(p: u64, t: u64, eq: &str, fmt: Format) -> Result<(String, i32), String> {
    let parts: Vec<&str> = eq.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected --eq \"a11,a12,a21,a22\", got {eq:?}"));
    }
    let vals: Result<Vec<i64>, _> = parts.iter().map(|s| s.trim().parse::<i64>()).collect();
    let vals = vals.map_err(|e| format!("bad --eq entry: {e}"))?;
    let mob = MobiusEquation::new(
        FieldElement::from_i64(vals[0], p),
        FieldElement::from_i64(vals[1], p),
        FieldElement::from_i64(vals[2], p),
        FieldElement::from_i64(vals[3], p),
    )
    .map_err(|e| e.to_string())?;
    let rep = subgrp::pigeonhole_coset_demo(p, t, &mob).map_err(|e| e.to_string())?;
    let meta = json!({"cmd": "pigeonhole", "p": p, "t": t, "eq": eq});
    let body = match fmt {
        Format::Json => emit_value(meta, &rep),
        Format::Csv => {
            let mut table = Report::new(
                meta,
                vec!["p", "t", "n_total", "cosets_per_side", "max_count", "argmax_a", "argmax_b",
                     "average_ceil", "pigeonhole_ok"],
            );
            table.push(vec![
                rep.p.to_string(),
                rep.t.to_string(),
                rep.n_total.to_string(),
                rep.n_cosets_per_side.to_string(),
                rep.max_count.to_string(),
                rep.argmax.0.to_string(),
                rep.argmax.1.to_string(),
                rep.average_ceil.to_string(),
                rep.pigeonhole_ok.to_string(),
            ]);
            table.emit(fmt)
        }
    };
    Ok((body, if rep.pigeonhole_ok { EXIT_OK } else { EXIT_ANOMALY }))
}

fn stepanov_cmd(cmd: &StepanovCmd, fmt: Format) -> Result<(String, i32), String> {
    let StepanovCmd::Cert { p, t, poly: poly_s, h, scalings } = cmd;
    let pp = poly::parse_text(poly_s, *p).map_err(|e| e.to_string())?;
    let fam = match scalings {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let fam: Result<Vec<_>, _> =
                text.lines().filter(|l| !l.trim().is_empty()).map(|l| parse_pair(l, *p)).collect();
            fam?
        }
        None => vec![(FieldElement::new(1, *p), FieldElement::new(1, *p))],
    };
    if fam.len() as u64 != *h {
        return Err(format!("--h {h} does not match {} scaling pairs", fam.len()));
    }
    let params = stepanov::derive_params(
        *p,
        *t,
        *h,
        pp.deg_x() as u64,
        pp.deg_y() as u64,
        pp.g_invariant(),
    )
    .map_err(|e| e.to_string())?;
    let g = subgrp::build_subgroup_base(*p, *t).map_err(|e| e.to_string())?;
    let meta = json!({"cmd": "stepanov cert", "p": p, "t": t, "poly": poly_s, "h": h});
    match stepanov::certificate(&pp, &fam, &g, &params) {
        Ok(rep) => {
            let body = match fmt {
                Format::Json => emit_value(meta, &rep),
                Format::Csv => {
                    let mut table = Report::new(
                        meta,
                        vec!["p", "t", "A", "B", "C", "D", "L", "rows", "rank", "nullity",
                             "brute_count", "bezout_bound"],
                    );
                    table.push(vec![
                        p.to_string(),
                        t.to_string(),
                        rep.params.a.to_string(),
                        rep.params.b.to_string(),
                        rep.params.c.to_string(),
                        rep.params.d.to_string(),
                        rep.params.l.to_string(),
                        rep.system_rows.to_string(),
                        rep.rank.to_string(),
                        rep.nullity.to_string(),
                        rep.verify.brute_count.to_string(),
                        rep.verify.bezout_bound.to_string(),
                    ]);
                    table.emit(fmt)
                }
            };
            Ok((body, EXIT_OK))
        }
        Err(e @ stepanov::StepanovError::VerificationFailure { .. }) => {
            // a built certificate that fails its own checks is an anomaly, not a usage error
            let body = emit_value(meta, &json!({"error": e.to_string()}));
            Ok((body, EXIT_ANOMALY))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn numth_cmd(cmd: &NumthCmd, fmt: Format) -> Result<(String, i32), String> {
    match cmd {
        NumthCmd::Tau { n, z } => {
            let z = z.unwrap_or(*n as f64);
            let tau = numth::tau_z(*n, z);
            let mut rep = Report::new(json!({"cmd": "numth tau", "n": n, "z": z}), vec!["n", "z", "tau"]);
            rep.push(vec![n.to_string(), z.to_string(), tau.to_string()]);
            Ok((rep.emit(fmt), EXIT_OK))
        }
        NumthCmd::Psi { x, y } => {
            let count = numth::psi(*x, *y).map_err(|e| e.to_string())?;
            let mut rep = Report::new(json!({"cmd": "numth psi", "x": x, "y": y}), vec!["x", "y", "psi"]);
            rep.push(vec![x.to_string(), y.to_string(), count.to_string()]);
            Ok((rep.emit(fmt), EXIT_OK))
        }
        NumthCmd::Ppd { n } => {
            let divs = numth::primitive_prime_divisors(*n).map_err(|e| e.to_string())?;
            let mut rep = Report::new(json!({"cmd": "numth ppd", "n": n}), vec!["q", "q_mod_n"]);
            for q in divs {
                rep.push(vec![q.to_string(), (q % *n as u64).to_string()]);
            }
            Ok((rep.emit(fmt), EXIT_OK))
        }
    }
}
