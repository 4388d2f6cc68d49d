//! `movoid` command line: construct, verify, census, sections, selftest.
//!
//! Exit codes: 0 when every gated check passes, 1 on a verification
//! failure, 2 on usage or parameter errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use thiserror::Error;

use movoid::construction::{
    admissible_a, build_movoid_split, build_movoid_trace, w_condition_equiv, Construction,
    ConstructionError, Family, SplitParams, TraceParams,
};
use movoid::field::{make_field_ctx, FieldCtx, FieldError};
use movoid::format::{FormatError, Manifest, PointSetFile};
use movoid::geometry::{Coords, Quadric, QuadricModel};
use movoid::group::{GroupAction, GroupError, OrbitClass};
use movoid::verify::{self, Check, Report, VerifyOptions, Witness};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "movoid", version, about = "Build and exhaustively check m-ovoids of Q(4,q)")]
pub struct Cli {
    /// Worker threads for the scans (results do not depend on it).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an m-ovoid and optionally write it to a point-set file.
    Construct {
        #[arg(long)]
        q: u32,
        /// qminus1 (q ≡ 3 mod 4) or qplus1 (q ≡ 1 mod 4); defaults from q.
        #[arg(long)]
        family: Option<Family>,
        /// Override the parameter a, given by its encoding index.
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a point-set file.
    Verify {
        file: PathBuf,
        /// Also scan every hyperplane section.
        #[arg(long)]
        sections: bool,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbit table of the prescribed group.
    Census {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        family: Option<Family>,
    },
    /// Hyperplane-section spectrum of the constructed m-ovoid.
    Sections {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        family: Option<Family>,
        #[arg(long)]
        a: Option<usize>,
    },
    /// Run the invariant suite for a list of q.
    Selftest {
        #[arg(long, value_delimiter = ',', default_values_t = [7u32, 11, 5, 9])]
        q: Vec<u32>,
        #[arg(long)]
        sections: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// Write `p^k = q` as (p, k).
pub fn prime_power(q: u32) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Usage(format!("q = {q} is not an odd prime power"));
    if q < 3 {
        return Err(bad());
    }
    let p = (2..=q).find(|d| q % d == 0).expect("q >= 2");
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 || p == 2 {
        return Err(bad());
    }
    Ok((p, k))
}

pub fn field(q: u32) -> Result<Arc<FieldCtx>, CliError> {
    let (p, k) = prime_power(q)?;
    Ok(Arc::new(make_field_ctx(p, k)?))
}

fn resolve_family(q: u32, family: Option<Family>) -> Result<Family, CliError> {
    let family = family.unwrap_or_else(|| Family::for_q(q));
    if q % 4 != family.residue() {
        return Err(CliError::Usage(format!(
            "family {family} needs q ≡ {} (mod 4), got q = {q}",
            family.residue()
        )));
    }
    Ok(family)
}

pub fn quadric_for(ctx: Arc<FieldCtx>, family: Family) -> Quadric {
    Quadric::new(QuadricModel::new(ctx, family.model()))
}

/// Build the m-ovoid of `family` on `action`'s quadric.
pub fn construct(
    action: &GroupAction,
    family: Family,
    a: Option<usize>,
) -> Result<Construction, CliError> {
    let ctx = action.quadric().ctx();
    match family {
        Family::QMinus1 => {
            let params = match a {
                None => SplitParams::select(ctx)?,
                Some(i) if i < ctx.q() as usize => SplitParams::with_a(ctx, ctx.from_index(i))?,
                Some(i) => return Err(CliError::Usage(format!("--a {i} is not an element of GF({})", ctx.q()))),
            };
            Ok(build_movoid_split(action, &params)?)
        }
        Family::QPlus1 => {
            if a.is_some() {
                return Err(CliError::Usage("--a only applies to the qminus1 family".into()));
            }
            Ok(build_movoid_trace(action)?)
        }
    }
}

fn coords_str(c: &Coords) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.index().to_string()).collect();
    format!("({})", parts.join(","))
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn report_text(report: &Report) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let tag = match (c.passed, c.gated) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "INFO",
        };
        let _ = writeln!(s, "{tag} {}: observed {} expected {}", c.name, c.observed, c.expected);
        for w in c.witnesses.iter().take(3) {
            let _ = writeln!(s, "     witness {}", serde_json::to_string(w).expect("witness json"));
        }
    }
    let _ = writeln!(s, "verdict: {:?}", report.verdict);
    s
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
}

/// Run one command, writing human or JSON output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Construct { q, family, a, out: path } => {
            let family = resolve_family(*q, *family)?;
            let ctx = field(*q)?;
            let quadric = quadric_for(ctx.clone(), family);
            let action = GroupAction::new(&quadric)?;
            let c = construct(&action, family, *a)?;
            let manifest = Manifest::of(&ctx, &c);
            if let Some(path) = path {
                write_file(path, &PointSetFile::new(&quadric, &c.set, Some(manifest.clone())).to_json())?;
            }
            if cli.json {
                emit(out, &format!("{}\n", serde_json::to_string_pretty(&manifest).expect("json")))?;
            } else {
                let mut s = format!("q = {q}, family {family}, m = {}\n", c.set.m);
                for (name, size) in c.part_sizes() {
                    let _ = writeln!(s, "  {name:<14} {size}");
                }
                let _ = writeln!(s, "|M| = {}", c.set.len());
                emit(out, &s)?;
            }
            Ok(Outcome::Pass)
        }
        Command::Verify { file, sections, out: path } => {
            let text = std::fs::read_to_string(file)
                .map_err(|source| CliError::Io { path: file.clone(), source })?;
            let psf = PointSetFile::from_json(&text)?;
            let ctx = psf.field_ctx()?;
            let family = match &psf.manifest {
                Some(m) => m.family,
                None => resolve_family(ctx.q(), None)?,
            };
            let quadric = quadric_for(ctx, family);
            let set = psf.to_point_set(&quadric)?;
            let action = GroupAction::new(&quadric)?;
            let lines = quadric.lines();
            let report =
                verify::verify_set(&action, &lines, &set, family, VerifyOptions { sections: *sections });
            if let Some(path) = path {
                write_file(path, &report.to_json())?;
            }
            emit(out, &if cli.json { format!("{}\n", report.to_json()) } else { report_text(&report) })?;
            Ok(Outcome::of(report.passed()))
        }
        Command::Census { q, family } => {
            let family = resolve_family(*q, *family)?;
            let quadric = quadric_for(field(*q)?, family);
            let action = GroupAction::new(&quadric)?;
            let census = action.census();
            let rows: Vec<serde_json::Value> = census
                .iter()
                .map(|o| {
                    let p = quadric.point(o.representative);
                    let stab = action.stabilizer_order(p).expect("on quadric");
                    serde_json::json!({
                        "length": o.len(),
                        "stabilizer": stab,
                        "class": OrbitClass::of_len(quadric.q(), o.len()),
                        "representative": p.coords().iter().map(|x| x.index()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let total: usize = census.iter().map(|o| o.len()).sum();
            if cli.json {
                let v = serde_json::json!({ "q": q, "family": family, "orbits": rows, "points": total });
                emit(out, &format!("{}\n", serde_json::to_string_pretty(&v).expect("json")))?;
            } else {
                let mut s = format!("{:>4} {:>7} {:>5} {:<6} representative\n", "#", "length", "stab", "class");
                for (i, (o, r)) in census.iter().zip(&rows).enumerate() {
                    let class = r["class"].as_str().unwrap_or("");
                    let _ = writeln!(
                        s,
                        "{:>4} {:>7} {:>5} {:<6} {}",
                        i,
                        o.len(),
                        r["stabilizer"],
                        class,
                        coords_str(quadric.point(o.representative).coords())
                    );
                }
                let _ = writeln!(s, "{} orbits, {} points", census.len(), total);
                emit(out, &s)?;
            }
            Ok(Outcome::Pass)
        }
        Command::Sections { q, family, a } => {
            let family = resolve_family(*q, *family)?;
            let quadric = quadric_for(field(*q)?, family);
            let action = GroupAction::new(&quadric)?;
            let c = construct(&action, family, *a)?;
            let report = verify::section_spectrum(&quadric, &c.set, family);
            emit(out, &if cli.json { format!("{}\n", report.to_json()) } else { report_text(&report) })?;
            Ok(Outcome::of(report.passed()))
        }
        Command::Selftest { q, sections } => {
            let mut all = true;
            for &q in q {
                let report = selftest(q, *sections)?;
                all &= report.passed();
                let text = if cli.json {
                    format!("{}\n", report.to_json())
                } else {
                    format!("== q = {q}\n{}", report_text(&report))
                };
                emit(out, &text)?;
            }
            Ok(Outcome::of(all))
        }
    }
}

/// The invariant suite for one q.
pub fn selftest(q: u32, sections: bool) -> Result<Report, CliError> {
    let family = resolve_family(q, None)?;
    let ctx = field(q)?;
    let quadric = quadric_for(ctx.clone(), family);
    let action = GroupAction::new(&quadric)?;
    let c = construct(&action, family, None)?;
    let lines = quadric.lines();
    let mut report = verify::verify_set(&action, &lines, &c.set, family, VerifyOptions { sections });
    report.merge(verify::check_set_stabilizer(&action, &c.set));
    if family == Family::QMinus1 {
        report.merge(verify::check_census(&action));
        report.merge(verify::check_stabilizer_criterion(&action));
        // every admissible a gives an m-ovoid as well
        for a in admissible_a(&ctx).into_iter().skip(1) {
            let other = build_movoid_split(&action, &SplitParams::with_a(&ctx, a)?)?;
            let mut r = verify::check_m_ovoid(&quadric, &lines, &other.set);
            for check in &mut r.checks {
                check.name = format!("{}[a={}]", check.name, a.index());
            }
            report.merge(r);
        }
    } else {
        let t = TraceParams::new(&ctx)?;
        let bad: Vec<Witness> = ctx
            .elements2()
            .filter(|&z| {
                let (l, r) = w_condition_equiv(&ctx, &t, z);
                l != r
            })
            .map(|z| Witness::Point { id: ctx.index2(z) as u32, note: "z (by GF(q^2) index)".into() })
            .collect();
        report.merge(Report::of(vec![Check::new(
            "w_condition_equivalence",
            json!({ "q": q }),
            json!(bad.len()),
            json!(0),
            bad,
        )]));
    }
    let four = ctx.from_int(4);
    let bad: Vec<Witness> = ctx
        .elements()
        .filter(|&c| ctx.mul(c, c) != four && ctx.quad_char_sum(c) != -1)
        .map(|c| Witness::Point { id: c.index() as u32, note: format!("sum = {}", ctx.quad_char_sum(c)) })
        .collect();
    report.merge(Report::of(vec![Check::new("quad_char_sum", json!({ "q": q }), json!(bad.len()), json!(0), bad)]));
    Ok(report)
}
