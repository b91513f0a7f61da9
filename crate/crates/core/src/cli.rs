//! Command-line front end: argument parsing, JSON reports, endoclass files.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::arith::Nat;
use crate::check::Check;
use crate::congruence::{congruence_report, lemma34_check};
use crate::counting::{a_total, CountQuery, TotalTable};
use crate::error::{invalid, Error, Result};
use crate::lifting::{lift_criterion, remark_checks, witness_checks};
use crate::limits::Limits;
use crate::reps::{
    reduce, reduction_checks, AdicCuspidal, EndoclassRecord, FieldContext, GroundData, InnerForm, Level,
    ModCuspidal,
};
use crate::verify::{self, Family, GridSpec, VerifyReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest integer emitted as a JSON number; larger ones become strings.
const JSON_SAFE_MAX: Nat = (1 << 53) - 1;

#[derive(Debug, Parser)]
#[command(name = "cuspcount", version, about = "Invariants and counting formulas for cuspidal parameters")]
pub struct Cli {
    /// Largest ambient group order any enumeration may walk (default: $CUSPCOUNT_CAP or 10^7).
    #[arg(long, global = true)]
    pub cap: Option<Nat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of the ℓ-adic parameter x, its reduction, and the congruence counts.
    Invariants(InvariantsArgs),
    /// Whether an ℓ-modular parameter admits an a-lift.
    Lift(LiftArgs),
    /// a-values per inner form and endoclass.
    Count(CountArgs),
    /// Runs every property over a grid of small parameters.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FormArgs {
    #[arg(long)]
    pub q: Nat,
    #[arg(long)]
    pub ell: Nat,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub d: u32,
    /// Endoclass as `deg,res_deg,num/den`.
    #[arg(long)]
    pub endo: Option<String>,
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub form: FormArgs,
    #[arg(long, conflicts_with = "order", required_unless_present = "order")]
    pub exponent: Option<Nat>,
    /// Picks the minimal exponent of this order.
    #[arg(long)]
    pub order: Option<Nat>,
    /// Degree of the field the exponent refers to; must divide m'd'.
    #[arg(long)]
    pub ambient_degree: Option<u32>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[command(flatten)]
    pub form: FormArgs,
    #[arg(long)]
    pub y_exponent: Nat,
    #[arg(long)]
    pub a: Nat,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub q: Nat,
    #[arg(long)]
    pub ell: Nat,
    #[arg(long)]
    pub n: Nat,
    #[arg(long)]
    pub w: Nat,
    /// Comma-separated `m:d` pairs; all divisor pairs of n by default.
    #[arg(long)]
    pub pairs: Option<String>,
    /// JSON array of `{deg, res_deg, level_num, level_den}`; the zero endoclass alone by default.
    #[arg(long)]
    pub endofile: Option<PathBuf>,
    /// Level bound `num/den`; unbounded by default.
    #[arg(long)]
    pub j: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 5)]
    pub q_max: Nat,
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    #[arg(long, default_value = "2,3,5,7", value_delimiter = ',')]
    pub ell_list: Vec<Nat>,
}

/// JSON output and exit status of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

pub fn num(x: Nat) -> Value {
    if x <= JSON_SAFE_MAX {
        Value::from(x as u64)
    } else {
        Value::String(x.to_string())
    }
}

pub fn ratio(num_: u64, den: u64) -> Value {
    json!({ "num": num(num_ as Nat), "den": num(den as Nat) })
}

fn level(l: Level) -> Value {
    ratio(*l.numer(), *l.denom())
}

fn endo_json(e: &EndoclassRecord) -> Value {
    json!({ "deg": e.deg(), "res_deg": e.res_deg(), "level": level(e.level()) })
}

fn checks_json(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect(),
    )
}

pub fn error_json(e: &Error) -> Value {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() }, "version": VERSION })
}

pub fn parse_level(s: &str) -> Result<Level> {
    let bad = || invalid(format!("level {s:?} is not of the form num/den"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: u64 = n.parse().map_err(|_| bad())?;
    let d: u64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(invalid(format!("level {s:?} has zero denominator")));
    }
    Ok(Level::new(n, d))
}

pub fn parse_endo(s: &str) -> Result<EndoclassRecord> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [g, f, l] = parts[..] else {
        return Err(invalid(format!("endoclass {s:?} is not of the form deg,res_deg,num/den")));
    };
    let g: u32 = g.parse().map_err(|_| invalid(format!("bad endoclass degree {g:?}")))?;
    let f: u32 = f.parse().map_err(|_| invalid(format!("bad residue degree {f:?}")))?;
    EndoclassRecord::new(g, f, parse_level(l)?)
}

pub fn parse_pairs(s: &str) -> Result<Vec<(u32, u32)>> {
    s.split(',')
        .map(|p| {
            let (m, d) = p
                .trim()
                .split_once(':')
                .ok_or_else(|| invalid(format!("pair {p:?} is not of the form m:d")))?;
            let m = m.parse().map_err(|_| invalid(format!("bad m in {p:?}")))?;
            let d = d.parse().map_err(|_| invalid(format!("bad d in {p:?}")))?;
            Ok((m, d))
        })
        .collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EndoEntry {
    deg: u32,
    res_deg: u32,
    level_num: u64,
    level_den: u64,
}

/// Reads an endoclass list; levels are reduced to lowest terms.
pub fn parse_endofile(text: &str) -> Result<Vec<EndoclassRecord>> {
    let entries: Vec<EndoEntry> =
        serde_json::from_str(text).map_err(|e| invalid(format!("endoclass file: {e}")))?;
    entries
        .into_iter()
        .map(|e| {
            if e.level_den == 0 {
                return Err(invalid("endoclass file: level_den must be >= 1"));
            }
            EndoclassRecord::new(e.deg, e.res_deg, Level::new(e.level_num, e.level_den))
        })
        .collect()
}

pub fn read_endofile(path: &Path) -> Result<Vec<EndoclassRecord>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_endofile(&text)
}

fn context(form: &FormArgs) -> Result<FieldContext> {
    let ground = GroundData::new(form.q, form.ell)?;
    let endo = match &form.endo {
        Some(s) => parse_endo(s)?,
        None => EndoclassRecord::zero(),
    };
    FieldContext::new(ground, InnerForm::new(form.m, form.d)?, endo)
}

fn form_echo(form: &FormArgs, ctx: &FieldContext) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("q".into(), num(form.q));
    m.insert("ell".into(), num(form.ell));
    m.insert("m".into(), json!(form.m));
    m.insert("d".into(), json!(form.d));
    m.insert("endoclass".into(), endo_json(ctx.endo()));
    m.insert("m_prime".into(), json!(ctx.m_prime()));
    m.insert("d_prime".into(), json!(ctx.d_prime()));
    m.insert("ambient_degree".into(), json!(ctx.ambient_degree()));
    m.insert("ambient_modulus".into(), num(ctx.ambient().modulus()));
    m
}

pub fn cmd_invariants(args: &InvariantsArgs, limits: &Limits) -> Result<Outcome> {
    let ctx = context(&args.form)?;
    let native = ctx.ambient_degree();
    let source = match args.ambient_degree {
        Some(deg) if deg == 0 || native % deg != 0 => {
            return Err(invalid(format!("ambient degree {deg} does not divide m'd' = {native}")))
        }
        Some(deg) => crate::cyclic::AmbientField::new(ctx.q_e(), deg)?,
        None => *ctx.ambient(),
    };
    let x = match (args.exponent, args.order) {
        (Some(e), _) => source.element(e)?,
        (None, Some(o)) => source.element_of_order(o)?,
        (None, None) => return Err(invalid("one of --exponent or --order is required")),
    };
    let x = x.embed(native)?;
    let rho = AdicCuspidal::new(ctx, x)?;
    let red = reduce(&rho, limits)?;
    let cong = congruence_report(&rho, limits)?;
    let adic = rho.invariants();
    let modi = red.sigma.invariants();

    let mut checks = rho.structural_checks();
    checks.extend(reduction_checks(&rho, &red)?);
    checks.extend(red.sigma.structural_checks());
    checks.extend(lemma34_check(&rho)?);
    checks.push(Check::new(
        "t <= c, equality iff w = 1",
        cong.thm12_holds,
        format!("t={} c={} w={}", cong.t, cong.c, cong.w),
    ));
    if let Some(t13) = &cong.thm13 {
        checks.push(Check::new(
            "t·w by the v(w) dichotomy",
            t13.holds,
            format!("t·w={} expected={}", t13.t * t13.w, t13.expected),
        ));
    }
    checks.push(Check::new(
        "T <= C, equality iff w = 1",
        cong.prop35_holds,
        format!("T={} C={}", cong.big_t, cong.big_c),
    ));

    let mut input = form_echo(&args.form, &ctx);
    input.insert("x_exponent".into(), num(x.exponent()));
    input.insert("x_order".into(), num(x.order()));
    let report = json!({
        "command": "invariants",
        "version": VERSION,
        "input": input,
        "invariants": {
            "s_adic": num(adic.s_adic),
            "n_adic": num(adic.n_adic),
            "f_rho": num(adic.f_rho),
            "deg_x": num(adic.deg_x),
            "y_exponent": num(red.sigma.y().exponent()),
            "deg_y": num(modi.deg_y),
            "k": num(modi.k),
            "s": num(modi.s),
            "n_mod": num(modi.n_mod),
            "epsilon": num(modi.epsilon),
            "a": num(red.a),
            "w": num(red.w),
            "t": num(cong.t),
            "c": num(cong.c),
            "T": num(cong.big_t),
            "C": num(cong.big_c),
        },
        "thm13_case": cong.thm13_case.as_str(),
        "checks": checks_json(&checks),
        "all_checks_passed": crate::check::all_passed(&checks),
        "flags": {
            "brute_force_skipped": cong.brute_force_skipped,
            "l_supercuspidal": red.is_l_supercuspidal(),
            "thm13_paper_condition_agrees": cong.thm13.map(|r| r.paper_condition_agrees),
        },
    });
    Ok(Outcome {
        report,
        exit_code: 0,
    })
}

pub fn cmd_lift(args: &LiftArgs, limits: &Limits) -> Result<Outcome> {
    let ctx = context(&args.form)?;
    let sigma = ModCuspidal::from_exponent(ctx, args.y_exponent, limits)?;
    let rep = lift_criterion(&sigma, args.a, limits)?;
    let rem = remark_checks(&sigma)?;
    let inv = sigma.invariants();
    let mut checks = sigma.structural_checks();
    if limits.allows(ctx.ambient().modulus()) {
        checks.extend(witness_checks(&sigma, args.a, limits)?);
    }
    if let Some(x) = &rep.witness {
        checks.push(crate::lifting::round_trip(&sigma, args.a, x, limits)?);
    }
    if rem.applicable {
        checks.push(Check::new(
            "valuation restatements agree with the criterion",
            rem.agrees(),
            format!("{:?}", rem.a_lifts),
        ));
    }
    let mut input = form_echo(&args.form, &ctx);
    input.insert("y_exponent".into(), num(args.y_exponent));
    input.insert("a".into(), num(args.a));
    let report = json!({
        "command": "lift",
        "version": VERSION,
        "input": input,
        "sigma": {
            "k": num(inv.k),
            "s": num(inv.s),
            "epsilon": num(inv.epsilon),
            "n_mod": num(inv.n_mod),
            "deg_y": num(inv.deg_y),
            "supercuspidal": sigma.is_supercuspidal(),
            "eps_divides_s": rem.eps_divides_s,
        },
        "exists": rep.exists_closed,
        "exists_brute": rep.exists_brute,
        "witness_exponent": rep.witness.map(|x| num(x.exponent())),
        "u": rep.u,
        "checks": checks_json(&checks),
        "all_checks_passed": crate::check::all_passed(&checks),
        "flags": { "brute_force_skipped": rep.exists_brute.is_none() },
    });
    Ok(Outcome {
        report,
        exit_code: 0,
    })
}

fn table_json(t: &TotalTable) -> Value {
    Value::Array(
        t.rows
            .iter()
            .map(|r| {
                let terms: Vec<Value> = r
                    .terms
                    .iter()
                    .map(|term| {
                        json!({
                            "endoclass": endo_json(&term.endo),
                            "included": term.included,
                            "y1": num(term.count.y1),
                            "weighted": term.count.weighted.map(num),
                            "agrees": term.count.agrees(),
                        })
                    })
                    .collect();
                json!({
                    "m": r.m,
                    "d": r.d,
                    "total": num(r.total),
                    "weighted_total": r.weighted_total.map(num),
                    "terms": terms,
                })
            })
            .collect(),
    )
}

pub fn cmd_count(args: &CountArgs, limits: &Limits) -> Result<Outcome> {
    let ground = GroundData::new(args.q, args.ell)?;
    let pairs = match &args.pairs {
        Some(s) => parse_pairs(s)?,
        None => CountQuery::all_pairs(args.n)?,
    };
    let endos = match &args.endofile {
        Some(p) => read_endofile(p)?,
        None => vec![EndoclassRecord::zero()],
    };
    let j = args.j.as_deref().map(parse_level).transpose()?;
    let query = CountQuery::new(ground, args.n, args.w, pairs, endos, j)?;
    let table = a_total(&query, limits)?;
    let report = json!({
        "command": "count",
        "version": VERSION,
        "input": {
            "q": num(args.q),
            "ell": num(args.ell),
            "n": num(args.n),
            "w": num(args.w),
            "pairs": query.divisor_pairs.iter().map(|&(m, d)| json!([m, d])).collect::<Vec<_>>(),
            "endoclasses": query.endoclasses.iter().map(endo_json).collect::<Vec<_>>(),
            "j": j.map(level),
        },
        "rows": table_json(&table),
        "equal": table.equal,
        "counts_agree": table.counts_agree,
    });
    Ok(Outcome {
        report,
        exit_code: 0,
    })
}

pub fn verify_json(spec: &GridSpec, r: &VerifyReport) -> Value {
    let families: Vec<Value> = Family::ALL
        .iter()
        .map(|&f| {
            let t = &r.tallies[f.number() as usize - 1];
            json!({ "family": f.number(), "label": f.label(), "run": t.run, "failed": t.failed })
        })
        .collect();
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|f| json!({ "family": f.family, "at": f.at, "check": f.check, "detail": f.detail }))
        .collect();
    json!({
        "command": "verify",
        "version": VERSION,
        "input": {
            "q_max": num(spec.q_max),
            "n_max": spec.n_max,
            "ell_list": spec.ells.iter().map(|&l| num(l)).collect::<Vec<_>>(),
        },
        "points": r.points,
        "families": families,
        "failures": failures,
        "branch_disagreements": r.branch_disagreements,
        "brute_force_skipped": r.brute_force_skipped,
        "passed": r.passed(),
    })
}

pub fn cmd_verify(args: &VerifyArgs, limits: &Limits) -> Result<Outcome> {
    if args.q_max < 2 || args.n_max < 1 || args.ell_list.is_empty() {
        return Err(invalid("verify needs q_max >= 2, n_max >= 1 and a nonempty ℓ list"));
    }
    if let Some(&l) = args.ell_list.iter().find(|&&l| !crate::arith::is_prime(l)) {
        return Err(invalid(format!("ℓ = {l} is not prime")));
    }
    let spec = GridSpec {
        q_max: args.q_max,
        n_max: args.n_max,
        ells: args.ell_list.clone(),
        ..GridSpec::default()
    };
    let r = verify::run(&spec, limits);
    Ok(Outcome {
        report: verify_json(&spec, &r),
        exit_code: if r.passed() { 0 } else { 1 },
    })
}

/// Human-readable summary of a verify report.
pub fn verify_summary(report: &Value) -> String {
    let mut out = String::new();
    if let Some(fams) = report["families"].as_array() {
        for f in fams {
            let status = if f["failed"] == 0 { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "{status} [{}] {}: {} checks, {} failed\n",
                f["family"], f["label"].as_str().unwrap_or(""), f["run"], f["failed"]
            ));
        }
    }
    out.push_str(&format!(
        "points: {}, branch disagreements: {}, passed: {}\n",
        report["points"],
        report["branch_disagreements"].as_array().map_or(0, Vec::len),
        report["passed"]
    ));
    out
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let limits = match cli.cap {
        Some(cap) => Limits::with_cap(cap),
        None => Limits::from_env()?,
    };
    match &cli.command {
        Command::Invariants(a) => cmd_invariants(a, &limits),
        Command::Lift(a) => cmd_lift(a, &limits),
        Command::Count(a) => cmd_count(a, &limits),
        Command::Verify(a) => cmd_verify(a, &limits),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
