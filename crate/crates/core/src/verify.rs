//! The property grid: every identity of every module, on every parameter of
//! every small ground field.

use std::fmt;

use rayon::prelude::*;

use crate::arith::{self, Nat};
use crate::check::Check;
use crate::congruence::{congruence_report, lemma34_check};
use crate::counting::{a_level0, a_total, check_prop64, CountQuery};
use crate::cyclic::enumerate_by_predicate;
use crate::error::Result;
use crate::lifting::{lift_criterion_closed, lift_exists_brute, remark_checks, round_trip, witness_checks};
use crate::limits::Limits;
use crate::reps::{reduce, reduction_checks, AdicCuspidal, EndoclassRecord, FieldContext, GroundData, Level, ModCuspidal};

/// Families of checks, numbered as in the acceptance suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `t ≤ c`, equality iff `w = 1`; enumeration equals closed form.
    CongruenceBound = 1,
    /// `t·w` by the `v(w)` dichotomy.
    CongruenceExact = 2,
    /// `T ≤ C`, equality iff `w = 1`.
    NormalizedBound = 3,
    /// Lifting criterion against the witness search.
    Lifting = 4,
    /// `a(D, Θ, w) = y1(q(Θ), n(Θ), w)`, at level zero and per endoclass.
    LevelZeroCount = 5,
    /// `σ_D` surjective with Frobenius-orbit fibers.
    SigmaCorrespondence = 6,
    /// Totals independent of `(m, d)`.
    FormIndependence = 7,
    /// Structural lemmas on every constructed parameter.
    Structural = 8,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::CongruenceBound,
        Family::CongruenceExact,
        Family::NormalizedBound,
        Family::Lifting,
        Family::LevelZeroCount,
        Family::SigmaCorrespondence,
        Family::FormIndependence,
        Family::Structural,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::CongruenceBound => "congruence bound t <= c",
            Family::CongruenceExact => "exact value of t*w",
            Family::NormalizedBound => "normalized bound T <= C",
            Family::Lifting => "lifting criterion vs witness search",
            Family::LevelZeroCount => "a-count equals y1",
            Family::SigmaCorrespondence => "sigma_D correspondence",
            Family::FormIndependence => "a-totals independent of (m, d)",
            Family::Structural => "structural invariants",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub q_max: Nat,
    pub n_max: u32,
    pub ells: Vec<Nat>,
    /// Nonzero endoclasses summed alongside the zero one for the totals.
    pub endoclasses: Vec<EndoclassRecord>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            q_max: 5,
            n_max: 6,
            ells: vec![2, 3, 5, 7],
            endoclasses: synthetic_endoclasses(),
        }
    }
}

/// Two nonzero records: a ramified one of level 1/2 and an unramified one
/// of level 1.
pub fn synthetic_endoclasses() -> Vec<EndoclassRecord> {
    vec![
        EndoclassRecord::new(2, 1, Level::new(1, 2)).expect("valid record"),
        EndoclassRecord::new(2, 2, Level::new(1, 1)).expect("valid record"),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub family: u8,
    pub at: String,
    pub check: String,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} :: {} :: {}", self.family, self.at, self.check, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FamilyTally {
    pub run: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub points: usize,
    /// Indexed by family number minus one.
    pub tallies: [FamilyTally; 8],
    pub failures: Vec<Failure>,
    /// Locations where "`t` prime to `ℓ`" and "`ℓ ∤ w`" select different
    /// branches of the `t·w` formula.
    pub branch_disagreements: Vec<String>,
    pub brute_force_skipped: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn family_passed(&self, family: Family) -> bool {
        self.tallies[family.number() as usize - 1].failed == 0
    }

    fn merge(&mut self, other: Collector) {
        for (family, passed) in other.outcomes {
            let t = &mut self.tallies[family.number() as usize - 1];
            t.run += 1;
            if !passed {
                t.failed += 1;
            }
        }
        self.failures.extend(other.failures);
        self.branch_disagreements.extend(other.disagreements);
        self.brute_force_skipped += other.skipped;
    }
}

#[derive(Default)]
struct Collector {
    outcomes: Vec<(Family, bool)>,
    failures: Vec<Failure>,
    disagreements: Vec<String>,
    skipped: usize,
}

impl Collector {
    fn record(&mut self, family: Family, at: &str, check: &Check) {
        self.outcomes.push((family, check.passed));
        if !check.passed {
            self.failures.push(Failure {
                family: family.number(),
                at: at.to_string(),
                check: check.name.to_string(),
                detail: check.detail.clone(),
            });
        }
    }

    fn test(&mut self, family: Family, at: &str, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.record(family, at, &Check::new(name, passed, detail));
    }

    /// Records an error as a failed check; returns the value otherwise.
    fn guard<T>(&mut self, family: Family, at: &str, name: &'static str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.test(family, at, name, false, e.to_string());
                None
            }
        }
    }
}

fn adic_point(c: &mut Collector, ctx: &FieldContext, x_exp: Nat, limits: &Limits, at: &str) {
    let at = format!("{at} x={x_exp}");
    let Some(rho) = c.guard(Family::Structural, &at, "construct ℓ-adic parameter", AdicCuspidal::from_exponent(*ctx, x_exp)) else {
        return;
    };
    for ch in rho.structural_checks() {
        c.record(Family::Structural, &at, &ch);
    }
    if let Some(red) = c.guard(Family::Structural, &at, "reduction mod ℓ", reduce(&rho, limits)) {
        if let Some(checks) = c.guard(Family::Structural, &at, "reduction identities", reduction_checks(&rho, &red)) {
            for ch in checks {
                c.record(Family::Structural, &at, &ch);
            }
        }
        for ch in red.sigma.structural_checks() {
            c.record(Family::Structural, &at, &ch);
        }
    }
    if let Some(Some(ch)) = c.guard(Family::Structural, &at, "order of |k_1| mod ℓ", lemma34_check(&rho)) {
        c.record(Family::Structural, &at, &ch);
    }
    let Some(rep) = c.guard(Family::CongruenceBound, &at, "t by enumeration and closed form", congruence_report(&rho, limits)) else {
        return;
    };
    if rep.brute_force_skipped {
        c.skipped += 1;
    }
    let detail = format!("t={} c={} w={}", rep.t, rep.c, rep.w);
    c.test(Family::CongruenceBound, &at, "t <= c, equality iff w = 1", rep.thm12_holds, detail);
    if let Some(t13) = rep.thm13 {
        c.test(
            Family::CongruenceExact,
            &at,
            "t·w by the v(w) dichotomy",
            t13.holds,
            format!("t={} w={} c={} case={} t·w={} expected={}", t13.t, t13.w, t13.c, t13.case.as_str(), t13.t * t13.w, t13.expected),
        );
        if !t13.paper_condition_agrees {
            c.disagreements.push(format!("{at} t={} w={} c={}", t13.t, t13.w, t13.c));
        }
    }
    c.test(
        Family::NormalizedBound,
        &at,
        "T <= C, equality iff w = 1",
        rep.prop35_holds,
        format!("T={} C={} w={}", rep.big_t, rep.big_c, rep.w),
    );
}

fn modular_point(c: &mut Collector, sigma: &ModCuspidal, limits: &Limits, at: &str) {
    let at = format!("{at} y={}", sigma.y().exponent());
    for ch in sigma.structural_checks() {
        c.record(Family::Structural, &at, &ch);
    }
    if let Some(rem) = c.guard(Family::Lifting, &at, "restated lifting conditions", remark_checks(sigma)) {
        if let Some(div) = rem.eps_divides_s {
            let inv = sigma.invariants();
            c.test(Family::Structural, &at, "ε | s", div, format!("ε={} s={}", inv.epsilon, inv.s));
        }
        if rem.applicable {
            c.test(Family::Lifting, &at, "valuation restatements agree with the criterion", rem.agrees(), format!("{rem:?}"));
        }
    }
    for a in 1..=sigma.ctx().ambient_degree() as Nat {
        let Some((closed, _)) = c.guard(Family::Lifting, &at, "closed lifting criterion", lift_criterion_closed(sigma, a)) else {
            continue;
        };
        let Some(witness) = c.guard(Family::Lifting, &at, "witness search", lift_exists_brute(sigma, a, limits)) else {
            continue;
        };
        c.test(
            Family::Lifting,
            &at,
            "criterion equals witness existence",
            closed == witness.is_some(),
            format!("a={a} closed={closed} witness={:?}", witness.map(|w| w.exponent())),
        );
        if let Some(checks) = c.guard(Family::Lifting, &at, "witness identities", witness_checks(sigma, a, limits)) {
            for ch in checks {
                c.record(Family::Lifting, &at, &ch);
            }
        }
        if let Some(x) = witness {
            if let Some(ch) = c.guard(Family::Lifting, &at, "witness round trip", round_trip(sigma, a, &x, limits)) {
                c.record(Family::Lifting, &at, &ch);
            }
        }
    }
}

fn form_point(ground: GroundData, m: u32, d: u32, limits: &Limits) -> Collector {
    let mut c = Collector::default();
    let at = format!("q={} ℓ={} m={m} d={d}", ground.q(), ground.ell());
    let Some(ctx) = c.guard(Family::Structural, &at, "level-zero context", FieldContext::level_zero(ground, m, d)) else {
        return c;
    };
    let m_prime = ctx.m_prime();
    let xs = enumerate_by_predicate(ctx.ambient(), ctx.q_dprime(), limits, |x| {
        x.degree_over(ctx.q_dprime()).is_ok_and(|deg| deg == m_prime)
    });
    if let Some(xs) = c.guard(Family::Structural, &at, "enumerate X", xs) {
        for x in xs {
            adic_point(&mut c, &ctx, x.exponent(), limits, &at);
        }
    }
    let ys = enumerate_by_predicate(ctx.ambient(), ctx.q_dprime(), limits, |y| {
        y.is_l_regular(ground.ell())
            && ModCuspidal::raw_invariants(&ctx, y).is_ok_and(|inv| ModCuspidal::closed_validity(&ctx, &inv))
    });
    if let Some(ys) = c.guard(Family::Structural, &at, "enumerate ℓ-modular parameters", ys) {
        for y in ys {
            if let Some(sigma) = c.guard(Family::Structural, &at, "construct ℓ-modular parameter", ModCuspidal::new(ctx, y, limits)) {
                modular_point(&mut c, &sigma, limits, &at);
            }
        }
    }
    let n = (m * d) as Nat;
    let ws = arith::divisors(n).unwrap_or_default();
    for w in ws {
        let at = format!("{at} w={w}");
        if let Some(a) = c.guard(Family::LevelZeroCount, &at, "a(D, 0, w) = y1(q, md, w)", a_level0(&ground, m, d, w, limits)) {
            c.test(Family::LevelZeroCount, &at, "a(D, 0, w) = y1(q, md, w)", true, format!("a={a}"));
        }
        if let Some(rep) = c.guard(Family::SigmaCorrespondence, &at, "σ_D correspondence", check_prop64(&ground, m, d, w, limits)) {
            for ch in rep.checks {
                c.record(Family::SigmaCorrespondence, &at, &ch);
            }
        }
    }
    c
}

fn total_point(ground: GroundData, n: u32, w: Nat, endos: &[EndoclassRecord], limits: &Limits) -> Collector {
    let mut c = Collector::default();
    let at = format!("q={} ℓ={} n={n} w={w}", ground.q(), ground.ell());
    let query = CountQuery::all_pairs(n as Nat).and_then(|pairs| {
        let mut list = vec![EndoclassRecord::zero()];
        list.extend_from_slice(endos);
        CountQuery::new(ground, n as Nat, w, pairs, list, None)
    });
    if let Some(query) = c.guard(Family::FormIndependence, &at, "count query", query) {
        if let Some(table) = c.guard(Family::FormIndependence, &at, "a-totals agree across (m, d)", a_total(&query, limits)) {
            let totals: Vec<String> = table
                .rows
                .iter()
                .map(|r| format!("({},{})={}/{:?}", r.m, r.d, r.total, r.weighted_total))
                .collect();
            c.test(Family::FormIndependence, &at, "a-totals agree across (m, d)", table.equal, totals.join(" "));
            c.test(
                Family::LevelZeroCount,
                &at,
                "a(D, Θ, w) = y1(q(Θ), n(Θ), w) term by term",
                table.counts_agree,
                totals.join(" "),
            );
        }
    }
    c
}

enum Task {
    Form(GroundData, u32, u32),
    Total(GroundData, u32, Nat),
}

/// Ground data `(q, ℓ)` of the grid: prime powers `q ≤ q_max` and primes
/// `ℓ` of the list not dividing `q`.
pub fn grounds(spec: &GridSpec) -> Vec<GroundData> {
    let mut out = Vec::new();
    for q in 2..=spec.q_max {
        if !matches!(arith::is_prime_power(q), Ok(Some(_))) {
            continue;
        }
        for &ell in &spec.ells {
            if let Ok(g) = GroundData::new(q, ell) {
                out.push(g);
            }
        }
    }
    out
}

/// Runs the grid. Points are processed in parallel; the report is assembled
/// in grid order, so it does not depend on scheduling.
pub fn run(spec: &GridSpec, limits: &Limits) -> VerifyReport {
    let mut tasks = Vec::new();
    for g in grounds(spec) {
        for n in 1..=spec.n_max {
            for m in 1..=n {
                if n % m == 0 {
                    tasks.push(Task::Form(g, m, n / m));
                }
            }
            for w in arith::divisors(n as Nat).unwrap_or_default() {
                tasks.push(Task::Total(g, n, w));
            }
        }
    }
    let results: Vec<Collector> = tasks
        .par_iter()
        .map(|t| match *t {
            Task::Form(g, m, d) => form_point(g, m, d, limits),
            Task::Total(g, n, w) => total_point(g, n, w, &spec.endoclasses, limits),
        })
        .collect();
    let mut report = VerifyReport {
        points: tasks.iter().filter(|t| matches!(t, Task::Form(..))).count(),
        ..Default::default()
    };
    for r in results {
        report.merge(r);
    }
    report
}

/// Runs only the form-independent totals for `n ≤ n_max`.
pub fn run_totals(spec: &GridSpec, limits: &Limits) -> VerifyReport {
    let mut tasks = Vec::new();
    for g in grounds(spec) {
        for n in 1..=spec.n_max {
            for w in arith::divisors(n as Nat).unwrap_or_default() {
                tasks.push((g, n, w));
            }
        }
    }
    let results: Vec<Collector> = tasks
        .par_iter()
        .map(|&(g, n, w)| total_point(g, n, w, &spec.endoclasses, limits))
        .collect();
    let mut report = VerifyReport::default();
    for r in results {
        report.merge(r);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_with_ell_dividing_q_minus_one_passes() {
        let spec = GridSpec {
            q_max: 5,
            n_max: 3,
            ells: vec![2, 3],
            endoclasses: synthetic_endoclasses(),
        };
        // keep (q, ℓ) with ℓ | q - 1 and q ≡ 1 mod 4 when ℓ = 2
        let limits = Limits::default();
        let mut report = VerifyReport::default();
        for g in grounds(&spec) {
            if (g.q() - 1) % g.ell() != 0 || (g.ell() == 2 && g.q() % 4 != 1) {
                continue;
            }
            for n in 1..=spec.n_max {
                for m in arith::divisors(n as Nat).unwrap() {
                    report.merge(form_point(g, m as u32, n / m as u32, &limits));
                }
                for w in arith::divisors(n as Nat).unwrap() {
                    report.merge(total_point(g, n, w, &spec.endoclasses, &limits));
                }
            }
        }
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.tallies.iter().all(|t| t.run > 0));
    }

    #[test]
    fn w_one_mismatch_is_reported() {
        let spec = GridSpec {
            q_max: 2,
            n_max: 1,
            ells: vec![3],
            endoclasses: vec![],
        };
        let r = run(&spec, &Limits::default());
        assert!(!r.passed());
        assert!(r.failures.iter().all(|f| matches!(f.family, 5 | 6) && f.at.ends_with("w=1")));
        assert!(r.family_passed(Family::FormIndependence));
        assert!(r.family_passed(Family::Structural));
    }
}
