//! Counting inertial classes with a prescribed `w`.
//!
//! `y1(q, n, w)` counts Frobenius orbits of ℓ-regular `y ∈ F_{q^{n/w}}^×`
//! with `ord(q^{deg y} mod ℓ) = w₀`, the ℓ'-part of `w`. The level-zero count
//! `Σ_{σ ∈ B} s(σ)/d` goes through the correspondence `y ↦ σ_D(y)` and must
//! reproduce it; with an endoclass the same count runs over `q^f` and `n/g`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::arith::{gcd, Nat};
use crate::check::Check;
use crate::cyclic::{enumerate_by_predicate, AmbientField, Element};
use crate::error::{consistency, invalid, Error, Result};
use crate::lifting::{lift_criterion, lift_criterion_closed};
use crate::limits::Limits;
use crate::reps::{EndoclassRecord, FieldContext, GroundData, InnerForm, Level, ModCuspidal};

type Exact = Ratio<Nat>;

fn integral(x: Exact, what: &str) -> Result<Nat> {
    if !x.is_integer() {
        return Err(consistency(format!("{what} = {x} is not an integer")));
    }
    Ok(x.to_integer())
}

fn quotient(n: Nat, w: Nat) -> Result<u32> {
    if w == 0 || n % w != 0 {
        return Err(invalid(format!("w = {w} does not divide n = {n}")));
    }
    u32::try_from(n / w).map_err(|_| invalid(format!("n/w = {} is too large", n / w)))
}

fn y_condition(ground: &GroundData, y: &Element, w0: Nat) -> Result<bool> {
    if !y.is_l_regular(ground.ell()) {
        return Ok(false);
    }
    let deg = y.degree_over(ground.q())? as Nat;
    Ok(ground.order_mod_ell(ground.q(), deg) == w0)
}

/// `F_{q^{n/w}}` together with the ℓ'-part of `w`.
fn y_frame(ground: &GroundData, n: Nat, w: Nat) -> Result<(AmbientField, Nat)> {
    let ambient = AmbientField::new(ground.q(), quotient(n, w)?)?;
    Ok((ambient, ground.ell_prime_part(w)?))
}

/// Canonical representatives of the `q`-Frobenius orbits in `Y_ℓ(q, n, w)`.
pub fn y_orbits(ground: &GroundData, n: Nat, w: Nat, limits: &Limits) -> Result<Vec<Element>> {
    let (ambient, w0) = y_frame(ground, n, w)?;
    let mut err = None;
    let reps = enumerate_by_predicate(&ambient, ground.q(), limits, |y| {
        y_condition(ground, y, w0).unwrap_or_else(|e| {
            err.get_or_insert(e);
            false
        })
    })?;
    err.map_or(Ok(reps), Err)
}

/// Number of `q`-Frobenius orbits of ℓ-regular elements of `F_{q^n}^×`,
/// with no condition on `ord(q^{deg y} mod ℓ)`.
pub fn regular_orbit_count(ground: &GroundData, n: u32, limits: &Limits) -> Result<Nat> {
    let ambient = AmbientField::new(ground.q(), n)?;
    let ell = ground.ell();
    Ok(enumerate_by_predicate(&ambient, ground.q(), limits, |y| y.is_l_regular(ell))?.len() as Nat)
}

/// Every element of `Y_ℓ(q, n, w)`, in ascending exponent order.
pub fn y_elements(ground: &GroundData, n: Nat, w: Nat, limits: &Limits) -> Result<Vec<Element>> {
    let (ambient, w0) = y_frame(ground, n, w)?;
    limits.check(ambient.modulus())?;
    let mut out = Vec::new();
    for e in 0..ambient.modulus() {
        let y = ambient.element(e)?;
        if y_condition(ground, &y, w0)? {
            out.push(y);
        }
    }
    Ok(out)
}

/// Number of `q`-Frobenius orbits in `Y_ℓ(q, n, w)`, checked against
/// `Σ_y 1/deg(y)`.
pub fn y1(ground: &GroundData, n: Nat, w: Nat, limits: &Limits) -> Result<Nat> {
    let orbits = y_orbits(ground, n, w, limits)?.len() as Nat;
    let mut weighted = Exact::from_integer(0);
    for y in y_elements(ground, n, w, limits)? {
        weighted += Exact::new(1, y.degree_over(ground.q())? as Nat);
    }
    if weighted != Exact::from_integer(orbits) {
        return Err(consistency(format!(
            "y1: {orbits} orbits but Σ 1/deg(y) = {weighted}"
        )));
    }
    Ok(orbits)
}

/// `B_ℓ(q, m, d, w)`: over every `u | m`, the ℓ-modular cuspidal parameters
/// of `GL_u(D)` with `k | w` that admit a `w/k`-lift. Ordered by `u`, then by
/// representative exponent.
pub fn enumerate_b(ground: &GroundData, m: u32, d: u32, w: Nat, limits: &Limits) -> Result<Vec<ModCuspidal>> {
    if w == 0 {
        return Err(invalid("w must be >= 1"));
    }
    let mut out = Vec::new();
    for u in crate::arith::divisors(m as Nat)? {
        let ctx = FieldContext::level_zero(*ground, u as u32, d)?;
        let mut err = None;
        let candidates = enumerate_by_predicate(ctx.ambient(), ctx.q_dprime(), limits, |y| {
            let keep = || -> Result<bool> {
                if !y.is_l_regular(ground.ell()) {
                    return Ok(false);
                }
                let inv = ModCuspidal::raw_invariants(&ctx, y)?;
                Ok(ModCuspidal::closed_validity(&ctx, &inv) && w % inv.k == 0)
            };
            keep().unwrap_or_else(|e| {
                err.get_or_insert(e);
                false
            })
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        for y in candidates {
            let sigma = ModCuspidal::new(ctx, y, limits)?;
            let a = w / sigma.invariants().k;
            if lift_criterion(&sigma, a, limits)?.exists_closed {
                out.push(sigma);
            }
        }
    }
    Ok(out)
}

/// Where `σ_D` sends `y`: the form `GL_u(D)` and the canonical representative
/// of the image of `y` in `F_{q^{ud}}`, plus `(k(y), s(y))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaImage {
    pub u: u32,
    pub y: Element,
    pub k: Nat,
    pub s: Nat,
}

fn sigma_image(ground: &GroundData, m: u32, d: u32, w: Nat, y: &Element) -> Result<SigmaImage> {
    let n = (m as Nat) * (d as Nat);
    let (ambient, w0) = y_frame(ground, n, w)?;
    if y.ambient() != &ambient || !y_condition(ground, y, w0)? {
        return Err(invalid(format!("{y} is not in Y_ℓ(q={}, n={n}, w={w})", ground.q())));
    }
    let deg = y.degree_over(ground.q())?;
    let r = deg / gcd(deg as Nat, d as Nat) as u32;
    let s = (d / gcd(deg as Nat, d as Nat) as u32) as Nat;
    let k = w / gcd(w, s);
    let u = k * r as Nat;
    if (m as Nat) % u != 0 {
        return Err(Error::InconsistentQuery(format!(
            "deg σ_D(y) = {u} does not divide m = {m}"
        )));
    }
    let u = u as u32;
    let image = y.restrict(deg)?.embed(u * d)?;
    Ok(SigmaImage {
        u,
        y: image.orbit_representative(ground.q().pow(d))?,
        k,
        s,
    })
}

/// The cuspidal parameter `σ_D(y)` of `GL_{k(y)r(y)}(D)`, with the degree
/// and support-size identities checked.
pub fn sigma_d(ground: &GroundData, m: u32, d: u32, w: Nat, y: &Element, limits: &Limits) -> Result<ModCuspidal> {
    let img = sigma_image(ground, m, d, w, y)?;
    build_sigma(ground, d, w, &img, limits)
}

fn build_sigma(ground: &GroundData, d: u32, w: Nat, img: &SigmaImage, limits: &Limits) -> Result<ModCuspidal> {
    let ctx = FieldContext::level_zero(*ground, img.u, d)?;
    let sigma = ModCuspidal::new(ctx, img.y, limits).map_err(|e| match e {
        Error::NotACuspidalParameter(msg) => consistency(format!("σ_D image is not cuspidal: {msg}")),
        other => other,
    })?;
    let inv = sigma.invariants();
    let u = img.u as Nat;
    if inv.k != img.k || inv.s != img.s || inv.k != gcd(w, u) || inv.m_dd * inv.k != u {
        return Err(consistency(format!(
            "σ_D({}) has k = {}, s = {}; expected k = {} = (w, {u}), s = {}",
            img.y, inv.k, inv.s, img.k, img.s
        )));
    }
    if !lift_criterion_closed(&sigma, w / inv.k)?.0 {
        return Err(consistency(format!("σ_D({}) has no {}-lift", img.y, w / inv.k)));
    }
    Ok(sigma)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop64Report {
    pub y_count: usize,
    pub fiber_count: usize,
    pub b_count: usize,
    pub checks: Vec<Check>,
}

/// Surjectivity of `σ_D` onto `B`, fibers equal to `x ↦ x^{q^d}` orbits, and
/// the degree identities on every `y`.
pub fn check_prop64(ground: &GroundData, m: u32, d: u32, w: Nat, limits: &Limits) -> Result<Prop64Report> {
    let n = (m as Nat) * (d as Nat);
    let ys = y_elements(ground, n, w, limits)?;
    let b: BTreeSet<(u32, Nat)> = enumerate_b(ground, m, d, w, limits)?
        .iter()
        .map(|s| (s.ctx().form().m, s.y().exponent()))
        .collect();

    let mut fibers: BTreeMap<(u32, Nat), Vec<Nat>> = BTreeMap::new();
    let mut images = BTreeMap::new();
    for y in &ys {
        let img = sigma_image(ground, m, d, w, y)?;
        let key = (img.u, img.y.exponent());
        fibers.entry(key).or_default().push(y.exponent());
        images.entry(key).or_insert(img);
    }
    let mut identities_ok = true;
    let mut identity_detail = String::from("all images");
    for img in images.values() {
        if let Err(e) = build_sigma(ground, d, w, img, limits) {
            if identities_ok {
                identity_detail = e.to_string();
            }
            identities_ok = false;
        }
    }

    let image: BTreeSet<(u32, Nat)> = fibers.keys().copied().collect();
    let onto = image == b;

    // x ↦ x^{q^d} acts on F_{q^{n/w}} as the Frobenius of its subfield of
    // degree (d, n/w)
    let mut fibers_ok = true;
    let mut fiber_detail = format!("{} fibers", fibers.len());
    if let Some(y) = ys.first() {
        let sub = y.ambient().orbit_card_for_power(d)?;
        for members in fibers.values() {
            let orbit: Vec<Nat> = y
                .ambient()
                .element(members[0])?
                .orbit(sub)?
                .iter()
                .map(Element::exponent)
                .collect();
            if orbit != *members {
                fibers_ok = false;
                fiber_detail = format!("fiber {members:?} differs from orbit {orbit:?}");
                break;
            }
        }
    }

    Ok(Prop64Report {
        y_count: ys.len(),
        fiber_count: fibers.len(),
        b_count: b.len(),
        checks: vec![
            Check::new(
                "σ_D maps Y onto B",
                onto,
                format!("image {} classes, B {} classes", image.len(), b.len()),
            ),
            Check::new("fibers of σ_D are q^d-orbits", fibers_ok, fiber_detail),
            Check::new("deg σ = r(y)k(y), k(σ) = (w, deg σ)", identities_ok, identity_detail),
        ],
    })
}

/// `Σ_{σ ∈ B} s(σ)/d`, asserted integral.
pub fn weighted_b_count(ground: &GroundData, m: u32, d: u32, w: Nat, limits: &Limits) -> Result<Nat> {
    let mut total = Exact::from_integer(0);
    for sigma in enumerate_b(ground, m, d, w, limits)? {
        total += Exact::new(sigma.invariants().s, d as Nat);
    }
    integral(total, "Σ s(σ)/d")
}

/// `a_ℓ(D, 0, w) = Σ_{σ ∈ B} s(σ)/d`, which must equal `y1(q, md, w)`.
pub fn a_level0(ground: &GroundData, m: u32, d: u32, w: Nat, limits: &Limits) -> Result<Nat> {
    let n = (m as Nat) * (d as Nat);
    let expected = y1(ground, n, w, limits)?;
    let got = weighted_b_count(ground, m, d, w, limits)?;
    if got != expected {
        return Err(consistency(format!(
            "a(D, 0, w) = {got} but y1(q, {n}, {w}) = {expected} for m = {m}, d = {d}"
        )));
    }
    Ok(got)
}

/// `a_ℓ(D, Θ, w)` two ways: `y1(q^f, n/g, w)`, and the weighted count
/// `Σ s(σ)/d'` over the reduced context `(q^f, m', d')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndoCount {
    pub y1: Nat,
    /// `None` when the reduced ambient is over the cap.
    pub weighted: Option<Nat>,
}

impl EndoCount {
    pub fn agrees(&self) -> bool {
        self.weighted.is_none_or(|v| v == self.y1)
    }
}

/// Both counts for one endoclass; zero unless `deg Θ | n/w`.
pub fn a_endo(
    ground: &GroundData,
    m: u32,
    d: u32,
    endo: &EndoclassRecord,
    w: Nat,
    limits: &Limits,
) -> Result<EndoCount> {
    let n = (m as Nat) * (d as Nat);
    let n_over_w = quotient(n, w)? as Nat;
    if n_over_w % endo.deg() as Nat != 0 {
        return Ok(EndoCount {
            y1: 0,
            weighted: Some(0),
        });
    }
    let ctx = FieldContext::new(*ground, InnerForm::new(m, d)?, *endo)?;
    let reduced = GroundData::new(ctx.q_e(), ground.ell())?;
    let y1 = y1(&reduced, n / endo.deg() as Nat, w, limits)?;
    let weighted = if limits.allows(ctx.ambient().modulus()) {
        Some(weighted_b_count(&reduced, ctx.m_prime(), ctx.d_prime(), w, limits)?)
    } else {
        None
    };
    Ok(EndoCount { y1, weighted })
}

/// Input of the aggregated count: all `(m, d)` with `md = n` to compare, and
/// the endoclasses to sum over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountQuery {
    pub ground: GroundData,
    pub n: Nat,
    pub w: Nat,
    pub divisor_pairs: Vec<(u32, u32)>,
    pub endoclasses: Vec<EndoclassRecord>,
    /// `None` for no bound on the level.
    pub level_bound: Option<Level>,
}

impl CountQuery {
    pub fn new(
        ground: GroundData,
        n: Nat,
        w: Nat,
        divisor_pairs: Vec<(u32, u32)>,
        endoclasses: Vec<EndoclassRecord>,
        level_bound: Option<Level>,
    ) -> Result<Self> {
        quotient(n, w)?;
        if let Some(&(m, d)) = divisor_pairs.iter().find(|&&(m, d)| m as Nat * d as Nat != n) {
            return Err(invalid(format!("pair ({m}, {d}) does not multiply to n = {n}")));
        }
        Ok(CountQuery {
            ground,
            n,
            w,
            divisor_pairs,
            endoclasses,
            level_bound,
        })
    }

    /// Every `(m, d)` with `md = n`, `m` ascending.
    pub fn all_pairs(n: Nat) -> Result<Vec<(u32, u32)>> {
        let n32 = u32::try_from(n).map_err(|_| invalid(format!("n = {n} is too large")))?;
        Ok(crate::arith::divisors(n)?
            .into_iter()
            .map(|m| (m as u32, n32 / m as u32))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoTerm {
    pub endo: EndoclassRecord,
    /// Passed the level and degree filters.
    pub included: bool,
    pub count: EndoCount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalRow {
    pub m: u32,
    pub d: u32,
    pub terms: Vec<EndoTerm>,
    /// `Σ_Θ y1(q(Θ), n(Θ), w)`.
    pub total: Nat,
    /// `Σ_Θ Σ_σ s(σ)/d'`; `None` if some reduced ambient is over the cap.
    pub weighted_total: Option<Nat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalTable {
    pub rows: Vec<TotalRow>,
    /// Both kinds of totals are independent of `(m, d)`.
    pub equal: bool,
    /// Every term has `y1` equal to its weighted count.
    pub counts_agree: bool,
}

fn total_row(q: &CountQuery, m: u32, d: u32, limits: &Limits) -> Result<TotalRow> {
    let n_over_w = q.n / q.w;
    let mut terms = Vec::with_capacity(q.endoclasses.len());
    let mut total = 0;
    let mut weighted_total = Some(0);
    for endo in &q.endoclasses {
        let included = q.level_bound.is_none_or(|j| endo.level() <= j)
            && n_over_w % endo.deg() as Nat == 0;
        let count = if included {
            a_endo(&q.ground, m, d, endo, q.w, limits)?
        } else {
            EndoCount {
                y1: 0,
                weighted: Some(0),
            }
        };
        total += count.y1;
        weighted_total = weighted_total.zip(count.weighted).map(|(a, b)| a + b);
        terms.push(EndoTerm {
            endo: *endo,
            included,
            count,
        });
    }
    Ok(TotalRow {
        m,
        d,
        terms,
        total,
        weighted_total,
    })
}

/// `a_ℓ(D, j, w)` for every listed `(m, d)`, in ascending `m`. Totals that
/// depend on the pair are a consistency failure.
pub fn a_total(query: &CountQuery, limits: &Limits) -> Result<TotalTable> {
    let mut pairs = query.divisor_pairs.clone();
    pairs.sort();
    let rows: Vec<TotalRow> = pairs
        .par_iter()
        .map(|&(m, d)| total_row(query, m, d, limits))
        .collect::<Result<_>>()?;
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let weighted_differ = matches!((a.weighted_total, b.weighted_total), (Some(x), Some(y)) if x != y);
        if a.total != b.total || weighted_differ {
            return Err(consistency(format!(
                "a-total {} (weighted {:?}) for (m, d) = ({}, {}) but {} (weighted {:?}) for ({}, {})",
                a.total, a.weighted_total, a.m, a.d, b.total, b.weighted_total, b.m, b.d
            )));
        }
    }
    let counts_agree = rows.iter().all(|r| r.terms.iter().all(|t| t.count.agrees()));
    Ok(TotalTable {
        rows,
        equal: true,
        counts_agree,
    })
}
