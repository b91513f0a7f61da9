//! Existence of ℓ-adic lifts of ℓ-modular cuspidal parameters.
//!
//! An `a`-lift of `σ(y)` is an `x = y·z ∈ X`, `z` of ℓ-power order, with
//! `deg(x) = a·k·deg(y)`. The closed criterion asks for `a = ε·ℓ^u` with
//! `u ≤ v(s)`, `a | s` and `(s/a, k) = 1`; the brute-force side walks the
//! ℓ-Sylow subgroup of the ambient group.

use crate::arith::{self, gcd, Nat};
use crate::check::Check;
use crate::cyclic::Element;
use crate::error::{consistency, invalid, Result};
use crate::limits::Limits;
use crate::reps::{reduce, AdicCuspidal, ModCuspidal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftReport {
    pub a: Nat,
    pub exists_closed: bool,
    pub exists_brute: Option<bool>,
    pub witness: Option<Element>,
    /// `u` with `a = ε·ℓ^u`, when `a/ε` is a power of `ℓ`.
    pub u: Option<u32>,
}

/// First `x = y·z` (in ascending order of `z`) that is an `a`-lift of `σ`.
pub fn lift_exists_brute(sigma: &ModCuspidal, a: Nat, limits: &Limits) -> Result<Option<Element>> {
    if a == 0 {
        return Err(invalid("a must be >= 1"));
    }
    let ctx = sigma.ctx();
    limits.check(ctx.ambient().modulus())?;
    let inv = sigma.invariants();
    let target = a * inv.k * inv.deg_y;
    let y = sigma.y();
    for z in ctx.ambient().l_sylow(ctx.ground().ell())? {
        let x = y.mul(&z)?;
        if x.degree_over(ctx.q_e())? as Nat == target
            && x.degree_over(ctx.q_dprime())? == ctx.m_prime()
        {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn epsilon_exponent(sigma: &ModCuspidal, a: Nat) -> Option<u32> {
    let inv = sigma.invariants();
    if a % inv.epsilon != 0 {
        return None;
    }
    arith::exact_log(a / inv.epsilon, sigma.ctx().ground().ell())
}

/// The closed-form criterion alone: `(exists, u)`.
pub fn lift_criterion_closed(sigma: &ModCuspidal, a: Nat) -> Result<(bool, Option<u32>)> {
    if a == 0 {
        return Err(invalid("a must be >= 1"));
    }
    let inv = sigma.invariants();
    let g = sigma.ctx().ground();
    let u = epsilon_exponent(sigma, a);
    if a == 1 && sigma.is_supercuspidal() {
        return Ok((true, u));
    }
    if a == 1 {
        return Ok((gcd(inv.s, inv.k) == 1 && inv.epsilon == 1, u));
    }
    let v_s = g.val(inv.s)?;
    let exists = inv.s % a == 0
        && u.is_some_and(|u| u <= v_s)
        && gcd(inv.s / a, inv.k) == 1;
    Ok((exists, u))
}

/// Closed criterion, confirmed by the witness search when the ambient is
/// under the cap.
pub fn lift_criterion(sigma: &ModCuspidal, a: Nat, limits: &Limits) -> Result<LiftReport> {
    let (exists_closed, u) = lift_criterion_closed(sigma, a)?;
    let (exists_brute, witness) = if limits.allows(sigma.ctx().ambient().modulus()) {
        let w = lift_exists_brute(sigma, a, limits)?;
        (Some(w.is_some()), w)
    } else {
        (None, None)
    };
    if exists_brute.is_some_and(|b| b != exists_closed) {
        return Err(consistency(format!(
            "{a}-lift of {}: criterion says {exists_closed}, witness search says {}",
            sigma.y(),
            !exists_closed
        )));
    }
    Ok(LiftReport {
        a,
        exists_closed,
        exists_brute,
        witness,
        u,
    })
}

/// Alternative phrasings of the lifting conditions in terms of valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemarkReport {
    /// False for supercuspidal `σ`, where every entry below is vacuous.
    pub applicable: bool,
    /// `ε | s`.
    pub eps_divides_s: Option<bool>,
    /// `ε = 1` and `min(v(k), v(s)) = 0`.
    pub one_lift_restated: Option<bool>,
    pub one_lift_closed: Option<bool>,
    /// `(a, restated, closed)` for `2 ≤ a ≤ m'd'`.
    pub a_lifts: Vec<(Nat, bool, bool)>,
}

impl RemarkReport {
    pub fn agrees(&self) -> bool {
        self.one_lift_restated == self.one_lift_closed
            && self.a_lifts.iter().all(|&(_, r, c)| r == c)
    }
}

pub fn remark_checks(sigma: &ModCuspidal) -> Result<RemarkReport> {
    if sigma.is_supercuspidal() {
        return Ok(RemarkReport {
            applicable: false,
            eps_divides_s: None,
            one_lift_restated: None,
            one_lift_closed: None,
            a_lifts: Vec::new(),
        });
    }
    let inv = sigma.invariants();
    let g = sigma.ctx().ground();
    let (v_k, v_s) = (g.val(inv.k)?, g.val(inv.s)?);
    let restated_1 = inv.epsilon == 1 && v_k.min(v_s) == 0;
    let mut a_lifts = Vec::new();
    for a in 2..=sigma.ctx().ambient_degree() as Nat {
        let restated = match epsilon_exponent(sigma, a) {
            Some(u) => u <= v_s && v_k.min(v_s - u) == 0,
            None => false,
        };
        a_lifts.push((a, restated, lift_criterion_closed(sigma, a)?.0));
    }
    Ok(RemarkReport {
        applicable: true,
        eps_divides_s: Some(inv.s % inv.epsilon == 0),
        one_lift_restated: Some(restated_1),
        one_lift_closed: Some(lift_criterion_closed(sigma, 1)?.0),
        a_lifts,
    })
}

/// Order of `q^{exp}` in `(Z/ℓ^r Z)^×`.
fn order_mod_ell_power(q: Nat, exp: Nat, ell_r: Nat) -> Result<Nat> {
    arith::mult_order(arith::pow_mod(q, exp, ell_r), ell_r)
}

/// Over every `z` of the ℓ-Sylow subgroup of order `ℓ^r`:
/// `yz ∈ X ⟺ ord_{ℓ^r}(q^{f/k}) = k` and
/// `deg(yz) = a·k·deg(y) ⟺ ord_{ℓ^r}(q^{f/(ks)}) = a·k`;
/// for `yz ∈ X` also `n/(n, s) = k` and `v(n) = v(k) + min(v(n), v(s))`
/// with `n = ord_{ℓ^r}(q^{f/(ks)})`.
pub fn witness_checks(sigma: &ModCuspidal, a: Nat, limits: &Limits) -> Result<Vec<Check>> {
    let ctx = sigma.ctx();
    limits.check(ctx.ambient().modulus())?;
    let g = ctx.ground();
    let inv = sigma.invariants();
    let (k, s) = (inv.k, inv.s);
    let y = sigma.y();
    let mut membership_ok = true;
    let mut degree_ok = true;
    let mut eq52_ok = true;
    let mut eq53_ok = true;
    let mut first_failure = String::new();
    for z in ctx.ambient().l_sylow(g.ell())? {
        let ell_r = z.order();
        let x = y.mul(&z)?;
        let in_x = x.degree_over(ctx.q_dprime())? == ctx.m_prime();
        let ord_k = order_mod_ell_power(g.q(), inv.f_rho / k, ell_r)?;
        if in_x != (ord_k == k) {
            membership_ok = false;
        }
        let n = order_mod_ell_power(g.q(), inv.f_rho / (k * s), ell_r)?;
        let right_degree = x.degree_over(ctx.q_e())? as Nat == a * k * inv.deg_y;
        if right_degree != (n == a * k) {
            degree_ok = false;
        }
        if in_x {
            if n / gcd(n, s) != k {
                eq52_ok = false;
            }
            let (v_n, v_k, v_s) = (g.val(n)?, g.val(k)?, g.val(s)?);
            if v_n != v_k + v_n.min(v_s) {
                eq53_ok = false;
            }
        }
        if first_failure.is_empty() && !(membership_ok && degree_ok && eq52_ok && eq53_ok) {
            first_failure = format!("first failure at z = {z}");
        }
    }
    let detail = |ok: bool| {
        if ok {
            format!("y={y} a={a} k={k} s={s}")
        } else {
            first_failure.clone()
        }
    };
    Ok(vec![
        Check::new("yz ∈ X ⟺ ord(q^{f/k}) = k", membership_ok, detail(membership_ok)),
        Check::new("deg(yz) = ak·deg(y) ⟺ ord(q^{f/ks}) = ak", degree_ok, detail(degree_ok)),
        Check::new("n/(n, s) = k on X", eq52_ok, detail(eq52_ok)),
        Check::new("v(n) = v(k) + min(v(n), v(s)) on X", eq53_ok, detail(eq53_ok)),
    ])
}

/// A witness reduces back to `σ` (up to Frobenius), with length `a` and
/// `w = a·k`.
pub fn round_trip(sigma: &ModCuspidal, a: Nat, witness: &Element, limits: &Limits) -> Result<Check> {
    let rho = AdicCuspidal::new(*sigma.ctx(), *witness)?;
    let red = reduce(&rho, limits)?;
    let same = red.sigma.same_class(sigma)?;
    let k = sigma.invariants().k;
    Ok(Check::new(
        "lift reduces back to σ with length a and w = ak",
        same && red.a == a && red.w == a * k,
        format!("witness={witness} a'={} w={} k={k}", red.a, red.w),
    ))
}
