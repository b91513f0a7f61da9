//! Counting inertial classes congruent to a given ℓ-adic cuspidal class.
//!
//! `t` is computed twice: by walking the ℓ-primary component of the ambient
//! group (optionally the whole group) and through the Möbius-inverted count
//! of ℓ-power elements of exact degree `w` over `k_1 = k_E(y)`.

use std::collections::HashMap;

use crate::arith::{self, gcd, Nat};
use crate::check::Check;
use crate::cyclic::enumerate_by_predicate;
use crate::error::{consistency, invalid, Error, Result};
use crate::limits::Limits;
use crate::reps::{reduce, AdicCuspidal};

/// Evaluation route for [`f_count`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FMode {
    /// Walk the ℓ-primary part of `F_{Q^n}^×`.
    Direct,
    /// `Σ_{k | n} μ(n/k) ℓ^{v(Q^k - 1)}`.
    Moebius,
    /// The two-case closed form, valid under the order hypothesis on `Q`.
    Closed,
}

fn check_base(q_card: Nat, ell: Nat, n: u32) -> Result<()> {
    if !arith::is_prime(ell) {
        return Err(invalid(format!("{ell} is not prime")));
    }
    if q_card < 2 || q_card % ell == 0 {
        return Err(invalid(format!("need Q >= 2 prime to ℓ, got Q = {q_card}")));
    }
    if n == 0 {
        return Err(invalid("degree must be >= 1"));
    }
    Ok(())
}

/// Number of elements of ℓ-power order and exact degree `n` over `F_Q`.
pub fn f_count(q_card: Nat, ell: Nat, n: u32, mode: FMode, limits: &Limits) -> Result<Nat> {
    check_base(q_card, ell, n)?;
    match mode {
        FMode::Direct => {
            let size = arith::l_part(arith::pow_minus_one(q_card, n)?, ell)?;
            limits.check(size)?;
            let mut degree_of_order: HashMap<Nat, Nat> = HashMap::new();
            let mut count = 0;
            for j in 0..size {
                let ord = size / gcd(j, size);
                let deg = match degree_of_order.get(&ord) {
                    Some(&d) => d,
                    None => {
                        let d = arith::mult_order(q_card % ord, ord)?;
                        degree_of_order.insert(ord, d);
                        d
                    }
                };
                if deg == n as Nat {
                    count += 1;
                }
            }
            Ok(count)
        }
        FMode::Moebius => {
            let mut total: i128 = 0;
            for k in arith::divisors(n as Nat)? {
                let mu = arith::moebius(n as Nat / k)?;
                if mu == 0 {
                    continue;
                }
                let term = arith::l_part(arith::pow_minus_one(q_card, k as u32)?, ell)?;
                let term = i128::try_from(term).map_err(|_| Error::Overflow("Möbius term".into()))?;
                total += mu as i128 * term;
            }
            Nat::try_from(total).map_err(|_| consistency(format!("negative Möbius sum {total}")))
        }
        FMode::Closed => {
            let w0 = arith::l_prime_part(n as Nat, ell)?;
            let ord = arith::mult_order(q_card % ell, ell)?;
            if n <= 1 || ord != w0 {
                return Err(Error::PreconditionViolated(format!(
                    "closed form needs n > 1 and ord(Q mod ℓ) = ℓ'-part of n; got n = {n}, ord = {ord}, w0 = {w0}"
                )));
            }
            let c = arith::l_part(arith::pow_minus_one(q_card, n)?, ell)?;
            if arith::l_val(n as Nat, ell)? == 0 {
                Ok(c - 1)
            } else {
                Ok(c / ell * (ell - 1))
            }
        }
    }
}

/// Frobenius data of `ρ̃` used by both `t` computations.
#[derive(Debug, Clone, Copy)]
struct Frame {
    deg_x: Nat,
    w: Nat,
    /// `|k_1| = q_E^{deg(y)}`
    q1: Nat,
}

fn frame(rho: &AdicCuspidal) -> Result<Frame> {
    let ctx = rho.ctx();
    let y = rho.x().l_regular_part(ctx.ground().ell())?;
    let deg_x = rho.invariants().deg_x;
    let deg_y = y.degree_over(ctx.q_e())? as Nat;
    Ok(Frame {
        deg_x,
        w: deg_x / deg_y,
        q1: arith::checked_pow(ctx.q_e(), arith::to_u32(deg_y, "deg(y)")?)?,
    })
}

/// `t(ρ̃)` by enumeration: elements `y·z'` with `z'` of ℓ-power order and
/// the same degree as `x`, counted up to the Frobenius of `k_1` (orbits of
/// size `w`). When the ambient is small enough the whole group is also
/// walked, counting `k_E`-Frobenius orbits whose ℓ-regular part is conjugate
/// to `y`.
pub fn t_brute(rho: &AdicCuspidal, limits: &Limits) -> Result<Nat> {
    let ctx = rho.ctx();
    let ambient = ctx.ambient();
    limits.check(ambient.modulus())?;
    let ell = ctx.ground().ell();
    let fr = frame(rho)?;
    let y = rho.x().l_regular_part(ell)?;
    let mut count = 0;
    for z in ambient.l_sylow(ell)? {
        if y.mul(&z)?.degree_over(ctx.q_e())? as Nat == fr.deg_x {
            count += 1;
        }
    }
    if count % fr.w != 0 {
        return Err(consistency(format!("{count} elements do not split into orbits of size {}", fr.w)));
    }
    let t = count / fr.w;
    if limits.allows_full_check(ambient.modulus()) {
        let y_orbit = y.orbit(ctx.q_e())?;
        let orbits = enumerate_by_predicate(ambient, ctx.q_e(), limits, |x| {
            x.degree_over(ctx.q_e()).map(|d| d as Nat == fr.deg_x).unwrap_or(false)
                && x.l_regular_part(ell).map(|r| y_orbit.contains(&r)).unwrap_or(false)
        })?
        .len() as Nat;
        if orbits != t {
            return Err(consistency(format!(
                "ℓ-primary count gives t = {t}, whole-group count gives {orbits}"
            )));
        }
    }
    Ok(t)
}

/// `t(ρ̃) = f_{Q}(w) / w` with `Q = |k_1|`.
pub fn t_closed(rho: &AdicCuspidal, limits: &Limits) -> Result<Nat> {
    let ctx = rho.ctx();
    let ell = ctx.ground().ell();
    let fr = frame(rho)?;
    let w = arith::to_u32(fr.w, "w")?;
    let f = f_count(fr.q1, ell, w, FMode::Moebius, limits)?;
    let sylow = arith::l_part(arith::pow_minus_one(fr.q1, w)?, ell)?;
    if limits.allows(sylow) {
        let direct = f_count(fr.q1, ell, w, FMode::Direct, limits)?;
        if direct != f {
            return Err(consistency(format!("f({w}): Möbius {f} vs direct {direct}")));
        }
    }
    // the degree-w extension of k_1 is F_{q^{n(ρ̃)}}
    let n_adic = arith::to_u32(rho.invariants().n_adic, "n(ρ)")?;
    if arith::checked_pow(fr.q1, w)? != arith::checked_pow(ctx.ground().q(), n_adic)? {
        return Err(consistency(format!(
            "|k_1|^w = {}^{w} differs from q^n = {}^{n_adic}",
            fr.q1,
            ctx.ground().q()
        )));
    }
    if f % fr.w != 0 {
        return Err(consistency(format!("f(w) = {f} is not divisible by w = {}", fr.w)));
    }
    Ok(f / fr.w)
}

/// `t` by the closed route, cross-checked against enumeration when the
/// ambient is under the cap. Returns `(t, brute_force_skipped)`.
pub fn t_value(rho: &AdicCuspidal, limits: &Limits) -> Result<(Nat, bool)> {
    let closed = t_closed(rho, limits)?;
    if !limits.allows(rho.ctx().ambient().modulus()) {
        return Ok((closed, true));
    }
    let brute = t_brute(rho, limits)?;
    if brute != closed {
        return Err(consistency(format!("t: enumeration {brute} vs closed form {closed}")));
    }
    Ok((closed, false))
}

/// Which side of the dichotomy for `t·w` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm13Case {
    Supercuspidal,
    WCoprimeToEll,
    WDivisibleByEll,
}

impl Thm13Case {
    pub fn as_str(&self) -> &'static str {
        match self {
            Thm13Case::Supercuspidal => "supercuspidal",
            Thm13Case::WCoprimeToEll => "w_coprime_to_ell",
            Thm13Case::WDivisibleByEll => "w_divisible_by_ell",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thm12Report {
    pub t: Nat,
    pub c: Nat,
    pub w: Nat,
    pub holds: bool,
    pub brute_force_skipped: bool,
}

/// `t ≤ c`, with equality exactly when `w = 1`.
pub fn check_thm12(rho: &AdicCuspidal, limits: &Limits) -> Result<Thm12Report> {
    let (t, skipped) = t_value(rho, limits)?;
    let c = rho.c()?;
    let w = frame(rho)?.w;
    Ok(Thm12Report {
        t,
        c,
        w,
        holds: t <= c && ((t == c) == (w == 1)),
        brute_force_skipped: skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thm13Report {
    pub t: Nat,
    pub w: Nat,
    pub c: Nat,
    /// Branch selected by `v(w)`.
    pub case: Thm13Case,
    /// `c - 1` or `c(ℓ - 1)/ℓ` according to `case`.
    pub expected: Nat,
    pub holds: bool,
    /// Branch selected by whether `t` is prime to `ℓ`.
    pub paper_case: Thm13Case,
    pub paper_condition_agrees: bool,
}

/// `t·w` against `c - 1` (when `ℓ ∤ w`) or `c(ℓ-1)/ℓ` (when `ℓ | w`); also
/// records which branch the "`t` prime to `ℓ`" phrasing would select.
pub fn check_thm13(rho: &AdicCuspidal, limits: &Limits) -> Result<Thm13Report> {
    let ell = rho.ctx().ground().ell();
    let (t, _) = t_value(rho, limits)?;
    let c = rho.c()?;
    let w = frame(rho)?.w;
    if w == 1 {
        return Err(Error::NotApplicable("ρ̃ is ℓ-supercuspidal (w = 1)".into()));
    }
    let case = if w % ell == 0 {
        Thm13Case::WDivisibleByEll
    } else {
        Thm13Case::WCoprimeToEll
    };
    let paper_case = if t % ell == 0 {
        Thm13Case::WDivisibleByEll
    } else {
        Thm13Case::WCoprimeToEll
    };
    let expected = match case {
        Thm13Case::WCoprimeToEll => c - 1,
        _ => c / ell * (ell - 1),
    };
    Ok(Thm13Report {
        t,
        w,
        c,
        case,
        expected,
        holds: t * w == expected,
        paper_case,
        paper_condition_agrees: case == paper_case,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prop35Report {
    pub big_t: Nat,
    pub big_c: Nat,
    pub holds: bool,
}

/// Counts normalized by the central character at a uniformizer:
/// `T = t·ℓ^{v(md/n)}` and `C = ℓ^{v((md/n)(q^n - 1))}`.
pub fn t_and_c(rho: &AdicCuspidal, limits: &Limits) -> Result<Prop35Report> {
    let ctx = rho.ctx();
    let g = ctx.ground();
    let inv = rho.invariants();
    let md = ctx.form().n() as Nat;
    if md % inv.n_adic != 0 {
        return Err(consistency(format!("md/n = {md}/{} is not an integer", inv.n_adic)));
    }
    let index = md / inv.n_adic;
    if ctx.endo().ramification() as Nat * inv.s_adic != index {
        return Err(consistency(format!(
            "e(E:F)·s = {} differs from md/n = {index}",
            ctx.endo().ramification() as Nat * inv.s_adic
        )));
    }
    let (t, _) = t_value(rho, limits)?;
    let w = frame(rho)?.w;
    let big_t = t * g.ell_part(index)?;
    let qn = arith::pow_minus_one(g.q(), arith::to_u32(inv.n_adic, "n(ρ)")?)?;
    let big_c = g.ell_part(
        index
            .checked_mul(qn)
            .ok_or_else(|| Error::Overflow("(md/n)(q^n - 1)".into()))?,
    )?;
    Ok(Prop35Report {
        big_t,
        big_c,
        holds: big_t <= big_c && ((big_t == big_c) == (w == 1)),
    })
}

/// The order of `|k_1|` modulo `ℓ` is the ℓ'-part of `w` whenever `w > 1`.
pub fn lemma34_check(rho: &AdicCuspidal) -> Result<Option<Check>> {
    let ell = rho.ctx().ground().ell();
    let fr = frame(rho)?;
    if fr.w == 1 {
        return Ok(None);
    }
    let ord = arith::mult_order(fr.q1 % ell, ell)?;
    let w0 = arith::l_prime_part(fr.w, ell)?;
    Ok(Some(Check::new(
        "ord(|k_1| mod ℓ) = ℓ'-part of w",
        ord == w0,
        format!("Q={} ord={ord} w={} w0={w0}", fr.q1, fr.w),
    )))
}

/// All congruence data of one ℓ-adic parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceReport {
    pub t: Nat,
    pub c: Nat,
    pub w: Nat,
    pub big_t: Nat,
    pub big_c: Nat,
    pub thm12_holds: bool,
    pub thm13_case: Thm13Case,
    pub thm13: Option<Thm13Report>,
    pub prop35_holds: bool,
    pub brute_force_skipped: bool,
}

pub fn congruence_report(rho: &AdicCuspidal, limits: &Limits) -> Result<CongruenceReport> {
    let red = reduce(rho, limits)?;
    let t12 = check_thm12(rho, limits)?;
    if t12.w != red.w {
        return Err(consistency(format!("w = {} vs reduction w = {}", t12.w, red.w)));
    }
    let thm13 = if red.w > 1 {
        Some(check_thm13(rho, limits)?)
    } else {
        None
    };
    let p35 = t_and_c(rho, limits)?;
    Ok(CongruenceReport {
        t: t12.t,
        c: t12.c,
        w: t12.w,
        big_t: p35.big_t,
        big_c: p35.big_c,
        thm12_holds: t12.holds,
        thm13_case: thm13.map(|r| r.case).unwrap_or(Thm13Case::Supercuspidal),
        thm13,
        prop35_holds: p35.holds,
        brute_force_skipped: t12.brute_force_skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::{FieldContext, GroundData};

    fn adic(q: Nat, ell: Nat, m: u32, d: u32, order: Nat) -> AdicCuspidal {
        let c = FieldContext::level_zero(GroundData::new(q, ell).unwrap(), m, d).unwrap();
        let x = c.ambient().element_of_order(order).unwrap();
        AdicCuspidal::new(c, x).unwrap()
    }

    /// Independent count: orders of elements of the cyclic group of order
    /// `ℓ^β` and their degrees by repeated multiplication.
    fn f_oracle(q: Nat, ell: Nat, n: u32) -> Nat {
        let mut size = q.pow(n) - 1;
        let mut beta_size = 1;
        while size % ell == 0 {
            size /= ell;
            beta_size *= ell;
        }
        (0..beta_size)
            .filter(|&j| {
                let mut cur = j;
                let mut deg = 0;
                loop {
                    cur = cur * q % beta_size;
                    deg += 1;
                    if cur == j {
                        break;
                    }
                }
                deg == n
            })
            .count() as Nat
    }

    #[test]
    fn f_count_values() {
        let lim = Limits::default();
        for mode in [FMode::Direct, FMode::Moebius, FMode::Closed] {
            assert_eq!(f_count(2, 3, 2, mode, &lim).unwrap(), 2);
        }
        assert_eq!(f_count(2, 3, 6, FMode::Moebius, &lim).unwrap(), 6);
        assert_eq!(f_count(2, 3, 6, FMode::Direct, &lim).unwrap(), f_oracle(2, 3, 6));
        for (q, ell) in [(2, 3), (3, 2), (4, 5), (5, 3), (7, 2)] {
            assert_eq!(
                f_count(q, ell, 1, FMode::Direct, &lim).unwrap(),
                arith::l_part(q - 1, ell).unwrap()
            );
        }
        assert!(matches!(
            f_count(2, 3, 1, FMode::Closed, &lim),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            f_count(2, 3, 3, FMode::Closed, &lim),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(f_count(3, 3, 2, FMode::Moebius, &lim).is_err());
    }

    #[test]
    fn f_count_modes_agree_with_oracle() {
        let lim = Limits::default();
        for q in [2u128, 3, 4, 5, 7, 8, 9] {
            for ell in [2u128, 3, 5, 7] {
                if q % ell == 0 {
                    continue;
                }
                for n in 1..=8u32 {
                    if q.pow(n) > 1 << 22 {
                        continue;
                    }
                    let oracle = f_oracle(q, ell, n);
                    assert_eq!(f_count(q, ell, n, FMode::Direct, &lim).unwrap(), oracle);
                    assert_eq!(f_count(q, ell, n, FMode::Moebius, &lim).unwrap(), oracle);
                }
            }
        }
    }

    #[test]
    fn closed_form_for_odd_ell() {
        let lim = Limits::default();
        for q in [2u128, 3, 4, 5, 7, 8] {
            for ell in [3u128, 5, 7] {
                if q % ell == 0 {
                    continue;
                }
                for n in 2..=8u32 {
                    if let Ok(closed) = f_count(q, ell, n, FMode::Closed, &lim) {
                        assert_eq!(closed, f_oracle(q, ell, n), "q={q} ℓ={ell} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_breaks_at_two() {
        // ℓ = 2, Q ≡ 3 mod 4, w = 2: 2^{v(Q^2-1)} - 2^{v(Q-1)} != 2^{v(Q^2-1)-1}
        let lim = Limits::default();
        assert_eq!(f_count(3, 2, 2, FMode::Moebius, &lim).unwrap(), 6);
        assert_eq!(f_count(3, 2, 2, FMode::Closed, &lim).unwrap(), 4);
        assert_eq!(f_count(5, 2, 2, FMode::Moebius, &lim).unwrap(), 4);
        assert_eq!(f_count(5, 2, 2, FMode::Closed, &lim).unwrap(), 4);
    }

    #[test]
    fn t_values() {
        let lim = Limits::default();
        let s1 = adic(2, 3, 2, 1, 3);
        assert_eq!(t_brute(&s1, &lim).unwrap(), 1);
        assert_eq!(t_closed(&s1, &lim).unwrap(), 1);
        let s3 = adic(2, 3, 6, 1, 9);
        assert_eq!(t_brute(&s3, &lim).unwrap(), 1);
        assert_eq!(t_closed(&s3, &lim).unwrap(), 1);
        // ℓ-supercuspidal with c = 1
        let triv = adic(2, 3, 1, 1, 1);
        assert_eq!(t_brute(&triv, &lim).unwrap(), 1);
        assert_eq!(t_closed(&triv, &lim).unwrap(), 1);
        assert!(matches!(
            t_brute(&s3, &Limits::with_cap(10)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn theorem_12() {
        let lim = Limits::default();
        let r = check_thm12(&adic(2, 3, 2, 1, 3), &lim).unwrap();
        assert_eq!((r.t, r.c, r.w, r.holds), (1, 3, 2, true));
        let r = check_thm12(&adic(2, 3, 1, 1, 1), &lim).unwrap();
        assert_eq!((r.t, r.c, r.w, r.holds), (1, 1, 1, true));
        let r = check_thm12(&adic(2, 3, 6, 1, 9), &lim).unwrap();
        assert_eq!((r.t, r.c, r.w, r.holds), (1, 9, 6, true));
    }

    #[test]
    fn theorem_13() {
        let lim = Limits::default();
        for (m, d) in [(2, 1), (1, 2)] {
            let r = check_thm13(&adic(2, 3, m, d, 3), &lim).unwrap();
            assert_eq!(r.case, Thm13Case::WCoprimeToEll);
            assert!(r.holds && r.paper_condition_agrees);
            assert_eq!(r.t * r.w, 2);
        }
        let r = check_thm13(&adic(2, 3, 6, 1, 9), &lim).unwrap();
        assert_eq!((r.t, r.w, r.c), (1, 6, 9));
        assert_eq!(r.case, Thm13Case::WDivisibleByEll);
        assert!(r.holds);
        assert_eq!(r.paper_case, Thm13Case::WCoprimeToEll);
        assert!(!r.paper_condition_agrees);
        assert!(matches!(
            check_thm13(&adic(2, 3, 1, 1, 1), &lim),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn prop_35() {
        let lim = Limits::default();
        let r = t_and_c(&adic(2, 3, 2, 1, 3), &lim).unwrap();
        assert_eq!((r.big_t, r.big_c, r.holds), (1, 3, true));
        let r = t_and_c(&adic(2, 3, 1, 1, 1), &lim).unwrap();
        assert_eq!((r.big_t, r.big_c, r.holds), (1, 1, true));
        let r = t_and_c(&adic(2, 3, 1, 2, 3), &lim).unwrap();
        assert_eq!((r.big_t, r.big_c), (1, 3));
    }
}
