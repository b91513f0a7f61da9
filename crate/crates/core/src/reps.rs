//! Finite-field parameters of cuspidal classes and their numerical invariants.
//!
//! An inner form `GL_m(D)` of `GL_n(F)` together with an endoclass of degree
//! `g` and residue degree `f` determines the finite group `GL_{m'}(k_{D'})`
//! with `d' = d / (d, g)` and `m' = m (d, g) / g`. Its ℓ-adic cuspidal classes
//! are Frobenius orbits of elements `x` of `F_{q_E^{m'd'}}` of degree `m'` over
//! `k_{D'}`; its ℓ-modular ones are orbits of their ℓ-regular parts `y`.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::arith::{self, gcd, Nat};
use crate::check::Check;
use crate::cyclic::{AmbientField, Element};
use crate::error::{consistency, invalid, Error, Result};
use crate::limits::Limits;

/// The residue cardinality `q` of `F` and the banned prime `ℓ ≠ p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundData {
    q: Nat,
    ell: Nat,
    p: Nat,
}

impl GroundData {
    pub fn new(q: Nat, ell: Nat) -> Result<Self> {
        if q < 2 {
            return Err(invalid(format!("q = {q} is not a prime power")));
        }
        let (p, _) = arith::is_prime_power(q)?
            .ok_or_else(|| invalid(format!("q = {q} is not a prime power")))?;
        if !arith::is_prime(ell) {
            return Err(invalid(format!("ℓ = {ell} is not prime")));
        }
        if ell == p {
            return Err(invalid(format!("ℓ = {ell} equals the residue characteristic")));
        }
        Ok(GroundData { q, ell, p })
    }

    pub fn q(&self) -> Nat {
        self.q
    }

    pub fn ell(&self) -> Nat {
        self.ell
    }

    pub fn p(&self) -> Nat {
        self.p
    }

    /// Order of `q` in `(Z/ℓZ)^×`.
    pub fn e(&self) -> Nat {
        arith::mult_order(self.q % self.ell, self.ell).expect("ℓ does not divide q")
    }

    /// `ℓ^{v(x)}`.
    pub fn ell_part(&self, x: Nat) -> Result<Nat> {
        arith::l_part(x, self.ell)
    }

    pub fn val(&self, x: Nat) -> Result<u32> {
        arith::l_val(x, self.ell)
    }

    /// Largest divisor of `x` prime to `ℓ`.
    pub fn ell_prime_part(&self, x: Nat) -> Result<Nat> {
        arith::l_prime_part(x, self.ell)
    }

    /// Order of `base^exp` in `(Z/ℓZ)^×`.
    pub fn order_mod_ell(&self, base: Nat, exp: Nat) -> Nat {
        let r = arith::pow_mod(base, exp, self.ell);
        arith::mult_order(r, self.ell).expect("unit mod ℓ")
    }
}

/// `GL_m(D)` with `D` of reduced degree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InnerForm {
    pub m: u32,
    pub d: u32,
}

impl InnerForm {
    pub fn new(m: u32, d: u32) -> Result<Self> {
        if m == 0 || d == 0 {
            return Err(invalid("m and d must be >= 1"));
        }
        Ok(InnerForm { m, d })
    }

    pub fn n(&self) -> u32 {
        self.m * self.d
    }
}

/// Exact nonnegative rational used for levels.
pub type Level = Ratio<u64>;

/// An endoclass reduced to its degree, residue degree and normalized level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EndoclassRecord {
    deg: u32,
    res_deg: u32,
    level: Level,
}

impl EndoclassRecord {
    pub fn new(deg: u32, res_deg: u32, level: Level) -> Result<Self> {
        if deg == 0 || res_deg == 0 {
            return Err(invalid("endoclass degrees must be >= 1"));
        }
        if deg % res_deg != 0 {
            return Err(invalid(format!(
                "residue degree {res_deg} does not divide degree {deg}"
            )));
        }
        Ok(EndoclassRecord {
            deg,
            res_deg,
            level,
        })
    }

    /// The endoclass of level-zero representations.
    pub fn zero() -> Self {
        EndoclassRecord {
            deg: 1,
            res_deg: 1,
            level: Level::from_integer(0),
        }
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn res_deg(&self) -> u32 {
        self.res_deg
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// `e(E:F) = deg / res_deg`.
    pub fn ramification(&self) -> u32 {
        self.deg / self.res_deg
    }
}

impl fmt::Display for EndoclassRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, f={}, level={})", self.deg, self.res_deg, self.level)
    }
}

/// The finite-field frame attached to an inner form and an endoclass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldContext {
    ground: GroundData,
    form: InnerForm,
    endo: EndoclassRecord,
    d_prime: u32,
    m_prime: u32,
    q_e: Nat,
    q_dprime: Nat,
    ambient: AmbientField,
}

impl FieldContext {
    pub fn new(ground: GroundData, form: InnerForm, endo: EndoclassRecord) -> Result<Self> {
        let g = endo.deg;
        if form.n() % g != 0 {
            return Err(Error::IncompatibleEndoclass(format!(
                "degree {g} does not divide n = {}",
                form.n()
            )));
        }
        let dg = form.d.gcd(&g);
        let d_prime = form.d / dg;
        if (form.m * dg) % g != 0 {
            return Err(Error::IncompatibleEndoclass(format!(
                "m' = {}·{dg}/{g} is not an integer",
                form.m
            )));
        }
        let m_prime = form.m * dg / g;
        let q_e = arith::checked_pow(ground.q, endo.res_deg)?;
        let q_dprime = arith::checked_pow(q_e, d_prime)?;
        let ambient = AmbientField::new(q_e, m_prime * d_prime)?;
        Ok(FieldContext {
            ground,
            form,
            endo,
            d_prime,
            m_prime,
            q_e,
            q_dprime,
            ambient,
        })
    }

    /// Level-zero context of `GL_m(D)`.
    pub fn level_zero(ground: GroundData, m: u32, d: u32) -> Result<Self> {
        FieldContext::new(ground, InnerForm::new(m, d)?, EndoclassRecord::zero())
    }

    pub fn ground(&self) -> &GroundData {
        &self.ground
    }

    pub fn form(&self) -> &InnerForm {
        &self.form
    }

    pub fn endo(&self) -> &EndoclassRecord {
        &self.endo
    }

    pub fn d_prime(&self) -> u32 {
        self.d_prime
    }

    pub fn m_prime(&self) -> u32 {
        self.m_prime
    }

    pub fn q_e(&self) -> Nat {
        self.q_e
    }

    pub fn q_dprime(&self) -> Nat {
        self.q_dprime
    }

    /// `F_{q_E^{m'd'}}`, shared by every parameter of the context.
    pub fn ambient(&self) -> &AmbientField {
        &self.ambient
    }

    /// `m'd'`, the degree of the ambient field over `k_E`.
    pub fn ambient_degree(&self) -> u32 {
        self.m_prime * self.d_prime
    }

    /// `f(ρ) = md / e(E:F)`, which equals `m'd'·f`.
    pub fn f_rho(&self) -> Nat {
        let n = self.form.n() as Nat;
        n * self.endo.res_deg as Nat / self.endo.deg as Nat
    }

    fn own(&self, x: &Element) -> Result<()> {
        if x.ambient() != &self.ambient {
            return Err(invalid(format!(
                "element lives in {} but the context ambient is {}",
                x.ambient(),
                self.ambient
            )));
        }
        Ok(())
    }
}

/// Invariants of an ℓ-adic cuspidal parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdicInvariants {
    pub s_adic: Nat,
    pub f_rho: Nat,
    pub n_adic: Nat,
    pub deg_x: Nat,
}

/// An element `x` of degree `m'` over `k_{D'}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdicCuspidal {
    ctx: FieldContext,
    x: Element,
    inv: AdicInvariants,
}

impl AdicCuspidal {
    pub fn new(ctx: FieldContext, x: Element) -> Result<Self> {
        ctx.own(&x)?;
        let over_dprime = x.degree_over(ctx.q_dprime)?;
        if over_dprime != ctx.m_prime {
            return Err(Error::NotACuspidalParameter(format!(
                "{x} has degree {over_dprime} over k_D' (expected m' = {})",
                ctx.m_prime
            )));
        }
        let deg_x = x.degree_over(ctx.q_e)? as Nat;
        let n_amb = ctx.ambient_degree() as Nat;
        let s_adic = n_amb / deg_x;
        let f_rho = ctx.f_rho();
        if f_rho % s_adic != 0 {
            return Err(consistency(format!("s = {s_adic} does not divide f = {f_rho}")));
        }
        Ok(AdicCuspidal {
            ctx,
            x,
            inv: AdicInvariants {
                s_adic,
                f_rho,
                n_adic: f_rho / s_adic,
                deg_x,
            },
        })
    }

    pub fn from_exponent(ctx: FieldContext, exponent: Nat) -> Result<Self> {
        let x = ctx.ambient.element(exponent)?;
        AdicCuspidal::new(ctx, x)
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn x(&self) -> &Element {
        &self.x
    }

    pub fn invariants(&self) -> AdicInvariants {
        self.inv
    }

    /// `c(ρ̃)`: the ℓ-part of `q^{n(ρ̃)} - 1`.
    pub fn c(&self) -> Result<Nat> {
        let g = &self.ctx.ground;
        let n = arith::to_u32(self.inv.n_adic, "n(ρ)")?;
        g.ell_part(arith::pow_minus_one(g.q, n)?)
    }

    /// Relations between `deg(x)`, `s(σ̃)`, `n(ρ̃)` and `f(ρ̃)`.
    pub fn structural_checks(&self) -> Vec<Check> {
        let AdicInvariants {
            s_adic,
            f_rho,
            n_adic,
            deg_x,
        } = self.inv;
        let m_prime = self.ctx.m_prime as Nat;
        let d_prime = self.ctx.d_prime as Nat;
        let m = self.ctx.form.m as Nat;
        vec![
            Check::new(
                "deg(x) = m'd'/s and (s, m') = 1",
                deg_x * s_adic == m_prime * d_prime && gcd(s_adic, m_prime) == 1,
                format!("deg={deg_x} s={s_adic} m'={m_prime} d'={d_prime}"),
            ),
            Check::new(
                "(s, m) = 1",
                gcd(s_adic, m) == 1,
                format!("s={s_adic} m={m}"),
            ),
            Check::new(
                "s | d'",
                d_prime % s_adic == 0,
                format!("s={s_adic} d'={d_prime}"),
            ),
            Check::new(
                "n·s = f",
                n_adic * s_adic == f_rho,
                format!("n={n_adic} s={s_adic} f={f_rho}"),
            ),
        ]
    }
}

/// Invariants of an ℓ-modular cuspidal parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModInvariants {
    pub k: Nat,
    pub s: Nat,
    pub n_mod: Nat,
    pub epsilon: Nat,
    pub f_rho: Nat,
    pub deg_y: Nat,
    /// Degree of `y` over `k_{D'}`.
    pub m_dd: Nat,
    /// Order of `q_{D'}^{m_dd}` modulo `ℓ`.
    pub e_y: Nat,
}

/// An ℓ-regular element `y` that parametrizes an ℓ-modular cuspidal class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModCuspidal {
    ctx: FieldContext,
    y: Element,
    inv: ModInvariants,
}

impl ModCuspidal {
    /// Validates `y` with the closed-form test and, when the ambient is under
    /// the enumeration cap, with the witness search; the two must agree.
    pub fn new(ctx: FieldContext, y: Element, limits: &Limits) -> Result<Self> {
        let inv = Self::raw_invariants(&ctx, &y)?;
        let closed = Self::closed_validity(&ctx, &inv);
        if limits.allows(ctx.ambient.modulus()) {
            let brute = Self::brute_validity(&ctx, &y)?;
            if brute != closed {
                return Err(consistency(format!(
                    "cuspidal validity of {y}: closed form says {closed}, witness search says {brute}"
                )));
            }
        }
        if !closed {
            return Err(Error::NotACuspidalParameter(format!(
                "{y} gives k = {} which is neither 1 nor {}·ℓ^i",
                inv.k, inv.e_y
            )));
        }
        Ok(ModCuspidal { ctx, y, inv })
    }

    pub fn from_exponent(ctx: FieldContext, exponent: Nat, limits: &Limits) -> Result<Self> {
        let y = ctx.ambient.element(exponent)?;
        ModCuspidal::new(ctx, y, limits)
    }

    /// Invariants of `y` without the cuspidality test.
    pub fn raw_invariants(ctx: &FieldContext, y: &Element) -> Result<ModInvariants> {
        ctx.own(y)?;
        let g = &ctx.ground;
        if !y.is_l_regular(g.ell) {
            return Err(Error::NotACuspidalParameter(format!(
                "{y} has order {} divisible by ℓ = {}",
                y.order(),
                g.ell
            )));
        }
        let m_dd = y.degree_over(ctx.q_dprime)? as Nat;
        let m_prime = ctx.m_prime as Nat;
        if m_prime % m_dd != 0 {
            return Err(consistency(format!("degree {m_dd} over k_D' does not divide m'")));
        }
        let k = m_prime / m_dd;
        let deg_y = y.degree_over(ctx.q_e)? as Nat;
        let n_amb = ctx.ambient_degree() as Nat;
        if n_amb % (k * deg_y) != 0 {
            return Err(consistency(format!("k·deg(y) = {} does not divide m'd'", k * deg_y)));
        }
        let s = n_amb / (k * deg_y);
        let f_rho = ctx.f_rho();
        if f_rho % s != 0 {
            return Err(consistency(format!("s = {s} does not divide f = {f_rho}")));
        }
        let n_mod = g.ell_prime_part(f_rho / s)?;
        let epsilon = g.order_mod_ell(g.q, n_mod);
        let e_y = g.order_mod_ell(ctx.q_dprime, m_dd);
        Ok(ModInvariants {
            k,
            s,
            n_mod,
            epsilon,
            f_rho,
            deg_y,
            m_dd,
            e_y,
        })
    }

    /// `k = 1` or `k = e_y·ℓ^i`.
    pub fn closed_validity(ctx: &FieldContext, inv: &ModInvariants) -> bool {
        if inv.k == 1 {
            return true;
        }
        inv.k % inv.e_y == 0 && arith::exact_log(inv.k / inv.e_y, ctx.ground.ell).is_some()
    }

    /// Whether some ℓ-power-order `z` makes `y·z` of degree `m'` over `k_{D'}`.
    pub fn brute_validity(ctx: &FieldContext, y: &Element) -> Result<bool> {
        for z in ctx.ambient.l_sylow(ctx.ground.ell)? {
            if y.mul(&z)?.degree_over(ctx.q_dprime)? == ctx.m_prime {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn y(&self) -> &Element {
        &self.y
    }

    pub fn invariants(&self) -> ModInvariants {
        self.inv
    }

    pub fn is_supercuspidal(&self) -> bool {
        self.inv.k == 1
    }

    /// Whether `ρν^i ≅ ρ`, i.e. `ε(ρ) | i`.
    pub fn twist_fixed(&self, i: i128) -> bool {
        i.rem_euclid(self.inv.epsilon as i128) == 0
    }

    /// Same parameter up to the Frobenius of `k_{D'}`.
    pub fn same_class(&self, other: &ModCuspidal) -> Result<bool> {
        if self.ctx != other.ctx {
            return Ok(false);
        }
        Ok(self.y.orbit_representative(self.ctx.q_dprime)?
            == other.y.orbit_representative(self.ctx.q_dprime)?)
    }

    /// Degree relation for `y`, divisibilities and the two descriptions of
    /// `ε`.
    pub fn structural_checks(&self) -> Vec<Check> {
        let ModInvariants {
            k,
            s,
            n_mod,
            epsilon,
            deg_y,
            ..
        } = self.inv;
        let g = &self.ctx.ground;
        let m_prime = self.ctx.m_prime as Nat;
        let d_prime = self.ctx.d_prime as Nat;
        let e = g.e();
        let eps_sigma = g.order_mod_ell(self.ctx.q_e, deg_y * k);
        vec![
            Check::new(
                "deg(y) = (m'/k)(d'/s) and (s, m'/k) = 1",
                deg_y * k * s == m_prime * d_prime && gcd(s, m_prime / k) == 1,
                format!("deg={deg_y} k={k} s={s} m'={m_prime} d'={d_prime}"),
            ),
            Check::new(
                "s | d' and k | m'",
                d_prime % s == 0 && m_prime % k == 0,
                format!("s={s} d'={d_prime} k={k} m'={m_prime}"),
            ),
            Check::new(
                "ε = e/(e, n)",
                epsilon == e / gcd(e, n_mod),
                format!("ε={epsilon} e={e} n={n_mod}"),
            ),
            Check::new(
                "ε(ρ) = order of q_E^{deg(y)k} mod ℓ",
                epsilon == eps_sigma,
                format!("ε={epsilon} ε(σ)={eps_sigma}"),
            ),
        ]
    }
}

/// Reduction modulo ℓ of an ℓ-adic parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reduction {
    pub sigma: ModCuspidal,
    pub a: Nat,
    pub w: Nat,
}

impl Reduction {
    pub fn is_l_supercuspidal(&self) -> bool {
        self.w == 1
    }
}

/// Replaces `x` by its ℓ-regular part and computes `a = s(σ)/s(σ̃)` and
/// `w = deg(x)/deg(y)`; the latter must equal `k·a`.
pub fn reduce(rho: &AdicCuspidal, limits: &Limits) -> Result<Reduction> {
    let ell = rho.ctx.ground.ell;
    let y = rho.x.l_regular_part(ell)?;
    let sigma = ModCuspidal::new(rho.ctx, y, limits).map_err(|e| match e {
        Error::NotACuspidalParameter(msg) => consistency(format!(
            "reduction of an ℓ-adic parameter is not cuspidal: {msg}"
        )),
        other => other,
    })?;
    let AdicInvariants { s_adic, deg_x, .. } = rho.inv;
    let ModInvariants { s, k, deg_y, .. } = sigma.inv;
    if s % s_adic != 0 || deg_x % deg_y != 0 {
        return Err(consistency(format!(
            "non-integral a = {s}/{s_adic} or w = {deg_x}/{deg_y}"
        )));
    }
    let a = s / s_adic;
    let w = deg_x / deg_y;
    if w != k * a {
        return Err(consistency(format!("w = {w} but k·a = {}", k * a)));
    }
    Ok(Reduction { sigma, a, w })
}

/// Gcd relations between `w`, `m'`, `s`, `a` and the ℓ'-part of `a`.
pub fn reduction_checks(rho: &AdicCuspidal, red: &Reduction) -> Result<Vec<Check>> {
    let g = &rho.ctx.ground;
    let inv = red.sigma.inv;
    let m_prime = rho.ctx.m_prime as Nat;
    let mut checks = vec![
        Check::new(
            "(w, m') = k and (w, s) = a",
            gcd(red.w, m_prime) == inv.k && gcd(red.w, inv.s) == red.a,
            format!("w={} m'={m_prime} k={} s={} a={}", red.w, inv.k, inv.s, red.a),
        ),
        Check::new(
            "w = k·a",
            red.w == inv.k * red.a,
            format!("w={} k={} a={}", red.w, inv.k, red.a),
        ),
    ];
    if rho.x != red.sigma.y {
        let a0 = g.ell_prime_part(red.a)?;
        checks.push(Check::new(
            "ℓ'-part of a = ε",
            a0 == inv.epsilon,
            format!("a={} ℓ'-part={a0} ε={}", red.a, inv.epsilon),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: Nat, ell: Nat, m: u32, d: u32) -> FieldContext {
        FieldContext::level_zero(GroundData::new(q, ell).unwrap(), m, d).unwrap()
    }

    fn adic(q: Nat, ell: Nat, m: u32, d: u32, order: Nat) -> AdicCuspidal {
        let c = ctx(q, ell, m, d);
        let x = c.ambient().element_of_order(order).unwrap();
        AdicCuspidal::new(c, x).unwrap()
    }

    #[test]
    fn ground_data_validation() {
        assert!(GroundData::new(6, 5).is_err());
        assert!(GroundData::new(9, 3).is_err());
        assert!(GroundData::new(4, 4).is_err());
        let g = GroundData::new(4, 3).unwrap();
        assert_eq!(g.p(), 2);
        assert_eq!(g.e(), 1);
    }

    #[test]
    fn contexts() {
        let c = ctx(2, 3, 2, 1);
        assert_eq!((c.d_prime(), c.m_prime(), c.q_e(), c.q_dprime()), (1, 2, 2, 2));
        let c = ctx(2, 3, 1, 2);
        assert_eq!((c.d_prime(), c.m_prime(), c.q_dprime()), (2, 1, 4));
        let g = GroundData::new(2, 3).unwrap();
        let endo = EndoclassRecord::new(2, 1, Level::new(1, 2)).unwrap();
        let c = FieldContext::new(g, InnerForm::new(4, 1).unwrap(), endo).unwrap();
        assert_eq!((c.d_prime(), c.m_prime(), c.q_e()), (1, 2, 2));
        let bad = EndoclassRecord::new(3, 1, Level::new(1, 3)).unwrap();
        assert!(matches!(
            FieldContext::new(g, InnerForm::new(4, 1).unwrap(), bad),
            Err(Error::IncompatibleEndoclass(_))
        ));
        assert!(EndoclassRecord::new(3, 2, Level::new(0, 1)).is_err());
    }

    #[test]
    fn adic_scenarios() {
        let s1 = adic(2, 3, 2, 1, 3).invariants();
        assert_eq!((s1.s_adic, s1.f_rho, s1.n_adic, s1.deg_x), (1, 2, 2, 2));
        let s2 = adic(2, 3, 1, 2, 3).invariants();
        assert_eq!((s2.s_adic, s2.f_rho, s2.n_adic, s2.deg_x), (1, 2, 2, 2));
        let s4 = adic(2, 5, 2, 2, 5).invariants();
        assert_eq!((s4.s_adic, s4.f_rho, s4.n_adic, s4.deg_x), (1, 4, 4, 4));
        // identity has degree 1 over k_D' = F_2 but m' = 2
        let c = ctx(2, 3, 2, 1);
        assert!(matches!(
            AdicCuspidal::new(c, c.ambient().identity()),
            Err(Error::NotACuspidalParameter(_))
        ));
    }

    #[test]
    fn reductions() {
        let lim = Limits::default();
        let cases = [
            // (q, ℓ, m, d, order) -> (k, a, w, s, n, ε)
            ((2, 3, 2, 1, 3), (2, 1, 2, 1, 2, 1)),
            ((2, 3, 1, 2, 3), (1, 2, 2, 2, 1, 2)),
            ((2, 5, 2, 2, 5), (2, 2, 4, 2, 2, 2)),
        ];
        for ((q, ell, m, d, ord), (k, a, w, s, n, eps)) in cases {
            let rho = adic(q, ell, m, d, ord);
            let red = reduce(&rho, &lim).unwrap();
            let inv = red.sigma.invariants();
            assert_eq!((inv.k, red.a, red.w, inv.s, inv.n_mod, inv.epsilon), (k, a, w, s, n, eps));
            assert!(red.sigma.y().is_identity());
            assert!(crate::check::all_passed(&reduction_checks(&rho, &red).unwrap()));
            assert!(crate::check::all_passed(&red.sigma.structural_checks()));
            assert!(crate::check::all_passed(&rho.structural_checks()));
        }
    }

    #[test]
    fn twists() {
        let lim = Limits::default();
        let s1 = reduce(&adic(2, 3, 2, 1, 3), &lim).unwrap().sigma;
        let s2 = reduce(&adic(2, 3, 1, 2, 3), &lim).unwrap().sigma;
        assert!(s1.twist_fixed(0) && s2.twist_fixed(0));
        assert!(s1.twist_fixed(1));
        assert!(!s2.twist_fixed(1));
        assert!(s2.twist_fixed(-4));
    }

    #[test]
    fn invalid_modular_parameters() {
        let lim = Limits::default();
        // GL_2(F_4): identity has k = 2 but e_y = ord(4 mod 3) = 1, so k must be a power of 3
        let c = ctx(2, 3, 2, 2);
        assert!(matches!(
            ModCuspidal::new(c, c.ambient().identity(), &lim),
            Err(Error::NotACuspidalParameter(_))
        ));
        let c = ctx(2, 3, 2, 1);
        let x = c.ambient().element(1).unwrap();
        assert!(matches!(
            ModCuspidal::new(c, x, &lim),
            Err(Error::NotACuspidalParameter(_))
        ));
    }
}
