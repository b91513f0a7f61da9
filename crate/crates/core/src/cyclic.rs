//! The multiplicative group of `F_{Q^N}` modelled as `Z/(Q^N - 1)`.
//!
//! An element is stored as its exponent `e` with respect to some fixed
//! generator. Orders, degrees over subfields, Frobenius orbits and the
//! ℓ-regular decomposition only depend on the cyclic structure, so the
//! generator never has to be chosen.

use std::fmt;

use crate::arith::{self, gcd, mul_mod, pow_minus_one, pow_mod, Nat};
use crate::error::{invalid, Error, Result};
use crate::limits::Limits;

/// `F_{Q^N}^×` for a prime power `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AmbientField {
    base_card: Nat,
    degree: u32,
    modulus: Nat,
}

impl AmbientField {
    pub fn new(base_card: Nat, degree: u32) -> Result<Self> {
        if base_card < 2 || arith::is_prime_power(base_card)?.is_none() {
            return Err(invalid(format!("base cardinality {base_card} is not a prime power")));
        }
        if degree == 0 {
            return Err(invalid("field degree must be >= 1"));
        }
        let modulus = pow_minus_one(base_card, degree)?;
        Ok(AmbientField {
            base_card,
            degree,
            modulus,
        })
    }

    pub fn base_card(&self) -> Nat {
        self.base_card
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `Q^N - 1`.
    pub fn modulus(&self) -> Nat {
        self.modulus
    }

    pub fn identity(&self) -> Element {
        Element {
            ambient: *self,
            exponent: 0,
        }
    }

    pub fn element(&self, exponent: Nat) -> Result<Element> {
        if exponent >= self.modulus {
            return Err(invalid(format!(
                "exponent {exponent} out of range for modulus {}",
                self.modulus
            )));
        }
        Ok(Element {
            ambient: *self,
            exponent,
        })
    }

    /// Smallest exponent of an element of the given order.
    pub fn element_of_order(&self, order: Nat) -> Result<Element> {
        if order == 0 || self.modulus % order != 0 {
            return Err(invalid(format!(
                "order {order} does not divide {}",
                self.modulus
            )));
        }
        self.element((self.modulus / order) % self.modulus)
    }

    /// The `k` with `sub_card = Q^k` and `k | N`.
    pub fn subfield_degree(&self, sub_card: Nat) -> Result<u32> {
        match arith::exact_log(sub_card, self.base_card) {
            Some(k) if k >= 1 && self.degree % k == 0 => Ok(k),
            _ => Err(Error::InvalidSubfield {
                sub_card,
                base: self.base_card,
                degree: self.degree,
            }),
        }
    }

    /// The subfield cardinality whose Frobenius generates the same group of
    /// automorphisms as `x ↦ x^{Q^power}`, namely `Q^{gcd(power, N)}`.
    pub fn orbit_card_for_power(&self, power: u32) -> Result<Nat> {
        arith::checked_pow(self.base_card, num_integer::gcd(power, self.degree))
    }

    /// `(ℓ^α, M')` with `M = ℓ^α · M'` and `ℓ ∤ M'`.
    pub fn l_split(&self, ell: Nat) -> Result<(Nat, Nat)> {
        let prime_part = arith::l_prime_part(self.modulus, ell)?;
        Ok((self.modulus / prime_part, prime_part))
    }

    /// Exponents of the ℓ-primary component, ascending.
    pub fn l_sylow(&self, ell: Nat) -> Result<impl Iterator<Item = Element> + '_> {
        let (sylow, cofactor) = self.l_split(ell)?;
        Ok((0..sylow).map(move |j| Element {
            ambient: *self,
            exponent: j * cofactor,
        }))
    }

    fn check_ell(&self, ell: Nat) -> Result<()> {
        if !arith::is_prime(ell) {
            return Err(invalid(format!("{ell} is not prime")));
        }
        if self.base_card % ell == 0 {
            return Err(invalid(format!("ℓ = {ell} divides Q = {}", self.base_card)));
        }
        Ok(())
    }
}

impl fmt::Display for AmbientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.base_card, self.degree)
    }
}

/// An element `g^exponent` of an [`AmbientField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Element {
    ambient: AmbientField,
    exponent: Nat,
}

impl Element {
    pub fn ambient(&self) -> &AmbientField {
        &self.ambient
    }

    pub fn exponent(&self) -> Nat {
        self.exponent
    }

    pub fn is_identity(&self) -> bool {
        self.exponent == 0
    }

    pub fn order(&self) -> Nat {
        self.ambient.modulus / gcd(self.exponent, self.ambient.modulus)
    }

    /// Group product (sum of exponents).
    pub fn mul(&self, other: &Element) -> Result<Element> {
        if self.ambient != other.ambient {
            return Err(invalid("elements live in different ambient fields"));
        }
        let m = self.ambient.modulus;
        let (a, b) = (self.exponent, other.exponent);
        let exponent = if a >= m - b { a - (m - b) } else { a + b };
        Ok(Element {
            ambient: self.ambient,
            exponent,
        })
    }

    /// Degree of the element over the subfield with `sub_card` elements:
    /// the size of its orbit under `e ↦ sub_card · e`.
    pub fn degree_over(&self, sub_card: Nat) -> Result<u32> {
        let k = self.ambient.subfield_degree(sub_card)?;
        let m = self.ambient.modulus;
        let span = self.ambient.degree / k;
        for d in (1..=span).filter(|d| span % d == 0) {
            let shift = (pow_mod(sub_card, d as Nat, m) + m - 1) % m;
            if mul_mod(shift, self.exponent, m) == 0 {
                return Ok(d);
            }
        }
        unreachable!("Q^N fixes every element")
    }

    pub fn frobenius(&self, sub_card: Nat) -> Result<Element> {
        self.ambient.subfield_degree(sub_card)?;
        Ok(self.frobenius_unchecked(sub_card))
    }

    fn frobenius_unchecked(&self, sub_card: Nat) -> Element {
        Element {
            ambient: self.ambient,
            exponent: mul_mod(sub_card, self.exponent, self.ambient.modulus),
        }
    }

    /// The Frobenius orbit in ascending exponent order.
    pub fn orbit(&self, sub_card: Nat) -> Result<Vec<Element>> {
        self.ambient.subfield_degree(sub_card)?;
        let mut out = vec![*self];
        let mut cur = self.frobenius_unchecked(sub_card);
        while cur != *self {
            out.push(cur);
            cur = cur.frobenius_unchecked(sub_card);
        }
        out.sort_by_key(|e| e.exponent);
        Ok(out)
    }

    pub fn orbit_size(&self, sub_card: Nat) -> Result<u32> {
        self.degree_over(sub_card)
    }

    /// Minimal exponent of the Frobenius orbit.
    pub fn orbit_representative(&self, sub_card: Nat) -> Result<Element> {
        Ok(self.orbit(sub_card)?[0])
    }

    /// The unique `y` of order prime to `ell` with `x / y` of ℓ-power order,
    /// obtained by CRT on `(e mod ℓ^α, e mod M')`.
    pub fn l_regular_part(&self, ell: Nat) -> Result<Element> {
        self.ambient.check_ell(ell)?;
        let (sylow, cofactor) = self.ambient.l_split(ell)?;
        if cofactor == 1 {
            return Ok(self.ambient.identity());
        }
        // e' ≡ 0 (mod ℓ^α), e' ≡ e (mod M')
        let inv = arith::inv_mod(sylow % cofactor, cofactor)?;
        let t = mul_mod(self.exponent % cofactor, inv, cofactor);
        Ok(Element {
            ambient: self.ambient,
            exponent: sylow * t,
        })
    }

    /// The ℓ-primary factor `z = x / y`.
    pub fn l_singular_part(&self, ell: Nat) -> Result<Element> {
        let y = self.l_regular_part(ell)?;
        let m = self.ambient.modulus;
        Ok(Element {
            ambient: self.ambient,
            exponent: (self.exponent + m - y.exponent) % m,
        })
    }

    pub fn is_l_regular(&self, ell: Nat) -> bool {
        self.order() % ell != 0
    }

    /// Image under `F_{Q^N} ⊂ F_{Q^{N'}}` for `N | N'`.
    pub fn embed(&self, larger_degree: u32) -> Result<Element> {
        if larger_degree == 0 || larger_degree % self.ambient.degree != 0 {
            return Err(invalid(format!(
                "degree {} does not divide {larger_degree}",
                self.ambient.degree
            )));
        }
        let big = AmbientField::new(self.ambient.base_card, larger_degree)?;
        let factor = big.modulus / self.ambient.modulus;
        Ok(Element {
            ambient: big,
            exponent: self.exponent * factor,
        })
    }

    /// Inverse of [`Element::embed`]: the same element seen in the subfield
    /// of degree `smaller_degree`, which must contain it.
    pub fn restrict(&self, smaller_degree: u32) -> Result<Element> {
        if smaller_degree == 0 || self.ambient.degree % smaller_degree != 0 {
            return Err(invalid(format!(
                "degree {smaller_degree} does not divide {}",
                self.ambient.degree
            )));
        }
        let small = AmbientField::new(self.ambient.base_card, smaller_degree)?;
        let factor = self.ambient.modulus / small.modulus;
        if self.exponent % factor != 0 {
            return Err(invalid(format!(
                "element does not lie in the degree-{smaller_degree} subfield"
            )));
        }
        Ok(Element {
            ambient: small,
            exponent: self.exponent / factor,
        })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g^{} in {}", self.exponent, self.ambient)
    }
}

/// Canonical orbit representatives (under `e ↦ sub_card · e`) of the orbits
/// whose representative satisfies `pred`, in ascending order.
///
/// `pred` should be constant on Frobenius orbits; it is evaluated on the
/// minimal exponent of each orbit.
pub fn enumerate_by_predicate<F>(
    ambient: &AmbientField,
    sub_card: Nat,
    limits: &Limits,
    mut pred: F,
) -> Result<Vec<Element>>
where
    F: FnMut(&Element) -> bool,
{
    limits.check(ambient.modulus)?;
    ambient.subfield_degree(sub_card)?;
    let m = ambient.modulus as usize;
    let mut seen = vec![false; m];
    let mut reps = Vec::new();
    for e in 0..m {
        if seen[e] {
            continue;
        }
        let x = Element {
            ambient: *ambient,
            exponent: e as Nat,
        };
        let mut cur = x;
        loop {
            seen[cur.exponent as usize] = true;
            cur = cur.frobenius_unchecked(sub_card);
            if cur == x {
                break;
            }
        }
        if pred(&x) {
            reps.push(x);
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(q: Nat, n: u32, e: Nat) -> Element {
        AmbientField::new(q, n).unwrap().element(e).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(el(2, 6, 7).order(), 9);
        assert_eq!(el(3, 4, 0).order(), 1);
        assert_eq!(el(2, 2, 1).order(), 3);
    }

    #[test]
    fn degrees() {
        assert_eq!(el(2, 6, 7).degree_over(2).unwrap(), 6);
        assert_eq!(el(2, 2, 1).degree_over(4).unwrap(), 1);
        assert_eq!(el(2, 6, 0).degree_over(8).unwrap(), 1);
        assert!(matches!(
            el(2, 6, 7).degree_over(16),
            Err(Error::InvalidSubfield { .. })
        ));
        assert!(el(2, 6, 7).degree_over(3).is_err());
    }

    #[test]
    fn frobenius_action() {
        assert_eq!(el(2, 2, 1).frobenius(2).unwrap().exponent(), 2);
        assert_eq!(el(2, 2, 0).frobenius(2).unwrap().exponent(), 0);
        assert_eq!(el(2, 6, 7).frobenius(2).unwrap().exponent(), 14);
    }

    #[test]
    fn regular_parts() {
        assert_eq!(el(2, 6, 7).l_regular_part(3).unwrap().exponent(), 0);
        assert_eq!(el(2, 6, 1).l_regular_part(3).unwrap().exponent(), 36);
        let y = el(2, 6, 36);
        assert_eq!(y.l_regular_part(3).unwrap(), y);
        assert!(el(3, 2, 1).l_regular_part(3).is_err());
    }

    #[test]
    fn orbits() {
        let x = el(2, 6, 7);
        let orbit: Vec<Nat> = x.orbit(2).unwrap().iter().map(|e| e.exponent()).collect();
        assert_eq!(orbit, vec![7, 14, 28, 35, 49, 56]);
        assert_eq!(x.orbit_size(2).unwrap(), 6);
        assert_eq!(el(2, 6, 0).orbit_representative(2).unwrap().exponent(), 0);
        assert_eq!(el(2, 2, 2).orbit_representative(2).unwrap().exponent(), 1);
    }

    #[test]
    fn enumeration() {
        let lim = Limits::default();
        let f4 = AmbientField::new(2, 2).unwrap();
        let reps = enumerate_by_predicate(&f4, 2, &lim, |x| arith::exact_log(x.order(), 3).is_some()).unwrap();
        assert_eq!(reps.iter().map(|e| e.exponent()).collect::<Vec<_>>(), vec![0, 1]);
        assert!(enumerate_by_predicate(&f4, 2, &lim, |_| false).unwrap().is_empty());
        let f64_ = AmbientField::new(2, 6).unwrap();
        let reps = enumerate_by_predicate(&f64_, 2, &lim, |x| {
            x.degree_over(2).unwrap() == 6 && x.l_regular_part(3).unwrap().is_identity()
        })
        .unwrap();
        assert_eq!(reps.len(), 1);
        let tiny = Limits::with_cap(10);
        assert_eq!(
            enumerate_by_predicate(&f64_, 2, &tiny, |_| true),
            Err(Error::CapExceeded { modulus: 63, cap: 10 })
        );
    }

    #[test]
    fn embedding() {
        assert_eq!(el(2, 2, 0).embed(6).unwrap().exponent(), 0);
        assert_eq!(el(2, 1, 0).embed(6).unwrap().exponent(), 0);
        let x = el(2, 2, 1).embed(6).unwrap();
        assert_eq!(x.exponent(), 21);
        assert_eq!(x.order(), 3);
        assert_eq!(x.restrict(2).unwrap(), el(2, 2, 1));
        assert!(el(2, 2, 1).embed(5).is_err());
        assert!(el(2, 6, 1).restrict(2).is_err());
    }

    #[test]
    fn degree_is_orbit_size_exhaustive() {
        for (q, n) in [(2u128, 6u32), (3, 4), (4, 3), (5, 4), (2, 12), (7, 3), (9, 2)] {
            let amb = AmbientField::new(q, n).unwrap();
            assert!(amb.modulus() <= 10_000);
            for k in arith::divisors(n as Nat).unwrap() {
                let sub = q.pow(k as u32);
                for e in 0..amb.modulus() {
                    let x = amb.element(e).unwrap();
                    let mut cur = x;
                    let mut size = 0;
                    loop {
                        cur = Element { ambient: amb, exponent: cur.exponent * sub % amb.modulus() };
                        size += 1;
                        if cur == x {
                            break;
                        }
                    }
                    let deg = x.degree_over(sub).unwrap();
                    assert_eq!(deg, size, "q={q} n={n} k={k} e={e}");
                    let expected = arith::mult_order(sub, x.order()).unwrap();
                    assert_eq!(deg as Nat, expected);
                }
            }
        }
    }

    fn ambient_strategy() -> impl Strategy<Value = AmbientField> {
        prop::sample::select(vec![(2u128, 6u32), (2, 4), (3, 4), (4, 3), (5, 4), (2, 10), (3, 6), (7, 2)])
            .prop_map(|(q, n)| AmbientField::new(q, n).unwrap())
    }

    proptest! {
        #[test]
        fn regular_part_laws(amb in ambient_strategy(), raw in any::<u64>(), ell in prop::sample::select(vec![2u128, 3, 5, 7, 13])) {
            prop_assume!(amb.base_card() % ell != 0);
            let x = amb.element(raw as Nat % amb.modulus()).unwrap();
            let y = x.l_regular_part(ell).unwrap();
            prop_assert_eq!(y.l_regular_part(ell).unwrap(), y);
            prop_assert_eq!(y.order(), arith::l_prime_part(x.order(), ell).unwrap());
            prop_assert!(arith::exact_log(x.order() / y.order(), ell).is_some());
            let fx = x.frobenius(amb.base_card()).unwrap();
            prop_assert_eq!(fx.l_regular_part(ell).unwrap(), y.frobenius(amb.base_card()).unwrap());
            let z = x.l_singular_part(ell).unwrap();
            prop_assert!(arith::exact_log(z.order(), ell).is_some());
            prop_assert_eq!(y.mul(&z).unwrap(), x);
        }

        #[test]
        fn embed_preserves(raw in any::<u64>(), (q, small, big) in prop::sample::select(vec![(2u128, 2u32, 6u32), (2, 3, 6), (3, 2, 4), (2, 1, 5), (5, 2, 4)])) {
            let amb = AmbientField::new(q, small).unwrap();
            let x = amb.element(raw as Nat % amb.modulus()).unwrap();
            let y = x.embed(big).unwrap();
            prop_assert_eq!(y.order(), x.order());
            for k in arith::divisors(small as Nat).unwrap() {
                let sub = q.pow(k as u32);
                prop_assert_eq!(y.degree_over(sub).unwrap(), x.degree_over(sub).unwrap());
            }
            prop_assert_eq!(y.restrict(small).unwrap(), x);
        }

        #[test]
        fn subfield_degree_formula(amb in ambient_strategy(), raw in any::<u64>()) {
            let x = amb.element(raw as Nat % amb.modulus()).unwrap();
            let q = amb.base_card();
            let deg = x.degree_over(q).unwrap();
            for k in arith::divisors(amb.degree() as Nat).unwrap() {
                let k = k as u32;
                prop_assert_eq!(x.degree_over(q.pow(k)).unwrap(), deg / num_integer::gcd(deg, k));
            }
        }
    }
}
