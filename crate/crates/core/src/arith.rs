//! Exact elementary number theory on `u128`.
//!
//! Every routine is total over its stated preconditions; violations come back
//! as [`Error`] values. Products that could exceed `u128` go through
//! [`mul_mod`] (which never overflows) or through checked arithmetic that
//! surfaces [`Error::Overflow`].

use num_integer::Integer;

use crate::error::{invalid, Error, Result};

/// Unsigned exact integer used for counts and moduli.
pub type Nat = u128;

pub fn gcd(a: Nat, b: Nat) -> Nat {
    a.gcd(&b)
}

pub fn lcm(a: Nat, b: Nat) -> Result<Nat> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::Overflow(format!("lcm({a}, {b})")))
}

pub fn checked_pow(base: Nat, exp: u32) -> Result<Nat> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))
}

/// `base^exp - 1`, the cardinality of a multiplicative group.
pub fn pow_minus_one(base: Nat, exp: u32) -> Result<Nat> {
    let p = checked_pow(base, exp)?;
    p.checked_sub(1)
        .ok_or_else(|| invalid(format!("{base}^{exp} - 1 is negative")))
}

fn add_mod(a: Nat, b: Nat, m: Nat) -> Nat {
    // a, b < m
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

/// `a * b mod m` without intermediate overflow. `m` must be nonzero.
pub fn mul_mod(a: Nat, b: Nat, m: Nat) -> Nat {
    debug_assert!(m > 0);
    if m <= u32::MAX as Nat && a <= u32::MAX as Nat && b <= u32::MAX as Nat {
        let m = m as u64;
        return ((a as u64 % m) * (b as u64 % m) % m) as Nat;
    }
    let (a, b) = (a % m, b % m);
    if a <= u64::MAX as Nat && b <= u64::MAX as Nat {
        return (a * b) % m;
    }
    let (mut acc, mut base, mut e) = (0, a, b);
    while e > 0 {
        if e & 1 == 1 {
            acc = add_mod(acc, base, m);
        }
        base = add_mod(base, base, m);
        e >>= 1;
    }
    acc
}

pub fn pow_mod(base: Nat, mut exp: Nat, m: Nat) -> Nat {
    if m == 1 {
        return 0;
    }
    let mut result = 1;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn inv_mod(a: Nat, m: Nat) -> Result<Nat> {
    if m == 0 {
        return Err(invalid("modulus 0"));
    }
    if m == 1 {
        return Ok(0);
    }
    let (mut old_r, mut r) = (a % m, m);
    let (mut old_s, mut s): (Nat, Nat) = (1, 0);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        let qs = mul_mod(q % m, s, m);
        let next = if old_s >= qs { old_s - qs } else { m - (qs - old_s) };
        (old_s, s) = (s, next);
    }
    if old_r != 1 {
        return Err(invalid(format!("{a} is not invertible modulo {m}")));
    }
    Ok(old_s % m)
}

const SMALL_PRIMES: [Nat; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Miller-Rabin with the first 25 primes as bases. Deterministic below
/// 3.3 * 10^24; beyond that a composite passing all 25 bases is not
/// expected at the sizes this crate handles.
pub fn is_prime(n: Nat) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: Nat) -> Nat {
    // Brent's variant; n is odd, composite and not a prime power of a
    // small prime.
    let mut c: Nat = 1;
    loop {
        let f = |x: Nat| add_mod(mul_mod(x, x, n), c % n, n);
        let (mut x, mut y, mut d) = (2, 2, 1);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: Nat, out: &mut Vec<Nat>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factorize(n: Nat) -> Result<Vec<(Nat, u32)>> {
    if n == 0 {
        return Err(invalid("cannot factor 0"));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    let mut p: Nat = 2;
    while p * p <= rest && p < 10_000 {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factor_into(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(Nat, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

fn require_prime(ell: Nat) -> Result<()> {
    if is_prime(ell) {
        Ok(())
    } else {
        Err(invalid(format!("{ell} is not prime")))
    }
}

/// Largest `k` with `ell^k | x`.
pub fn l_val(x: Nat, ell: Nat) -> Result<u32> {
    if x == 0 {
        return Err(Error::UndefinedInput("valuation of 0".into()));
    }
    require_prime(ell)?;
    let mut k = 0;
    let mut x = x;
    while x % ell == 0 {
        x /= ell;
        k += 1;
    }
    Ok(k)
}

/// `ell^{l_val(x, ell)}`.
pub fn l_part(x: Nat, ell: Nat) -> Result<Nat> {
    Ok(x / l_prime_part(x, ell)?)
}

/// `x / ell^{l_val(x, ell)}`, the largest divisor of `x` prime to `ell`.
pub fn l_prime_part(x: Nat, ell: Nat) -> Result<Nat> {
    if x == 0 {
        return Err(Error::UndefinedInput("l-prime part of 0".into()));
    }
    require_prime(ell)?;
    let mut x = x;
    while x % ell == 0 {
        x /= ell;
    }
    Ok(x)
}

pub fn moebius(n: Nat) -> Result<i8> {
    if n == 0 {
        return Err(invalid("moebius(0) is undefined"));
    }
    let f = factorize(n)?;
    if f.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.len() % 2 == 0 { 1 } else { -1 })
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: Nat) -> Result<Vec<Nat>> {
    if n == 0 {
        return Err(invalid("divisors of 0"));
    }
    let mut divs = vec![1];
    for (p, e) in factorize(n)? {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

fn carmichael(n: Nat) -> Result<Nat> {
    let mut lambda = 1;
    for (p, e) in factorize(n)? {
        let pe1 = checked_pow(p, e - 1)?;
        let l = if p == 2 && e >= 3 {
            pe1 / 2
        } else {
            pe1 * (p - 1)
        };
        lambda = lcm(lambda, l)?;
    }
    Ok(lambda)
}

/// Multiplicative order of `a` modulo `n`; `1` when `n == 1`.
pub fn mult_order(a: Nat, n: Nat) -> Result<Nat> {
    if n == 0 {
        return Err(invalid("modulus 0"));
    }
    if n == 1 {
        return Ok(1);
    }
    if gcd(a % n, n) != 1 {
        return Err(invalid(format!("gcd({a}, {n}) != 1")));
    }
    let mut ord = carmichael(n)?;
    for (p, _) in factorize(ord)? {
        while ord % p == 0 && pow_mod(a, ord / p, n) == 1 {
            ord /= p;
        }
    }
    Ok(ord)
}

/// `Some((p, e))` with `q = p^e` when `q` is a prime power.
pub fn is_prime_power(q: Nat) -> Result<Option<(Nat, u32)>> {
    if q <= 1 {
        return Err(invalid(format!("{q} <= 1 cannot be a prime power")));
    }
    let f = factorize(q)?;
    Ok(match f.as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    })
}

/// Exponent `k` with `value = base^k`, if any.
pub fn exact_log(value: Nat, base: Nat) -> Option<u32> {
    if base < 2 || value == 0 {
        return None;
    }
    let mut v = value;
    let mut k = 0;
    while v % base == 0 {
        v /= base;
        k += 1;
    }
    (v == 1).then_some(k)
}

pub(crate) fn to_u32(n: Nat, what: &str) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::Overflow(format!("{what} = {n} does not fit in u32")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_val(mut x: Nat, ell: Nat) -> u32 {
        let mut k = 0;
        while x % ell == 0 {
            x /= ell;
            k += 1;
        }
        k
    }

    #[test]
    fn valuations() {
        assert_eq!(l_val(63, 3).unwrap(), 2);
        assert_eq!(l_val(1, 5).unwrap(), 0);
        assert_eq!(l_val((1 << 6) - 1, 7).unwrap(), trial_val(63, 7));
        assert_eq!(l_val(63, 7).unwrap(), 1);
        assert!(matches!(l_val(0, 3), Err(Error::UndefinedInput(_))));
        assert!(matches!(l_val(9, 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 7).unwrap(), 5);
        assert_eq!(inv_mod(9, 7).unwrap(), 4);
        assert!(inv_mod(6, 9).is_err());
        let m127 = (1u128 << 127) - 1;
        let a = 123_456_789_012_345_678_901u128;
        assert_eq!(mul_mod(a, inv_mod(a, m127).unwrap(), m127), 1);
    }

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(1).unwrap(), 1);
        assert_eq!(moebius(6).unwrap(), 1);
        assert_eq!(moebius(9).unwrap(), 0);
        assert_eq!(moebius(30).unwrap(), -1);
        assert!(moebius(0).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(2, 9).unwrap(), 6);
        assert_eq!(mult_order(2, 3).unwrap(), 2);
        assert_eq!(mult_order(7, 1).unwrap(), 1);
        assert!(mult_order(3, 9).is_err());
    }

    #[test]
    fn prime_parts() {
        assert_eq!(l_prime_part(6, 3).unwrap(), 2);
        assert_eq!(l_prime_part(8, 3).unwrap(), 8);
        assert_eq!(l_prime_part(18, 3).unwrap(), 2);
        assert_eq!(l_part(18, 3).unwrap(), 9);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(6).unwrap(), vec![1, 2, 3, 6]);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert!(divisors(0).is_err());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(is_prime_power(8).unwrap(), Some((2, 3)));
        assert_eq!(is_prime_power(6).unwrap(), None);
        assert_eq!(is_prime_power(49).unwrap(), Some((7, 2)));
        assert!(is_prime_power(1).is_err());
    }

    #[test]
    fn large_moduli() {
        // 2^127 - 1 is a Mersenne prime.
        let m127 = (1u128 << 127) - 1;
        assert!(is_prime(m127));
        assert_eq!(l_val(m127 - 1, 2).unwrap(), 1);
        assert_eq!(mult_order(2, m127).unwrap(), 127);
        // 2^64 + 1 = 274177 * 67280421310721
        let f6 = (1u128 << 64) + 1;
        assert_eq!(factorize(f6).unwrap(), vec![(274177, 1), (67280421310721, 1)]);
        assert!(checked_pow(2, 128).is_err());
    }

    #[test]
    fn mult_order_exhaustive_small() {
        for n in 1..=400u128 {
            for a in 1..n.max(2) {
                if gcd(a, n) != 1 {
                    continue;
                }
                let ord = mult_order(a, n).unwrap();
                let mut x = a % n;
                let mut k = 1;
                while x != 1 % n {
                    x = x * a % n;
                    k += 1;
                }
                assert_eq!(ord, k, "a={a} n={n}");
            }
        }
    }

    proptest! {
        #[test]
        fn valuation_splits(x in 1u128..1_000_000, ell in prop::sample::select(vec![2u128, 3, 5, 7, 11])) {
            let v = l_val(x, ell).unwrap();
            let pk = ell.pow(v);
            prop_assert_eq!(x % pk, 0);
            prop_assert!((x / pk) % ell != 0);
            prop_assert_eq!(l_prime_part(x, ell).unwrap() * pk, x);
        }

        #[test]
        fn moebius_sum(n in 1u128..5_000) {
            let s: i64 = divisors(n).unwrap().iter().map(|&d| moebius(d).unwrap() as i64).sum();
            prop_assert_eq!(s, (n == 1) as i64);
        }

        #[test]
        fn order_is_minimal(n in 1u128..10_000, a in 1u128..10_000) {
            prop_assume!(gcd(a, n) == 1);
            let k = mult_order(a, n).unwrap();
            prop_assert_eq!(pow_mod(a, k, n), 1 % n);
            for d in divisors(k).unwrap() {
                if d < k {
                    prop_assert_ne!(pow_mod(a, d, n), 1 % n);
                }
            }
        }

        #[test]
        fn mul_mod_matches_wide(a in any::<u64>(), b in any::<u64>(), m in 1u64..) {
            let expect = (a as u128 * b as u128) % m as u128;
            prop_assert_eq!(mul_mod(a as u128, b as u128, m as u128), expect);
        }
    }
}
