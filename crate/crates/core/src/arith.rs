//! Exact integer helpers and the group ℚ/ℤ of local invariants.
//!
//! Small structural integers (conductors, moduli, group orders, denominators)
//! are `u64` with checked arithmetic; anything that is a product over a coset
//! space (weights, gcd terms) is a [`BigUint`]. Overflow is always reported as
//! [`Error::Overflow`], never wrapped.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Inputs below this bound are tested with a deterministic Miller-Rabin base
/// set; above it a fixed set of [`BIG_PRIME_ROUNDS`] prime bases is used.
pub const PRIME_DETERMINISTIC_BOUND: u128 = 1 << 64;

/// Number of Miller-Rabin rounds (bases 2, 3, 5, ...) for big inputs.
pub const BIG_PRIME_ROUNDS: usize = 24;

const SMALL_PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// gcd with the convention gcd(0, 0) = 0, so gcd(n, 0) = n.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

/// Positive gcd; rejects gcd(0, 0).
pub fn positive_gcd(a: u64, b: u64) -> Result<u64> {
    match gcd(a, b) {
        0 => Err(Error::Zero("gcd(0, 0)")),
        g => Ok(g),
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit inputs.
///
/// Bases 2..37 are a known deterministic witness set for all n < 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES[..12] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (d, s) = odd_part(n - 1);
    'witness: for &a in &SMALL_PRIMES[..12] {
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

fn odd_part(mut d: u64) -> (u64, u32) {
    let s = d.trailing_zeros();
    d >>= s;
    (d, s)
}

/// Primality for arbitrary precision inputs.
///
/// Deterministic below [`PRIME_DETERMINISTIC_BOUND`]; above it this is a
/// Miller-Rabin test with the first [`BIG_PRIME_ROUNDS`] primes as bases, so
/// the answer is reproducible but only probabilistically certain.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in &SMALL_PRIMES[..BIG_PRIME_ROUNDS] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors by trial division (desk-scale inputs only).
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exact power of a prime dividing an integer: p^e | n and p^(e+1) ∤ n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Valuation {
    pub p: u64,
    pub e: u32,
}

pub fn exact_valuation(p: u64, n: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::Zero("valuation argument"));
    }
    Ok(Valuation {
        p,
        e: valuation(p, n),
    })
}

/// v_p(n) for n ≥ 1, without the primality check.
pub(crate) fn valuation(p: u64, mut n: u64) -> u32 {
    debug_assert!(n > 0 && p > 1);
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// v_p(n) for a positive big integer.
pub fn valuation_big(p: u64, n: &BigUint) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n.is_zero() {
        return Err(Error::Zero("valuation argument"));
    }
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            return Ok(e);
        }
        n = q;
        e += 1;
    }
}

/// Whether a/(a,d) divides b/(b,d), for a | b.
///
/// This is always true; the function exists so the claim can be checked.
pub fn reduced_divides(a: u64, b: u64, d: u64) -> Result<bool> {
    if a == 0 || b == 0 || d == 0 {
        return Err(Error::Zero("reduced_divides argument"));
    }
    if !b.is_multiple_of(a) {
        return Err(Error::NotDivisible { a, b });
    }
    let lhs = a / gcd(a, d);
    let rhs = b / gcd(b, d);
    Ok(rhs.is_multiple_of(lhs))
}

/// An element of ℚ/ℤ in lowest terms, `0 ≤ num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: u64,
    den: u64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    /// Reduces `num/den` modulo 1. Negative numerators are allowed.
    pub fn new(num: i128, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invariant("zero denominator".into()));
        }
        let r = num.rem_euclid(den as i128) as u64;
        let g = gcd(r, den);
        // gcd(0, den) = den, so zero reduces to 0/1
        Ok(QmodZ {
            num: r / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Smallest k ≥ 1 with k·x ≡ 0.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn checked_add(self, other: QmodZ) -> Result<QmodZ> {
        let den = lcm(self.den, other.den)?;
        let a = self.num as u128 * (den / self.den) as u128;
        let b = other.num as u128 * (den / other.den) as u128;
        QmodZ::new(((a + b) % den as u128) as i128, den)
    }

    /// k·x for any integer k.
    pub fn scale(self, k: i64) -> QmodZ {
        let k = (k as i128).rem_euclid(self.den as i128);
        QmodZ::new(k * self.num as i128, self.den).expect("positive denominator")
    }

    /// k·x for a non-negative multiplier given as u64.
    pub fn scale_u64(self, k: u64) -> QmodZ {
        let k = (k % self.den) as i128;
        QmodZ::new(k * self.num as i128, self.den).expect("positive denominator")
    }
}

impl Default for QmodZ {
    fn default() -> Self {
        QmodZ::ZERO
    }
}

/// Brauer-group addition.
pub fn qmz_add(x: QmodZ, y: QmodZ) -> Result<QmodZ> {
    x.checked_add(y)
}

pub fn qmz_order(x: QmodZ) -> u64 {
    x.order()
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::ops::Neg for QmodZ {
    type Output = QmodZ;

    fn neg(self) -> QmodZ {
        QmodZ::new(-(self.num as i128), self.den).expect("positive denominator")
    }
}

impl FromStr for QmodZ {
    type Err = Error;

    /// Parses `"num/den"` or a bare integer. Signs are allowed on the numerator.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invariant(format!("cannot parse {s:?} as num/den"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<i128>().map_err(|_| bad())?,
                d.trim().parse::<u64>().map_err(|_| bad())?,
            ),
            None => (s.parse::<i128>().map_err(|_| bad())?, 1),
        };
        QmodZ::new(num, den)
    }
}

impl serde::Serialize for QmodZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Multiplicative order of `a` modulo `m` (a must be a unit).
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, a, m);
        k += 1;
    }
    Some(k)
}

/// Euler's totient by trial factorization.
pub fn totient(m: u64) -> u64 {
    prime_divisors(m).into_iter().fold(m, |acc, p| acc / p * (p - 1))
}

pub(crate) fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i128, d: u64) -> QmodZ {
        QmodZ::new(n, d).unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(qmz_add(q(1, 2), q(1, 2)).unwrap(), QmodZ::ZERO);
        assert_eq!(qmz_add(q(1, 3), q(1, 3)).unwrap(), q(2, 3));
        // 1/4 + 5/6 = 3/12 + 10/12 = 13/12 ≡ 1/12
        assert_eq!(qmz_add(q(1, 4), q(5, 6)).unwrap(), q(1, 12));
    }

    #[test]
    fn order_examples() {
        assert_eq!(qmz_order(QmodZ::ZERO), 1);
        assert_eq!(qmz_order(q(1, 2)), 2);
        assert_eq!(qmz_order(q(3, 4)), 4);
        assert_eq!(qmz_order(q(6, 8)), 4);
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(exact_valuation(2, 12).unwrap().e, 2);
        assert_eq!(exact_valuation(3, 12).unwrap().e, 1);
        assert_eq!(exact_valuation(5, 12).unwrap().e, 0);
        assert_eq!(exact_valuation(4, 12), Err(Error::NotPrime(4)));
        assert!(matches!(exact_valuation(2, 0), Err(Error::Zero(_))));
    }

    #[test]
    fn reduced_divides_examples() {
        assert!(reduced_divides(2, 4, 2).unwrap());
        assert!(reduced_divides(6, 12, 4).unwrap());
        assert!(reduced_divides(3, 9, 3).unwrap());
        assert_eq!(reduced_divides(4, 6, 1), Err(Error::NotDivisible { a: 4, b: 6 }));
    }

    #[test]
    fn reduced_divides_exhaustive() {
        for a in 1..=200u64 {
            for b in (a..=400).step_by(a as usize) {
                for d in 1..=200 {
                    assert!(reduced_divides(a, b, d).unwrap(), "a={a} b={b} d={d}");
                }
            }
        }
    }

    #[test]
    fn gcd_with_zero() {
        for n in 1..50 {
            assert_eq!(gcd(n, 0), n);
            assert_eq!(n / gcd(n, 0), 1);
        }
        assert_eq!(gcd(0, 0), 0);
        assert!(positive_gcd(0, 0).is_err());
    }

    #[test]
    fn primality_matches_sieve() {
        let limit = 5000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "{n}");
        }
        // strong pseudoprimes to small bases
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_primality() {
        let m127 = (BigUint::one() << 127u32) - BigUint::one();
        assert!(is_prime_big(&m127));
        let composite = &m127 * BigUint::from(3u32);
        assert!(!is_prime_big(&composite));
        assert!(is_prime_big(&BigUint::from(97u32)));
    }

    #[test]
    fn parsing() {
        assert_eq!("1/2".parse::<QmodZ>().unwrap(), q(1, 2));
        assert_eq!("-1/3".parse::<QmodZ>().unwrap(), q(2, 3));
        assert_eq!("4/8".parse::<QmodZ>().unwrap(), q(1, 2));
        assert_eq!("0".parse::<QmodZ>().unwrap(), QmodZ::ZERO);
        assert!("1/0".parse::<QmodZ>().is_err());
        assert!("x/2".parse::<QmodZ>().is_err());
    }

    #[test]
    fn group_axioms_on_grid() {
        let mut elems = Vec::new();
        for d in 1..=24u64 {
            for n in 0..d {
                if gcd(n, d) == 1 || n == 0 && d == 1 {
                    elems.push(q(n as i128, d));
                }
            }
        }
        let sample: Vec<_> = elems.iter().step_by(3).copied().collect();
        for &x in &sample {
            assert_eq!(x.checked_add(QmodZ::ZERO).unwrap(), x);
            assert_eq!(x.checked_add(-x).unwrap(), QmodZ::ZERO);
            for &y in &sample {
                assert_eq!(x.checked_add(y).unwrap(), y.checked_add(x).unwrap());
                for &z in sample.iter().step_by(7) {
                    let l = x.checked_add(y).unwrap().checked_add(z).unwrap();
                    let r = x.checked_add(y.checked_add(z).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn order_is_minimal_annihilator(n in -500i128..500, d in 1u64..200) {
            let x = q(n, d);
            let k = qmz_order(x);
            prop_assert!(x.scale_u64(k).is_zero());
            for j in 1..k {
                prop_assert!(!x.scale_u64(j).is_zero());
            }
        }

        #[test]
        fn valuation_is_exact(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), n in 1u64..1_000_000) {
            let e = exact_valuation(p, n).unwrap().e;
            prop_assert_eq!(n % p.pow(e), 0);
            prop_assert_ne!(n % p.pow(e + 1), 0);
        }
    }
}
