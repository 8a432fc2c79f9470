//! Small integer number-theory helpers shared across the crate.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`, ascending. Empty for `n <= 1`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Full factorization as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// p-adic valuation of a nonzero integer. Panics on zero.
pub fn valuation(n: u64, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut n = n;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn valuation_big(n: &BigUint, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Splits a nonzero integer as `unit * rest` where `unit` is the signed
/// product of all prime powers from `primes`, and `rest` is positive and
/// coprime to every prime in `primes`.
pub fn split_off_primes(n: &BigInt, primes: &[u64]) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let mut rest = n.magnitude().clone();
    let mut unit = BigUint::one();
    for &p in primes {
        let pb = BigUint::from(p);
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            unit *= &pb;
        }
    }
    let mut unit = BigInt::from(unit);
    if n.sign() == num_bigint::Sign::Minus {
        unit = -unit;
    }
    (unit, BigInt::from(rest))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Generalized binomial coefficient `binom(k, n)` for any integer `k`.
pub fn binomial(k: i64, n: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..n as i64 {
        num *= BigInt::from(k - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// Serializes as a JSON number when it fits in `u64`, otherwise as a decimal string.
pub(crate) fn ser_biguint<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(n) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&n.to_string()),
    }
}
