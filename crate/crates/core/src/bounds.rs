//! Supernatural numbers and the torsion bounds built from
//! `N_s = gcd_{k>1} k^∞ (k^s - 1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::arith::{factorize, is_prime, primes_up_to, valuation, valuation_big};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(e) => s.serialize_u32(*e),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => write!(f, "∞"),
        }
    }
}

/// Formal product of prime powers with exponents in `N ∪ {∞}`. Zero
/// exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Supernatural {
    exponents: BTreeMap<u64, Exponent>,
}

impl Supernatural {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn of_int(n: i64) -> Result<Self> {
        if n <= 0 {
            return Err(Error::DomainError(format!("supernatural of {n}: need n >= 1")));
        }
        Ok(Supernatural {
            exponents: factorize(n as u64)
                .into_iter()
                .map(|(p, e)| (p, Exponent::Finite(e)))
                .collect(),
        })
    }

    pub fn from_exponents(pairs: impl IntoIterator<Item = (u64, Exponent)>) -> Result<Self> {
        let mut exponents = BTreeMap::new();
        for (p, e) in pairs {
            if !is_prime(p) {
                return Err(Error::DomainError(format!("{p} is not prime")));
            }
            if e != Exponent::Finite(0) {
                exponents.insert(p, e);
            }
        }
        Ok(Supernatural { exponents })
    }

    pub fn exponent(&self, p: u64) -> Exponent {
        self.exponents.get(&p).copied().unwrap_or(Exponent::Finite(0))
    }

    pub fn support(&self) -> Vec<u64> {
        self.exponents.keys().copied().collect()
    }

    pub fn gcd(&self, other: &Supernatural) -> Supernatural {
        let exponents = self
            .exponents
            .iter()
            .filter_map(|(&p, &e)| other.exponents.get(&p).map(|&f| (p, e.min(f))))
            .collect();
        Supernatural { exponents }
    }

    /// The integer value, or `None` if some exponent is infinite.
    pub fn finite_part(&self) -> Option<BigUint> {
        let mut acc = BigUint::one();
        for (&p, &e) in &self.exponents {
            match e {
                Exponent::Finite(e) => acc *= BigUint::from(p).pow(e),
                Exponent::Infinite => return None,
            }
        }
        Some(acc)
    }

    /// Drops all primes above `bound`.
    pub fn truncate(&self, bound: u64) -> Supernatural {
        Supernatural {
            exponents: self.exponents.range(..=bound).map(|(&p, &e)| (p, e)).collect(),
        }
    }
}

impl fmt::Display for Supernatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| match e {
                Exponent::Finite(1) => p.to_string(),
                e => format!("{p}^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

fn check_positive(name: &str, s: i64) -> Result<u64> {
    if s <= 0 {
        return Err(Error::DomainError(format!("{name} = {s}: must be positive")));
    }
    Ok(s as u64)
}

/// `N_s` in closed form: `2` for odd `s`, otherwise
/// `2^{v_2(s)+2} · ∏ p^{v_p(s)+1}` over odd primes `p` with `(p-1) | s`.
pub fn n_s(s: i64) -> Result<BigUint> {
    let s = check_positive("s", s)?;
    if s % 2 == 1 {
        return Ok(BigUint::from(2u32));
    }
    let mut acc = BigUint::from(2u32).pow(valuation(s, 2) + 2);
    for p in primes_up_to(s + 1).into_iter().filter(|&p| p > 2 && s % (p - 1) == 0) {
        acc *= BigUint::from(p).pow(valuation(s, p) + 1);
    }
    Ok(acc)
}

/// Truncation of `gcd_k k^∞(k^s - 1)` to `2 <= k <= k_max` and primes up to
/// `prime_bound`. Each exponent is an upper bound for the true one.
pub fn n_s_oracle(s: i64, k_max: u64, prime_bound: u64) -> Result<Supernatural> {
    let s = check_positive("s", s)?;
    if k_max < 3 {
        return Err(Error::DomainError(format!("k_max = {k_max}: need k_max >= 3")));
    }
    if prime_bound < 2 {
        return Err(Error::DomainError(format!(
            "prime_bound = {prime_bound}: need prime_bound >= 2"
        )));
    }
    let exponent = u32::try_from(s).map_err(|_| Error::DomainError(format!("s = {s} too large")))?;
    let values: Vec<(u64, BigUint)> = (2..=k_max)
        .map(|k| (k, BigUint::from(k).pow(exponent) - 1u32))
        .collect();
    let mut pairs = Vec::new();
    for p in primes_up_to(prime_bound) {
        let e = values
            .iter()
            .filter(|(k, _)| k % p != 0)
            .map(|(_, v)| valuation_big(v, p))
            .min()
            .expect("k = 2 or k = 3 is prime to p");
        pairs.push((p, Exponent::Finite(e)));
    }
    Supernatural::from_exponents(pairs)
}

fn product_of_n(range: std::ops::RangeInclusive<i64>) -> BigUint {
    range.map(|s| n_s(s).expect("s >= 1")).fold(BigUint::one(), |a, b| a * b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiBound {
    #[serde(serialize_with = "crate::arith::ser_biguint")]
    pub bound: BigUint,
    pub support: Vec<u64>,
    /// Every prime of the support is at most `d - i`.
    pub support_ok: bool,
}

/// `N_1 N_2 ⋯ N_{d-i-1}`, which kills the kernel of the comparison map
/// from Chow groups to graded K-groups in dimension `i`.
pub fn phi_kernel_bound(d: i64, i: i64) -> Result<PhiBound> {
    if i < 0 || i > d {
        return Err(Error::DomainError(format!("need 0 <= i <= d, got d = {d}, i = {i}")));
    }
    let bound = product_of_n(1..=d - i - 1);
    let support = biguint_prime_support(&bound, (d - i).max(1) as u64);
    let support_ok = support.iter().all(|&p| p as i64 <= d - i);
    Ok(PhiBound {
        bound,
        support,
        support_ok,
    })
}

fn biguint_prime_support(n: &BigUint, hint: u64) -> Vec<u64> {
    // every prime of a product of N_s is at most (largest s) + 1
    primes_up_to(hint + 1)
        .into_iter()
        .filter(|&p| (n % BigUint::from(p)) == BigUint::from(0u32))
        .collect()
}

/// `N_1 N_2 ⋯ N_{i+1}`, which kills the kernel of the Bott map `CK_i -> CK_{i+1}`.
pub fn bott_kernel_bound(i: i64) -> Result<BigUint> {
    if i < 0 {
        return Err(Error::DomainError(format!("i = {i}: must be non-negative")));
    }
    Ok(product_of_n(1..=i + 1))
}

/// `⌊d/(p-1)⌋ + Σ_{i=1}^{⌊d/(p-1)⌋} v_p(i)`, the bound on `v_p(n_X) - v_p(d_X)`.
pub fn euler_index_gap_bound(d: i64, p: u64) -> Result<u64> {
    if d < 0 {
        return Err(Error::DomainError(format!("d = {d}: must be non-negative")));
    }
    if !is_prime(p) {
        return Err(Error::DomainError(format!("{p} is not prime")));
    }
    let t = d as u64 / (p - 1);
    Ok(t + (1..=t).map(|i| valuation(i, p) as u64).sum::<u64>())
}

/// `v_p(N_1 ⋯ N_d)`. Agrees with [`euler_index_gap_bound`] for odd `p` and
/// exceeds it for `p = 2` once `d >= 2`.
pub fn product_valuation(d: i64, p: u64) -> Result<u64> {
    if d < 0 {
        return Err(Error::DomainError(format!("d = {d}: must be non-negative")));
    }
    if !is_prime(p) {
        return Err(Error::DomainError(format!("{p} is not prime")));
    }
    Ok((1..=d).map(|s| valuation_big(&n_s(s).expect("s >= 1"), p) as u64).sum())
}

/// Primes dividing `N_s`. Each satisfies `(p - 1) | s`.
pub fn n_s_support(s: i64) -> Result<Vec<u64>> {
    let v = n_s(s)?;
    Ok(biguint_prime_support(&v, s as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn supernatural_basics() {
        let s = Supernatural::of_int(24).unwrap();
        assert_eq!(s.exponent(2), Exponent::Finite(3));
        assert_eq!(s.exponent(3), Exponent::Finite(1));
        assert_eq!(s.support(), vec![2, 3]);
        assert!(Supernatural::of_int(0).is_err());

        let a = Supernatural::from_exponents([(2, Exponent::Infinite), (3, Exponent::Finite(1))]).unwrap();
        let b = Supernatural::from_exponents([(2, Exponent::Finite(3)), (7, Exponent::Finite(2))]).unwrap();
        assert_eq!(a.gcd(&b), Supernatural::from_exponents([(2, Exponent::Finite(3))]).unwrap());
        assert_eq!(a.finite_part(), None);
        assert_eq!(b.finite_part(), Some(big(392)));
        assert_eq!(a.to_string(), "2^∞·3");
    }

    #[test]
    fn n_s_closed_form() {
        for s in [1, 3, 5, 7] {
            assert_eq!(n_s(s).unwrap(), big(2));
        }
        assert_eq!(n_s(2).unwrap(), big(24));
        assert_eq!(n_s(4).unwrap(), big(240));
        // 2^6 - 1 = 63 = 9·7, so 5 does not divide N_6
        assert_eq!(n_s(6).unwrap(), big(504));
        assert_eq!(n_s(8).unwrap(), big(480));
        assert!(n_s(0).is_err());
    }

    #[test]
    fn oracle_examples() {
        let o = n_s_oracle(1, 200, 100).unwrap();
        assert_eq!(o, Supernatural::of_int(2).unwrap());
        let o = n_s_oracle(2, 200, 100).unwrap();
        assert_eq!(o.finite_part(), Some(big(24)));
        assert_eq!(n_s_oracle(4, 200, 100).unwrap().exponent(5), Exponent::Finite(1));
        assert!(n_s_oracle(2, 2, 100).is_err());
        assert!(n_s_oracle(2, 10, 1).is_err());
    }

    #[test]
    fn phi_and_bott_bounds() {
        assert_eq!(phi_kernel_bound(4, 4).unwrap().bound, big(1));
        let b = phi_kernel_bound(5, 2).unwrap();
        assert_eq!((b.bound.clone(), b.support.clone(), b.support_ok), (big(48), vec![2, 3], true));
        let b = phi_kernel_bound(5, 0).unwrap();
        assert_eq!((b.bound.clone(), b.support.clone()), (big(23040), vec![2, 3, 5]));
        assert!(phi_kernel_bound(2, 3).is_err());

        assert_eq!(bott_kernel_bound(0).unwrap(), big(2));
        assert_eq!(bott_kernel_bound(1).unwrap(), big(48));
        assert_eq!(bott_kernel_bound(2).unwrap(), big(96));
        assert!(bott_kernel_bound(-1).is_err());
    }

    #[test]
    fn euler_gap() {
        assert_eq!(euler_index_gap_bound(2, 3).unwrap(), 1);
        assert_eq!(euler_index_gap_bound(4, 5).unwrap(), 1);
        assert_eq!(euler_index_gap_bound(0, 2).unwrap(), 0);
        assert!(euler_index_gap_bound(3, 4).is_err());
        assert_eq!(euler_index_gap_bound(3, 2).unwrap(), 4);
        assert_eq!(product_valuation(3, 2).unwrap(), 5);
    }
}
