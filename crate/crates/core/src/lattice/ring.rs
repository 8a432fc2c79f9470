use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_factors, split_off_primes};
use crate::error::{Error, Result};

/// The localization `Z_S = Z[1/p : p in S]` for a finite set of primes `S`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BaseRing {
    inverted_primes: Vec<u64>,
}

impl BaseRing {
    pub fn integers() -> Self {
        BaseRing::default()
    }

    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut inverted_primes: Vec<u64> = primes.into_iter().collect();
        if let Some(bad) = inverted_primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::RingError(format!("{bad} is not prime")));
        }
        inverted_primes.sort_unstable();
        inverted_primes.dedup();
        Ok(BaseRing { inverted_primes })
    }

    /// `Z[1/n]`: inverts every prime divisor of `|n|`.
    pub fn inverting(n: i64) -> Self {
        BaseRing {
            inverted_primes: prime_factors(n.unsigned_abs()),
        }
    }

    pub fn inverted_primes(&self) -> &[u64] {
        &self.inverted_primes
    }

    pub fn is_integers(&self) -> bool {
        self.inverted_primes.is_empty()
    }

    pub fn join(&self, other: &BaseRing) -> BaseRing {
        let mut inverted_primes = self.inverted_primes.clone();
        inverted_primes.extend_from_slice(&other.inverted_primes);
        inverted_primes.sort_unstable();
        inverted_primes.dedup();
        BaseRing { inverted_primes }
    }

    pub fn with_inverted(&self, n: i64) -> BaseRing {
        self.join(&BaseRing::inverting(n))
    }

    pub fn contains_ring(&self, other: &BaseRing) -> bool {
        other
            .inverted_primes
            .iter()
            .all(|p| self.inverted_primes.contains(p))
    }

    pub fn inverts(&self, n: i64) -> bool {
        n != 0 && self.contains_ring(&BaseRing::inverting(n))
    }

    /// Whether a rational number lies in `Z_S`.
    pub fn contains(&self, q: &BigRational) -> bool {
        let (_, rest) = split_off_primes(q.denom(), &self.inverted_primes);
        rest.is_one()
    }

    pub fn is_unit(&self, q: &BigRational) -> bool {
        !q.is_zero() && self.contains(q) && {
            let (_, rest) = split_off_primes(q.numer(), &self.inverted_primes);
            rest.is_one()
        }
    }

    /// Writes a nonzero integer as `unit * canonical` with `canonical`
    /// positive and coprime to `S`.
    pub fn split_unit(&self, n: &BigInt) -> (BigInt, BigInt) {
        split_off_primes(n, &self.inverted_primes)
    }

    /// Positive canonical associate of a nonzero integer.
    pub fn canonical_associate(&self, n: &BigInt) -> BigInt {
        self.split_unit(n).1
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted_primes.is_empty() {
            return write!(f, "Z");
        }
        let inv: Vec<String> = self
            .inverted_primes
            .iter()
            .map(|p| format!("1/{p}"))
            .collect();
        write!(f, "Z[{}]", inv.join(","))
    }
}
