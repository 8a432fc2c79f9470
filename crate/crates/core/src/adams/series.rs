use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::lattice::{int, BaseRing};

/// Power series in one variable `c`, exact through order `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn constant(a: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = a;
        s
    }

    /// The series `c`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        TruncatedSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        TruncatedSeries { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.order().min(other.order());
        let mut out = Self::zero(d);
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(BigRational::one(), self.order()), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::DomainError("series with zero constant term is not invertible".into()));
        }
        let d = self.order();
        let mut inv = Self::zero(d);
        inv.coeffs[0] = a0.recip();
        for n in 1..=d {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                acc += &self.coeffs[j] * &inv.coeffs[n - j];
            }
            inv.coeffs[n] = -acc / a0;
        }
        Ok(inv)
    }

    /// `self(inner(c))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::DomainError("inner series must vanish at 0".into()));
        }
        let d = self.order().min(inner.order());
        let mut out = Self::zero(d);
        let mut power = Self::constant(BigRational::one(), d);
        for a in self.coeffs.iter().take(d + 1) {
            out = out.add(&power.scale(a));
            power = power.mul(inner);
        }
        Ok(out)
    }

    pub fn scale(&self, a: &BigRational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * a).collect(),
        }
    }

    pub fn coefficients_in(&self, ring: &BaseRing) -> bool {
        self.coeffs.iter().all(|x| ring.contains(x))
    }
}

/// `ψ^k(c) = 1 - (1 - c)^k` for the first Chern class of a line bundle.
pub fn psi_series(k: i64, order: usize) -> Result<TruncatedSeries> {
    check_k(k)?;
    let one_minus_c = TruncatedSeries::from_coeffs(vec![int(1), int(-1)], order);
    Ok(TruncatedSeries::constant(int(1), order).sub(&one_minus_c.pow(k as u32)))
}

/// `τ^k(c) = (1 - (1 - c)^k) / c = Σ_n (-1)^n binom(k, n+1) c^n`.
pub fn tau_series(k: i64, order: usize) -> Result<TruncatedSeries> {
    check_k(k)?;
    if order < 1 {
        return Err(Error::DomainError("truncation order must be at least 1".into()));
    }
    let coeffs = (0..=order)
        .map(|n| {
            let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            BigRational::from_integer(sign * binomial(k, n as u32 + 1))
        })
        .collect();
    Ok(TruncatedSeries::from_coeffs(coeffs, order))
}

fn check_k(k: i64) -> Result<()> {
    if !(1..=u32::MAX as i64).contains(&k) {
        return Err(Error::DomainError(format!("k = {k}: need a positive integer")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaReport {
    pub k: i64,
    pub k_prime: i64,
    pub order: usize,
    pub tau_at_zero: bool,
    pub invertible_over_z_1_k: bool,
    pub theta_on_trivial: bool,
    pub theta_product: bool,
}

impl ThetaReport {
    pub fn all_hold(&self) -> bool {
        self.tau_at_zero && self.invertible_over_z_1_k && self.theta_on_trivial && self.theta_product
    }
}

/// Checks the rank-one identities for the Bott cannibalistic classes through
/// order `D`: `τ^k(0) = k`, invertibility over `Z[1/k]`, `θ^k(n) = k^n` and
/// `τ^k(c) · τ^{k'}(ψ^k c) = τ^{kk'}(c)`.
pub fn verify_theta_identities(k: i64, k_prime: i64, order: usize) -> Result<ThetaReport> {
    let tau_k = tau_series(k, order)?;
    let tau_kp = tau_series(k_prime, order)?;
    let tau_kkp = tau_series(k * k_prime, order)?;

    let tau_at_zero = tau_k.coeff(0) == &int(k);

    let ring = BaseRing::inverting(k);
    let inv = tau_k.inverse()?;
    let invertible_over_z_1_k =
        inv.coefficients_in(&ring) && tau_k.mul(&inv) == TruncatedSeries::constant(int(1), order);

    // n copies of the trivial line bundle: every Chern root is 0
    let at_zero = tau_k.compose(&TruncatedSeries::zero(order))?;
    let theta_on_trivial = (0..=4u32)
        .all(|n| at_zero.pow(n) == TruncatedSeries::constant(int(k.pow(n)), order));

    let lhs = tau_k.mul(&tau_kp.compose(&psi_series(k, order)?)?);
    let theta_product = lhs == tau_kkp;

    Ok(ThetaReport {
        k,
        k_prime,
        order,
        tau_at_zero,
        invertible_over_z_1_k,
        theta_on_trivial,
        theta_product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_two() {
        let t = tau_series(2, 4).unwrap();
        assert_eq!(t, TruncatedSeries::from_coeffs(vec![int(2), int(-1)], 4));
        for k in [2, 3, 5] {
            assert_eq!(tau_series(k, 6).unwrap().coeff(0), &int(k));
        }
        assert!(tau_series(2, 0).is_err());
    }

    #[test]
    fn inverse_and_compose() {
        let t = tau_series(3, 8).unwrap();
        let inv = t.inverse().unwrap();
        assert_eq!(t.mul(&inv), TruncatedSeries::constant(int(1), 8));
        // ψ^2 ∘ ψ^3 = ψ^6 on c
        let lhs = psi_series(2, 8).unwrap().compose(&psi_series(3, 8).unwrap()).unwrap();
        assert_eq!(lhs, psi_series(6, 8).unwrap());
    }

    #[test]
    fn theta_identities() {
        let r = verify_theta_identities(2, 2, 10).unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert!(verify_theta_identities(3, 5, 10).unwrap().all_hold());
        assert!(verify_theta_identities(2, 3, 0).is_err());
    }
}
