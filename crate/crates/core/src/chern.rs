//! Truncated polynomial rings in Chern roots `x_1..x_r` and `β`, used to check
//! the duality formula for connective Chern classes by the splitting principle.
//!
//! Classes follow the multiplicative law `x ⊕ y = x + y - βxy`. The dual root
//! is `x̄ = -x Σ (βx)^n` and a line bundle has class `[L] = (1 - βx)^{-1}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::binomial;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RootRing {
    pub rank: usize,
    /// Terms of total `x`-degree above this are discarded.
    pub trunc: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Monomial {
    x: Vec<u32>,
    beta: u32,
}

impl Monomial {
    fn x_degree(&self) -> u32 {
        self.x.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            beta: self.beta + other.beta,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |name: String, e: u32| match e {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{e}")),
        };
        push("β".into(), self.beta);
        for (i, &e) in self.x.iter().enumerate() {
            push(format!("x{}", i + 1), e);
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    ring: RootRing,
    terms: BTreeMap<Monomial, BigInt>,
}

impl RootRing {
    pub fn new(rank: usize, trunc: u32) -> Self {
        RootRing { rank, trunc }
    }

    fn element(&self, terms: BTreeMap<Monomial, BigInt>) -> Element {
        let mut e = Element { ring: *self, terms };
        e.normalize();
        e
    }

    fn monomial(&self, x: Vec<u32>, beta: u32) -> Element {
        self.element(BTreeMap::from([(Monomial { x, beta }, BigInt::one())]))
    }

    pub fn zero(&self) -> Element {
        self.element(BTreeMap::new())
    }

    pub fn constant(&self, c: i64) -> Element {
        self.monomial(vec![0; self.rank], 0).scale(&BigInt::from(c))
    }

    pub fn one(&self) -> Element {
        self.constant(1)
    }

    pub fn beta(&self) -> Element {
        self.monomial(vec![0; self.rank], 1)
    }

    /// The root `x_i`, counted from 0.
    pub fn root(&self, i: usize) -> Result<Element> {
        if i >= self.rank {
            return Err(Error::DomainError(format!("root {i} out of range for rank {}", self.rank)));
        }
        let mut x = vec![0; self.rank];
        x[i] = 1;
        Ok(self.monomial(x, 0))
    }

    /// `(1 - βx_i)^{-1} = Σ_n (βx_i)^n`, the class of the `i`th line bundle.
    pub fn line_class(&self, i: usize) -> Result<Element> {
        let bx = self.beta().mul(&self.root(i)?)?;
        geometric(&bx)
    }

    /// `x̄_i = -x_i Σ_n (βx_i)^n`.
    pub fn dual_root(&self, i: usize) -> Result<Element> {
        Ok(self.root(i)?.mul(&self.line_class(i)?)?.neg())
    }

    pub fn roots(&self, range: std::ops::Range<usize>) -> Result<Vec<Element>> {
        range.map(|i| self.root(i)).collect()
    }
}

/// `Σ_n y^n` for `y` without constant term.
fn geometric(y: &Element) -> Result<Element> {
    let mut sum = y.ring.one();
    let mut power = y.ring.one();
    for _ in 0..y.ring.trunc {
        power = power.mul(y)?;
        sum = sum.add(&power)?;
    }
    Ok(sum)
}

impl Element {
    pub fn ring(&self) -> RootRing {
        self.ring
    }

    fn normalize(&mut self) {
        let trunc = self.ring.trunc;
        self.terms.retain(|m, c| !c.is_zero() && m.x_degree() <= trunc);
    }

    fn same_ring(&self, other: &Element) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "rank {} truncation {} vs rank {} truncation {}",
                self.ring.rank, self.ring.trunc, other.ring.rank, other.ring.trunc
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_default() += c;
        }
        Ok(self.ring.element(terms))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        self.scale(&-BigInt::one())
    }

    pub fn scale(&self, c: &BigInt) -> Element {
        self.ring
            .element(self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same_ring(other)?;
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                if m.x_degree() + n.x_degree() <= self.ring.trunc {
                    *terms.entry(m.times(n)).or_default() += a * b;
                }
            }
        }
        Ok(self.ring.element(terms))
    }

    pub fn pow(&self, e: u32) -> Result<Element> {
        (0..e).try_fold(self.ring.one(), |acc, _| acc.mul(self))
    }

    /// Swaps the roots according to `perm`: `x_i ↦ x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Element {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut x = vec![0; m.x.len()];
                for (i, &e) in m.x.iter().enumerate() {
                    x[perm[i]] = e;
                }
                (Monomial { x, beta: m.beta }, c.clone())
            })
            .collect();
        self.ring.element(terms)
    }

    /// Re-truncates into a ring of the same rank and smaller truncation.
    pub fn truncate(&self, trunc: u32) -> Element {
        RootRing::new(self.ring.rank, trunc).element(self.terms.clone())
    }

    /// Whether every term has `x`-degree minus `β`-degree equal to `d`.
    pub fn is_homogeneous(&self, d: i64) -> bool {
        self.terms
            .keys()
            .all(|m| i64::from(m.x_degree()) - i64::from(m.beta) == d)
    }

    /// Sets `β = 1`.
    pub fn at_beta_one(&self) -> Element {
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            *terms.entry(Monomial { x: m.x.clone(), beta: 0 }).or_default() += c;
        }
        self.ring.element(terms)
    }

    /// Sets every root to 0.
    pub fn at_zero_roots(&self) -> Element {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.x_degree() == 0)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        self.ring.element(terms)
    }

    /// First monomial where the two elements differ, with both coefficients.
    pub fn first_difference(&self, other: &Element) -> Option<(String, BigInt, BigInt)> {
        let keys: std::collections::BTreeSet<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().find_map(|m| {
            let a = self.terms.get(m).cloned().unwrap_or_default();
            let b = other.terms.get(m).cloned().unwrap_or_default();
            (a != b).then(|| (m.to_string(), a, b))
        })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sign = match (k, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mag = c.abs();
            let body = if mag.is_one() && m.x_degree() + m.beta > 0 {
                m.to_string()
            } else if m.x_degree() + m.beta == 0 {
                mag.to_string()
            } else {
                format!("{mag}·{m}")
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

/// `a ⊕ b = a + b - βab`.
pub fn fgl_sum(a: &Element, b: &Element) -> Result<Element> {
    let beta = a.ring.beta();
    a.add(b)?.sub(&beta.mul(&a.mul(b)?)?)
}

/// `e_j(ys)`.
pub fn elementary_symmetric(ring: RootRing, ys: &[Element], j: usize) -> Result<Element> {
    // e_j of the first k elements, built up one element at a time
    let mut e = vec![ring.zero(); j + 1];
    e[0] = ring.one();
    for y in ys {
        for l in (1..=j).rev() {
            e[l] = e[l].add(&e[l - 1].mul(y)?)?;
        }
    }
    Ok(e.swap_remove(j))
}

fn check_j(r: usize, j: usize) -> Result<()> {
    if j > r {
        return Err(Error::DomainError(format!("need 0 <= j <= r, got j = {j}, r = {r}")));
    }
    Ok(())
}

/// `c_j(E^∨) = e_j(x̄_1, …, x̄_r)`.
pub fn chern_dual_lhs(r: usize, j: usize, trunc: u32) -> Result<Element> {
    check_j(r, j)?;
    let ring = RootRing::new(r, trunc);
    let duals: Vec<Element> = (0..r).map(|i| ring.dual_root(i)).collect::<Result<_>>()?;
    elementary_symmetric(ring, &duals, j)
}

/// `∏ [L_i] = ∏ (1 - βx_i)^{-1}` over the given roots.
fn det_class(ring: RootRing, mut roots: std::ops::Range<usize>) -> Result<Element> {
    roots.try_fold(ring.one(), |acc, i| acc.mul(&ring.line_class(i)?))
}

/// `[det E] · Σ_{l=j}^{r} (-1)^l binom(l, j) β^{l-j} e_l(x)`.
pub fn chern_dual_rhs(r: usize, j: usize, trunc: u32) -> Result<Element> {
    check_j(r, j)?;
    let ring = RootRing::new(r, trunc);
    let xs = ring.roots(0..r)?;
    let mut sum = ring.zero();
    for l in j..=r {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let coeff = binomial(l as i64, j as u32) * sign;
        let term = ring.beta().pow((l - j) as u32)?.mul(&elementary_symmetric(ring, &xs, l)?)?;
        sum = sum.add(&term.scale(&coeff))?;
    }
    det_class(ring, 0..r)?.mul(&sum)
}

/// `ρ(M) = [det M] · Σ_l c_l(M) (-1-β)^l` for the bundle with the given roots.
pub fn rho(ring: RootRing, roots: std::ops::Range<usize>) -> Result<Element> {
    let xs: Vec<Element> = roots.clone().map(|i| ring.root(i)).collect::<Result<_>>()?;
    let shift = ring.one().add(&ring.beta())?.neg();
    let mut sum = ring.zero();
    for l in 0..=xs.len() {
        sum = sum.add(&elementary_symmetric(ring, &xs, l)?.mul(&shift.pow(l as u32)?)?)?;
    }
    det_class(ring, roots)?.mul(&sum)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub rank: usize,
    pub trunc: u32,
    /// Values of `j` where both sides agree.
    pub degrees_checked: Vec<usize>,
    /// Splits `r = r1 + r2` where `ρ` is multiplicative.
    pub whitney_splits: Vec<(usize, usize)>,
    /// Whether `Σ_j c_j(E^∨) = ρ(E)`.
    pub total_class_matches: bool,
    /// Whether the degree-`j` identity only involves terms of degree `j`.
    pub homogeneous: bool,
}

fn mismatch(what: &str, lhs: &Element, rhs: &Element) -> Error {
    match lhs.first_difference(rhs) {
        Some((m, a, b)) => Error::VerificationFailure(format!("{what}: coefficient of {m} is {a} vs {b}")),
        None => Error::VerificationFailure(format!("{what}: sides differ")),
    }
}

/// Checks `c_j(E^∨) = [det E] Σ_l (-1)^l binom(l, j) β^{l-j} c_l(E)` for all
/// `j`, the Whitney formula for `ρ`, and their consistency, through `x`-degree `D`.
pub fn verify_chern_duality(r: usize, trunc: u32) -> Result<DualityReport> {
    if r == 0 || (trunc as usize) < r + 2 {
        return Err(Error::DomainError(format!("need r >= 1 and D >= r + 2, got r = {r}, D = {trunc}")));
    }
    let ring = RootRing::new(r, trunc);
    let mut total = ring.zero();
    let mut homogeneous = true;
    for j in 0..=r {
        let lhs = chern_dual_lhs(r, j, trunc)?;
        let rhs = chern_dual_rhs(r, j, trunc)?;
        if lhs != rhs {
            return Err(mismatch(&format!("c_{j}(E^∨)"), &lhs, &rhs));
        }
        homogeneous &= lhs.is_homogeneous(j as i64);
        total = total.add(&lhs)?;
    }
    let rho_all = rho(ring, 0..r)?;
    if total != rho_all {
        return Err(mismatch("c(E^∨) vs ρ(E)", &total, &rho_all));
    }
    let mut whitney_splits = Vec::new();
    for r1 in 1..r {
        let product = rho(ring, 0..r1)?.mul(&rho(ring, r1..r)?)?;
        if product != rho_all {
            return Err(mismatch(&format!("ρ on split {r1}+{}", r - r1), &product, &rho_all));
        }
        whitney_splits.push((r1, r - r1));
    }
    Ok(DualityReport {
        rank: r,
        trunc,
        degrees_checked: (0..=r).collect(),
        whitney_splits,
        total_class_matches: true,
        homogeneous,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct K0ShadowReport {
    pub trunc: u32,
    /// `1 = [L](1 - c_1(L))` at `β = 1`.
    pub unit_identity: bool,
    /// `c_1(L^∨) = -[L] c_1(L)` at `β = 1`.
    pub dual_identity: bool,
    /// Both sides vanish for the trivial bundle.
    pub trivial_bundle: bool,
}

/// Rank-one identities at `β = 1`, where `[L^∨] = 1 - x` and `[L] = (1 - x)^{-1}`.
pub fn k0_shadow_check(r: usize, trunc: u32) -> Result<K0ShadowReport> {
    if r != 1 {
        return Err(Error::DomainError(format!("the K_0 shadow is checked in rank 1, got {r}")));
    }
    let ring = RootRing::new(1, trunc);
    let x = ring.root(0)?;
    let line = ring.line_class(0)?.at_beta_one();
    let one = ring.one();

    let unit = line.mul(&one.sub(&x)?)?;
    if unit != one {
        return Err(mismatch("1 = [L](1 - c_1(L))", &unit, &one));
    }
    let lhs = ring.dual_root(0)?.at_beta_one();
    let rhs = line.mul(&x)?.neg();
    if lhs != rhs {
        return Err(mismatch("c_1(L^∨) = -[L]c_1(L)", &lhs, &rhs));
    }
    let trivial = lhs.at_zero_roots().is_zero() && rhs.at_zero_roots().is_zero();
    if !trivial {
        return Err(Error::VerificationFailure("c_1 of the trivial bundle is nonzero".into()));
    }
    Ok(K0ShadowReport {
        trunc,
        unit_identity: true,
        dual_identity: true,
        trivial_bundle: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formal_group_law() {
        let ring = RootRing::new(2, 6);
        let x = ring.root(0).unwrap();
        let y = ring.root(1).unwrap();
        assert_eq!(fgl_sum(&x, &ring.zero()).unwrap(), x);
        assert!(fgl_sum(&x, &ring.dual_root(0).unwrap()).unwrap().is_zero());
        let b = ring.beta();
        let lhs = ring.one().sub(&b.mul(&fgl_sum(&x, &y).unwrap()).unwrap()).unwrap();
        let rhs = ring
            .one()
            .sub(&b.mul(&x).unwrap())
            .unwrap()
            .mul(&ring.one().sub(&b.mul(&y).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        let other = RootRing::new(2, 5).root(0).unwrap();
        assert!(matches!(fgl_sum(&x, &other), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn rank_one_sides() {
        let ring = RootRing::new(1, 4);
        assert_eq!(chern_dual_lhs(1, 0, 4).unwrap(), ring.one());
        assert_eq!(chern_dual_rhs(1, 0, 4).unwrap(), ring.one());
        assert_eq!(chern_dual_lhs(1, 1, 4).unwrap().to_string(), "-x1 - β·x1^2 - β^2·x1^3 - β^3·x1^4");
        assert!(matches!(chern_dual_lhs(1, 2, 4), Err(Error::DomainError(_))));
    }

    #[test]
    fn duality_in_small_rank() {
        for r in 1..=3 {
            let rep = verify_chern_duality(r, 8).unwrap();
            assert!(rep.homogeneous);
            assert_eq!(rep.whitney_splits.len(), r - 1);
        }
        assert!(verify_chern_duality(2, 3).is_err());
        assert!(k0_shadow_check(1, 8).is_ok());
        assert!(k0_shadow_check(2, 8).is_err());
    }
}
