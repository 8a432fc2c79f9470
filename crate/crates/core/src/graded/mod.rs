//! Graded rings presented by term relations `c·m = 0`, their graded
//! components as finitely presented groups, and the Bott map `m ↦ β·m`.

pub mod fixtures;

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::endo::EndoModule;
use crate::error::{Error, Result};
use crate::lattice::{int, BaseRing, CanonicalForm, FPModule, IntMatrix, ModuleMap};

pub use fixtures::{bso_report, fixture, sl1_report, BsoReport, Sl1Report};

pub const BETA: &str = "β";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// `coeff · x^exponents = 0`; a zero coefficient means the monomial itself vanishes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TermRelation {
    pub coeff: u64,
    pub exponents: Vec<u32>,
}

impl TermRelation {
    /// The generator of the ideal of `Z` this relation imposes on multiples of its monomial.
    fn killing_order(&self) -> u64 {
        if self.coeff == 0 {
            1
        } else {
            self.coeff
        }
    }
}

fn divides(m: &[u32], n: &[u32]) -> bool {
    m.iter().zip(n).all(|(a, b)| a <= b)
}

fn label(names: &[String], exps: &[u32]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

/// Accepts ASCII spellings `beta`, `tau` and `ctN` for `β`, `τ` and `c̃N`.
fn normalize_name(name: &str) -> String {
    match name {
        "beta" => BETA.into(),
        "tau" => "τ".into(),
        _ => match name.strip_prefix("ct") {
            Some(rest) if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() => format!("c̃{rest}"),
            _ => name.into(),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRingPresentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<TermRelation>,
}

/// Per-generator exponent bounds overriding the ones read off nilpotence relations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentCap {
    bounds: BTreeMap<String, u32>,
}

impl ComponentCap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, bound: u32) -> Self {
        self.bounds.insert(normalize_name(name), bound);
        self
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.bounds.get(name).copied()
    }

    /// Parses `NAME=E`.
    pub fn parse_entry(mut self, entry: &str) -> Result<Self> {
        let (name, e) = entry
            .split_once('=')
            .ok_or_else(|| Error::CapError(format!("expected NAME=E, got {entry:?}")))?;
        let e = e
            .trim()
            .parse()
            .map_err(|_| Error::CapError(format!("bad exponent bound in {entry:?}")))?;
        self.bounds.insert(normalize_name(name.trim()), e);
        Ok(self)
    }
}

/// Graded component of degree `i`, free on its surviving monomials.
#[derive(Clone, Debug)]
pub struct Component {
    pub degree: i64,
    pub module: FPModule,
    pub monomials: Vec<Vec<u32>>,
    /// Cyclic order of each monomial; 0 for free.
    pub orders: Vec<u64>,
    pub labels: Vec<String>,
}

impl Component {
    pub fn canonical(&self) -> CanonicalForm {
        self.module.canonical()
    }

    fn position(&self, m: &[u32]) -> Option<usize> {
        self.monomials.iter().position(|x| x == m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UngradedPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<TermRelation>,
}

impl UngradedPresentation {
    /// Generators not killed outright by a relation on themselves.
    pub fn surviving_generators(&self) -> Vec<String> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(g, _)| !self.relations.iter().any(|r| r.killing_order() == 1 && is_unit_vector(&r.exponents, *g)))
            .map(|(_, n)| n.clone())
            .collect()
    }

    /// Whether the ring is `Z[names]`: every relation kills a single
    /// generator outright and the survivors are exactly `names`.
    pub fn is_polynomial_on(&self, names: &[&str]) -> bool {
        let only_kills = self
            .relations
            .iter()
            .all(|r| r.killing_order() == 1 && r.exponents.iter().sum::<u32>() == 1);
        let mut survivors = self.surviving_generators();
        let mut expected: Vec<String> = names.iter().map(|n| normalize_name(n)).collect();
        survivors.sort();
        expected.sort();
        only_kills && survivors == expected
    }
}

fn is_unit_vector(exps: &[u32], g: usize) -> bool {
    exps.iter().enumerate().all(|(j, &e)| e == u32::from(j == g))
}

/// Merges relations on equal monomials by gcd and drops `(c', m')` whenever
/// some `(c, m)` has `m | m'` and `c | c'`. Zero coefficients are written as 0.
pub fn reduce_relations(relations: &[TermRelation]) -> Vec<TermRelation> {
    let mut merged: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for r in relations {
        let c = r.killing_order();
        merged
            .entry(r.exponents.clone())
            .and_modify(|g| *g = g.gcd(&c))
            .or_insert(c);
    }
    let all: Vec<(Vec<u32>, u64)> = merged.into_iter().collect();
    all.iter()
        .filter(|(m2, c2)| {
            !all
                .iter()
                .any(|(m, c)| m != m2 && divides(m, m2) && c2 % c == 0)
        })
        .map(|(m, c)| TermRelation {
            coeff: if *c == 1 { 0 } else { *c },
            exponents: m.clone(),
        })
        .collect()
}

impl GradedRingPresentation {
    pub fn new(generators: Vec<Generator>, relations: Vec<TermRelation>) -> Result<Self> {
        let r = GradedRingPresentation { generators, relations };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.generators.len();
        for (k, r) in self.relations.iter().enumerate() {
            if r.exponents.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "relation {k} has {} exponents for {n} generators",
                    r.exponents.len()
                )));
            }
        }
        if let Some(b) = self.beta_index() {
            if self.generators[b].degree != -1 {
                return Err(Error::DomainError(format!(
                    "{BETA} must have degree -1, got {}",
                    self.generators[b].degree
                )));
            }
        }
        let mut names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DomainError("duplicate generator names".into()));
        }
        Ok(())
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        let name = normalize_name(name);
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn beta_index(&self) -> Option<usize> {
        self.generator_index(BETA)
    }

    pub fn degree_of(&self, exps: &[u32]) -> i64 {
        self.generators.iter().zip(exps).map(|(g, &e)| g.degree * i64::from(e)).sum()
    }

    pub fn label(&self, exps: &[u32]) -> String {
        label(&self.names(), exps)
    }

    /// Smallest `e` with a relation killing `x^e`.
    fn nilpotence_bound(&self, g: usize) -> Option<u32> {
        self.relations
            .iter()
            .filter(|r| r.killing_order() == 1)
            .filter(|r| r.exponents.iter().enumerate().all(|(j, &e)| j == g || e == 0))
            .map(|r| r.exponents[g])
            .filter(|&e| e > 0)
            .min()
    }

    /// Exponent bound per generator: the cap override, else `e - 1` from `x^e = 0`.
    pub fn exponent_bounds(&self, cap: &ComponentCap) -> Vec<Option<u32>> {
        (0..self.generators.len())
            .map(|g| {
                cap.get(&self.generators[g].name)
                    .or_else(|| self.nilpotence_bound(g).map(|e| e - 1))
            })
            .collect()
    }

    /// `g_m`: 1 if the monomial vanishes, 0 if it is free.
    pub fn monomial_order(&self, m: &[u32]) -> u64 {
        self.relations
            .iter()
            .filter(|r| divides(&r.exponents, m))
            .fold(0u64, |g, r| g.gcd(&r.killing_order()))
    }

    /// Monomials of degree `i` within the bounds, one unbounded generator
    /// being solved for from the degree.
    fn monomials_of_degree(&self, i: i64, cap: &ComponentCap) -> Result<Vec<Vec<u32>>> {
        let bounds = self.exponent_bounds(cap);
        let free: Vec<usize> = (0..bounds.len()).filter(|&g| bounds[g].is_none()).collect();
        let solved = match free.as_slice() {
            [] => None,
            [g] if self.generators[*g].degree != 0 => Some(*g),
            _ => {
                let names: Vec<&str> = free.iter().map(|&g| self.generators[g].name.as_str()).collect();
                return Err(Error::CapError(format!(
                    "degree {i}: no exponent bound for {}",
                    names.join(", ")
                )));
            }
        };
        let mut out = Vec::new();
        let mut current = vec![0u32; bounds.len()];
        self.enumerate(0, &bounds, solved, i, &mut current, &mut out);
        out.sort();
        Ok(out)
    }

    fn enumerate(
        &self,
        g: usize,
        bounds: &[Option<u32>],
        solved: Option<usize>,
        target: i64,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if g == bounds.len() {
            let rest = target - self.degree_of(current);
            match solved {
                None if rest == 0 => out.push(current.clone()),
                Some(s) => {
                    let d = self.generators[s].degree;
                    if rest % d == 0 && rest / d >= 0 {
                        let e = u32::try_from(rest / d).expect("exponent fits");
                        current[s] = e;
                        out.push(current.clone());
                        current[s] = 0;
                    }
                }
                None => {}
            }
            return;
        }
        if Some(g) == solved {
            return self.enumerate(g + 1, bounds, solved, target, current, out);
        }
        for e in 0..=bounds[g].expect("bounded generator") {
            current[g] = e;
            self.enumerate(g + 1, bounds, solved, target, current, out);
        }
        current[g] = 0;
    }

    /// The degree-`i` component over `Z`: `⊕ Z/g_m` over surviving monomials `m`.
    pub fn component(&self, i: i64, cap: &ComponentCap) -> Result<Component> {
        let names = self.names();
        let mut monomials = Vec::new();
        let mut orders = Vec::new();
        for m in self.monomials_of_degree(i, cap)? {
            let g = self.monomial_order(&m);
            if g != 1 {
                monomials.push(m);
                orders.push(g);
            }
        }
        let n = monomials.len();
        let cols: Vec<Vec<_>> = orders
            .iter()
            .enumerate()
            .filter(|(_, &g)| g > 1)
            .map(|(k, &g)| (0..n).map(|r| if r == k { int(g as i64) } else { int(0) }).collect())
            .collect();
        let module = FPModule::new(BaseRing::integers(), n, IntMatrix::from_columns(n, &cols))?;
        let labels = monomials.iter().map(|m| label(&names, m)).collect();
        Ok(Component {
            degree: i,
            module,
            monomials,
            orders,
            labels,
        })
    }

    /// `m ↦ β·m` from degree `i` to degree `i - 1`. The target is taken with
    /// the `β` bound raised by one so that every image is representable.
    pub fn bott_map(&self, i: i64, cap: &ComponentCap) -> Result<ModuleMap> {
        let b = self
            .beta_index()
            .ok_or_else(|| Error::CapError(format!("no generator named {BETA}")))?;
        let source = self.component(i, cap)?;
        let target_cap = match cap.get(BETA) {
            Some(e) => cap.clone().with(BETA, e + 1),
            None => cap.clone(),
        };
        let target = self.component(i - 1, &target_cap)?;
        self.bott_between(b, &source, &target)
    }

    fn bott_between(&self, b: usize, source: &Component, target: &Component) -> Result<ModuleMap> {
        let mut matrix = IntMatrix::zeros(target.monomials.len(), source.monomials.len());
        for (col, m) in source.monomials.iter().enumerate() {
            let mut bm = m.clone();
            bm[b] += 1;
            if self.monomial_order(&bm) == 1 {
                continue;
            }
            let row = target.position(&bm).ok_or_else(|| {
                Error::CapError(format!(
                    "{} lies outside the cap at degree {}",
                    self.label(&bm),
                    target.degree
                ))
            })?;
            matrix.set(row, col, int(1));
        }
        ModuleMap::new(source.module.clone(), target.module.clone(), matrix)
    }

    /// `R/(β)`: drop `β` and every relation involving it.
    pub fn specialize_beta_zero(&self) -> Result<GradedRingPresentation> {
        let b = self.require_beta()?;
        let generators = self
            .generators
            .iter()
            .enumerate()
            .filter(|(g, _)| *g != b)
            .map(|(_, x)| x.clone())
            .collect();
        let relations = self
            .relations
            .iter()
            .filter(|r| r.exponents[b] == 0)
            .map(|r| TermRelation {
                coeff: r.coeff,
                exponents: strip(&r.exponents, b),
            })
            .collect();
        Ok(GradedRingPresentation { generators, relations })
    }

    /// `R/(β - 1)`: erase `β` from every relation and reduce.
    pub fn specialize_beta_one(&self) -> Result<UngradedPresentation> {
        let b = self.require_beta()?;
        let generators = self
            .generators
            .iter()
            .enumerate()
            .filter(|(g, _)| *g != b)
            .map(|(_, x)| x.name.clone())
            .collect();
        let stripped: Vec<TermRelation> = self
            .relations
            .iter()
            .map(|r| TermRelation {
                coeff: r.coeff,
                exponents: strip(&r.exponents, b),
            })
            .collect();
        Ok(UngradedPresentation {
            generators,
            relations: reduce_relations(&stripped),
        })
    }

    fn require_beta(&self) -> Result<usize> {
        self.beta_index()
            .ok_or_else(|| Error::DomainError(format!("presentation has no generator named {BETA}")))
    }

    /// The endo-module `B_j = R^{b-j}` for `j ∈ [0, b - a]` with the Bott maps.
    /// If `β` has no bound of its own, components that need one get
    /// `b - a + j` at `B_j`; an explicit bound `e` becomes `e + j`.
    pub fn to_endo_module(&self, a: i64, b: i64, cap: &ComponentCap) -> Result<EndoModule> {
        if a > b {
            return Err(Error::WindowError(format!("empty degree window [{a}, {b}]")));
        }
        let beta = self.require_beta()?;
        let len = b - a;
        let base = cap.get(BETA);
        let mut components = Vec::with_capacity(len as usize + 1);
        for j in 0..=len {
            let c = match base {
                Some(e) => self.component(b - j, &cap.clone().with(BETA, e + j as u32))?,
                None => match self.component(b - j, cap) {
                    Ok(c) => c,
                    Err(Error::CapError(_)) => self.component(b - j, &cap.clone().with(BETA, (len + j) as u32))?,
                    Err(e) => return Err(e),
                },
            };
            components.push(c);
        }
        let mut matrices = Vec::with_capacity(len as usize);
        for w in components.windows(2) {
            matrices.push(self.bott_between(beta, &w[0], &w[1])?.matrix().clone());
        }
        let modules = components.into_iter().map(|c| c.module).collect();
        EndoModule::build(BaseRing::integers(), 0, modules, matrices)
    }
}

fn strip(exps: &[u32], b: usize) -> Vec<u32> {
    exps.iter()
        .enumerate()
        .filter(|(g, _)| *g != b)
        .map(|(_, &e)| e)
        .collect()
}

impl fmt::Display for GradedRingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| {
                let m = label(&names, &r.exponents);
                if r.coeff == 0 || r.coeff == 1 {
                    m
                } else {
                    format!("{}{}", r.coeff, m)
                }
            })
            .collect();
        write!(f, "Z[{}]", names.join(","))?;
        if !rels.is_empty() {
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl1(p: u64) -> GradedRingPresentation {
        fixture("ck_sl1", p).unwrap()
    }

    fn labels_and_orders(c: &Component) -> Vec<(String, u64)> {
        c.labels.iter().cloned().zip(c.orders.iter().copied()).collect()
    }

    #[test]
    fn sl1_components() {
        let r = sl1(3);
        let cap = ComponentCap::new();
        let comp = |i| labels_and_orders(&r.component(i, &cap).unwrap());
        assert_eq!(comp(4), vec![("τ".to_string(), 3)]);
        assert_eq!(comp(3), vec![("β·τ".to_string(), 3)]);
        assert_eq!(comp(2), vec![]);
        assert_eq!(comp(0), vec![("1".to_string(), 0)]);
        assert_eq!(comp(8), vec![("τ^2".to_string(), 3)]);
        assert_eq!(comp(-2), vec![("β^2".to_string(), 0)]);
        assert_eq!(r.component(12, &cap).unwrap().canonical(), CanonicalForm::zero());
    }

    #[test]
    fn bso_component_with_caps() {
        let r = fixture("ck_bso", 3).unwrap();
        assert!(matches!(r.component(3, &ComponentCap::new()), Err(Error::CapError(_))));
        let cap = ComponentCap::new().with("ct2", 2).with("ct3", 2).with("beta", 4);
        let c = r.component(3, &cap).unwrap();
        assert_eq!(labels_and_orders(&c), vec![("c̃3".to_string(), 2), ("c̃2^2·β".to_string(), 0)]);
    }

    #[test]
    fn bott_maps() {
        let r = sl1(3);
        let cap = ComponentCap::new();
        assert!(r.bott_map(4, &cap).unwrap().is_isomorphism());
        assert!(r.bott_map(3, &cap).unwrap().is_zero());
        let at_zero = r.bott_map(0, &cap).unwrap();
        assert!(at_zero.is_isomorphism());
        assert_eq!(at_zero.target().canonical(), CanonicalForm::free(1));
    }

    #[test]
    fn specializations() {
        let r = sl1(5);
        let ch = r.specialize_beta_zero().unwrap();
        assert_eq!(
            ch.relations,
            vec![
                TermRelation { coeff: 5, exponents: vec![1] },
                TermRelation { coeff: 0, exponents: vec![5] }
            ]
        );
        let k0 = r.specialize_beta_one().unwrap();
        assert_eq!(k0.relations, vec![TermRelation { coeff: 0, exponents: vec![1] }]);
        assert!(k0.is_polynomial_on(&[]));

        let bso = fixture("ck_bso", 7).unwrap().specialize_beta_one().unwrap();
        assert!(bso.is_polynomial_on(&["ct2", "ct4", "ct6"]));
        assert!(!bso.is_polynomial_on(&["ct2", "ct4"]));
    }

    #[test]
    fn reduction_merges_by_gcd() {
        let rel = |c, e: &[u32]| TermRelation { coeff: c, exponents: e.to_vec() };
        let out = reduce_relations(&[rel(4, &[1, 0]), rel(6, &[1, 0]), rel(6, &[2, 1]), rel(3, &[0, 1])]);
        assert_eq!(out, vec![rel(3, &[0, 1]), rel(2, &[1, 0])]);
    }

    #[test]
    fn endo_module_of_sl1() {
        let r = sl1(3);
        let e = r.to_endo_module(0, 8, &ComponentCap::new()).unwrap();
        for j in e.indices() {
            let deg = 8 - j;
            let c = e.c(j).canonical();
            let expected = match deg {
                0 => CanonicalForm::free(1),
                4 | 8 => CanonicalForm::cyclic(3),
                _ => CanonicalForm::zero(),
            };
            assert_eq!(c, expected, "C at degree {deg}");
            let a = e.a(j).canonical();
            let expected = if deg == 3 || deg == 7 { CanonicalForm::cyclic(3) } else { CanonicalForm::zero() };
            assert_eq!(a, expected, "A at degree {deg}");
        }
        assert!(!e.derived_n(1).is_degenerate());
        assert!(e.derived_n(2).is_degenerate());
        assert!(e.derived_n(3).is_degenerate());
    }

    #[test]
    fn validation() {
        let g = |n: &str, d| Generator { name: n.into(), degree: d };
        assert!(GradedRingPresentation::new(vec![g("β", 2)], vec![]).is_err());
        assert!(GradedRingPresentation::new(vec![g("x", 2)], vec![TermRelation { coeff: 2, exponents: vec![] }]).is_err());
        assert!(ComponentCap::new().parse_entry("beta").is_err());
        assert_eq!(ComponentCap::new().parse_entry("beta=3").unwrap().get(BETA), Some(3));
    }
}
