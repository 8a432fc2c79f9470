use serde::Serialize;

use super::{ComponentCap, Generator, GradedRingPresentation, TermRelation, BETA};
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::lattice::CanonicalForm;

fn unit(n: usize, g: usize, e: u32) -> Vec<u32> {
    let mut v = vec![0; n];
    v[g] = e;
    v
}

/// `ck_sl1(p)`, `ck_bso(n)` or `ch_bso(n)`.
pub fn fixture(name: &str, param: u64) -> Result<GradedRingPresentation> {
    match name {
        "ck_sl1" => {
            if !is_prime(param) {
                return Err(Error::ParamError(format!("ck_sl1 needs a prime p, got {param}")));
            }
            let p = u32::try_from(param).map_err(|_| Error::ParamError(format!("p = {param} is too large")))?;
            let generators = vec![
                Generator { name: BETA.into(), degree: -1 },
                Generator { name: "τ".into(), degree: i64::from(p) + 1 },
            ];
            let relations = vec![
                TermRelation { coeff: param, exponents: vec![0, 1] },
                TermRelation { coeff: 0, exponents: vec![0, p] },
                TermRelation { coeff: 0, exponents: vec![p - 1, 1] },
            ];
            GradedRingPresentation::new(generators, relations)
        }
        "ck_bso" | "ch_bso" => {
            if param < 3 || param.is_multiple_of(2) || param > 64 {
                return Err(Error::ParamError(format!("{name} needs an odd n in [3, 64], got {param}")));
            }
            let connective = name == "ck_bso";
            let prefix = if connective { "c̃" } else { "c" };
            let mut generators: Vec<Generator> = (2..=param as i64)
                .map(|i| Generator { name: format!("{prefix}{i}"), degree: i })
                .collect();
            if connective {
                generators.push(Generator { name: BETA.into(), degree: -1 });
            }
            let len = generators.len();
            let mut relations = Vec::new();
            for i in (3..=param as usize).step_by(2) {
                let g = i - 2;
                relations.push(TermRelation { coeff: 2, exponents: unit(len, g, 1) });
                if connective {
                    let mut e = unit(len, g, 1);
                    e[len - 1] = 1;
                    relations.push(TermRelation { coeff: 0, exponents: e });
                }
            }
            GradedRingPresentation::new(generators, relations)
        }
        _ => Err(Error::ParamError(format!("unknown fixture {name:?}"))),
    }
}

fn ck_sl1_expected(p: i64, i: i64) -> CanonicalForm {
    if i <= 0 {
        return CanonicalForm::free(1);
    }
    let hit = (1..p).any(|j| (0..=p - 2).any(|k| i == (p + 1) * j - k));
    if hit {
        CanonicalForm::cyclic(p as u64)
    } else {
        CanonicalForm::zero()
    }
}

fn ch_sl1_expected(p: i64, i: i64) -> CanonicalForm {
    match i {
        0 => CanonicalForm::free(1),
        _ if i > 0 && i % (p + 1) == 0 && i / (p + 1) < p => CanonicalForm::cyclic(p as u64),
        _ => CanonicalForm::zero(),
    }
}

fn a_sl1_expected(p: i64, i: i64) -> CanonicalForm {
    if (0..=p - 2).any(|j| i == 3 + (p + 1) * j) {
        CanonicalForm::cyclic(p as u64)
    } else {
        CanonicalForm::zero()
    }
}

/// Checks of the `SL_1` ring against its closed-form tables on `[-2, (p+1)(p-1)]`.
#[derive(Clone, Debug, Serialize)]
pub struct Sl1Report {
    pub p: u64,
    pub window: (i64, i64),
    /// Degrees where `CK^i`, `CH^i` or `A^i` differ from the closed form.
    pub ck_mismatches: Vec<i64>,
    pub ch_mismatches: Vec<i64>,
    pub a_mismatches: Vec<i64>,
    pub k0_is_z: bool,
    /// Derivations of the `CK` endo-module until it degenerates.
    pub derivations_to_degeneracy: usize,
    /// The same count with `CK` itself taken as the first derivative.
    pub degenerate_derivative: usize,
}

impl Sl1Report {
    pub fn all_hold(&self) -> bool {
        self.ck_mismatches.is_empty()
            && self.ch_mismatches.is_empty()
            && self.a_mismatches.is_empty()
            && self.k0_is_z
            && self.degenerate_derivative as u64 == self.p
    }
}

pub fn sl1_report(p: u64) -> Result<Sl1Report> {
    let r = fixture("ck_sl1", p)?;
    let pi = p as i64;
    let (a, b) = (-2, (pi + 1) * (pi - 1));
    let cap = ComponentCap::new();
    let ch = r.specialize_beta_zero()?;
    let mut ck_mismatches = Vec::new();
    let mut ch_mismatches = Vec::new();
    for i in a..=b {
        if r.component(i, &cap)?.canonical() != ck_sl1_expected(pi, i) {
            ck_mismatches.push(i);
        }
        if ch.component(i, &cap)?.canonical() != ch_sl1_expected(pi, i) {
            ch_mismatches.push(i);
        }
    }
    let k0_is_z = r.specialize_beta_one()?.is_polynomial_on(&[]);
    let e = r.to_endo_module(a, b, &cap)?;
    let a_mismatches = (a..=b)
        .filter(|&i| e.a(b - i).canonical() != a_sl1_expected(pi, i))
        .collect();
    let derivations_to_degeneracy = e.classify().derivations_to_degeneracy;
    Ok(Sl1Report {
        p,
        window: (a, b),
        ck_mismatches,
        ch_mismatches,
        a_mismatches,
        k0_is_z,
        derivations_to_degeneracy,
        degenerate_derivative: derivations_to_degeneracy + 1,
    })
}

/// Checks of the `B SO_n` ring with exponents at most `exp_cap` and `β` at most `beta_cap`.
#[derive(Clone, Debug, Serialize)]
pub struct BsoReport {
    pub n: u64,
    pub degrees: (i64, i64),
    /// Degrees where `R/(β)` and the Chow ring have different components.
    pub ch_mismatches: Vec<i64>,
    pub k0_polynomial_on_even: bool,
    /// Monomials with an odd generator that `β` does not kill.
    pub bott_survivors: Vec<String>,
}

impl BsoReport {
    pub fn all_hold(&self) -> bool {
        self.ch_mismatches.is_empty() && self.k0_polynomial_on_even && self.bott_survivors.is_empty()
    }
}

fn all_capped(r: &GradedRingPresentation, e: u32) -> ComponentCap {
    r.generators
        .iter()
        .filter(|g| g.name != BETA)
        .fold(ComponentCap::new(), |c, g| c.with(&g.name, e))
}

pub fn bso_report(n: u64, exp_cap: u32, beta_cap: u32) -> Result<BsoReport> {
    let ck = fixture("ck_bso", n)?;
    let ch = fixture("ch_bso", n)?;
    let reduced = ck.specialize_beta_zero()?;
    let top: i64 = (2..=n as i64).sum::<i64>() * i64::from(exp_cap);
    let degrees = (-i64::from(beta_cap), top);

    let reduced_cap = all_capped(&reduced, exp_cap);
    let ch_cap = all_capped(&ch, exp_cap);
    let mut ch_mismatches = Vec::new();
    for i in degrees.0..=top {
        let x = reduced.component(i, &reduced_cap)?;
        let y = ch.component(i, &ch_cap)?;
        if x.monomials != y.monomials || x.orders != y.orders || x.canonical() != y.canonical() {
            ch_mismatches.push(i);
        }
    }

    let even: Vec<String> = (2..=n).step_by(2).map(|i| format!("c̃{i}")).collect();
    let even_refs: Vec<&str> = even.iter().map(String::as_str).collect();
    let k0_polynomial_on_even = ck.specialize_beta_one()?.is_polynomial_on(&even_refs);

    let odd: Vec<usize> = (3..=n as usize).step_by(2).map(|i| i - 2).collect();
    let cap = all_capped(&ck, exp_cap).with(BETA, beta_cap);
    let mut bott_survivors = Vec::new();
    for i in degrees.0 + 1..=degrees.1 {
        let source = ck.component(i, &cap)?;
        let bott = ck.bott_map(i, &cap)?;
        for (col, m) in source.monomials.iter().enumerate() {
            if odd.iter().any(|&g| m[g] > 0) && !bott.target().is_zero_element(&bott.matrix().column_matrix(col)) {
                bott_survivors.push(source.labels[col].clone());
            }
        }
    }
    Ok(BsoReport {
        n,
        degrees,
        ch_mismatches,
        k0_polynomial_on_even,
        bott_survivors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_match_their_presentations() {
        assert_eq!(fixture("ck_sl1", 3).unwrap().to_string(), "Z[β,τ]/(3τ, τ^3, β^2·τ)");
        assert_eq!(fixture("ck_bso", 3).unwrap().to_string(), "Z[c̃2,c̃3,β]/(2c̃3, c̃3·β)");
        assert_eq!(fixture("ch_bso", 5).unwrap().to_string(), "Z[c2,c3,c4,c5]/(2c3, 2c5)");
        assert!(matches!(fixture("ck_sl1", 4), Err(Error::ParamError(_))));
        assert!(matches!(fixture("ck_bso", 4), Err(Error::ParamError(_))));
        assert!(matches!(fixture("ch_bso", 1), Err(Error::ParamError(_))));
        assert!(matches!(fixture("bu", 3), Err(Error::ParamError(_))));
    }

    #[test]
    fn sl1_small_primes() {
        for p in [2, 3] {
            let rep = sl1_report(p).unwrap();
            assert!(rep.all_hold(), "{rep:?}");
        }
    }

    #[test]
    fn bso_three() {
        let rep = bso_report(3, 2, 4).unwrap();
        assert!(rep.all_hold(), "{rep:?}");
    }
}
