//! The structural properties every stable, bounded-below endo-module must
//! satisfy. They are theorems; a failing item means the engine is wrong.

use serde::Serialize;

use super::EndoModule;
use crate::error::{Error, Result};
use crate::lattice::{cokernel, induced_on_quotients, ModuleMap};

#[derive(Clone, Debug, Serialize)]
pub struct PropItem {
    pub name: &'static str,
    pub description: &'static str,
    pub passed: bool,
    /// `(s, i)` of the first counterexample.
    pub witness: Option<(usize, i64)>,
    pub checks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropsReport {
    pub min_stable_d: i64,
    pub items: Vec<PropItem>,
}

impl PropsReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn into_result(self) -> Result<Self> {
        if let Some(item) = self.items.iter().find(|i| !i.passed) {
            let (s, index) = item.witness.unwrap_or((0, 0));
            return Err(Error::PropertyViolation {
                item: item.name.to_string(),
                index,
                detail: format!("{} (derivative {s})", item.description),
            });
        }
        Ok(self)
    }
}

struct Tally {
    item: PropItem,
}

impl Tally {
    fn new(name: &'static str, description: &'static str) -> Self {
        Tally {
            item: PropItem {
                name,
                description,
                passed: true,
                witness: None,
                checks: 0,
            },
        }
    }

    fn check(&mut self, ok: bool, s: usize, i: i64) {
        self.item.checks += 1;
        if !ok && self.item.passed {
            self.item.passed = false;
            self.item.witness = Some((s, i));
        }
    }
}

/// Checks the derivation, stability and filtration properties on `e`,
/// with `d` the minimal stability index.
pub fn verify_props(e: &EndoModule) -> PropsReport {
    let d = e.min_stable_d();
    let (lo, hi) = (e.lo(), e.hi());
    let max_s = (hi - lo) as usize + 1;

    let mut stable = Tally::new("1a", "s-th derivative is (d-s)-stable");
    let mut same_above = Tally::new("1b", "B^(s)_i = B_i and C^(s)_i = C_i for i >= d");
    let mut eps_iso = Tally::new("1c", "epsilon^(s)_i is an isomorphism when i + s >= d");
    let mut eventually = Tally::new("2", "some derivative is degenerate");
    let mut degenerate_iff = Tally::new("3", "degenerate iff every epsilon_i is an isomorphism");
    let mut c_vanishing = Tally::new("4", "C_i = 0 for all i < d forces degeneracy");
    let mut comp = Tally::new("comp", "epsilon^(s)_i is an isomorphism when s >= hi - i");

    // comparison maps B_i ->> B^(s)_i, indexed by window offset
    let mut to_derived: Vec<ModuleMap> = e.indices().map(|i| ModuleMap::identity(&e.module(i))).collect();
    let base_c: Vec<_> = e.indices().map(|i| cokernel(&e.beta(i - 1))).collect();
    let mut current = e.clone();
    let mut first_degenerate = None;

    for s in 0..=max_s {
        if first_degenerate.is_none() && current.is_degenerate() {
            first_degenerate = Some(s);
        }
        for i in e.indices() {
            if i >= d - s as i64 {
                stable.check(current.a(i).is_zero(), s, i);
            }
        }
        let levels = current.filtration_levels();
        for (off, i) in e.indices().enumerate() {
            if i >= d {
                let b_ok = to_derived[off].is_isomorphism();
                let gamma = cokernel(&current.beta(i - 1));
                let c_map = induced_on_quotients(
                    &base_c[off].module,
                    &base_c[off].section,
                    &to_derived[off],
                    &gamma.projection,
                )
                .expect("comparison of cokernels is well defined");
                same_above.check(b_ok && c_map.is_isomorphism(), s, i);
            }
            let iso = levels[off].epsilon.is_isomorphism();
            if i + s as i64 >= d {
                eps_iso.check(iso, s, i);
            }
            if s as i64 >= hi - i {
                comp.check(iso, s, i);
            }
            if s == 0 {
                let degenerate = d == lo;
                degenerate_iff.check(!degenerate || iso, s, i);
            }
        }
        if s == 0 {
            let all_iso = levels.iter().all(|l| l.epsilon.is_isomorphism());
            degenerate_iff.check(!all_iso || d == lo, 0, lo);
            let c_below_vanish = (lo..d).all(|i| e.c(i).is_zero());
            c_vanishing.check(!c_below_vanish || d == lo, 0, d);
        }
        if s == max_s {
            break;
        }
        let step = current.derive();
        for (off, surj) in step.surjections.iter().enumerate() {
            to_derived[off] = surj.compose(&to_derived[off]);
        }
        current = step.derived;
    }
    let bound = (d - lo).max(0) as usize;
    eventually.check(first_degenerate.is_some_and(|s| s <= bound), bound, lo);

    PropsReport {
        min_stable_d: d,
        items: vec![
            stable.item,
            same_above.item,
            eps_iso.item,
            eventually.item,
            degenerate_iff.item,
            c_vanishing.item,
            comp.item,
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BaseRing, FPModule, IntMatrix};

    fn z() -> BaseRing {
        BaseRing::integers()
    }

    #[test]
    fn props_on_small_chains() {
        let zz = FPModule::free(&z(), 1);
        for scalar in [0, 1, 2, 6] {
            let e = EndoModule::build(
                z(),
                0,
                vec![zz.clone(), zz.clone(), FPModule::cyclic(&z(), 4)],
                vec![IntMatrix::from_rows(&[&[scalar]]), IntMatrix::from_rows(&[&[1]])],
            )
            .unwrap();
            let report = verify_props(&e);
            assert!(report.all_passed(), "{scalar}: {report:?}");
        }
    }

    #[test]
    fn degenerate_forward_direction() {
        let zz = FPModule::free(&z(), 1);
        let e = EndoModule::build(z(), 0, vec![zz.clone(), zz], vec![IntMatrix::from_rows(&[&[3]])]).unwrap();
        let report = verify_props(&e);
        assert_eq!(report.min_stable_d, 0);
        let item3 = report.items.iter().find(|i| i.name == "3").unwrap();
        assert!(item3.passed && item3.checks >= 2);
    }

    #[test]
    fn vanishing_cokernels_force_degeneracy() {
        // B_0 = 0 -> B_1 = Z/2 -> B_2 = Z/2 (iso): C_i = 0 below d
        let z2 = FPModule::cyclic(&z(), 2);
        let e = EndoModule::build(
            z(),
            0,
            vec![FPModule::zero(&z()), z2.clone(), z2],
            vec![IntMatrix::zeros(1, 0), IntMatrix::from_rows(&[&[1]])],
        )
        .unwrap();
        assert!(e.is_degenerate());
        assert!(verify_props(&e).into_result().is_ok());
    }
}
