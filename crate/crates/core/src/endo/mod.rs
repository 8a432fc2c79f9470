//! Endo-modules: chains `... -> B_i -> B_{i+1} -> ...` of modules over `Z_S`.
//!
//! A represented endo-module is a finite window `[lo, hi]`. Below the window
//! every `B_i` is zero; above it `B_i = B_hi` and `β_i` is the identity. So
//! every value of [`EndoModule`] is bounded below and `hi`-stable, and all
//! derivation loops terminate.

mod props;
pub mod random;

pub use props::{verify_props, PropItem, PropsReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    cokernel, image, kernel, kernel_lift, BaseRing, CanonicalForm, FPModule,
    IntMatrix, ModuleMap,
};

#[derive(Clone, Debug)]
pub struct EndoModule {
    ring: BaseRing,
    lo: i64,
    modules: Vec<FPModule>,
    maps: Vec<ModuleMap>,
}

/// `A_i = Ker β_i`, `C_i = Coker β_{i-1}` and the differential `δ_i = γ_i ∘ α_i`.
#[derive(Clone, Debug)]
pub struct BoundaryData {
    pub index: i64,
    pub a: FPModule,
    pub alpha: ModuleMap,
    pub c: FPModule,
    pub gamma: ModuleMap,
    /// Generator-level section of `γ_i`.
    pub c_section: IntMatrix,
    pub delta: ModuleMap,
}

/// Result of one derivation step.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub derived: EndoModule,
    /// `B_i ->> B'_i = Im β_i` for `i` in the window.
    pub surjections: Vec<ModuleMap>,
    /// Generator-level sections of the surjections.
    pub sections: Vec<IntMatrix>,
    /// `B'_i -> B_{i+1}`.
    pub inclusions: Vec<ModuleMap>,
}

/// One step `H_(i)` of the filtration of the colimit.
#[derive(Clone, Debug)]
pub struct FiltrationLevel {
    pub index: i64,
    pub submodule: FPModule,
    pub inclusion: ModuleMap,
    /// `H_(i) / H_(i-1)`.
    pub quotient: FPModule,
    /// The canonical surjection `C_i ->> H_(i/i-1)`.
    pub epsilon: ModuleMap,
}

#[derive(Clone, Debug)]
pub struct FiltrationReport {
    pub colimit: FPModule,
    pub levels: Vec<FiltrationLevel>,
    /// Per level: smallest `s` such that the `s`-th derived `ε_i` is an isomorphism.
    pub epsilon_iso_from: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub min_stable_d: i64,
    pub degenerate: bool,
    pub derivations_to_degeneracy: usize,
}

impl EndoModule {
    /// Builds and validates an endo-module from presentations and `β` matrices.
    pub fn build(
        ring: BaseRing,
        lo: i64,
        modules: Vec<FPModule>,
        matrices: Vec<IntMatrix>,
    ) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::WindowError("window is empty".into()));
        }
        if matrices.len() + 1 != modules.len() {
            return Err(Error::WindowError(format!(
                "{} modules need {} maps, got {}",
                modules.len(),
                modules.len() - 1,
                matrices.len()
            )));
        }
        if let Some(m) = modules.iter().find(|m| m.ring() != &ring) {
            return Err(Error::RingMismatch(format!(
                "component over {} in an endo-module over {ring}",
                m.ring()
            )));
        }
        let mut maps = Vec::with_capacity(matrices.len());
        for (off, matrix) in matrices.into_iter().enumerate() {
            let i = lo + off as i64;
            let (src, tgt) = (&modules[off], &modules[off + 1]);
            if matrix.rows() != tgt.n_gens() || matrix.cols() != src.n_gens() {
                return Err(Error::WindowError(format!(
                    "beta_{i} matrix is {}x{}, expected {}x{}",
                    matrix.rows(),
                    matrix.cols(),
                    tgt.n_gens(),
                    src.n_gens()
                )));
            }
            let map = ModuleMap::new(src.clone(), tgt.clone(), matrix).map_err(|e| match e {
                Error::WellDefinednessFailure(msg) => {
                    Error::WellDefinednessFailure(format!("beta_{i}: {msg}"))
                }
                other => other,
            })?;
            maps.push(map);
        }
        Ok(EndoModule {
            ring,
            lo,
            modules,
            maps,
        })
    }

    /// The endo-module that is zero everywhere.
    pub fn zero(ring: &BaseRing, lo: i64) -> Self {
        EndoModule {
            ring: ring.clone(),
            lo,
            modules: vec![FPModule::zero(ring)],
            maps: Vec::new(),
        }
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lo()..=self.hi()
    }

    pub fn modules(&self) -> &[FPModule] {
        &self.modules
    }

    pub fn maps(&self) -> &[ModuleMap] {
        &self.maps
    }

    /// `B_i` under the tail convention.
    pub fn module(&self, i: i64) -> FPModule {
        if i < self.lo {
            FPModule::zero(&self.ring)
        } else if i >= self.hi() {
            self.modules.last().cloned().expect("non-empty window")
        } else {
            self.modules[(i - self.lo) as usize].clone()
        }
    }

    /// `β_i: B_i -> B_{i+1}` under the tail convention.
    pub fn beta(&self, i: i64) -> ModuleMap {
        if i < self.lo {
            ModuleMap::zero(&self.module(i), &self.module(i + 1))
        } else if i >= self.hi() {
            ModuleMap::identity(&self.module(i))
        } else {
            self.maps[(i - self.lo) as usize].clone()
        }
    }

    /// Composite `B_i -> B_j` for `i <= j`.
    pub fn composite(&self, i: i64, j: i64) -> ModuleMap {
        assert!(i <= j);
        let mut acc = ModuleMap::identity(&self.module(i));
        for t in i..j {
            acc = self.beta(t).compose(&acc);
        }
        acc
    }

    pub fn localize(&self, ring: &BaseRing) -> EndoModule {
        EndoModule {
            ring: ring.clone(),
            lo: self.lo,
            modules: self.modules.iter().map(|m| m.localize(ring)).collect(),
            maps: self.maps.iter().map(|f| f.localize(ring)).collect(),
        }
    }

    pub fn boundary(&self, i: i64) -> BoundaryData {
        let beta = self.beta(i);
        let ker = kernel(&beta);
        let coker = cokernel(&self.beta(i - 1));
        let delta = coker.projection.compose(&ker.inclusion);
        BoundaryData {
            index: i,
            a: ker.module,
            alpha: ker.inclusion,
            c: coker.module,
            gamma: coker.projection,
            c_section: coker.section,
            delta,
        }
    }

    /// `A_i` only; cheaper than [`EndoModule::boundary`].
    pub fn a(&self, i: i64) -> FPModule {
        kernel(&self.beta(i)).module
    }

    pub fn c(&self, i: i64) -> FPModule {
        cokernel(&self.beta(i - 1)).module
    }

    pub fn is_degenerate(&self) -> bool {
        self.indices().all(|i| self.a(i).is_zero())
    }

    /// Whether `A_i = 0` for every `i >= d`.
    pub fn is_stable_from(&self, d: i64) -> bool {
        (d.max(self.lo)..self.hi()).all(|i| self.a(i).is_zero())
    }

    pub fn min_stable_d(&self) -> i64 {
        (self.lo..self.hi())
            .rev()
            .find(|&i| !self.a(i).is_zero())
            .map_or(self.lo, |i| i + 1)
    }

    /// The derived endo-module `B'_i = Im β_i ⊂ B_{i+1}` with `β'_i` the
    /// restriction of `β_{i+1}`. The window is unchanged.
    pub fn derive(&self) -> Derivation {
        let mut images = Vec::with_capacity(self.modules.len());
        for i in self.indices() {
            images.push(image(&self.beta(i)));
        }
        let derived_modules: Vec<FPModule> = images.iter().map(|im| im.module.clone()).collect();
        let mut maps = Vec::with_capacity(self.maps.len());
        for (off, f) in self.maps.iter().enumerate() {
            // B'_i is presented on the generators of B_i, and β_{i+1}(β_i x)
            // is the class of β_i x in Im β_{i+1}.
            let matrix = &(images[off + 1].surjection.matrix() * f.matrix()) * &images[off].section;
            maps.push(ModuleMap::new_unchecked(
                derived_modules[off].clone(),
                derived_modules[off + 1].clone(),
                matrix,
            ));
        }
        let derived = EndoModule {
            ring: self.ring.clone(),
            lo: self.lo,
            modules: derived_modules,
            maps,
        };
        Derivation {
            derived,
            surjections: images.iter().map(|im| im.surjection.clone()).collect(),
            sections: images.iter().map(|im| im.section.clone()).collect(),
            inclusions: images.into_iter().map(|im| im.inclusion).collect(),
        }
    }

    pub fn derived(&self) -> EndoModule {
        self.derive().derived
    }

    /// `B^{(s)}` by `s` single derivation steps.
    pub fn derived_n(&self, s: usize) -> EndoModule {
        (0..s).fold(self.clone(), |e, _| e.derived())
    }

    /// Filtration levels `H_(i)` of `H = colim B_i = B_hi`, their graded
    /// pieces and the surjections `ε_i`.
    pub fn filtration_levels(&self) -> Vec<FiltrationLevel> {
        let hi = self.hi();
        self.indices()
            .map(|i| {
                let to_colimit = self.composite(i, hi);
                let im = image(&to_colimit);
                let below = self.beta(i - 1);
                let quotient_raw = FPModule::new_unchecked(
                    self.ring.clone(),
                    self.module(i).n_gens(),
                    kernel_lift(&to_colimit).hcat(below.matrix()),
                );
                let q = quotient_raw.simplify();
                let coker = cokernel(&below);
                let epsilon = ModuleMap::new_unchecked(
                    coker.module,
                    q.module.clone(),
                    &q.to_canonical * &coker.section,
                );
                FiltrationLevel {
                    index: i,
                    submodule: im.module,
                    inclusion: im.inclusion,
                    quotient: q.module,
                    epsilon,
                }
            })
            .collect()
    }

    pub fn filtration(&self) -> FiltrationReport {
        let levels = self.filtration_levels();
        let width = (self.hi() - self.lo) as usize;
        let mut epsilon_iso_from = vec![usize::MAX; levels.len()];
        let mut current = self.clone();
        for s in 0..=width + 1 {
            let lv = if s == 0 {
                levels.clone()
            } else {
                current.filtration_levels()
            };
            for (k, level) in lv.iter().enumerate() {
                if epsilon_iso_from[k] == usize::MAX && level.epsilon.is_isomorphism() {
                    epsilon_iso_from[k] = s;
                }
            }
            if epsilon_iso_from.iter().all(|&x| x != usize::MAX) {
                break;
            }
            current = current.derived();
        }
        FiltrationReport {
            colimit: self.module(self.hi()),
            levels,
            epsilon_iso_from,
        }
    }

    pub fn classify(&self) -> Classification {
        let d = self.min_stable_d();
        let bound = (d - self.lo).max(0) as usize;
        let mut current = self.clone();
        let mut s = 0;
        while !current.is_degenerate() {
            assert!(s <= bound, "derivatives failed to degenerate within {bound} steps");
            current = current.derived();
            s += 1;
        }
        Classification {
            min_stable_d: d,
            degenerate: d == self.lo,
            derivations_to_degeneracy: s,
        }
    }

    /// Canonical forms of `(A_i, B_i, C_i)` over the window and one step past it.
    pub fn table(&self) -> Vec<(i64, CanonicalForm, CanonicalForm, CanonicalForm)> {
        (self.lo..=self.hi() + 1)
            .map(|i| (i, self.a(i).canonical(), self.module(i).canonical(), self.c(i).canonical()))
            .collect()
    }
}
