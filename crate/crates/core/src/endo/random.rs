//! Seeded random endo-modules for property tests.

use rand::Rng;

use super::EndoModule;
use crate::lattice::{int, BaseRing, FPModule, IntMatrix};

#[derive(Clone, Debug)]
pub struct RandomConfig {
    pub max_window: usize,
    pub max_gens: usize,
    pub max_entry: i64,
    pub max_map_entry: i64,
    /// Probability that a map entry is zero.
    pub map_sparsity: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_window: 5,
            max_gens: 4,
            max_entry: 6,
            max_map_entry: 3,
            map_sparsity: 0.5,
        }
    }
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64, sparsity: f64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| {
        if rng.gen_bool(sparsity) {
            int(0)
        } else {
            int(rng.gen_range(-bound..=bound))
        }
    })
}

/// A random endo-module over `ring`. Each `β_i` is drawn freely and then
/// made well defined by passing to the quotient of `B_{i+1}` by the images
/// of the relations of `B_i`.
pub fn random_endo_module(rng: &mut impl Rng, ring: &BaseRing, cfg: &RandomConfig) -> EndoModule {
    let len = rng.gen_range(1..=cfg.max_window);
    let lo = rng.gen_range(-2..=2);
    let mut modules: Vec<FPModule> = Vec::with_capacity(len);
    let mut matrices = Vec::with_capacity(len - 1);
    for off in 0..len {
        let gens = rng.gen_range(0..=cfg.max_gens);
        let n_rel = rng.gen_range(0..=gens);
        let mut relations = random_matrix(rng, gens, n_rel, cfg.max_entry, 0.3);
        if off > 0 {
            let prev = &modules[off - 1];
            let f = random_matrix(rng, gens, prev.n_gens(), cfg.max_map_entry, cfg.map_sparsity);
            relations = relations.hcat(&(&f * prev.relations()));
            matrices.push(f);
        }
        let relations = relations.nonzero_columns();
        modules.push(FPModule::new(ring.clone(), gens, relations).expect("integral relations"));
    }
    EndoModule::build(ring.clone(), lo, modules, matrices).expect("repaired maps are well defined")
}
