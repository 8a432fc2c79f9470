//! Random Adams endo-modules over `Z` built from weighted generators.
//!
//! Every generator gets a weight `w` equal to the index where it first
//! appears, and `ψ_k` is `k^{-w}` on it. `β` includes the generators of
//! `B_j` into `B_{j+1}`. Relations are torsion relations on new generators
//! and relations introduced at `j` that kill classes of weight `j - 1`. A
//! relation may carry a correction `e·h` on a lower-weight torsion class
//! `h` of order `n`, with `n / gcd(n, N_d)` dividing `e` where `d` is the
//! weight gap; this is exactly what keeps `ψ_k` well defined for every `k`.

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{decompose, k_power, sigma_projector, AdamsEndoModule};
use crate::arith::{factorial, prime_factors};
use crate::bounds::n_s;
use crate::endo::EndoModule;
use crate::error::Result;
use crate::lattice::{int, BaseRing, FPModule, IntMatrix, ModuleMap};

pub const TORSION_ORDERS: [i64; 7] = [2, 3, 4, 6, 8, 12, 24];

/// Operators attached to every synthetic instance. For `s <= 6` the gcd of
/// `k^∞(k^s - 1)` over these `k` is already `N_s`.
pub const VALIDATION_KS: [i64; 4] = [2, 3, 5, 7];

#[derive(Clone, Debug)]
pub struct SyntheticConfig {
    pub max_window: usize,
    pub max_new_gens: usize,
    pub max_killing_relations: usize,
    pub free_probability: f64,
    pub correction_probability: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            max_window: 5,
            max_new_gens: 2,
            max_killing_relations: 2,
            free_probability: 0.25,
            correction_probability: 0.5,
        }
    }
}

#[derive(Clone, Debug)]
struct Generator {
    weight: i64,
    /// Order `n` when the only relation on the generator is `n·g = 0`.
    pure_order: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct SyntheticInstance {
    pub integral: EndoModule,
    /// Weight of each generator of `B_hi`.
    pub weights: Vec<i64>,
    /// One operator per entry of [`VALIDATION_KS`].
    pub adams: Vec<AdamsEndoModule>,
}

fn correction(rng: &mut impl Rng, order: i64, gap: i64) -> i64 {
    let n = n_s(gap).expect("positive weight gap");
    let n = i64::try_from(n).expect("N_s fits for small gaps");
    let step = order / order.gcd(&n);
    step * rng.gen_range(1..=2)
}

fn add_corrections(
    rng: &mut impl Rng,
    column: &mut [i64],
    gens: &[Generator],
    top_weight: i64,
    probability: f64,
) {
    for (idx, h) in gens.iter().enumerate() {
        if let Some(order) = h.pure_order {
            if h.weight < top_weight && rng.gen_bool(probability) {
                column[idx] += correction(rng, order, top_weight - h.weight);
            }
        }
    }
}

/// `ψ_k = diag(k^{-w})` on each component.
pub fn psi_matrices(integral: &EndoModule, weights: &[i64], k: i64) -> Vec<IntMatrix> {
    integral
        .modules()
        .iter()
        .map(|b| {
            let diag: Vec<_> = weights[..b.n_gens()].iter().map(|&w| k_power(k, -w)).collect();
            IntMatrix::diagonal(b.n_gens(), b.n_gens(), &diag)
        })
        .collect()
}

/// Draws a random weighted instance over `Z` and attaches `ψ_k` for each
/// `k` in [`VALIDATION_KS`].
pub fn synthetic_instance(rng: &mut impl Rng, cfg: &SyntheticConfig) -> SyntheticInstance {
    let len = rng.gen_range(2..=cfg.max_window.max(2));
    let mut gens: Vec<Generator> = Vec::new();
    // (index where the relation appears, coefficients on all generators so far)
    let mut relations: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut counts = Vec::with_capacity(len);

    for j in 0..len {
        let w = j as i64;
        let fresh = rng.gen_range(usize::from(j == 0)..=cfg.max_new_gens);
        let mut new_relations = Vec::new();
        for _ in 0..fresh {
            let idx = gens.len();
            if rng.gen_bool(cfg.free_probability) {
                gens.push(Generator { weight: w, pure_order: None });
                continue;
            }
            let n = *TORSION_ORDERS.choose(rng).expect("non-empty");
            let mut column = vec![0; idx + 1];
            column[idx] = n;
            add_corrections(rng, &mut column, &gens, w, cfg.correction_probability / 2.0);
            let pure = column[..idx].iter().all(|&c| c == 0);
            gens.push(Generator {
                weight: w,
                pure_order: pure.then_some(n),
            });
            new_relations.push(column);
        }
        if j > 0 {
            for _ in 0..rng.gen_range(0..=cfg.max_killing_relations) {
                let mut column = vec![0; gens.len()];
                for (idx, g) in gens.iter().enumerate() {
                    if g.weight == w - 1 {
                        column[idx] = rng.gen_range(-2..=2);
                    }
                }
                add_corrections(rng, &mut column, &gens, w - 1, cfg.correction_probability);
                if column.iter().any(|&c| c != 0) {
                    new_relations.push(column);
                }
            }
        }
        relations.extend(new_relations.into_iter().map(|c| (j, c)));
        counts.push(gens.len());
    }

    let ring = BaseRing::integers();
    let modules: Vec<FPModule> = counts
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let cols: Vec<Vec<_>> = relations
                .iter()
                .filter(|(at, _)| *at <= j)
                .map(|(_, c)| (0..n).map(|r| int(c.get(r).copied().unwrap_or(0))).collect())
                .collect();
            FPModule::new(ring.clone(), n, IntMatrix::from_columns(n, &cols)).expect("integral relations")
        })
        .collect();
    let matrices = counts
        .windows(2)
        .map(|w| IntMatrix::from_fn(w[1], w[0], |r, c| int(i64::from(r == c))))
        .collect();
    let integral = EndoModule::build(ring, 0, modules, matrices).expect("inclusions respect relations");
    let weights: Vec<i64> = gens.iter().map(|g| g.weight).collect();
    let adams = VALIDATION_KS
        .iter()
        .map(|&k| {
            AdamsEndoModule::attach_to_integral(integral.clone(), k, psi_matrices(&integral, &weights, k))
                .expect("weighted operators are well defined and commute with inclusions")
        })
        .collect();
    SyntheticInstance {
        integral,
        weights,
        adams,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSummary {
    /// Levels where `σ_2` and `σ_3` were built and compared.
    pub levels_checked: usize,
    pub summands: usize,
}

/// Builds `σ_2` and `σ_3` on each level `H_(j)` of the colimit filtration
/// over `Z[1/p : p | (j+1)! r_2 r_3]`, checks they agree, and splits `H`
/// with `σ_2`.
pub fn sigma_checks(inst: &SyntheticInstance) -> Result<SigmaSummary> {
    let top = inst.integral.hi() as u32;
    let mut primes = prime_factors(u64::try_from(factorial(top as u64 + 1)).expect("small factorial"));
    for k in [2u64, 3] {
        for j in 1..=top {
            primes.extend(prime_factors(k.pow(j) - 1));
        }
        primes.push(k);
    }
    let ring = BaseRing::new(primes)?;
    let local = inst.integral.localize(&ring);
    let levels = local.filtration_levels();
    let h = local.module(local.hi());
    let psi = |k: i64| {
        let m = psi_matrices(&local, &inst.weights, k).pop().expect("non-empty window");
        ModuleMap::new(h.clone(), h.clone(), m)
    };
    let (psi2, psi3) = (psi(2)?, psi(3)?);

    let mut levels_checked = 0;
    for (j, level) in levels.iter().enumerate().skip(1) {
        let m = &level.submodule;
        let restrict = |p: &ModuleMap| crate::lattice::factor_through_injection(&level.inclusion, &p.compose(&level.inclusion));
        let below = crate::lattice::factor_through_injection(&level.inclusion, &levels[j - 1].inclusion)?;
        let s2 = sigma_projector(m, &below, &restrict(&psi2)?, 2, j as u32)?;
        let s3 = sigma_projector(m, &below, &restrict(&psi3)?, 3, j as u32)?;
        if !s2.equals(&s3) {
            return Err(crate::Error::VerificationFailure(format!(
                "sigma_2 and sigma_3 differ on level {j}"
            )));
        }
        levels_checked += 1;
    }
    let chain: Vec<ModuleMap> = levels.iter().map(|l| l.inclusion.clone()).collect();
    let d = decompose(&h, &chain, &psi2, 2)?;
    Ok(SigmaSummary {
        levels_checked,
        summands: d.summands.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adams::{kernel_annihilation, verify_eigenvalues};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn synthetic_instances_satisfy_the_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let inst = synthetic_instance(&mut rng, &SyntheticConfig::default());
            for ae in &inst.adams {
                let rep = verify_eigenvalues(ae, |i| i);
                assert!(rep.all_hold(), "k = {}: {:?}", ae.k(), rep.first_failure());
            }
            let width = (inst.integral.hi() - inst.integral.lo()) as usize;
            for s in 1..=width {
                for i in inst.integral.indices() {
                    let a = kernel_annihilation(&inst.adams[0], i, s, 64).unwrap();
                    assert_eq!(a.divides_n_s, Some(true), "{a:?}");
                }
            }
            sigma_checks(&inst).unwrap();
        }
    }
}
