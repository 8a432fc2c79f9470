//! Endo-modules with an Adams-type operator `ψ_k` commuting with `β`.
//!
//! `ψ_k` acts on `A_i` and `C_i` by `k^{-i}`. From this the kernels of the
//! surjections `C^{(s)}_i ->> C^{(s+1)}_i` are killed by `k^m (k^s - 1)`,
//! hence by `N_s`, and on a filtered module the operator yields splitting
//! idempotents `σ_k` once `(i+1)!` and `r_k` are inverted.

mod series;
pub mod synthetic;

pub use series::{psi_series, tau_series, verify_theta_identities, ThetaReport, TruncatedSeries};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::arith::{factorial, prime_factors};
use crate::bounds::n_s;
use crate::endo::EndoModule;
use crate::error::{Error, Result};
use crate::lattice::{
    cokernel, factor_through_injection, image, int, BaseRing, CanonicalForm, FPModule, IntMatrix,
    ModuleMap,
};

#[derive(Clone, Debug)]
pub struct AdamsEndoModule {
    base: EndoModule,
    k: i64,
    psi: Vec<ModuleMap>,
    /// The same endo-module over `Z_S` before inverting `k`, when known.
    integral: Option<EndoModule>,
}

/// `k^e` as an exact scalar; `e` may be negative.
pub fn k_power(k: i64, e: i64) -> BigRational {
    let base = int(k);
    if e >= 0 {
        Pow::pow(base, e as u32)
    } else {
        Pow::pow(base.recip(), (-e) as u32)
    }
}

impl AdamsEndoModule {
    /// Attaches `ψ_k`, one matrix per window index, to `e`. The ring of `e`
    /// must invert `k`.
    pub fn attach(e: EndoModule, k: i64, matrices: Vec<IntMatrix>) -> Result<Self> {
        if k.abs() < 2 {
            return Err(Error::DomainError(format!("k = {k}: need |k| >= 2")));
        }
        if !e.ring().inverts(k) {
            return Err(Error::RingError(format!("{} does not invert k = {k}", e.ring())));
        }
        if matrices.len() != e.modules().len() {
            return Err(Error::WindowError(format!(
                "{} psi matrices for a window of length {}",
                matrices.len(),
                e.modules().len()
            )));
        }
        let mut psi = Vec::with_capacity(matrices.len());
        for ((i, b), m) in e.indices().zip(e.modules()).zip(matrices) {
            let map = ModuleMap::new(b.clone(), b.clone(), m).map_err(|err| match err {
                Error::WellDefinednessFailure(msg) => {
                    Error::WellDefinednessFailure(format!("psi_{i}: {msg}"))
                }
                other => other,
            })?;
            psi.push(map);
        }
        let ae = AdamsEndoModule {
            base: e,
            k,
            psi,
            integral: None,
        };
        if let Some(i) = ae.first_commutation_failure() {
            return Err(Error::CommutationFailure { index: i });
        }
        Ok(ae)
    }

    /// Attaches `ψ_k` to `integral` localized at the primes of `k`, keeping
    /// the unlocalized form for torsion computations.
    pub fn attach_to_integral(integral: EndoModule, k: i64, matrices: Vec<IntMatrix>) -> Result<Self> {
        let ring = integral.ring().with_inverted(k);
        let mut ae = Self::attach(integral.localize(&ring), k, matrices)?;
        ae.integral = Some(integral);
        Ok(ae)
    }

    pub fn base(&self) -> &EndoModule {
        &self.base
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn integral(&self) -> Option<&EndoModule> {
        self.integral.as_ref()
    }

    pub fn psi_maps(&self) -> &[ModuleMap] {
        &self.psi
    }

    /// `ψ_{k,i}` under the tail convention.
    pub fn psi(&self, i: i64) -> ModuleMap {
        let lo = self.base.lo();
        if i < lo {
            ModuleMap::identity(&self.base.module(i))
        } else {
            let off = ((i - lo) as usize).min(self.psi.len() - 1);
            self.psi[off].clone()
        }
    }

    fn first_commutation_failure(&self) -> Option<i64> {
        (self.base.lo()..self.base.hi()).find(|&i| {
            let beta = self.base.beta(i);
            !self.psi(i + 1).compose(&beta).equals(&beta.compose(&self.psi(i)))
        })
    }

    pub fn commutes(&self) -> bool {
        self.first_commutation_failure().is_none()
    }

    /// The derived endo-module with the induced operator.
    pub fn derive(&self) -> AdamsEndoModule {
        let step = self.base.derive();
        let psi = step
            .surjections
            .iter()
            .zip(&step.sections)
            .zip(&self.psi)
            .map(|((surj, section), psi)| {
                let matrix = &(surj.matrix() * psi.matrix()) * section;
                ModuleMap::new(surj.target().clone(), surj.target().clone(), matrix)
                    .expect("psi commutes with beta, so it preserves images")
            })
            .collect();
        AdamsEndoModule {
            base: step.derived,
            k: self.k,
            psi,
            integral: self.integral.as_ref().map(|e| e.derived()),
        }
    }

    pub fn derived_n(&self, s: usize) -> AdamsEndoModule {
        (0..s).fold(self.clone(), |ae, _| ae.derive())
    }

    /// Operator induced by `ψ` on `A_i = Ker β_i`.
    pub fn psi_on_a(&self, i: i64) -> Result<ModuleMap> {
        let b = self.base.boundary(i);
        factor_through_injection(&b.alpha, &self.psi(i).compose(&b.alpha))
    }

    /// Operator induced by `ψ` on `C_i = Coker β_{i-1}`.
    pub fn psi_on_c(&self, i: i64) -> ModuleMap {
        let coker = cokernel(&self.base.beta(i - 1));
        let matrix = &(coker.projection.matrix() * self.psi(i).matrix()) * &coker.section;
        ModuleMap::new(coker.module.clone(), coker.module, matrix)
            .expect("psi commutes with beta, so it descends to the cokernel")
    }

    fn eigen_at(&self, i: i64, a_exp: i64, c_exp: i64) -> (bool, bool) {
        let on_a = self
            .psi_on_a(i)
            .map(|m| m.is_scalar(&k_power(self.k, -a_exp)))
            .unwrap_or(false);
        let on_c = self.psi_on_c(i).is_scalar(&k_power(self.k, -c_exp));
        (on_a, on_c)
    }
}

/// Validates and attaches `ψ_k`; see [`AdamsEndoModule::attach`].
pub fn attach_adams(e: EndoModule, k: i64, matrices: Vec<IntMatrix>) -> Result<AdamsEndoModule> {
    AdamsEndoModule::attach(e, k, matrices)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenEntry {
    pub s: usize,
    pub i: i64,
    pub on_a: bool,
    pub on_c: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    pub k: i64,
    pub entries: Vec<EigenEntry>,
}

impl EigenReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.on_a && e.on_c)
    }

    pub fn holds_at(&self, s: usize, i: i64) -> bool {
        self.entries
            .iter()
            .any(|e| e.s == s && e.i == i && e.on_a && e.on_c)
    }

    pub fn first_failure(&self) -> Option<&EigenEntry> {
        self.entries.iter().find(|e| !(e.on_a && e.on_c))
    }
}

/// Checks that `ψ` acts on `A^{(s)}_i` by `k^{-dim(i+s)}` and on `C^{(s)}_i`
/// by `k^{-dim(i)}` for every `0 <= s <= hi - lo` and window index `i`.
pub fn verify_eigenvalues(ae: &AdamsEndoModule, dim: impl Fn(i64) -> i64) -> EigenReport {
    let width = (ae.base.hi() - ae.base.lo()) as usize;
    let mut entries = Vec::new();
    let mut current = ae.clone();
    for s in 0..=width {
        for i in ae.base.indices() {
            let (on_a, on_c) = current.eigen_at(i, dim(i + s as i64), dim(i));
            entries.push(EigenEntry { s, i, on_a, on_c });
        }
        if s < width {
            current = current.derive();
        }
    }
    EigenReport { k: ae.k, entries }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Annihilation {
    pub i: i64,
    pub s: usize,
    /// `Ker(C^{(s)}_i ->> C^{(s+1)}_i)`.
    pub kernel: CanonicalForm,
    /// Least `m` with `k^m (k^s - 1) K = 0`.
    pub m: Option<u32>,
    #[serde(serialize_with = "ser_opt_bigint")]
    pub exponent: Option<BigInt>,
    /// Whether the exponent divides `N_s`; only decided over `Z`.
    pub divides_n_s: Option<bool>,
}

fn ser_opt_bigint<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(x) => match i64::try_from(x) {
            Ok(n) => s.serialize_i64(n),
            Err(_) => s.serialize_str(&x.to_string()),
        },
    }
}

/// `Im δ^{(s)}_i`, computed on the integral form when there is one.
fn differential_image(ae: &AdamsEndoModule, i: i64, s: usize) -> FPModule {
    let e = ae.integral.as_ref().unwrap_or(&ae.base).derived_n(s);
    image(&e.boundary(i).delta).module
}

/// Torsion exponent of `K = Ker(C^{(s)}_i ->> C^{(s+1)}_i)` and the least
/// `m <= m_max` with `k^m (k^s - 1) K = 0`.
pub fn kernel_annihilation(ae: &AdamsEndoModule, i: i64, s: usize, m_max: u32) -> Result<Annihilation> {
    let derived = ae.derived_n(s);
    let (on_a, on_c) = derived.eigen_at(i, i + s as i64, i);
    if !(on_a && on_c) {
        return Err(Error::PreconditionFailure(format!(
            "psi is not k^-(i+s) on A^({s})_{i} and k^-i on C^({s})_{i}"
        )));
    }
    let k_module = differential_image(ae, i, s);
    let exponent = k_module.annihilator_exponent();
    let k = BigInt::from(ae.k);
    let base = Pow::pow(&k, s as u32) - BigInt::one();
    let m = if base.is_zero() {
        Some(0)
    } else {
        exponent.as_ref().and_then(|e| {
            let mut mult = base.clone();
            (0..=m_max).find(|_| {
                let hit = mult.is_multiple_of(e);
                mult *= &k;
                hit
            })
        })
    };
    let over_z = ae.integral.as_ref().map_or(ae.base.ring(), |e| e.ring()).is_integers();
    let divides_n_s = match (&exponent, s) {
        (Some(e), s) if over_z && s >= 1 => {
            Some(BigInt::from(n_s(s as i64).expect("s >= 1")).is_multiple_of(e))
        }
        _ => None,
    };
    Ok(Annihilation {
        i,
        s,
        kernel: k_module.canonical(),
        m,
        exponent,
        divides_n_s,
    })
}

/// Whether `M ⊗ Z_(p) = 0`.
pub fn vanishes_at_prime(m: &FPModule, p: u64) -> bool {
    let p = BigInt::from(p);
    m.free_rank() == 0 && m.canonical().torsion.iter().all(|d| !d.is_multiple_of(&p))
}

/// `r_k = k ∏_{j=1}^{i} (k^j - 1)`.
pub fn r_k(k: i64, i: u32) -> BigInt {
    let k = BigInt::from(k);
    (1..=i).fold(k.clone(), |acc, j| acc * (Pow::pow(&k, j) - BigInt::one()))
}

fn inverts_integer(ring: &BaseRing, n: &BigInt) -> bool {
    ring.is_unit(&BigRational::from_integer(n.clone()))
}

/// The idempotent `σ_k = ∏_{j<i} (ψ - k^{-j}) / (k^{-i} - k^{-j})` on `M`,
/// which kills `N` and is the identity modulo `N`. The preconditions are
/// checked, not assumed.
pub fn sigma_projector(
    m: &FPModule,
    inclusion: &ModuleMap,
    psi: &ModuleMap,
    k: i64,
    i: u32,
) -> Result<ModuleMap> {
    let ring = m.ring();
    let fact = BigInt::from(factorial(i as u64 + 1));
    if !inverts_integer(ring, &fact) {
        return Err(Error::RingError(format!("{ring} does not invert ({})!", i + 1)));
    }
    let rk = r_k(k, i);
    if !inverts_integer(ring, &rk) {
        return Err(Error::RingError(format!("{ring} does not invert r_{k} = {rk}")));
    }
    factor_through_injection(inclusion, &psi.compose(inclusion))
        .map_err(|_| Error::PreconditionFailure("psi does not preserve N".into()))?;
    let quotient = cokernel(inclusion);
    if !quotient.projection.compose(&psi.minus_scalar(&k_power(k, -(i as i64)))).is_zero() {
        return Err(Error::PreconditionFailure(format!("psi is not k^-{i} modulo N")));
    }
    let top = k_power(k, -(i as i64));
    let mut sigma = ModuleMap::identity(m);
    for j in 0..i as i64 {
        let lam = k_power(k, -j);
        let factor = psi.minus_scalar(&lam).scale(&(&top - &lam).recip());
        sigma = factor.compose(&sigma);
    }
    if !sigma.compose(inclusion).is_zero() {
        return Err(Error::PreconditionFailure(
            "the lower eigenvalue product does not vanish on N".into(),
        ));
    }
    if !sigma.compose(&sigma).equals(&sigma) {
        return Err(Error::VerificationFailure("sigma is not idempotent".into()));
    }
    let complement = ModuleMap::identity(m).sub(&sigma);
    factor_through_injection(inclusion, &complement)
        .map_err(|_| Error::VerificationFailure("id - sigma does not land in N".into()))?;
    Ok(sigma)
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// `S_j = σ_j(M_j)` as submodules of `M`.
    pub summands: Vec<FPModule>,
    pub inclusions: Vec<ModuleMap>,
    /// `M_j / M_{j-1}`.
    pub quotients: Vec<FPModule>,
}

/// Splits `M = M_i ⊃ M_{i-1} ⊃ ... ⊃ M_0` into `⊕ S_j` with `S_j ≅ M_j/M_{j-1}`.
/// `chain[j]` is the inclusion `M_j -> M`; the last one must be onto.
pub fn decompose(m: &FPModule, chain: &[ModuleMap], psi: &ModuleMap, k: i64) -> Result<Decomposition> {
    if chain.is_empty() {
        return Err(Error::PreconditionFailure("empty filtration".into()));
    }
    let mut summands = Vec::new();
    let mut inclusions = Vec::new();
    let mut quotients = Vec::new();
    for (j, inc_j) in chain.iter().enumerate() {
        let mj = inc_j.source().clone();
        let psi_j = factor_through_injection(inc_j, &psi.compose(inc_j))
            .map_err(|_| Error::PreconditionFailure(format!("psi does not preserve M_{j}")))?;
        let below = if j == 0 {
            ModuleMap::zero(&FPModule::zero(m.ring()), &mj)
        } else {
            factor_through_injection(inc_j, &chain[j - 1])
                .map_err(|_| Error::PreconditionFailure(format!("M_{} is not inside M_{j}", j - 1)))?
        };
        let sigma = sigma_projector(&mj, &below, &psi_j, k, j as u32)?;
        let im = image(&inc_j.compose(&sigma));
        quotients.push(cokernel(&below).module);
        summands.push(im.module);
        inclusions.push(im.inclusion);
    }
    for (j, (s, q)) in summands.iter().zip(&quotients).enumerate() {
        if !s.is_isomorphic(q) {
            return Err(Error::VerificationFailure(format!(
                "summand {j} is {} but the graded piece is {}",
                s.canonical(),
                q.canonical()
            )));
        }
    }
    let total = inclusions
        .iter()
        .skip(1)
        .fold(inclusions[0].matrix().clone(), |acc, inc| acc.hcat(inc.matrix()));
    let sum = summands
        .iter()
        .skip(1)
        .fold(summands[0].clone(), |acc, s| acc.direct_sum(s));
    let assembled = ModuleMap::new(sum, m.clone(), total)?;
    if !assembled.is_isomorphism() {
        return Err(Error::VerificationFailure("the summands do not add up to M".into()));
    }
    Ok(Decomposition {
        summands,
        inclusions,
        quotients,
    })
}

/// Whether `ψ_k ∘ ψ_{k'} = ψ_{kk'}` and `ψ_k ∘ ψ_{k'} = ψ_{k'} ∘ ψ_k` on every component.
pub fn check_adams_composition(
    a: &AdamsEndoModule,
    b: &AdamsEndoModule,
    ab: &AdamsEndoModule,
) -> Result<bool> {
    if ab.k != a.k * b.k {
        return Err(Error::DomainError(format!("{} is not {} * {}", ab.k, a.k, b.k)));
    }
    let n = a.base.modules().len();
    if b.base.modules().len() != n || ab.base.modules().len() != n {
        return Err(Error::WindowError("operators live on different windows".into()));
    }
    let ring = a.base.ring().join(b.base.ring()).join(ab.base.ring());
    Ok(a.base.indices().all(|i| {
        let (pa, pb, pab) = (
            a.psi(i).localize(&ring),
            b.psi(i).localize(&ring),
            ab.psi(i).localize(&ring),
        );
        pa.compose(&pb).equals(&pab) && pa.compose(&pb).equals(&pb.compose(&pa))
    }))
}

/// Primes `p` dividing the torsion exponent of `m`.
pub fn torsion_primes(m: &FPModule) -> Vec<u64> {
    match m.annihilator_exponent() {
        Some(e) => u64::try_from(&e).map(prime_factors).unwrap_or_default(),
        None => Vec::new(),
    }
}
