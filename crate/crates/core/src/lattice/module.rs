use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{smith_normal_form, BaseRing, IntMatrix, SnfResult};
use crate::error::{Error, Result};

/// Isomorphism invariant of a finitely generated `Z_S`-module: free rank
/// and the non-unit invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalForm {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match i64::try_from(x) {
            Ok(n) => seq.serialize_element(&n)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl CanonicalForm {
    pub fn zero() -> Self {
        CanonicalForm {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        CanonicalForm {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        CanonicalForm {
            free_rank: 0,
            torsion: vec![BigInt::from(order)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `Z_S^{n_gens} / column-span(relations)`.
#[derive(Clone)]
pub struct FPModule {
    ring: BaseRing,
    n_gens: usize,
    relations: IntMatrix,
    snf: Arc<SnfResult>,
}

impl fmt::Debug for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FPModule({} over {}, {} gens, relations {})",
            self.canonical(),
            self.ring,
            self.n_gens,
            self.relations
        )
    }
}

/// A module isomorphic to its input, presented on canonical generators, with
/// mutually inverse comparison matrices.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub module: FPModule,
    /// Canonical generators in terms of the old ones: rows act on old coordinates.
    pub to_canonical: IntMatrix,
    /// Old-generator expressions of the canonical generators.
    pub from_canonical: IntMatrix,
}

impl FPModule {
    pub fn new(ring: BaseRing, n_gens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != n_gens {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                n_gens
            )));
        }
        if !relations.entries_in(&ring) {
            return Err(Error::RingError(format!(
                "relation entries are not in {ring}"
            )));
        }
        Ok(Self::new_unchecked(ring, n_gens, relations))
    }

    pub(crate) fn new_unchecked(ring: BaseRing, n_gens: usize, relations: IntMatrix) -> Self {
        let snf = Arc::new(smith_normal_form(&relations, &ring));
        FPModule {
            ring,
            n_gens,
            relations,
            snf,
        }
    }

    pub fn zero(ring: &BaseRing) -> Self {
        Self::new_unchecked(ring.clone(), 0, IntMatrix::zeros(0, 0))
    }

    pub fn free(ring: &BaseRing, rank: usize) -> Self {
        Self::new_unchecked(ring.clone(), rank, IntMatrix::zeros(rank, 0))
    }

    /// `Z_S / n`; `n = 0` gives the free module of rank one.
    pub fn cyclic(ring: &BaseRing, n: i64) -> Self {
        if n == 0 {
            return Self::free(ring, 1);
        }
        Self::new_unchecked(ring.clone(), 1, IntMatrix::from_rows(&[&[n]]))
    }

    /// Direct sum of cyclic modules `Z_S / n_j` (zero entries are free).
    pub fn from_orders(ring: &BaseRing, orders: &[i64]) -> Self {
        orders
            .iter()
            .fold(Self::zero(ring), |acc, &n| acc.direct_sum(&Self::cyclic(ring, n)))
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn snf(&self) -> &SnfResult {
        &self.snf
    }

    pub fn canonical(&self) -> CanonicalForm {
        let torsion: Vec<BigInt> = self
            .snf
            .invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        CanonicalForm {
            free_rank: self.n_gens - self.snf.rank(),
            torsion,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.n_gens - self.snf.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().is_zero()
    }

    pub fn is_isomorphic(&self, other: &FPModule) -> bool {
        self.canonical() == other.canonical()
    }

    /// Smallest positive `e` coprime to `S` with `e * M = 0`; `None` if `M`
    /// has positive free rank.
    pub fn annihilator_exponent(&self) -> Option<BigInt> {
        let c = self.canonical();
        if c.free_rank > 0 {
            return None;
        }
        Some(c.torsion.last().cloned().unwrap_or_else(BigInt::one))
    }

    /// Whether every column of `v` (coordinates on the generators) is zero in the module.
    pub fn is_zero_element(&self, v: &IntMatrix) -> bool {
        assert_eq!(v.rows(), self.n_gens, "element has wrong length");
        self.snf.solve(v, &self.ring).is_some()
    }

    pub fn direct_sum(&self, other: &FPModule) -> FPModule {
        assert_eq!(self.ring, other.ring, "direct sum over different rings");
        Self::new_unchecked(
            self.ring.clone(),
            self.n_gens + other.n_gens,
            self.relations.block_diag(&other.relations),
        )
    }

    /// Same presentation over a larger ring.
    pub fn localize(&self, ring: &BaseRing) -> FPModule {
        assert!(ring.contains_ring(&self.ring), "{ring} does not contain {}", self.ring);
        Self::new_unchecked(ring.clone(), self.n_gens, self.relations.clone())
    }

    pub fn simplify(&self) -> Simplified {
        let snf = &self.snf;
        let r = snf.rank();
        let mut kept = Vec::new();
        let mut torsion = Vec::new();
        for (j, d) in snf.invariant_factors.iter().enumerate() {
            if !d.is_one() {
                kept.push(j);
                torsion.push(BigRational::from_integer(d.clone()));
            }
        }
        kept.extend(r..self.n_gens);
        let n = kept.len();
        let relations = IntMatrix::diagonal(n, torsion.len(), &torsion);
        Simplified {
            module: Self::new_unchecked(self.ring.clone(), n, relations),
            to_canonical: snf.u.select_rows(&kept),
            from_canonical: snf.u_inv.select_cols(&kept),
        }
    }
}

/// Homomorphism given by its matrix on generators (target gens x source gens).
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FPModule,
    target: FPModule,
    matrix: IntMatrix,
}

impl ModuleMap {
    /// Validates shape, ring membership and well-definedness: every relation
    /// of the source must map into the relation span of the target.
    pub fn new(source: FPModule, target: FPModule, matrix: IntMatrix) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch(format!(
                "source over {}, target over {}",
                source.ring, target.ring
            )));
        }
        if matrix.rows() != target.n_gens || matrix.cols() != source.n_gens {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.n_gens,
                source.n_gens
            )));
        }
        if !matrix.entries_in(&source.ring) {
            return Err(Error::RingError(format!(
                "matrix entries are not in {}",
                source.ring
            )));
        }
        let images = &matrix * &source.relations;
        if !target.is_zero_element(&images) {
            return Err(Error::WellDefinednessFailure(
                "a source relation does not map into the target relations".into(),
            ));
        }
        Ok(ModuleMap {
            source,
            target,
            matrix,
        })
    }

    pub(crate) fn new_unchecked(source: FPModule, target: FPModule, matrix: IntMatrix) -> Self {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (target.n_gens, source.n_gens));
        ModuleMap {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(m: &FPModule) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), IntMatrix::identity(m.n_gens))
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> Self {
        Self::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.n_gens, source.n_gens),
        )
    }

    /// Multiplication by a scalar of the base ring.
    pub fn scalar(m: &FPModule, lambda: &BigRational) -> Self {
        assert!(m.ring.contains(lambda), "scalar not in {}", m.ring);
        Self::new_unchecked(m.clone(), m.clone(), IntMatrix::scalar_identity(m.n_gens, lambda))
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn ring(&self) -> &BaseRing {
        &self.source.ring
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ModuleMap) -> ModuleMap {
        assert_eq!(inner.target.n_gens, self.source.n_gens, "composition shape mismatch");
        Self::new_unchecked(
            inner.source.clone(),
            self.target.clone(),
            &self.matrix * &inner.matrix,
        )
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            &self.matrix + &other.matrix,
        )
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            &self.matrix - &other.matrix,
        )
    }

    pub fn scale(&self, lambda: &BigRational) -> ModuleMap {
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(lambda))
    }

    /// `self - lambda * id`; requires an endomorphism.
    pub fn minus_scalar(&self, lambda: &BigRational) -> ModuleMap {
        assert_eq!(self.source.n_gens, self.target.n_gens);
        let id = IntMatrix::scalar_identity(self.source.n_gens, lambda);
        Self::new_unchecked(self.source.clone(), self.target.clone(), &self.matrix - &id)
    }

    /// Every generator maps into the target's relation span.
    pub fn is_zero(&self) -> bool {
        self.target.is_zero_element(&self.matrix)
    }

    pub fn equals(&self, other: &ModuleMap) -> bool {
        self.sub(other).is_zero()
    }

    /// Whether the endomorphism acts as multiplication by `lambda`.
    pub fn is_scalar(&self, lambda: &BigRational) -> bool {
        self.minus_scalar(lambda).is_zero()
    }

    pub fn is_injective(&self) -> bool {
        kernel(self).module.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        cokernel(self).module.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn localize(&self, ring: &BaseRing) -> ModuleMap {
        Self::new_unchecked(
            self.source.localize(ring),
            self.target.localize(ring),
            self.matrix.clone(),
        )
    }
}

pub struct Kernel {
    pub module: FPModule,
    pub inclusion: ModuleMap,
}

pub struct Cokernel {
    pub module: FPModule,
    pub projection: ModuleMap,
    /// Generator-level section of the projection (target gens per cokernel gen).
    pub section: IntMatrix,
}

pub struct Image {
    pub module: FPModule,
    pub surjection: ModuleMap,
    pub inclusion: ModuleMap,
    /// Generator-level section of the surjection (source gens per image gen).
    pub section: IntMatrix,
}

/// Columns (in source coordinates) spanning `{x : f(x) = 0 in target}`.
/// The span contains the source relations.
pub(crate) fn kernel_lift(f: &ModuleMap) -> IntMatrix {
    let m = f.source.n_gens;
    let stacked = f.matrix.hcat(&f.target.relations);
    let snf = smith_normal_form(&stacked, f.ring());
    snf.kernel_basis().top_rows(m).nonzero_columns()
}

pub fn kernel(f: &ModuleMap) -> Kernel {
    let ring = f.ring();
    let gens = kernel_lift(f);
    let g = gens.cols();
    let gen_snf = smith_normal_form(&gens, ring);
    let syzygies = gen_snf.kernel_basis();
    let old_relations = gen_snf
        .solve(&f.source.relations, ring)
        .expect("source relations lie in the kernel lift");
    let raw = FPModule::new_unchecked(ring.clone(), g, syzygies.hcat(&old_relations));
    let s = raw.simplify();
    let inclusion = ModuleMap::new_unchecked(
        s.module.clone(),
        f.source.clone(),
        &gens * &s.from_canonical,
    );
    Kernel {
        module: s.module,
        inclusion,
    }
}

/// Image of `f` presented on the source generators, before simplification.
pub(crate) fn image_raw(f: &ModuleMap) -> FPModule {
    FPModule::new_unchecked(f.ring().clone(), f.source.n_gens, kernel_lift(f))
}

pub fn image(f: &ModuleMap) -> Image {
    let raw = image_raw(f);
    let s = raw.simplify();
    let surjection = ModuleMap::new_unchecked(f.source.clone(), s.module.clone(), s.to_canonical);
    let inclusion =
        ModuleMap::new_unchecked(s.module.clone(), f.target.clone(), &f.matrix * &s.from_canonical);
    Image {
        module: s.module,
        surjection,
        inclusion,
        section: s.from_canonical,
    }
}

/// Quotient of `target` by the image of `f`, on the target generators.
pub(crate) fn cokernel_raw(f: &ModuleMap) -> FPModule {
    FPModule::new_unchecked(
        f.ring().clone(),
        f.target.n_gens,
        f.target.relations.hcat(&f.matrix),
    )
}

pub fn cokernel(f: &ModuleMap) -> Cokernel {
    let s = cokernel_raw(f).simplify();
    let projection = ModuleMap::new_unchecked(f.target.clone(), s.module.clone(), s.to_canonical);
    Cokernel {
        module: s.module,
        projection,
        section: s.from_canonical,
    }
}

/// Given an injection `inc: K -> M` and `g: X -> M` whose image lies in
/// `inc(K)`, returns `h: X -> K` with `inc ∘ h = g`.
pub fn factor_through_injection(inc: &ModuleMap, g: &ModuleMap) -> Result<ModuleMap> {
    let k = inc.source.n_gens;
    let stacked = inc.matrix.hcat(&inc.target.relations);
    let snf = smith_normal_form(&stacked, inc.ring());
    let sol = snf.solve(&g.matrix, inc.ring()).ok_or_else(|| {
        Error::PreconditionFailure("map does not land in the submodule".into())
    })?;
    Ok(ModuleMap::new_unchecked(
        g.source.clone(),
        inc.source.clone(),
        sol.top_rows(k),
    ))
}

/// Map between quotients induced by `g: X -> Y`, where the source quotient
/// is described by a generator-level section `section: Q -> X` and the target
/// quotient by its projection `proj: Y -> Q'`.
pub fn induced_on_quotients(
    source: &FPModule,
    section: &IntMatrix,
    g: &ModuleMap,
    proj: &ModuleMap,
) -> Result<ModuleMap> {
    let matrix = &(&proj.matrix * &g.matrix) * section;
    ModuleMap::new(source.clone(), proj.target.clone(), matrix)
}

/// Whether `im(f) = ker(g)` for composable `f: X -> Y`, `g: Y -> Z`.
pub fn is_exact_at(f: &ModuleMap, g: &ModuleMap) -> bool {
    if !g.compose(f).is_zero() {
        return false;
    }
    let ker = kernel(g);
    let image_span = f.matrix.hcat(&f.target.relations);
    smith_normal_form(&image_span, f.ring())
        .solve(ker.inclusion.matrix(), f.ring())
        .is_some()
}

/// Whether the submodule spanned by the columns of `a` (coordinates in `m`)
/// contains the one spanned by `b`.
pub fn submodule_contains(m: &FPModule, a: &IntMatrix, b: &IntMatrix) -> bool {
    let span = a.hcat(&m.relations);
    smith_normal_form(&span, &m.ring).solve(b, &m.ring).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> BaseRing {
        BaseRing::integers()
    }

    fn mul_by(m: &FPModule, n: i64) -> ModuleMap {
        ModuleMap::scalar(m, &BigRational::from_integer(n.into()))
    }

    #[test]
    fn kernel_examples() {
        let zz = FPModule::free(&z(), 1);
        assert!(kernel(&mul_by(&zz, 2)).module.is_zero());
        let k = kernel(&mul_by(&zz, 0));
        assert_eq!(k.module.canonical(), CanonicalForm::free(1));
        assert!(k.inclusion.is_isomorphism());

        // Z/4 --x2--> Z/4: the four elements 0,1,2,3 map to 0,2,0,2, so the kernel is {0, 2}.
        let z4 = FPModule::cyclic(&z(), 4);
        let k = kernel(&mul_by(&z4, 2));
        assert_eq!(k.module.canonical(), CanonicalForm::cyclic(2));
        let gen_image = k.inclusion.matrix().get(0, 0).to_integer();
        assert_eq!(((gen_image % 4) + 4) % 4, BigInt::from(2));
    }

    #[test]
    fn cokernel_examples() {
        let zz = FPModule::free(&z(), 1);
        let c = cokernel(&mul_by(&zz, 2));
        assert_eq!(c.module.canonical(), CanonicalForm::cyclic(2));
        assert!(c.projection.compose(&mul_by(&zz, 2)).is_zero());

        let z2 = FPModule::free(&z(), 2);
        assert!(cokernel(&ModuleMap::identity(&z2)).module.is_zero());

        let r3 = BaseRing::new([3]).unwrap();
        let c = cokernel(&mul_by(&FPModule::free(&r3, 1), 6));
        assert_eq!(c.module.canonical(), CanonicalForm::cyclic(2));
    }

    #[test]
    fn image_examples() {
        let zz = FPModule::free(&z(), 1);
        let im = image(&mul_by(&zz, 2));
        assert_eq!(im.module.canonical(), CanonicalForm::free(1));
        assert!(cokernel(&im.inclusion).module.canonical() == CanonicalForm::cyclic(2));

        let z3 = FPModule::cyclic(&z(), 3);
        assert!(image(&ModuleMap::zero(&zz, &z3)).module.is_zero());

        // (a, b) -> 2a + 4b: the column gcd is 2
        let f = ModuleMap::new(
            FPModule::free(&z(), 2),
            zz.clone(),
            IntMatrix::from_rows(&[&[2, 4]]),
        )
        .unwrap();
        let im = image(&f);
        assert_eq!(im.module.canonical(), CanonicalForm::free(1));
        assert_eq!(cokernel(&im.inclusion).module.canonical(), CanonicalForm::cyclic(2));
        assert!(im.inclusion.compose(&im.surjection).equals(&f));
    }

    #[test]
    fn isomorphism_examples() {
        let z6 = FPModule::cyclic(&z(), 6);
        assert!(ModuleMap::identity(&z6).is_isomorphism());
        let zz = FPModule::free(&z(), 1);
        assert!(!mul_by(&zz, 2).is_isomorphism());
        let r2 = BaseRing::new([2]).unwrap();
        assert!(mul_by(&FPModule::free(&r2, 1), 2).is_isomorphism());
    }

    #[test]
    fn annihilators() {
        assert_eq!(
            FPModule::from_orders(&z(), &[2, 4]).annihilator_exponent(),
            Some(BigInt::from(4))
        );
        assert_eq!(FPModule::free(&z(), 1).annihilator_exponent(), None);
        let r3 = BaseRing::new([3]).unwrap();
        assert_eq!(FPModule::cyclic(&r3, 12).annihilator_exponent(), Some(BigInt::from(4)));
        assert_eq!(FPModule::zero(&z()).annihilator_exponent(), Some(BigInt::one()));
    }

    #[test]
    fn torsion_cannot_map_to_free() {
        let err = ModuleMap::new(
            FPModule::cyclic(&z(), 2),
            FPModule::free(&z(), 1),
            IntMatrix::from_rows(&[&[1]]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::WellDefinednessFailure(_)));
    }

    #[test]
    fn simplify_round_trip() {
        let m = FPModule::new(z(), 3, IntMatrix::from_rows(&[&[2, 0], &[4, 6], &[0, 0]])).unwrap();
        let s = m.simplify();
        assert!(s.module.is_isomorphic(&m));
        let to = ModuleMap::new(m.clone(), s.module.clone(), s.to_canonical.clone()).unwrap();
        let from = ModuleMap::new(s.module.clone(), m.clone(), s.from_canonical.clone()).unwrap();
        assert!(from.compose(&to).equals(&ModuleMap::identity(&m)));
        assert!(to.compose(&from).equals(&ModuleMap::identity(&s.module)));
    }
}
