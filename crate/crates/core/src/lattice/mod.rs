//! Exact linear algebra over `Z` and its localizations `Z_S`: Smith normal
//! form, kernels, cokernels and images of finitely presented modules.

mod matrix;
mod module;
mod ring;
mod snf;

pub use matrix::IntMatrix;
pub use module::{
    cokernel, factor_through_injection, image, induced_on_quotients, is_exact_at, kernel,
    submodule_contains, CanonicalForm, Cokernel, FPModule, Image, Kernel, ModuleMap, Simplified,
};
pub(crate) use module::kernel_lift;
pub use ring::BaseRing;
pub use snf::{smith_normal_form, SnfResult};

use num_rational::BigRational;

/// Integer as an exact scalar.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Exact fraction `n / d`.
pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
