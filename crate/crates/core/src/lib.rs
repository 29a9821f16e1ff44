//! Exact Clifford-algebra engine: blade calculus, structure constants,
//! regular representations in real/complex/quaternion form, generalized
//! first-order wave-equation systems and their numeric dispersion checks.

// dense index loops read better than iterator chains in the matrix code
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod blades;
pub mod dispersion;
pub mod equations;
pub mod error;
pub mod golden;
pub mod representations;
pub mod shell;
pub mod units;

pub use algebra::{classify, BasisOrder, CliffordAlgebra, MultiVector};
pub use blades::{
    blade_product, blade_square, canonicalize, Blade, LabelMap, Signature, SignedBlade,
};
pub use error::{AlgebraError, Result};
