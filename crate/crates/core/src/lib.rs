//! Computational tools for McKay quivers, preprojective algebras, cornered
//! algebras and framed quiver representations.
//!
//! The core is generic over the scalar [`Field`]; the aliases below fix the
//! common choices.

pub mod algebra;
pub mod corner;
pub mod error;
pub mod gamma;
pub mod io;
pub mod linalg;
pub mod moduli;
pub mod quiver;
pub mod rep;
pub mod scalar;

pub use algebra::{AlgebraKind, GradedAlgebra, GradedSlice};
pub use corner::{CorneredAlgebra, TruncatedGradedModule};
pub use error::{Error, Result};
pub use gamma::{build_group, GammaDescriptor, GroupData, Series};
pub use linalg::{Matrix, Subspace};
pub use quiver::{DimVector, Quiver, StabilityParam};
pub use rep::{FramedRep, QuiverRep};
pub use scalar::{Field, Fp, Rational, F2, F3, F5, F7};

pub type QMatrix = Matrix<Rational>;
/// Framed representation with exact rational maps.
pub type QRep = QuiverRep<Rational>;
pub type QAlgebra = GradedAlgebra<Rational>;
pub type QCornered = CorneredAlgebra<Rational>;
