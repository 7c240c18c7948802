//! Hochschild cohomology of finite-dimensional quotients of path algebras.

pub mod algebra;
pub mod element;
pub mod error;
pub mod field;
pub mod hochschild;
pub mod koszul;
pub mod linalg;
pub mod monomial;
pub mod presentation;
pub mod quiver;
pub mod rewrite;
pub mod ring;
pub mod xu;

pub use algebra::Algebra;
pub use element::{free_multiply, AlgebraElement};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use presentation::Presentation;
pub use quiver::{enumerate_paths, Path, Quiver};
pub use rewrite::{RewriteRule, RewriteSystem};
