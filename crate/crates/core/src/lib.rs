//! Semiovals and 2-blocking sets contained in the Hermitian curve of PG(2,q²).

pub mod constructions;
pub mod covering;
pub mod error;
pub mod gf;
pub mod hermitian;
pub mod numtheory;
pub mod oracle;
pub mod plane;
pub mod pointset;
pub mod semioval;

pub use error::{Error, Result};
pub use gf::{Elem, FieldSpec};
pub use hermitian::{Frame, HermitianModel};
pub use plane::{Plane, PlaneIndex, ProjLine, ProjPoint};
pub use pointset::{Domain, PointSet};
