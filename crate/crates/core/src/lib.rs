//! Exact computations with finite symplectic modules, the Heisenberg-style
//! embedding of abelian groups into `PGL_n`, quadratic forms over GF(2), and
//! the lower bounds they impose on splitting fields and splitting groups of
//! division algebras.
//!
//! Everything here is exact integer arithmetic. Roots of unity are carried as
//! exponent residues and `Q/Z` values as reduced fractions. The crate is
//! `no_std` and only needs `alloc`.
//!
//! Module map:
//!
//! * [`finabel`]: finite abelian groups, subgroups, quotients, enumeration and
//!   the elementary-operation tuple reduction.
//! * [`qzforms`]: `Q/Z`-valued alternating forms, radicals, isotropic and
//!   Lagrangian subgroups.
//! * [`heisenberg`]: monomial matrices, the embedding `A x A* -> PGL_n`, the
//!   commutator pairing and depth.
//! * [`f2quad`]: quadratic forms over GF(2) and the E8 / EC8 counting core.
//! * [`obstruction`]: splitting-group and splitting-degree lower bounds.
//! * [`liedata`]: torsion primes, Tits splitting degrees and derived constants.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

mod error;
mod intmat;
mod qz;

pub mod f2quad;
pub mod finabel;
pub mod heisenberg;
pub mod liedata;
pub mod obstruction;
pub mod qzforms;

pub use error::{Error, ErrorKind, Result};
pub use finabel::{EnumLimit, Element, FinAbGroup, Subgroup};
pub use qz::QmodZ;
pub use qzforms::SkewForm;
