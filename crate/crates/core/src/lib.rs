//! Exact-arithmetic machinery for the unit-index and regulator-constant
//! identities that govern class-number relations in dihedral extensions of
//! order 2p.
//!
//! The crate is organized around finitely presented abelian groups with an
//! action of the dihedral group `D = <t, s | t^p = s^2 = 1, sts = t^-1>`:
//!
//! - [`exactalg`]: integer matrices, Smith normal form, lattices, indices,
//!   Gram determinants. Everything downstream reduces to this.
//! - [`dihedral`]: the group `D_2p`, its subgroups, cosets and group-algebra
//!   elements.
//! - [`dmodule`]: presented `D`-modules over Z or Z localized at a prime,
//!   with the fixed-point / coinvariant / norm functors and a seeded random
//!   generator for property testing.
//! - [`tate`]: Tate cohomology of cyclic subgroups and of `D` itself,
//!   assembled from Sylow restrictions, plus an independent bar-resolution
//!   oracle used by the test suites.
//! - [`lemmas`]: verifiers that recompute both sides of the index-theoretic
//!   identities through disjoint code paths.
//! - [`regconst`]: rational representation multiplicities, regulator
//!   constants of paired lattices and the index identity relating them.
//! - [`arith`]: splitting data, local factors, archimedean signatures and
//!   torsion orders from cyclotomic character data.
//! - [`bundle`]: ingestion and verification of field-invariant bundles
//!   (the end-to-end class-number-formula checker).

pub mod arith;
pub mod bundle;
pub mod dihedral;
pub mod dmodule;
pub mod error;
pub mod exactalg;
pub mod harness;
pub mod lemmas;
pub mod regconst;
pub mod tate;

pub use error::{Error, Result};
