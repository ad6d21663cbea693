//! Sector-structured states and operators on charged systems.
//!
//! Three layers:
//! - [`rep`]: concrete group-representation spaces carrying color degrees of
//!   freedom, the Fourier transform of the regular representation, gauge and
//!   global actions, and the twirl map.
//! - [`space`]: flavor-only sector spaces for one to three parties with a
//!   definite total charge, pure (possibly subnormalized) states over them,
//!   partial trace and conjugate-charge purification.
//! - [`algebra`]: operator algebras on joint sector spaces and numerical
//!   commutants.

pub mod algebra;
pub mod rep;
pub mod space;

pub use algebra::{algebra_basis, commutant, commutant_dense, span_containment, AlgebraKind};
pub use rep::{fourier_regular, GroupRepSpace, RegularRepSpace};
pub use space::{
    partial_trace, purify_with_conjugate, BlockInfo, ConservationTag, InvariantDensity,
    JointSpace, SectorOperator, SectorState,
};
