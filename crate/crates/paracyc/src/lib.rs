//! Exact computer-algebra engine for equivariant periodic cyclic homology of
//! finite groups acting on finite-dimensional algebras.
//!
//! The engine works over exact rationals throughout. Its layers, bottom up:
//!
//! * [`linalg`] — sparse exact-rational linear algebra: ranks, kernels,
//!   quotients with canonical representatives, homology of two-periodic
//!   complexes, and intertwiner (simultaneous Sylvester) systems.
//! * [`group`] / [`algebra`] — finite groups with validated multiplication
//!   tables, modules and algebras carrying a group action by automorphisms,
//!   and the standard constructions: unitarization, crossed products, the
//!   conjugation function algebra on the group, the kernel algebra of the
//!   regular representation, tensor products, truncated even-form algebras
//!   under the Fedosov product, and linear-solver witnesses for quasifreeness
//!   and graded connections.
//! * [`forms`] — equivariant noncommutative differential forms with the
//!   operators `d`, `b`, `B`, the Karoubi operator `kappa`, and the symmetry
//!   operator `T`, represented both as streaming column maps and as sparse
//!   matrices per degree.
//! * [`para`] — paracomplexes (`∂² = id − T`), Hodge towers and their
//!   filtration, the equivariant X-complex, and the rescaled boundary.
//! * [`cq`] — the polynomial-in-`κ²` operator suite (`N_n`, `f_n`, `g_n`,
//!   `F`, `Q`, `P`, `S`, `H`, `L`, `R`, `K_n`) with exhaustive identity
//!   checking.
//! * [`homotopy`], [`stability`], [`greenjulg`], [`dualgj`] — chain-level
//!   correspondences: polynomial homotopy invariance, the twisted-trace
//!   stability maps, and both directions of the Green-Julg comparison.
//! * [`perturb`] — the paracomplex tensor product and the homological
//!   perturbation toolkit (special retractions and transfer of differentials).
//! * [`hp`] — homology assembly: invariant towers, Hom-supercomplexes,
//!   periodic cyclic dimensions at finite truncation with stabilization
//!   detection, and cross-checks between independent pipelines.

pub mod algebra;
pub mod cq;
pub mod dualgj;
pub mod error;
pub mod forms;
pub mod greenjulg;
pub mod group;
pub mod homotopy;
pub mod hp;
pub mod linalg;
pub mod para;
pub mod perturb;
pub mod scalar;
pub mod stability;

pub use error::EngineError;
pub use scalar::Scalar;
