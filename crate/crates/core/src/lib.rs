//! Exact class groups, fiber fans and Cox-ring presentations of toric fiber
//! spaces `π: X → Y`.
//!
//! The crate computes `Cl(X)`, the vertical classes `Cl_π(X)`, the class group
//! of the generic fiber, and a monomial presentation of the localized Cox ring
//! modulo `⟨1 − u(w)⟩`, which it checks against the Cox ring of the fiber by
//! two independent graded-dimension counts. The [`blowup`] module assembles
//! non-finite-generation certificates for blow-ups of toric fiber spaces.

pub mod blowup;
pub mod coxfiber;
pub mod divclass;
pub mod fan;
pub mod intlin;
pub mod io;
pub mod polyhedral;
