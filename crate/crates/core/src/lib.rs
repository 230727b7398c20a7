//! Exact twisted multi-derivations, hom-connections and integral forms.
//!
//! The crate builds differential calculi on presented noncommutative algebras
//! from generator data, then checks the resulting identities with exact
//! arithmetic over rational functions in the deformation parameters.

pub mod exec;
pub mod scalars;
pub mod check;
pub mod ncalg;
pub mod linmap;
pub mod multider;
pub mod linalg;
pub mod dga;
pub mod sample;
pub mod homconn;
pub mod integrals;
pub mod descent;
pub mod matrixcalc;
pub mod frontend;
