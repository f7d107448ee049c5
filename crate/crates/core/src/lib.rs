//! Harmonic analysis on finite Gelfand pairs.
//!
//! Builds permutation groups, splits them into double cosets of a subgroup,
//! computes the spherical functions of the resulting commutative algebra, and
//! provides the spherical Fourier transform, Fourier multipliers `T_m` under
//! the Plancherel and counting conventions, their Schatten norms, and a
//! randomized harness that checks the boundedness and Schatten-class
//! inequalities for multipliers.

pub mod builtin;
pub mod error;
pub mod gelfand;
pub mod group;
pub mod io;
pub mod multiplier;
pub mod schatten;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use gelfand::{
    compute_spherical_functions, double_cosets, is_gelfand_pair, BiInvariantFunction,
    GelfandPair, SphericalTable,
};
pub use group::{build_group, FiniteGroup, GroupFunction, GroupOptions};
pub use multiplier::{build_operator, Multiplier, MultiplierOperator};
pub use transform::{inverse_sft, sft, Convention, SpectralVector};
