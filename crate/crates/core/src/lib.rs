//! Relative Davenport constants of finite abelian groups and the elasticity
//! of non-maximal orders.
//!
//! * [`group`]: finite abelian groups, subgroups, cosets, quotients, maps.
//! * [`zerosum`]: zero-sum-free sequence search, `d_S(G)`, `D_S(G)`, `D(G)`,
//!   closed forms for cyclic groups, and the two conjecture checkers.
//! * [`elasticity`]: elasticity formulas driven by class-group data.
//! * [`quadratic`]: quadratic-field back end (splitting, units, form class
//!   groups, the conductor ladder) and the `ρ(R_n)` engines.

pub mod arith;
pub mod cache;
pub mod elasticity;
pub mod error;
pub mod group;
pub mod quadratic;
pub mod zerosum;

pub use error::{Error, Result};
pub use group::{FabGroup, GSequence, GroupElement, GroupHom, Subgroup, SubsetS};
pub use zerosum::{Engine, SrdResult};
