//! Quadratic fields `Q(√d)` and their orders `R_n = Z[nα]` with `n = p^a`.
//!
//! This module holds the field-level data (fundamental discriminant,
//! splitting of `p`, the index function `L(n, d)`); submodules provide units,
//! binary quadratic forms, the conductor ladder and the `ρ(R_n)` engines.

pub mod engine;
pub mod forms;
pub mod htable;
pub mod indefinite;
pub mod ladder;
pub mod units;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, is_squarefree, kronecker};
use crate::error::{Error, Result};

pub use engine::{
    cl_rn_order, dj_values, elasticity_rn, elasticity_rn_cyclic, infer_cyclic, monotonicity_check,
    run_pipeline, ConductorLadder, Cyclicity, DjBranch, DjValue, MonotonicityReport,
    QuadraticInput, QuadraticReport, SuppliedLadder,
};
pub use forms::{class_group_for_discriminant, class_group_imaginary, BQForm, FormClassGroup};
pub use htable::ClassNumberTable;
pub use indefinite::prime_over_is_principal_real;
pub use ladder::{tau_ladder_imaginary, TauLadder};
pub use units::{fundamental_unit, unit_data, unit_index, QuadInt, UnitData};

/// How a rational prime decomposes in `Q(√d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl std::fmt::Display for Splitting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        })
    }
}

/// The generator `α` of the maximal order `Z[α]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaKind {
    /// `α = √d`, for `d ≡ 2, 3 (mod 4)`.
    RootD,
    /// `α = (1+√d)/2`, for `d ≡ 1 (mod 4)`.
    HalfInteger,
}

pub fn check_field(d: i64) -> Result<()> {
    if d == 0 || d == 1 || !is_squarefree(d) {
        return Err(Error::InvalidArgument(format!("d = {d} must be a squarefree integer other than 0, 1")));
    }
    Ok(())
}

pub fn alpha_kind(d: i64) -> AlphaKind {
    if d.rem_euclid(4) == 1 {
        AlphaKind::HalfInteger
    } else {
        AlphaKind::RootD
    }
}

/// Fundamental discriminant `d_K` of `Q(√d)`.
pub fn fundamental_discriminant(d: i64) -> Result<i64> {
    check_field(d)?;
    Ok(match alpha_kind(d) {
        AlphaKind::HalfInteger => d,
        AlphaKind::RootD => 4 * d,
    })
}

/// Ramified iff `p | d_K`, otherwise split or inert by `(d_K | p)`.
pub fn splitting_type(d: i64, p: u64) -> Result<Splitting> {
    let dk = fundamental_discriminant(d)?;
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if dk.unsigned_abs() % p == 0 {
        return Ok(Splitting::Ramified);
    }
    Ok(match kronecker(dk, p) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        k => return Err(Error::Invariant(format!("kronecker({dk}, {p}) = {k} for unramified p"))),
    })
}

/// `L(n, d)` together with a flag telling whether a split prime (value
/// `p − 1`, an extrapolation beyond the inert/ramified rules) was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LValue {
    pub value: u64,
    pub used_split_rule: bool,
}

/// Multiplicative over prime powers, `L(p^r, d) = p^{r−1}·L(p, d)` with
/// `L(p, d)` equal to `p` (ramified), `p + 1` (inert) or `p − 1` (split).
pub fn l_function(n: u64, d: i64) -> Result<LValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("L(n, d) needs n >= 1".into()));
    }
    let mut value = 1u64;
    let mut used_split_rule = false;
    for (p, r) in factorize(n) {
        let base = match splitting_type(d, p)? {
            Splitting::Ramified => p,
            Splitting::Inert => p + 1,
            Splitting::Split => {
                used_split_rule = true;
                p - 1
            }
        };
        let factor = p
            .checked_pow(r - 1)
            .and_then(|x| x.checked_mul(base))
            .ok_or_else(|| Error::InvalidArgument(format!("L({n}, {d}) overflows")))?;
        value = value
            .checked_mul(factor)
            .ok_or_else(|| Error::InvalidArgument(format!("L({n}, {d}) overflows")))?;
    }
    Ok(LValue { value, used_split_rule })
}

/// The order `R_{p^a}` of conductor `p^a` in `Q(√d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadraticOrderSpec {
    pub d: i64,
    pub p: u64,
    pub a: u32,
}

impl QuadraticOrderSpec {
    pub fn new(d: i64, p: u64, a: u32) -> Result<Self> {
        check_field(d)?;
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if a == 0 {
            return Err(Error::InvalidArgument("exponent a must be at least 1".into()));
        }
        let spec = QuadraticOrderSpec { d, p, a };
        spec.conductor_at(a)?;
        Ok(spec)
    }

    /// `p^i`, checked.
    pub fn conductor_at(&self, i: u32) -> Result<u64> {
        self.p
            .checked_pow(i)
            .ok_or_else(|| Error::InvalidArgument(format!("{}^{} overflows", self.p, i)))
    }

    /// The conductor `n = p^a`.
    pub fn n(&self) -> u64 {
        self.p.pow(self.a)
    }

    pub fn discriminant_k(&self) -> i64 {
        fundamental_discriminant(self.d).expect("validated")
    }

    /// Discriminant `p^{2i}·d_K` of `R_{p^i}`.
    pub fn discriminant_at(&self, i: u32) -> Result<i64> {
        let f = self.conductor_at(i)? as i64;
        f.checked_mul(f)
            .and_then(|f2| f2.checked_mul(self.discriminant_k()))
            .ok_or_else(|| Error::InvalidArgument(format!("discriminant of conductor {f} overflows")))
    }

    pub fn splitting(&self) -> Splitting {
        splitting_type(self.d, self.p).expect("validated")
    }

    pub fn alpha_kind(&self) -> AlphaKind {
        alpha_kind(self.d)
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }
}
