//! Units of quadratic orders: fundamental units of real fields by continued
//! fractions, torsion generators for `Q(i)` and `Q(√−3)`, and unit indices
//! `[U(R̄) : U(R_m)]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{alpha_kind, check_field, AlphaKind, QuadraticOrderSpec};
use crate::error::{Error, Result};

/// `x + y·α` in the maximal order of `Q(√d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub d: i64,
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadInt {
    pub fn new(d: i64, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt { d, x: x.into(), y: y.into() }
    }

    pub fn one(d: i64) -> Self {
        QuadInt::new(d, 1, 0)
    }

    /// `α² = c0 + c1·α`.
    fn alpha_square(d: i64) -> (i64, i64) {
        match alpha_kind(d) {
            AlphaKind::RootD => (d, 0),
            AlphaKind::HalfInteger => ((d - 1) / 4, 1),
        }
    }

    pub fn mul(&self, other: &QuadInt) -> QuadInt {
        let (c0, c1) = QuadInt::alpha_square(self.d);
        let yy = &self.y * &other.y;
        QuadInt {
            d: self.d,
            x: &self.x * &other.x + &yy * c0,
            y: &self.x * &other.y + &other.x * &self.y + &yy * c1,
        }
    }

    pub fn pow(&self, k: u64) -> QuadInt {
        let mut acc = QuadInt::one(self.d);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Field norm.
    pub fn norm(&self) -> BigInt {
        match alpha_kind(self.d) {
            AlphaKind::RootD => &self.x * &self.x - &self.y * &self.y * self.d,
            AlphaKind::HalfInteger => {
                &self.x * &self.x + &self.x * &self.y + &self.y * &self.y * ((1 - self.d) / 4)
            }
        }
    }

    /// Membership in `R_m = Z + mR̄`: `m` divides the `α`-coefficient.
    pub fn in_order(&self, m: u64) -> bool {
        (&self.y % BigInt::from(m)).is_zero()
    }
}

fn signed_term(out: &mut String, coeff: &BigInt, root: &str) {
    if coeff.is_zero() {
        return;
    }
    let mag = coeff.abs();
    if out.is_empty() {
        if coeff.is_negative() {
            out.push('-');
        }
    } else {
        out.push(if coeff.is_negative() { '-' } else { '+' });
    }
    if !mag.is_one() {
        out.push_str(&mag.to_string());
    }
    out.push_str(root);
}

/// Written in terms of `√d`, e.g. `377+12√987` or `(1+√5)/2`.
impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("√{}", self.d);
        let (rational, irrational, denom) = match alpha_kind(self.d) {
            AlphaKind::RootD => (self.x.clone(), self.y.clone(), 1),
            AlphaKind::HalfInteger => {
                let r: BigInt = &self.x * 2 + &self.y;
                if r.is_even() && self.y.is_even() {
                    (r / 2, &self.y / 2, 1)
                } else {
                    (r, self.y.clone(), 2)
                }
            }
        };
        let mut s = if rational.is_zero() { String::new() } else { rational.to_string() };
        signed_term(&mut s, &irrational, &root);
        if s.is_empty() {
            s.push('0');
        }
        if denom == 2 {
            write!(f, "({s})/2")
        } else {
            f.write_str(&s)
        }
    }
}

impl Serialize for QuadInt {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

/// The fundamental unit `u > 1` of the maximal order of `Q(√d)`, `d > 1`.
///
/// Expands `ω = (s + √d_K)/2` (`s = d_K mod 2`) as a continued fraction; the
/// first convergent `h/k` with `h − kω'` of norm `±1` gives the unit.
pub fn fundamental_unit(d: i64) -> Result<QuadInt> {
    check_field(d)?;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("fundamental units need d > 1, got {d}")));
    }
    let disc = super::fundamental_discriminant(d)?;
    let s = disc.rem_euclid(2);
    let root = disc.sqrt();
    let (mut p, mut q) = (s, 2i64);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    // the period of the expansion is far below this for any i64 field
    for _ in 0..10_000_000u64 {
        let a = (p + root).div_euclid(q);
        let h2 = &h1 * a + &h0;
        let k2 = &k1 * a + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let unit = match alpha_kind(d) {
            AlphaKind::RootD => QuadInt { d, x: h1.clone(), y: k1.clone() },
            AlphaKind::HalfInteger => QuadInt { d, x: &h1 - &k1, y: k1.clone() },
        };
        if unit.norm().abs().is_one() {
            return Ok(unit);
        }
        p = a * q - p;
        q = (disc - p * p) / q;
    }
    Err(Error::BudgetExhausted(format!("continued fraction for d = {d} did not close")))
}

/// Generator of `U(R̄)` modulo `±1`: the fundamental unit for real fields,
/// `i` for `d = −1`, `ζ_6 = (1+√−3)/2` for `d = −3`, none otherwise.
pub fn unit_generator(d: i64) -> Result<Option<QuadInt>> {
    check_field(d)?;
    Ok(match d {
        d if d > 1 => Some(fundamental_unit(d)?),
        -1 | -3 => Some(QuadInt::new(d, 0, 1)),
        _ => None,
    })
}

/// Least `k ≥ 1` with `u^k ∈ R_m`, iterating with coefficients reduced
/// modulo `m` (only the residue of the `α`-coefficient decides membership).
pub fn unit_index(u: &QuadInt, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("unit_index needs m >= 1".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    if m > 1 << 62 {
        return Err(Error::InvalidArgument(format!("modulus {m} is too large")));
    }
    let m128 = m as i128;
    let red = |v: &BigInt| -> i128 {
        let r = v.mod_floor(&BigInt::from(m));
        i128::try_from(r).expect("residue fits")
    };
    let (c0, c1) = QuadInt::alpha_square(u.d);
    let (c0, c1) = ((c0 as i128).rem_euclid(m128), (c1 as i128).rem_euclid(m128));
    let (ux, uy) = (red(&u.x), red(&u.y));
    let (mut x, mut y) = (ux, uy);
    let limit = (m as u128) * (m as u128) + 1;
    let mut k: u128 = 1;
    while y != 0 {
        let yy = y * uy % m128;
        let nx = (x * ux % m128 + yy * c0 % m128) % m128;
        let ny = (x * uy % m128 + ux * y % m128 + yy * c1 % m128) % m128;
        x = nx;
        y = ny;
        k += 1;
        if k > limit {
            return Err(Error::Invariant(format!("{u} has no power in R_{m}; not a unit?")));
        }
    }
    u64::try_from(k).map_err(|_| Error::Invariant("unit index overflows".into()))
}

/// Unit generator and the indices `k_i = [U(R̄) : U(R_{p^i})]`, `i = 0..=a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitData {
    pub generator: Option<QuadInt>,
    pub indices: Vec<u64>,
}

impl UnitData {
    /// `U(R_{p^i}) ≠ U(R_{p^{i+1}})`.
    pub fn differs_at(&self, i: usize) -> bool {
        self.indices[i] != self.indices[i + 1]
    }
}

pub fn unit_data(spec: &QuadraticOrderSpec) -> Result<UnitData> {
    let generator = unit_generator(spec.d)?;
    let mut indices = Vec::with_capacity(spec.a as usize + 1);
    for i in 0..=spec.a {
        let m = spec.conductor_at(i)?;
        indices.push(match &generator {
            Some(u) => unit_index(u, m)?,
            None => 1,
        });
    }
    for w in indices.windows(2) {
        if w[1] % w[0] != 0 {
            return Err(Error::Invariant(format!("unit indices {indices:?} do not form a divisor chain")));
        }
    }
    Ok(UnitData { generator, indices })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_units() {
        assert_eq!(fundamental_unit(2).unwrap(), QuadInt::new(2, 1, 1));
        assert_eq!(fundamental_unit(3).unwrap(), QuadInt::new(3, 2, 1));
        assert_eq!(fundamental_unit(987).unwrap(), QuadInt::new(987, 377, 12));
        assert_eq!(fundamental_unit(79).unwrap(), QuadInt::new(79, 80, 9));
        assert_eq!(fundamental_unit(5).unwrap().to_string(), "(1+√5)/2");
        assert_eq!(fundamental_unit(987).unwrap().to_string(), "377+12√987");
        assert_eq!(fundamental_unit(2).unwrap().norm(), BigInt::from(-1));
        assert!(fundamental_unit(-5).is_err());
        assert!(fundamental_unit(1).is_err());
    }

    #[test]
    fn large_unit() {
        let u = fundamental_unit(151).unwrap();
        assert_eq!(u, QuadInt::new(151, 1728148040u64, 140634693u64));
        assert!(u.norm().is_one());
    }

    #[test]
    fn indices() {
        let u = fundamental_unit(987).unwrap();
        assert_eq!(unit_index(&u, 6561).unwrap(), 2187);
        assert_eq!(unit_index(&u, 1).unwrap(), 1);
        let v = fundamental_unit(2).unwrap();
        assert_eq!(unit_index(&v, 2).unwrap(), 2);
        assert_eq!(unit_index(&v, 3).unwrap(), 4);
        assert_eq!(unit_index(&v, 9).unwrap(), 12);
        assert_eq!(unit_index(&QuadInt::new(-1, 0, 1), 3).unwrap(), 2);
        assert_eq!(unit_index(&QuadInt::new(-3, 0, 1), 2).unwrap(), 3);
    }

    #[test]
    fn unit_data_chain() {
        let spec = QuadraticOrderSpec::new(987, 3, 8).unwrap();
        let ud = unit_data(&spec).unwrap();
        assert_eq!(ud.indices, vec![1, 1, 3, 9, 27, 81, 243, 729, 2187]);
        let im = unit_data(&QuadraticOrderSpec::new(-7, 3, 2).unwrap()).unwrap();
        assert_eq!(im.indices, vec![1, 1, 1]);
    }
}
