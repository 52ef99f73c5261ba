//! Elasticity of orders from class-group data.
//!
//! Inputs are purely group theoretic: `Cl(R)`, the kernel of the map
//! `Cl(R) → Cl(R̄)`, the class of the prime `P` over the conductor and the
//! exponent `a` with `I = P^a`. Nothing here touches a number field, so data
//! produced elsewhere (for example by an external class group computation)
//! can be fed in directly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{coset_of, FabGroup, GroupElement, Subgroup, SubsetS};
use crate::zerosum::Engine;

pub type Rational = Ratio<i64>;

/// An exact elasticity: a rational `≥ 1` in lowest terms, or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Elasticity {
    Finite(Rational),
    Infinite,
}

impl Elasticity {
    pub fn finite(r: Rational) -> Result<Self> {
        if r < Rational::one() {
            return Err(Error::Invariant(format!("elasticity {r} is below 1")));
        }
        Ok(Elasticity::Finite(r))
    }

    pub fn from_parts(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Self::finite(Rational::new(num, den))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Elasticity::Infinite)
    }

    pub fn value(&self) -> Option<Rational> {
        match self {
            Elasticity::Finite(r) => Some(*r),
            Elasticity::Infinite => None,
        }
    }
}

impl PartialOrd for Elasticity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Elasticity {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Elasticity::Infinite, Elasticity::Infinite) => Ordering::Equal,
            (Elasticity::Infinite, _) => Ordering::Greater,
            (_, Elasticity::Infinite) => Ordering::Less,
            (Elasticity::Finite(a), Elasticity::Finite(b)) => a.cmp(b),
        }
    }
}

/// Prints `"3/2"`, `"4"` or `"infinite"`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Elasticity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elasticity::Finite(r) => write!(f, "{}", format_rational(r)),
            Elasticity::Infinite => write!(f, "infinite"),
        }
    }
}

impl FromStr for Elasticity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("infinite") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Elasticity::Infinite);
        }
        let r = Rational::from_str(s).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
        Elasticity::finite(r)
    }
}

impl Serialize for Elasticity {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Elasticity {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Group data for an order `R` whose conductor is `I = P^a`.
///
/// `p_class` is any element of `Cl(R)` lying over `[P]`; only its coset
/// modulo `ker_tau` matters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderClassData {
    #[serde(rename = "group")]
    pub cl_r: FabGroup,
    #[serde(rename = "ker_tau", serialize_with = "ser_subgroup")]
    pub ker_tau: Subgroup,
    pub p_class: GroupElement,
    pub a: u32,
    pub p_principal: bool,
    pub conductor_principal: bool,
}

fn ser_subgroup<S: Serializer>(h: &Subgroup, ser: S) -> std::result::Result<S::Ok, S::Error> {
    h.elements().serialize(ser)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrderClassData {
    group: FabGroup,
    ker_tau: SubsetS,
    p_class: GroupElement,
    a: u32,
    p_principal: bool,
    conductor_principal: bool,
}

impl<'de> Deserialize<'de> for OrderClassData {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawOrderClassData::deserialize(de)?;
        let ker = Subgroup::from_elements(&raw.group, raw.ker_tau).map_err(serde::de::Error::custom)?;
        OrderClassData::new(
            raw.group,
            ker,
            raw.p_class,
            raw.a,
            raw.p_principal,
            raw.conductor_principal,
        )
        .map_err(serde::de::Error::custom)
    }
}

impl OrderClassData {
    /// Validates the record: `a ≥ 1`, `p_class ∈ Cl(R)`, a principal `P`
    /// has trivial class, and `conductor_principal` agrees with whether
    /// `a·[P]` is trivial in `Cl(R)/ker_tau`.
    pub fn new(
        cl_r: FabGroup,
        ker_tau: Subgroup,
        p_class: GroupElement,
        a: u32,
        p_principal: bool,
        conductor_principal: bool,
    ) -> Result<Self> {
        ker_tau.verify(&cl_r)?;
        cl_r.check(&p_class)?;
        if a == 0 {
            return Err(Error::InvalidArgument("conductor exponent a must be at least 1".into()));
        }
        let data = OrderClassData {
            cl_r,
            ker_tau,
            p_class,
            a,
            p_principal,
            conductor_principal,
        };
        if p_principal && !data.ker_tau.contains(&data.p_class) {
            return Err(Error::InvalidArgument(format!(
                "P is declared principal but its class {} is not in ker(tau)",
                data.p_class
            )));
        }
        let power_trivial = data.ker_tau.contains(&data.cl_r.mul(a as i64, &data.p_class));
        if power_trivial != conductor_principal {
            return Err(Error::InvalidArgument(format!(
                "conductor_principal = {conductor_principal} contradicts the class data: \
                 {a}*[P] is {}trivial in Cl(R)/ker(tau)",
                if power_trivial { "" } else { "non" }
            )));
        }
        Ok(data)
    }

    /// The preimage of `i·[P]` in `Cl(R)`.
    pub fn coset_of_power(&self, i: i64) -> SubsetS {
        coset_of(&self.cl_r, &self.ker_tau, &self.cl_r.mul(i, &self.p_class))
    }
}

/// `d_S(Cl(R))` for `S` the preimage of `[P^i]`. Also evaluates `[P^{-i}]`
/// and fails if the two differ, which would contradict invariance under
/// negation.
pub fn d_coset_of_power(engine: &Engine, data: &OrderClassData, i: i64) -> Result<u64> {
    let plus = engine.small_rel_davenport(&data.cl_r, &data.coset_of_power(i))?.value;
    let minus = engine.small_rel_davenport(&data.cl_r, &data.coset_of_power(-i))?.value;
    if plus != minus {
        return Err(Error::Invariant(format!(
            "d differs between [P^{i}] ({plus}) and [P^-{i}] ({minus})"
        )));
    }
    Ok(plus)
}

fn half(x: u64) -> Rational {
    Rational::new(x as i64, 2)
}

/// `max{ D/2, (D_{P^i}+1)/2 + i/a : 0 ≤ i < a }` for a conductor that is
/// principal in the maximal order and prime in `R`.
pub fn elasticity_prime_conductor(engine: &Engine, data: &OrderClassData) -> Result<Elasticity> {
    if !data.conductor_principal {
        return Err(Error::Unsupported(
            "conductor is not principal in the maximal order; use the non-principal formula".into(),
        ));
    }
    let big_d = engine.davenport(&data.cl_r)?;
    let a = data.a as i64;
    let mut best = half(big_d);
    for i in 0..a {
        let d_pi = d_coset_of_power(engine, data, i)? + 1;
        let term = half(d_pi + 1) + Rational::new(i, a);
        best = best.max(term);
    }
    Elasticity::finite(best)
}

/// `D(Cl(R))/2`, valid for `a = 1` with `P` not principal.
pub fn elasticity_prime_nonprincipal(engine: &Engine, data: &OrderClassData) -> Result<Elasticity> {
    if data.a != 1 {
        return Err(Error::Unsupported(format!(
            "no formula for a non-principal conductor P^{} with exponent above 1",
            data.a
        )));
    }
    if data.p_principal {
        return Err(Error::Precondition("P is principal; use the principal-conductor formula".into()));
    }
    Elasticity::finite(half(engine.davenport(&data.cl_r)?))
}

/// Outcome of the prime-count test over the conductor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuardOutcome {
    /// More than one maximal-order prime lies over some prime of `R`.
    Infinite,
    /// Exactly one prime: a finite formula applies.
    Pass,
}

pub fn infinite_elasticity_guard(primes_over_conductor: i64) -> Result<GuardOutcome> {
    match primes_over_conductor {
        n if n < 1 => Err(Error::InvalidArgument(format!(
            "prime count must be at least 1, got {n}"
        ))),
        1 => Ok(GuardOutcome::Pass),
        _ => Ok(GuardOutcome::Infinite),
    }
}

/// `max{ D/2, (D_P+1)/2 + (a−1)/a }`, after checking `D_P ≥ D_{P^i}` for
/// every `0 ≤ i < a`. The result is compared with the general formula.
pub fn simpler_formula_if_dominant(engine: &Engine, data: &OrderClassData) -> Result<Elasticity> {
    if !data.conductor_principal {
        return Err(Error::Unsupported("conductor is not principal in the maximal order".into()));
    }
    let d_p = d_coset_of_power(engine, data, 1)?;
    for i in 0..data.a as i64 {
        let d_i = d_coset_of_power(engine, data, i)?;
        if d_i > d_p {
            return Err(Error::Precondition(format!(
                "D_P = {} is smaller than D_(P^{i}) = {}",
                d_p + 1,
                d_i + 1
            )));
        }
    }
    let a = data.a as i64;
    let big_d = engine.davenport(&data.cl_r)?;
    let value = half(big_d).max(half(d_p + 2) + Rational::new(a - 1, a));
    let simple = Elasticity::finite(value)?;
    let general = elasticity_prime_conductor(engine, data)?;
    if simple != general {
        return Err(Error::Invariant(format!(
            "simplified value {simple} differs from the general value {general}"
        )));
    }
    Ok(simple)
}

/// Numeric shadow of `Cl(R) ≅ Cl(R̄)`: equal class numbers.
pub fn locally_associated_numeric_test(h_r: i64, h_max: i64) -> Result<bool> {
    if h_r < 1 || h_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "class numbers must be positive, got {h_r} and {h_max}"
        )));
    }
    Ok(h_r == h_max)
}

/// True iff `ρ(R̄) ≥ (2a−1)/a` for a locally associated order with
/// principal `P` and `a ≥ 2`, the situation where `ρ(R) = ρ(R̄)` although
/// `R` is not associated.
pub fn counterexample_condition(data: &OrderClassData, rho_max: &Elasticity) -> Result<bool> {
    if data.ker_tau.order() != 1 {
        return Err(Error::Precondition("ker(tau) must be trivial (locally associated order)".into()));
    }
    if !data.p_principal {
        return Err(Error::Precondition("P must be principal".into()));
    }
    if data.a < 2 {
        return Err(Error::Precondition("conductor exponent must be at least 2".into()));
    }
    let a = data.a as i64;
    let bound = Rational::new(2 * a - 1, a);
    Ok(match rho_max {
        Elasticity::Infinite => true,
        Elasticity::Finite(r) => *r >= bound,
    })
}

/// Chooses the applicable formula: prime-count guard, then the
/// non-principal `a = 1` case, then the principal-conductor formula.
pub fn elasticity_order(
    engine: &Engine,
    data: &OrderClassData,
    primes_over_conductor: i64,
) -> Result<Elasticity> {
    if infinite_elasticity_guard(primes_over_conductor)? == GuardOutcome::Infinite {
        return Ok(Elasticity::Infinite);
    }
    if data.conductor_principal {
        elasticity_prime_conductor(engine, data)
    } else if data.a == 1 {
        elasticity_prime_nonprincipal(engine, data)
    } else {
        Err(Error::Unsupported(format!(
            "conductor P^{} is not principal in the maximal order; no formula covers this case",
            data.a
        )))
    }
}

/// Lower and upper ends of `[D/2, D/2 + 3/2)`.
pub fn elasticity_window(big_d: u64) -> (Rational, Rational) {
    let lo = half(big_d);
    (lo, lo + Rational::new(3, 2))
}

/// Builds class data from kernel generators, deriving both principality
/// flags from the group data.
pub fn class_data_from_generators(
    cl_r: &FabGroup,
    ker_gens: &[GroupElement],
    p_class: GroupElement,
    a: u32,
) -> Result<OrderClassData> {
    let ker = crate::group::subgroup_generated(cl_r, ker_gens)?;
    let p_principal = ker.contains(&p_class);
    let conductor_principal = ker.contains(&cl_r.mul(a as i64, &p_class));
    OrderClassData::new(cl_r.clone(), ker, p_class, a, p_principal, conductor_principal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[u64]) -> GroupElement {
        GroupElement(v.to_vec())
    }

    fn quartic() -> OrderClassData {
        let z6 = FabGroup::new(&[6]).unwrap();
        class_data_from_generators(&z6, &[el(&[2])], el(&[1]), 2).unwrap()
    }

    fn trivial(a: u32) -> OrderClassData {
        let t = FabGroup::trivial();
        class_data_from_generators(&t, &[], t.zero(), a).unwrap()
    }

    #[test]
    fn display_and_parse() {
        let r = Elasticity::from_parts(27, 2).unwrap();
        assert_eq!(r.to_string(), "27/2");
        assert_eq!(Elasticity::from_parts(8, 2).unwrap().to_string(), "4");
        assert_eq!(Elasticity::Infinite.to_string(), "infinite");
        assert_eq!("3/2".parse::<Elasticity>().unwrap(), Elasticity::from_parts(3, 2).unwrap());
        assert!("1/2".parse::<Elasticity>().is_err());
        assert!(Elasticity::Infinite > Elasticity::from_parts(1000, 1).unwrap());
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"27/2\"");
    }

    #[test]
    fn d_coset_examples() {
        let e = Engine::default();
        let q = quartic();
        assert_eq!(d_coset_of_power(&e, &q, 1).unwrap(), 5);
        assert_eq!(d_coset_of_power(&e, &q, 0).unwrap(), 4);
        assert_eq!(d_coset_of_power(&e, &trivial(2), 3).unwrap(), 0);
    }

    #[test]
    fn prime_conductor_examples() {
        let e = Engine::default();
        assert_eq!(elasticity_prime_conductor(&e, &quartic()).unwrap().to_string(), "4");
        assert_eq!(elasticity_prime_conductor(&e, &trivial(2)).unwrap().to_string(), "3/2");
        assert_eq!(elasticity_prime_conductor(&e, &trivial(1)).unwrap().to_string(), "1");
        assert_eq!(simpler_formula_if_dominant(&e, &quartic()).unwrap().to_string(), "4");
        assert_eq!(simpler_formula_if_dominant(&e, &trivial(3)).unwrap().to_string(), "5/3");
    }

    #[test]
    fn nonprincipal_examples() {
        let e = Engine::default();
        let z6 = FabGroup::new(&[6]).unwrap();
        let d = class_data_from_generators(&z6, &[el(&[2])], el(&[1]), 1).unwrap();
        assert_eq!(elasticity_prime_nonprincipal(&e, &d).unwrap().to_string(), "3");
        let z2 = FabGroup::new(&[2]).unwrap();
        let d = class_data_from_generators(&z2, &[], el(&[1]), 1).unwrap();
        assert_eq!(elasticity_prime_nonprincipal(&e, &d).unwrap().to_string(), "1");
        let v4 = FabGroup::new(&[2, 2]).unwrap();
        let d = class_data_from_generators(&v4, &[], el(&[1, 0]), 1).unwrap();
        assert_eq!(elasticity_prime_nonprincipal(&e, &d).unwrap().to_string(), "3/2");
        assert!(matches!(
            elasticity_prime_conductor(&e, &d),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn guard_examples() {
        assert_eq!(infinite_elasticity_guard(2).unwrap(), GuardOutcome::Infinite);
        assert_eq!(infinite_elasticity_guard(1).unwrap(), GuardOutcome::Pass);
        assert_eq!(infinite_elasticity_guard(3).unwrap(), GuardOutcome::Infinite);
        assert!(infinite_elasticity_guard(0).is_err());
    }

    #[test]
    fn locally_associated_examples() {
        assert!(locally_associated_numeric_test(4, 4).unwrap());
        assert!(!locally_associated_numeric_test(12, 4).unwrap());
        assert!(locally_associated_numeric_test(1, 1).unwrap());
        assert!(locally_associated_numeric_test(0, 1).is_err());
    }

    #[test]
    fn counterexample_examples() {
        let t2 = trivial(2);
        let three_halves = Elasticity::from_parts(3, 2).unwrap();
        assert!(counterexample_condition(&t2, &three_halves).unwrap());
        assert!(!counterexample_condition(&t2, &Elasticity::from_parts(1, 1).unwrap()).unwrap());
        let t3 = trivial(3);
        assert!(counterexample_condition(&t3, &Elasticity::from_parts(5, 3).unwrap()).unwrap());
        assert!(counterexample_condition(&trivial(1), &three_halves).is_err());
    }

    #[test]
    fn validation() {
        let z6 = FabGroup::new(&[6]).unwrap();
        let ker = crate::group::subgroup_generated(&z6, &[el(&[2])]).unwrap();
        // 2*[P] is trivial, so the conductor must be declared principal
        assert!(OrderClassData::new(z6.clone(), ker.clone(), el(&[1]), 2, false, false).is_err());
        assert!(OrderClassData::new(z6.clone(), ker.clone(), el(&[1]), 2, true, true).is_err());
        assert!(OrderClassData::new(z6, ker, el(&[1]), 0, false, true).is_err());
    }

    #[test]
    fn json_record() {
        let json = r#"{"group":{"invariant_factors":[6]},"ker_tau":[[0],[2],[4]],
            "p_class":[1],"a":2,"p_principal":false,"conductor_principal":true}"#;
        let d: OrderClassData = serde_json::from_str(json).unwrap();
        assert_eq!(d, quartic());
        let bad = json.replace("[[0],[2],[4]]", "[[0],[1]]");
        assert!(serde_json::from_str::<OrderClassData>(&bad).is_err());
    }

    #[test]
    fn dispatch() {
        let e = Engine::default();
        assert_eq!(elasticity_order(&e, &quartic(), 2).unwrap(), Elasticity::Infinite);
        assert_eq!(elasticity_order(&e, &quartic(), 1).unwrap().to_string(), "4");
    }
}
