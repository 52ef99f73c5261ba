//! Positive definite binary quadratic forms and the form class group of an
//! imaginary quadratic order.
//!
//! The class group of discriminant `Δ = f²·d_K < 0` is realized by the
//! reduced primitive forms of discriminant `Δ` under composition followed by
//! reduction.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{fundamental_discriminant, QuadraticOrderSpec};
use crate::error::{Error, Result};
use crate::group::{structure_from_table, FabGroup, GroupElement};

/// The form `a·x² + b·xy + c·y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BQForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn narrow(v: i128, what: &str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::InvalidArgument(format!("{what} overflows 64 bits")))
}

impl BQForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BQForm { a, b, c }
    }

    /// The form `(a, b, (b² − Δ)/4a)`, if `4a | b² − Δ`.
    pub fn from_ab(a: i64, b: i64, disc: i64) -> Result<Self> {
        let num = (b as i128) * (b as i128) - disc as i128;
        let den = 4 * a as i128;
        if a == 0 || num % den != 0 {
            return Err(Error::InvalidArgument(format!("no form ({a}, {b}, ?) of discriminant {disc}")));
        }
        Ok(BQForm::new(a, b, narrow(num / den, "form coefficient")?))
    }

    pub fn discriminant(&self) -> i128 {
        (self.b as i128) * (self.b as i128) - 4 * (self.a as i128) * (self.c as i128)
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        self.a > 0
            && self.b.abs() <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }

    /// The principal form of discriminant `disc`.
    pub fn principal(disc: i64) -> Result<Self> {
        let b = disc.rem_euclid(2);
        BQForm::from_ab(1, b, disc)
    }

    /// The reduced form properly equivalent to a positive definite form.
    pub fn reduce(&self) -> Result<Self> {
        let disc = self.discriminant();
        if disc >= 0 || self.a <= 0 {
            return Err(Error::InvalidArgument(format!("{self} is not positive definite")));
        }
        let (mut a, mut b) = (self.a as i128, self.b as i128);
        let c_of = |a: i128, b: i128| (b * b - disc) / (4 * a);
        let normalize = |a: i128, b: i128| -> i128 {
            // b into (−a, a]
            let k = Integer::div_floor(&(a - b), &(2 * a));
            b + 2 * a * k
        };
        b = normalize(a, b);
        let mut c = c_of(a, b);
        while a > c {
            let (na, nb) = (c, -b);
            a = na;
            b = normalize(a, nb);
            c = c_of(a, b);
        }
        if a == c && b < 0 {
            b = -b;
        }
        Ok(BQForm::new(
            narrow(a, "form coefficient")?,
            narrow(b, "form coefficient")?,
            narrow(c, "form coefficient")?,
        ))
    }

    /// Composition of two forms of the same negative discriminant, reduced.
    pub fn compose(&self, other: &BQForm) -> Result<Self> {
        let disc = self.discriminant();
        if disc != other.discriminant() {
            return Err(Error::InvalidArgument(format!("cannot compose {self} and {other}: discriminants differ")));
        }
        let (mut f1, mut f2) = (*self, *other);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc) / (4 * a3);
        let raw = BQForm::new(narrow(a3, "form")?, narrow(b3, "form")?, narrow(c3, "form")?);
        if raw.discriminant() != disc {
            return Err(Error::Invariant(format!("composition of {self} and {other} changed the discriminant")));
        }
        raw.reduce()
    }

    /// The inverse class, `(a, −b, c)`, reduced.
    pub fn inverse(&self) -> Result<Self> {
        BQForm::new(self.a, -self.b, self.c).reduce()
    }
}

impl fmt::Display for BQForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// All reduced primitive forms of a negative discriminant, ordered by
/// `a`, then `|b|`, then positive `b` first.
pub fn reduced_forms(disc: i64) -> Result<Vec<BQForm>> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidArgument(format!("{disc} is not a negative discriminant")));
    }
    let mut out = Vec::new();
    let abs = disc.unsigned_abs() as i128;
    let mut a: i64 = 1;
    while 3 * (a as i128) * (a as i128) <= abs {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let Ok(f) = BQForm::from_ab(a, b, disc) else { continue };
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), -f.b));
    Ok(out)
}

/// The form class group of one discriminant with explicit coordinates.
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    disc: i64,
    forms: Vec<BQForm>,
    group: FabGroup,
    coords: Vec<GroupElement>,
    by_form: HashMap<BQForm, usize>,
    by_element: HashMap<GroupElement, usize>,
}

impl FormClassGroup {
    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn group(&self) -> &FabGroup {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    /// Reduced representatives, one per class.
    pub fn forms(&self) -> &[BQForm] {
        &self.forms
    }

    /// Class of an arbitrary primitive form of this discriminant.
    pub fn class_of(&self, f: &BQForm) -> Result<GroupElement> {
        if f.discriminant() != self.disc as i128 {
            return Err(Error::InvalidArgument(format!("{f} has discriminant {}, expected {}", f.discriminant(), self.disc)));
        }
        if !f.is_primitive() {
            return Err(Error::InvalidArgument(format!("{f} is not primitive")));
        }
        let r = f.reduce()?;
        self.by_form
            .get(&r)
            .map(|&i| self.coords[i].clone())
            .ok_or_else(|| Error::Invariant(format!("reduced form {r} missing from the class table")))
    }

    /// The reduced representative of a class.
    pub fn form_of(&self, e: &GroupElement) -> Result<BQForm> {
        self.by_element
            .get(e)
            .map(|&i| self.forms[i])
            .ok_or_else(|| Error::NotInGroup {
                element: e.to_string(),
                factors: self.group.invariant_factors().to_vec(),
            })
    }
}

/// Builds the class group of a negative discriminant. `max_order` bounds the
/// number of classes (the composition table is quadratic in it).
pub fn class_group_for_discriminant(disc: i64, max_order: u64) -> Result<FormClassGroup> {
    let forms = reduced_forms(disc)?;
    let n = forms.len();
    if n as u64 > max_order {
        return Err(Error::SizeGuard { order: n as u64, limit: max_order });
    }
    let by_form: HashMap<BQForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let zero = by_form[&BQForm::principal(disc)?];
    let mut table = vec![0usize; n * n];
    for i in 0..n {
        for j in i..n {
            let k = *by_form
                .get(&forms[i].compose(&forms[j])?)
                .ok_or_else(|| Error::Invariant(format!("{} * {} is not a listed form", forms[i], forms[j])))?;
            table[i * n + j] = k;
            table[j * n + i] = k;
        }
    }
    let (group, coords) = structure_from_table(n, zero, &|i, j| table[i * n + j])?;
    let by_element = coords.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    Ok(FormClassGroup { disc, forms, group, coords, by_form, by_element })
}

/// `Cl(R_f)` for the order of conductor `f` in `Q(√d)`, `d < 0`.
pub fn class_group_imaginary(d: i64, f: u64, max_order: u64) -> Result<FormClassGroup> {
    if d >= 0 {
        return Err(Error::InvalidArgument(format!("d = {d} is not negative")));
    }
    if f == 0 {
        return Err(Error::InvalidArgument("conductor must be at least 1".into()));
    }
    let dk = fundamental_discriminant(d)?;
    let disc = (f as i128)
        .checked_mul(f as i128)
        .map(|x| x * dk as i128)
        .ok_or_else(|| Error::InvalidArgument("discriminant overflows".into()))?;
    class_group_for_discriminant(narrow(disc, "discriminant")?, max_order)
}

/// The form `(p, b, c)` of discriminant `d_K` attached to the prime of `R̄`
/// over a ramified or inert `p` (for inert `p` the prime is `(p)`, which is
/// principal, and the principal form is returned).
pub fn prime_form(spec: &QuadraticOrderSpec) -> Result<BQForm> {
    let dk = spec.discriminant_k();
    match spec.splitting() {
        super::Splitting::Inert => BQForm::principal(dk),
        _ => {
            let p = spec.p as i64;
            (0..2 * p)
                .filter(|b| (b - dk).rem_euclid(2) == 0)
                .find_map(|b| BQForm::from_ab(p, b, dk).ok())
                .ok_or_else(|| Error::Invariant(format!("no form of norm {p} for discriminant {dk}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_23() {
        let cg = class_group_imaginary(-23, 1, 255).unwrap();
        assert_eq!(cg.group().invariant_factors(), &[3]);
        assert_eq!(cg.forms(), &[BQForm::new(1, 1, 6), BQForm::new(2, 1, 3), BQForm::new(2, -1, 3)]);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(class_group_imaginary(-1, 1, 255).unwrap().order(), 1);
        assert_eq!(class_group_imaginary(-3, 2, 255).unwrap().order(), 1);
        assert_eq!(class_group_imaginary(-7, 3, 255).unwrap().order(), 4);
        assert!(class_group_imaginary(-7, 0, 255).is_err());
    }

    #[test]
    fn known_structures() {
        let f = |disc| class_group_for_discriminant(disc, 255).unwrap().group().invariant_factors().to_vec();
        assert_eq!(f(-56), vec![4]);
        assert_eq!(f(-84), vec![2, 2]);
        assert_eq!(f(-420), vec![2, 2, 2]);
        assert_eq!(f(-47), vec![5]);
        assert_eq!(f(-71), vec![7]);
    }

    #[test]
    fn reduction() {
        let f = BQForm::new(6, 1, 1).reduce().unwrap();
        assert_eq!(f, BQForm::new(1, 1, 6));
        assert!(f.is_reduced());
        assert_eq!(BQForm::new(2, -2, 3).reduce().unwrap(), BQForm::new(2, 2, 3));
    }

    #[test]
    fn group_axioms_exhaustive() {
        for disc in [-23i64, -56, -84, -135, -252, -300] {
            let forms = reduced_forms(disc).unwrap();
            let id = BQForm::principal(disc).unwrap();
            for x in &forms {
                assert_eq!(x.compose(&id).unwrap(), *x);
                assert_eq!(x.compose(&x.inverse().unwrap()).unwrap(), id);
                for y in &forms {
                    assert_eq!(x.compose(y).unwrap(), y.compose(x).unwrap());
                    for z in &forms {
                        let l = x.compose(y).unwrap().compose(z).unwrap();
                        let r = x.compose(&y.compose(z).unwrap()).unwrap();
                        assert_eq!(l, r, "{disc}: {x} {y} {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn prime_forms() {
        let spec = QuadraticOrderSpec::new(-15, 3, 1).unwrap();
        let f = prime_form(&spec).unwrap();
        assert_eq!(f.discriminant(), -15);
        assert_eq!(f.a, 3);
    }
}
