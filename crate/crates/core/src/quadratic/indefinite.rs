//! Principality of a prime ideal of a real quadratic field, decided on the
//! cycle of reduced indefinite forms.
//!
//! The prime `P = (p, (−b+√d_K)/2)` is principal iff its form `(p, b, c)`
//! represents `±1`. Since `1 < √d_K / 2`, that happens iff some reduced form
//! in the cycle of `(p, b, c)` has leading coefficient `±1`.

use num_integer::{Integer, Roots};

use super::{fundamental_discriminant, splitting_type, Splitting};
use crate::error::{Error, Result};

type Form = (i128, i128, i128);

struct Cycle {
    disc: i128,
    root: i128,
}

impl Cycle {
    /// `0 < b < √D` and `√D − b < 2|a| < √D + b`.
    fn is_reduced(&self, f: Form) -> bool {
        let (a, b, _) = f;
        b > 0 && b <= self.root && 2 * a.abs() > self.root - b && 2 * a.abs() <= self.root + b
    }

    /// One reduction step `(a, b, c) → (c, b', ·)` with `b' ≡ −b (mod 2c)`.
    fn rho(&self, f: Form) -> Form {
        let (_, b, c) = f;
        let m = 2 * c.abs();
        let mut bp = (-b).mod_floor(&m);
        if c.abs() > self.root {
            // −|c| < b' ≤ |c|
            if bp > c.abs() {
                bp -= m;
            }
        } else {
            // √D − 2|c| < b' < √D
            while bp > self.root {
                bp -= m;
            }
            while bp <= self.root - m {
                bp += m;
            }
        }
        (c, bp, (bp * bp - self.disc) / (4 * c))
    }
}

/// True iff the prime of `Q(√d)` (`d > 1`) over `p` is principal. Inert `p`
/// gives `(p)` itself; for split `p` the two primes are conjugate, so
/// either both or neither is principal.
pub fn prime_over_is_principal_real(d: i64, p: u64) -> Result<bool> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("real field expected, got d = {d}")));
    }
    let splitting = splitting_type(d, p)?;
    if splitting == Splitting::Inert {
        return Ok(true);
    }
    let disc = fundamental_discriminant(d)? as i128;
    let pp = p as i128;
    let b = (0..2 * pp)
        .filter(|b| (b - disc).rem_euclid(2) == 0)
        .find(|b| (b * b - disc).rem_euclid(4 * pp) == 0)
        .ok_or_else(|| Error::Invariant(format!("no form of norm {p} for discriminant {disc}")))?;
    let cyc = Cycle { disc, root: disc.sqrt() };
    let mut f: Form = (pp, b, (b * b - disc) / (4 * pp));
    let mut steps = 0u64;
    let budget = 64 + 4 * disc.unsigned_abs() as u64 + 64 * (p.ilog2() as u64 + 1);
    while !cyc.is_reduced(f) {
        f = cyc.rho(f);
        steps += 1;
        if steps > budget {
            return Err(Error::BudgetExhausted(format!("reduction of ({pp}, {b}, ·) did not terminate")));
        }
    }
    let start = f;
    loop {
        if f.0.abs() == 1 {
            return Ok(true);
        }
        f = cyc.rho(f);
        if f == start {
            return Ok(false);
        }
        steps += 1;
        if steps > budget {
            return Err(Error::BudgetExhausted(format!("cycle of ({pp}, {b}, ·) did not close")));
        }
    }
}
