//! The conductor ladder `Cl(R_{p^a}) → Cl(R_{p^i})`, `i = 0..=a`, for an
//! imaginary quadratic field.
//!
//! A class of discriminant `f²·d_K` is moved to conductor `f'` through a
//! prime `q ∤ 2p·d_K` it represents: writing the class as `(q, b, ·)`, the
//! image is `(q, b', ·)` with `b' ≡ b·f'/f (mod q)` and `b' ≡ f'²d_K (mod 2)`,
//! which is the class of the extended ideal `A·R_{f'}`.

use num_integer::{Integer, Roots};

use super::forms::{class_group_imaginary, prime_form, BQForm, FormClassGroup};
use super::{QuadraticOrderSpec, Splitting};
use crate::arith::{is_prime, mod_inverse};
use crate::error::{Error, Result};
use crate::group::{FabGroup, GroupElement, GroupHom, Subgroup};

/// Class groups along the ladder, the maps `τ_i` out of the top group and
/// their kernels.
#[derive(Clone, Debug)]
pub struct TauLadder {
    pub spec: QuadraticOrderSpec,
    /// `Cl(R_{p^i})` for `i = 0..=a`.
    pub levels: Vec<FormClassGroup>,
    /// `τ_i : Cl(R_{p^a}) → Cl(R_{p^i})`.
    pub maps: Vec<GroupHom>,
    /// `ker(τ_i)`, decreasing in `i`, ending in the trivial subgroup.
    pub kernels: Vec<Subgroup>,
    /// Class of the prime `P` over `p` in `Cl(R̄)`.
    pub p_class: GroupElement,
}

impl TauLadder {
    pub fn top(&self) -> &FabGroup {
        self.levels.last().expect("nonempty ladder").group()
    }

    pub fn orders(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.order()).collect()
    }
}

/// A prime `q` properly represented by `f`, with `q ∤ avoid`, as the
/// equivalent form `(q, b, c)`. Smallest `q` wins, then smallest `(y, x)`.
fn represented_prime(f: &BQForm, avoid: u64, budget: u64) -> Option<BQForm> {
    let disc = f.discriminant();
    let abs = disc.unsigned_abs();
    let a = f.a as i128;
    let mut bound: u64 = 64;
    loop {
        bound = bound.min(budget);
        let mut best: Option<(u64, i64, i64)> = None;
        let y_max = Roots::sqrt(&((4 * a as u128 * bound as u128) / abs)) as i64;
        for y in 0..=y_max {
            let rest = 4 * a * bound as i128 - abs as i128 * (y as i128) * (y as i128);
            if rest < 0 {
                break;
            }
            let s = Roots::sqrt(&rest);
            // 2a·x + b·y ∈ [−s, s]
            let lo = Integer::div_ceil(&(-s - f.b as i128 * y as i128), &(2 * a));
            let hi = Integer::div_floor(&(s - f.b as i128 * y as i128), &(2 * a));
            for x in lo..=hi {
                let x = x as i64;
                if (y == 0 && x != 1) || x.gcd(&y) != 1 {
                    continue;
                }
                let v = f.eval(x, y);
                if v <= 0 || v as u64 > bound {
                    continue;
                }
                let q = v as u64;
                if q == 2 || avoid.is_multiple_of(q) || !is_prime(q) {
                    continue;
                }
                if best.is_none_or(|(bq, by, bx)| (q, y, x) < (bq, by, bx)) {
                    best = Some((q, y, x));
                }
            }
        }
        if let Some((_, y, x)) = best {
            // extend (x, y) to a matrix of determinant 1: x·s − y·r = 1
            let e = (x as i128).extended_gcd(&(y as i128));
            let (s, r) = (e.x, -e.y);
            let (xa, ya) = (x as i128, y as i128);
            let (fa, fb, fc) = (f.a as i128, f.b as i128, f.c as i128);
            let na = f.eval(x, y);
            let nb = 2 * fa * xa * r + fb * (xa * s + ya * r) + 2 * fc * ya * s;
            let nc = fa * r * r + fb * r * s + fc * s * s;
            let g = BQForm::new(na as i64, i64::try_from(nb).ok()?, i64::try_from(nc).ok()?);
            debug_assert_eq!(g.discriminant(), disc);
            return Some(g);
        }
        if bound >= budget {
            return None;
        }
        bound = bound.saturating_mul(2);
    }
}

/// The map `Cl(R_f) → Cl(R_{f'})` for `f' | f`.
fn going_down(
    src: &FormClassGroup,
    src_conductor: u64,
    dst: &FormClassGroup,
    dst_conductor: u64,
    avoid: u64,
) -> Result<GroupHom> {
    let budget = (10 * src.discriminant().unsigned_abs()).max(1000);
    let ratio = src_conductor / dst_conductor;
    let dst_disc = dst.discriminant() as i128;
    let image_of = |e: &GroupElement| -> Result<GroupElement> {
        let f = src.form_of(e)?;
        let g = represented_prime(&f, avoid, budget).ok_or_else(|| {
            Error::BudgetExhausted(format!(
                "no prime up to {budget} coprime to {avoid} represented by the class {f} \
                 of discriminant {}",
                src.discriminant()
            ))
        })?;
        let q = g.a as i128;
        let inv = mod_inverse((ratio as i128 % q) as i64, q as i64)
            .ok_or_else(|| Error::Invariant(format!("{ratio} not invertible mod {q}")))? as i128;
        let t = (g.b as i128 * inv).rem_euclid(q);
        let b = if (t - dst_disc).rem_euclid(2) == 0 { t } else { t + q };
        let h = BQForm::from_ab(g.a, b as i64, dst.discriminant())?;
        dst.class_of(&h)
    };
    let sg = src.group();
    let gens = (0..sg.rank()).map(|i| image_of(&sg.generator(i))).collect::<Result<Vec<_>>>()?;
    let hom = GroupHom::new(sg.clone(), dst.group().clone(), gens)?;
    // every class mapped on its own must agree with the homomorphism
    for e in sg.elements() {
        if image_of(&e)? != hom.eval(&e) {
            return Err(Error::Invariant(format!(
                "going-down map from discriminant {} is not a homomorphism at {e}",
                src.discriminant()
            )));
        }
    }
    Ok(hom)
}

/// Builds and verifies the ladder for `d < 0` and non-split `p`.
pub fn tau_ladder_imaginary(spec: &QuadraticOrderSpec, max_order: u64) -> Result<TauLadder> {
    if !spec.is_imaginary() {
        return Err(Error::Unsupported("form class groups are only built for imaginary fields".into()));
    }
    if spec.splitting() == Splitting::Split {
        return Err(Error::Precondition(format!("{} splits in Q(√{})", spec.p, spec.d)));
    }
    let dk = spec.discriminant_k();
    let avoid = spec.p * dk.unsigned_abs();
    let mut levels = Vec::new();
    for i in 0..=spec.a {
        levels.push(class_group_imaginary(spec.d, spec.conductor_at(i)?, max_order)?);
    }
    let a = spec.a as usize;
    let top = &levels[a];
    let mut maps = Vec::with_capacity(a + 1);
    for (i, level) in levels.iter().enumerate().take(a) {
        maps.push(going_down(top, spec.n(), level, spec.conductor_at(i as u32)?, avoid)?);
    }
    let tg = top.group();
    maps.push(GroupHom::new(tg.clone(), tg.clone(), (0..tg.rank()).map(|i| tg.generator(i)).collect())?);

    // consecutive steps must factor the maps out of the top: τ_i = step ∘ τ_{i+1}
    for i in 0..a {
        let step = going_down(
            &levels[i + 1],
            spec.conductor_at(i as u32 + 1)?,
            &levels[i],
            spec.conductor_at(i as u32)?,
            avoid,
        )?;
        if maps[i + 1].then(&step)? != maps[i] {
            return Err(Error::Invariant(format!("ladder maps do not compose at level {i}")));
        }
    }
    let mut kernels = Vec::with_capacity(a + 1);
    for (i, m) in maps.iter().enumerate() {
        if !m.verify_all_pairs() || !m.is_surjective() {
            return Err(Error::Invariant(format!("tau_{i} is not a surjective homomorphism")));
        }
        let k = m.kernel();
        if k.order() * levels[i].order() != top.order() {
            return Err(Error::Invariant(format!("|ker tau_{i}| does not match the level orders")));
        }
        kernels.push(k);
    }
    for i in 0..a {
        if !kernels[i + 1].elements().is_subset_of(kernels[i].elements()) {
            return Err(Error::Invariant(format!("ker tau_{} is not inside ker tau_{i}", i + 1)));
        }
    }
    let p_class = levels[0].class_of(&prime_form(spec)?)?;
    Ok(TauLadder { spec: *spec, levels, maps, kernels, p_class })
}
