//! Brute-force reference implementations used by the integration tests and
//! the acceptance harness. Nothing here calls into the library's search or
//! number theory code; every quantity is recomputed from its definition.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;

/// A finite abelian group `Z_{n_1} ⊕ … ⊕ Z_{n_k}` with elements numbered in
/// mixed radix, first coordinate fastest.
#[derive(Clone, Debug)]
pub struct BruteGroup {
    pub factors: Vec<u64>,
    pub order: usize,
}

impl BruteGroup {
    pub fn new(factors: &[u64]) -> Self {
        let order = factors.iter().product::<u64>() as usize;
        BruteGroup { factors: factors.to_vec(), order }
    }

    /// `Z_n`, with `n = 1` giving the trivial group.
    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            BruteGroup::new(&[])
        } else {
            BruteGroup::new(&[n])
        }
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.factors.len());
        for &f in &self.factors {
            out.push((idx % f as usize) as u64);
            idx /= f as usize;
        }
        out
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        let mut idx = 0usize;
        for (c, f) in coords.iter().zip(&self.factors).rev() {
            idx = idx * *f as usize + (*c % *f) as usize;
        }
        idx
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (cx, cy) = (self.coords(x), self.coords(y));
        let s: Vec<u64> = cx.iter().zip(&cy).zip(&self.factors).map(|((a, b), f)| (a + b) % f).collect();
        self.index(&s)
    }

    pub fn neg(&self, x: usize) -> usize {
        let c: Vec<u64> = self.coords(x).iter().zip(&self.factors).map(|(a, f)| (f - a) % f).collect();
        self.index(&c)
    }

    pub fn sum(&self, seq: &[usize]) -> usize {
        seq.iter().fold(0, |acc, &x| self.add(acc, x))
    }
}

/// For every element `g`, the set of lengths `ℓ` for which a zero-sum-free
/// sequence of length `ℓ` with sum `g` exists (bit `ℓ` of `lengths[g]`).
///
/// Sequences are enumerated as multiplicity vectors over the nonzero
/// elements, keeping the full set of nonempty subsums at each step.
pub struct ZeroSumFreeLengths {
    pub group: BruteGroup,
    pub lengths: Vec<u128>,
}

impl ZeroSumFreeLengths {
    pub fn compute(group: &BruteGroup) -> Self {
        let n = group.order;
        assert!(n <= 120, "oracle is for small groups only");
        let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| group.add(x, y)).collect()).collect();
        let mut lengths = vec![0u128; n];
        let mut reach = vec![false; n];
        fn walk(
            table: &[Vec<usize>],
            next: usize,
            reach: &mut Vec<bool>,
            sum: usize,
            len: usize,
            lengths: &mut [u128],
        ) {
            lengths[sum] |= 1u128 << len;
            let n = table.len();
            for x in next..n {
                // add copies of x one at a time; stop once 0 becomes a subsum
                let mut saved = Vec::new();
                let mut cur_sum = sum;
                let mut copies = 0;
                loop {
                    let mut new_reach = reach.clone();
                    new_reach[x] = true;
                    for s in 0..n {
                        if reach[s] {
                            new_reach[table[s][x]] = true;
                        }
                    }
                    if new_reach[0] {
                        break;
                    }
                    saved.push(std::mem::replace(reach, new_reach));
                    cur_sum = table[cur_sum][x];
                    copies += 1;
                    walk(table, x + 1, reach, cur_sum, len + copies, lengths);
                }
                if let Some(first) = saved.into_iter().next() {
                    *reach = first;
                }
            }
        }
        walk(&table, 1, &mut reach, 0, 0, &mut lengths);
        ZeroSumFreeLengths { group: group.clone(), lengths }
    }

    fn top(bits: u128) -> u64 {
        127 - bits.leading_zeros() as u64
    }

    /// Longest zero-sum-free sequence whose sum lies in `s`.
    pub fn small_d(&self, s: &[usize]) -> u64 {
        s.iter().filter(|&&g| self.lengths[g] != 0).map(|&g| Self::top(self.lengths[g])).max().unwrap_or(0)
    }

    /// Least `m ≥ 1` such that every sequence of length `m` with sum in `s`
    /// has a nonempty zero-sum subsequence.
    pub fn big_d(&self, s: &[usize]) -> u64 {
        let any: u128 = s.iter().fold(0, |acc, &g| acc | self.lengths[g]);
        (1..128u64).find(|m| any & (1u128 << m) == 0).expect("bounded length")
    }

    /// Classical Davenport constant.
    pub fn davenport(&self) -> u64 {
        self.lengths.iter().map(|&b| Self::top(b)).max().unwrap_or(0) + 1
    }
}

/// True iff some nonempty subsequence sums to zero, by computing the sum
/// of every one of the `2^k − 1` index subsets.
pub fn has_zero_sum(group: &BruteGroup, seq: &[usize]) -> bool {
    let k = seq.len();
    assert!(k < 26, "subset enumeration is exponential");
    let images: Vec<Vec<usize>> = seq.iter().map(|&x| (0..group.order).map(|y| group.add(x, y)).collect()).collect();
    let mut sums = vec![0usize; 1 << k];
    for mask in 1usize..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = images[low][sums[mask & (mask - 1)]];
        if sums[mask] == 0 {
            return true;
        }
    }
    false
}

/// The coset `g + <m>` in `Z_n`, as residues.
pub fn cyclic_coset(n: u64, m: u64, g: u64) -> Vec<usize> {
    (0..n).filter(|x| (x + n - g % n).is_multiple_of(m)).map(|x| x as usize).collect()
}

/// Kronecker symbol `(a/n)` from quadratic residues by enumeration, for
/// small `n`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut m = n;
    let mut p = 2u64;
    while m > 1 {
        if m.is_multiple_of(p) {
            m /= p;
            result *= prime_symbol(a, p);
        } else {
            p += 1;
        }
    }
    result
}

fn prime_symbol(a: i64, p: u64) -> i32 {
    if p == 2 {
        if a % 2 == 0 {
            return 0;
        }
        return match a.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if (1..p).any(|x| x * x % p == r) {
        1
    } else {
        -1
    }
}

pub fn is_squarefree(d: i64) -> bool {
    let d = d.unsigned_abs();
    (2..).take_while(|k: &u64| k * k <= d).all(|k| !d.is_multiple_of(k * k))
}

pub fn fundamental_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// `+1` split, `−1` inert, `0` ramified: counts roots of `x² ≡ D (mod 4p)`
/// compatible with `x ≡ D (mod 2)`.
pub fn splitting_by_roots(d: i64, p: u64) -> i32 {
    let disc = fundamental_discriminant(d);
    if disc.rem_euclid(p as i64) == 0 {
        return 0;
    }
    let m = 4 * p as i64;
    let roots = (0..m).filter(|x| (x * x - disc).rem_euclid(m) == 0).count();
    if roots > 0 {
        1
    } else {
        -1
    }
}

/// Class number of an imaginary quadratic field from the analytic formula
/// `h = −(w / 2|D|) · Σ_{a=1}^{|D|} χ(a)·a`.
pub fn class_number_analytic(disc: i64) -> u64 {
    assert!(disc < 0);
    let n = disc.unsigned_abs();
    let w: i64 = match disc {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let s: i64 = (1..n).map(|a| kronecker(disc, a) as i64 * a as i64).sum();
    let num = -w * s;
    let den = 2 * n as i64;
    assert_eq!(num % den, 0, "analytic class number not integral for {disc}");
    (num / den) as u64
}

/// Number of primitive positive definite forms `(a, b, c)` of discriminant
/// `disc` up to equivalence, counted as forms with `|b| ≤ a ≤ c` and the
/// usual boundary convention, by scanning all `a, b` directly.
pub fn class_number_by_count(disc: i64) -> u64 {
    assert!(disc < 0);
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            if b < 0 && (b == -a || a == c) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

/// Least `y ≥ 1` with `x² − D·y² = ±4`, returned as `(x, y, norm)` where the
/// unit is `(x + y√D)/2` and `norm = ±1`. Plain search over `y`.
pub fn fundamental_unit_by_search(d: i64, y_limit: u64) -> Option<(u64, u64, i32)> {
    let disc = fundamental_discriminant(d) as i128;
    for y in 1..=y_limit as i128 {
        for (sign, norm) in [(-4i128, -1), (4, 1)] {
            let t = disc * y * y + sign;
            if t <= 0 {
                continue;
            }
            let x = (t as f64).sqrt() as i128;
            for cand in [x - 1, x, x + 1] {
                if cand > 0 && cand * cand == t {
                    return Some((cand as u64, y as u64, norm));
                }
            }
        }
    }
    None
}

/// Least `k ≥ 1` with `m | y_k`, where `((x + y√D)/2)^k = (x_k + y_k√D)/2`.
/// Membership of `(X + Y√D)/2` in `Z + m·O` is exactly `m | Y`.
pub fn unit_index_by_powers(d: i64, x: u64, y: u64, m: u64, k_limit: u64) -> Option<u64> {
    let disc = BigInt::from(fundamental_discriminant(d));
    let (bx, by) = (BigInt::from(x), BigInt::from(y));
    let (mut cx, mut cy) = (bx.clone(), by.clone());
    let bm = BigInt::from(m);
    for k in 1..=k_limit {
        if (&cy % &bm) == BigInt::from(0) {
            return Some(k);
        }
        let nx: BigInt = (&cx * &bx + &disc * &cy * &by) / 2;
        let ny: BigInt = (&cx * &by + &bx * &cy) / 2;
        cx = nx;
        cy = ny;
    }
    None
}

/// Whether `x² − D·y² = ±4p` has a solution with `y ≤ y_limit`; for real
/// fields this decides if the prime over `p` is principal once the limit
/// covers one fundamental domain of the unit group.
pub fn norm_equation_solvable(d: i64, p: u64, y_limit: u64) -> bool {
    let disc = fundamental_discriminant(d) as i128;
    let target = 4 * p as i128;
    (0..=y_limit as i128).any(|y| {
        [-target, target].iter().any(|&t| {
            let v = disc * y * y + t;
            if v < 0 {
                return false;
            }
            let x = (v as f64).sqrt() as i128;
            [x - 1, x, x + 1].iter().any(|&c| c >= 0 && c * c == v)
        })
    })
}

/// `L(n, d)` from the definition `|(O/nO)^×| / |(Z/nZ)^×|` by counting
/// units of `O/nO = {x + yω}` directly. Only for small `n`.
pub fn l_by_counting(n: u64, d: i64) -> u64 {
    let disc = fundamental_discriminant(d);
    // ω² = s·ω + t with ω = (s + √D)/2, s = D mod 2
    let s = disc.rem_euclid(2);
    let t = (disc - s * s) / 4;
    let nn = n as i64;
    let norm = |x: i64, y: i64| -> i64 { (x * x + s * x * y - t * y * y).rem_euclid(nn) };
    let units_o = (0..nn)
        .flat_map(|x| (0..nn).map(move |y| (x, y)))
        .filter(|&(x, y)| norm(x, y).gcd(&nn) == 1)
        .count() as u64;
    let units_z = (0..nn).filter(|x| x.gcd(&nn) == 1).count() as u64;
    assert_eq!(units_o % units_z, 0);
    units_o / units_z
}

/// Invariant-factor lists of all abelian groups of order `n`, built from
/// partitions of each prime exponent.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    fn partitions(k: u32, max: u32) -> Vec<Vec<u32>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=k.min(max)).rev() {
            for mut rest in partitions(k - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
        p += 1;
    }
    let mut groups: Vec<Vec<u64>> = vec![vec![]];
    for (p, e) in primes {
        let mut next = Vec::new();
        for g in &groups {
            for part in partitions(e, e) {
                let mut factors = g.clone();
                for (i, &ex) in part.iter().enumerate() {
                    let q = p.pow(ex);
                    if i < factors.len() {
                        factors[i] *= q;
                    } else {
                        factors.push(q);
                    }
                }
                next.push(factors);
            }
        }
        groups = next;
    }
    groups
}

/// True iff some homomorphism from the group onto `Z_h` exists, by trying
/// every assignment of generator images.
pub fn has_cyclic_quotient(factors: &[u64], h: u64) -> bool {
    let choices: Vec<Vec<u64>> = factors
        .iter()
        .map(|&n| (0..h).filter(|x| (x * n) % h == 0).collect())
        .collect();
    fn go(choices: &[Vec<u64>], i: usize, acc: u64, h: u64) -> bool {
        if i == choices.len() {
            return acc.gcd(&h) == 1 || h == 1;
        }
        choices[i].iter().any(|&x| go(choices, i + 1, acc.gcd(&x), h))
    }
    go(&choices, 0, h, h)
}

/// `"cyclic"`, `"non_cyclic"` or `"ambiguous"` for groups of order
/// `h_prime` with a `Z_h` quotient.
pub fn infer_cyclic_by_enumeration(h_prime: u64, h: u64) -> &'static str {
    let candidates: Vec<Vec<u64>> = abelian_groups_of_order(h_prime)
        .into_iter()
        .filter(|g| has_cyclic_quotient(g, h))
        .collect();
    let any_cyclic = candidates.iter().any(|g| g.len() <= 1);
    match (any_cyclic, candidates.len()) {
        (true, 1) => "cyclic",
        (false, _) => "non_cyclic",
        _ => "ambiguous",
    }
}
