//! Small-integer number theory helpers: factorization, primality,
//! squarefreeness, Kronecker symbols and modular arithmetic.

use num_integer::Integer;

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub fn is_squarefree(d: i64) -> bool {
    d != 0 && factorize(d.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 {
        return Vec::new();
    }
    let hi_us = hi as usize;
    let mut sieve = vec![true; hi_us + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= hi_us {
        if sieve[i] {
            let mut j = i * i;
            while j <= hi_us {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2) as usize..=hi_us)
        .filter(|&k| sieve[k])
        .map(|k| k as u64)
        .collect()
}

/// Kronecker symbol `(a | n)` for `n ≥ 1`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    let mut a = a as i128;
    while n.is_multiple_of(2) {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    // Jacobi symbol for odd n
    let mut m = n as i128;
    a = a.rem_euclid(m);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let g = a.rem_euclid(m).extended_gcd(&m);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m))
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}
