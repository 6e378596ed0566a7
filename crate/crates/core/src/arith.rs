//! Small-integer number theory: primality, factorization, Legendre symbols.

use crate::error::{Error, Result};
use num_integer::Integer;

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `|n|` in increasing order.
pub fn prime_divisors(n: i64) -> Vec<i64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of `p` in `n` (n nonzero).
pub fn valuation(mut n: i64, p: i64) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn pow_mod(base: i64, mut exp: u64, m: i64) -> i64 {
    let m128 = m as i128;
    let mut b = (base as i128).rem_euclid(m128);
    let mut acc: i128 = 1 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as i64
}

/// Legendre symbol `(a|p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: i64, p: i64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let r = pow_mod(a, ((p - 1) / 2) as u64, p);
    Ok(match r {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// Whether `x^2 ≡ a (mod n)` is solvable, by exhaustive scan.
pub fn qr_mod(a: i64, n: i64) -> bool {
    assert!(n >= 1, "modulus must be positive");
    let target = a.rem_euclid(n);
    (0..n).any(|x| ((x as i128 * x as i128) % n as i128) as i64 == target)
}

pub fn lcm_all(v: impl IntoIterator<Item = i64>) -> i64 {
    v.into_iter().fold(1, |acc, x| acc.lcm(&x))
}
