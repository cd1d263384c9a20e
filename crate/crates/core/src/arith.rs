//! Small-integer number theory: primes, modular powers, totients.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Deterministic Miller-Rabin; these bases suffice for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    'bases: for &a in &BASES {
        let mut x = 1u64;
        let (mut b, mut e) = (a, d);
        while e > 0 {
            if e & 1 == 1 {
                x = mul(x, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// All primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

/// The n-th prime, 1-based (`nth_prime(1) = 2`).
pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    primes().nth(n - 1).expect("infinitely many primes")
}

/// The n-th odd prime, 1-based (`nth_odd_prime(1) = 3`).
pub fn nth_odd_prime(n: usize) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    primes().skip(1).nth(n - 1).expect("infinitely many primes")
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// `n mod d` for `d < 2^32`, without allocating.
fn mod_small(n: &BigInt, d: u64) -> u64 {
    n.iter_u32_digits().rev().fold(0u64, |acc, x| ((acc << 32) | x as u64) % d)
}

/// Primes dividing `n` found by trial division up to `limit`. An unfactored
/// cofactor above `limit` is dropped unless it is itself small enough to be
/// certified prime.
pub fn small_prime_divisors(n: &BigInt, limit: u64) -> Vec<u64> {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return out;
    }
    let limit = limit.min(u32::MAX as u64);
    let mut d = 2u64;
    while d <= limit {
        if m.bits() <= 126 && BigInt::from(d * d) > m {
            break;
        }
        if mod_small(&m, d) == 0 {
            out.push(d);
            let big_d = BigInt::from(d);
            while mod_small(&m, d) == 0 {
                m /= &big_d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        if let Some(rest) = m.to_u64() {
            if is_prime(rest) {
                out.push(rest);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
