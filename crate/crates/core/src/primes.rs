//! Primality and factorization of the small integers that show up in
//! resolution data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64(n: u64, out: &mut BTreeSet<u64>) {
    if n <= 1 {
        return;
    }
    if is_prime(n) {
        out.insert(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

/// Prime divisors of `|n|`; `None` if a cofactor beyond 64 bits remains
/// after trial division.
pub fn prime_divisors(n: &BigInt) -> Option<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    let mut m = n.abs();
    if m.is_zero() {
        return Some(out);
    }
    let mut p = 2u64;
    while m.to_u64().is_none() && p < 1_000_000 {
        let bp = BigInt::from(p);
        if (&m % &bp).is_zero() {
            out.insert(p);
            while (&m % &bp).is_zero() {
                m /= &bp;
            }
        }
        p += 1;
    }
    let rest = m.to_u64()?;
    if !rest.is_one() {
        factor_u64(rest, &mut out);
    }
    Some(out)
}

/// The `k` smallest primes not in `excluded`.
pub fn smallest_primes_excluding(k: usize, excluded: &BTreeSet<u64>) -> Vec<u64> {
    (2u64..)
        .filter(|p| is_prime(*p) && !excluded.contains(p))
        .take(k)
        .collect()
}
