//! Small integer helpers: divisors, totient, modular inverses, primality and
//! prime-power recognition.

use num_integer::Integer;

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0, "divisors of zero are not finite");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient, by trial factorisation.
pub fn totient(n: u64) -> u64 {
    assert!(n > 0);
    let mut result = n;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Reduces a signed integer into `[0, n)`.
pub fn reduce_mod(k: i64, n: u64) -> u64 {
    (k as i128).rem_euclid(n as i128) as u64
}

/// Inverse of `a` modulo `n`, if `gcd(a, n) = 1`. For `n = 1` the inverse is 0.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let ext = (a as i128 % n as i128).extended_gcd(&(n as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(n as i128) as u64)
}

/// Deterministic primality for the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    primal::is_prime(n)
}

/// Returns `(p, a)` with `q = p^a`, `a >= 1`, when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > q {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut a = 0u32;
    while rest % p == 0 {
        rest /= p;
        a += 1;
    }
    (rest == 1).then_some((p, a))
}

/// Primes in the closed range `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    (lo.max(2)..=hi).filter(|&p| is_prime(p)).collect()
}

/// `base^exp` in checked `u64` arithmetic.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}
