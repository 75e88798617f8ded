//! Exact integer arithmetic foundation: primality, factorization,
//! multiplicative functions, modular inverses, power residues and primitive
//! roots.
//!
//! Everything works on `u64` with 128-bit intermediates for modular
//! multiplication, which comfortably covers the ranges this crate scans
//! (primes up to a few times 10^12).

use std::sync::OnceLock;

use num::rational::Ratio;

use crate::{Error, Result};

/// Largest modulus accepted for O(p)-sized tables (inverse tables).
/// Entries are stored as `u32`, so the modulus must also fit in 32 bits.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 31;

/// Bound of the cached trial-division prime table.
const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// a * b mod m for reduced operands (a, b < m). Moduli below 2^32 stay in
/// u64 arithmetic; the wide path costs a u128 division.
#[inline]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(a < m && b < m);
    if m <= u64::from(u32::MAX) {
        a * b % m
    } else {
        (a as u128 * b as u128 % m as u128) as u64
    }
}

#[inline]
pub fn mod_add(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

/// base^exp mod m by binary exponentiation.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Witnesses that make Miller-Rabin deterministic for all 64-bit inputs.
const MILLER_RABIN_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Deterministic primality test for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MILLER_RABIN_BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes <= n by a plain sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    assert!(n <= 200_000_000, "sieve bound too large for a flat sieve");
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Cached primes up to 10^6, shared by trial division.
pub(crate) fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| primes_up_to(TRIAL_DIVISION_BOUND))
}

/// One Brent-cycle attempt at splitting odd composite n; may fail (returns n).
fn brent_attempt(n: u64, c: u64) -> u64 {
    let f = |x: u64| mod_add(mod_mul(x, x, n), c, n);
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mod_mul(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        // backtrack one step at a time from the last checkpoint
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    g
}

/// Nontrivial factor of an odd composite with no prime factor below the
/// trial-division bound. The polynomial offset sequence c = 1, 2, 3, ...
/// makes the search deterministic.
fn pollard_brent(n: u64) -> u64 {
    debug_assert!(n > 1 && n % 2 == 1 && !is_prime(n));
    let mut c = 1u64;
    loop {
        let g = brent_attempt(n, c);
        if g != n && g != 1 {
            return g;
        }
        c += 1;
    }
}

/// A positive integer with its complete prime factorization,
/// primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factor n >= 1. Trial division by the cached primes up to 10^6, then
    /// Brent-variant Pollard rho for what remains. n = 1 has no factors.
    pub fn of(n: u64) -> Factorization {
        assert!(n >= 1, "factorization needs n >= 1");
        let mut rem = n;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for &p in small_primes() {
            if p * p > rem {
                break;
            }
            if rem % p == 0 {
                let mut e = 0;
                while rem % p == 0 {
                    rem /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
        }
        if rem > 1 {
            if is_prime(rem) {
                factors.push((rem, 1));
            } else {
                // at most three prime factors remain, all above 10^6
                let mut pending = vec![rem];
                let mut large: Vec<u64> = Vec::new();
                while let Some(m) = pending.pop() {
                    if is_prime(m) {
                        large.push(m);
                    } else {
                        let d = pollard_brent(m);
                        pending.push(d);
                        pending.push(m / d);
                    }
                }
                large.sort_unstable();
                for p in large {
                    match factors.last_mut() {
                        Some((q, e)) if *q == p => *e += 1,
                        _ => factors.push((p, 1)),
                    }
                }
            }
        }
        Factorization { n, factors }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn distinct_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let prev = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..prev {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn stats(&self) -> MultiplicativeStats {
        multiplicative_stats(self)
    }
}

/// The multiplicative data attached to a factorization: Euler's totient,
/// the Moebius value, omega, the square-free divisor count W = 2^omega and
/// theta = phi(n)/n as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeStats {
    pub phi: u64,
    pub mobius: i32,
    pub omega: u32,
    pub w: u64,
    pub theta: Ratio<u64>,
}

pub fn multiplicative_stats(f: &Factorization) -> MultiplicativeStats {
    let mut phi = 1u64;
    let mut squarefree = true;
    for &(p, e) in f.factors() {
        phi *= p.pow(e - 1) * (p - 1);
        if e > 1 {
            squarefree = false;
        }
    }
    let omega = f.omega();
    let mobius = if !squarefree {
        0
    } else if omega % 2 == 0 {
        1
    } else {
        -1
    };
    MultiplicativeStats {
        phi,
        mobius,
        omega,
        w: 1u64 << omega,
        theta: Ratio::new(phi, f.n()),
    }
}

/// Inverse of a mod p in [1, p-1], by the extended Euclidean algorithm.
/// Rejects a ≡ 0 (mod p).
pub fn mod_inverse(a: u64, p: u64) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::ZeroResidue);
    }
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "modulus must be prime");
    Ok(t0.rem_euclid(p as i128) as u64)
}

/// Table of all inverses mod p: entry a is the inverse of a, entry 0 unused.
/// Built in O(p) by inv[a] = -(p/a) * inv[p mod a].
pub fn build_inverse_table(p: u64, cap: u64) -> Result<Vec<u32>> {
    let cap = cap.min(DEFAULT_TABLE_CAP);
    if p > cap {
        return Err(Error::CapExceeded {
            what: "inverse table modulus",
            value: p,
            cap,
        });
    }
    let mut inv = vec![0u32; p as usize];
    if p > 1 {
        inv[1] = 1;
    }
    for a in 2..p {
        let v = p - (p / a) * u64::from(inv[(p % a) as usize]) % p;
        inv[a as usize] = v as u32;
    }
    Ok(inv)
}

fn smallest_primitive_root_impl(p: u64, fact_p_minus_1: &Factorization) -> u64 {
    let exponents: Vec<u64> = fact_p_minus_1
        .distinct_primes()
        .map(|l| (p - 1) / l)
        .collect();
    (2..p)
        .find(|&g| exponents.iter().all(|&e| mod_pow(g, e, p) != 1))
        .expect("a primitive root exists for every odd prime modulus")
}

/// Smallest primitive root modulo an odd prime p, candidates tested in
/// increasing order from 2.
pub fn smallest_primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::NotOddPrime(p));
    }
    Ok(smallest_primitive_root_impl(p, &Factorization::of(p - 1)))
}

/// An odd prime p bundled with the factorization of p-1, its smallest
/// primitive root, and (optionally) the full inverse table used by the
/// O(p) counting loops. Immutable after construction.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u64,
    fact_p_minus_1: Factorization,
    g: u64,
    inverse_table: Option<Vec<u32>>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<PrimeContext> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            // inverse parity is degenerate mod 2
            return Err(Error::NotOddPrime(p));
        }
        let fact_p_minus_1 = Factorization::of(p - 1);
        let g = smallest_primitive_root_impl(p, &fact_p_minus_1);
        Ok(PrimeContext {
            p,
            fact_p_minus_1,
            g,
            inverse_table: None,
        })
    }

    pub fn with_inverse_table(p: u64, cap: u64) -> Result<PrimeContext> {
        let mut ctx = PrimeContext::new(p)?;
        ctx.inverse_table = Some(build_inverse_table(p, cap)?);
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Smallest primitive root mod p.
    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn fact_p_minus_1(&self) -> &Factorization {
        &self.fact_p_minus_1
    }

    pub fn inverse_table(&self) -> Option<&[u32]> {
        self.inverse_table.as_deref()
    }

    /// Inverse of a in [1, p-1]: table lookup when available, extended
    /// Euclid otherwise.
    pub fn inverse(&self, a: u64) -> u64 {
        debug_assert!(a >= 1 && a < self.p);
        match &self.inverse_table {
            Some(t) => u64::from(t[a as usize]),
            None => mod_inverse(a, self.p).expect("a in [1, p-1]"),
        }
    }

    pub fn is_primitive_root(&self, a: u64) -> bool {
        if a % self.p == 0 {
            return false;
        }
        self.fact_p_minus_1
            .distinct_primes()
            .all(|l| mod_pow(a, (self.p - 1) / l, self.p) != 1)
    }
}

/// True iff a^((p-1)/l) != 1 (mod p) for every prime l dividing e,
/// i.e. a is not a d-th power residue for any divisor d > 1 of e.
/// e must divide p-1.
pub fn is_e_free(a: u64, e: u64, ctx: &PrimeContext) -> Result<bool> {
    let p = ctx.p();
    if e == 0 || (p - 1) % e != 0 {
        return Err(Error::NotDivisor {
            divisor: e,
            of: p - 1,
        });
    }
    debug_assert!(a >= 1 && a < p);
    // every prime of e divides p-1, so scan the context's factor list
    Ok(ctx
        .fact_p_minus_1()
        .distinct_primes()
        .filter(|&l| e % l == 0)
        .all(|l| mod_pow(a, (p - 1) / l, p) != 1))
}
