//! Prime-field scalar arithmetic.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arithmetic context for F_p with `2 <= p < 2^31`.
///
/// Elements are `u32` residues in `[0, p)`. Products fit in a `u64`, and
/// reduction is Barrett-style against a precomputed `floor(2^64 / p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    p: u32,
    barrett: u64,
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1u64 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let barrett = if p.is_power_of_two() {
            // p == 2; 2^64 / 2 still fits
            1u64 << 63
        } else {
            u64::MAX / p
        };
        Ok(Self {
            p: p as u32,
            barrett,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Products of two residues can be summed 2^32 times without overflow.
    #[inline]
    pub fn is_small(&self) -> bool {
        self.p < (1 << 16)
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p as u64;
        while r >= self.p as u64 {
            r -= self.p as u64;
        }
        r as u32
    }

    pub fn element(&self, x: u64) -> u32 {
        self.reduce(x)
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(&self, x: i64) -> u32 {
        let r = x.rem_euclid(self.p as i64);
        r as u32
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if a < self.p {
            Ok(a)
        } else {
            Err(Error::OutOfRange {
                value: a as u64,
                modulus: self.p,
            })
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(&self, a: u32, b: u32, c: u32) -> u32 {
        self.reduce(a as u64 + b as u64 * c as u64)
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a % self.p == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.from_i64(t0))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(1..self.p)
    }

    /// Inner product of two equal-length residue slices.
    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        debug_assert_eq!(a.len(), b.len());
        if self.is_small() {
            // products fit in u32, and 2^30 of them in u64
            let mut acc = 0u64;
            for (x, y) in a.chunks(1 << 30).zip(b.chunks(1 << 30)) {
                let s: u64 = x.iter().zip(y).map(|(&x, &y)| (x * y) as u64).sum();
                acc = self.reduce(acc + self.reduce(s) as u64) as u64;
            }
            acc as u32
        } else {
            // (p-1)^2 < 2^62: four raw products fit in a u64
            let mut acc = 0u64;
            let mut ca = a.chunks_exact(4);
            let mut cb = b.chunks_exact(4);
            for (x, y) in (&mut ca).zip(&mut cb) {
                let s = x[0] as u64 * y[0] as u64
                    + x[1] as u64 * y[1] as u64
                    + x[2] as u64 * y[2] as u64;
                let s = self.reduce(s) as u64 + x[3] as u64 * y[3] as u64;
                acc += self.reduce(s) as u64;
            }
            for (&x, &y) in ca.remainder().iter().zip(cb.remainder()) {
                acc += self.mul(x, y) as u64;
            }
            self.reduce(acc)
        }
    }

    /// `dst[i] += f * src[i]`
    pub fn axpy(&self, dst: &mut [u32], f: u32, src: &[u32]) {
        debug_assert_eq!(dst.len(), src.len());
        if f == 0 {
            return;
        }
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.mul_add(*d, f, s);
        }
    }

    /// `dst[i] += src[i]`
    pub fn add_assign(&self, dst: &mut [u32], src: &[u32]) {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.add(*d, s);
        }
    }

    pub fn ensure_same(&self, other: &Field) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.p, other.p))
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl TryFrom<u32> for Field {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Field::new(p as u64)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.p
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; witnesses {2, 3, 5, 7} are exact below 3.2e9.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
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

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
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

impl Field {
    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u32 {
        if self.p == 2 {
            return 1;
        }
        let order = self.p as u64 - 1;
        let factors = prime_factors(order);
        (2..self.p)
            .find(|&g| factors.iter().all(|&q| self.pow(g, order / q) != 1))
            .expect("F_p^* is cyclic")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.mul(2, 4), 3);
        assert_eq!(f5.inv(2).unwrap(), 3);
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        assert_eq!(f5.inv(0), Err(Error::ZeroInverse));
    }

    #[test]
    fn rejects_composites_and_range() {
        for bad in [0u64, 1, 4, 9, 561, 1 << 31, (1 << 31) + 11, 3_215_031_751] {
            assert!(Field::new(bad).is_err(), "{bad}");
        }
        for good in [2u64, 3, 257, 7681, 998_244_353, 2_147_483_647] {
            assert!(Field::new(good).is_ok(), "{good}");
        }
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let limit = 20_000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &prime) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), prime, "{n}");
        }
    }

    #[test]
    fn inverse_everywhere_small_fields() {
        for p in [2u64, 3, 5, 7, 257] {
            let f = Field::new(p).unwrap();
            for a in 1..p as u32 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn barrett_matches_remainder_large_prime() {
        let f = Field::new(2_147_483_647).unwrap();
        let p = f.modulus() as u64;
        let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
        for _ in 0..10_000 {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let a = (x >> 33) % p;
            let b = (x & 0x7fff_ffff) % p;
            assert_eq!(f.mul(a as u32, b as u32) as u64, a * b % p);
        }
    }

    #[test]
    fn dot_agrees_with_naive() {
        for p in [3u64, 65_537, 2_147_483_647] {
            let f = Field::new(p).unwrap();
            let a: Vec<u32> = (0..37).map(|i| ((i * 7919 + 3) % p) as u32).collect();
            let b: Vec<u32> = (0..37).map(|i| ((i * 104_729 + 11) % p) as u32).collect();
            let naive = a
                .iter()
                .zip(&b)
                .fold(0u64, |acc, (&x, &y)| (acc + x as u64 * y as u64 % p) % p);
            assert_eq!(f.dot(&a, &b) as u64, naive);
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(Field::new(257).unwrap().primitive_root(), 3);
        assert_eq!(Field::new(7).unwrap().primitive_root(), 3);
        assert_eq!(Field::new(998_244_353).unwrap().primitive_root(), 3);
    }
}
