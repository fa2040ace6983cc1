//! Minimal commutative-ring abstraction shared by the determinant kernels.
//!
//! Elements carry their own context (modulus, cyclotomic field, truncation
//! cap), so constants are produced from an existing element with
//! [`Ring::zero_like`] / [`Ring::one_like`].

use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_int_like(&self, v: i64) -> Self;

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.plus(rhs);
    }

    /// `self += a * b`
    fn add_product(&mut self, a: &Self, b: &Self) {
        let p = a.times(b);
        self.add_assign_ref(&p);
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_int_like(&self, v: i64) -> Self {
        BigInt::from(v)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        if Zero::is_zero(a) || Zero::is_zero(b) {
            return;
        }
        *self += a * b;
    }
}

/// Residue modulo `modulus` (an ℓ-power below 2^63).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModInt {
    value: u64,
    modulus: u64,
}

impl ModInt {
    pub fn new(value: i128, modulus: u64) -> Self {
        assert!((1..(1 << 63)).contains(&modulus), "modulus out of range");
        let m = modulus as i128;
        ModInt {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Self {
        let m = BigInt::from(modulus);
        let mut r = value % &m;
        if r.is_negative() {
            r += &m;
        }
        let v: u64 = r.try_into().expect("residue fits in u64");
        ModInt { value: v, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Symmetric lift into `(-m/2, m/2]`.
    pub fn signed_value(&self) -> i128 {
        let v = self.value as i128;
        let m = self.modulus as i128;
        if 2 * v > m {
            v - m
        } else {
            v
        }
    }
}

impl fmt::Debug for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl Ring for ModInt {
    fn zero_like(&self) -> Self {
        ModInt {
            value: 0,
            modulus: self.modulus,
        }
    }
    fn one_like(&self) -> Self {
        ModInt {
            value: 1 % self.modulus,
            modulus: self.modulus,
        }
    }
    fn vanishes(&self) -> bool {
        self.value == 0
    }
    fn plus(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value + rhs.value;
        ModInt {
            value: if s >= self.modulus {
                s - self.modulus
            } else {
                s
            },
            modulus: self.modulus,
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus - rhs.value
        };
        ModInt {
            value,
            modulus: self.modulus,
        }
    }
    fn times(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value = if self.modulus <= 1 << 32 {
            self.value * rhs.value % self.modulus
        } else {
            ((self.value as u128 * rhs.value as u128) % self.modulus as u128) as u64
        };
        ModInt {
            value,
            modulus: self.modulus,
        }
    }
    fn negated(&self) -> Self {
        ModInt {
            value: if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            modulus: self.modulus,
        }
    }
    fn from_int_like(&self, v: i64) -> Self {
        ModInt::new(v as i128, self.modulus)
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        self.value = if self.modulus <= 1 << 31 {
            (self.value + a.value * b.value) % self.modulus
        } else {
            ((self.value as u128 + a.value as u128 * b.value as u128) % self.modulus as u128) as u64
        };
    }
}

/// ℓ-adic valuation of a nonzero integer; `None` for zero.
pub fn ord_int(value: &BigInt, ell: u64) -> Option<u64> {
    if Zero::is_zero(value) {
        return None;
    }
    let l = BigInt::from(ell);
    let mut v = value.abs();
    let mut k = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&v, &l);
        if !Zero::is_zero(&r) {
            return Some(k);
        }
        v = q;
        k += 1;
    }
}

/// ℓ-adic valuation of a residue mod ℓ^N; `None` when the residue is zero.
pub fn ord_mod(value: &ModInt, ell: u64) -> Option<u64> {
    if value.value == 0 {
        return None;
    }
    let mut v = value.value;
    let mut k = 0;
    while v.is_multiple_of(ell) {
        v /= ell;
        k += 1;
    }
    Some(k)
}

/// Largest `N` with `ell^N < 2^31`: residues whose products fit in a
/// machine word, used where only small valuations matter.
pub fn word_precision(ell: u64) -> u32 {
    let mut n = 0;
    let mut p: u64 = 1;
    while p * ell < 1 << 31 {
        p *= ell;
        n += 1;
    }
    n
}

/// Largest `N` with `ell^N < 2^62`, the default working precision for
/// residue arithmetic.
pub fn default_precision(ell: u64) -> u32 {
    let mut n = 0;
    let mut p: u128 = 1;
    while p * (ell as u128) < (1u128 << 62) {
        p *= ell as u128;
        n += 1;
    }
    n
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// If `n = p^k` with `p` prime and `k ≥ 1`, returns `(p, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while !n.is_multiple_of(p) {
        p += 1;
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modint_arithmetic_wraps() {
        let m = 27;
        let a = ModInt::new(-1, m);
        assert_eq!(a.value(), 26);
        assert_eq!(a.plus(&ModInt::new(2, m)).value(), 1);
        assert_eq!(a.times(&a).value(), 1);
        assert_eq!(
            ModInt::new(5, m).minus(&ModInt::new(7, m)).signed_value(),
            -2
        );
    }

    #[test]
    fn valuations() {
        assert_eq!(ord_int(&BigInt::from(-54), 3), Some(3));
        assert_eq!(ord_int(&BigInt::from(0), 3), None);
        assert_eq!(ord_mod(&ModInt::new(18, 81), 3), Some(2));
        assert_eq!(ord_mod(&ModInt::new(81, 81), 3), None);
    }

    #[test]
    fn precision_and_primes() {
        assert!(3u128.pow(default_precision(3)) < 1 << 62);
        assert!(3u128.pow(default_precision(3) + 1) >= 1 << 62);
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert!(is_prime(577));
        assert!(!is_prime(1));
    }
}
