//! Exact arithmetic in `ℤ[ζ_m] = ℤ[x]/Φ_m(x)`, power-basis coordinates.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ring::{ord_int, prime_power, Ring};
use crate::series::Valuation;

/// The ring `ℤ[x]/Φ_m(x)`.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicRing {
    order: u64,
    /// Coefficients of `Φ_m`, low degree first; monic.
    modulus: Vec<i64>,
}

impl CyclotomicRing {
    pub fn new(order: u64) -> Arc<Self> {
        assert!(order >= 1, "cyclotomic order must be positive");
        Arc::new(CyclotomicRing {
            order,
            modulus: cyclotomic_polynomial(order),
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `φ(m) = [ℚ(ζ_m):ℚ]`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }
}

/// `Φ_m(x)` by exact division of `x^m − 1` by `Φ_d` for proper divisors `d`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    let m_usize = m as usize;
    let mut poly = vec![0i64; m_usize + 1];
    poly[0] = -1;
    poly[m_usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        poly = exact_poly_div(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn exact_poly_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

#[derive(Clone)]
pub struct Cyclo {
    ring: Arc<CyclotomicRing>,
    coords: Vec<BigInt>,
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.ring.order == other.ring.order && self.coords == other.coords
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    write!(f, "z{}", self.ring.order)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Cyclo {
    pub fn zero(ring: &Arc<CyclotomicRing>) -> Self {
        Cyclo {
            ring: ring.clone(),
            coords: vec![BigInt::zero(); ring.degree()],
        }
    }

    pub fn from_int(ring: &Arc<CyclotomicRing>, v: impl Into<BigInt>) -> Self {
        let mut z = Cyclo::zero(ring);
        z.coords[0] = v.into();
        z
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn zeta_pow(ring: &Arc<CyclotomicRing>, k: i64) -> Self {
        let m = ring.order as i64;
        let k = k.rem_euclid(m) as usize;
        let mut raw = vec![BigInt::zero(); k + 1];
        raw[k] = BigInt::one();
        Cyclo::reduce(ring, raw)
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// The rational integer this element equals, if it lies in ℤ.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    fn reduce(ring: &Arc<CyclotomicRing>, mut raw: Vec<BigInt>) -> Self {
        let d = ring.degree();
        for i in (d..raw.len()).rev() {
            let c = core::mem::take(&mut raw[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &mj) in ring.modulus[..d].iter().enumerate() {
                if mj != 0 {
                    raw[i - d + j] -= &c * mj;
                }
            }
        }
        raw.resize(d, BigInt::zero());
        Cyclo {
            ring: ring.clone(),
            coords: raw,
        }
    }

    /// Galois action `ζ ↦ ζ^j`, `gcd(j, m) = 1`.
    pub fn conjugate(&self, j: u64) -> Self {
        let m = self.ring.order;
        debug_assert_eq!(j.gcd(&m), 1);
        let mut raw = vec![BigInt::zero(); (m as usize).max(self.ring.degree())];
        for (i, c) in self.coords.iter().enumerate() {
            raw[((i as u64 * j) % m) as usize] += c;
        }
        Cyclo::reduce(&self.ring, raw)
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn complex_conjugate(&self) -> Self {
        let m = self.ring.order;
        self.conjugate(if m == 1 { 1 } else { m - 1 })
    }

    /// Field norm to ℚ: the product of all Galois conjugates.
    pub fn norm(&self) -> BigInt {
        let m = self.ring.order;
        let mut acc = Cyclo::from_int(&self.ring, 1);
        for j in (1..=m).filter(|j| j.gcd(&m) == 1) {
            acc = acc.times(&self.conjugate(j));
        }
        acc.as_integer()
            .cloned()
            .expect("norm of a cyclotomic integer is rational")
    }

    /// `ord_ℓ` normalised by `ord_ℓ(ℓ) = 1`; requires `m` to be a power of `ℓ`
    /// (or `m ≤ 2`), where `ℓ` is totally ramified.
    pub fn ord(&self, ell: u64) -> Valuation {
        let m = self.ring.order;
        if m > 2 {
            let (p, _) = prime_power(m).expect("ord needs a prime-power cyclotomic order");
            assert_eq!(p, ell, "ord_ℓ needs ζ of ℓ-power order");
        }
        if self.coords.iter().all(Zero::is_zero) {
            return Valuation::Infinite;
        }
        let n = ord_int(&self.norm(), ell).expect("nonzero norm");
        Valuation::rational(n as i64, self.ring.degree() as i64)
    }

    /// True when every coordinate is divisible by `ℓ^k`.
    pub fn divisible_by_power(&self, ell: u64, k: u32) -> bool {
        let q = BigInt::from(ell).pow(k);
        self.coords.iter().all(|c| c.is_multiple_of(&q))
    }

    /// Image in the residue field `ℤ[ζ]/(ζ − 1) = 𝔽_ℓ` (for `m` a power of ℓ):
    /// substitute `ζ = 1` and reduce mod ℓ.
    pub fn residue(&self, ell: u64) -> u64 {
        let sum: BigInt = self.coords.iter().sum();
        let r = sum.mod_floor(&BigInt::from(ell));
        r.try_into().expect("residue below ell")
    }
}

impl Ring for Cyclo {
    fn zero_like(&self) -> Self {
        Cyclo::zero(&self.ring)
    }
    fn one_like(&self) -> Self {
        Cyclo::from_int(&self.ring, 1)
    }
    fn vanishes(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
    fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
    fn minus(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.ring.order, rhs.ring.order);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a - b)
            .collect();
        Cyclo {
            ring: self.ring.clone(),
            coords,
        }
    }
    fn times(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.ring.order, rhs.ring.order);
        let d = self.ring.degree();
        let mut raw = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Cyclo::reduce(&self.ring, raw)
    }
    fn negated(&self) -> Self {
        Cyclo {
            ring: self.ring.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
    fn from_int_like(&self, v: i64) -> Self {
        Cyclo::from_int(&self.ring, v)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        debug_assert_eq!(self.ring.order, rhs.ring.order);
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}
