//! Trial-division factoring for displaying spanning-tree counts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Prime powers `p^e` with `p ≤ bound`, plus the unfactored cofactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
    pub cofactor: BigInt,
}

pub fn factor_small(n: &BigInt, bound: u64) -> Factorization {
    let mut rest = n.abs();
    let mut factors = Vec::new();
    if rest.is_zero() {
        return Factorization {
            factors,
            cofactor: rest,
        };
    }
    let mut p = 2u64;
    while p <= bound && !rest.is_one() {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // what is left is prime when it is below bound², else unknown
    if rest > BigInt::one() && rest <= BigInt::from(bound) * BigInt::from(bound) {
        if let Ok(q) = u64::try_from(&rest) {
            factors.push((q, 1));
            rest = BigInt::one();
        }
    }
    Factorization {
        factors,
        cofactor: rest,
    }
}

impl Factorization {
    pub fn value(&self) -> BigInt {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, &(p, e)| {
                acc * BigInt::from(p).pow(e)
            })
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| {
                if e == 1 {
                    format!("{p}")
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        if !self.cofactor.is_one() || parts.is_empty() {
            parts.push(format!("{}", self.cofactor));
        }
        f.write_str(&parts.join("·"))
    }
}

/// Decimal rendering, shortened to a digit count past `max_digits`.
pub fn abbreviate(n: &BigInt, max_digits: usize) -> String {
    let s = n.to_string();
    if s.len() <= max_digits {
        s
    } else {
        format!("{}…{} ({} digits)", &s[..6], &s[s.len() - 4..], s.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        let n = BigInt::from(2).pow(24)
            * BigInt::from(3).pow(74)
            * BigInt::from(17).pow(6)
            * BigInt::from(19).pow(6);
        let f = factor_small(&n, 1000);
        assert_eq!(f.factors, [(2, 24), (3, 74), (17, 6), (19, 6)]);
        assert_eq!(f.to_string(), "2^24·3^74·17^6·19^6");
        assert_eq!(f.value(), n);
        let big_prime = BigInt::from(1_000_003u64);
        let f = factor_small(&(&big_prime * 12), 100);
        assert_eq!(
            (f.factors.clone(), f.cofactor.clone()),
            (vec![(2, 2), (3, 1)], big_prime)
        );
        assert_eq!(factor_small(&BigInt::from(1), 10).to_string(), "1");
        assert_eq!(factor_small(&BigInt::from(97), 10).to_string(), "97");
    }
}
