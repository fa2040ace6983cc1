//! Truncated power series over ℤ, ℤ/ℓ^N and cyclotomic integers, truncated
//! ℓ-adic integers, the binomial series `(1+T)^a` and the μ/λ invariants.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclotomic::Cyclo;
use crate::error::{bail, Result};
use crate::ring::{checked_pow, ord_int, ord_mod, ModInt, Ring};

/// An ℓ-adic valuation: a nonnegative rational, "at least N" for residues
/// that vanish at the working precision, or +∞ for exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Rational { num: i64, den: i64 },
    AtLeast(u64),
    Infinite,
}

impl Valuation {
    pub fn rational(num: i64, den: i64) -> Self {
        assert!(den > 0);
        let g = num.gcd(&den).max(1);
        Valuation::Rational {
            num: num / g,
            den: den / g,
        }
    }

    pub fn integer(v: u64) -> Self {
        Valuation::rational(v as i64, 1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Valuation::Rational { num: 0, .. })
    }

    /// Value as an exact fraction, when finite and known.
    pub fn as_fraction(&self) -> Option<(i64, i64)> {
        match *self {
            Valuation::Rational { num, den } => Some((num, den)),
            _ => None,
        }
    }

    /// Lower bound usable for comparisons: a rational is its own bound,
    /// `AtLeast(N)` is `N`, `Infinite` is `None` (unbounded).
    fn lower_bound(&self) -> Option<(i64, i64)> {
        match *self {
            Valuation::Rational { num, den } => Some((num, den)),
            Valuation::AtLeast(n) => Some((n as i64, 1)),
            Valuation::Infinite => None,
        }
    }

    /// `self ≥ other` when this can be decided from the information held.
    pub fn at_least(&self, other: &Valuation) -> bool {
        match (self.lower_bound(), other.as_fraction()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((a, b)), Some((c, d))) => (a as i128) * (d as i128) >= (c as i128) * (b as i128),
        }
    }

    pub fn add(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Infinite, _) | (_, Valuation::Infinite) => Valuation::Infinite,
            (Valuation::Rational { num: a, den: b }, Valuation::Rational { num: c, den: d }) => {
                Valuation::rational(a * d + c * b, b * d)
            }
            _ => {
                let (a, b) = self.lower_bound().unwrap();
                let (c, d) = other.lower_bound().unwrap();
                Valuation::AtLeast(((a * d + c * b) / (b * d)) as u64)
            }
        }
    }

    pub fn scale(&self, k: i64) -> Valuation {
        match *self {
            Valuation::Rational { num, den } => Valuation::rational(num * k, den),
            Valuation::AtLeast(n) => Valuation::AtLeast(n * k as u64),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    fn cmp_known(&self, other: &Valuation) -> Option<Ordering> {
        let (a, b) = self.as_fraction()?;
        let (c, d) = other.as_fraction()?;
        Some(((a as i128) * (d as i128)).cmp(&((c as i128) * (b as i128))))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Valuation::Rational { num, den: 1 } => write!(f, "{num}"),
            Valuation::Rational { num, den } => write!(f, "{num}/{den}"),
            Valuation::AtLeast(n) => write!(f, ">={n}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Rings whose elements have an ℓ-adic valuation.
pub trait Valued {
    fn valuation(&self, ell: u64) -> Valuation;
}

impl Valued for BigInt {
    fn valuation(&self, ell: u64) -> Valuation {
        match ord_int(self, ell) {
            Some(v) => Valuation::integer(v),
            None => Valuation::Infinite,
        }
    }
}

impl Valued for ModInt {
    fn valuation(&self, ell: u64) -> Valuation {
        match ord_mod(self, ell) {
            Some(v) => Valuation::integer(v),
            None => {
                let mut n = 0;
                let mut m = self.modulus();
                while m > 1 {
                    m /= ell;
                    n += 1;
                }
                Valuation::AtLeast(n)
            }
        }
    }
}

impl Valued for Cyclo {
    fn valuation(&self, ell: u64) -> Valuation {
        self.ord(ell)
    }
}

/// ℓ-adic integer known modulo ℓ^N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicTruncated {
    ell: u64,
    precision: u32,
    residue: BigInt,
}

impl PadicTruncated {
    pub fn new(ell: u64, precision: u32, value: &BigInt) -> Self {
        let modulus = BigInt::from(ell).pow(precision);
        PadicTruncated {
            ell,
            precision,
            residue: value.mod_floor(&modulus),
        }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Representative in `[0, ℓ^N)`.
    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    fn modulus(&self) -> BigInt {
        BigInt::from(self.ell).pow(self.precision)
    }

    fn combine(&self, rhs: &Self, v: BigInt) -> Self {
        assert_eq!(self.ell, rhs.ell, "mixed primes");
        let precision = self.precision.min(rhs.precision);
        PadicTruncated::new(self.ell, precision, &v)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, &self.residue + &rhs.residue)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, &self.residue - &rhs.residue)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.combine(rhs, &self.residue * &rhs.residue)
    }

    pub fn neg(&self) -> Self {
        PadicTruncated::new(self.ell, self.precision, &-&self.residue)
    }

    /// Reduction to ℤ/ℓ^n for `n ≤ N`.
    pub fn reduce(&self, n: u32) -> Option<u64> {
        if n > self.precision {
            return None;
        }
        let m = BigInt::from(self.ell).pow(n);
        (&self.residue % &m).try_into().ok()
    }

    pub fn ord(&self) -> Valuation {
        match ord_int(&self.residue, self.ell) {
            Some(v) => Valuation::integer(v),
            None => Valuation::AtLeast(self.precision as u64),
        }
    }
}

/// A voltage value in ℤ_ℓ: an exact integer, or a truncated ℓ-adic integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZlValue {
    Exact(BigInt),
    Truncated(PadicTruncated),
}

impl ZlValue {
    pub fn exact(v: i64) -> Self {
        ZlValue::Exact(BigInt::from(v))
    }

    pub fn as_exact(&self) -> Option<&BigInt> {
        match self {
            ZlValue::Exact(v) => Some(v),
            ZlValue::Truncated(_) => None,
        }
    }

    /// Residue modulo `ℓ^n`.
    pub fn reduce(&self, ell: u64, n: u32) -> Result<u64> {
        let m = match checked_pow(ell, n) {
            Some(m) => m,
            None => bail!(Resource, "{ell}^{n} does not fit in 64 bits"),
        };
        match self {
            ZlValue::Exact(v) => Ok(v.mod_floor(&BigInt::from(m)).try_into().unwrap()),
            ZlValue::Truncated(p) => match p.reduce(n) {
                Some(r) => Ok(r),
                None => bail!(
                    Precision,
                    "voltage known mod {ell}^{} only, level {n} requested",
                    p.precision()
                ),
            },
        }
    }

    pub fn negated(&self) -> Self {
        match self {
            ZlValue::Exact(v) => ZlValue::Exact(-v),
            ZlValue::Truncated(p) => ZlValue::Truncated(p.neg()),
        }
    }
}

/// Power series truncated after `T^cap`; arithmetic is exact through the cap.
#[derive(Clone, PartialEq)]
pub struct Series<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Series<R> {
    /// Pads with zeros or truncates so that exactly `cap + 1` coefficients remain.
    pub fn from_coeffs(mut coeffs: Vec<R>, zero: &R, cap: usize) -> Self {
        coeffs.resize(cap + 1, zero.zero_like());
        Series { coeffs }
    }

    pub fn constant(c: R, cap: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; cap + 1];
        coeffs[0] = c;
        Series { coeffs }
    }

    /// The series `T`.
    pub fn variable(proto: &R, cap: usize) -> Self {
        let mut s = Series::constant(proto.zero_like(), cap);
        if cap >= 1 {
            s.coeffs[1] = proto.one_like();
        }
        s
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &R {
        &self.coeffs[i]
    }

    pub fn truncate(&self, cap: usize) -> Self {
        let zero = self.coeffs[0].zero_like();
        Series::from_coeffs(
            self.coeffs[..=cap.min(self.cap())].to_vec(),
            &zero,
            cap.min(self.cap()),
        )
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> Series<S> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.times(c))
    }

    /// Inverse of a series whose constant term is a unit; `inv_const` must
    /// be the inverse of `a₀`.
    pub fn inverse_with(&self, inv_const: &R) -> Result<Self> {
        if self.coeffs[0].times(inv_const) != self.coeffs[0].one_like() {
            bail!(Validation, "supplied constant is not the inverse of a0");
        }
        let n = self.cap();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        out.push(inv_const.clone());
        for k in 1..=n {
            let mut acc = self.coeffs[0].zero_like();
            for i in 1..=k {
                acc.add_product(&self.coeffs[i], &out[k - i]);
            }
            out.push(acc.times(inv_const).negated());
        }
        Ok(Series { coeffs: out })
    }

    /// Substitutes a value for `T`, summing through the cap.
    pub fn evaluate(&self, t: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(self.coeffs[0].zero_like(), |acc, c| acc.times(t).plus(c))
    }
}

impl Series<BigInt> {
    /// Inverse over ℤ; the constant term must be ±1.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if !(a0.is_one() || (-a0).is_one()) {
            bail!(Validation, "series constant term {a0} is not a unit in ℤ");
        }
        self.inverse_with(&a0.clone())
    }

    pub fn from_i64(coeffs: &[i64], cap: usize) -> Self {
        Series::from_coeffs(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            &BigInt::zero(),
            cap,
        )
    }

    pub fn to_mod(&self, modulus: u64) -> Series<ModInt> {
        self.map(|c| ModInt::from_bigint(c, modulus))
    }
}

impl Series<ModInt> {
    /// Inverse modulo ℓ^N; the constant term must be prime to ℓ.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        let m = a0.modulus() as i128;
        let ext = (a0.value() as i128).extended_gcd(&m);
        if ext.gcd != 1 {
            bail!(Validation, "series constant term is not a unit mod {m}");
        }
        self.inverse_with(&ModInt::new(ext.x, a0.modulus()))
    }
}

impl<R: Ring> Ring for Series<R> {
    fn zero_like(&self) -> Self {
        Series::constant(self.coeffs[0].zero_like(), self.cap())
    }
    fn one_like(&self) -> Self {
        Series::constant(self.coeffs[0].one_like(), self.cap())
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(Ring::vanishes)
    }
    fn plus(&self, rhs: &Self) -> Self {
        let cap = self.cap().min(rhs.cap());
        Series {
            coeffs: (0..=cap)
                .map(|i| self.coeffs[i].plus(&rhs.coeffs[i]))
                .collect(),
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        let cap = self.cap().min(rhs.cap());
        Series {
            coeffs: (0..=cap)
                .map(|i| self.coeffs[i].minus(&rhs.coeffs[i]))
                .collect(),
        }
    }
    fn times(&self, rhs: &Self) -> Self {
        let cap = self.cap().min(rhs.cap());
        let mut out = vec![self.coeffs[0].zero_like(); cap + 1];
        for (i, a) in self.coeffs[..=cap].iter().enumerate() {
            if a.vanishes() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=cap - i].iter().enumerate() {
                out[i + j].add_product(a, b);
            }
        }
        Series { coeffs: out }
    }
    fn negated(&self) -> Self {
        self.map(Ring::negated)
    }
    fn from_int_like(&self, v: i64) -> Self {
        Series::constant(self.coeffs[0].from_int_like(v), self.cap())
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        let cap = self.cap().min(rhs.cap());
        self.coeffs.truncate(cap + 1);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            a.add_assign_ref(b);
        }
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        let cap = self.cap().min(a.cap()).min(b.cap());
        self.coeffs.truncate(cap + 1);
        for (i, x) in a.coeffs[..=cap].iter().enumerate() {
            if x.vanishes() {
                continue;
            }
            for (j, y) in b.coeffs[..=cap - i].iter().enumerate() {
                self.coeffs[i + j].add_product(x, y);
            }
        }
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(self.cap() + 1))
    }
}

impl<R: Ring + fmt::Debug> fmt::Debug for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()?;
        write!(f, " + O(T^{})", self.cap() + 1)
    }
}

impl<R: Ring + fmt::Display> Series<R> {
    /// `a₀ + a₁T + …` showing at most `terms` nonzero terms, then the
    /// truncation order.
    pub fn render(&self, terms: usize) -> String {
        let mut out = String::new();
        let mut shown = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            if shown == terms {
                out.push_str(" + ...");
                break;
            }
            let text = format!("{c}");
            let needs_parens = text.contains(' ');
            let (sign, body) = match text.strip_prefix('-') {
                Some(rest) if !needs_parens => ("-", String::from(rest)),
                _ => ("+", text),
            };
            if shown == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let body = if needs_parens {
                format!("({body})")
            } else {
                body
            };
            match i {
                0 => out.push_str(&body),
                _ => {
                    if body != "1" {
                        out.push_str(&body);
                    }
                    out.push('T');
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
            shown += 1;
        }
        if shown == 0 {
            out.push('0');
        }
        out.push_str(&format!(" + O(T^{})", self.cap() + 1));
        out
    }
}

/// `(1+T)^a` for an integer `a` (possibly negative), exact through the cap.
pub fn binomial_series(a: &BigInt, cap: usize) -> Series<BigInt> {
    let mut coeffs = Vec::with_capacity(cap + 1);
    let mut c = BigInt::one();
    coeffs.push(c.clone());
    for k in 1..=cap {
        c *= a - BigInt::from(k - 1);
        c /= BigInt::from(k);
        coeffs.push(c.clone());
    }
    Series { coeffs }
}

fn factorial_ord(k: usize, ell: u64) -> u32 {
    let mut total = 0;
    let mut p = ell as usize;
    while p <= k {
        total += (k / p) as u32;
        p *= ell as usize;
    }
    total
}

/// `(1+T)^a` for a truncated ℓ-adic `a` known mod ℓ^N.
///
/// Numerators `a(a−1)…(a−k+1)` are formed mod ℓ^N and divided exactly by
/// `k!`, which costs `ord_ℓ(k!)` digits; the result is returned modulo
/// `ℓ^{N − ord_ℓ(cap!)}`. Callers wanting precision `P` supply `a` to
/// precision `P + ord_ℓ(cap!)`.
pub fn binomial_series_padic(a: &PadicTruncated, cap: usize) -> Result<Series<ModInt>> {
    let ell = a.ell();
    let loss = factorial_ord(cap, ell);
    if loss >= a.precision() {
        bail!(
            Precision,
            "binomial coefficients up to T^{cap} lose {loss} digits; voltage known to {} digits",
            a.precision()
        );
    }
    let out_precision = a.precision() - loss;
    let out_mod = match checked_pow(ell, out_precision) {
        Some(m) if m < (1 << 62) => m,
        _ => bail!(
            Resource,
            "{ell}^{out_precision} exceeds the residue word size"
        ),
    };
    let big_mod = a.modulus();
    let out_big = BigInt::from(out_mod);
    let l = BigInt::from(ell);
    let mut coeffs = Vec::with_capacity(cap + 1);
    coeffs.push(ModInt::new(1, out_mod));
    let mut numerator = BigInt::one();
    let mut unit_factorial = BigInt::one();
    let mut factorial_ell_ord = 0u32;
    for k in 1..=cap {
        numerator = (numerator * (a.residue() - BigInt::from(k - 1))).mod_floor(&big_mod);
        let mut kk = BigInt::from(k);
        while kk.is_multiple_of(&l) {
            kk /= &l;
            factorial_ell_ord += 1;
        }
        unit_factorial = (unit_factorial * kk).mod_floor(&big_mod);
        // numerator / ℓ^v mod ℓ^{N−v}, then times the inverse of the unit part.
        let shifted = &numerator / l.pow(factorial_ell_ord);
        let inv = unit_factorial.extended_gcd(&out_big).x.mod_floor(&out_big);
        let c = (shifted * inv).mod_floor(&out_big);
        coeffs.push(ModInt::from_bigint(&c, out_mod));
    }
    Ok(Series { coeffs })
}

/// `ρ(a) = (1+T)^a` reduced mod `modulus` (a power of ℓ), for either kind of
/// voltage. Truncated voltages must carry enough guard digits.
pub fn rho_mod(a: &ZlValue, cap: usize, modulus: u64) -> Result<Series<ModInt>> {
    match a {
        ZlValue::Exact(v) => Ok(binomial_series(v, cap).to_mod(modulus)),
        ZlValue::Truncated(p) => {
            let mut digits = 0;
            let mut m = modulus;
            while m > 1 && m.is_multiple_of(p.ell()) {
                m /= p.ell();
                digits += 1;
            }
            let needed = digits + factorial_ord(cap, p.ell());
            let s = if p.precision() > needed {
                binomial_series_padic(&PadicTruncated::new(p.ell(), needed, p.residue()), cap)?
            } else {
                binomial_series_padic(p, cap)?
            };
            let have = s.coeffs[0].modulus();
            if have % modulus != 0 {
                bail!(
                    Precision,
                    "voltage precision yields coefficients mod {have}, need mod {modulus}"
                );
            }
            Ok(s.map(|c| ModInt::new(c.value() as i128, modulus)))
        }
    }
}

/// Iwasawa μ and λ of a truncated series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuLambda {
    pub mu: Valuation,
    pub lambda: usize,
    /// `true` when `μ = 0` was observed: no coefficient beyond the cap can
    /// lower it. A positive μ read off a truncation is only an upper bound.
    pub certified: bool,
}

/// `μ = min ord_ℓ(aᵢ)`, `λ = min{i : ord_ℓ(aᵢ) = μ}` over the stored
/// coefficients. Fails when no coefficient has a known finite valuation.
pub fn mu_lambda<R: Ring + Valued>(q: &Series<R>, ell: u64) -> Result<MuLambda> {
    let mut best: Option<(Valuation, usize)> = None;
    for (i, c) in q.coeffs().iter().enumerate() {
        let v = c.valuation(ell);
        if v.as_fraction().is_none() {
            continue;
        }
        match &best {
            Some((b, _)) if v.cmp_known(b) != Some(Ordering::Less) => {}
            _ => best = Some((v, i)),
        }
    }
    match best {
        Some((mu, lambda)) => Ok(MuLambda {
            mu,
            lambda,
            certified: mu.is_zero(),
        }),
        None => bail!(
            Precision,
            "series vanishes through T^{} at the working precision",
            q.cap()
        ),
    }
}

/// Result of substituting `T = t` with `ord(t) > 0` into a truncated series:
/// the partial sum and the valuation to which it is guaranteed correct.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: Cyclo,
    pub correct_to: Valuation,
}

/// Evaluates `f` at `t` (e.g. `t_ψ = ψ(1) − 1`). The discarded tail has
/// valuation at least `(cap + 1)·ord(t)`; fails if that is below `precision`.
pub fn evaluate_at(
    f: &Series<Cyclo>,
    t: &Cyclo,
    ell: u64,
    precision: Valuation,
) -> Result<Evaluation> {
    let ord_t = t.ord(ell);
    if ord_t.is_zero() {
        bail!(Validation, "evaluation point is not in the open unit disk");
    }
    let correct_to = ord_t.scale(f.cap() as i64 + 1);
    if !correct_to.at_least(&precision) {
        bail!(
            Precision,
            "cap {} only certifies valuation {correct_to}, {precision} requested",
            f.cap()
        );
    }
    Ok(Evaluation {
        value: f.evaluate(t),
        correct_to,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn ints(s: &Series<BigInt>) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(ints(&binomial_series(&BigInt::from(1), 4)), [1, 1, 0, 0, 0]);
        assert_eq!(
            ints(&binomial_series(&BigInt::from(-1), 4)),
            [1, -1, 1, -1, 1]
        );
        assert_eq!(
            ints(&binomial_series(&BigInt::from(4), 5)),
            [1, 4, 6, 4, 1, 0]
        );
    }

    #[test]
    fn rho_is_a_homomorphism_on_small_cases() {
        let cap = 12;
        for a in -5..=5i64 {
            for b in -5..=5i64 {
                let lhs = binomial_series(&BigInt::from(a), cap)
                    .times(&binomial_series(&BigInt::from(b), cap));
                assert_eq!(lhs, binomial_series(&BigInt::from(a + b), cap));
            }
        }
        let rho1 = binomial_series(&BigInt::from(1), 10);
        assert_eq!(rho1.pow(4), binomial_series(&BigInt::from(4), 10));
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let s = Series::from_i64(&[1, 1], 6);
        let inv = s.inverse().unwrap();
        assert_eq!(ints(&inv), [1, -1, 1, -1, 1, -1, 1]);
        assert!(s.times(&inv) == s.one_like());
        assert!(Series::from_i64(&[3, 1], 4).inverse().is_err());
        let m = Series::from_i64(&[2, 1], 5).to_mod(27);
        let mi = m.inverse().unwrap();
        assert_eq!(m.times(&mi), m.one_like());
        assert!(Series::from_i64(&[3, 1], 5).to_mod(27).inverse().is_err());
    }

    #[test]
    fn padic_binomial_matches_exact() {
        let ell = 3;
        let cap = 20;
        let loss = factorial_ord(cap, ell);
        let precision = 12 + loss;
        for a in [-7i64, 0, 5, 20, 1000] {
            let p = PadicTruncated::new(ell, precision, &BigInt::from(a));
            let s = binomial_series_padic(&p, cap).unwrap();
            let modulus = 3u64.pow(12);
            assert_eq!(s.coeff(0).modulus(), modulus);
            assert_eq!(s, binomial_series(&BigInt::from(a), cap).to_mod(modulus));
        }
        let short = PadicTruncated::new(3, 2, &BigInt::from(5));
        assert!(binomial_series_padic(&short, 20).is_err());
    }

    #[test]
    fn mu_lambda_examples() {
        let s = Series::from_i64(&[3, 1], 4);
        let ml = mu_lambda(&s, 3).unwrap();
        assert_eq!(
            (ml.mu, ml.lambda, ml.certified),
            (Valuation::integer(0), 1, true)
        );
        let f = Series::from_i64(&[0, 0, -3, 3, -3], 4);
        let ml = mu_lambda(&f, 2).unwrap();
        assert_eq!((ml.mu, ml.lambda), (Valuation::integer(0), 2));
        let g = Series::from_i64(&[0, 9, 3], 2);
        let ml = mu_lambda(&g, 3).unwrap();
        assert_eq!(
            (ml.mu, ml.lambda, ml.certified),
            (Valuation::integer(1), 2, false)
        );
        assert!(mu_lambda(&Series::from_i64(&[0, 0], 3), 3).is_err());
        assert!(mu_lambda(&Series::from_i64(&[27, 81], 3).to_mod(27), 3).is_err());
    }

    #[test]
    fn valuation_arithmetic() {
        let half = Valuation::rational(1, 2);
        assert_eq!(half.add(&half), Valuation::integer(1));
        assert!(Valuation::integer(2).at_least(&Valuation::rational(3, 2)));
        assert!(!Valuation::rational(1, 2).at_least(&Valuation::integer(1)));
        assert!(Valuation::Infinite.at_least(&Valuation::integer(100)));
        assert_eq!(Valuation::rational(2, 4).to_string(), "1/2");
    }

    #[test]
    fn rendering() {
        let s = Series::from_i64(&[0, 0, -3, 3, -3], 6);
        assert_eq!(s.render(2), "-3T^2 + 3T^3 + ... + O(T^7)");
        assert_eq!(Series::from_i64(&[1, 1], 1).to_string(), "1 + T + O(T^2)");
    }
}
