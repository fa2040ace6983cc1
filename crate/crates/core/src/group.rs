//! Finite groups given by explicit element lists: cyclic groups, direct
//! products, permutation groups and congruence quotients of SL₂(ℤ_ℓ).
//!
//! Elements are addressed by their index in [`FiniteGroup::elements`]; the
//! canonical encoding of an element is a short vector of residues.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{bail, Result};
use crate::ring::{checked_pow, is_prime};

/// Canonical element encoding.
pub type Elem = Vec<u64>;

/// Default bound on the number of elements any enumeration may produce.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    /// ℤ/m under addition; encoding `[a]`.
    Cyclic { modulus: u64 },
    /// Direct product; encoding is the concatenation of the factors'.
    Product(Box<FiniteGroup>, Box<FiniteGroup>),
    /// Permutations of `0..degree`, encoded as image lists. `σ·τ` applies `τ`
    /// first.
    Permutation { degree: usize },
    /// Matrices `[a, b, c, d]` over ℤ/ℓ^{level+1} congruent to 1 mod ℓ.
    Sl2 { ell: u64, level: u32, modulus: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    kind: GroupKind,
    generators: Vec<usize>,
    elements: Vec<Elem>,
    index: BTreeMap<Elem, usize>,
}

impl FiniteGroup {
    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Elem {
        &self.elements[i]
    }

    /// Distinguished generators used to build the group.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn identity(&self) -> usize {
        self.index_of(&self.identity_elem())
            .expect("identity is enumerated")
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        match &self.kind {
            GroupKind::Cyclic { modulus } => {
                (e.len() == 1 && e[0] < *modulus).then(|| e[0] as usize)
            }
            GroupKind::Product(a, b) => {
                let k = a.coord_len();
                if e.len() != k + b.coord_len() {
                    return None;
                }
                let i = a.index_of(&e[..k].to_vec())?;
                let j = b.index_of(&e[k..].to_vec())?;
                Some(i * b.order() + j)
            }
            _ => self.index.get(e).copied(),
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            GroupKind::Cyclic { modulus } => ((a as u64 + b as u64) % modulus) as usize,
            GroupKind::Product(g, h) => {
                let (a1, a2) = (a / h.order(), a % h.order());
                let (b1, b2) = (b / h.order(), b % h.order());
                g.mul(a1, b1) * h.order() + h.mul(a2, b2)
            }
            _ => {
                let p = self.mul_elems(&self.elements[a], &self.elements[b]);
                self.index[&p]
            }
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match &self.kind {
            GroupKind::Cyclic { modulus } => ((modulus - a as u64) % modulus) as usize,
            GroupKind::Product(g, h) => g.inv(a / h.order()) * h.order() + h.inv(a % h.order()),
            _ => {
                let e = self.inv_elem(&self.elements[a]);
                self.index[&e]
            }
        }
    }

    pub fn pow(&self, a: usize, mut k: u64) -> usize {
        let mut base = a;
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `a b a⁻¹ b⁻¹`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let inv = self.mul(self.inv(a), self.inv(b));
        self.mul(ab, inv)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let id = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != id {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter()
            .all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Left and right factors of a product group.
    pub fn factors(&self) -> Option<(&FiniteGroup, &FiniteGroup)> {
        match &self.kind {
            GroupKind::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Index of the pair `(a, b)` in a product group.
    pub fn pair(&self, a: usize, b: usize) -> usize {
        let (_, h) = self.factors().expect("product group");
        a * h.order() + b
    }

    fn coord_len(&self) -> usize {
        match &self.kind {
            GroupKind::Cyclic { .. } => 1,
            GroupKind::Product(a, b) => a.coord_len() + b.coord_len(),
            GroupKind::Permutation { degree } => *degree,
            GroupKind::Sl2 { .. } => 4,
        }
    }

    fn identity_elem(&self) -> Elem {
        match &self.kind {
            GroupKind::Cyclic { .. } => vec![0],
            GroupKind::Product(a, b) => {
                let mut e = a.identity_elem();
                e.extend(b.identity_elem());
                e
            }
            GroupKind::Permutation { degree } => (0..*degree as u64).collect(),
            GroupKind::Sl2 { modulus, .. } => vec![1 % modulus, 0, 0, 1 % modulus],
        }
    }

    /// Multiplication on encodings.
    pub fn mul_elems(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.kind {
            GroupKind::Cyclic { modulus } => vec![(a[0] + b[0]) % modulus],
            GroupKind::Product(g, h) => {
                let k = g.coord_len();
                let mut e = g.mul_elems(&a[..k].to_vec(), &b[..k].to_vec());
                e.extend(h.mul_elems(&a[k..].to_vec(), &b[k..].to_vec()));
                e
            }
            GroupKind::Permutation { .. } => b.iter().map(|&i| a[i as usize]).collect(),
            GroupKind::Sl2 { modulus, .. } => sl2_mul(a, b, *modulus),
        }
    }

    fn inv_elem(&self, a: &Elem) -> Elem {
        match &self.kind {
            GroupKind::Cyclic { modulus } => vec![(modulus - a[0]) % modulus],
            GroupKind::Product(g, h) => {
                let k = g.coord_len();
                let mut e = g.inv_elem(&a[..k].to_vec());
                e.extend(h.inv_elem(&a[k..].to_vec()));
                e
            }
            GroupKind::Permutation { .. } => {
                let mut out = vec![0; a.len()];
                for (i, &j) in a.iter().enumerate() {
                    out[j as usize] = i as u64;
                }
                out
            }
            GroupKind::Sl2 { modulus, .. } => {
                let m = *modulus;
                vec![a[3], (m - a[1]) % m, (m - a[2]) % m, a[0]]
            }
        }
    }

    /// Closure of `gens` under multiplication (hence a subgroup), sorted.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let id = self.identity();
        let mut seen = BTreeSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn generates(&self, gens: &[usize]) -> bool {
        self.subgroup_generated(gens).len() == self.order()
    }

    /// Human-readable rendering of an element.
    pub fn format(&self, a: usize) -> String {
        self.format_elem(&self.elements[a])
    }

    fn format_elem(&self, e: &Elem) -> String {
        match &self.kind {
            GroupKind::Cyclic { .. } => e[0].to_string(),
            GroupKind::Product(g, h) => {
                let k = g.coord_len();
                format!(
                    "({},{})",
                    g.format_elem(&e[..k].to_vec()),
                    h.format_elem(&e[k..].to_vec())
                )
            }
            GroupKind::Permutation { .. } => format_cycles(e),
            GroupKind::Sl2 { .. } => format!("[[{},{}],[{},{}]]", e[0], e[1], e[2], e[3]),
        }
    }

    /// Parses the rendering produced by [`FiniteGroup::format`]. Also accepted:
    /// `e` for the identity, any integer (reduced) in cyclic groups, cycle
    /// notation with or without a trailing identity `()`, and `A1`, `A2`, `A3`
    /// in SL₂ quotients.
    pub fn parse(&self, text: &str) -> Result<usize> {
        let t = text.trim();
        if t == "e" {
            return Ok(self.identity());
        }
        let elem = match &self.kind {
            GroupKind::Cyclic { modulus } => {
                let v: i128 = match t.parse() {
                    Ok(v) => v,
                    Err(_) => bail!(Validation, "{t:?} is not an integer"),
                };
                vec![v.rem_euclid(*modulus as i128) as u64]
            }
            GroupKind::Product(g, h) => {
                let inner = match t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                    Some(s) => s,
                    None => bail!(Validation, "expected a pair (a,b), got {t:?}"),
                };
                let (l, r) = match split_top_level_comma(inner) {
                    Some(p) => p,
                    None => bail!(Validation, "expected a pair (a,b), got {t:?}"),
                };
                let mut e = g.elements[g.parse(l)?].clone();
                e.extend(h.elements[h.parse(r)?].iter().copied());
                e
            }
            GroupKind::Permutation { degree } => parse_cycles(t, *degree)?,
            GroupKind::Sl2 { ell, modulus, .. } => match t {
                "A1" | "A2" | "A3" => {
                    let k = t.as_bytes()[1] - b'1';
                    sl2_generators(*ell, *modulus)[k as usize].clone()
                }
                _ => parse_matrix(t, *modulus)?,
            },
        };
        match self.index_of(&elem) {
            Some(i) => Ok(i),
            None => bail!(Validation, "{t:?} is not an element of the group"),
        }
    }

    /// Short description such as `Z/9`, `Z/3 x Z/3`, `Perm(4), order 8`.
    pub fn describe(&self) -> String {
        match &self.kind {
            GroupKind::Cyclic { modulus } => format!("Z/{modulus}"),
            GroupKind::Product(a, b) => {
                format!("{} x {}", a.describe_factor(), b.describe_factor())
            }
            GroupKind::Permutation { degree } => {
                format!("Perm({degree}) subgroup of order {}", self.order())
            }
            GroupKind::Sl2 { ell, level, .. } => {
                format!("ker(SL2(Z/{ell}^{}) -> SL2(Z/{ell}))", level + 1)
            }
        }
    }

    fn describe_factor(&self) -> String {
        match &self.kind {
            GroupKind::Product(..) => format!("({})", self.describe()),
            _ => self.describe(),
        }
    }

    /// Moduli of the cyclic factors, when the group is built from cyclic
    /// groups by direct products only.
    pub fn cyclic_moduli(&self) -> Option<Vec<u64>> {
        match &self.kind {
            GroupKind::Cyclic { modulus } => Some(vec![*modulus]),
            GroupKind::Product(a, b) => {
                let mut m = a.cyclic_moduli()?;
                m.extend(b.cyclic_moduli()?);
                Some(m)
            }
            _ => None,
        }
    }

    /// All characters of a group built from cyclic factors. Values are
    /// powers of a primitive `N`-th root of unity, `N` the group exponent.
    pub fn characters(&self) -> Result<Vec<Character>> {
        let moduli = match self.cyclic_moduli() {
            Some(m) => m,
            None => bail!(
                Unsupported,
                "characters are only available for products of cyclic groups"
            ),
        };
        let exponent = moduli.iter().fold(1u64, |acc, &m| acc.lcm(&m));
        let mut out = Vec::with_capacity(self.order());
        for e in &self.elements {
            out.push(Character {
                exponents: e.clone(),
                moduli: moduli.clone(),
                exponent,
            });
        }
        Ok(out)
    }
}

/// A character of `ℤ/m₁ × … × ℤ/m_k`: `ψ(g) = ζ_N^{Σ eᵢ gᵢ N/mᵢ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub exponents: Vec<u64>,
    pub moduli: Vec<u64>,
    /// `N`, the exponent of the group; values lie in `μ_N`.
    pub exponent: u64,
}

impl Character {
    /// `k` with `ψ(g) = ζ_N^k`, for `g` given by its encoding.
    pub fn value_exponent(&self, g: &Elem) -> u64 {
        let n = self.exponent as u128;
        let mut acc: u128 = 0;
        for ((&e, &x), &m) in self.exponents.iter().zip(g).zip(&self.moduli) {
            acc += (e as u128 * x as u128 % m as u128) * (n / m as u128);
        }
        (acc % n) as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Order of `ψ` in the character group.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(&self.moduli)
            .fold(1u64, |acc, (&e, &m)| acc.lcm(&(m / e.gcd(&m))))
    }
}

fn split_top_level_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn format_cycles(perm: &Elem) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = perm[i] as usize;
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Cycle notation on points `1..=degree`; a product of cycles is read
/// right to left, matching composition.
fn parse_cycles(text: &str, degree: usize) -> Result<Elem> {
    let mut perm: Elem = (0..degree as u64).collect();
    let mut rest = text.trim();
    let mut cycles = Vec::new();
    while !rest.is_empty() {
        let body = match rest.strip_prefix('(') {
            Some(b) => b,
            None => bail!(Validation, "malformed cycle notation {text:?}"),
        };
        let close = match body.find(')') {
            Some(c) => c,
            None => bail!(Validation, "unbalanced parenthesis in {text:?}"),
        };
        let mut points = Vec::new();
        for tok in body[..close].split([' ', ',']).filter(|t| !t.is_empty()) {
            match tok.parse::<usize>() {
                Ok(p) if (1..=degree).contains(&p) && !points.contains(&(p - 1)) => {
                    points.push(p - 1)
                }
                _ => bail!(Validation, "bad point {tok:?} in {text:?}"),
            }
        }
        cycles.push(points);
        rest = body[close + 1..].trim_start();
    }
    for points in cycles.iter().rev() {
        let mut cycle: Elem = (0..degree as u64).collect();
        for (k, &p) in points.iter().enumerate() {
            cycle[p] = points[(k + 1) % points.len()] as u64;
        }
        perm = perm.iter().map(|&i| cycle[i as usize]).collect();
    }
    Ok(perm)
}

fn parse_matrix(text: &str, modulus: u64) -> Result<Elem> {
    let digits: Vec<&str> = text
        .split(|c: char| c == '[' || c == ']' || c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    if digits.len() != 4 {
        bail!(Validation, "expected [[a,b],[c,d]], got {text:?}");
    }
    let mut out = Vec::with_capacity(4);
    for d in digits {
        match d.parse::<i128>() {
            Ok(v) => out.push(v.rem_euclid(modulus as i128) as u64),
            Err(_) => bail!(Validation, "bad matrix entry {d:?}"),
        }
    }
    Ok(out)
}

fn sl2_mul(a: &Elem, b: &Elem, m: u64) -> Elem {
    let mm = m as u128;
    let f = |x: u64, y: u64, z: u64, w: u64| {
        ((x as u128 * y as u128 + z as u128 * w as u128) % mm) as u64
    };
    vec![
        f(a[0], b[0], a[1], b[2]),
        f(a[0], b[1], a[1], b[3]),
        f(a[2], b[0], a[3], b[2]),
        f(a[2], b[1], a[3], b[3]),
    ]
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

/// `A₁ = (1 ℓ; 0 1)`, `A₂ = diag(1+ℓ, (1+ℓ)⁻¹)`, `A₃ = (1 0; ℓ 1)` mod `m`.
fn sl2_generators(ell: u64, m: u64) -> [Elem; 3] {
    let one = 1 % m;
    let l = ell % m;
    let u = (1 + ell) % m;
    [
        vec![one, l, 0, one],
        vec![u, 0, 0, mod_inverse(u, m) % m],
        vec![one, 0, l, one],
    ]
}

/// Enumerates the group generated by `gens` (given as encodings).
fn close(kind: GroupKind, gens: Vec<Elem>, identity: Elem, cap: u64) -> Result<FiniteGroup> {
    let mut g = FiniteGroup {
        kind,
        generators: Vec::new(),
        elements: vec![identity.clone()],
        index: BTreeMap::from([(identity, 0)]),
    };
    let mut head = 0;
    while head < g.elements.len() {
        let x = g.elements[head].clone();
        head += 1;
        for s in &gens {
            let y = g.mul_elems(&x, s);
            if !g.index.contains_key(&y) {
                if g.elements.len() as u64 >= cap {
                    bail!(Resource, "group enumeration exceeded {cap} elements");
                }
                g.index.insert(y.clone(), g.elements.len());
                g.elements.push(y);
            }
        }
    }
    g.generators = gens.iter().map(|s| g.index[s]).collect();
    Ok(g)
}

/// ℤ/m.
pub fn cyclic(m: u64) -> FiniteGroup {
    assert!(m >= 1, "cyclic group of order 0");
    FiniteGroup {
        kind: GroupKind::Cyclic { modulus: m },
        generators: if m > 1 { vec![1] } else { Vec::new() },
        elements: (0..m).map(|a| vec![a]).collect(),
        index: BTreeMap::new(),
    }
}

/// `G × H`; the element `(a, b)` has index `a·|H| + b`.
pub fn product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup {
    let mut elements = Vec::with_capacity(g.order() * h.order());
    for a in &g.elements {
        for b in &h.elements {
            let mut e = a.clone();
            e.extend(b.iter().copied());
            elements.push(e);
        }
    }
    let (gi, hi) = (g.identity(), h.identity());
    let mut generators: Vec<usize> = g.generators.iter().map(|&a| a * h.order() + hi).collect();
    generators.extend(h.generators.iter().map(|&b| gi * h.order() + b));
    FiniteGroup {
        kind: GroupKind::Product(Box::new(g), Box::new(h)),
        generators,
        elements,
        index: BTreeMap::new(),
    }
}

/// Permutation group on `0..degree` generated by the given image lists.
pub fn permutation_group(degree: usize, gens: &[Vec<usize>], cap: u64) -> Result<FiniteGroup> {
    let mut encoded = Vec::with_capacity(gens.len());
    for g in gens {
        let mut seen = vec![false; degree];
        if g.len() != degree
            || g.iter()
                .any(|&i| i >= degree || core::mem::replace(&mut seen[i], true))
        {
            bail!(
                Validation,
                "generator {g:?} is not a permutation of {degree} points"
            );
        }
        encoded.push(g.iter().map(|&i| i as u64).collect());
    }
    close(
        GroupKind::Permutation { degree },
        encoded,
        (0..degree as u64).collect(),
        cap,
    )
}

/// The dihedral group of order 8 generated by `ρ = (1 2 3 4)` and
/// `τ = (1 4)(2 3)`; generator indices are `[ρ, τ]`.
pub fn dihedral_8() -> FiniteGroup {
    permutation_group(4, &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]], DEFAULT_ORDER_CAP)
        .expect("dihedral group")
}

/// `ker(SL₂(ℤ/ℓ^{n+1}) → SL₂(ℤ/ℓ))`, enumerated by closure from the images
/// of `A₁, A₂, A₃` (the generator indices, in that order). The order is
/// checked against `ℓ^{3n}`.
pub fn sl2_level_quotient(ell: u64, n: u32, cap: u64) -> Result<FiniteGroup> {
    if ell == 2 {
        bail!(
            Unsupported,
            "the SL2 congruence quotients are implemented for odd primes only"
        );
    }
    if !is_prime(ell) {
        bail!(Validation, "{ell} is not prime");
    }
    let expected = match checked_pow(ell, 3 * n) {
        Some(v) if v <= cap => v,
        _ => bail!(
            Resource,
            "order {ell}^{} exceeds the enumeration cap {cap}",
            3 * n
        ),
    };
    let modulus = match checked_pow(ell, n + 1) {
        Some(m) if m < (1 << 32) => m,
        _ => bail!(Resource, "modulus {ell}^{} too large", n + 1),
    };
    let gens: Vec<Elem> = sl2_generators(ell, modulus).into_iter().collect();
    let identity = vec![1 % modulus, 0, 0, 1 % modulus];
    let g = close(
        GroupKind::Sl2 {
            ell,
            level: n,
            modulus,
        },
        gens,
        identity,
        cap,
    )?;
    if g.order() as u64 != expected {
        bail!(
            Precondition,
            "A1, A2, A3 generate a subgroup of order {} instead of {expected}",
            g.order()
        );
    }
    Ok(g)
}

/// A homomorphism between explicit finite groups, stored as its full
/// image table.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl GroupHom {
    /// Extends images of the source's distinguished generators by
    /// multiplicativity and verifies that the result is well defined.
    pub fn from_generator_images(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        gen_images: &[usize],
    ) -> Result<Self> {
        let gens = source.generators().to_vec();
        if gens.len() != gen_images.len() {
            bail!(
                Validation,
                "{} generator images supplied, {} needed",
                gen_images.len(),
                gens.len()
            );
        }
        let mut images = vec![usize::MAX; source.order()];
        let id = source.identity();
        images[id] = target.identity();
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for (&s, &fs) in gens.iter().zip(gen_images) {
                let y = source.mul(x, s);
                if images[y] == usize::MAX {
                    images[y] = target.mul(images[x], fs);
                    queue.push_back(y);
                }
            }
        }
        if images.contains(&usize::MAX) {
            bail!(
                Validation,
                "distinguished generators do not generate the source"
            );
        }
        GroupHom::checked(source, target, images)
    }

    /// Builds a homomorphism from a function on element indices, verifying
    /// multiplicativity against the source generators.
    pub fn from_fn(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let images = (0..source.order()).map(f).collect();
        GroupHom::checked(source, target, images)
    }

    /// Checks `f(1) = 1` and `f(x·s) = f(x)·f(s)` for every `x` and every
    /// distinguished generator `s`; since the generators generate, this
    /// implies `f` is a homomorphism.
    fn checked(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: Vec<usize>,
    ) -> Result<Self> {
        if images.iter().any(|&i| i >= target.order()) {
            bail!(Validation, "image out of range");
        }
        if images[source.identity()] != target.identity() {
            bail!(Validation, "identity is not mapped to the identity");
        }
        if !source.generates(source.generators()) {
            bail!(
                Validation,
                "distinguished generators do not generate the source"
            );
        }
        for x in 0..source.order() {
            for &s in source.generators() {
                if images[source.mul(x, s)] != target.mul(images[x], images[s]) {
                    bail!(
                        Validation,
                        "not multiplicative at ({}, {})",
                        source.format(x),
                        source.format(s)
                    );
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let images = (0..g.order()).collect();
        GroupHom {
            source: g.clone(),
            target: g,
            images,
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &i in &self.images {
            hit[i] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn kernel(&self) -> Vec<usize> {
        let id = self.target.identity();
        (0..self.images.len())
            .filter(|&a| self.images[a] == id)
            .collect()
    }
}

/// Reduction `ℤ/m → ℤ/d` for `d | m`.
pub fn cyclic_reduction(m: u64, d: u64) -> Result<GroupHom> {
    if d == 0 || !m.is_multiple_of(d) {
        bail!(Validation, "{d} does not divide {m}");
    }
    GroupHom::from_fn(Arc::new(cyclic(m)), Arc::new(cyclic(d)), |a| {
        (a as u64 % d) as usize
    })
}

/// Projection of a product group onto its left (`0`) or right (`1`) factor.
pub fn projection(g: Arc<FiniteGroup>, side: usize) -> Result<GroupHom> {
    let (a, b) = match g.factors() {
        Some((a, b)) => (a.clone(), b.clone()),
        None => bail!(Validation, "not a product group"),
    };
    let h = b.order();
    match side {
        0 => GroupHom::from_fn(g, Arc::new(a), |x| x / h),
        1 => GroupHom::from_fn(g, Arc::new(b), |x| x % h),
        _ => bail!(Validation, "side must be 0 or 1"),
    }
}

/// One step of the congruence filtration inside `G^{(n_max)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerCheck {
    pub k: u32,
    /// `[G_k : G_{k+1}]`
    pub index: u64,
    pub expected: u64,
    /// Whether the ℓ-th powers of `G_k` are exactly `G_{k+1}`.
    pub powers_fill_next: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorCheck {
    pub generators: (usize, usize),
    pub commutator: String,
    pub in_power_subgroup: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformReport {
    pub ell: u64,
    pub n_max: u32,
    pub order: u64,
    pub generated_by_a: bool,
    pub layers: Vec<LayerCheck>,
    pub commutators: Vec<CommutatorCheck>,
}

impl UniformReport {
    pub fn pass(&self) -> bool {
        self.generated_by_a
            && self
                .layers
                .iter()
                .all(|l| l.index == l.expected && l.powers_fill_next)
            && self.commutators.iter().all(|c| c.in_power_subgroup)
    }
}

/// Checks the uniform structure of the finite quotient `G^{(n_max)}` of
/// the principal congruence subgroup: each layer
/// `G_k = {g ≡ 1 mod ℓ^{k+1}}` has index `ℓ³` in the previous one and is
/// the set of ℓ-th powers of it, and commutators of the generators lie in
/// the subgroup generated by ℓ-th powers.
pub fn verify_uniform_quotients(ell: u64, n_max: u32, cap: u64) -> Result<UniformReport> {
    let g = sl2_level_quotient(ell, n_max, cap)?;
    let depth = |e: &Elem| -> u32 {
        // largest k with e ≡ 1 mod ℓ^{k+1}, capped at n_max
        let mut k = 0;
        while k < n_max {
            let m = checked_pow(ell, k + 2).unwrap();
            let one = 1 % m;
            if e[0] % m != one
                || !e[1].is_multiple_of(m)
                || !e[2].is_multiple_of(m)
                || e[3] % m != one
            {
                break;
            }
            k += 1;
        }
        k
    };
    let depths: Vec<u32> = g.elements().iter().map(depth).collect();
    let layer_size = |k: u32| depths.iter().filter(|&&d| d >= k).count() as u64;
    let mut layers = Vec::new();
    for k in 0..n_max {
        let members: Vec<usize> = (0..g.order()).filter(|&a| depths[a] >= k).collect();
        let powers: BTreeSet<usize> = members.iter().map(|&a| g.pow(a, ell)).collect();
        let next: BTreeSet<usize> = (0..g.order()).filter(|&a| depths[a] > k).collect();
        layers.push(LayerCheck {
            k,
            index: layer_size(k) / layer_size(k + 1),
            expected: ell * ell * ell,
            powers_fill_next: powers == next,
        });
    }
    let power_gens: BTreeSet<usize> = (0..g.order()).map(|a| g.pow(a, ell)).collect();
    let power_subgroup: BTreeSet<usize> = g
        .subgroup_generated(&power_gens.into_iter().collect::<Vec<_>>())
        .into_iter()
        .collect();
    let gens = g.generators().to_vec();
    let mut commutators = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let c = g.commutator(gens[i], gens[j]);
            commutators.push(CommutatorCheck {
                generators: (i + 1, j + 1),
                commutator: g.format(c),
                in_power_subgroup: power_subgroup.contains(&c),
            });
        }
    }
    Ok(UniformReport {
        ell,
        n_max,
        order: g.order() as u64,
        generated_by_a: true,
        layers,
        commutators,
    })
}
