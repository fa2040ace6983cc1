//! Twisted adjacency matrices, the polynomials
//! `h(u, ψ) = det(I − A_ψ u + (D − I)u²)`, Ihara zeta functions and the
//! identities relating them to spanning-tree counts.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::{Cyclo, CyclotomicRing};
use crate::error::{bail, Result};
use crate::graph::Multigraph;
use crate::group::Character;
use crate::matrix::{berkowitz_det, poly_matrix_det, Matrix};
use crate::ring::Ring;
use crate::series::Series;
use crate::voltage::{derived_graph, voltage_connectedness, VoltageAssignment};

/// Outcome of an exact identity check, with both sides rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: String,
    pub left: String,
    pub right: String,
    pub pass: bool,
}

/// `ψ(a)` as a power of `ζ_N`, `N` the exponent of the character group.
pub fn character_value(ring: &Arc<CyclotomicRing>, chi: &Character, elem: &[u64]) -> Cyclo {
    Cyclo::zeta_pow(ring, chi.value_exponent(&elem.to_vec()) as i64)
}

/// Ring `ℤ[ζ_N]` in which the characters of `va`'s group take values.
pub fn character_ring(chi: &Character) -> Arc<CyclotomicRing> {
    CyclotomicRing::new(chi.exponent)
}

/// `A_ψ[i][j] = Σ ψ(α(e))` over directed edges `e` from `v_i` to `v_j`.
pub fn twisted_adjacency(va: &VoltageAssignment, chi: &Character) -> Result<Matrix<Cyclo>> {
    let g = va.group();
    if g.cyclic_moduli().is_none() {
        bail!(
            Unsupported,
            "twisted adjacency matrices need an abelian voltage group"
        );
    }
    let x = va.graph();
    let ring = character_ring(chi);
    let mut a = Matrix::filled(x.vertex_count(), Cyclo::zero(&ring));
    for e in 0..x.directed_edge_count() {
        let value = character_value(&ring, chi, g.element(va.voltage(e)));
        let (i, j) = (x.origin(e), x.terminus(e));
        a[(i, j)] = a[(i, j)].plus(&value);
    }
    Ok(a)
}

fn degree_vector(x: &Multigraph) -> Vec<i64> {
    (0..x.vertex_count()).map(|v| x.valency(v) as i64).collect()
}

/// `det(I − A u + (D − I)u²)` for an integer adjacency matrix, low degree
/// first, by evaluation and interpolation.
pub fn h_polynomial_int(x: &Multigraph) -> Vec<BigInt> {
    let n = x.vertex_count();
    let a = x.adjacency_matrix();
    let d = degree_vector(x);
    let m = Matrix::from_fn(n, |i, j| {
        let delta = i64::from(i == j);
        vec![
            BigInt::from(delta),
            -a[(i, j)].clone(),
            BigInt::from(delta * (d[i] - 1)),
        ]
    });
    let mut h = poly_matrix_det(&m, 2 * n);
    h.resize(2 * n + 1, BigInt::zero());
    h
}

/// `h(u, ψ) = det(I − A_ψ u + (D − I)u²)`, low degree first.
pub fn h_polynomial(d: &[i64], a_psi: &Matrix<Cyclo>) -> Vec<Cyclo> {
    let n = a_psi.dim();
    let proto = a_psi[(0, 0)].clone();
    let cap = 2 * n;
    let m = Matrix::from_fn(n, |i, j| {
        let delta = i64::from(i == j);
        Series::from_coeffs(
            vec![
                proto.from_int_like(delta),
                a_psi[(i, j)].negated(),
                proto.from_int_like(delta * (d[i] - 1)),
            ],
            &proto,
            cap,
        )
    });
    let one = Series::constant(proto.one_like(), cap);
    berkowitz_det(&m, &one).coeffs().to_vec()
}

/// `h(u, ψ)` for a character of the voltage group.
pub fn h_twisted(va: &VoltageAssignment, chi: &Character) -> Result<Vec<Cyclo>> {
    let a = twisted_adjacency(va, chi)?;
    Ok(h_polynomial(&degree_vector(va.graph()), &a))
}

/// `h(1, ψ) = det(D − A_ψ)`.
pub fn h_at_one(va: &VoltageAssignment, chi: &Character) -> Result<Cyclo> {
    let a = twisted_adjacency(va, chi)?;
    let d = degree_vector(va.graph());
    let m = Matrix::from_fn(a.dim(), |i, j| {
        let diag = a[(0, 0)].from_int_like(if i == j { d[i] } else { 0 });
        diag.minus(&a[(i, j)])
    });
    let one = a[(0, 0)].one_like();
    Ok(berkowitz_det(&m, &one))
}

fn poly_mul<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let mut out = vec![a[0].zero_like(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j].add_product(x, y);
        }
    }
    out
}

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Renders an integer polynomial in `u`.
pub fn format_poly(p: &[BigInt]) -> String {
    let mut out = String::new();
    for (k, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &BigInt::zero();
        let abs = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coeff = if k > 0 && abs.is_one() {
            String::new()
        } else {
            format!("{abs}")
        };
        out.push_str(&match k {
            0 => coeff,
            1 => format!("{coeff}u"),
            _ => format!("{coeff}u^{k}"),
        });
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `Z_X(u)⁻¹ = (1 − u²)^{−χ(X)} h_X(u)` as an exact polynomial.
pub fn ihara_zeta_inverse(x: &Multigraph) -> Result<Vec<BigInt>> {
    if !x.is_connected() {
        bail!(Disconnected, "Ihara zeta function of a disconnected graph");
    }
    let mut p = h_polynomial_int(x);
    let chi = x.euler_characteristic();
    let one_minus_u2 = [BigInt::one(), BigInt::zero(), -BigInt::one()];
    if chi <= 0 {
        for _ in 0..(-chi) {
            p = poly_mul(&p, &one_minus_u2);
        }
    } else {
        for _ in 0..chi {
            // q(u)(1 − u²) = p(u): q_k = p_k + q_{k−2}
            let mut q: Vec<BigInt> = Vec::with_capacity(p.len());
            for k in 0..p.len() {
                let prev = if k >= 2 {
                    q[k - 2].clone()
                } else {
                    BigInt::zero()
                };
                q.push(&p[k] + prev);
            }
            let n = q.len();
            if n >= 2 && (!q[n - 1].is_zero() || !q[n - 2].is_zero()) {
                bail!(Precondition, "h_X(u) is not divisible by (1 - u^2)^{chi}");
            }
            q.truncate(n.saturating_sub(2).max(1));
            p = q;
        }
    }
    Ok(trim(p))
}

fn derivative_at_one(p: &[BigInt]) -> BigInt {
    p.iter().enumerate().map(|(k, c)| c * BigInt::from(k)).sum()
}

/// `h_X'(1) = −2χ(X)κ_X`.
pub fn hashimoto_check(x: &Multigraph) -> Result<IdentityReport> {
    let kappa = x.spanning_tree_count()?;
    let h = h_polynomial_int(x);
    let left = derivative_at_one(&h);
    let right = BigInt::from(-2 * x.euler_characteristic()) * &kappa;
    Ok(IdentityReport {
        identity: String::from("h'(1) = -2 chi kappa"),
        pass: left == right,
        left: format!("{left}"),
        right: format!("{right}"),
    })
}

fn require_connected_cover(va: &VoltageAssignment) -> Result<()> {
    if va.group().cyclic_moduli().is_none() {
        bail!(Unsupported, "only abelian voltage groups are supported");
    }
    if !voltage_connectedness(va)?.connected {
        bail!(Disconnected, "derived graph is disconnected");
    }
    Ok(())
}

/// `h_Y(u) = h_X(u)·∏_{ψ≠ψ₀} h(u, ψ)` for `Y = X(G, S, α)`, `G` abelian.
pub fn artin_product_check(va: &VoltageAssignment) -> Result<IdentityReport> {
    require_connected_cover(va)?;
    let y = derived_graph(va)?;
    let left = trim(h_polynomial_int(&y.graph));
    let chars = va.group().characters()?;
    let ring = character_ring(&chars[0]);
    let hx: Vec<Cyclo> = h_polynomial_int(va.graph())
        .iter()
        .map(|c| Cyclo::from_int(&ring, c.clone()))
        .collect();
    let mut prod = hx;
    for chi in chars.iter().filter(|c| !c.is_trivial()) {
        prod = poly_mul(&prod, &h_twisted(va, chi)?);
    }
    let mut integral = true;
    let right: Vec<BigInt> = prod
        .iter()
        .map(|c| match c.as_integer() {
            Some(v) => v.clone(),
            None => {
                integral = false;
                BigInt::zero()
            }
        })
        .collect();
    let right = trim(right);
    Ok(IdentityReport {
        identity: String::from("h_Y(u) = h_X(u) prod h(u, psi)"),
        pass: integral && left == right,
        left: format_poly(&left),
        right: if integral {
            format_poly(&right)
        } else {
            String::from("(not integral)")
        },
    })
}

/// `|G|·κ_Y = κ_X·∏_{ψ≠ψ₀} h(1, ψ)`; refused when `χ(X) = 0`.
pub fn class_number_check(va: &VoltageAssignment) -> Result<IdentityReport> {
    if va.graph().euler_characteristic() == 0 {
        bail!(
            Precondition,
            "class-number formula needs chi(X) != 0 (h_X'(1) = -2 chi kappa vanishes when chi = 0)"
        );
    }
    require_connected_cover(va)?;
    let y = derived_graph(va)?;
    let kappa_y = y.graph.spanning_tree_count()?;
    let kappa_x = va.graph().spanning_tree_count()?;
    let chars = va.group().characters()?;
    let ring = character_ring(&chars[0]);
    let mut prod = Cyclo::from_int(&ring, kappa_x);
    for chi in chars.iter().filter(|c| !c.is_trivial()) {
        prod = prod.times(&h_at_one(va, chi)?);
    }
    let left = BigInt::from(va.group().order()) * kappa_y;
    let right = prod.as_integer().cloned();
    Ok(IdentityReport {
        identity: String::from("|G| kappa_Y = kappa_X prod h(1, psi)"),
        pass: right.as_ref() == Some(&left),
        left: format!("{left}"),
        right: match right {
            Some(r) => format!("{r}"),
            None => format!("{prod} (not integral)"),
        },
    })
}
