//! Randomized checks with fixed seeds. Each suite draws at least 100 cases
//! and panics on the first counterexample.

#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use giwa_core::graph::Multigraph;
use giwa_core::group::{
    cyclic, dihedral_8, permutation_group, product, sl2_level_quotient, FiniteGroup,
};
use giwa_core::iwasawa::Tower;
use giwa_core::lfunction::{artin_product_check, class_number_check, hashimoto_check};
use giwa_core::ring::{ModInt, Ring};
use giwa_core::series::{
    binomial_series, mu_lambda, rho_mod, PadicTruncated, Series, Valuation, ZlValue,
};
use giwa_core::voltage::{derived_graph, voltage_connectedness, VoltageAssignment};

const CASES: usize = 100;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Any multigraph on `1..=max_v` vertices with up to `max_e` edges.
fn random_graph(r: &mut ChaCha8Rng, max_v: usize, max_e: usize) -> Multigraph {
    let n = r.gen_range(1..=max_v);
    let m = r.gen_range(0..=max_e);
    let pairs: Vec<(usize, usize)> = (0..m)
        .map(|_| (r.gen_range(0..n), r.gen_range(0..n)))
        .collect();
    Multigraph::from_edges(n, &pairs)
}

/// A connected multigraph with `χ ≠ 0`: a random spanning tree plus extra
/// edges (loops and parallels allowed), with `|E| ≠ |V|`.
fn random_connected(r: &mut ChaCha8Rng, max_v: usize, max_extra: usize) -> Multigraph {
    loop {
        let n = r.gen_range(1..=max_v);
        let mut pairs = Vec::new();
        for v in 1..n {
            let u = r.gen_range(0..v);
            pairs.push(if r.gen_bool(0.5) { (u, v) } else { (v, u) });
        }
        for _ in 0..r.gen_range(1..=max_extra) {
            pairs.push((r.gen_range(0..n), r.gen_range(0..n)));
        }
        pairs.shuffle(r);
        if pairs.len() != n {
            return Multigraph::from_edges(n, &pairs);
        }
    }
}

/// Spanning trees counted by trying every `(|V| − 1)`-subset of edges.
fn brute_force_trees(x: &Multigraph) -> u64 {
    let n = x.vertex_count();
    let pairs = x.undirected_pairs();
    let m = pairs.len();
    let mut count = 0;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                a = p[a];
            }
            a
        }
        let mut forest = true;
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    forest = false;
                    break;
                }
                parent[ra] = rb;
            }
        }
        count += forest as u64;
    }
    count
}

pub fn matrix_tree_matches_enumeration() {
    let mut r = rng(0x7265);
    let mut connected = 0;
    for _ in 0..CASES * 3 {
        let x = random_graph(&mut r, 6, 10);
        let brute = brute_force_trees(&x);
        match x.spanning_tree_count() {
            Ok(k) => {
                connected += 1;
                assert_eq!(k, BigInt::from(brute), "{}", x.describe());
            }
            Err(_) => assert_eq!(brute, 0, "{}", x.describe()),
        }
    }
    assert!(connected >= CASES, "only {connected} connected samples");
}

pub fn hashimoto_identity() {
    let mut r = rng(0x4a54);
    for _ in 0..CASES {
        let x = random_connected(&mut r, 6, 6);
        let report = hashimoto_check(&x).unwrap();
        assert!(report.pass, "{} {report:?}", x.describe());
    }
}

fn group_pool() -> Vec<Arc<FiniteGroup>> {
    let s4 = permutation_group(4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], 1 << 10).unwrap();
    let mut pool: Vec<Arc<FiniteGroup>> = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 16, 25, 27, 32, 64]
        .iter()
        .map(|&m| Arc::new(cyclic(m)))
        .collect();
    pool.push(Arc::new(product(cyclic(2), cyclic(2))));
    pool.push(Arc::new(product(cyclic(2), cyclic(4))));
    pool.push(Arc::new(product(cyclic(3), cyclic(3))));
    pool.push(Arc::new(product(cyclic(4), cyclic(8))));
    pool.push(Arc::new(product(dihedral_8(), cyclic(2))));
    pool.push(Arc::new(dihedral_8()));
    pool.push(Arc::new(s4));
    pool.push(Arc::new(sl2_level_quotient(3, 1, 1 << 10).unwrap()));
    pool
}

fn random_voltages(
    r: &mut ChaCha8Rng,
    x: &Arc<Multigraph>,
    g: &Arc<FiniteGroup>,
) -> VoltageAssignment {
    let values = (0..x.undirected_edge_count())
        .map(|_| r.gen_range(0..g.order()))
        .collect();
    VoltageAssignment::on_graph(x.clone(), g.clone(), values).unwrap()
}

pub fn connectedness_criterion_matches_component_search() {
    let pool = group_pool();
    let mut r = rng(0xc0ec);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..CASES * 3 {
        let x = Arc::new(random_connected(&mut r, 4, 3));
        let g = pool.choose(&mut r).unwrap();
        let va = random_voltages(&mut r, &x, g);
        let criterion = voltage_connectedness(&va).unwrap();
        let y = derived_graph(&va).unwrap();
        let (_, components) = y.graph.components();
        assert_eq!(
            criterion.connected,
            components == 1,
            "{} over {}",
            x.describe(),
            g.describe()
        );
        assert_eq!(components * criterion.subgroup_order, g.order());
        if criterion.connected {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes >= 30 && no >= 30, "{yes} connected, {no} disconnected");
}

fn abelian_pool() -> Vec<Arc<FiniteGroup>> {
    let mut pool: Vec<Arc<FiniteGroup>> = (2..=9).map(|m| Arc::new(cyclic(m))).collect();
    pool.push(Arc::new(product(cyclic(2), cyclic(2))));
    pool.push(Arc::new(product(cyclic(2), cyclic(4))));
    pool.push(Arc::new(product(cyclic(3), cyclic(3))));
    pool.push(Arc::new(product(cyclic(2), cyclic(3))));
    pool
}

fn connected_cover(
    r: &mut ChaCha8Rng,
    x: &Arc<Multigraph>,
    g: &Arc<FiniteGroup>,
) -> Option<VoltageAssignment> {
    (0..20)
        .map(|_| random_voltages(r, x, g))
        .find(|va| voltage_connectedness(va).unwrap().connected)
}

pub fn artin_and_class_number_identities() {
    let pool = abelian_pool();
    let mut r = rng(0xa271);
    let mut done = 0;
    while done < CASES {
        let x = Arc::new(random_connected(&mut r, 3, 3));
        let g = pool.choose(&mut r).unwrap();
        let Some(va) = connected_cover(&mut r, &x, g) else {
            continue;
        };
        let artin = artin_product_check(&va).unwrap();
        assert!(
            artin.pass,
            "{} over {}: {artin:?}",
            x.describe(),
            g.describe()
        );
        let class = class_number_check(&va).unwrap();
        assert!(
            class.pass,
            "{} over {}: {class:?}",
            x.describe(),
            g.describe()
        );
        done += 1;
    }
}

fn random_alpha(r: &mut ChaCha8Rng, m: usize) -> Vec<i64> {
    (0..m).map(|_| r.gen_range(-30..=30)).collect()
}

pub fn factorization_through_cap_32() {
    let mut r = rng(0xfac7);
    let mut done = 0;
    let mut attempts = 0;
    while done < CASES {
        attempts += 1;
        assert!(attempts < 50 * CASES, "too few admissible samples");
        let ell = *[2u64, 2, 3, 3, 5].choose(&mut r).unwrap();
        let x = Arc::new(random_connected(&mut r, 2, 3));
        let Ok(tower) = Tower::with_integers(
            x.clone(),
            ell,
            &random_alpha(&mut r, x.undirected_edge_count()),
        ) else {
            continue;
        };
        if tower.check_levels_connected().is_err() {
            continue;
        }
        let g = Arc::new(cyclic(ell));
        let Some(beta) = connected_cover(&mut r, &x, &g) else {
            continue;
        };
        match tower.factorization_check(&beta, 32) {
            Ok(report) => {
                assert!(report.pass(), "{} ell={ell}: {report:?}", x.describe());
                done += 1;
            }
            Err(giwa_core::Error::Disconnected(_)) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

fn random_series(
    r: &mut ChaCha8Rng,
    ell: u64,
    mu: u32,
    lambda: usize,
    cap: usize,
) -> Series<BigInt> {
    let l = BigInt::from(ell);
    let scale = l.pow(mu);
    let coeffs = (0..=cap)
        .map(|i| {
            let c = BigInt::from(r.gen_range(-50i64..=50));
            if i < lambda {
                &scale * &l * c
            } else if i == lambda {
                let mut u = r.gen_range(1..ell as i64 * 7);
                while u % ell as i64 == 0 {
                    u += 1;
                }
                &scale * (c * &l + u)
            } else {
                &scale * c
            }
        })
        .collect();
    Series::from_coeffs(coeffs, &BigInt::zero(), cap)
}

pub fn mu_lambda_additive_under_products() {
    let mut r = rng(0x3b1a);
    for _ in 0..CASES {
        let ell = *[2u64, 3, 5, 7].choose(&mut r).unwrap();
        let (m1, m2) = (r.gen_range(0..3), r.gen_range(0..3));
        let (l1, l2) = (r.gen_range(0..8), r.gen_range(0..8));
        let f = random_series(&mut r, ell, m1, l1, 20);
        let g = random_series(&mut r, ell, m2, l2, 20);
        let a = mu_lambda(&f, ell).unwrap();
        let b = mu_lambda(&g, ell).unwrap();
        let c = mu_lambda(&f.times(&g), ell).unwrap();
        assert_eq!((a.mu, a.lambda), (Valuation::integer(m1 as u64), l1));
        assert_eq!(c.mu, a.mu.add(&b.mu));
        assert_eq!(c.lambda, a.lambda + b.lambda);
        let modulus = ell.pow(6);
        let cm = mu_lambda(&f.to_mod(modulus).times(&g.to_mod(modulus)), ell).unwrap();
        assert_eq!((cm.mu, cm.lambda), (c.mu, c.lambda));
    }
}

pub fn rho_is_a_homomorphism() {
    let mut r = rng(0x2a0);
    let cap = 16;
    for _ in 0..CASES {
        let a = BigInt::from(r.gen_range(-(1i64 << 40)..(1i64 << 40)));
        let b = BigInt::from(r.gen_range(-(1i64 << 40)..(1i64 << 40)));
        let lhs = binomial_series(&a, cap).times(&binomial_series(&b, cap));
        assert_eq!(lhs, binomial_series(&(&a + &b), cap));
        assert_eq!(
            binomial_series(&a, cap).times(&binomial_series(&-&a, cap)),
            Series::constant(BigInt::one(), cap)
        );

        let ell = *[2u64, 3, 5].choose(&mut r).unwrap();
        let modulus = ell.pow(8);
        let pa = ZlValue::Truncated(PadicTruncated::new(ell, 40, &a));
        let pb = ZlValue::Truncated(PadicTruncated::new(ell, 40, &b));
        let pab = match (&pa, &pb) {
            (ZlValue::Truncated(x), ZlValue::Truncated(y)) => ZlValue::Truncated(x.add(y)),
            _ => unreachable!(),
        };
        let lhs = rho_mod(&pa, cap, modulus)
            .unwrap()
            .times(&rho_mod(&pb, cap, modulus).unwrap());
        assert_eq!(lhs, rho_mod(&pab, cap, modulus).unwrap());
        assert_eq!(
            rho_mod(&pa, cap, modulus).unwrap(),
            binomial_series(&a, cap).to_mod(modulus)
        );
    }
}

pub fn lambda_is_odd_for_odd_primes() {
    let mut r = rng(0x0dd);
    let mut done = 0;
    let mut attempts = 0;
    while done < CASES {
        attempts += 1;
        assert!(attempts < 50 * CASES, "too few admissible samples");
        let ell = *[3u64, 5, 7].choose(&mut r).unwrap();
        let x = Arc::new(random_connected(&mut r, 4, 4));
        let Ok(tower) = Tower::with_integers(
            x.clone(),
            ell,
            &random_alpha(&mut r, x.undirected_edge_count()),
        ) else {
            continue;
        };
        let Ok(data) = tower.iwasawa_invariants_with(32, 256, 12) else {
            continue;
        };
        assert!(data.lambda_f >= 1, "f(0) must vanish");
        if data.mu.is_zero() {
            assert_eq!(
                data.lambda % 2,
                1,
                "{} alpha={:?}: {data:?}",
                x.describe(),
                tower.alpha()
            );
            done += 1;
        }
    }
}

pub fn characteristic_series_vanishes_at_zero() {
    let mut r = rng(0xf00);
    for _ in 0..CASES {
        let x = Arc::new(random_connected(&mut r, 4, 4));
        let ell = *[2u64, 3, 5].choose(&mut r).unwrap();
        let tower = Tower::with_integers(
            x.clone(),
            ell,
            &random_alpha(&mut r, x.undirected_edge_count()),
        )
        .unwrap();
        let f = tower.characteristic_series_exact(6).unwrap();
        assert!(f.coeff(0).is_zero());
        let m = tower.characteristic_series_mod(6, 5).unwrap();
        assert_eq!(m, f.to_mod(ell.pow(5)));
    }
}

pub fn kida_formula_on_random_towers() {
    let mut r = rng(0x41da);
    let mut done = 0;
    let mut attempts = 0;
    while done < CASES {
        attempts += 1;
        assert!(attempts < 50 * CASES, "too few admissible samples");
        let ell = *[2u64, 2, 3].choose(&mut r).unwrap();
        let groups: Vec<FiniteGroup> = vec![
            cyclic(ell),
            cyclic(ell * ell),
            product(cyclic(ell), cyclic(ell)),
        ];
        let g = Arc::new(groups.choose(&mut r).unwrap().clone());
        let x = Arc::new(random_connected(&mut r, 2, 3));
        let Ok(tower) = Tower::with_integers(
            x.clone(),
            ell,
            &random_alpha(&mut r, x.undirected_edge_count()),
        ) else {
            continue;
        };
        let Some(beta) = connected_cover(&mut r, &x, &g) else {
            continue;
        };
        match tower.kida_verify(&beta) {
            Ok(report) if report.base.mu.is_zero() => {
                assert!(report.pass(), "{} ell={ell}: {report:?}", x.describe());
                done += 1;
            }
            Ok(report) => assert!(report.mu_equivalence, "{report:?}"),
            Err(giwa_core::Error::Disconnected(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

pub fn group_axioms() {
    let pool = group_pool();
    let mut r = rng(0x6a0);
    for _ in 0..CASES * 10 {
        let g = pool.choose(&mut r).unwrap();
        let n = g.order();
        let (a, b, c) = (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n));
        let e = g.identity();
        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        assert_eq!((g.mul(a, e), g.mul(e, a)), (a, a));
        assert_eq!((g.mul(a, g.inv(a)), g.mul(g.inv(a), a)), (e, e));
        assert_eq!(g.pow(a, g.element_order(a)), e);
        assert_eq!(n as u64 % g.element_order(a), 0);
        assert_eq!(g.parse(&g.format(a)).unwrap(), a);
    }
    for g in &pool {
        assert!(g.generates(g.generators()));
    }
    for _ in 0..CASES {
        let g = pool.choose(&mut r).unwrap();
        let small: Vec<usize> = (0..r.gen_range(0..3))
            .map(|_| r.gen_range(0..g.order()))
            .collect();
        let mut large = small.clone();
        large.push(r.gen_range(0..g.order()));
        let h = g.subgroup_generated(&small);
        assert_eq!(g.subgroup_generated(&h), h);
        let k = g.subgroup_generated(&large);
        assert!(h.iter().all(|a| k.contains(a)));
        assert_eq!(g.order() % h.len(), 0);
    }
}

pub fn modular_reduction_is_a_ring_map() {
    let mut r = rng(0x30d);
    for _ in 0..CASES {
        let m = r.gen_range(2u64..1 << 40);
        let (a, b) = (
            r.gen_range(-(1i64 << 50)..1 << 50),
            r.gen_range(-(1i64 << 50)..1 << 50),
        );
        let (x, y) = (ModInt::new(a as i128, m), ModInt::new(b as i128, m));
        assert_eq!(x.times(&y), ModInt::new(a as i128 * b as i128, m));
        assert_eq!(x.plus(&y), ModInt::new(a as i128 + b as i128, m));
        let mut acc = x;
        acc.add_product(&x, &y);
        assert_eq!(acc, ModInt::new(a as i128 + a as i128 * b as i128, m));
    }
}

/// Every suite, by name.
pub const ALL: [(&str, fn()); 12] = [
    (
        "matrix_tree_matches_enumeration",
        matrix_tree_matches_enumeration,
    ),
    ("hashimoto_identity", hashimoto_identity),
    (
        "connectedness_criterion_matches_component_search",
        connectedness_criterion_matches_component_search,
    ),
    (
        "artin_and_class_number_identities",
        artin_and_class_number_identities,
    ),
    ("factorization_through_cap_32", factorization_through_cap_32),
    (
        "mu_lambda_additive_under_products",
        mu_lambda_additive_under_products,
    ),
    ("rho_is_a_homomorphism", rho_is_a_homomorphism),
    ("lambda_is_odd_for_odd_primes", lambda_is_odd_for_odd_primes),
    (
        "characteristic_series_vanishes_at_zero",
        characteristic_series_vanishes_at_zero,
    ),
    (
        "kida_formula_on_random_towers",
        kida_formula_on_random_towers,
    ),
    ("group_axioms", group_axioms),
    (
        "modular_reduction_is_a_ring_map",
        modular_reduction_is_a_ring_map,
    ),
];
