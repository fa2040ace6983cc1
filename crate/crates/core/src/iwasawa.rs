//! ℤ_ℓ-towers of graphs: characteristic power series, Iwasawa invariants,
//! spanning-tree valuations along the tower, and the behaviour of λ under
//! pullback along ℓ-group covers.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::cyclotomic::Cyclo;
use crate::error::{bail, Result};
use crate::graph::{bouquet, Multigraph, Orientation};
use crate::group::{cyclic, product, sl2_level_quotient, Character, FiniteGroup};
use crate::lfunction::{character_ring, character_value};
use crate::matrix::{berkowitz_det, Matrix};
use crate::ring::{checked_pow, is_prime, ord_int, prime_power, word_precision, ModInt, Ring};
use crate::series::{binomial_series, mu_lambda, rho_mod, Series, Valuation, ZlValue};
use crate::voltage::{derived_graph, voltage_connectedness, DerivedGraph, VoltageAssignment};

/// Default number of coefficients tried first when reading off μ and λ.
pub const DEFAULT_CAP: usize = 64;
/// Largest cap the adaptive search grows to.
pub const MAX_CAP: usize = 2048;
/// Default bound on level-graph size for spanning-tree counts.
pub const DEFAULT_VERTEX_CAP: usize = 1000;

/// A base graph with an orientation and voltages in ℤ_ℓ.
#[derive(Debug, Clone)]
pub struct Tower {
    graph: Arc<Multigraph>,
    orientation: Orientation,
    ell: u64,
    alpha: Vec<ZlValue>,
}

impl Tower {
    /// Fails when `χ(X) = 0` or the data are inconsistent.
    pub fn new(
        graph: Arc<Multigraph>,
        orientation: Orientation,
        ell: u64,
        alpha: Vec<ZlValue>,
    ) -> Result<Self> {
        if !is_prime(ell) {
            bail!(Validation, "{ell} is not prime");
        }
        if alpha.len() != orientation.len() || orientation.len() * 2 != graph.directed_edge_count()
        {
            bail!(
                Validation,
                "{} voltages for {} oriented edges",
                alpha.len(),
                orientation.len()
            );
        }
        if let Some(ZlValue::Truncated(p)) = alpha
            .iter()
            .find(|a| matches!(a, ZlValue::Truncated(p) if p.ell() != ell))
        {
            bail!(
                Validation,
                "voltage is {}-adic, tower is {ell}-adic",
                p.ell()
            );
        }
        if graph.euler_characteristic() == 0 {
            bail!(
                Precondition,
                "towers are only considered over graphs with chi(X) != 0"
            );
        }
        Ok(Tower {
            graph,
            orientation,
            ell,
            alpha,
        })
    }

    /// Integer voltages on the graph's own orientation.
    pub fn with_integers(graph: Arc<Multigraph>, ell: u64, alpha: &[i64]) -> Result<Self> {
        let orientation = graph.orientation().clone();
        Tower::new(
            graph,
            orientation,
            ell,
            alpha.iter().map(|&a| ZlValue::exact(a)).collect(),
        )
    }

    pub fn graph(&self) -> &Arc<Multigraph> {
        &self.graph
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn alpha(&self) -> &[ZlValue] {
        &self.alpha
    }

    pub fn is_exact(&self) -> bool {
        self.alpha.iter().all(|a| a.as_exact().is_some())
    }

    fn exact_alpha(&self) -> Result<Vec<BigInt>> {
        match self
            .alpha
            .iter()
            .map(|a| a.as_exact().cloned())
            .collect::<Option<Vec<_>>>()
        {
            Some(v) => Ok(v),
            None => bail!(Unsupported, "exact series need integer voltages"),
        }
    }

    /// `f_{X,α}(T) = det(D − A_ρ)` with exact integer coefficients through `T^cap`.
    pub fn characteristic_series_exact(&self, cap: usize) -> Result<Series<BigInt>> {
        let alpha = self.exact_alpha()?;
        let forward: Vec<Series<BigInt>> = alpha.iter().map(|a| binomial_series(a, cap)).collect();
        let backward: Vec<Series<BigInt>> =
            alpha.iter().map(|a| binomial_series(&-a, cap)).collect();
        let proto = Series::constant(BigInt::from(1), cap);
        Ok(self.determinant(&forward, &backward, &proto))
    }

    /// `f_{X,α}(T)` with coefficients modulo `ℓ^precision`. Truncated
    /// voltages lower the precision to what their digits support.
    pub fn characteristic_series_mod(&self, cap: usize, precision: u32) -> Result<Series<ModInt>> {
        let precision = self.effective_precision(cap, precision)?;
        let modulus = checked_pow(self.ell, precision).unwrap();
        let mut forward = Vec::with_capacity(self.alpha.len());
        let mut backward = Vec::with_capacity(self.alpha.len());
        for a in &self.alpha {
            forward.push(rho_mod(a, cap, modulus)?);
            backward.push(rho_mod(&a.negated(), cap, modulus)?);
        }
        let proto = Series::constant(ModInt::new(1, modulus), cap);
        Ok(self.determinant(&forward, &backward, &proto))
    }

    fn effective_precision(&self, cap: usize, requested: u32) -> Result<u32> {
        let mut loss = 0;
        let mut p = self.ell as usize;
        while p <= cap {
            loss += (cap / p) as u32;
            p *= self.ell as usize;
        }
        let mut precision = requested;
        for a in &self.alpha {
            if let ZlValue::Truncated(t) = a {
                precision = precision.min(t.precision().saturating_sub(loss));
            }
        }
        if precision == 0 {
            bail!(
                Precision,
                "voltages carry too few digits for {cap} series coefficients"
            );
        }
        Ok(precision)
    }

    /// `det(D − A)` where `A[i][j]` sums `w(s)` over `s ∈ S` from `v_i` to
    /// `v_j` and `w̄(s)` over `s ∈ S` from `v_j` to `v_i`.
    fn determinant<R: Ring>(
        &self,
        w: &[Series<R>],
        w_bar: &[Series<R>],
        proto: &Series<R>,
    ) -> Series<R> {
        let x = &self.graph;
        let n = x.vertex_count();
        let mut m = Matrix::filled(n, proto.zero_like());
        for v in 0..n {
            m[(v, v)] = proto.from_int_like(x.valency(v) as i64);
        }
        for (k, &s) in self.orientation.edges().iter().enumerate() {
            let (i, j) = (x.origin(s), x.terminus(s));
            m[(i, j)] = m[(i, j)].minus(&w[k]);
            m[(j, i)] = m[(j, i)].minus(&w_bar[k]);
        }
        berkowitz_det(&m, &proto.one_like())
    }

    /// Voltages reduced to `ℤ/ℓⁿ`.
    pub fn level_assignment(&self, n: u32) -> Result<VoltageAssignment> {
        let order = match checked_pow(self.ell, n) {
            Some(o) if o <= 1 << 32 => o,
            _ => bail!(Resource, "level {n} is too large"),
        };
        let values = self
            .alpha
            .iter()
            .map(|a| a.reduce(self.ell, n).map(|r| r as usize))
            .collect::<Result<Vec<_>>>()?;
        VoltageAssignment::new(
            self.graph.clone(),
            self.orientation.clone(),
            Arc::new(cyclic(order)),
            values,
        )
    }

    /// `X_n = X(ℤ/ℓⁿ, S, α mod ℓⁿ)`, required to be connected.
    pub fn tower_level(&self, n: u32) -> Result<DerivedGraph> {
        let va = self.level_assignment(n)?;
        let report = voltage_connectedness(&va)?;
        if !report.connected {
            bail!(
                Disconnected,
                "level {n}: loop voltages generate a subgroup of order {} in Z/{}",
                report.subgroup_order,
                va.group().order()
            );
        }
        derived_graph(&va)
    }

    /// All levels are connected iff level 1 is: a subset of ℤ_ℓ generating
    /// ℤ/ℓ generates every ℤ/ℓⁿ.
    pub fn check_levels_connected(&self) -> Result<()> {
        if !self.graph.is_connected() {
            bail!(Disconnected, "base graph is disconnected");
        }
        self.tower_level(1).map(|_| ())
    }

    /// μ and λ of the tower from `f_{X,α}`, growing the cap from 64 to 2048
    /// until a coefficient prime to ℓ appears.
    pub fn iwasawa_invariants(&self) -> Result<IwasawaData> {
        self.iwasawa_invariants_with(DEFAULT_CAP, MAX_CAP, word_precision(self.ell))
    }

    pub fn iwasawa_invariants_with(
        &self,
        initial_cap: usize,
        max_cap: usize,
        precision: u32,
    ) -> Result<IwasawaData> {
        self.check_levels_connected()?;
        let mut cap = initial_cap.max(2);
        loop {
            let f = self.characteristic_series_mod(cap, precision)?;
            let modulus_precision =
                ord_int(&BigInt::from(f.coeff(0).modulus()), self.ell).unwrap() as u32;
            match mu_lambda(&f, self.ell) {
                Ok(ml) if ml.certified || cap >= max_cap => {
                    if ml.lambda == 0 {
                        bail!(
                            Precondition,
                            "characteristic series has a nonzero constant term"
                        );
                    }
                    return Ok(IwasawaData {
                        mu: ml.mu,
                        lambda: ml.lambda - 1,
                        lambda_f: ml.lambda,
                        cap,
                        precision: modulus_precision,
                        certified: ml.certified,
                        nu: None,
                        n0: None,
                    });
                }
                Err(e) if cap >= max_cap => {
                    return Err(crate::Error::Precision(format!(
                        "mu possibly positive beyond {}^{modulus_precision}: {e}",
                        self.ell
                    )))
                }
                _ => cap = (cap * 2).min(max_cap),
            }
        }
    }

    /// `κ(X_n)` and `ord_ℓ κ(X_n)` for `n = 0..=n_max`.
    pub fn kappa_sequence(&self, n_max: u32, vertex_cap: usize) -> Result<Vec<KappaEntry>> {
        let mut out = Vec::new();
        for n in 0..=n_max {
            let size = checked_pow(self.ell, n)
                .and_then(|o| (o as usize).checked_mul(self.graph.vertex_count()))
                .unwrap_or(usize::MAX);
            if size > vertex_cap {
                bail!(
                    Resource,
                    "level {n} has {size} vertices, cap is {vertex_cap}"
                );
            }
            let level = self.tower_level(n)?;
            out.push(KappaEntry::new(
                n,
                level.graph.vertex_count(),
                level.graph.spanning_tree_count()?,
                self.ell,
            ));
        }
        Ok(out)
    }

    /// `κ` along the pullback of the tower to `Y = X(G, S, β)`, with level
    /// `n` realised as `X(G × ℤ/ℓⁿ, S, γ)`.
    pub fn pullback_kappa_sequence(
        &self,
        beta: &VoltageAssignment,
        n_max: u32,
        vertex_cap: usize,
    ) -> Result<Vec<KappaEntry>> {
        let mut out = Vec::new();
        for n in 0..=n_max {
            let size = checked_pow(self.ell, n)
                .and_then(|o| {
                    (o as usize).checked_mul(self.graph.vertex_count() * beta.group().order())
                })
                .unwrap_or(usize::MAX);
            if size > vertex_cap {
                bail!(
                    Resource,
                    "pullback level {n} has {size} vertices, cap is {vertex_cap}"
                );
            }
            let gamma = self.combined_level(beta, n)?;
            let report = voltage_connectedness(&gamma)?;
            if !report.connected {
                bail!(
                    Disconnected,
                    "pullback level {n}: loop voltages generate a subgroup of order {} in a group of order {}",
                    report.subgroup_order,
                    gamma.group().order()
                );
            }
            let level = derived_graph(&gamma)?;
            out.push(KappaEntry::new(
                n,
                size,
                level.graph.spanning_tree_count()?,
                self.ell,
            ));
        }
        Ok(out)
    }

    /// `γ = (β, α mod ℓⁿ) : S → G × ℤ/ℓⁿ`; its derived graph is level `n`
    /// of the pullback of the tower along `X(G, S, β) → X`.
    pub fn combined_level(&self, beta: &VoltageAssignment, n: u32) -> Result<VoltageAssignment> {
        self.check_compatible(beta)?;
        let level = self.level_assignment(n)?;
        let g = Arc::new(product((**beta.group()).clone(), (**level.group()).clone()));
        let values = beta
            .values()
            .iter()
            .zip(level.values())
            .map(|(&b, &a)| g.pair(b, a))
            .collect();
        VoltageAssignment::new(self.graph.clone(), self.orientation.clone(), g, values)
    }

    fn check_compatible(&self, beta: &VoltageAssignment) -> Result<()> {
        if **beta.graph() != *self.graph || *beta.orientation() != self.orientation {
            bail!(
                Validation,
                "the finite voltage assignment lives on a different graph or orientation"
            );
        }
        Ok(())
    }

    /// The tower `(Y, S_Y, α∘p)` over `Y = X(G, S, β)`, with `S_Y = p⁻¹(S)`.
    pub fn pullback(&self, beta: &VoltageAssignment) -> Result<(Tower, DerivedGraph)> {
        self.check_compatible(beta)?;
        let y = derived_graph(beta)?;
        let n = y.group_order;
        let mut alpha = Vec::with_capacity(self.alpha.len() * n);
        for a in &self.alpha {
            for _ in 0..n {
                alpha.push(a.clone());
            }
        }
        let tower = Tower::new(
            y.graph.clone(),
            y.graph.orientation().clone(),
            self.ell,
            alpha,
        )?;
        Ok((tower, y))
    }

    /// `f_ψ(T) = det(D − A_{ψ,ρ})` with entries `Σ ψ(β(s))ρ(α(s))` and
    /// `Σ ψ(−β(s))ρ(−α(s))`, for an abelian `G`.
    pub fn twisted_characteristic_series(
        &self,
        beta: &VoltageAssignment,
        chi: &Character,
        cap: usize,
    ) -> Result<Series<Cyclo>> {
        self.check_compatible(beta)?;
        let g = beta.group();
        if g.cyclic_moduli().is_none() {
            bail!(Unsupported, "twisted series need an abelian group");
        }
        let alpha = self.exact_alpha()?;
        let ring = character_ring(chi);
        let lift = |s: &Series<BigInt>, c: &Cyclo| -> Series<Cyclo> {
            s.map(|a| c.times(&Cyclo::from_int(&ring, a.clone())))
        };
        let mut forward = Vec::with_capacity(alpha.len());
        let mut backward = Vec::with_capacity(alpha.len());
        for (k, a) in alpha.iter().enumerate() {
            let b = beta.values()[k];
            let psi = character_value(&ring, chi, g.element(b));
            let psi_bar = character_value(&ring, chi, g.element(g.inv(b)));
            forward.push(lift(&binomial_series(a, cap), &psi));
            backward.push(lift(&binomial_series(&-a, cap), &psi_bar));
        }
        let proto = Series::constant(Cyclo::from_int(&ring, 1), cap);
        Ok(self.determinant(&forward, &backward, &proto))
    }

    /// Connectivity of the pullback tower, certified at level 1 (enough for
    /// an ℓ-group `G`: a subset generating `G × ℤ/ℓ` modulo the Frattini
    /// subgroup generates `G × ℤ/ℓⁿ`) and confirmed directly at `levels`.
    pub fn pullback_connectivity(
        &self,
        beta: &VoltageAssignment,
        levels: &[u32],
    ) -> Result<Vec<(u32, bool)>> {
        levels
            .iter()
            .map(|&n| {
                Ok((
                    n,
                    voltage_connectedness(&self.combined_level(beta, n)?)?.connected,
                ))
            })
            .collect()
    }

    /// Compares the invariants of the tower with those of its pullback
    /// along `Y = X(G, S, β) → X` for an ℓ-group `G`.
    pub fn kida_verify(&self, beta: &VoltageAssignment) -> Result<KidaReport> {
        self.check_compatible(beta)?;
        let order = beta.group().order() as u64;
        if order > 1 && prime_power(order).map(|p| p.0) != Some(self.ell) {
            bail!(Precondition, "|G| = {order} is not a power of {}", self.ell);
        }
        if !voltage_connectedness(beta)?.connected {
            bail!(Disconnected, "X(G, S, beta) is disconnected");
        }
        let connectivity = self.pullback_connectivity(beta, &[1, 2])?;
        if let Some((n, _)) = connectivity.iter().find(|c| !c.1) {
            bail!(Disconnected, "pullback tower is disconnected at level {n}");
        }
        let base = self.iwasawa_invariants()?;
        let (upper_tower, _) = self.pullback(beta)?;
        let upper = upper_tower.iwasawa_invariants()?;
        let mu_equivalence = base.mu.is_zero() == upper.mu.is_zero();
        let formula = base
            .mu
            .is_zero()
            .then(|| (upper.lambda as u64 + 1, order * (base.lambda as u64 + 1)));
        let factorization = match beta.group().cyclic_moduli() {
            Some(m) if m == [self.ell] && self.is_exact() => {
                Some(self.factorization_check(beta, 32)?.pass())
            }
            _ => None,
        };
        Ok(KidaReport {
            degree: order,
            base,
            upper,
            mu_equivalence,
            formula,
            factorization,
            connectivity,
        })
    }

    /// `f_{Y,α∘p}(T) = ∏_ψ f_ψ(T)` through `T^cap` for a cyclic cover of
    /// degree ℓ, plus the congruences `f_ψ ≡ f_{X,α}` modulo `(ζ − 1)`.
    pub fn factorization_check(
        &self,
        beta: &VoltageAssignment,
        cap: usize,
    ) -> Result<FactorizationReport> {
        self.check_compatible(beta)?;
        if beta.group().cyclic_moduli().as_deref() != Some(&[self.ell][..]) {
            bail!(
                Precondition,
                "factorization is checked for cyclic covers of degree {}",
                self.ell
            );
        }
        if !voltage_connectedness(beta)?.connected {
            bail!(Disconnected, "X(G, S, beta) is disconnected");
        }
        if let Some((n, _)) = self
            .pullback_connectivity(beta, &[1, 2])?
            .iter()
            .find(|c| !c.1)
        {
            bail!(Disconnected, "pullback tower is disconnected at level {n}");
        }
        let (upper, _) = self.pullback(beta)?;
        let left = upper.characteristic_series_exact(cap)?;
        let base = self.characteristic_series_exact(cap)?;
        let chars = beta.group().characters()?;
        let ring = character_ring(&chars[0]);
        let mut product_series = Series::constant(Cyclo::from_int(&ring, 1), cap);
        let mut residues_agree = true;
        for chi in &chars {
            let f_psi = self.twisted_characteristic_series(beta, chi, cap)?;
            residues_agree &= f_psi
                .coeffs()
                .iter()
                .zip(base.coeffs())
                .all(|(a, b)| BigInt::from(a.residue(self.ell)) == b.modulo(self.ell));
            product_series = product_series.times(&f_psi);
        }
        let mut integral = true;
        let mut matches = true;
        for (c, l) in product_series.coeffs().iter().zip(left.coeffs()) {
            match c.as_integer() {
                Some(v) => matches &= v == l,
                None => integral = false,
            }
        }
        Ok(FactorizationReport {
            cap,
            integral,
            matches: integral && matches,
            residues_agree,
        })
    }
}

trait Modulo {
    fn modulo(&self, ell: u64) -> BigInt;
}

impl Modulo for BigInt {
    fn modulo(&self, ell: u64) -> BigInt {
        let l = BigInt::from(ell);
        ((self % &l) + &l) % &l
    }
}

/// μ and λ of a tower, with the truncation used to find them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IwasawaData {
    pub mu: Valuation,
    /// `λ = λ(f) − 1`
    pub lambda: usize,
    /// Index of the first coefficient attaining μ.
    pub lambda_f: usize,
    pub cap: usize,
    /// Residues were computed modulo `ℓ^precision`.
    pub precision: u32,
    /// False when only a positive μ was seen up to the cap: the true μ may
    /// be smaller (and λ different) beyond the truncation.
    pub certified: bool,
    /// Fitted from `ord_ℓ κ_n`; never derived from the series.
    pub nu: Option<i64>,
    pub n0: Option<u32>,
}

impl IwasawaData {
    /// Records `ν` and `n₀` from a fit, provided it agrees with μ and λ.
    pub fn with_fit(mut self, fit: &IwasawaFit) -> Result<Self> {
        if Valuation::integer(fit.mu.max(0) as u64) != self.mu
            || fit.mu < 0
            || fit.lambda != self.lambda as i64
        {
            bail!(
                NotStabilized,
                "kappa valuations fit mu = {}, lambda = {}, series gives mu = {}, lambda = {}",
                fit.mu,
                fit.lambda,
                self.mu,
                self.lambda
            );
        }
        self.nu = Some(fit.nu);
        self.n0 = Some(fit.n0);
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaEntry {
    pub n: u32,
    pub vertices: usize,
    pub kappa: BigInt,
    pub ord: u64,
}

impl KappaEntry {
    pub fn new(n: u32, vertices: usize, kappa: BigInt, ell: u64) -> Self {
        let ord = ord_int(&kappa, ell).unwrap_or(0);
        KappaEntry {
            n,
            vertices,
            kappa,
            ord,
        }
    }
}

/// Exact fit `ord = μℓⁿ + λn + ν` valid for all `n ≥ n₀` in the data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IwasawaFit {
    pub mu: i64,
    pub lambda: i64,
    pub nu: i64,
    pub n0: u32,
}

/// Fits `μℓⁿ + λn + ν` to `ords[i]` at `n = start + i`: the last three
/// values determine the fit, which is then extended backwards as far as it
/// holds. Fails when the last three values admit no fit with integral
/// `μ ≥ 0`.
pub fn fit_iwasawa(start: u32, ords: &[i64], ell: u64) -> Result<IwasawaFit> {
    if ords.len() < 3 {
        bail!(
            Validation,
            "at least three values are needed to fit mu, lambda, nu"
        );
    }
    let pow = |n: u32| -> Result<i128> {
        match checked_pow(ell, n) {
            Some(p) => Ok(p as i128),
            None => bail!(Resource, "{ell}^{n} overflows"),
        }
    };
    let k = ords.len() - 3;
    let n = start + k as u32;
    let (a0, a1, a2) = (ords[k] as i128, ords[k + 1] as i128, ords[k + 2] as i128);
    let second = a2 - 2 * a1 + a0;
    let l = ell as i128;
    let scale = pow(n)? * (l - 1) * (l - 1);
    if second < 0 || second % scale != 0 {
        bail!(
            NotStabilized,
            "values {:?} admit no fit mu*{ell}^n + lambda*n + nu with integral mu >= 0",
            &ords[k..]
        );
    }
    let mu = second / scale;
    let lambda = (a1 - a0) - mu * pow(n)? * (l - 1);
    let nu = a0 - mu * pow(n)? - lambda * n as i128;
    let mut first = k;
    while first > 0 {
        let m = start + first as u32 - 1;
        if mu * pow(m)? + lambda * m as i128 + nu != ords[first - 1] as i128 {
            break;
        }
        first -= 1;
    }
    Ok(IwasawaFit {
        mu: mu as i64,
        lambda: lambda as i64,
        nu: nu as i64,
        n0: start + first as u32,
    })
}

#[derive(Debug, Clone)]
pub struct KidaReport {
    /// `[Y : X] = |G|`
    pub degree: u64,
    pub base: IwasawaData,
    pub upper: IwasawaData,
    /// `μ_X = 0 ⇔ μ_Y = 0`
    pub mu_equivalence: bool,
    /// `(λ_Y + 1, [Y:X](λ_X + 1))`, present when `μ_X = 0`.
    pub formula: Option<(u64, u64)>,
    /// Outcome of the character factorization, for cyclic degree-ℓ covers.
    pub factorization: Option<bool>,
    /// Pullback-tower connectivity by level.
    pub connectivity: Vec<(u32, bool)>,
}

impl KidaReport {
    pub fn pass(&self) -> bool {
        self.mu_equivalence
            && self.formula.is_none_or(|(l, r)| l == r)
            && self.factorization != Some(false)
            && self.base.certified
            && self.upper.certified
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub cap: usize,
    /// The product over characters has rational integer coefficients.
    pub integral: bool,
    pub matches: bool,
    /// Every `f_ψ` reduces to `f_{X,α}` modulo `ζ − 1`.
    pub residues_agree: bool,
}

impl FactorizationReport {
    pub fn pass(&self) -> bool {
        self.integral && self.matches && self.residues_agree
    }
}

/// The tower over `B₄` with voltages `0, 0, 0, 1` in ℤ_ℓ, pulled back along
/// `Y_n = X(G^{(n)}, S, s_i ↦ A_i, s₄ ↦ 1)` where `G^{(n)}` is the level-`n`
/// congruence quotient of SL₂(ℤ_ℓ).
#[derive(Debug, Clone)]
pub struct UniformTowerReport {
    pub ell: u64,
    pub n: u32,
    pub base_series: Series<BigInt>,
    pub base: IwasawaData,
    pub vertices: usize,
    pub level: IwasawaData,
    /// `ℓ^{3n}(λ + 1) − 1`
    pub expected_lambda: u64,
    /// Connectivity of `Y_{n,m}` for `m = 0..=m_max`.
    pub connectivity: Vec<(u32, bool)>,
}

impl UniformTowerReport {
    pub fn pass(&self) -> bool {
        self.base.mu.is_zero()
            && self.level.mu.is_zero()
            && self.level.certified
            && self.level.lambda as u64 == self.expected_lambda
            && self.connectivity.iter().all(|c| c.1)
    }
}

/// `B₄` with `s₁, s₂, s₃ ↦ A₁, A₂, A₃` and `s₄ ↦ 1` in `G^{(n)}`.
pub fn uniform_example_cover(ell: u64, n: u32, order_cap: u64) -> Result<VoltageAssignment> {
    let g: Arc<FiniteGroup> = Arc::new(sl2_level_quotient(ell, n, order_cap)?);
    let x = Arc::new(bouquet(4));
    let id = g.identity();
    let gens = g.generators();
    let values = if gens.is_empty() {
        vec![id; 4]
    } else {
        vec![gens[0], gens[1], gens[2], id]
    };
    VoltageAssignment::on_graph(x, g, values)
}

pub fn uniform_tower_check(
    ell: u64,
    n: u32,
    m_max: u32,
    order_cap: u64,
) -> Result<UniformTowerReport> {
    let cover = uniform_example_cover(ell, n, order_cap)?;
    let tower = Tower::with_integers(cover.graph().clone(), ell, &[0, 0, 0, 1])?;
    let base_series = tower.characteristic_series_exact(12)?;
    let base = tower.iwasawa_invariants()?;
    let connectivity = (0..=m_max)
        .map(|m| {
            Ok((
                m,
                voltage_connectedness(&tower.combined_level(&cover, m)?)?.connected,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some((m, _)) = connectivity.iter().find(|c| !c.1) {
        bail!(Disconnected, "Y_({n},{m}) is disconnected");
    }
    let (upper, y) = tower.pullback(&cover)?;
    let level = upper.iwasawa_invariants()?;
    let expected_lambda = checked_pow(ell, 3 * n).unwrap() * (base.lambda as u64 + 1) - 1;
    Ok(UniformTowerReport {
        ell,
        n,
        base_series,
        base,
        vertices: y.graph.vertex_count(),
        level,
        expected_lambda,
        connectivity,
    })
}

/// Renders a tower description for diagnostics.
pub fn describe_tower(t: &Tower) -> String {
    let alpha: Vec<String> = t
        .alpha
        .iter()
        .map(|a| match a {
            ZlValue::Exact(v) => format!("{v}"),
            ZlValue::Truncated(p) => format!("{} mod {}^{}", p.residue(), p.ell(), p.precision()),
        })
        .collect();
    format!(
        "{}; ell = {}; alpha = [{}]",
        t.graph.describe(),
        t.ell,
        alpha.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::dihedral_8;
    use crate::series::PadicTruncated;
    use num_traits::Zero;

    fn b3_tower(ell: u64, alpha: &[i64]) -> Tower {
        Tower::with_integers(Arc::new(bouquet(3)), ell, alpha).unwrap()
    }

    fn ints(s: &Series<BigInt>, k: usize) -> Vec<i64> {
        s.coeffs()[..k]
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn bouquet_series() {
        let t = b3_tower(2, &[1, 1, 1]);
        let f = t.characteristic_series_exact(8).unwrap();
        assert_eq!(ints(&f, 5), [0, 0, -3, 3, -3]);
        let d = t.iwasawa_invariants().unwrap();
        assert_eq!(
            (d.mu, d.lambda, d.certified),
            (Valuation::integer(0), 1, true)
        );
        let t = b3_tower(3, &[1, 4, 20]);
        let d = t.iwasawa_invariants().unwrap();
        assert_eq!((d.mu, d.lambda), (Valuation::integer(0), 5));
    }

    #[test]
    fn four_loop_series() {
        let t = Tower::with_integers(Arc::new(bouquet(4)), 3, &[0, 0, 0, 1]).unwrap();
        let f = t.characteristic_series_exact(10).unwrap();
        assert_eq!(ints(&f, 11), [0, 0, -1, 1, -1, 1, -1, 1, -1, 1, -1]);
    }

    #[test]
    fn modular_matches_exact() {
        let t = b3_tower(3, &[1, 4, 20]);
        let exact = t.characteristic_series_exact(30).unwrap();
        let m = t.characteristic_series_mod(30, 10).unwrap();
        assert_eq!(exact.to_mod(3u64.pow(10)), m);
    }

    #[test]
    fn truncated_voltages() {
        let exact = b3_tower(3, &[1, 4, 20]);
        let alpha = [1i64, 4, 20]
            .iter()
            .map(|&a| ZlValue::Truncated(PadicTruncated::new(3, 60, &BigInt::from(a))))
            .collect();
        let g = Arc::new(bouquet(3));
        let t = Tower::new(g.clone(), g.orientation().clone(), 3, alpha).unwrap();
        assert_eq!(
            t.iwasawa_invariants().unwrap(),
            exact.iwasawa_invariants().unwrap()
        );
        assert_eq!(
            t.level_assignment(2).unwrap().values(),
            exact.level_assignment(2).unwrap().values()
        );
    }

    #[test]
    fn levels_and_kappa() {
        let t = b3_tower(3, &[1, 4, 20]);
        let seq = t.kappa_sequence(3, 1000).unwrap();
        let ords: Vec<i64> = seq.iter().map(|e| e.ord as i64).collect();
        assert_eq!(&ords[1..], &[3, 8, 13]);
        assert_eq!(seq[0].kappa, BigInt::from(1));
        let fit = fit_iwasawa(1, &ords[1..], 3).unwrap();
        assert_eq!((fit.mu, fit.lambda, fit.nu, fit.n0), (0, 5, -2, 1));
        assert!(t.kappa_sequence(3, 20).is_err());
    }

    #[test]
    fn disconnected_level() {
        let x = Arc::new(Multigraph::from_edges(2, &[(1, 0), (1, 0), (0, 1), (0, 1)]));
        let t = Tower::with_integers(x, 2, &[1, 1, 1, 1]).unwrap();
        assert!(t.tower_level(0).is_ok());
        assert!(matches!(
            t.tower_level(1),
            Err(crate::Error::Disconnected(_))
        ));
        assert!(t.iwasawa_invariants().is_err());
    }

    #[test]
    fn euler_characteristic_zero_is_refused() {
        assert!(Tower::with_integers(Arc::new(bouquet(1)), 3, &[1]).is_err());
    }

    #[test]
    fn fitting() {
        assert_eq!(
            fit_iwasawa(2, &[48, 63, 78], 2).unwrap(),
            IwasawaFit {
                mu: 0,
                lambda: 15,
                nu: 18,
                n0: 2
            }
        );
        assert_eq!(
            fit_iwasawa(0, &[4, 4, 4], 3).unwrap(),
            IwasawaFit {
                mu: 0,
                lambda: 0,
                nu: 4,
                n0: 0
            }
        );
        // μ = 1, λ = 2, ν = 1 over ℓ = 3 with one early outlier
        let seq: Vec<i64> = (0..6).map(|n| 3i64.pow(n) + 2 * n as i64 + 1).collect();
        let mut noisy = seq.clone();
        noisy[0] = 99;
        assert_eq!(
            fit_iwasawa(0, &noisy, 3).unwrap(),
            IwasawaFit {
                mu: 1,
                lambda: 2,
                nu: 1,
                n0: 1
            }
        );
        assert!(matches!(
            fit_iwasawa(0, &[0, 5, 6], 3),
            Err(crate::Error::NotStabilized(_))
        ));
        assert!(fit_iwasawa(0, &[1, 2], 3).is_err());
    }

    #[test]
    fn kida_dihedral() {
        let t = b3_tower(2, &[1, 1, 1]);
        let d = Arc::new(dihedral_8());
        let beta = VoltageAssignment::on_graph(
            t.graph().clone(),
            d.clone(),
            vec![
                d.parse("(1 2 3 4)").unwrap(),
                d.parse("(1 4)(2 3)").unwrap(),
                d.identity(),
            ],
        )
        .unwrap();
        let r = t.kida_verify(&beta).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.upper.lambda, 15);
        assert_eq!(r.formula, Some((16, 16)));
        assert_eq!(r.factorization, None);
    }

    #[test]
    fn pullback_kappa_matches_direct_levels() {
        let t = b3_tower(2, &[1, 1, 1]);
        let d = Arc::new(dihedral_8());
        let beta = VoltageAssignment::on_graph(
            t.graph().clone(),
            d.clone(),
            vec![d.generators()[0], d.generators()[1], d.identity()],
        )
        .unwrap();
        let combined = t.pullback_kappa_sequence(&beta, 2, 100).unwrap();
        let (upper, _) = t.pullback(&beta).unwrap();
        let direct = upper.kappa_sequence(2, 100).unwrap();
        assert_eq!(combined, direct);
        assert_eq!(combined[0].kappa, BigInt::from(256 * 9));
        assert!(t.pullback_kappa_sequence(&beta, 3, 40).is_err());
    }

    #[test]
    fn kida_trivial_group() {
        let t = b3_tower(3, &[1, 4, 20]);
        let beta = VoltageAssignment::on_graph(t.graph().clone(), Arc::new(cyclic(1)), vec![0; 3])
            .unwrap();
        let r = t.kida_verify(&beta).unwrap();
        assert!(r.pass());
        assert_eq!((r.degree, r.upper.lambda), (1, 5));
    }

    #[test]
    fn factorization_cyclic() {
        let t = b3_tower(3, &[1, 4, 20]);
        let beta =
            VoltageAssignment::on_graph(t.graph().clone(), Arc::new(cyclic(3)), vec![1, 0, 0])
                .unwrap();
        let r = t.factorization_check(&beta, 24).unwrap();
        assert!(r.pass(), "{r:?}");
        let trivial =
            VoltageAssignment::on_graph(t.graph().clone(), Arc::new(cyclic(3)), vec![0, 0, 0])
                .unwrap();
        assert!(t.factorization_check(&trivial, 24).is_err());
        let chars = beta.group().characters().unwrap();
        let f0 = t
            .twisted_characteristic_series(&beta, &chars[0], 24)
            .unwrap();
        let f = t.characteristic_series_exact(24).unwrap();
        assert!(f0
            .coeffs()
            .iter()
            .zip(f.coeffs())
            .all(|(a, b)| a.as_integer() == Some(b)));
    }

    #[test]
    fn wrong_prime_group_is_refused() {
        let t = b3_tower(3, &[1, 4, 20]);
        let beta =
            VoltageAssignment::on_graph(t.graph().clone(), Arc::new(cyclic(2)), vec![1, 0, 0])
                .unwrap();
        assert!(matches!(
            t.kida_verify(&beta),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn uniform_level_zero() {
        let r = uniform_tower_check(3, 0, 2, 1 << 12).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!((r.base.lambda, r.level.lambda, r.vertices), (1, 1, 1));
    }

    #[test]
    fn zero_voltage_has_zero_series() {
        let t = b3_tower(3, &[0, 0, 0]);
        assert!(t
            .characteristic_series_exact(6)
            .unwrap()
            .coeffs()
            .iter()
            .all(Zero::is_zero));
        assert!(t.iwasawa_invariants().is_err());
    }
}
