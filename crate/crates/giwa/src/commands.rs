//! The computations behind each subcommand, producing serializable reports.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use giwa_core::graph::Multigraph;
use giwa_core::iwasawa::{
    fit_iwasawa, IwasawaData, KappaEntry, KidaReport, Tower, DEFAULT_CAP, DEFAULT_VERTEX_CAP,
    MAX_CAP,
};
use giwa_core::lfunction::{
    artin_product_check, class_number_check, format_poly, h_polynomial_int, hashimoto_check,
    ihara_zeta_inverse, IdentityReport,
};
use giwa_core::ring::word_precision;
use giwa_core::voltage::VoltageAssignment;

use crate::error::{Error, Result};
use crate::factor::{abbreviate, factor_small};
use crate::spec::{from_json, GraphSpec, TowerSpec, VoltageSpec};

/// Levels computed by `invariants` when neither the input file nor the command
/// line says otherwise.
pub const DEFAULT_LEVELS: u32 = 3;
pub const VERTEX_CAP_ENV: &str = "GIWA_VERTEX_CAP";
const TRIAL_DIVISION_BOUND: u64 = 100_000;

/// Overrides shared by the subcommands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    /// First series cap tried; doubled up to `max(cap, 2048)`.
    pub cap: usize,
    /// Residue digits `N` (coefficients mod `ℓ^N`); defaults to the word limit.
    pub precision: Option<u32>,
    pub vertex_cap: usize,
    pub levels: Option<u32>,
    /// Factor every `κ_n` by trial division in tables.
    pub factor: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cap: DEFAULT_CAP,
            precision: None,
            vertex_cap: DEFAULT_VERTEX_CAP,
            levels: None,
            factor: false,
        }
    }
}

impl RunConfig {
    pub const MAX_SERIES_CAP: usize = 8192;
    pub const MAX_VERTEX_CAP: usize = 20_000;

    /// Reads the vertex cap from `GIWA_VERTEX_CAP` when set.
    pub fn with_env(mut self) -> Result<Self> {
        if let Ok(v) = std::env::var(VERTEX_CAP_ENV) {
            self.vertex_cap = v.trim().parse().map_err(|_| {
                Error::input(format!("{VERTEX_CAP_ENV}={v:?} is not a positive integer"))
            })?;
        }
        Ok(self)
    }

    /// Checks the caps; precision bounds depend on ℓ and are checked by
    /// [`RunConfig::validate`].
    pub fn validate_caps(&self) -> Result<()> {
        if !(2..=Self::MAX_SERIES_CAP).contains(&self.cap) {
            return Err(Error::input(format!(
                "series cap must lie in 2..={}",
                Self::MAX_SERIES_CAP
            )));
        }
        if !(1..=Self::MAX_VERTEX_CAP).contains(&self.vertex_cap) {
            return Err(Error::input(format!(
                "vertex cap must lie in 1..={}",
                Self::MAX_VERTEX_CAP
            )));
        }
        Ok(())
    }

    pub fn validate(&self, ell: u64) -> Result<()> {
        self.validate_caps()?;
        if let Some(p) = self.precision {
            let top = word_precision(ell);
            if !(1..=top).contains(&p) {
                return Err(Error::input(format!(
                    "precision for ell = {ell} must lie in 1..={top}"
                )));
            }
        }
        Ok(())
    }

    fn invariants(&self, t: &Tower) -> Result<IwasawaData> {
        self.validate(t.ell())?;
        let precision = self.precision.unwrap_or_else(|| word_precision(t.ell()));
        Ok(t.iwasawa_invariants_with(self.cap, self.cap.max(MAX_CAP), precision)?)
    }
}

/// A report printable as a table or as JSON.
pub trait Report: Serialize {
    fn human(&self) -> String;
    /// Whether every identity the report checks holds.
    fn passed(&self) -> bool;

    fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantsJson {
    pub mu: String,
    pub lambda: usize,
    pub lambda_f: usize,
    pub series_cap: usize,
    pub precision: u32,
    pub certified: bool,
    pub nu: Option<i64>,
    pub n0: Option<u32>,
}

impl From<&IwasawaData> for InvariantsJson {
    fn from(d: &IwasawaData) -> Self {
        InvariantsJson {
            mu: d.mu.to_string(),
            lambda: d.lambda,
            lambda_f: d.lambda_f,
            series_cap: d.cap,
            precision: d.precision,
            certified: d.certified,
            nu: d.nu,
            n0: d.n0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelRow {
    pub n: u32,
    pub vertices: usize,
    pub kappa: String,
    pub ord: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<String>,
}

fn level_rows(entries: &[KappaEntry], factor: bool) -> Vec<LevelRow> {
    entries
        .iter()
        .map(|e| LevelRow {
            n: e.n,
            vertices: e.vertices,
            kappa: e.kappa.to_string(),
            ord: e.ord,
            factorization: factor.then(|| factor_small(&e.kappa, TRIAL_DIVISION_BOUND).to_string()),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantsReport {
    pub ell: u64,
    pub graph: String,
    /// Leading terms of `f_{X,α}(T)` (exact when the voltages are integers,
    /// else modulo `ℓ^precision`).
    pub series: String,
    pub invariants: InvariantsJson,
    pub levels: Vec<LevelRow>,
    /// `"fitted"`, `"too few levels"`, `"not stabilized"` or `"mismatch"`.
    pub fit: String,
    pub fit_detail: Option<String>,
}

impl Report for InvariantsReport {
    fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "X: {}; ell = {}", self.graph, self.ell);
        let _ = writeln!(out, "f(T) = {}", self.series);
        let inv = &self.invariants;
        let _ = writeln!(
            out,
            "series cap {} mod {}^{}{}",
            inv.series_cap,
            self.ell,
            inv.precision,
            if inv.certified {
                ""
            } else {
                " (mu not certified: only an upper bound)"
            }
        );
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:>3} {:>8} {:>6}  kappa",
            "n",
            "|V|",
            format!("ord_{}", self.ell)
        );
        for row in &self.levels {
            let kappa = match &row.factorization {
                Some(f) => f.clone(),
                None => abbreviate(&row.kappa.parse().unwrap(), 40),
            };
            let _ = writeln!(
                out,
                "{:>3} {:>8} {:>6}  {}",
                row.n, row.vertices, row.ord, kappa
            );
        }
        let _ = writeln!(out);
        let mut last = format!("μ={} λ={}", inv.mu, inv.lambda);
        if let (Some(nu), Some(n0)) = (inv.nu, inv.n0) {
            let _ = write!(last, " ν={nu} (n≥{n0})");
        } else if let Some(d) = &self.fit_detail {
            let _ = write!(last, " ({}: {d})", self.fit);
        } else {
            let _ = write!(last, " ({})", self.fit);
        }
        out + &last + "\n"
    }

    fn passed(&self) -> bool {
        self.fit != "mismatch"
    }
}

fn render_series(t: &Tower, precision: u32, terms: usize) -> Result<String> {
    let cap = terms.max(4) + 4;
    Ok(if t.is_exact() {
        t.characteristic_series_exact(cap)?.render(terms)
    } else {
        let f = t.characteristic_series_mod(cap, precision)?;
        let lifted = f.map(|c| num_bigint::BigInt::from(c.signed_value()));
        format!(
            "{} (mod {}^{})",
            lifted.render(terms),
            t.ell(),
            f.coeff(0).modulus().ilog(t.ell())
        )
    })
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(path.to_string(), e))
}

pub fn load_tower(path: &str) -> Result<TowerSpec> {
    from_json(&read(path)?, path)
}

pub fn invariants(spec: &TowerSpec, config: &RunConfig) -> Result<InvariantsReport> {
    let tower = spec.build()?;
    let data = config.invariants(&tower)?;
    let n_max = config.levels.or(spec.levels).unwrap_or(DEFAULT_LEVELS);
    let entries = tower.kappa_sequence(n_max, config.vertex_cap)?;
    let ords: Vec<i64> = entries.iter().map(|e| e.ord as i64).collect();
    let (data, fit, detail) = if ords.len() < 3 {
        (data, "too few levels", None)
    } else {
        match fit_iwasawa(0, &ords, tower.ell()) {
            Ok(f) => match data.clone().with_fit(&f) {
                Ok(d) => (d, "fitted", None),
                Err(e) => (data, "mismatch", Some(e.to_string())),
            },
            Err(e @ giwa_core::Error::NotStabilized(_)) => {
                (data, "not stabilized", Some(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        }
    };
    Ok(InvariantsReport {
        ell: tower.ell(),
        graph: tower.graph().describe(),
        series: render_series(&tower, data.precision, 6)?,
        invariants: (&data).into(),
        levels: level_rows(&entries, config.factor),
        fit: fit.to_string(),
        fit_detail: detail,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FormulaJson {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KidaJson {
    pub ell: u64,
    pub group: String,
    pub degree: u64,
    pub base: InvariantsJson,
    pub pullback: InvariantsJson,
    pub mu_equivalence: bool,
    pub formula: Option<FormulaJson>,
    pub factorization: Option<bool>,
    pub connectivity: Vec<(u32, bool)>,
    pub pass: bool,
}

impl KidaJson {
    pub fn new(r: &KidaReport, ell: u64, group: String) -> Self {
        KidaJson {
            ell,
            group,
            degree: r.degree,
            base: (&r.base).into(),
            pullback: (&r.upper).into(),
            mu_equivalence: r.mu_equivalence,
            formula: r.formula.map(|(lhs, rhs)| FormulaJson {
                lhs,
                rhs,
                holds: lhs == rhs,
            }),
            factorization: r.factorization,
            connectivity: r.connectivity.clone(),
            pass: r.pass(),
        }
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "✓"
    } else {
        "✗"
    }
}

impl Report for KidaJson {
    fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "G = {}, [Y:X] = {}", self.group, self.degree);
        for (name, d) in [("X", &self.base), ("Y", &self.pullback)] {
            let _ = writeln!(
                out,
                "{name}: μ={} λ={}{}",
                d.mu,
                d.lambda,
                if d.certified {
                    ""
                } else {
                    " (μ only bounded above)"
                }
            );
        }
        let levels: Vec<String> = self
            .connectivity
            .iter()
            .map(|(n, c)| format!("n={n} {}", mark(*c)))
            .collect();
        let _ = writeln!(out, "pullback tower connected: {}", levels.join(", "));
        let _ = writeln!(out, "μ_X = 0 ⇔ μ_Y = 0 {}", mark(self.mu_equivalence));
        if let Some(f) = &self.factorization {
            let _ = writeln!(out, "f_Y = ∏ f_ψ {}", mark(*f));
        }
        match &self.formula {
            Some(_) => {
                let _ = writeln!(
                    out,
                    "{}+1 = {}×({}+1) {}",
                    self.pullback.lambda,
                    self.degree,
                    self.base.lambda,
                    mark(self.pass)
                );
            }
            None => {
                let _ = writeln!(out, "μ_X > 0: the λ formula does not apply");
            }
        }
        out
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

pub fn kida(spec: &TowerSpec, config: &RunConfig) -> Result<KidaJson> {
    let tower = spec.build()?;
    config.validate(tower.ell())?;
    let beta = spec
        .beta(&tower)?
        .ok_or_else(|| Error::input("kida needs \"group\" and \"beta\" in the tower file"))?;
    let report = tower.kida_verify(&beta)?;
    Ok(KidaJson::new(&report, tower.ell(), beta.group().describe()))
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub identity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refused: Option<String>,
}

impl From<IdentityReport> for CheckEntry {
    fn from(r: IdentityReport) -> Self {
        CheckEntry {
            identity: r.identity,
            left: Some(r.left),
            right: Some(r.right),
            pass: r.pass,
            refused: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChecksReport {
    pub graph: String,
    pub euler_characteristic: i64,
    pub kappa: String,
    pub checks: Vec<CheckEntry>,
}

impl ChecksReport {
    /// Some check was refused because its hypotheses fail.
    pub fn refused(&self) -> bool {
        self.checks.iter().any(|c| c.refused.is_some())
    }
}

impl Report for ChecksReport {
    fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "X: {}; chi = {}; kappa = {}",
            self.graph, self.euler_characteristic, self.kappa
        );
        for c in &self.checks {
            match &c.refused {
                Some(why) => {
                    let _ = writeln!(out, "{}: refused ({why})", c.identity);
                }
                None => {
                    let _ = writeln!(
                        out,
                        "{}: {} = {} {}",
                        c.identity,
                        c.left.as_deref().unwrap_or(""),
                        c.right.as_deref().unwrap_or(""),
                        mark(c.pass)
                    );
                }
            }
        }
        out
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass || c.refused.is_some())
    }
}

/// Either a bare graph or a voltage assignment, told apart by the
/// presence of a `"vertices"` key.
pub enum GraphInput {
    Graph(Multigraph),
    Voltage(VoltageAssignment),
}

pub fn load_graph_input(path: &str) -> Result<GraphInput> {
    let text = read(path)?;
    let value: Value = from_json(&text, path)?;
    if value.get("vertices").is_some() {
        let spec: GraphSpec = from_json(&text, path)?;
        Ok(GraphInput::Graph(spec.build()?))
    } else {
        let spec: VoltageSpec = from_json(&text, path)?;
        Ok(GraphInput::Voltage(spec.build()?))
    }
}

fn refusal(identity: &str, e: giwa_core::Error) -> Result<CheckEntry> {
    match e {
        giwa_core::Error::Precondition(m)
        | giwa_core::Error::Disconnected(m)
        | giwa_core::Error::Unsupported(m) => Ok(CheckEntry {
            identity: identity.into(),
            left: None,
            right: None,
            pass: false,
            refused: Some(m),
        }),
        other => Err(other.into()),
    }
}

pub fn checks(input: &GraphInput) -> Result<ChecksReport> {
    let x = match input {
        GraphInput::Graph(x) => x,
        GraphInput::Voltage(va) => va.graph(),
    };
    let kappa = x.spanning_tree_count()?;
    let mut entries = vec![CheckEntry::from(hashimoto_check(x)?)];
    if let GraphInput::Voltage(va) = input {
        entries.push(match artin_product_check(va) {
            Ok(r) => r.into(),
            Err(e) => refusal("h_Y(u) = h_X(u) prod h(u, psi)", e)?,
        });
        entries.push(match class_number_check(va) {
            Ok(r) => r.into(),
            Err(e) => refusal("|G| kappa_Y = kappa_X prod h(1, psi)", e)?,
        });
    }
    Ok(ChecksReport {
        graph: x.describe(),
        euler_characteristic: x.euler_characteristic(),
        kappa: kappa.to_string(),
        checks: entries,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ZetaReport {
    pub graph: String,
    pub euler_characteristic: i64,
    pub kappa: String,
    /// `h_X(u) = det(I − Au + (D − I)u²)`, ascending coefficients.
    pub h: Vec<String>,
    /// `Z_X(u)⁻¹`, ascending coefficients.
    pub zeta_inverse: Vec<String>,
    pub hashimoto: CheckEntry,
}

impl Report for ZetaReport {
    fn human(&self) -> String {
        let parse = |v: &[String]| v.iter().map(|c| c.parse().unwrap()).collect::<Vec<_>>();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "X: {}; chi = {}; kappa = {}",
            self.graph, self.euler_characteristic, self.kappa
        );
        let _ = writeln!(out, "h(u)     = {}", format_poly(&parse(&self.h)));
        let _ = writeln!(
            out,
            "Z(u)^-1  = {}",
            format_poly(&parse(&self.zeta_inverse))
        );
        let _ = writeln!(
            out,
            "h'(1) = {} = -2 chi kappa {}",
            self.hashimoto.left.as_deref().unwrap_or(""),
            mark(self.hashimoto.pass)
        );
        out
    }

    fn passed(&self) -> bool {
        self.hashimoto.pass
    }
}

pub fn zeta(input: &GraphInput) -> Result<ZetaReport> {
    let x = match input {
        GraphInput::Graph(x) => x,
        GraphInput::Voltage(va) => va.graph(),
    };
    let strings = |v: Vec<num_bigint::BigInt>| v.iter().map(|c| c.to_string()).collect();
    Ok(ZetaReport {
        graph: x.describe(),
        euler_characteristic: x.euler_characteristic(),
        kappa: x.spanning_tree_count()?.to_string(),
        h: strings(h_polynomial_int(x)),
        zeta_inverse: strings(ihara_zeta_inverse(x)?),
        hashimoto: hashimoto_check(x)?.into(),
    })
}
