//! Worked examples with their expected values, rerun end to end.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use giwa_core::iwasawa::{fit_iwasawa, uniform_tower_check, IwasawaData, KappaEntry, Tower};
use giwa_core::ring::{checked_pow, ord_int};
use giwa_core::voltage::verify_combined_iso;

use crate::commands::{Report, RunConfig};
use crate::error::{Error, Result};
use crate::factor::{abbreviate, factor_small};
use crate::spec::{from_json, TowerSpec};

pub const NAMES: [&str; 3] = ["ex1", "ex2", "sl2"];

pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "ex1" => Some(include_str!("../data/ex1.json")),
        "ex2" => Some(include_str!("../data/ex2.json")),
        "sl2" => Some(include_str!("../data/sl2.json")),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub enum Example {
    Kida(KidaExample),
    Uniform(UniformExample),
}

/// A tower with a finite cover to pull it back along.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KidaExample {
    /// `"kida"` or `"uniform"`
    pub kind: String,
    pub name: String,
    pub summary: String,
    pub tower: TowerSpec,
    pub degree: u64,
    pub base: TowerExpect,
    pub pullback: TowerExpect,
}

/// `B₄` over the SL₂ congruence quotients.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformExample {
    /// `"kida"` or `"uniform"`
    pub kind: String,
    pub name: String,
    pub summary: String,
    pub ell: u64,
    pub level: u32,
    pub m_max: u32,
    pub base: TowerExpect,
    pub level_lambda: u64,
    pub level_vertices: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerExpect {
    pub mu: u64,
    pub lambda: usize,
    /// `f(T)` coefficients from `T⁰` on.
    #[serde(default)]
    pub series_prefix: Vec<i64>,
    /// Individual coefficients by degree, as decimal strings.
    #[serde(default)]
    pub series: BTreeMap<usize, String>,
    /// Degree of the first coefficient prime to ℓ.
    #[serde(default)]
    pub first_unit: Option<usize>,
    #[serde(default)]
    pub kappa: Vec<KappaExpect>,
    #[serde(default)]
    pub kappa_ord: BTreeMap<u32, u64>,
    #[serde(default)]
    pub formula: Option<FormulaExpect>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaExpect {
    pub n: u32,
    pub factors: Vec<(u64, u32)>,
}

/// `ord_ℓ κ_n = μℓⁿ + λn + ν` for `from ≤ n ≤ to`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulaExpect {
    pub from: u32,
    pub to: u32,
    pub mu: i64,
    pub lambda: i64,
    pub nu: i64,
}

pub fn load(name: &str) -> Result<Example> {
    let text = source(name).ok_or_else(|| {
        Error::input(format!(
            "unknown example {name:?}; available: {}",
            NAMES.join(", ")
        ))
    })?;
    #[derive(Deserialize)]
    struct Kind {
        kind: String,
    }
    let origin = format!("data/{name}.json");
    let kind: serde_json::Map<String, serde_json::Value> = from_json(text, &origin)?;
    let kind: Kind = serde_json::from_value(serde_json::Value::Object(
        kind.into_iter().filter(|(k, _)| k == "kind").collect(),
    ))
    .map_err(|e| Error::input(format!("{origin}: {e}")))?;
    match kind.kind.as_str() {
        "kida" => Ok(Example::Kida(from_json(text, &origin)?)),
        "uniform" => Ok(Example::Uniform(from_json(text, &origin)?)),
        other => Err(Error::input(format!(
            "{origin}: unknown example kind {other:?}"
        ))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub section: String,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub summary: String,
    pub checks: Vec<CheckLine>,
}

impl ExampleReport {
    pub fn section(&self, section: &str) -> impl Iterator<Item = &CheckLine> {
        let section = section.to_string();
        self.checks.iter().filter(move |c| c.section == section)
    }
}

impl Report for ExampleReport {
    fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.name, self.summary);
        for c in &self.checks {
            if c.pass {
                let _ = writeln!(out, "  ✓ {} {}: {}", c.section, c.name, c.actual);
            } else {
                let _ = writeln!(
                    out,
                    "  ✗ {} {}: expected {}, got {}",
                    c.section, c.name, c.expected, c.actual
                );
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(
            out,
            "{}: {passed}/{} checks passed",
            self.name,
            self.checks.len()
        );
        out
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Lines {
    section: String,
    lines: Vec<CheckLine>,
}

impl Lines {
    fn new(section: &str) -> Self {
        Lines {
            section: section.into(),
            lines: Vec::new(),
        }
    }

    fn eq<T: PartialEq + ToString>(&mut self, name: impl Into<String>, expected: T, actual: T) {
        self.lines.push(CheckLine {
            section: self.section.clone(),
            name: name.into(),
            pass: expected == actual,
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    fn flag(&mut self, name: impl Into<String>, ok: bool) {
        self.eq(name, true, ok);
    }
}

/// Which parts of an example to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Base,
    Pullback,
    All,
}

pub fn run(name: &str, config: &RunConfig, level: Option<u32>) -> Result<ExampleReport> {
    run_part(name, config, level, Part::All)
}

pub fn run_part(
    name: &str,
    config: &RunConfig,
    level: Option<u32>,
    part: Part,
) -> Result<ExampleReport> {
    match load(name)? {
        Example::Kida(ex) => run_kida(&ex, config, part),
        Example::Uniform(ex) => run_uniform(&ex, level),
    }
}

fn check_tower(
    out: &mut Lines,
    tower: &Tower,
    expect: &TowerExpect,
    kappa: impl Fn(u32) -> giwa_core::Result<Vec<KappaEntry>>,
) -> Result<IwasawaData> {
    let ell = tower.ell();
    let data = tower.iwasawa_invariants()?;
    out.eq("μ", expect.mu.to_string(), data.mu.to_string());
    out.eq("λ", expect.lambda, data.lambda);
    out.flag("μ certified", data.certified);
    if let Some(d) = expect.first_unit {
        out.eq(
            format!("first coefficient prime to {ell}"),
            format!("T^{d}"),
            format!("T^{}", data.lambda_f),
        );
    }
    let top = expect
        .series
        .keys()
        .copied()
        .chain(expect.series_prefix.len().checked_sub(1))
        .max();
    if let Some(top) = top {
        let f = tower.characteristic_series_exact(top.max(1))?;
        if !expect.series_prefix.is_empty() {
            let got: Vec<String> = f.coeffs()[..expect.series_prefix.len()]
                .iter()
                .map(|c| c.to_string())
                .collect();
            let want: Vec<String> = expect.series_prefix.iter().map(|c| c.to_string()).collect();
            out.eq(
                format!("f through T^{}", want.len() - 1),
                want.join(", "),
                got.join(", "),
            );
        }
        for (&d, want) in &expect.series {
            out.eq(
                format!("f coefficient of T^{d}"),
                want.clone(),
                f.coeff(d).to_string(),
            );
        }
    }
    let n_max = expect
        .kappa
        .iter()
        .map(|k| k.n)
        .chain(expect.kappa_ord.keys().copied())
        .chain(expect.formula.as_ref().map(|f| f.to))
        .max();
    let Some(n_max) = n_max else { return Ok(data) };
    let entries = kappa(n_max)?;
    for k in &expect.kappa {
        let want: BigInt = k
            .factors
            .iter()
            .map(|&(p, e)| BigInt::from(p).pow(e))
            .product();
        let got = &entries[k.n as usize].kappa;
        let shown = factor_small(got, 1000);
        out.eq(
            format!("κ_{}", k.n),
            factor_small(&want, 1000).to_string(),
            if shown.value() == want {
                shown.to_string()
            } else {
                abbreviate(got, 40)
            },
        );
        out.eq(
            format!("ord_{ell} κ_{}", k.n),
            ord_int(&want, ell).unwrap_or(0),
            entries[k.n as usize].ord,
        );
    }
    for (&n, &ord) in &expect.kappa_ord {
        out.eq(format!("ord_{ell} κ_{n}"), ord, entries[n as usize].ord);
    }
    if let Some(f) = &expect.formula {
        let mut ords = Vec::new();
        for n in f.from..=f.to {
            let pow = checked_pow(ell, n).expect("small level") as i64;
            let want = f.mu * pow + f.lambda * n as i64 + f.nu;
            let got = entries[n as usize].ord as i64;
            ords.push(got);
            out.eq(
                format!("ord_{ell} κ_{n} = {}·{n} + {}", f.lambda, f.nu),
                want,
                got,
            );
        }
        if ords.len() >= 3 {
            let fit = fit_iwasawa(f.from, &ords, ell)?;
            out.eq(
                "fitted (μ, λ, ν)",
                (f.mu, f.lambda, f.nu).pair(),
                (fit.mu, fit.lambda, fit.nu).pair(),
            );
        }
    }
    Ok(data)
}

trait Triple {
    fn pair(&self) -> String;
}

impl Triple for (i64, i64, i64) {
    fn pair(&self) -> String {
        format!("({}, {}, {})", self.0, self.1, self.2)
    }
}

fn run_kida(ex: &KidaExample, config: &RunConfig, part: Part) -> Result<ExampleReport> {
    let tower = ex.tower.build()?;
    let beta = ex
        .tower
        .beta(&tower)?
        .ok_or_else(|| Error::input(format!("example {} has no beta", ex.name)))?;
    let cap = config.vertex_cap;
    let mut checks = Vec::new();
    let mut base_data = None;
    if part != Part::Pullback {
        let mut lines = Lines::new("base");
        base_data = Some(check_tower(&mut lines, &tower, &ex.base, |n| {
            tower.kappa_sequence(n, cap)
        })?);
        checks.extend(lines.lines);
    }
    if part != Part::Base {
        let mut lines = Lines::new("pullback");
        let (upper, _) = tower.pullback(&beta)?;
        lines.eq("[Y:X]", ex.degree, beta.group().order() as u64);
        let iso = verify_combined_iso(&beta, &tower.level_assignment(1)?)?;
        lines.flag(
            "level 1 via combined voltages",
            iso.isomorphic && iso.commutes_with_projections,
        );
        let up = check_tower(&mut lines, &upper, &ex.pullback, |n| {
            tower.pullback_kappa_sequence(&beta, n, cap)
        })?;
        checks.extend(lines.lines);

        let mut lines = Lines::new("kida");
        let base = match base_data {
            Some(d) => d,
            None => tower.iwasawa_invariants()?,
        };
        let report = tower.kida_verify(&beta)?;
        lines.eq("λ_Y from kida_verify", up.lambda, report.upper.lambda);
        lines.flag("μ_X = 0 ⇔ μ_Y = 0", report.mu_equivalence);
        lines.flag(
            "pullback tower connected (levels 1, 2)",
            report.connectivity.iter().all(|c| c.1),
        );
        lines.eq(
            "λ_Y + 1 = [Y:X](λ_X + 1)",
            format!(
                "{}+1 = {}×({}+1)",
                ex.pullback.lambda, ex.degree, ex.base.lambda
            ),
            format!(
                "{}+1 = {}×({}+1){}",
                up.lambda,
                report.degree,
                base.lambda,
                if (up.lambda as u64 + 1) == report.degree * (base.lambda as u64 + 1) {
                    ""
                } else {
                    " (fails)"
                }
            ),
        );
        checks.extend(lines.lines);
    }
    Ok(ExampleReport {
        name: ex.name.clone(),
        summary: ex.summary.clone(),
        checks,
    })
}

/// Largest `|V|⁴·cap²` work estimate accepted for the level series determinant.
const UNIFORM_WORK_LIMIT: f64 = 2e11;

fn run_uniform(ex: &UniformExample, level: Option<u32>) -> Result<ExampleReport> {
    let n = level.unwrap_or(ex.level);
    let ell = ex.ell;
    let order = checked_pow(ell, 3 * n).ok_or_else(|| Error::input("level too large"))?;
    let expected_lambda = if n == ex.level {
        ex.level_lambda
    } else {
        2 * order - 1
    };
    let work = (order as f64).powi(4) * (2.0 * order as f64).powi(2);
    if work > UNIFORM_WORK_LIMIT {
        return Err(giwa_core::Error::Resource(format!(
            "level {n} needs a {order}x{order} series determinant to degree {}",
            2 * order
        ))
        .into());
    }
    let report = uniform_tower_check(ell, n, ex.m_max, giwa_core::group::DEFAULT_ORDER_CAP)?;
    let mut lines = Lines::new("base");
    let want: Vec<String> = ex
        .base
        .series_prefix
        .iter()
        .map(|c| c.to_string())
        .collect();
    let got: Vec<String> = report.base_series.coeffs()[..want.len()]
        .iter()
        .map(|c| c.to_string())
        .collect();
    lines.eq(
        format!("f through T^{}", want.len().saturating_sub(1)),
        want.join(", "),
        got.join(", "),
    );
    lines.eq("μ", ex.base.mu.to_string(), report.base.mu.to_string());
    lines.eq("λ", ex.base.lambda, report.base.lambda);
    let mut checks = lines.lines;
    let mut lines = Lines::new(&format!("level {n}"));
    lines.eq("|G^(n)|", order, report.vertices as u64);
    if n == ex.level {
        lines.eq("|V(Y_n)|", ex.level_vertices, report.vertices);
    }
    for (m, ok) in &report.connectivity {
        lines.flag(format!("Y_({n},{m}) connected"), *ok);
    }
    lines.eq("μ_n", "0".to_string(), report.level.mu.to_string());
    lines.flag("μ_n certified", report.level.certified);
    lines.eq("λ_n", expected_lambda, report.level.lambda as u64);
    lines.eq(
        format!("λ_n = {ell}^{}(λ+1) − 1", 3 * n),
        report.expected_lambda,
        report.level.lambda as u64,
    );
    checks.extend(lines.lines);
    Ok(ExampleReport {
        name: ex.name.clone(),
        summary: ex.summary.clone(),
        checks,
    })
}
