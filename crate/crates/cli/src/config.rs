//! Line-oriented `key = value` configuration with `[section]` headers.

use euler::{EigenModel, FrobeniusAlgebra, HeckeDatum};
use plocal::{order24_generators, Mat, MockConfig};
use serde::Serialize;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// A parsed value together with its source line.
type LineValue = (usize, i64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

/// A named group `Γ` given by generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaSpec {
    pub name: String,
    pub generators: Vec<Mat>,
}

/// `(q, a_q(f), a_q(g), χ_f(q), χ_g(q), φ_0(𝔮), φ_0(𝔮̄))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DatumSpec {
    pub q: u64,
    pub a_f: i64,
    pub a_g: i64,
    pub chi_f: i64,
    pub chi_g: i64,
    pub phi_q: i64,
    pub phi_qbar: i64,
}

impl DatumSpec {
    pub fn datum(&self) -> HeckeDatum {
        HeckeDatum::from_ints(self.q, self.a_f, self.a_g, self.chi_f, self.chi_g, self.phi_q, self.phi_qbar)
            .expect("validated at parse time")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerConfig {
    pub order_q: u32,
    pub order_qbar: u32,
    pub relation: Option<(u32, u32)>,
    pub model: EigenModel,
    pub data: Vec<DatumSpec>,
}

impl EulerConfig {
    pub fn algebra(&self) -> FrobeniusAlgebra {
        FrobeniusAlgebra::new(self.order_q, self.order_qbar, self.relation).expect("validated at parse time")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightsConfig {
    pub away_character: i64,
    /// Class multiplicity of the space tower.
    pub h: u32,
    pub top: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub p: i64,
    /// Working precision `M` in digits.
    pub digits: u32,
    /// Determinant valuation budget `V`.
    pub budget: u32,
    pub n_max: u32,
    pub seed: u64,
    pub trials: usize,
    pub iwasawa_primes: Vec<u64>,
    pub iwasawa_levels: u32,
    pub iwasawa_samples: usize,
    /// `(a_p, χ(p))` for the signed families.
    pub signed_families: Vec<(i64, i64)>,
    pub groups: Vec<GammaSpec>,
    pub h: Vec<u32>,
    /// Injected `(a_p, χ(p))` selecting the space eigenpair.
    pub eigen: Option<(i64, i64)>,
    pub weights: WeightsConfig,
    pub euler: EulerConfig,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            p: 3,
            digits: 12,
            budget: 4,
            n_max: 5,
            seed: 0,
            trials: 20,
            iwasawa_primes: vec![3, 5],
            iwasawa_levels: 5,
            iwasawa_samples: 50,
            signed_families: vec![(0, 1), (0, 2), (3, 1), (3, 2)],
            groups: vec![
                GammaSpec { name: "trivial".into(), generators: vec![] },
                GammaSpec { name: "order24".into(), generators: order24_generators() },
            ],
            h: vec![1, 2],
            eigen: None,
            weights: WeightsConfig { away_character: -1, h: 2, top: 3 },
            euler: EulerConfig {
                order_q: 6,
                order_qbar: 6,
                relation: Some((0, 0)),
                model: EigenModel::Tensor,
                data: vec![DatumSpec { q: 7, a_f: 2, a_g: -3, chi_f: 1, chi_g: -1, phi_q: 1, phi_qbar: -1 }],
            },
            output: None,
        }
    }
}

impl RunConfig {
    pub fn mock_config(&self, gamma: &GammaSpec, h: u32) -> MockConfig {
        MockConfig { p: self.p, m: self.digits, budget: self.budget, gamma: gamma.generators.clone(), h }
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        let mut seen = BTreeSet::new();
        let mut groups_reset = false;
        let mut data_reset = false;
        let mut eigen: (Option<LineValue>, Option<LineValue>) = (None, None);
        let mut lines = LineInfo::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| ConfigError::Line { line, message };
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            if let Some(name) = s.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| err(format!("malformed section header {s:?}")))?.trim();
                if !SECTIONS.contains(&name) {
                    return Err(err(format!("unknown section [{name}]")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = s.split_once('=').ok_or_else(|| err(format!("expected key = value, got {s:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if section.is_empty() {
                return Err(err(format!("key {key:?} outside any section")));
            }
            let repeatable = matches!((section.as_str(), key), ("gamma", "group") | ("euler", "datum"));
            if !repeatable && !seen.insert((section.clone(), key.to_string())) {
                return Err(err(format!("duplicate key {key:?} in [{section}]")));
            }
            match (section.as_str(), key) {
                ("general", "p") => {
                    cfg.p = int(value).map_err(err)?;
                    lines.p = line;
                }
                ("general", "M") => {
                    cfg.digits = int(value).map_err(err)?;
                    lines.digits = line;
                }
                ("general", "V") => cfg.budget = int(value).map_err(err)?,
                ("general", "n_max") => {
                    cfg.n_max = int(value).map_err(err)?;
                    if !(3..=6).contains(&cfg.n_max) {
                        return Err(err("n_max must lie in 3..=6".into()));
                    }
                }
                ("general", "seed") => cfg.seed = int(value).map_err(err)?,
                ("general", "trials") => cfg.trials = positive(value).map_err(err)?,
                ("iwasawa", "primes") => {
                    cfg.iwasawa_primes = list(value).map_err(err)?;
                    for &q in &cfg.iwasawa_primes {
                        padic::make_context(q, 1).map_err(|e| err(format!("prime {q}: {e}")))?;
                    }
                }
                ("iwasawa", "levels") => {
                    cfg.iwasawa_levels = int(value).map_err(err)?;
                    if !(2..=6).contains(&cfg.iwasawa_levels) {
                        return Err(err("levels must lie in 2..=6".into()));
                    }
                }
                ("iwasawa", "samples") => cfg.iwasawa_samples = positive(value).map_err(err)?,
                ("signed", "families") => {
                    cfg.signed_families = value
                        .split(';')
                        .map(|pair| {
                            let v: Vec<i64> = words(pair)?;
                            match v[..] {
                                [a, c] => Ok((a, c)),
                                _ => Err(format!("family {pair:?} must be `a_p chi_p`")),
                            }
                        })
                        .collect::<Result<_, _>>()
                        .map_err(err)?;
                    if cfg.signed_families.is_empty() {
                        return Err(err("families must not be empty".into()));
                    }
                    lines.families = line;
                }
                ("gamma", "group") => {
                    if !groups_reset {
                        cfg.groups.clear();
                        groups_reset = true;
                    }
                    let g = gamma(value).map_err(err)?;
                    if cfg.groups.iter().any(|x| x.name == g.name) {
                        return Err(err(format!("duplicate group name {:?}", g.name)));
                    }
                    cfg.groups.push(g);
                    lines.groups.push(line);
                }
                ("gamma", "h") => {
                    cfg.h = list(value).map_err(err)?;
                    if cfg.h.is_empty() || cfg.h.contains(&0) {
                        return Err(err("h must be a nonempty list of positive integers".into()));
                    }
                }
                ("eigen", "a_p") => eigen.0 = Some((line, int(value).map_err(err)?)),
                ("eigen", "chi_p") => eigen.1 = Some((line, int(value).map_err(err)?)),
                ("weights", "away_character") => {
                    cfg.weights.away_character = int(value).map_err(err)?;
                    lines.away = line;
                }
                ("weights", "h") => cfg.weights.h = positive(value).map_err(err)?,
                ("weights", "top") => {
                    cfg.weights.top = int(value).map_err(err)?;
                    if !(2..=3).contains(&cfg.weights.top) {
                        return Err(err("top must be 2 or 3 (class tables beyond level 3 exceed the size limit)".into()));
                    }
                }
                ("euler", "order_q") => cfg.euler.order_q = positive(value).map_err(err)?,
                ("euler", "order_qbar") => cfg.euler.order_qbar = positive(value).map_err(err)?,
                ("euler", "relation") => {
                    cfg.euler.relation = if value == "none" {
                        None
                    } else {
                        match words::<u32>(value).map_err(err)?[..] {
                            [s, t] => Some((s, t)),
                            _ => return Err(err("relation must be `none` or `i j`".into())),
                        }
                    };
                    lines.relation = line;
                }
                ("euler", "model") => {
                    cfg.euler.model = if value == "tensor" {
                        EigenModel::Tensor
                    } else {
                        let v: Vec<String> = value.split_whitespace().map(String::from).collect();
                        let v: [String; 4] =
                            v.try_into().map_err(|_| err("model must be `tensor` or four eigenvalues".into()))?;
                        EigenModel::Explicit(v)
                    };
                    lines.model = line;
                }
                ("euler", "datum") => {
                    if !data_reset {
                        cfg.euler.data.clear();
                        data_reset = true;
                    }
                    let v: Vec<i64> = words(value).map_err(err)?;
                    let [q, a_f, a_g, chi_f, chi_g, phi_q, phi_qbar] = v[..] else {
                        return Err(err("datum must be `q a_f a_g chi_f chi_g phi_q phi_qbar`".into()));
                    };
                    if q < 2 {
                        return Err(err(format!("q = {q} is not prime")));
                    }
                    let d = DatumSpec { q: q as u64, a_f, a_g, chi_f, chi_g, phi_q, phi_qbar };
                    HeckeDatum::from_ints(d.q, a_f, a_g, chi_f, chi_g, phi_q, phi_qbar).map_err(|e| err(e.to_string()))?;
                    cfg.euler.data.push(d);
                    lines.data.push(line);
                }
                ("output", "path") => cfg.output = Some(PathBuf::from(value)),
                _ => return Err(err(format!("unknown key {key:?} in [{section}]"))),
            }
        }
        cfg.eigen = match eigen {
            (None, None) => None,
            (Some((_, a)), Some((_, c))) => Some((a, c)),
            (Some((line, _)), None) | (None, Some((line, _))) => {
                return Err(ConfigError::Line { line, message: "[eigen] needs both a_p and chi_p".into() })
            }
        };
        cfg.validate(&lines)?;
        Ok(cfg)
    }

    fn validate(&self, lines: &LineInfo) -> Result<(), ConfigError> {
        let at = |line: usize, message: String| ConfigError::Line { line, message };
        if self.p < 3 {
            return Err(at(lines.p, format!("p = {} must be an odd prime", self.p)));
        }
        padic::make_context(self.p as u64, self.digits).map_err(|e| at(lines.p.max(lines.digits), e.to_string()))?;
        for &(a, c) in &self.signed_families {
            let ctx = padic::make_context(self.p as u64, self.digits).expect("checked above");
            padic::QuadField::from_ints(ctx, a, c)
                .map_err(|e| e.to_string())
                .and_then(|f| logmat::SignedMatrixFamily::new(iwalg::Iwasawa::new(f, 1)).map_err(|e| e.to_string()))
                .map_err(|e| at(lines.families, format!("family ({a}, {c}): {e}")))?;
        }
        for (g, &line) in self.groups.iter().zip(&lines.groups) {
            for m in &g.generators {
                if plocal::matrix::det(m).rem_euclid(self.p as i128) == 0 {
                    return Err(at(line, format!("generator {m:?} of {:?} is not invertible mod p", g.name)));
                }
            }
        }
        let q = (self.p as u64).pow(self.digits) as i64;
        if plocal::matrix::pow_mod(self.weights.away_character.rem_euclid(q), self.weights.h as u64, q) != 1 {
            return Err(at(lines.away, format!("away_character^{} must be 1 mod p^M", self.weights.h)));
        }
        FrobeniusAlgebra::new(self.euler.order_q, self.euler.order_qbar, self.euler.relation)
            .map_err(|e| at(lines.relation, e.to_string()))?;
        if let EigenModel::Explicit(_) = &self.euler.model {
            if let Some(d) = self.euler.data.first() {
                euler::p_q_poly(&d.datum(), &self.euler.model).map_err(|e| at(lines.model, e.to_string()))?;
            }
        }
        for (d, &line) in self.euler.data.iter().zip(&lines.data) {
            d.datum().check_prime(self.p as u64).map_err(|e| at(line, e.to_string()))?;
        }
        Ok(())
    }
}

const SECTIONS: [&str; 8] = ["general", "iwasawa", "signed", "gamma", "eigen", "weights", "euler", "output"];

/// Lines of keys referenced by cross-field validation; 0 for defaults.
#[derive(Default)]
struct LineInfo {
    p: usize,
    digits: usize,
    families: usize,
    groups: Vec<usize>,
    away: usize,
    relation: usize,
    model: usize,
    data: Vec<usize>,
}

fn int<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("cannot parse {s:?} as an integer in range"))
}

fn positive<T: std::str::FromStr + PartialEq + Default>(s: &str) -> Result<T, String> {
    let v: T = int(s)?;
    if v == T::default() {
        return Err(format!("{s:?} must be positive"));
    }
    Ok(v)
}

fn list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',').map(|x| int(x.trim())).collect()
}

fn words<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split_whitespace().map(int).collect()
}

fn gamma(value: &str) -> Result<GammaSpec, String> {
    match value {
        "trivial" => return Ok(GammaSpec { name: "trivial".into(), generators: vec![] }),
        "order24" => return Ok(GammaSpec { name: "order24".into(), generators: order24_generators() }),
        _ => {}
    }
    let (name, mats) = value
        .split_once(':')
        .ok_or_else(|| format!("group {value:?} must be `trivial`, `order24` or `name: a b c d; ...`"))?;
    let generators = mats
        .split(';')
        .map(|m| {
            let v: Vec<i64> = words(m)?;
            <[i64; 4]>::try_from(v).map_err(|_| format!("matrix {m:?} needs four entries"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GammaSpec { name: name.trim().to_string(), generators })
}
