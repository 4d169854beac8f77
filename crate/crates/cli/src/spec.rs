//! The JSON ring-spec document and its conversion into core objects.

use std::path::Path;

use fsig_core::covers::{quotient_cover, root_cover, CoverDescriptor};
use fsig_core::frobenius::{Convention, PairDivisorSpec, RingPresentation};
use fsig_core::poly::is_prime;
use fsig_core::rational::parse_rational;
use fsig_core::{Rational, ToricRing, TorusQDivisor};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub ring: Option<RingJson>,
    #[serde(default)]
    pub pair: Option<PairJson>,
    #[serde(default)]
    pub cover: Option<CoverJson>,
    #[serde(default)]
    pub options: OptionsJson,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingJson {
    Regular {
        nvars: usize,
        p: u64,
        #[serde(default)]
        variables: Option<Vec<String>>,
    },
    Hypersurface {
        equation: String,
        p: u64,
        #[serde(default)]
        variables: Option<Vec<String>>,
        #[serde(default)]
        nvars: Option<usize>,
    },
    Toric {
        rays: Vec<Vec<i64>>,
        p: u64,
    },
    Quotient {
        n: u64,
        weights: Vec<u64>,
        p: u64,
    },
}

/// Polynomial components for presented rings, facet coefficients for toric
/// ones; exactly one of the two is given.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    #[serde(default)]
    pub facet_coeffs: Option<Vec<String>>,
    #[serde(default)]
    pub components: Option<Vec<ComponentJson>>,
    #[serde(default)]
    pub convention: Convention,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub poly: String,
    pub t: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoverJson {
    QuotientCover {
        n: u64,
        weights: Vec<u64>,
        #[serde(default = "one")]
        m: u64,
        p: u64,
        #[serde(default)]
        degree: Option<u64>,
    },
    RootCover {
        n: u64,
        along: String,
        p: u64,
        #[serde(default)]
        pair_t: Option<String>,
        #[serde(default = "two")]
        dim: usize,
        #[serde(default)]
        degree: Option<u64>,
    },
}

fn one() -> u64 {
    1
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BackendChoice {
    #[default]
    Auto,
    Toric,
    Sequence,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsJson {
    #[serde(default)]
    pub e_max: Option<u32>,
    #[serde(default)]
    pub backend: Option<BackendChoice>,
    #[serde(default)]
    pub time_budget_secs: Option<f64>,
}

pub fn load(path: &Path) -> Result<SpecDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read spec {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("spec schema: {e}")))
}

fn field_error(field: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{field}: {err}"))
}

fn check_prime(field: &str, p: u64) -> Result<(), CliError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(field_error(field, format!("{p} is not prime")))
    }
}

fn rational(field: &str, text: &str) -> Result<Rational, CliError> {
    if !text.contains('/') {
        return Err(field_error(field, format!("expected a \"num/den\" string, got {text:?}")));
    }
    parse_rational(text).map_err(|e| field_error(field, e))
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Which model a ring spec resolves to.
pub enum Model {
    Presented { ring: RingPresentation, pair: PairDivisorSpec, toric: Option<(ToricRing, TorusQDivisor)> },
    Toric { ring: ToricRing, delta: Option<TorusQDivisor> },
}

impl Model {
    pub fn p(&self) -> u64 {
        match self {
            Model::Presented { ring, .. } => ring.p(),
            Model::Toric { ring, .. } => ring.p(),
        }
    }

    /// The toric model, if any: toric specs, and regular rings whose pair
    /// components are coordinate hyperplanes.
    pub fn toric(&self) -> Option<(&ToricRing, Option<&TorusQDivisor>)> {
        match self {
            Model::Toric { ring, delta } => Some((ring, delta.as_ref())),
            Model::Presented { toric: Some((r, d)), .. } => Some((r, Some(d))),
            Model::Presented { .. } => None,
        }
    }
}

impl SpecDocument {
    pub fn model(&self) -> Result<Model, CliError> {
        let ring = self.ring.as_ref().ok_or_else(|| field_error("ring", "missing"))?;
        match ring {
            RingJson::Regular { nvars, p, variables } => {
                check_prime("ring.p", *p)?;
                let names = variables.clone().unwrap_or_else(|| default_names(*nvars));
                if names.len() != *nvars {
                    return Err(field_error("ring.variables", "length differs from nvars"));
                }
                let ring = RingPresentation::regular(*nvars, *p)
                    .and_then(|r| r.with_names(names))
                    .map_err(|e| field_error("ring", e))?;
                let pair = self.polynomial_pair(&ring)?;
                let toric = regular_toric_model(&ring, &pair)?;
                Ok(Model::Presented { ring, pair, toric })
            }
            RingJson::Hypersurface { equation, p, variables, nvars } => {
                check_prime("ring.p", *p)?;
                let names = match (variables, nvars) {
                    (Some(v), _) => v.clone(),
                    (None, Some(n)) => default_names(*n),
                    (None, None) => infer_names(equation),
                };
                let ring = RingPresentation::parse_hypersurface(equation, names, *p)
                    .map_err(|e| field_error("ring.equation", e))?;
                let pair = self.polynomial_pair(&ring)?;
                Ok(Model::Presented { ring, pair, toric: None })
            }
            RingJson::Toric { rays, p } => {
                check_prime("ring.p", *p)?;
                let ring = ToricRing::from_rays(rays, *p).map_err(|e| field_error("ring.rays", e))?;
                let delta = self.facet_pair(&ring)?;
                Ok(Model::Toric { ring, delta })
            }
            RingJson::Quotient { n, weights, p } => {
                check_prime("ring.p", *p)?;
                let ring = ToricRing::quotient_singularity(*n, weights, *p).map_err(|e| match e {
                    fsig_core::Error::PrimeDividesDegree { .. } => field_error("ring.n", e),
                    other => field_error("ring", other),
                })?;
                let delta = self.facet_pair(&ring)?;
                Ok(Model::Toric { ring, delta })
            }
        }
    }

    fn polynomial_pair(&self, ring: &RingPresentation) -> Result<PairDivisorSpec, CliError> {
        let Some(pair) = &self.pair else { return Ok(PairDivisorSpec::empty()) };
        match (&pair.components, &pair.facet_coeffs) {
            (_, Some(_)) => Err(field_error("pair.facet_coeffs", "needs a toric ring; use components for presented rings")),
            (None, None) => Err(field_error("pair", "expected components")),
            (Some(components), None) => {
                let mut out = Vec::new();
                for (i, c) in components.iter().enumerate() {
                    let g = ring.parse(&c.poly).map_err(|e| field_error(&format!("pair.components[{i}].poly"), e))?;
                    out.push((g, rational(&format!("pair.components[{i}].t"), &c.t)?));
                }
                PairDivisorSpec::new(out, pair.convention).map_err(|e| field_error("pair", e))
            }
        }
    }

    fn facet_pair(&self, ring: &ToricRing) -> Result<Option<TorusQDivisor>, CliError> {
        let Some(pair) = &self.pair else { return Ok(None) };
        match (&pair.facet_coeffs, &pair.components) {
            (_, Some(_)) => Err(field_error("pair.components", "toric rings take facet_coeffs")),
            (None, None) => Err(field_error("pair", "expected facet_coeffs")),
            (Some(facet_coeffs), None) => {
                let coeffs = facet_coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, t)| rational(&format!("pair.facet_coeffs[{i}]"), t))
                    .collect::<Result<Vec<_>, _>>()?;
                let d = TorusQDivisor::new(coeffs);
                d.check_boundary(ring).map_err(|e| field_error("pair.facet_coeffs", e))?;
                Ok(Some(d))
            }
        }
    }

    /// The cover, its optional claimed degree and the boundary on the lower ring.
    pub fn cover(&self) -> Result<(CoverDescriptor, Option<u64>, Option<TorusQDivisor>), CliError> {
        let cover = self.cover.as_ref().ok_or_else(|| field_error("cover", "missing"))?;
        match cover {
            CoverJson::QuotientCover { n, weights, m, p, degree } => {
                check_prime("cover.p", *p)?;
                let c = quotient_cover(*n, weights, *p, *m).map_err(|e| field_error("cover", e))?;
                let delta = self.facet_pair(&c.lower)?;
                Ok((c, *degree, delta))
            }
            CoverJson::RootCover { n, along, p, pair_t, dim, degree } => {
                check_prime("cover.p", *p)?;
                let facet = along
                    .strip_prefix('x')
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|i| i < dim)
                    .ok_or_else(|| field_error("cover.along", format!("expected x0..x{}, got {along:?}", dim - 1)))?;
                let c = root_cover(*n, facet, *dim, *p).map_err(|e| field_error("cover", e))?;
                let delta = match pair_t {
                    None => None,
                    Some(t) => {
                        let t = rational("cover.pair_t", t)?;
                        let mut coeffs = vec![Rational::from_integer(0.into()); c.lower.num_facets()];
                        coeffs[facet] = t;
                        let d = TorusQDivisor::new(coeffs);
                        d.check_boundary(&c.lower).map_err(|e| field_error("cover.pair_t", e))?;
                        Some(d)
                    }
                };
                Ok((c, *degree, delta))
            }
        }
    }
}

/// Variable names read off an equation: `x0..x{k}` when every identifier has
/// that shape, otherwise the identifiers in order of first appearance.
fn infer_names(equation: &str) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let mut chars = equation.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if !c.is_ascii_alphabetic() {
            continue;
        }
        let mut end = i + c.len_utf8();
        while let Some(&(j, d)) = chars.peek() {
            if !(d.is_ascii_alphanumeric() || d == '_') {
                break;
            }
            end = j + d.len_utf8();
            chars.next();
        }
        let name = &equation[i..end];
        if !names.iter().any(|n| n == name) {
            names.push(name.to_string());
        }
    }
    let indexed: Option<Vec<usize>> =
        names.iter().map(|n| n.strip_prefix('x').and_then(|k| k.parse().ok())).collect();
    match indexed {
        Some(ks) if !ks.is_empty() => default_names(ks.into_iter().max().unwrap_or(0) + 1),
        _ => names,
    }
}

fn regular_toric_model(
    ring: &RingPresentation,
    pair: &PairDivisorSpec,
) -> Result<Option<(ToricRing, TorusQDivisor)>, CliError> {
    let d = ring.nvars();
    let zero = Rational::from_integer(0.into());
    let mut coeffs = vec![zero; d];
    for (g, t) in &pair.components {
        if pair.convention != Convention::FloorPe || !g.is_monomial() || g.total_degree() != Some(1) {
            return Ok(None);
        }
        let (m, _) = &g.terms()[0];
        let i = m.exponents().iter().position(|&e| e == 1).expect("degree one");
        coeffs[i] += t;
    }
    let rays: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    let toric = ToricRing::from_rays(&rays, ring.p()).map_err(|e| field_error("ring", e))?;
    let delta = TorusQDivisor::new(coeffs);
    if delta.check_boundary(&toric).is_err() {
        return Ok(None);
    }
    Ok(Some((toric, delta)))
}
