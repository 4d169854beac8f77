use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{hermite_normal_form, reduce_mod, solve_row_combination, to_qmat, IVec};
use crate::rational::{int, to_fraction_string, Rational};
use crate::toric::{ToricRing, ToricSummary, TorusQDivisor};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CoverKind {
    /// `k[x]^{μ_n} ⊆ k[x]^{μ_m}`.
    Quotient { n: u64, weights: Vec<u64>, m: u64 },
    /// Adjoining an `n`-th root of the coordinate cutting out `facet`.
    Root { n: u64, facet: usize },
    /// `R ⊆ R ⊕ R(−D) ⊕ … ⊕ R(−(n−1)D)` for a torsion class `D`.
    Cyclic { order: u64 },
    Composite,
    /// A root cover with `p | n`, built only to show the trace degenerates.
    WildValidation { n: u64 },
}

/// `Tr(x^m) = n·x^m` for `m ∈ M_R` and `0` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceMap {
    pub degree: u64,
    pub p: u64,
    #[serde(skip)]
    lower_basis: Vec<IVec>,
}

impl TraceMap {
    /// `n mod p`, the scalar the invariant projection is multiplied by.
    pub fn unit(&self) -> u64 {
        self.degree % self.p
    }

    pub fn is_surjective(&self) -> bool {
        self.unit() != 0
    }

    /// Whether an ambient exponent lies in the lower lattice.
    pub fn in_lower_lattice(&self, ambient: &[i64]) -> bool {
        reduce_mod(ambient, &self.lower_basis).iter().all(|&x| x == 0)
    }

    /// Coefficient of `Tr(x^m)` on `x^m` for an ambient exponent `m`.
    pub fn apply(&self, ambient: &[i64]) -> u64 {
        if self.in_lower_lattice(ambient) {
            self.unit()
        } else {
            0
        }
    }
}

/// A finite extension `R ⊆ S` of toric rings sharing a cone, with
/// `M_R ⊆ M_S` in a common ambient lattice.
#[derive(Debug, Clone)]
pub struct CoverDescriptor {
    pub kind: CoverKind,
    pub lower: ToricRing,
    pub upper: ToricRing,
    /// `[L:K] = [M_S : M_R]`.
    pub degree: u64,
    /// `[ℓ:k]`; residue fields are `𝔽_p` on both sides.
    pub residue_degree: u64,
    /// `e_i` along each facet.
    pub ramification_indices: Vec<i64>,
    /// `Σ (e_i − 1) D_i` on the upper ring.
    pub ram: TorusQDivisor,
    pub etale_in_codim_one: bool,
    pub trace: TraceMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverSummary {
    pub kind: CoverKind,
    pub degree: u64,
    pub residue_degree: u64,
    pub ramification_indices: Vec<i64>,
    pub ram: TorusQDivisor,
    pub etale_in_codim_one: bool,
    pub trace_surjective: bool,
    pub lower: ToricSummary,
    pub upper: ToricSummary,
}

impl CoverDescriptor {
    pub fn from_rings(lower: ToricRing, upper: ToricRing, kind: CoverKind) -> Result<Self> {
        if lower.functionals() != upper.functionals() {
            return Err(Error::InvalidInput("cover rings must share the cone".into()));
        }
        if lower.dim() != upper.dim() {
            return Err(Error::InvalidInput("cover rings must have the same dimension".into()));
        }
        let trace_basis = upper.basis().to_vec();
        if !lower.basis().iter().all(|b| reduce_mod(b, &trace_basis).iter().all(|&x| x == 0)) {
            return Err(Error::InvalidInput("the lower lattice is not contained in the upper one".into()));
        }
        let (il, iu) = (lower.lattice_index(), upper.lattice_index());
        let degree = il / iu;
        let p = upper.p();
        let ramification_indices: Vec<i64> =
            lower.scales().iter().zip(upper.scales()).map(|(gl, gu)| gl / gu).collect();
        let wild = matches!(kind, CoverKind::WildValidation { .. });
        if !wild && ramification_indices.iter().any(|&e| (e as u64).is_multiple_of(p)) {
            return Err(Error::PrimeDividesDegree { p, degree });
        }
        let ram = TorusQDivisor::new(ramification_indices.iter().map(|&e| int(e - 1)).collect());
        let etale_in_codim_one = ram.is_zero();
        if !wild && degree % p == 0 {
            return Err(Error::PrimeDividesDegree { p, degree });
        }
        let residue_degree = 1;
        assert_eq!(degree % residue_degree, 0, "[ℓ:k] divides [L:K]");
        let trace = TraceMap { degree, p, lower_basis: lower.basis().to_vec() };
        Ok(CoverDescriptor { kind, lower, upper, degree, residue_degree, ramification_indices, ram, etale_in_codim_one, trace })
    }

    pub fn summary(&self) -> CoverSummary {
        CoverSummary {
            kind: self.kind.clone(),
            degree: self.degree,
            residue_degree: self.residue_degree,
            ramification_indices: self.ramification_indices.clone(),
            ram: self.ram.clone(),
            etale_in_codim_one: self.etale_in_codim_one,
            trace_surjective: self.trace.is_surjective(),
            lower: self.lower.summary(),
            upper: self.upper.summary(),
        }
    }

    /// Étale everywhere; for these graded covers this means degree one.
    pub fn is_etale(&self) -> bool {
        self.degree == 1
    }
}

/// `k[x]^{μ_n} ⊆ k[x]^{μ_m}` for `m | n`, where `μ_m` acts with weights
/// `a_i mod m`.
pub fn quotient_cover(n: u64, weights: &[u64], p: u64, m: u64) -> Result<CoverDescriptor> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::InvalidInput(format!("subgroup order {m} does not divide {n}")));
    }
    let lower = ToricRing::quotient_singularity(n, weights, p)?;
    let reduced: Vec<u64> = weights.iter().map(|a| a % m).collect();
    let upper = ToricRing::quotient_singularity(m, &reduced, p)?;
    CoverDescriptor::from_rings(lower, upper, CoverKind::Quotient { n, weights: weights.to_vec(), m })
}

fn axis(d: usize, facet: usize) -> Result<Vec<u64>> {
    if facet >= d {
        return Err(Error::InvalidInput(format!("no coordinate x{facet} in dimension {d}")));
    }
    Ok((0..d).map(|i| u64::from(i == facet)).collect())
}

/// `𝔽_p[x_1..x_d] ⊆ 𝔽_p[x_1..x_d][x_facet^{1/n}]`.
///
/// The lower ring is modelled as the invariants of `μ_n` acting on the
/// single coordinate, so facet `i` of both rings is `div(x_i)`.
pub fn root_cover(n: u64, facet: usize, d: usize, p: u64) -> Result<CoverDescriptor> {
    let weights = axis(d, facet)?;
    let lower = ToricRing::quotient_singularity(n, &weights, p)?;
    let upper = ToricRing::quotient_singularity(1, &vec![0; d], p)?;
    CoverDescriptor::from_rings(lower, upper, CoverKind::Root { n, facet })
}

/// A root cover with `p | n`. The trace is then identically zero.
pub fn wild_root_cover_for_validation(n: u64, facet: usize, d: usize, p: u64) -> Result<CoverDescriptor> {
    let weights = axis(d, facet)?;
    let lower = ToricRing::quotient_unchecked(n, &weights, p)?;
    let upper = ToricRing::quotient_unchecked(1, &vec![0; d], p)?;
    CoverDescriptor::from_rings(lower, upper, CoverKind::WildValidation { n })
}

/// `u ∈ M_ℚ` with `⟨u, v_i⟩ = c_i`, if `D = Σ c_i D_i` is ℚ-Cartier.
fn cartier_data(ring: &ToricRing, divisor: &TorusQDivisor) -> Result<Vec<Rational>> {
    if divisor.len() != ring.num_facets() || !divisor.is_integral() {
        return Err(Error::InvalidInput("expected an integral divisor on the ring's facets".into()));
    }
    let d = ring.dim();
    let v_t: Vec<IVec> = (0..d).map(|c| ring.rays().iter().map(|v| v[c]).collect()).collect();
    solve_row_combination(&to_qmat(&v_t), &divisor.coefficients)
        .ok_or_else(|| Error::InvalidInput("divisor is not ℚ-Cartier".into()))
}

/// Order of the class of `D` in the class group, when it is torsion.
pub fn divisor_class_order(ring: &ToricRing, divisor: &TorusQDivisor) -> Result<u64> {
    let u = cartier_data(ring, divisor)?;
    let n = u.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    n.to_u64().ok_or_else(|| Error::InvalidInput("class order too large".into()))
}

/// The cyclic cover attached to a torsion divisor class.
///
/// Both rings are re-embedded in `(1/n)·M`: the lower ring becomes `nℤ^d`
/// (isomorphic to `R`) and the upper one is `nℤ^d + ℤ·(n u)`.
pub fn cyclic_cover(ring: &ToricRing, divisor: &TorusQDivisor) -> Result<CoverDescriptor> {
    let u = cartier_data(ring, divisor)?;
    let n = divisor_class_order(ring, divisor)?;
    if n % ring.p() == 0 {
        return Err(Error::PrimeDividesDegree { p: ring.p(), degree: n });
    }
    let d = ring.dim();
    let ni = n as i64;
    let scaled: Vec<IVec> = (0..d).map(|i| (0..d).map(|j| if i == j { ni } else { 0 }).collect()).collect();
    let mut gens = scaled.clone();
    gens.push(u.iter().map(|x| (x * int(ni)).to_integer().to_i64().expect("small")).collect());
    let lower = ToricRing::from_lattice(scaled, ring.rays().to_vec(), ring.p())?;
    let upper = ToricRing::from_lattice(hermite_normal_form(&gens), ring.rays().to_vec(), ring.p())?;
    CoverDescriptor::from_rings(lower, upper, CoverKind::Cyclic { order: n })
}

/// `π^*D`: facet coefficients multiplied by the ramification indices.
pub fn pullback(cover: &CoverDescriptor, divisor: &TorusQDivisor) -> TorusQDivisor {
    TorusQDivisor::new(
        divisor
            .coefficients
            .iter()
            .zip(&cover.ramification_indices)
            .map(|(c, &e)| c * int(e))
            .collect(),
    )
}

/// `Δ_Y = π^*Δ_X − Ram`, rejected unless effective.
pub fn pullback_pair(cover: &CoverDescriptor, delta_x: &TorusQDivisor) -> Result<TorusQDivisor> {
    if delta_x.len() != cover.lower.num_facets() {
        return Err(Error::InvalidInput("pair has the wrong number of facet coefficients".into()));
    }
    let dy = pullback(cover, delta_x).sub(&cover.ram);
    if let Some((facet, c)) = dy.coefficients.iter().enumerate().find(|(_, c)| c.is_negative()) {
        return Err(Error::NotEffective { facet, coefficient: to_fraction_string(c) });
    }
    Ok(dy)
}

pub fn ramification_divisor(cover: &CoverDescriptor) -> TorusQDivisor {
    cover.ram.clone()
}

/// `K_S − π^*K_R`, computed from canonical divisors rather than indices.
pub fn canonical_difference(cover: &CoverDescriptor) -> TorusQDivisor {
    let ks = crate::toric::canonical_divisor(&cover.upper);
    let kr = crate::toric::canonical_divisor(&cover.lower);
    ks.sub(&pullback(cover, &kr))
}

/// `R ⊆ T` from `R ⊆ S` and `S ⊆ T`.
pub fn compose(lower: &CoverDescriptor, upper: &CoverDescriptor) -> Result<CoverDescriptor> {
    if !lower.upper.same_lattice_and_cone(&upper.lower) {
        return Err(Error::InvalidInput("covers do not compose".into()));
    }
    CoverDescriptor::from_rings(lower.lower.clone(), upper.upper.clone(), CoverKind::Composite)
}

/// `Ram_{T/R} = Ram_{T/S} + π_{T/S}^* Ram_{S/R}`.
pub fn tower_additivity(lower: &CoverDescriptor, upper: &CoverDescriptor) -> Result<bool> {
    let total = compose(lower, upper)?;
    let expected = upper.ram.add(&pullback(upper, &lower.ram));
    Ok(total.ram == expected && total.degree == lower.degree * upper.degree)
}
