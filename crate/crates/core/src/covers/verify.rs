use num_traits::{Signed, Zero};
use serde::Serialize;

use super::descriptor::{pullback_pair, CoverDescriptor};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::IVec;
use crate::rational::{int, serde_fraction, Rational};
use crate::toric::{for_each_lattice_point, toric_fsig_exact, toric_fsig_sequence, ToricRing, TorusQDivisor};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvidence {
    /// Generator of `𝔫_S`, ambient exponent.
    pub generator: IVec,
    /// Coefficient of `Tr(x^h)` on `x^h` (zero when `h ∉ M_R`).
    pub coefficient: u64,
    pub in_maximal_ideal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoteTraceReport {
    pub evidence: Vec<TraceEvidence>,
    pub passed: bool,
}

/// `Tr(𝔫_S) ⊆ 𝔪_R`, checked on the Hilbert basis of the upper ring.
pub fn verify_note_trace(cover: &CoverDescriptor) -> NoteTraceReport {
    let evidence: Vec<TraceEvidence> = cover
        .upper
        .hilbert_basis()
        .iter()
        .map(|h| {
            let a = cover.upper.to_ambient(h);
            let coefficient = cover.trace.apply(&a);
            // A nonzero image is c·x^h with h a nonzero element of S_R.
            let in_maximal_ideal = coefficient == 0 || a.iter().any(|&x| x != 0);
            TraceEvidence { generator: a, coefficient, in_maximal_ideal }
        })
        .collect();
    let passed = evidence.iter().all(|e| e.in_maximal_ideal);
    NoteTraceReport { evidence, passed }
}

/// `λ_R(Tr·S / ⟨ρ ∈ Tr·S : ρ(S) ⊆ 𝔪⟩)`, zero when the trace is not onto.
///
/// `Tr(x^a ·)` escapes `𝔪_R` exactly when some `b ∈ S` has `a + b = 0` and
/// `Tr(1)` is a unit, so the length counts such monomials `a`.
pub fn count_trace_summands(cover: &CoverDescriptor) -> u64 {
    if !cover.trace.is_surjective() {
        return 0;
    }
    let upper = &cover.upper;
    let bound = upper.hilbert_region().to_vec();
    let k = bound.len();
    let mut count = 0u64;
    for_each_lattice_point(upper.rays(), &vec![0; k], &bound, |a| {
        let neg: IVec = a.iter().map(|x| -x).collect();
        if upper.contains(&neg) && cover.trace.apply(&vec![0; a.len()]) != 0 {
            count += 1;
        }
    });
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    ToricExact,
    Sequence { e_max: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub backend: Backend,
    pub exact: bool,
    pub degree: u64,
    pub residue_degree: u64,
    /// Number of Tr-summands.
    pub f: u64,
    #[serde(with = "serde_fraction")]
    pub s_lower: Rational,
    #[serde(with = "serde_fraction")]
    pub s_upper: Rational,
    /// `f·s(S, Δ_Y)`.
    #[serde(with = "serde_fraction")]
    pub lhs: Rational,
    /// `[L:K]·s(R, Δ_X)`.
    #[serde(with = "serde_fraction")]
    pub rhs: Rational,
    #[serde(with = "serde_fraction::option")]
    pub tolerance: Option<Rational>,
    pub delta_x: Option<TorusQDivisor>,
    pub delta_y: Option<TorusQDivisor>,
    pub holds: bool,
}

fn estimate_with_width(ring: &ToricRing, delta: Option<&TorusQDivisor>, e_max: u32, budget: &Budget) -> Result<(Rational, Rational, u64)> {
    let seq = toric_fsig_sequence(ring, delta, e_max, budget)?;
    let est = seq.estimate.extrapolation.clone().unwrap_or_else(|| seq.estimate.last.clone());
    let width = &seq.estimate.high - &seq.estimate.low;
    let q = seq.records.last().map_or(1, |r| r.q);
    Ok((est, width, q))
}

/// `f·s(S, Δ_Y) = [L:K]·s(R, Δ_X)` with `Δ_Y = π^*Δ_X − Ram`.
///
/// Without a pair the boundary is zero, so a cover ramified in codimension
/// one fails with [`Error::NotEffective`].
pub fn verify_transformation(
    cover: &CoverDescriptor,
    delta_x: Option<&TorusQDivisor>,
    backend: Backend,
    budget: &Budget,
) -> Result<VerificationReport> {
    let zero = TorusQDivisor::zero(cover.lower.num_facets());
    let dx = delta_x.cloned().unwrap_or(zero);
    let dy = pullback_pair(cover, &dx)?;
    let f = count_trace_summands(cover);
    let (s_lower, s_upper, tolerance) = match backend {
        Backend::ToricExact => (
            toric_fsig_exact(&cover.lower, Some(&dx))?,
            toric_fsig_exact(&cover.upper, Some(&dy))?,
            None,
        ),
        Backend::Sequence { e_max } => {
            let (sl, wl, q) = estimate_with_width(&cover.lower, Some(&dx), e_max, budget)?;
            let (su, wu, _) = estimate_with_width(&cover.upper, Some(&dy), e_max, budget)?;
            let tol = wl * int(cover.degree as i64) + wu * int(f as i64) + Rational::new(1.into(), q.into());
            (sl, su, Some(tol))
        }
    };
    if s_lower.is_zero() && delta_x.is_none() {
        return Err(Error::NotStronglyFRegular);
    }
    let lhs = &s_upper * int(f as i64);
    let rhs = &s_lower * int(cover.degree as i64);
    let holds = match &tolerance {
        None => lhs == rhs,
        Some(t) => (&lhs - &rhs).abs() <= *t,
    };
    Ok(VerificationReport {
        backend,
        exact: tolerance.is_none(),
        degree: cover.degree,
        residue_degree: cover.residue_degree,
        f,
        s_lower,
        s_upper,
        lhs,
        rhs,
        tolerance,
        delta_x: delta_x.cloned(),
        delta_y: Some(dy),
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoublingReport {
    /// False when the cover is étale everywhere (nothing to check).
    pub applicable: bool,
    #[serde(with = "serde_fraction")]
    pub s_lower: Rational,
    #[serde(with = "serde_fraction")]
    pub s_upper: Rational,
    pub holds: bool,
    /// `s(S) = 2·s(R)`.
    pub equality: bool,
}

/// `s(S) ≥ 2·s(R)` for a cover étale in codimension one but not everywhere.
pub fn doubling_check(cover: &CoverDescriptor) -> Result<DoublingReport> {
    if !cover.etale_in_codim_one {
        return Err(Error::InvalidInput("doubling needs a cover étale in codimension one".into()));
    }
    let s_lower = toric_fsig_exact(&cover.lower, None)?;
    let s_upper = toric_fsig_exact(&cover.upper, None)?;
    let applicable = !cover.is_etale();
    let twice = &s_lower * int(2);
    let holds = !applicable || s_upper >= twice;
    let equality = s_upper == twice;
    Ok(DoublingReport { applicable, s_lower, s_upper, holds, equality })
}
