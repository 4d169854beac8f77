//! Numerical consequences of a positive F-signature: the order bound for the
//! local fundamental group, purity of the branch locus, and degree bounds
//! for cyclic and Veronese covers.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::covers::{cyclic_cover, divisor_class_order, etale_in_codim_one_covers, quotient_cover};
use crate::error::{Error, Result};
use crate::frobenius::SplittingSequence;
use crate::rational::{floor_reciprocal, rat, serde_fraction, Rational};
use crate::toric::{toric_fsig_exact, ToricRing, TorusQDivisor};

/// An F-signature value, exact or estimated from a finite sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SValue {
    Exact {
        #[serde(with = "serde_fraction")]
        value: Rational,
    },
    Estimate {
        #[serde(with = "serde_fraction")]
        value: Rational,
        #[serde(with = "serde_fraction")]
        low: Rational,
        #[serde(with = "serde_fraction")]
        high: Rational,
    },
}

impl SValue {
    pub fn exact(value: Rational) -> Self {
        SValue::Exact { value }
    }

    /// The extrapolated value when available, else the last term.
    pub fn from_sequence(seq: &SplittingSequence) -> Self {
        let est = &seq.estimate;
        if seq.vanishes_from.is_some() {
            return SValue::Exact { value: Rational::zero() };
        }
        let value = est.extrapolation.clone().unwrap_or_else(|| est.last.clone());
        SValue::Estimate { value, low: est.low.clone(), high: est.high.clone() }
    }

    pub fn value(&self) -> &Rational {
        match self {
            SValue::Exact { value } | SValue::Estimate { value, .. } => value,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SValue::Exact { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Order bound for the local fundamental group.
    A,
    /// Purity of the branch locus.
    C,
    #[serde(rename = "index")]
    Index,
    #[serde(rename = "veronese")]
    Veronese,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    #[serde(with = "serde_fraction")]
    pub s: Rational,
    pub exact: bool,
    /// `⌊1/s⌋`.
    pub bound: u64,
    /// Admissible degrees are prime to this characteristic.
    pub prime_to_p: u64,
    pub theorem: Theorem,
    /// Present for estimates: floors of `1/high` and `1/low`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provisional_range: Option<(u64, u64)>,
    /// Degrees `≤ bound` that are prime to `p`.
    pub admissible_degrees: Vec<u64>,
}

fn admissible(bound: u64, p: u64) -> Vec<u64> {
    (1..=bound).filter(|n| n.gcd(&p) == 1).collect()
}

fn floor_recip_u64(s: &Rational) -> u64 {
    floor_reciprocal(s).unwrap_or(u64::MAX)
}

/// `|π₁| ≤ ⌊1/s⌋` with degrees prime to `p`.
pub fn pi1_order_bound(s: &SValue, p: u64) -> Result<BoundReport> {
    let v = s.value();
    if !v.is_positive() {
        return Err(Error::NotStronglyFRegular);
    }
    if *v > Rational::one() {
        return Err(Error::InvalidInput(format!("F-signature {v} exceeds 1")));
    }
    let bound = floor_recip_u64(v);
    let provisional_range = match s {
        SValue::Exact { .. } => None,
        SValue::Estimate { low, high, .. } => {
            let hi_floor = if low.is_positive() { floor_recip_u64(low) } else { u64::MAX };
            Some((floor_recip_u64(high), hi_floor))
        }
    };
    Ok(BoundReport {
        s: v.clone(),
        exact: s.is_exact(),
        bound,
        prime_to_p: p,
        theorem: Theorem::A,
        provisional_range,
        admissible_degrees: admissible(bound.min(1 << 16), p),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PurityVerdict {
    #[serde(with = "serde_fraction")]
    pub s: Rational,
    pub exact: bool,
    #[serde(with = "serde_fraction")]
    pub threshold: Rational,
    pub purity_forced: bool,
    pub theorem: Theorem,
}

/// Purity is forced when `s > 1/2`, or `s > 1/3` in characteristic 2.
pub fn purity_verdict(s: &SValue, p: u64) -> PurityVerdict {
    let threshold = if p == 2 { rat(1, 3) } else { rat(1, 2) };
    PurityVerdict {
        s: s.value().clone(),
        exact: s.is_exact(),
        purity_forced: *s.value() > threshold,
        threshold,
        theorem: Theorem::C,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PurityReport {
    pub verdict: PurityVerdict,
    /// Degrees of nontrivial covers étale in codimension one found among the
    /// constructible cyclic covers.
    pub covers_found: Vec<u64>,
    /// A forced verdict comes with no such cover.
    pub consistent: bool,
}

/// Verdict from the exact volume plus a search over constructible covers.
pub fn purity_check(ring: &ToricRing) -> Result<PurityReport> {
    let s = SValue::exact(toric_fsig_exact(ring, None)?);
    let verdict = purity_verdict(&s, ring.p());
    let covers_found = etale_in_codim_one_covers(ring)?.degrees;
    let consistent = !verdict.purity_forced || covers_found.is_empty();
    Ok(PurityReport { verdict, covers_found, consistent })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    /// Order of the class of `D`.
    pub n: u64,
    #[serde(with = "serde_fraction")]
    pub s: Rational,
    pub bound: u64,
    pub within_bound: bool,
    pub cover_degree: u64,
    pub cover_etale_in_codim_one: bool,
    pub theorem: Theorem,
    pub holds: bool,
}

/// `n ≤ 1/s(R)` for a torsion class of order `n`, with the cyclic cover built.
pub fn index_bound(ring: &ToricRing, divisor: &TorusQDivisor) -> Result<IndexReport> {
    let n = divisor_class_order(ring, divisor)?;
    if n % ring.p() == 0 {
        return Err(Error::PrimeDividesDegree { p: ring.p(), degree: n });
    }
    let s = toric_fsig_exact(ring, None)?;
    let bound = pi1_order_bound(&SValue::exact(s.clone()), ring.p())?.bound;
    let cover = cyclic_cover(ring, divisor)?;
    let within_bound = n <= bound;
    let holds = within_bound && cover.degree == n && cover.etale_in_codim_one;
    Ok(IndexReport {
        n,
        s,
        bound,
        within_bound,
        cover_degree: cover.degree,
        cover_etale_in_codim_one: cover.etale_in_codim_one,
        theorem: Theorem::Index,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VeroneseReport {
    pub d: usize,
    pub m: u64,
    #[serde(with = "serde_fraction")]
    pub s: Rational,
    pub within_bound: bool,
    /// Generic rank of `R ⊆ 𝔽_p[x_1..x_d]`.
    pub cover_degree: u64,
    pub cover_etale_in_codim_one: bool,
    pub theorem: Theorem,
}

/// The `m`-th Veronese subring of `𝔽_p[x_1..x_d]`, i.e. `1/m(1,…,1)`.
pub fn veronese_bound(d: usize, m: u64, p: u64) -> Result<VeroneseReport> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidInput("need d ≥ 1 and m ≥ 1".into()));
    }
    let cover = quotient_cover(m, &vec![1; d], p, 1)?;
    let s = toric_fsig_exact(&cover.lower, None)?;
    let within_bound = &s * Rational::from_integer(m.into()) <= Rational::one();
    Ok(VeroneseReport {
        d,
        m,
        s,
        within_bound,
        cover_degree: cover.degree,
        cover_etale_in_codim_one: cover.etale_in_codim_one,
        theorem: Theorem::Veronese,
    })
}
