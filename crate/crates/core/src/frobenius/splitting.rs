//! Splitting ideals and splitting numbers via the Fedder-type colon formula.
//!
//! For `R = P` regular, `I_e = (𝔪^{[q]} : Π g_j^{r_j})`; for `R = P/(f)`,
//! `I_e = (𝔪^{[q]} : f^{q−1}·Π g_j^{r_j})` computed in `P`. The splitting
//! number is `a_e = λ(P/I_e)`, which equals the rank of multiplication by the
//! colon multiplier on `P/𝔪^{[q]}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ring::{PairDivisorSpec, RingKind, RingPresentation};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poly::mulmap::{multiplication_rank, MonomialQuotient};
use crate::poly::{colon_ideal_with_budget, Ideal, Monomial, Polynomial};
use crate::rational::{serde_fraction, Rational};

/// `q = p^e` and the colon multiplier `F` reduced modulo `𝔪^{[q]}`.
pub fn colon_multiplier(ring: &RingPresentation, pair: &PairDivisorSpec, e: u32) -> Result<(u64, Polynomial)> {
    if e == 0 {
        return Err(Error::InvalidInput("Frobenius exponent e must be positive".into()));
    }
    let field = ring.field();
    let q = field.checked_power(e)?;
    let n = ring.nvars();
    let keep = |m: &Monomial| m.in_box(q);
    let mut acc = match ring.kind() {
        RingKind::Regular => Polynomial::one(n, field),
        RingKind::Hypersurface(f) => f.pow_q_minus_one_truncated(e)?,
    };
    for ((g, _), r) in pair.components.iter().zip(pair.exponents(q)) {
        if g.nvars() != n {
            return Err(Error::InvalidInput("pair component lives in another ring".into()));
        }
        if r > 0 {
            let gr = g.pow_filtered(r as u64, keep)?;
            acc = acc.mul_filtered(&gr, keep);
        }
    }
    Ok((q, acc))
}

/// `I_e` as an ideal of the ambient polynomial ring, with a reduced grevlex
/// basis attached. Always contains `𝔪^{[q]}`.
pub fn splitting_ideal(ring: &RingPresentation, pair: &PairDivisorSpec, e: u32) -> Result<Ideal> {
    splitting_ideal_with_budget(ring, pair, e, &Budget::unlimited())
}

pub fn splitting_ideal_with_budget(
    ring: &RingPresentation,
    pair: &PairDivisorSpec,
    e: u32,
    budget: &Budget,
) -> Result<Ideal> {
    let (q, multiplier) = colon_multiplier(ring, pair, e)?;
    let frob = Ideal::maximal_frobenius_power(ring.nvars(), ring.field(), q)?;
    if multiplier.is_zero() {
        return Ok(Ideal::new(ring.nvars(), ring.field(), vec![Polynomial::one(ring.nvars(), ring.field())])
            .with_groebner(crate::poly::MonomialOrder::Grevlex));
    }
    colon_ideal_with_budget(&frob, &multiplier, budget)
}

/// `a_e = λ(R/I_e)`.
pub fn splitting_number(ring: &RingPresentation, pair: &PairDivisorSpec, e: u32, budget: &Budget) -> Result<u64> {
    let (q, multiplier) = colon_multiplier(ring, pair, e)?;
    rank_in_frobenius_box(ring.nvars(), q, &multiplier, budget)
}

pub(crate) fn rank_in_frobenius_box(nvars: usize, q: u64, multiplier: &Polynomial, budget: &Budget) -> Result<u64> {
    if multiplier.is_zero() {
        return Ok(0);
    }
    if multiplier.is_monomial() {
        // λ(P/⟨x_i^{max(q − a_i, 0)}⟩) = Π (q − a_i)^+.
        let m = &multiplier.terms()[0].0;
        return Ok(m.exponents().iter().map(|&a| q.saturating_sub(a as u64)).product());
    }
    let quot = MonomialQuotient::frobenius_box(nvars, q)?;
    multiplication_rank(&quot, multiplier, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingRecord {
    pub e: u32,
    pub q: u64,
    pub a_e: u64,
    /// `a_e / q^d`.
    #[serde(with = "serde_fraction")]
    pub normalized: Rational,
}

/// Limit estimate from a finite sequence. Never an exact value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimate {
    #[serde(with = "serde_fraction")]
    pub last: Rational,
    /// Two-point extrapolation under the model `a_e/q^d ≈ s + c/q`.
    #[serde(with = "serde_fraction::option")]
    pub extrapolation: Option<Rational>,
    /// With three or more points: whether the earliest point agrees with the
    /// `s + c/q` model fitted through the last two.
    pub inverse_q_model_consistent: Option<bool>,
    /// Smallest interval containing the last value and the extrapolation.
    #[serde(with = "serde_fraction")]
    pub low: Rational,
    #[serde(with = "serde_fraction")]
    pub high: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingSequence {
    pub dim: u32,
    pub records: Vec<SplittingRecord>,
    /// First `e` with `a_e = 0`. From there on every splitting number
    /// vanishes, so the limit is exactly 0.
    pub vanishes_from: Option<u32>,
    pub estimate: Estimate,
}

impl SplittingSequence {
    pub fn normalized(&self) -> Vec<Rational> {
        self.records.iter().map(|r| r.normalized.clone()).collect()
    }

    /// Whether the normalised values never increase.
    pub fn is_nonincreasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].normalized <= w[0].normalized)
    }
}

pub fn normalize(a: u64, q: u64, d: u32) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(q).pow(d))
}

/// Two-point extrapolation of `v_k ≈ s + c/q_k`.
pub fn extrapolate(q0: u64, v0: &Rational, q1: u64, v1: &Rational) -> Rational {
    let (q0r, q1r) = (Rational::from_integer(q0.into()), Rational::from_integer(q1.into()));
    (&q1r * v1 - &q0r * v0) / (q1r - q0r)
}

pub fn estimate(records: &[SplittingRecord]) -> Estimate {
    let last = records.last().map_or_else(Rational::zero, |r| r.normalized.clone());
    if records.iter().any(|r| r.a_e == 0) {
        let z = Rational::zero();
        return Estimate { last, extrapolation: Some(z.clone()), inverse_q_model_consistent: None, low: z.clone(), high: z };
    }
    let n = records.len();
    let extrapolation = (n >= 2).then(|| {
        let (a, b) = (&records[n - 2], &records[n - 1]);
        extrapolate(a.q, &a.normalized, b.q, &b.normalized)
    });
    let consistent = match (&extrapolation, n >= 3) {
        (Some(s), true) => {
            let c_of = |r: &SplittingRecord| (&r.normalized - s) * Rational::from_integer(r.q.into());
            let c = c_of(&records[n - 1]);
            let c0 = c_of(&records[n - 3]);
            let tol = Rational::new(BigInt::one(), BigInt::from(10)) * num_traits::abs(c.clone());
            Some(num_traits::abs(c0 - &c) <= tol)
        }
        _ => None,
    };
    let other = extrapolation.clone().unwrap_or_else(|| last.clone());
    let (low, high) = if other < last { (other, last.clone()) } else { (last.clone(), other) };
    Estimate { last, extrapolation, inverse_q_model_consistent: consistent, low, high }
}

/// Splitting numbers for `e = 1..=e_max` with a limit estimate.
pub fn fsig_sequence(
    ring: &RingPresentation,
    pair: &PairDivisorSpec,
    e_max: u32,
    budget: &Budget,
) -> Result<SplittingSequence> {
    if e_max == 0 {
        return Err(Error::InvalidInput("e_max must be at least 1".into()));
    }
    let d = ring.dim();
    let mut records = Vec::with_capacity(e_max as usize);
    for e in 1..=e_max {
        budget.check()?;
        let a = splitting_number(ring, pair, e, budget)?;
        let q = ring.field().checked_power(e)?;
        records.push(SplittingRecord { e, q, a_e: a, normalized: normalize(a, q, d) });
    }
    let estimate = estimate(&records);
    let vanishes_from = super::first_vanishing(&records);
    Ok(SplittingSequence { dim: d, records, vanishes_from, estimate })
}
