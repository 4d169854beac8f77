use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use super::groebner::{exact_division, groebner_basis, reduce};
use super::monomial::{Monomial, MonomialOrder};
use super::mulmap::{colon_groebner_basis, MonomialQuotient};
use super::polynomial::Polynomial;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A polynomial ideal with an optional cached reduced Gröbner basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    field: PrimeField,
    generators: Vec<Polynomial>,
    groebner: Option<(MonomialOrder, Vec<Polynomial>)>,
}

/// `dim_{𝔽_p}(P/I)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Length {
    Finite(u64),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<u64> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(nvars: usize, field: PrimeField, generators: Vec<Polynomial>) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { nvars, field, generators, groebner: None }
    }

    pub fn from_monomials(nvars: usize, field: PrimeField, monomials: &[Monomial]) -> Self {
        let gens = monomials.iter().map(|m| Polynomial::monomial(field, m.clone(), 1)).collect();
        Ideal::new(nvars, field, gens)
    }

    /// The homogeneous maximal ideal `⟨x_1, …, x_n⟩`.
    pub fn maximal(nvars: usize, field: PrimeField) -> Self {
        let gens = (0..nvars).map(|i| Polynomial::var(nvars, field, i)).collect();
        Ideal::new(nvars, field, gens)
    }

    /// `⟨x_1^q, …, x_n^q⟩`, already a reduced Gröbner basis for any order.
    pub fn maximal_frobenius_power(nvars: usize, field: PrimeField, q: u64) -> Result<Self> {
        frobenius_power(&Ideal::maximal(nvars, field), q)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn groebner_basis(&self) -> Option<&[Polynomial]> {
        self.groebner.as_ref().map(|(_, g)| g.as_slice())
    }

    pub fn groebner_order(&self) -> Option<MonomialOrder> {
        self.groebner.as_ref().map(|(o, _)| *o)
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.generators.iter().all(Polynomial::is_monomial)
    }

    fn monomial_generators(&self) -> Option<Vec<Monomial>> {
        self.is_monomial()
            .then(|| self.generators.iter().map(|g| g.terms()[0].0.clone()).collect())
    }

    /// `I + ⟨extra⟩`, without a cached basis.
    pub fn plus(&self, extra: &[Polynomial]) -> Ideal {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(self.nvars, self.field, gens)
    }

    /// The ideal with a reduced Gröbner basis for `order` cached (computed
    /// only when missing or cached for a different order).
    pub fn with_groebner(mut self, order: MonomialOrder) -> Ideal {
        if self.groebner_order() != Some(order) {
            let gb = groebner_basis(&self.generators, order);
            self.groebner = Some((order, gb));
        }
        self
    }

    fn ensure_grevlex(&self) -> Ideal {
        self.clone().with_groebner(MonomialOrder::Grevlex)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        let i = match self.groebner {
            Some(_) => self.clone(),
            None => self.ensure_grevlex(),
        };
        normal_form(f, &i).expect("basis cached").is_zero()
    }

    /// Leading monomials of the cached Gröbner basis.
    pub fn initial_monomials(&self) -> Option<Vec<Monomial>> {
        let (order, gb) = self.groebner.as_ref()?;
        Some(gb.iter().map(|g| g.leading(*order).expect("nonzero").0.clone()).collect())
    }
}

/// The ideal generated by `I`'s generators with its reduced Gröbner basis for
/// `order` attached.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> Ideal {
    ideal.clone().with_groebner(order)
}

/// The remainder of `f` modulo `ideal`'s cached Gröbner basis.
pub fn normal_form(f: &Polynomial, ideal: &Ideal) -> Result<Polynomial> {
    let (order, gb) = ideal.groebner.as_ref().ok_or(Error::MissingGroebnerBasis)?;
    Ok(reduce(f, gb, *order))
}

/// `I^{[q]} = ⟨g^q : g ∈ gens(I)⟩` for `q` a power of `p`.
pub fn frobenius_power(ideal: &Ideal, q: u64) -> Result<Ideal> {
    let e = ideal
        .field
        .log_p(q)
        .ok_or_else(|| Error::InvalidInput(format!("{q} is not a power of p = {}", ideal.field.p())))?;
    let gens = ideal
        .generators
        .iter()
        .map(|g| g.frobenius(e))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal::new(ideal.nvars, ideal.field, gens))
}

/// `(I : f) = {g : g·f ∈ I}` with a grevlex Gröbner basis cached.
///
/// Monomial `I` and `f` use exponent arithmetic; monomial `I` of finite
/// colength uses the kernel of multiplication by `f` on `P/I`; everything
/// else goes through elimination.
pub fn colon_ideal(ideal: &Ideal, f: &Polynomial) -> Result<Ideal> {
    colon_ideal_with_budget(ideal, f, &Budget::unlimited())
}

pub fn colon_ideal_with_budget(ideal: &Ideal, f: &Polynomial, budget: &Budget) -> Result<Ideal> {
    if f.is_zero() {
        return Err(Error::InvalidInput("colon by the zero polynomial".into()));
    }
    if let Some(mons) = ideal.monomial_generators() {
        if f.is_monomial() {
            let fm = &f.terms()[0].0;
            let gens: Vec<Monomial> = mons.iter().map(|m| m.saturating_div(fm)).collect();
            return Ok(Ideal::from_monomials(ideal.nvars, ideal.field, &gens)
                .with_groebner(MonomialOrder::Grevlex));
        }
        if let Ok(quot) = MonomialQuotient::new(ideal.nvars, &mons) {
            let gb = colon_groebner_basis(&quot, f, budget)?;
            return Ok(Ideal {
                nvars: ideal.nvars,
                field: ideal.field,
                generators: gb.clone(),
                groebner: Some((MonomialOrder::Grevlex, gb)),
            });
        }
    }
    colon_ideal_by_elimination(ideal, f)
}

/// `(I : f)` as `(I ∩ ⟨f⟩)/f`, with the intersection computed by eliminating
/// `t` from `t·I + (1 − t)·⟨f⟩`.
pub fn colon_ideal_by_elimination(ideal: &Ideal, f: &Polynomial) -> Result<Ideal> {
    if f.is_zero() {
        return Err(Error::InvalidInput("colon by the zero polynomial".into()));
    }
    let n = ideal.nvars;
    let field = ideal.field;
    // Tag variable goes first so it forms the eliminated block.
    let lift = |g: &Polynomial| -> Polynomial {
        let terms = g.terms().iter().map(|(m, c)| {
            let mut e = vec![0];
            e.extend_from_slice(m.exponents());
            (Monomial::new(e), *c)
        });
        Polynomial::from_terms(n + 1, field, terms.collect::<Vec<_>>())
    };
    let t = Polynomial::var(n + 1, field, 0);
    let one_minus_t = &Polynomial::one(n + 1, field) - &t;
    let mut gens: Vec<Polynomial> = ideal.generators.iter().map(|g| &t * &lift(g)).collect();
    gens.push(&one_minus_t * &lift(f));
    let gb = groebner_basis(&gens, MonomialOrder::Elimination { block: 1 });
    let quotients = gb
        .iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.exponents()[0] == 0))
        .map(|g| {
            let terms: Vec<(Monomial, u64)> = g
                .terms()
                .iter()
                .map(|(m, c)| (Monomial::new(m.exponents()[1..].to_vec()), *c))
                .collect();
            let h = Polynomial::from_terms(n, field, terms);
            exact_division(&h, f).ok_or_else(|| {
                Error::InvalidInput("intersection element not divisible by f".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal::new(n, field, quotients).with_groebner(MonomialOrder::Grevlex))
}

/// `dim_{𝔽_p}(P/I)`, counted as standard monomials of a grevlex basis.
pub fn quotient_length(ideal: &Ideal) -> Length {
    let lead = if ideal.is_monomial() && ideal.groebner.is_none() {
        ideal.monomial_generators().expect("monomial ideal")
    } else {
        let i = if ideal.groebner.is_some() { ideal.clone() } else { ideal.ensure_grevlex() };
        i.initial_monomials().expect("basis cached")
    };
    count_standard_monomials(ideal.nvars, &lead)
}

/// Number of monomials not divisible by any of `gens`.
pub fn count_standard_monomials(nvars: usize, gens: &[Monomial]) -> Length {
    if gens.iter().any(Monomial::is_one) {
        return Length::Finite(0);
    }
    if nvars == 0 {
        return Length::Finite(1);
    }
    let gens: Vec<Vec<u32>> = gens.iter().map(|g| g.exponents().to_vec()).collect();
    match count_rec(&gens, nvars) {
        Some(n) => Length::Finite(n),
        None => Length::Infinite,
    }
}

/// Slices along the last variable: for `x_n`-exponent `k`, the standard
/// monomials are those of the projected ideal of generators with
/// `x_n`-exponent `≤ k`, which is constant between consecutive breakpoints.
fn count_rec(gens: &[Vec<u32>], n: usize) -> Option<u64> {
    if gens.iter().any(|g| g[..n].iter().all(|&e| e == 0)) {
        return Some(0);
    }
    if n == 0 {
        return Some(1);
    }
    if gens.is_empty() {
        return None;
    }
    let mut breaks: Vec<u32> = gens.iter().map(|g| g[n - 1]).collect();
    breaks.sort_unstable();
    breaks.dedup();
    let mut total = 0u64;
    for (i, &k) in breaks.iter().enumerate() {
        let projected: Vec<Vec<u32>> = gens
            .iter()
            .filter(|g| g[n - 1] <= k)
            .map(|g| g[..n - 1].to_vec())
            .collect();
        let slice = count_rec(&projected, n - 1)?;
        match breaks.get(i + 1) {
            Some(&next) => total += slice * (next - k) as u64,
            None if slice == 0 => {}
            None => return None,
        }
    }
    // Below the first breakpoint no generator applies.
    if breaks[0] > 0 {
        let free = count_rec(&[], n - 1)?;
        total += free * breaks[0] as u64;
    }
    Some(total)
}
