use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::PrimeField;
use super::monomial::{default_names, Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// A polynomial over `𝔽_p` in a fixed number of variables.
///
/// Terms are stored with nonzero coefficients only, sorted by descending
/// grevlex order, so equal polynomials have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    field: PrimeField,
    terms: Vec<(Monomial, u64)>,
}

impl Polynomial {
    pub fn zero(nvars: usize, field: PrimeField) -> Self {
        Polynomial { nvars, field, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, field: PrimeField, c: i64) -> Self {
        Self::from_terms(nvars, field, [(Monomial::one(nvars), field.from_i64(c))])
    }

    pub fn one(nvars: usize, field: PrimeField) -> Self {
        Self::constant(nvars, field, 1)
    }

    pub fn var(nvars: usize, field: PrimeField, i: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, i), 1)
    }

    pub fn monomial(field: PrimeField, m: Monomial, c: u64) -> Self {
        let nvars = m.nvars();
        Self::from_terms(nvars, field, [(m, c)])
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(
        nvars: usize,
        field: PrimeField,
        terms: impl IntoIterator<Item = (Monomial, u64)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            let e = acc.entry(m).or_insert(0);
            *e = field.add(*e, c % field.p());
        }
        Self::from_map(nvars, field, acc)
    }

    fn from_map(nvars: usize, field: PrimeField, acc: HashMap<Monomial, u64>) -> Self {
        let mut terms: Vec<(Monomial, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| MonomialOrder::Grevlex.cmp(&b.0, &a.0));
        Polynomial { nvars, field, terms }
    }

    /// Trusted constructor for terms already sorted by descending grevlex
    /// with nonzero coefficients.
    pub(crate) fn from_sorted(nvars: usize, field: PrimeField, terms: Vec<(Monomial, u64)>) -> Self {
        Polynomial { nvars, field, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    /// Constant term vanishes, i.e. the polynomial lies in the homogeneous
    /// maximal ideal.
    pub fn in_maximal_ideal(&self) -> bool {
        self.terms.iter().all(|(m, _)| !m.is_one())
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn coefficient(&self, m: &Monomial) -> u64 {
        self.terms.iter().find(|(t, _)| t == m).map_or(0, |(_, c)| *c)
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<&(Monomial, u64)> {
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different rings");
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn scale(&self, c: u64) -> Polynomial {
        let c = c % self.field.p();
        if c == 0 {
            return Polynomial::zero(self.nvars, self.field);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.field.mul(*a, c)))
            .collect();
        Polynomial::from_sorted(self.nvars, self.field, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        // Multiplying by a monomial preserves any monomial order.
        let terms = self.terms.iter().map(|(t, c)| (t.mul(m), *c)).collect();
        Polynomial::from_sorted(self.nvars, self.field, terms)
    }

    /// Product, keeping only monomials accepted by `keep`. Since the
    /// discarded monomials span an ideal, this computes products in the
    /// quotient by that monomial ideal.
    pub fn mul_filtered(&self, other: &Polynomial, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        self.check_compatible(other);
        let f = self.field;
        let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m = a.mul(b);
                if keep(&m) {
                    let e = acc.entry(m).or_insert(0);
                    *e = f.add(*e, f.mul(*ca, *cb));
                }
            }
        }
        Polynomial::from_map(self.nvars, f, acc)
    }

    pub fn checked_pow(&self, k: u64) -> Result<Polynomial> {
        self.pow_filtered(k, |_| true)
    }

    /// `self^k` computed in the quotient by the monomial ideal of rejected
    /// monomials.
    pub fn pow_filtered(&self, mut k: u64, keep: impl Fn(&Monomial) -> bool + Copy) -> Result<Polynomial> {
        if let Some(d) = self.total_degree() {
            if d.checked_mul(k).is_none_or(|t| t >= u32::MAX as u64) {
                return Err(Error::InvalidInput(format!("degree overflow raising to {k}")));
            }
        }
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.nvars, self.field);
        acc.terms.retain(|(m, _)| keep(m));
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_filtered(&base, keep);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_filtered(&base, keep);
            }
        }
        Ok(acc)
    }

    /// `self^{p^k}`: coefficients are fixed by Frobenius on `𝔽_p`, so this is
    /// exponent scaling.
    pub fn frobenius(&self, k: u32) -> Result<Polynomial> {
        let q = self.field.p().checked_pow(k).ok_or(Error::ExponentOverflow { p: self.field.p(), e: k })?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.checked_scale(q)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        // Scaling all exponents by a positive constant preserves grevlex.
        Ok(Polynomial::from_sorted(self.nvars, self.field, terms))
    }

    /// `self^{q-1}` modulo `⟨x_1^q, …, x_n^q⟩` for `q = p^e`, using
    /// `q - 1 = (p - 1)(1 + p + … + p^{e-1})`.
    pub fn pow_q_minus_one_truncated(&self, e: u32) -> Result<Polynomial> {
        let q = self.field.checked_power(e)?;
        let keep = |m: &Monomial| m.in_box(q);
        let base = self.pow_filtered(self.field.p() - 1, keep)?;
        let mut acc = Polynomial::one(self.nvars, self.field);
        for i in 0..e {
            let mut factor = base.frobenius(i)?;
            factor.terms.retain(|(m, _)| keep(m));
            acc = acc.mul_filtered(&factor, keep);
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Drops every term with an exponent `≥ q`.
    pub fn truncate_box(&self, q: u64) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.in_box(q)).cloned().collect();
        Polynomial::from_sorted(self.nvars, self.field, terms)
    }

    /// Embeds into a ring with `extra` more variables appended.
    pub fn extend_vars(&self, extra: usize) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.extended(extra), *c)).collect();
        Polynomial::from_sorted(self.nvars + extra, self.field, terms)
    }

    /// Drops the trailing `k` variables, which must not occur.
    pub fn restrict_vars(&self, k: usize) -> Polynomial {
        let n = self.nvars - k;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.exponents()[n..].iter().all(|&e| e == 0));
                (Monomial::new(m.exponents()[..n].to_vec()), *c)
            })
            .collect::<Vec<_>>();
        Polynomial::from_terms(n, self.field, terms)
    }

    /// Canonical rendering with the given variable names, terms in
    /// descending grevlex order and coefficients as residues in `[0, p)`.
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| match (m.is_one(), *c) {
                (true, c) => c.to_string(),
                (false, 1) => m.fmt_with(names),
                (false, c) => format!("{}*{}", c, m.fmt_with(names)),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_names(self.nvars)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        Polynomial::from_terms(
            self.nvars,
            self.field,
            self.terms.iter().chain(&rhs.terms).cloned(),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(self.field.p() - 1)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_filtered(rhs, |_| true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let f = f5();
        let x = Polynomial::var(2, f, 0);
        let d = &(&x + &x) - &x.scale(2);
        assert!(d.is_zero());
        assert_eq!(x.scale(5), Polynomial::zero(2, f));
    }

    #[test]
    fn freshman_dream_in_characteristic_p() {
        let f = f5();
        let s = &Polynomial::var(2, f, 0) + &Polynomial::var(2, f, 1);
        let p5 = s.checked_pow(5).unwrap();
        assert_eq!(p5, s.frobenius(1).unwrap());
        assert_eq!(p5.to_string(), "x0^5 + x1^5");
    }

    #[test]
    fn truncated_power_matches_full_power_mod_box() {
        let f = PrimeField::new(3).unwrap();
        let x = Polynomial::var(3, f, 0);
        let y = Polynomial::var(3, f, 1);
        let z = Polynomial::var(3, f, 2);
        let g = &(&x * &y) - &(&z * &z);
        let full = g.checked_pow(8).unwrap().truncate_box(9);
        assert_eq!(g.pow_q_minus_one_truncated(2).unwrap(), full);
    }
}
