//! Multiplication maps on Artinian monomial quotients `P/J`.
//!
//! For a monomial ideal `J` of finite colength and a polynomial `F`, the
//! `𝔽_p`-linear map `g ↦ g·F` on `P/J` has image `(F·P + J)/J` and kernel
//! `(J : F)/J`. Both are computed here by exact linear algebra, which is how
//! splitting numbers `λ(P/(𝔪^{[q]} : F)) = rank(·F)` are evaluated.
//!
//! The map is homogeneous for the grading of `ℤ^n` modulo the lattice `L`
//! spanned by the differences of the exponent vectors of `F`: multiplication
//! sends the coset `u + L` to `u + a_0 + L`. Each coset yields an independent
//! block, which keeps the dense eliminations small.

use std::collections::HashMap;

use rayon::prelude::*;

use super::field::PrimeField;
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::{hermite_normal_form, reduce_mod, IVec};

/// Standard monomials of a finite-colength monomial ideal, indexed densely
/// inside their bounding box.
#[derive(Debug, Clone)]
pub struct MonomialQuotient {
    nvars: usize,
    generators: Vec<Monomial>,
    bounds: Vec<u32>,
    basis: Vec<Monomial>,
    slot: Vec<u32>,
}

const EMPTY: u32 = u32::MAX;

impl MonomialQuotient {
    /// `P/J` for `J` generated by the given monomials. Fails with
    /// [`Error::InfiniteLength`] unless every variable has a pure power in `J`.
    pub fn new(nvars: usize, generators: &[Monomial]) -> Result<Self> {
        let mut bounds = vec![0u32; nvars];
        for i in 0..nvars {
            bounds[i] = generators
                .iter()
                .filter(|g| g.exponents().iter().enumerate().all(|(k, &e)| k == i || e == 0))
                .map(|g| g.exponents()[i])
                .min()
                .ok_or(Error::InfiniteLength)?;
        }
        let size = bounds
            .iter()
            .try_fold(1usize, |acc, &b| acc.checked_mul(b as usize))
            .filter(|&s| s < (1 << 31))
            .ok_or_else(|| Error::InvalidInput("monomial quotient too large".into()))?;
        let mut slot = vec![EMPTY; size];
        let mut basis = Vec::new();
        let mut exps = vec![0u32; nvars];
        for code in 0..size {
            let mut c = code;
            for i in (0..nvars).rev() {
                exps[i] = (c % bounds[i] as usize) as u32;
                c /= bounds[i] as usize;
            }
            let m = Monomial::new(exps.clone());
            if !generators.iter().any(|g| g.divides(&m)) {
                slot[code] = basis.len() as u32;
                basis.push(m);
            }
        }
        Ok(MonomialQuotient { nvars, generators: generators.to_vec(), bounds, basis, slot })
    }

    /// `P/⟨x_1^q, …, x_n^q⟩`.
    pub fn frobenius_box(nvars: usize, q: u64) -> Result<Self> {
        let q = u32::try_from(q).map_err(|_| Error::InvalidInput("q too large".into()))?;
        let gens: Vec<Monomial> = (0..nvars)
            .map(|i| {
                let mut e = vec![0; nvars];
                e[i] = q;
                Monomial::new(e)
            })
            .collect();
        Self::new(nvars, &gens)
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    /// Index of `u + a` among the standard monomials, if it is standard.
    fn index_of_sum(&self, u: &[u32], a: &[u32]) -> Option<usize> {
        let mut code = 0usize;
        for i in 0..self.nvars {
            let e = u[i] as u64 + a[i] as u64;
            if e >= self.bounds[i] as u64 {
                return None;
            }
            code = code * self.bounds[i] as usize + e as usize;
        }
        match self.slot[code] {
            EMPTY => None,
            s => Some(s as usize),
        }
    }
}

struct Blocks {
    /// Standard-monomial indices per coset, sorted by descending grevlex.
    members: Vec<Vec<usize>>,
    position: Vec<usize>,
    target: Vec<Option<usize>>,
}

fn grading_lattice(f: &Polynomial) -> Vec<IVec> {
    let terms = f.terms();
    let a0: Vec<i64> = terms[0].0.exponents().iter().map(|&e| e as i64).collect();
    let diffs: Vec<IVec> = terms[1..]
        .iter()
        .map(|(m, _)| m.exponents().iter().zip(&a0).map(|(&e, z)| e as i64 - z).collect())
        .collect();
    if diffs.is_empty() {
        Vec::new()
    } else {
        hermite_normal_form(&diffs)
    }
}

fn blocks(quot: &MonomialQuotient, f: &Polynomial) -> Blocks {
    let hnf = grading_lattice(f);
    let key = |m: &Monomial| -> IVec {
        let v: IVec = m.exponents().iter().map(|&e| e as i64).collect();
        reduce_mod(&v, &hnf)
    };
    let mut ids: HashMap<IVec, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, m) in quot.basis.iter().enumerate() {
        let k = key(m);
        let id = *ids.entry(k).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[id].push(i);
    }
    let mut position = vec![0; quot.len()];
    for block in members.iter_mut() {
        block.sort_by(|&a, &b| MonomialOrder::Grevlex.cmp(&quot.basis[b], &quot.basis[a]));
        for (pos, &i) in block.iter().enumerate() {
            position[i] = pos;
        }
    }
    let a0 = &f.terms()[0].0;
    let target = members
        .iter()
        .map(|block| {
            let shifted = quot.basis[block[0]].mul(a0);
            ids.get(&key(&shifted)).copied()
        })
        .collect();
    Blocks { members, position, target }
}

fn block_matrix(quot: &MonomialQuotient, f: &Polynomial, bl: &Blocks, b: usize) -> (Vec<Vec<u64>>, usize) {
    let p = f.field().p();
    let width = bl.target[b].map_or(0, |t| bl.members[t].len());
    let rows = bl.members[b]
        .iter()
        .map(|&i| {
            let mut row = vec![0u64; width];
            if width > 0 {
                let u = quot.basis[i].exponents();
                for (a, c) in f.terms() {
                    if let Some(j) = quot.index_of_sum(u, a.exponents()) {
                        let slot = &mut row[bl.position[j]];
                        *slot = (*slot + c) % p;
                    }
                }
            }
            row
        })
        .collect();
    (rows, width)
}

/// Incremental row echelon form over `𝔽_p`.
struct Echelon {
    field: PrimeField,
    p: u64,
    pivots: Vec<Option<Vec<u64>>>,
    rank: usize,
}

impl Echelon {
    fn new(p: u64, width: usize) -> Self {
        let field = PrimeField::new(p).expect("modulus of a prime field");
        Echelon { field, p, pivots: vec![None; width], rank: 0 }
    }

    /// Reduces `row` against the stored pivots; inserts it if independent.
    /// Returns whether it was independent. Columns past the pivot width
    /// receive the same row operations, which tracks combinations.
    fn insert(&mut self, row: &mut [u64]) -> bool {
        let p = self.p;
        let width = self.pivots.len();
        for c in 0..width {
            let x = row[c];
            if x == 0 {
                continue;
            }
            match &self.pivots[c] {
                Some(piv) => {
                    let k = p - x;
                    for j in c..row.len() {
                        if piv[j] != 0 {
                            row[j] = (row[j] + k * piv[j]) % p;
                        }
                    }
                }
                None => {
                    let inv = self.field.inv(x);
                    for v in row[c..].iter_mut() {
                        *v = *v * inv % p;
                    }
                    self.pivots[c] = Some(row.to_vec());
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

fn check_inputs(quot: &MonomialQuotient, f: &Polynomial) -> Result<()> {
    if f.nvars() != quot.nvars {
        return Err(Error::InvalidInput("variable count mismatch".into()));
    }
    Ok(())
}

/// Rank of multiplication by `f` on `P/J`, i.e. `λ(P/(J : f))`.
pub fn multiplication_rank(quot: &MonomialQuotient, f: &Polynomial, budget: &Budget) -> Result<u64> {
    check_inputs(quot, f)?;
    if f.is_zero() {
        return Ok(0);
    }
    let bl = blocks(quot, f);
    let p = f.field().p();
    (0..bl.members.len())
        .into_par_iter()
        .map(|b| {
            budget.check()?;
            let (rows, width) = block_matrix(quot, f, &bl, b);
            if width == 0 {
                return Ok(0);
            }
            let mut ech = Echelon::new(p, width);
            for mut row in rows {
                ech.insert(&mut row);
                if ech.rank == width {
                    break;
                }
            }
            Ok(ech.rank as u64)
        })
        .sum()
}

/// Reduced echelon basis (pivots first in descending grevlex) of the kernel
/// of multiplication by `f` on `P/J`, as polynomials supported on standard
/// monomials. Their leading monomials are exactly the standard monomials
/// lying in the initial ideal of `(J : f)`.
pub fn multiplication_kernel(quot: &MonomialQuotient, f: &Polynomial, budget: &Budget) -> Result<Vec<Polynomial>> {
    check_inputs(quot, f)?;
    let field = f.field();
    let p = field.p();
    if f.is_zero() {
        return Ok(quot.basis.iter().map(|m| Polynomial::monomial(field, m.clone(), 1)).collect());
    }
    let bl = blocks(quot, f);
    let per_block: Vec<Vec<Polynomial>> = (0..bl.members.len())
        .into_par_iter()
        .map(|b| {
            budget.check()?;
            let (rows, width) = block_matrix(quot, f, &bl, b);
            let n = rows.len();
            // Left kernel via [A | I] elimination.
            let mut ech = Echelon::new(p, width);
            let mut kernel: Vec<Vec<u64>> = Vec::new();
            for (i, row) in rows.into_iter().enumerate() {
                let mut aug = row;
                aug.extend((0..n).map(|j| u64::from(i == j)));
                if !ech.insert(&mut aug) {
                    kernel.push(aug[width..].to_vec());
                }
            }
            // Reduced echelon form of the kernel in the domain ordering.
            let mut kech = Echelon::new(p, n);
            for mut v in kernel {
                kech.insert(&mut v);
            }
            let mut rows: Vec<(usize, Vec<u64>)> = kech
                .pivots
                .into_iter()
                .enumerate()
                .filter_map(|(c, r)| r.map(|r| (c, r)))
                .collect();
            for k in (0..rows.len()).rev() {
                let (ck, rk) = (rows[k].0, rows[k].1.clone());
                for (_, r) in rows[..k].iter_mut() {
                    let x = r[ck];
                    if x != 0 {
                        for j in ck..n {
                            r[j] = (r[j] + (p - x) * rk[j]) % p;
                        }
                    }
                }
            }
            let members = &bl.members[b];
            Ok(rows
                .into_iter()
                .map(|(_, r)| {
                    let terms: Vec<(Monomial, u64)> = r
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(j, &c)| (quot.basis[members[j]].clone(), c))
                        .collect();
                    Polynomial::from_terms(quot.nvars, field, terms)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_block.into_iter().flatten().collect())
}

/// Reduced grevlex Gröbner basis of `(J : f)` assembled from the kernel of
/// multiplication by `f` on `P/J`.
pub fn colon_groebner_basis(quot: &MonomialQuotient, f: &Polynomial, budget: &Budget) -> Result<Vec<Polynomial>> {
    let field = f.field();
    let kernel = multiplication_kernel(quot, f, budget)?;
    let order = MonomialOrder::Grevlex;
    let mut candidates: Vec<(Monomial, Option<Polynomial>)> = quot
        .generators
        .iter()
        .map(|g| (g.clone(), None))
        .chain(kernel.into_iter().map(|k| {
            let lm = k.leading(order).expect("kernel vectors are nonzero").0.clone();
            (lm, Some(k))
        }))
        .collect();
    candidates.sort_by(|a, b| order.cmp(&a.0, &b.0));
    let mut minimal: Vec<(Monomial, Option<Polynomial>)> = Vec::new();
    for c in candidates {
        if !minimal.iter().any(|(m, _)| m.divides(&c.0)) {
            minimal.push(c);
        }
    }
    minimal.sort_by(|a, b| order.cmp(&b.0, &a.0));
    Ok(minimal
        .into_iter()
        .map(|(m, k)| k.unwrap_or_else(|| Polynomial::monomial(field, m, 1)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_polynomial;

    #[test]
    fn box_quotient_has_q_to_the_n_monomials() {
        let q = MonomialQuotient::frobenius_box(3, 4).unwrap();
        assert_eq!(q.len(), 64);
    }

    #[test]
    fn infinite_colength_is_rejected() {
        let gens = [Monomial::new(vec![2, 0]), Monomial::new(vec![1, 1])];
        assert!(matches!(MonomialQuotient::new(2, &gens), Err(Error::InfiniteLength)));
    }

    #[test]
    fn rank_of_monomial_multiplier() {
        let f = PrimeField::new(5).unwrap();
        let q = MonomialQuotient::frobenius_box(2, 5).unwrap();
        let x2 = parse_polynomial("x0^2", 2, f).unwrap();
        // λ(P/⟨x^3, y^5⟩) = 15.
        assert_eq!(multiplication_rank(&q, &x2, &Budget::unlimited()).unwrap(), 15);
    }

    #[test]
    fn kernel_plus_rank_is_dimension() {
        let f = PrimeField::new(3).unwrap();
        let q = MonomialQuotient::frobenius_box(3, 3).unwrap();
        let g = parse_polynomial("(x0*x1 - x2^2)^2", 3, f).unwrap();
        let b = Budget::unlimited();
        let r = multiplication_rank(&q, &g, &b).unwrap();
        let k = multiplication_kernel(&q, &g, &b).unwrap();
        assert_eq!(r as usize + k.len(), q.len());
    }
}
