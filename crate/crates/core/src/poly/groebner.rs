//! Buchberger's algorithm with the coprime and chain criteria.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use super::field::PrimeField;
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;

type Terms = Vec<(Monomial, u64)>;

fn sorted_terms(p: &Polynomial, order: MonomialOrder) -> Terms {
    let mut t = p.terms().to_vec();
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    t
}

fn make_monic(t: &mut Terms, field: PrimeField) {
    if let Some(&(_, lc)) = t.first() {
        if lc != 1 {
            let inv = field.inv(lc);
            for (_, c) in t.iter_mut() {
                *c = field.mul(*c, inv);
            }
        }
    }
}

/// `a - c·m·b`, all sorted descending in `order`.
fn sub_scaled(a: &[(Monomial, u64)], c: u64, m: &Monomial, b: &[(Monomial, u64)], order: MonomialOrder, field: PrimeField) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(t, k)| (t.mul(m), field.neg(field.mul(*k, c)))).peekable();
    while i < a.len() || bi.peek().is_some() {
        let ord = match (a.get(i), bi.peek()) {
            (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            (Some(_), None) => Ordering::Greater,
            (None, _) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => out.push(bi.next().expect("peeked")),
            Ordering::Equal => {
                let (t, k) = bi.next().expect("peeked");
                let s = field.add(a[i].1, k);
                if s != 0 {
                    out.push((t, s));
                }
                i += 1;
            }
        }
    }
    out
}

/// Full reduction of `f` by `basis` (all sorted in `order`, basis monic).
fn reduce_terms(f: Terms, basis: &[Terms], order: MonomialOrder, field: PrimeField) -> Terms {
    let mut p = f;
    let mut start = 0;
    let mut rem = Vec::new();
    while start < p.len() {
        let (lm, lc) = (&p[start].0, p[start].1);
        match basis.iter().find(|g| g[0].0.divides(lm)) {
            Some(g) => {
                let m = g[0].0.quotient_of(lm);
                p = sub_scaled(&p[start..], lc, &m, g, order, field);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

fn s_polynomial(f: &Terms, g: &Terms, order: MonomialOrder, field: PrimeField) -> Terms {
    let l = f[0].0.lcm(&g[0].0);
    let mf = f[0].0.quotient_of(&l);
    let mg = g[0].0.quotient_of(&l);
    let fm: Terms = f.iter().map(|(t, c)| (t.mul(&mf), *c)).collect();
    sub_scaled(&fm, 1, &mg, g, order, field)
}

fn to_polynomial(t: Terms, nvars: usize, field: PrimeField) -> Polynomial {
    Polynomial::from_terms(nvars, field, t)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// descending leading monomial. All generators must share a ring.
pub fn groebner_basis(gens: &[Polynomial], order: MonomialOrder) -> Vec<Polynomial> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let nvars = first.nvars();
    let field = first.field();

    let mut basis: Vec<Terms> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut queue: BinaryHeap<Reverse<(u64, usize, usize)>> = BinaryHeap::new();

    let add = |h: Terms, basis: &mut Vec<Terms>, pending: &mut HashSet<(usize, usize)>, queue: &mut BinaryHeap<Reverse<(u64, usize, usize)>>| {
        let k = basis.len();
        for i in 0..k {
            let l = basis[i][0].0.lcm(&h[0].0).degree();
            pending.insert((i, k));
            queue.push(Reverse((l, i, k)));
        }
        basis.push(h);
    };

    for g in gens {
        let mut t = reduce_terms(sorted_terms(g, order), &basis, order, field);
        if t.is_empty() {
            continue;
        }
        make_monic(&mut t, field);
        if t[0].0.is_one() {
            return vec![Polynomial::one(nvars, field)];
        }
        add(t, &mut basis, &mut pending, &mut queue);
    }

    while let Some(Reverse((_, i, j))) = queue.pop() {
        if !pending.remove(&(i, j)) {
            continue;
        }
        let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
        if li.is_coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].0.divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order, field);
        let mut h = reduce_terms(s, &basis, order, field);
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h, field);
        if h[0].0.is_one() {
            return vec![Polynomial::one(nvars, field)];
        }
        add(h, &mut basis, &mut pending, &mut queue);
    }

    // Minimalise, then interreduce tails.
    basis.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut minimal: Vec<Terms> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| h[0].0.divides(&g[0].0)) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Terms> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, g)| g.clone())
            .collect();
        let g = &minimal[i];
        let tail = reduce_terms(g[1..].to_vec(), &others, order, field);
        let mut t = vec![g[0].clone()];
        t.extend(tail);
        reduced.push(t);
    }
    reduced.sort_by(|a, b| order.cmp(&b[0].0, &a[0].0));
    reduced.into_iter().map(|t| to_polynomial(t, nvars, field)).collect()
}

/// Remainder of `f` on division by a Gröbner basis for `order`.
pub fn reduce(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let field = f.field();
    let gb: Vec<Terms> = basis
        .iter()
        .map(|g| {
            let mut t = sorted_terms(g, order);
            make_monic(&mut t, field);
            t
        })
        .collect();
    let r = reduce_terms(sorted_terms(f, order), &gb, order, field);
    to_polynomial(r, f.nvars(), field)
}

/// Exact quotient `f / g`, or `None` if `g` does not divide `f`.
pub fn exact_division(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    let order = MonomialOrder::Grevlex;
    let field = f.field();
    let gt = sorted_terms(g, order);
    let (glm, glc) = gt.first()?.clone();
    let ginv = field.inv(glc);
    let mut p = sorted_terms(f, order);
    let mut quotient = Vec::new();
    while let Some((lm, lc)) = p.first().cloned() {
        if !glm.divides(&lm) {
            return None;
        }
        let m = glm.quotient_of(&lm);
        let c = field.mul(lc, ginv);
        p = sub_scaled(&p, c, &m, &gt, order, field);
        quotient.push((m, c));
    }
    Some(Polynomial::from_terms(f.nvars(), field, quotient))
}
