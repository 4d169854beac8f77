//! Free summands of `F^e_* R` for toric `R`, class by class, and the exact
//! limit as a polytope volume.
//!
//! `F^e_* R` splits over the classes `u ∈ M/qM`; the summand for `u` is the
//! module of lattice points of `S` congruent to `u`, over `qS`. It is free
//! exactly when it has a single minimal element `w`, and then `w` has every
//! pairing `⟨w, v_i⟩` in `[0, q)`. With a boundary `Δ = Σ t_i D_i` the free
//! summand counts only when `⟨w, v_i⟩ ≤ q − 1 − ⌊q t_i⌋` for every facet.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::cone::{caratheodory_bound, for_each_lattice_point, subsets};
use super::{ToricRing, TorusQDivisor};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::frobenius::{estimate, normalize, SplittingRecord, SplittingSequence};
use crate::lattice::{det, rank, rref, IVec, QMat};
use crate::poly::PrimeField;
use crate::rational::{floor_i64, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClassStatus {
    /// `(u + qM) ∩ S = w + qS`.
    Free { generator: IVec },
    /// Two distinct minimal elements of the class.
    NotFree { obstruction: (IVec, IVec) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeClassCertificate {
    /// Representative of `u ∈ M/qM` with coordinates in `[0, q)`.
    pub class: IVec,
    pub status: ClassStatus,
    /// Whether the class contributes to `a_e^Δ`.
    pub counted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricSplitting {
    pub e: u32,
    pub q: u64,
    pub a_e: u64,
    /// Free classes ignoring the boundary.
    pub free_classes: u64,
    /// Points with `0 ≤ ⟨m, v_i⟩ < region_bound[i]` were searched; every
    /// minimal element of every class lies there.
    pub region_bound: Vec<i64>,
    pub certificates: Vec<FreeClassCertificate>,
}

fn boundary_caps(ring: &ToricRing, delta: Option<&TorusQDivisor>, q: u64) -> Result<Vec<i64>> {
    let k = ring.num_facets();
    let qi = q as i64;
    match delta {
        None => Ok(vec![qi - 1; k]),
        Some(d) => {
            d.check_boundary(ring)?;
            Ok(d.coefficients.iter().map(|t| qi - 1 - floor_i64(&(t * int(qi)))).collect())
        }
    }
}

fn frobenius_q(ring: &ToricRing, e: u32) -> Result<u64> {
    if e == 0 {
        return Err(Error::InvalidInput("Frobenius exponent e must be positive".into()));
    }
    PrimeField::new(ring.p())?.checked_power(e)
}

/// `a_e^Δ` as the number of lattice points `w` with
/// `0 ≤ ⟨w, v_i⟩ ≤ q − 1 − ⌊q t_i⌋`.
pub fn toric_splitting_count(ring: &ToricRing, delta: Option<&TorusQDivisor>, e: u32) -> Result<u64> {
    let q = frobenius_q(ring, e)?;
    let caps = boundary_caps(ring, delta, q)?;
    let mut n = 0u64;
    for_each_lattice_point(ring.rays(), &vec![0; caps.len()], &caps, |_| n += 1);
    Ok(n)
}

/// Classifies every class of `M/qM` from the minimal elements found in a
/// region large enough to contain all of them.
pub fn toric_splitting_number(
    ring: &ToricRing,
    delta: Option<&TorusQDivisor>,
    e: u32,
    budget: &Budget,
) -> Result<ToricSplitting> {
    let q = frobenius_q(ring, e)?;
    let caps = boundary_caps(ring, delta, q)?;
    let d = ring.dim();
    let qi = i64::try_from(q).map_err(|_| Error::ExponentOverflow { p: ring.p(), e })?;
    let region_bound = caratheodory_bound(ring.rays(), ring.dual_rays(), qi);
    let upper: Vec<i64> = region_bound.iter().map(|b| b - 1).collect();
    let mut minimal: HashMap<IVec, Vec<(IVec, IVec)>> = HashMap::new();
    let mut visited = 0u64;
    let mut aborted = None;
    for_each_lattice_point(ring.rays(), &vec![0; upper.len()], &upper, |m| {
        if aborted.is_some() {
            return;
        }
        visited += 1;
        if visited.is_multiple_of(65536) {
            if let Err(e) = budget.check() {
                aborted = Some(e);
                return;
            }
        }
        let key: IVec = m.iter().map(|x| x.rem_euclid(qi)).collect();
        let pair = ring.pairings(m);
        let mins = minimal.entry(key).or_default();
        if mins.iter().any(|(_, p)| p.iter().zip(&pair).all(|(a, b)| a <= b)) {
            return;
        }
        mins.retain(|(_, p)| !pair.iter().zip(p).all(|(a, b)| a <= b));
        mins.push((m.to_vec(), pair));
    });
    if let Some(e) = aborted {
        return Err(e);
    }
    let expected = q.checked_pow(d as u32).ok_or(Error::ExponentOverflow { p: ring.p(), e })?;
    if minimal.len() as u64 != expected {
        return Err(Error::RegionInsufficient(format!(
            "found {} of {expected} residue classes in the search region",
            minimal.len()
        )));
    }
    let mut certificates: Vec<FreeClassCertificate> = minimal
        .into_iter()
        .map(|(class, mut mins)| {
            mins.sort();
            if mins.len() == 1 {
                let (w, pair) = mins.pop().expect("one element");
                let counted = pair.iter().zip(&caps).all(|(a, c)| a <= c);
                FreeClassCertificate { class, status: ClassStatus::Free { generator: w }, counted }
            } else {
                let obstruction = (mins[0].0.clone(), mins[1].0.clone());
                FreeClassCertificate { class, status: ClassStatus::NotFree { obstruction }, counted: false }
            }
        })
        .collect();
    certificates.sort_by(|a, b| a.class.cmp(&b.class));
    let free_classes = certificates.iter().filter(|c| matches!(c.status, ClassStatus::Free { .. })).count() as u64;
    let a_e = certificates.iter().filter(|c| c.counted).count() as u64;
    Ok(ToricSplitting { e, q, a_e, free_classes, region_bound, certificates })
}

/// Sequence `a_e^Δ/q^d` from the direct count.
pub fn toric_fsig_sequence(
    ring: &ToricRing,
    delta: Option<&TorusQDivisor>,
    e_max: u32,
    budget: &Budget,
) -> Result<SplittingSequence> {
    if e_max == 0 {
        return Err(Error::InvalidInput("e_max must be at least 1".into()));
    }
    let d = ring.dim() as u32;
    let mut records = Vec::new();
    for e in 1..=e_max {
        budget.check()?;
        let q = frobenius_q(ring, e)?;
        let a = toric_splitting_count(ring, delta, e)?;
        records.push(SplittingRecord { e, q, a_e: a, normalized: normalize(a, q, d) });
    }
    let estimate = estimate(&records);
    let vanishes_from = crate::frobenius::first_vanishing(&records);
    Ok(SplittingSequence { dim: d, records, vanishes_from, estimate })
}

/// `vol{u ∈ M_ℝ : 0 ≤ ⟨u, v_i⟩ ≤ 1 − t_i}` with `M` of covolume one.
pub fn toric_fsig_exact(ring: &ToricRing, delta: Option<&TorusQDivisor>) -> Result<Rational> {
    let k = ring.num_facets();
    let tops: Vec<Rational> = match delta {
        None => vec![Rational::one(); k],
        Some(dl) => {
            dl.check_boundary(ring)?;
            dl.coefficients.iter().map(|t| Rational::one() - t).collect()
        }
    };
    let mut constraints: Vec<(Vec<Rational>, Rational)> = Vec::with_capacity(2 * k);
    for (v, top) in ring.rays().iter().zip(&tops) {
        let vq: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
        constraints.push((vq.clone(), Rational::zero()));
        constraints.push((vq, top.clone()));
    }
    Ok(polytope_volume(&constraints, ring.dim()))
}

/// Volume of the bounded polytope `{x : 0 ≤ ⟨a_j, x⟩ ≤ b_j}` given as
/// alternating lower/upper constraint rows `(a, b)` where the lower bound is
/// `b = 0` on even rows. Zero when the polytope is not full-dimensional.
pub(crate) fn polytope_volume(constraints: &[(Vec<Rational>, Rational)], d: usize) -> Rational {
    let vertices = vertices(constraints, d);
    if vertices.is_empty() || affine_rank(&vertices, &(0..vertices.len()).collect::<Vec<_>>()) < d {
        return Rational::zero();
    }
    let tight: Vec<Vec<bool>> = vertices
        .iter()
        .map(|x| constraints.iter().map(|(a, b)| eval(a, x) == *b).collect())
        .collect();
    let all: Vec<usize> = (0..vertices.len()).collect();
    let simplices = triangulate(&all, d, &vertices, &tight);
    let mut total = Rational::zero();
    for s in &simplices {
        let base = &vertices[s[0]];
        let m: QMat = s[1..].iter().map(|&i| vertices[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        total += det(&m).abs();
    }
    let fact: BigInt = (1..=d as u64).map(BigInt::from).product();
    total / Rational::from_integer(fact)
}

fn eval(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter().zip(x).map(|(u, v)| u * v).sum()
}

fn vertices(constraints: &[(Vec<Rational>, Rational)], d: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for idx in subsets(constraints.len(), d) {
        let mut aug: QMat = idx
            .iter()
            .map(|&i| {
                let mut row = constraints[i].0.clone();
                row.push(constraints[i].1.clone());
                row
            })
            .collect();
        let piv = rref(&mut aug);
        if piv.len() != d || piv.contains(&d) {
            continue;
        }
        let x: Vec<Rational> = (0..d).map(|r| aug[r][d].clone()).collect();
        let feasible = constraints.chunks(2).all(|pair| {
            let v = eval(&pair[0].0, &x);
            !v.is_negative() && v <= pair[1].1
        });
        if feasible && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn affine_rank(vertices: &[Vec<Rational>], idx: &[usize]) -> usize {
    if idx.len() <= 1 {
        return 0;
    }
    let base = &vertices[idx[0]];
    let diffs: QMat = idx[1..].iter().map(|&i| vertices[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    rank(&diffs)
}

/// Pulling triangulation: cone the first vertex over the triangulated facets
/// of the face that avoid it.
fn triangulate(face: &[usize], dim: usize, vertices: &[Vec<Rational>], tight: &[Vec<bool>]) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let ncons = tight[0].len();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for c in 0..ncons {
        let sub: Vec<usize> = face.iter().copied().filter(|&v| tight[v][c]).collect();
        if sub.len() == face.len() || sub.len() < dim || sub.contains(&apex) || facets.contains(&sub) {
            continue;
        }
        if affine_rank(vertices, &sub) == dim - 1 {
            facets.push(sub);
        }
    }
    let mut out = Vec::new();
    for f in facets {
        for mut s in triangulate(&f, dim - 1, vertices, tight) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

/// Smallest `C ≥ 0` with `|a_e/q^d − s| ≤ C/q` over the sequence.
pub fn fitted_constant(seq: &SplittingSequence, exact: &Rational) -> Rational {
    seq.records
        .iter()
        .map(|r| (&r.normalized - exact).abs() * int(r.q as i64))
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Checks a free certificate: `w` lies in its class and in `S`, every
/// Hilbert-basis translate `w + q h` stays in the class, and `w` is below
/// every class element with all pairings under `bound`.
pub fn verify_certificate(ring: &ToricRing, cert: &FreeClassCertificate, q: u64, bound: &[i64]) -> bool {
    let qi = q as i64;
    let in_class = |m: &[i64]| m.iter().zip(&cert.class).all(|(a, c)| a.rem_euclid(qi) == *c);
    match &cert.status {
        ClassStatus::Free { generator: w } => {
            if !in_class(w) || !ring.contains(w) {
                return false;
            }
            let translates_ok = ring.hilbert_basis().iter().all(|h| {
                let m: IVec = w.iter().zip(h).map(|(a, b)| a + qi * b).collect();
                in_class(&m) && ring.contains(&m)
            });
            let wp = ring.pairings(w);
            let upper: Vec<i64> = bound.iter().map(|b| b - 1).collect();
            let mut dominated = true;
            for_each_lattice_point(ring.rays(), &vec![0; upper.len()], &upper, |m| {
                if in_class(m) && !ring.pairings(m).iter().zip(&wp).all(|(a, b)| a >= b) {
                    dominated = false;
                }
            });
            translates_ok && dominated
        }
        ClassStatus::NotFree { obstruction: (a, b) } => {
            let (pa, pb) = (ring.pairings(a), ring.pairings(b));
            in_class(a)
                && in_class(b)
                && ring.contains(a)
                && ring.contains(b)
                && a != b
                && !pa.iter().zip(&pb).all(|(x, y)| x <= y)
                && !pb.iter().zip(&pa).all(|(x, y)| x <= y)
        }
    }
}
