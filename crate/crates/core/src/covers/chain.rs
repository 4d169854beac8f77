use std::collections::BTreeSet;

use num_traits::One;
use serde::Serialize;

use super::descriptor::{cyclic_cover, quotient_cover, CoverDescriptor};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::lattice::{dot, gcd_all, hermite_normal_form, hnf_index, IVec};
use crate::rational::{int, serde_fraction, Rational};
use crate::toric::{toric_fsig_exact, ToricRing, TorusQDivisor};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    /// Group orders `n → m` of the step `k[x]^{μ_n} ⊆ k[x]^{μ_m}`.
    pub from: u64,
    pub to: u64,
    pub degree: u64,
    pub etale_in_codim_one: bool,
    #[serde(with = "serde_fraction")]
    pub s_lower: Rational,
    #[serde(with = "serde_fraction")]
    pub s_upper: Rational,
    /// `s_upper = degree · s_lower`; only meaningful when étale in codim 1.
    pub transformation_holds: bool,
    /// `s_upper ≥ 2 s_lower`; only asserted when étale in codim 1.
    pub doubling_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub orders: Vec<u64>,
    pub steps: Vec<ChainStep>,
    /// Number of steps until the ring stops changing.
    pub stabilization_index: usize,
    pub reaches_regular: bool,
    /// `2^index ≤ 1/s(start)`.
    pub index_within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub n: u64,
    pub weights: Vec<u64>,
    pub p: u64,
    #[serde(with = "serde_fraction")]
    pub s_start: Rational,
    pub chains: Vec<Chain>,
    pub all_pass: bool,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Maximal chains `n = n_0 > n_1 > … > n_k = 1` of divisors, each step a
/// prime quotient.
pub fn maximal_divisor_chains(n: u64) -> Vec<Vec<u64>> {
    fn go(cur: u64, path: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur == 1 {
            out.push(path.clone());
            return;
        }
        let primes: BTreeSet<u64> = prime_factors(cur).into_iter().collect();
        for p in primes {
            path.push(cur / p);
            go(cur / p, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut vec![n], &mut out);
    out
}

/// Walks every maximal chain of subgroups `μ_n ⊃ … ⊃ 1` upward through the
/// intermediate invariant rings.
pub fn chain_simulation(n: u64, weights: &[u64], p: u64, budget: &Budget) -> Result<ChainReport> {
    let start = ToricRing::quotient_singularity(n, weights, p)?;
    let s_start = toric_fsig_exact(&start, None)?;
    let mut chains = Vec::new();
    for orders in maximal_divisor_chains(n) {
        let mut steps = Vec::new();
        for w in orders.windows(2) {
            budget.check()?;
            let (a, b) = (w[0], w[1]);
            let reduced: Vec<u64> = weights.iter().map(|x| x % a).collect();
            let cover = quotient_cover(a, &reduced, p, b)?;
            let s_lower = toric_fsig_exact(&cover.lower, None)?;
            let s_upper = toric_fsig_exact(&cover.upper, None)?;
            let transformation_holds = !cover.etale_in_codim_one || s_upper == &s_lower * int(cover.degree as i64);
            let doubling_holds = !cover.etale_in_codim_one || cover.is_etale() || s_upper >= &s_lower * int(2);
            steps.push(ChainStep {
                from: a,
                to: b,
                degree: cover.degree,
                etale_in_codim_one: cover.etale_in_codim_one,
                s_lower,
                s_upper,
                transformation_holds,
                doubling_holds,
            });
        }
        let stabilization_index = steps.iter().rposition(|s| s.degree > 1).map_or(0, |i| i + 1);
        let reaches_regular = steps.last().map_or(s_start.is_one(), |s| s.s_upper.is_one());
        let all_small = steps.iter().all(|s| s.etale_in_codim_one);
        let index_within_bound = !all_small || &s_start * int(1i64 << stabilization_index.min(62)) <= Rational::one();
        chains.push(Chain { orders, steps, stabilization_index, reaches_regular, index_within_bound });
    }
    let all_pass = chains.iter().all(|c| {
        c.reaches_regular
            && c.index_within_bound
            && c.steps.iter().all(|s| s.transformation_holds && s.doubling_holds)
    });
    Ok(ChainReport { n, weights: weights.to_vec(), p, s_start, chains, all_pass })
}

/// Representatives of `M'/M` where `M' = {u : ⟨u, v_i⟩ ∈ ℤ for all i}`,
/// scaled by `N = [M' : M]` so they are integral.
fn dual_ray_lattice_quotient(ring: &ToricRing) -> (i64, Vec<IVec>) {
    let n_prime = hermite_normal_form(ring.rays());
    let index = hnf_index(&n_prime).expect("rays span") as i64;
    let d = ring.dim();
    let mut reps = Vec::new();
    let mut w = vec![0i64; d];
    loop {
        if ring.rays().iter().all(|v| dot(&w, v) % index == 0) {
            reps.push(w.clone());
        }
        let mut i = 0;
        loop {
            if i == d {
                return (index, reps);
            }
            w[i] += 1;
            if w[i] < index {
                break;
            }
            w[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverSearch {
    /// Degrees of the constructible covers étale in codimension one and
    /// nontrivial, one per cyclic subgroup of `M'/M`.
    pub degrees: Vec<u64>,
    /// Orders skipped because `p` divides them.
    pub excluded_wild: Vec<u64>,
    #[serde(skip)]
    pub covers: Vec<CoverDescriptor>,
}

/// All cyclic covers of `R` étale in codimension one obtained from torsion
/// classes of the class group. For toric `R` every toric cover étale in
/// codimension one sits below the one for `M'`, so an empty result means no
/// such nontrivial cover exists within the family.
pub fn etale_in_codim_one_covers(ring: &ToricRing) -> Result<CoverSearch> {
    let (index, reps) = dual_ray_lattice_quotient(ring);
    let mut seen: BTreeSet<IVec> = BTreeSet::new();
    let mut search = CoverSearch { degrees: Vec::new(), excluded_wild: Vec::new(), covers: Vec::new() };
    for w in reps {
        if w.iter().all(|&x| x == 0) {
            continue;
        }
        // The cyclic subgroup generated by w/index, by its canonical generator set.
        let g = gcd_all(&w).abs();
        let order = index / num_integer::gcd(g, index);
        let key: IVec = {
            let mut multiples: Vec<IVec> = (1..order)
                .map(|k| w.iter().map(|x| (k * x).rem_euclid(index)).collect())
                .collect();
            multiples.sort();
            multiples.into_iter().next().unwrap_or_default()
        };
        if !seen.insert(key) {
            continue;
        }
        let coefficients: Vec<Rational> = ring.rays().iter().map(|v| Rational::new(dot(&w, v).into(), index.into())).collect();
        let divisor = TorusQDivisor::new(coefficients);
        match cyclic_cover(ring, &divisor) {
            Ok(c) => {
                search.degrees.push(c.degree);
                search.covers.push(c);
            }
            Err(Error::PrimeDividesDegree { degree, .. }) => search.excluded_wild.push(degree),
            Err(e) => return Err(e),
        }
    }
    Ok(search)
}
