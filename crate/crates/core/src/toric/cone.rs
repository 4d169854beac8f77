use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{dot, gcd_all, hermite_normal_form, kernel_line, primitive, rank, to_qmat, IVec};
use crate::poly::is_prime;

/// Data of a cyclic quotient `1/n(a_1, …, a_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientData {
    pub n: u64,
    pub weights: Vec<u64>,
    /// No nontrivial group element fixes a hyperplane, so `k[x]^{μ_n} ⊆ k[x]`
    /// is étale in codimension one.
    pub etale_in_codim_one: bool,
}

/// Compact description of a toric ring for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricSummary {
    pub dim: usize,
    pub facets: usize,
    /// Index of `M` in the ambient lattice.
    pub lattice_index: u64,
    /// Hilbert basis in ambient coordinates.
    pub hilbert_basis: Vec<IVec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientData>,
}

/// A normal affine semigroup ring `k[σ^∨ ∩ M]` over `𝔽_p`.
///
/// `M` sits in an ambient `ℤ^d` with basis rows `basis`; the cone is cut out by
/// the ambient covectors `functionals`. Internally everything is expressed in
/// coordinates relative to `basis`, where `M = ℤ^d` and `rays[i]` is the
/// primitive facet normal `functionals[i]|_M / scale[i]`. Facet `i` is the
/// torus-invariant prime divisor `D_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricRing {
    p: u64,
    basis: Vec<IVec>,
    functionals: Vec<IVec>,
    scale: Vec<i64>,
    rays: Vec<IVec>,
    dual_rays: Vec<IVec>,
    hilbert_basis: Vec<IVec>,
    hilbert_region: Vec<i64>,
    quotient: Option<QuotientData>,
}

impl ToricRing {
    /// `σ = cone(rays) ⊆ N_ℝ` with `M = ℤ^d`; facet normals of `σ^∨` are the
    /// rays themselves (made primitive).
    pub fn from_rays(rays: &[IVec], p: u64) -> Result<Self> {
        let d = rays.first().map_or(0, Vec::len);
        if d == 0 {
            return Err(Error::InvalidInput("a cone needs at least one ray of positive length".into()));
        }
        let identity: Vec<IVec> = (0..d).map(|i| unit(d, i)).collect();
        Self::from_lattice(identity, rays.to_vec(), p)
    }

    /// `k[x_1..x_d]^{μ_n}` for `ζ·x_i = ζ^{a_i} x_i`.
    pub fn quotient_singularity(n: u64, weights: &[u64], p: u64) -> Result<Self> {
        if n.is_multiple_of(p) && is_prime(p) {
            return Err(Error::PrimeDividesDegree { p, degree: n });
        }
        Self::quotient_unchecked(n, weights, p)
    }

    /// Same as [`ToricRing::quotient_singularity`] but accepts `p | n`. Only
    /// for exhibiting what goes wrong with wild covers.
    pub(crate) fn quotient_unchecked(n: u64, weights: &[u64], p: u64) -> Result<Self> {
        let d = weights.len();
        if d == 0 || n == 0 {
            return Err(Error::InvalidInput("quotient needs n ≥ 1 and at least one weight".into()));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let g = weights.iter().fold(n, |g, &a| num_integer::gcd(g, a));
        if g != 1 {
            return Err(Error::InvalidInput(format!("gcd(n, weights) = {g}, the action is not faithful")));
        }
        let basis = invariant_lattice(n, weights)?;
        let functionals: Vec<IVec> = (0..d).map(|i| unit(d, i)).collect();
        let mut ring = Self::from_lattice(basis, functionals, p)?;
        ring.quotient = Some(QuotientData {
            n,
            weights: weights.to_vec(),
            etale_in_codim_one: etale_in_codim_one(n, weights),
        });
        Ok(ring)
    }

    /// General constructor: `M` spanned by `basis` inside `ℤ^d`, cone
    /// `{x : ⟨x, f⟩ ≥ 0 for f in functionals}`.
    pub fn from_lattice(basis: Vec<IVec>, functionals: Vec<IVec>, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let d = basis.first().map_or(0, Vec::len);
        if d == 0 || basis.iter().any(|b| b.len() != d) || functionals.iter().any(|f| f.len() != d) {
            return Err(Error::InvalidInput("lattice and cone data have inconsistent dimensions".into()));
        }
        let basis = hermite_normal_form(&basis);
        if basis.len() != d {
            return Err(Error::InvalidInput("lattice basis is not of full rank".into()));
        }
        let functionals: Vec<IVec> = functionals.iter().map(|f| primitive(f)).collect();
        if functionals.iter().any(|f| f.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidInput("zero ray".into()));
        }
        for (i, f) in functionals.iter().enumerate() {
            if functionals[..i].contains(f) {
                return Err(Error::InvalidInput(format!("repeated ray {f:?}")));
            }
        }
        if rank(&to_qmat(&functionals)) != d {
            return Err(Error::InvalidInput("rays do not span the space; the cone is not full-dimensional".into()));
        }
        let mut scale = Vec::with_capacity(functionals.len());
        let mut rays = Vec::with_capacity(functionals.len());
        for f in &functionals {
            let image: IVec = basis.iter().map(|b| dot(b, f)).collect();
            let g = gcd_all(&image);
            scale.push(g);
            rays.push(image.iter().map(|x| x / g).collect());
        }
        let dual_rays = dual_extreme_rays(&rays, d);
        if rank(&to_qmat(&dual_rays)) != d {
            return Err(Error::InvalidInput("the cone contains a line (not strongly convex)".into()));
        }
        for (i, v) in rays.iter().enumerate() {
            let on_facet: Vec<IVec> = dual_rays.iter().filter(|u| dot(u, v) == 0).cloned().collect();
            if d > 1 && rank(&to_qmat(&on_facet)) != d - 1 {
                return Err(Error::InvalidInput(format!("ray {:?} is not extremal", functionals[i])));
            }
        }
        let hilbert_region = caratheodory_bound(&rays, &dual_rays, 1);
        let hilbert_basis = hilbert_basis(&rays, &hilbert_region);
        Ok(ToricRing { p, basis, functionals, scale, rays, dual_rays, hilbert_basis, hilbert_region, quotient: None })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn summary(&self) -> ToricSummary {
        ToricSummary {
            dim: self.dim(),
            facets: self.num_facets(),
            lattice_index: self.lattice_index(),
            hilbert_basis: self.hilbert_basis_ambient(),
            quotient: self.quotient.clone(),
        }
    }

    /// Same cone and lattice, i.e. the same ring up to the prime.
    pub fn same_lattice_and_cone(&self, other: &ToricRing) -> bool {
        self.basis == other.basis && self.functionals == other.functionals
    }

    pub fn with_p(&self, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if let Some(q) = &self.quotient {
            if q.n % p == 0 {
                return Err(Error::PrimeDividesDegree { p, degree: q.n });
            }
        }
        Ok(ToricRing { p, ..self.clone() })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of facets, i.e. of torus-invariant prime divisors.
    pub fn num_facets(&self) -> usize {
        self.rays.len()
    }

    /// Facet normals in `M`-coordinates.
    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    /// Extreme rays of `σ^∨` in `M`-coordinates.
    pub fn dual_rays(&self) -> &[IVec] {
        &self.dual_rays
    }

    /// Basis of `M` inside the ambient lattice (Hermite normal form).
    pub fn basis(&self) -> &[IVec] {
        &self.basis
    }

    pub fn functionals(&self) -> &[IVec] {
        &self.functionals
    }

    /// `scale[i]` with `functionals[i]|_M = scale[i]·rays[i]`.
    pub fn scales(&self) -> &[i64] {
        &self.scale
    }

    pub fn quotient_data(&self) -> Option<&QuotientData> {
        self.quotient.as_ref()
    }

    /// Minimal generators of `S = σ^∨ ∩ M` in `M`-coordinates.
    pub fn hilbert_basis(&self) -> &[IVec] {
        &self.hilbert_basis
    }

    /// Upper bounds on `⟨m, v_i⟩` of the region that provably contains the
    /// Hilbert basis.
    pub fn hilbert_region(&self) -> &[i64] {
        &self.hilbert_region
    }

    /// Hilbert basis in ambient coordinates, sorted.
    pub fn hilbert_basis_ambient(&self) -> Vec<IVec> {
        let mut v: Vec<IVec> = self.hilbert_basis.iter().map(|m| self.to_ambient(m)).collect();
        v.sort();
        v
    }

    pub fn to_ambient(&self, m: &[i64]) -> IVec {
        let d = self.dim();
        (0..d).map(|j| m.iter().zip(&self.basis).map(|(c, b)| c * b[j]).sum()).collect()
    }

    /// `⟨m, v_i⟩` for every facet.
    pub fn pairings(&self, m: &[i64]) -> IVec {
        self.rays.iter().map(|v| dot(m, v)).collect()
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        self.rays.iter().all(|v| dot(m, v) >= 0)
    }

    /// Index `[ℤ^d : M]` of the character lattice in the ambient lattice.
    pub fn lattice_index(&self) -> u64 {
        crate::lattice::hnf_index(&self.basis).expect("full-rank basis")
    }

    /// Checks that every nonzero element of `S` with all pairings at most
    /// `max_pairing` is a sum of Hilbert-basis elements.
    pub fn hilbert_basis_complete_up_to(&self, max_pairing: i64) -> bool {
        let d = self.dim();
        let k = self.rays.len();
        let mut points = Vec::new();
        for_each_lattice_point(&self.rays, &vec![0; k], &vec![max_pairing; k], |m| points.push(m.to_vec()));
        points.sort_by_key(|m| self.pairings(m).iter().sum::<i64>());
        let mut decomposable: std::collections::HashSet<IVec> = std::collections::HashSet::new();
        decomposable.insert(vec![0; d]);
        for m in &points {
            let ok = self.hilbert_basis.iter().any(|h| {
                let rest: IVec = m.iter().zip(h).map(|(a, b)| a - b).collect();
                decomposable.contains(&rest)
            });
            if m.iter().any(|&x| x != 0) && !ok {
                return false;
            }
            decomposable.insert(m.clone());
        }
        true
    }
}

fn unit(d: usize, i: usize) -> IVec {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

/// `{x ∈ ℤ^d : Σ a_i x_i ≡ 0 mod n}` via the echelon form of the rows
/// `(a_i | e_i)` and `(n | 0)`; rows with leading column zero span the kernel.
fn invariant_lattice(n: u64, weights: &[u64]) -> Result<Vec<IVec>> {
    let d = weights.len();
    let to_i64 = |x: u64| i64::try_from(x).map_err(|_| Error::InvalidInput("group order too large".into()));
    let mut rows = Vec::with_capacity(d + 1);
    for (i, &a) in weights.iter().enumerate() {
        let mut r = vec![to_i64(a % n)?];
        r.extend(unit(d, i));
        rows.push(r);
    }
    let mut last = vec![to_i64(n)?];
    last.extend(vec![0; d]);
    rows.push(last);
    let h = hermite_normal_form(&rows);
    Ok(h.into_iter().filter(|r| r[0] == 0).map(|r| r[1..].to_vec()).collect())
}

fn etale_in_codim_one(n: u64, weights: &[u64]) -> bool {
    let d = weights.len();
    (1..n).all(|j| weights.iter().filter(|&&a| (j * a) % n == 0).count() + 2 <= d)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Extreme rays of `{m : ⟨m, v⟩ ≥ 0 for all v in rays}`, each primitive.
fn dual_extreme_rays(rays: &[IVec], d: usize) -> Vec<IVec> {
    let mut out: Vec<IVec> = Vec::new();
    for idx in subsets(rays.len(), d - 1) {
        let sub: Vec<IVec> = idx.iter().map(|&i| rays[i].clone()).collect();
        let Some(u) = kernel_line(&sub, d) else { continue };
        let signs: Vec<i64> = rays.iter().map(|v| dot(&u, v).signum()).collect();
        let u = if signs.iter().all(|&s| s >= 0) {
            u
        } else if signs.iter().all(|&s| s <= 0) {
            u.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        if !out.contains(&u) {
            out.push(u);
        }
    }
    out.sort();
    out
}

/// `factor · B_i` where `B_i` sums the `d` largest pairings of the dual
/// extreme rays with `v_i`. Any element of `σ^∨` is a combination of `d`
/// extreme rays, so points with every coefficient below `factor` land here.
pub(crate) fn caratheodory_bound(rays: &[IVec], dual_rays: &[IVec], factor: i64) -> Vec<i64> {
    let d = rays.first().map_or(0, Vec::len);
    rays.iter()
        .map(|v| {
            let mut pairings: Vec<i64> = dual_rays.iter().map(|u| dot(u, v)).collect();
            pairings.sort_unstable_by(|a, b| b.cmp(a));
            factor * pairings.iter().take(d).sum::<i64>()
        })
        .collect()
}

/// Irreducible elements among lattice points with `0 ≤ ⟨m, v_i⟩ ≤ bound_i`,
/// processed by increasing total pairing.
fn hilbert_basis(rays: &[IVec], bound: &[i64]) -> Vec<IVec> {
    let k = rays.len();
    let mut points: Vec<(i64, IVec)> = Vec::new();
    for_each_lattice_point(rays, &vec![0; k], bound, |m| {
        let deg: i64 = rays.iter().map(|v| dot(m, v)).sum();
        if deg > 0 {
            points.push((deg, m.to_vec()));
        }
    });
    points.sort();
    let mut basis: Vec<IVec> = Vec::new();
    for (_, m) in points {
        let reducible = basis.iter().any(|h| {
            rays.iter().all(|v| dot(&m, v) >= dot(h, v))
        });
        if !reducible {
            basis.push(m);
        }
    }
    basis.sort();
    basis
}

/// Calls `f` on every `m ∈ ℤ^d` with `lower_i ≤ ⟨m, rays[i]⟩ ≤ upper_i`.
///
/// The rays must span `ℚ^d`. A spanning subset `A` is chosen and the image
/// lattice `A·ℤ^d` is walked in Hermite normal form, so only lattice points
/// inside the box for `A` are visited.
pub fn for_each_lattice_point(rays: &[IVec], lower: &[i64], upper: &[i64], mut f: impl FnMut(&[i64])) {
    let d = rays.first().map_or(0, Vec::len);
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rays.len() {
        let mut trial: Vec<IVec> = chosen.iter().map(|&j| rays[j].clone()).collect();
        trial.push(rays[i].clone());
        if rank(&to_qmat(&trial)) == trial.len() {
            chosen.push(i);
        }
        if chosen.len() == d {
            break;
        }
    }
    assert_eq!(chosen.len(), d, "rays must span");
    // Columns of A^T are the chosen rays; the image lattice is its row space.
    let a_t: Vec<IVec> = (0..d).map(|c| chosen.iter().map(|&i| rays[i][c]).collect()).collect();
    let hnf = hermite_normal_form(&a_t);
    let a_t_q = to_qmat(&a_t);
    let preimages: Vec<IVec> = hnf
        .iter()
        .map(|b| {
            let bq: Vec<_> = b.iter().map(|&x| crate::rational::int(x)).collect();
            let x = crate::lattice::solve_row_combination(&a_t_q, &bq).expect("image vector");
            x.iter().map(crate::rational::floor_i64).collect()
        })
        .collect();
    let lo: Vec<i64> = chosen.iter().map(|&i| lower[i]).collect();
    let hi: Vec<i64> = chosen.iter().map(|&i| upper[i]).collect();
    let others: Vec<usize> = (0..rays.len()).filter(|i| !chosen.contains(i)).collect();
    let mut y = vec![0i64; d];
    let mut m = vec![0i64; d];
    walk(0, &hnf, &preimages, &lo, &hi, &mut y, &mut m, &mut |m| {
        if others.iter().all(|&i| {
            let v = dot(m, &rays[i]);
            lower[i] <= v && v <= upper[i]
        }) {
            f(m);
        }
    });
}

#[allow(clippy::too_many_arguments)]
fn walk(
    j: usize,
    hnf: &[IVec],
    pre: &[IVec],
    lo: &[i64],
    hi: &[i64],
    y: &mut IVec,
    m: &mut IVec,
    f: &mut dyn FnMut(&[i64]),
) {
    let d = hnf.len();
    if j == d {
        f(m);
        return;
    }
    let b = hnf[j][j];
    let s = y[j];
    let kmin = num_integer::Integer::div_ceil(&(lo[j] - s), &b);
    let kmax = num_integer::Integer::div_floor(&(hi[j] - s), &b);
    if kmin > kmax {
        return;
    }
    for c in j..d {
        y[c] += kmin * hnf[j][c];
    }
    for c in 0..d {
        m[c] += kmin * pre[j][c];
    }
    for k in kmin..=kmax {
        walk(j + 1, hnf, pre, lo, hi, y, m, f);
        if k < kmax {
            for c in j..d {
                y[c] += hnf[j][c];
            }
            for c in 0..d {
                m[c] += pre[j][c];
            }
        }
    }
    for c in j..d {
        y[c] -= kmax * hnf[j][c];
    }
    for c in 0..d {
        m[c] -= kmax * pre[j][c];
    }
}
