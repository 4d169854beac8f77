use fsig_core::bounds::{
    index_bound, pi1_order_bound, purity_check, purity_verdict, veronese_bound, SValue, Theorem,
};
use fsig_core::covers::{
    canonical_difference, chain_simulation, compose, count_trace_summands, doubling_check, pullback, pullback_pair,
    quotient_cover, ramification_divisor, root_cover, tower_additivity, verify_note_trace, verify_transformation,
    wild_root_cover_for_validation, Backend,
};
use fsig_core::frobenius::{fsig_sequence, Convention, PairDivisorSpec, RingPresentation};
use fsig_core::rational::{rat, to_f64};
use fsig_core::toric::{toric_fsig_exact, ToricRing, TorusQDivisor};
use fsig_core::{Budget, Error, Polynomial, Rational};
use num_integer::Integer;
use proptest::prelude::*;

fn pow_mod(mut a: u64, mut k: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while k > 0 {
        if k & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        k >>= 1;
    }
    r
}

/// A primitive n-th root of unity in 𝔽_p, for n | p − 1.
fn primitive_root_of_unity(n: u64, p: u64) -> u64 {
    (2..p)
        .map(|g| pow_mod(g, (p - 1) / n, p))
        .find(|&z| (1..n).all(|k| pow_mod(z, k, p) != 1))
        .expect("n divides p - 1")
}

/// `Σ_{ζ ∈ μ_n} ζ^{⟨w,u⟩}` in 𝔽_p: the coefficient of `Tr(x^u)` for the
/// cover `k[x]^{μ_n} ⊆ k[x]`, summed over the group directly.
fn group_trace(n: u64, weights: &[u64], u: &[i64], p: u64) -> u64 {
    let z = primitive_root_of_unity(n, p);
    let k: i64 = u.iter().zip(weights).map(|(a, w)| a * *w as i64).sum();
    let k = k.rem_euclid(n as i64) as u64;
    (0..n).map(|j| pow_mod(z, j * k, p)).sum::<u64>() % p
}

#[test]
fn quotient_cover_examples() {
    let c = quotient_cover(4, &[1, 3], 5, 2).unwrap();
    assert_eq!(c.degree, 2);
    assert!(c.etale_in_codim_one && ramification_divisor(&c).is_zero());
    let a1 = quotient_cover(2, &[1, 1], 3, 1).unwrap();
    assert_eq!((a1.degree, a1.etale_in_codim_one), (2, true));
    let refl = quotient_cover(2, &[1, 0], 3, 1).unwrap();
    assert_eq!(refl.ram.coefficients, vec![rat(1, 1), rat(0, 1)]);
    assert!(!refl.etale_in_codim_one);
    assert!(matches!(quotient_cover(6, &[1, 1], 3, 1), Err(Error::PrimeDividesDegree { .. })));
    assert!(quotient_cover(6, &[1, 1], 5, 4).is_err());
}

#[test]
fn root_cover_examples() {
    for n in [2u64, 3] {
        let c = root_cover(n, 0, 2, 5).unwrap();
        assert_eq!(c.degree, n);
        assert_eq!(c.ram.coefficients, vec![rat(n as i64 - 1, 1), rat(0, 1)]);
        let dx = TorusQDivisor::new(vec![rat(n as i64 - 1, n as i64), rat(0, 1)]);
        assert_eq!(pullback(&c, &dx), c.ram);
        assert!(pullback_pair(&c, &dx).unwrap().is_zero());
        assert_eq!(canonical_difference(&c), c.ram);
    }
    let c = root_cover(2, 0, 2, 5).unwrap();
    let too_small = TorusQDivisor::new(vec![rat(1, 3), rat(0, 1)]);
    assert!(matches!(pullback_pair(&c, &too_small), Err(Error::NotEffective { facet: 0, .. })));
}

#[test]
fn trace_matches_the_group_sum() {
    for (n, p) in [(2u64, 3u64), (3, 7), (4, 5), (5, 11), (6, 7), (7, 29), (8, 17)] {
        for weights in [[1u64, 1], [1, n - 1], [1, 0], [1, 2 % n]] {
            let Ok(cover) = quotient_cover(n, &weights, p, 1) else { continue };
            for a in 0..2 * n as i64 {
                for b in 0..2 * n as i64 {
                    let u = [a, b];
                    assert_eq!(cover.trace.apply(&u), group_trace(n, &weights, &u, p), "1/{n}{weights:?} u={u:?}");
                }
            }
        }
    }
}

#[test]
fn note_trace_examples() {
    let a1 = quotient_cover(2, &[1, 1], 3, 1).unwrap();
    let rep = verify_note_trace(&a1);
    assert!(rep.passed);
    assert!(rep.evidence.iter().any(|e| e.generator == vec![1, 0] && e.coefficient == 0));
    let root = root_cover(2, 0, 2, 5).unwrap();
    let rep = verify_note_trace(&root);
    let y = rep.evidence.iter().find(|e| e.generator == vec![0, 1]).unwrap();
    assert_eq!(y.coefficient, 2);
    assert!(rep.evidence.iter().any(|e| e.generator == vec![1, 0] && e.coefficient == 0));
    let step = quotient_cover(4, &[1, 3], 5, 2).unwrap();
    assert!(verify_note_trace(&step).passed);
}

#[test]
fn trace_summand_examples() {
    assert_eq!(count_trace_summands(&quotient_cover(4, &[1, 3], 5, 2).unwrap()), 1);
    let identity = quotient_cover(3, &[1, 2], 5, 3).unwrap();
    assert!(identity.is_etale());
    assert_eq!(count_trace_summands(&identity), 1);
    let wild = wild_root_cover_for_validation(5, 0, 2, 5).unwrap();
    assert_eq!(count_trace_summands(&wild), 0);
}

#[test]
fn transformation_examples() {
    let budget = Budget::unlimited();
    let a1 = quotient_cover(2, &[1, 1], 3, 1).unwrap();
    let r = verify_transformation(&a1, None, Backend::ToricExact, &budget).unwrap();
    assert_eq!((r.s_upper.clone(), r.s_lower.clone(), r.degree, r.f), (rat(1, 1), rat(1, 2), 2, 1));
    assert!(r.holds);
    let step1 = quotient_cover(4, &[1, 3], 5, 2).unwrap();
    let step2 = quotient_cover(2, &[1, 1], 5, 1).unwrap();
    let r1 = verify_transformation(&step1, None, Backend::ToricExact, &budget).unwrap();
    let r2 = verify_transformation(&step2, None, Backend::ToricExact, &budget).unwrap();
    assert_eq!((r1.s_upper.clone(), r1.s_lower.clone()), (rat(1, 2), rat(1, 4)));
    assert_eq!((r2.s_upper.clone(), r2.s_lower.clone()), (rat(1, 1), rat(1, 2)));
    assert!(r1.holds && r2.holds);

    // Root cover with a pair, against the Fedder route on the regular ring.
    let root = root_cover(2, 0, 2, 5).unwrap();
    let dx = TorusQDivisor::new(vec![rat(1, 2), rat(0, 1)]);
    let r = verify_transformation(&root, Some(&dx), Backend::ToricExact, &budget).unwrap();
    assert!(r.holds);
    assert_eq!(r.s_lower, rat(1, 2));
    let reg = RingPresentation::regular(2, 5).unwrap();
    let pair = PairDivisorSpec::new(vec![(Polynomial::var(2, reg.field(), 0), rat(1, 2))], Convention::FloorPe).unwrap();
    let seq = fsig_sequence(&reg, &pair, 3, &budget).unwrap();
    assert_eq!(seq.estimate.extrapolation, Some(rat(1, 2)));
}

#[test]
fn doubling_examples() {
    let a1 = doubling_check(&quotient_cover(2, &[1, 1], 3, 1).unwrap()).unwrap();
    assert!(a1.holds && a1.equality);
    let step = doubling_check(&quotient_cover(4, &[1, 3], 5, 2).unwrap()).unwrap();
    assert!(step.holds);
    assert_eq!((step.s_upper, step.s_lower), (rat(1, 2), rat(1, 4)));
    let identity = doubling_check(&quotient_cover(3, &[1, 2], 5, 3).unwrap()).unwrap();
    assert!(!identity.applicable && identity.holds);
    assert!(doubling_check(&quotient_cover(2, &[1, 0], 3, 1).unwrap()).is_err());
}

#[test]
fn chain_examples() {
    let budget = Budget::unlimited();
    let r = chain_simulation(8, &[1, 7], 3, &budget).unwrap();
    let c = &r.chains[0];
    let s: Vec<Rational> = std::iter::once(r.s_start.clone()).chain(c.steps.iter().map(|s| s.s_upper.clone())).collect();
    assert_eq!(s, vec![rat(1, 8), rat(1, 4), rat(1, 2), rat(1, 1)]);
    assert_eq!(c.stabilization_index, 3);
    let a1 = chain_simulation(2, &[1, 1], 3, &budget).unwrap();
    assert_eq!(a1.chains[0].steps.len(), 1);
    assert!(chain_simulation(1, &[0, 0], 3, &budget).unwrap().chains[0].steps.is_empty());
    // Mixed orders: both maximal chains of 1/6(1,5) reach the plane.
    let six = chain_simulation(6, &[1, 5], 5, &budget).unwrap();
    assert_eq!(six.chains.len(), 2);
    assert!(six.all_pass);
}

#[test]
fn root_cover_tower_adds_ramification() {
    // x^{1/4} over x^{1/2} over x.
    let lower = quotient_cover(4, &[1, 0], 5, 2).unwrap();
    let upper = quotient_cover(2, &[1, 0], 5, 1).unwrap();
    assert!(tower_additivity(&lower, &upper).unwrap());
    let total = compose(&lower, &upper).unwrap();
    assert_eq!(total.ram.coefficients, vec![rat(3, 1), rat(0, 1)]);
    assert_eq!(total.degree, 4);
}

#[test]
fn bound_examples() {
    for n in 2..=6u64 {
        let p = [5u64, 7].into_iter().find(|p| n % p != 0).unwrap();
        let r = ToricRing::quotient_singularity(n, &[1, 1], p).unwrap();
        let b = pi1_order_bound(&SValue::exact(toric_fsig_exact(&r, None).unwrap()), p).unwrap();
        assert_eq!(b.bound, n);
        assert_eq!(b.theorem, Theorem::A);
        assert_eq!(quotient_cover(n, &[1, 1], p, 1).unwrap().degree, b.bound);
    }
    let plane = ToricRing::from_rays(&[vec![1, 0], vec![0, 1]], 3).unwrap();
    assert_eq!(pi1_order_bound(&SValue::exact(toric_fsig_exact(&plane, None).unwrap()), 3).unwrap().bound, 1);
}

#[test]
fn quadric_gives_a_provisional_bound() {
    let names: Vec<String> = (0..4).map(|i| format!("x{i}")).collect();
    let q = RingPresentation::parse_hypersurface("x0^2 + x1^2 + x2^2 + x3^2", names, 3).unwrap();
    let seq = fsig_sequence(&q, &PairDivisorSpec::empty(), 2, &Budget::unlimited()).unwrap();
    let s = SValue::from_sequence(&seq);
    let b = pi1_order_bound(&s, 3).unwrap();
    assert!(!b.exact);
    assert_eq!(b.bound, 1);
    assert!(b.provisional_range.is_some());
    let v = purity_verdict(&s, 3);
    assert!(v.purity_forced && !v.exact);
    assert!(to_f64(s.value()) > 0.6);
}

#[test]
fn purity_examples() {
    let a1 = purity_check(&ToricRing::quotient_singularity(2, &[1, 1], 3).unwrap()).unwrap();
    assert!(!a1.verdict.purity_forced);
    assert_eq!(a1.covers_found, vec![2]);
    let segre = ToricRing::from_rays(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, -1]], 5).unwrap();
    let s = purity_check(&segre).unwrap();
    assert!(s.verdict.purity_forced && s.covers_found.is_empty() && s.consistent);
    assert!(purity_verdict(&SValue::exact(rat(2, 5)), 2).purity_forced);
}

#[test]
fn index_and_veronese_examples() {
    let a1 = ToricRing::quotient_singularity(2, &[1, 1], 3).unwrap();
    let r = index_bound(&a1, &TorusQDivisor::new(vec![rat(1, 1), rat(0, 1)])).unwrap();
    assert!(r.holds && r.n == 2);
    let third = ToricRing::quotient_singularity(3, &[1, 1], 5).unwrap();
    let r = index_bound(&third, &TorusQDivisor::new(vec![rat(1, 1), rat(0, 1)])).unwrap();
    assert!(r.holds && r.n == 3 && r.bound == 3);
    let plane = ToricRing::from_rays(&[vec![1, 0], vec![0, 1]], 3).unwrap();
    let r = index_bound(&plane, &TorusQDivisor::new(vec![rat(1, 1), rat(0, 1)])).unwrap();
    assert!(r.holds && r.n == 1 && r.bound == 1);
    for (d, m, p, s) in [(2, 3, 5, rat(1, 3)), (2, 2, 3, rat(1, 2)), (3, 1, 3, rat(1, 1))] {
        let v = veronese_bound(d, m, p).unwrap();
        assert_eq!(v.s, s);
        assert!(v.within_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transformation_rule_on_small_quotients(n in 2u64..9, a in 0u64..8, b in 0u64..8, pi in 0usize..3) {
        let p = [3u64, 5, 7][pi];
        prop_assume!(n % p != 0 && a.gcd(&b).gcd(&n) == 1);
        let cover = quotient_cover(n, &[a % n, b % n], p, 1).unwrap();
        let flag = ToricRing::quotient_singularity(n, &[a % n, b % n], p).unwrap().quotient_data().unwrap().etale_in_codim_one;
        prop_assert_eq!(flag, cover.ram.is_zero());
        prop_assert_eq!(cover.degree.is_multiple_of(p), false);
        if cover.etale_in_codim_one {
            let r = verify_transformation(&cover, None, Backend::ToricExact, &Budget::unlimited()).unwrap();
            prop_assert!(r.holds);
            prop_assert_eq!(r.s_upper, rat(1, 1));
            prop_assert_eq!(r.residue_degree, 1);
        } else {
            let err = verify_transformation(&cover, None, Backend::ToricExact, &Budget::unlimited()).unwrap_err();
            let is_not_effective = matches!(err, Error::NotEffective { .. });
            prop_assert!(is_not_effective);
        }
        prop_assert!(verify_note_trace(&cover).passed);
        prop_assert_eq!(count_trace_summands(&cover), 1);
    }
}
