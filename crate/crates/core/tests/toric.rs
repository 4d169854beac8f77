use std::collections::BTreeSet;

use fsig_core::covers::{quotient_cover, ramification_divisor};
use fsig_core::frobenius::{splitting_number, PairDivisorSpec, RingPresentation};
use fsig_core::rational::rat;
use fsig_core::toric::{
    canonical_divisor, divisor_round, fitted_constant, toric_fsig_exact, toric_fsig_sequence, toric_splitting_count,
    toric_splitting_number, verify_certificate, ClassStatus, RoundMode, ToricRing, TorusQDivisor,
};
use fsig_core::{Budget, Error, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn invariant(u: &[i64], weights: &[u64], n: u64) -> bool {
    u.iter().zip(weights).map(|(a, w)| a * *w as i64).sum::<i64>().rem_euclid(n as i64) == 0
}

/// Irreducible invariant exponents among all exponents with entries ≤ `max`.
fn brute_force_hilbert_basis(n: u64, weights: &[u64], max: i64) -> BTreeSet<Vec<i64>> {
    let d = weights.len();
    let mut all = Vec::new();
    let mut u = vec![0i64; d];
    loop {
        if u.iter().any(|&x| x != 0) && invariant(&u, weights, n) {
            all.push(u.clone());
        }
        let mut i = 0;
        while i < d {
            u[i] += 1;
            if u[i] <= max {
                break;
            }
            u[i] = 0;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    let set: BTreeSet<Vec<i64>> = all.iter().cloned().collect();
    all.into_iter()
        .filter(|u| {
            !set.iter().any(|a| {
                a != u && a.iter().zip(u.iter()).all(|(x, y)| x <= y) && {
                    let rest: Vec<i64> = u.iter().zip(a).map(|(y, x)| y - x).collect();
                    set.contains(&rest)
                }
            })
        })
        .collect()
}

/// For an action without pseudo-reflections the free summands of `F^e_*R`
/// correspond to invariant monomials in the box `[0, q)^d`.
fn invariant_box_count(n: u64, weights: &[u64], q: u64) -> u64 {
    let d = weights.len();
    let mut count = 0;
    let mut u = vec![0i64; d];
    loop {
        if invariant(&u, weights, n) {
            count += 1;
        }
        let mut i = 0;
        while i < d {
            u[i] += 1;
            if (u[i] as u64) < q {
                break;
            }
            u[i] = 0;
            i += 1;
        }
        if i == d {
            return count;
        }
    }
}

fn plane(p: u64) -> ToricRing {
    ToricRing::from_rays(&[vec![1, 0], vec![0, 1]], p).unwrap()
}

#[test]
fn quotient_hilbert_bases_match_brute_force() {
    for (n, w) in [(2u64, vec![1u64, 1]), (4, vec![1, 3]), (5, vec![1, 2]), (3, vec![1, 1, 1]), (6, vec![1, 5]), (2, vec![1, 0])] {
        let p = if n % 7 == 0 { 5 } else { 7 };
        let ring = ToricRing::quotient_singularity(n, &w, p).unwrap();
        let got: BTreeSet<Vec<i64>> = ring.hilbert_basis_ambient().into_iter().collect();
        assert_eq!(got, brute_force_hilbert_basis(n, &w, 2 * n as i64), "1/{n}{w:?}");
    }
    let r = ToricRing::quotient_singularity(4, &[1, 3], 5).unwrap();
    assert_eq!(r.hilbert_basis_ambient(), vec![vec![0, 4], vec![1, 1], vec![4, 0]]);
    assert!(r.quotient_data().unwrap().etale_in_codim_one);
}

#[test]
fn reflection_flag() {
    let r = ToricRing::quotient_singularity(2, &[1, 0], 3).unwrap();
    assert!(!r.quotient_data().unwrap().etale_in_codim_one);
    assert!(matches!(ToricRing::quotient_singularity(3, &[1, 1], 3), Err(Error::PrimeDividesDegree { .. })));
}

#[test]
fn regular_cone_counts_every_class() {
    let r = plane(5);
    for e in 1..=3 {
        let s = toric_splitting_number(&r, None, e, &Budget::unlimited()).unwrap();
        assert_eq!(s.a_e, 5u64.pow(2 * e));
        assert_eq!(s.free_classes, s.a_e);
    }
    assert_eq!(toric_fsig_exact(&r, None).unwrap(), Rational::one());
    let half = TorusQDivisor::new(vec![rat(1, 2), rat(0, 1)]);
    assert_eq!(toric_fsig_exact(&r, Some(&half)).unwrap(), rat(1, 2));
    let seq = toric_fsig_sequence(&r, Some(&half), 2, &Budget::unlimited()).unwrap();
    assert_eq!(seq.normalized(), vec![rat(3, 5), rat(13, 25)]);
}

#[test]
fn small_actions_count_invariant_box_monomials() {
    for (n, w, p) in [(2u64, vec![1u64, 1], 3u64), (3, vec![1, 1], 5), (5, vec![1, 3], 3), (4, vec![1, 1], 3), (3, vec![1, 1, 1], 5), (7, vec![1, 3], 5)] {
        let ring = ToricRing::quotient_singularity(n, &w, p).unwrap();
        assert!(ring.quotient_data().unwrap().etale_in_codim_one);
        for e in 1..=2 {
            let q = p.pow(e);
            assert_eq!(toric_splitting_count(&ring, None, e).unwrap(), invariant_box_count(n, &w, q), "1/{n}{w:?} e={e}");
            let cert = toric_splitting_number(&ring, None, e, &Budget::unlimited()).unwrap();
            assert_eq!(cert.a_e, invariant_box_count(n, &w, q));
        }
        // Groups without pseudo-reflections have signature 1/|G|.
        assert_eq!(toric_fsig_exact(&ring, None).unwrap(), rat(1, n as i64));
    }
}

#[test]
fn one_third_counts_tend_to_one_third() {
    let r = ToricRing::quotient_singularity(3, &[1, 1], 5).unwrap();
    let seq = toric_fsig_sequence(&r, None, 3, &Budget::unlimited()).unwrap();
    let exact = toric_fsig_exact(&r, None).unwrap();
    assert_eq!(exact, rat(1, 3));
    let errors: Vec<Rational> = seq.normalized().iter().map(|v| (v - &exact).abs()).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
    let c = fitted_constant(&seq, &exact);
    for rec in &seq.records {
        let gap = (&rec.normalized - &exact).abs();
        assert!(gap <= &c / Rational::from_integer(rec.q.into()));
    }
}

#[test]
fn a_n_cross_backend_small() {
    for (n, p) in [(2u64, 3u64), (3, 2), (4, 3), (2, 7)] {
        let ring = ToricRing::quotient_singularity(n, &[1, n - 1], p).unwrap();
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let hyp = RingPresentation::parse_hypersurface(&format!("x*y - z^{n}"), names, p).unwrap();
        for e in 1..=2 {
            let toric = toric_splitting_number(&ring, None, e, &Budget::unlimited()).unwrap().a_e;
            let fedder = splitting_number(&hyp, &PairDivisorSpec::empty(), e, &Budget::unlimited()).unwrap();
            assert_eq!(toric, fedder, "A_{} p={p} e={e}", n - 1);
        }
    }
}

#[test]
fn certificates_verify() {
    for (n, w, p) in [(3u64, vec![1u64, 1], 5u64), (5, vec![1, 2], 3), (4, vec![1, 2], 3), (2, vec![1, 0], 5)] {
        let ring = ToricRing::quotient_singularity(n, &w, p).unwrap();
        let s = toric_splitting_number(&ring, None, 1, &Budget::unlimited()).unwrap();
        assert_eq!(s.certificates.len() as u64, p.pow(2));
        for cert in &s.certificates {
            assert!(verify_certificate(&ring, cert, s.q, &s.region_bound), "{cert:?}");
            if let ClassStatus::Free { generator } = &cert.status {
                for h in ring.hilbert_basis() {
                    let sum: Vec<i64> = generator.iter().zip(h).map(|(a, b)| a + b).collect();
                    assert!(ring.contains(&sum));
                }
            }
        }
        assert!(s.a_e <= s.q.pow(2));
    }
    let segre = ToricRing::from_rays(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, -1]], 3).unwrap();
    let s = toric_splitting_number(&segre, None, 1, &Budget::unlimited()).unwrap();
    assert_eq!(s.a_e, toric_splitting_count(&segre, None, 1).unwrap());
    assert!(s.certificates.iter().any(|c| matches!(c.status, ClassStatus::NotFree { .. })));
}

#[test]
fn flag_agrees_with_ramification() {
    for n in 2..=8u64 {
        for a in 0..n {
            for b in 0..n {
                if a.gcd(&b).gcd(&n) != 1 {
                    continue;
                }
                let p = [3u64, 5, 7].into_iter().find(|p| n % p != 0).unwrap();
                let ring = ToricRing::quotient_singularity(n, &[a, b], p).unwrap();
                let cover = quotient_cover(n, &[a, b], p, 1).unwrap();
                let ram_zero = ramification_divisor(&cover).is_zero();
                assert_eq!(ring.quotient_data().unwrap().etale_in_codim_one, ram_zero, "1/{n}({a},{b})");
                assert_eq!(cover.etale_in_codim_one, ram_zero);
            }
        }
    }
}

#[test]
fn canonical_and_rounding_examples() {
    let k = canonical_divisor(&plane(3));
    assert_eq!(k.coefficients, vec![rat(-1, 1), rat(-1, 1)]);
    let a1 = ToricRing::quotient_singularity(2, &[1, 1], 3).unwrap();
    assert_eq!(canonical_divisor(&a1).coefficients, vec![rat(-1, 1); 2]);
    let half = TorusQDivisor::new(vec![rat(1, 2), rat(1, 2)]);
    assert_eq!(divisor_round(&half, &rat(9, 1), RoundMode::Floor).coefficients, vec![rat(4, 1); 2]);
    assert_eq!(divisor_round(&half, &rat(8, 1), RoundMode::Ceil).coefficients, vec![rat(4, 1); 2]);
    let two_thirds = TorusQDivisor::new(vec![rat(2, 3)]);
    assert_eq!(divisor_round(&two_thirds, &rat(3, 1), RoundMode::Floor).coefficients, vec![rat(2, 1)]);
    assert_eq!(divisor_round(&two_thirds, &rat(2, 1), RoundMode::Ceil).coefficients, vec![rat(2, 1)]);
}

#[test]
fn invalid_cones_are_rejected() {
    assert!(ToricRing::from_rays(&[vec![1, 0], vec![-1, 0], vec![0, 1]], 3).is_err());
    assert!(ToricRing::from_rays(&[vec![1, 0]], 3).is_err());
    assert!(ToricRing::from_rays(&[vec![1, 0], vec![0, 1]], 4).is_err());
    assert!(ToricRing::from_rays(&[vec![1, 0], vec![0, 1], vec![1, 1]], 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_signature_decreases_with_the_boundary(
        n in 2u64..7,
        a in 1u64..7,
        t in prop::collection::vec((0i64..6, 1i64..7), 2),
        bump in 0usize..2,
    ) {
        let p = 11;
        let ring = ToricRing::quotient_singularity(n, &[1, a % n], p).unwrap();
        let coeffs: Vec<Rational> = t.iter().map(|&(num, den)| rat(num.min(den - 1), den)).collect();
        let lower = TorusQDivisor::new(coeffs.clone());
        let mut bigger = coeffs;
        bigger[bump] = (&bigger[bump] + rat(1, 1)) / rat(2, 1);
        let upper = TorusQDivisor::new(bigger);
        let s0 = toric_fsig_exact(&ring, None).unwrap();
        let s1 = toric_fsig_exact(&ring, Some(&lower)).unwrap();
        let s2 = toric_fsig_exact(&ring, Some(&upper)).unwrap();
        prop_assert!(s0 >= s1 && s1 >= s2);
        prop_assert!(s2 >= Rational::zero() && s0 <= Rational::one());
    }

    #[test]
    fn counts_are_bounded_and_approach_the_volume(n in 2u64..7, a in 0u64..7, e in 1u32..4) {
        let p = 7;
        prop_assume!(a.gcd(&n) == 1 || a == 0);
        let ring = ToricRing::quotient_singularity(n, &[1, a % n], p).unwrap();
        let q = p.pow(e);
        let count = toric_splitting_count(&ring, None, e).unwrap();
        prop_assert!(count <= q * q);
        let exact = toric_fsig_exact(&ring, None).unwrap();
        let seq = toric_fsig_sequence(&ring, None, e, &Budget::unlimited()).unwrap();
        let c = fitted_constant(&seq, &exact);
        // The fitted constant is bounded by the number of facets times the
        // normalized perimeter; it must not blow up with e.
        prop_assert!(c <= rat(4, 1));
    }
}
