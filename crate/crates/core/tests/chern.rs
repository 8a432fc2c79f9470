use endokalc::chern::{
    chern_dual_lhs, chern_dual_rhs, k0_shadow_check, rho, verify_chern_duality, Element, RootRing,
};
use endokalc::Error;
use num_bigint::BigInt;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `e_l(x_1..x_r)` as a sum over subsets.
fn subset_symmetric(ring: RootRing, l: usize) -> Element {
    let r = ring.rank;
    (0u32..1 << r)
        .filter(|mask| mask.count_ones() as usize == l)
        .map(|mask| {
            (0..r)
                .filter(|i| mask >> i & 1 == 1)
                .fold(ring.one(), |acc, i| acc.mul(&ring.root(i).unwrap()).unwrap())
        })
        .fold(ring.zero(), |acc, t| acc.add(&t).unwrap())
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

#[test]
fn cleared_denominators_give_polynomial_identity() {
    // ∏(1 - βx_i) c_j(E^∨) = Σ_l (-1)^l binom(l, j) β^{l-j} e_l, a polynomial of x-degree <= r
    for r in 1..=3 {
        let d = 8;
        let ring = RootRing::new(r, d);
        let b = ring.beta();
        let denominator = (0..r).fold(ring.one(), |acc, i| {
            acc.mul(&ring.one().sub(&b.mul(&ring.root(i).unwrap()).unwrap()).unwrap()).unwrap()
        });
        for j in 0..=r {
            let cleared = denominator.mul(&chern_dual_lhs(r, j, d).unwrap()).unwrap();
            let expected = (j..=r).fold(ring.zero(), |acc, l| {
                let sign = if l % 2 == 0 { 1 } else { -1 };
                let term = b
                    .pow((l - j) as u32)
                    .unwrap()
                    .mul(&subset_symmetric(ring, l))
                    .unwrap()
                    .scale(&BigInt::from(sign * binom(l, j)));
                acc.add(&term).unwrap()
            });
            assert_eq!(cleared, expected, "r = {r}, j = {j}");
        }
    }
}

#[test]
fn rank_two_first_class_by_geometric_series() {
    let d = 7;
    let ring = RootRing::new(2, d);
    let b = ring.beta();
    let mut expected = ring.zero();
    for n in 0..d {
        for i in 0..2 {
            let term = b.pow(n).unwrap().mul(&ring.root(i).unwrap().pow(n + 1).unwrap()).unwrap();
            expected = expected.sub(&term).unwrap();
        }
    }
    assert_eq!(chern_dual_lhs(2, 1, d).unwrap(), expected);
    assert_eq!(chern_dual_rhs(2, 1, d).unwrap(), expected);
}

#[test]
fn symmetric_under_permutation() {
    for r in 1..=3 {
        for j in 0..=r {
            let lhs = chern_dual_lhs(r, j, 7).unwrap();
            let rhs = chern_dual_rhs(r, j, 7).unwrap();
            for p in permutations(r) {
                assert_eq!(lhs.permute(&p), lhs);
                assert_eq!(rhs.permute(&p), rhs);
            }
        }
    }
}

#[test]
fn truncation_is_coherent() {
    for r in 1..=3 {
        for j in 0..=r {
            let high = chern_dual_lhs(r, j, 9).unwrap();
            for d in r as u32..9 {
                assert_eq!(high.truncate(d), chern_dual_lhs(r, j, d).unwrap(), "r = {r}, j = {j}, D = {d}");
            }
        }
    }
}

#[test]
fn homogeneous_in_degree_j() {
    for r in 1..=3 {
        for j in 0..=r {
            assert!(chern_dual_lhs(r, j, 8).unwrap().is_homogeneous(j as i64));
            assert!(chern_dual_rhs(r, j, 8).unwrap().is_homogeneous(j as i64));
        }
        assert!(!rho(RootRing::new(r, 6), 0..r).unwrap().is_homogeneous(0));
    }
}

#[test]
fn duality_reports() {
    for r in 1..=3 {
        let rep = verify_chern_duality(r, 8).unwrap();
        assert!(rep.total_class_matches && rep.homogeneous);
        assert_eq!(rep.degrees_checked, (0..=r).collect::<Vec<_>>());
        assert_eq!(rep.whitney_splits.len(), r - 1);
    }
    let k0 = k0_shadow_check(1, 8).unwrap();
    assert!(k0.unit_identity && k0.dual_identity && k0.trivial_bundle);
}

#[test]
fn domain_errors() {
    assert!(matches!(verify_chern_duality(3, 4), Err(Error::DomainError(_))));
    assert!(matches!(verify_chern_duality(0, 8), Err(Error::DomainError(_))));
    assert!(matches!(chern_dual_lhs(2, 3, 6), Err(Error::DomainError(_))));
    assert!(matches!(k0_shadow_check(2, 6), Err(Error::DomainError(_))));
    assert!(RootRing::new(2, 4).root(2).is_err());
    let mismatch = RootRing::new(1, 4).one().add(&RootRing::new(2, 4).one());
    assert!(matches!(mismatch, Err(Error::RingMismatch(_))));
}

#[test]
fn display() {
    let ring = RootRing::new(1, 2);
    assert_eq!(ring.dual_root(0).unwrap().to_string(), "-x1 - β·x1^2");
    assert_eq!(ring.zero().to_string(), "0");
}
