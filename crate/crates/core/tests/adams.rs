use endokalc::adams::synthetic::{psi_matrices, sigma_checks, synthetic_instance, SyntheticConfig, SyntheticInstance};
use endokalc::adams::{
    check_adams_composition, kernel_annihilation, psi_series, tau_series, verify_eigenvalues,
    verify_theta_identities, AdamsEndoModule, TruncatedSeries,
};
use endokalc::bounds::n_s;
use endokalc::endo::EndoModule;
use endokalc::lattice::{frac, int, BaseRing, FPModule, IntMatrix};
use endokalc::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instances(seed: u64, n: usize) -> Vec<SyntheticInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| synthetic_instance(&mut rng, &SyntheticConfig::default())).collect()
}

fn width(inst: &SyntheticInstance) -> usize {
    (inst.integral.hi() - inst.integral.lo()) as usize
}

#[test]
fn derivation_preserves_commutation_and_eigenvalues() {
    for inst in instances(21, 25) {
        for ae in &inst.adams {
            for s in 0..=width(&inst) {
                assert!(ae.derived_n(s).commutes(), "k = {}, s = {s}", ae.k());
            }
            let rep = verify_eigenvalues(ae, |i| i);
            assert!(rep.all_hold(), "k = {}: {:?}", ae.k(), rep.first_failure());
        }
    }
}

#[test]
fn kernels_are_killed_by_n_s() {
    for inst in instances(22, 25) {
        for ae in &inst.adams {
            for s in 1..=width(&inst) {
                let n = BigInt::from(n_s(s as i64).unwrap());
                for i in inst.integral.indices() {
                    let a = kernel_annihilation(ae, i, s, 64).unwrap();
                    let e = a.exponent.clone().expect("kernel is torsion");
                    assert!(n.is_multiple_of(&e), "{a:?}");
                    assert_eq!(a.divides_n_s, Some(true));
                    assert!(a.m.is_some(), "k^m (k^s - 1) never kills {a:?}");
                    for p in [3u64, 5, 7, 11, 13] {
                        if !(s as u64).is_multiple_of(p - 1) {
                            assert!(!e.is_multiple_of(&BigInt::from(p)), "p = {p}: {a:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn composition_of_operators() {
    for inst in instances(23, 20) {
        let psi = |k: i64| {
            AdamsEndoModule::attach_to_integral(inst.integral.clone(), k, psi_matrices(&inst.integral, &inst.weights, k))
                .unwrap()
        };
        let (p2, p3) = (&inst.adams[0], &inst.adams[1]);
        assert_eq!((p2.k(), p3.k()), (2, 3));
        assert!(check_adams_composition(p2, p3, &psi(6)).unwrap());
        assert!(check_adams_composition(p2, p2, &psi(4)).unwrap());
        assert!(matches!(check_adams_composition(p2, p3, &psi(5)), Err(Error::DomainError(_))));
    }
}

#[test]
fn sigma_projectors_agree() {
    for inst in instances(24, 15) {
        let summary = sigma_checks(&inst).unwrap();
        assert_eq!(summary.summands, inst.integral.modules().len());
    }
}

#[test]
fn wrong_eigenvalue_is_detected() {
    // Z -2-> Z over Z[1/2] starting at index 1: only C_1 = Z is nonzero
    let z = BaseRing::inverting(2);
    let zz = FPModule::free(&z, 1);
    let e = EndoModule::build(z, 1, vec![zz.clone(), zz], vec![IntMatrix::from_rows(&[&[2]])]).unwrap();
    let good = AdamsEndoModule::attach(
        e.clone(),
        2,
        vec![IntMatrix::from_rows(&[&[1]]), IntMatrix::from_rows(&[&[1]])],
    )
    .unwrap();
    assert!(verify_eigenvalues(&good, |_| 0).all_hold());
    let rep = verify_eigenvalues(&good, |i| i);
    assert!(!rep.all_hold());
    let scaled = AdamsEndoModule::attach(
        e,
        2,
        vec![IntMatrix::diagonal(1, 1, &[frac(1, 2)]), IntMatrix::diagonal(1, 1, &[frac(1, 2)])],
    )
    .unwrap();
    assert!(verify_eigenvalues(&scaled, |i| i).all_hold());
}

fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, j| acc * (n - j) as i128 / (j + 1) as i128)
}

/// Coefficients of `(1 - (1 - c)^k) / c` by dividing the expanded numerator.
fn tau_by_division(k: i64, order: usize) -> Vec<i128> {
    let numerator: Vec<i128> = (0..=k)
        .map(|n| if n == 0 { 0 } else { -binomial(k, n) * if n % 2 == 0 { 1 } else { -1 } })
        .collect();
    assert_eq!(numerator[0], 0);
    (0..=order).map(|n| numerator.get(n + 1).copied().unwrap_or(0)).collect()
}

#[test]
fn tau_matches_direct_division() {
    for k in 1..=9 {
        let t = tau_series(k, 10).unwrap();
        let expected = tau_by_division(k, 10);
        for (n, &c) in expected.iter().enumerate() {
            assert_eq!(t.coeff(n), &BigRational::from_integer(c.into()), "k = {k}, n = {n}");
        }
        let c = TruncatedSeries::variable(10);
        assert_eq!(t.mul(&c), psi_series(k, 10).unwrap());
    }
}

#[test]
fn theta_identities() {
    for k in 2..=6 {
        for kp in 2..=6 {
            let rep = verify_theta_identities(k, kp, 10).unwrap();
            assert!(rep.all_hold(), "{rep:?}");
        }
    }
    let inv = tau_series(3, 6).unwrap().inverse().unwrap();
    assert_eq!(inv.coeff(0), &frac(1, 3));
    assert!(inv.coefficients_in(&BaseRing::inverting(3)));
    assert!(!inv.coefficients_in(&BaseRing::integers()));
    assert_eq!(tau_series(1, 4).unwrap(), TruncatedSeries::constant(int(1), 4));
}
