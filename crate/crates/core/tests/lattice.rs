use endokalc::lattice::{
    cokernel, image, is_exact_at, kernel, smith_normal_form, BaseRing, FPModule, IntMatrix, ModuleMap,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn square(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, n), n))
}

fn to_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows.len(), rows[0].len(), rows)
}

/// Rank by fraction-free elimination.
fn oracle_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let (m, n) = (a.len(), a[0].len());
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, p);
        for r in rank + 1..m {
            let (x, y) = (a[rank][col], a[r][col]);
            let pivot = a[rank].clone();
            for (v, pv) in a[r].iter_mut().zip(&pivot) {
                *v = *v * x - pv * y;
            }
            let g = a[r].iter().fold(0i128, |g, &v| g.gcd(&v));
            if g > 1 {
                a[r].iter_mut().for_each(|v| *v /= g);
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by cofactor expansion.
fn oracle_det(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    if n == 1 {
        return i128::from(rows[0][0]);
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = rows[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &v)| v).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * i128::from(rows[0][c]) * oracle_det(&minor)
        })
        .sum()
}

fn strip_prime(mut n: BigInt, p: u64) -> BigInt {
    let p = BigInt::from(p);
    while !n.is_zero() && n.is_multiple_of(&p) {
        n /= &p;
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_certificate(rows in matrix(4, 4)) {
        let m = to_matrix(&rows);
        let z = BaseRing::integers();
        let snf = smith_normal_form(&m, &z);
        prop_assert_eq!(&(&snf.u * &m) * &snf.v, snf.diagonal_matrix());
        prop_assert_eq!(&snf.u * &snf.u_inv, IntMatrix::identity(m.rows()));
        prop_assert_eq!(&snf.v * &snf.v_inv, IntMatrix::identity(m.cols()));
        prop_assert!(snf.u.is_integral() && snf.u_inv.is_integral());
        prop_assert!(snf.v.is_integral() && snf.v_inv.is_integral());
    }

    #[test]
    fn invariant_factors_divide_and_match_gcd(rows in matrix(4, 4)) {
        let snf = smith_normal_form(&to_matrix(&rows), &BaseRing::integers());
        let d = &snf.invariant_factors;
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(d.iter().all(|x| x.is_positive()));
        let g = rows.iter().flatten().fold(0i64, |g, &x| g.gcd(&x));
        if g != 0 {
            prop_assert_eq!(&d[0], &BigInt::from(g));
        }
    }

    #[test]
    fn rank_agrees_with_elimination(rows in matrix(5, 5)) {
        let snf = smith_normal_form(&to_matrix(&rows), &BaseRing::integers());
        prop_assert_eq!(snf.rank(), oracle_rank(&rows));
    }

    #[test]
    fn determinant_is_product_of_factors(rows in square(4)) {
        let det = oracle_det(&rows);
        let m = to_matrix(&rows);
        let snf = smith_normal_form(&m, &BaseRing::integers());
        if det == 0 {
            prop_assert!(snf.rank() < rows.len());
        } else {
            let prod: BigInt = snf.invariant_factors.iter().product();
            prop_assert_eq!(prod, BigInt::from(det.abs()));
            let coker = FPModule::new(BaseRing::integers(), rows.len(), m).unwrap().canonical();
            prop_assert_eq!(coker.free_rank, 0);
            prop_assert_eq!(coker.torsion.iter().product::<BigInt>(), BigInt::from(det.abs()));
        }
    }

    #[test]
    fn localization_strips_inverted_primes(rows in matrix(4, 4), p in prop::sample::select(vec![2u64, 3, 5])) {
        let m = to_matrix(&rows);
        let over_z = smith_normal_form(&m, &BaseRing::integers());
        let local_ring = BaseRing::new([p]).unwrap();
        let local = smith_normal_form(&m, &local_ring);
        let expected: Vec<BigInt> = over_z.invariant_factors.iter().map(|d| strip_prime(d.clone(), p)).collect();
        prop_assert_eq!(&local.invariant_factors, &expected);
        prop_assert_eq!(&(&local.u * &m) * &local.v, local.diagonal_matrix());
        prop_assert!(local.u.entries_in(&local_ring) && local.v_inv.entries_in(&local_ring));
    }

    #[test]
    fn rank_nullity(rows in matrix(4, 5)) {
        let m = to_matrix(&rows);
        let snf = smith_normal_form(&m, &BaseRing::integers());
        let k = snf.kernel_basis();
        prop_assert_eq!(k.cols(), m.cols() - snf.rank());
        prop_assert!((&m * &k).is_zero());
        if k.cols() > 0 {
            prop_assert_eq!(smith_normal_form(&k, &BaseRing::integers()).rank(), k.cols());
        }
    }

    #[test]
    fn kernel_image_cokernel_are_exact(
        rel in matrix(3, 3),
        f in matrix(3, 3),
    ) {
        // source: Z^c / relations, target: free; f made compatible by composing
        let z = BaseRing::integers();
        let n = rel.len();
        let source = FPModule::new(z.clone(), n, to_matrix(&rel)).unwrap();
        let fm = to_matrix(&f);
        prop_assume!(fm.cols() == n);
        let target_rel = &fm * source.relations();
        let target = FPModule::new(z, fm.rows(), target_rel).unwrap();
        let map = ModuleMap::new(source.clone(), target, fm).unwrap();
        let ker = kernel(&map);
        let coker = cokernel(&map);
        prop_assert!(is_exact_at(&ker.inclusion, &map));
        prop_assert!(is_exact_at(&map, &coker.projection));
        prop_assert!(ker.inclusion.is_injective());
        prop_assert!(coker.projection.is_surjective());
        let im = image(&map);
        prop_assert!(im.module.is_isomorphic(&cokernel(&ker.inclusion).module));
        prop_assert!(im.inclusion.compose(&im.surjection).equals(&map));
    }
}

#[test]
fn localized_cokernel_drops_inverted_torsion() {
    let m = IntMatrix::from_rows(&[&[12, 0], &[0, 5]]);
    let z = FPModule::new(BaseRing::integers(), 2, m.clone()).unwrap();
    let local = z.localize(&BaseRing::new([2]).unwrap());
    assert_eq!(local.canonical().to_string(), "Z/15");
    assert_eq!(z.canonical().to_string(), "Z/60");
}
