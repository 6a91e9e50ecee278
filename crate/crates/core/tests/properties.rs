//! Property tests for the arithmetic kernels: ring operations against a
//! big-integer oracle, matrix algebra laws, the Frobenius automorphism,
//! inverse/kernel contracts, and the lattice enumerator against the naive
//! reference scan.

use proptest::prelude::*;

use cgk_core::hypcount;
use cgk_core::rational::Rat;
use cgk_core::ringalg::{poly::Poly, solve_kernel, Mat, Ring, RingError};

fn scalar_rings() -> Vec<Ring> {
    vec![
        Ring::prime_field(2).unwrap(),
        Ring::prime_field(5).unwrap(),
        Ring::prime_field(101).unwrap(),
        Ring::integers_mod(2, 3).unwrap(),
        Ring::integers_mod(3, 2).unwrap(),
        Ring::integers_mod(7, 3).unwrap(),
    ]
}

proptest! {
    #[test]
    fn ring_ops_agree_with_integer_arithmetic(
        ring_idx in 0usize..6,
        x in -10_000i64..10_000,
        y in -10_000i64..10_000,
    ) {
        let ring = scalar_rings()[ring_idx];
        let m = ring.modulus() as i128;
        let (ex, ey) = (ring.embed(x), ring.embed(y));
        prop_assert_eq!(ring.add(ex, ey).a as i128, (x as i128 + y as i128).rem_euclid(m));
        prop_assert_eq!(ring.sub(ex, ey).a as i128, (x as i128 - y as i128).rem_euclid(m));
        prop_assert_eq!(ring.mul(ex, ey).a as i128, (x as i128 * y as i128).rem_euclid(m));
        prop_assert_eq!(ring.neg(ex).a as i128, (-(x as i128)).rem_euclid(m));
    }

    #[test]
    fn quadratic_extension_is_a_field_hom_under_frobenius(
        a in 0i64..25, b in 0i64..25, c in 0i64..25, d in 0i64..25,
    ) {
        let f25 = Ring::quadratic_field(5).unwrap();
        let x = f25.embed_pair(a, b);
        let y = f25.embed_pair(c, d);
        let fx = f25.frobenius(x).unwrap();
        let fy = f25.frobenius(y).unwrap();
        // involution
        prop_assert_eq!(f25.frobenius(fx).unwrap(), x);
        // field homomorphism
        prop_assert_eq!(f25.frobenius(f25.add(x, y)).unwrap(), f25.add(fx, fy));
        prop_assert_eq!(f25.frobenius(f25.mul(x, y)).unwrap(), f25.mul(fx, fy));
        // fixes exactly the prime subfield
        prop_assert_eq!(fx == x, b % 5 == 0);
    }

    #[test]
    fn matrix_products_associate_over_z9(
        entries in prop::collection::vec(0i64..9, 27),
    ) {
        let z9 = Ring::integers_mod(3, 2).unwrap();
        let mk = |offset: usize| {
            Mat::from_rows(
                z9,
                &[
                    entries[offset..offset + 3].to_vec(),
                    entries[offset + 3..offset + 6].to_vec(),
                    entries[offset + 6..offset + 9].to_vec(),
                ],
            )
            .unwrap()
        };
        let (a, b, c) = (mk(0), mk(9), mk(18));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        // distributivity
        let l2 = a.mul(&b.add(&c).unwrap()).unwrap();
        let r2 = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l2, r2);
    }

    #[test]
    fn inverse_contract_over_z8(entries in prop::collection::vec(0i64..8, 9)) {
        let z8 = Ring::integers_mod(2, 3).unwrap();
        let m = Mat::from_rows(
            z8,
            &[
                entries[0..3].to_vec(),
                entries[3..6].to_vec(),
                entries[6..9].to_vec(),
            ],
        )
        .unwrap();
        let det_unit = z8.is_unit(m.det());
        match m.inverse() {
            Ok(inv) => {
                prop_assert!(det_unit);
                prop_assert_eq!(m.mul(&inv).unwrap(), Mat::identity(z8, 3));
                prop_assert_eq!(inv.mul(&m).unwrap(), Mat::identity(z8, 3));
            }
            Err(RingError::NotInvertible) => prop_assert!(!det_unit),
            Err(e) => return Err(TestCaseError::fail(format!("unexpected {e}"))),
        }
    }

    #[test]
    fn kernel_vectors_annihilate_and_dims_add_up(
        entries in prop::collection::vec(0i64..7, 16),
    ) {
        let f7 = Ring::prime_field(7).unwrap();
        let m = Mat::from_rows(
            f7,
            &[
                entries[0..4].to_vec(),
                entries[4..8].to_vec(),
                entries[8..12].to_vec(),
                entries[12..16].to_vec(),
            ],
        )
        .unwrap();
        let k = solve_kernel(&m).unwrap();
        prop_assert_eq!(k.rank + k.nullity, 4);
        for v in &k.basis {
            for i in 0..4 {
                let mut acc = f7.zero();
                for j in 0..4 {
                    acc = f7.add(acc, f7.mul(m.get(i, j), v[j]));
                }
                prop_assert_eq!(acc, f7.zero());
            }
        }
    }

    #[test]
    fn poly_divmod_and_gcd_contracts(
        a in prop::collection::vec(0i64..5, 1..8),
        b in prop::collection::vec(0i64..5, 1..6),
    ) {
        let f5 = Ring::prime_field(5).unwrap();
        let pa = Poly::new(f5, a.iter().map(|&c| f5.embed(c)).collect());
        let pb = Poly::new(f5, b.iter().map(|&c| f5.embed(c)).collect());
        if !pb.is_zero() {
            let (q, r) = pa.divmod(&pb).unwrap();
            prop_assert_eq!(q.mul(&pb).add(&r), pa.clone());
            if !r.is_zero() {
                prop_assert!(r.degree().unwrap() < pb.degree().unwrap());
            }
        }
        let g = pa.gcd(&pb).unwrap();
        if !g.is_zero() {
            prop_assert!(pa.rem(&g).unwrap().is_zero());
            prop_assert!(pb.rem(&g).unwrap().is_zero());
        }
    }

    #[test]
    fn rational_field_laws(
        an in -200i128..200, ad in 1i128..40,
        bn in -200i128..200, bd in 1i128..40,
    ) {
        let a = Rat::new(an, ad);
        let b = Rat::new(bn, bd);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!((a - b) + b, a);
        prop_assert_eq!(a * b, b * a);
        if !b.is_zero() {
            prop_assert_eq!((a / b) * b, a);
        }
        let shown = Rat::parse(&a.to_string()).unwrap();
        prop_assert_eq!(shown, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fast_lattice_enumeration_matches_naive(norm2_max in 2i64..120) {
        let mut fast = Vec::new();
        hypcount::enumerate_by_norm(norm2_max, 0, 1, &mut |a, b, c, d| {
            fast.push((a, b, c, d));
        });
        let mut naive = Vec::new();
        hypcount::enumerate_naive(norm2_max, &mut |a, b, c, d| {
            naive.push((a, b, c, d));
        });
        fast.sort();
        naive.sort();
        prop_assert_eq!(fast, naive);
    }
}
