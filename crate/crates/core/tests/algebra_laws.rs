//! Exhaustive ring axioms, extension-field arithmetic against a direct
//! polynomial implementation, and matrix inverses against multiplication.

mod common;

use common::{check_inverse, check_ring_axioms, shipped_algebras};
use netcomp::algebra::{for_each_vector, Algebra, Elem, Matrix};
use proptest::prelude::*;

#[test]
fn ring_axioms_exhaustive() {
    for a in shipped_algebras() {
        check_ring_axioms(&a);
    }
}

#[test]
fn units_and_field_flag() {
    for a in shipped_algebras() {
        let q = a.size();
        let mut all_units = true;
        for x in 0..q {
            let brute = (0..q).find(|&y| a.mul(x, y) == a.one());
            assert_eq!(a.unit_inverse(x), brute, "{a} {x}");
            if x != 0 && brute.is_none() {
                all_units = false;
            }
        }
        assert_eq!(a.is_field(), all_units, "{a}");
    }
}

/// Product of coefficient vectors over `base`, reduced by the monic `modulus`.
fn poly_mul_mod(base: &Algebra, x: &[Elem], y: &[Elem], modulus: &[Elem]) -> Vec<Elem> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0; x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            prod[i + j] = base.add(prod[i + j], base.mul(a, b));
        }
    }
    for top in (deg..prod.len()).rev() {
        let c = prod[top];
        if c != 0 {
            for (k, &m) in modulus.iter().enumerate() {
                let idx = top - deg + k;
                prod[idx] = base.sub(prod[idx], base.mul(c, m));
            }
        }
    }
    prod.truncate(deg);
    prod
}

/// True if the monic `modulus` has no monic factor of degree 1..=deg/2.
fn irreducible(base: &Algebra, modulus: &[Elem]) -> bool {
    let deg = modulus.len() - 1;
    let q = base.size();
    for d in 1..=deg / 2 {
        let mut found = false;
        for_each_vector(q, d, |low| {
            let mut divisor = low.to_vec();
            divisor.push(base.one());
            let mut rem = modulus.to_vec();
            for top in (d..rem.len()).rev() {
                let c = rem[top];
                if c != 0 {
                    for (k, &m) in divisor.iter().enumerate() {
                        let idx = top - d + k;
                        rem[idx] = base.sub(rem[idx], base.mul(c, m));
                    }
                }
            }
            if rem[..d].iter().all(|&v| v == 0) {
                found = true;
            }
        });
        if found {
            return false;
        }
    }
    true
}

#[test]
fn extension_fields_match_polynomial_arithmetic() {
    let cases = [("field:2", 2), ("field:2", 3), ("field:3", 2), ("field:2", 4), ("field:4", 2), ("field:5", 2)];
    for (base_spec, degree) in cases {
        let base = Algebra::parse(base_spec).unwrap();
        let ext = base.extension(degree).unwrap();
        let (b, modulus) = ext.extension_parts().unwrap();
        assert_eq!(b, &base);
        assert_eq!(modulus.len(), degree as usize + 1);
        assert_eq!(*modulus.last().unwrap(), base.one());
        assert!(irreducible(&base, modulus), "{base_spec}^{degree}");
        for x in 0..ext.size() {
            let cx = ext.coefficients(x);
            assert_eq!(ext.from_coefficients(&cx), x);
            for y in 0..ext.size() {
                let cy = ext.coefficients(y);
                let sum: Vec<Elem> = cx.iter().zip(&cy).map(|(&u, &v)| base.add(u, v)).collect();
                assert_eq!(ext.coefficients(ext.add(x, y)), sum);
                assert_eq!(ext.coefficients(ext.mul(x, y)), poly_mul_mod(&base, &cx, &cy, modulus));
            }
        }
    }
}

#[test]
fn named_fields_are_the_extensions() {
    for (q, p, d) in [(4, 2, 2), (8, 2, 3), (9, 3, 2), (16, 2, 4)] {
        let named = Algebra::parse(&format!("field:{q}")).unwrap();
        let built = Algebra::parse(&format!("field:{p}")).unwrap().extension(d).unwrap();
        for x in 0..q {
            for y in 0..q {
                assert_eq!(named.mul(x, y), built.mul(x, y));
            }
        }
    }
}

#[test]
fn every_two_by_two_inverse() {
    for spec in ["field:2", "field:3", "field:4"] {
        let a = Algebra::parse(spec).unwrap();
        for_each_vector(a.size(), 4, |v| {
            check_inverse(&a, &Matrix::from_vec(2, 2, v.to_vec()).unwrap());
        });
    }
}

fn field_and_matrix() -> impl Strategy<Value = (Algebra, Matrix)> {
    (prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9]), 1usize..=4).prop_flat_map(|(q, n)| {
        prop::collection::vec(0..q, n * n).prop_map(move |data| {
            let a = Algebra::parse(&format!("field:{q}")).unwrap();
            (a, Matrix::from_vec(n, n, data).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn random_inverses((a, m) in field_and_matrix()) {
        prop_assume!(m.rows() <= 3 || a.size() <= 4);
        check_inverse(&a, &m);
    }

    #[test]
    fn det_is_multiplicative((a, m) in field_and_matrix(), seed in any::<u64>()) {
        let n = m.rows();
        let other: Vec<Elem> = (0..n * n).map(|i| ((seed >> (i % 60)) as u32 ^ i as u32) % a.size()).collect();
        let m2 = Matrix::from_vec(n, n, other).unwrap();
        let lhs = m.mul(&a, &m2).unwrap().det(&a).unwrap();
        prop_assert_eq!(lhs, a.mul(m.det(&a).unwrap(), m2.det(&a).unwrap()));
    }
}
