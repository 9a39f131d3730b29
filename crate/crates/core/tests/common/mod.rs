//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use netcomp::algebra::{for_each_vector, Algebra, Matrix};

/// Every algebra spec form of size at most 16: fields, `Z_m`, and products.
pub fn shipped_algebras() -> Vec<Algebra> {
    let mut specs: Vec<String> = Vec::new();
    for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        specs.push(format!("field:{q}"));
    }
    for m in 2..=16 {
        specs.push(format!("zmod:{m}"));
    }
    let parts = ["zmod:2", "zmod:3", "zmod:4", "field:4", "zmod:5", "zmod:6", "zmod:8", "field:8"];
    for a in parts {
        for b in parts {
            let size = |s: &str| s.rsplit(':').next().unwrap().parse::<u32>().unwrap();
            if size(a) * size(b) <= 16 {
                specs.push(format!("product:{a},{b}"));
            }
        }
    }
    specs.push("product:zmod:2,zmod:2,zmod:2".into());
    specs.push("product:zmod:2,zmod:2,zmod:2,zmod:2".into());
    specs.push("product:zmod:2,zmod:2,zmod:4".into());
    specs.push("product:zmod:3,zmod:2,zmod:2".into());
    specs.iter().map(|s| Algebra::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))).collect()
}

/// Additive and multiplicative laws over all element triples.
pub fn check_ring_axioms(a: &Algebra) {
    let q = a.size();
    let (zero, one) = (a.zero(), a.one());
    for x in 0..q {
        assert_eq!(a.add(x, zero), x, "{a}");
        assert_eq!(a.mul(x, one), x, "{a}");
        assert_eq!(a.mul(x, zero), zero, "{a}");
        assert_eq!(a.add(x, a.neg(x)), zero, "{a}");
        for y in 0..q {
            assert_eq!(a.add(x, y), a.add(y, x), "{a}");
            assert_eq!(a.mul(x, y), a.mul(y, x), "{a}");
            assert_eq!(a.sub(a.add(x, y), y), x, "{a}");
            for z in 0..q {
                assert_eq!(a.add(a.add(x, y), z), a.add(x, a.add(y, z)), "{a}");
                assert_eq!(a.mul(a.mul(x, y), z), a.mul(x, a.mul(y, z)), "{a}");
                assert_eq!(a.mul(x, a.add(y, z)), a.add(a.mul(x, y), a.mul(x, z)), "{a}");
            }
        }
    }
}

/// Invertibility oracle: `xM = 0` only for `x = 0`.
fn invertible_by_brute_force(a: &Algebra, m: &Matrix) -> bool {
    let mut injective = true;
    for_each_vector(a.size(), m.rows(), |x| {
        if x.iter().any(|&v| v != 0) && m.row_product(a, x).iter().all(|&v| v == 0) {
            injective = false;
        }
    });
    injective
}

pub fn check_inverse(a: &Algebra, m: &Matrix) {
    let n = m.rows();
    let det = m.det(a).unwrap();
    let inv = m.inverse(a).unwrap();
    assert_eq!(inv.is_some(), det != 0);
    assert_eq!(inv.is_some(), invertible_by_brute_force(a, m));
    assert_eq!(m.rank(a).unwrap() == n, det != 0);
    if let Some(inv) = inv {
        assert_eq!(inv.mul(a, m).unwrap(), Matrix::identity(a, n));
        assert_eq!(m.mul(a, &inv).unwrap(), Matrix::identity(a, n));
    }
}

