use num_rational::Ratio;

use super::*;
use crate::algebra::Algebra;
use crate::codes::DEFAULT_VERIFY_BUDGET;
use crate::functions::DEFAULT_RING_BUDGET;

fn alg(s: &str) -> Algebra {
    Algebra::parse(s).unwrap()
}

#[test]
fn butterfly_mod_example() {
    let c = butterfly_mod_code(2).unwrap();
    let ev = c.code.evaluate(&c.network, &[vec![1, 1], vec![1, 0]]).unwrap();
    assert_eq!(ev.output, vec![0, 1]);
    assert_eq!(c.verification, Verification::Verified { assignments: 16 });
    let c3 = butterfly_mod_code(3).unwrap();
    assert_eq!(c3.code.evaluate(&c3.network, &[vec![0, 0], vec![0, 0]]).unwrap().output, vec![0, 0]);
    for q in [3, 5] {
        assert!(butterfly_mod_code(q).unwrap().exhaustive);
    }
    assert!(butterfly_mod_code(1).is_err());
}

#[test]
fn arith_lengths_match_float_oracle() {
    for q in 2..8u32 {
        for n in 1..12usize {
            let oracle = (n as f64 * ((2 * q - 1) as f64).ln() / (q as f64).ln()).ceil() as usize;
            assert_eq!(arith_code_length(q, n), oracle, "q={q} n={n}");
        }
    }
}

#[test]
fn butterfly_arith_codes() {
    for (q, n, n_out) in [(2, 1, 2), (2, 2, 4), (2, 3, 5), (3, 1, 2)] {
        let c = butterfly_arith_code(q, n).unwrap();
        assert_eq!(c.code.n, n_out);
        assert_eq!(c.code.k, 2 * n);
        assert!(c.verification.is_verified() && c.exhaustive);
    }
    let c = butterfly_arith_code(2, 5).unwrap();
    assert_eq!(c.code.rate(), Ratio::new(5, 4));
    let ev = c.code.evaluate(&c.network, &[vec![1, 1, 0, 1, 0, 1, 1, 1, 1, 1], vec![1, 0, 1, 1, 0, 0, 1, 0, 1, 1]]).unwrap();
    assert_eq!(ev.output, vec![2, 1, 1, 2, 0, 1, 2, 1, 2, 2]);
}

#[test]
fn arith_rate_below_capacity_and_converging() {
    for q in [2u32, 3] {
        let cap = butterfly_capacity(q);
        let mut best = Ratio::from_integer(0u64);
        for n in 1..40 {
            let rate = Ratio::new(2 * n as u64, arith_code_length(q, n) as u64);
            assert_eq!(cap.cmp_rational(&rate), std::cmp::Ordering::Greater);
            best = best.max(rate);
        }
        assert!(cap.to_f64() - (*best.numer() as f64 / *best.denom() as f64) < 0.05);
    }
    assert!(Ratio::new(6u64, arith_code_length(2, 3) as u64) > Ratio::from_integer(1));
}

#[test]
fn capacity_values() {
    assert!((butterfly_capacity(2).to_f64() - 1.2618595071429148).abs() < 1e-12);
    for q in 2..20 {
        let lo = butterfly_capacity(q);
        let hi = butterfly_capacity(q + 1);
        assert!(lo.to_f64() < hi.to_f64());
        assert!(hi.to_f64() < 2.0);
    }
    assert!(butterfly_capacity(1 << 20).to_f64() > 1.9);
}

#[test]
fn relay_codes() {
    let gf2 = alg("field:2");
    let f = TargetFunction::from_fn("(x1+x2)x3", gf2.clone(), 3, |x| ((x[0] ^ x[1]) & x[2]) as i64).unwrap();
    let w = f.reducible_over_field().unwrap().unwrap();
    let c = relay_reduction_code(&f, &w).unwrap();
    assert_eq!(c.code.rate(), Ratio::new(1, 2));
    assert_eq!(c.network.routing_capacity(), Ratio::new(1, 3));

    let sum = TargetFunction::builtin("mod-sum:2", &gf2, 2).unwrap();
    let w = sum.reducible_over_field().unwrap().unwrap();
    assert_eq!(relay_reduction_code(&sum, &w).unwrap().code.rate(), Ratio::from_integer(1));

    let v = alg("product:zmod:2,zmod:2");
    let f4 = TargetFunction::builtin("paper-f4", &v, 2).unwrap();
    let w = f4.reducible_over_ring(1, DEFAULT_RING_BUDGET).unwrap().unwrap();
    let c = relay_reduction_code(&f4, &w).unwrap();
    assert_eq!(c.code.rate(), Ratio::from_integer(1));
    assert!(verify_code(&c.network, &c.code, &f4, DEFAULT_VERIFY_BUDGET).unwrap().is_verified());

    let mut bad = w.clone();
    bad.g.swap(0, 1);
    assert!(matches!(relay_reduction_code(&f4, &bad), Err(ConstructError::InvalidWitness)));
}

#[test]
fn km_reverse_butterfly_rate_two() {
    let net = standard::reverse_butterfly();
    let k = km_construct(&net, &alg("field:2"), &[1, 1], 7).unwrap();
    assert_eq!(k.rate(), Ratio::from_integer(2));
    assert!(k.determinants.iter().all(|&d| d != 0));
    assert!(k.construction.verification.is_verified());
    assert_eq!(k.minimizing_cut.as_ref().unwrap().edges.len(), 2);
    let again = km_construct(&net, &alg("field:2"), &[1, 1], 7).unwrap();
    assert_eq!(again.construction.code, k.construction.code);
    assert_eq!(again.attempts, k.attempts);
}

#[test]
fn km_relay_and_pair() {
    let k = km_construct(&standard::relay(3), &alg("field:2"), &[1, 1, 1], 0).unwrap();
    assert_eq!(k.rate(), Ratio::from_integer(1));
    assert!(k.construction.exhaustive);
    for q in ["field:3", "field:4", "field:5"] {
        let a = alg(q);
        let k = km_construct(&standard::direct_pair(), &a, &[1, 1], 3).unwrap();
        assert_eq!(k.rate(), Ratio::from_integer(1));
        assert!(k.construction.verification.is_verified());
    }
    let k = km_construct(&standard::relay(2), &alg("field:4"), &[2, 3], 1).unwrap();
    assert!(k.construction.verification.is_verified());
}

#[test]
fn km_errors() {
    let net = standard::reverse_butterfly();
    assert!(matches!(km_construct(&net, &alg("field:2"), &[1, 0], 0), Err(ConstructError::ZeroCoefficient(2))));
    assert!(matches!(km_construct(&net, &alg("zmod:4"), &[1, 1], 0), Err(ConstructError::NotAField(_))));
    assert!(matches!(km_construct(&net, &alg("field:2"), &[1], 0), Err(ConstructError::CoefficientCount { .. })));
}

#[test]
fn km_output_matches_direct_sum() {
    let net = standard::line();
    let f2 = alg("field:2");
    let k = km_construct(&net, &f2, &[1, 1], 5).unwrap();
    let code = &k.construction.code;
    for x in 0..2u32.pow(code.k as u32 * 2) {
        let bits: Vec<Elem> = (0..code.k * 2).map(|i| x >> i & 1).collect();
        let msgs = vec![bits[..code.k].to_vec(), bits[code.k..].to_vec()];
        let out = code.evaluate(&net, &msgs).unwrap().output;
        let expect: Vec<i64> = (0..code.k).map(|j| (msgs[0][j] ^ msgs[1][j]) as i64).collect();
        assert_eq!(out, expect);
    }
}
