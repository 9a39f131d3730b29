use super::*;

fn alg(s: &str) -> Algebra {
    Algebra::parse(s).unwrap()
}

fn line() -> Network {
    Network::parse("node s1 source\nnode s2 source\nnode rho receiver\nedge s1 s2\nedge s2 rho\n").unwrap()
}

fn relay(s: usize) -> Network {
    let mut text = String::new();
    for i in 1..=s {
        text += &format!("node s{i} source\n");
    }
    text += "node v\nnode rho receiver\n";
    for i in 1..=s {
        text += &format!("edge s{i} v\n");
    }
    text += "edge v rho\n";
    Network::parse(&text).unwrap()
}

fn sum_times_x3() -> TargetFunction {
    TargetFunction::from_fn("(x1+x2)x3", alg("field:2"), 3, |x| ((x[0] ^ x[1]) & x[2]) as i64).unwrap()
}

#[test]
fn z4_linear_codes_fail_on_the_line() {
    let f = TargetFunction::builtin("paper-f4", &alg("zmod:4"), 2).unwrap();
    let out = search_linear(&line(), &f, 1, 1, DEFAULT_SEARCH_BUDGET).unwrap();
    assert!(matches!(out, SearchOutcome::Exhausted { candidates: 64, .. }), "{out:?}");
}

#[test]
fn product_ring_linear_code_is_found() {
    let v = alg("product:zmod:2,zmod:2");
    let f = TargetFunction::builtin("paper-f4", &v, 2).unwrap();
    let out = search_linear(&line(), &f, 1, 1, DEFAULT_SEARCH_BUDGET).unwrap();
    let SearchOutcome::Found { code, candidate, .. } = out else { panic!("{out:?}") };
    // every coefficient is the identity a3 = 3
    assert_eq!(candidate, 63);
    assert_eq!(code.to_bundle().text, "k 1\nn 1\nencoder 0 linear msg:3\nencoder 1 linear 0:3 msg:3\ndecoder table dec.tbl\n");
}

#[test]
fn chain_network_linear_versus_general() {
    let f = sum_times_x3();
    let lin = search_linear(&relay(3), &f, 1, 1, DEFAULT_SEARCH_BUDGET).unwrap();
    assert!(matches!(lin, SearchOutcome::Exhausted { .. }), "{lin:?}");
    let gen = search_general(&relay(3), &f, 1, 1, DEFAULT_SEARCH_BUDGET).unwrap();
    assert_eq!(gen.code().unwrap().rate(), Ratio::from_integer(1));
    let half = search_linear(&relay(3), &f, 1, 2, DEFAULT_SEARCH_BUDGET).unwrap();
    assert_eq!(half.code().unwrap().rate(), Ratio::new(1, 2));
}

#[test]
fn general_relay_codes() {
    let gf2 = alg("field:2");
    let max = TargetFunction::builtin("max", &gf2, 2).unwrap();
    assert!(search_general(&relay(2), &max, 1, 1, DEFAULT_SEARCH_BUDGET).unwrap().code().is_some());
    let sum = TargetFunction::builtin("arith-sum", &gf2, 2).unwrap();
    let out = search_general(&relay(2), &sum, 1, 1, DEFAULT_SEARCH_BUDGET).unwrap();
    assert!(matches!(out, SearchOutcome::Exhausted { candidates: 256, .. }), "{out:?}");
}

#[test]
fn witness_independent_of_thread_count() {
    let f = sum_times_x3();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| match search_general(&relay(3), &f, 1, 1, DEFAULT_SEARCH_BUDGET).unwrap() {
            SearchOutcome::Found { candidate, evaluations, .. } => (candidate, evaluations),
            other => panic!("{other:?}"),
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn budget_is_reported() {
    let f = sum_times_x3();
    let out = search_general(&relay(3), &f, 1, 1, 100).unwrap();
    assert!(matches!(out, SearchOutcome::BudgetExceeded { remaining: 16384, .. }), "{out:?}");
    let f4 = TargetFunction::builtin("paper-f4", &alg("zmod:4"), 2).unwrap();
    let out = search_general(&line(), &f4, 2, 2, DEFAULT_SEARCH_BUDGET).unwrap();
    assert_eq!(out.label(), "budget-exceeded");
}

#[test]
fn sweep_reports_found_rates_within_bounds() {
    let v = alg("product:zmod:2,zmod:2");
    let f = TargetFunction::builtin("paper-f4", &v, 2).unwrap();
    let sweep = achievability_sweep(&line(), &f, &[(1, 1)], DEFAULT_SEARCH_BUDGET).unwrap();
    assert_eq!(sweep.rows[0].linear.label(), "found");
    assert!(sweep.consistent_with_bounds());
}
