use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(rel: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel);
    p.to_str().unwrap().to_string()
}

fn netcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcomp")).args(args).output().expect("binary runs")
}

/// Runs a command that must succeed and returns its standard output.
fn ok(args: &[&str]) -> String {
    let out = netcomp(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// The `[machine]` section of a report.
fn machine(report: &str) -> &str {
    report.split("\n[notes]").next().unwrap()
}

fn has(report: &str, line: &str) -> bool {
    report.lines().any(|l| l == line)
}

#[test]
fn classify_examples() {
    let r = ok(&["classify", "--function", "paper-f4", "--alphabet", "zmod:4", "--sources", "2"]);
    assert!(has(&r, "reducible = false") && has(&r, "exhausted_lambda = 1"), "{r}");
    let table = format!("table:{}", corpus("functions/f4.tbl"));
    let r = ok(&["classify", "--function", &table, "--alphabet", "product:zmod:2,zmod:2"]);
    assert!(has(&r, "class = reducible") && has(&r, "lambda = 1") && has(&r, "T = 3;3"), "{r}");
    let r = ok(&["classify", "--function", "arith-sum", "--alphabet", "2", "--sources", "2"]);
    assert!(has(&r, "class = semi-injective-not-injective"), "{r}");
    assert!(has(&r, "seed = 0"));
}

#[test]
fn capacity_examples() {
    let r = ok(&["capacity", "--network", &corpus("networks/reverse-butterfly.net"), "--alphabet", "2", "--function", "arith-sum"]);
    assert!(has(&r, "routing_capacity = 1 [exact]"), "{r}");
    assert!(has(&r, "footprint_bound = 2/log_2(3) [log 2 2 3]"), "{r}");
    let r = ok(&["capacity", "--network", &corpus("networks/relay-3.net"), "--alphabet", "3", "--function", "max"]);
    assert!(has(&r, "routing_capacity = 1/3 [exact]"), "{r}");
    for s in 2..=5 {
        let net = corpus(&format!("networks/relay-{s}.net"));
        let coeffs = vec!["1"; s].join(",");
        let r = ok(&["capacity", "--network", &net, "--alphabet", "2", "--function", &format!("linear:{coeffs}")]);
        assert!(has(&r, &format!("routing_capacity = 1/{s} [exact]")), "{r}");
        assert!(r.contains("= C_lin = 1 [exact]") && r.contains("= C_cod = 1 [exact]"), "{r}");
    }
}

#[test]
fn corpus_codes_verify() {
    let f3 = format!("table:{}", corpus("functions/f4.tbl"));
    let chain_f = format!("table:{}", corpus("functions/sum-times-x3.tbl"));
    let cases = [
        ("networks/line.net", "codes/product-ring.code", "product:zmod:2,zmod:2", f3.as_str()),
        ("networks/relay-3.net", "codes/chain.code", "field:2", chain_f.as_str()),
        ("networks/reverse-butterfly.net", "codes/butterfly-mod.code", "zmod:2", "mod-sum:2"),
    ];
    for (net, code, alg, f) in cases {
        let r = ok(&["verify", "--network", &corpus(net), "--code", &corpus(code), "--alphabet", alg, "--function", f]);
        assert!(has(&r, "result = verified"), "{code}: {r}");
    }
}

#[test]
fn corrupted_code_gives_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus("codes/butterfly-mod.code")).unwrap();
    let bad = text.replace("encoder 4 linear 1:1 3:1", "encoder 4 linear 1:1 3:0");
    assert_ne!(bad, text);
    let path = dir.path().join("bad.code");
    std::fs::write(&path, bad).unwrap();
    let r = ok(&[
        "verify",
        "--network",
        &corpus("networks/reverse-butterfly.net"),
        "--code",
        path.to_str().unwrap(),
        "--alphabet",
        "zmod:2",
        "--function",
        "mod-sum:2",
    ]);
    assert!(has(&r, "result = counterexample") && r.contains("message.1 = "), "{r}");
}

#[test]
fn oversized_verification_fails() {
    let out = netcomp(&[
        "verify",
        "--network",
        &corpus("networks/reverse-butterfly.net"),
        "--code",
        &corpus("codes/butterfly-mod.code"),
        "--alphabet",
        "zmod:2",
        "--function",
        "mod-sum:2",
        "--budget",
        "4",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn errors_exit_nonzero() {
    for args in [
        vec!["capacity", "--network", "no/such/file.net", "--alphabet", "2", "--function", "max"],
        vec!["classify", "--function", "nonsense", "--alphabet", "2", "--sources", "2"],
        vec!["construct", "km", "--network", "reverse-butterfly", "--field", "2", "--coeffs", "1,0"],
        vec!["construct", "km", "--network", "reverse-butterfly", "--field", "zmod:4", "--coeffs", "1,1"],
        vec!["construct", "butterfly-mod", "--q", "1"],
    ] {
        assert!(!netcomp(&args).status.success(), "{args:?}");
    }
}

#[test]
fn construct_examples_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bm.code");
    let r = ok(&["construct", "butterfly-mod", "--q", "2", "--out", out.to_str().unwrap()]);
    assert!(has(&r, "k = 2") && has(&r, "n = 1") && has(&r, "verification = verified"), "{r}");

    let km = dir.path().join("km.code");
    let net = dir.path().join("km.net");
    let args = [
        "construct",
        "km",
        "--network",
        "reverse-butterfly",
        "--field",
        "2",
        "--coeffs",
        "1,1",
        "--seed",
        "7",
        "--out",
        km.to_str().unwrap(),
        "--network-out",
        net.to_str().unwrap(),
    ];
    let r = ok(&args);
    assert!(has(&r, "rate = 2 [exact]") && has(&r, "seed = 7") && has(&r, "determinants_nonzero = true"), "{r}");
    assert_eq!(machine(&ok(&args)), machine(&r));
    let v = ok(&["verify", "--network", net.to_str().unwrap(), "--code", km.to_str().unwrap(), "--alphabet", "2", "--function", "linear:1,1"]);
    assert!(has(&v, "result = verified"), "{v}");

    let relay = dir.path().join("relay.code");
    let relay_net = dir.path().join("relay.net");
    let table = format!("table:{}", corpus("functions/sum-times-x3.tbl"));
    let r = ok(&[
        "construct",
        "relay",
        "--function",
        &table,
        "--alphabet",
        "2",
        "--out",
        relay.to_str().unwrap(),
        "--network-out",
        relay_net.to_str().unwrap(),
    ]);
    assert!(has(&r, "rate = 1/2 [exact]"), "{r}");
    assert!(dir.path().join("relay.g.tbl").exists());
    let v = ok(&["verify", "--network", relay_net.to_str().unwrap(), "--code", relay.to_str().unwrap(), "--alphabet", "2", "--function", &table]);
    assert!(has(&v, "result = verified"), "{v}");

    let arith = dir.path().join("arith.code");
    let r = ok(&["construct", "butterfly-arith", "--q", "2", "--n", "1", "--out", arith.to_str().unwrap()]);
    assert!(has(&r, "rate = 1 [exact]") && has(&r, "n = 2"), "{r}");
    let v = ok(&["verify", "--network", "reverse-butterfly", "--code", arith.to_str().unwrap(), "--alphabet", "zmod:2", "--function", "arith-sum"]);
    assert!(has(&v, "result = verified"), "{v}");
}

#[test]
fn search_examples() {
    let line = corpus("networks/line.net");
    let base = ["search", "--network", &line, "--function", "paper-f4", "--k", "1", "--n", "1", "--kind", "linear"];
    let with = |alg: &str| {
        let mut a = base.to_vec();
        a.extend(["--alphabet", alg]);
        ok(&a)
    };
    let r = with("zmod:4");
    assert!(has(&r, "result = exhausted-none"), "{r}");
    let r = with("product:zmod:2,zmod:2");
    assert!(has(&r, "result = found"), "{r}");

    let table = format!("table:{}", corpus("functions/sum-times-x3.tbl"));
    let relay = corpus("networks/relay-3.net");
    let args = |jobs: &'static str| {
        vec![
            "search", "--network", &relay, "--alphabet", "2", "--function", &table, "--k", "1", "--n", "1", "--kind",
            "general", "--jobs", jobs,
        ]
    };
    let one = ok(&args("1"));
    assert!(has(&one, "result = found") && has(&one, "rate = 1 [exact]"), "{one}");
    assert_eq!(machine(&one), machine(&ok(&args("4"))));
}
