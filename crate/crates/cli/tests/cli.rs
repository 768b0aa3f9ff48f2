use multival::{run, Output};

fn multival(args: &[&str]) -> Output {
    run(std::iter::once("multival").chain(args.iter().copied()))
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("golden file")
}

#[test]
fn demo_ww_matches_golden() {
    let out = multival(&["--audit", "demo", "ww"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, golden("demo_ww.txt"));
}

#[test]
fn demo_decompose_matches_golden() {
    let out = multival(&["--audit", "demo", "decompose", "--primes", "2,3,5"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, golden("demo_decompose.txt"));
    assert!(out.stdout.contains("point 352"));
}

#[test]
fn saved_reports_reaudit() {
    let dir = std::env::temp_dir().join(format!("multival-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("ww.txt");
    std::fs::write(&good, golden("demo_ww.txt")).unwrap();
    let out = multival(&["audit", good.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);

    // 46/5 has value 0 at 5, not 1
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "WITNESS: val Q:5 | 46/5 | -1\nWITNESS: val Q:5 | 46/5 | 0\n").unwrap();
    let out = multival(&["audit", bad.to_str().unwrap()]);
    assert_eq!(out.code, 2, "{}{}", out.stdout, out.stderr);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["val", "--vals", "Q:2,Q:3", "12"], 0),
        (&["ring", "--spec", "ww", "contains", "i"], 2),
        (&["ring", "--spec", "ww", "local?"], 0),
        (&["ring", "--spec", "mv(Q:2,Q:3)", "local?"], 2),
        (&["topo", "--spec", "mv(Q:5)", "local?"], 0),
        (&["topo", "--spec", "mv(Q:2,Q:3)", "local?"], 2),
        (&["locsent", "eval", "--builtin", "locality", "--spec", "mv(Q:5)", "--budget", "100"], 3),
        (&["val", "--vals", "Q:4", "1"], 1),
        (&["val", "--vals", "Q:2,Qi:3", "1"], 1),
        (&["ring", "--spec", "mv(Q:2", "local?"], 1),
        (&["scramble", "--vals", "Q:5", "--tuple", "0;1"], 1),
        (&["frobnicate"], 1),
        (&[], 1),
        (&["--help"], 0),
    ];
    for (args, code) in cases {
        let out = multival(args);
        assert_eq!(out.code, *code, "{args:?}: {}{}", out.stdout, out.stderr);
        if *code == 1 {
            assert!(out.stdout.is_empty() && !out.stderr.is_empty(), "{args:?}");
        }
    }
}

#[test]
fn audit_flag_covers_every_witness() {
    let runs: &[&[&str]] = &[
        &["--audit", "scramble", "--vals", "Qi:2+1*i,Qi:2-1*i", "--tuple", "5;1+2*i;3"],
        &["--audit", "approx", "--target", "Q:2=1", "--target", "Q:3:x-1>=2", "--target", "Q:5=-1"],
        &["--audit", "ring", "--spec", "ww", "integral-witness", "2+i"],
        &["--audit", "ring", "--spec", "mv(Q:2,Q:3)", "member", "5/7", "--gens", "6;4"],
        &["--audit", "topo", "--spec", "mv(Q:2,Q:7)", "indep-sum"],
    ];
    for args in runs {
        let out = multival(args);
        assert!(out.code == 0 || out.code == 2, "{args:?}: {}", out.stderr);
        let audit = out.stdout.lines().last().unwrap();
        let counts = audit.strip_prefix("AUDIT: ").and_then(|s| s.split(' ').next()).unwrap();
        let (ok, total) = counts.split_once('/').unwrap();
        assert_eq!(ok, total, "{args:?}: {}", out.stdout);
        assert_ne!(total, "0", "{args:?}");
    }
}

#[test]
fn associativity_trials() {
    let out = multival(&["--trials", "3", "topo", "--spec", "mv(Q:2)", "associativity"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.matches("TRIAL:").count(), 3);
    assert!(out.stdout.ends_with("ASSOCIATIVE: true\n"));
}

#[test]
fn locsent_check_reports_syntax_and_polarity() {
    let dir = std::env::temp_dir().join(format!("multival-ls-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_owned()
    };
    let ok = write("ok.ls", &multival(&["locsent", "builtin", "locality"]).stdout);
    assert_eq!(multival(&["locsent", "check", &ok]).code, 0);
    let bad = write("polarity.ls", "exists U forall x :\n  not (x in U -> x = 0)\n");
    let out = multival(&["locsent", "check", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.contains("VIOLATION"));
    let syn = write("syntax.ls", "forall x : x in\n  y");
    let out = multival(&["locsent", "check", &syn]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains(":2:3:"), "{}", out.stderr);
    std::fs::remove_dir_all(&dir).unwrap();
}
