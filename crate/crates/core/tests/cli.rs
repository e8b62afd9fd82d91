use std::process::{Command, Output};

use modval::cli::{evaluate, find_check, list_checks, parse_json, Record};

fn modval(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modval")).args(args).env("MODVAL_CACHE_DIR", cache).output().expect("spawn modval")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = modval(&["run", "--check", "thm1.1", "--digits", "50", "--format", "text"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.starts_with("PASS") && text.contains("1 passed"), "{text}");

    assert_eq!(modval(&["run", "--check", "bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(modval(&["run", "--all", "--digits", "5"], dir.path()).status.code(), Some(2));
    assert_eq!(modval(&["run"], dir.path()).status.code(), Some(2));
    assert_eq!(modval(&["frobnicate"], dir.path()).status.code(), Some(2));

    // the printed cotangent identity fails when requested explicitly
    let bad = modval(&["run", "--check", "remark.xi_printed", "--digits", "30"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    let recs = parse_json(&String::from_utf8(bad.stdout).unwrap()).unwrap();
    assert!(matches!(&recs[0], Record::Check(c) if c.digits_matched < 2));
}

#[test]
fn json_report_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let o = modval(
        &["run", "--check", "thm1.1.rwz_f", "--check", "lemma2.1.e_eta15a", "--digits", "40", "--out", out.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let recs = parse_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(recs.len(), 3);
    match &recs[0] {
        Record::Check(c) => {
            assert_eq!(c.check_id, "thm1.1.rwz_f");
            assert!(c.lhs.starts_with("8.8045982535822981044968910894"));
            assert_eq!(c.digits_matched, 40);
        }
        r => panic!("{r:?}"),
    }
    assert!(matches!(&recs[2], Record::Summary(s) if s.passed == 2 && s.total == 2));

    let stat = String::from_utf8(modval(&["cache", "stat"], dir.path()).stdout).unwrap();
    let entries: usize = stat.lines().find_map(|l| l.strip_prefix("entries: ")).unwrap().parse().unwrap();
    assert!(entries >= 2, "{stat}");
    let cleared = modval(&["cache", "clear"], dir.path());
    assert_eq!(cleared.status.code(), Some(0));
    let stat = String::from_utf8(modval(&["cache", "stat"], dir.path()).stdout).unwrap();
    assert!(stat.contains("entries: 0"), "{stat}");
}

#[test]
fn eval_verb() {
    let dir = tempfile::tempdir().unwrap();
    let v = modval(&["eval", "t", "--tau", "0,0.28867513459481288225457439025", "--digits", "25"], dir.path());
    assert_eq!(v.status.code(), Some(0));
    // sqrt(-3)/6 is tau_3, where t = -2
    let s = String::from_utf8(v.stdout).unwrap();
    assert!(s.starts_with("-2.00000000000000000000"), "{s}");

    let l = modval(&["eval", "l", "--form", "g12", "--s", "2", "--digits", "20"], dir.path());
    assert!(String::from_utf8(l.stdout).unwrap().starts_with("7.372929961855962401"));

    let neg = modval(&["eval", "eta", "--tau", "-0.5,1", "--digits", "15"], dir.path());
    assert_eq!(neg.status.code(), Some(0));
    assert_eq!(modval(&["eval", "eta", "--digits", "15"], dir.path()).status.code(), Some(2));
    assert_eq!(modval(&["eval", "eta", "--tau", "0,-1"], dir.path()).status.code(), Some(2));
}

#[test]
fn list_verb() {
    let dir = tempfile::tempdir().unwrap();
    let o = modval(&["list"], dir.path());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), list_checks().len());
    assert!(text.contains("lemma2.1.e_f0a") && text.contains("E:f0a"));
}

#[test]
fn digits_matched_is_monotone_in_precision() {
    for id in ["thm1.1", "lemma2.1.e_eta3a", "lattice.e_i1in2", "mahler.m1", "direct.i0", "ode.torus_period"] {
        let c = find_check(id).unwrap();
        let lo = evaluate(c, 50, None).digits_matched;
        let hi = evaluate(c, 100, None).digits_matched;
        assert!(hi >= lo, "{id}: {lo} at 50, {hi} at 100");
    }
}
