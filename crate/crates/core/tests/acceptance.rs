use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use modval::cli::{evaluate, find_check, parse_json, CheckResult, Record, Status};
use modval::mpcore::make_context;

const DIGITS: u32 = 100;

/// Criteria whose statement is false as written; they are reported but do not
/// change the exit status.
const KNOWN_BLOCKED: &[u32] = &[12];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn run_check(id: &str, digits: u32) -> CheckResult {
    let c = find_check(id).unwrap_or_else(|| panic!("no check {id}"));
    evaluate(c, digits, None)
}

/// Every listed check reaches `min` digits at `digits`.
fn at_least(ids: &[&str], digits: u32, min: i64) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for id in ids {
        let r = run_check(id, digits);
        let ok = r.status != Status::Skipped && r.message.is_none() && r.digits_matched >= min;
        pass &= ok;
        let note = r.message.as_deref().map(|m| format!(" ({m})")).unwrap_or_default();
        parts.push(format!("{id}={}{note}", r.digits_matched));
    }
    Outcome { pass, detail: format!("need >= {min}: {}", parts.join(", ")) }
}

fn exact(ids: &[&str]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for id in ids {
        let r = run_check(id, DIGITS);
        pass &= r.status == Status::Pass;
        parts.push(format!("{id}: {} mismatches", r.abs_difference));
    }
    Outcome { pass, detail: parts.join(", ") }
}

fn all(list: Vec<Outcome>) -> Outcome {
    Outcome {
        pass: list.iter().all(|o| o.pass),
        detail: list.into_iter().map(|o| o.detail).collect::<Vec<_>>().join("; "),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut o = at_least(&["thm1.1"], DIGITS, 90);
    let secs = start.elapsed().as_secs_f64();
    o.pass &= secs < 60.0;
    o.detail.push_str(&format!(", {secs:.2} s"));
    o
}

fn criterion_2() -> Outcome {
    at_least(&["thm1.2.e_i2", "thm1.2.e_i3"], DIGITS, 90)
}

fn criterion_3() -> Outcome {
    let ids = [
        "lemma2.1.e_eta15a",
        "lemma2.1.e_eta15b",
        "lemma2.1.e_f2a",
        "lemma2.1.e_eta3a",
        "lemma2.1.e_eta3b",
        "lemma2.1.e_f2b",
        "lemma2.1.e_f0a",
    ];
    at_least(&ids, DIGITS, 90)
}

fn criterion_4() -> Outcome {
    let mut o = at_least(
        &["lemma3.2.e_f3a", "lemma3.2.e_f3b", "lemma3.2.e_f3c", "lemma3.2.e_f3d", "lemma3.2.chain"],
        DIGITS,
        90,
    );
    let n = run_check("lemma3.2.chain", DIGITS).relations;
    o.pass &= n >= 5;
    o.detail.push_str(&format!(", chain relations = {n}"));
    o
}

fn criterion_5() -> Outcome {
    all(vec![
        at_least(&["prop3.1.e_inv", "prop3.1.e_htran"], DIGITS, 90),
        at_least(&["prop3.1.e_int"], DIGITS, 60),
    ])
}

fn criterion_6() -> Outcome {
    all(vec![at_least(&["lattice.e_i1in2", "lattice.t_value"], DIGITS, 80), at_least(&["lattice.s_direct"], DIGITS, 12)])
}

fn criterion_7() -> Outcome {
    exact(&["eisenstein.e4_halfshift"])
}

fn criterion_8() -> Outcome {
    exact(&["newform.f15_dual", "newform.psi_g", "newform.psi_start"])
}

fn criterion_9() -> Outcome {
    exact(&["sym2.operator"])
}

fn criterion_10() -> Outcome {
    all(vec![at_least(&["ode.e_l3"], 200, 20), at_least(&["ode.torus_period"], DIGITS, 15)])
}

fn criterion_11() -> Outcome {
    let r = run_check("sym2.local_factors", DIGITS);
    Outcome { pass: r.status == Status::Pass, detail: r.lhs }
}

fn criterion_12() -> Outcome {
    let printed = run_check("remark.xi_printed", DIGITS);
    let mut o = at_least(&["remark.xi_printed", "remark.xi_tan"], DIGITS, 50);
    let corrected = run_check("remark.xi_corrected", DIGITS);
    o.detail.push_str(&format!(
        "; printed xi3 sum = {} vs {}; with arguments sqrt(-15)/3, sqrt(-15), sqrt(-15)/6+1/2, sqrt(-15)/2+1/2 it matches to {} digits",
        short(&printed.lhs),
        short(&printed.rhs),
        corrected.digits_matched
    ));
    o
}

fn short(s: &str) -> String {
    match s.split_once(" + ") {
        Some((_, im)) => {
            let (m, e) = im.trim_end_matches('i').split_once('e').unwrap_or((im, "0"));
            format!("{:.6}i", format!("{m}e{e}").parse::<f64>().unwrap_or(f64::NAN))
        }
        None => s.chars().take(12).collect(),
    }
}

fn criterion_13() -> Outcome {
    at_least(&["thm1.1.rwz_f", "thm1.2.rwz_g"], DIGITS, 85)
}

fn criterion_14() -> Outcome {
    all(vec![at_least(&["direct.i0"], DIGITS, 6), at_least(&["direct.i1", "direct.i_minus2"], DIGITS, 5)])
}

fn criterion_15() -> Outcome {
    use modval::feynman::{j_sunset, j_sunset_grid, mahler_linear5, rv_conjecture_rhs};
    let ctx = make_context(30).expect("context");
    let rv = (mahler_linear5(&ctx).expect("m5").to_f64() - rv_conjecture_rhs(&ctx).expect("rv").to_f64()).abs();
    let g = j_sunset_grid();
    let j8 = j_sunset(8.0, &g).expect("J(8)").to_f64();
    let j2 = j_sunset(2.0, &g).expect("J(2)").to_f64();
    let rel = ((j8 - 2.0 * j2) / j8).abs();
    let mut o = all(vec![
        at_least(&["mahler.m16", "mahler.m_minus32", "mahler.m_minus2", "mahler.m1", "mahler.m4"], DIGITS, 25),
        at_least(&["mahler.sunset"], DIGITS, 4),
    ]);
    o.pass &= rv <= 1e-6 && rel <= 1e-4;
    o.detail.push_str(&format!("; RV defect {rv:.2e}; |J(8)-2J(2)|/J(8) = {rel:.2e}"));
    o
}

fn criterion_16() -> Outcome {
    at_least(&["i64.real_part"], DIGITS, 50)
}

fn harness_run(jobs: usize, dir: &Path) -> Result<Vec<Record>, String> {
    let out = dir.join(format!("report-{jobs}.jsonl"));
    let status = Command::new(env!("CARGO_BIN_EXE_modval"))
        .args(["run", "--all", "--digits", "50", "--jobs", &jobs.to_string(), "--format", "json", "--out"])
        .arg(&out)
        .env("MODVAL_CACHE_DIR", dir.join(format!("cache-{jobs}")))
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("jobs={jobs} exited with {status}"));
    }
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let mut recs = parse_json(&text).map_err(|e| e.to_string())?;
    for r in &mut recs {
        match r {
            Record::Check(c) => c.runtime_ms = 0,
            Record::Summary(s) => {
                s.runtime_ms = 0;
                s.jobs = 0;
            }
        }
    }
    Ok(recs)
}

fn criterion_17() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    match (harness_run(4, dir.path()), harness_run(1, dir.path())) {
        (Ok(par), Ok(ser)) => {
            let n = par.iter().filter(|r| matches!(r, Record::Check(_))).count();
            let same = par == ser;
            Outcome {
                pass: same && n > 0,
                detail: format!("{n} check records, exit 0 twice, parallel and serial reports identical: {same}"),
            }
        }
        (a, b) => Outcome { pass: false, detail: format!("{:?} / {:?}", a.err(), b.err()) },
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 17] = [
        (1, "I(1) = 12pi/sqrt(15) L(f,2)", criterion_1),
        (2, "I(-32)+I(16) and I(16) = 2I(4) = 8(I(-2)-I(-32))", criterion_2),
        (3, "eta and Weber evaluations at CM points", criterion_3),
        (4, "F3 identities and intermediate relations", criterion_4),
        (5, "F3 transformations and integral representation", criterion_5),
        (6, "lattice sums S and T", criterion_6),
        (7, "E4 half-shift identity", criterion_7),
        (8, "dual construction of f and Psi = g", criterion_8),
        (9, "symmetric square operator", criterion_9),
        (10, "inhomogeneous ODE and torus period", criterion_10),
        (11, "symmetric square local factors", criterion_11),
        (12, "cotangent series identities", criterion_12),
        (13, "closed forms of L(f,2) and L(g,2)", criterion_13),
        (14, "direct integration", criterion_14),
        (15, "Mahler measures, sunset and RV", criterion_15),
        (16, "real part of I(64)", criterion_16),
        (17, "harness determinism", criterion_17),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let start = Instant::now();
        let o = f();
        let blocked = KNOWN_BLOCKED.contains(&n);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && blocked { " [known: statement false as written]" } else { "" };
        println!("{tag} criterion {n:>2} {name}{note} ({:.1} s): {}", start.elapsed().as_secs_f64(), o.detail);
        if !o.pass && !blocked {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
