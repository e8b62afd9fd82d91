use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;

use super::cache::Cache;
use super::registry::{find_check, registry, Check, CheckEnv, Evidence};
use super::report::{CheckResult, Status, Summary};
use crate::eichler::Relation;
use crate::mpcore::{make_context, ApproxComplex};
use crate::{Error, Result};

/// Which checks a run covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    Ids(Vec<String>),
}

/// Resolves a selection to (check, should run) pairs in registry order for
/// `All` and in the given order otherwise.
pub fn resolve(sel: &Selection) -> Result<Vec<(&'static Check, bool)>> {
    match sel {
        Selection::All => Ok(registry().iter().map(|c| (c, c.in_all)).collect()),
        Selection::Ids(ids) => ids
            .iter()
            .map(|id| find_check(id).map(|c| (c, true)).ok_or_else(|| Error::Unknown { kind: "check", name: id.clone() }))
            .collect(),
    }
}

fn value_digits(z: &ApproxComplex, requested: u32) -> usize {
    let cap = (z.prec() as f64 * std::f64::consts::LOG10_2).floor() as usize;
    cap.min(requested as usize).max(1)
}

fn show(z: &ApproxComplex, requested: u32) -> String {
    let d = value_digits(z, requested);
    if z.mid().imag().is_zero() {
        z.re().to_decimal(d)
    } else {
        z.to_decimal(d)
    }
}

fn show_relation(r: &Relation, requested: u32) -> (String, String, String) {
    let diff = r.lhs.abs_diff(&r.rhs);
    let d = if diff.is_zero() { "0".to_string() } else { format!("{:.6e}", diff) };
    (show(&r.lhs, requested), show(&r.rhs, requested), d)
}

fn panic_text(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".to_string())
}

/// Evaluates one check; errors and panics become failures.
pub fn evaluate(check: &Check, digits: u32, cache: Option<&Cache>) -> CheckResult {
    let threshold = check.threshold.digits(digits);
    let mut res = CheckResult {
        check_id: check.id.to_string(),
        anchor: check.anchor.to_string(),
        lhs: String::new(),
        rhs: String::new(),
        abs_difference: String::new(),
        digits_matched: 0,
        threshold,
        threshold_rule: check.threshold.to_string(),
        relation: String::new(),
        relations: 0,
        runtime_ms: 0,
        status: Status::Fail,
        message: None,
    };
    let start = Instant::now();
    let outcome = match make_context(digits) {
        Ok(ctx) => {
            let env = CheckEnv::new(ctx, cache);
            catch_unwind(AssertUnwindSafe(|| check.evaluate(&env))).unwrap_or_else(|p| Err(Error::Inconsistent(format!("panic: {}", panic_text(&*p)))))
        }
        Err(e) => Err(e),
    };
    res.runtime_ms = start.elapsed().as_millis() as u64;
    match outcome {
        Err(e) => res.message = Some(e.to_string()),
        Ok(Evidence::Numeric(rels)) => match rels.iter().min_by_key(|r| r.digits()) {
            None => res.message = Some("check produced no relations".to_string()),
            Some(worst) => {
                (res.lhs, res.rhs, res.abs_difference) = show_relation(worst, digits);
                res.digits_matched = worst.digits().min(digits as i64);
                res.relation = worst.name.to_string();
                res.relations = rels.len();
                res.status = if res.digits_matched >= threshold { Status::Pass } else { Status::Fail };
            }
        },
        Ok(Evidence::Exact { lhs, rhs, mismatches }) => {
            res.lhs = lhs;
            res.rhs = rhs;
            res.abs_difference = mismatches.to_string();
            res.relation = "exact".to_string();
            res.relations = 1;
            if mismatches == 0 {
                res.digits_matched = digits as i64;
                res.status = Status::Pass;
            } else {
                res.message = Some(format!("{mismatches} mismatches"));
            }
        }
    }
    res
}

fn skipped(check: &Check, digits: u32) -> CheckResult {
    CheckResult {
        check_id: check.id.to_string(),
        anchor: check.anchor.to_string(),
        lhs: String::new(),
        rhs: String::new(),
        abs_difference: String::new(),
        digits_matched: 0,
        threshold: check.threshold.digits(digits),
        threshold_rule: check.threshold.to_string(),
        relation: String::new(),
        relations: 0,
        runtime_ms: 0,
        status: Status::Skipped,
        message: Some(format!("excluded from --all; run with --check {}", check.id)),
    }
}

/// Runs the selection on a pool of `jobs` workers. Results keep selection order.
pub fn run_checks(sel: &Selection, digits: u32, jobs: usize, cache: Option<&Cache>) -> Result<(Vec<CheckResult>, Summary)> {
    if digits < 10 {
        return Err(Error::PrecisionTooLow(digits));
    }
    if jobs == 0 {
        return Err(Error::Domain("jobs must be at least 1".to_string()));
    }
    let checks = resolve(sel)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Domain(format!("worker pool: {e}")))?;
    let start = Instant::now();
    let results: Vec<CheckResult> = pool.install(|| {
        checks
            .par_iter()
            .with_max_len(1)
            .map(|(c, go)| if *go { evaluate(c, digits, cache) } else { skipped(c, digits) })
            .collect()
    });
    let summary = Summary::from_results(&results, digits, jobs, start.elapsed().as_millis() as u64);
    Ok((results, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_ids_are_rejected() {
        assert!(matches!(resolve(&Selection::Ids(vec!["bogus".into()])), Err(Error::Unknown { .. })));
        assert!(run_checks(&Selection::All, 5, 1, None).is_err());
        assert!(run_checks(&Selection::All, 20, 0, None).is_err());
    }

    #[test]
    fn single_check_passes() {
        let (r, s) = run_checks(&Selection::Ids(vec!["lemma2.1.e_f0a".into(), "sym2.operator".into()]), 30, 2, None).unwrap();
        assert_eq!(r[0].check_id, "lemma2.1.e_f0a");
        assert_eq!(r[1].check_id, "sym2.operator");
        assert!(r.iter().all(|x| x.status == Status::Pass), "{r:?}");
        assert_eq!(s.passed, 2);
        assert!(r[0].lhs.starts_with("1.2599210498"));
    }

    #[test]
    fn skipped_checks_only_under_all() {
        let sel = Selection::Ids(vec!["remark.xi_printed".into()]);
        let (r, _) = run_checks(&sel, 20, 1, None).unwrap();
        assert_ne!(r[0].status, Status::Skipped);
        let all = resolve(&Selection::All).unwrap();
        assert!(all.iter().any(|(c, go)| c.id == "remark.xi_printed" && !go));
    }
}
