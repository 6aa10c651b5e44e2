//! One line per acceptance criterion.
//!
//! All identities are exact (tolerance zero). Criteria 4, 7 and 8 contain
//! checks of formulas exactly as printed in the source, which do not hold;
//! they are pinned as expected failures, and the test insists that every
//! other check in them passes.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use ncprob::acceptance::{run_criterion, Bundle, CriterionResult, Mode, CRITERIA, DEFAULT_SEED};

/// Exact comparison everywhere: no numeric tolerance is used.
const TOLERANCE: u32 = 0;
const SELFTEST_LIMIT: Duration = Duration::from_secs(600);

/// Criteria that fail because a printed formula is wrong, with the identity
/// fragments that are allowed to fail.
const EXPECTED_FAILURES: [(usize, &str); 3] = [
    (4, "μ(π, 1₃) = printed"),
    (7, "(as printed)"),
    (8, "(as printed)"),
];

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn allowed(id: usize) -> Option<&'static str> {
    EXPECTED_FAILURES.iter().find(|(c, _)| *c == id).map(|(_, f)| *f)
}

fn check(c: &CriterionResult) -> Result<(), String> {
    let unexpected: Vec<String> = c
        .reports
        .iter()
        .flat_map(|r| r.failures.iter().map(move |f| (r, f)))
        .filter(|(_, f)| allowed(c.id).is_none_or(|frag| !f.identity.contains(frag)))
        .map(|(r, f)| format!("{}: {}", r.name, f.identity))
        .collect();
    if !unexpected.is_empty() {
        return Err(format!("criterion {}: unexpected failures {unexpected:?}", c.id));
    }
    match (allowed(c.id), c.pass) {
        (Some(_), true) => Err(format!("criterion {} was expected to fail on a printed formula", c.id)),
        _ => Ok(()),
    }
}

#[test]
fn acceptance() {
    assert_eq!(TOLERANCE, 0);
    let bundle = Bundle::load(&fixtures()).expect("fixtures load");
    let mut problems = Vec::new();
    for id in CRITERIA {
        let c = run_criterion(id, Mode::Full, DEFAULT_SEED, &bundle).expect("criterion runs");
        println!("{}", c.line());
        if let Err(e) = check(&c) {
            problems.push(e);
        }
    }

    let bin = env!("CARGO_BIN_EXE_ncprob");
    let run = || {
        let start = Instant::now();
        let out = Command::new(bin).args(["selftest", "--format", "json", "--fixtures"]).arg(fixtures()).output().unwrap();
        (out, start.elapsed())
    };
    let (first, t1) = run();
    let (second, t2) = run();
    let deterministic = first.stdout == second.stdout;
    let fast = t1.max(t2) < SELFTEST_LIMIT;
    // exit 1: the expected failures above are reported, not masked
    let code = first.status.code() == Some(1);
    let pass = deterministic && fast && code;
    println!(
        "criterion 10 [{}] selftest end to end (identical JSON: {deterministic}, {:.1}s and {:.1}s under {}s, exit {:?})",
        if pass { "PASS" } else { "FAIL" },
        t1.as_secs_f64(),
        t2.as_secs_f64(),
        SELFTEST_LIMIT.as_secs(),
        first.status.code()
    );
    if !pass {
        problems.push("criterion 10".into());
    }
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let failing: Vec<u64> = v["criteria"].as_array().unwrap().iter().filter(|c| c["pass"] == false).map(|c| c["id"].as_u64().unwrap()).collect();
    if failing != [4, 7, 8] {
        problems.push(format!("selftest failing set {failing:?}"));
    }
    assert!(problems.is_empty(), "{problems:#?}");
}
