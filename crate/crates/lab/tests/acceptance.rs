//! Acceptance criteria 1-10, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use wva_lab::checks::{self, CheckResult, VERIFY_IDS};
use wva_lab::registry;

const BUDGET: Duration = Duration::from_secs(300);

/// Everything `wva-lab verify` and the scenario runs produce, rendered.
fn full_pass() -> Result<Vec<String>, String> {
    let mut artifacts = Vec::new();
    for &id in VERIFY_IDS {
        let r = checks::run(id);
        artifacts.push(format!("{}:{}", r.id, r.passed));
    }
    for s in registry() {
        let cfg = s.default_config();
        let out = s.run(&cfg).map_err(|e| format!("{}: {e}", s.id))?;
        let mut text = s.render(&cfg, &out);
        for line in out.summary.lines() {
            text.push_str(&line);
            text.push('\n');
        }
        artifacts.push(text);
    }
    Ok(artifacts)
}

fn determinism_and_runtime() -> CheckResult {
    let start = Instant::now();
    let first = full_pass();
    let once = start.elapsed();
    let second = full_pass();
    let (passed, detail) = match (first, second) {
        (Ok(a), Ok(b)) => {
            let identical = a == b;
            (
                identical && once < BUDGET,
                format!(
                    "verify + {} scenarios in {:.1} s (< 300 s); second run byte-identical: {identical}",
                    registry().len(),
                    once.as_secs_f64()
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => (false, format!("error: {e}")),
    };
    CheckResult {
        id: 10,
        title: "determinism and runtime",
        passed,
        detail,
    }
}

fn main() -> ExitCode {
    let mut results: Vec<CheckResult> = (1..=9).map(checks::run).collect();
    results.push(determinism_and_runtime());
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!(
        "acceptance: {}/{} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
