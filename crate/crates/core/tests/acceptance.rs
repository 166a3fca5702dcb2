//! Acceptance run: one line per criterion, nonzero exit if any fails.
//! Runs without the libtest harness so the lines always reach the terminal.

use kbessel::verify::{run_suite, Suite};

fn main() {
    let mut failed = Vec::new();
    for (i, suite) in Suite::ACCEPTANCE.iter().enumerate() {
        let n = i + 1;
        match run_suite(*suite) {
            Ok(rep) => {
                let worst = rep
                    .headline()
                    .map(|r| format!("{} {}={:.3e} (bound {:.3e})", r.case, r.metric, r.value, r.bound.unwrap()))
                    .unwrap_or_default();
                let status = if rep.pass { "PASS" } else { "FAIL" };
                println!(
                    "criterion {n:>2} [{}] {status}  {}; worst: {worst}; {:.1}s",
                    suite.name(),
                    suite.describe(),
                    rep.seconds
                );
                for row in rep.rows.iter().filter(|r| !r.pass) {
                    println!("    failing: {} {}={:.3e}", row.case, row.metric, row.value);
                }
                if !rep.pass {
                    failed.push(n);
                }
            }
            Err(e) => {
                println!("criterion {n:>2} [{}] FAIL  error: {e}", suite.name());
                failed.push(n);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", Suite::ACCEPTANCE.len());
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
