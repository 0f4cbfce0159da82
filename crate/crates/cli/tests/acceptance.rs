//! Runs every acceptance criterion on the shipped corpus and prints one
//! PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bidisc::scenario::{Corpus, Tolerances, DEFAULT_SEED};
use bidisc_cli::verify::Suite;

/// Wall-clock budgets per criterion, where one is stated.
fn budget(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(5)),
        2 => Some(Duration::from_secs(10)),
        5 => Some(Duration::from_secs(30)),
        9 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

fn corpus_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/default")
}

/// Runs `bidisc verify --json` twice and compares the bytes.
fn binary_is_reproducible() -> Result<(), String> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_bidisc"))
            .args(["verify", "--json"])
            .arg(corpus_dir())
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() {
        return Err(format!("verify exited with {}", a.status));
    }
    if a.stdout != b.stdout {
        return Err("two verify runs printed different JSON".into());
    }
    Ok(())
}

fn main() {
    let corpus = Corpus::load(&corpus_dir()).expect("shipped corpus loads");
    let suite = Suite::new(corpus, Tolerances::default(), DEFAULT_SEED);
    let mut failures = 0;
    for id in 1..=10u8 {
        let start = Instant::now();
        let result = suite.run(id);
        let elapsed = start.elapsed();
        let mut passed = result.passed;
        let mut detail = result.detail.clone();
        if let Some(limit) = budget(id) {
            if elapsed > limit {
                passed = false;
                detail.push_str(&format!("; took {elapsed:.2?}, budget {limit:?}"));
            }
        }
        if id == 10 {
            if let Err(e) = binary_is_reproducible() {
                passed = false;
                detail.push_str(&format!("; {e}"));
            } else {
                detail.push_str("; two binary runs byte-identical");
            }
        }
        failures += usize::from(!passed);
        println!(
            "criterion {id:>2} {:<26} {} ({elapsed:.2?}) {detail}",
            result.name,
            if passed { "PASS" } else { "FAIL" }
        );
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
